#include "byitfl/simnet.hpp"

#include <algorithm>

namespace byitfl {

void Network::submit(int sender, int receiver, const std::string& kind,
                     std::vector<std::uint8_t> payload) {
  if (dropped_.count(sender)) return;
  Message m;
  m.round = round_;
  m.sender = sender;
  m.receiver = receiver;
  m.kind = kind;
  m.payload = std::move(payload);
  pending_.push_back(std::move(m));
}

std::map<int, std::vector<Message>> Network::deliver_round() {
  // Deterministic delivery order: by sender, then receiver, then kind.
  std::stable_sort(pending_.begin(), pending_.end(),
                   [](const Message& a, const Message& b) {
                     if (a.sender != b.sender) return a.sender < b.sender;
                     if (a.receiver != b.receiver) return a.receiver < b.receiver;
                     return a.kind < b.kind;
                   });
  std::map<int, std::vector<Message>> inboxes;
  for (auto& m : pending_) {
    log_.push_back(m);
    if (m.receiver == kBroadcast) {
      for (int p = 0; p <= n_; ++p)
        if (p != m.sender) inboxes[p].push_back(m);
    } else {
      inboxes[m.receiver].push_back(m);
    }
  }
  pending_.clear();
  ++round_;
  return inboxes;
}

std::vector<Message> Network::view_of(const std::set<int>& parties) const {
  std::vector<Message> out;
  for (const auto& m : log_) {
    if (m.receiver == kBroadcast || parties.count(m.receiver))
      out.push_back(m);
  }
  return out;
}

std::vector<std::uint8_t> Network::serialize_transcript() const {
  ByteWriter w;
  w.u32(static_cast<std::uint32_t>(log_.size()));
  for (const auto& m : log_) {
    w.u32(static_cast<std::uint32_t>(m.round));
    w.i64(m.sender);
    w.i64(m.receiver);
    w.str(m.kind);
    w.bytes(m.payload);
  }
  return w.take();
}

std::vector<Message> Network::parse_transcript(
    const std::vector<std::uint8_t>& bytes) {
  ByteReader r(bytes);
  std::uint32_t n = r.u32();
  std::vector<Message> out;
  out.reserve(n);
  for (std::uint32_t i = 0; i < n; ++i) {
    Message m;
    m.round = static_cast<int>(r.u32());
    m.sender = static_cast<int>(r.i64());
    m.receiver = static_cast<int>(r.i64());
    m.kind = r.str();
    m.payload = r.bytes();
    out.push_back(std::move(m));
  }
  return out;
}

}  // namespace byitfl
