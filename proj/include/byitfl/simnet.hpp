#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "byitfl/wire.hpp"

namespace byitfl {

constexpr int kFederator = 0;
constexpr int kBroadcast = -1;

struct Message {
  int round = 0;
  int sender = 0;
  int receiver = 0;  // kBroadcast for ideal broadcast
  std::string kind;
  std::vector<std::uint8_t> payload;
};

// Synchronous network: messages submitted during a round are delivered
// atomically at the barrier.  Broadcast delivers identical bytes to every
// party and the federator.  Every delivery is appended to the transcript.
class Network {
 public:
  explicit Network(int n_users) : n_(n_users) {}

  int round() const { return round_; }
  int users() const { return n_; }

  void submit(int sender, int receiver, const std::string& kind,
              std::vector<std::uint8_t> payload);

  // A dropped party's submissions are discarded from this round onward.
  void drop(int party) { dropped_.insert(party); }
  bool is_dropped(int party) const { return dropped_.count(party) > 0; }

  // Barrier: deliver all pending messages, advance the round counter, and
  // return per-party inboxes (keyed by receiver; broadcasts fan out).
  std::map<int, std::vector<Message>> deliver_round();

  const std::vector<Message>& transcript() const { return log_; }

  // All messages received by any member of `parties` (their collusion view);
  // broadcasts are part of every view.
  std::vector<Message> view_of(const std::set<int>& parties) const;

  std::vector<std::uint8_t> serialize_transcript() const;
  static std::vector<Message> parse_transcript(
      const std::vector<std::uint8_t>& bytes);

 private:
  int n_;
  int round_ = 0;
  std::vector<Message> pending_;
  std::vector<Message> log_;  // delivery log, append-only
  std::set<int> dropped_;
};

}  // namespace byitfl
