#include <doctest.h>

#include "byitfl/simnet.hpp"

using namespace byitfl;

namespace {
std::vector<std::uint8_t> bytes(std::initializer_list<int> v) {
  return std::vector<std::uint8_t>(v.begin(), v.end());
}
}  // namespace

TEST_CASE("delivery is atomic, ordered, and round-stamped") {
  Network net(3);
  net.submit(2, 1, "b", bytes({2}));
  net.submit(1, 2, "a", bytes({1}));
  net.submit(1, 2, "a", bytes({9}));  // same keys: submission order kept
  auto inboxes = net.deliver_round();
  REQUIRE(inboxes[1].size() == 1);
  REQUIRE(inboxes[2].size() == 2);
  CHECK(inboxes[2][0].payload == bytes({1}));
  CHECK(inboxes[2][1].payload == bytes({9}));
  CHECK(inboxes[1][0].round == 0);
  CHECK(net.round() == 1);
  CHECK(net.deliver_round().empty());
}

TEST_CASE("broadcast fans out to everyone but the sender") {
  Network net(3);
  net.submit(1, kBroadcast, "bc", bytes({7}));
  auto inboxes = net.deliver_round();
  CHECK(inboxes.count(kFederator) == 1);
  CHECK(inboxes.count(2) == 1);
  CHECK(inboxes.count(3) == 1);
  CHECK(inboxes.count(1) == 0);
  CHECK(inboxes[2][0].payload == bytes({7}));

  net.submit(kFederator, kBroadcast, "down", bytes({8}));
  auto second = net.deliver_round();
  for (int p = 1; p <= 3; ++p) CHECK(second.count(p) == 1);
  CHECK(second.count(kFederator) == 0);
}

TEST_CASE("dropped parties are silenced from the drop round onward") {
  Network net(2);
  net.drop(1);
  net.submit(1, 2, "x", bytes({1}));
  net.submit(1, 2, "x", bytes({2}));
  auto inboxes = net.deliver_round();
  CHECK(inboxes.count(2) == 0);  // submissions after the drop are discarded
  CHECK(net.is_dropped(1));
  net.submit(2, 1, "y", bytes({3}));
  CHECK(net.deliver_round()[1].size() == 1);  // others unaffected
}

TEST_CASE("transcript records deliveries and survives serialization") {
  Network net(2);
  net.submit(1, 2, "m", bytes({1, 2, 3}));
  net.submit(2, kBroadcast, "n", bytes({4}));
  net.deliver_round();
  net.submit(2, 1, "o", bytes({5}));
  net.deliver_round();
  const auto& log = net.transcript();
  REQUIRE(log.size() == 3);
  CHECK(log[2].kind == "o");

  auto blob = net.serialize_transcript();
  auto back = Network::parse_transcript(blob);
  REQUIRE(back.size() == log.size());
  for (std::size_t i = 0; i < log.size(); ++i) {
    CHECK(back[i].round == log[i].round);
    CHECK(back[i].sender == log[i].sender);
    CHECK(back[i].receiver == log[i].receiver);
    CHECK(back[i].kind == log[i].kind);
    CHECK(back[i].payload == log[i].payload);
  }
}

TEST_CASE("collusion views contain exactly broadcasts plus own mail") {
  Network net(3);
  net.submit(1, 2, "private12", bytes({1}));
  net.submit(1, 3, "private13", bytes({2}));
  net.submit(2, kBroadcast, "public", bytes({3}));
  net.deliver_round();
  auto view = net.view_of({3});
  REQUIRE(view.size() == 2);
  CHECK(view[0].kind == "private13");
  CHECK(view[1].kind == "public");
  auto both = net.view_of({2, 3});
  CHECK(both.size() == 3);
}

TEST_CASE("identical submissions give byte-identical transcripts") {
  auto run = [] {
    Network net(4);
    for (int r = 0; r < 3; ++r) {
      for (int s = 1; s <= 4; ++s)
        net.submit(s, (s % 4) + 1, "k" + std::to_string(r), bytes({s, r}));
      net.submit(2, kBroadcast, "b", bytes({r}));
      net.deliver_round();
    }
    return net.serialize_transcript();
  };
  CHECK(run() == run());
}
