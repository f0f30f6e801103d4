#include "doctest.h"
#include "sinkguard/attackers.hpp"
#include "support.hpp"

using namespace sinkguard;

namespace {

SimTime at(double s) { return SimTime::from_seconds(s); }

SinkholeBehavior lying_rank_zero(double start, double interval) {
  SinkholeBehavior b;
  b.advertised_rank = Rank{0};
  b.attack_start = at(start);
  b.attack_interval = at(interval);
  return b;
}

}  // namespace

TEST_CASE("sinkhole DIO emission") {
  const auto b = lying_rank_zero(100, 4);
  SUBCASE("at attack start it claims rank zero") {
    const auto dio = sinkhole_emit_dio(b, 5, at(100));
    REQUIRE(dio);
    CHECK(dio->advertised_rank.value == 0);
    CHECK(dio->sender_id == 5);
    CHECK(dio->malicious);
  }
  SUBCASE("nothing before the attack or off the grid") {
    CHECK_FALSE(sinkhole_emit_dio(b, 5, at(99.999)));
    CHECK_FALSE(sinkhole_emit_dio(b, 5, at(0)));
    CHECK_FALSE(sinkhole_emit_dio(b, 5, at(101)));
    CHECK(sinkhole_emit_dio(b, 5, at(104)));
  }
  SUBCASE("a 4 s interval yields 250 lies over 1000 s") {
    // Millisecond scan of the attack window, independent of the grid helper.
    int count = 0;
    for (std::int64_t ms = 100'000; ms < 1'100'000; ++ms)
      if (sinkhole_emit_dio(b, 5, SimTime{ms * 1000})) ++count;
    CHECK(count == 250);
  }
  SUBCASE("next grid point") {
    CHECK(next_malicious_dio(b, at(0)) == at(100));
    CHECK(next_malicious_dio(b, at(100)) == at(100));
    CHECK(next_malicious_dio(b, at(100.5)) == at(104));
    CHECK(next_malicious_dio(b, at(108)) == at(108));
  }
  SUBCASE("advertised rank is configurable") {
    auto c = *preset("scenario1_small");
    c.sinkhole_advertised_rank = 1;
    const auto dio = sinkhole_emit_dio(sinkhole_behavior(c), 3, at(c.attack_start()));
    REQUIRE(dio);
    CHECK(dio->advertised_rank.value == 1);
  }
}

TEST_CASE("sinkhole data plane") {
  DataPacket p{3, 7, SimTime{}, 2, false};
  SUBCASE("drop mode") {
    CHECK(sinkhole_handle_data(SinkholeMode::Drop, p) == SinkholeAction::Dropped);
  }
  SUBCASE("alter mode corrupts and forwards") {
    CHECK(sinkhole_handle_data(SinkholeMode::Alter, p) == SinkholeAction::Altered);
    CHECK(p.corrupt);
    CHECK(p.src == 3);
    CHECK(p.seq == 7);
  }
}

TEST_CASE("flooder RREQ emission") {
  const FlooderBehavior f{10.0, at(20)};
  CHECK(flooder_emit_rreqs(f, at(20), at(22)) == 20);
  CHECK(flooder_emit_rreqs(f, at(30), at(31)) == 10);
  CHECK(flooder_emit_rreqs(f, at(0), at(20)) == 0);
  CHECK(flooder_emit_rreqs(f, at(19.5), at(20.5)) == 5);
  CHECK(flooder_emit_rreqs(f, at(25), at(25)) == 0);
}

TEST_CASE("benign RREQ counts telescope") {
  // Summing consecutive windows equals one window over the whole span.
  for (double rate : {0.0, 0.3, 1.0, 2.5}) {
    std::uint64_t total = 0;
    for (int i = 0; i < 137; ++i) total += benign_rreq_count(rate, at(0.7 * i), at(0.7 * (i + 1)));
    CHECK(total == benign_rreq_count(rate, at(0), at(0.7 * 137)));
    CHECK(total == static_cast<std::uint64_t>(std::floor(rate * 0.7 * 137 + 1e-9)));
  }
  CHECK(benign_rreq_count(1.0, at(0), at(1)) == 1);
}

TEST_CASE("a flooder no faster than benign nodes is rejected") {
  CHECK_THROWS_AS(check_flooder(FlooderBehavior{1.0, {}}, 1.0), Error);
  CHECK_NOTHROW(check_flooder(FlooderBehavior{1.5, {}}, 1.0));
  CHECK_THROWS_AS(parse_config("flooder_rreq_rate = 1\nbenign_rreq_rate = 1\n"), Error);
}
