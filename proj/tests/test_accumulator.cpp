#include <doctest.h>

#include "aaa/accumulator.hpp"
#include "aaa/errors.hpp"
#include "aaa/source.hpp"

using namespace aaa;

TEST_SUITE("accumulator") {
  TEST_CASE("single update from zero") {
    const auto k = aaa_update(KeyState(2), std::vector<std::uint8_t>{1, 0});
    CHECK(k.bits() == std::vector<std::uint8_t>{1, 0});
    CHECK(k.epoch() == 1);
    CHECK_THROWS_AS(aaa_update(k, std::vector<std::uint8_t>{1}), ProtocolError);
  }

  TEST_CASE("updating twice with one column is an involution") {
    Rng rng(1);
    for (int t = 0; t < 50; ++t) {
      const std::size_t len = 1 + rng.next_u64() % 150;
      KeyState s(len);
      std::vector<std::uint8_t> c(len);
      for (int warm = 0; warm < 3; ++warm) {
        for (auto& b : c) b = rng.bit();
        s = aaa_update(s, c);
      }
      for (auto& b : c) b = rng.bit();
      const auto twice = aaa_update(aaa_update(s, c), c);
      CHECK(twice.bits() == s.bits());
      CHECK(twice.epoch() == s.epoch() + 2);
    }
  }

  TEST_CASE("accumulate equals per-row parity and sequential replay") {
    Rng rng(2);
    const auto x = gen_iid_bits(4, 7, rng);
    const auto k = aaa_accumulate(x);
    KeyState replay(4);
    for (std::size_t i = 0; i < 7; ++i) replay = aaa_update(replay, x.column(i));
    CHECK(k == replay);
    for (std::size_t l = 0; l < 4; ++l) CHECK(k.bit(l) == xor_fold(x.row(l)));
    CHECK(aaa_accumulate(BitMatrix::from_rows({{1, 1, 0}})).bits() == std::vector<std::uint8_t>{0});
    const auto zero = aaa_accumulate(BitMatrix(5, 0));
    CHECK(zero.epoch() == 0);
    CHECK(zero.bits() == std::vector<std::uint8_t>(5, 0));
  }

  TEST_CASE("packed update matches bitwise update") {
    Rng rng(3);
    const auto x = gen_iid_bits(130, 5, rng);
    KeyState a(130), b(130);
    for (std::size_t i = 0; i < 5; ++i) {
      a = aaa_update(a, x.column(i));
      b = aaa_update_packed(b, x.column_words(i));
    }
    CHECK(a == b);
  }

  TEST_CASE("reinit resets") {
    const auto x = gen_iid_bits(3, 6, 4);
    auto s = aaa_accumulate(x);
    s = aaa_reinit(s);
    CHECK(s.epoch() == 0);
    CHECK(s.bits() == std::vector<std::uint8_t>(3, 0));
    for (std::size_t i = 0; i < 6; ++i) s = aaa_update(s, x.column(i));
    CHECK(s == aaa_accumulate(x));
  }

  TEST_CASE("hex rendering") {
    CHECK(aaa_update(KeyState(4), std::vector<std::uint8_t>{1, 0, 1, 0}).to_hex() == "a");
    CHECK(aaa_update(KeyState(5), std::vector<std::uint8_t>{1, 0, 0, 0, 1}).to_hex() == "11");
  }

  TEST_CASE("partition accumulation") {
    const auto x = BitMatrix::from_rows({{1, 0}});
    CHECK(partition_accumulate(x, {{0}, {1}}) == BitMatrix::from_rows({{1, 0}}));
    const auto y = BitMatrix::from_rows({{1, 0, 1, 1}});
    CHECK(partition_accumulate(y, {{0, 1}, {2, 3}}) == BitMatrix::from_rows({{1, 0}}));
    const auto z = gen_iid_bits(3, 6, 8);
    const auto whole = partition_accumulate(z, {{0, 1, 2, 3, 4, 5}});
    CHECK(whole.column(0) == aaa_accumulate(z).bits());
    CHECK_THROWS_AS(partition_accumulate(y, {{0, 1}, {1, 2}}), ConfigError);
    CHECK_THROWS_AS(partition_accumulate(y, {{4}}), ConfigError);
  }
}
