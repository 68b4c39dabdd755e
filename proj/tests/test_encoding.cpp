#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdint>
#include <random>
#include <stdexcept>

#include "charvoc/encoding.hpp"
#include "charvoc/rng.hpp"

using namespace charvoc;

namespace {

// Independent oracle for the reflected binary code.
std::uint64_t gray_oracle(std::uint64_t m) { return m ^ (m >> 1); }

}  // namespace

TEST_CASE("roundoff matches the piecewise definition") {
  CHECK(roundoff(3.6, 0) == 4);
  CHECK(roundoff(3.9, 0) == 4);
  CHECK(roundoff(0.0, 3) == 0);
  // Exact decimal scaling gives -1234.56, half away from zero -> -1235.
  CHECK(roundoff(-0.123456, 4) == -1235);
}

TEST_CASE("roundoff is half away from zero and symmetric") {
  CHECK(roundoff(0.5, 0) == 1);
  CHECK(roundoff(-0.5, 0) == -1);
  CHECK(roundoff(2.5, 0) == 3);
  CHECK(roundoff(-2.5, 0) == -3);
  CHECK(roundoff(0.36, 1) == 4);
  CHECK(roundoff(-0.36, 1) == -4);
  std::mt19937_64 gen(11);
  Sampler sampler(gen);
  for (int i = 0; i < 2000; ++i) {
    const double x = (sampler.uniform() - 0.5) * 200.0;
    const std::uint32_t p = static_cast<std::uint32_t>(sampler.below(6));
    CHECK(roundoff(-x, p) == -roundoff(x, p));
  }
}

TEST_CASE("roundoff non-injectivity witness") {
  // The unrecoverability premise: distinct inputs with a shared image.
  CHECK(roundoff(3.6, 0) == roundoff(3.9, 0));
  CHECK(3.6 != 3.9);
}

TEST_CASE("roundoff error paths") {
  CHECK_THROWS_AS(roundoff(std::numeric_limits<double>::quiet_NaN(), 0),
                  std::domain_error);
  CHECK_THROWS_AS(roundoff(std::numeric_limits<double>::infinity(), 0),
                  std::domain_error);
  CHECK_THROWS_AS(roundoff(1e19, 0), std::range_error);
  CHECK_THROWS_AS(roundoff(1.0, 25), std::range_error);
  CHECK(roundoff(9.0e18, 0) == 9000000000000000000LL);
}

TEST_CASE("gray_encode examples") {
  CHECK(gray_encode(0, 4) == 0);
  CHECK(gray_encode(5, 3) == 0b111);   // 5 ^ 2 == 7
  CHECK(gray_encode(12, 4) == 0b1010); // 12 ^ 6 == 10
  CHECK(format_bits(gray_encode(12, 4), 4) == "1010");
  CHECK_THROWS_AS(gray_encode(8, 3), std::range_error);
  CHECK_THROWS_AS(gray_encode(0, 0), std::invalid_argument);
}

TEST_CASE("gray_decode examples") {
  CHECK(gray_decode(std::string_view("0000")) == 0);
  CHECK(gray_decode(std::string_view("111")) == 5);
  CHECK(gray_decode(std::string_view("1010")) == 12);
  CHECK_THROWS_AS(gray_decode(std::string_view("")), std::invalid_argument);
  CHECK_THROWS_AS(gray_decode(std::string_view("10x")), std::invalid_argument);
}

TEST_CASE("gray round-trip and adjacency, exhaustive for l <= 12") {
  for (std::uint32_t l = 1; l <= 12; ++l) {
    const std::uint64_t top = std::uint64_t{1} << l;
    for (std::uint64_t m = 0; m < top; ++m) {
      const std::uint64_t g = gray_encode(m, l);
      CHECK(g == gray_oracle(m));
      CHECK(gray_decode(g) == m);
      if (m + 1 < top) {
        const std::uint64_t diff = g ^ gray_encode(m + 1, l);
        CHECK((diff != 0 && (diff & (diff - 1)) == 0));  // exactly one bit
      }
    }
  }
}

TEST_CASE("clamp_magnitude saturates") {
  CHECK(clamp_magnitude(7, 3) == 7);
  CHECK(clamp_magnitude(8, 3) == 7);
  CHECK(clamp_magnitude(0, 3) == 0);
  CHECK(clamp_magnitude(~std::uint64_t{0}, 62) == (std::uint64_t{1} << 62) - 1);
}

TEST_CASE("binarize block layout") {
  SchemeParams params{.precision_p = 1, .bits_l = 3, .dim_d = 1};
  // roundoff(0.36, 1) = 4, gray(4) = 4 ^ 2 = 6 = 110b; sign bit leads.
  CHECK(binarize(Embedding{{0.36}}, params).to_bit_string() == "1110");
  CHECK(binarize(Embedding{{-0.36}}, params).to_bit_string() == "0110");

  SchemeParams p2{.precision_p = 2, .bits_l = 5, .dim_d = 3};
  const auto zero = binarize(Embedding{{0.0, 0.0, 0.0}}, p2);
  CHECK(zero.to_bit_string() == "100000100000100000");
  CHECK(zero.size() == p2.template_len());
}

TEST_CASE("binarize magnitude clamps at 2^l - 1") {
  SchemeParams params{.precision_p = 0, .bits_l = 3, .dim_d = 1};
  const auto big = binarize(Embedding{{250.0}}, params);
  // clamp(250, 3) = 7, gray(7) = 100b.
  CHECK(big.to_bit_string() == "1100");
  const auto neg = binarize(Embedding{{-250.0}}, params);
  CHECK(neg.to_bit_string() == "0100");
}

TEST_CASE("binarize near zero uses the sign of the rounded value") {
  SchemeParams params{.precision_p = 0, .bits_l = 2, .dim_d = 1};
  // -0.2 rounds to 0, which takes the non-negative branch.
  CHECK(binarize(Embedding{{-0.2}}, params).to_bit_string() == "100");
}

TEST_CASE("binarize is deterministic and dimension-checked") {
  SchemeParams params{.precision_p = 4, .bits_l = 15, .dim_d = 8};
  Embedding e{{0.11, -0.5, 0.004, 1.25, -3.5, 0.0, 2.0, -0.125}};
  CHECK(binarize(e, params) == binarize(e, params));
  CHECK_THROWS_AS(binarize(Embedding{{1.0, 2.0}}, params), std::invalid_argument);
  Embedding bad = e;
  bad.values[3] = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(binarize(bad, params), std::domain_error);
}

TEST_CASE("locality: one quantization step flips exactly one block bit") {
  SchemeParams params{.precision_p = 0, .bits_l = 6, .dim_d = 1};
  for (int m = 0; m < 62; ++m) {
    const auto a = binarize(Embedding{{static_cast<double>(m)}}, params);
    const auto b = binarize(Embedding{{static_cast<double>(m + 1)}}, params);
    CHECK(a.hamming(b) == 1);
  }
  // Same on the negative side (no sign change, no clamping).
  for (int m = 2; m < 62; ++m) {
    const auto a = binarize(Embedding{{static_cast<double>(-m)}}, params);
    const auto b = binarize(Embedding{{static_cast<double>(-m - 1)}}, params);
    CHECK(a.hamming(b) == 1);
  }
}

TEST_CASE("scheme params validation") {
  SchemeParams p;
  CHECK_NOTHROW(p.validate());
  CHECK(p.template_len() == 1024u * 16u);
  p.bits_l = 63;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
  p.bits_l = 0;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
  p = SchemeParams{};
  p.dim_d = 0;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
}

TEST_CASE("hash id names") {
  CHECK(to_string(HashId::Sha256) == "sha256");
  CHECK(hash_id_from_string("sha3-256") == HashId::Sha3_256);
  CHECK_THROWS_AS(hash_id_from_string("md5"), std::invalid_argument);
}
