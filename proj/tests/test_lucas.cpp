#include <random>

#include <boost/multiprecision/cpp_int.hpp>

#include "doctest.h"
#include "ssv/lucas.hpp"

using namespace ssv;
using boost::multiprecision::cpp_int;

namespace {

// Exact big-integer binomials (Pascal), the oracle for lucas_binom.
std::vector<cpp_int> pascal_row(std::uint64_t t) {
  std::vector<cpp_int> row{1};
  for (std::uint64_t n = 1; n <= t; ++n) {
    std::vector<cpp_int> next(n + 1, 0);
    for (std::uint64_t k = 0; k <= n; ++k) {
      if (k > 0) next[k] += row[k - 1];
      if (k < n) next[k] += row[k];
    }
    row = std::move(next);
  }
  return row;
}

}  // namespace

TEST_CASE("nu_p examples") {
  CHECK(nu_p(10, 5) == 1);
  CHECK(nu_p(182, 13) == 1);  // 182 = 13 * 14
  CHECK(nu_p(14, 13) == 0);
  CHECK(nu_p(625, 5) == 4);
  CHECK_THROWS_AS(nu_p(0, 5), std::invalid_argument);
}

TEST_CASE("base-p digits reassemble") {
  std::mt19937_64 rng(2);
  for (std::uint32_t p : {5u, 7u, 11u, 13u}) {
    for (int trial = 0; trial < 25; ++trial) {
      std::uint64_t n = rng() % 100000;
      std::vector<std::uint32_t> d = base_p_digits(n, p);
      std::uint64_t back = 0;
      for (std::size_t i = d.size(); i-- > 0;) {
        CHECK(d[i] < p);
        back = back * p + d[i];
      }
      CHECK(back == n);
    }
  }
}

TEST_CASE("lucas_binom examples against the factorial oracle") {
  // binom(10,5) = 252 = 2 mod 5; digits 10 = (0,2), 5 = (0,1): binom(2,1) = 2.
  CHECK(lucas_binom(10, 5, 5) == 2);
  CHECK(lucas_binom(10, 0, 5) == 1);
  CHECK(lucas_binom(10, 3, 5) == 0);  // binom(10,3) = 120 = 0 mod 5
  CHECK_THROWS_AS(lucas_binom(3, 4, 5), std::invalid_argument);
}

TEST_CASE("lucas_binom equals exact binomials mod p, t <= 80") {
  for (std::uint64_t t = 0; t <= 80; ++t) {
    std::vector<cpp_int> row = pascal_row(t);
    for (std::uint32_t p : {5u, 7u, 13u}) {
      for (std::uint64_t m = 0; m <= t; ++m) {
        std::uint32_t expect = static_cast<std::uint32_t>(row[m] % p);
        CHECK(lucas_binom(t, m, p) == expect);
      }
    }
  }
}

TEST_CASE("digit domination iff nonzero") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 300; ++trial) {
    std::uint32_t p = std::vector<std::uint32_t>{5, 7, 11, 13}[rng() % 4];
    std::uint64_t t = rng() % 3000;
    std::uint64_t m = t == 0 ? 0 : rng() % (t + 1);
    std::vector<std::uint32_t> dt = base_p_digits(t, p), dm = base_p_digits(m, p);
    bool dominated = true;
    for (std::size_t i = 0; i < dm.size(); ++i)
      if (dm[i] > (i < dt.size() ? dt[i] : 0)) dominated = false;
    CHECK((lucas_binom(t, m, p) != 0) == dominated);
  }
}

TEST_CASE("predicted_valuation examples") {
  CHECK(predicted_valuation(10, 5).order == 5);
  CHECK(predicted_valuation(10, 5).witness == 5);
  CHECK(predicted_valuation(7, 5).order == 1);
  CHECK(predicted_valuation(50, 5).order == 25);
  CHECK(predicted_valuation(182, 13).order == 13);
  // The witness really is the least m >= 1 with a nonzero digitwise binomial.
  for (std::uint64_t t : {10ull, 50ull, 182ull, 28ull}) {
    for (std::uint32_t p : {5u, 7u, 13u}) {
      std::uint64_t w = predicted_valuation(t, p).witness;
      for (std::uint64_t m = 1; m < w && m <= t; ++m) CHECK(lucas_binom(t, m, p) == 0);
      if (w <= t) CHECK(lucas_binom(t, w, p) != 0);
    }
  }
}

TEST_CASE("kummer_oracle examples") {
  Field f5 = construct_field(5, 1);
  // delta = u, t = 10: (1+u)^10 - 1 has valuation 5.
  TruncatedSeries u5 = TruncatedSeries::monomial(FieldElement::one(f5), 1, 7);
  CHECK(kummer_oracle(10, 5, u5, 7) == 5);
  // delta = 3u + u^2, t = 14, p = 13: linear term 14*3 = 42 = 3 != 0 mod 13.
  Field f13 = construct_field(13, 1);
  TruncatedSeries d13 = TruncatedSeries::from_ints(f13, {0, 3, 1});
  CHECK(kummer_oracle(14, 13, d13, 3) == 1);
  // t = 55, p = 11: predicted 11^{nu_11(55)} = 11.
  Field f11 = construct_field(11, 1);
  std::vector<std::int64_t> c(13, 0);
  c[1] = 7;
  c[2] = 4;
  TruncatedSeries d11 = TruncatedSeries::from_ints(f11, c);
  CHECK(kummer_oracle(55, 11, d11, 13) == 11);
  // Contract violations.
  TruncatedSeries flat = TruncatedSeries::from_ints(f5, {0, 0, 1});
  CHECK_THROWS_AS(kummer_oracle(10, 5, flat, 3), std::invalid_argument);
  CHECK_THROWS_AS(kummer_oracle(10, 5, u5, 3), std::invalid_argument);  // below p^nu + 2
}

TEST_CASE("prediction matches the series oracle on random draws") {
  std::mt19937_64 rng(41);
  for (std::uint32_t p : {5u, 7u, 11u, 13u}) {
    Field f = construct_field(p, 1);
    for (int trial = 0; trial < 50; ++trial) {
      std::uint64_t t = 1 + rng() % 2000;
      std::uint64_t order = predicted_valuation(t, p).order;
      std::uint32_t n = static_cast<std::uint32_t>(order + 2);
      std::vector<std::int64_t> c(n, 0);
      if (n > 1) c[1] = 1 + static_cast<std::int64_t>(rng() % (p - 1));
      for (std::uint32_t i = 2; i < n; ++i) c[i] = static_cast<std::int64_t>(rng() % p);
      TruncatedSeries delta = TruncatedSeries::from_ints(f, c);
      CHECK(kummer_oracle(t, p, delta, n) == order);
    }
  }
}
