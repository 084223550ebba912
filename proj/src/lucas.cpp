#include "ssv/lucas.hpp"

#include <stdexcept>

namespace ssv {

namespace {

// binom(a, b) mod p for digits a, b < p.  Values fit comfortably in 64 bits
// only via modular accumulation, so reduce as we go.
std::uint32_t small_binom_mod(std::uint32_t a, std::uint32_t b, std::uint32_t p) {
  if (b > a) return 0;
  std::uint64_t num = 1, den = 1;
  for (std::uint32_t i = 0; i < b; ++i) {
    num = num * ((a - i) % p) % p;
    den = den * ((i + 1) % p) % p;
  }
  // den is invertible: all factors are < p and nonzero.
  std::uint64_t inv = 1, base = den, e = p - 2;
  while (e) {
    if (e & 1) inv = inv * base % p;
    base = base * base % p;
    e >>= 1;
  }
  return static_cast<std::uint32_t>(num * inv % p);
}

}  // namespace

std::uint32_t nu_p(std::uint64_t t, std::uint32_t p) {
  if (t == 0) throw std::invalid_argument("nu_p: t must be >= 1");
  if (p < 2) throw std::invalid_argument("nu_p: p must be a prime");
  std::uint32_t nu = 0;
  while (t % p == 0) {
    t /= p;
    ++nu;
  }
  return nu;
}

std::vector<std::uint32_t> base_p_digits(std::uint64_t n, std::uint32_t p) {
  std::vector<std::uint32_t> d;
  while (n) {
    d.push_back(static_cast<std::uint32_t>(n % p));
    n /= p;
  }
  return d;
}

std::uint32_t lucas_binom(std::uint64_t t, std::uint64_t m, std::uint32_t p) {
  if (m > t) throw std::invalid_argument("lucas_binom: m > t");
  std::uint64_t r = 1;
  while (t || m) {
    std::uint32_t dt = static_cast<std::uint32_t>(t % p);
    std::uint32_t dm = static_cast<std::uint32_t>(m % p);
    if (dm > dt) return 0;
    r = r * small_binom_mod(dt, dm, p) % p;
    t /= p;
    m /= p;
  }
  return static_cast<std::uint32_t>(r);
}

PredictedValuation predicted_valuation(std::uint64_t t, std::uint32_t p) {
  std::uint32_t nu = nu_p(t, p);
  std::uint64_t order = 1;
  for (std::uint32_t i = 0; i < nu; ++i) order *= p;
  // The smallest m >= 1 dominated digitwise by t: the first nu digits of t
  // vanish and digit nu does not, so m = p^nu works and nothing smaller can.
  return {order, order};
}

std::uint64_t kummer_oracle(std::uint64_t t, std::uint32_t p, const TruncatedSeries& delta,
                            std::uint32_t n) {
  if (delta.field()->p != p)
    throw std::invalid_argument("kummer_oracle: delta lives over a different prime");
  SeriesValuation vd = delta.valuation();
  if (!vd.determinate() || vd.value() != 1)
    throw std::invalid_argument("kummer_oracle: delta must have valuation exactly 1");
  if (n < predicted_valuation(t, p).order + 2 || n > delta.precision())
    throw std::invalid_argument("kummer_oracle: working precision too small");
  TruncatedSeries base =
      TruncatedSeries::constant(FieldElement::one(delta.field()), n) + delta.truncated(n);
  TruncatedSeries powed = series_pow(base, t);
  TruncatedSeries diff =
      powed - TruncatedSeries::constant(FieldElement::one(delta.field()), powed.precision());
  SeriesValuation v = diff.valuation();
  if (!v.determinate())
    throw std::runtime_error("kummer_oracle: indeterminate valuation at precision " +
                             std::to_string(n));
  return v.value();
}

}  // namespace ssv
