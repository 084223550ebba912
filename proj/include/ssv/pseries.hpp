#pragma once

// Truncated power series over a finite field with explicit precision
// accounting.  A series stores coefficients c_0..c_{N-1} and is understood
// modulo u^N.  Operations never claim more precision than their inputs
// support; "all stored coefficients vanish" is a first-class answer
// (SeriesValuation), distinct from knowing the series is zero.

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "ssv/ffield.hpp"

namespace ssv {

// Valuation of a truncated series: either an exact value v < N, or the
// indeterminate answer ">= N" when every stored coefficient vanishes.
// Callers must treat the indeterminate case as a precision failure, never
// as a value.
class SeriesValuation {
 public:
  static SeriesValuation exactly(std::uint32_t v) { return SeriesValuation(v, true); }
  static SeriesValuation at_least(std::uint32_t n) { return SeriesValuation(n, false); }

  bool determinate() const { return exact_; }
  std::uint32_t value() const;        // throws std::logic_error if indeterminate
  std::uint32_t lower_bound() const { return v_; }

  bool operator==(const SeriesValuation& o) const { return v_ == o.v_ && exact_ == o.exact_; }
  std::string to_string() const;

 private:
  SeriesValuation(std::uint32_t v, bool exact) : v_(v), exact_(exact) {}
  std::uint32_t v_;
  bool exact_;
};

class TruncatedSeries {
 public:
  // The zero series at the given precision (>= 1).
  TruncatedSeries(Field f, std::uint32_t precision);
  TruncatedSeries(Field f, std::vector<FieldElement> coeffs);

  static TruncatedSeries constant(const FieldElement& c, std::uint32_t precision);
  // c * u^k at the given precision.
  static TruncatedSeries monomial(const FieldElement& c, std::uint32_t k,
                                  std::uint32_t precision);
  static TruncatedSeries from_ints(Field f, const std::vector<std::int64_t>& coeffs);

  Field field() const { return field_; }
  std::uint32_t precision() const { return static_cast<std::uint32_t>(c_.size()); }
  FieldElement coeff(std::uint32_t i) const;  // throws beyond the precision
  FieldElement constant_term() const { return coeff(0); }

  TruncatedSeries truncated(std::uint32_t n) const;  // n <= precision

  TruncatedSeries operator+(const TruncatedSeries& o) const;  // precision: min
  TruncatedSeries operator-(const TruncatedSeries& o) const;
  TruncatedSeries operator-() const;
  // Precision of a product: min(N_f + v(g), N_g + v(f)) where v is the
  // stored valuation (taken as N when indeterminate).  Multiplying by a
  // non-unit therefore shifts precision up, and unit*unit keeps min(N_f, N_g).
  TruncatedSeries operator*(const TruncatedSeries& o) const;
  TruncatedSeries operator*(const FieldElement& k) const;
  TruncatedSeries operator*(std::int64_t k) const;
  TruncatedSeries operator/(const TruncatedSeries& o) const;  // o must be a unit

  // Reciprocal of a unit series (nonzero constant term), same precision.
  TruncatedSeries inverse() const;

  SeriesValuation valuation() const;

  bool equal_to_precision(const TruncatedSeries& o, std::uint32_t n) const;

  std::string to_string() const;

 private:
  Field field_;
  std::vector<FieldElement> c_;
};

// (1 + (s-1))^t by binary exponentiation; requires constant term exactly 1
// and t >= 1.  Cost O(log t) multiplications.
TruncatedSeries series_pow(const TruncatedSeries& s, std::uint64_t t);

// f(g(u)) for v(g) >= 1 (zero constant term required).  Result precision is
// min(N_f * v(g), N_g): truncating f costs O(g^{N_f}) = O(u^{N_f * v(g)}),
// and perturbing g by O(u^{N_g}) moves f(g) by O(u^{N_g}).  For the
// indeterminate case v(g) is taken as N_g.
TruncatedSeries series_compose(const TruncatedSeries& f, const TruncatedSeries& g);

// Square root of a series whose constant term is a nonzero square in its
// field; of the two roots, the one whose constant term comes first in the
// canonical element order.  Throws std::domain_error when the constant term
// is zero (factor out even powers first) or a non-square (lift to the
// quadratic extension first).
TruncatedSeries series_sqrt(const TruncatedSeries& s);

SeriesValuation series_valuation(const TruncatedSeries& s);

}  // namespace ssv
