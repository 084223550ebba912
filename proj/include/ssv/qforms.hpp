#pragma once

// q-expansions mod p of the classical forms used by the verifier: Delta,
// Eisenstein series, the level-2 generators M2 = 2E2(2t) - E2(t) and
// M4 = E4, the level-2 comparison series of Delta powers, and the
// Hasse-divisibility solver via Sturm-bound linear algebra over F_p.
//
// Exact layers (integer Delta coefficients, rational Eisenstein
// coefficients, Bernoulli numbers) are computed in arbitrary precision and
// reduced mod p only at the end.

#include <cstdint>
#include <stdexcept>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace ssv {

using BigInt = boost::multiprecision::cpp_int;
using BigRat = boost::multiprecision::cpp_rational;

// B_n by the standard convolution recurrence over exact rationals
// (B_1 = -1/2 convention).  Cached.
BigRat bernoulli(unsigned n);

// Integer coefficients a_0..a_{M-1} of Delta = q prod (1-q^n)^24.
std::vector<BigInt> delta_coefficients_z(std::size_t M);

// Rational coefficients of E_k = 1 - (2k/B_k) sum sigma_{k-1}(n) q^n,
// k even >= 2.  k = 2 is quasi-modular and is only consumed internally by
// the level-2 weight-2 generator; it is still exposed at the expansion level.
std::vector<BigRat> eisenstein_coefficients_q(unsigned k, std::size_t M);

// Residue of an exact rational mod p; throws std::domain_error when the
// denominator is divisible by p.
std::uint32_t reduce_mod_p(const BigRat& x, std::uint32_t p);

// q-series mod p with weight and level tags.  precision() = stored
// coefficient count; the series is known modulo q^precision().
struct QExpansion {
  std::uint32_t p = 0;
  std::int64_t weight = 0;
  std::int32_t level = 1;
  std::vector<std::uint32_t> a;

  std::size_t precision() const { return a.size(); }
  bool is_zero() const;

  QExpansion truncated(std::size_t n) const;
  QExpansion operator+(const QExpansion& o) const;  // same weight and level
  QExpansion operator-(const QExpansion& o) const;
  QExpansion operator*(const QExpansion& o) const;  // weights add
  QExpansion scaled(std::uint32_t c) const;
  QExpansion pow(std::uint64_t t) const;  // t >= 1
  bool operator==(const QExpansion& o) const;
};

// Degeneracy map q -> q^2; doubles the level tag range to 2, keeps the
// weight.  Output precision 2*precision - 1.
QExpansion v2(const QExpansion& f);

// Index of the first nonzero coefficient; throws std::domain_error when the
// expansion is zero to its precision (indeterminate, not "infinity").
std::size_t ord_q(const QExpansion& f);

QExpansion delta_expansion(std::uint32_t p, std::size_t M);
QExpansion eisenstein_expansion(unsigned k, std::uint32_t p, std::size_t M);
// M2 = 2 E2(2t) - E2(t) = 1 + 24 sum (sigma_1(odd part related) ...) q^n;
// the holomorphic weight-2 generator of the level-2 graded ring.  Bare E2
// is not exposed as a modular form.
QExpansion level2_weight2_generator(std::uint32_t p, std::size_t M);
QExpansion level2_weight4_generator(std::uint32_t p, std::size_t M);  // E4 mod p

struct ComparisonSeries {
  QExpansion g;           // V2(Delta^t) - eps * Delta^t, weight 12t, level 2
  std::uint32_t epsilon;  // 2^{-6t} mod p (or its negative when flipped)
};

// Requires (p-1) | 12t and M >= 3t + 2 (the weight-12t level-2 Sturm bound
// plus a guard margin).
ComparisonSeries l2_comparison_series(std::uint32_t p, std::uint64_t t, std::size_t M,
                                      bool negate_epsilon = false);

// Row-reduced basis of the span of the monomials M2^a M4^b of weight
// k = 2a + 4b, as q-expansions mod p to the stated precision.
class FormSpaceBasis {
 public:
  FormSpaceBasis(std::int64_t weight, std::uint32_t p, std::size_t precision,
                 std::vector<std::vector<std::uint32_t>> echelon_rows,
                 std::vector<std::size_t> pivots);

  std::int64_t weight() const { return weight_; }
  std::uint32_t prime() const { return p_; }
  std::size_t precision() const { return precision_; }
  std::size_t dimension() const { return rows_.size(); }
  const std::vector<std::size_t>& pivots() const { return pivots_; }
  std::vector<QExpansion> rows() const;  // echelon rows as tagged expansions

  // Membership of the q-expansion (first precision() coefficients of g) in
  // the row span.
  bool contains(const QExpansion& g) const;
  bool contains(const std::vector<std::uint32_t>& coeffs) const;

 private:
  std::int64_t weight_;
  std::uint32_t p_;
  std::size_t precision_;
  std::vector<std::vector<std::uint32_t>> rows_;
  std::vector<std::size_t> pivots_;
};

// Echelonized basis of weight-k monomials in (M2, M4); k even >= 0 and
// M >= floor(k/4) + 2.  Throws std::runtime_error if the monomials are
// linearly dependent to precision M (raise M).  Cached per (p, k, M);
// the cache is safe for concurrent readers with single-writer inserts.
FormSpaceBasis level2_basis(std::int64_t k, std::uint32_t p, std::size_t M);

struct HasseDivisibility {
  std::uint64_t j_max;
  std::size_t sturm_precision;
};

// Largest j >= 0 such that some form of weight k - j(p-1) on the level-2
// group has the same q-expansion as g to the weight-k Sturm precision
// k/4 + 2 (the Hasse form has q-expansion 1, so dividing by its j-th power
// leaves the expansion unchanged).  Searches j downward from k/(p-1);
// solvability is monotone in -j, so the first hit is the maximum.
// Requires g.level == 2, g nonzero to the Sturm precision, and
// g.precision() >= k/4 + 2.
HasseDivisibility max_hasse_divisibility(const QExpansion& g, std::uint32_t p);

}  // namespace ssv
