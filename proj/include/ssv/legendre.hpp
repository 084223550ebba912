#pragma once

// The geometric route: Legendre curves y^2 = x(x-1)(x-lambda), the
// Deuring-Hasse polynomial H_p, Velu 2-isogenies in the differential-
// normalized model, local expansion of the discriminant leg ratio at
// supersingular points, and the exact local order of the level-2
// antisymmetry of Delta powers there.

#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "ssv/ffield.hpp"
#include "ssv/lucas.hpp"
#include "ssv/pseries.hpp"

namespace ssv {

// Short Weierstrass model y^2 = x^3 + a2 x^2 + a4 x + a6 over a coefficient
// ring R (field element or truncated series).  R needs ring arithmetic and
// multiplication by small integers.
template <class R>
struct CurveModel {
  R a2, a4, a6;

  R b2() const { return a2 * 4; }
  R b4() const { return a4 * 2; }
  R b6() const { return a6 * 4; }
  R b8() const { return a2 * a6 * 4 - a4 * a4; }

  // -b2^2 b8 - 8 b4^3 - 27 b6^2 + 9 b2 b4 b6
  R discriminant() const {
    R B2 = b2(), B4 = b4(), B6 = b6(), B8 = b8();
    return -(B2 * B2 * B8) - B4 * B4 * B4 * 8 - B6 * B6 * 27 + B2 * B4 * B6 * 9;
  }

  R c4() const { return b2() * b2() - b4() * 24; }

  // The cubic x^3 + a2 x^2 + a4 x + a6 at x.
  R rhs(const R& x) const { return ((x + a2) * x + a4) * x + a6; }
};

// y^2 = x(x-1)(x-lambda):  a2 = -(1+lambda), a4 = lambda, a6 = 0.
// Its discriminant is 16 lambda^2 (lambda-1)^2.
template <class R>
CurveModel<R> legendre_curve(const R& lambda);

// j(E_lambda) = 256 (lambda^2 - lambda + 1)^3 / (lambda^2 (lambda-1)^2).
FieldElement legendre_j(const FieldElement& lambda);

// A 2-isogeny in Velu normalization: the pullback of dx'/y' on the target
// is dx/y on the source.  The x-map is (x^2 - x0 x + t)/(x - x0).
template <class R>
struct IsogenyData {
  CurveModel<R> source;
  CurveModel<R> target;
  R kernel_x;
  std::array<R, 3> xmap_num;  // degree 2, monic
  std::array<R, 2> xmap_den;  // degree 1, monic
};

// Velu's formulas for the kernel {O, (x0, 0)}; throws std::invalid_argument
// when (x0, 0) does not lie on the curve.
template <class R>
IsogenyData<R> velu_2isogeny(const CurveModel<R>& E, const R& x0);

// x-coordinate of the image of either non-kernel 2-torsion point; both map
// to the same point, which generates the kernel of the dual.  Implemented
// for Legendre sources with kernel (0,0), whose other 2-torsion x-values
// are 1 and lambda; the equality of the two images is asserted.
template <class R>
R dual_kernel(const IsogenyData<R>& phi);

// Check that the composite x-map of (dual o phi) equals the duplication
// x-map of the source up to the normalizing isomorphism x -> x/4 + r
// (the Velu-normalized composite has differential multiplier 1 while [2]
// has multiplier 2).  Returns the shift 4r when the identity holds.
template <class R>
std::optional<R> composite_matches_doubling(const IsogenyData<R>& phi,
                                            const IsogenyData<R>& dual);

// H_p(lambda) = sum_i binom((p-1)/2, i)^2 lambda^i over F_p.
Poly deuring_polynomial(std::uint32_t p);

struct HassePolynomial {
  Poly poly;  // coefficient of x^{p-1} in (x(x-1)(x-lambda))^{(p-1)/2}
  int sign;   // poly == sign * deuring_polynomial(p), sign in {+1, -1}
};

// The classical coefficient-of-x^{p-1} construction of the Hasse invariant
// in the Legendre family; throws std::logic_error if the result is neither
// H_p nor -H_p (which would falsify the construction).
HassePolynomial hasse_coefficient_polynomial(std::uint32_t p);

struct SupersingularPoint {
  std::uint32_t p = 0;
  FieldElement lambda0;        // in F_{p^2}, never 0 or 1
  bool orbit_representative;   // first of {lambda0, lambda0^p} in element order
};

// All roots of H_p in F_{p^2}, sorted in the canonical element order.
// Asserts: count = (p-1)/2 (so every root is quadratic), no root in {0,1},
// gcd(H_p, H_p') = 1 (all roots simple).
std::vector<SupersingularPoint> supersingular_points(std::uint32_t p);

// Brute-force point count of y^2 = x(x-1)(x-lambda0) over F_{p^2}:
// supersingular iff #E(F_{p^2}) = 1 mod p (trace of Frobenius = 0 mod p).
// Independent of H_p; this is the anti-circularity oracle.  lambda0 may
// live in F_p or F_{p^2} and must avoid {0, 1}.
bool supersingular_oracle(const FieldElement& lambda0);

// #E(F_q) for a short Weierstrass model over a field of size q <= ~3e4.
std::uint64_t curve_point_count(const CurveModel<FieldElement>& E);

// rho(s) = Delta(E'_{lambda0+s}) / Delta(E_{lambda0+s}) over F_{p^2}[[s]],
// where E' is the Velu target of the kernel-(0,0) isogeny.  A unit series;
// rho(0)^t times a global constant in (F_p^x)^{12t} is the constant term of
// the normalized leg ratio.
TruncatedSeries leg_ratio_series(const SupersingularPoint& P, std::uint32_t precision);

struct PointValuation {
  SupersingularPoint point;
  SeriesValuation valuation;   // v_s(rho_hat^t - 1) at the contract precision
  bool rho0_pow_t_is_one;      // whether rho(0)^t = 1 (unit-normalization check)
  FieldElement rho0_pow_t;
  std::uint32_t precision;     // working precision used
};

// The headline local computation: for t = i(p^2-1)/12 and N = p^{nu_p(t)} +
// margin, the s-adic valuation of rho(s)^t / rho(0)^t - 1 at every
// supersingular point.  The division by rho(0)^t is the global-unit
// normalization; when rho(0)^t != 1 the defect is recorded, not hidden.
std::vector<PointValuation> l2_local_valuation(std::uint32_t p, std::uint64_t i,
                                               std::uint32_t margin = 2);

// Same per-point computation at an explicitly chosen precision (used to
// re-resolve indeterminate valuations at higher precision).
PointValuation l2_point_valuation(const SupersingularPoint& P, std::uint64_t t,
                                  std::uint32_t precision);

// v_s(rho(s)/rho(0) - 1): the local order of the first-order leg asymmetry.
std::uint32_t delta_branch_valuation(const SupersingularPoint& P);

enum class LegsStatus {
  ok,
  // No lambda-invariant branch of the dual target has constant term lambda0.
  branch_match_failed,
  // Several branches matched the constant term (extra automorphisms) and
  // none matched to first order.
  ambiguous_unresolved,
};

struct LegsMultipliers {
  LegsStatus status = LegsStatus::ok;
  FieldElement c;        // in F_{p^4}: [s^1] H_p(lambda'(s)) / H_p'(lambda0)
  FieldElement c_dual;   // [s^1] H_p(lambda''(s)) / [s^1] H_p(lambda'(s))
  bool c_in_fp = false;  // recorded, never asserted: c^p == c
  bool product_is_one = false;  // c * c_dual == 1
  bool constant_match_ambiguous = false;  // several dual branches matched lambda0
};

// First-order scaling of the Hasse uniformizer along the two legs at P,
// computed over F_{p^4}: the target lambda-invariant branch lambda'(s) is
// built from the 2-torsion cubic of the Velu target with roots ordered by
// constant term; the dual branch lambda''(s) is the transform of the dual
// target's invariant with constant term lambda0 (disambiguated by linear
// term 1 when the point has extra automorphisms).
LegsMultipliers legs_multipliers(const SupersingularPoint& P);

// ---- generic ring helpers and template definitions ----

namespace detail {

inline bool ring_is_zero(const FieldElement& x) { return x.is_zero(); }
inline bool ring_is_zero(const TruncatedSeries& s) { return !s.valuation().determinate(); }
inline bool ring_is_unit(const FieldElement& x) { return !x.is_zero(); }
inline bool ring_is_unit(const TruncatedSeries& s) { return !s.constant_term().is_zero(); }
inline FieldElement ring_one_like(const FieldElement& x) { return FieldElement::one(x.field()); }
inline TruncatedSeries ring_one_like(const TruncatedSeries& s) {
  return TruncatedSeries::constant(FieldElement::one(s.field()), s.precision());
}
inline FieldElement ring_zero_like(const FieldElement& x) { return FieldElement::zero(x.field()); }
inline TruncatedSeries ring_zero_like(const TruncatedSeries& s) {
  return TruncatedSeries(s.field(), s.precision());
}
inline FieldElement ring_inverse(const FieldElement& x) { return x.inverse(); }
inline TruncatedSeries ring_inverse(const TruncatedSeries& s) { return s.inverse(); }

// Minimal dense polynomial algebra over R for the rational-map identities.
template <class R>
using RingPoly = std::vector<R>;

template <class R>
RingPoly<R> rp_mul(const RingPoly<R>& a, const RingPoly<R>& b) {
  RingPoly<R> out(a.size() + b.size() - 1, ring_zero_like(a[0]));
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) out[i + j] = out[i + j] + a[i] * b[j];
  return out;
}

template <class R>
RingPoly<R> rp_sub(RingPoly<R> a, const RingPoly<R>& b) {
  if (b.size() > a.size()) a.resize(b.size(), ring_zero_like(a[0]));
  for (std::size_t i = 0; i < b.size(); ++i) a[i] = a[i] - b[i];
  return a;
}

template <class R>
RingPoly<R> rp_scale(RingPoly<R> a, const R& k) {
  for (R& c : a) c = c * k;
  return a;
}

}  // namespace detail

template <class R>
CurveModel<R> legendre_curve(const R& lambda) {
  R one = detail::ring_one_like(lambda);
  return CurveModel<R>{-(lambda + one), lambda, detail::ring_zero_like(lambda)};
}

template <class R>
IsogenyData<R> velu_2isogeny(const CurveModel<R>& E, const R& x0) {
  if (!detail::ring_is_zero(E.rhs(x0)))
    throw std::invalid_argument("velu_2isogeny: x0 is not a 2-torsion x-coordinate");
  // Velu for the kernel {O, (x0, 0)}: t = 3 x0^2 + 2 a2 x0 + a4, w = x0 t;
  // target (a2, a4 - 5t, a6 - b2 t - 7w), x-map x + t/(x - x0).
  R t = x0 * x0 * 3 + E.a2 * x0 * 2 + E.a4;
  R w = x0 * t;
  CurveModel<R> target{E.a2, E.a4 - t * 5, E.a6 - E.a2 * t * 4 - w * 7};
  R one = detail::ring_one_like(x0);
  return IsogenyData<R>{E, target, x0, {t, -x0, one}, {-x0, one}};
}

template <class R>
R dual_kernel(const IsogenyData<R>& phi) {
  // Legendre source with kernel (0,0): remaining 2-torsion at x = 1 and
  // x = lambda = a4.
  R one = detail::ring_one_like(phi.kernel_x);
  R lambda = phi.source.a4;
  if (!detail::ring_is_zero(phi.kernel_x) || !detail::ring_is_zero(phi.source.rhs(one)))
    throw std::invalid_argument("dual_kernel: source is not in Legendre form with kernel (0,0)");
  auto image = [&](const R& x) {
    R num = (x - phi.kernel_x) * x + phi.xmap_num[0];  // x^2 - x0 x + t
    R den = x - phi.kernel_x;
    return num * detail::ring_inverse(den);
  };
  R img1 = image(one);
  R img2 = image(lambda);
  if (!detail::ring_is_zero(img1 - img2))
    throw std::logic_error("dual_kernel: the two non-kernel 2-torsion images differ");
  return img1;
}

template <class R>
std::optional<R> composite_matches_doubling(const IsogenyData<R>& phi,
                                            const IsogenyData<R>& dual) {
  using detail::RingPoly;
  const R zero = detail::ring_zero_like(phi.kernel_x);
  const R one = detail::ring_one_like(phi.kernel_x);
  RingPoly<R> n1{phi.xmap_num[0], phi.xmap_num[1], phi.xmap_num[2]};
  RingPoly<R> d1{phi.xmap_den[0], phi.xmap_den[1]};
  // Substitute x' = n1/d1 into the dual's maps: numerator n1^2 - x0' n1 d1
  // + t' d1^2, denominator d1 (n1 - x0' d1).
  const R xd = dual.kernel_x;
  const R td = dual.xmap_num[0];
  RingPoly<R> comp_num = detail::rp_sub(
      detail::rp_sub(detail::rp_mul(n1, n1), detail::rp_scale(detail::rp_mul(n1, d1), xd)),
      detail::rp_scale(detail::rp_mul(d1, d1), -td));
  RingPoly<R> comp_den =
      detail::rp_mul(d1, detail::rp_sub(n1, detail::rp_scale(d1, xd)));
  // Duplication on the source: (x^4 - 2 a4 x^2 - 8 a6 x + a4^2 - 4 a2 a6) /
  // (4 (x^3 + a2 x^2 + a4 x + a6)).
  const CurveModel<R>& E = phi.source;
  RingPoly<R> dup_num{E.a4 * E.a4 - E.a2 * E.a6 * 4, E.a6 * (-8), E.a4 * (-2), zero, one};
  RingPoly<R> dup_den{E.a6 * 4, E.a4 * 4, E.a2 * 4, one * 4};
  // Claim: comp = (4 dup_num - C dup_den) / dup_den for a constant C.
  RingPoly<R> lhs = detail::rp_mul(comp_num, dup_den);
  RingPoly<R> rhs = detail::rp_scale(detail::rp_mul(dup_num, comp_den), one * 4);
  RingPoly<R> diff = detail::rp_sub(lhs, rhs);          // should be -C * S
  RingPoly<R> S = detail::rp_mul(dup_den, comp_den);
  std::size_t k = 0;
  while (k < S.size() && !detail::ring_is_unit(S[k])) ++k;
  if (k == S.size()) return std::nullopt;
  R C = -(diff[k] * detail::ring_inverse(S[k]));
  RingPoly<R> resid = detail::rp_sub(diff, detail::rp_scale(S, -C));
  for (const R& r : resid)
    if (!detail::ring_is_zero(r)) return std::nullopt;
  return C;  // the composite is x -> (4 dup - C); C = 4r for the shift r
}

}  // namespace ssv
