#include "ssv/legendre.hpp"

#include <algorithm>
#include <stdexcept>

namespace ssv {

namespace {

// Evaluate an F_p-polynomial at a series over an extension of F_p.
TruncatedSeries poly_at_series(const Poly& h, const TruncatedSeries& s) {
  Field k = s.field();
  TruncatedSeries acc(k, s.precision());
  for (std::size_t i = h.coefficients().size(); i-- > 0;) {
    acc = acc * s + TruncatedSeries::constant(embed(h.coeff(i), k), s.precision());
  }
  return acc;
}

// The three 2-torsion x-coordinates of a smooth model as series: roots of
// the constant cubic over the coefficient field, Newton-lifted.
std::vector<TruncatedSeries> two_torsion_roots(const CurveModel<TruncatedSeries>& E) {
  Field k = E.a2.field();
  const std::uint32_t n = E.a2.precision();
  Poly cubic(k, {E.a6.coeff(0), E.a4.coeff(0), E.a2.coeff(0), FieldElement::one(k)});
  std::vector<FieldElement> base = poly_roots(cubic, k->m);
  if (base.size() != 3)
    throw std::logic_error("two_torsion_roots: constant cubic does not split with 3 simple roots");
  std::vector<TruncatedSeries> out;
  out.reserve(3);
  for (const FieldElement& r0 : base) {
    TruncatedSeries r = TruncatedSeries::constant(r0, n);
    std::uint32_t steps = 1;
    while ((1u << steps) < n) ++steps;
    for (std::uint32_t i = 0; i <= steps; ++i) {
      TruncatedSeries fr = E.rhs(r);
      TruncatedSeries dfr = r * r * 3 + E.a2 * r * 2 + E.a4;
      r = r - fr / dfr;  // dfr is a unit: the constant root is simple
    }
    if (!detail::ring_is_zero(E.rhs(r)))
      throw std::logic_error("two_torsion_roots: Newton lift failed");
    out.push_back(r);
  }
  std::sort(out.begin(), out.end(), [](const TruncatedSeries& a, const TruncatedSeries& b) {
    return a.constant_term() < b.constant_term();
  });
  return out;
}

// lambda-invariant of an ordered root triple: x -> (x - e1)/(e2 - e1) sends
// (e1, e2, e3) to (0, 1, lambda).
TruncatedSeries lambda_invariant(const std::vector<TruncatedSeries>& e) {
  return (e[2] - e[0]) / (e[1] - e[0]);
}

// The six lambda-invariants of the same curve (S3 orbit), in a fixed order.
std::vector<TruncatedSeries> lambda_orbit(const TruncatedSeries& w) {
  Field k = w.field();
  TruncatedSeries one = TruncatedSeries::constant(FieldElement::one(k), w.precision());
  std::vector<TruncatedSeries> orbit;
  orbit.push_back(w);
  orbit.push_back(one / w);
  orbit.push_back(one - w);
  orbit.push_back(one / (one - w));
  orbit.push_back(w / (w - one));
  orbit.push_back((w - one) / w);
  return orbit;
}

TruncatedSeries lambda_disc_series(const FieldElement& lambda0, std::uint32_t n) {
  return TruncatedSeries::constant(lambda0, n) +
         TruncatedSeries::monomial(FieldElement::one(lambda0.field()), 1, n);
}

std::uint64_t checked_t(std::uint32_t p, std::uint64_t i) {
  if (i == 0) throw std::invalid_argument("index i must be >= 1");
  std::uint64_t num = i * (static_cast<std::uint64_t>(p) * p - 1);
  if (num % 12 != 0) throw std::logic_error("t = i(p^2-1)/12 is not integral");
  return num / 12;
}

}  // namespace

FieldElement legendre_j(const FieldElement& lambda) {
  Field k = lambda.field();
  FieldElement one = FieldElement::one(k);
  if (lambda.is_zero() || lambda == one)
    throw std::invalid_argument("legendre_j: lambda at a cusp");
  FieldElement num = lambda * lambda - lambda + one;
  FieldElement den = lambda * lambda * (lambda - one) * (lambda - one);
  return num * num * num * 256 / den;
}

Poly deuring_polynomial(std::uint32_t p) {
  Field fp = construct_field(p, 1);
  const std::uint32_t d = (p - 1) / 2;
  // binom(d, i) mod p by the multiplicative recurrence; every factor is a
  // unit mod p since d < p.
  std::vector<FieldElement> coeffs;
  coeffs.reserve(d + 1);
  FieldElement binom = FieldElement::one(fp);
  for (std::uint32_t i = 0; i <= d; ++i) {
    coeffs.push_back(binom * binom);
    if (i < d)
      binom = binom * FieldElement::from_int(fp, d - i) /
              FieldElement::from_int(fp, i + 1);
  }
  return Poly(fp, std::move(coeffs));
}

HassePolynomial hasse_coefficient_polynomial(std::uint32_t p) {
  Field fp = construct_field(p, 1);
  const std::uint32_t e = (p - 1) / 2;
  // Bivariate power of x(x-1)(x-lambda) = x^3 - (1+lambda)x^2 + lambda x,
  // stored as lambda-polynomials indexed by the x-degree.
  std::vector<Poly> base{Poly(fp), Poly::from_ints(fp, {0, 1}), Poly::from_ints(fp, {-1, -1}),
                         Poly::from_ints(fp, {1})};
  std::vector<Poly> acc{Poly::from_ints(fp, {1})};
  for (std::uint32_t round = 0; round < e; ++round) {
    std::vector<Poly> next(acc.size() + 3, Poly(fp));
    for (std::size_t i = 0; i < acc.size(); ++i) {
      if (acc[i].is_zero()) continue;
      for (std::size_t j = 0; j < 4; ++j) next[i + j] = next[i + j] + acc[i] * base[j];
    }
    acc = std::move(next);
  }
  Poly hp = acc.at(p - 1);
  Poly deuring = deuring_polynomial(p);
  int sign = 0;
  if (hp == deuring) sign = 1;
  else if (hp == deuring * FieldElement::from_int(fp, -1)) sign = -1;
  else throw std::logic_error("hasse_coefficient_polynomial: result is neither H_p nor -H_p");
  return {hp, sign};
}

std::vector<SupersingularPoint> supersingular_points(std::uint32_t p) {
  Poly h = deuring_polynomial(p);
  if (poly_gcd(h, h.derivative()).degree() != 0)
    throw std::logic_error("supersingular_points: H_p has a repeated root");
  std::vector<FieldElement> roots = poly_roots(h, 2);
  if (roots.size() != (p - 1) / 2)
    throw std::logic_error("supersingular_points: root count differs from deg H_p");
  Field k2 = construct_field(p, 2);
  FieldElement one = FieldElement::one(k2);
  std::vector<SupersingularPoint> out;
  out.reserve(roots.size());
  for (const FieldElement& r : roots) {
    if (r.is_zero() || r == one)
      throw std::logic_error("supersingular_points: root at a cusp");
    FieldElement conj = frobenius(r);
    out.push_back({p, r, !(conj < r)});
  }
  return out;  // poly_roots returns canonical order
}

std::uint64_t curve_point_count(const CurveModel<FieldElement>& E) {
  Field k = E.a2.field();
  if (k->order > 30000)
    throw std::invalid_argument("curve_point_count: field too large for the exhaustive count");
  std::uint64_t count = 1;  // the point at infinity
  for (std::uint64_t i = 0; i < k->order; ++i) {
    FieldElement x = element_from_index(k, i);
    FieldElement f = E.rhs(x);
    if (f.is_zero())
      count += 1;
    else if (is_square(f))
      count += 2;
  }
  return count;
}

bool supersingular_oracle(const FieldElement& lambda0) {
  Field src = lambda0.field();
  if (src->m > 2) throw std::invalid_argument("supersingular_oracle: lambda must lie in F_{p^2}");
  Field k2 = construct_field(src->p, 2);
  FieldElement lam = embed(lambda0, k2);
  if (lam.is_zero() || lam.is_one())
    throw std::invalid_argument("supersingular_oracle: lambda in {0,1} is a cusp");
  std::uint64_t n = curve_point_count(legendre_curve<FieldElement>(lam));
  return n % src->p == 1;
}

TruncatedSeries leg_ratio_series(const SupersingularPoint& P, std::uint32_t precision) {
  TruncatedSeries lam = lambda_disc_series(P.lambda0, precision);
  CurveModel<TruncatedSeries> E = legendre_curve(lam);
  TruncatedSeries disc_src = E.discriminant();
  if (disc_src.constant_term().is_zero())
    throw std::logic_error("leg_ratio_series: source discriminant is not a unit");
  IsogenyData<TruncatedSeries> phi =
      velu_2isogeny(E, TruncatedSeries(lam.field(), precision));
  TruncatedSeries disc_tgt = phi.target.discriminant();
  return disc_tgt / disc_src;
}

PointValuation l2_point_valuation(const SupersingularPoint& P, std::uint64_t t,
                                  std::uint32_t precision) {
  TruncatedSeries rho = leg_ratio_series(P, precision);
  FieldElement rho0 = rho.constant_term();
  TruncatedSeries rho_hat = rho * rho0.inverse();
  FieldElement rho0_t = rho0.pow(t);
  TruncatedSeries powed = series_pow(rho_hat, t);
  TruncatedSeries diff =
      powed - TruncatedSeries::constant(FieldElement::one(rho.field()), powed.precision());
  return {P, diff.valuation(), rho0_t.is_one(), rho0_t, precision};
}

std::vector<PointValuation> l2_local_valuation(std::uint32_t p, std::uint64_t i,
                                               std::uint32_t margin) {
  std::uint64_t t = checked_t(p, i);
  std::uint64_t order = predicted_valuation(t, p).order;
  std::uint32_t precision = static_cast<std::uint32_t>(order + margin);
  std::vector<PointValuation> out;
  for (const SupersingularPoint& P : supersingular_points(p))
    out.push_back(l2_point_valuation(P, t, precision));
  return out;
}

std::uint32_t delta_branch_valuation(const SupersingularPoint& P) {
  TruncatedSeries rho = leg_ratio_series(P, 4);
  TruncatedSeries rho_hat = rho * rho.constant_term().inverse();
  TruncatedSeries diff =
      rho_hat - TruncatedSeries::constant(FieldElement::one(rho.field()), rho_hat.precision());
  SeriesValuation v = diff.valuation();
  // rho - rho(0) is a nonzero rational function of degree <= 2 in lambda,
  // so its local order is at most 2 and precision 4 always resolves it.
  if (!v.determinate())
    throw std::logic_error("delta_branch_valuation: unexpected indeterminate valuation");
  return v.value();
}

LegsMultipliers legs_multipliers(const SupersingularPoint& P) {
  const std::uint32_t p = P.p;
  const std::uint32_t n = 4;
  Field k4 = construct_field(p, 4);
  FieldElement lam0 = embed(P.lambda0, k4);
  TruncatedSeries lam = lambda_disc_series(lam0, n);
  CurveModel<TruncatedSeries> E = legendre_curve(lam);
  IsogenyData<TruncatedSeries> phi = velu_2isogeny(E, TruncatedSeries(k4, n));

  Poly h = deuring_polynomial(p);
  Poly hprime = h.derivative();
  // H_p'(lambda0), evaluated in F_{p^4}.
  FieldElement hder = FieldElement::zero(k4);
  for (std::size_t i = hprime.coefficients().size(); i-- > 0;)
    hder = hder * lam0 + embed(hprime.coeff(i), k4);
  if (hder.is_zero()) throw std::logic_error("legs_multipliers: H_p' vanishes at a root");

  TruncatedSeries lam_fwd = lambda_invariant(two_torsion_roots(phi.target));
  TruncatedSeries h_fwd = poly_at_series(h, lam_fwd);
  if (!h_fwd.constant_term().is_zero())
    throw std::logic_error("legs_multipliers: forward target is not supersingular");
  LegsMultipliers out;
  out.c = h_fwd.coeff(1) / hder;

  TruncatedSeries xd = dual_kernel(phi);
  IsogenyData<TruncatedSeries> psi = velu_2isogeny(phi.target, xd);
  TruncatedSeries lam_back = lambda_invariant(two_torsion_roots(psi.target));

  std::vector<TruncatedSeries> candidates;
  for (const TruncatedSeries& w : lambda_orbit(lam_back))
    if (w.constant_term() == lam0) candidates.push_back(w);
  if (candidates.empty()) {
    out.status = LegsStatus::branch_match_failed;
    out.c_dual = FieldElement::zero(k4);
    out.c_in_fp = out.c.pow(p) == out.c;
    return out;
  }
  TruncatedSeries matched = candidates.front();
  if (candidates.size() > 1) {
    // Points with extra automorphisms admit several branches through
    // lambda0; the moduli-identity branch is the one with linear term 1.
    out.constant_match_ambiguous = true;
    bool found = false;
    for (const TruncatedSeries& w : candidates) {
      if (w.coeff(1).is_one()) {
        matched = w;
        found = true;
        break;
      }
    }
    if (!found) out.status = LegsStatus::ambiguous_unresolved;
  }
  TruncatedSeries h_back = poly_at_series(h, matched);
  FieldElement denom = h_fwd.coeff(1);
  out.c_dual = denom.is_zero() ? FieldElement::zero(k4) : h_back.coeff(1) / denom;
  out.product_is_one = (out.c * out.c_dual).is_one();
  out.c_in_fp = out.c.pow(p) == out.c;
  return out;
}

}  // namespace ssv
