#include "ssv/pseries.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace ssv {

namespace {

void require_same(Field a, Field b) {
  if (a != b) throw std::invalid_argument("series arithmetic across different fields");
}

std::uint32_t stored_valuation_or_n(const std::vector<FieldElement>& c) {
  for (std::size_t i = 0; i < c.size(); ++i)
    if (!c[i].is_zero()) return static_cast<std::uint32_t>(i);
  return static_cast<std::uint32_t>(c.size());
}

}  // namespace

std::uint32_t SeriesValuation::value() const {
  if (!exact_) throw std::logic_error("indeterminate valuation (>= " + std::to_string(v_) +
                                      ") used as a value; raise the working precision");
  return v_;
}

std::string SeriesValuation::to_string() const {
  return exact_ ? std::to_string(v_) : ">=" + std::to_string(v_);
}

TruncatedSeries::TruncatedSeries(Field f, std::uint32_t precision) : field_(f) {
  if (f == nullptr) throw std::invalid_argument("series over a null field");
  if (precision == 0) throw std::invalid_argument("series precision must be >= 1");
  c_.assign(precision, FieldElement::zero(f));
}

TruncatedSeries::TruncatedSeries(Field f, std::vector<FieldElement> coeffs)
    : field_(f), c_(std::move(coeffs)) {
  if (f == nullptr || c_.empty()) throw std::invalid_argument("bad series construction");
  for (const FieldElement& e : c_)
    if (e.field() != f) throw std::invalid_argument("series coefficient from a different field");
}

TruncatedSeries TruncatedSeries::constant(const FieldElement& c, std::uint32_t precision) {
  TruncatedSeries s(c.field(), precision);
  s.c_[0] = c;
  return s;
}

TruncatedSeries TruncatedSeries::monomial(const FieldElement& c, std::uint32_t k,
                                          std::uint32_t precision) {
  TruncatedSeries s(c.field(), precision);
  if (k < precision) s.c_[k] = c;
  return s;
}

TruncatedSeries TruncatedSeries::from_ints(Field f, const std::vector<std::int64_t>& coeffs) {
  std::vector<FieldElement> v;
  v.reserve(coeffs.size());
  for (std::int64_t c : coeffs) v.push_back(FieldElement::from_int(f, c));
  return TruncatedSeries(f, std::move(v));
}

FieldElement TruncatedSeries::coeff(std::uint32_t i) const {
  if (i >= c_.size())
    throw std::out_of_range("series coefficient " + std::to_string(i) +
                            " beyond precision " + std::to_string(c_.size()));
  return c_[i];
}

TruncatedSeries TruncatedSeries::truncated(std::uint32_t n) const {
  if (n == 0 || n > c_.size()) throw std::invalid_argument("bad truncation length");
  return TruncatedSeries(field_, std::vector<FieldElement>(c_.begin(), c_.begin() + n));
}

TruncatedSeries TruncatedSeries::operator+(const TruncatedSeries& o) const {
  require_same(field_, o.field_);
  std::uint32_t n = std::min(precision(), o.precision());
  std::vector<FieldElement> v(c_.begin(), c_.begin() + n);
  for (std::uint32_t i = 0; i < n; ++i) v[i] += o.c_[i];
  return TruncatedSeries(field_, std::move(v));
}

TruncatedSeries TruncatedSeries::operator-(const TruncatedSeries& o) const {
  require_same(field_, o.field_);
  std::uint32_t n = std::min(precision(), o.precision());
  std::vector<FieldElement> v(c_.begin(), c_.begin() + n);
  for (std::uint32_t i = 0; i < n; ++i) v[i] -= o.c_[i];
  return TruncatedSeries(field_, std::move(v));
}

TruncatedSeries TruncatedSeries::operator-() const {
  std::vector<FieldElement> v = c_;
  for (FieldElement& e : v) e = -e;
  return TruncatedSeries(field_, std::move(v));
}

TruncatedSeries TruncatedSeries::operator*(const TruncatedSeries& o) const {
  require_same(field_, o.field_);
  const std::uint32_t na = precision(), nb = o.precision();
  const std::uint32_t va = stored_valuation_or_n(c_), vb = stored_valuation_or_n(o.c_);
  // Known modulo u^min(na + vb, nb + va); see the header for the bound.
  const std::uint64_t nr64 = std::min<std::uint64_t>(static_cast<std::uint64_t>(na) + vb,
                                                     static_cast<std::uint64_t>(nb) + va);
  const std::uint32_t nr = static_cast<std::uint32_t>(std::max<std::uint64_t>(1, nr64));
  std::vector<FieldElement> v(nr, FieldElement::zero(field_));
  for (std::uint32_t i = va; i < na; ++i) {
    if (c_[i].is_zero()) continue;
    const std::uint32_t jmax = std::min(nb, nr > i ? nr - i : 0);
    for (std::uint32_t j = vb; j < jmax; ++j) v[i + j] += c_[i] * o.c_[j];
  }
  return TruncatedSeries(field_, std::move(v));
}

TruncatedSeries TruncatedSeries::operator*(const FieldElement& k) const {
  require_same(field_, k.field());
  std::vector<FieldElement> v = c_;
  for (FieldElement& e : v) e *= k;
  return TruncatedSeries(field_, std::move(v));
}

TruncatedSeries TruncatedSeries::operator*(std::int64_t k) const {
  return *this * FieldElement::from_int(field_, k);
}

TruncatedSeries TruncatedSeries::inverse() const {
  if (c_[0].is_zero())
    throw std::domain_error("series inverse requires a unit (nonzero constant term)");
  const std::uint32_t n = precision();
  std::vector<FieldElement> v(n, FieldElement::zero(field_));
  FieldElement c0inv = c_[0].inverse();
  v[0] = c0inv;
  for (std::uint32_t k = 1; k < n; ++k) {
    FieldElement acc = FieldElement::zero(field_);
    for (std::uint32_t j = 1; j <= k; ++j) acc += c_[j] * v[k - j];
    v[k] = -(acc * c0inv);
  }
  return TruncatedSeries(field_, std::move(v));
}

TruncatedSeries TruncatedSeries::operator/(const TruncatedSeries& o) const {
  return *this * o.inverse();
}

SeriesValuation TruncatedSeries::valuation() const {
  std::uint32_t v = stored_valuation_or_n(c_);
  return v < precision() ? SeriesValuation::exactly(v) : SeriesValuation::at_least(precision());
}

bool TruncatedSeries::equal_to_precision(const TruncatedSeries& o, std::uint32_t n) const {
  require_same(field_, o.field_);
  if (n > precision() || n > o.precision())
    throw std::invalid_argument("equal_to_precision beyond stored precision");
  for (std::uint32_t i = 0; i < n; ++i)
    if (c_[i] != o.c_[i]) return false;
  return true;
}

std::string TruncatedSeries::to_string() const {
  std::ostringstream os;
  bool first = true;
  for (std::uint32_t i = 0; i < precision(); ++i) {
    if (c_[i].is_zero()) continue;
    if (!first) os << " + ";
    os << c_[i].to_string() << "*u^" << i;
    first = false;
  }
  if (first) os << "0";
  os << " + O(u^" << precision() << ")";
  return os.str();
}

TruncatedSeries series_pow(const TruncatedSeries& s, std::uint64_t t) {
  if (!s.constant_term().is_one())
    throw std::invalid_argument("series_pow requires constant term exactly 1");
  if (t == 0) throw std::invalid_argument("series_pow requires t >= 1");
  TruncatedSeries base = s;
  TruncatedSeries r = TruncatedSeries::constant(FieldElement::one(s.field()), s.precision());
  while (t) {
    if (t & 1) r = r * base;
    if (t >>= 1) base = base * base;
  }
  return r;
}

TruncatedSeries series_compose(const TruncatedSeries& f, const TruncatedSeries& g) {
  require_same(f.field(), g.field());
  if (!g.constant_term().is_zero())
    throw std::invalid_argument("series_compose requires v(g) >= 1");
  SeriesValuation vg = g.valuation();
  const std::uint64_t vgn = vg.determinate() ? vg.value() : g.precision();
  const std::uint32_t n = static_cast<std::uint32_t>(std::max<std::uint64_t>(
      1, std::min<std::uint64_t>(static_cast<std::uint64_t>(f.precision()) * vgn,
                                 g.precision())));
  TruncatedSeries gn = g.truncated(std::min(n, g.precision()));
  TruncatedSeries acc = TruncatedSeries::constant(FieldElement::zero(f.field()), n);
  for (std::uint32_t i = f.precision(); i-- > 0;) {
    acc = (acc * gn).truncated(std::min(n, acc.precision()));
    acc = acc + TruncatedSeries::constant(f.coeff(i), n);
  }
  return acc.truncated(std::min(n, acc.precision()));
}

TruncatedSeries series_sqrt(const TruncatedSeries& s) {
  const FieldElement c0 = s.constant_term();
  if (c0.is_zero())
    throw std::domain_error("series_sqrt: zero constant term; factor out even powers first");
  if (!is_square(c0))
    throw std::domain_error("series_sqrt: constant term is a non-square; lift to F_{p^{2m}}");
  FieldElement r0 = *sqrt_in_field(c0);  // first square root in canonical order
  const std::uint32_t n = s.precision();
  FieldElement half = FieldElement::from_int(s.field(), 2).inverse();
  TruncatedSeries r = TruncatedSeries::constant(r0, n);
  // Newton: r <- (r + s/r)/2, quadratic convergence; a few fixed-precision
  // sweeps are ample at these sizes.
  std::uint32_t steps = 1;
  while ((1u << steps) < n) ++steps;
  for (std::uint32_t i = 0; i <= steps; ++i) r = (r + s / r) * half;
  if (!(r * r).equal_to_precision(s, n))
    throw std::logic_error("series_sqrt: Newton iteration failed to converge");
  return r;
}

SeriesValuation series_valuation(const TruncatedSeries& s) { return s.valuation(); }

}  // namespace ssv
