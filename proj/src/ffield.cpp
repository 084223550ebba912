#include "ssv/ffield.hpp"

#include <algorithm>
#include <map>
#include <memory>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <tuple>

namespace ssv {

namespace {

bool is_prime_u32(std::uint32_t n) {
  if (n < 2) return false;
  for (std::uint32_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

std::uint64_t pow_u64(std::uint64_t b, std::uint32_t e) {
  std::uint64_t r = 1;
  while (e--) r *= b;
  return r;
}

[[noreturn]] void fail(const std::string& what) { throw std::invalid_argument(what); }

// Raw dense polynomials over F_p, used only while constructing a modulus
// (no FieldDescriptor exists yet at that point).
using Raw = std::vector<std::uint32_t>;

void raw_normalize(Raw& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

Raw raw_rem(Raw a, const Raw& b, std::uint32_t p) {  // b monic
  raw_normalize(a);
  const std::size_t db = b.size() - 1;
  while (a.size() >= b.size()) {
    std::uint64_t lead = a.back();
    std::size_t shift = a.size() - 1 - db;
    for (std::size_t i = 0; i <= db; ++i) {
      std::uint64_t sub = lead * b[i] % p;
      a[shift + i] = static_cast<std::uint32_t>((a[shift + i] + p - sub) % p);
    }
    raw_normalize(a);
  }
  return a;
}

bool raw_irreducible(const Raw& f, std::uint32_t p) {
  const std::size_t m = f.size() - 1;
  for (std::size_t d = 1; d <= m / 2; ++d) {
    std::uint64_t count = pow_u64(p, static_cast<std::uint32_t>(d));
    for (std::uint64_t idx = 0; idx < count; ++idx) {
      Raw g(d + 1, 0);
      std::uint64_t v = idx;
      for (std::size_t i = 0; i < d; ++i) {
        g[i] = static_cast<std::uint32_t>(v % p);
        v /= p;
      }
      g[d] = 1;
      if (raw_rem(f, g, p).empty()) return false;
    }
  }
  return true;
}

struct Registry {
  std::mutex mu;
  std::map<std::pair<std::uint32_t, std::uint32_t>, std::unique_ptr<FieldDescriptor>> fields;
  // (p, m_src, m_tgt) -> image of the source generator in the target field.
  std::map<std::tuple<std::uint32_t, std::uint32_t, std::uint32_t>, FieldElement> gen_images;
};

Registry& registry() {
  static Registry r;
  return r;
}

void require_field(Field f) {
  if (f == nullptr) throw std::invalid_argument("operation on a null field element");
}

void require_same(Field a, Field b) {
  require_field(a);
  require_field(b);
  if (a != b)
    throw std::invalid_argument("mixed-field arithmetic between " + a->name() + " and " +
                                b->name() + "; use embed()");
}

constexpr std::uint64_t kRootScanCap = 30000;

}  // namespace

std::string FieldDescriptor::name() const {
  std::ostringstream os;
  os << "F_" << p;
  if (m > 1) os << "^" << m;
  return os.str();
}

Field construct_field(std::uint32_t p, std::uint32_t m) {
  if (!is_prime_u32(p) || p < 5) fail("construct_field: p must be a prime >= 5");
  if (m != 1 && m != 2 && m != 4) fail("construct_field: extension degree must be 1, 2 or 4");

  Registry& reg = registry();
  std::lock_guard<std::mutex> lock(reg.mu);
  auto it = reg.fields.find({p, m});
  if (it != reg.fields.end()) return it->second.get();

  auto desc = std::make_unique<FieldDescriptor>();
  desc->p = p;
  desc->m = m;
  desc->order = pow_u64(p, m);
  if (m == 1) {
    desc->modulus = {0, 1, 0, 0, 0};  // "x" convention for the prime field
  } else {
    // First irreducible in lexicographic order on (a_0, ..., a_{m-1}), a_0
    // compared first: enumerate with a_0 as the most significant base-p digit.
    bool found = false;
    const std::uint64_t count = pow_u64(p, m);
    for (std::uint64_t idx = 0; idx < count && !found; ++idx) {
      Raw f(m + 1, 0);
      std::uint64_t v = idx;
      for (std::uint32_t i = 0; i < m; ++i) {
        f[m - 1 - i] = static_cast<std::uint32_t>(v % p);  // a_0 gets the top digit
        v /= p;
      }
      f[m] = 1;
      if (raw_irreducible(f, p)) {
        for (std::uint32_t i = 0; i <= m; ++i) desc->modulus[i] = f[i];
        found = true;
      }
    }
    if (!found) throw std::logic_error("construct_field: no irreducible polynomial found");
  }
  Field out = desc.get();
  reg.fields.emplace(std::make_pair(p, m), std::move(desc));
  return out;
}

FieldElement FieldElement::zero(Field f) {
  require_field(f);
  FieldElement e;
  e.field_ = f;
  return e;
}

FieldElement FieldElement::one(Field f) { return from_int(f, 1); }

FieldElement FieldElement::from_int(Field f, std::int64_t v) {
  FieldElement e = zero(f);
  std::int64_t r = v % static_cast<std::int64_t>(f->p);
  if (r < 0) r += f->p;
  e.c_[0] = static_cast<std::uint32_t>(r);
  return e;
}

FieldElement FieldElement::from_coefficients(Field f, const std::vector<std::int64_t>& coeffs) {
  require_field(f);
  if (coeffs.size() > f->m) fail("from_coefficients: too many coefficients for " + f->name());
  FieldElement e = zero(f);
  for (std::size_t i = 0; i < coeffs.size(); ++i) {
    std::int64_t r = coeffs[i] % static_cast<std::int64_t>(f->p);
    if (r < 0) r += f->p;
    e.c_[i] = static_cast<std::uint32_t>(r);
  }
  return e;
}

FieldElement FieldElement::generator(Field f) {
  require_field(f);
  FieldElement e = zero(f);
  if (f->m > 1) e.c_[1] = 1;
  return e;
}

bool FieldElement::is_zero() const {
  require_field(field_);
  for (std::uint32_t i = 0; i < field_->m; ++i)
    if (c_[i] != 0) return false;
  return true;
}

bool FieldElement::is_one() const {
  require_field(field_);
  if (c_[0] != 1) return false;
  for (std::uint32_t i = 1; i < field_->m; ++i)
    if (c_[i] != 0) return false;
  return true;
}

std::vector<std::uint32_t> FieldElement::coefficients() const {
  require_field(field_);
  return std::vector<std::uint32_t>(c_.begin(), c_.begin() + field_->m);
}

FieldElement FieldElement::operator+(const FieldElement& o) const {
  require_same(field_, o.field_);
  FieldElement r = *this;
  for (std::uint32_t i = 0; i < field_->m; ++i) {
    r.c_[i] += o.c_[i];
    if (r.c_[i] >= field_->p) r.c_[i] -= field_->p;
  }
  return r;
}

FieldElement FieldElement::operator-(const FieldElement& o) const {
  require_same(field_, o.field_);
  FieldElement r = *this;
  for (std::uint32_t i = 0; i < field_->m; ++i)
    r.c_[i] = r.c_[i] >= o.c_[i] ? r.c_[i] - o.c_[i] : r.c_[i] + field_->p - o.c_[i];
  return r;
}

FieldElement FieldElement::operator-() const {
  require_field(field_);
  return zero(field_) - *this;
}

FieldElement FieldElement::operator*(const FieldElement& o) const {
  require_same(field_, o.field_);
  const std::uint32_t m = field_->m;
  const std::uint64_t p = field_->p;
  FieldElement r = zero(field_);
  if (m == 1) {
    r.c_[0] = static_cast<std::uint32_t>(static_cast<std::uint64_t>(c_[0]) * o.c_[0] % p);
    return r;
  }
  std::array<std::uint64_t, 7> buf{};
  for (std::uint32_t i = 0; i < m; ++i)
    for (std::uint32_t j = 0; j < m; ++j)
      buf[i + j] += static_cast<std::uint64_t>(c_[i]) * o.c_[j];
  // Fold degrees >= m with the monic modulus: x^m = -sum modulus[j] x^j.
  for (std::uint32_t k = 2 * m - 2; k >= m; --k) {
    std::uint64_t t = buf[k] % p;
    buf[k] = 0;
    if (t == 0) continue;
    for (std::uint32_t j = 0; j < m; ++j) {
      std::uint64_t sub = t * field_->modulus[j] % p;
      buf[k - m + j] = (buf[k - m + j] + p - sub) % p;
    }
  }
  for (std::uint32_t i = 0; i < m; ++i) r.c_[i] = static_cast<std::uint32_t>(buf[i] % p);
  return r;
}

FieldElement FieldElement::operator*(std::int64_t k) const {
  require_field(field_);
  return *this * from_int(field_, k);
}

FieldElement FieldElement::operator/(const FieldElement& o) const { return *this * o.inverse(); }

bool FieldElement::operator==(const FieldElement& o) const {
  require_same(field_, o.field_);
  for (std::uint32_t i = 0; i < field_->m; ++i)
    if (c_[i] != o.c_[i]) return false;
  return true;
}

bool FieldElement::operator<(const FieldElement& o) const {
  require_same(field_, o.field_);
  for (std::uint32_t i = 0; i < field_->m; ++i)
    if (c_[i] != o.c_[i]) return c_[i] < o.c_[i];
  return false;
}

FieldElement FieldElement::pow(std::uint64_t e) const {
  require_field(field_);
  FieldElement base = *this;
  FieldElement r = one(field_);
  while (e) {
    if (e & 1) r = r * base;
    base = base * base;
    e >>= 1;
  }
  return r;
}

FieldElement FieldElement::inverse() const {
  require_field(field_);
  if (is_zero()) throw std::domain_error("inverse of zero in " + field_->name());
  return pow(field_->order - 2);
}

std::string FieldElement::to_string() const {
  require_field(field_);
  std::ostringstream os;
  os << "(";
  for (std::uint32_t i = 0; i < field_->m; ++i) os << (i ? "," : "") << c_[i];
  os << ")";
  return os.str();
}

FieldElement frobenius(const FieldElement& x) {
  require_field(x.field());
  return x.pow(x.field()->p);
}

std::uint64_t element_index(const FieldElement& x) {
  require_field(x.field());
  std::uint64_t idx = 0;
  for (std::uint32_t i = 0; i < x.field()->m; ++i) idx = idx * x.field()->p + x.coeff(i);
  return idx;
}

FieldElement element_from_index(Field f, std::uint64_t index) {
  require_field(f);
  if (index >= f->order) throw std::invalid_argument("element index out of range");
  std::vector<std::int64_t> coeffs(f->m);
  for (std::uint32_t i = 0; i < f->m; ++i) {
    coeffs[f->m - 1 - i] = static_cast<std::int64_t>(index % f->p);
    index /= f->p;
  }
  return FieldElement::from_coefficients(f, coeffs);
}

FieldElement embed(const FieldElement& x, Field target) {
  require_field(x.field());
  require_field(target);
  Field src = x.field();
  if (src == target) return x;
  if (src->p != target->p || target->m % src->m != 0)
    fail("embed: no declared embedding " + src->name() + " -> " + target->name());
  if (src->m == 1) {
    return FieldElement::from_int(target, static_cast<std::int64_t>(x.coeff(0)));
  }
  // Image of the source generator: the first root (canonical order) of the
  // source modulus inside the target field; cached per (p, m_src, m_tgt).
  FieldElement ghat;
  {
    Registry& reg = registry();
    std::lock_guard<std::mutex> lock(reg.mu);
    auto key = std::make_tuple(src->p, src->m, target->m);
    auto it = reg.gen_images.find(key);
    if (it != reg.gen_images.end()) {
      ghat = it->second;
    } else {
      bool found = false;
      for (std::uint64_t i = 0; i < target->order && !found; ++i) {
        FieldElement y = element_from_index(target, i);
        // Evaluate the source modulus at y (Horner, coefficients are ints).
        FieldElement acc = FieldElement::one(target);
        for (std::uint32_t d = src->m; d-- > 0;)
          acc = acc * y + FieldElement::from_int(target, src->modulus[d]);
        if (acc.is_zero()) {
          ghat = y;
          found = true;
        }
      }
      if (!found) throw std::logic_error("embed: source modulus has no root in target");
      reg.gen_images.emplace(key, ghat);
    }
  }
  FieldElement acc = FieldElement::zero(target);
  for (std::uint32_t i = src->m; i-- > 0;)
    acc = acc * ghat + FieldElement::from_int(target, x.coeff(i));
  return acc;
}

bool is_square(const FieldElement& x) {
  require_field(x.field());
  if (x.is_zero()) return true;
  return x.pow((x.field()->order - 1) / 2).is_one();
}

std::optional<FieldElement> sqrt_in_field(const FieldElement& x) {
  require_field(x.field());
  if (x.is_zero()) return x;
  if (!is_square(x)) return std::nullopt;
  for (std::uint64_t i = 0; i < x.field()->order; ++i) {
    FieldElement y = element_from_index(x.field(), i);
    if (y * y == x) return y;
  }
  return std::nullopt;  // unreachable for true squares
}

Poly::Poly(Field f, std::vector<FieldElement> coeffs) : field_(f), c_(std::move(coeffs)) {
  require_field(f);
  for (const FieldElement& e : c_)
    if (e.field() != f) fail("Poly: coefficient from a different field");
  normalize();
}

Poly Poly::from_ints(Field f, const std::vector<std::int64_t>& coeffs) {
  std::vector<FieldElement> v;
  v.reserve(coeffs.size());
  for (std::int64_t c : coeffs) v.push_back(FieldElement::from_int(f, c));
  return Poly(f, std::move(v));
}

void Poly::normalize() {
  while (!c_.empty() && c_.back().is_zero()) c_.pop_back();
}

FieldElement Poly::coeff(std::size_t i) const {
  return i < c_.size() ? c_[i] : FieldElement::zero(field_);
}

FieldElement Poly::leading() const {
  if (c_.empty()) throw std::domain_error("leading coefficient of the zero polynomial");
  return c_.back();
}

Poly Poly::operator+(const Poly& o) const {
  require_same(field_, o.field_);
  std::vector<FieldElement> v(std::max(c_.size(), o.c_.size()), FieldElement::zero(field_));
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = coeff(i) + o.coeff(i);
  return Poly(field_, std::move(v));
}

Poly Poly::operator-(const Poly& o) const {
  require_same(field_, o.field_);
  std::vector<FieldElement> v(std::max(c_.size(), o.c_.size()), FieldElement::zero(field_));
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = coeff(i) - o.coeff(i);
  return Poly(field_, std::move(v));
}

Poly Poly::operator*(const Poly& o) const {
  require_same(field_, o.field_);
  if (is_zero() || o.is_zero()) return Poly(field_);
  std::vector<FieldElement> v(c_.size() + o.c_.size() - 1, FieldElement::zero(field_));
  for (std::size_t i = 0; i < c_.size(); ++i)
    for (std::size_t j = 0; j < o.c_.size(); ++j) v[i + j] += c_[i] * o.c_[j];
  return Poly(field_, std::move(v));
}

Poly Poly::operator*(const FieldElement& k) const {
  require_same(field_, k.field());
  std::vector<FieldElement> v = c_;
  for (FieldElement& e : v) e *= k;
  return Poly(field_, std::move(v));
}

bool Poly::operator==(const Poly& o) const {
  require_same(field_, o.field_);
  if (c_.size() != o.c_.size()) return false;
  for (std::size_t i = 0; i < c_.size(); ++i)
    if (c_[i] != o.c_[i]) return false;
  return true;
}

FieldElement Poly::eval(const FieldElement& x) const {
  require_same(field_, x.field());
  FieldElement acc = FieldElement::zero(field_);
  for (std::size_t i = c_.size(); i-- > 0;) acc = acc * x + c_[i];
  return acc;
}

Poly Poly::derivative() const {
  if (c_.size() <= 1) return Poly(field_);
  std::vector<FieldElement> v(c_.size() - 1, FieldElement::zero(field_));
  for (std::size_t i = 1; i < c_.size(); ++i) v[i - 1] = c_[i] * static_cast<std::int64_t>(i);
  return Poly(field_, std::move(v));
}

Poly Poly::monic() const {
  FieldElement inv = leading().inverse();
  return *this * inv;
}

std::string Poly::to_string() const {
  if (is_zero()) return "0";
  std::ostringstream os;
  for (std::size_t i = c_.size(); i-- > 0;) {
    if (c_[i].is_zero()) continue;
    os << c_[i].to_string() << "*x^" << i;
    if (i) os << " + ";
  }
  return os.str();
}

std::pair<Poly, Poly> poly_divrem(const Poly& f, const Poly& g) {
  require_same(f.field(), g.field());
  if (g.is_zero()) throw std::domain_error("polynomial division by zero");
  Field k = f.field();
  std::vector<FieldElement> rem(f.coefficients());
  const int dg = g.degree();
  if (f.degree() < dg) return {Poly(k), f};
  std::vector<FieldElement> quo(f.degree() - dg + 1, FieldElement::zero(k));
  FieldElement lead_inv = g.leading().inverse();
  for (int i = f.degree(); i >= dg; --i) {
    FieldElement c = rem[i] * lead_inv;
    if (c.is_zero()) continue;
    quo[i - dg] = c;
    for (int j = 0; j <= dg; ++j) rem[i - dg + j] -= c * g.coeff(j);
  }
  return {Poly(k, std::move(quo)), Poly(k, std::move(rem))};
}

Poly poly_gcd(const Poly& a, const Poly& b) {
  Poly x = a, y = b;
  while (!y.is_zero()) {
    Poly r = poly_divrem(x, y).second;
    x = y;
    y = r;
  }
  return x.is_zero() ? x : x.monic();
}

std::vector<FieldElement> poly_roots(const Poly& f, std::uint32_t m) {
  if (f.is_zero()) throw std::invalid_argument("poly_roots: zero polynomial");
  Field src = f.field();
  Field tgt = construct_field(src->p, m);
  if (tgt->order > kRootScanCap)
    throw std::invalid_argument("poly_roots: field too large for the exhaustive scan");
  if (tgt->m % src->m != 0)
    throw std::invalid_argument("poly_roots: coefficient field does not embed in target");
  std::vector<FieldElement> lifted;
  lifted.reserve(f.coefficients().size());
  for (const FieldElement& c : f.coefficients()) lifted.push_back(embed(c, tgt));
  std::vector<FieldElement> roots;
  for (std::uint64_t i = 0; i < tgt->order; ++i) {
    FieldElement x = element_from_index(tgt, i);
    FieldElement acc = FieldElement::zero(tgt);
    for (std::size_t d = lifted.size(); d-- > 0;) acc = acc * x + lifted[d];
    if (acc.is_zero()) roots.push_back(x);
  }
  return roots;  // scan order == canonical order
}

}  // namespace ssv
