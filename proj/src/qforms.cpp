#include "ssv/qforms.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <stdexcept>
#include <string>

namespace ssv {

namespace {

std::uint64_t pow_mod(std::uint64_t b, std::uint64_t e, std::uint64_t p) {
  std::uint64_t r = 1;
  b %= p;
  while (e) {
    if (e & 1) r = r * b % p;
    b = b * b % p;
    e >>= 1;
  }
  return r;
}

std::uint64_t inv_mod(std::uint64_t a, std::uint64_t p) {
  if (a % p == 0) throw std::domain_error("inverse of zero mod p");
  return pow_mod(a, p - 2, p);
}

// Dense truncated product of mod-p coefficient vectors.  Accumulates in
// 64 bits and reduces once per output coefficient; term counts and p^2 are
// far below overflow at these sizes.
std::vector<std::uint32_t> mul_mod_series(const std::vector<std::uint32_t>& a,
                                          const std::vector<std::uint32_t>& b,
                                          std::uint32_t p, std::size_t M) {
  const std::size_t n = std::min(M, a.size() + b.size() - 1);
  std::vector<std::uint64_t> acc(n, 0);
  for (std::size_t i = 0; i < a.size() && i < n; ++i) {
    if (a[i] == 0) continue;
    const std::uint64_t ai = a[i];
    const std::size_t jmax = std::min(b.size(), n - i);
    for (std::size_t j = 0; j < jmax; ++j) acc[i + j] += ai * b[j];
  }
  std::vector<std::uint32_t> out(n);
  for (std::size_t k = 0; k < n; ++k) out[k] = static_cast<std::uint32_t>(acc[k] % p);
  return out;
}

void require_same_shape(const QExpansion& x, const QExpansion& y, bool same_weight) {
  if (x.p != y.p) throw std::invalid_argument("QExpansion arithmetic across different primes");
  if (same_weight && (x.weight != y.weight || x.level != y.level))
    throw std::invalid_argument("QExpansion addition requires equal weight and level");
}

struct BernoulliCache {
  std::mutex mu;
  std::vector<BigRat> b;  // b[n] = B_n
};

BernoulliCache& bernoulli_cache() {
  static BernoulliCache c;
  return c;
}

// sigma_{k-1}(n) as an exact integer.
BigInt sigma_big(unsigned kminus1, std::size_t n) {
  BigInt s = 0;
  for (std::size_t d = 1; d * d <= n; ++d) {
    if (n % d) continue;
    BigInt dp = 1, ep = 1;
    for (unsigned i = 0; i < kminus1; ++i) dp *= static_cast<unsigned long long>(d);
    std::size_t e = n / d;
    for (unsigned i = 0; i < kminus1; ++i) ep *= static_cast<unsigned long long>(e);
    s += dp;
    if (e != d) s += ep;
  }
  return s;
}

}  // namespace

BigRat bernoulli(unsigned n) {
  BernoulliCache& cache = bernoulli_cache();
  std::lock_guard<std::mutex> lock(cache.mu);
  if (cache.b.empty()) {
    cache.b.push_back(BigRat(1));
    cache.b.push_back(BigRat(-1, 2));
  }
  while (cache.b.size() <= n) {
    // sum_{j=0}^{m} binom(m+1, j) B_j = 0 for m >= 1.
    const unsigned m = static_cast<unsigned>(cache.b.size());
    BigRat acc = 0;
    BigInt binom = 1;  // binom(m+1, j), updated incrementally
    for (unsigned j = 0; j < m; ++j) {
      acc += BigRat(binom) * cache.b[j];
      binom = binom * (m + 1 - j) / (j + 1);
    }
    cache.b.push_back(-acc / BigRat(m + 1));
  }
  return cache.b[n];
}

std::vector<BigInt> delta_coefficients_z(std::size_t M) {
  if (M < 2) throw std::invalid_argument("delta_coefficients_z: M >= 2 required");
  // eta-product: prod (1-q^n) via pentagonal numbers, then the 24th power,
  // then the shift by q.
  std::vector<BigInt> f(M, 0);
  f[0] = 1;
  for (long long k = 1;; ++k) {
    long long g1 = k * (3 * k - 1) / 2;
    long long g2 = k * (3 * k + 1) / 2;
    if (g1 >= static_cast<long long>(M) && g2 >= static_cast<long long>(M)) break;
    BigInt sign = (k % 2 == 0) ? 1 : -1;
    if (g1 < static_cast<long long>(M)) f[g1] += sign;
    if (g2 < static_cast<long long>(M)) f[g2] += sign;
  }
  auto mul = [&](const std::vector<BigInt>& x, const std::vector<BigInt>& y) {
    std::vector<BigInt> out(M, 0);
    for (std::size_t i = 0; i < M; ++i) {
      if (x[i] == 0) continue;
      for (std::size_t j = 0; j + i < M; ++j) {
        if (y[j] == 0) continue;
        out[i + j] += x[i] * y[j];
      }
    }
    return out;
  };
  std::vector<BigInt> f2 = mul(f, f);
  std::vector<BigInt> f4 = mul(f2, f2);
  std::vector<BigInt> f8 = mul(f4, f4);
  std::vector<BigInt> f16 = mul(f8, f8);
  std::vector<BigInt> f24 = mul(f16, f8);
  std::vector<BigInt> out(M, 0);
  for (std::size_t i = 0; i + 1 < M; ++i) out[i + 1] = f24[i];
  return out;
}

std::vector<BigRat> eisenstein_coefficients_q(unsigned k, std::size_t M) {
  if (k < 2 || k % 2 != 0) throw std::invalid_argument("eisenstein: k must be even >= 2");
  if (M < 1) throw std::invalid_argument("eisenstein: M >= 1 required");
  BigRat factor = BigRat(-2 * static_cast<long long>(k)) / bernoulli(k);
  std::vector<BigRat> out(M, BigRat(0));
  out[0] = 1;
  for (std::size_t n = 1; n < M; ++n) out[n] = factor * BigRat(sigma_big(k - 1, n));
  return out;
}

std::uint32_t reduce_mod_p(const BigRat& x, std::uint32_t p) {
  BigInt num = boost::multiprecision::numerator(x);
  BigInt den = boost::multiprecision::denominator(x);
  BigInt pn = p;
  if (den % pn == 0)
    throw std::domain_error("rational with denominator divisible by p cannot be reduced");
  std::uint64_t n64 = static_cast<std::uint64_t>((num % pn + pn) % pn);
  std::uint64_t d64 = static_cast<std::uint64_t>((den % pn + pn) % pn);
  return static_cast<std::uint32_t>(n64 * inv_mod(d64, p) % p);
}

bool QExpansion::is_zero() const {
  for (std::uint32_t c : a)
    if (c) return false;
  return true;
}

QExpansion QExpansion::truncated(std::size_t n) const {
  if (n == 0 || n > a.size()) throw std::invalid_argument("QExpansion: bad truncation");
  QExpansion r = *this;
  r.a.resize(n);
  return r;
}

QExpansion QExpansion::operator+(const QExpansion& o) const {
  require_same_shape(*this, o, true);
  QExpansion r = *this;
  r.a.resize(std::min(a.size(), o.a.size()));
  for (std::size_t i = 0; i < r.a.size(); ++i) r.a[i] = (a[i] + o.a[i]) % p;
  return r;
}

QExpansion QExpansion::operator-(const QExpansion& o) const {
  require_same_shape(*this, o, true);
  QExpansion r = *this;
  r.a.resize(std::min(a.size(), o.a.size()));
  for (std::size_t i = 0; i < r.a.size(); ++i) r.a[i] = (a[i] + p - o.a[i]) % p;
  return r;
}

QExpansion QExpansion::operator*(const QExpansion& o) const {
  require_same_shape(*this, o, false);
  QExpansion r;
  r.p = p;
  r.weight = weight + o.weight;
  r.level = std::max(level, o.level);
  std::size_t M = std::min(a.size(), o.a.size());
  r.a = mul_mod_series(a, o.a, p, M);
  return r;
}

QExpansion QExpansion::scaled(std::uint32_t c) const {
  QExpansion r = *this;
  for (std::uint32_t& x : r.a) x = static_cast<std::uint32_t>(static_cast<std::uint64_t>(x) * c % p);
  return r;
}

QExpansion QExpansion::pow(std::uint64_t t) const {
  if (t == 0) throw std::invalid_argument("QExpansion::pow requires t >= 1");
  QExpansion base = *this;
  QExpansion result;
  bool have = false;
  while (t) {
    if (t & 1) {
      result = have ? result * base : base;
      have = true;
    }
    if (t >>= 1) base = base * base;
  }
  return result;
}

bool QExpansion::operator==(const QExpansion& o) const {
  return p == o.p && weight == o.weight && level == o.level && a == o.a;
}

QExpansion v2(const QExpansion& f) {
  QExpansion r;
  r.p = f.p;
  r.weight = f.weight;
  r.level = 2;
  r.a.assign(2 * f.a.size() - 1, 0);
  for (std::size_t i = 0; i < f.a.size(); ++i) r.a[2 * i] = f.a[i];
  return r;
}

std::size_t ord_q(const QExpansion& f) {
  for (std::size_t i = 0; i < f.a.size(); ++i)
    if (f.a[i]) return i;
  throw std::domain_error("ord_q: expansion vanishes to its precision (indeterminate)");
}

QExpansion delta_expansion(std::uint32_t p, std::size_t M) {
  std::vector<BigInt> z = delta_coefficients_z(M);
  QExpansion r;
  r.p = p;
  r.weight = 12;
  r.level = 1;
  r.a.resize(M);
  BigInt pn = p;
  for (std::size_t i = 0; i < M; ++i)
    r.a[i] = static_cast<std::uint32_t>(static_cast<std::uint64_t>((z[i] % pn + pn) % pn));
  return r;
}

QExpansion eisenstein_expansion(unsigned k, std::uint32_t p, std::size_t M) {
  std::vector<BigRat> q = eisenstein_coefficients_q(k, M);
  QExpansion r;
  r.p = p;
  r.weight = k;
  r.level = 1;
  r.a.resize(M);
  for (std::size_t i = 0; i < M; ++i) r.a[i] = reduce_mod_p(q[i], p);
  return r;
}

QExpansion level2_weight2_generator(std::uint32_t p, std::size_t M) {
  // 2 E2(2t) - E2(t) with E2 = 1 - 24 sum sigma_1(n) q^n: the E2 pieces are
  // only ever used inside this combination.
  QExpansion r;
  r.p = p;
  r.weight = 2;
  r.level = 2;
  r.a.assign(M, 0);
  r.a[0] = 1;
  for (std::size_t n = 1; n < M; ++n) {
    // coefficient: 24 sigma_1(n) - 48 sigma_1(n/2)  (second term for even n)
    std::uint64_t s1 = 0, s1half = 0;
    for (std::size_t d = 1; d <= n; ++d)
      if (n % d == 0) s1 += d;
    if (n % 2 == 0)
      for (std::size_t d = 1; d <= n / 2; ++d)
        if ((n / 2) % d == 0) s1half += d;
    std::uint64_t v = (24 * (s1 % p) % p + 2 * p * p - 48 * (s1half % p) % p) % p;
    r.a[n] = static_cast<std::uint32_t>(v);
  }
  return r;
}

QExpansion level2_weight4_generator(std::uint32_t p, std::size_t M) {
  QExpansion r = eisenstein_expansion(4, p, M);
  r.level = 2;
  return r;
}

ComparisonSeries l2_comparison_series(std::uint32_t p, std::uint64_t t, std::size_t M,
                                      bool negate_epsilon) {
  if (p < 5) throw std::invalid_argument("l2_comparison_series: p >= 5 required");
  if ((12 * t) % (p - 1) != 0)
    throw std::invalid_argument("l2_comparison_series: (p-1) must divide 12t");
  if (M < 3 * t + 2)
    throw std::invalid_argument("l2_comparison_series: M below the Sturm precision 3t + 2");
  QExpansion delta_t = delta_expansion(p, M).pow(t);
  delta_t.level = 2;
  QExpansion lhs = v2(delta_t).truncated(M);
  std::uint32_t eps = static_cast<std::uint32_t>(inv_mod(pow_mod(2, 6 * t, p), p));
  if (negate_epsilon) eps = (p - eps) % p;
  ComparisonSeries out{lhs - delta_t.scaled(eps), eps};
  return out;
}

namespace {

// Shared power tables for the level-2 generators, keyed by (p, M).
struct PowerTable {
  std::vector<std::vector<std::uint32_t>> m2;  // m2[a] = M2^a
  std::vector<std::vector<std::uint32_t>> m4;  // m4[b] = M4^b
};

struct BasisCaches {
  std::mutex mu;
  std::map<std::pair<std::uint32_t, std::size_t>, PowerTable> powers;
  std::map<std::tuple<std::uint32_t, std::int64_t, std::size_t>, FormSpaceBasis> bases;
};

BasisCaches& basis_caches() {
  static BasisCaches c;
  return c;
}

const std::size_t kBasisCacheCap = 64;

// Extends the shared power tables so that M2^a, M4^b are available.
const PowerTable& powers_for(std::uint32_t p, std::size_t M, std::size_t amax,
                             std::size_t bmax) {
  BasisCaches& c = basis_caches();
  PowerTable& t = c.powers[{p, M}];
  if (t.m2.empty()) {
    t.m2.push_back(std::vector<std::uint32_t>(M, 0));
    t.m2[0][0] = 1;
    t.m4.push_back(t.m2[0]);
  }
  if (t.m2.size() <= amax) {
    std::vector<std::uint32_t> gen = level2_weight2_generator(p, M).a;
    while (t.m2.size() <= amax) t.m2.push_back(mul_mod_series(t.m2.back(), gen, p, M));
  }
  if (t.m4.size() <= bmax) {
    std::vector<std::uint32_t> gen = level2_weight4_generator(p, M).a;
    while (t.m4.size() <= bmax) t.m4.push_back(mul_mod_series(t.m4.back(), gen, p, M));
  }
  return t;
}

struct Echelon {
  std::vector<std::vector<std::uint32_t>> rows;
  std::vector<std::size_t> pivots;
};

// Reduced row echelon form mod p; returns rows in pivot order.
Echelon echelonize(std::vector<std::vector<std::uint32_t>> rows, std::uint32_t p) {
  Echelon e;
  if (rows.empty()) return e;
  const std::size_t cols = rows[0].size();
  std::size_t rank = 0;
  for (std::size_t col = 0; col < cols && rank < rows.size(); ++col) {
    std::size_t pivot = rank;
    while (pivot < rows.size() && rows[pivot][col] == 0) ++pivot;
    if (pivot == rows.size()) continue;
    std::swap(rows[rank], rows[pivot]);
    std::uint64_t inv = inv_mod(rows[rank][col], p);
    for (std::size_t j = col; j < cols; ++j)
      rows[rank][j] = static_cast<std::uint32_t>(rows[rank][j] * inv % p);
    for (std::size_t r = 0; r < rows.size(); ++r) {
      if (r == rank || rows[r][col] == 0) continue;
      std::uint64_t f = p - rows[r][col];
      for (std::size_t j = col; j < cols; ++j)
        rows[r][j] = static_cast<std::uint32_t>((rows[r][j] + f * rows[rank][j]) % p);
    }
    e.pivots.push_back(col);
    ++rank;
  }
  rows.resize(rank);
  e.rows = std::move(rows);
  return e;
}

FormSpaceBasis build_level2_basis(std::int64_t k, std::uint32_t p, std::size_t M) {
  if (k < 0 || k % 2 != 0) throw std::invalid_argument("level2_basis: weight must be even >= 0");
  if (M < static_cast<std::size_t>(k / 4) + 2)
    throw std::invalid_argument("level2_basis: precision below floor(k/4) + 2");
  std::vector<std::vector<std::uint32_t>> rows;
  std::size_t amax = 0, bmax = 0;
  for (std::int64_t b = 0; 4 * b <= k; ++b) {
    amax = std::max<std::size_t>(amax, static_cast<std::size_t>((k - 4 * b) / 2));
    bmax = std::max<std::size_t>(bmax, static_cast<std::size_t>(b));
  }
  BasisCaches& c = basis_caches();
  {
    std::lock_guard<std::mutex> lock(c.mu);
    const PowerTable& t = powers_for(p, M, amax, bmax);
    for (std::int64_t b = 0; 4 * b <= k; ++b) {
      std::int64_t a = (k - 4 * b) / 2;
      rows.push_back(mul_mod_series(t.m2[a], t.m4[b], p, M));
    }
  }
  const std::size_t monomials = rows.size();
  Echelon e = echelonize(std::move(rows), p);
  if (e.rows.size() != monomials)
    throw std::runtime_error("level2_basis: monomials dependent at precision " +
                             std::to_string(M) + "; raise the precision");
  return FormSpaceBasis(k, p, M, std::move(e.rows), std::move(e.pivots));
}

}  // namespace

FormSpaceBasis::FormSpaceBasis(std::int64_t weight, std::uint32_t p, std::size_t precision,
                               std::vector<std::vector<std::uint32_t>> echelon_rows,
                               std::vector<std::size_t> pivots)
    : weight_(weight), p_(p), precision_(precision), rows_(std::move(echelon_rows)),
      pivots_(std::move(pivots)) {
  for (std::size_t i = 1; i < pivots_.size(); ++i)
    if (pivots_[i] <= pivots_[i - 1]) throw std::logic_error("echelon pivots not increasing");
}

std::vector<QExpansion> FormSpaceBasis::rows() const {
  std::vector<QExpansion> out;
  out.reserve(rows_.size());
  for (const auto& r : rows_) {
    QExpansion q;
    q.p = p_;
    q.weight = weight_;
    q.level = 2;
    q.a = r;
    out.push_back(std::move(q));
  }
  return out;
}

bool FormSpaceBasis::contains(const QExpansion& g) const {
  if (g.p != p_) throw std::invalid_argument("contains: mismatched prime");
  return contains(g.a);
}

bool FormSpaceBasis::contains(const std::vector<std::uint32_t>& coeffs) const {
  if (coeffs.size() < precision_)
    throw std::invalid_argument("contains: expansion shorter than the basis precision");
  std::vector<std::uint32_t> v(coeffs.begin(), coeffs.begin() + precision_);
  for (std::size_t r = 0; r < rows_.size(); ++r) {
    std::uint32_t c = v[pivots_[r]];
    if (c == 0) continue;
    std::uint64_t f = p_ - c;
    for (std::size_t j = pivots_[r]; j < precision_; ++j)
      v[j] = static_cast<std::uint32_t>((v[j] + f * rows_[r][j]) % p_);
  }
  return std::all_of(v.begin(), v.end(), [](std::uint32_t x) { return x == 0; });
}

FormSpaceBasis level2_basis(std::int64_t k, std::uint32_t p, std::size_t M) {
  BasisCaches& c = basis_caches();
  {
    std::lock_guard<std::mutex> lock(c.mu);
    auto it = c.bases.find({p, k, M});
    if (it != c.bases.end()) return it->second;
  }
  FormSpaceBasis b = build_level2_basis(k, p, M);
  {
    std::lock_guard<std::mutex> lock(c.mu);
    if (c.bases.size() < kBasisCacheCap) c.bases.emplace(std::make_tuple(p, k, M), b);
  }
  return b;
}

HasseDivisibility max_hasse_divisibility(const QExpansion& g, std::uint32_t p) {
  if (g.level != 2) throw std::invalid_argument("max_hasse_divisibility: level-2 input required");
  if (g.weight < 0 || g.weight % 2 != 0)
    throw std::invalid_argument("max_hasse_divisibility: even weight required");
  const std::int64_t k = g.weight;
  const std::size_t sturm = static_cast<std::size_t>(k / 4) + 2;
  if (g.precision() < sturm)
    throw std::invalid_argument("max_hasse_divisibility: precision below the Sturm bound " +
                                std::to_string(sturm));
  QExpansion gs = g.truncated(sturm);
  if (gs.is_zero())
    throw std::runtime_error(
        "max_hasse_divisibility: expansion indistinguishable from 0 at the working precision");
  for (std::int64_t j = k / (p - 1); j >= 0; --j) {
    std::int64_t w = k - j * static_cast<std::int64_t>(p - 1);
    FormSpaceBasis basis = build_level2_basis(w, p, sturm);
    if (basis.contains(gs.a)) return {static_cast<std::uint64_t>(j), sturm};
  }
  throw std::runtime_error("max_hasse_divisibility: expansion not in the weight-k span");
}

}  // namespace ssv
