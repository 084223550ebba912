#pragma once

// Exact arithmetic in F_p, F_{p^2}, F_{p^4} for small odd primes p >= 5,
// with deterministic tower construction, univariate polynomials and
// exhaustive root finding.  All fields are tiny (p^m <= ~3e4); everything
// here favors auditability over asymptotics.

#include <array>
#include <stdexcept>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace ssv {

// Immutable descriptor of F_{p^m}.  Instances are interned: construct_field
// always returns the same pointer for the same (p, m), and the pointed-to
// object lives for the duration of the process.  Elements carry this pointer,
// so pointer equality is field equality.
struct FieldDescriptor {
  std::uint32_t p = 0;
  std::uint32_t m = 0;
  // Monic defining polynomial, modulus[i] = coefficient of x^i, degree m.
  // For m = 1 the conventional modulus is "x".
  std::array<std::uint32_t, 5> modulus{};
  std::uint64_t order = 0;  // p^m

  std::string name() const;  // "F_{p^m}"
};

using Field = const FieldDescriptor*;

// Deterministic construction: the modulus is the first monic irreducible
// polynomial of degree m in lexicographic order on (a_0, ..., a_{m-1}),
// a_0 compared first.  Irreducibility is certified by trial division
// against every monic polynomial of degree <= m/2.
// Throws std::invalid_argument unless p is a prime >= 5 and m is 1, 2 or 4.
Field construct_field(std::uint32_t p, std::uint32_t m);

class FieldElement {
 public:
  FieldElement() = default;  // null element; using it in arithmetic throws

  static FieldElement zero(Field f);
  static FieldElement one(Field f);
  static FieldElement from_int(Field f, std::int64_t v);
  // Element with residue coefficients (a_0, ..., a_{m-1}); values are
  // reduced mod p.  Missing trailing coefficients are zero.
  static FieldElement from_coefficients(Field f, const std::vector<std::int64_t>& coeffs);
  // The class of the defining variable x (zero for m = 1, where F_p = Z/p).
  static FieldElement generator(Field f);

  Field field() const { return field_; }
  bool is_zero() const;
  bool is_one() const;

  // Coefficients (a_0, ..., a_{m-1}) of the residue, each in [0, p).
  std::vector<std::uint32_t> coefficients() const;
  std::uint32_t coeff(std::uint32_t i) const { return c_[i]; }

  FieldElement operator+(const FieldElement& o) const;
  FieldElement operator-(const FieldElement& o) const;
  FieldElement operator*(const FieldElement& o) const;
  FieldElement operator/(const FieldElement& o) const;
  FieldElement operator-() const;
  FieldElement operator*(std::int64_t k) const;

  FieldElement& operator+=(const FieldElement& o) { return *this = *this + o; }
  FieldElement& operator-=(const FieldElement& o) { return *this = *this - o; }
  FieldElement& operator*=(const FieldElement& o) { return *this = *this * o; }

  bool operator==(const FieldElement& o) const;
  bool operator!=(const FieldElement& o) const { return !(*this == o); }

  // Canonical total order: lexicographic on (a_0, ..., a_{m-1}), a_0 first.
  // Every "first root" / "first square root" convention in this project
  // refers to this order.
  bool operator<(const FieldElement& o) const;

  FieldElement inverse() const;  // throws std::domain_error on zero
  FieldElement pow(std::uint64_t e) const;

  std::string to_string() const;

 private:
  friend FieldElement frobenius(const FieldElement&);
  Field field_ = nullptr;
  std::array<std::uint32_t, 4> c_{};
};

// x -> x^p.  Applying it m times is the identity.
FieldElement frobenius(const FieldElement& x);

// Rank of x in the canonical order, in [0, p^m), and its inverse.
std::uint64_t element_index(const FieldElement& x);
FieldElement element_from_index(Field f, std::uint64_t index);

// The declared embedding F_{p^a} -> F_{p^b} for a | b.  The image of the
// source generator is the first root (canonical order) of the source modulus
// in the target field; this makes cross-field comparisons deterministic.
// Any other mixed-field arithmetic is an error, never an implicit coercion.
FieldElement embed(const FieldElement& x, Field target);

bool is_square(const FieldElement& x);  // Euler criterion; 0 is a square
// First square root in the canonical order, or nullopt for non-squares.
std::optional<FieldElement> sqrt_in_field(const FieldElement& x);

// Dense univariate polynomial over a field, normalized (no trailing zeros).
class Poly {
 public:
  // degree() of the zero polynomial
  static constexpr int kZeroDegree = -1;

  explicit Poly(Field f) : field_(f) {}
  Poly(Field f, std::vector<FieldElement> coeffs);
  static Poly from_ints(Field f, const std::vector<std::int64_t>& coeffs);

  Field field() const { return field_; }
  int degree() const { return static_cast<int>(c_.size()) - 1; }
  bool is_zero() const { return c_.empty(); }
  FieldElement coeff(std::size_t i) const;  // zero beyond the degree
  const std::vector<FieldElement>& coefficients() const { return c_; }
  FieldElement leading() const;  // throws on the zero polynomial

  Poly operator+(const Poly& o) const;
  Poly operator-(const Poly& o) const;
  Poly operator*(const Poly& o) const;
  Poly operator*(const FieldElement& k) const;
  bool operator==(const Poly& o) const;
  bool operator!=(const Poly& o) const { return !(*this == o); }

  FieldElement eval(const FieldElement& x) const;
  Poly derivative() const;
  Poly monic() const;  // throws on the zero polynomial

  std::string to_string() const;

 private:
  Field field_;
  std::vector<FieldElement> c_;
  void normalize();
};

// Euclidean division: f = q*g + r with deg r < deg g.  g must be nonzero.
std::pair<Poly, Poly> poly_divrem(const Poly& f, const Poly& g);
// Monic gcd; gcd(0, 0) is the zero polynomial.
Poly poly_gcd(const Poly& a, const Poly& b);

// All roots of f in F_{p^m} by exhaustive scan, sorted in canonical order.
// Multiplicity is not reported.  The coefficient field of f must embed in
// F_{p^m}.  Throws on the zero polynomial and when p^m exceeds the scan cap
// (3e4; the scan is the chosen algorithm and it stays trivial at that size).
std::vector<FieldElement> poly_roots(const Poly& f, std::uint32_t m);

}  // namespace ssv
