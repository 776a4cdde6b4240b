#pragma once

// Exact scalar fields used throughout the library: the rationals (GMP) and
// word-sized prime fields. Generic algorithms are templated on a field
// descriptor `F` exposing `F::Element`, `zero()`, `one()`, `from_integer()`,
// `from_rational()`, `is_zero()` and `to_string()`.

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <gmpxx.h>

#include <Eigen/Core>

namespace qrec {

using Integer = mpz_class;
using Rational = mpq_class;

/// Element of Z/pZ for a prime p < 2^63. The modulus travels with the value so
/// elements work inside Eigen containers; a default-constructed element is a
/// modulus-free zero that adopts the modulus of its first operand partner.
class ModInt {
 public:
  ModInt() = default;
  ModInt(std::uint64_t value, std::uint64_t modulus)
      : v_(modulus ? value % modulus : value), p_(modulus) {}

  std::uint64_t value() const noexcept { return v_; }
  std::uint64_t modulus() const noexcept { return p_; }

  ModInt inverse() const;

  ModInt& operator+=(const ModInt& o) {
    adopt(o);
    v_ += o.v_;
    if (v_ >= p_) v_ -= p_;
    return *this;
  }
  ModInt& operator-=(const ModInt& o) {
    adopt(o);
    v_ = v_ >= o.v_ ? v_ - o.v_ : v_ + p_ - o.v_;
    return *this;
  }
  ModInt& operator*=(const ModInt& o) {
    adopt(o);
    v_ = static_cast<std::uint64_t>(static_cast<unsigned __int128>(v_) * o.v_ % p_);
    return *this;
  }
  ModInt& operator/=(const ModInt& o) {
    adopt(o);
    return *this *= o.inverse();
  }

  friend ModInt operator+(ModInt a, const ModInt& b) { return a += b; }
  friend ModInt operator-(ModInt a, const ModInt& b) { return a -= b; }
  friend ModInt operator*(ModInt a, const ModInt& b) { return a *= b; }
  friend ModInt operator/(ModInt a, const ModInt& b) { return a /= b; }
  ModInt operator-() const { return ModInt(v_ ? p_ - v_ : 0, p_); }

  friend bool operator==(const ModInt& a, const ModInt& b) { return a.v_ == b.v_; }

 private:
  void adopt(const ModInt& o) {
    if (p_ == 0) p_ = o.p_;
  }

  std::uint64_t v_ = 0;
  std::uint64_t p_ = 0;
};

struct RationalField {
  using Element = Rational;

  Element zero() const { return Element(0); }
  Element one() const { return Element(1); }
  Element from_integer(const Integer& n) const { return Element(n); }
  Element from_rational(const Rational& x) const { return x; }
  bool is_zero(const Element& x) const { return sgn(x) == 0; }
  std::string to_string(const Element& x) const { return x.get_str(); }
  std::string name() const { return "rational"; }
};

struct PrimeField {
  using Element = ModInt;

  explicit PrimeField(std::uint64_t p);

  std::uint64_t modulus;

  Element zero() const { return Element(0, modulus); }
  Element one() const { return Element(1, modulus); }
  Element from_integer(const Integer& n) const;
  /// Throws Error(invalid_input) when the denominator vanishes mod p.
  Element from_rational(const Rational& x) const;
  bool is_zero(const Element& x) const { return x.value() == 0; }
  std::string to_string(const Element& x) const { return std::to_string(x.value()); }
  std::string name() const { return "mod " + std::to_string(modulus); }
};

/// Deterministic Miller-Rabin for 64-bit integers.
bool is_prime(std::uint64_t n);

/// Reproducible stream of distinct random primes in [2^bits, 2^(bits+1)).
class PrimeGenerator {
 public:
  explicit PrimeGenerator(std::uint64_t seed, int bits = 58);
  std::uint64_t next();

 private:
  std::uint64_t state_;
  int bits_;
  std::vector<std::uint64_t> issued_;
};

/// Chinese remaindering of `residues[i] mod primes[i]`; returns the symmetric
/// representative in (-M/2, M/2] where M is the product of the primes.
Integer crt_symmetric(std::span<const std::uint64_t> residues,
                      std::span<const std::uint64_t> primes);

Integer product(std::span<const std::uint64_t> primes);

/// Canonicalized n/d (the two-argument mpq_class constructor does not reduce).
inline Rational ratio(long n, long d) {
  Rational r(n, d);
  r.canonicalize();
  return r;
}

/// Mathematical floor division (rounds toward negative infinity).
constexpr long floor_div(long a, long b) {
  long q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

template <class Field>
std::vector<typename Field::Element> to_field(const Field& field, std::span<const Rational> xs) {
  std::vector<typename Field::Element> out;
  out.reserve(xs.size());
  for (const auto& x : xs) out.push_back(field.from_rational(x));
  return out;
}

}  // namespace qrec

namespace Eigen {

template <>
struct NumTraits<mpq_class> : GenericNumTraits<mpq_class> {
  using Real = mpq_class;
  using NonInteger = mpq_class;
  using Nested = mpq_class;
  using Literal = mpq_class;
  enum {
    IsComplex = 0,
    IsInteger = 0,
    IsSigned = 1,
    RequireInitialization = 1,
    ReadCost = 6,
    AddCost = 150,
    MulCost = 100
  };
};

template <>
struct NumTraits<qrec::ModInt> : GenericNumTraits<qrec::ModInt> {
  using Real = qrec::ModInt;
  using NonInteger = qrec::ModInt;
  using Nested = qrec::ModInt;
  using Literal = qrec::ModInt;
  enum {
    IsComplex = 0,
    IsInteger = 0,
    IsSigned = 0,
    RequireInitialization = 1,
    ReadCost = 1,
    AddCost = 2,
    MulCost = 4
  };
};

}  // namespace Eigen

namespace qrec {

template <class Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <class Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using RationalMatrix = Matrix<Rational>;

}  // namespace qrec
