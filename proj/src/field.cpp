#include "qrec/field.hpp"

#include <algorithm>
#include <random>

#include "qrec/error.hpp"

namespace qrec {

namespace {

std::uint64_t mul_mod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % m);
}

std::uint64_t pow_mod(std::uint64_t base, std::uint64_t exp, std::uint64_t m) {
  std::uint64_t result = 1 % m;
  base %= m;
  while (exp) {
    if (exp & 1) result = mul_mod(result, base, m);
    base = mul_mod(base, base, m);
    exp >>= 1;
  }
  return result;
}

std::uint64_t reduce(const Integer& n, std::uint64_t p) {
  Integer r;
  mpz_fdiv_r_ui(r.get_mpz_t(), n.get_mpz_t(), p);
  return r.get_ui();
}

}  // namespace

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::invalid_input: return "InvalidInput";
    case ErrorCode::resource_cap: return "ResourceCap";
    case ErrorCode::singular_specialization: return "SingularSpecialization";
    case ErrorCode::no_stable_recurrence: return "NoStableRecurrence";
    case ErrorCode::insufficient_data: return "InsufficientData";
    case ErrorCode::non_vanishing_tail: return "NonVanishingTail";
    case ErrorCode::prime_disagreement: return "PrimeDisagreement";
    case ErrorCode::lift_overflow: return "LiftOverflow";
    case ErrorCode::not_in_catalogue: return "NotInCatalogue";
    case ErrorCode::not_invariant: return "NotInvariant";
    case ErrorCode::underdetermined_system: return "UnderdeterminedSystem";
    case ErrorCode::non_integer_solution: return "NonIntegerSolution";
    case ErrorCode::no_fit: return "NoFit";
    case ErrorCode::insufficient_depth: return "InsufficientDepth";
    case ErrorCode::missing_branching: return "MissingBranching";
  }
  return "Unknown";
}

SingularSpecialization::SingularSpecialization(int node, int level)
    : Error(ErrorCode::singular_specialization,
            "division by zero computing Q^(" + std::to_string(node) + ")_" +
                std::to_string(level + 1) + ": Q^(" + std::to_string(node) + ")_" +
                std::to_string(level - 1) + " vanishes"),
      node_(node),
      level_(level) {}

ModInt ModInt::inverse() const {
  if (v_ == 0) throw Error(ErrorCode::invalid_input, "inverse of zero in prime field");
  return ModInt(pow_mod(v_, p_ - 2, p_), p_);
}

PrimeField::PrimeField(std::uint64_t p) : modulus(p) {
  if (p < 3 || p >= (std::uint64_t{1} << 63) || !is_prime(p)) {
    throw Error(ErrorCode::invalid_input, "modulus " + std::to_string(p) + " is not a usable prime");
  }
}

ModInt PrimeField::from_integer(const Integer& n) const { return ModInt(reduce(n, modulus), modulus); }

ModInt PrimeField::from_rational(const Rational& x) const {
  const std::uint64_t den = reduce(x.get_den(), modulus);
  if (den == 0) {
    throw Error(ErrorCode::invalid_input,
                "denominator of " + x.get_str() + " vanishes mod " + std::to_string(modulus));
  }
  return ModInt(reduce(x.get_num(), modulus), modulus) / ModInt(den, modulus);
}

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t p : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
    if (n % p == 0) return n == p;
  }
  std::uint64_t d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  for (std::uint64_t a : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
    std::uint64_t x = pow_mod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int r = 1; r < s; ++r) {
      x = mul_mod(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

PrimeGenerator::PrimeGenerator(std::uint64_t seed, int bits) : state_(seed), bits_(bits) {
  if (bits < 50 || bits > 61) throw Error(ErrorCode::invalid_input, "prime size must be 50..61 bits");
}

std::uint64_t PrimeGenerator::next() {
  std::mt19937_64 rng(state_);
  const std::uint64_t lo = std::uint64_t{1} << bits_;
  std::uniform_int_distribution<std::uint64_t> dist(lo, 2 * lo - 1);
  for (;;) {
    std::uint64_t candidate = dist(rng) | 1;
    if (!is_prime(candidate)) continue;
    if (std::find(issued_.begin(), issued_.end(), candidate) != issued_.end()) continue;
    state_ = rng();
    issued_.push_back(candidate);
    return candidate;
  }
}

Integer product(std::span<const std::uint64_t> primes) {
  Integer m = 1;
  for (auto p : primes) m *= Integer(static_cast<unsigned long>(p));
  return m;
}

Integer crt_symmetric(std::span<const std::uint64_t> residues, std::span<const std::uint64_t> primes) {
  if (residues.size() != primes.size() || primes.empty()) {
    throw Error(ErrorCode::invalid_input, "crt: residue/prime count mismatch");
  }
  Integer x = static_cast<unsigned long>(residues[0] % primes[0]);
  Integer m = static_cast<unsigned long>(primes[0]);
  for (std::size_t i = 1; i < primes.size(); ++i) {
    const Integer p = static_cast<unsigned long>(primes[i]);
    Integer inv;
    if (mpz_invert(inv.get_mpz_t(), m.get_mpz_t(), p.get_mpz_t()) == 0) {
      throw Error(ErrorCode::invalid_input, "crt: moduli not coprime");
    }
    Integer t = (Integer(static_cast<unsigned long>(residues[i])) - x) * inv;
    mpz_fdiv_r(t.get_mpz_t(), t.get_mpz_t(), p.get_mpz_t());
    x += m * t;
    m *= p;
  }
  if (2 * x > m) x -= m;
  return x;
}

}  // namespace qrec
