#pragma once

// Checks of detected recurrences against the catalogued weight sets,
// coefficient identities and generating-function numerators, plus the
// symbolic tools (invariant decomposition, coefficient interpolation,
// growth degrees) used to probe the uncatalogued cases.

#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "qrec/cartan.hpp"
#include "qrec/linrec.hpp"
#include "qrec/qsystem.hpp"
#include "qrec/weights.hpp"

namespace qrec {

struct LambdaSpec {
  WeightMultiset lambda;
  WeightMultiset lambda_prime;
  int stride = 1;

  long predicted_order() const { return total_multiplicity(lambda) + stride * total_multiplicity(lambda_prime); }
};

/// Catalogued weight sets for (type, node); Error(not_in_catalogue) otherwise.
LambdaSpec build_lambda(LieType type, int node);
bool in_lambda_catalogue(LieType type, int node);

/// prod_{Lambda}(1 - e^l(y) D) prod_{Lambda'}(1 - e^l(y) D^stride).
std::vector<Rational> factorized_polynomial(const LambdaSpec& spec, const TorusPoint& y);

/// Polynomial in the variables q_1..q_r with integer coefficients.
class SparseQPolynomial {
 public:
  using Exponents = std::vector<int>;

  explicit SparseQPolynomial(int rank = 0) : rank_(rank) {}
  static SparseQPolynomial constant(int rank, const Integer& c);
  /// q_node, or the constant 1 for node 0 and node rank+1.
  static SparseQPolynomial variable(int rank, int node);

  int rank() const { return rank_; }
  const std::map<Exponents, Integer>& terms() const { return terms_; }
  void add_term(const Exponents& e, const Integer& c);
  bool is_zero() const { return terms_.empty(); }

  Rational evaluate(const std::vector<Rational>& q) const;
  std::string to_string() const;

  SparseQPolynomial& operator+=(const SparseQPolynomial& o);
  SparseQPolynomial& operator-=(const SparseQPolynomial& o);
  friend SparseQPolynomial operator+(SparseQPolynomial a, const SparseQPolynomial& b) { return a += b; }
  friend SparseQPolynomial operator-(SparseQPolynomial a, const SparseQPolynomial& b) { return a -= b; }
  friend SparseQPolynomial operator*(const SparseQPolynomial& a, const SparseQPolynomial& b);
  friend SparseQPolynomial operator*(long c, const SparseQPolynomial& a);
  friend bool operator==(const SparseQPolynomial&, const SparseQPolynomial&) = default;

 private:
  int rank_;
  std::map<Exponents, Integer> terms_;
};

/// sum_n sign_n chi(Lambda^n L(omega_1)).
struct ExteriorCombination {
  LieType type;
  std::vector<std::pair<int, int>> terms;  ///< (n, coefficient)

  Rational evaluate(const TorusPoint& y) const;
  LaurentPolynomial expand() const;
};

/// C_k^(1) for the classical types as an exterior-power combination.
ExteriorCombination coefficient_formula(LieType type, int node, int k);

struct CoefficientValue {
  int k;
  SparseQPolynomial value;
};
struct CoefficientSymmetry {
  int k;
  int partner;
  int sign;  ///< C_k = sign * C_partner
};
struct IdentityCatalogue {
  std::vector<CoefficientValue> values;
  std::vector<CoefficientSymmetry> symmetries;
};

/// Identities between C_k and the q-values valid at any specialization.
IdentityCatalogue identity_catalogue(LieType type, int node);

/// Expresses a W-invariant element of Z[P] as an integer polynomial in the
/// fundamental characters chi(L(omega_a)).
SparseQPolynomial decompose_invariant(LieType type, const LaurentPolynomial& invariant,
                                      long cap = default_dimension_cap());
/// Inverse of decompose_invariant.
LaurentPolynomial expand_in_characters(LieType type, const SparseQPolynomial& poly, long cap = default_dimension_cap());

std::vector<SparseQPolynomial::Exponents> monomials_up_to(int rank, int degree);

struct Experiment {
  std::vector<Rational> q;
  Rational value;
};
inline constexpr int interpolation_margin = 5;

/// Exact integer fit of `value` as a combination of the candidate monomials;
/// the last `interpolation_margin` experiments are held out.
SparseQPolynomial interpolate_coefficients(int rank, const std::vector<SparseQPolynomial::Exponents>& candidates,
                                           const std::vector<Experiment>& experiments);

/// Degree of a sequence that is polynomial in its index, by finite differences.
int finite_difference_degree(std::span<const Rational> values);

struct GrowthCheck {
  int node;
  int detected;
  int expected;
  bool passed() const { return detected == expected; }
};
/// Degrees of m -> Q_m^(a) on the stride-t_a subsequence of a dimension-mode table.
std::vector<GrowthCheck> check_growth_degree(const QTable<RationalField>& dims);

enum class CheckStatus { pass, fail, skipped };

struct CheckResult {
  std::string name;
  CheckStatus status = CheckStatus::skipped;
  std::string witness;
};

std::string to_string(CheckStatus s);

/// The catalogued numerator for (type, node) at the run's data, if one is known.
struct NumeratorExpectation {
  std::optional<std::vector<Rational>> numerator;
  std::string skip_reason;
};
NumeratorExpectation expected_numerator(LieType type, int node, const std::vector<Rational>& q,
                                        const std::optional<TorusPoint>& y);

CheckResult check_factorization(const RecurrencePoly<RationalField>& rec, const LambdaSpec& spec,
                                const TorusPoint& y);
/// Uses the catalogued denominator at y when available (robust to dimension-mode
/// collapse), the detected recurrence otherwise.
CheckResult check_numerator(LieType type, int node, std::span<const Rational> s,
                            const RecurrencePoly<RationalField>& rec, const std::vector<Rational>& q,
                            const std::optional<TorusPoint>& y);
std::vector<CheckResult> check_identities(LieType type, int node, const RecurrencePoly<RationalField>& rec,
                                          const std::vector<Rational>& q);

/// Uniform integers in [-50, 50].
std::vector<Rational> random_q(int rank, std::mt19937_64& rng);
/// Coordinates +-n/d with 2 <= n <= 40, 1 <= d <= 40, n != d.
TorusPoint random_torus_point(int rank, std::mt19937_64& rng);

struct DetectOptions {
  bool modular = false;
  int prime_count = 3;
  std::uint64_t prime_seed = 0x5eed;
  int guard = 0;
  int depth = 0;  ///< 0 selects the automatic policy
};

inline constexpr long rational_order_cap = 400;
inline constexpr long modular_order_cap = 3000;

struct DetectionRun {
  std::vector<Rational> q;
  RecurrencePoly<RationalField> rec;
  std::vector<Rational> sequence;  ///< empty in modular mode
  int depth = 0;
  std::string digest;
};

/// Expected order used by the automatic depth policy, if any is known.
std::optional<long> expected_order(LieType type, int node);
int auto_depth(long order, int guard);

/// Generates node `node` from the initial data and detects its recurrence.
DetectionRun detect_node(LieType type, int node, const std::vector<Rational>& q, const DetectOptions& opts);

struct VerificationReport {
  std::string job;
  LieType type;
  int node = 1;
  std::string mode;
  std::string spec_digest;
  std::vector<std::string> q;
  std::optional<RecurrencePoly<RationalField>> rec;
  std::optional<long> ell_predicted;
  std::vector<CheckResult> checks;

  bool passed() const;
  nlohmann::json to_json() const;
};

struct VerifyOptions {
  LieType type;
  int node = 1;
  Specialization spec = RawQ{};
  DetectOptions detect;
};

VerificationReport verify(const VerifyOptions& opts);

}  // namespace qrec
