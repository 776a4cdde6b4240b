#include "qrec/conjlab.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include "qrec/linalg.hpp"

namespace qrec {

namespace {

Weight omega(int rank, int a) { return a == 0 ? Weight::zero(rank) : Weight::fundamental(rank, a); }

WeightMultiset as_set(const WeightMultiset& ws) {
  WeightMultiset out;
  for (const auto& [w, m] : ws)
    if (m > 0) out[w] = 1;
  return out;
}

// Support of a Laurent polynomial whose nonzero coefficients must all be 1.
WeightMultiset unit_support(const LaurentPolynomial& p, const std::string& what) {
  WeightMultiset out;
  for (const auto& [w, c] : p) {
    if (c != 1) throw Error(ErrorCode::invalid_input, what + " has coefficient " + c.get_str() + " at " + w.to_string());
    out[w] = 1;
  }
  return out;
}

WeightMultiset from_list(std::initializer_list<std::vector<int>> coords) {
  WeightMultiset out;
  for (const auto& c : coords) out[Weight(c)] += 1;
  return out;
}

std::string join(const std::vector<Rational>& xs) {
  std::string out = "[";
  for (std::size_t i = 0; i < xs.size(); ++i) out += (i ? ", " : "") + xs[i].get_str();
  return out + "]";
}

}  // namespace

bool in_lambda_catalogue(LieType type, int node) {
  const int r = type.rank;
  switch (type.family) {
    case Family::A: return node >= 1 && node <= r;
    case Family::B:
    case Family::C: return node == 1;
    case Family::D: return node == 1 || node == r - 1 || node == r;
    case Family::E: return (r == 6 && node == 1) || (r == 7 && node == 6) || (r == 8 && node == 7);
    case Family::F: return node == 1 || node == 4;
    case Family::G: return node == 1 || node == 2;
  }
  return false;
}

LambdaSpec build_lambda(LieType type, int node) {
  if (!in_lambda_catalogue(type, node)) {
    throw Error(ErrorCode::not_in_catalogue, "no catalogued weight sets for " + type.name() + " node " + std::to_string(node));
  }
  const int r = type.rank;
  const auto cd = cartan_data(type);
  LambdaSpec spec;
  spec.stride = cd.t[node - 1];
  auto weights_of = [&](int a) { return weight_system(type, omega(r, a)); };

  switch (type.family) {
    case Family::A:
    case Family::D:
    case Family::E:
      spec.lambda = as_set(weights_of(node));
      break;
    case Family::B: {
      auto ws = weights_of(1);
      ws.erase(Weight::zero(r));
      spec.lambda = ws;
      break;
    }
    case Family::C:
      spec.lambda = weights_of(1);
      spec.lambda_prime[Weight::zero(r)] = 1;
      break;
    case Family::F: {
      auto lambda1 = character(type, omega(r, 1));
      add_scaled(lambda1, character(type, omega(r, 4)), -1);
      add_scaled(lambda1, {{Weight::zero(r), 1}}, -1);
      auto lambda4 = character(type, omega(r, 4));
      add_scaled(lambda4, {{Weight::zero(r), 2}}, -1);
      const auto set1 = unit_support(lambda1, "chi(L(w1)) - chi(L(w4)) - 1");
      if (node == 1) {
        spec.lambda = set1;
      } else {
        spec.lambda = unit_support(lambda4, "chi(L(w4)) - 2");
        spec.lambda_prime = set1;
      }
      break;
    }
    case Family::G: {
      const auto lambda1 = from_list({{1, 0}, {-1, 0}, {1, -3}, {-1, 3}, {2, -3}, {-2, 3}, {0, 0}});
      if (node == 1) {
        spec.lambda = lambda1;
      } else {
        spec.lambda = from_list({{0, 1}, {0, -1}, {1, -1}, {-1, 1}, {1, -2}, {-1, 2}});
        spec.lambda_prime = lambda1;
      }
      break;
    }
  }
  if (!spec.lambda.count(omega(r, node))) {
    throw Error(ErrorCode::invalid_input, "catalogued set for " + type.name() + " misses omega_" + std::to_string(node));
  }
  const auto pred = predicted_order(type, node);
  if (pred.is_known() && pred.value != spec.predicted_order()) {
    throw Error(ErrorCode::invalid_input, "catalogued sets for " + type.name() + " node " + std::to_string(node) +
                                              " give order " + std::to_string(spec.predicted_order()) +
                                              ", table says " + pred.value.get_str());
  }
  return spec;
}

std::vector<Rational> factorized_polynomial(const LambdaSpec& spec, const TorusPoint& y) {
  const RationalField f;
  const auto v = weight_values(spec.lambda, y);
  const auto vp = weight_values(spec.lambda_prime, y);
  return multiply(f, expand_linear_product(f, std::span<const Rational>(v), 1),
                  expand_linear_product(f, std::span<const Rational>(vp), spec.stride));
}

// ---- SparseQPolynomial

SparseQPolynomial SparseQPolynomial::constant(int rank, const Integer& c) {
  SparseQPolynomial p(rank);
  p.add_term(Exponents(rank, 0), c);
  return p;
}

SparseQPolynomial SparseQPolynomial::variable(int rank, int node) {
  if (node == 0 || node == rank + 1) return constant(rank, 1);
  if (node < 0 || node > rank) throw Error(ErrorCode::invalid_input, "variable index out of range");
  Exponents e(rank, 0);
  e[node - 1] = 1;
  SparseQPolynomial p(rank);
  p.add_term(e, 1);
  return p;
}

void SparseQPolynomial::add_term(const Exponents& e, const Integer& c) {
  auto it = terms_.try_emplace(e, 0).first;
  it->second += c;
  if (sgn(it->second) == 0) terms_.erase(it);
}

Rational SparseQPolynomial::evaluate(const std::vector<Rational>& q) const {
  if (static_cast<int>(q.size()) != rank_) throw Error(ErrorCode::invalid_input, "q-vector has wrong length");
  Rational total = 0;
  for (const auto& [e, c] : terms_) {
    Rational term = c;
    for (int a = 0; a < rank_; ++a)
      for (int i = 0; i < e[a]; ++i) term *= q[a];
    total += term;
  }
  return total;
}

std::string SparseQPolynomial::to_string() const {
  if (terms_.empty()) return "0";
  std::vector<std::pair<Exponents, Integer>> ordered(terms_.begin(), terms_.end());
  auto degree = [](const Exponents& e) { return std::accumulate(e.begin(), e.end(), 0); };
  std::stable_sort(ordered.begin(), ordered.end(), [&](const auto& x, const auto& y) {
    const int dx = degree(x.first), dy = degree(y.first);
    return dx != dy ? dx > dy : x.first > y.first;
  });
  std::string out;
  for (const auto& [e, c] : ordered) {
    const bool neg = sgn(c) < 0;
    const Integer mag = neg ? Integer(-c) : c;
    if (out.empty()) {
      if (neg) out += "-";
    } else {
      out += neg ? " - " : " + ";
    }
    std::string mono;
    for (int a = 0; a < rank_; ++a) {
      if (e[a] == 0) continue;
      if (!mono.empty()) mono += " ";
      mono += "q_" + std::to_string(a + 1);
      if (e[a] > 1) mono += "^" + std::to_string(e[a]);
    }
    if (mono.empty()) {
      out += mag.get_str();
    } else {
      if (mag != 1) out += mag.get_str() + " ";
      out += mono;
    }
  }
  return out;
}

SparseQPolynomial& SparseQPolynomial::operator+=(const SparseQPolynomial& o) {
  for (const auto& [e, c] : o.terms_) add_term(e, c);
  return *this;
}

SparseQPolynomial& SparseQPolynomial::operator-=(const SparseQPolynomial& o) {
  for (const auto& [e, c] : o.terms_) add_term(e, -c);
  return *this;
}

SparseQPolynomial operator*(const SparseQPolynomial& a, const SparseQPolynomial& b) {
  SparseQPolynomial out(a.rank_);
  for (const auto& [ea, ca] : a.terms_)
    for (const auto& [eb, cb] : b.terms_) {
      SparseQPolynomial::Exponents e(ea);
      for (std::size_t i = 0; i < e.size(); ++i) e[i] += eb[i];
      out.add_term(e, ca * cb);
    }
  return out;
}

SparseQPolynomial operator*(long c, const SparseQPolynomial& a) {
  SparseQPolynomial out(a.rank_);
  for (const auto& [e, v] : a.terms_) out.add_term(e, c * v);
  return out;
}

// ---- exterior-power coefficient formulas

Rational ExteriorCombination::evaluate(const TorusPoint& y) const {
  const auto values = weight_values(weight_system(type, Weight::fundamental(type.rank, 1)), y);
  const auto e = elementary_symmetric_all(std::span<const Rational>(values));
  Rational total = 0;
  for (auto [n, c] : terms)
    if (n >= 0 && n < static_cast<int>(e.size())) total += c * e[n];
  return total;
}

LaurentPolynomial ExteriorCombination::expand() const {
  const auto ws = weight_system(type, Weight::fundamental(type.rank, 1));
  LaurentPolynomial out;
  for (auto [n, c] : terms) add_scaled(out, exterior_power(ws, n), c);
  return out;
}

ExteriorCombination coefficient_formula(LieType type, int node, int k) {
  const int r = type.rank;
  if (node != 1 || type.family > Family::D) {
    throw Error(ErrorCode::not_in_catalogue, "no exterior-power formula for " + type.name() + " node " + std::to_string(node));
  }
  ExteriorCombination out{type, {}};
  int top = 0;
  switch (type.family) {
    case Family::A: top = r + 1; break;
    case Family::B:
    case Family::D: top = 2 * r; break;
    case Family::C: top = 2 * r + 2; break;
    default: break;
  }
  if (k < 0 || k > top) throw Error(ErrorCode::invalid_input, "k out of range for " + type.name());
  switch (type.family) {
    case Family::A:
    case Family::D:
      out.terms = {{k, 1}};
      break;
    case Family::B:
      for (int n = 0; n <= k; ++n) out.terms.emplace_back(n, (k - n) % 2 ? -1 : 1);
      break;
    case Family::C:
      out.terms = {{k, 1}};
      if (k >= 2) out.terms.emplace_back(k - 2, -1);
      break;
    default: break;
  }
  return out;
}

// ---- identity catalogue

IdentityCatalogue identity_catalogue(LieType type, int node) {
  const int r = type.rank;
  auto q = [r](int a) { return SparseQPolynomial::variable(r, a); };
  auto one = [r] { return SparseQPolynomial::constant(r, 1); };
  IdentityCatalogue cat;
  auto value = [&cat](int k, SparseQPolynomial p) { cat.values.push_back({k, std::move(p)}); };

  switch (type.family) {
    case Family::A:
      if (node == 1) {
        for (int k = 1; k <= r + 1; ++k) value(k, q(k));
      } else {
        value(1, q(node));
      }
      break;
    case Family::B:
      if (node != 1) break;
      for (int k = 1; k <= r - 1; ++k) value(k, q(k) - q(k - 1));
      value(r, q(r) * q(r) - 2 * q(r - 1));
      for (int k = r + 1; k <= 2 * r; ++k) cat.symmetries.push_back({k, 2 * r - k, 1});
      break;
    case Family::C:
      if (node != 1) break;
      for (int k = 1; k <= r; ++k) value(k, q(k));
      value(r + 1, SparseQPolynomial(r));
      for (int k = r + 2; k <= 2 * r + 2; ++k) cat.symmetries.push_back({k, 2 * r + 2 - k, -1});
      break;
    case Family::D:
      if (node == r - 1 || node == r) {
        value(1, q(node));
      } else if (node == 1) {
        value(1, q(1));
        for (int k = 2; k <= r - 2; ++k) value(k, q(k) - q(k - 2));
        value(r - 1, q(r - 1) * q(r) - q(r - 3));
        value(r, q(r - 1) * q(r - 1) + q(r) * q(r) - 2 * q(r - 2));
        for (int k = r + 1; k <= 2 * r; ++k) cat.symmetries.push_back({k, 2 * r - k, 1});
      }
      break;
    case Family::E:
      if (r == 6 && node == 1) {
        const auto c3 = q(3) - q(1) * q(5) - q(6) + one();
        value(1, q(1));
        value(2, q(2) - q(5));
        value(3, c3);
        value(4, q(1) - q(6) * q(1) - q(2) * q(5) + q(4) * q(6));
        value(23, q(5) - q(1) * q(4) + q(2) * q(6) - q(5) * q(6));
        value(24, c3);
        value(25, q(4) - q(1));
        value(26, q(5));
        value(27, one());
      } else if (r == 7 && node == 6) {
        value(1, q(6));
      } else if (r == 8 && node == 7) {
        value(1, q(7) - 8 * one());
      }
      break;
    case Family::F:
      if (node == 1) value(1, q(1) - q(4) - 2 * one());
      if (node == 4) value(1, q(4) - 2 * one());
      break;
    case Family::G:
      if (node == 1) value(1, q(1) - q(2) - one());
      if (node == 2) value(1, q(2) - one());
      break;
  }
  return cat;
}

// ---- invariant decomposition

namespace {

class CharacterPowers {
 public:
  CharacterPowers(LieType type, long cap) : type_(type), cap_(cap), fundamentals_(type.rank) {
    for (int a = 0; a < type.rank; ++a) {
      fundamentals_[a] = character(type, Weight::fundamental(type.rank, a + 1), cap);
      dims_.push_back(dimension(type, Weight::fundamental(type.rank, a + 1)));
    }
  }

  LaurentPolynomial monomial(const std::vector<int>& exps) {
    Integer size = 1;
    for (int a = 0; a < type_.rank; ++a)
      for (int i = 0; i < exps[a]; ++i) size *= dims_[a];
    if (size > cap_) {
      throw Error(ErrorCode::resource_cap, "character product of dimension " + size.get_str() + " exceeds the cap " +
                                               std::to_string(cap_));
    }
    LaurentPolynomial out{{Weight::zero(type_.rank), 1}};
    for (int a = 0; a < type_.rank; ++a)
      for (int i = 0; i < exps[a]; ++i) out = multiply(out, fundamentals_[a]);
    return out;
  }

 private:
  LieType type_;
  long cap_;
  std::vector<LaurentPolynomial> fundamentals_;
  std::vector<Integer> dims_;
};

}  // namespace

SparseQPolynomial decompose_invariant(LieType type, const LaurentPolynomial& invariant, long cap) {
  const RootSystem rs(type);
  const int r = type.rank;
  for (const auto& [mu, c] : invariant) {
    if (mu.rank() != r) throw Error(ErrorCode::invalid_input, "weight of wrong rank in invariant");
    for (int a = 0; a < r; ++a) {
      auto it = invariant.find(rs.reflect(mu, a));
      if (it == invariant.end() || it->second != c) {
        throw Error(ErrorCode::not_invariant, "coefficient of " + mu.to_string() + " differs from its reflection s_" +
                                                  std::to_string(a + 1));
      }
    }
  }
  CharacterPowers powers(type, cap);
  SparseQPolynomial out(r);
  LaurentPolynomial rest = invariant;
  while (!rest.empty()) {
    std::vector<Weight> dominant;
    for (const auto& [mu, c] : rest)
      if (mu.is_dominant()) dominant.push_back(mu);
    if (dominant.empty()) throw Error(ErrorCode::not_invariant, "no dominant term left");
    std::optional<Weight> lead;
    for (const auto& mu : dominant) {
      const bool maximal = std::none_of(dominant.begin(), dominant.end(),
                                        [&](const Weight& nu) { return nu != mu && rs.dominated_by(mu, nu); });
      if (maximal && (!lead || mu > *lead)) lead = mu;
    }
    const Integer c = rest.at(*lead);
    out.add_term(lead->coords, c);
    add_scaled(rest, powers.monomial(lead->coords), -c);
  }
  return out;
}

LaurentPolynomial expand_in_characters(LieType type, const SparseQPolynomial& poly, long cap) {
  CharacterPowers powers(type, cap);
  LaurentPolynomial out;
  for (const auto& [e, c] : poly.terms()) add_scaled(out, powers.monomial(e), c);
  return out;
}

// ---- interpolation

std::vector<SparseQPolynomial::Exponents> monomials_up_to(int rank, int degree) {
  std::vector<SparseQPolynomial::Exponents> out;
  SparseQPolynomial::Exponents e(rank, 0);
  auto rec = [&](auto&& self, int pos, int left) -> void {
    if (pos == rank) {
      out.push_back(e);
      return;
    }
    for (int d = 0; d <= left; ++d) {
      e[pos] = d;
      self(self, pos + 1, left - d);
    }
    e[pos] = 0;
  };
  rec(rec, 0, degree);
  std::stable_sort(out.begin(), out.end(), [](const auto& x, const auto& y) {
    const int dx = std::accumulate(x.begin(), x.end(), 0), dy = std::accumulate(y.begin(), y.end(), 0);
    return dx != dy ? dx < dy : x > y;
  });
  return out;
}

SparseQPolynomial interpolate_coefficients(int rank, const std::vector<SparseQPolynomial::Exponents>& candidates,
                                           const std::vector<Experiment>& experiments) {
  const long n = static_cast<long>(candidates.size());
  const long total = static_cast<long>(experiments.size());
  if (total < n + interpolation_margin) {
    throw Error(ErrorCode::underdetermined_system, std::to_string(n) + " candidates need at least " +
                                                       std::to_string(n + interpolation_margin) + " experiments, have " +
                                                       std::to_string(total));
  }
  auto monomial = [](const Experiment& x, const SparseQPolynomial::Exponents& e) {
    Rational v = 1;
    for (std::size_t a = 0; a < e.size(); ++a)
      for (int i = 0; i < e[a]; ++i) v *= x.q[a];
    return v;
  };
  const long fit = total - interpolation_margin;
  RationalMatrix a(fit, n);
  Vector<Rational> b(fit);
  for (long i = 0; i < fit; ++i) {
    if (static_cast<int>(experiments[i].q.size()) != rank) throw Error(ErrorCode::invalid_input, "experiment has wrong rank");
    for (long j = 0; j < n; ++j) a(i, j) = monomial(experiments[i], candidates[j]);
    b(i) = experiments[i].value;
  }
  const auto sol = solve(RationalField{}, a, b);
  if (!sol.consistent) throw Error(ErrorCode::no_fit, "no combination of the candidate monomials fits the data");
  if (!sol.unique) throw Error(ErrorCode::underdetermined_system, "experiments do not separate the candidate monomials");
  SparseQPolynomial out(rank);
  std::string bad;
  for (long j = 0; j < n; ++j) {
    if (sol.x(j).get_den() != 1) bad += " " + sol.x(j).get_str();
    else out.add_term(candidates[j], sol.x(j).get_num());
  }
  if (!bad.empty()) throw Error(ErrorCode::non_integer_solution, "non-integer coefficients:" + bad);
  for (long i = fit; i < total; ++i) {
    const auto predicted = out.evaluate(experiments[i].q);
    if (predicted != experiments[i].value) {
      throw Error(ErrorCode::no_fit, "held-out experiment " + std::to_string(i) + ": fit gives " + predicted.get_str() +
                                         ", observed " + experiments[i].value.get_str());
    }
  }
  return out;
}

// ---- growth degrees

int finite_difference_degree(std::span<const Rational> values) {
  std::vector<Rational> d(values.begin(), values.end());
  for (int order = 0;; ++order) {
    if (d.empty()) throw Error(ErrorCode::insufficient_depth, "sequence too short for finite differences");
    if (std::all_of(d.begin(), d.end(), [](const Rational& x) { return sgn(x) == 0; })) return order - 1;
    if (d.size() == 1) {
      throw Error(ErrorCode::insufficient_depth,
                  "differences of order " + std::to_string(order) + " do not vanish within " +
                      std::to_string(values.size()) + " terms");
    }
    for (std::size_t i = 0; i + 1 < d.size(); ++i) d[i] = d[i + 1] - d[i];
    d.pop_back();
  }
}

std::vector<GrowthCheck> check_growth_degree(const QTable<RationalField>& dims) {
  const auto cd = cartan_data(dims.type);
  const auto expected = growth_degree(dims.type);
  std::vector<GrowthCheck> out;
  for (int a = 1; a <= dims.rank(); ++a) {
    const int stride = cd.t[a - 1];
    std::vector<Rational> sub;
    for (int m = 0; m <= dims.depth(a); m += stride) sub.push_back(dims.at(a, m));
    const int want = static_cast<int>(expected[a - 1].get_num().get_si());
    if (static_cast<int>(sub.size()) < want + 2) {
      throw Error(ErrorCode::insufficient_depth, "node " + std::to_string(a) + " needs depth " +
                                                     std::to_string(stride * (want + 1)) + " for a degree check");
    }
    out.push_back({a, finite_difference_degree(sub), want});
  }
  return out;
}

// ---- checks

std::string to_string(CheckStatus s) {
  switch (s) {
    case CheckStatus::pass: return "pass";
    case CheckStatus::fail: return "fail";
    case CheckStatus::skipped: return "skipped";
  }
  return "?";
}

namespace {

CheckResult pass(std::string name) { return {std::move(name), CheckStatus::pass, {}}; }
CheckResult fail(std::string name, std::string witness) { return {std::move(name), CheckStatus::fail, std::move(witness)}; }
CheckResult skip(std::string name, std::string reason) { return {std::move(name), CheckStatus::skipped, std::move(reason)}; }

CheckResult compare_polynomials(std::string name, const std::vector<Rational>& got, const std::vector<Rational>& want) {
  const std::size_t n = std::max(got.size(), want.size());
  for (std::size_t k = 0; k < n; ++k) {
    const Rational g = k < got.size() ? got[k] : Rational(0);
    const Rational w = k < want.size() ? want[k] : Rational(0);
    if (g != w) {
      return fail(std::move(name), "degree " + std::to_string(k) + ": got " + g.get_str() + ", expected " + w.get_str() +
                                       "; got " + join(got) + ", expected " + join(want));
    }
  }
  return pass(std::move(name));
}

}  // namespace

NumeratorExpectation expected_numerator(LieType type, int node, const std::vector<Rational>& q,
                                        const std::optional<TorusPoint>& y) {
  const int r = type.rank;
  auto ints = [](std::initializer_list<long> xs) {
    std::vector<Rational> out;
    for (long x : xs) out.emplace_back(x);
    return out;
  };
  if (node == 1) {
    switch (type.family) {
      case Family::A:
      case Family::C: return {ints({1}), {}};
      case Family::B: return {ints({1, 1}), {}};
      case Family::D: return {ints({1, 0, -1}), {}};
      case Family::G: {
        const Rational c = q[1] + 1;
        return {std::vector<Rational>{Rational(1), c, c, Rational(1)}, {}};
      }
      case Family::E:
        if (r != 6) break;
        if (!y) return {std::nullopt, "needs character values at a torus point"};
        {
          auto chi = [&](std::vector<int> mu) { return evaluate(weight_system(type, Weight(std::move(mu))), *y); };
          const Rational w1 = chi({1, 0, 0, 0, 0, 0}), w2 = chi({0, 1, 0, 0, 0, 0}), w4 = chi({0, 0, 0, 1, 0, 0}),
                         w5 = chi({0, 0, 0, 0, 1, 0}), w6 = chi({0, 0, 0, 0, 0, 1}), w15 = chi({1, 0, 0, 0, 1, 0}),
                         w11 = chi({2, 0, 0, 0, 0, 0}), w55 = chi({0, 0, 0, 0, 2, 0});
          return {std::vector<Rational>{1, 0, -w5, w6, 0, -w2, w15, -w55, -w11, w15, -w4, 0, w6, -w1, 0, 1}, {}};
        }
      default: break;
    }
  }
  return {std::nullopt, "no catalogued numerator for " + type.name() + " node " + std::to_string(node)};
}

CheckResult check_factorization(const RecurrencePoly<RationalField>& rec, const LambdaSpec& spec, const TorusPoint& y) {
  return compare_polynomials("factorization", rec.polynomial(), factorized_polynomial(spec, y));
}

CheckResult check_numerator(LieType type, int node, std::span<const Rational> s, const RecurrencePoly<RationalField>& rec,
                            const std::vector<Rational>& q, const std::optional<TorusPoint>& y) {
  const auto want = expected_numerator(type, node, q, y);
  if (!want.numerator) return skip("numerator", want.skip_reason);
  const RationalField f;
  RecurrencePoly<RationalField> denom = rec;
  if (y && in_lambda_catalogue(type, node)) {
    const auto a = factorized_polynomial(build_lambda(type, node), *y);
    denom = RecurrencePoly<RationalField>{};
    denom.order = static_cast<int>(a.size()) - 1;
    denom.coeffs = a;
    for (std::size_t k = 1; k < a.size(); k += 2) denom.coeffs[k] = -a[k];
  }
  try {
    return compare_polynomials("numerator", numerator(f, s, denom), *want.numerator);
  } catch (const Error& e) {
    return fail("numerator", e.what());
  }
}

std::vector<CheckResult> check_identities(LieType type, int node, const RecurrencePoly<RationalField>& rec,
                                          const std::vector<Rational>& q) {
  std::vector<CheckResult> out;
  const auto cat = identity_catalogue(type, node);
  auto coeff = [&](int k) -> std::optional<Rational> {
    if (k < 0 || k > rec.order) return std::nullopt;
    return rec.coeffs[k];
  };
  for (const auto& [k, poly] : cat.values) {
    const std::string name = "C_" + std::to_string(k) + " = " + poly.to_string();
    const Rational want = poly.evaluate(q);
    const auto got = coeff(k);
    if (!got) out.push_back(fail(name, "order " + std::to_string(rec.order) + " has no C_" + std::to_string(k)));
    else if (*got != want) out.push_back(fail(name, "detected " + got->get_str() + ", formula gives " + want.get_str()));
    else out.push_back(pass(name));
  }
  for (const auto& [k, partner, sign] : cat.symmetries) {
    const std::string name = "C_" + std::to_string(k) + " = " + (sign < 0 ? "-" : "") + "C_" + std::to_string(partner);
    const auto a = coeff(k), b = coeff(partner);
    if (!a || !b) out.push_back(fail(name, "order " + std::to_string(rec.order) + " too small"));
    else if (*a != sign * *b) out.push_back(fail(name, a->get_str() + " vs " + b->get_str()));
    else out.push_back(pass(name));
  }
  if (type.family == Family::C && node == 1) {
    const auto a = rec.polynomial();
    Rational at_one = 0, at_minus_one = 0;
    for (std::size_t k = 0; k < a.size(); ++k) {
      at_one += a[k];
      at_minus_one += k % 2 ? Rational(-a[k]) : a[k];
    }
    if (sgn(at_one) == 0 && sgn(at_minus_one) == 0) out.push_back(pass("(1 - D^2) divides A(D)"));
    else out.push_back(fail("(1 - D^2) divides A(D)", "A(1) = " + at_one.get_str() + ", A(-1) = " + at_minus_one.get_str()));
  }
  return out;
}

// ---- detection pipeline

std::vector<Rational> random_q(int rank, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> dist(-50, 50);
  std::vector<Rational> q;
  for (int a = 0; a < rank; ++a) q.emplace_back(dist(rng));
  return q;
}

TorusPoint random_torus_point(int rank, std::mt19937_64& rng) {
  std::uniform_int_distribution<long> num(2, 40), den(1, 40), sign(0, 1);
  std::vector<Rational> y;
  for (int a = 0; a < rank; ++a) {
    long n = num(rng), d = den(rng);
    while (n == d) n = num(rng), d = den(rng);
    y.push_back(ratio(sign(rng) ? -n : n, d));
  }
  return TorusPoint(std::move(y));
}

std::optional<long> expected_order(LieType type, int node) {
  const auto pred = predicted_order(type, node);
  if (pred.is_known()) return pred.value.get_si();
  if (in_lambda_catalogue(type, node)) return build_lambda(type, node).predicted_order();
  return std::nullopt;
}

int auto_depth(long order, int guard) {
  return static_cast<int>(2 * order + (guard ? guard : default_guard(static_cast<int>(order))) + 8);
}

namespace {

RecurrencePoly<RationalField> detect_at(LieType type, int node, const std::vector<Rational>& q, int depth,
                                        const DetectOptions& opts, DetectionRun& run) {
  const auto depths = required_depths(type, node, depth);
  if (!opts.modular) {
    const auto table = generate(type, RationalField{}, q, depths);
    run.sequence = table.sequence(node);
    run.digest = digest(table);
    return find_min_recurrence(RationalField{}, std::span<const Rational>(run.sequence), opts.guard);
  }
  for (const auto& x : q) {
    if (x.get_den() != 1) throw Error(ErrorCode::invalid_input, "modular detection needs integer initial values");
  }
  PrimeGenerator gen(opts.prime_seed);
  for (int attempt = 0;; ++attempt) {
    std::vector<std::uint64_t> primes;
    for (int i = 0; i < opts.prime_count; ++i) primes.push_back(gen.next());
    try {
      auto rec = multi_prime_detect(
          [&](const PrimeField& f) {
            return generate(type, f, to_field(f, std::span<const Rational>(q)), depths).sequence(node);
          },
          primes, opts.guard);
      std::string key = type.name() + "|" + std::to_string(node) + "|" + std::to_string(depth) + "|";
      for (const auto& x : q) key += x.get_str() + ",";
      for (auto p : rec.primes) key += std::to_string(p) + ",";
      run.digest = fnv1a_hex(key);
      return rec;
    } catch (const SingularSpecialization&) {
      if (attempt >= 4) throw;
    }
  }
}

}  // namespace

DetectionRun detect_node(LieType type, int node, const std::vector<Rational>& q, const DetectOptions& opts) {
  if (node < 1 || node > type.rank) throw Error(ErrorCode::invalid_input, "node out of range for " + type.name());
  const long cap = opts.modular ? modular_order_cap : rational_order_cap;
  const auto order = expected_order(type, node);
  if (!opts.depth && order && *order > cap) {
    throw Error(ErrorCode::resource_cap, "expected order " + std::to_string(*order) + " exceeds the " +
                                             (opts.modular ? "modular" : "rational") + " cap " + std::to_string(cap));
  }
  DetectionRun run;
  run.q = q;
  int depth = opts.depth ? opts.depth : order ? auto_depth(*order, opts.guard) : 64;
  const int max_depth = auto_depth(cap, opts.guard);
  for (;;) {
    try {
      run.depth = depth;
      run.rec = detect_at(type, node, q, depth, opts, run);
      return run;
    } catch (const Error& e) {
      const bool retry = e.code() == ErrorCode::no_stable_recurrence || e.code() == ErrorCode::insufficient_data;
      if (!retry || opts.depth || order || depth >= max_depth) throw;
      depth = std::min(2 * depth, max_depth);
    }
  }
}

// ---- verification

bool VerificationReport::passed() const {
  return std::none_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.status == CheckStatus::fail; });
}

nlohmann::json VerificationReport::to_json() const {
  nlohmann::json checks_json = nlohmann::json::array();
  for (const auto& c : checks) {
    nlohmann::json j{{"name", c.name}, {"status", qrec::to_string(c.status)}};
    if (!c.witness.empty()) j["witness"] = c.witness;
    checks_json.push_back(std::move(j));
  }
  nlohmann::json doc{{"job", job},
                     {"type", type.name()},
                     {"rank", type.rank},
                     {"node", node},
                     {"mode", mode},
                     {"spec_digest", spec_digest},
                     {"q", q},
                     {"ell_detected", rec ? nlohmann::json(rec->order) : nlohmann::json()},
                     {"ell_predicted", ell_predicted ? nlohmann::json(*ell_predicted) : nlohmann::json()},
                     {"checks", checks_json}};
  if (rec) doc["recurrence"] = qrec::to_json(RationalField{}, *rec);
  return doc;
}

namespace {

// dim W_1^(a) and delta when the catalogue says C_1 = q_a + delta.
std::optional<Integer> unit_shift(const IdentityCatalogue& cat, int node) {
  for (const auto& [k, poly] : cat.values) {
    if (k != 1) continue;
    Integer delta = 0;
    bool linear = false;
    for (const auto& [e, c] : poly.terms()) {
      const int deg = std::accumulate(e.begin(), e.end(), 0);
      if (deg == 0) delta = c;
      else if (deg == 1 && e[node - 1] == 1 && c == 1) linear = true;
      else return std::nullopt;
    }
    if (linear) return delta;
  }
  return std::nullopt;
}

}  // namespace

VerificationReport verify(const VerifyOptions& opts) {
  const LieType type = opts.type;
  const int node = opts.node;
  VerificationReport rep;
  rep.type = type;
  rep.node = node;
  rep.mode = mode_name(opts.spec);
  rep.job = type.name() + "/node" + std::to_string(node) + "/" + rep.mode;

  const auto q = initial_values(type, opts.spec);
  for (const auto& x : q) rep.q.push_back(x.get_str());
  std::optional<TorusPoint> y;
  if (const auto* cp = std::get_if<CharacterPoint>(&opts.spec)) y = cp->y;
  if (std::holds_alternative<DimensionMode>(opts.spec)) y = TorusPoint::identity(type.rank);
  const bool character_mode = std::holds_alternative<CharacterPoint>(opts.spec);
  const bool dimension_mode = std::holds_alternative<DimensionMode>(opts.spec);

  const auto pred = predicted_order(type, node);
  if (pred.is_known()) rep.ell_predicted = pred.value.get_si();

  const auto run = detect_node(type, node, q, opts.detect);
  rep.rec = run.rec;
  rep.spec_digest = run.digest;
  const auto& rec = run.rec;
  auto& checks = rep.checks;

  {
    const bool ok = rec.coeffs[0] == 1 && (rec.coeffs.back() == 1 || rec.coeffs.back() == -1);
    checks.push_back(ok ? pass("C_0 = 1, C_l = +-1")
                        : fail("C_0 = 1, C_l = +-1", "C_0 = " + rec.coeffs[0].get_str() + ", C_l = " + rec.coeffs.back().get_str()));
  }
  if (!run.sequence.empty()) {
    const bool ok = annihilates(RationalField{}, std::span<const Rational>(run.sequence), rec);
    checks.push_back(ok ? pass("recurrence holds from n_min") : fail("recurrence holds from n_min", "substitution failed"));
  }

  const std::string collapse = "dimension mode identifies weights, so orders can drop";
  if (!rep.ell_predicted) {
    checks.push_back(skip("order = table value", "no table value for " + type.name() + " node " + std::to_string(node)));
  } else if (dimension_mode) {
    checks.push_back(skip("order = table value", collapse));
  } else if (rec.order == *rep.ell_predicted) {
    checks.push_back(pass("order = table value"));
  } else {
    checks.push_back(fail("order = table value", "detected " + std::to_string(rec.order) + ", table " +
                                                     std::to_string(*rep.ell_predicted)));
  }

  std::optional<LambdaSpec> lambda;
  if (in_lambda_catalogue(type, node)) lambda = build_lambda(type, node);
  if (!lambda) {
    checks.push_back(skip("order = |Lambda| + t |Lambda'|", "not in the weight-set catalogue"));
    checks.push_back(skip("factorization", "not in the weight-set catalogue"));
  } else {
    if (dimension_mode) {
      checks.push_back(skip("order = |Lambda| + t |Lambda'|", collapse));
    } else if (rec.order == lambda->predicted_order()) {
      checks.push_back(pass("order = |Lambda| + t |Lambda'|"));
    } else {
      checks.push_back(fail("order = |Lambda| + t |Lambda'|", "detected " + std::to_string(rec.order) + ", sets give " +
                                                                  std::to_string(lambda->predicted_order())));
    }
    if (character_mode) {
      checks.push_back(check_factorization(rec, *lambda, *y));
      const Rational c1 = evaluate(lambda->lambda, *y);
      if (rec.order >= 1 && rec.coeffs[1] == c1) checks.push_back(pass("C_1 = sum over Lambda"));
      else checks.push_back(fail("C_1 = sum over Lambda", "sum gives " + c1.get_str()));
    } else {
      checks.push_back(skip("factorization", dimension_mode ? collapse : "needs a character point"));
    }
  }

  const long full_order = rep.ell_predicted ? *rep.ell_predicted : (lambda ? lambda->predicted_order() : rec.order);
  if (dimension_mode && rec.order != full_order) {
    for (const auto& v : identity_catalogue(type, node).values)
      checks.push_back(skip("C_" + std::to_string(v.k) + " = " + v.value.to_string(), collapse));
  } else {
    for (auto& c : check_identities(type, node, rec, q)) checks.push_back(std::move(c));
  }

  if (node == 1 && type.family <= Family::D) {
    if (!character_mode) {
      checks.push_back(skip("exterior-power coefficients", "needs a character point"));
    } else {
      std::string witness;
      for (int k = 0; k <= rec.order && witness.empty(); ++k) {
        const Rational want = coefficient_formula(type, node, k).evaluate(*y);
        if (rec.coeffs[k] != want) witness = "C_" + std::to_string(k) + ": detected " + rec.coeffs[k].get_str() + ", formula " + want.get_str();
      }
      checks.push_back(witness.empty() ? pass("exterior-power coefficients") : fail("exterior-power coefficients", witness));
    }
  }

  if (run.sequence.empty()) {
    checks.push_back(skip("numerator", "modular run keeps no exact sequence"));
  } else {
    checks.push_back(check_numerator(type, node, std::span<const Rational>(run.sequence), rec, q, y));
  }

  const auto cat = identity_catalogue(type, node);
  const auto shift = unit_shift(cat, node);
  const auto cd = cartan_data(type);
  const KrBranchingTable* branching = nullptr;
  if (const auto* cp = std::get_if<CharacterPoint>(&opts.spec)) branching = &cp->branching;
  if (const auto* dm = std::get_if<DimensionMode>(&opts.spec)) branching = &dm->branching;
  const auto defaults = KrBranchingTable::defaults(type);
  if (!branching) branching = &defaults;
  if (!shift || cd.t[node - 1] != 1 || !branching->covers(node)) {
    checks.push_back(skip("order = dim W + delta", "C_1 is not catalogued as q_a + delta with t_a = 1"));
  } else if (dimension_mode) {
    checks.push_back(skip("order = dim W + delta", collapse));
  } else {
    Integer dim = 0;
    for (const auto& mu : branching->at(node)) dim += dimension(type, mu);
    const Integer want = dim + *shift;
    if (want == rec.order) checks.push_back(pass("order = dim W + delta"));
    else checks.push_back(fail("order = dim W + delta", "dim W + delta = " + want.get_str() + ", detected " + std::to_string(rec.order)));
  }
  return rep;
}

}  // namespace qrec
