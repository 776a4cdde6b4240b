#include "qrec/weights.hpp"

#include <algorithm>
#include <cstdlib>
#include <deque>
#include <numeric>
#include <set>
#include <unordered_map>
#include <unordered_set>

#include "qrec/error.hpp"

namespace qrec {

Weight Weight::fundamental(int rank, int node) {
  if (node < 1 || node > rank) throw Error(ErrorCode::invalid_input, "fundamental weight index out of range");
  Weight w = zero(rank);
  w.coords[node - 1] = 1;
  return w;
}

bool Weight::is_zero() const {
  return std::all_of(coords.begin(), coords.end(), [](int c) { return c == 0; });
}

bool Weight::is_dominant() const {
  return std::all_of(coords.begin(), coords.end(), [](int c) { return c >= 0; });
}

Weight& Weight::operator+=(const Weight& o) {
  for (std::size_t i = 0; i < coords.size(); ++i) coords[i] += o.coords[i];
  return *this;
}

Weight& Weight::operator-=(const Weight& o) {
  for (std::size_t i = 0; i < coords.size(); ++i) coords[i] -= o.coords[i];
  return *this;
}

Weight operator*(int k, Weight w) {
  for (auto& c : w.coords) c *= k;
  return w;
}

std::string Weight::to_string() const {
  std::string s = "(";
  for (std::size_t i = 0; i < coords.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(coords[i]);
  }
  return s + ")";
}

std::size_t WeightHash::operator()(const Weight& w) const noexcept {
  std::size_t h = 1469598103934665603ULL;
  for (int c : w.coords) {
    h ^= static_cast<std::size_t>(static_cast<unsigned>(c));
    h *= 1099511628211ULL;
  }
  return h;
}

long total_multiplicity(const WeightMultiset& ws) {
  long n = 0;
  for (const auto& [w, m] : ws) n += m;
  return n;
}

Weight weighted_sum(const WeightMultiset& ws) {
  if (ws.empty()) return {};
  Weight s = Weight::zero(ws.begin()->first.rank());
  for (const auto& [w, m] : ws) s += m * w;
  return s;
}

LaurentPolynomial to_laurent(const WeightMultiset& ws) {
  LaurentPolynomial p;
  for (const auto& [w, m] : ws) p[w] = m;
  return p;
}

LaurentPolynomial& add_scaled(LaurentPolynomial& into, const LaurentPolynomial& p, const Integer& scale) {
  for (const auto& [w, c] : p) {
    auto it = into.try_emplace(w, 0).first;
    it->second += scale * c;
    if (sgn(it->second) == 0) into.erase(it);
  }
  return into;
}

LaurentPolynomial multiply(const LaurentPolynomial& a, const LaurentPolynomial& b) {
  std::unordered_map<Weight, Integer, WeightHash> acc;
  for (const auto& [wa, ca] : a)
    for (const auto& [wb, cb] : b) acc[wa + wb] += ca * cb;
  LaurentPolynomial out;
  for (auto& [w, c] : acc)
    if (sgn(c) != 0) out.emplace(w, std::move(c));
  return out;
}

TorusPoint::TorusPoint(std::vector<Rational> values) : y(std::move(values)) {
  for (const auto& v : y) {
    if (sgn(v) == 0) throw Error(ErrorCode::invalid_input, "torus point coordinates must be nonzero");
  }
}

RootSystem::RootSystem(LieType type) : cartan_(cartan_data(type)) {
  const int r = rank();
  const auto& c = cartan_.cartan;

  std::set<std::vector<int>> seen;
  for (int a = 0; a < r; ++a) {
    std::vector<int> e(r, 0);
    e[a] = 1;
    roots_simple_.push_back(e);
    seen.insert(e);
  }
  for (std::size_t i = 0; i < roots_simple_.size(); ++i) {
    const std::vector<int> beta = roots_simple_[i];
    const int ht = std::accumulate(beta.begin(), beta.end(), 0);
    for (int a = 0; a < r; ++a) {
      if (ht == 1 && beta[a] == 1) continue;
      int pairing = 0;  // <beta, alpha_a^vee>
      for (int b = 0; b < r; ++b) pairing += beta[b] * c(a, b);
      int p = 0;
      for (auto down = beta;;) {
        down[a] -= 1;
        if (!seen.count(down)) break;
        ++p;
      }
      if (p - pairing > 0) {
        auto up = beta;
        up[a] += 1;
        if (seen.insert(up).second) roots_simple_.push_back(up);
      }
    }
  }
  std::stable_sort(roots_simple_.begin(), roots_simple_.end(), [](const auto& x, const auto& y) {
    return std::accumulate(x.begin(), x.end(), 0) < std::accumulate(y.begin(), y.end(), 0);
  });
  for (const auto& beta : roots_simple_) {
    Weight w = Weight::zero(r);
    for (int a = 0; a < r; ++a)
      for (int b = 0; b < r; ++b) w.coords[a] += c(a, b) * beta[b];
    roots_.push_back(std::move(w));
    heights_.push_back(std::accumulate(beta.begin(), beta.end(), 0));
  }

  mpz_class lcm = 1;
  for (int a = 0; a < r; ++a)
    for (int b = 0; b < r; ++b) mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), cartan_.quadratic_form(a, b).get_den_mpz_t());
  scale_ = lcm.get_si();
  scaled_form_.resize(r, r);
  for (int a = 0; a < r; ++a)
    for (int b = 0; b < r; ++b) {
      const Rational v = cartan_.quadratic_form(a, b) * scale_;
      scaled_form_(a, b) = v.get_num().get_si();
    }
}

Weight RootSystem::simple_root(int a) const {
  Weight w = Weight::zero(rank());
  for (int b = 0; b < rank(); ++b) w.coords[b] = cartan_.cartan(b, a);
  return w;
}

Weight RootSystem::reflect(const Weight& mu, int a) const {
  Weight out = mu;
  const int k = mu[a];
  if (k == 0) return out;
  for (int b = 0; b < rank(); ++b) out.coords[b] -= k * cartan_.cartan(b, a);
  return out;
}

Weight RootSystem::dominant_conjugate(Weight mu) const {
  for (bool moved = true; moved;) {
    moved = false;
    for (int a = 0; a < rank(); ++a) {
      if (mu[a] < 0) {
        mu = reflect(mu, a);
        moved = true;
      }
    }
  }
  return mu;
}

long RootSystem::scaled_inner(const Weight& x, const Weight& y) const {
  long s = 0;
  for (int a = 0; a < rank(); ++a) {
    if (x[a] == 0) continue;
    for (int b = 0; b < rank(); ++b) s += static_cast<long>(x[a]) * scaled_form_(a, b) * y[b];
  }
  return s;
}

std::vector<Rational> RootSystem::simple_root_coordinates(const Weight& mu) const {
  std::vector<Rational> n(rank(), Rational(0));
  for (int a = 0; a < rank(); ++a)
    for (int b = 0; b < rank(); ++b) n[a] += cartan_.cartan_inverse(a, b) * mu[b];
  return n;
}

bool RootSystem::dominated_by(const Weight& mu, const Weight& nu) const {
  for (const auto& x : simple_root_coordinates(nu - mu)) {
    if (x.get_den() != 1 || sgn(x) < 0) return false;
  }
  return true;
}

std::vector<Weight> RootSystem::orbit(const Weight& mu) const {
  std::set<Weight> seen{mu};
  std::deque<Weight> queue{mu};
  while (!queue.empty()) {
    Weight w = std::move(queue.front());
    queue.pop_front();
    for (int a = 0; a < rank(); ++a) {
      if (w[a] == 0) continue;
      Weight s = reflect(w, a);
      if (seen.insert(s).second) queue.push_back(std::move(s));
    }
  }
  return {seen.begin(), seen.end()};
}

long default_dimension_cap() {
  if (const char* env = std::getenv("QREC_CAP_DIM")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && v > 0) return v;
  }
  return 100000;
}

namespace {

void require_dominant(LieType type, const Weight& highest) {
  if (highest.rank() != type.rank) {
    throw Error(ErrorCode::invalid_input, "weight " + highest.to_string() + " has wrong rank for " + type.name());
  }
  if (!highest.is_dominant()) {
    throw Error(ErrorCode::invalid_input, "weight " + highest.to_string() + " is not dominant");
  }
}

Integer dimension_impl(const RootSystem& rs, const Weight& highest) {
  const auto& t = rs.cartan().t;
  Rational dim = 1;
  for (const auto& beta : rs.positive_roots_simple()) {
    // (mu, beta) = sum_a mu_a beta_a / t_a
    Rational num = 0, den = 0;
    for (int a = 0; a < rs.rank(); ++a) {
      num += ratio(static_cast<long>(highest[a] + 1) * beta[a], t[a]);
      den += ratio(beta[a], t[a]);
    }
    dim *= num / den;
  }
  return dim.get_num();
}

Rational power(const Rational& base, int exp) {
  Rational b = exp < 0 ? Rational(1) / base : base;
  const unsigned long e = static_cast<unsigned long>(exp < 0 ? -static_cast<long>(exp) : exp);
  Rational r;
  mpz_pow_ui(r.get_num_mpz_t(), b.get_num_mpz_t(), e);
  mpz_pow_ui(r.get_den_mpz_t(), b.get_den_mpz_t(), e);
  r.canonicalize();
  return r;
}

}  // namespace

Integer dimension(LieType type, const Weight& highest) {
  require_dominant(type, highest);
  return dimension_impl(RootSystem(type), highest);
}

WeightMultiset weight_system(LieType type, const Weight& highest, long cap) {
  require_dominant(type, highest);
  const RootSystem rs(type);
  const Integer dim = dimension_impl(rs, highest);
  if (dim > cap) {
    throw Error(ErrorCode::resource_cap, "dim L" + highest.to_string() + " = " + dim.get_str() +
                                             " exceeds weight-system cap " + std::to_string(cap));
  }

  const int r = rs.rank();
  const Weight rho(std::vector<int>(r, 1));
  const Weight top = highest + rho;
  const long top_norm = rs.scaled_inner(top, top);
  const auto& roots = rs.positive_roots();

  std::unordered_map<Weight, long, WeightHash> mult;
  mult[highest] = 1;
  std::vector<Weight> layer{highest};
  for (int level = 1; !layer.empty(); ++level) {
    std::set<Weight> candidates;
    for (const auto& mu : layer)
      for (int a = 0; a < r; ++a) candidates.insert(mu - rs.simple_root(a));
    std::vector<Weight> next;
    for (const auto& nu : candidates) {
      const Weight shifted = nu + rho;
      const long denom = top_norm - rs.scaled_inner(shifted, shifted);
      if (denom <= 0) continue;
      __int128 num = 0;
      for (std::size_t i = 0; i < roots.size(); ++i) {
        const int ht = rs.height(i);
        Weight up = nu;
        for (int k = 1; k * ht <= level; ++k) {
          up += roots[i];
          auto it = mult.find(up);
          if (it != mult.end()) num += static_cast<__int128>(it->second) * rs.scaled_inner(up, roots[i]);
        }
      }
      num *= 2;
      if (num % denom != 0) throw Error(ErrorCode::invalid_input, "Freudenthal recursion produced a fraction");
      const long m = static_cast<long>(num / denom);
      if (m > 0) {
        mult[nu] = m;
        next.push_back(nu);
      }
    }
    layer = std::move(next);
  }

  WeightMultiset out(mult.begin(), mult.end());
  if (Integer(total_multiplicity(out)) != dim) {
    throw Error(ErrorCode::invalid_input, "weight multiplicities disagree with the Weyl dimension");
  }
  return out;
}

LaurentPolynomial character(LieType type, const Weight& highest, long cap) {
  return to_laurent(weight_system(type, highest, cap));
}

Rational evaluate(const Weight& w, const TorusPoint& y) {
  if (w.rank() != y.rank()) throw Error(ErrorCode::invalid_input, "weight and torus point rank differ");
  Rational v = 1;
  for (int a = 0; a < w.rank(); ++a)
    if (w[a] != 0) v *= power(y.y[a], w[a]);
  return v;
}

Rational evaluate(const WeightMultiset& ws, const TorusPoint& y) {
  Rational s = 0;
  for (const auto& [w, m] : ws) s += m * evaluate(w, y);
  return s;
}

Rational evaluate(const LaurentPolynomial& p, const TorusPoint& y) {
  Rational s = 0;
  for (const auto& [w, c] : p) s += c * evaluate(w, y);
  return s;
}

std::vector<Rational> elementary_symmetric_all(std::span<const Rational> values) {
  std::vector<Rational> e(values.size() + 1, Rational(0));
  e[0] = 1;
  for (std::size_t i = 0; i < values.size(); ++i)
    for (std::size_t j = i + 1; j >= 1; --j) e[j] += values[i] * e[j - 1];
  return e;
}

Rational elementary_symmetric(std::span<const Rational> values, int k) {
  if (k < 0 || static_cast<std::size_t>(k) > values.size()) {
    throw Error(ErrorCode::invalid_input, "elementary symmetric index " + std::to_string(k) + " out of range");
  }
  return elementary_symmetric_all(values)[k];
}

std::vector<Rational> weight_values(const WeightMultiset& ws, const TorusPoint& y) {
  std::vector<Rational> out;
  for (const auto& [w, m] : ws) {
    const Rational v = evaluate(w, y);
    for (long i = 0; i < m; ++i) out.push_back(v);
  }
  return out;
}

LaurentPolynomial exterior_power(const WeightMultiset& ws, int k) {
  const long n = total_multiplicity(ws);
  if (k < 0 || k > n) return {};
  if (ws.empty()) return k == 0 ? LaurentPolynomial{{Weight{}, 1}} : LaurentPolynomial{};
  const int r = ws.begin()->first.rank();
  std::vector<LaurentPolynomial> e(k + 1);
  e[0][Weight::zero(r)] = 1;
  for (const auto& [w, m] : ws) {
    const LaurentPolynomial mono{{w, 1}};
    for (long rep = 0; rep < m; ++rep)
      for (int j = k; j >= 1; --j) {
        if (e[j - 1].empty()) continue;
        add_scaled(e[j], multiply(e[j - 1], mono), 1);
      }
  }
  return e[k];
}

}  // namespace qrec
