#pragma once

// Weights in the fundamental-weight basis, root systems, weight systems of
// irreducible modules (Freudenthal), Weyl dimensions, and exact evaluation of
// formal exponentials e^lambda at rational torus points y_a = e^{omega_a}.

#include <compare>
#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "qrec/cartan.hpp"
#include "qrec/field.hpp"

namespace qrec {

struct Weight {
  std::vector<int> coords;

  Weight() = default;
  explicit Weight(std::vector<int> c) : coords(std::move(c)) {}
  static Weight zero(int rank) { return Weight(std::vector<int>(rank, 0)); }
  static Weight fundamental(int rank, int node);

  int rank() const { return static_cast<int>(coords.size()); }
  int operator[](int a) const { return coords[a]; }
  bool is_zero() const;
  bool is_dominant() const;

  Weight& operator+=(const Weight& o);
  Weight& operator-=(const Weight& o);
  friend Weight operator+(Weight a, const Weight& b) { return a += b; }
  friend Weight operator-(Weight a, const Weight& b) { return a -= b; }
  friend Weight operator*(int k, Weight w);
  Weight operator-() const { return (-1) * *this; }

  friend auto operator<=>(const Weight&, const Weight&) = default;
  friend bool operator==(const Weight&, const Weight&) = default;

  std::string to_string() const;
};

struct WeightHash {
  std::size_t operator()(const Weight& w) const noexcept;
};

/// Weights with positive multiplicities.
using WeightMultiset = std::map<Weight, long>;

/// Element of Z[P]: weights with signed integer coefficients.
using LaurentPolynomial = std::map<Weight, Integer>;

long total_multiplicity(const WeightMultiset& ws);
Weight weighted_sum(const WeightMultiset& ws);
LaurentPolynomial to_laurent(const WeightMultiset& ws);
LaurentPolynomial multiply(const LaurentPolynomial& a, const LaurentPolynomial& b);
LaurentPolynomial& add_scaled(LaurentPolynomial& into, const LaurentPolynomial& p, const Integer& scale);

struct TorusPoint {
  std::vector<Rational> y;

  TorusPoint() = default;
  /// Throws Error(invalid_input) on a zero coordinate.
  explicit TorusPoint(std::vector<Rational> values);
  static TorusPoint identity(int rank) { return TorusPoint(std::vector<Rational>(rank, Rational(1))); }
  int rank() const { return static_cast<int>(y.size()); }
};

class RootSystem {
 public:
  explicit RootSystem(LieType type);

  const CartanData& cartan() const { return cartan_; }
  int rank() const { return cartan_.rank(); }
  /// Positive roots in simple-root coordinates, sorted by height.
  const std::vector<std::vector<int>>& positive_roots_simple() const { return roots_simple_; }
  /// Positive roots in the fundamental-weight basis (same order).
  const std::vector<Weight>& positive_roots() const { return roots_; }
  Weight simple_root(int a) const;
  const Weight& highest_root() const { return roots_.back(); }
  int height(std::size_t root_index) const { return heights_[root_index]; }

  /// s_a(mu) = mu - mu_a alpha_a.
  Weight reflect(const Weight& mu, int a) const;
  Weight dominant_conjugate(Weight mu) const;
  /// Inner product scaled by `form_scale()` so that it is an integer.
  long scaled_inner(const Weight& x, const Weight& y) const;
  long form_scale() const { return scale_; }
  Rational inner(const Weight& x, const Weight& y) const { return ratio(scaled_inner(x, y), scale_); }
  /// Coordinates of mu in the simple-root basis (C^-T mu), exact.
  std::vector<Rational> simple_root_coordinates(const Weight& mu) const;
  /// mu <= nu iff nu - mu is a nonnegative integer combination of simple roots.
  bool dominated_by(const Weight& mu, const Weight& nu) const;
  /// The W-orbit of mu (as a set).
  std::vector<Weight> orbit(const Weight& mu) const;

 private:
  CartanData cartan_;
  std::vector<std::vector<int>> roots_simple_;
  std::vector<Weight> roots_;
  std::vector<int> heights_;
  Eigen::Matrix<long, Eigen::Dynamic, Eigen::Dynamic> scaled_form_;
  long scale_ = 1;
};

/// Dimension cap for weight systems: $QREC_CAP_DIM, else 100000.
long default_dimension_cap();

/// Weyl dimension formula.
Integer dimension(LieType type, const Weight& highest);

/// Full weight system of L(highest) with Freudenthal multiplicities.
/// Throws invalid_input for a non-dominant weight and resource_cap above `cap`.
WeightMultiset weight_system(LieType type, const Weight& highest, long cap = default_dimension_cap());

/// Weight system as a Laurent polynomial (the formal character).
LaurentPolynomial character(LieType type, const Weight& highest, long cap = default_dimension_cap());

Rational evaluate(const Weight& w, const TorusPoint& y);
Rational evaluate(const WeightMultiset& ws, const TorusPoint& y);
Rational evaluate(const LaurentPolynomial& p, const TorusPoint& y);

/// e_k of a multiset of values via the product (1 + v_1 X)(1 + v_2 X)...
Rational elementary_symmetric(std::span<const Rational> values, int k);
/// All e_0..e_n at once.
std::vector<Rational> elementary_symmetric_all(std::span<const Rational> values);
/// Values e^lambda(y) listed with multiplicity.
std::vector<Rational> weight_values(const WeightMultiset& ws, const TorusPoint& y);

/// Character of the k-th exterior power of a module with weights `ws`, i.e. e_k of the formal exponentials.
LaurentPolynomial exterior_power(const WeightMultiset& ws, int k);

}  // namespace qrec
