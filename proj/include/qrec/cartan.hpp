#pragma once

// Static Lie-theoretic data for the simple types: Cartan matrices in the
// usual node numbering (E-series branch node last, attached to node 3;
// F4 and G2 with the long nodes first), squared-length labels, the form on
// the weight lattice, and closed-form order/degree predictions.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "qrec/field.hpp"

namespace qrec {

enum class Family { A, B, C, D, E, F, G };

struct LieType {
  Family family = Family::A;
  int rank = 1;

  /// Validates the rank against the family (A>=1, B>=2, C>=2, D>=3, E 6..8, F4, G2).
  static LieType make(Family family, int rank);
  /// Accepts "E6", "b3", or a family letter plus explicit rank.
  static LieType parse(std::string_view name);
  static LieType parse(std::string_view family, int rank);

  std::string name() const;
  friend bool operator==(const LieType&, const LieType&) = default;
};

char family_letter(Family f);

struct CartanData {
  LieType type;
  /// C_ab = (alpha_a^vee, alpha_b); column a is alpha_a in the fundamental-weight basis.
  Eigen::MatrixXi cartan;
  /// t_a = 2 / (alpha_a, alpha_a), in {1, 2, 3}.
  std::vector<int> t;
  RationalMatrix cartan_inverse;
  /// (omega_a, omega_b), normalized so the highest root has squared length 2.
  RationalMatrix quadratic_form;

  int rank() const { return static_cast<int>(t.size()); }
};

CartanData cartan_data(LieType type);

/// deg p_a = 2 * sum_b (C^-1)_ab, one entry per node.
std::vector<Rational> growth_degree(LieType type);

/// L_{m,n} = 2 L_{m-1,n-1} + L_{m-1,n}, L_{m,0} = 1, L_{m,m} = (3^m + 1)/2.
Integer lm_coefficient(int m, int n);
/// M_{m,n} = 2 M_{m-1,n-1} + M_{m-1,n}, M_{m,0} = 1, M_{m,m} = 2*3^m - 2^m.
Integer mm_coefficient(int m, int n);

struct OrderPrediction {
  enum class Status { known, unknown };

  Status status = Status::unknown;
  Integer value;

  static OrderPrediction known(Integer v) { return {Status::known, std::move(v)}; }
  static OrderPrediction unknown() { return {}; }
  bool is_known() const { return status == Status::known; }
};

/// Minimal recurrence order l_a per node; Unknown where no value has been established.
OrderPrediction predicted_order(LieType type, int node);

/// One row of the shipped order/degree fixture file.
struct OrderTableRow {
  LieType type;
  std::vector<std::optional<long>> ell;
  std::vector<long> deg;
};

/// Reads the versioned fixture file ({"version", "tables": [{type, rank, ell, deg}]}).
std::vector<OrderTableRow> load_order_tables(const std::string& path);

}  // namespace qrec
