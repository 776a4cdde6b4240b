#pragma once

// Solutions of the unrestricted Q-system
//   (Q_m^a)^2 = Q_{m+1}^a Q_{m-1}^a + prod_{b: C_ab != 0} prod_{k=0}^{-C_ab-1} Q^b_{floor((C_ba m - k)/C_ab)}
// over an exact field, starting from Q_0 = 1 and a specialization of Q_1.

#include <map>
#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "qrec/cartan.hpp"
#include "qrec/error.hpp"
#include "qrec/field.hpp"
#include "qrec/weights.hpp"

namespace qrec {

/// Decomposition of the restricted KR module W_1^(a) into irreducibles, per node.
struct KrBranchingTable {
  LieType type;
  std::map<int, std::vector<Weight>> nodes;

  /// Decompositions determined by known coefficient identities; exceptional
  /// types only cover a few nodes.
  static KrBranchingTable defaults(LieType type);
  /// {"type": "E6" | "E", "rank": n, "branching": {"a": [[coords], ...]}}
  static KrBranchingTable from_json(const nlohmann::json& doc);
  static KrBranchingTable load(const std::string& path);
  nlohmann::json to_json() const;

  bool covers(int node) const { return nodes.count(node) != 0; }
  bool covers_all() const;
  /// Entries of `other` replace ours node by node.
  KrBranchingTable& merge(const KrBranchingTable& other);
  const std::vector<Weight>& at(int node) const;
};

struct RawQ {
  std::vector<Rational> q;
};
struct CharacterPoint {
  TorusPoint y;
  KrBranchingTable branching;
};
struct DimensionMode {
  KrBranchingTable branching;
};

using Specialization = std::variant<RawQ, CharacterPoint, DimensionMode>;

std::string mode_name(const Specialization& spec);

/// q_a = Q_1^(a) for every node. CharacterPoint and DimensionMode throw
/// Error(missing_branching) for nodes the table does not cover.
std::vector<Rational> initial_values(LieType type, const Specialization& spec,
                                     long cap = default_dimension_cap());

/// Minimal per-node depths so that node `node` reaches Q_depth (index 1-based node).
std::vector<int> required_depths(LieType type, int node, int depth);
/// Per-node depths so that every node reaches `depth`.
std::vector<int> required_depths_all(LieType type, int depth);

template <class Field>
struct QTable {
  using Element = typename Field::Element;

  LieType type;
  Field field;
  /// values[a-1][m] = Q_m^(a)
  std::vector<std::vector<Element>> values;

  int rank() const { return type.rank; }
  int depth(int node) const { return static_cast<int>(values[node - 1].size()) - 1; }
  const std::vector<Element>& sequence(int node) const { return values[node - 1]; }
  const Element& at(int node, int m) const { return values[node - 1][m]; }
};

namespace detail {

/// (node b, index) pairs entering the product term for Q^(a)_{m+1}; nodes 0-based.
std::vector<std::pair<int, long>> product_indices(const CartanData& cd, int a, long m);

}  // namespace detail

/// Generates node sequences to the given per-node depths (see required_depths).
/// Throws SingularSpecialization when Q_{m-1}^(a) vanishes in the field.
template <class Field>
QTable<Field> generate(LieType type, const Field& field, const std::vector<typename Field::Element>& q,
                       const std::vector<int>& depths) {
  using E = typename Field::Element;
  const auto cd = cartan_data(type);
  const int r = type.rank;
  if (static_cast<int>(q.size()) != r || static_cast<int>(depths.size()) != r) {
    throw Error(ErrorCode::invalid_input, "initial data length does not match rank of " + type.name());
  }
  QTable<Field> table{type, field, std::vector<std::vector<E>>(r)};
  for (int a = 0; a < r; ++a) {
    if (depths[a] < 1) throw Error(ErrorCode::invalid_input, "depth must be at least 1");
    table.values[a].reserve(depths[a] + 1);
    table.values[a].push_back(field.one());
    table.values[a].push_back(q[a]);
  }

  // Sweep the nodes, advancing each as far as its inputs allow.
  for (bool progress = true; progress;) {
    progress = false;
    for (int a = 0; a < r; ++a) {
      auto& seq = table.values[a];
      while (static_cast<int>(seq.size()) <= depths[a]) {
        const long m = static_cast<long>(seq.size()) - 1;
        const auto deps = detail::product_indices(cd, a, m);
        bool ready = true;
        for (const auto& [b, idx] : deps) {
          if (idx >= static_cast<long>(table.values[b].size())) {
            ready = false;
            break;
          }
        }
        if (!ready) break;
        E prod = field.one();
        for (const auto& [b, idx] : deps) prod = E(prod * table.values[b][idx]);
        if (field.is_zero(seq[m - 1])) throw SingularSpecialization(a + 1, static_cast<int>(m));
        E next = E(E(seq[m] * seq[m]) - prod);
        next = E(next / seq[m - 1]);
        seq.push_back(std::move(next));
        progress = true;
      }
    }
  }
  for (int a = 0; a < r; ++a) {
    if (static_cast<int>(table.values[a].size()) <= depths[a]) {
      throw Error(ErrorCode::invalid_input, "depth schedule cannot be satisfied for node " + std::to_string(a + 1));
    }
  }
  return table;
}

/// Generates node `node` to `depth`, other nodes only as far as needed.
template <class Field>
QTable<Field> generate(LieType type, const Specialization& spec, const Field& field, int node, int depth) {
  const auto q = initial_values(type, spec);
  return generate(type, field, to_field(field, std::span<const Rational>(q)), required_depths(type, node, depth));
}

/// True when every entry of a rational table is an integer.
bool is_integral(const QTable<RationalField>& table);

template <class Field>
std::string to_csv(const QTable<Field>& table) {
  std::string out = "node,m,value\n";
  for (int a = 1; a <= table.rank(); ++a)
    for (int m = 0; m <= table.depth(a); ++m)
      out += std::to_string(a) + "," + std::to_string(m) + "," + table.field.to_string(table.at(a, m)) + "\n";
  return out;
}

/// 64-bit FNV-1a of a string, hex encoded.
std::string fnv1a_hex(const std::string& data);

template <class Field>
std::string digest(const QTable<Field>& table) {
  return fnv1a_hex(table.type.name() + "|" + table.field.name() + "|" + to_csv(table));
}

nlohmann::json table_json_header(LieType type, const std::string& field_name, const std::vector<int>& depths);
void table_json_add_sequence(nlohmann::json& doc, int node, const std::vector<std::string>& values);

template <class Field>
nlohmann::json to_json(const QTable<Field>& table) {
  std::vector<int> depths;
  for (int a = 1; a <= table.rank(); ++a) depths.push_back(table.depth(a));
  auto doc = table_json_header(table.type, table.field.name(), depths);
  for (int a = 1; a <= table.rank(); ++a) {
    std::vector<std::string> vals;
    for (const auto& v : table.sequence(a)) vals.push_back(table.field.to_string(v));
    table_json_add_sequence(doc, a, vals);
  }
  return doc;
}

}  // namespace qrec
