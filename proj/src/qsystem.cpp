#include "qrec/qsystem.hpp"

#include <cstdio>
#include <fstream>

#include <nlohmann/json.hpp>

namespace qrec {

namespace detail {

std::vector<std::pair<int, long>> product_indices(const CartanData& cd, int a, long m) {
  std::vector<std::pair<int, long>> out;
  for (int b = 0; b < cd.rank(); ++b) {
    const int cab = cd.cartan(a, b);
    if (b == a || cab == 0) continue;
    const int cba = cd.cartan(b, a);
    for (int k = 0; k < -cab; ++k) out.emplace_back(b, floor_div(cba * m - k, cab));
  }
  return out;
}

}  // namespace detail

namespace {

Weight omega(int rank, int node) { return node == 0 ? Weight::zero(rank) : Weight::fundamental(rank, node); }

// omega_a, omega_{a-2}, ..., down to omega_1 or the trivial weight
std::vector<Weight> alternating_chain(int rank, int a) {
  std::vector<Weight> out;
  for (int b = a; b >= 0; b -= 2) out.push_back(omega(rank, b));
  return out;
}

}  // namespace

KrBranchingTable KrBranchingTable::defaults(LieType type) {
  KrBranchingTable t{type, {}};
  const int r = type.rank;
  switch (type.family) {
    case Family::A:
    case Family::C:
      for (int a = 1; a <= r; ++a) t.nodes[a] = {omega(r, a)};
      break;
    case Family::B:
      for (int a = 1; a < r; ++a) t.nodes[a] = alternating_chain(r, a);
      t.nodes[r] = {omega(r, r)};
      break;
    case Family::D:
      for (int a = 1; a <= r - 2; ++a) t.nodes[a] = alternating_chain(r, a);
      t.nodes[r - 1] = {omega(r, r - 1)};
      t.nodes[r] = {omega(r, r)};
      break;
    case Family::G:
      t.nodes[1] = {omega(r, 1), omega(r, 0)};
      t.nodes[2] = {omega(r, 2)};
      break;
    case Family::F:
      t.nodes[1] = {omega(r, 1), omega(r, 0)};
      t.nodes[4] = {omega(r, 4)};
      break;
    case Family::E:
      if (r == 6) {
        t.nodes[1] = {omega(r, 1)};
        t.nodes[5] = {omega(r, 5)};
      } else if (r == 7) {
        t.nodes[6] = {omega(r, 6)};
      } else {
        t.nodes[7] = {omega(r, 7), omega(r, 0)};
      }
      break;
  }
  return t;
}

KrBranchingTable KrBranchingTable::from_json(const nlohmann::json& doc) {
  const auto name = doc.at("type").get<std::string>();
  const LieType type = name.size() == 1 ? LieType::parse(name, doc.at("rank").get<int>()) : LieType::parse(name);
  if (doc.contains("rank") && doc.at("rank").get<int>() != type.rank) {
    throw Error(ErrorCode::invalid_input, "branching config: rank does not match type " + name);
  }
  KrBranchingTable t{type, {}};
  for (const auto& [key, list] : doc.at("branching").items()) {
    const int node = std::stoi(key);
    if (node < 1 || node > type.rank) throw Error(ErrorCode::invalid_input, "branching config: bad node " + key);
    std::vector<Weight> ws;
    for (const auto& coords : list) {
      Weight w(coords.get<std::vector<int>>());
      if (w.rank() != type.rank || !w.is_dominant()) {
        throw Error(ErrorCode::invalid_input, "branching config: node " + key + " has non-dominant or malformed weight");
      }
      ws.push_back(std::move(w));
    }
    t.nodes[node] = std::move(ws);
  }
  return t;
}

KrBranchingTable KrBranchingTable::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::invalid_input, "cannot open branching config " + path);
  try {
    return from_json(nlohmann::json::parse(in));
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::invalid_input, "malformed branching config " + path + ": " + e.what());
  }
}

nlohmann::json KrBranchingTable::to_json() const {
  nlohmann::json doc{{"type", type.name()}, {"rank", type.rank}, {"branching", nlohmann::json::object()}};
  for (const auto& [node, ws] : nodes) {
    auto& list = doc["branching"][std::to_string(node)] = nlohmann::json::array();
    for (const auto& w : ws) list.push_back(w.coords);
  }
  return doc;
}

bool KrBranchingTable::covers_all() const {
  for (int a = 1; a <= type.rank; ++a)
    if (!covers(a)) return false;
  return true;
}

KrBranchingTable& KrBranchingTable::merge(const KrBranchingTable& other) {
  if (!(other.type == type)) throw Error(ErrorCode::invalid_input, "branching tables for different types");
  for (const auto& [node, ws] : other.nodes) nodes[node] = ws;
  return *this;
}

const std::vector<Weight>& KrBranchingTable::at(int node) const {
  auto it = nodes.find(node);
  if (it == nodes.end()) {
    throw Error(ErrorCode::missing_branching,
                "no decomposition of W_1^(" + std::to_string(node) + ") for " + type.name() +
                    "; supply one with --branching");
  }
  return it->second;
}

std::string mode_name(const Specialization& spec) {
  struct {
    std::string operator()(const RawQ&) const { return "raw"; }
    std::string operator()(const CharacterPoint&) const { return "character-point"; }
    std::string operator()(const DimensionMode&) const { return "dimension"; }
  } visitor;
  return std::visit(visitor, spec);
}

std::vector<Rational> initial_values(LieType type, const Specialization& spec, long cap) {
  const int r = type.rank;
  if (const auto* raw = std::get_if<RawQ>(&spec)) {
    if (static_cast<int>(raw->q.size()) != r) {
      throw Error(ErrorCode::invalid_input,
                  "expected " + std::to_string(r) + " initial values for " + type.name());
    }
    return raw->q;
  }
  std::vector<Rational> q(r, Rational(0));
  if (const auto* cp = std::get_if<CharacterPoint>(&spec)) {
    if (cp->y.rank() != r) throw Error(ErrorCode::invalid_input, "torus point has wrong rank");
    for (int a = 1; a <= r; ++a)
      for (const auto& mu : cp->branching.at(a)) q[a - 1] += evaluate(weight_system(type, mu, cap), cp->y);
    return q;
  }
  const auto& dm = std::get<DimensionMode>(spec);
  for (int a = 1; a <= r; ++a)
    for (const auto& mu : dm.branching.at(a)) q[a - 1] += dimension(type, mu);
  return q;
}

std::vector<int> required_depths(LieType type, int node, int depth) {
  const auto cd = cartan_data(type);
  const int r = type.rank;
  if (node < 1 || node > r) throw Error(ErrorCode::invalid_input, "node out of range");
  if (depth < 0) throw Error(ErrorCode::invalid_input, "depth must be nonnegative");
  std::vector<int> depths(r, 1);
  depths[node - 1] = std::max(depth, 1);
  for (bool changed = true; changed;) {
    changed = false;
    for (int c = 0; c < r; ++c) {
      if (depths[c] < 2) continue;
      for (const auto& [b, idx] : detail::product_indices(cd, c, depths[c] - 1)) {
        if (idx > depths[b]) {
          depths[b] = static_cast<int>(idx);
          changed = true;
        }
      }
    }
  }
  return depths;
}

std::vector<int> required_depths_all(LieType type, int depth) {
  std::vector<int> out(type.rank, 1);
  for (int a = 1; a <= type.rank; ++a) {
    const auto d = required_depths(type, a, depth);
    for (int b = 0; b < type.rank; ++b) out[b] = std::max(out[b], d[b]);
  }
  return out;
}

bool is_integral(const QTable<RationalField>& table) {
  for (const auto& seq : table.values)
    for (const auto& v : seq)
      if (v.get_den() != 1) return false;
  return true;
}

std::string fnv1a_hex(const std::string& data) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

nlohmann::json table_json_header(LieType type, const std::string& field_name, const std::vector<int>& depths) {
  return {{"type", type.name()},
          {"rank", type.rank},
          {"field", field_name},
          {"depths", depths},
          {"values", nlohmann::json::object()}};
}

void table_json_add_sequence(nlohmann::json& doc, int node, const std::vector<std::string>& values) {
  doc["values"][std::to_string(node)] = values;
}

}  // namespace qrec
