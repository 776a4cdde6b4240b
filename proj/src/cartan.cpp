#include "qrec/cartan.hpp"

#include <cctype>
#include <fstream>

#include <nlohmann/json.hpp>

#include "qrec/error.hpp"
#include "qrec/linalg.hpp"

namespace qrec {

namespace {

Integer pow_int(unsigned long base, unsigned long exp) {
  Integer r;
  mpz_ui_pow_ui(r.get_mpz_t(), base, exp);
  return r;
}

void link(Eigen::MatrixXi& c, int a, int b) {
  c(a, b) = -1;
  c(b, a) = -1;
}

void check_node(LieType type, int node) {
  if (node < 1 || node > type.rank) {
    throw Error(ErrorCode::invalid_input,
                "node " + std::to_string(node) + " out of range for " + type.name());
  }
}

}  // namespace

char family_letter(Family f) { return "ABCDEFG"[static_cast<int>(f)]; }

LieType LieType::make(Family family, int rank) {
  bool ok = false;
  switch (family) {
    case Family::A: ok = rank >= 1; break;
    case Family::B: ok = rank >= 2; break;
    case Family::C: ok = rank >= 2; break;
    case Family::D: ok = rank >= 3; break;
    case Family::E: ok = rank >= 6 && rank <= 8; break;
    case Family::F: ok = rank == 4; break;
    case Family::G: ok = rank == 2; break;
  }
  if (!ok) {
    throw Error(ErrorCode::invalid_input,
                std::string("invalid rank ") + std::to_string(rank) + " for type " + family_letter(family));
  }
  return LieType{family, rank};
}

LieType LieType::parse(std::string_view family, int rank) {
  if (family.size() != 1) throw Error(ErrorCode::invalid_input, "bad type family '" + std::string(family) + "'");
  const char c = static_cast<char>(std::toupper(static_cast<unsigned char>(family[0])));
  if (c < 'A' || c > 'G') throw Error(ErrorCode::invalid_input, "bad type family '" + std::string(family) + "'");
  return make(static_cast<Family>(c - 'A'), rank);
}

LieType LieType::parse(std::string_view name) {
  if (name.size() < 2) throw Error(ErrorCode::invalid_input, "bad type name '" + std::string(name) + "'");
  int rank = 0;
  for (char ch : name.substr(1)) {
    if (!std::isdigit(static_cast<unsigned char>(ch)) || rank > 100000) {
      throw Error(ErrorCode::invalid_input, "bad type name '" + std::string(name) + "'");
    }
    rank = rank * 10 + (ch - '0');
  }
  return parse(name.substr(0, 1), rank);
}

std::string LieType::name() const { return std::string(1, family_letter(family)) + std::to_string(rank); }

CartanData cartan_data(LieType type) {
  type = LieType::make(type.family, type.rank);
  const int r = type.rank;
  Eigen::MatrixXi c = Eigen::MatrixXi::Zero(r, r);
  for (int a = 0; a < r; ++a) c(a, a) = 2;
  std::vector<int> t(r, 1);

  switch (type.family) {
    case Family::A:
      for (int a = 0; a + 1 < r; ++a) link(c, a, a + 1);
      break;
    case Family::B:
      for (int a = 0; a + 1 < r; ++a) link(c, a, a + 1);
      c(r - 1, r - 2) = -2;  // node r short
      t[r - 1] = 2;
      break;
    case Family::C:
      for (int a = 0; a + 1 < r; ++a) link(c, a, a + 1);
      c(r - 2, r - 1) = -2;  // node r long
      for (int a = 0; a + 1 < r; ++a) t[a] = 2;
      break;
    case Family::D:
      for (int a = 0; a + 2 < r; ++a) link(c, a, a + 1);
      link(c, r - 3, r - 1);
      break;
    case Family::E:
      for (int a = 0; a + 2 < r; ++a) link(c, a, a + 1);
      link(c, 2, r - 1);
      break;
    case Family::F:
      link(c, 0, 1);
      link(c, 1, 2);
      link(c, 2, 3);
      c(2, 1) = -2;
      t = {1, 1, 2, 2};
      break;
    case Family::G:
      link(c, 0, 1);
      c(1, 0) = -3;
      t = {1, 3};
      break;
  }

  CartanData data;
  data.type = type;
  data.cartan = c;
  data.t = t;
  RationalMatrix cq(r, r);
  for (int a = 0; a < r; ++a)
    for (int b = 0; b < r; ++b) cq(a, b) = c(a, b);
  data.cartan_inverse = inverse(RationalField{}, cq);
  // (omega_a, omega_b) = (C^-1)_ab / t_a, from (omega_a, alpha_b) = delta_ab / t_b.
  data.quadratic_form = RationalMatrix(r, r);
  for (int a = 0; a < r; ++a)
    for (int b = 0; b < r; ++b) data.quadratic_form(a, b) = data.cartan_inverse(a, b) / t[a];
  return data;
}

std::vector<Rational> growth_degree(LieType type) {
  const auto data = cartan_data(type);
  std::vector<Rational> deg(type.rank);
  for (int a = 0; a < type.rank; ++a) {
    Rational s = 0;
    for (int b = 0; b < type.rank; ++b) s += data.cartan_inverse(a, b);
    deg[a] = 2 * s;
    if (deg[a].get_den() != 1) {
      throw Error(ErrorCode::invalid_input, "non-integral growth degree for " + type.name());
    }
  }
  return deg;
}

Integer lm_coefficient(int m, int n) {
  if (m < 0 || n < 0 || n > m) {
    throw Error(ErrorCode::invalid_input, "L_{m,n} requires 0 <= n <= m");
  }
  if (n == 0) return 1;
  if (n == m) return (pow_int(3, m) + 1) / 2;
  return 2 * lm_coefficient(m - 1, n - 1) + lm_coefficient(m - 1, n);
}

Integer mm_coefficient(int m, int n) {
  if (m < 0 || n < 0 || n > m) {
    throw Error(ErrorCode::invalid_input, "M_{m,n} requires 0 <= n <= m");
  }
  if (n == 0) return 1;
  if (n == m) return 2 * pow_int(3, m) - pow_int(2, m);
  return 2 * mm_coefficient(m - 1, n - 1) + mm_coefficient(m - 1, n);
}

OrderPrediction predicted_order(LieType type, int node) {
  type = LieType::make(type.family, type.rank);
  check_node(type, node);
  const int r = type.rank;
  const int a = node;
  switch (type.family) {
    case Family::A: {
      Integer b;
      mpz_bin_uiui(b.get_mpz_t(), r + 1, a);
      return OrderPrediction::known(b);
    }
    case Family::B:
      if (a < r) return OrderPrediction::known(lm_coefficient(r, a));
      return OrderPrediction::known(pow_int(3, r) - pow_int(2, r) + 1);
    case Family::C:
      if (a < r) return OrderPrediction::known(mm_coefficient(r, a));
      return OrderPrediction::known(pow_int(2, r));
    case Family::D:
      if (a <= r - 2) return OrderPrediction::known(lm_coefficient(r, a));
      return OrderPrediction::known(pow_int(2, r - 1));
    default:
      break;
  }
  // 0 marks an entry that has not been established.
  static const std::vector<int> e6 = {27, 243, 0, 243, 27, 73};
  static const std::vector<int> e7 = {127, 0, 0, 0, 0, 56, 0};
  static const std::vector<int> e8 = {0, 0, 0, 0, 0, 0, 241, 0};
  static const std::vector<int> f4 = {25, 0, 0, 74};
  static const std::vector<int> g2 = {7, 27};
  const std::vector<int>* table = nullptr;
  if (type.family == Family::E) table = r == 6 ? &e6 : r == 7 ? &e7 : &e8;
  if (type.family == Family::F) table = &f4;
  if (type.family == Family::G) table = &g2;
  const int v = (*table)[a - 1];
  return v ? OrderPrediction::known(v) : OrderPrediction::unknown();
}

std::vector<OrderTableRow> load_order_tables(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::invalid_input, "cannot open fixture file " + path);
  const auto doc = nlohmann::json::parse(in);
  if (doc.value("version", 0) != 1) throw Error(ErrorCode::invalid_input, "unsupported fixture version in " + path);
  std::vector<OrderTableRow> rows;
  for (const auto& entry : doc.at("tables")) {
    OrderTableRow row;
    row.type = LieType::parse(entry.at("type").get<std::string>(), entry.at("rank").get<int>());
    for (const auto& e : entry.at("ell")) {
      row.ell.push_back(e.is_null() ? std::nullopt : std::optional<long>(e.get<long>()));
    }
    row.deg = entry.at("deg").get<std::vector<long>>();
    if (static_cast<int>(row.ell.size()) != row.type.rank || static_cast<int>(row.deg.size()) != row.type.rank) {
      throw Error(ErrorCode::invalid_input, "fixture row for " + row.type.name() + " has wrong length");
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace qrec
