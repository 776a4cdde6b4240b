#include <doctest.h>

#include <nlohmann/json.hpp>

#include "qrec/error.hpp"
#include "qrec/qsystem.hpp"

using namespace qrec;

namespace {

std::vector<Rational> rationals(std::initializer_list<long> xs) {
  std::vector<Rational> out;
  for (long x : xs) out.emplace_back(x);
  return out;
}

QTable<RationalField> rational_table(LieType type, const std::vector<Rational>& q, int depth) {
  return generate(type, RationalField{}, q, required_depths_all(type, depth));
}

KrBranchingTable e6_full_branching() {
  const auto type = LieType::parse("E6");
  auto t = KrBranchingTable::defaults(type);
  auto f = [](int a) { return Weight::fundamental(6, a); };
  t.nodes[2] = {f(2), f(5)};
  t.nodes[3] = {f(3), f(1) + f(5), f(6), f(6), Weight::zero(6)};
  t.nodes[4] = {f(4), f(1)};
  t.nodes[6] = {f(6), Weight::zero(6)};
  return t;
}

}  // namespace

TEST_CASE("floor division rounds toward negative infinity") {
  CHECK(floor_div(-3, 2) == -2);
  CHECK(floor_div(3, -2) == -2);
  CHECK(floor_div(-4, 2) == -2);
  CHECK(floor_div(-5, -2) == 2);
  CHECK(floor_div(5, 2) == 2);
  // B2 node 2 couples to node 1 through floor((-m-k)/(-2))
  const auto cd = cartan_data(LieType::parse("B2"));
  for (long m = 0; m < 12; ++m) {
    const auto idx = detail::product_indices(cd, 1, m);
    REQUIRE(idx.size() == 2);
    CHECK(idx[0] == std::pair<int, long>{0, m / 2});
    CHECK(idx[1] == std::pair<int, long>{0, (m + 1) / 2});
  }
}

TEST_CASE("required depths") {
  for (int n : {1, 2, 5, 17}) {
    CHECK(required_depths(LieType::parse("A2"), 1, n) == std::vector<int>{n, std::max(n - 1, 1)});
    CHECK(required_depths(LieType::parse("G2"), 1, n) == std::vector<int>{n, std::max(3 * (n - 1), 1)});
    CHECK(required_depths(LieType::parse("B2"), 2, n) == std::vector<int>{std::max(n / 2, 1), n});
  }
  // the schedule is sufficient: generation succeeds for every target
  for (const char* name : {"A4", "B3", "C3", "D4", "F4", "G2", "E6"}) {
    const auto type = LieType::parse(name);
    std::vector<Rational> q(type.rank);
    for (int a = 0; a < type.rank; ++a) q[a] = 101 + 37 * a;
    for (int a = 1; a <= type.rank; ++a) {
      const auto tab = generate(type, RationalField{}, q, required_depths(type, a, 9));
      CHECK(tab.depth(a) == 9);
    }
  }
}

TEST_CASE("A1 with q = 2 gives m + 1") {
  const auto tab = rational_table(LieType::parse("A1"), rationals({2}), 30);
  for (int m = 0; m <= 30; ++m) CHECK(tab.at(1, m) == m + 1);
}

TEST_CASE("E6 random initial data") {
  const auto type = LieType::parse("E6");
  const auto tab = rational_table(type, rationals({17, 22, 38, 40, 14, 31}), 5);
  const std::vector<long> level2{267, -162, -25836, 1068, 156, 923};
  const std::vector<long> level3{4203, 314748, 21768228, 129276, 1662, 28315};
  for (int a = 1; a <= 6; ++a) {
    CHECK(tab.at(a, 2) == level2[a - 1]);
    CHECK(tab.at(a, 3) == level3[a - 1]);
  }
  CHECK(tab.at(1, 4) == 64983);
  CHECK(tab.at(1, 5) == 1015833);
  CHECK(is_integral(tab));
}

TEST_CASE("G2 dimension mode") {
  const auto type = LieType::parse("G2");
  const Specialization spec = DimensionMode{KrBranchingTable::defaults(type)};
  CHECK(initial_values(type, spec) == rationals({15, 7}));
  const auto tab = generate(type, spec, RationalField{}, 1, 4);
  const std::vector<long> expected{1, 15, 92, 365, 1113};
  for (int m = 0; m <= 4; ++m) CHECK(tab.at(1, m) == expected[m]);
}

TEST_CASE("integer initial data stays integral") {
  for (const char* name : {"A3", "B3", "C3", "D4", "F4", "G2", "B4", "C4"}) {
    const auto type = LieType::parse(name);
    std::vector<Rational> q(type.rank);
    for (int a = 0; a < type.rank; ++a) q[a] = (a % 2 ? -1 : 1) * (5 + 7 * a);
    CHECK_MESSAGE(is_integral(rational_table(type, q, 14)), name);
  }
}

TEST_CASE("prime field tables are reductions of rational tables") {
  PrimeGenerator gen(7);
  for (const char* name : {"A3", "B3", "G2"}) {
    const auto type = LieType::parse(name);
    std::vector<Rational> q(type.rank);
    for (int a = 0; a < type.rank; ++a) q[a] = 11 + 4 * a;
    const auto depths = required_depths_all(type, 40);
    const auto exact = generate(type, RationalField{}, q, depths);
    for (int i = 0; i < 3; ++i) {
      const PrimeField field(gen.next());
      const auto mod = generate(type, field, to_field(field, std::span<const Rational>(q)), depths);
      for (int a = 1; a <= type.rank; ++a)
        for (int m = 0; m <= exact.depth(a); ++m) REQUIRE(field.from_rational(exact.at(a, m)) == mod.at(a, m));
    }
  }
}

TEST_CASE("singular specialization reports node and level") {
  // A1 with q = 0: Q_2 = -1, Q_3 = (1 - 0) / 0
  try {
    rational_table(LieType::parse("A1"), rationals({0}), 5);
    FAIL("expected SingularSpecialization");
  } catch (const SingularSpecialization& e) {
    CHECK(e.node() == 1);
    CHECK(e.level() == 2);
    CHECK(e.code() == ErrorCode::singular_specialization);
  }
}

TEST_CASE("character point matches irreducible characters on a minuscule node") {
  const auto type = LieType::parse("E6");
  const TorusPoint y({Rational(2), ratio(-1, 3), Rational(3), ratio(1, 2), Rational(-2), ratio(5, 4)});
  const Specialization spec = CharacterPoint{y, e6_full_branching()};
  const auto tab = generate(type, spec, RationalField{}, 1, 3);
  for (int m = 0; m <= 3; ++m) CHECK(tab.at(1, m) == evaluate(weight_system(type, m * Weight::fundamental(6, 1)), y));
}

TEST_CASE("dimension mode stays positive") {
  const auto type = LieType::parse("E6");
  const auto tab = rational_table(type, initial_values(type, DimensionMode{e6_full_branching()}), 8);
  for (int a = 1; a <= 6; ++a)
    for (int m = 0; m <= tab.depth(a); ++m) CHECK(tab.at(a, m) > 0);
  CHECK(tab.at(1, 4) == dimension(type, 4 * Weight::fundamental(6, 1)));
}

TEST_CASE("missing branching is reported") {
  const auto type = LieType::parse("E7");
  CHECK_THROWS_AS(initial_values(type, DimensionMode{KrBranchingTable::defaults(type)}), Error);
  try {
    initial_values(type, DimensionMode{KrBranchingTable::defaults(type)});
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::missing_branching);
  }
}

TEST_CASE("branching config round trip") {
  const auto t = e6_full_branching();
  const auto back = KrBranchingTable::from_json(t.to_json());
  CHECK(back.type == t.type);
  CHECK(back.nodes == t.nodes);
  CHECK(back.covers_all());
  auto bad = t.to_json();
  bad["branching"]["1"] = {{-1, 0, 0, 0, 0, 0}};
  CHECK_THROWS_AS(KrBranchingTable::from_json(bad), Error);
}

TEST_CASE("csv and digest") {
  const auto tab = rational_table(LieType::parse("A1"), rationals({2}), 2);
  CHECK(to_csv(tab) == "node,m,value\n1,0,1\n1,1,2\n1,2,3\n");
  CHECK(digest(tab) == digest(rational_table(LieType::parse("A1"), rationals({2}), 2)));
  CHECK(digest(tab) != digest(rational_table(LieType::parse("A1"), rationals({3}), 2)));
  CHECK(to_json(tab)["values"]["1"][2] == "3");
}
