#include <doctest.h>

#include "qrec/conjlab.hpp"
#include "qrec/error.hpp"

using namespace qrec;

namespace {

const RationalField Q;

std::vector<Rational> ints(std::initializer_list<long> xs) {
  std::vector<Rational> out;
  for (long x : xs) out.emplace_back(x);
  return out;
}

KrBranchingTable e6_branching() {
  return KrBranchingTable::defaults(LieType::parse("E6")).merge(KrBranchingTable::load(QREC_DATA_DIR "/e6_branching.json"));
}

DetectionRun character_run(LieType type, int node, const TorusPoint& y, KrBranchingTable branching) {
  const auto q = initial_values(type, CharacterPoint{y, std::move(branching)});
  return detect_node(type, node, q, {});
}

void require_all_pass(const VerificationReport& rep) {
  for (const auto& c : rep.checks) {
    INFO(rep.job << ": " << c.name << " " << c.witness);
    CHECK(c.status != CheckStatus::fail);
  }
}

int count(const VerificationReport& rep, CheckStatus s) {
  return static_cast<int>(std::count_if(rep.checks.begin(), rep.checks.end(), [s](const auto& c) { return c.status == s; }));
}

}  // namespace

TEST_CASE("catalogued weight sets") {
  const auto c3 = build_lambda(LieType::parse("C3"), 1);
  CHECK(total_multiplicity(c3.lambda) == 6);
  CHECK(c3.lambda_prime == WeightMultiset{{Weight::zero(3), 1}});
  CHECK(c3.stride == 2);
  CHECK(c3.predicted_order() == 8);

  const auto f4 = build_lambda(LieType::parse("F4"), 4);
  CHECK(total_multiplicity(f4.lambda) == 24);
  CHECK(total_multiplicity(f4.lambda_prime) == 25);
  CHECK(f4.predicted_order() == 74);
  CHECK(build_lambda(LieType::parse("F4"), 1).predicted_order() == 25);

  const auto e8 = build_lambda(LieType::parse("E8"), 7);
  CHECK(total_multiplicity(e8.lambda) == 241);

  CHECK(build_lambda(LieType::parse("G2"), 1).predicted_order() == 7);
  CHECK(build_lambda(LieType::parse("G2"), 2).predicted_order() == 27);
  CHECK(build_lambda(LieType::parse("B3"), 1).predicted_order() == 6);
  CHECK(build_lambda(LieType::parse("D4"), 4).predicted_order() == 8);
  CHECK(build_lambda(LieType::parse("E6"), 1).predicted_order() == 27);
  CHECK(build_lambda(LieType::parse("E7"), 6).predicted_order() == 56);
  CHECK(build_lambda(LieType::parse("A4"), 2).predicted_order() == 10);

  // G2 lists are weights of the two fundamental modules
  const auto g2 = LieType::parse("G2");
  const auto w1 = weight_system(g2, Weight::fundamental(2, 1));
  const auto w2 = weight_system(g2, Weight::fundamental(2, 2));
  for (const auto& [w, m] : build_lambda(g2, 1).lambda) CHECK(w1.count(w));
  for (const auto& [w, m] : build_lambda(g2, 2).lambda) CHECK(w2.count(w));

  try {
    build_lambda(LieType::parse("B3"), 2);
    FAIL("expected NotInCatalogue");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::not_in_catalogue);
  }
}

TEST_CASE("factorization at character points") {
  SUBCASE("A2 at y = (2, 3)") {
    const auto type = LieType::parse("A2");
    const TorusPoint y({Rational(2), Rational(3)});
    const auto run = character_run(type, 1, y, KrBranchingTable::defaults(type));
    const auto expected = multiply(Q, multiply(Q, ints({1, -2}), {Rational(1), ratio(-3, 2)}), {Rational(1), ratio(-1, 3)});
    CHECK(run.rec.polynomial() == expected);
    CHECK(check_factorization(run.rec, build_lambda(type, 1), y).status == CheckStatus::pass);
  }
  SUBCASE("A1 at y = 2") {
    const auto type = LieType::parse("A1");
    const TorusPoint y({Rational(2)});
    const auto run = character_run(type, 1, y, KrBranchingTable::defaults(type));
    CHECK(run.rec.polynomial() == std::vector<Rational>{Rational(1), ratio(-5, 2), Rational(1)});
  }
  SUBCASE("G2 node 2 uses stride-3 factors") {
    const auto type = LieType::parse("G2");
    const TorusPoint y({ratio(3, 2), ratio(-5, 7)});
    const auto spec = build_lambda(type, 2);
    CHECK(spec.stride == 3);
    const auto run = character_run(type, 2, y, KrBranchingTable::defaults(type));
    CHECK(run.rec.order == 27);
    CHECK(check_factorization(run.rec, spec, y).status == CheckStatus::pass);
    // with stride 1 the same sets give a different polynomial
    auto flat = spec;
    flat.stride = 1;
    CHECK(factorized_polynomial(flat, y) != factorized_polynomial(spec, y));
  }
  SUBCASE("mismatch reports the first differing degree") {
    RecurrencePoly<RationalField> rec{2, ints({1, 3, 1}), 2};
    const auto res = check_factorization(rec, build_lambda(LieType::parse("A1"), 1), TorusPoint({Rational(2)}));
    CHECK(res.status == CheckStatus::fail);
    CHECK(res.witness.find("degree 1") != std::string::npos);
  }
}

TEST_CASE("exterior-power coefficient formulas") {
  std::mt19937_64 rng(3);
  for (int r = 1; r <= 4; ++r) {
    const auto type = LieType::make(Family::A, r);
    const auto y = random_torus_point(r, rng);
    const auto values = weight_values(weight_system(type, Weight::fundamental(r, 1)), y);
    for (int k = 0; k <= r + 1; ++k)
      CHECK(coefficient_formula(type, 1, k).evaluate(y) == elementary_symmetric(std::span<const Rational>(values), k));
  }
  for (int r = 2; r <= 4; ++r) {
    const auto type = LieType::make(Family::C, r);
    CHECK(coefficient_formula(type, 1, r + 1).expand().empty());
    CHECK(coefficient_formula(type, 1, r + 1).evaluate(random_torus_point(r, rng)) == 0);
  }
  const auto b2 = LieType::parse("B2");
  const auto poly = decompose_invariant(b2, coefficient_formula(b2, 1, 2).expand());
  CHECK(poly == SparseQPolynomial::variable(2, 2) * SparseQPolynomial::variable(2, 2) - 2 * SparseQPolynomial::variable(2, 1));
  CHECK(poly.to_string() == "q_2^2 - 2 q_1");
  CHECK_THROWS_AS(coefficient_formula(LieType::parse("E6"), 1, 1), Error);
  CHECK_THROWS_AS(coefficient_formula(LieType::parse("B2"), 1, 5), Error);
}

TEST_CASE("invariant decomposition") {
  const auto a1 = LieType::parse("A1");
  const LaurentPolynomial sym{{Weight({2}), 1}, {Weight({0}), 1}, {Weight({-2}), 1}};
  const auto p = decompose_invariant(a1, sym);
  CHECK(p.to_string() == "q_1^2 - 1");
  for (const char* name : {"A2", "B2", "G2", "C3"}) {
    const auto type = LieType::parse(name);
    for (int a = 1; a <= type.rank; ++a)
      CHECK(decompose_invariant(type, character(type, Weight::fundamental(type.rank, a))) == SparseQPolynomial::variable(type.rank, a));
  }
  // round trip through products and exterior powers
  for (const char* name : {"A1", "A2", "B2", "G2"}) {
    const auto type = LieType::parse(name);
    const auto ws = weight_system(type, Weight::fundamental(type.rank, 1));
    for (int k = 0; k <= 4; ++k) {
      const auto inv = exterior_power(ws, k);
      const auto poly = decompose_invariant(type, inv);
      CHECK(expand_in_characters(type, poly) == inv);
    }
    const auto rho = character(type, Weight(std::vector<int>(type.rank, 1)));
    CHECK(expand_in_characters(type, decompose_invariant(type, rho)) == rho);
  }
  const LaurentPolynomial lopsided{{Weight({1}), 1}};
  try {
    decompose_invariant(a1, lopsided);
    FAIL("expected NotInvariant");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::not_invariant);
  }
  CHECK_THROWS_AS(decompose_invariant(LieType::parse("A2"), character(LieType::parse("A2"), Weight({5, 5})), 50), Error);
}

TEST_CASE("identity catalogue at the E6 example") {
  const auto type = LieType::parse("E6");
  const auto q = ints({17, 22, 38, 40, 14, 31});
  const auto cat = identity_catalogue(type, 1);
  std::map<int, Rational> v;
  for (const auto& [k, poly] : cat.values) v[k] = poly.evaluate(q);
  CHECK(v[1] == 17);
  CHECK(v[2] == 8);
  CHECK(v[3] == -230);
  CHECK(v[4] == 422);
  CHECK(v[23] == -418);
  CHECK(v[24] == -230);
  CHECK(v[25] == 23);
  CHECK(v[26] == 14);
  CHECK(v[27] == 1);
  CHECK(cat.values[1].value.to_string() == "q_2 - q_5");

  const auto run = detect_node(type, 1, q, {});
  for (const auto& c : check_identities(type, 1, run.rec, q)) CHECK_MESSAGE(c.status == CheckStatus::pass, c.name);
}

TEST_CASE("numerators") {
  std::mt19937_64 rng(11);
  SUBCASE("B3 at a character point") {
    const auto type = LieType::parse("B3");
    const auto y = random_torus_point(3, rng);
    const auto run = character_run(type, 1, y, KrBranchingTable::defaults(type));
    CHECK(numerator(Q, std::span<const Rational>(run.sequence), run.rec) == ints({1, 1}));
    CHECK(check_numerator(type, 1, run.sequence, run.rec, run.q, y).status == CheckStatus::pass);
  }
  SUBCASE("D4 at a character point") {
    const auto type = LieType::parse("D4");
    const auto y = random_torus_point(4, rng);
    const auto run = character_run(type, 1, y, KrBranchingTable::defaults(type));
    CHECK(numerator(Q, std::span<const Rational>(run.sequence), run.rec) == ints({1, 0, -1}));
  }
  SUBCASE("G2 dimension mode") {
    const auto type = LieType::parse("G2");
    const auto q = initial_values(type, DimensionMode{KrBranchingTable::defaults(type)});
    const auto run = detect_node(type, 1, q, {});
    CHECK(check_numerator(type, 1, run.sequence, run.rec, q, TorusPoint::identity(2)).status == CheckStatus::pass);
    CHECK(expected_numerator(type, 1, q, std::nullopt).numerator == ints({1, 8, 8, 1}));
  }
  SUBCASE("E6 numerator table in dimension mode") {
    const auto type = LieType::parse("E6");
    const auto want = expected_numerator(type, 1, {}, TorusPoint::identity(6));
    REQUIRE(want.numerator);
    // (1 - D)^10 (1 + 10 D + 28 D^2 + 28 D^3 + 10 D^4 + D^5)
    std::vector<Rational> oracle = ints({1, 10, 28, 28, 10, 1});
    for (int i = 0; i < 10; ++i) oracle = multiply(Q, oracle, ints({1, -1}));
    CHECK(*want.numerator == oracle);
    CHECK(expected_numerator(type, 1, ints({1, 2, 3, 4, 5, 6}), std::nullopt).skip_reason != "");
  }
  SUBCASE("E6 numerator at a character point") {
    const auto type = LieType::parse("E6");
    const auto y = random_torus_point(6, rng);
    const auto q = initial_values(type, CharacterPoint{y, e6_branching()});
    const auto tab = generate(type, Q, q, required_depths(type, 1, 50));
    const auto& s = tab.sequence(1);
    RecurrencePoly<RationalField> unused;
    CHECK(check_numerator(type, 1, s, unused, q, y).status == CheckStatus::pass);
  }
}

TEST_CASE("growth degrees by finite differences") {
  CHECK(finite_difference_degree(ints({1, 2, 3, 4, 5})) == 1);
  CHECK(finite_difference_degree(ints({0, 1, 4, 9, 16, 25})) == 2);
  CHECK_THROWS_AS(finite_difference_degree(ints({1, 2, 4, 8})), Error);

  for (const char* name : {"A1", "A3", "B3", "C3", "D4", "G2"}) {
    const auto type = LieType::parse(name);
    const auto q = initial_values(type, DimensionMode{KrBranchingTable::defaults(type)});
    const auto tab = generate(type, Q, q, required_depths_all(type, 40));
    for (const auto& g : check_growth_degree(tab)) CHECK_MESSAGE(g.passed(), name << " node " << g.node);
  }
  const auto e6 = LieType::parse("E6");
  const auto tab = generate(e6, Q, initial_values(e6, DimensionMode{e6_branching()}), required_depths_all(e6, 46));
  std::vector<int> got;
  for (const auto& g : check_growth_degree(tab)) got.push_back(g.detected);
  CHECK(got == std::vector<int>{16, 30, 42, 30, 16, 22});

  const auto shallow = generate(LieType::parse("G2"), Q, ints({15, 7}), std::vector<int>{4, 12});
  try {
    check_growth_degree(shallow);
    FAIL("expected InsufficientDepth");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::insufficient_depth);
  }
}

TEST_CASE("coefficient interpolation") {
  SUBCASE("synthetic data") {
    std::mt19937_64 rng(5);
    const auto cands = monomials_up_to(3, 2);
    CHECK(cands.size() == 10);
    std::vector<Experiment> xs;
    for (int i = 0; i < 20; ++i) {
      auto q = random_q(3, rng);
      xs.push_back({q, q[0] * q[1] - 2 * q[2] + 7});
    }
    const auto p = interpolate_coefficients(3, cands, xs);
    CHECK(p.to_string() == "q_1 q_2 - 2 q_3 + 7");

    auto halves = xs;
    for (auto& x : halves) x.value = x.q[0] / 2;
    try {
      interpolate_coefficients(3, cands, halves);
      FAIL("expected NonIntegerSolution");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::non_integer_solution);
    }
    auto cubes = xs;
    for (auto& x : cubes) x.value = x.q[0] * x.q[0] * x.q[0];
    try {
      interpolate_coefficients(3, cands, cubes);
      FAIL("expected NoFit");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::no_fit);
    }
    try {
      interpolate_coefficients(3, cands, std::vector<Experiment>(xs.begin(), xs.begin() + 12));
      FAIL("expected UnderdeterminedSystem");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::underdetermined_system);
    }
    std::vector<Experiment> same(20, xs[0]);
    CHECK_THROWS_AS(interpolate_coefficients(3, cands, same), Error);
  }
  SUBCASE("A2 C_1 = q_1") {
    std::mt19937_64 rng(9);
    const auto type = LieType::parse("A2");
    std::vector<Experiment> xs;
    while (xs.size() < 8) {
      const auto q = random_q(2, rng);
      try {
        xs.push_back({q, detect_node(type, 1, q, {}).rec.coeffs[1]});
      } catch (const SingularSpecialization&) {
      }
    }
    CHECK(interpolate_coefficients(2, monomials_up_to(2, 1), xs) == SparseQPolynomial::variable(2, 1));
  }
  SUBCASE("E6 rows k = 2 and k = 25") {
    std::mt19937_64 rng(2024);
    const auto type = LieType::parse("E6");
    DetectOptions opts;
    opts.modular = true;
    std::vector<Experiment> c2, c25;
    while (c2.size() < 12) {
      const auto q = random_q(6, rng);
      try {
        const auto run = detect_node(type, 1, q, opts);
        REQUIRE(run.rec.order == 27);
        c2.push_back({q, run.rec.coeffs[2]});
        c25.push_back({q, run.rec.coeffs[25]});
      } catch (const SingularSpecialization&) {
      }
    }
    const auto lin = monomials_up_to(6, 1);
    CHECK(interpolate_coefficients(6, lin, c2).to_string() == "q_2 - q_5");
    CHECK(interpolate_coefficients(6, lin, c25).to_string() == "-q_1 + q_4");
  }
}

TEST_CASE("verification pipeline") {
  std::mt19937_64 rng(7);
  SUBCASE("B3 node 1 at a character point") {
    const auto type = LieType::parse("B3");
    const auto rep = verify({type, 1, CharacterPoint{random_torus_point(3, rng), KrBranchingTable::defaults(type)}, {}});
    require_all_pass(rep);
    CHECK(rep.rec->order == 6);
    CHECK(count(rep, CheckStatus::pass) >= 10);
  }
  SUBCASE("classical node 1 at character points") {
    for (const char* name : {"A3", "B2", "B4", "C2", "C3", "C4", "D3", "D4"}) {
      const auto type = LieType::parse(name);
      const auto rep = verify({type, 1, CharacterPoint{random_torus_point(type.rank, rng), KrBranchingTable::defaults(type)}, {}});
      require_all_pass(rep);
      CHECK(rep.passed());
    }
  }
  SUBCASE("G2 with raw q") {
    for (int node : {1, 2}) {
      const auto rep = verify({LieType::parse("G2"), node, RawQ{ints({13, -4})}, {}});
      require_all_pass(rep);
      CHECK(rep.rec->order == (node == 1 ? 7 : 27));
    }
  }
  SUBCASE("dimension mode skips order checks") {
    const auto type = LieType::parse("E6");
    const auto rep = verify({type, 1, DimensionMode{e6_branching()}, {}});
    require_all_pass(rep);
    CHECK(rep.rec->order == 17);
    CHECK(count(rep, CheckStatus::skipped) >= 2);
  }
  SUBCASE("report json") {
    const auto rep = verify({LieType::parse("A2"), 2, RawQ{ints({3, 5})}, {}});
    const auto j = rep.to_json();
    CHECK(j["ell_detected"] == 3);
    CHECK(j["ell_predicted"] == 3);
    CHECK(j["mode"] == "raw");
    CHECK(j["checks"].size() == rep.checks.size());
    CHECK(j.dump() == verify({LieType::parse("A2"), 2, RawQ{ints({3, 5})}, {}}).to_json().dump());
  }
  SUBCASE("modular mode refuses rational initial values") {
    DetectOptions opts;
    opts.modular = true;
    CHECK_THROWS_AS(detect_node(LieType::parse("A2"), 1, {ratio(1, 2), Rational(3)}, opts), Error);
  }
}

TEST_CASE("F4 in modular mode") {
  const auto type = LieType::parse("F4");
  VerifyOptions opts{type, 1, RawQ{ints({7, -3, 11, 5})}, {}};
  opts.detect.modular = true;
  for (int node : {1, 4}) {
    opts.node = node;
    const auto rep = verify(opts);
    require_all_pass(rep);
    CHECK(rep.rec->order == (node == 1 ? 25 : 74));
    CHECK(rep.rec->confidence == Confidence::modular);
  }
}
