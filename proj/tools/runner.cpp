#include "runner.hpp"

#include <chrono>
#include <cstdlib>
#include <future>
#include <random>
#include <set>
#include <sstream>

namespace qrec::cli {

namespace {

using Clock = std::chrono::steady_clock;

constexpr int max_draws = 5;

double elapsed_ms(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

std::vector<std::string> split(const std::string& list) {
  std::vector<std::string> out;
  std::stringstream in(list);
  for (std::string item; std::getline(in, item, ',');) {
    const auto b = item.find_first_not_of(" \t");
    const auto e = item.find_last_not_of(" \t");
    if (b == std::string::npos) throw Error(ErrorCode::invalid_input, "empty entry in list '" + list + "'");
    out.push_back(item.substr(b, e - b + 1));
  }
  return out;
}

std::vector<std::string> strings(const std::vector<Rational>& xs) {
  std::vector<std::string> out;
  for (const auto& x : xs) out.push_back(x.get_str());
  return out;
}

KrBranchingTable branching_for(const ExperimentConfig& cfg) {
  auto table = KrBranchingTable::defaults(cfg.type());
  if (!cfg.branching_file.empty()) table.merge(KrBranchingTable::load(cfg.branching_file));
  return table;
}

std::vector<int> nodes_or_all(const ExperimentConfig& cfg) {
  const int r = cfg.type().rank;
  if (cfg.nodes.empty()) {
    std::vector<int> all(r);
    for (int a = 0; a < r; ++a) all[a] = a + 1;
    return all;
  }
  for (int a : cfg.nodes)
    if (a < 1 || a > r) throw Error(ErrorCode::invalid_input, "node " + std::to_string(a) + " out of range for " + cfg.type().name());
  return cfg.nodes;
}

DetectOptions detect_options(const ExperimentConfig& cfg) {
  DetectOptions opts;
  opts.modular = cfg.modular > 0;
  if (opts.modular) opts.prime_count = cfg.modular;
  opts.prime_seed = 0x5eed + cfg.seed;
  opts.guard = cfg.guard;
  opts.depth = cfg.depth;
  return opts;
}

/// Draws the specialization for the configured mode; random draws are redrawn
/// when the generator hits a vanishing denominator.
class Specializer {
 public:
  explicit Specializer(const ExperimentConfig& cfg) : cfg_(cfg), type_(cfg.type()), rng_(cfg.seed) {
    if (cfg.mode != "raw" && cfg.mode != "character-point" && cfg.mode != "dimension") {
      throw Error(ErrorCode::invalid_input, "unknown mode '" + cfg.mode + "'");
    }
    if (cfg.mode != "raw" && !cfg.q.empty()) throw Error(ErrorCode::invalid_input, "--q applies to raw mode only");
    if (cfg.mode != "character-point" && !cfg.y.empty()) {
      throw Error(ErrorCode::invalid_input, "--y applies to character-point mode only");
    }
  }

  bool random() const {
    return (cfg_.mode == "raw" && cfg_.q.empty()) || (cfg_.mode == "character-point" && cfg_.y.empty());
  }

  Specialization draw() {
    if (cfg_.mode == "raw") {
      auto q = cfg_.q.empty() ? random_q(type_.rank, rng_) : parse_rationals(cfg_.q);
      return RawQ{std::move(q)};
    }
    if (cfg_.mode == "character-point") {
      TorusPoint y = cfg_.y.empty() ? random_torus_point(type_.rank, rng_) : TorusPoint(parse_rationals(cfg_.y));
      if (y.rank() != type_.rank) throw Error(ErrorCode::invalid_input, "--y needs " + std::to_string(type_.rank) + " entries");
      return CharacterPoint{std::move(y), branching_for(cfg_)};
    }
    return DimensionMode{branching_for(cfg_)};
  }

  /// Calls fn(spec), redrawing up to max_draws times on a singular random draw.
  template <class Fn>
  auto with_retries(Fn&& fn, nlohmann::json& retries) {
    for (int attempt = 1;; ++attempt) {
      const auto spec = draw();
      try {
        return fn(spec);
      } catch (const SingularSpecialization& e) {
        if (!random() || attempt >= max_draws) throw;
        retries.push_back({{"attempt", attempt}, {"q", strings(initial_values(type_, spec))}, {"reason", e.what()}});
      }
    }
  }

 private:
  const ExperimentConfig& cfg_;
  LieType type_;
  std::mt19937_64 rng_;
};

nlohmann::json head(const std::string& command, const ExperimentConfig& cfg) {
  return {{"command", command}, {"config", cfg.echo()}};
}

void finish(Outcome& out, const ExperimentConfig& cfg, Clock::time_point start) {
  if (cfg.timings) out.report["timings_ms"] = elapsed_ms(start);
  seal(out.report);
}

std::string y_string(const Specialization& spec) {
  if (const auto* cp = std::get_if<CharacterPoint>(&spec)) return nlohmann::json(strings(cp->y.y)).dump();
  return "";
}

}  // namespace

LieType ExperimentConfig::type() const {
  if (type_name.empty()) throw Error(ErrorCode::invalid_input, "--type is required");
  if (type_name.size() == 1) {
    if (rank < 1) throw Error(ErrorCode::invalid_input, "--rank is required with a bare family letter");
    return LieType::parse(type_name, rank);
  }
  const auto t = LieType::parse(type_name);
  if (rank && rank != t.rank) throw Error(ErrorCode::invalid_input, "--rank disagrees with --type " + type_name);
  return t;
}

nlohmann::json ExperimentConfig::echo() const {
  nlohmann::json doc{{"type", type().name()}, {"mode", mode}, {"seed", std::to_string(seed)},
                     {"depth", depth ? nlohmann::json(depth) : nlohmann::json("auto")},
                     {"guard", guard}, {"field", modular ? "modular" : "rational"}};
  if (modular) doc["primes"] = modular;
  if (!nodes.empty()) doc["nodes"] = nodes;
  if (!q.empty()) doc["q"] = q;
  if (!y.empty()) doc["y"] = y;
  if (!branching_file.empty()) doc["branching"] = branching_file;
  return doc;
}

std::uint64_t default_seed() {
  if (const char* env = std::getenv("QREC_SEED")) {
    char* end = nullptr;
    const auto v = std::strtoull(env, &end, 10);
    if (end != env && *end == '\0') return v;
  }
  return 1;
}

std::vector<Rational> parse_rationals(const std::string& list) {
  std::vector<Rational> out;
  for (const auto& item : split(list)) {
    Rational x;
    if (x.set_str(item, 10) != 0 || x.get_den() == 0) throw Error(ErrorCode::invalid_input, "not a rational number: " + item);
    x.canonicalize();
    out.push_back(x);
  }
  return out;
}

std::vector<int> parse_ints(const std::string& list) {
  std::vector<int> out;
  for (const auto& item : split(list)) {
    std::size_t used = 0;
    int v = 0;
    try {
      v = std::stoi(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != item.size()) throw Error(ErrorCode::invalid_input, "not an integer: " + item);
    out.push_back(v);
  }
  return out;
}

int exit_code_for(const Error& e) {
  switch (e.code()) {
    case ErrorCode::invalid_input:
    case ErrorCode::missing_branching:
    case ErrorCode::not_in_catalogue:
    case ErrorCode::singular_specialization:
      return exit_config;
    case ErrorCode::resource_cap:
      return exit_resource_cap;
    default:
      return exit_check_failed;
  }
}

void seal(nlohmann::json& report) {
  auto stable = report;
  stable.erase("timings_ms");
  stable.erase("report_digest");
  report["report_digest"] = fnv1a_hex(stable.dump());
}

Outcome run_generate(const ExperimentConfig& cfg) {
  const auto start = Clock::now();
  if (cfg.modular) throw Error(ErrorCode::invalid_input, "gen works in rational arithmetic; drop --modular");
  const auto type = cfg.type();
  const int depth = cfg.depth ? cfg.depth : 10;
  Outcome out;
  out.report = head("gen", cfg);
  auto& retries = out.report["retries"] = nlohmann::json::array();
  Specializer specializer(cfg);
  const auto table = specializer.with_retries(
      [&](const Specialization& spec) {
        const auto q = initial_values(type, spec);
        out.report["q"] = strings(q);
        if (const auto y = y_string(spec); !y.empty()) out.report["y"] = nlohmann::json::parse(y);
        const auto depths = cfg.nodes.size() == 1 ? required_depths(type, cfg.nodes.front(), depth)
                                                  : required_depths_all(type, depth);
        return generate(type, RationalField{}, q, depths);
      },
      retries);
  out.report["table"] = to_json(table);
  out.report["table_digest"] = digest(table);
  out.report["integral"] = is_integral(table);
  out.text = to_csv(table);
  finish(out, cfg, start);
  return out;
}

Outcome run_detect(const ExperimentConfig& cfg) {
  const auto start = Clock::now();
  const auto type = cfg.type();
  const auto nodes = nodes_or_all(cfg);
  const auto opts = detect_options(cfg);
  Outcome out;
  out.report = head("detect", cfg);
  auto& retries = out.report["retries"] = nlohmann::json::array();
  Specializer specializer(cfg);

  const auto runs = specializer.with_retries(
      [&](const Specialization& spec) {
        const auto q = initial_values(type, spec);
        out.report["q"] = strings(q);
        std::vector<std::future<DetectionRun>> jobs;
        for (int a : nodes) jobs.push_back(std::async(std::launch::async, [&, a] { return detect_node(type, a, q, opts); }));
        std::vector<DetectionRun> done;
        for (auto& j : jobs) done.push_back(j.get());
        return done;
      },
      retries);

  std::string csv = "node,order,n_min,k,C_k\n";
  auto& results = out.report["results"] = nlohmann::json::array();
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const auto& run = runs[i];
    const auto pred = predicted_order(type, nodes[i]);
    nlohmann::json r{{"node", nodes[i]},
                     {"ell_predicted", pred.is_known() ? nlohmann::json(pred.value.get_si()) : nlohmann::json()},
                     {"recurrence", to_json(RationalField{}, run.rec)},
                     {"depth", run.depth},
                     {"digest", run.digest}};
    if (!run.sequence.empty()) {
      r["numerator"] = strings(numerator(RationalField{}, std::span<const Rational>(run.sequence), run.rec));
    }
    results.push_back(std::move(r));
    for (int k = 0; k <= run.rec.order; ++k) {
      csv += std::to_string(nodes[i]) + "," + std::to_string(run.rec.order) + "," + std::to_string(run.rec.n_min) + "," +
             std::to_string(k) + "," + run.rec.coeffs[k].get_str() + "\n";
    }
  }
  out.text = csv;
  finish(out, cfg, start);
  return out;
}

Outcome run_verify(const ExperimentConfig& cfg) {
  const auto start = Clock::now();
  const auto type = cfg.type();
  const auto nodes = cfg.nodes.empty() ? std::vector<int>{1} : nodes_or_all(cfg);
  Outcome out;
  out.report = head("verify", cfg);
  auto& retries = out.report["retries"] = nlohmann::json::array();
  Specializer specializer(cfg);

  const auto reports = specializer.with_retries(
      [&](const Specialization& spec) {
        if (const auto y = y_string(spec); !y.empty()) out.report["y"] = nlohmann::json::parse(y);
        std::vector<std::future<VerificationReport>> jobs;
        for (int a : nodes) {
          jobs.push_back(std::async(std::launch::async,
                                    [&, a] { return verify({type, a, spec, detect_options(cfg)}); }));
        }
        std::vector<VerificationReport> done;
        for (auto& j : jobs) done.push_back(j.get());
        return done;
      },
      retries);

  std::string csv = "node,check,status,witness\n";
  auto& list = out.report["reports"] = nlohmann::json::array();
  bool passed = true;
  for (const auto& rep : reports) {
    list.push_back(rep.to_json());
    passed = passed && rep.passed();
    for (const auto& c : rep.checks) {
      csv += std::to_string(rep.node) + ",\"" + c.name + "\"," + to_string(c.status) + ",\"" + c.witness + "\"\n";
    }
  }
  out.report["passed"] = passed;
  out.exit_code = passed ? exit_pass : exit_check_failed;
  out.text = csv;
  finish(out, cfg, start);
  return out;
}

Outcome run_tables(const ExperimentConfig& cfg) {
  const auto start = Clock::now();
  const auto type = cfg.type();
  const auto degrees = growth_degree(type);
  Outcome out;
  out.report = head("tables", cfg);
  std::string csv = "node,ell,deg,lambda\n";
  auto& rows = out.report["nodes"] = nlohmann::json::array();
  for (int a = 1; a <= type.rank; ++a) {
    const auto pred = predicted_order(type, a);
    nlohmann::json row{{"node", a},
                       {"ell", pred.is_known() ? nlohmann::json(pred.value.get_str()) : nlohmann::json("unknown")},
                       {"deg", degrees[a - 1].get_str()}};
    std::string lambda_size;
    if (in_lambda_catalogue(type, a)) {
      const auto spec = build_lambda(type, a);
      row["lambda"] = {{"size", total_multiplicity(spec.lambda)},
                       {"prime_size", total_multiplicity(spec.lambda_prime)},
                       {"stride", spec.stride}};
      lambda_size = std::to_string(spec.predicted_order());
    }
    rows.push_back(std::move(row));
    csv += std::to_string(a) + "," + (pred.is_known() ? pred.value.get_str() : "unknown") + "," +
           degrees[a - 1].get_str() + "," + lambda_size + "\n";
  }
  out.text = csv;
  finish(out, cfg, start);
  return out;
}

Outcome run_interpolate(const ExperimentConfig& cfg) {
  const auto start = Clock::now();
  const auto type = cfg.type();
  if (cfg.mode != "raw" || !cfg.q.empty()) throw Error(ErrorCode::invalid_input, "interpolate draws random raw q");
  if (cfg.nodes.size() > 1) throw Error(ErrorCode::invalid_input, "interpolate takes a single --node");
  const int node = cfg.nodes.empty() ? 1 : cfg.nodes.front();
  if (cfg.runs < 1 || cfg.degree < 0 || cfg.k < 0) throw Error(ErrorCode::invalid_input, "bad --runs, --degree or --k");
  const auto opts = detect_options(cfg);

  std::mt19937_64 rng(cfg.seed);
  std::vector<std::vector<Rational>> draws;
  for (int i = 0; i < cfg.runs; ++i) draws.push_back(random_q(type.rank, rng));

  Outcome out;
  out.report = head("interpolate", cfg);
  out.report["k"] = cfg.k;
  out.report["degree"] = cfg.degree;
  std::vector<std::future<std::optional<RecurrencePoly<RationalField>>>> jobs;
  for (const auto& q : draws) {
    jobs.push_back(std::async(std::launch::async, [&, q]() -> std::optional<RecurrencePoly<RationalField>> {
      try {
        return detect_node(type, node, q, opts).rec;
      } catch (const SingularSpecialization&) {
        return std::nullopt;
      }
    }));
  }
  std::vector<Experiment> experiments;
  auto& singular = out.report["singular"] = nlohmann::json::array();
  std::set<int> orders;
  for (std::size_t i = 0; i < draws.size(); ++i) {
    const auto rec = jobs[i].get();
    if (!rec) {
      singular.push_back(strings(draws[i]));
      continue;
    }
    orders.insert(rec->order);
    if (cfg.k > rec->order) throw Error(ErrorCode::invalid_input, "k exceeds the detected order " + std::to_string(rec->order));
    experiments.push_back({draws[i], rec->coeffs[cfg.k]});
  }
  if (orders.size() > 1) throw Error(ErrorCode::prime_disagreement, "detected orders differ across runs");
  out.report["ell_detected"] = orders.empty() ? nlohmann::json() : nlohmann::json(*orders.begin());
  out.report["runs_used"] = experiments.size();

  const auto poly = interpolate_coefficients(type.rank, monomials_up_to(type.rank, cfg.degree), experiments);
  out.report["polynomial"] = poly.to_string();
  out.text = poly.to_string() + "\n";

  for (const auto& v : identity_catalogue(type, node).values) {
    if (v.k != cfg.k) continue;
    out.report["catalogued"] = v.value.to_string();
    out.report["matches_catalogue"] = v.value == poly;
    if (!(v.value == poly)) out.exit_code = exit_check_failed;
  }
  finish(out, cfg, start);
  return out;
}

Outcome run_dims(const ExperimentConfig& cfg) {
  const auto start = Clock::now();
  const auto type = cfg.type();
  Outcome out;
  out.report = head("dims", cfg);
  if (cfg.weight.empty() && cfg.nodes.empty()) {
    const auto branching = branching_for(cfg);
    std::string csv = "node,dim_fundamental,dim_kr\n";
    auto& rows = out.report["nodes"] = nlohmann::json::array();
    for (int a = 1; a <= type.rank; ++a) {
      nlohmann::json row{{"node", a}, {"dim_fundamental", dimension(type, Weight::fundamental(type.rank, a)).get_str()}};
      std::string kr;
      if (branching.covers(a)) {
        Integer d = 0;
        for (const auto& mu : branching.at(a)) d += dimension(type, mu);
        kr = d.get_str();
        row["dim_kr"] = kr;
      }
      csv += std::to_string(a) + "," + row["dim_fundamental"].get<std::string>() + "," + kr + "\n";
      rows.push_back(std::move(row));
    }
    out.text = csv;
    finish(out, cfg, start);
    return out;
  }
  if (!cfg.weight.empty() && !cfg.nodes.empty()) throw Error(ErrorCode::invalid_input, "give --weight or --node, not both");
  if (cfg.nodes.size() > 1) throw Error(ErrorCode::invalid_input, "dims takes a single --node");
  const Weight highest = cfg.weight.empty() ? Weight::fundamental(type.rank, nodes_or_all(cfg).front())
                                            : Weight(parse_ints(cfg.weight));
  if (highest.rank() != type.rank || !highest.is_dominant()) {
    throw Error(ErrorCode::invalid_input, "highest weight must be dominant of rank " + std::to_string(type.rank));
  }
  const auto ws = weight_system(type, highest);
  std::vector<std::pair<Weight, long>> sorted(ws.begin(), ws.end());
  std::sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
  out.report["highest"] = highest.coords;
  out.report["dimension"] = std::to_string(total_multiplicity(ws));
  auto& list = out.report["weights"] = nlohmann::json::array();
  std::string csv;
  for (int a = 1; a <= type.rank; ++a) csv += "c" + std::to_string(a) + ",";
  csv += "multiplicity\n";
  for (const auto& [w, m] : sorted) {
    list.push_back({{"coords", w.coords}, {"multiplicity", std::to_string(m)}});
    for (int c : w.coords) csv += std::to_string(c) + ",";
    csv += std::to_string(m) + "\n";
  }
  out.text = csv;
  finish(out, cfg, start);
  return out;
}

}  // namespace qrec::cli
