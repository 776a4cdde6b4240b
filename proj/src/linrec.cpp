#include "qrec/linrec.hpp"

#include <future>
#include <set>

namespace qrec {

std::string to_string(Confidence c) { return c == Confidence::exact ? "exact" : "modular"; }

RecurrencePoly<RationalField> multi_prime_detect(const ModularSequence& sequence,
                                                 std::span<const std::uint64_t> primes, int guard) {
  std::vector<std::uint64_t> sorted(primes.begin(), primes.end());
  std::sort(sorted.begin(), sorted.end());
  if (sorted.size() < 3) throw Error(ErrorCode::invalid_input, "multi-prime detection needs at least 3 primes");
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw Error(ErrorCode::invalid_input, "primes must be distinct");
  }
  for (auto p : sorted) {
    if (p < (std::uint64_t{1} << 50) || !is_prime(p)) {
      throw Error(ErrorCode::invalid_input, "modulus " + std::to_string(p) + " is not a prime above 2^50");
    }
  }

  std::vector<std::future<RecurrencePoly<PrimeField>>> jobs;
  for (auto p : sorted) {
    jobs.push_back(std::async(std::launch::async, [&sequence, p, guard] {
      const PrimeField field(p);
      const auto s = sequence(field);
      return find_min_recurrence(field, std::span<const ModInt>(s), guard);
    }));
  }
  std::vector<RecurrencePoly<PrimeField>> results;
  for (auto& job : jobs) results.push_back(job.get());

  std::set<std::pair<int, long>> shapes;
  for (const auto& r : results) shapes.emplace(r.order, r.n_min);
  if (shapes.size() > 1) {
    std::string msg = "primes disagree on (order, n_min):";
    for (std::size_t i = 0; i < results.size(); ++i) {
      msg += " p=" + std::to_string(sorted[i]) + " -> (" + std::to_string(results[i].order) + ", " +
             std::to_string(results[i].n_min) + ")";
    }
    throw Error(ErrorCode::prime_disagreement, msg);
  }

  const Integer modulus = product(sorted);
  Integer bound = modulus / 2;
  bound >>= 16;

  RecurrencePoly<RationalField> out;
  out.order = results.front().order;
  out.n_min = results.front().n_min;
  out.confidence = Confidence::modular;
  out.primes = sorted;
  std::vector<std::uint64_t> residues(sorted.size());
  for (int k = 0; k <= out.order; ++k) {
    for (std::size_t i = 0; i < results.size(); ++i) residues[i] = results[i].coeffs[k].value();
    Integer lifted = crt_symmetric(residues, sorted);
    if (abs(lifted) >= bound) {
      throw Error(ErrorCode::lift_overflow, "coefficient C_" + std::to_string(k) +
                                                " is too close to the CRT modulus; use more primes");
    }
    out.coeffs.emplace_back(lifted);
  }
  return out;
}

}  // namespace qrec
