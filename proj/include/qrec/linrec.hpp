#pragma once

// Minimal linear recurrences of sequences over an exact field (Berlekamp-Massey
// with an offset/guard stability search), generating-function numerators, and
// a multi-prime consensus path that lifts integer coefficients by CRT.
//
// Sign convention: A(D) = sum_k (-1)^k C_k D^k with C_0 = 1, and the relation
//   sum_{k=0}^{order} (-1)^k C_k s_{n-k} = 0   for n >= n_min.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "qrec/error.hpp"
#include "qrec/field.hpp"

namespace qrec {

enum class Confidence { exact, modular };

template <class Field>
struct RecurrencePoly {
  using Element = typename Field::Element;

  int order = 0;
  std::vector<Element> coeffs;  ///< C_0..C_order
  long n_min = 0;
  Confidence confidence = Confidence::exact;
  std::vector<std::uint64_t> primes;

  /// Coefficients of A(D).
  std::vector<Element> polynomial() const {
    std::vector<Element> a(coeffs);
    for (std::size_t k = 1; k < a.size(); k += 2) a[k] = Element(-a[k]);
    return a;
  }
};

template <class Field>
using Polynomial = std::vector<typename Field::Element>;

template <class Field>
struct LfsrResult {
  Polynomial<Field> connection;  ///< lambda_0 = 1; s_n + sum lambda_k s_{n-k} = 0
  int length = 0;
  long last_discrepancy = -1;  ///< index of the last nonzero discrepancy, -1 if none
};

template <class Field>
void trim(const Field& field, Polynomial<Field>& p) {
  while (p.size() > 1 && field.is_zero(p.back())) p.pop_back();
}

template <class Field>
LfsrResult<Field> berlekamp_massey(const Field& field, std::span<const typename Field::Element> s) {
  using E = typename Field::Element;
  Polynomial<Field> c{field.one()}, b{field.one()};
  int length = 0;
  long shift = 1;
  long last = -1;
  E b_disc = field.one();
  for (std::size_t n = 0; n < s.size(); ++n) {
    E d = s[n];
    for (int i = 1; i <= length && i < static_cast<int>(c.size()); ++i) d = E(d + c[i] * s[n - i]);
    if (field.is_zero(d)) {
      ++shift;
      continue;
    }
    last = static_cast<long>(n);
    const E coef = E(d / b_disc);
    Polynomial<Field> prev = c;
    if (c.size() < b.size() + shift) c.resize(b.size() + shift, field.zero());
    for (std::size_t i = 0; i < b.size(); ++i) c[i + shift] = E(c[i + shift] - coef * b[i]);
    if (2 * length <= static_cast<int>(n)) {
      length = static_cast<int>(n) + 1 - length;
      b = std::move(prev);
      b_disc = d;
      shift = 1;
    } else {
      ++shift;
    }
  }
  trim(field, c);
  return {std::move(c), length, last};
}

/// First n >= deg(connection) from which the relation holds on every observed term;
/// returns s.size() when it never holds to the end.
template <class Field>
long recurrence_start(const Field& field, std::span<const typename Field::Element> s,
                      const Polynomial<Field>& connection) {
  using E = typename Field::Element;
  const long order = static_cast<long>(connection.size()) - 1;
  long start = static_cast<long>(s.size());
  for (long n = static_cast<long>(s.size()) - 1; n >= order; --n) {
    E acc = field.zero();
    for (long k = 0; k <= order; ++k) acc = E(acc + connection[k] * s[n - k]);
    if (!field.is_zero(acc)) break;
    start = n;
  }
  return std::max(start, order);
}

inline int default_guard(int length) { return std::max(8, length / 4); }
inline constexpr int offset_cap = 8;

/// Minimal recurrence valid on a tail of `s`. guard = 0 selects
/// max(8, L/4) for the candidate length L; explicit guards must be >= 4.
template <class Field>
RecurrencePoly<Field> find_min_recurrence(const Field& field, std::span<const typename Field::Element> s,
                                          int guard = 0) {
  using E = typename Field::Element;
  if (guard != 0 && guard < 4) throw Error(ErrorCode::invalid_input, "guard must be at least 4");
  const int min_guard = guard ? guard : default_guard(0);
  if (static_cast<long>(s.size()) < 2 + min_guard) {
    throw Error(ErrorCode::insufficient_data, "need at least " + std::to_string(2 + min_guard) + " terms, have " +
                                                  std::to_string(s.size()));
  }
  int shortest = -1;
  for (std::size_t offset = 0; offset <= static_cast<std::size_t>(offset_cap) && offset < s.size(); ++offset) {
    const auto tail = s.subspan(offset);
    auto lfsr = berlekamp_massey(field, tail);
    const long len = static_cast<long>(tail.size());
    const int g = guard ? guard : default_guard(lfsr.length);
    if (shortest < 0 || lfsr.length < shortest) shortest = lfsr.length;
    if (len < 2L * lfsr.length + g || len - (lfsr.last_discrepancy + 1) < g) continue;

    RecurrencePoly<Field> rec;
    rec.order = static_cast<int>(lfsr.connection.size()) - 1;
    rec.coeffs = lfsr.connection;
    for (std::size_t k = 1; k < rec.coeffs.size(); k += 2) rec.coeffs[k] = E(-rec.coeffs[k]);
    rec.n_min = recurrence_start(field, s, lfsr.connection);
    return rec;
  }
  throw Error(ErrorCode::no_stable_recurrence,
              "no recurrence stable under the guard window (" + std::to_string(s.size()) +
                  " terms, shortest candidate length " + std::to_string(shortest) + ")");
}

/// Direct substitution of the relation at every observed n >= rec.n_min.
template <class Field>
bool annihilates(const Field& field, std::span<const typename Field::Element> s, const RecurrencePoly<Field>& rec) {
  using E = typename Field::Element;
  const auto a = rec.polynomial();
  for (long n = std::max<long>(rec.n_min, rec.order); n < static_cast<long>(s.size()); ++n) {
    E acc = field.zero();
    for (int k = 0; k <= rec.order; ++k) acc = E(acc + a[k] * s[n - k]);
    if (!field.is_zero(acc)) return false;
  }
  return true;
}

template <class Field>
Polynomial<Field> multiply(const Field& field, const Polynomial<Field>& a, const Polynomial<Field>& b) {
  using E = typename Field::Element;
  if (a.empty() || b.empty()) return {};
  Polynomial<Field> out(a.size() + b.size() - 1, field.zero());
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (field.is_zero(a[i])) continue;
    for (std::size_t j = 0; j < b.size(); ++j) out[i + j] = E(out[i + j] + a[i] * b[j]);
  }
  return out;
}

/// prod_i (1 - v_i D^stride).
template <class Field>
Polynomial<Field> expand_linear_product(const Field& field, std::span<const typename Field::Element> values,
                                        int stride = 1) {
  using E = typename Field::Element;
  if (stride < 1) throw Error(ErrorCode::invalid_input, "stride must be positive");
  Polynomial<Field> out{field.one()};
  for (const auto& v : values) {
    out.resize(out.size() + stride, field.zero());
    for (std::size_t i = out.size() - 1; i >= static_cast<std::size_t>(stride); --i)
      out[i] = E(out[i] - v * out[i - stride]);
  }
  trim(field, out);
  return out;
}

/// First order+1 coefficients of N(D) / A(D).
template <class Field>
Polynomial<Field> series_divide(const Field& field, const Polynomial<Field>& numerator,
                                const Polynomial<Field>& denominator, int order) {
  using E = typename Field::Element;
  if (denominator.empty() || field.is_zero(denominator[0])) {
    throw Error(ErrorCode::invalid_input, "series division by a series with zero constant term");
  }
  const E inv = E(field.one() / denominator[0]);
  Polynomial<Field> out(order + 1, field.zero());
  for (int n = 0; n <= order; ++n) {
    E acc = n < static_cast<int>(numerator.size()) ? numerator[n] : field.zero();
    for (int k = 1; k <= n && k < static_cast<int>(denominator.size()); ++k) acc = E(acc - denominator[k] * out[n - k]);
    out[n] = E(acc * inv);
  }
  return out;
}

/// N(D) = A(D) S(D), which must terminate below max(order, n_min).
template <class Field>
Polynomial<Field> numerator(const Field& field, std::span<const typename Field::Element> s,
                            const RecurrencePoly<Field>& rec) {
  using E = typename Field::Element;
  const auto a = rec.polynomial();
  const long degree_bound = std::max<long>(rec.order, rec.n_min);
  Polynomial<Field> out;
  for (long n = 0; n < static_cast<long>(s.size()); ++n) {
    E acc = field.zero();
    for (long k = 0; k <= std::min<long>(rec.order, n); ++k) acc = E(acc + a[k] * s[n - k]);
    if (n < degree_bound) {
      out.push_back(acc);
    } else if (!field.is_zero(acc)) {
      throw Error(ErrorCode::non_vanishing_tail,
                  "A(D)S(D) has a nonzero coefficient at degree " + std::to_string(n));
    }
  }
  trim(field, out);
  return out;
}

/// Integer sequence reduced modulo the prime of the given field.
using ModularSequence = std::function<std::vector<ModInt>(const PrimeField&)>;

/// Detects the recurrence modulo each prime (concurrently), demands agreement of
/// order and n_min, and lifts coefficients to integers.
RecurrencePoly<RationalField> multi_prime_detect(const ModularSequence& sequence,
                                                 std::span<const std::uint64_t> primes, int guard = 0);

std::string to_string(Confidence c);

template <class Field>
nlohmann::json to_json(const Field& field, const RecurrencePoly<Field>& rec) {
  std::vector<std::string> coeffs;
  for (const auto& c : rec.coeffs) coeffs.push_back(field.to_string(c));
  nlohmann::json doc{{"order", rec.order},
                     {"n_min", rec.n_min},
                     {"coeffs", coeffs},
                     {"confidence", to_string(rec.confidence)}};
  if (!rec.primes.empty()) {
    std::vector<std::string> ps;
    for (auto p : rec.primes) ps.push_back(std::to_string(p));
    doc["primes"] = ps;
  }
  return doc;
}

}  // namespace qrec
