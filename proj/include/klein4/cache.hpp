#pragma once
// Flat-file cache of per-prime superspecial parameter sets.  One line per
// prime, `p,psi,residue_mod_8,sigma_csv`, with the parameter set
// semicolon-joined in ascending order.  Reads are validated: the prime must
// be admissible, psi must equal the set size, the set must be sorted,
// strictly inside (1, p-1) and closed under negation.  Invalid lines are
// dropped with a warning and the affected prime recomputed.

#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "klein4/average.hpp"
#include "klein4/genus2.hpp"
#include "klein4/primes.hpp"

namespace klein4 {

inline void write_sigma_cache(const SigmaTable& table,
                              const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open cache for writing: " + path);
  for (const SigmaEntry& e : table.entries) {
    out << e.p << ',' << e.psi() << ',' << e.p % 8 << ',';
    for (std::size_t i = 0; i < e.sigma.size(); ++i) {
      if (i) out << ';';
      out << e.sigma[i];
    }
    out << '\n';
  }
  if (!out) throw std::runtime_error("failed writing cache: " + path);
}

namespace detail {

inline bool parse_u64_field(const std::string& s, u64& out) {
  if (s.empty()) return false;
  u64 v = 0;
  for (char c : s) {
    if (c < '0' || c > '9') return false;
    if (v > (u64(-1) - (c - '0')) / 10) return false;
    v = v * 10 + static_cast<u64>(c - '0');
  }
  out = v;
  return true;
}

// Parses and validates one cache line; on failure sets a reason and leaves
// the entry unspecified.
inline bool parse_cache_line(const std::string& line, SigmaEntry& entry,
                             std::string& reason) {
  std::vector<std::string> fields;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      fields.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  fields.push_back(cur);
  if (fields.size() != 4) {
    reason = "expected 4 comma-separated fields";
    return false;
  }
  u64 p = 0, psi = 0, residue = 0;
  if (!parse_u64_field(fields[0], p) || !parse_u64_field(fields[1], psi) ||
      !parse_u64_field(fields[2], residue)) {
    reason = "non-numeric field";
    return false;
  }
  if (p < 5 || !is_prime_u64(p)) {
    reason = "not an admissible prime";
    return false;
  }
  if (residue != p % 8) {
    reason = "residue field disagrees with p mod 8";
    return false;
  }
  std::vector<u64> sigma;
  if (!fields[3].empty()) {
    std::string tok;
    std::istringstream ss(fields[3]);
    while (std::getline(ss, tok, ';')) {
      u64 v = 0;
      if (!parse_u64_field(tok, v)) {
        reason = "non-numeric set member";
        return false;
      }
      sigma.push_back(v);
    }
  }
  if (sigma.size() != psi) {
    reason = "psi field disagrees with set size";
    return false;
  }
  for (std::size_t i = 0; i < sigma.size(); ++i) {
    if (sigma[i] < 2 || sigma[i] > p - 2) {
      reason = "set member out of range";
      return false;
    }
    if (i && sigma[i] <= sigma[i - 1]) {
      reason = "set not strictly increasing";
      return false;
    }
  }
  for (u64 t : sigma)
    if (!std::binary_search(sigma.begin(), sigma.end(), p - t)) {
      reason = "set not closed under negation";
      return false;
    }
  entry.p = p;
  entry.sigma = std::move(sigma);
  return true;
}

}  // namespace detail

// Builds the table for all primes below x_max, serving entries from the
// cache file where valid and recomputing the rest.  A missing file means a
// cold start; corrupt lines warn on the given stream.
inline SigmaTable load_sigma_table(u64 x_max, const std::string& path,
                                   int threads = 1,
                                   std::ostream& warn = std::cerr) {
  std::map<u64, std::vector<u64>> cached;
  std::ifstream in(path);
  if (in) {
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      if (line.empty()) continue;
      SigmaEntry entry;
      std::string reason;
      if (detail::parse_cache_line(line, entry, reason)) {
        cached[entry.p] = std::move(entry.sigma);
      } else {
        warn << "warning: ignoring cache line " << lineno << " of " << path
             << " (" << reason << "); recomputing that prime\n";
      }
    }
  }

  SigmaTable table;
  table.x_max = x_max;
  std::vector<u64> ps = admissible_primes_below(x_max);
  table.entries.resize(ps.size());
  std::vector<std::size_t> missing;
  for (std::size_t i = 0; i < ps.size(); ++i) {
    auto it = cached.find(ps[i]);
    if (it != cached.end()) {
      table.entries[i] = {ps[i], it->second};
    } else {
      missing.push_back(i);
    }
  }
  parallel_for_index(missing.size(), threads, [&](std::size_t k) {
    std::size_t i = missing[k];
    table.entries[i] = {ps[i], superspecial_lambdas(ps[i])};
  });
  return table;
}

// Folds the table's entries into the cache file, keeping valid cached
// entries for primes the table does not cover; invalid lines are dropped.
inline void merge_sigma_cache(const SigmaTable& table,
                              const std::string& path) {
  std::map<u64, std::vector<u64>> all;
  {
    std::ifstream in(path);
    if (in) {
      std::string line;
      while (std::getline(in, line)) {
        if (line.empty()) continue;
        SigmaEntry entry;
        std::string reason;
        if (detail::parse_cache_line(line, entry, reason))
          all[entry.p] = std::move(entry.sigma);
      }
    }
  }
  for (const SigmaEntry& e : table.entries) all[e.p] = e.sigma;
  SigmaTable merged;
  for (auto& [p, sigma] : all) merged.entries.push_back({p, std::move(sigma)});
  write_sigma_cache(merged, path);
}

}  // namespace klein4
