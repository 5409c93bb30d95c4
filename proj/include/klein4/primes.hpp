#pragma once
//
// Prime sieving helpers.  The census and averaging loops only ever need odd
// primes p >= 5 ("admissible" below); 2 and 3 are excluded throughout because
// the curve families degenerate in characteristics 2 and 3.

#include <cstdint>
#include <vector>

#include "klein4/ffield.hpp"

namespace klein4 {

// all primes < limit, ascending
inline std::vector<u64> primes_below(u64 limit) {
  std::vector<u64> out;
  if (limit <= 2) return out;
  std::vector<bool> composite(limit, false);
  for (u64 i = 2; i < limit; ++i) {
    if (composite[i]) continue;
    out.push_back(i);
    for (u64 j = i * i; j < limit; j += i) composite[j] = true;
  }
  return out;
}

// primes p with 5 <= p < limit, ascending
inline std::vector<u64> admissible_primes_below(u64 limit) {
  std::vector<u64> out = primes_below(limit);
  while (!out.empty() && out.front() < 5) out.erase(out.begin());
  return out;
}

}  // namespace klein4
