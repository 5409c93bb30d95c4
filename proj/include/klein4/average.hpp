#pragma once
// Averaged counting of superspecial reductions: per-prime parameter tables,
// the counting function over integer and rational parameters, the exact
// sum-reordering identity between the brute-force and per-prime evaluations,
// rational-height residue counting, asymptotic predictions, totient partial
// sums, and character-sum diagnostics.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <vector>

#include "klein4/ffield.hpp"
#include "klein4/genus2.hpp"
#include "klein4/parallel.hpp"
#include "klein4/primes.hpp"

namespace klein4 {

// ---------------------------------------------------------------------------
// Per-prime superspecial parameter table
// ---------------------------------------------------------------------------

struct SigmaEntry {
  u64 p = 0;
  std::vector<u64> sigma;  // sorted superspecial parameters in F_p
  u64 psi() const { return sigma.size(); }
};

// Superspecial parameter sets for every prime 5 <= p < x_max, sorted by p.
struct SigmaTable {
  u64 x_max = 0;
  std::vector<SigmaEntry> entries;

  const SigmaEntry* find(u64 p) const {
    auto it = std::lower_bound(
        entries.begin(), entries.end(), p,
        [](const SigmaEntry& e, u64 v) { return e.p < v; });
    if (it == entries.end() || it->p != p) return nullptr;
    return &*it;
  }

  bool contains(u64 p, u64 t) const {
    const SigmaEntry* e = find(p);
    return e && std::binary_search(e->sigma.begin(), e->sigma.end(), t);
  }
};

inline SigmaTable build_sigma_table(u64 x_max, int threads = 1) {
  SigmaTable table;
  table.x_max = x_max;
  std::vector<u64> ps = admissible_primes_below(x_max);
  table.entries.resize(ps.size());
  parallel_for_index(ps.size(), threads, [&](std::size_t i) {
    table.entries[i] = {ps[i], superspecial_lambdas(ps[i])};
  });
  return table;
}

// ---------------------------------------------------------------------------
// Rationals by height
// ---------------------------------------------------------------------------

// Always normalized: den >= 1 and gcd(|num|, den) = 1.
struct Rational {
  i64 num = 0;
  i64 den = 1;
  friend bool operator==(const Rational&, const Rational&) = default;
};

inline Rational make_rational(i64 num, i64 den) {
  if (den == 0) throw std::invalid_argument("zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  i64 g = std::gcd(num < 0 ? -num : num, den);
  if (g == 0) g = 1;
  return {num / g, den / g};
}

inline u64 height(const Rational& r) {
  u64 a = static_cast<u64>(r.num < 0 ? -r.num : r.num);
  u64 b = static_cast<u64>(r.den);
  return a > b ? a : b;
}

// ---------------------------------------------------------------------------
// The counting function
// ---------------------------------------------------------------------------

// Number of primes p covered by the table at which lambda reduces to a
// superspecial parameter.  Reductions hitting {0, 1, -1} never qualify
// (the table's parameter sets exclude them), and the globally degenerate
// lambda in {0, 1, -1} counts zero by convention.
inline u64 phi_lambda(const SigmaTable& table, i64 lambda) {
  if (lambda >= -1 && lambda <= 1) return 0;
  u64 n = 0;
  for (const SigmaEntry& e : table.entries) {
    u64 r = reduce_int(lambda, e.p);
    if (std::binary_search(e.sigma.begin(), e.sigma.end(), r)) ++n;
  }
  return n;
}

// Rational variant: primes dividing the denominator contribute nothing.
inline u64 phi_lambda(const SigmaTable& table, const Rational& r) {
  if (r.num == 0 || (r.den == 1 && (r.num == 1 || r.num == -1))) return 0;
  u64 n = 0;
  for (const SigmaEntry& e : table.entries) {
    u64 p = e.p;
    u64 den = reduce_int(r.den, p);
    if (den == 0) continue;
    u64 t = mul_mod(reduce_int(r.num, p), inv_mod(den, p), p);
    if (std::binary_search(e.sigma.begin(), e.sigma.end(), t)) ++n;
  }
  return n;
}

inline u64 phi_lambda(i64 lambda, u64 x_max) {
  return phi_lambda(build_sigma_table(x_max), lambda);
}

inline u64 phi_lambda(const Rational& r, u64 x_max) {
  return phi_lambda(build_sigma_table(x_max), r);
}

// ---------------------------------------------------------------------------
// Integer-parameter sums
// ---------------------------------------------------------------------------

namespace detail {

inline i64 floor_div(i64 a, i64 b) {
  i64 q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

}  // namespace detail

// #{ k in [-N, N] : k = t (mod p) } for 0 <= t < p, by floor arithmetic.
inline u64 progression_count_symmetric(u64 N, u64 t, u64 p) {
  i64 n = static_cast<i64>(N), tt = static_cast<i64>(t), pp = static_cast<i64>(p);
  return static_cast<u64>(detail::floor_div(n - tt, pp) +
                          detail::floor_div(n + tt, pp) + 1);
}

// Brute-force double loop over |lambda| <= N and the table's primes.
inline u64 avg_integer_exact(const SigmaTable& table, u64 N) {
  u64 sum = 0;
  for (i64 lambda = -static_cast<i64>(N); lambda <= static_cast<i64>(N);
       ++lambda)
    sum += phi_lambda(table, lambda);
  return sum;
}

// Reordered evaluation: for each prime and each superspecial parameter t,
// count the integers in [-N, N] reducing to t.  Equal to the brute-force
// sum exactly, not asymptotically.
inline u64 avg_integer_fast(const SigmaTable& table, u64 N) {
  u64 sum = 0;
  for (const SigmaEntry& e : table.entries)
    for (u64 t : e.sigma) sum += progression_count_symmetric(N, t, e.p);
  return sum;
}

inline u64 avg_integer_exact(u64 N, u64 x_max) {
  return avg_integer_exact(build_sigma_table(x_max), N);
}

inline u64 avg_integer_fast(u64 N, u64 x_max) {
  return avg_integer_fast(build_sigma_table(x_max), N);
}

// Predicted value of (1/N) * sum of the counting function over |lambda| <= N.
inline double asymptotic_integer(double x) {
  if (x <= 1.0) throw std::invalid_argument("cutoff must exceed 1");
  const double pi = 3.14159265358979323846;
  return 1.5 * pi * std::sqrt(x) / std::log(x);
}

// Predicted value of (1/N^2) * sum over rational parameters of height <= N.
inline double asymptotic_rational(double x) {
  if (x <= 1.0) throw std::invalid_argument("cutoff must exceed 1");
  const double pi = 3.14159265358979323846;
  return (9.0 / pi) * std::sqrt(x) / std::log(x);
}

// ---------------------------------------------------------------------------
// Rational-height residue counting
// ---------------------------------------------------------------------------

struct RationalHeightCount {
  u64 N = 0;
  u64 p = 0;
  u64 t = 0;
  u64 count_exact = 0;
  double count_approx = 0.0;
};

namespace detail {

// Smallest-prime-factor sieve for on-the-fly factorization.
inline std::vector<u32> spf_sieve(u64 n) {
  std::vector<u32> spf(n + 1, 0);
  for (u64 i = 2; i <= n; ++i) {
    if (spf[i] == 0)
      for (u64 j = i; j <= n; j += i)
        if (spf[j] == 0) spf[j] = static_cast<u32>(i);
  }
  return spf;
}

// #{ a in [-M, M] : a = r (mod p) }.
inline i64 symmetric_count(i64 M, u64 r, u64 p) {
  return floor_div(M - static_cast<i64>(r), static_cast<i64>(p)) +
         floor_div(M + static_cast<i64>(r), static_cast<i64>(p)) + 1;
}

// Exact count of reduced fractions a/b with b >= 1, p not dividing b,
// max(|a|, b) <= N and a = t b (mod p), using inclusion-exclusion over the
// squarefree divisors of b to enforce gcd(a, b) = 1.
inline u64 rational_residue_count_exact(u64 N, u64 p, u64 t,
                                        const std::vector<u32>& spf) {
  i64 total = 0;
  std::vector<u64> factors;
  for (u64 b = 1; b <= N; ++b) {
    if (b % p == 0) continue;
    factors.clear();
    for (u64 m = b; m > 1;) {
      u64 q = spf[m];
      factors.push_back(q);
      while (m % q == 0) m /= q;
    }
    u64 tb = mul_mod(t, b % p, p);
    u64 subsets = u64(1) << factors.size();
    for (u64 mask = 0; mask < subsets; ++mask) {
      u64 d = 1;
      bool odd = false;
      for (std::size_t i = 0; i < factors.size(); ++i)
        if (mask & (u64(1) << i)) {
          d *= factors[i];
          odd = !odd;
        }
      u64 r = mul_mod(tb, inv_mod(d % p, p), p);
      i64 term = symmetric_count(static_cast<i64>(N / d), r, p);
      total += odd ? -term : term;
    }
  }
  return static_cast<u64>(total);
}

}  // namespace detail

inline RationalHeightCount rational_residue_count(u64 N, u64 p, u64 t) {
  if (p < 5 || !is_prime_u64(p))
    throw std::invalid_argument("need a prime p >= 5");
  if (t >= p) throw std::invalid_argument("residue out of range");
  RationalHeightCount out;
  out.N = N;
  out.p = p;
  out.t = t;
  std::vector<u32> spf = detail::spf_sieve(N);
  out.count_exact = detail::rational_residue_count_exact(N, p, t, spf);
  const double pi = 3.14159265358979323846;
  out.count_approx = (12.0 / (pi * pi)) * static_cast<double>(N) *
                     static_cast<double>(N) / static_cast<double>(p);
  return out;
}

// ---------------------------------------------------------------------------
// Rational-parameter sums
// ---------------------------------------------------------------------------

// Reordered rational sum: over each prime and each superspecial parameter t,
// the number of height-<= N reduced fractions reducing to t.  Exact mode
// counts them exactly; the approximate mode substitutes the density main
// term 12/pi^2 * N^2/p per residue and rounds the total.
inline u64 avg_rational_fast(const SigmaTable& table, u64 N,
                             bool exact_mode = true) {
  if (!exact_mode) {
    const double pi = 3.14159265358979323846;
    double total = 0.0;
    for (const SigmaEntry& e : table.entries)
      total += static_cast<double>(e.psi()) * (12.0 / (pi * pi)) *
               static_cast<double>(N) * static_cast<double>(N) /
               static_cast<double>(e.p);
    return static_cast<u64>(std::llround(total));
  }
  std::vector<u32> spf = detail::spf_sieve(N);
  u64 sum = 0;
  for (const SigmaEntry& e : table.entries)
    for (u64 t : e.sigma)
      sum += detail::rational_residue_count_exact(N, e.p, t, spf);
  return sum;
}

// Brute-force oracle: enumerate every reduced fraction of height <= N and
// count its superspecial reductions directly.
inline u64 avg_rational_exact(const SigmaTable& table, u64 N) {
  u64 sum = 0;
  for (i64 b = 1; b <= static_cast<i64>(N); ++b)
    for (i64 a = -static_cast<i64>(N); a <= static_cast<i64>(N); ++a) {
      if (std::gcd(a < 0 ? -a : a, b) != 1) continue;
      sum += phi_lambda(table, Rational{a, b});
    }
  return sum;
}

inline u64 avg_rational_fast(u64 N, u64 x_max, bool exact_mode = true) {
  return avg_rational_fast(build_sigma_table(x_max), N, exact_mode);
}

// ---------------------------------------------------------------------------
// Experiment reports
// ---------------------------------------------------------------------------

enum class AverageMode { integer_parameters, rational_parameters };

// Rational exact counting is quadratic-ish in N; beyond this height the
// experiment switches to the density approximation.
inline constexpr u64 kRationalExactHeightLimit = 2000;

struct AverageReport {
  u64 X = 0;
  u64 N = 0;
  AverageMode mode = AverageMode::integer_parameters;
  std::optional<u64> sum_exact;
  u64 sum_fast = 0;
  bool approximate = false;  // rational mode fell back to the density term
  double average = 0.0;
  double asymptotic = 0.0;
  double ratio = 0.0;
};

inline AverageReport average_experiment(const SigmaTable& table,
                                        AverageMode mode, u64 N,
                                        bool check_exact = false) {
  AverageReport rep;
  rep.X = table.x_max;
  rep.N = N;
  rep.mode = mode;
  if (mode == AverageMode::integer_parameters) {
    rep.sum_fast = avg_integer_fast(table, N);
    if (check_exact) rep.sum_exact = avg_integer_exact(table, N);
    rep.average = static_cast<double>(rep.sum_fast) / static_cast<double>(N);
    rep.asymptotic = asymptotic_integer(static_cast<double>(table.x_max));
  } else {
    bool exact_mode = N <= kRationalExactHeightLimit;
    rep.approximate = !exact_mode;
    if (check_exact && !exact_mode)
      throw std::invalid_argument(
          "exact rational oracle is infeasible at this height");
    rep.sum_fast = avg_rational_fast(table, N, exact_mode);
    if (check_exact) rep.sum_exact = avg_rational_exact(table, N);
    rep.average = static_cast<double>(rep.sum_fast) /
                  (static_cast<double>(N) * static_cast<double>(N));
    rep.asymptotic = asymptotic_rational(static_cast<double>(table.x_max));
  }
  rep.ratio = rep.average / rep.asymptotic;
  return rep;
}

// ---------------------------------------------------------------------------
// Totient partial sums
// ---------------------------------------------------------------------------

// Exact sum of Euler's totient over 1..x via a linear sieve.
inline u64 totient_sum(u64 x) {
  if (x < 1) throw std::invalid_argument("totient_sum needs x >= 1");
  std::vector<u32> phi(x + 1);
  std::vector<u32> primes;
  phi[1] = 1;
  for (u64 i = 2; i <= x; ++i) {
    if (phi[i] == 0) {
      phi[i] = static_cast<u32>(i - 1);
      primes.push_back(static_cast<u32>(i));
    }
    for (u32 q : primes) {
      u64 ip = i * q;
      if (ip > x) break;
      if (i % q == 0) {
        phi[ip] = static_cast<u32>(phi[i] * q);
        break;
      }
      phi[ip] = static_cast<u32>(phi[i] * (q - 1));
    }
  }
  u64 sum = 0;
  for (u64 i = 1; i <= x; ++i) sum += phi[i];
  return sum;
}

// ---------------------------------------------------------------------------
// Character-sum diagnostics
// ---------------------------------------------------------------------------

// Weighted double sums over n <= U and primes p < X split by residue class:
//   s1: p = 1 mod 4 with the discriminant -4p character (odd n only),
//   s3: p = 3 mod 8 with the Legendre symbol (n/p),
//   s7: p = 7 mod 8 likewise,
// each term (n/p)-like value divided by n * sqrt(p).
struct CharSums {
  u64 X = 0;
  u64 U = 0;
  double s1 = 0.0;
  double s3 = 0.0;
  double s7 = 0.0;
};

inline CharSums char_sums(u64 X, u64 U = 0) {
  if (X < 5) throw std::invalid_argument("cutoff must be at least 5");
  if (U == 0)
    U = static_cast<u64>(std::floor(std::pow(static_cast<double>(X), 0.75)));
  CharSums out;
  out.X = X;
  out.U = U;

  std::vector<double> inv_n(U + 1, 0.0);
  for (u64 n = 1; n <= U; ++n) inv_n[n] = 1.0 / static_cast<double>(n);

  std::vector<std::uint8_t> qr;
  for (u64 p : admissible_primes_below(X)) {
    qr.assign(p, 0);
    for (u64 i = 1; i <= (p - 1) / 2; ++i) qr[mul_mod(i, i, p)] = 1;
    double w = 1.0 / std::sqrt(static_cast<double>(p));
    if (p % 4 == 1) {
      for (u64 n = 1; n <= U; n += 2) {
        u64 r = n % p;
        if (r == 0) continue;
        double v = qr[r] ? 1.0 : -1.0;
        if (n % 4 == 3) v = -v;
        out.s1 += v * w * inv_n[n];
      }
    } else {
      double& acc = (p % 8 == 3) ? out.s3 : out.s7;
      for (u64 n = 1; n <= U; ++n) {
        u64 r = n % p;
        if (r == 0) continue;
        acc += (qr[r] ? w : -w) * inv_n[n];
      }
    }
  }
  return out;
}

}  // namespace klein4
