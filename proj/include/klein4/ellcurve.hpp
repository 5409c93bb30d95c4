#pragma once
//
// Legendre-form elliptic curves E_s : y^2 = x(x-1)(x-s) and the cubic family
// y^2 = x^3 + a x^2 + b x over the F_p tower.
//
// Supersingularity in characteristic p is detected through the polynomial
//   H_p(t) = sum_{i<=m} C(m,i)^2 t^i,  m = (p-1)/2,
// whose roots in char p are exactly the Legendre parameters of supersingular
// curves: E_s is supersingular iff H_p(s) = 0, for s in any field of
// characteristic p.  The exact point count #E(F_p) = p + 1 + sum_x chi(f(x))
// serves as the independent oracle (supersingular over F_p iff #E = p+1).

#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "klein4/ffield.hpp"

namespace klein4 {

// ---------------------------------------------------------------------------
// the supersingularity polynomial
// ---------------------------------------------------------------------------

struct DeuringPolynomial {
  u64 p = 0;
  std::vector<u64> coeffs;  // coeffs[i] = C(m,i)^2 mod p, i = 0..m
};

inline DeuringPolynomial deuring_poly(u64 p) {
  if (p < 3 || !is_prime_u64(p)) throw std::invalid_argument("deuring_poly: p must be an odd prime");
  u64 m = (p - 1) / 2;
  // inverses 1..m by the standard linear recurrence, then the binomial recurrence
  std::vector<u64> inv(m + 1, 1);
  for (u64 i = 2; i <= m; ++i) inv[i] = mul_mod(p - p / i, inv[p % i], p);
  DeuringPolynomial H;
  H.p = p;
  H.coeffs.resize(m + 1);
  u64 binom = 1;
  H.coeffs[0] = 1;
  for (u64 i = 1; i <= m; ++i) {
    binom = mul_mod(binom, mul_mod((m - i + 1) % p, inv[i], p), p);
    H.coeffs[i] = mul_mod(binom, binom, p);
  }
  return H;
}

inline FieldElement deuring_eval(const DeuringPolynomial& H, const FieldElement& s) {
  const FieldDescriptor& fd = s.field();
  if (fd.p != H.p) throw std::invalid_argument("deuring_eval: characteristic mismatch");
  FieldElement r = FieldElement::zero(fd);
  for (auto it = H.coeffs.rbegin(); it != H.coeffs.rend(); ++it)
    r = r * s + FieldElement(fd, *it);
  return r;
}

inline u64 deuring_eval_scalar(const DeuringPolynomial& H, u64 s) {
  Modulus mod(H.p);
  u64 r = 0;
  s %= H.p;
  for (auto it = H.coeffs.rbegin(); it != H.coeffs.rend(); ++it)
    r = mod.add(mod.mul(r, s), *it);
  return r;
}

// E_s supersingular <=> H_p(s) = 0, valid for s in F_p, F_{p^2}, F_{p^4}.
inline bool is_supersingular_fast(const DeuringPolynomial& H, const FieldElement& s) {
  if (s.is_zero() || s == FieldElement::one(s.field()))
    throw std::invalid_argument("is_supersingular_fast: parameter must avoid {0,1}");
  return deuring_eval(H, s).is_zero();
}

// ---------------------------------------------------------------------------
// curve models
// ---------------------------------------------------------------------------

struct LegendreCurve {
  FieldElement s;  // y^2 = x(x-1)(x-s), s not in {0,1}
};

inline LegendreCurve legendre_curve(const FieldElement& s) {
  if (s.is_zero() || s == FieldElement::one(s.field()))
    throw std::invalid_argument("legendre_curve: s must avoid {0,1}");
  return LegendreCurve{s};
}

struct GeneralCubicCurve {
  FieldElement a, b;  // y^2 = x^3 + a x^2 + b x;  nonsingular iff b != 0 and a^2 != 4b
};

inline GeneralCubicCurve general_cubic(const FieldElement& a, const FieldElement& b) {
  if (b.is_zero() || a * a == 4 * b)
    throw std::invalid_argument("general_cubic: curve is singular");
  return GeneralCubicCurve{a, b};
}

// x(x-1)(x-s) = x^3 - (1+s)x^2 + s x
inline GeneralCubicCurve as_cubic(const LegendreCurve& E) {
  const FieldDescriptor& fd = E.s.field();
  return GeneralCubicCurve{-(FieldElement::one(fd) + E.s), E.s};
}

inline FieldElement cubic_rhs(const GeneralCubicCurve& E, const FieldElement& x) {
  return ((x + E.a) * x + E.b) * x;
}

// ---------------------------------------------------------------------------
// points and the chord-tangent group law
// ---------------------------------------------------------------------------

struct CurvePoint {
  bool infinity = true;
  FieldElement x, y;

  static CurvePoint at_infinity() { return CurvePoint{}; }
  static CurvePoint affine(const FieldElement& x, const FieldElement& y) {
    return CurvePoint{false, x, y};
  }
};

inline bool operator==(const CurvePoint& P, const CurvePoint& Q) {
  if (P.infinity || Q.infinity) return P.infinity == Q.infinity;
  return P.x == Q.x && P.y == Q.y;
}

inline bool on_curve(const GeneralCubicCurve& E, const CurvePoint& P) {
  if (P.infinity) return true;
  return P.y * P.y == cubic_rhs(E, P.x);
}

inline CurvePoint ec_negate(const CurvePoint& P) {
  if (P.infinity) return P;
  return CurvePoint::affine(P.x, -P.y);
}

inline CurvePoint ec_double(const GeneralCubicCurve& E, const CurvePoint& P) {
  if (P.infinity || P.y.is_zero()) return CurvePoint::at_infinity();
  const FieldDescriptor& fd = P.x.field();
  // slope = f'(x) / 2y with f = x^3 + a x^2 + b x
  FieldElement num = 3 * (P.x * P.x) + 2 * (E.a * P.x) + E.b;
  FieldElement lam = num / (2 * P.y);
  FieldElement x2 = lam * lam - E.a - 2 * P.x;
  FieldElement y2 = lam * (P.x - x2) - P.y;
  (void)fd;
  return CurvePoint::affine(x2, y2);
}

inline CurvePoint ec_add(const GeneralCubicCurve& E, const CurvePoint& P, const CurvePoint& Q) {
  if (P.infinity) return Q;
  if (Q.infinity) return P;
  if (P.x == Q.x) {
    if (P.y == Q.y) return ec_double(E, P);
    return CurvePoint::at_infinity();  // P = -Q
  }
  FieldElement lam = (Q.y - P.y) / (Q.x - P.x);
  FieldElement x2 = lam * lam - E.a - P.x - Q.x;
  FieldElement y2 = lam * (P.x - x2) - P.y;
  return CurvePoint::affine(x2, y2);
}

// ---------------------------------------------------------------------------
// point counting over F_p (the oracle side)
// ---------------------------------------------------------------------------

namespace detail {

// chi table over F_p: chi[x] = 1 for nonzero squares, 0 for 0, -1 otherwise
inline std::vector<int> legendre_table(u64 p) {
  std::vector<int> chi(p, -1);
  chi[0] = 0;
  for (u64 x = 1; x <= (p - 1) / 2; ++x) chi[x * x % p] = 1;
  return chi;
}

}  // namespace detail

inline u64 point_count(const GeneralCubicCurve& E) {
  const FieldDescriptor& fd = E.a.field();
  if (fd.degree != 1)
    throw std::invalid_argument("point_count: oracle counts over F_p only");
  u64 p = fd.p;
  std::vector<int> chi = detail::legendre_table(p);
  i64 sum = 0;
  u64 a = E.a.coord(0), b = E.b.coord(0);
  for (u64 x = 0; x < p; ++x) {
    u64 fx = mul_mod(add_mod(mul_mod(add_mod(x, a, p), x, p), b, p), x, p);
    sum += chi[fx];
  }
  return static_cast<u64>(static_cast<i64>(p) + 1 + sum);
}

inline u64 point_count(const LegendreCurve& E) { return point_count(as_cubic(E)); }

inline bool is_supersingular_oracle(const LegendreCurve& E) {
  const FieldDescriptor& fd = E.s.field();
  return point_count(E) == fd.p + 1;
}

// trace of Frobenius a_p = p + 1 - #E(F_p)
inline i64 frobenius_trace(const LegendreCurve& E) {
  return static_cast<i64>(E.s.field().p) + 1 - static_cast<i64>(point_count(E));
}

// ---------------------------------------------------------------------------
// the six-parameter orbit of a Legendre curve (p = 3 mod 4)
// ---------------------------------------------------------------------------

struct OrbitReport {
  std::array<u64, 3> iso_triple;   // parameters F_p-isomorphic to E_s (contains s)
  std::array<u64, 3> twin_triple;  // the complementary triple (quadratic twist class)
  bool j_1728 = false;             // degenerate orbit {-1, 2, 1/2}
};

// Partition of {s, 1/s, 1-s, 1/(1-s), s/(s-1), (s-1)/s} into the two
// F_p-isomorphism triples, decided by the squareness of s and s-1.
inline OrbitReport legendre_orbit(u64 s_in, u64 p) {
  if (p % 4 != 3) throw std::invalid_argument("legendre_orbit: requires p = 3 mod 4");
  if (p < 3 || !is_prime_u64(p)) throw std::invalid_argument("legendre_orbit: p must be prime");
  u64 s = s_in % p;
  if (s == 0 || s == 1) throw std::invalid_argument("legendre_orbit: s must avoid {0,1}");
  // j = 0 iff s^2 - s + 1 = 0
  if (add_mod(sub_mod(mul_mod(s, s, p), s, p), 1, p) == 0)
    throw std::invalid_argument("legendre_orbit: j = 0 is excluded");

  u64 inv_s = inv_mod(s, p);
  u64 one_minus_s = sub_mod(1, s, p);
  OrbitReport rep;
  // j = 1728 iff s in {-1, 2, 1/2}: the six maps only reach those three values
  if (s == p - 1 || s == 2 || s == inv_mod(2, p)) {
    rep.j_1728 = true;
    rep.iso_triple = {2, inv_mod(2, p), p - 1};
    std::sort(rep.iso_triple.begin(), rep.iso_triple.end());
    rep.twin_triple = rep.iso_triple;
    return rep;
  }

  u64 inv_one_minus_s = inv_mod(one_minus_s, p);
  std::array<u64, 6> orbit = {
      s,
      inv_s,
      one_minus_s,
      inv_one_minus_s,                                 // 1/(1-s)
      mul_mod(s, inv_mod(sub_mod(s, 1, p), p), p),     // s/(s-1)
      mul_mod(sub_mod(s, 1, p), inv_s, p),             // (s-1)/s = 1 - 1/s
  };

  bool s_sq = legendre_symbol(static_cast<i64>(s), p) == 1;
  bool sm1_sq = legendre_symbol(static_cast<i64>(sub_mod(s, 1, p)), p) == 1;
  if (s_sq && sm1_sq) rep.iso_triple = {s, inv_s, inv_one_minus_s};
  else if (s_sq && !sm1_sq) rep.iso_triple = {s, inv_s, orbit[4]};
  else if (!s_sq && sm1_sq) rep.iso_triple = {s, orbit[5], inv_one_minus_s};
  else rep.iso_triple = {s, orbit[5], orbit[4]};

  std::array<bool, 6> taken{};
  for (u64 v : rep.iso_triple)
    for (int i = 0; i < 6; ++i)
      if (!taken[i] && orbit[i] == v) {
        taken[i] = true;
        break;
      }
  int k = 0;
  for (int i = 0; i < 6; ++i)
    if (!taken[i]) rep.twin_triple[k++] = orbit[i];
  if (k != 3) throw std::logic_error("legendre_orbit: orbit did not split 3+3");
  std::sort(rep.iso_triple.begin(), rep.iso_triple.end());
  std::sort(rep.twin_triple.begin(), rep.twin_triple.end());
  return rep;
}

// ---------------------------------------------------------------------------
// halving membership and the degree-2 isogeny
// ---------------------------------------------------------------------------

// Q in [2]E(F_p)?  Decided by enumerating E(F_p) and doubling; Q must be an
// affine 2-torsion point (y = 0).
inline bool halving_membership(const GeneralCubicCurve& E, const CurvePoint& Q) {
  const FieldDescriptor& fd = E.a.field();
  if (fd.degree != 1) throw std::invalid_argument("halving_membership: F_p curves only");
  if (Q.infinity || !Q.y.is_zero() || !on_curve(E, Q))
    throw std::invalid_argument("halving_membership: Q must be an affine 2-torsion point");
  u64 p = fd.p;
  std::vector<int> chi = detail::legendre_table(p);
  for (u64 xv = 0; xv < p; ++xv) {
    FieldElement x(fd, xv);
    FieldElement f = cubic_rhs(E, x);
    if (f.is_zero() || chi[f.coord(0)] != 1) continue;
    FieldElement y = *sqrt(f);
    // [2](x,-y) = -[2](x,y) and Q = -Q, so one y per x suffices
    if (ec_double(E, CurvePoint::affine(x, y)) == Q) return true;
  }
  return false;
}

// The quotient isogeny with kernel {O, (0,0)}:
//   E : y^2 = x^3 + a x^2 + b x   ->   E' : Y^2 = X^3 - 2a X^2 + (a^2 - 4b) X
//   (x, y) |-> (y^2/x^2, y (b - x^2)/x^2)
struct TwoIsogeny {
  GeneralCubicCurve source;
  GeneralCubicCurve image;

  CurvePoint apply(const CurvePoint& P) const {
    if (P.infinity) return CurvePoint::at_infinity();
    if (P.x.is_zero()) return CurvePoint::at_infinity();  // the kernel point (0,0)
    FieldElement x2 = P.x * P.x;
    FieldElement ix2 = inv(x2);
    return CurvePoint::affine(P.y * P.y * ix2, P.y * (source.b - x2) * ix2);
  }
};

inline TwoIsogeny two_isogeny(const GeneralCubicCurve& E) {
  const FieldDescriptor& fd = E.a.field();
  if (E.b.is_zero() || E.a * E.a == 4 * E.b)
    throw std::invalid_argument("two_isogeny: source curve is singular");
  FieldElement a2 = -2 * E.a;
  FieldElement b2 = E.a * E.a - 4 * E.b;
  (void)fd;
  return TwoIsogeny{E, GeneralCubicCurve{a2, b2}};
}

}  // namespace klein4
