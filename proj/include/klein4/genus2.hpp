#pragma once
// Genus-2 curves y^2 = x(x-1)(x+1)(x-l)(x-1/l), whose reduced automorphism
// group contains the Klein four-group: the associated parameter pair
// (L, L') = (-(l - r)^2, -(l + r)^2) with r^2 = l^2 - 1, the superspeciality
// predicate and per-prime counts, the class-number prediction for those
// counts, and the two degree-2 quotient maps onto elliptic curves.

#include <algorithm>
#include <array>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <vector>

#include "klein4/ellcurve.hpp"
#include "klein4/ffield.hpp"

namespace klein4 {

struct Genus2Curve {
  FieldElement lambda;  // element of the prime field, outside {0, 1, -1}
};

namespace detail {

inline void check_genus2_lambda(const FieldElement& lambda) {
  const FieldDescriptor& fd = lambda.field();
  if (lambda.degree() != 1)
    throw std::invalid_argument("curve parameter must lie in the prime field");
  FieldElement one = FieldElement::one(fd);
  if (lambda.is_zero() || lambda == one || lambda == -one)
    throw std::invalid_argument("curve parameter must avoid {0, 1, -1}");
}

}  // namespace detail

inline Genus2Curve genus2_curve(const FieldElement& lambda) {
  detail::check_genus2_lambda(lambda);
  return {lambda};
}

// Right-hand side of the quintic model, evaluated at x in any extension of
// the parameter's field.
inline FieldElement quintic_rhs(const Genus2Curve& C, const FieldElement& x) {
  FieldElement l = embed(C.lambda, x.field());
  FieldElement one = FieldElement::one(x.field());
  return x * (x - one) * (x + one) * (x - l) * (x - inv(l));
}

// ---------------------------------------------------------------------------
// The parameter pair
// ---------------------------------------------------------------------------

// (L, L') with L * L' = 1.  When r = sqrt(l^2 - 1) does not exist in the
// prime field the pair lives in the quadratic extension, where its members
// are Frobenius conjugates of norm 1.
struct LambdaPair {
  FieldElement big_lambda;
  FieldElement big_lambda_prime;
  bool in_base_field;
};

inline LambdaPair lambda_to_pair(const FieldElement& lambda) {
  detail::check_genus2_lambda(lambda);
  const FieldDescriptor& fp = lambda.field();
  FieldElement disc = lambda * lambda - FieldElement::one(fp);
  if (std::optional<FieldElement> r = sqrt(disc)) {
    FieldElement a = lambda - *r;
    FieldElement b = lambda + *r;
    return {-(a * a), -(b * b), true};
  }
  const FieldDescriptor& f2 = make_field(fp.p, 2);
  FieldElement l2 = embed(lambda, f2);
  FieldElement r2 = *sqrt(embed(disc, f2));  // a prime-field non-square is
                                             // always a square upstairs
  FieldElement a = l2 - r2;
  FieldElement b = l2 + r2;
  return {-(a * a), -(b * b), false};
}

// ---------------------------------------------------------------------------
// Superspeciality
// ---------------------------------------------------------------------------

// Reference path: the curve is superspecial exactly when the elliptic curves
// of both pair members are supersingular.  The members are each other's
// inverses and inversion preserves supersingularity, so testing one suffices;
// check_both forces the two-sided evaluation and verifies agreement.
inline bool is_superspecial(const DeuringPolynomial& H,
                            const FieldElement& lambda,
                            bool check_both = false) {
  LambdaPair pr = lambda_to_pair(lambda);
  bool main = is_supersingular_fast(H, pr.big_lambda);
  if (check_both) {
    bool other = is_supersingular_fast(H, pr.big_lambda_prime);
    if (other != main)
      throw std::logic_error("parameter pair disagreed on supersingularity");
  }
  return main;
}

inline bool is_superspecial(const FieldElement& lambda,
                            bool check_both = false) {
  return is_superspecial(deuring_poly(lambda.field().p), lambda, check_both);
}

// Scalar fast path.  With e = 2 - 4 l^2, the pair members are the two roots
// of t^2 - e t + 1 (their sum is 2 - 4 l^2 and their product is 1), and the
// roots are distinct for every admissible l.  So the curve is superspecial
// exactly when that quadratic divides the supersingularity polynomial, and
// the synthetic division runs entirely in the prime field at one
// multiplication per coefficient.
inline bool is_superspecial_residue(const DeuringPolynomial& H,
                                    const Modulus& M, u64 lambda) {
  u64 p = M.p;
  lambda %= p;
  if (lambda == 0 || lambda == 1 || lambda == p - 1)
    throw std::invalid_argument("curve parameter must avoid {0, 1, -1}");
  u64 e = sub_mod(2 % p, M.mul(4 % p, M.mul(lambda, lambda)), p);
  u64 a = 0, b = 0;  // running remainder a*t + b
  for (std::size_t i = H.coeffs.size(); i-- > 0;) {
    u64 na = add_mod(M.mul(a, e), b, p);
    b = sub_mod(H.coeffs[i], a, p);
    a = na;
  }
  return a == 0 && b == 0;
}

// All superspecial parameters in the prime field, ascending.  l and p - l
// share the test value e, so only the lower half is scanned.
inline std::vector<u64> superspecial_lambdas(u64 p) {
  if (p < 5 || !is_prime_u64(p))
    throw std::invalid_argument("need a prime p >= 5");
  DeuringPolynomial H = deuring_poly(p);
  Modulus M(p);
  std::vector<u64> out;
  for (u64 l = 2; 2 * l < p; ++l) {
    if (is_superspecial_residue(H, M, l)) {
      out.push_back(l);
      out.push_back(p - l);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

inline u64 psi(u64 p) { return superspecial_lambdas(p).size(); }

// Predicted count in terms of class numbers, split by p mod 8.  Only the
// class number relevant to the residue class is read.
inline i64 predicted_psi(u64 p, i64 h_minus_p, i64 h_minus_4p) {
  if (p < 5 || !is_prime_u64(p))
    throw std::invalid_argument("need a prime p >= 5");
  switch (p % 8) {
    case 1:
    case 5:
      return h_minus_4p;
    case 3:
      return 6 * h_minus_p - 2;
    default:  // 7 mod 8
      return 2 * h_minus_p - 2;
  }
}

// ---------------------------------------------------------------------------
// The degree-2 quotient maps
// ---------------------------------------------------------------------------

enum class MorphismTarget {
  infinity_point,      // image is the point at infinity (on both targets)
  lambda_curve,        // image satisfies Y^2 = X(X-1)(X - L)
  lambda_prime_curve,  // image satisfies Y^2 = X(X-1)(X - L')
  neither
};

struct MorphismImage {
  CurvePoint point;
  MorphismTarget matched;
};

// Image of a point of the genus-2 curve under the quotient map
//
//   (x, y) |-> ( -(l x + (l^2-1) x / (x - l)),
//                eps * l^{3/2} * (x - (l -+ r)) * y / (x - l)^2 )
//
// computed over the quartic extension, where eps = sqrt(-1), l^{3/2} =
// sqrt(l^3) and r = sqrt(l^2 - 1) all exist.  second_map selects the
// conjugate-root factor (l + r); eps_sign and root32_sign flip the two
// square roots the formula leaves unpinned -- they enter the image
// y-coordinate squared, so they can never change which target equation
// holds.  The pole x = l (necessarily y = 0) maps to infinity.  The result
// records which of the two target equations the image satisfies; points such
// as (0, 0) that satisfy both are labelled with the map's nominal target.
inline MorphismImage morphism_apply(const Genus2Curve& C, const CurvePoint& P,
                                    bool second_map, int eps_sign = 1,
                                    int root32_sign = 1) {
  if (eps_sign * eps_sign != 1 || root32_sign * root32_sign != 1)
    throw std::invalid_argument("sign arguments must be +1 or -1");
  const FieldDescriptor& fp = C.lambda.field();
  const FieldDescriptor& f4 = make_field(fp.p, 4);
  if (P.infinity)
    throw std::invalid_argument("the quotient map takes affine inputs");
  if (&P.x.field() != &f4)
    throw std::invalid_argument("point must have quartic-extension coordinates");
  if (P.y * P.y != quintic_rhs(C, P.x))
    throw std::invalid_argument("point does not satisfy the curve equation");

  FieldElement l = embed(C.lambda, f4);
  FieldElement one = FieldElement::one(f4);
  FieldElement lsq1 = l * l - one;

  LambdaPair pr = lambda_to_pair(C.lambda);
  FieldElement target1 = embed(pr.big_lambda, f4);
  FieldElement target2 = embed(pr.big_lambda_prime, f4);

  if (P.x == l) {
    return {CurvePoint::at_infinity(), MorphismTarget::infinity_point};
  }

  FieldElement eps = *sqrt(-one);
  if (eps_sign < 0) eps = -eps;
  FieldElement l32 = *sqrt(l * l * l);
  if (root32_sign < 0) l32 = -l32;
  FieldElement r = *sqrt(lsq1);

  FieldElement dinv = inv(P.x - l);
  FieldElement img_x = -(l * P.x + lsq1 * P.x * dinv);
  FieldElement factor = second_map ? (P.x - (l + r)) : (P.x - (l - r));
  FieldElement img_y = eps * l32 * factor * P.y * dinv * dinv;
  CurvePoint img = CurvePoint::affine(img_x, img_y);

  auto lands_on = [&](const FieldElement& s) {
    return on_curve(as_cubic(legendre_curve(s)), img);
  };
  const FieldElement& nominal = second_map ? target2 : target1;
  const FieldElement& other = second_map ? target1 : target2;
  MorphismTarget matched = MorphismTarget::neither;
  if (lands_on(nominal))
    matched = second_map ? MorphismTarget::lambda_prime_curve
                         : MorphismTarget::lambda_curve;
  else if (lands_on(other))
    matched = second_map ? MorphismTarget::lambda_curve
                         : MorphismTarget::lambda_prime_curve;
  return {img, matched};
}

// True when the image lands on either member of the target pair.
inline bool morphism_check(const Genus2Curve& C, const CurvePoint& P,
                           bool second_map) {
  return morphism_apply(C, P, second_map).matched != MorphismTarget::neither;
}

// Deterministic sample of points of the genus-2 curve with coordinates in
// ext: x runs through ext in coordinate order, contributing (x, 0) at the
// quintic's roots and (x, +-sqrt(rhs)) where the right-hand side is a
// nonzero square, until `count` points are collected.
inline std::vector<CurvePoint> sample_curve_points(const Genus2Curve& C,
                                                   const FieldDescriptor& ext,
                                                   std::size_t count) {
  std::vector<CurvePoint> pts;
  u64 p = ext.p;
  u128 q = field_order(ext);
  for (u128 k = 0; k < q && pts.size() < count; ++k) {
    std::array<u64, 4> cs{0, 0, 0, 0};
    u128 t = k;
    for (int i = 0; i < ext.degree; ++i) {
      cs[static_cast<std::size_t>(i)] = static_cast<u64>(t % p);
      t /= p;
    }
    FieldElement x =
        (ext.degree == 1)
            ? FieldElement(ext, cs[0])
            : (ext.degree == 2 ? FieldElement(ext, {cs[0], cs[1]})
                               : FieldElement(ext, {cs[0], cs[1], cs[2], cs[3]}));
    FieldElement rhs = quintic_rhs(C, x);
    if (rhs.is_zero()) {
      pts.push_back(CurvePoint::affine(x, FieldElement::zero(ext)));
      continue;
    }
    if (std::optional<FieldElement> y = sqrt(rhs)) {
      pts.push_back(CurvePoint::affine(x, *y));
      if (pts.size() < count) pts.push_back(CurvePoint::affine(x, -*y));
    }
  }
  return pts;
}

}  // namespace klein4
