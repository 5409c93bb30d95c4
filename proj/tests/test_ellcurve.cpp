// Elliptic-curve layer tests: the supersingularity polynomial against the
// point-count oracle, the parameter-orbit partition, halving membership and
// the degree-2 quotient isogeny.

#include <gtest/gtest.h>

#include <set>
#include <vector>

#include "klein4/ellcurve.hpp"
#include "klein4/primes.hpp"

using namespace klein4;

namespace {

// independent oracle: count solutions of y^2 = f(x) by brute force over F_p^2
u64 brute_point_count(const GeneralCubicCurve& E) {
  const FieldDescriptor& fd = E.a.field();
  u64 p = fd.p, count = 1;  // point at infinity
  for (u64 x = 0; x < p; ++x)
    for (u64 y = 0; y < p; ++y) {
      FieldElement fx = cubic_rhs(E, FieldElement(fd, x));
      if (FieldElement(fd, y) * FieldElement(fd, y) == fx) ++count;
    }
  return count;
}

}  // namespace

TEST(Deuring, SmallCoefficients) {
  EXPECT_EQ(deuring_poly(5).coeffs, (std::vector<u64>{1, 4, 1}));
  EXPECT_EQ(deuring_poly(7).coeffs, (std::vector<u64>{1, 2, 2, 1}));
  EXPECT_THROW(deuring_poly(8), std::invalid_argument);
}

TEST(Deuring, PalindromicCoefficients) {
  for (u64 p : admissible_primes_below(120)) {
    DeuringPolynomial H = deuring_poly(p);
    ASSERT_EQ(H.coeffs.size(), (p - 1) / 2 + 1);
    for (std::size_t i = 0; i < H.coeffs.size(); ++i)
      EXPECT_EQ(H.coeffs[i], H.coeffs[H.coeffs.size() - 1 - i]) << "p=" << p;
  }
}

TEST(Deuring, EvaluationExamples) {
  const FieldDescriptor& f7 = make_field(7, 1);
  EXPECT_TRUE(deuring_eval(deuring_poly(7), FieldElement::from_int(f7, -1)).is_zero());
  const FieldDescriptor& f5 = make_field(5, 1);
  EXPECT_EQ(deuring_eval(deuring_poly(5), FieldElement(f5, 2)), FieldElement(f5, 3));
  EXPECT_EQ(deuring_eval_scalar(deuring_poly(5), 2), 3u);
}

TEST(Deuring, ScalarEvalMatchesElementEval) {
  for (u64 p : {11ull, 31ull, 101ull}) {
    DeuringPolynomial H = deuring_poly(p);
    const FieldDescriptor& fd = make_field(p, 1);
    for (u64 s = 0; s < p; ++s)
      EXPECT_EQ(deuring_eval_scalar(H, s), deuring_eval(H, FieldElement(fd, s)).coord(0));
  }
}

TEST(PointCount, KnownValues) {
  const FieldDescriptor& f7 = make_field(7, 1);
  EXPECT_EQ(point_count(legendre_curve(FieldElement::from_int(f7, -1))), 8u);
  const FieldDescriptor& f5 = make_field(5, 1);
  LegendreCurve e2 = legendre_curve(FieldElement(f5, 2));
  EXPECT_EQ(point_count(e2), 8u);
  EXPECT_EQ(frobenius_trace(e2), -2);
}

TEST(PointCount, MatchesBruteForce) {
  for (u64 p : {5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 31ull}) {
    const FieldDescriptor& fd = make_field(p, 1);
    for (u64 s = 2; s < p; ++s) {
      GeneralCubicCurve E = as_cubic(legendre_curve(FieldElement(fd, s)));
      EXPECT_EQ(point_count(E), brute_point_count(E)) << "p=" << p << " s=" << s;
    }
  }
}

TEST(PointCount, HasseBound) {
  for (u64 p : admissible_primes_below(100)) {
    const FieldDescriptor& fd = make_field(p, 1);
    for (u64 s = 2; s < p; ++s) {
      i64 t = frobenius_trace(legendre_curve(FieldElement(fd, s)));
      EXPECT_LE(static_cast<double>(t) * t, 4.0 * static_cast<double>(p));
    }
  }
}

TEST(Supersingular, FastAgreesWithOracleExhaustively) {
  for (u64 p : admissible_primes_below(60)) {
    DeuringPolynomial H = deuring_poly(p);
    const FieldDescriptor& fd = make_field(p, 1);
    for (u64 s = 2; s < p; ++s) {
      LegendreCurve E = legendre_curve(FieldElement(fd, s));
      EXPECT_EQ(is_supersingular_fast(H, E.s), is_supersingular_oracle(E))
          << "p=" << p << " s=" << s;
    }
  }
}

TEST(Supersingular, KnownParameterSets) {
  // p = 11: exactly the parameters {2, 6, 10}
  DeuringPolynomial H11 = deuring_poly(11);
  const FieldDescriptor& f11 = make_field(11, 1);
  std::set<u64> ss;
  for (u64 s = 2; s < 11; ++s)
    if (is_supersingular_fast(H11, FieldElement(f11, s))) ss.insert(s);
  EXPECT_EQ(ss, (std::set<u64>{2, 6, 10}));

  // p = 7: the j = 1728 class {-1, 2, 1/2} = {6, 2, 4}
  DeuringPolynomial H7 = deuring_poly(7);
  const FieldDescriptor& f7 = make_field(7, 1);
  std::set<u64> ss7;
  for (u64 s = 2; s < 7; ++s)
    if (is_supersingular_fast(H7, FieldElement(f7, s))) ss7.insert(s);
  EXPECT_EQ(ss7, (std::set<u64>{2, 4, 6}));
  // in particular s = 2 is supersingular at p = 7 (point count 8)
  EXPECT_TRUE(is_supersingular_oracle(legendre_curve(FieldElement(f7, 2))));
}

TEST(Supersingular, FieldOfDefinitionAgnostic) {
  // H_p vanishes on a parameter iff it vanishes on its conjugate; and base-field
  // parameters give the same verdict viewed in F_p or F_{p^2}
  for (u64 p : {11ull, 19ull, 23ull}) {
    DeuringPolynomial H = deuring_poly(p);
    const FieldDescriptor& f1 = make_field(p, 1);
    const FieldDescriptor& f2 = make_field(p, 2);
    for (u64 s = 2; s < p; ++s) {
      bool base = is_supersingular_fast(H, FieldElement(f1, s));
      bool up = is_supersingular_fast(H, FieldElement(f2, s));
      EXPECT_EQ(base, up);
    }
    for (u64 a = 0; a < p; a += 2)
      for (u64 b = 1; b < p; b += 3) {
        FieldElement s(f2, {a, b});
        if (s.is_zero() || s == FieldElement::one(f2)) continue;
        EXPECT_EQ(is_supersingular_fast(H, s), is_supersingular_fast(H, frobenius(s)));
      }
  }
}

TEST(Orbit, KnownTriples) {
  OrbitReport r = legendre_orbit(3, 11);
  EXPECT_EQ(r.iso_triple, (std::array<u64, 3>{3, 4, 7}));
  EXPECT_FALSE(r.j_1728);

  OrbitReport r7 = legendre_orbit(6, 7);  // s = -1: the degenerate orbit
  EXPECT_TRUE(r7.j_1728);
  EXPECT_EQ(r7.iso_triple, (std::array<u64, 3>{2, 4, 6}));
}

TEST(Orbit, RejectsBadInput) {
  EXPECT_THROW(legendre_orbit(3, 13), std::invalid_argument);  // p = 1 mod 4
  EXPECT_THROW(legendre_orbit(0, 11), std::invalid_argument);
  EXPECT_THROW(legendre_orbit(1, 11), std::invalid_argument);
  // j = 0: s^2 - s + 1 = 0 has roots mod 7 (s = 3, 5)
  EXPECT_THROW(legendre_orbit(3, 7), std::invalid_argument);
}

TEST(Orbit, TriplesAreIsomorphismClasses) {
  for (u64 p : {11ull, 19ull, 23ull, 31ull}) {
    const FieldDescriptor& fd = make_field(p, 1);
    for (u64 s = 2; s < p; ++s) {
      if (add_mod(sub_mod(mul_mod(s, s, p), s, p), 1, p) == 0) continue;  // j = 0
      OrbitReport r = legendre_orbit(s, p);
      u64 c0 = point_count(legendre_curve(FieldElement(fd, r.iso_triple[0])));
      for (u64 v : r.iso_triple)
        EXPECT_EQ(point_count(legendre_curve(FieldElement(fd, v))), c0);
      if (!r.j_1728) {
        u64 c1 = point_count(legendre_curve(FieldElement(fd, r.twin_triple[0])));
        for (u64 v : r.twin_triple)
          EXPECT_EQ(point_count(legendre_curve(FieldElement(fd, v))), c1);
        EXPECT_EQ(c0 + c1, 2 * p + 2);  // quadratic twists
        std::set<u64> all(r.iso_triple.begin(), r.iso_triple.end());
        all.insert(r.twin_triple.begin(), r.twin_triple.end());
        EXPECT_EQ(all.size(), 6u);
        EXPECT_TRUE(all.count(s));
      }
    }
  }
}

TEST(Halving, MatchesSquarenessCriterion) {
  // (s,0) in [2]E_s(F_p) iff s and s-1 are both nonzero squares
  for (u64 p : {7ull, 11ull, 19ull, 23ull}) {
    const FieldDescriptor& fd = make_field(p, 1);
    for (u64 s = 2; s < p; ++s) {
      GeneralCubicCurve E = as_cubic(legendre_curve(FieldElement(fd, s)));
      CurvePoint Q = CurvePoint::affine(FieldElement(fd, s), FieldElement::zero(fd));
      bool expected = legendre_symbol(static_cast<i64>(s), p) == 1 &&
                      legendre_symbol(static_cast<i64>(s) - 1, p) == 1;
      EXPECT_EQ(halving_membership(E, Q), expected) << "p=" << p << " s=" << s;
    }
  }
}

TEST(Halving, KnownCases) {
  const FieldDescriptor& f7 = make_field(7, 1);
  GeneralCubicCurve E2 = as_cubic(legendre_curve(FieldElement(f7, 2)));
  EXPECT_TRUE(halving_membership(E2, CurvePoint::affine(FieldElement(f7, 2), FieldElement::zero(f7))));
  GeneralCubicCurve E3 = as_cubic(legendre_curve(FieldElement(f7, 3)));
  EXPECT_FALSE(halving_membership(E3, CurvePoint::affine(FieldElement(f7, 3), FieldElement::zero(f7))));
  // rejects non-2-torsion input
  EXPECT_THROW(halving_membership(E2, CurvePoint::affine(FieldElement(f7, 2), FieldElement(f7, 1))),
               std::invalid_argument);
}

TEST(GroupLaw, ClosureAndOrder) {
  for (u64 p : {11ull, 13ull}) {
    const FieldDescriptor& fd = make_field(p, 1);
    for (u64 s = 2; s < p; ++s) {
      GeneralCubicCurve E = as_cubic(legendre_curve(FieldElement(fd, s)));
      u64 order = point_count(E);
      for (u64 x = 0; x < p; ++x) {
        FieldElement fx = cubic_rhs(E, FieldElement(fd, x));
        auto y = sqrt(fx);
        if (!y) continue;
        CurvePoint P = CurvePoint::affine(FieldElement(fd, x), *y);
        EXPECT_TRUE(on_curve(E, ec_double(E, P)));
        // order annihilates every point
        CurvePoint acc = CurvePoint::at_infinity();
        CurvePoint base = P;
        u64 k = order;
        while (k) {
          if (k & 1) acc = ec_add(E, acc, base);
          base = ec_double(E, base);
          k >>= 1;
        }
        EXPECT_TRUE(acc.infinity) << "p=" << p << " s=" << s << " x=" << x;
      }
    }
  }
}

TEST(TwoIsogeny, ImageCurveAndKernel) {
  for (u64 p : {7ull, 11ull, 13ull, 19ull}) {
    const FieldDescriptor& fd = make_field(p, 1);
    for (u64 t = 1; t < p; ++t) {
      u64 mtsq = sub_mod(0, mul_mod(t, t, p), p);  // -t^2
      if (mtsq == 0 || mtsq == 1) continue;
      // y^2 = x(x-1)(x+t^2) as a cubic
      GeneralCubicCurve E = as_cubic(legendre_curve(FieldElement(fd, mtsq)));
      TwoIsogeny theta = two_isogeny(E);
      // kernel maps to infinity
      EXPECT_TRUE(theta.apply(CurvePoint::at_infinity()).infinity);
      EXPECT_TRUE(theta.apply(CurvePoint::affine(FieldElement::zero(fd), FieldElement::zero(fd))).infinity);
      u64 fibers_of_two = 0;
      for (u64 x = 0; x < p; ++x) {
        FieldElement fx = cubic_rhs(E, FieldElement(fd, x));
        auto y = sqrt(fx);
        if (!y) continue;
        CurvePoint P = CurvePoint::affine(FieldElement(fd, x), *y);
        CurvePoint img = theta.apply(P);
        EXPECT_TRUE(on_curve(theta.image, img));
        if (!img.infinity) ++fibers_of_two;
      }
      (void)fibers_of_two;
      // isogenous curves share the Frobenius trace
      EXPECT_EQ(point_count(E), point_count(theta.image)) << "p=" << p << " t=" << t;
    }
  }
}

TEST(TwoIsogeny, DegreeTwoFibers) {
  const FieldDescriptor& fd = make_field(13, 1);
  GeneralCubicCurve E = as_cubic(legendre_curve(FieldElement(fd, 5)));
  TwoIsogeny theta = two_isogeny(E);
  // collect all points of E and their images; every affine image must be hit exactly twice
  std::map<std::pair<u64, u64>, int> hits;
  int kernel_hits = 0;
  for (u64 x = 0; x < 13; ++x) {
    FieldElement fx = cubic_rhs(E, FieldElement(fd, x));
    if (!is_square(fx)) continue;
    FieldElement y = *sqrt(fx);
    std::vector<FieldElement> ys{y};
    if (!y.is_zero()) ys.push_back(-y);
    for (const FieldElement& yy : ys) {
      CurvePoint img = theta.apply(CurvePoint::affine(FieldElement(fd, x), yy));
      if (img.infinity) ++kernel_hits;
      else ++hits[{img.x.coord(0), img.y.coord(0)}];
    }
  }
  ++kernel_hits;  // the point at infinity upstairs
  EXPECT_EQ(kernel_hits, 2);
  for (const auto& [xy, c] : hits) EXPECT_EQ(c, 2);
}
