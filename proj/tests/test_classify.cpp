#include <doctest.h>

#include "cherry/classify.hpp"

using namespace cherry;

namespace {
constexpr long P = 256;
BigReal dec(const char* s) { return BigReal::from_string(s, P); }
BigReal num(long k) { return BigReal::from_long(k, P); }
}  // namespace

TEST_CASE("t_func plug-ins and domain") {
  CHECK(t_func(1, 1, num(2), num(3)) == dec("0.5"));
  CHECK(abs(t_func(2, 1, num(2), num(3)) - num(1) / num(3)) <= BigReal::pow2(-P + 4, P));
  CHECK(abs(t_func(1, 64, num(2), num(2)) - num(1)) <= BigReal::pow2(-60, P));
  CHECK_THROWS_AS(t_func(1, 1, num(1), num(2)), Error);
  CHECK_THROWS_AS(t_func(1, 0, num(2), num(2)), Error);
}

TEST_CASE("transfer matrix entries and determinant") {
  TransferMatrix a = transfer_matrix(true, 1, 1, num(2), num(2));
  CHECK(a.m[0][0] == dec("0.5"));
  CHECK(a.m[0][1] == dec("0.5"));
  CHECK(a.m[1][0] == num(1));
  CHECK(a.m[1][1] == num(0));
  CHECK(a.det() == dec("-0.5"));

  TransferMatrix b = transfer_matrix(false, 2, 3, dec("1.5"), num(3));
  CHECK(abs(b.det() + pow_si(num(3), -3)) <= BigReal::pow2(-P + 8, P));
}

TEST_CASE("bi-periodic eigenvalues at the hand-checked points") {
  auto [ls, lu] = biperiodic_eigen(1, 1, num(2), num(2));
  CHECK(abs(lu - num(1)) <= dec("1e-12"));
  CHECK(abs(ls - dec("0.25")) <= dec("1e-12"));

  auto [ls3, lu3] = biperiodic_eigen(1, 1, num(3), num(3));
  BigReal r13 = sqrt(BigReal::from_long(13, P));
  CHECK(abs(lu3 - (num(7) + r13) / num(18)) <= dec("1e-30"));
  CHECK(abs(ls3 - (num(7) - r13) / num(18)) <= dec("1e-30"));

  auto [ls15, lu15] = biperiodic_eigen(1, 1, dec("1.5"), dec("1.5"));
  BigReal r112 = sqrt(BigReal::from_long(112, P));
  CHECK(abs(lu15 - (num(16) + r112) / num(18)) <= dec("1e-30"));
  CHECK(lu15 > num(1));
}

TEST_CASE("trace/determinant identities across the exponent grid") {
  for (int ai = 1; ai <= 3; ++ai) {
    for (int bi = 1; bi <= 3; ++bi) {
      for (int i = 0; i < 20; ++i) {
        for (int j = 0; j < 20; ++j) {
          BigReal l1 = dec("1.25") + num(i) * dec("0.25");
          BigReal l2 = dec("1.25") + num(j) * dec("0.25");
          auto [ls, lu] = biperiodic_eigen(ai, bi, l1, l2);
          BigReal det = pow_si(l1, -bi) * pow_si(l2, -ai);
          BigReal tr = t_func(1, bi, l1, l2) * t_func(2, ai, l1, l2) +
                       pow_si(l1, -bi) + pow_si(l2, -ai);
          CHECK(abs(ls * lu - det) / det <= dec("1e-12"));
          CHECK(abs(ls + lu - tr) / tr <= dec("1e-12"));
          CHECK(ls.sign() > 0);
          CHECK(ls < num(1));
        }
      }
    }
  }
}

TEST_CASE("closed-form eigenvalues agree with the diagonalized product") {
  for (long a : {1L, 2L, 3L}) {
    for (long b : {1L, 3L}) {
      BigReal l1 = dec("2.5"), l2 = dec("1.7");
      // product matrix A(even: a_this = a, a_prev = b) A(odd: a_this = b, a_prev = a)
      TransferMatrix abar = TransferMatrix::multiply(
          transfer_matrix(true, a, b, l1, l2), transfer_matrix(false, b, a, l1, l2));
      auto [lo, hi] = abar.eigenvalues();
      auto [ls, lu] = biperiodic_eigen(a, b, l1, l2);
      CHECK(abs(lo - ls) <= dec("1e-10"));
      CHECK(abs(hi - lu) <= dec("1e-10"));
    }
  }
}

TEST_CASE("curve trace passes through (2,2) and decreases") {
  std::vector<BigReal> grid;
  for (int i = 0; i <= 45; ++i) grid.push_back(dec("1.5") + num(i) * dec("0.1"));
  std::vector<CurvePoint> pts = curve_trace(1, 1, grid, P);
  REQUIRE(pts.size() == grid.size());
  bool found22 = false;
  const BigReal* prev = nullptr;
  for (const auto& p : pts) {
    REQUIRE(p.ell2.has_value());
    if (prev) CHECK(*p.ell2 < *prev);
    prev = &*p.ell2;
    if (abs(p.ell1 - num(2)) <= dec("1e-9")) {
      found22 = true;
      CHECK(abs(*p.ell2 - num(2)) <= dec("1e-6"));
    }
  }
  CHECK(found22);
  // at ell1 = 3 the curve sits inside (1, 2)
  std::vector<CurvePoint> p3 = curve_trace(1, 1, {num(3)}, P);
  CHECK(*p3[0].ell2 > num(1));
  CHECK(*p3[0].ell2 < num(2));
}

TEST_CASE("matrix product audit: contraction only off the boundary case") {
  ContinuedFraction golden = ContinuedFraction::parse("golden");
  MatrixAuditReport three = matrix_product_audit(golden, num(3), num(3), 20, P);
  CHECK(three.entry_bound_ok);
  REQUIRE(three.contraction_onset.has_value());
  CHECK(three.levels.back().op_norm < num(1));

  MatrixAuditReport two = matrix_product_audit(golden, num(2), num(2), 40, P);
  CHECK(two.entry_bound_ok);
  CHECK(!two.contraction_onset.has_value());
  for (const auto& lvl : two.levels) CHECK(!(lvl.op_norm < num(1)));
}

TEST_CASE("wprime paper constants") {
  WprimeCheck c = wprime_constants_check(P);
  CHECK(c.ok_09);
  CHECK(c.ok_098);
  CHECK(c.ok_085);
  // hand-derived value windows
  CHECK(c.w_055_016 > dec("0.712"));
  CHECK(c.w_055_016 < dec("0.713"));
  CHECK(c.w_03_044 > dec("0.972"));
  CHECK(c.w_03_044 < dec("0.973"));
  CHECK(c.product > dec("0.8255"));
  CHECK(c.product < dec("0.8265"));
  // radicand domain error
  CHECK_THROWS_AS(wprime(dec("0.9"), dec("0.5"), num(4), num(2)), Error);
}

TEST_CASE("region verdicts") {
  ContinuedFraction golden = ContinuedFraction::parse("golden");
  GeometryVerdict deg = classify_point(golden, dec("1.5"), dec("1.5"), P);
  CHECK(deg.region == GeometryRegion::Degenerate);
  CHECK(deg.basis == VerdictBasis::TheoremRegion);
  REQUIRE(deg.lambda_u.has_value());
  CHECK(*deg.lambda_u > num(1));

  GeometryVerdict bnd = classify_point(golden, num(3), num(3), P);
  CHECK(bnd.region == GeometryRegion::Bounded);
  CHECK(bnd.basis == VerdictBasis::TheoremRegion);
  CHECK(*bnd.lambda_u < num(1));

  GeometryVerdict crit = classify_point(golden, num(2), num(2), P);
  CHECK(crit.region == GeometryRegion::Critical);

  // lambda criterion below ell1 = 2: [2,1]rep with (1.8, 6)
  ContinuedFraction bp = ContinuedFraction::parse("[2,1]rep");
  GeometryVerdict lam = classify_point(bp, dec("1.8"), num(6), P);
  CHECK(lam.region == GeometryRegion::Bounded);
  CHECK(lam.basis == VerdictBasis::LambdaCriterion);
  CHECK(*lam.lambda_u < num(1));

  // lambda_u > 1 outside the unit square: unproved side
  GeometryVerdict unk = classify_point(golden, dec("1.2"), dec("2.5"), P);
  CHECK(unk.region == GeometryRegion::Unknown);

  // non-bi-periodic bounded type outside both theorem regions
  ContinuedFraction p3 = ContinuedFraction::parse("[1,2,3]rep");
  GeometryVerdict emp = classify_point(p3, dec("1.5"), num(3), P);
  CHECK(emp.region == GeometryRegion::Unknown);
  CHECK(!emp.lambda_u.has_value());
}

TEST_CASE("verdicts respect the inherent symmetry") {
  const char* exps[] = {"1.3", "1.8", "2.4", "3.5"};
  const char* cfs[][2] = {{"[1,2]rep", "[2,1]rep"}, {"[1,3]rep", "[3,1]rep"},
                          {"golden", "golden"}};
  for (auto& pair : cfs) {
    ContinuedFraction c1 = ContinuedFraction::parse(pair[0]);
    ContinuedFraction c2 = ContinuedFraction::parse(pair[1]);
    for (const char* e1 : exps) {
      for (const char* e2 : exps) {
        GeometryVerdict v1 = classify_point(c1, dec(e1), dec(e2), P);
        GeometryVerdict v2 = classify_point(c2, dec(e2), dec(e1), P);
        CHECK(v1.region == v2.region);
      }
    }
  }
}
