// Acceptance suite: one pass/fail line per criterion. Builds two golden-mean
// maps (exponents 1.5 and 3) at 512 bits, runs the full pipeline on them,
// and checks the pinned numeric gates. Expect a few minutes of runtime.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "cherry/classify.hpp"
#include "cherry/dimension.hpp"
#include "cherry/ratios.hpp"
#include "cherry/serialize.hpp"

using namespace cherry;
using Clock = std::chrono::steady_clock;

namespace {

struct Harness {
  int passed = 0, failed = 0;

  void run(const char* name, const std::function<bool(std::string&)>& fn) {
    auto t0 = Clock::now();
    std::string detail;
    bool ok = false;
    try {
      ok = fn(detail);
    } catch (const std::exception& e) {
      detail = std::string("exception: ") + e.what();
    }
    double secs = std::chrono::duration<double>(Clock::now() - t0).count();
    std::printf("[%s] %s (%.1fs)%s%s\n", ok ? "PASS" : "FAIL", name, secs,
                detail.empty() ? "" : " - ", detail.c_str());
    std::fflush(stdout);
    ok ? ++passed : ++failed;
  }
};

constexpr long P = 512;

BigReal dec(const char* s, long p = P) { return BigReal::from_string(s, p); }

// Flat-piece sizes per regime: the criteria pin the rotation number,
// exponents, and depth; the flat size is chosen so the desk-scale
// transients settle inside the tested window (fatter U = earlier onset).
Arc flat_for(const char* ell, long p) {
  const char* len = (ell[0] == '3') ? "0.95" : "0.6";
  return Arc(CirclePoint(BigReal::from_string("0.02", p)),
             BigReal::from_string(len, p));
}

struct GoldenRun {
  FlatCircleMap map;
  ConvergentTable table;
  BackwardOrbit orbit;
  ForwardOrbit fwd;
  RatioSeries series;
};

GoldenRun build_golden(const char* ell, long prec, const CirclePoint* hint = nullptr) {
  ContinuedFraction golden = ContinuedFraction::parse("golden");
  BigReal e = BigReal::from_string(ell, prec);
  FlatCircleMap m = tune_parameter(e, e, flat_for(ell, prec), golden, 14, prec, hint);
  ConvergentTable t = convergents(golden, 13);  // q_13 = 233, quotients to a_12
  long count = static_cast<long>(t.q(12));      // 144 arcs: series depth 12,
                                                // partitions through level 10
  BackwardOrbit orbit = BackwardOrbit::build(m, count);
  ForwardOrbit fwd = ForwardOrbit::build(m, static_cast<long>(t.q(12)) + 1);
  RatioSeries s = compute_ratios(m, orbit, fwd, t, 12);
  return GoldenRun{std::move(m), std::move(t), std::move(orbit), std::move(fwd),
                   std::move(s)};
}

std::string fmt(const BigReal& x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", x.to_double());
  return buf;
}

}  // namespace

int main() {
  Harness h;
  std::printf("acceptance suite, working precision %ld bits\n", P);
  std::fflush(stdout);

  // Criterion 1: the three W' constants, exact inequalities at 256 bits.
  h.run("1 W' constants 0.9 / 0.98 / 0.85", [&](std::string& detail) {
    auto t0 = Clock::now();
    WprimeCheck c = wprime_constants_check(256);
    double secs = std::chrono::duration<double>(Clock::now() - t0).count();
    detail = "W'(0.55,0.16)=" + fmt(c.w_055_016) + " W'(0.3,0.44)=" + fmt(c.w_03_044) +
             " product=" + fmt(c.product);
    return c.all_ok() && secs < 1.0;
  });

  // Criterion 2: the transition point (2,2) of the bi-periodic eigenvalue.
  h.run("2 lambda_u transition at (2,2)", [&](std::string& detail) {
    auto t0 = Clock::now();
    const long p = 256;
    BigReal two = BigReal::from_long(2, p);
    auto [ls, lu] = biperiodic_eigen(1, 1, two, two);
    bool eig_ok = abs(lu - BigReal::from_long(1, p)) <= dec("1e-12", p) &&
                  abs(ls - dec("0.25", p)) <= dec("1e-12", p);
    std::vector<BigReal> grid;
    for (int i = 0; i <= 10; ++i)
      grid.push_back(dec("1.5", p) + BigReal::from_long(i, p) * dec("0.1", p));
    std::vector<CurvePoint> pts = curve_trace(1, 1, grid, p);
    bool curve_ok = false;
    for (const auto& pt : pts)
      if (abs(pt.ell1 - two) <= dec("1e-9", p) && pt.ell2 &&
          abs(*pt.ell2 - two) <= dec("1e-6", p))
        curve_ok = true;
    double secs = std::chrono::duration<double>(Clock::now() - t0).count();
    detail = "lambda_u=" + fmt(lu) + " lambda_s=" + fmt(ls);
    return eig_ok && curve_ok && secs < 1.0;
  });

  // Criterion 3: eigenvalue identities over the exponent/quotient grid.
  h.run("3 eigenvalue identities on 20x20x9 grid", [&](std::string& detail) {
    auto t0 = Clock::now();
    const long p = 256;
    BigReal tol = dec("1e-12", p);
    long checked = 0;
    for (int a = 1; a <= 3; ++a)
      for (int b = 1; b <= 3; ++b)
        for (int i = 0; i < 20; ++i)
          for (int j = 0; j < 20; ++j) {
            BigReal l1 = dec("1.25", p) + BigReal::from_long(i, p) * dec("0.25", p);
            BigReal l2 = dec("1.25", p) + BigReal::from_long(j, p) * dec("0.25", p);
            auto [ls, lu] = biperiodic_eigen(a, b, l1, l2);
            BigReal det = pow_si(l1, -b) * pow_si(l2, -a);
            BigReal tr = t_func(1, b, l1, l2) * t_func(2, a, l1, l2) +
                         pow_si(l1, -b) + pow_si(l2, -a);
            if (abs(ls * lu - det) / det > tol) return false;
            if (abs(ls + lu - tr) / tr > tol) return false;
            if (!(ls.sign() > 0) || !ls.less_than(1)) return false;
            ++checked;
          }
    double secs = std::chrono::duration<double>(Clock::now() - t0).count();
    detail = std::to_string(checked) + " grid points";
    return checked == 3600 && secs < 10.0;
  });

  // Shared heavy artifacts for criteria 4-10.
  std::printf("building golden runs at %ld bits (exponents 1.5 and 3)...\n", P);
  std::fflush(stdout);
  GoldenRun run15 = build_golden("1.5", P);
  GoldenRun run3 = build_golden("3", P);

  // Criterion 4: tuning combinatorics for golden and [2]rep at both exponents.
  h.run("4 tuning combinatorics golden/[2]rep", [&](std::string& detail) {
    ContinuedFraction silver = ContinuedFraction::parse("[2]rep");
    ConvergentTable gt = convergents(ContinuedFraction::parse("golden"), 11);
    ConvergentTable st = convergents(silver, 11);

    long checks = 0;
    auto check_map = [&](const FlatCircleMap& m, const ContinuedFraction& cf,
                         const ConvergentTable& t) {
      std::vector<long long> r = closest_returns(m, 10);
      for (long n = 1; n <= 10; ++n)
        if (r[n - 1] != t.q(n)) return false;
      long iters = static_cast<long>(4 * t.q(10));
      auto [rho, err] = rotation_number_estimate(m, iters, m.b());
      BigReal target = cf_value(cf, 10, m.precision());
      if (abs(rho - target) > BigReal::from_long(1, m.precision()) /
                                  BigReal::from_long(t.q(10), m.precision()))
        return false;
      ++checks;
      return true;
    };

    ContinuedFraction golden = ContinuedFraction::parse("golden");
    if (!check_map(run15.map, golden, gt)) return false;
    if (!check_map(run3.map, golden, gt)) return false;
    for (const char* ell : {"1.5", "3"}) {
      BigReal e = dec(ell);
      FlatCircleMap m = tune_parameter(e, e, flat_for(ell, P), silver, 10, P);
      if (!check_map(m, silver, st)) return false;
    }
    detail = std::to_string(checks) + " maps verified to depth 10";
    return checks == 4;
  });

  // Criterion 5: partition integrity through level 10 on both runs.
  h.run("5 partition integrity levels 1..10", [&](std::string& detail) {
    for (const GoldenRun* r : {&run15, &run3}) {
      BigReal allowed = BigReal::pow2(-P / 2, P);
      std::vector<DynamicalPartition> parts;
      for (long n = 1; n <= 10; ++n) {
        parts.push_back(DynamicalPartition::build(r->map, r->orbit, r->table, n));
        if (parts.back().tiling_defect() > allowed) return false;
      }
      for (long n = 0; n + 1 < 10; ++n)
        if (!refinement_check(parts[n], parts[n + 1]).ok()) return false;
      std::vector<BigReal> gaps = return_gaps(r->map, r->fwd, r->table, 10);
      double sx = 0, sy = 0, sxx = 0, sxy = 0, cnt = 0;
      for (long n = 3; n <= 10; ++n) {
        if (!(gaps[n - 1] < gaps[n - 2])) return false;
        double x = n, y = std::log(gaps[n - 1].to_double());
        sx += x; sy += y; sxx += x * x; sxy += x * y; cnt += 1;
      }
      double slope = (cnt * sxy - sx * sy) / (cnt * sxx - sx * sx);
      if (!(slope < 0)) return false;
      detail += std::string(detail.empty() ? "" : "; ") + "slope " +
                std::to_string(slope).substr(0, 6);
    }
    return true;
  });

  // Criterion 6: the main-result dichotomy at desk scale, depth 12.
  h.run("6 alpha dichotomy (1.5,1.5) vs (3,3)", [&](std::string& detail) {
    const RatioSeries& d = run15.series;
    for (long n = 6; n <= 12; ++n)
      if (!(d.alpha(n) < d.alpha(n - 1))) return false;
    if (!(d.alpha(12) < d.alpha(5) / BigReal::from_long(10, P))) return false;
    for (long n = 6; n <= 12; ++n) {
      BigReal inc = d.nu(n) - d.nu(n - 1);
      BigReal prev = d.nu(n - 1) - d.nu(n - 2);
      if (!(inc.sign() > 0) || !(inc > prev)) return false;
    }

    const RatioSeries& b = run3.series;
    BigReal lo = b.alpha(5), hi = b.alpha(5);
    for (long n = 5; n <= 12; ++n) {
      if (b.alpha(n) < lo) lo = b.alpha(n);
      if (b.alpha(n) > hi) hi = b.alpha(n);
    }
    if (!(lo > dec("0.01") * hi)) return false;
    bool tail_decreasing = b.alpha(10) < b.alpha(9) && b.alpha(11) < b.alpha(10) &&
                           b.alpha(12) < b.alpha(11);
    if (tail_decreasing) return false;
    detail = "alpha_12(1.5)=" + fmt(d.alpha(12)) + " alpha_5(1.5)=" + fmt(d.alpha(5)) +
             "; (3,3) min/max=" + fmt(lo / hi);
    return true;
  });

  // Criterion 7: the inequality suite on both regimes.
  h.run("7 inequality suite (a-priori, lemma, recursion, lower bounds)",
        [&](std::string& detail) {
          for (const auto& rec : verify_apriori(run15.series, 5))
            if (rec.level >= 6 && !rec.pass) return false;
          for (long n = 6; n <= 12; ++n) {
            for (const auto& rec : verify_lemma1(run15.series, n))
              if (!rec.pass) return false;
            for (const auto& rec : verify_recursion(run15.series, n))
              if (!rec.pass) return false;
          }

          std::vector<CheckRecord> lower = verify_lower_bounds(run3.series);
          if (lower.empty()) return false;
          BigReal inf_k(P);
          bool first = true;
          double sx = 0, sy = 0, sxx = 0, sxy = 0, cnt = 0;
          for (const auto& rec : lower) {
            if (!rec.pass || !(rec.slack.sign() > 0)) return false;
            if (rec.check == "lower.alpha") {
              if (first || rec.slack < inf_k) inf_k = rec.slack;
              first = false;
              double x = rec.level, y = std::log(rec.slack.to_double());
              sx += x; sy += y; sxx += x * x; sxy += x * y; cnt += 1;
            }
          }
          double slope = (cnt * sxy - sx * sy) / (cnt * sxx - sx * sx);
          detail = "inf implied K = " + fmt(inf_k) + ", ln-K slope " +
                   std::to_string(slope).substr(0, 6);
          return !first && inf_k.sign() > 0 && slope > -0.5;
        });

  // Criterion 8: cross-ratio properties.
  h.run("8 cross-ratio: Cr+Po, single-step DPo, chain products",
        [&](std::string& detail) {
          const long p = 256;
          std::mt19937_64 rng(20260810);
          std::uniform_real_distribution<double> u(0.0, 1.0);
          BigReal one = BigReal::from_long(1, p);
          BigReal ulp = BigReal::pow2(-p + 1, p);
          long done = 0;
          while (done < 10000) {
            double o[3] = {u(rng), u(rng), u(rng)};
            std::sort(o, o + 3);
            if (o[0] < 1e-7 || o[1] - o[0] < 1e-7 || o[2] - o[1] < 1e-7 ||
                o[2] > 1 - 1e-7)
              continue;
            double base = u(rng);
            Quadruple q(mod1(BigReal::from_double(base, p)),
                        mod1(BigReal::from_double(base + o[0], p)),
                        mod1(BigReal::from_double(base + o[1], p)),
                        mod1(BigReal::from_double(base + o[2], p)));
            if (abs(cross_cr(q) + cross_po(q) - one) > ulp) return false;
            ++done;
          }

          // single diffeomorphic steps of a (2,2) map expand Po
          Arc u22(CirclePoint(BigReal::from_string("0.4", p)),
                  BigReal::from_string("0.1", p));
          FlatCircleMap m22(BigReal::from_long(2, p), BigReal::from_long(2, p), u22,
                            CirclePoint(BigReal::from_string("0.2", p)), p);
          long steps = 0;
          while (steps < 1000) {
            double o[3] = {u(rng) * 0.35, u(rng) * 0.35, u(rng) * 0.35};
            std::sort(o, o + 3);
            if (o[0] < 1e-6 || o[1] - o[0] < 1e-6 || o[2] - o[1] < 1e-6) continue;
            double base = 0.52 + u(rng) * (0.86 - o[2]);
            Quadruple q(mod1(BigReal::from_double(base, p)),
                        mod1(BigReal::from_double(base + o[0], p)),
                        mod1(BigReal::from_double(base + o[1], p)),
                        mod1(BigReal::from_double(base + o[2], p)));
            DistortionReport rep = distortion_audit(m22, q, 1);
            if (!rep.steps[0].outer_clear) continue;
            if (!rep.single_step_po_ok) return false;
            ++steps;
          }

          // distortion products along the q_{n-1}-chain (level-10 partition
          // is the deepest the 144-arc orbit supports)
          long n = 11;
          DynamicalPartition part =
              DynamicalPartition::build(run15.map, run15.orbit, run15.table, n - 1);
          long i = static_cast<long>(run15.table.q(n - 1)) - 1;
          const PartitionGap& gap = part.long_gap(i);
          const Arc& low = run15.orbit.arc(gap.pair_low);
          const Arc& high = run15.orbit.arc(gap.pair_high);
          bool low_first = low.right() == gap.arc.left();
          const Arc& first = low_first ? low : high;
          const Arc& second = low_first ? high : low;
          Quadruple q0(first.left(), gap.arc.left(), gap.arc.right(), second.right());
          DistortionReport rep = distortion_audit(
              run15.map, q0, static_cast<long>(run15.table.q(n - 1)) - 1);
          detail = "chain k=" + std::to_string(rep.multiplicity) +
                   " prod DCr=" + fmt(rep.prod_dcr) + " prod DPo=" + fmt(rep.prod_dpo);
          return rep.prod_dcr.is_finite() && rep.prod_dpo.is_finite() &&
                 rep.prod_dpo.sign() > 0;
        });

  // Criterion 9: dimension dichotomy.
  h.run("9 Hausdorff-dimension dichotomy", [&](std::string& detail) {
    BigReal want = log(BigReal::from_long(2, 256)) / log(BigReal::from_long(3, 256));
    std::vector<BigReal> cantor(256, pow_si(BigReal::from_long(3, 256), -8));
    BigReal s = bowen_dim_from_gaps(cantor, 256);
    if (abs(s - want) > dec("1e-6", 256)) return false;

    DimensionEstimate deg =
        estimate_dimension(run15.map, run15.orbit, run15.table, 6, 10);
    DimensionEstimate bnd = estimate_dimension(run3.map, run3.orbit, run3.table, 6, 10);
    DichotomyReport rep = dichotomy_report(deg, bnd, run15.map.ell1(),
                                           run15.map.ell2(), run3.map.ell1(),
                                           run3.map.ell2());
    detail = rep.detail;
    return rep.pass();
  });

  // Criterion 10: determinism and the doubled-precision audit.
  h.run("10 determinism and precision audit", [&](std::string& detail) {
    // byte-identical outputs from a fresh pipeline over the same descriptor
    std::string descriptor = map_to_json(run15.map);
    FlatCircleMap again = map_from_json(descriptor);
    BackwardOrbit orbit2 =
        BackwardOrbit::build(again, static_cast<long>(run15.table.q(12)));
    ForwardOrbit fwd2 =
        ForwardOrbit::build(again, static_cast<long>(run15.table.q(12)) + 1);
    RatioSeries series2 = compute_ratios(again, orbit2, fwd2, run15.table, 12);
    if (ratios_to_csv(series2) != ratios_to_csv(run15.series)) {
      detail = "rerun CSV differs";
      return false;
    }

    // doubled precision: every alpha_n moves by less than 2^-(P/2) relative
    BigReal worst = BigReal::from_long(0, 2 * P);
    for (const GoldenRun* r : {&run15, &run3}) {
      CirclePoint hint = r->map.c();
      const char* ell = (r == &run15) ? "1.5" : "3";
      GoldenRun fine = build_golden(ell, 2 * P, &hint);
      if (!(fine.map.c().rep().round_to(2 * P) == r->map.c().rep().round_to(2 * P))) {
        detail = "re-tuned parameter is not bit-identical";
        return false;
      }
      for (long n = 1; n <= 12; ++n) {
        BigReal rel = abs(r->series.alpha(n).round_to(2 * P) - fine.series.alpha(n)) /
                      fine.series.alpha(n);
        if (rel > worst) worst = rel;
      }
    }
    detail = "max relative alpha drift " + fmt(worst);
    return worst < BigReal::pow2(-P / 2, 2 * P);
  });

  std::printf("%d passed, %d failed\n", h.passed, h.failed);
  return h.failed == 0 ? 0 : 1;
}
