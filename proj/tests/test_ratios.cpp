#include <doctest.h>

#include <random>

#include "cherry/classify.hpp"
#include "cherry/ratios.hpp"

using namespace cherry;

namespace {
constexpr long P = 192;
BigReal dec(const char* s) { return BigReal::from_string(s, P); }
Arc std_flat() { return Arc(CirclePoint(dec("0.4")), dec("0.1")); }
// Regime fixtures mirror the acceptance geometry: the desk-scale transients
// of the inequality suite settle by level 6 only for a sizable flat piece.
Arc flat_deg() { return Arc(CirclePoint(dec("0.02")), dec("0.6")); }
Arc flat_bnd() { return Arc(CirclePoint(dec("0.02")), dec("0.95")); }

struct Run {
  FlatCircleMap map;
  ConvergentTable table;
  BackwardOrbit orbit;
  ForwardOrbit fwd;
  RatioSeries series;
};

Run make_run(const char* rho, const char* ell, long depth, const Arc& flat) {
  ContinuedFraction cf = ContinuedFraction::parse(rho);
  BigReal e = dec(ell);
  FlatCircleMap m = tune_parameter(e, e, flat, cf, depth + 2, P);
  ConvergentTable t = convergents(cf, depth + 1);
  BackwardOrbit orbit = BackwardOrbit::build(m, static_cast<long>(t.q(depth)));
  ForwardOrbit fwd = ForwardOrbit::build(m, static_cast<long>(t.q(depth)) + 1);
  RatioSeries s = compute_ratios(m, orbit, fwd, t, depth);
  return Run{std::move(m), std::move(t), std::move(orbit), std::move(fwd), std::move(s)};
}

const Run& degenerate_run() {
  static Run r = make_run("golden", "1.5", 10, flat_deg());
  return r;
}
const Run& bounded_run() {
  static Run r = make_run("golden", "3", 10, flat_bnd());
  return r;
}
}  // namespace

TEST_CASE("cross ratios on a hand quadruple") {
  Quadruple q(mod1(dec("0.1")), mod1(dec("0.2")), mod1(dec("0.3")), mod1(dec("0.4")));
  CHECK(abs(cross_cr(q) - dec("0.25")) <= BigReal::pow2(-P + 4, P));
  CHECK(abs(cross_po(q) - dec("0.75")) <= BigReal::pow2(-P + 4, P));
  CHECK_THROWS_AS(
      Quadruple(mod1(dec("0.1")), mod1(dec("0.3")), mod1(dec("0.2")), mod1(dec("0.4"))),
      Error);
}

TEST_CASE("Cr + Po = 1 within one ulp on random quadruples") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  BigReal one = BigReal::from_long(1, P);
  BigReal ulp = BigReal::pow2(-P + 1, P);
  for (int i = 0; i < 500; ++i) {
    double o[3] = {u(rng), u(rng), u(rng)};
    std::sort(o, o + 3);
    if (o[0] < 1e-8 || o[1] - o[0] < 1e-8 || o[2] - o[1] < 1e-8 || o[2] > 1 - 1e-8)
      continue;
    double base = u(rng);
    Quadruple q(mod1(BigReal::from_double(base, P)),
                mod1(BigReal::from_double(base + o[0], P)),
                mod1(BigReal::from_double(base + o[1], P)),
                mod1(BigReal::from_double(base + o[2], P)));
    CHECK(abs(cross_cr(q) + cross_po(q) - one) <= ulp);
  }
}

TEST_CASE("degenerate quadruple limit: Cr to 0, Po to 1") {
  Quadruple q(mod1(dec("0.1")), mod1(dec("0.100000000001")), mod1(dec("0.3")),
              mod1(dec("0.4")));
  CHECK(cross_cr(q) < dec("1e-10"));
  CHECK(cross_po(q) > dec("0.9999"));
}

TEST_CASE("linear map leaves cross ratios unchanged, Schwarzian expands Po") {
  BigReal one = BigReal::from_long(1, P);
  FlatCircleMap lin(one, one, std_flat(), CirclePoint(dec("0.2")), P);
  Quadruple q(mod1(dec("0.55")), mod1(dec("0.6")), mod1(dec("0.7")), mod1(dec("0.8")));
  DistortionReport rep = distortion_audit(lin, q, 1);
  CHECK(abs(rep.steps[0].dcr - one) <= BigReal::pow2(-P + 16, P));
  CHECK(abs(rep.steps[0].dpo - one) <= BigReal::pow2(-P + 16, P));

  FlatCircleMap m(dec("2"), dec("2"), std_flat(), CirclePoint(dec("0.2")), P);
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  int done = 0;
  while (done < 100) {
    double o[3] = {u(rng) * 0.35, u(rng) * 0.35, u(rng) * 0.35};
    std::sort(o, o + 3);
    if (o[0] < 1e-6 || o[1] - o[0] < 1e-6 || o[2] - o[1] < 1e-6) continue;
    // quadruple inside the complement interior (b, a) = (0.5, 1.4)
    double base = 0.52 + u(rng) * (0.86 - o[2]);
    Quadruple qq(mod1(BigReal::from_double(base, P)),
                 mod1(BigReal::from_double(base + o[0], P)),
                 mod1(BigReal::from_double(base + o[1], P)),
                 mod1(BigReal::from_double(base + o[2], P)));
    DistortionReport r2 = distortion_audit(m, qq, 1);
    REQUIRE(r2.steps[0].outer_clear);
    CHECK(r2.single_step_po_ok);
    ++done;
  }
}

TEST_CASE("distortion audit rejects middles that meet the flat piece") {
  FlatCircleMap m(dec("2"), dec("2"), std_flat(), CirclePoint(dec("0.2")), P);
  Quadruple q(mod1(dec("0.3")), mod1(dec("0.35")), mod1(dec("0.6")), mod1(dec("0.7")));
  bool threw = false;
  try {
    distortion_audit(m, q, 1);
  } catch (const Error& e) {
    threw = e.kind() == ErrorKind::Audit;
  }
  CHECK(threw);
}

TEST_CASE("series index identities hold exactly") {
  const RatioSeries& s = degenerate_run().series;
  for (long n = 3; n <= 10; ++n) {
    long a_prev = s.quotient(n - 1);  // golden: always 1
    CHECK(a_prev == 1);
    CHECK(s.beta(n, 0) == s.alpha(n));
    CHECK(s.beta(n, a_prev) == s.alpha(n - 2));
  }
}

TEST_CASE("basic range facts: alpha in (0,1), s > 1, nu consistent") {
  for (const Run* r : {&degenerate_run(), &bounded_run()}) {
    const RatioSeries& s = r->series;
    BigReal one = BigReal::from_long(1, P);
    for (long n = 1; n <= s.depth(); ++n) {
      CHECK(s.alpha(n).sign() > 0);
      CHECK(s.alpha(n) < one);
      CHECK(s.nu(n).sign() > 0);
      CHECK(abs(exp(-s.nu(n)) - s.alpha(n)) <= BigReal::pow2(-P + 24, P));
    }
    for (long n = 3; n <= s.depth(); ++n) CHECK(s.s_ratio(n) > one);
  }
}

TEST_CASE("degenerate and bounded regimes separate in alpha") {
  const RatioSeries& d = degenerate_run().series;
  for (long n = 5; n <= 10; ++n) CHECK(d.alpha(n) < d.alpha(n - 1));

  const RatioSeries& b = bounded_run().series;
  BigReal lo = b.alpha(4), hi = b.alpha(4);
  for (long n = 4; n <= 10; ++n) {
    if (b.alpha(n) < lo) lo = b.alpha(n);
    if (b.alpha(n) > hi) hi = b.alpha(n);
  }
  CHECK(lo > dec("0.01") * hi);
}

TEST_CASE("tau/alpha and kappa stay comparable on the bounded run") {
  const RatioSeries& s = bounded_run().series;
  BigReal lo(P), hi(P);
  bool first = true;
  for (long n = 4; n <= 10; ++n) {
    BigReal band = (s.tau(n) / s.alpha(n - 1)) / s.kappa(n);
    CHECK(band.sign() > 0);
    if (first || band < lo) lo = band;
    if (first || band > hi) hi = band;
    first = false;
  }
  CHECK(hi / lo < BigReal::from_long(100, P));
}

TEST_CASE("f(sigma_n) stays bounded") {
  for (const Run* r : {&degenerate_run(), &bounded_run()}) {
    const RatioSeries& s = r->series;
    for (long n = 3; n <= s.depth(); ++n) {
      const auto& f = s.level(n).fsigma;
      REQUIRE(f.has_value());
      CHECK(f->is_finite());
      CHECK(f->sign() > 0);
      CHECK(*f < BigReal::from_long(1000, P));
    }
  }
}

TEST_CASE("a-priori bounds pass in scope and refuse out of scope") {
  const RatioSeries& d = degenerate_run().series;
  for (const auto& rec : verify_apriori(d, 5))
    if (rec.level >= 6) CHECK(rec.pass);
  CHECK_THROWS_AS(verify_apriori(bounded_run().series, 5), Error);
}

TEST_CASE("cross-ratio lemma and recursion hold on the degenerate run") {
  const RatioSeries& s = degenerate_run().series;
  for (long n = 6; n <= 10; ++n) {
    for (const auto& rec : verify_lemma1(s, n)) CHECK(rec.pass);
    for (const auto& rec : verify_recursion(s, n)) CHECK(rec.pass);
  }
}

TEST_CASE("recursion M-factor plug-in value") {
  BigReal two = BigReal::from_long(2, P);
  BigReal one = BigReal::from_long(1, P);
  BigReal zero = BigReal::from_long(0, P);
  BigReal m = recursion_m_factor(two, one, zero, zero, one, one);
  CHECK(abs(m - dec("0.5")) <= BigReal::pow2(-P + 8, P));
  // radicand turns negative once s alpha > l/(2(l-1)) = 1
  CHECK_THROWS_AS(recursion_m_factor(two, dec("1.2"), one, zero, one, one), Error);
}

TEST_CASE("lower bounds report positive implied constants on the bounded run") {
  std::vector<CheckRecord> recs = verify_lower_bounds(bounded_run().series);
  CHECK(!recs.empty());
  for (const auto& rec : recs) {
    CHECK(rec.pass);
    CHECK(rec.slack.sign() > 0);
    CHECK(rec.slack.is_finite());
  }
  CHECK_THROWS_AS(verify_lower_bounds(make_run("golden", "1", 4, std_flat()).series), Error);
}

TEST_CASE("nu residuals are reported and bounded on the bounded run") {
  std::vector<CheckRecord> recs = nu_residuals(bounded_run().series);
  CHECK(!recs.empty());
  for (const auto& rec : recs) {
    CHECK(rec.slack.is_finite());
    CHECK(abs(rec.slack) < BigReal::from_long(10, P));
  }
}

TEST_CASE("w diagnostic: golden has one entry, silver two, all comparable") {
  const RatioSeries& g = degenerate_run().series;
  for (long n = 4; n <= 9; ++n) {
    std::vector<CheckRecord> recs = w_diagnostic(g, n);
    CHECK(recs.size() == 1);  // a_{n-1} = 1
    CHECK(recs[0].slack.sign() > 0);
    CHECK(recs[0].slack < BigReal::from_long(100, P));
    CHECK(recs[0].slack > dec("0.01"));
  }
  Run silver = make_run("[2]rep", "3", 6, std_flat());
  std::vector<CheckRecord> recs = w_diagnostic(silver.series, 5);
  CHECK(recs.size() == 2);  // a_{n-1} = 2: i = 0, 1
  for (const auto& rec : recs) CHECK(rec.slack.sign() > 0);
}

TEST_CASE("lemma1 exercises every k for larger quotients") {
  Run silver = make_run("[2]rep", "1.5", 7, std_flat());
  for (long n = 5; n <= 7; ++n) {
    std::vector<CheckRecord> recs = verify_lemma1(silver.series, n);
    CHECK(recs.size() == 2);  // k = 0, 1
  }
}

TEST_CASE("distortion products along a return chain are finite and recorded") {
  const Run& r = degenerate_run();
  long n = 8;
  DynamicalPartition part = DynamicalPartition::build(
      r.map, r.orbit, convergents(ContinuedFraction::parse("golden"), n + 1), n - 1);
  long i = static_cast<long>(r.table.q(n - 1)) - 1;
  const PartitionGap& gap = part.long_gap(i);
  const Arc& low = r.orbit.arc(gap.pair_low);
  const Arc& high = r.orbit.arc(gap.pair_high);
  bool low_first = low.right() == gap.arc.left();
  const Arc& first = low_first ? low : high;
  const Arc& second = low_first ? high : low;
  Quadruple q0(first.left(), gap.arc.left(), gap.arc.right(), second.right());
  DistortionReport rep =
      distortion_audit(r.map, q0, static_cast<long>(r.table.q(n - 1)) - 1);
  CHECK(rep.prod_dcr.is_finite());
  CHECK(rep.prod_dpo.is_finite());
  CHECK(rep.prod_dpo.sign() > 0);
  CHECK(rep.multiplicity >= 1);
  CHECK(rep.single_step_po_ok);
}
