// cherrylab: numerical laboratory for order-preserving circle maps with a
// flat interval. Subcommands: tune, ratios, verify, classify, curve, dim.
//
// Exit codes: 0 success, 2 tuning/combinatorics failure, 3 depth overrun,
// 4 precision (audit or escalation cap), 64 usage, 1 other errors.

#include <chrono>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cherry/dimension.hpp"
#include "cherry/serialize.hpp"

namespace {

constexpr const char* kToolVersion = "cherrylab 1.0.0";

using Clock = std::chrono::steady_clock;

int exit_code_for(const cherry::Error& e) {
  switch (e.kind()) {
    case cherry::ErrorKind::Tuning:
    case cherry::ErrorKind::Combinatorics:
      return 2;
    case cherry::ErrorKind::Depth:
      return 3;
    case cherry::ErrorKind::Precision:
      return 4;
    case cherry::ErrorKind::Domain:
      return 64;
    default:
      return 1;
  }
}

long precision_cap() {
  if (const char* env = std::getenv("CHERRY_PREC_CAP")) {
    long cap = std::atol(env);
    if (cap >= 64) return cap;
  }
  return 16384;
}

struct ManifestClock {
  Clock::time_point start = Clock::now();
  double elapsed_ms() const {
    return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
  }
};

void emit_manifest(const std::string& out_path, cherry::RunManifest m,
                   const ManifestClock& clock) {
  m.tool_version = kToolVersion;
  m.wall_time_ms = clock.elapsed_ms();
  cherry::write_file_atomic(out_path + ".manifest.json", cherry::manifest_to_json(m));
}

// Backward orbit with precision escalation: if any pullback arc drops below
// 2^(-P/4), the whole pipeline is rebuilt at doubled precision (rereading
// the same decimal descriptor) until the arcs are resolved or the cap from
// CHERRY_PREC_CAP is hit.
struct Pipeline {
  cherry::FlatCircleMap map;
  cherry::ConvergentTable table;
  cherry::BackwardOrbit orbit;
  cherry::ForwardOrbit fwd;
  long escalations = 0;
};

Pipeline build_pipeline(const std::string& map_json, long depth, bool partitions_depth) {
  using namespace cherry;
  FlatCircleMap probe = map_from_json(map_json);
  if (probe.rho_target().empty())
    fail(ErrorKind::Domain, "map descriptor carries no tuning data");
  if (depth > probe.tuned_depth())
    fail(ErrorKind::Depth, "requested depth " + std::to_string(depth) +
                               " exceeds tuned depth " +
                               std::to_string(probe.tuned_depth()));

  const long cap = precision_cap();
  long prec = probe.precision();
  long escalations = 0;
  while (true) {
    FlatCircleMap m = map_from_json(map_json, prec);
    ContinuedFraction cf{m.rho_target(), {}};
    ConvergentTable table = convergents(cf, depth + 1);
    long long count = partitions_depth ? table.q(depth + 1) + table.q(depth) - 1
                                       : table.q(depth);
    BackwardOrbit orbit = BackwardOrbit::build(m, static_cast<long>(count));
    if (orbit.min_length() >= BigReal::pow2(-prec / 4, prec)) {
      ForwardOrbit fwd = ForwardOrbit::build(m, static_cast<long>(table.q(depth)) + 1);
      return Pipeline{std::move(m), std::move(table), std::move(orbit),
                      std::move(fwd), escalations};
    }
    prec *= 2;
    ++escalations;
    if (prec > cap)
      fail(ErrorKind::Precision,
           "precision escalation exceeded CHERRY_PREC_CAP = " + std::to_string(cap));
  }
}

// ---------------------------------------------------------------------------

int cmd_tune(const std::string& l1, const std::string& l2, const std::string& flat,
             const std::string& rho, long depth, long prec, const std::string& out) {
  using namespace cherry;
  ManifestClock clock;
  if (prec < 64) fail(ErrorKind::Domain, "precision must be at least 64 bits");
  if (depth < 2) fail(ErrorKind::Domain, "depth must be at least 2");

  auto comma = flat.find(',');
  if (comma == std::string::npos)
    fail(ErrorKind::Domain, "--flat wants <left,length>");
  BigReal ell1 = BigReal::from_string(l1, prec);
  BigReal ell2 = BigReal::from_string(l2, prec);
  if (ell1.less_than(1) || ell2.less_than(1))
    fail(ErrorKind::Domain, "critical exponents must be >= 1");
  Arc u(CirclePoint(BigReal::from_string(flat.substr(0, comma), prec)),
        BigReal::from_string(flat.substr(comma + 1), prec));
  ContinuedFraction cf = ContinuedFraction::parse(rho);

  FlatCircleMap m = tune_parameter(ell1, ell2, u, cf, depth, prec);
  std::vector<long long> returns = closest_returns(m, depth);

  std::cout << "tuned c = " << m.c().rep().to_string() << "\n";
  std::cout << "closest-return verification (n, q_n):\n";
  for (long n = 1; n <= depth; ++n)
    std::cout << "  " << n << "\t" << returns[n - 1] << "\n";
  auto [k1, k2] = m.boundary_coefficients();
  std::cout << "boundary coefficients k1 = " << k1.to_string()
            << ", k2 = " << k2.to_string()
            << ", k1/k2 = " << (k1 / k2).to_string() << "\n";

  write_file_atomic(out, map_to_json(m));
  RunManifest man;
  man.command = "tune";
  man.config = {{"l1", l1},     {"l2", l2},       {"flat", flat},
                {"rho", rho},   {"depth", std::to_string(depth)},
                {"prec", std::to_string(prec)},   {"out", out}};
  man.precision_bits = prec;
  man.precision_audit = "closest returns verified to depth " + std::to_string(depth);
  man.checks_pass = depth;
  emit_manifest(out, std::move(man), clock);
  return 0;
}

int cmd_ratios(const std::string& map_path, long depth, const std::string& out,
               const std::string& partitions_dir, bool check_precision) {
  using namespace cherry;
  ManifestClock clock;
  std::string map_json = read_file(map_path);
  Pipeline pipe = build_pipeline(map_json, depth, true);

  // Structural validation before any number is emitted: the partitions at
  // every level must assemble and tile.
  for (long n = 1; n <= depth; ++n) {
    DynamicalPartition part =
        DynamicalPartition::build(pipe.map, pipe.orbit, pipe.table, n);
    if (!partitions_dir.empty()) {
      std::string stamp = "# precision_bits=" + std::to_string(pipe.map.precision()) +
                          ", tuned_depth=" + std::to_string(pipe.map.tuned_depth()) +
                          "\n";
      write_file_atomic(partitions_dir + "/partition_level" + std::to_string(n) + ".csv",
                        stamp + partition_to_csv(part));
    }
  }

  RatioSeries series =
      compute_ratios(pipe.map, pipe.orbit, pipe.fwd, pipe.table, depth);
  std::string stamp = "# precision_bits=" + std::to_string(pipe.map.precision()) +
                      ", tuned_depth=" + std::to_string(pipe.map.tuned_depth()) + "\n";
  write_file_atomic(out, stamp + ratios_to_csv(series));

  std::string audit = "max pullback residual " + pipe.orbit.max_residual().to_string() +
                      "; escalations " + std::to_string(pipe.escalations);
  if (check_precision) {
    long prec2 = 2 * pipe.map.precision();
    FlatCircleMap m2 = map_from_json(map_json, prec2);
    BackwardOrbit orbit2 =
        BackwardOrbit::build(m2, static_cast<long>(pipe.table.q(depth)));
    ForwardOrbit fwd2 =
        ForwardOrbit::build(m2, static_cast<long>(pipe.table.q(depth)) + 1);
    RatioSeries series2 = compute_ratios(m2, orbit2, fwd2, pipe.table, depth);
    BigReal worst = BigReal::from_long(0, prec2);
    for (long n = 1; n <= depth; ++n) {
      BigReal rel = abs(series.alpha(n).round_to(prec2) - series2.alpha(n)) /
                    series2.alpha(n);
      if (rel > worst) worst = rel;
    }
    BigReal allowed = BigReal::pow2(-pipe.map.precision() / 2, prec2);
    audit += "; doubled-precision max relative alpha drift " + worst.to_string();
    if (worst > allowed)
      fail(ErrorKind::Precision,
           "doubled-precision check failed: alpha drift " + worst.to_string());
  }

  RunManifest man;
  man.command = "ratios";
  man.config = {{"map", map_path},
                {"depth", std::to_string(depth)},
                {"out", out},
                {"partitions", partitions_dir},
                {"check-precision", check_precision ? "true" : "false"}};
  man.precision_bits = pipe.map.precision();
  man.precision_audit = audit;
  man.checks_pass = depth;
  emit_manifest(out, std::move(man), clock);
  return 0;
}

int cmd_verify(const std::string& map_path, long depth, long n0,
               const std::string& out) {
  using namespace cherry;
  ManifestClock clock;
  std::string map_json = read_file(map_path);
  Pipeline pipe = build_pipeline(map_json, depth, true);
  RatioSeries series =
      compute_ratios(pipe.map, pipe.orbit, pipe.fwd, pipe.table, depth);

  std::vector<CheckRecord> records;
  long hard = 0;
  const long prec = pipe.map.precision();
  auto absorb = [&](std::vector<CheckRecord>&& recs, long hard_from_level) {
    for (auto& r : recs) {
      if (!r.pass && r.level >= hard_from_level) ++hard;
      records.push_back(std::move(r));
    }
  };

  const bool unit_square = !pipe.map.ell1().greater_than(2) &&
                           !pipe.map.ell2().greater_than(2);
  // A-priori bounds: scoped to [1,2]^2, hard there from n0+1 on.
  if (unit_square) absorb(verify_apriori(series, n0), n0 + 1);

  for (long n = 4; n <= depth; ++n) {
    absorb(verify_lemma1(series, n), unit_square ? std::max<long>(6, n0) : depth + 1);
    try {
      absorb(verify_recursion(series, n), unit_square ? std::max<long>(6, n0) : depth + 1);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::Domain) throw;  // mixed exponents: skip
      break;
    }
  }

  if (pipe.map.ell1().greater_than(1) && pipe.map.ell2().greater_than(1)) {
    absorb(verify_lower_bounds(series), depth + 1);  // implied constants only
    absorb(nu_residuals(series), depth + 1);
  }

  // Cross-ratio chain audit on the deepest level with a full chain.
  {
    long n = depth;
    DynamicalPartition part =
        DynamicalPartition::build(pipe.map, pipe.orbit, pipe.table, n - 1);
    long i = static_cast<long>(pipe.table.q(n - 1)) - 1;
    if (i >= 1) {
      const PartitionGap& gap = part.long_gap(i);
      const Arc& left_arc = pipe.orbit.arc(gap.pair_low);
      const Arc& right_arc = pipe.orbit.arc(gap.pair_high);
      const Arc& first =
          (left_arc.right() == gap.arc.left()) ? left_arc : right_arc;
      const Arc& second = (&first == &left_arc) ? right_arc : left_arc;
      Quadruple q0(first.left(), gap.arc.left(), gap.arc.right(), second.right());
      DistortionReport rep =
          distortion_audit(pipe.map, q0, static_cast<long>(pipe.table.q(n - 1)) - 1);
      BigReal one = BigReal::from_long(1, prec);
      bool finite = rep.prod_dpo.is_finite() && rep.prod_dcr.is_finite() &&
                    rep.prod_dpo.sign() > 0;
      records.push_back({"cri.products", n, rep.prod_dcr, rep.prod_dpo,
                         BigReal::from_long(rep.multiplicity, prec), finite});
      if (!finite) ++hard;
      records.push_back({"cri.single_step_po", n, rep.prod_dpo, one,
                         rep.prod_dpo - one, rep.single_step_po_ok});
      if (!rep.single_step_po_ok) ++hard;
    }
  }

  // Partition integrity: refinement and the return-gap decay.
  {
    BigReal zero = BigReal::from_long(0, prec);
    for (long n = 1; n + 1 <= depth; ++n) {
      DynamicalPartition a =
          DynamicalPartition::build(pipe.map, pipe.orbit, pipe.table, n);
      DynamicalPartition b =
          DynamicalPartition::build(pipe.map, pipe.orbit, pipe.table, n + 1);
      RefinementReport rep = refinement_check(a, b);
      records.push_back({"partition.refinement", n,
                         BigReal::from_long(static_cast<long>(rep.violations.size()), prec),
                         zero, a.tiling_defect(), rep.ok()});
      if (!rep.ok()) ++hard;
      ComparabilityReport comp = comparability_audit(a);
      records.push_back({"partition.comparability", n, comp.min_ratio, zero,
                         comp.min_ratio, comp.min_ratio.sign() > 0});
      if (!(comp.min_ratio.sign() > 0)) ++hard;
    }
    std::vector<BigReal> gaps = return_gaps(pipe.map, pipe.fwd, pipe.table, depth);
    bool decreasing = true;
    for (size_t i = 2; i + 1 < gaps.size(); ++i)
      if (!(gaps[i + 1] < gaps[i])) decreasing = false;
    double slope = 0;
    {
      double sx = 0, sy = 0, sxx = 0, sxy = 0;
      long count = 0;
      for (long n = 3; n <= depth; ++n) {
        double x = n, y = std::log(gaps[n - 1].to_double());
        sx += x; sy += y; sxx += x * x; sxy += x * y;
        ++count;
      }
      slope = (count * sxy - sx * sy) / (count * sxx - sx * sx);
    }
    records.push_back({"partition.return_gap_decay", depth,
                       BigReal::from_double(slope, prec), zero,
                       BigReal::from_double(slope, prec),
                       decreasing && slope < 0});
    if (!(decreasing && slope < 0)) ++hard;
  }

  write_file_atomic(out, checks_to_json(records, hard, prec, pipe.map.tuned_depth()));
  RunManifest man;
  man.command = "verify";
  man.config = {{"map", map_path},
                {"depth", std::to_string(depth)},
                {"n0", std::to_string(n0)},
                {"out", out}};
  man.precision_bits = prec;
  man.precision_audit = "max pullback residual " + pipe.orbit.max_residual().to_string();
  man.checks_fail = hard;
  man.checks_pass = static_cast<long>(records.size()) - hard;
  emit_manifest(out, std::move(man), clock);
  std::cout << (hard == 0 ? "verify: all hard checks passed ("
                          : "verify: HARD FAILURES (")
            << records.size() << " records, " << hard << " hard failures)\n";
  return hard == 0 ? 0 : 1;
}

int cmd_classify(const std::string& rho, const std::string& l1, const std::string& l2,
                 long prec, const std::string& out, long audit_depth,
                 const std::string& audit_out) {
  using namespace cherry;
  ManifestClock clock;
  ContinuedFraction cf = ContinuedFraction::parse(rho);
  BigReal ell1 = BigReal::from_string(l1, prec);
  BigReal ell2 = BigReal::from_string(l2, prec);
  GeometryVerdict v = classify_point(cf, ell1, ell2, prec);
  std::string js = verdict_to_json(v);
  std::cout << js;
  if (!out.empty()) {
    write_file_atomic(out, js);
    RunManifest man;
    man.command = "classify";
    man.config = {{"rho", rho}, {"l1", l1}, {"l2", l2}, {"prec", std::to_string(prec)}};
    man.precision_bits = prec;
    man.checks_pass = 1;
    emit_manifest(out, std::move(man), clock);
  }
  if (audit_depth >= 4 && !audit_out.empty()) {
    MatrixAuditReport rep = matrix_product_audit(cf, ell1, ell2, audit_depth, prec);
    std::ostringstream csv;
    csv << "n,entry_max,op_norm\n";
    for (const auto& lvl : rep.levels)
      csv << lvl.n << ',' << lvl.entry_max.to_string() << ','
          << lvl.op_norm.to_string() << "\n";
    write_file_atomic(audit_out, csv.str());
  }
  return 0;
}

int cmd_curve(long a, long b, const std::string& grid, long prec,
              const std::string& out) {
  using namespace cherry;
  ManifestClock clock;
  auto c1 = grid.find(':');
  auto c2 = grid.find(':', c1 == std::string::npos ? grid.size() : c1 + 1);
  if (c1 == std::string::npos || c2 == std::string::npos)
    fail(ErrorKind::Domain, "--l1 wants <lo:hi:step>");
  BigReal lo = BigReal::from_string(grid.substr(0, c1), prec);
  BigReal hi = BigReal::from_string(grid.substr(c1 + 1, c2 - c1 - 1), prec);
  BigReal step = BigReal::from_string(grid.substr(c2 + 1), prec);
  if (step.sign() <= 0 || hi < lo) fail(ErrorKind::Domain, "bad grid spec");

  std::vector<BigReal> values;
  BigReal half_step = step / BigReal::from_long(2, prec);
  for (BigReal x = lo; x <= hi + half_step; x += step) values.push_back(x);

  std::vector<CurvePoint> pts = curve_trace(a, b, values, prec);
  write_file_atomic(out, "# precision_bits=" + std::to_string(prec) + "\n" +
                             curve_to_csv(pts));

  RunManifest man;
  man.command = "curve";
  man.config = {{"a", std::to_string(a)},
                {"b", std::to_string(b)},
                {"l1", grid},
                {"prec", std::to_string(prec)},
                {"out", out}};
  man.precision_bits = prec;
  man.checks_pass = static_cast<long>(pts.size());
  emit_manifest(out, std::move(man), clock);
  return 0;
}

int cmd_dim(const std::string& map_path, long depth, const std::string& levels,
            const std::string& out_prefix, const std::string& compare_path) {
  using namespace cherry;
  ManifestClock clock;
  long lo = std::max<long>(3, depth - 4), hi = depth;
  if (!levels.empty()) {
    auto c = levels.find(':');
    if (c == std::string::npos) fail(ErrorKind::Domain, "--levels wants <lo:hi>");
    lo = std::stol(levels.substr(0, c));
    hi = std::stol(levels.substr(c + 1));
  }
  if (lo < 1 || hi < lo || hi > depth) fail(ErrorKind::Domain, "bad level range");

  std::string map_json = read_file(map_path);
  Pipeline pipe = build_pipeline(map_json, depth, true);
  DimensionEstimate est =
      estimate_dimension(pipe.map, pipe.orbit, pipe.table, lo, hi);
  std::string stamp = "# precision_bits=" + std::to_string(pipe.map.precision()) +
                      ", tuned_depth=" + std::to_string(pipe.map.tuned_depth()) + "\n";
  write_file_atomic(out_prefix + ".csv", stamp + dimension_to_csv(est));
  write_file_atomic(out_prefix + ".json",
                    dimension_to_json(est, pipe.map.precision(), pipe.map.tuned_depth()));

  if (!compare_path.empty()) {
    std::string other_json = read_file(compare_path);
    Pipeline other = build_pipeline(other_json, depth, true);
    DimensionEstimate est2 =
        estimate_dimension(other.map, other.orbit, other.table, lo, hi);
    // The degenerate-regime run is the one whose final level is smaller.
    bool first_is_degenerate = est.levels.back().d_n < est2.levels.back().d_n;
    const DimensionEstimate& deg = first_is_degenerate ? est : est2;
    const DimensionEstimate& bnd = first_is_degenerate ? est2 : est;
    const FlatCircleMap& mdeg = first_is_degenerate ? pipe.map : other.map;
    const FlatCircleMap& mbnd = first_is_degenerate ? other.map : pipe.map;
    DichotomyReport rep = dichotomy_report(deg, bnd, mdeg.ell1(), mdeg.ell2(),
                                           mbnd.ell1(), mbnd.ell2());
    write_file_atomic(out_prefix + ".dichotomy.json", dichotomy_to_json(rep));
  }

  RunManifest man;
  man.command = "dim";
  man.config = {{"map", map_path},
                {"depth", std::to_string(depth)},
                {"levels", std::to_string(lo) + ":" + std::to_string(hi)},
                {"out-prefix", out_prefix},
                {"compare", compare_path}};
  man.precision_bits = pipe.map.precision();
  man.precision_audit = "max pullback residual " + pipe.orbit.max_residual().to_string();
  man.checks_pass = hi - lo + 1;
  emit_manifest(out_prefix + ".json", std::move(man), clock);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{std::string(kToolVersion) +
               " - circle maps with a flat interval: tuning, scaling ratios, "
               "geometry classification, Hausdorff dimension"};
  app.require_subcommand(1);
  app.set_config("--config");

  std::string l1, l2, flat = "0.4,0.1", rho, out, map_path, partitions_dir;
  std::string grid, levels, compare_path, audit_out;
  long depth = 10, prec = 256, n0 = 5, a = 1, b = 1, audit_depth = 0;
  bool check_precision = false;

  auto* tune = app.add_subcommand("tune", "tune the translation parameter to a target rotation number");
  tune->add_option("--l1", l1, "left critical exponent")->required();
  tune->add_option("--l2", l2, "right critical exponent")->required();
  tune->add_option("--flat", flat, "flat arc as <left,length>");
  tune->add_option("--rho", rho, "rotation number: golden | [a,b]rep | [a,b,c]")->required();
  tune->add_option("--depth", depth, "combinatorial depth")->required();
  tune->add_option("--prec", prec, "working precision in bits");
  tune->add_option("--out", out, "output map descriptor path")->required();

  auto* ratios = app.add_subcommand("ratios", "compute the scaling-ratio series");
  ratios->add_option("--map", map_path, "map descriptor")->required();
  ratios->add_option("--depth", depth, "series depth")->required();
  ratios->add_option("--out", out, "output CSV path")->required();
  ratios->add_option("--partitions", partitions_dir, "also write per-level partition CSVs here");
  ratios->add_flag("--check-precision", check_precision,
                   "rerun at doubled precision and compare");

  auto* verify = app.add_subcommand("verify", "run the inequality suite");
  verify->add_option("--map", map_path, "map descriptor")->required();
  verify->add_option("--depth", depth, "series depth")->required();
  verify->add_option("--n0", n0, "first level treated as asymptotic");
  verify->add_option("--out", out, "output report JSON")->required();

  auto* classify = app.add_subcommand("classify", "geometry verdict for (rho, l1, l2)");
  classify->add_option("--rho", rho, "rotation number spec")->required();
  classify->add_option("--l1", l1, "left critical exponent")->required();
  classify->add_option("--l2", l2, "right critical exponent")->required();
  classify->add_option("--prec", prec, "working precision in bits");
  classify->add_option("--out", out, "optional verdict JSON path");
  classify->add_option("--audit-depth", audit_depth, "transfer-matrix audit depth (even, >= 4)");
  classify->add_option("--audit-out", audit_out, "transfer-matrix audit CSV path");

  auto* curve = app.add_subcommand("curve", "trace the lambda_u = 1 transition curve");
  curve->add_option("--a", a, "even-level partial quotient")->required();
  curve->add_option("--b", b, "odd-level partial quotient")->required();
  curve->add_option("--l1", grid, "ell1 grid as <lo:hi:step>")->required();
  curve->add_option("--prec", prec, "working precision in bits");
  curve->add_option("--out", out, "output CSV path")->required();

  auto* dim = app.add_subcommand("dim", "Hausdorff-dimension estimate from partition covers");
  dim->add_option("--map", map_path, "map descriptor")->required();
  dim->add_option("--depth", depth, "partition depth")->required();
  dim->add_option("--levels", levels, "level range <lo:hi> (default depth-4:depth)");
  dim->add_option("--out-prefix", out, "output path prefix")->required();
  dim->add_option("--compare", compare_path, "second map for the dichotomy report");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 64;
  }

  try {
    if (tune->parsed()) return cmd_tune(l1, l2, flat, rho, depth, prec, out);
    if (ratios->parsed())
      return cmd_ratios(map_path, depth, out, partitions_dir, check_precision);
    if (verify->parsed()) return cmd_verify(map_path, depth, n0, out);
    if (classify->parsed())
      return cmd_classify(rho, l1, l2, prec, out, audit_depth, audit_out);
    if (curve->parsed()) return cmd_curve(a, b, grid, prec, out);
    if (dim->parsed()) return cmd_dim(map_path, depth, levels, out, compare_path);
  } catch (const cherry::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_for(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 64;
}
