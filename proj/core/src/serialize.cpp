#include "cherry/serialize.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace cherry {

using nlohmann::json;

void write_file_atomic(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) fail(ErrorKind::Internal, "cannot open " + tmp.string() + " for writing");
    out << content;
    if (!out.flush()) fail(ErrorKind::Internal, "short write to " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) fail(ErrorKind::Internal, "rename failed: " + ec.message());
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::Internal, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string map_to_json(const FlatCircleMap& m) {
  json j;
  j["ell1"] = m.ell1().to_string();
  j["ell2"] = m.ell2().to_string();
  j["u_left"] = m.flat().left().rep().to_string();
  j["u_length"] = m.flat().length().to_string();
  j["c"] = m.c().rep().to_string();
  j["precision_bits"] = m.precision();
  j["rho_target"] = m.rho_target();
  j["tuned_depth"] = m.tuned_depth();
  return j.dump(2) + "\n";
}

FlatCircleMap map_from_json(const std::string& json_text,
                            std::optional<long> override_precision) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const std::exception& e) {
    fail(ErrorKind::Domain, std::string("bad map descriptor: ") + e.what());
  }
  for (const char* key :
       {"ell1", "ell2", "u_left", "u_length", "c", "precision_bits"})
    if (!j.contains(key))
      fail(ErrorKind::Domain, std::string("map descriptor missing field ") + key);

  long prec = override_precision.value_or(j["precision_bits"].get<long>());
  auto dec = [&](const char* key) {
    return BigReal::from_string(j[key].get<std::string>(), prec);
  };
  Arc flat(CirclePoint(dec("u_left")), dec("u_length"));
  FlatCircleMap m(dec("ell1"), dec("ell2"), flat, CirclePoint(dec("c")), prec);
  if (j.contains("rho_target") && j.contains("tuned_depth")) {
    std::vector<long> rho = j["rho_target"].get<std::vector<long>>();
    long depth = j["tuned_depth"].get<long>();
    if (!rho.empty()) m.set_tuning(std::move(rho), depth);
  }
  return m;
}

namespace {

std::string opt_str(const std::optional<BigReal>& v) {
  return v ? v->to_string() : std::string();
}

}  // namespace

std::string ratios_to_csv(const RatioSeries& s) {
  long max_a = 0;
  for (long n = 1; n <= s.depth(); ++n)
    max_a = std::max<long>(max_a, static_cast<long>(s.level(n).beta.size()) - 1);

  std::ostringstream out;
  out << "n,alpha,sigma,s,tau,kappa,nu,fsigma";
  for (long k = 0; k <= max_a; ++k) out << ",beta" << k;
  for (long k = 0; k <= max_a; ++k) out << ",gamma1_" << k;
  for (long k = 0; k < max_a; ++k) out << ",w" << k;
  out << "\n";

  for (long n = 1; n <= s.depth(); ++n) {
    const LevelRatios& L = s.level(n);
    out << n << ',' << opt_str(L.alpha) << ',' << opt_str(L.sigma) << ','
        << opt_str(L.s) << ',' << opt_str(L.tau) << ',' << opt_str(L.kappa) << ','
        << opt_str(L.nu) << ',' << opt_str(L.fsigma);
    for (long k = 0; k <= max_a; ++k)
      out << ',' << (k < static_cast<long>(L.beta.size()) ? L.beta[k].to_string() : "");
    for (long k = 0; k <= max_a; ++k)
      out << ',' << (k < static_cast<long>(L.gamma1.size()) ? L.gamma1[k].to_string() : "");
    for (long k = 0; k < max_a; ++k)
      out << ',' << (k < static_cast<long>(L.w.size()) ? L.w[k].to_string() : "");
    out << "\n";
  }
  return out.str();
}

std::string partition_to_csv(const DynamicalPartition& p) {
  std::ostringstream out;
  out << "kind,index,left,length\n";
  for (long i = 0; i < p.marked_count(); ++i) {
    const Arc& a = p.orbit().arc(i);
    out << "marked," << i << ',' << a.left().rep().to_string() << ','
        << a.length().to_string() << "\n";
  }
  for (const auto& g : p.long_gaps())
    out << "long," << g.pair_low << ',' << g.arc.left().rep().to_string() << ','
        << g.arc.length().to_string() << "\n";
  for (const auto& g : p.short_gaps())
    out << "short," << g.pair_low << ',' << g.arc.left().rep().to_string() << ','
        << g.arc.length().to_string() << "\n";
  return out.str();
}

std::string checks_to_json(const std::vector<CheckRecord>& records, long hard_failures,
                           long precision_bits, long tuned_depth) {
  json recs = json::array();
  for (const auto& r : records) {
    json rec;
    rec["check"] = r.check;
    rec["level"] = r.level;
    rec["lhs"] = r.lhs.to_string();
    rec["rhs"] = r.rhs.to_string();
    rec["slack"] = r.slack.to_string();
    rec["pass"] = r.pass;
    recs.push_back(std::move(rec));
  }
  json j;
  j["records"] = std::move(recs);
  j["summary"] = {{"total", records.size()},
                  {"hard_failures", hard_failures},
                  {"precision_bits", precision_bits},
                  {"tuned_depth", tuned_depth}};
  return j.dump(2) + "\n";
}

std::string verdict_to_json(const GeometryVerdict& v) {
  json j;
  j["region"] = to_string(v.region);
  j["basis"] = to_string(v.basis);
  j["lambda_u"] = v.lambda_u ? json(v.lambda_u->to_string()) : json(nullptr);
  j["lambda_s"] = v.lambda_s ? json(v.lambda_s->to_string()) : json(nullptr);
  j["cf"] = v.cf_spec;
  j["ell1"] = v.ell1.to_string();
  j["ell2"] = v.ell2.to_string();
  j["precision_bits"] = v.ell1.precision();
  if (!v.note.empty()) j["note"] = v.note;
  return j.dump(2) + "\n";
}

std::string curve_to_csv(const std::vector<CurvePoint>& pts) {
  std::ostringstream out;
  out << "ell1,ell2,lambda_u_residual\n";
  for (const auto& p : pts) {
    out << p.ell1.to_string() << ',';
    if (p.ell2) {
      out << p.ell2->to_string() << ',' << p.lambda_u_residual->to_string();
    } else {
      out << ",curve-exits-domain";
    }
    out << "\n";
  }
  return out.str();
}

std::string dimension_to_csv(const DimensionEstimate& est) {
  std::ostringstream out;
  out << "n,gap_count,mean_gap,D_n\n";
  for (const auto& l : est.levels)
    out << l.n << ',' << l.gap_count << ',' << l.mean_gap.to_string() << ','
        << l.d_n.to_string() << "\n";
  return out.str();
}

std::string dimension_to_json(const DimensionEstimate& est, long precision_bits,
                              long tuned_depth) {
  json levels = json::array();
  for (const auto& l : est.levels)
    levels.push_back({{"n", l.n},
                      {"gap_count", l.gap_count},
                      {"mean_gap", l.mean_gap.to_string()},
                      {"D_n", l.d_n.to_string()}});
  json j;
  j["method"] = est.method;
  j["levels"] = std::move(levels);
  j["precision_bits"] = precision_bits;
  j["tuned_depth"] = tuned_depth;
  j["extrapolated"] = est.extrapolated ? json(est.extrapolated->to_string()) : json(nullptr);
  j["uncertainty"] = est.uncertainty ? json(est.uncertainty->to_string()) : json(nullptr);
  j["note"] = "thresholds and extrapolation are desk-scale conventions; "
              "the underlying theorem asserts only zero versus positive";
  return j.dump(2) + "\n";
}

std::string dichotomy_to_json(const DichotomyReport& rep) {
  json j;
  j["degenerate_ok"] = rep.degenerate_ok;
  j["bounded_ok"] = rep.bounded_ok;
  j["pass"] = rep.pass();
  j["detail"] = rep.detail;
  return j.dump(2) + "\n";
}

std::string manifest_to_json(const RunManifest& m) {
  json cfg;
  for (const auto& [k, v] : m.config) cfg[k] = v;
  json j;
  j["tool_version"] = m.tool_version;
  j["command"] = m.command;
  j["config"] = std::move(cfg);
  j["precision_bits"] = m.precision_bits;
  j["precision_audit"] = m.precision_audit;
  j["wall_time_ms"] = m.wall_time_ms;
  j["checks"] = {{"pass", m.checks_pass}, {"fail", m.checks_fail}};
  return j.dump(2) + "\n";
}

}  // namespace cherry
