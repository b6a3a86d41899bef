#include "cherry/rotation.hpp"

#include <cctype>
#include <climits>
#include <numeric>
#include <sstream>

namespace cherry {

long ContinuedFraction::quotient(long n) const {
  if (n < 1) fail(ErrorKind::Domain, "partial quotient index must be >= 1");
  long h = static_cast<long>(head.size());
  if (n <= h) return head[n - 1];
  if (tail.empty())
    fail(ErrorKind::Depth, "continued fraction has only " + std::to_string(h) +
                               " quotients, requested a_" + std::to_string(n));
  return tail[(n - h - 1) % tail.size()];
}

long ContinuedFraction::available() const {
  return tail.empty() ? static_cast<long>(head.size()) : LONG_MAX;
}

bool ContinuedFraction::biperiodic(long* a_odd, long* a_even) const {
  if (tail.empty()) return false;
  long span = static_cast<long>(head.size() + 2 * tail.size()) + 2;
  for (long n = 1; n + 2 <= span; ++n)
    if (quotient(n) != quotient(n + 2)) return false;
  if (a_odd) *a_odd = quotient(1);
  if (a_even) *a_even = quotient(2);
  return true;
}

ContinuedFraction ContinuedFraction::parse(const std::string& spec) {
  ContinuedFraction cf;
  if (spec == "golden") {
    cf.tail = {1};
    return cf;
  }
  std::string s = spec;
  bool rep = false;
  if (s.size() >= 3 && s.substr(s.size() - 3) == "rep") {
    rep = true;
    s = s.substr(0, s.size() - 3);
  }
  if (s.size() < 3 || s.front() != '[' || s.back() != ']')
    fail(ErrorKind::Domain, "unparseable continued-fraction spec: '" + spec + "'");
  s = s.substr(1, s.size() - 2);
  std::vector<long> vals;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    size_t pos = 0;
    long v = 0;
    try {
      v = std::stol(item, &pos);
    } catch (...) {
      fail(ErrorKind::Domain, "bad partial quotient '" + item + "' in '" + spec + "'");
    }
    while (pos < item.size() && std::isspace(static_cast<unsigned char>(item[pos]))) ++pos;
    if (pos != item.size())
      fail(ErrorKind::Domain, "bad partial quotient '" + item + "' in '" + spec + "'");
    if (v < 1) fail(ErrorKind::Domain, "partial quotients must be >= 1, got " + item);
    vals.push_back(v);
  }
  if (vals.empty()) fail(ErrorKind::Domain, "empty continued-fraction spec");
  if (rep) cf.tail = vals; else cf.head = vals;
  return cf;
}

std::string ContinuedFraction::to_spec() const {
  auto join = [](const std::vector<long>& v) {
    std::string out = "[";
    for (size_t i = 0; i < v.size(); ++i) {
      if (i) out += ',';
      out += std::to_string(v[i]);
    }
    return out + "]";
  };
  if (head.empty() && tail == std::vector<long>{1}) return "golden";
  if (head.empty() && !tail.empty()) return join(tail) + "rep";
  return join(head);  // finite (tail after head is not produced by parse)
}

long long ConvergentTable::q(long n) const {
  if (n < 1 || n > depth())
    fail(ErrorKind::Depth, "convergent q_" + std::to_string(n) + " outside table");
  return q_[n];
}

long long ConvergentTable::p(long n) const {
  if (n < 1 || n > depth())
    fail(ErrorKind::Depth, "convergent p_" + std::to_string(n) + " outside table");
  return p_[n];
}

ConvergentTable convergents(const ContinuedFraction& cf, long depth) {
  if (depth < 1) fail(ErrorKind::Domain, "convergent depth must be >= 1");
  if (depth >= 2 && cf.available() < depth - 1)
    fail(ErrorKind::Depth, "continued fraction too short for depth " + std::to_string(depth));
  std::vector<long long> q(depth + 1, 0), p(depth + 1, 0);
  q[1] = 1;
  p[1] = 0;
  if (depth >= 2) {
    q[2] = cf.quotient(1);
    p[2] = 1;
  }
  for (long n = 3; n <= depth; ++n) {
    long long a = cf.quotient(n - 1);
    if (q[n - 1] > (LLONG_MAX - q[n - 2]) / a)
      fail(ErrorKind::Depth, "convergent denominators overflow at level " + std::to_string(n));
    q[n] = a * q[n - 1] + q[n - 2];
    p[n] = a * p[n - 1] + p[n - 2];
  }
  return ConvergentTable(std::move(q), std::move(p));
}

BigReal cf_value(const ContinuedFraction& cf, long num_quotients, long precision_bits) {
  if (num_quotients < 1) fail(ErrorKind::Domain, "cf_value needs at least one quotient");
  ConvergentTable t = convergents(cf, num_quotients + 1);
  return BigReal::from_long(t.p(num_quotients + 1), precision_bits) /
         BigReal::from_long(t.q(num_quotients + 1), precision_bits);
}

std::pair<BigReal, BigReal> rotation_number_estimate(const FlatCircleMap& m,
                                                     long n_iters,
                                                     const CirclePoint& x0) {
  if (n_iters < 1) fail(ErrorKind::Domain, "rotation estimate needs n_iters >= 1");
  LiftState s = m.lift_start(x0);
  BigReal start = s.base;
  for (long k = 0; k < n_iters; ++k) s = m.lift_eval(s);
  BigReal n = BigReal::from_long(n_iters, m.precision());
  return {(s.base - start) / n, BigReal::from_long(1, m.precision()) / n};
}

namespace {

enum class Probe { Accept, TooSmall, TooLarge };

// Exact comparison of a rational w/q against the target, using the fact
// that the target lies strictly between its last two convergents. Any
// locked rotation number met during tuning has denominator far below
// q_depth + q_{depth+1}, so it can never fall strictly between them.
Probe side_of_rational(long long w, long long q, const ConvergentTable& t) {
  long d = t.depth() - 1;  // table holds depth+1 entries
  auto le = [](long long a, long long b, long long c, long long dd) {
    return static_cast<__int128>(a) * dd <= static_cast<__int128>(c) * b;
  };
  long lo_idx = (d % 2 == 1) ? d : d + 1;  // odd-indexed convergent is below rho
  long hi_idx = (d % 2 == 1) ? d + 1 : d;
  if (le(w, q, t.p(lo_idx), t.q(lo_idx))) return Probe::TooSmall;
  if (le(t.p(hi_idx), t.q(hi_idx), w, q)) return Probe::TooLarge;
  fail(ErrorKind::Tuning, "locked rotation number " + std::to_string(w) + "/" +
                              std::to_string(q) +
                              " indistinguishable from the target at this depth");
}

// Once the probe orbit enters the flat piece the map is mode locked; the
// exact rotation number W/Q falls out of the lift as soon as the orbit of c
// comes back to U.
Probe classify_absorbed(const FlatCircleMap& m, LiftState s, long long budget,
                        const ConvergentTable& t) {
  s = m.lift_eval(s);  // image of the U hit: projects exactly to c
  BigReal base0 = s.base;
  for (long long j = 1; j <= budget; ++j) {
    bool hit = m.in_flat_closure(mod1(s.base));
    s = m.lift_eval(s);
    if (hit) {
      BigReal wr = s.base - base0;
      long long w = wr.to_long();
      return side_of_rational(w, j, t);
    }
  }
  fail(ErrorKind::Tuning, "absorbed orbit did not close within the probe budget");
}

// Combinatorial test of a candidate parameter: every orbit point up to
// q_depth must stay off the flat piece, and each lifted return
// F^{q_n}(x0) - x0 - p_n must carry the sign (-1)^(n+1), the alternation of
// q_n rho - p_n around an irrational rho.
Probe probe_combinatorics(const FlatCircleMap& m, const ConvergentTable& t,
                          long depth) {
  LiftState s = m.lift_start(m.b());
  const BigReal& x0 = m.b().rep();
  long long steps = t.q(depth);
  long n = 1;
  for (long long k = 1; k <= steps; ++k) {
    s = m.lift_eval(s);
    if (m.in_flat_closure(mod1(s.base)))
      return classify_absorbed(m, s, 8 * steps + 8, t);
    while (n <= depth && t.q(n) == k) {
      BigReal g = s.base - x0 - BigReal::from_long(t.p(n), m.precision());
      bool want_positive = (n % 2 == 1);
      if (want_positive && g.sign() <= 0) return Probe::TooSmall;
      if (!want_positive && g.sign() >= 0) return Probe::TooLarge;
      ++n;
    }
  }
  return Probe::Accept;
}

}  // namespace

FlatCircleMap tune_parameter(const BigReal& ell1, const BigReal& ell2,
                             const Arc& flat, const ContinuedFraction& target,
                             long depth, long precision_bits,
                             const CirclePoint* initial_c) {
  if (depth < 2) fail(ErrorKind::Domain, "tuning depth must be >= 2");
  if (target.available() < depth)
    fail(ErrorKind::Depth, "target continued fraction shorter than tuning depth");
  // One extra level so absorbed (mode-locked) candidates can be placed
  // exactly relative to the target.
  ConvergentTable table = convergents(target, depth + 1);

  std::vector<long> quotients(depth);
  for (long n = 1; n <= depth; ++n) quotients[n - 1] = target.quotient(n);

  auto make = [&](const BigReal& t) {
    Arc u(CirclePoint(flat.left().rep().round_to(precision_bits)),
          flat.length().round_to(precision_bits));
    CirclePoint c = mod1(u.right().rep() + t);
    FlatCircleMap m(ell1, ell2, u, c, precision_bits);
    return m;
  };

  if (initial_c != nullptr) {
    // The candidate parameter is adopted verbatim (no detour through the
    // offset coordinate), so a parameter tuned at lower precision re-tunes
    // to the bit-identical value at higher precision.
    Arc u(CirclePoint(flat.left().rep().round_to(precision_bits)),
          flat.length().round_to(precision_bits));
    FlatCircleMap m(ell1, ell2, u,
                    CirclePoint(initial_c->rep().round_to(precision_bits)),
                    precision_bits);
    if (probe_combinatorics(m, table, depth) == Probe::Accept) {
      m.set_tuning(quotients, depth);
      return m;
    }
  }

  BigReal lo = BigReal::from_long(0, precision_bits);
  BigReal hi = BigReal::from_long(1, precision_bits) - flat.length().round_to(precision_bits);
  const BigReal half = BigReal::from_string("0.5", precision_bits);
  const long budget = 4 * precision_bits;
  for (long it = 0; it < budget; ++it) {
    BigReal mid = lo + (hi - lo) * half;
    if (mid <= lo || mid >= hi) break;
    FlatCircleMap m = make(mid);
    switch (probe_combinatorics(m, table, depth)) {
      case Probe::Accept:
        m.set_tuning(quotients, depth);
        return m;
      case Probe::TooSmall:
        lo = mid;
        break;
      case Probe::TooLarge:
        hi = mid;
        break;
    }
  }
  fail(ErrorKind::Tuning, "tuning failed to reach depth " + std::to_string(depth) +
                              "; last bracket [" + lo.to_string() + ", " +
                              hi.to_string() + "]");
}

std::vector<long long> scan_closest_returns(const FlatCircleMap& m,
                                            long long max_steps) {
  // New-adjacency events: times whose orbit point lands strictly between
  // the flat piece and every earlier point on its side. Side-resolved gaps
  // are order data, so the event times survive the semi-conjugacy to the
  // rigid rotation, where they are the semiconvergent denominators
  // m q_n + q_{n-1}. (A plain nearest-distance test would compare gap
  // lengths across the two sides of U, which the map distorts unevenly.)
  std::vector<long long> times;
  CirclePoint x = m.b();
  BigReal best_right = BigReal::from_long(2, m.precision());
  BigReal best_left = BigReal::from_long(2, m.precision());
  for (long long k = 1; k <= max_steps; ++k) {
    x = m.eval(x);
    if (m.in_flat_closure(x)) {
      times.push_back(-k);  // sentinel: orbit hit the flat piece
      return times;
    }
    BigReal dr = forward_distance(m.b(), x);
    BigReal dl = forward_distance(x, m.a());
    bool improved = false;
    if (dr < best_right) {
      best_right = dr;
      improved = true;
    }
    if (dl < best_left) {
      best_left = dl;
      improved = true;
    }
    if (improved) times.push_back(k);
  }
  return times;
}

std::vector<long long> closest_returns(const FlatCircleMap& m, long depth) {
  if (m.rho_target().empty())
    fail(ErrorKind::Domain, "closest_returns requires a tuned map");
  if (depth < 1 || depth > m.tuned_depth())
    fail(ErrorKind::Depth, "requested depth " + std::to_string(depth) +
                               " exceeds tuned depth " + std::to_string(m.tuned_depth()));
  ContinuedFraction cf{m.rho_target(), {}};
  ConvergentTable t = convergents(cf, depth);

  // Expected adjacency times: m q_n + q_{n-1} for 1 <= m <= a_n (q_0 = 0),
  // truncated at q_depth. The returns q_n are the tail of each run.
  std::vector<long long> expected;
  for (long n = 1; n < depth; ++n) {
    long long q_prev = (n == 1) ? 0 : t.q(n - 1);
    long a_n = static_cast<long>((t.q(n + 1) - q_prev) / t.q(n));
    for (long mm = 1; mm <= a_n; ++mm) {
      long long tm = mm * t.q(n) + q_prev;
      if (tm <= t.q(depth) && (expected.empty() || expected.back() < tm))
        expected.push_back(tm);
    }
  }
  if (depth == 1) expected.push_back(1);

  std::vector<long long> seen = scan_closest_returns(m, t.q(depth));
  if (!seen.empty() && seen.back() < 0)
    fail(ErrorKind::Combinatorics,
         "orbit of r(U) absorbed by the flat piece at step " + std::to_string(-seen.back()));
  if (seen != expected) {
    std::string msg = "return structure disagrees with target convergents; got {";
    for (auto v : seen) msg += std::to_string(v) + ",";
    msg += "} expected {";
    for (auto v : expected) msg += std::to_string(v) + ",";
    msg += "}";
    fail(ErrorKind::Combinatorics, msg);
  }

  std::vector<long long> aligned(depth);
  for (long n = 1; n <= depth; ++n) aligned[n - 1] = t.q(n);
  return aligned;
}

}  // namespace cherry
