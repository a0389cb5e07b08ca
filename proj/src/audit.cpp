#include "pirlab/audit.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <sstream>

#include "json.hpp"
#include "pirlab/error.hpp"

namespace pirlab {

std::string audit_mode_name(AuditMode m) {
  switch (m) {
    case AuditMode::Exhaustive: return "exhaustive";
    case AuditMode::Sampled: return "sampled";
    case AuditMode::Structural: return "structural";
  }
  return "?";
}

AuditMode parse_audit_mode(const std::string& s) {
  for (AuditMode m : {AuditMode::Exhaustive, AuditMode::Sampled, AuditMode::Structural})
    if (s == audit_mode_name(m)) return m;
  throw ParseError(0, "unknown audit mode '" + s + "'");
}

namespace {

std::string fixed(double v, int places) {
  std::ostringstream os;
  os.setf(std::ios::fixed);
  os.precision(places);
  os << v;
  return os.str();
}

using Tuple = std::vector<Elem>;
using Histogram = std::map<Tuple, long>;

// Rounds (1-based, global) in which each node is queried.
std::vector<std::vector<int>> rounds_by_node(const RoundPlan& plan) {
  std::vector<std::vector<int>> by(plan.code.length() + 1);
  const int per = static_cast<int>(plan.rounds.size());
  for (int g = 1; g <= query_rounds(plan); ++g)
    for (int l : plan.rounds[(g - 1) % per].pure.unite(plan.rounds[(g - 1) % per].erasure)) by[l].push_back(g);
  return by;
}

Tuple observe(const std::vector<Query>& qs, int node) {
  Tuple t;
  for (const auto& q : qs)
    if (q.node == node) t.insert(t.end(), q.coeffs.begin(), q.coeffs.end());
  return t;
}

double tv_distance(const Histogram& a, long na, const Histogram& b, long nb) {
  double sum = 0;
  for (const auto& [key, ca] : a) {
    auto it = b.find(key);
    sum += std::fabs(static_cast<double>(ca) / na - (it == b.end() ? 0.0 : static_cast<double>(it->second) / nb));
  }
  for (const auto& [key, cb] : b)
    if (!a.count(key)) sum += static_cast<double>(cb) / nb;
  return sum / 2;
}

// Query at `node` must equal its own-round masks plus the zero-mask query.
bool structural_ok(const RoundPlan& plan, int files, int node, const std::vector<int>& rounds, const PrivacyOptions& opt) {
  const int len = plan.beta * files, q = plan.code.field().order();
  const Field& field = plan.code.field();
  std::vector<std::vector<Elem>> zero(query_rounds(plan), std::vector<Elem>(len, 0));
  Rng rng(opt.seed ^ (0x9e3779b97f4a7c15ULL * static_cast<std::uint64_t>(node)));
  for (int m = 1; m <= files; ++m) {
    const Tuple base = observe(build_queries(plan, files, m, zero, opt.faults), node);
    if (static_cast<int>(base.size()) != len * static_cast<int>(rounds.size())) return false;
    for (int trial = 0; trial < 8; ++trial) {
      auto masks = zero;
      Tuple want = base;
      for (std::size_t r = 0; r < rounds.size(); ++r) {
        masks[rounds[r] - 1] = rng.elements(q, len);
        for (int j = 0; j < len; ++j) want[r * len + j] = field.add(want[r * len + j], masks[rounds[r] - 1][j]);
      }
      if (observe(build_queries(plan, files, m, masks, opt.faults), node) != want) return false;
    }
  }
  return true;
}

void summarize_privacy(AuditVerdict& v) {
  v.pass = true;
  for (const auto& e : v.nodes) {
    v.max_tv = std::max(v.max_tv, e.tv);
    v.pass = v.pass && e.identical && e.structural;
  }
  for (const auto& e : v.nodes) {
    if (!e.identical) {
      v.detail = "node " + std::to_string(e.node) + " sees different query distributions";
      break;
    }
    if (!e.structural) {
      v.detail = "node " + std::to_string(e.node) + " query is not mask plus fixed addend";
      break;
    }
  }
}

}  // namespace

AuditVerdict audit_privacy(const RoundPlan& plan, int files, AuditMode mode, const PrivacyOptions& opt) {
  if (files < 2) throw DimensionError("privacy needs at least two files");
  AuditVerdict v;
  v.check = "privacy";
  v.mode = mode;
  const int len = plan.beta * files, q = plan.code.field().order();
  const auto by = rounds_by_node(plan);
  for (int l = 1; l <= plan.code.length(); ++l) {
    NodeEvidence e;
    e.node = l;
    e.queries = static_cast<int>(by[l].size());
    e.structural = structural_ok(plan, files, l, by[l], opt);
    if (mode == AuditMode::Exhaustive) {
      const double space = std::pow(static_cast<double>(q), static_cast<double>(len) * e.queries);
      if (space > static_cast<double>(1 << 20))
        throw GuardError("exhaustive privacy audit at node " + std::to_string(l) + " needs " + fixed(space, 0) +
                         " mask assignments, limit 2^20");
      const long cases = static_cast<long>(space);
      std::vector<Histogram> hist(files);
      std::vector<std::vector<Elem>> masks(query_rounds(plan), std::vector<Elem>(len, 0));
      for (long a = 0; a < cases; ++a) {
        long rest = a;
        for (int r : by[l])
          for (int j = 0; j < len; ++j) {
            masks[r - 1][j] = static_cast<Elem>(rest % q);
            rest /= q;
          }
        for (int m = 1; m <= files; ++m) ++hist[m - 1][observe(build_queries(plan, files, m, masks, opt.faults), l)];
      }
      e.outcomes = static_cast<long>(hist[0].size());
      for (int m = 2; m <= files; ++m) {
        e.tv = std::max(e.tv, tv_distance(hist[0], cases, hist[m - 1], cases));
        e.identical = e.identical && hist[m - 1] == hist[0];
      }
      v.samples += cases;
    } else if (mode == AuditMode::Sampled) {
      auto draw = [&](int m, std::uint64_t seed) {
        Rng rng(seed);
        Histogram h;
        for (long s = 0; s < opt.samples; ++s) ++h[observe(make_queries(plan, files, m, rng, opt.faults), l)];
        return h;
      };
      const std::uint64_t base = opt.seed + 1000003ULL * static_cast<std::uint64_t>(l);
      const Histogram first = draw(1, base);
      const double null_tv = tv_distance(first, opt.samples, draw(1, base + 1), opt.samples);
      const double threshold = std::max(0.01, 3 * null_tv);
      v.threshold = std::max(v.threshold, threshold);
      e.outcomes = static_cast<long>(first.size());
      for (int m = 2; m <= files; ++m) {
        const double tv = tv_distance(first, opt.samples, draw(m, base + 1 + m), opt.samples);
        e.tv = std::max(e.tv, tv);
        e.identical = e.identical && tv < threshold;
      }
      v.samples = opt.samples;
    }
    v.nodes.push_back(e);
  }
  summarize_privacy(v);
  return v;
}

AuditVerdict audit_privacy_golden(const GoldenF2Plan& plan) {
  AuditVerdict v;
  v.check = "privacy";
  v.mode = AuditMode::Structural;
  const GoldenF2Plan other = swap_requested_file(plan);
  auto shapes = [&](const GoldenF2Plan& p, int node, bool& repeated) {
    std::multiset<std::vector<int>> out;
    std::set<std::pair<int, int>> seen;
    for (const auto& d : p.downloads) {
      if (d.node != node) continue;
      std::vector<int> shape(p.files, 0);
      for (const auto& t : d.terms) {
        ++shape[t.file - 1];
        repeated = repeated || !seen.emplace(t.file, t.stripe).second;
      }
      out.insert(shape);
    }
    return out;
  };
  for (int l = 1; l <= plan.code.length(); ++l) {
    NodeEvidence e;
    e.node = l;
    bool repeated = false;
    const auto a = shapes(plan, l, repeated), b = shapes(other, l, repeated);
    e.queries = static_cast<int>(a.size());
    e.outcomes = static_cast<long>(std::set<std::vector<int>>(a.begin(), a.end()).size());
    e.identical = a == b;
    e.structural = !repeated;
    v.nodes.push_back(e);
  }
  summarize_privacy(v);
  if (!v.pass && v.detail.find("mask") != std::string::npos) v.detail = "a node downloads the same symbol twice";
  return v;
}

namespace {

// First plan round whose exposed symbols differ from the stored ones.
std::optional<int> bad_round(const RoundPlan& plan, const std::vector<NodeStore>& nodes, const RunReport& rep) {
  const int per = static_cast<int>(plan.rounds.size());
  for (const auto& o : rep.outcomes) {
    int j = 0;
    for (int l : o.erasure) {
      if (nodes[l - 1].symbols[static_cast<std::size_t>(rep.requested - 1) * rep.beta + o.stripe - 1] != o.symbols[j])
        return (o.round - 1) % per + 1;
      ++j;
    }
  }
  return std::nullopt;
}

}  // namespace

AuditVerdict audit_recovery(const RoundPlan& plan, int files, int trials, std::uint64_t seed) {
  if (trials < 1) throw DimensionError("trials must be at least 1");
  AuditVerdict v;
  v.check = "recovery";
  v.trials = trials;
  Rng rng(seed);
  for (int t = 0; t < trials; ++t) {
    const FileStore fs = FileStore::random(plan.code.field(), files, plan.beta, plan.code.dimension(), rng);
    const auto nodes = store(plan.code, fs);
    for (int m = 1; m <= files; ++m) {
      const RunReport rep = retrieve(plan.code, nodes, plan, files, m, rng, &fs.files[m - 1]);
      ++v.samples;
      if (rep.success) continue;
      ++v.failures;
      if (!v.failing_round) {
        v.failing_round = bad_round(plan, nodes, rep);
        v.detail = "trial " + std::to_string(t + 1) + ", file " + std::to_string(m) + " decoded wrongly";
        if (v.failing_round) v.detail += "; round " + std::to_string(*v.failing_round) + " exposed wrong symbols";
      }
    }
  }
  v.pass = v.failures == 0;
  return v;
}

AuditVerdict audit_recovery_golden(const GoldenF2Plan& plan, int trials, std::uint64_t seed) {
  if (trials < 1) throw DimensionError("trials must be at least 1");
  AuditVerdict v;
  v.check = "recovery";
  v.trials = trials;
  Rng rng(seed);
  const GoldenF2Plan variants[2] = {plan, swap_requested_file(plan)};
  for (int t = 0; t < trials; ++t) {
    const FileStore fs = FileStore::random(plan.code.field(), plan.files, plan.beta, plan.code.dimension(), rng);
    const auto nodes = store(plan.code, fs);
    for (const auto& p : variants) {
      ++v.samples;
      if (!retrieve_golden(p, nodes, &fs.files[p.requested - 1]).success) {
        ++v.failures;
        if (v.detail.empty()) v.detail = "trial " + std::to_string(t + 1) + ", file " + std::to_string(p.requested) + " decoded wrongly";
      }
    }
  }
  v.pass = v.failures == 0;
  return v;
}

AuditVerdict audit_rate(const RoundPlan& plan, const Rational& expected) {
  AuditVerdict v;
  v.check = "rate";
  const int d = plan.downloads();
  const Rational measured = d ? make_rational(plan.target.size(), d) : Rational(0);
  v.pass = measured == expected;
  v.detail = "measured " + format_rational(measured) + ", expected " + format_rational(expected);
  return v;
}

std::string AuditVerdict::text() const {
  std::ostringstream os;
  os << check;
  if (check == "privacy") os << " (" << audit_mode_name(mode) << ")";
  os << ": " << (pass ? "PASS" : "FAIL");
  if (check == "privacy") {
    os << ", " << nodes.size() << " nodes";
    if (mode == AuditMode::Exhaustive) os << ", " << samples << " mask cases";
    if (mode == AuditMode::Sampled) os << ", " << samples << " samples per file, max TV " << fixed(max_tv, 4) << " < " << fixed(threshold, 4);
  } else if (check == "recovery") {
    os << ", " << samples - failures << "/" << samples << " runs exact";
  }
  if (!detail.empty()) os << "; " << detail;
  return os.str();
}

std::string AuditVerdict::json() const {
  nlohmann::ordered_json j;
  j["type"] = "audit";
  j["check"] = check;
  j["pass"] = pass;
  if (check == "privacy") {
    j["mode"] = audit_mode_name(mode);
    j["samples"] = samples;
    j["max_tv"] = max_tv;
    if (mode == AuditMode::Sampled) j["threshold"] = threshold;
    nlohmann::ordered_json ns = nlohmann::ordered_json::array();
    for (const auto& e : nodes)
      ns.push_back({{"node", e.node}, {"queries", e.queries}, {"outcomes", e.outcomes}, {"identical", e.identical},
                    {"structural", e.structural}, {"tv", e.tv}});
    j["nodes"] = ns;
  } else if (check == "recovery") {
    j["trials"] = trials;
    j["runs"] = samples;
    j["failures"] = failures;
    if (failing_round) j["failing_round"] = *failing_round;
  }
  j["detail"] = detail;
  return j.dump();
}

}  // namespace pirlab
