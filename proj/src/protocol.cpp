#include "pirlab/protocol.hpp"

#include <algorithm>
#include <map>
#include <sstream>

#include "pirlab/corpus.hpp"
#include "pirlab/error.hpp"

namespace pirlab {

std::string protocol_name(Protocol p) {
  switch (p) {
    case Protocol::Symmetric: return "S";
    case Protocol::A: return "A";
    case Protocol::B: return "B";
    case Protocol::C: return "C";
  }
  return "?";
}

int RoundPlan::downloads() const {
  int d = 0;
  for (const auto& r : rounds) d += r.pure.size() + r.erasure.size();
  return d;
}

Round make_round(const LinearCode& c, CoordSet support, CoordSet pure, CoordSet erasure, int lam_row) {
  if (support.empty()) throw PlanError("round has an empty support");
  if (support.max() > c.length()) throw PlanError("round support " + support.str() + " exceeds the code length");
  if (!pure.subset_of(support) || !erasure.subset_of(support))
    throw PlanError("pure " + pure.str() + " and erasure " + erasure.str() + " must lie in the support " + support.str());
  if (!pure.disjoint(erasure)) throw PlanError("pure " + pure.str() + " and erasure " + erasure.str() + " overlap");
  if (c.rank_of(pure) != c.rank_of(support))
    throw PlanError("pure set " + pure.str() + " has rank " + std::to_string(c.rank_of(pure)) + " < rank " +
                    std::to_string(c.rank_of(support)) + " of the support " + support.str());
  auto det = determines(c, pure, erasure);
  if (!det.determined) throw PlanError("pure set " + pure.str() + " does not determine erasure " + erasure.str());
  LinearCode sub = puncture(c, support);
  return Round{std::move(support), std::move(pure), std::move(erasure), std::move(sub), std::move(det.recon), lam_row};
}

void validate_plan(const RoundPlan& p) {
  if (p.rounds.empty()) throw PlanError("plan has no rounds");
  if (p.beta < 1) throw PlanError("plan needs beta >= 1");
  CoordSet delivered;
  for (std::size_t i = 0; i < p.rounds.size(); ++i) {
    const Round& r = p.rounds[i];
    const std::string where = "round " + std::to_string(i + 1) + ": ";
    [[maybe_unused]] const Round fresh = [&] {
      try {
        return make_round(p.code, r.support, r.pure, r.erasure, r.lam_row);
      } catch (const PlanError& e) {
        throw PlanError(where + e.what());
      }
    }();
    // The stored reconstruction must actually map S-symbols to E-symbols.
    const Matrix lhs = mat_mul(p.code.field(), r.recon, p.code.restrict(r.pure).transpose());
    if (r.recon.rows() != r.erasure.size() || r.recon.cols() != r.pure.size() ||
        !(lhs == p.code.restrict(r.erasure).transpose()))
      throw PlanError(where + "reconstruction matrix does not rebuild the erasure symbols");
    if (r.lam_row > 0) {
      if (!p.lam || r.lam_row > p.lam->nu) throw PlanError(where + "refers to a missing rate-matrix row");
      const CoordSet& chi = p.lam->rows[r.lam_row - 1];
      if (!r.erasure.disjoint(chi))
        throw PlanError(where + "erasure " + r.erasure.str() + " meets chi(lambda_" + std::to_string(r.lam_row) + ")");
      if (!r.pure.subset_of(chi))
        throw PlanError(where + "pure " + r.pure.str() + " leaves chi(lambda_" + std::to_string(r.lam_row) + ")");
    }
    delivered = delivered.unite(r.erasure);
  }
  if (!p.target.subset_of(delivered))
    throw PlanError("erasure sets " + delivered.str() + " do not cover the target " + p.target.str());
  if (!first_information_set_within(p.code, p.target))
    throw PlanError("target " + p.target.str() + " holds no information set");
}

namespace {

std::vector<CoordSet> complements(const RateMatrix& lam) {
  std::vector<CoordSet> out;
  for (const auto& r : lam.rows) out.push_back(r.complement(lam.n));
  return out;
}

void check_lam(const LinearCode& c, const RateMatrix& lam) {
  if (lam.n != c.length()) throw PlanError("rate matrix length differs from the code length");
  auto v = validate_rate_matrix(c, lam.as_matrix());
  if (auto* bad = std::get_if<Violation>(&v)) throw PlanError("invalid rate matrix: " + bad->what);
}

RoundPlan greedy_rows(const LinearCode& c, const RateMatrix& lam, Protocol kind) {
  check_lam(c, lam);
  RoundPlan p{c, kind, {}, *first_information_set_within(c, c.all()), 1, lam};
  const auto comp = complements(lam);
  CoordSet remaining = p.target;
  for (int i = 0; i < lam.nu && !remaining.empty(); ++i) {
    const CoordSet part = comp[i].intersect(remaining);
    if (part.empty()) continue;
    if (kind == Protocol::Symmetric)
      p.rounds.push_back(make_round(c, c.all(), lam.rows[i], comp[i], i + 1));
    else
      p.rounds.push_back(make_round(c, c.all(), lam.certificates[i], part, i + 1));
    remaining = remaining.minus(part);
  }
  if (!remaining.empty())
    throw PlanError("complements of the rate-matrix rows miss target coordinates " + remaining.str());
  validate_plan(p);
  return p;
}

}  // namespace

RoundPlan build_plan_symmetric(const LinearCode& c, const RateMatrix& lam) {
  return greedy_rows(c, lam, Protocol::Symmetric);
}

RoundPlan build_plan_A(const LinearCode& c, const RateMatrix& lam) { return greedy_rows(c, lam, Protocol::A); }

RoundPlan build_plan_B(const LinearCode& c) {
  const DirectSumDecomposition d = finest_direct_sum(c);
  if (d.trivial()) throw PlanError("code is indecomposable; Protocol B needs a direct sum");
  RoundPlan p{c, Protocol::B, {}, {}, 1, std::nullopt};
  for (const auto& part : d.parts) {
    if (part.dimension() == 0) continue;
    if (part.dimension() == part.length())
      throw PlanError("part " + part.coords.str() + " is a [" + std::to_string(part.length()) + "," +
                      std::to_string(part.dimension()) + "] code without redundancy");
    const auto cert = is_mds_pir_capacity_achieving(part.subcode);
    if (!cert.achieving) throw PlanError("part " + part.coords.str() + " is not MDS-PIR capacity-achieving");
    const RoundPlan sub = build_plan_A(part.subcode, *cert.matrix);
    for (const auto& r : sub.rounds) {
      p.rounds.push_back(make_round(c, part.subcode.to_parent(r.support), part.subcode.to_parent(r.pure),
                                    part.subcode.to_parent(r.erasure)));
    }
    p.target = p.target.unite(part.subcode.to_parent(sub.target));
  }
  validate_plan(p);
  return p;
}

namespace {

constexpr long kAssignmentBudget = 200'000;

// Smallest subset of chi (by size, then lexicographic) that determines e.
class PureSetFinder {
 public:
  explicit PureSetFinder(const LinearCode& c) : c_(c) {}

  const CoordSet& find(int row, const CoordSet& chi, const CoordSet& e) {
    auto key = std::make_pair(row, e.coords());
    auto it = cache_.find(key);
    if (it != cache_.end()) return it->second;
    return cache_.emplace(std::move(key), search(chi, e)).first->second;
  }

 private:
  bool determined(const std::vector<int>& s, const CoordSet& e) const {
    std::vector<int> both = s;
    both.insert(both.end(), e.begin(), e.end());
    return c_.rank_of(CoordSet(s)) == c_.rank_of(CoordSet(std::move(both)));
  }

  CoordSet search(const CoordSet& chi, const CoordSet& e) const {
    const std::vector<int>& pool = chi.coords();
    const int m = static_cast<int>(pool.size());
    for (int size = 0; size <= m; ++size) {
      std::vector<int> idx(size);
      for (int i = 0; i < size; ++i) idx[i] = i;
      while (true) {
        std::vector<int> s;
        for (int i : idx) s.push_back(pool[i]);
        if (determined(s, e)) return CoordSet(std::move(s));
        int pos = size - 1;
        while (pos >= 0 && idx[pos] == m - size + pos) --pos;
        if (pos < 0) break;
        ++idx[pos];
        for (int i = pos + 1; i < size; ++i) idx[i] = idx[i - 1] + 1;
      }
    }
    throw PlanError("row support " + chi.str() + " does not determine " + e.str());
  }

  const LinearCode& c_;
  std::map<std::pair<int, std::vector<int>>, CoordSet> cache_;
};

struct Assignment {
  CoordSet target;
  std::vector<int> row_of;  // per target coordinate, 0-based row
  int cost = 0;
};

}  // namespace

RoundPlan build_plan_C(const LinearCode& c, const RateMatrix& lam, const std::vector<RoundHint>& hints) {
  check_lam(c, lam);
  RoundPlan p{c, Protocol::C, {}, {}, 1, lam};

  if (!hints.empty()) {
    CoordSet delivered;
    for (std::size_t h = 0; h < hints.size(); ++h) {
      const RoundHint& hint = hints[h];
      int row = 0;
      for (int i = 0; i < lam.nu && !row; ++i)
        if (hint.pure.subset_of(lam.rows[i]) && hint.erasure.disjoint(lam.rows[i])) row = i + 1;
      if (!row)
        throw PlanError("hint round " + std::to_string(h + 1) + ": no rate-matrix row contains pure " + hint.pure.str() +
                        " while missing erasure " + hint.erasure.str());
      try {
        p.rounds.push_back(make_round(c, hint.support, hint.pure, hint.erasure, row));
      } catch (const PlanError& e) {
        throw PlanError("hint round " + std::to_string(h + 1) + ": " + e.what());
      }
      delivered = delivered.unite(hint.erasure);
    }
    auto target = first_information_set_within(c, delivered);
    if (!target) throw PlanError("hint erasure sets " + delivered.str() + " hold no information set");
    p.target = *target;
    validate_plan(p);
    return p;
  }

  const auto comp = complements(lam);
  CoordSet reachable;
  for (const auto& s : comp) reachable = reachable.unite(s);

  std::vector<CoordSet> targets;
  if (c.length() <= 24) {
    for (auto& t : enumerate_information_sets(c))
      if (t.subset_of(reachable)) targets.push_back(std::move(t));
  } else if (auto t = first_information_set_within(c, reachable)) {
    targets.push_back(*t);
  }
  if (targets.empty()) throw PlanError("complements of the rate-matrix rows hold no information set");

  auto options_for = [&](const CoordSet& t) {
    std::vector<std::vector<int>> opts;
    for (int x : t) {
      std::vector<int> rows;
      for (int i = 0; i < lam.nu; ++i)
        if (comp[i].contains(x)) rows.push_back(i);
      opts.push_back(std::move(rows));
    }
    return opts;
  };
  long total = 0;
  for (const auto& t : targets) {
    long combos = 1;
    for (const auto& o : options_for(t)) combos = std::min(kAssignmentBudget + 1, combos * static_cast<long>(o.size()));
    total = std::min(kAssignmentBudget + 1, total + combos);
  }
  if (total > kAssignmentBudget) targets.resize(1);

  PureSetFinder finder(c);
  auto evaluate = [&](const CoordSet& t, const std::vector<int>& row_of) {
    std::map<int, std::vector<int>> groups;
    for (int i = 0; i < t.size(); ++i) groups[row_of[i]].push_back(t.coords()[i]);
    int cost = 0;
    for (auto& [row, e] : groups) {
      const CoordSet es(e);
      cost += es.size() + finder.find(row, lam.rows[row], es).size();
    }
    return cost;
  };

  std::optional<Assignment> best;
  for (const auto& t : targets) {
    const auto opts = options_for(t);
    long combos = 1;
    for (const auto& o : opts) combos = std::min(kAssignmentBudget + 1, combos * static_cast<long>(o.size()));
    std::vector<int> pick(t.size(), 0);
    if (combos > kAssignmentBudget) {
      // Greedy fallback: every target goes to the first row that can take it.
      std::vector<int> row_of;
      for (const auto& o : opts) row_of.push_back(o.front());
      const int cost = evaluate(t, row_of);
      if (!best || cost < best->cost) best = Assignment{t, row_of, cost};
      continue;
    }
    while (true) {
      std::vector<int> row_of;
      for (int i = 0; i < t.size(); ++i) row_of.push_back(opts[i][pick[i]]);
      const int cost = evaluate(t, row_of);
      if (!best || cost < best->cost) best = Assignment{t, row_of, cost};
      int pos = t.size() - 1;
      while (pos >= 0 && ++pick[pos] == static_cast<int>(opts[pos].size())) pick[pos--] = 0;
      if (pos < 0) break;
    }
  }

  std::map<int, std::vector<int>> groups;
  for (int i = 0; i < best->target.size(); ++i) groups[best->row_of[i]].push_back(best->target.coords()[i]);
  for (auto& [row, e] : groups) {
    const CoordSet es(e);
    const CoordSet s = finder.find(row, lam.rows[row], es);
    p.rounds.push_back(make_round(c, s.unite(es), s, es, row + 1));
  }
  p.target = best->target;
  validate_plan(p);
  return p;
}

PlanCost plan_cost(const RoundPlan& p) {
  validate_plan(p);
  const int d = p.downloads();
  return PlanCost{d, make_rational(p.target.size(), d)};
}

std::string format_plan(const RoundPlan& p) {
  std::ostringstream os;
  os << "# protocol " << protocol_name(p.protocol) << ", target " << p.target.str() << ", " << p.downloads()
     << " downloads per stripe\n";
  for (std::size_t i = 0; i < p.rounds.size(); ++i) {
    const auto& r = p.rounds[i];
    os << "round " << i + 1 << ": support=" << r.support.str() << ", pure=" << r.pure.str()
       << ", erasure=" << r.erasure.str() << "\n";
  }
  return os.str();
}

std::vector<RoundHint> parse_plan_hints(std::string_view text) {
  std::vector<RoundHint> out;
  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const std::size_t colon = line.find(':');
    int index = 0;
    if (colon == std::string::npos || std::sscanf(line.c_str(), " round %d", &index) != 1)
      throw ParseError(lineno, "expected 'round i: support={..}, pure={..}, erasure={..}'");
    if (index != static_cast<int>(out.size()) + 1)
      throw ParseError(lineno, "round " + std::to_string(index) + " out of order");
    auto field = [&](const char* key) {
      const std::string k = std::string(key) + "=";
      const std::size_t at = line.find(k, colon);
      if (at == std::string::npos) throw ParseError(lineno, std::string("missing ") + key);
      const std::size_t open = line.find('{', at), close = line.find('}', at);
      if (open != at + k.size() || close == std::string::npos) throw ParseError(lineno, std::string("bad ") + key + " set");
      try {
        return CoordSet::parse(line.substr(open, close - open + 1));
      } catch (const Error& e) {
        throw ParseError(lineno, e.what());
      }
    };
    out.push_back(RoundHint{field("support"), field("pure"), field("erasure")});
  }
  return out;
}

std::vector<std::vector<std::string>> response_grid(const RoundPlan& p) {
  const LinearCode& c = p.code;
  const int k = c.dimension(), n = c.length();
  std::vector<std::vector<std::string>> grid;
  for (std::size_t h = 0; h < p.rounds.size(); ++h) {
    const Round& r = p.rounds[h];
    std::vector<std::string> row(n);
    for (int l = 1; l <= n; ++l) {
      const bool pure = r.pure.contains(l), erased = r.erasure.contains(l);
      if (!pure && !erased) continue;
      std::string cell;
      int unit = 0, nonzero = 0;
      for (int i = 0; i < k; ++i) {
        const Elem g = c.generator()(i, l - 1);
        if (!g) continue;
        ++nonzero;
        unit = (g == 1) ? i + 1 : 0;
        if (!cell.empty()) cell += "+";
        if (g != 1) cell += std::to_string(g);
        cell += "I_" + std::to_string(interference_index(static_cast<int>(h) + 1, i + 1, k));
      }
      if (erased) {
        if (!cell.empty()) cell += "+";
        cell += nonzero == 1 && unit ? "x^{(m)}_{1," + std::to_string(unit) + "}" : "c^{(m)}_{1," + std::to_string(l) + "}";
      }
      row[l - 1] = cell.empty() ? "0" : cell;
    }
    grid.push_back(std::move(row));
  }
  return grid;
}

std::string format_response_grid(const RoundPlan& p) {
  const auto grid = response_grid(p);
  const int n = p.code.length();
  std::vector<std::size_t> width(n + 1, 0);
  std::vector<std::vector<std::string>> cells;
  std::vector<std::string> head{"Subresponse"};
  for (int l = 1; l <= n; ++l) head.push_back("Node " + std::to_string(l));
  cells.push_back(head);
  for (std::size_t h = 0; h < grid.size(); ++h) {
    std::vector<std::string> row{"Subresponse " + std::to_string(h + 1)};
    row.insert(row.end(), grid[h].begin(), grid[h].end());
    cells.push_back(std::move(row));
  }
  for (const auto& row : cells)
    for (int j = 0; j <= n; ++j) width[j] = std::max(width[j], row[j].size());
  std::ostringstream os;
  for (const auto& row : cells) {
    std::string line;
    for (int j = 0; j <= n; ++j) {
      std::string cell = row[j];
      if (j < n) cell.resize(width[j], ' ');
      line += cell;
      if (j < n) line += " | ";
    }
    while (!line.empty() && line.back() == ' ') line.pop_back();
    os << line << "\n";
  }
  return os.str();
}

// --- golden schedule ---------------------------------------------------------

Rational GoldenF2Plan::rate() const { return make_rational(beta * code.dimension(), total()); }

GoldenF2Plan golden_f2_plan_5_3(bool pruned) {
  using T = std::vector<GoldenTerm>;
  // rows[rep][slot][node]
  const std::vector<std::vector<std::vector<T>>> rows = {
      {
          {{{1, 3}}, {{1, 1}}, {{1, 1}}, {{1, 1}}, {{1, 1}}},
          {{{1, 4}}, {{1, 2}}, {{1, 2}}, {{1, 2}}, {{1, 2}}},
          {{{2, 2}}, {{2, 1}}, {{2, 1}}, {{2, 1}}, {{2, 1}}},
          {{{2, 3}}, {{2, 3}}, {{2, 3}}, {{2, 2}}, {{2, 2}}},
          {{{1, 8}, {2, 1}}, {{1, 7}, {2, 2}}, {{1, 7}, {2, 2}}, {{1, 7}, {2, 3}}, {{1, 7}, {2, 3}}},
      },
      {
          {{{1, 5}}, {{1, 5}}, {{1, 5}}, {{1, 3}}, {{1, 3}}},
          {{{1, 6}}, {{1, 6}}, {{1, 6}}, {{1, 4}}, {{1, 4}}},
          {{{2, 5}}, {{2, 4}}, {{2, 4}}, {{2, 4}}, {{2, 4}}},
          {{{2, 6}}, {{2, 6}}, {{2, 6}}, {{2, 5}}, {{2, 5}}},
          {{{1, 9}, {2, 4}}, {{1, 9}, {2, 5}}, {{1, 9}, {2, 5}}, {{1, 8}, {2, 6}}, {{1, 8}, {2, 6}}},
      },
  };
  // Node 5's sums that are not needed for file 1: (repetition, slot).
  const std::vector<std::pair<int, int>> dropped = {{1, 1}, {1, 2}, {1, 3}, {1, 5}, {2, 3}};

  GoldenF2Plan p{*corpus_code("C1"), 2, 9, 1, pruned, {}};
  for (int rep = 1; rep <= 2; ++rep)
    for (int slot = 1; slot <= 5; ++slot)
      for (int node = 1; node <= 5; ++node) {
        if (pruned && node == 5 &&
            std::find(dropped.begin(), dropped.end(), std::make_pair(rep, slot)) != dropped.end())
          continue;
        p.downloads.push_back(GoldenDownload{node, rep, slot, rows[rep - 1][slot - 1][node - 1]});
      }
  return p;
}

GoldenF2Plan swap_requested_file(const GoldenF2Plan& p) {
  GoldenF2Plan q = p;
  q.requested = 3 - p.requested;
  for (auto& d : q.downloads)
    for (auto& t : d.terms) t.file = 3 - t.file;
  return q;
}

}  // namespace pirlab
