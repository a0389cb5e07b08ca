#include "pirlab/dss.hpp"

#include <limits>
#include <ostream>

#include "json.hpp"

#include "pirlab/error.hpp"

namespace pirlab {

Elem Rng::element(int q) {
  const std::uint64_t max = std::numeric_limits<std::uint64_t>::max();
  const std::uint64_t limit = max - (max % static_cast<std::uint64_t>(q) + 1) % static_cast<std::uint64_t>(q);
  std::uint64_t x;
  do x = engine_();
  while (x > limit);
  return static_cast<Elem>(x % static_cast<std::uint64_t>(q));
}

std::vector<Elem> Rng::elements(int q, int count) {
  std::vector<Elem> v(static_cast<std::size_t>(count));
  for (auto& e : v) e = element(q);
  return v;
}

FileStore FileStore::zeros(const Field& field, int f, int beta, int k) {
  if (f < 1 || beta < 1 || k < 1) throw DimensionError("file store needs f, beta, k >= 1");
  return FileStore{field, beta, k, std::vector<Matrix>(f, Matrix(beta, k))};
}

FileStore FileStore::random(const Field& field, int f, int beta, int k, Rng& rng) {
  FileStore s = zeros(field, f, beta, k);
  for (auto& x : s.files) x = Matrix(beta, k, rng.elements(field.order(), beta * k));
  return s;
}

std::vector<NodeStore> store(const LinearCode& c, const FileStore& fs) {
  if (fs.k != c.dimension())
    throw DimensionError("files have record length " + std::to_string(fs.k) + ", code dimension is " +
                         std::to_string(c.dimension()));
  if (!(fs.field == c.field())) throw DimensionError("files and code use different fields");
  const int n = c.length(), beta = fs.beta;
  std::vector<NodeStore> nodes(n);
  for (int l = 0; l < n; ++l) {
    nodes[l].node = l + 1;
    nodes[l].symbols.assign(static_cast<std::size_t>(beta) * fs.count(), 0);
  }
  for (int m = 0; m < fs.count(); ++m) {
    const Matrix& x = fs.files[m];
    if (x.rows() != beta || x.cols() != fs.k) throw DimensionError("file " + std::to_string(m + 1) + " has the wrong shape");
    const Matrix cw = mat_mul(c.field(), x, c.generator());
    for (int i = 0; i < beta; ++i)
      for (int l = 0; l < n; ++l) nodes[l].symbols[static_cast<std::size_t>(m) * beta + i] = cw(i, l);
  }
  return nodes;
}

int query_rounds(const RoundPlan& plan) { return plan.beta * static_cast<int>(plan.rounds.size()); }

std::vector<Query> build_queries(const RoundPlan& plan, int files, int m, const std::vector<std::vector<Elem>>& masks,
                                 QueryFaults faults) {
  if (files < 1) throw DimensionError("need at least one file");
  if (m < 1 || m > files) throw DimensionError("requested file " + std::to_string(m) + " not in 1.." + std::to_string(files));
  const int len = plan.beta * files, per = static_cast<int>(plan.rounds.size());
  if (static_cast<int>(masks.size()) != query_rounds(plan)) throw DimensionError("one mask per round expected");
  const Field& field = plan.code.field();
  std::vector<Query> out;
  for (int i = 1; i <= plan.beta; ++i)
    for (int h = 1; h <= per; ++h) {
      const int g = (i - 1) * per + h;
      const auto& u = masks[g - 1];
      if (static_cast<int>(u.size()) != len) throw DimensionError("mask length must be beta*f");
      const Round& r = plan.rounds[h - 1];
      for (int l : r.pure.unite(r.erasure)) {
        Query q{g, l, u};
        if (r.erasure.contains(l)) {
          if (faults.unmasked_erasure) std::fill(q.coeffs.begin(), q.coeffs.end(), 0);
          auto& a = q.coeffs[static_cast<std::size_t>(m - 1) * plan.beta + i - 1];
          a = field.add(a, 1);
        }
        out.push_back(std::move(q));
      }
    }
  return out;
}

std::vector<Query> make_queries(const RoundPlan& plan, int files, int m, Rng& rng, QueryFaults faults) {
  std::vector<std::vector<Elem>> masks;
  for (int g = 0; g < query_rounds(plan); ++g) masks.push_back(rng.elements(plan.code.field().order(), plan.beta * files));
  return build_queries(plan, files, m, masks, faults);
}

std::vector<Query> make_queries(const RoundPlan& plan, int files, int m, std::uint64_t seed, QueryFaults faults) {
  Rng rng(seed);
  return make_queries(plan, files, m, rng, faults);
}

Elem node_respond(const Field& field, const NodeStore& ns, const Query& q) {
  if (q.coeffs.size() != ns.symbols.size())
    throw DimensionError("query has " + std::to_string(q.coeffs.size()) + " coefficients, node " +
                         std::to_string(ns.node) + " stores " + std::to_string(ns.symbols.size()) + " symbols");
  return dot(field, q.coeffs, ns.symbols);
}

namespace {

RunReport start_report(const LinearCode& c, int files, int m, int beta, std::uint64_t seed) {
  RunReport rep;
  rep.seed = seed;
  rep.requested = m;
  rep.files = files;
  rep.beta = beta;
  rep.k = c.dimension();
  rep.per_node.assign(c.length(), 0);
  rep.decoded = Matrix(beta, c.dimension());
  return rep;
}

void exchange(RunReport& rep, const Field& field, const std::vector<NodeStore>& nodes, Query q) {
  if (q.node < 1 || q.node > static_cast<int>(nodes.size())) throw DimensionError("query for unknown node");
  const Elem a = node_respond(field, nodes[q.node - 1], q);
  ++rep.per_node[q.node - 1];
  ++rep.downloads;
  rep.exchanges.push_back(Exchange{q.round, q.node, std::move(q.coeffs), a});
}

void finish(RunReport& rep, const Matrix* expected) {
  rep.rate = rep.downloads ? make_rational(static_cast<long>(rep.beta) * rep.k, rep.downloads) : Rational(0);
  rep.success = expected ? rep.decoded == *expected : true;
}

}  // namespace

RunReport retrieve(const LinearCode& c, const std::vector<NodeStore>& nodes, const RoundPlan& plan, int files, int m,
                   std::uint64_t seed, const Matrix* expected, QueryFaults faults) {
  Rng rng(seed);
  return retrieve(c, nodes, plan, files, m, rng, expected, faults);
}

RunReport retrieve(const LinearCode& c, const std::vector<NodeStore>& nodes, const RoundPlan& plan, int files, int m,
                   Rng& rng, const Matrix* expected, QueryFaults faults) {
  if (static_cast<int>(nodes.size()) != c.length()) throw DimensionError("one node store per coordinate expected");
  const Field& field = c.field();
  RunReport rep = start_report(c, files, m, plan.beta, rng.seed());
  auto queries = make_queries(plan, files, m, rng, faults);

  const int per = static_cast<int>(plan.rounds.size());
  // symbols[i][l-1]: recovered c^{(m)}_{i,l}
  std::vector<std::vector<std::optional<Elem>>> symbols(plan.beta, std::vector<std::optional<Elem>>(c.length()));
  std::size_t next = 0;
  for (int g = 1; g <= query_rounds(plan); ++g) {
    const Round& r = plan.rounds[(g - 1) % per];
    const int stripe = (g - 1) / per + 1;
    std::vector<Elem> at(c.length() + 1, 0);
    for (; next < queries.size() && queries[next].round == g; ++next) {
      exchange(rep, field, nodes, queries[next]);
      at[rep.exchanges.back().node] = rep.exchanges.back().response;
    }
    std::vector<Elem> pure_resp;
    for (int l : r.pure) pure_resp.push_back(at[l]);
    RoundOutcome out{g, stripe, r.erasure, {}};
    int e = 0;
    for (int l : r.erasure) {
      Elem w = 0;
      for (int s = 0; s < r.pure.size(); ++s) w = field.add(w, field.mul(r.recon(e, s), pure_resp[s]));
      const Elem y = field.sub(at[l], w);
      out.symbols.push_back(y);
      symbols[stripe - 1][l - 1] = y;
      ++e;
    }
    rep.outcomes.push_back(std::move(out));
  }

  auto info = first_information_set_within(c, plan.target);
  if (!info) throw PlanError("target " + plan.target.str() + " holds no information set");
  auto inv = mat_inverse(field, c.restrict(*info));
  bool complete = true;
  for (int i = 0; i < plan.beta; ++i) {
    std::vector<Elem> ci;
    for (int l : *info) {
      complete = complete && symbols[i][l - 1].has_value();
      ci.push_back(symbols[i][l - 1].value_or(0));
    }
    const auto x = vec_mat_mul(field, ci, *inv);
    for (int h = 0; h < c.dimension(); ++h) rep.decoded(i, h) = x[h];
  }
  finish(rep, expected);
  rep.success = rep.success && complete;
  return rep;
}

Simulation simulate(const RoundPlan& plan, int files, int m, std::uint64_t seed) {
  Rng rng(seed);
  Simulation sim{FileStore::random(plan.code.field(), files, plan.beta, plan.code.dimension(), rng), {}};
  const auto nodes = store(plan.code, sim.files);
  sim.report = retrieve(plan.code, nodes, plan, files, m, rng, &sim.files.files[m - 1]);
  return sim;
}

std::vector<Query> golden_queries(const GoldenF2Plan& plan) {
  std::vector<Query> out;
  for (const auto& d : plan.downloads) {
    Query q{(d.repetition - 1) * 5 + d.slot, d.node, std::vector<Elem>(static_cast<std::size_t>(plan.files) * plan.beta, 0)};
    for (const auto& t : d.terms) q.coeffs[static_cast<std::size_t>(t.file - 1) * plan.beta + t.stripe - 1] = 1;
    out.push_back(std::move(q));
  }
  return out;
}

RunReport retrieve_golden(const GoldenF2Plan& plan, const std::vector<NodeStore>& nodes, const Matrix* expected) {
  const LinearCode& c = plan.code;
  const Field& field = c.field();
  const int k = c.dimension(), beta = plan.beta;
  RunReport rep = start_report(c, plan.files, plan.requested, beta, 0);
  for (auto& q : golden_queries(plan)) exchange(rep, field, nodes, std::move(q));

  // Unknown ((file-1)*beta + stripe-1)*k + h-1 is x^{(file)}_{stripe,h}.
  const int unknowns = plan.files * beta * k, d = rep.downloads;
  Matrix at(unknowns, d);
  for (int j = 0; j < d; ++j)
    for (const auto& t : plan.downloads[j].terms)
      for (int h = 0; h < k; ++h) {
        Elem& cell = at(((t.file - 1) * beta + t.stripe - 1) * k + h, j);
        cell = field.add(cell, c.generator()(h, plan.downloads[j].node - 1));
      }
  Matrix want(unknowns, beta * k);
  for (int u = 0; u < beta * k; ++u) want((plan.requested - 1) * beta * k + u, u) = 1;
  auto w = mat_solve(field, at, want);
  if (w) {
    std::vector<Elem> y;
    for (const auto& e : rep.exchanges) y.push_back(e.response);
    const auto x = vec_mat_mul(field, y, *w);
    for (int u = 0; u < beta * k; ++u) rep.decoded(u / k, u % k) = x[u];
  }
  finish(rep, expected);
  rep.success = rep.success && w.has_value();
  return rep;
}

Simulation simulate_golden(const GoldenF2Plan& plan, std::uint64_t seed) {
  Rng rng(seed);
  Simulation sim{FileStore::random(plan.code.field(), plan.files, plan.beta, plan.code.dimension(), rng), {}};
  sim.report = retrieve_golden(plan, store(plan.code, sim.files), &sim.files.files[plan.requested - 1]);
  sim.report.seed = seed;
  return sim;
}

void write_trace(std::ostream& os, const RunReport& r) {
  using nlohmann::ordered_json;
  for (const auto& e : r.exchanges) {
    ordered_json j;
    j["type"] = "query";
    j["round"] = e.round;
    j["node"] = e.node;
    j["coeffs"] = std::vector<int>(e.coeffs.begin(), e.coeffs.end());
    j["response"] = static_cast<int>(e.response);
    os << j.dump() << "\n";
  }
  ordered_json j;
  j["type"] = "report";
  j["seed"] = r.seed;
  j["requested"] = r.requested;
  j["files"] = r.files;
  j["beta"] = r.beta;
  j["k"] = r.k;
  j["per_node"] = r.per_node;
  j["downloads"] = r.downloads;
  j["rate"] = format_fraction(r.rate);
  j["success"] = r.success;
  ordered_json rows = ordered_json::array();
  for (int i = 0; i < r.decoded.rows(); ++i) {
    std::vector<int> row;
    for (Elem e : r.decoded.row(i)) row.push_back(e);
    rows.push_back(row);
  }
  j["decoded"] = rows;
  os << j.dump() << "\n";
}

}  // namespace pirlab
