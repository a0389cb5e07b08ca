#pragma once

// Simulated distributed storage. Files are beta x k matrices over the code's
// field; every stripe (row) is encoded separately and node l keeps coordinate
// l of every stripe of every file in the flat order (m-1)*beta + i.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <random>
#include <vector>

#include "pirlab/lincode.hpp"
#include "pirlab/protocol.hpp"
#include "pirlab/rational.hpp"

namespace pirlab {

/// The single randomness source of a run.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : seed_(seed), engine_(seed) {}
  std::uint64_t seed() const noexcept { return seed_; }
  /// Uniform in [0, q), by rejection so the stream does not depend on the standard library.
  Elem element(int q);
  std::vector<Elem> elements(int q, int count);

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
};

struct FileStore {
  Field field = Field::binary();
  int beta = 1, k = 1;
  std::vector<Matrix> files;  ///< f matrices, beta x k

  int count() const noexcept { return static_cast<int>(files.size()); }
  static FileStore zeros(const Field& field, int f, int beta, int k);
  static FileStore random(const Field& field, int f, int beta, int k, Rng& rng);
};

struct NodeStore {
  int node = 1;
  std::vector<Elem> symbols;  ///< beta*f symbols, index (m-1)*beta + i - 1
};

/// Throws DimensionError when the record length differs from k or the files disagree in shape.
std::vector<NodeStore> store(const LinearCode& c, const FileStore& files);

/// What a node receives: only the combined coefficient vector.
struct Query {
  int round = 1;  ///< 1-based over all stripes: (stripe-1)*rounds + h
  int node = 1;
  std::vector<Elem> coeffs;
};

/// Fault injection for auditing the auditor.
struct QueryFaults {
  bool unmasked_erasure = false;  ///< erasure nodes get the bare unit addend
};

/// Queries for file m with explicit masks: masks[r] is the beta*f mask of
/// global round r, shared by every node of that round.
std::vector<Query> build_queries(const RoundPlan& plan, int files, int m, const std::vector<std::vector<Elem>>& masks,
                                 QueryFaults faults = {});
/// Number of global rounds and mask length.
int query_rounds(const RoundPlan& plan);
/// Draws the masks from rng, then calls build_queries.
std::vector<Query> make_queries(const RoundPlan& plan, int files, int m, Rng& rng, QueryFaults faults = {});
std::vector<Query> make_queries(const RoundPlan& plan, int files, int m, std::uint64_t seed, QueryFaults faults = {});

/// Inner product of the coefficients with the stored symbols. DimensionError on a length mismatch.
Elem node_respond(const Field& field, const NodeStore& ns, const Query& q);

struct Exchange {
  int round = 1, node = 1;
  std::vector<Elem> coeffs;
  Elem response = 0;
};

/// Desired symbols exposed in one round, for fault localisation.
struct RoundOutcome {
  int round = 1;   ///< global round
  int stripe = 1;
  CoordSet erasure;
  std::vector<Elem> symbols;  ///< recovered c^{(m)}_{stripe,l} for l in erasure
};

struct RunReport {
  std::uint64_t seed = 0;
  int requested = 1, files = 1, beta = 1, k = 1;
  std::vector<int> per_node;  ///< downloads per node
  int downloads = 0;
  Rational rate;              ///< beta k / downloads
  Matrix decoded;             ///< beta x k
  bool success = false;
  std::vector<Exchange> exchanges;
  std::vector<RoundOutcome> outcomes;
};

/// Runs the plan against the nodes. Masks come from a generator seeded with
/// `seed`. `expected`, when given, is compared with the decoded file.
/// The plan is not re-validated, so a corrupted plan shows up as a failed run.
RunReport retrieve(const LinearCode& c, const std::vector<NodeStore>& nodes, const RoundPlan& plan, int files, int m,
                   std::uint64_t seed, const Matrix* expected = nullptr, QueryFaults faults = {});
RunReport retrieve(const LinearCode& c, const std::vector<NodeStore>& nodes, const RoundPlan& plan, int files, int m,
                   Rng& rng, const Matrix* expected = nullptr, QueryFaults faults = {});

/// Seeded end to end: files and masks both come from one generator.
struct Simulation {
  FileStore files;
  RunReport report;
};
Simulation simulate(const RoundPlan& plan, int files, int m, std::uint64_t seed);

// --- the fixed two-file schedule --------------------------------------------------

/// One query per download: ones at the (file, stripe) positions of its terms.
std::vector<Query> golden_queries(const GoldenF2Plan& plan);
/// Downloads every sum and solves for the requested file over all f*beta*k unknowns.
RunReport retrieve_golden(const GoldenF2Plan& plan, const std::vector<NodeStore>& nodes, const Matrix* expected = nullptr);
Simulation simulate_golden(const GoldenF2Plan& plan, std::uint64_t seed);

/// JSON lines, one per exchange `{"type":"query","round","node","coeffs","response"}`,
/// then `{"type":"report",...}`.
void write_trace(std::ostream& os, const RunReport& r);

}  // namespace pirlab
