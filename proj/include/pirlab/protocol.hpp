#pragma once

// Retrieval plans. A plan is a list of rounds; in each round the nodes in the
// pure set return interference only and the nodes in the erasure set return
// interference plus one desired code symbol. Plans do not depend on the file
// contents, so one plan serves every stripe.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pirlab/lincode.hpp"
#include "pirlab/ratematrix.hpp"
#include "pirlab/rational.hpp"

namespace pirlab {

enum class Protocol { Symmetric, A, B, C };
std::string protocol_name(Protocol p);  ///< "S", "A", "B", "C"

struct Round {
  CoordSet support;  ///< coordinates of the punctured subcode used this round
  CoordSet pure;     ///< S
  CoordSet erasure;  ///< E
  LinearCode subcode;
  Matrix recon;      ///< |E| x |S|: interference at E from responses at S
  int lam_row = 0;   ///< generating row of the plan's rate matrix, 1-based; 0 if none
};

/// A round given by hand: (support, S, E).
struct RoundHint {
  CoordSet support, pure, erasure;
};

struct RoundPlan {
  LinearCode code;
  Protocol protocol = Protocol::A;
  std::vector<Round> rounds;
  CoordSet target;  ///< coordinates whose desired symbols the rounds deliver and the decoder uses
  int beta = 1;
  std::optional<RateMatrix> lam;

  int downloads() const;  ///< per stripe: sum of |S| + |E|
};

/// Builds and checks one round; throws PlanError naming the broken condition.
Round make_round(const LinearCode& c, CoordSet support, CoordSet pure, CoordSet erasure, int lam_row = 0);
/// Re-checks every round and plan-level condition. Throws PlanError.
void validate_plan(const RoundPlan& p);

/// Every node answers in each used row: S = chi(lambda_i), E = its complement.
RoundPlan build_plan_symmetric(const LinearCode& c, const RateMatrix& lam);
/// S shrinks to the row's information-set certificate, E to the targets still missing.
RoundPlan build_plan_A(const LinearCode& c, const RateMatrix& lam);
/// Protocol A on each part of the finest direct sum; every part must be certified.
RoundPlan build_plan_B(const LinearCode& c);
/// With hints: checks and assembles them. Without: searches target information
/// sets and the assignment of each target to a row whose complement holds it,
/// taking for every round the smallest S inside the row that determines E.
RoundPlan build_plan_C(const LinearCode& c, const RateMatrix& lam, const std::vector<RoundHint>& hints = {});

struct PlanCost {
  int downloads = 0;
  Rational rate;  ///< |target| / downloads
};
PlanCost plan_cost(const RoundPlan& p);

/// One line per round: "round i: support={..}, pure={..}, erasure={..}".
std::string format_plan(const RoundPlan& p);
std::vector<RoundHint> parse_plan_hints(std::string_view text);

/// Interference symbol I_{(h-1)k+h'} of round h and message position h'.
inline int interference_index(int round, int position, int k) { return (round - 1) * k + position; }

/// Symbolic response of every node in every round, e.g. "I_3+I_5" or
/// "I_1+x^{(m)}_{1,1}"; empty when the node is not queried in that round.
std::vector<std::vector<std::string>> response_grid(const RoundPlan& p);
std::string format_response_grid(const RoundPlan& p);

// --- fixed two-file schedule for the [5,3] code ---------------------------------

struct GoldenTerm {
  int file = 1;    ///< 1-based
  int stripe = 1;  ///< 1-based
  friend bool operator==(const GoldenTerm&, const GoldenTerm&) = default;
};

/// One downloaded sum: node l returns the sum of its code symbols y^{(file)}_{stripe,l}.
struct GoldenDownload {
  int node = 1;
  int repetition = 1;
  int slot = 1;  ///< row within the repetition, 1..5
  std::vector<GoldenTerm> terms;
};

struct GoldenF2Plan {
  LinearCode code;
  int files = 2;
  int beta = 9;
  int requested = 1;
  bool pruned = false;
  std::vector<GoldenDownload> downloads;

  int total() const { return static_cast<int>(downloads.size()); }
  /// beta k / downloads
  Rational rate() const;
};

/// The 50-download schedule retrieving file 1 (identity interleaving), or the
/// 45-download variant without node 5's five redundant sums.
GoldenF2Plan golden_f2_plan_5_3(bool pruned = false);
/// Same schedule retrieving file 2: the roles of the two files are exchanged.
GoldenF2Plan swap_requested_file(const GoldenF2Plan& p);

}  // namespace pirlab
