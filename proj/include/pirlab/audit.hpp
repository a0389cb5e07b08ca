#pragma once

// Checks of the two retrieval requirements and of the download accounting.
//
// Privacy is judged on what a node observes: the tuple of coefficient
// vectors it receives during one run. Queries never depend on file contents,
// so comparing their distributions under different requested files is the
// whole test; file contents may be taken as known to the node.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pirlab/dss.hpp"
#include "pirlab/protocol.hpp"

namespace pirlab {

enum class AuditMode { Exhaustive, Sampled, Structural };
std::string audit_mode_name(AuditMode m);
AuditMode parse_audit_mode(const std::string& s);  ///< ParseError on unknown names

struct NodeEvidence {
  int node = 1;
  int queries = 0;         ///< queries per run
  long outcomes = 0;       ///< distinct query tuples seen under file 1
  bool identical = true;   ///< distributions agree for every requested file
  bool structural = true;  ///< query = own-round masks + fixed addend
  double tv = 0;           ///< largest total-variation distance to file 1
};

struct AuditVerdict {
  std::string check;  ///< "privacy", "recovery" or "rate"
  AuditMode mode = AuditMode::Exhaustive;
  bool pass = false;
  std::vector<NodeEvidence> nodes;
  double max_tv = 0, threshold = 0;
  long samples = 0;
  int trials = 0, failures = 0;
  std::optional<int> failing_round;  ///< plan round whose exposed symbols were wrong
  std::string detail;

  std::string text() const;
  std::string json() const;  ///< one JSON object, `"type":"audit"` first
};

struct PrivacyOptions {
  long samples = 100000;
  std::uint64_t seed = 1;
  QueryFaults faults;
};

/// Exhaustive mode enumerates, per node, every mask of the rounds that node
/// takes part in (GuardError above 2^20 cases). Sampled mode draws `samples`
/// mask sets per file and passes when the TV distance stays below
/// max(0.01, 3 x the distance between two same-file samples). Both modes also
/// run the structural check.
AuditVerdict audit_privacy(const RoundPlan& plan, int files, AuditMode mode, const PrivacyOptions& opt = {});
/// Per node: the multiset of download shapes (terms per file) is the same for
/// both requested files and no symbol is downloaded twice.
AuditVerdict audit_privacy_golden(const GoldenF2Plan& plan);

AuditVerdict audit_recovery(const RoundPlan& plan, int files, int trials, std::uint64_t seed);
AuditVerdict audit_recovery_golden(const GoldenF2Plan& plan, int trials, std::uint64_t seed);

/// |target| / downloads per stripe against the expected value, exactly.
AuditVerdict audit_rate(const RoundPlan& plan, const Rational& expected);

}  // namespace pirlab
