#pragma once

// PIR achievable rate matrices: nu x n binary matrices with every column of
// weight kappa and every row supporting an information set.

#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "pirlab/lincode.hpp"

namespace pirlab {

struct RateMatrix {
  int kappa = 0, nu = 0, n = 0;
  std::vector<CoordSet> rows;          ///< chi(lambda_i), the support of each row
  std::vector<CoordSet> certificates;  ///< information set inside each row

  Matrix as_matrix() const;
};

struct Violation {
  std::string what;
  int row = 0;     ///< 1-based, 0 when not row specific
  int column = 0;  ///< 1-based, 0 when not column specific
};

/// Checks the two defining conditions and attaches the lexicographically
/// first information set of each row. Throws DimensionError if m.cols() != n.
std::variant<RateMatrix, Violation> validate_rate_matrix(const LinearCode& c, const Matrix& m);

/// Text grid: a header line "kappa nu n" followed by nu lines of 0/1.
std::string format_rate_matrix(const RateMatrix& lam);
/// Parses the grid; the header must agree with the body. '#' starts a comment.
Matrix parse_rate_matrix(std::string_view text);

/// Minimal kappa/nu over nu <= nu_max. Fractions are tried in increasing order
/// from k/n; each is decided exactly by the base-packing condition
///   kappa * (n - |A|) >= nu * (k - rank(A))  for every A,
/// and a witness is built greedily from lexicographically ordered information
/// sets, padding columns to weight kappa afterwards.
RateMatrix search_min_rate_matrix(const LinearCode& c, int nu_max = 8);

/// Searches a specific (kappa, nu). nullopt when infeasible.
std::optional<RateMatrix> find_rate_matrix(const LinearCode& c, int kappa, int nu);

struct CapacityCertificate {
  bool achieving = false;
  std::optional<RateMatrix> matrix;  ///< kappa/nu = k/n, when achieving
};
/// Whether a rate matrix with kappa/nu = k/n exists.
CapacityCertificate is_mds_pir_capacity_achieving(const LinearCode& c);

struct GhwCondition {
  bool holds = true;
  std::optional<int> first_failing_s;
  std::vector<int> hierarchy;  ///< d_1..d_k
};
/// d_s >= (n/k) s for all s, necessary for an MDS-PIR capacity-achieving matrix.
GhwCondition ghw_necessary_condition(const LinearCode& c);

}  // namespace pirlab
