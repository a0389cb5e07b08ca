#pragma once

// Linear codes over GF(q) and the structural analyses the PIR protocols need:
// information sets, puncturing, generalized Hamming weights, direct-sum
// decomposition and erasure determination.
//
// Coordinates are 1-based everywhere in the public interface.

#include <cstdint>
#include <initializer_list>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "pirlab/galois.hpp"

namespace pirlab {

/// Sorted, duplicate-free set of 1-based coordinates.
class CoordSet {
 public:
  CoordSet() = default;
  CoordSet(std::initializer_list<int> coords);
  explicit CoordSet(std::vector<int> coords);
  static CoordSet range(int first, int last);  ///< {first..last}
  static CoordSet from_mask(std::uint64_t mask);  ///< bit j-1 <=> coordinate j

  const std::vector<int>& coords() const noexcept { return coords_; }
  int size() const noexcept { return static_cast<int>(coords_.size()); }
  bool empty() const noexcept { return coords_.empty(); }
  bool contains(int c) const;
  int min() const { return coords_.front(); }
  int max() const { return coords_.back(); }
  auto begin() const noexcept { return coords_.begin(); }
  auto end() const noexcept { return coords_.end(); }
  /// 0-based indices, for matrix column selection.
  std::vector<int> zero_based() const;
  std::uint64_t mask() const;  ///< requires max() <= 64

  bool subset_of(const CoordSet& other) const;
  bool disjoint(const CoordSet& other) const;
  CoordSet unite(const CoordSet& other) const;
  CoordSet intersect(const CoordSet& other) const;
  CoordSet minus(const CoordSet& other) const;
  CoordSet complement(int n) const;  ///< {1..n} minus this

  /// "{1,2,4}"
  std::string str() const;
  /// Accepts "1,2,4", "{1,2,4}" or "{}".
  static CoordSet parse(std::string_view text);

  friend bool operator==(const CoordSet&, const CoordSet&) = default;
  friend auto operator<=>(const CoordSet&, const CoordSet&) = default;

 private:
  std::vector<int> coords_;
};

/// An [n, k] code given by a full-rank k x n generator matrix.
///
/// Every code remembers, per coordinate, the coordinate of the root code it
/// was punctured from; unpunctured codes map to themselves.
class LinearCode {
 public:
  /// Throws Error when gen is not full row rank or has entries outside the field.
  LinearCode(Field field, Matrix gen);
  LinearCode(Field field, Matrix gen, std::vector<int> parent_coords);

  const Field& field() const noexcept { return field_; }
  int length() const noexcept { return gen_.cols(); }
  int dimension() const noexcept { return gen_.rows(); }
  const Matrix& generator() const noexcept { return gen_; }
  /// parent_coords()[j-1] = root coordinate of local coordinate j.
  const std::vector<int>& parent_coords() const noexcept { return parent_; }
  CoordSet to_parent(const CoordSet& local) const;

  /// Rank of the generator restricted to the columns in s.
  int rank_of(const CoordSet& s) const;
  int rank_of_mask(std::uint64_t mask) const;  ///< binary codes with n <= 64 take the fast path
  Matrix restrict(const CoordSet& s) const { return gen_.select_cols(s.zero_based()); }
  CoordSet all() const { return CoordSet::range(1, length()); }

  /// Binary column j (1-based) packed as a k-bit word; requires is_binary() and k <= 64.
  std::uint64_t column_bits(int j) const { return col_bits_[j - 1]; }
  bool has_column_bits() const noexcept { return !col_bits_.empty(); }

  /// Short human-readable description, "[n,k] over GF(q)".
  std::string describe() const;

 private:
  Field field_;
  Matrix gen_;
  std::vector<int> parent_;
  std::vector<std::uint64_t> col_bits_;
};

bool same_code(const LinearCode& a, const LinearCode& b);  ///< equal codeword sets (same field, same n)

// --- parsing -----------------------------------------------------------------

/// Parses the code-spec text format:
///
///   field q=2
///   rows: 10010 / 01010 / 00101     # explicit rows, '/'-separated
///   dec k=4: 1,2,4,8,8,14,5         # binary columns, bit 0 = row 1
///
/// Rows may be written as digit strings (q <= 10) or as comma/space separated
/// integers. Several `rows:` lines accumulate. `#` starts a comment. The
/// field line is optional and defaults to q=2.
LinearCode code_parse(std::string_view text);
/// Renders in the explicit-rows format accepted by code_parse.
std::string code_format(const LinearCode& c);

// --- analysis ------------------------------------------------------------------

std::vector<Elem> encode(const LinearCode& c, std::span<const Elem> msg);

/// True iff |s| = k and G restricted to s is invertible. Throws DimensionError when |s| != k.
bool is_information_set(const LinearCode& c, const CoordSet& s);

/// Every information set in lexicographic order. Guard: n <= 24.
std::vector<CoordSet> enumerate_information_sets(const LinearCode& c);

/// Lexicographically smallest information set contained in s, if any.
/// Greedy in increasing coordinate order, which is lexicographically minimal
/// for matroid bases.
std::optional<CoordSet> first_information_set_within(const LinearCode& c, const CoordSet& s);

/// Code generated by G restricted to s. Rows that do not raise the rank are
/// dropped in order, so the result keeps a subset of the original rows.
LinearCode puncture(const LinearCode& c, const CoordSet& s);

/// Dimension of the subcode of codewords vanishing outside s.
int shortened_dimension(const LinearCode& c, const CoordSet& s);

/// d_s: smallest support of an s-dimensional subcode, by enumerating every
/// s-dimensional subspace of the message space exactly once (reduced echelon
/// bases). Guards: q^k <= 2^20 and at most 2^24 subspaces.
int generalized_hamming_weight(const LinearCode& c, int s);
/// d_1..d_k.
std::vector<int> weight_hierarchy(const LinearCode& c);

struct DirectSumPart {
  CoordSet coords;
  LinearCode subcode;  ///< puncture of the parent code to coords
  int dimension() const { return subcode.dimension(); }
  int length() const { return coords.size(); }
};

struct DirectSumDecomposition {
  std::vector<DirectSumPart> parts;  ///< sorted by smallest coordinate
  bool trivial() const { return parts.size() <= 1; }
};

/// Finest partition of the coordinates into parts whose shortened dimensions
/// sum to k. Parts are the connected components of the column matroid,
/// found through the fundamental circuits of the lexicographically first
/// information set. Zero columns form singleton parts of dimension 0.
DirectSumDecomposition finest_direct_sum(const LinearCode& c);

struct Determination {
  bool determined = false;
  /// |e| x |s|: symbol at e[i] = sum_j recon(i, j) * symbol at s[j]. Only set when determined.
  Matrix recon;
};

/// Whether the code symbols on e are linear functions of those on s.
/// Throws DimensionError when s and e overlap.
Determination determines(const LinearCode& c, const CoordSet& s, const CoordSet& e);

}  // namespace pirlab
