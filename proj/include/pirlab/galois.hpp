#pragma once

// Finite fields GF(p^m) with p^m <= 256 and dense linear algebra over them.
//
// Elements are encoded as integers in [0, q): the base-p digits of the code
// are the polynomial coefficients, least significant digit = constant term.
// The reduction polynomial for (p, m) is the smallest monic irreducible of
// degree m when read as the integer sum c_i p^i, e.g. x^3+x+1 for GF(8) and
// x^8+x^4+x^3+x+1 for GF(256).

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace pirlab {

using Elem = std::uint8_t;

class Field {
 public:
  /// Throws Error for a non-prime p or p^m > 256.
  static Field make(int p, int m);
  /// Factors q into p^m and calls make().
  static Field of_order(int q);
  static Field binary() { return make(2, 1); }

  int order() const noexcept { return q_; }
  int characteristic() const noexcept { return p_; }
  int degree() const noexcept { return m_; }
  bool is_binary() const noexcept { return q_ == 2; }
  /// Coefficients c_0..c_m of the reduction polynomial (c_m = 1). {0, 1} for prime fields.
  const std::vector<int>& modulus() const noexcept { return tables_->modulus; }

  bool contains(int v) const noexcept { return v >= 0 && v < q_; }
  Elem add(Elem a, Elem b) const noexcept { return tables_->add[a * q_ + b]; }
  Elem sub(Elem a, Elem b) const noexcept { return add(a, tables_->neg[b]); }
  Elem neg(Elem a) const noexcept { return tables_->neg[a]; }
  Elem mul(Elem a, Elem b) const noexcept { return tables_->mul[a * q_ + b]; }
  /// Multiplicative inverse; a must be nonzero.
  Elem inv(Elem a) const noexcept { return tables_->inv[a]; }
  Elem div(Elem a, Elem b) const noexcept { return mul(a, inv(b)); }

  friend bool operator==(const Field& a, const Field& b) noexcept {
    return a.q_ == b.q_ && a.tables_->modulus == b.tables_->modulus;
  }

  std::string describe() const;

 private:
  struct Tables {
    std::vector<int> modulus;
    std::vector<Elem> add, mul, neg, inv;
  };
  Field(int p, int m, std::shared_ptr<const Tables> t) : p_(p), m_(m), q_(t->neg.size()), tables_(std::move(t)) {}

  int p_, m_, q_;
  std::shared_ptr<const Tables> tables_;
};

bool is_prime(int v);
/// True when the monic polynomial with coefficients c_0..c_m has no factor of degree 1..m/2 over GF(p).
bool is_irreducible(int p, const std::vector<int>& coeffs);

/// Row-major dense matrix of field elements. Zero-sized dimensions are allowed.
class Matrix {
 public:
  Matrix() = default;
  Matrix(int rows, int cols) : rows_(rows), cols_(cols), data_(static_cast<std::size_t>(rows) * cols, 0) {}
  Matrix(int rows, int cols, std::vector<Elem> data);
  static Matrix identity(int n);
  static Matrix from_rows(const std::vector<std::vector<int>>& rows);

  int rows() const noexcept { return rows_; }
  int cols() const noexcept { return cols_; }
  bool empty() const noexcept { return rows_ == 0 || cols_ == 0; }

  Elem operator()(int r, int c) const { return data_[static_cast<std::size_t>(r) * cols_ + c]; }
  Elem& operator()(int r, int c) { return data_[static_cast<std::size_t>(r) * cols_ + c]; }
  std::span<const Elem> row(int r) const { return {data_.data() + static_cast<std::size_t>(r) * cols_, static_cast<std::size_t>(cols_)}; }
  std::span<Elem> row(int r) { return {data_.data() + static_cast<std::size_t>(r) * cols_, static_cast<std::size_t>(cols_)}; }
  const std::vector<Elem>& data() const noexcept { return data_; }

  Matrix transpose() const;
  /// Columns by 0-based index, in the given order.
  Matrix select_cols(std::span<const int> cols) const;
  Matrix select_rows(std::span<const int> rows) const;
  bool is_zero() const;
  bool fits(const Field& f) const;

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  int rows_ = 0, cols_ = 0;
  std::vector<Elem> data_;
};

Matrix mat_mul(const Field& f, const Matrix& a, const Matrix& b);
std::vector<Elem> vec_mat_mul(const Field& f, std::span<const Elem> v, const Matrix& a);
Elem dot(const Field& f, std::span<const Elem> a, std::span<const Elem> b);

struct Echelon {
  Matrix reduced;              ///< reduced row echelon form
  std::vector<int> pivot_cols; ///< pivot column of each nonzero row, increasing
  int rank() const noexcept { return static_cast<int>(pivot_cols.size()); }
};

/// Gauss-Jordan elimination. Columns are scanned left to right; the pivot of
/// a column is the lowest-indexed remaining row with a nonzero entry.
Echelon rref(const Field& f, Matrix a);
int mat_rank(const Field& f, const Matrix& a);

/// Some x with a*x = b, or nullopt when inconsistent. Free variables are zero.
/// Throws DimensionError when a.rows() != b.rows().
std::optional<Matrix> mat_solve(const Field& f, const Matrix& a, const Matrix& b);
/// Inverse of a square matrix, nullopt when singular.
std::optional<Matrix> mat_inverse(const Field& f, const Matrix& a);

/// Bit-packed GF(2) matrix: each row is a span of 64-bit words, bit j of the
/// row = column j.
class BitMatrix {
 public:
  BitMatrix(int rows, int cols);
  static BitMatrix from(const Matrix& a);

  int rows() const noexcept { return rows_; }
  int cols() const noexcept { return cols_; }
  bool get(int r, int c) const { return (words_[index(r, c)] >> (c & 63)) & 1U; }
  void set(int r, int c, bool v);
  /// row[dst] ^= row[src]
  void xor_row(int dst, int src);
  void swap_rows(int a, int b);

  /// Rank by in-place elimination on a copy.
  int rank() const;

 private:
  std::size_t index(int r, int c) const { return static_cast<std::size_t>(r) * stride_ + (c >> 6); }
  int rows_, cols_, stride_;
  std::vector<std::uint64_t> words_;
};

/// Rank of a set of GF(2) vectors packed into 64-bit words (dimension <= 64).
int gf2_rank(std::span<const std::uint64_t> vectors);

}  // namespace pirlab
