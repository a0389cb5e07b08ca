#include "pirlab/galois.hpp"

#include <algorithm>
#include <sstream>

#include "pirlab/error.hpp"

namespace pirlab {

namespace {

// Polynomials over GF(p) as coefficient vectors, index = degree.
using Poly = std::vector<int>;

void trim(Poly& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

int inv_mod(int a, int p) {
  for (int x = 1; x < p; ++x)
    if (a * x % p == 1) return x;
  return 0;
}

// Remainder of a modulo b over GF(p); b is nonzero.
Poly poly_mod(Poly a, const Poly& b, int p) {
  trim(a);
  const int db = static_cast<int>(b.size()) - 1;
  const int lead_inv = inv_mod(b.back(), p);
  while (static_cast<int>(a.size()) - 1 >= db && !a.empty()) {
    const int shift = static_cast<int>(a.size()) - 1 - db;
    const int factor = a.back() * lead_inv % p;
    for (int i = 0; i <= db; ++i) a[shift + i] = ((a[shift + i] - factor * b[i]) % p + p) % p;
    trim(a);
  }
  return a;
}

// Product of two encoded elements in GF(p)[x]/(modulus).
int encoded_mul(int a, int b, int p, const Poly& modulus) {
  const int m = static_cast<int>(modulus.size()) - 1;
  Poly pa(m, 0), pb(m, 0);
  for (int i = 0; i < m; ++i) {
    pa[i] = a % p;
    a /= p;
    pb[i] = b % p;
    b /= p;
  }
  Poly prod(2 * m, 0);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) prod[i + j] = (prod[i + j] + pa[i] * pb[j]) % p;
  Poly r = poly_mod(prod, modulus, p);
  int out = 0;
  for (int i = static_cast<int>(r.size()) - 1; i >= 0; --i) out = out * p + r[i];
  return out;
}

int encoded_add(int a, int b, int p) {
  int out = 0, scale = 1;
  while (a > 0 || b > 0) {
    out += ((a % p + b % p) % p) * scale;
    a /= p;
    b /= p;
    scale *= p;
  }
  return out;
}

}  // namespace

bool is_prime(int v) {
  if (v < 2) return false;
  for (int d = 2; d * d <= v; ++d)
    if (v % d == 0) return false;
  return true;
}

bool is_irreducible(int p, const std::vector<int>& coeffs) {
  Poly f = coeffs;
  trim(f);
  const int m = static_cast<int>(f.size()) - 1;
  if (m < 1) return false;
  // Every monic divisor candidate of degree d, 1 <= d <= m/2.
  for (int d = 1; 2 * d <= m; ++d) {
    int total = 1;
    for (int i = 0; i < d; ++i) total *= p;
    for (int code = 0; code < total; ++code) {
      Poly g(d + 1, 0);
      int c = code;
      for (int i = 0; i < d; ++i) {
        g[i] = c % p;
        c /= p;
      }
      g[d] = 1;
      if (poly_mod(f, g, p).empty()) return false;
    }
  }
  return true;
}

Field Field::make(int p, int m) {
  if (!is_prime(p)) throw Error("field characteristic " + std::to_string(p) + " is not prime");
  if (m < 1) throw Error("field extension degree must be >= 1");
  long q = 1;
  for (int i = 0; i < m; ++i) {
    q *= p;
    if (q > 256) throw Error("field order " + std::to_string(p) + "^" + std::to_string(m) + " exceeds 256");
  }

  auto t = std::make_shared<Tables>();
  if (m == 1) {
    t->modulus = {0, 1};
  } else {
    // Smallest monic irreducible by the integer value of its low coefficients.
    for (long code = 0; code < q; ++code) {
      Poly cand(m + 1, 0);
      long c = code;
      for (int i = 0; i < m; ++i) {
        cand[i] = static_cast<int>(c % p);
        c /= p;
      }
      cand[m] = 1;
      if (is_irreducible(p, cand)) {
        t->modulus = cand;
        break;
      }
    }
  }

  const int qi = static_cast<int>(q);
  t->add.resize(q * q);
  t->mul.resize(q * q);
  t->neg.resize(q);
  t->inv.assign(q, 0);
  for (int a = 0; a < qi; ++a) {
    for (int b = 0; b < qi; ++b) {
      if (m == 1) {
        t->add[a * qi + b] = static_cast<Elem>((a + b) % p);
        t->mul[a * qi + b] = static_cast<Elem>((a * b) % p);
      } else {
        t->add[a * qi + b] = static_cast<Elem>(encoded_add(a, b, p));
        t->mul[a * qi + b] = static_cast<Elem>(encoded_mul(a, b, p, t->modulus));
      }
    }
  }
  for (int a = 0; a < qi; ++a) {
    for (int b = 0; b < qi; ++b) {
      if (t->add[a * qi + b] == 0) t->neg[a] = static_cast<Elem>(b);
      if (t->mul[a * qi + b] == 1) t->inv[a] = static_cast<Elem>(b);
    }
  }
  return Field(p, m, std::move(t));
}

Field Field::of_order(int q) {
  if (q < 2 || q > 256) throw Error("field order " + std::to_string(q) + " outside [2, 256]");
  for (int p = 2; p <= q; ++p) {
    if (q % p != 0) continue;
    int m = 0, rest = q;
    while (rest % p == 0) {
      rest /= p;
      ++m;
    }
    if (rest != 1 || !is_prime(p)) break;
    return make(p, m);
  }
  throw Error("field order " + std::to_string(q) + " is not a prime power");
}

std::string Field::describe() const {
  std::ostringstream os;
  os << "GF(" << q_ << ")";
  if (m_ > 1) {
    os << " mod ";
    bool first = true;
    for (int i = m_; i >= 0; --i) {
      const int c = modulus()[i];
      if (c == 0) continue;
      if (!first) os << "+";
      first = false;
      if (c != 1 || i == 0) os << c;
      if (i >= 1) os << "x";
      if (i > 1) os << "^" << i;
    }
  }
  return os.str();
}

// ---------------------------------------------------------------------------

Matrix::Matrix(int rows, int cols, std::vector<Elem> data) : rows_(rows), cols_(cols), data_(std::move(data)) {
  if (data_.size() != static_cast<std::size_t>(rows) * cols) throw DimensionError("matrix data size does not match shape");
}

Matrix Matrix::identity(int n) {
  Matrix m(n, n);
  for (int i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

Matrix Matrix::from_rows(const std::vector<std::vector<int>>& rows) {
  const int r = static_cast<int>(rows.size());
  const int c = r ? static_cast<int>(rows[0].size()) : 0;
  Matrix m(r, c);
  for (int i = 0; i < r; ++i) {
    if (static_cast<int>(rows[i].size()) != c) throw DimensionError("ragged matrix rows");
    for (int j = 0; j < c; ++j) m(i, j) = static_cast<Elem>(rows[i][j]);
  }
  return m;
}

Matrix Matrix::transpose() const {
  Matrix t(cols_, rows_);
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

Matrix Matrix::select_cols(std::span<const int> cols) const {
  Matrix out(rows_, static_cast<int>(cols.size()));
  for (int i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols.size(); ++j) out(i, static_cast<int>(j)) = (*this)(i, cols[j]);
  return out;
}

Matrix Matrix::select_rows(std::span<const int> rows) const {
  Matrix out(static_cast<int>(rows.size()), cols_);
  for (std::size_t i = 0; i < rows.size(); ++i)
    std::copy(row(rows[i]).begin(), row(rows[i]).end(), out.row(static_cast<int>(i)).begin());
  return out;
}

bool Matrix::is_zero() const {
  return std::all_of(data_.begin(), data_.end(), [](Elem e) { return e == 0; });
}

bool Matrix::fits(const Field& f) const {
  return std::all_of(data_.begin(), data_.end(), [&](Elem e) { return f.contains(e); });
}

Matrix mat_mul(const Field& f, const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows()) throw DimensionError("mat_mul: inner dimensions differ");
  Matrix out(a.rows(), b.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int l = 0; l < a.cols(); ++l) {
      const Elem x = a(i, l);
      if (x == 0) continue;
      for (int j = 0; j < b.cols(); ++j) out(i, j) = f.add(out(i, j), f.mul(x, b(l, j)));
    }
  return out;
}

std::vector<Elem> vec_mat_mul(const Field& f, std::span<const Elem> v, const Matrix& a) {
  if (static_cast<int>(v.size()) != a.rows()) throw DimensionError("vector length does not match matrix rows");
  std::vector<Elem> out(a.cols(), 0);
  for (int i = 0; i < a.rows(); ++i) {
    if (v[i] == 0) continue;
    for (int j = 0; j < a.cols(); ++j) out[j] = f.add(out[j], f.mul(v[i], a(i, j)));
  }
  return out;
}

Elem dot(const Field& f, std::span<const Elem> a, std::span<const Elem> b) {
  if (a.size() != b.size()) throw DimensionError("dot: length mismatch");
  Elem acc = 0;
  for (std::size_t i = 0; i < a.size(); ++i) acc = f.add(acc, f.mul(a[i], b[i]));
  return acc;
}

Echelon rref(const Field& f, Matrix a) {
  Echelon e;
  int r = 0;
  for (int c = 0; c < a.cols() && r < a.rows(); ++c) {
    int piv = -1;
    for (int i = r; i < a.rows(); ++i)
      if (a(i, c) != 0) {
        piv = i;
        break;
      }
    if (piv < 0) continue;
    if (piv != r)
      for (int j = 0; j < a.cols(); ++j) std::swap(a(r, j), a(piv, j));
    const Elem s = f.inv(a(r, c));
    for (int j = 0; j < a.cols(); ++j) a(r, j) = f.mul(a(r, j), s);
    for (int i = 0; i < a.rows(); ++i) {
      if (i == r || a(i, c) == 0) continue;
      const Elem factor = a(i, c);
      for (int j = 0; j < a.cols(); ++j) a(i, j) = f.sub(a(i, j), f.mul(factor, a(r, j)));
    }
    e.pivot_cols.push_back(c);
    ++r;
  }
  e.reduced = std::move(a);
  return e;
}

int mat_rank(const Field& f, const Matrix& a) {
  if (f.is_binary() && a.cols() > 0) return BitMatrix::from(a).rank();
  return rref(f, a).rank();
}

std::optional<Matrix> mat_solve(const Field& f, const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows()) throw DimensionError("mat_solve: a has " + std::to_string(a.rows()) +
                                                 " rows, b has " + std::to_string(b.rows()));
  const int n = a.cols(), nb = b.cols();
  Matrix aug(a.rows(), n + nb);
  for (int i = 0; i < a.rows(); ++i) {
    for (int j = 0; j < n; ++j) aug(i, j) = a(i, j);
    for (int j = 0; j < nb; ++j) aug(i, n + j) = b(i, j);
  }
  // Columns are scanned left to right, so a pivot landing in b marks an inconsistent system.
  const Echelon e = rref(f, std::move(aug));
  if (e.rank() > 0 && e.pivot_cols.back() >= n) return std::nullopt;
  const int rank = e.rank();
  const Matrix& red = e.reduced;
  Matrix x(n, nb);
  for (int i = 0; i < rank; ++i)
    for (int j = 0; j < nb; ++j) x(e.pivot_cols[i], j) = red(i, n + j);
  return x;
}

std::optional<Matrix> mat_inverse(const Field& f, const Matrix& a) {
  if (a.rows() != a.cols()) throw DimensionError("mat_inverse: matrix is not square");
  if (mat_rank(f, a) != a.rows()) return std::nullopt;
  return mat_solve(f, a, Matrix::identity(a.rows()));
}

// ---------------------------------------------------------------------------

BitMatrix::BitMatrix(int rows, int cols)
    : rows_(rows), cols_(cols), stride_((cols + 63) / 64), words_(static_cast<std::size_t>(rows) * stride_, 0) {}

BitMatrix BitMatrix::from(const Matrix& a) {
  BitMatrix b(a.rows(), a.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j)
      if (a(i, j) & 1U) b.set(i, j, true);
  return b;
}

void BitMatrix::set(int r, int c, bool v) {
  const std::uint64_t bit = std::uint64_t{1} << (c & 63);
  if (v)
    words_[index(r, c)] |= bit;
  else
    words_[index(r, c)] &= ~bit;
}

void BitMatrix::xor_row(int dst, int src) {
  for (int w = 0; w < stride_; ++w) words_[static_cast<std::size_t>(dst) * stride_ + w] ^= words_[static_cast<std::size_t>(src) * stride_ + w];
}

void BitMatrix::swap_rows(int a, int b) {
  for (int w = 0; w < stride_; ++w) std::swap(words_[static_cast<std::size_t>(a) * stride_ + w], words_[static_cast<std::size_t>(b) * stride_ + w]);
}

int BitMatrix::rank() const {
  BitMatrix m = *this;
  int r = 0;
  for (int c = 0; c < cols_ && r < rows_; ++c) {
    int piv = -1;
    for (int i = r; i < rows_; ++i)
      if (m.get(i, c)) {
        piv = i;
        break;
      }
    if (piv < 0) continue;
    m.swap_rows(r, piv);
    for (int i = r + 1; i < rows_; ++i)
      if (m.get(i, c)) m.xor_row(i, r);
    ++r;
  }
  return r;
}

int gf2_rank(std::span<const std::uint64_t> vectors) {
  // XOR basis indexed by leading bit.
  std::uint64_t basis[64] = {};
  int rank = 0;
  for (std::uint64_t v : vectors) {
    for (int bit = 63; bit >= 0 && v; --bit) {
      if (!((v >> bit) & 1U)) continue;
      if (!basis[bit]) {
        basis[bit] = v;
        ++rank;
        break;
      }
      v ^= basis[bit];
    }
  }
  return rank;
}

}  // namespace pirlab
