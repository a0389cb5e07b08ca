#include "pirlab/lincode.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <numeric>
#include <sstream>

#include "pirlab/error.hpp"

namespace pirlab {

// --- CoordSet ----------------------------------------------------------------

CoordSet::CoordSet(std::initializer_list<int> coords) : CoordSet(std::vector<int>(coords)) {}

CoordSet::CoordSet(std::vector<int> coords) : coords_(std::move(coords)) {
  std::sort(coords_.begin(), coords_.end());
  if (std::adjacent_find(coords_.begin(), coords_.end()) != coords_.end())
    throw DimensionError("coordinate set has duplicates");
  if (!coords_.empty() && coords_.front() < 1) throw DimensionError("coordinates are 1-based");
}

CoordSet CoordSet::range(int first, int last) {
  std::vector<int> v;
  for (int i = first; i <= last; ++i) v.push_back(i);
  return CoordSet(std::move(v));
}

CoordSet CoordSet::from_mask(std::uint64_t mask) {
  std::vector<int> v;
  for (int j = 0; j < 64; ++j)
    if ((mask >> j) & 1U) v.push_back(j + 1);
  return CoordSet(std::move(v));
}

bool CoordSet::contains(int c) const { return std::binary_search(coords_.begin(), coords_.end(), c); }

std::vector<int> CoordSet::zero_based() const {
  std::vector<int> out(coords_.size());
  std::transform(coords_.begin(), coords_.end(), out.begin(), [](int c) { return c - 1; });
  return out;
}

std::uint64_t CoordSet::mask() const {
  std::uint64_t m = 0;
  for (int c : coords_) {
    if (c > 64) throw DimensionError("coordinate mask needs n <= 64");
    m |= std::uint64_t{1} << (c - 1);
  }
  return m;
}

bool CoordSet::subset_of(const CoordSet& other) const {
  return std::includes(other.coords_.begin(), other.coords_.end(), coords_.begin(), coords_.end());
}

bool CoordSet::disjoint(const CoordSet& other) const { return intersect(other).empty(); }

CoordSet CoordSet::unite(const CoordSet& other) const {
  std::vector<int> v;
  std::set_union(coords_.begin(), coords_.end(), other.coords_.begin(), other.coords_.end(), std::back_inserter(v));
  return CoordSet(std::move(v));
}

CoordSet CoordSet::intersect(const CoordSet& other) const {
  std::vector<int> v;
  std::set_intersection(coords_.begin(), coords_.end(), other.coords_.begin(), other.coords_.end(),
                        std::back_inserter(v));
  return CoordSet(std::move(v));
}

CoordSet CoordSet::minus(const CoordSet& other) const {
  std::vector<int> v;
  std::set_difference(coords_.begin(), coords_.end(), other.coords_.begin(), other.coords_.end(),
                      std::back_inserter(v));
  return CoordSet(std::move(v));
}

CoordSet CoordSet::complement(int n) const { return range(1, n).minus(*this); }

std::string CoordSet::str() const {
  std::string s = "{";
  for (std::size_t i = 0; i < coords_.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(coords_[i]);
  }
  return s + "}";
}

CoordSet CoordSet::parse(std::string_view text) {
  std::vector<int> v;
  std::string cur;
  auto flush = [&] {
    if (cur.empty()) return;
    int x = 0;
    auto [p, ec] = std::from_chars(cur.data(), cur.data() + cur.size(), x);
    if (ec != std::errc() || p != cur.data() + cur.size()) throw ParseError(0, "bad coordinate '" + cur + "'");
    v.push_back(x);
    cur.clear();
  };
  for (char ch : text) {
    if (ch == '{' || ch == '}' || ch == ' ' || ch == '\t') {
      flush();
    } else if (ch == ',') {
      flush();
    } else {
      cur += ch;
    }
  }
  flush();
  return CoordSet(std::move(v));
}

// --- LinearCode --------------------------------------------------------------

LinearCode::LinearCode(Field field, Matrix gen) : LinearCode(field, std::move(gen), {}) {}

LinearCode::LinearCode(Field field, Matrix gen, std::vector<int> parent_coords)
    : field_(std::move(field)), gen_(std::move(gen)), parent_(std::move(parent_coords)) {
  if (!gen_.fits(field_)) throw Error("generator entries outside " + field_.describe());
  if (gen_.rows() > gen_.cols()) throw Error("code dimension exceeds blocklength");
  const int r = mat_rank(field_, gen_);
  if (r != gen_.rows())
    throw Error("generator matrix has rank " + std::to_string(r) + " < " + std::to_string(gen_.rows()) + " rows");
  if (parent_.empty()) {
    parent_.resize(gen_.cols());
    std::iota(parent_.begin(), parent_.end(), 1);
  } else if (static_cast<int>(parent_.size()) != gen_.cols()) {
    throw DimensionError("parent coordinate map has wrong length");
  }
  if (field_.is_binary() && gen_.rows() <= 64) {
    col_bits_.assign(gen_.cols(), 0);
    for (int j = 0; j < gen_.cols(); ++j)
      for (int i = 0; i < gen_.rows(); ++i)
        if (gen_(i, j)) col_bits_[j] |= std::uint64_t{1} << i;
  }
}

CoordSet LinearCode::to_parent(const CoordSet& local) const {
  std::vector<int> v;
  for (int c : local) v.push_back(parent_[c - 1]);
  return CoordSet(std::move(v));
}

int LinearCode::rank_of(const CoordSet& s) const {
  if (!s.empty() && s.max() > length()) throw DimensionError("coordinate " + std::to_string(s.max()) + " out of range");
  if (has_column_bits()) {
    std::vector<std::uint64_t> cols;
    cols.reserve(s.size());
    for (int c : s) cols.push_back(col_bits_[c - 1]);
    return gf2_rank(cols);
  }
  if (s.empty()) return 0;
  return mat_rank(field_, restrict(s));
}

int LinearCode::rank_of_mask(std::uint64_t mask) const {
  if (has_column_bits()) {
    std::uint64_t cols[64];
    int cnt = 0;
    for (int j = 0; j < length() && j < 64; ++j)
      if ((mask >> j) & 1U) cols[cnt++] = col_bits_[j];
    return gf2_rank(std::span<const std::uint64_t>(cols, cnt));
  }
  return rank_of(CoordSet::from_mask(mask));
}

std::string LinearCode::describe() const {
  return "[" + std::to_string(length()) + "," + std::to_string(dimension()) + "] over GF(" +
         std::to_string(field_.order()) + ")";
}

bool same_code(const LinearCode& a, const LinearCode& b) {
  if (!(a.field() == b.field()) || a.length() != b.length() || a.dimension() != b.dimension()) return false;
  Matrix stacked(a.dimension() + b.dimension(), a.length());
  for (int i = 0; i < a.dimension(); ++i)
    for (int j = 0; j < a.length(); ++j) stacked(i, j) = a.generator()(i, j);
  for (int i = 0; i < b.dimension(); ++i)
    for (int j = 0; j < b.length(); ++j) stacked(a.dimension() + i, j) = b.generator()(i, j);
  return mat_rank(a.field(), stacked) == a.dimension();
}

// --- parsing -----------------------------------------------------------------

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

long parse_int(std::string_view tok, int line) {
  tok = trim(tok);
  long v = 0;
  auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (tok.empty() || ec != std::errc() || p != tok.data() + tok.size())
    throw ParseError(line, "expected an integer, got '" + std::string(tok) + "'");
  return v;
}

std::vector<long> split_ints(std::string_view s, int line) {
  std::vector<long> out;
  std::string cur;
  for (char ch : s) {
    if (ch == ',' || std::isspace(static_cast<unsigned char>(ch))) {
      if (!cur.empty()) out.push_back(parse_int(cur, line));
      cur.clear();
    } else {
      cur += ch;
    }
  }
  if (!cur.empty()) out.push_back(parse_int(cur, line));
  return out;
}

// "key=value" within a directive, e.g. "q=2".
long keyed_int(std::string_view s, std::string_view key, int line) {
  s = trim(s);
  if (s.substr(0, key.size()) != key) throw ParseError(line, "expected '" + std::string(key) + "=...'");
  s.remove_prefix(key.size());
  s = trim(s);
  if (s.empty() || s.front() != '=') throw ParseError(line, "expected '=' after " + std::string(key));
  s.remove_prefix(1);
  return parse_int(s, line);
}

}  // namespace

LinearCode code_parse(std::string_view text) {
  std::optional<Field> field;
  int field_line = 0;
  std::vector<std::vector<int>> rows;
  std::vector<long> dec_cols;
  int dec_k = -1, dec_line = 0, last_line = 0;
  std::vector<int> row_lines;

  int lineno = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t nl = text.find('\n', pos);
    std::string_view line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    last_line = lineno;

    if (line.substr(0, 5) == "field") {
      if (field) throw ParseError(lineno, "duplicate field declaration");
      const long q = keyed_int(line.substr(5), "q", lineno);
      try {
        field = Field::of_order(static_cast<int>(q));
      } catch (const ParseError&) {
        throw;
      } catch (const Error& e) {
        throw ParseError(lineno, e.what());
      }
      field_line = lineno;
    } else if (line.substr(0, 5) == "rows:") {
      if (dec_k >= 0) throw ParseError(lineno, "cannot mix 'rows:' and 'dec' forms");
      if (!field) field = Field::binary();
      std::string_view rest = line.substr(5);
      while (true) {
        const std::size_t slash = rest.find('/');
        std::string_view tok = trim(rest.substr(0, slash));
        if (tok.empty()) throw ParseError(lineno, "empty row");
        std::vector<int> row;
        const bool separated = tok.find_first_of(", \t") != std::string_view::npos;
        if (separated) {
          for (long v : split_ints(tok, lineno)) row.push_back(static_cast<int>(v));
        } else {
          for (char ch : tok) {
            if (!std::isdigit(static_cast<unsigned char>(ch)))
              throw ParseError(lineno, std::string("bad symbol '") + ch + "' in row");
            row.push_back(ch - '0');
          }
        }
        for (int v : row)
          if (!field->contains(v))
            throw ParseError(lineno, "entry " + std::to_string(v) + " not in GF(" + std::to_string(field->order()) + ")");
        if (!rows.empty() && row.size() != rows.front().size())
          throw ParseError(lineno, "row length " + std::to_string(row.size()) + " differs from " +
                                       std::to_string(rows.front().size()));
        rows.push_back(std::move(row));
        row_lines.push_back(lineno);
        if (slash == std::string_view::npos) break;
        rest = rest.substr(slash + 1);
      }
    } else if (line.substr(0, 3) == "dec") {
      if (!rows.empty()) throw ParseError(lineno, "cannot mix 'rows:' and 'dec' forms");
      if (dec_k >= 0) throw ParseError(lineno, "duplicate 'dec' line");
      const std::size_t colon = line.find(':');
      if (colon == std::string_view::npos) throw ParseError(lineno, "expected 'dec k=K: c1,c2,...'");
      dec_k = static_cast<int>(keyed_int(line.substr(3, colon - 3), "k", lineno));
      if (dec_k < 1 || dec_k > 62) throw ParseError(lineno, "dec form needs 1 <= k <= 62");
      dec_cols = split_ints(line.substr(colon + 1), lineno);
      dec_line = lineno;
      if (dec_cols.empty()) throw ParseError(lineno, "no columns");
      for (long v : dec_cols)
        if (v < 0 || v >= (1L << dec_k))
          throw ParseError(lineno, "column value " + std::to_string(v) + " >= 2^" + std::to_string(dec_k));
    } else {
      throw ParseError(lineno, "unknown directive '" + std::string(line.substr(0, line.find_first_of(" :"))) + "'");
    }
  }

  if (dec_k >= 0) {
    if (field && !field->is_binary()) throw ParseError(field_line, "decimal column form is binary only");
    Matrix g(dec_k, static_cast<int>(dec_cols.size()));
    for (std::size_t j = 0; j < dec_cols.size(); ++j)
      for (int i = 0; i < dec_k; ++i) g(i, static_cast<int>(j)) = static_cast<Elem>((dec_cols[j] >> i) & 1);
    try {
      return LinearCode(Field::binary(), std::move(g));
    } catch (const Error& e) {
      throw ParseError(dec_line, e.what());
    }
  }
  if (rows.empty()) throw ParseError(last_line, "no generator matrix given");
  try {
    return LinearCode(*field, Matrix::from_rows(rows));
  } catch (const Error& e) {
    throw ParseError(row_lines.back(), e.what());
  }
}

std::string code_format(const LinearCode& c) {
  std::ostringstream os;
  os << "field q=" << c.field().order() << "\nrows: ";
  const bool digits = c.field().order() <= 10;
  const Matrix& g = c.generator();
  for (int i = 0; i < g.rows(); ++i) {
    if (i) os << " / ";
    for (int j = 0; j < g.cols(); ++j) {
      if (!digits && j) os << ",";
      os << static_cast<int>(g(i, j));
    }
  }
  os << "\n";
  return os.str();
}

// --- analysis ------------------------------------------------------------------

std::vector<Elem> encode(const LinearCode& c, std::span<const Elem> msg) {
  if (static_cast<int>(msg.size()) != c.dimension())
    throw DimensionError("message length " + std::to_string(msg.size()) + " != k = " + std::to_string(c.dimension()));
  return vec_mat_mul(c.field(), msg, c.generator());
}

bool is_information_set(const LinearCode& c, const CoordSet& s) {
  if (s.size() != c.dimension())
    throw DimensionError("information set candidate has " + std::to_string(s.size()) + " coordinates, k = " +
                         std::to_string(c.dimension()));
  return c.rank_of(s) == c.dimension();
}

std::vector<CoordSet> enumerate_information_sets(const LinearCode& c) {
  const int n = c.length(), k = c.dimension();
  if (n > 24) throw GuardError("information set enumeration is limited to n <= 24 (n = " + std::to_string(n) + ")");
  std::vector<CoordSet> out;
  std::vector<int> idx(k);
  std::iota(idx.begin(), idx.end(), 0);
  while (true) {
    std::uint64_t mask = 0;
    for (int i : idx) mask |= std::uint64_t{1} << i;
    if (c.rank_of_mask(mask) == k) out.push_back(CoordSet::from_mask(mask));
    int pos = k - 1;
    while (pos >= 0 && idx[pos] == n - k + pos) --pos;
    if (pos < 0) break;
    ++idx[pos];
    for (int i = pos + 1; i < k; ++i) idx[i] = idx[i - 1] + 1;
  }
  return out;
}

std::optional<CoordSet> first_information_set_within(const LinearCode& c, const CoordSet& s) {
  std::vector<int> chosen;
  int rank = 0;
  for (int j : s) {
    chosen.push_back(j);
    const int r = c.rank_of(CoordSet(chosen));
    if (r == rank) {
      chosen.pop_back();
    } else {
      rank = r;
      if (rank == c.dimension()) break;
    }
  }
  if (rank < c.dimension()) return std::nullopt;
  return CoordSet(std::move(chosen));
}

LinearCode puncture(const LinearCode& c, const CoordSet& s) {
  if (s.empty()) throw DimensionError("cannot puncture to an empty coordinate set");
  if (s.max() > c.length()) throw DimensionError("puncture coordinate out of range");
  const Matrix restricted = c.restrict(s);
  std::vector<int> keep;
  int rank = 0;
  for (int i = 0; i < restricted.rows() && rank < restricted.cols(); ++i) {
    keep.push_back(i);
    const int r = mat_rank(c.field(), restricted.select_rows(keep));
    if (r == rank)
      keep.pop_back();
    else
      rank = r;
  }
  return LinearCode(c.field(), restricted.select_rows(keep), c.to_parent(s).coords());
}

int shortened_dimension(const LinearCode& c, const CoordSet& s) {
  return c.dimension() - c.rank_of(s.complement(c.length()));
}

namespace {

// Visits each s x k reduced row echelon matrix over the field exactly once.
template <typename Visit>
bool for_each_rref(const Field& f, int k, int s, Visit&& visit) {
  std::vector<int> pivots(s);
  std::iota(pivots.begin(), pivots.end(), 0);
  Matrix r(s, k);
  while (true) {
    // Free positions: right of the pivot, not in a pivot column.
    std::vector<std::pair<int, int>> free;
    for (int i = 0; i < s; ++i)
      for (int j = pivots[i] + 1; j < k; ++j)
        if (!std::binary_search(pivots.begin(), pivots.end(), j)) free.emplace_back(i, j);
    for (int i = 0; i < s; ++i) {
      for (int j = 0; j < k; ++j) r(i, j) = 0;
      r(i, pivots[i]) = 1;
    }
    // Mixed-radix counter over the free entries.
    std::vector<int> digits(free.size(), 0);
    while (true) {
      for (std::size_t t = 0; t < free.size(); ++t) r(free[t].first, free[t].second) = static_cast<Elem>(digits[t]);
      if (!visit(r)) return false;
      std::size_t t = 0;
      while (t < digits.size() && ++digits[t] == f.order()) digits[t++] = 0;
      if (t == digits.size()) break;
    }
    int pos = s - 1;
    while (pos >= 0 && pivots[pos] == k - s + pos) --pos;
    if (pos < 0) break;
    ++pivots[pos];
    for (int i = pos + 1; i < s; ++i) pivots[i] = pivots[i - 1] + 1;
  }
  return true;
}

double gaussian_binomial(int q, int k, int s) {
  double num = 1, den = 1;
  for (int i = 0; i < s; ++i) {
    num *= std::pow(static_cast<double>(q), k - i) - 1;
    den *= std::pow(static_cast<double>(q), i + 1) - 1;
  }
  return num / den;
}

}  // namespace

int generalized_hamming_weight(const LinearCode& c, int s) {
  const int k = c.dimension(), n = c.length(), q = c.field().order();
  if (s < 1 || s > k) throw DimensionError("GHW order s must lie in [1, k]");
  if (std::pow(static_cast<double>(q), k) > static_cast<double>(1 << 20))
    throw GuardError("GHW enumeration needs q^k <= 2^20");
  if (gaussian_binomial(q, k, s) > static_cast<double>(1 << 24))
    throw GuardError("GHW enumeration would visit more than 2^24 subspaces");

  int best = n + 1;
  const Matrix& g = c.generator();
  for_each_rref(c.field(), k, s, [&](const Matrix& basis) {
    const Matrix words = mat_mul(c.field(), basis, g);
    int support = 0;
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < s; ++i)
        if (words(i, j)) {
          ++support;
          break;
        }
    best = std::min(best, support);
    return best > s;  // d_s >= s, stop once attained
  });
  return best;
}

std::vector<int> weight_hierarchy(const LinearCode& c) {
  std::vector<int> d;
  for (int s = 1; s <= c.dimension(); ++s) d.push_back(generalized_hamming_weight(c, s));
  return d;
}

DirectSumDecomposition finest_direct_sum(const LinearCode& c) {
  const int n = c.length(), k = c.dimension();
  const CoordSet basis = *first_information_set_within(c, c.all());
  // Systematic form on the basis: entry (i, e) != 0 iff basis[i] lies on the fundamental circuit of e.
  const Matrix sys = mat_mul(c.field(), *mat_inverse(c.field(), c.restrict(basis)), c.generator());

  std::vector<int> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (int i = 0; i < k; ++i) {
    const int b = basis.coords()[i] - 1;
    for (int e = 0; e < n; ++e)
      if (sys(i, e) != 0) parent[find(e)] = find(b);
  }

  std::vector<std::vector<int>> groups(n);
  for (int j = 0; j < n; ++j) groups[find(j)].push_back(j + 1);
  DirectSumDecomposition d;
  for (auto& grp : groups) {
    if (grp.empty()) continue;
    CoordSet part(grp);
    if (c.rank_of(part) == 0) {
      // A zero coordinate: dimension-0 part.
      d.parts.push_back({part, LinearCode(c.field(), Matrix(0, 1), c.to_parent(part).coords())});
    } else {
      d.parts.push_back({part, puncture(c, part)});
    }
  }
  std::sort(d.parts.begin(), d.parts.end(), [](const auto& a, const auto& b) { return a.coords.min() < b.coords.min(); });
  return d;
}

Determination determines(const LinearCode& c, const CoordSet& s, const CoordSet& e) {
  if (!s.disjoint(e)) throw DimensionError("determines: sets " + s.str() + " and " + e.str() + " overlap");
  Determination d;
  if (e.empty()) {
    d.determined = true;
    d.recon = Matrix(0, s.size());
    return d;
  }
  auto m = mat_solve(c.field(), c.restrict(s), c.restrict(e));
  if (!m) return d;
  d.determined = true;
  d.recon = m->transpose();
  return d;
}

}  // namespace pirlab
