#include "pirlab/ratematrix.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>
#include <sstream>

#include "pirlab/error.hpp"

namespace pirlab {

Matrix RateMatrix::as_matrix() const {
  Matrix m(nu, n);
  for (int i = 0; i < nu; ++i)
    for (int j : rows[i]) m(i, j - 1) = 1;
  return m;
}

std::variant<RateMatrix, Violation> validate_rate_matrix(const LinearCode& c, const Matrix& m) {
  const int n = c.length();
  if (m.cols() != n)
    throw DimensionError("rate matrix has " + std::to_string(m.cols()) + " columns, code length is " + std::to_string(n));
  if (m.rows() == 0) return Violation{"rate matrix has no rows"};
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < n; ++j)
      if (m(i, j) > 1) return Violation{"entry is not binary", i + 1, j + 1};

  RateMatrix lam;
  lam.nu = m.rows();
  lam.n = n;
  for (int j = 0; j < n; ++j) {
    int w = 0;
    for (int i = 0; i < m.rows(); ++i) w += m(i, j);
    if (j == 0) lam.kappa = w;
    if (w != lam.kappa)
      return Violation{"column " + std::to_string(j + 1) + " has weight " + std::to_string(w) + ", column 1 has " +
                           std::to_string(lam.kappa),
                       0, j + 1};
  }
  for (int i = 0; i < m.rows(); ++i) {
    std::vector<int> support;
    for (int j = 0; j < n; ++j)
      if (m(i, j)) support.push_back(j + 1);
    CoordSet row(std::move(support));
    auto cert = first_information_set_within(c, row);
    if (!cert) return Violation{"row " + std::to_string(i + 1) + " support " + row.str() + " holds no information set", i + 1};
    lam.rows.push_back(std::move(row));
    lam.certificates.push_back(std::move(*cert));
  }
  return lam;
}

std::string format_rate_matrix(const RateMatrix& lam) {
  std::ostringstream os;
  os << lam.kappa << " " << lam.nu << " " << lam.n << "\n";
  for (const auto& r : lam.rows) {
    for (int j = 1; j <= lam.n; ++j) os << (r.contains(j) ? '1' : '0');
    os << "\n";
  }
  return os.str();
}

Matrix parse_rate_matrix(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0, kappa = -1, nu = 0, n = 0;
  std::vector<std::vector<int>> rows;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    if (kappa < 0) {
      std::istringstream hs(line);
      if (!(hs >> kappa >> nu >> n) || kappa < 0 || nu < 1 || n < 1)
        throw ParseError(lineno, "expected header 'kappa nu n'");
      std::string extra;
      if (hs >> extra) throw ParseError(lineno, "trailing text after header");
      continue;
    }
    std::vector<int> row;
    for (char ch : line) {
      if (ch == '0' || ch == '1')
        row.push_back(ch - '0');
      else if (!std::isspace(static_cast<unsigned char>(ch)))
        throw ParseError(lineno, std::string("unexpected '") + ch + "' in rate matrix row");
    }
    if (static_cast<int>(row.size()) != n)
      throw ParseError(lineno, "row has " + std::to_string(row.size()) + " entries, header says n = " + std::to_string(n));
    rows.push_back(std::move(row));
    if (static_cast<int>(rows.size()) > nu) throw ParseError(lineno, "more rows than nu = " + std::to_string(nu));
  }
  if (kappa < 0) throw ParseError(lineno, "empty rate matrix");
  if (static_cast<int>(rows.size()) != nu)
    throw ParseError(lineno, "found " + std::to_string(rows.size()) + " rows, header says nu = " + std::to_string(nu));
  for (int j = 0; j < n; ++j) {
    int w = 0;
    for (const auto& r : rows) w += r[j];
    if (w != kappa)
      throw ParseError(lineno, "column " + std::to_string(j + 1) + " has weight " + std::to_string(w) +
                                   ", header says kappa = " + std::to_string(kappa));
  }
  return Matrix::from_rows(rows);
}

namespace {

constexpr int kExactLimit = 20;         // base-packing test tabulates all 2^n ranks
constexpr long kBacktrackBudget = 5'000'000;

class Packer {
 public:
  explicit Packer(const LinearCode& c) : c_(c), n_(c.length()), k_(c.dimension()) {
    bases_ = enumerate_information_sets(c);
    for (const auto& b : bases_) {
      std::vector<int> z = b.zero_based();
      base_idx_.push_back(std::move(z));
    }
    if (n_ <= kExactLimit) {
      rank_.resize(std::size_t{1} << n_);
      for (std::uint64_t a = 0; a < rank_.size(); ++a) rank_[a] = static_cast<std::uint8_t>(c.rank_of_mask(a));
      sums_.resize(rank_.size());
    }
  }

  bool exact() const { return !rank_.empty(); }

  // t disjoint bases fit within capacities cap iff for every A the capacity
  // outside A is at least t (k - rank A).
  bool packable(const std::vector<int>& cap, int t) {
    if (t == 0) return true;
    const std::uint64_t full = (std::uint64_t{1} << n_) - 1;
    sums_[0] = 0;
    for (std::uint64_t a = 1; a <= full; ++a) sums_[a] = sums_[a & (a - 1)] + cap[__builtin_ctzll(a)];
    for (std::uint64_t a = 0; a <= full; ++a) {
      const int deficit = k_ - rank_[a];
      if (deficit > 0 && sums_[full & ~a] < static_cast<long>(t) * deficit) return false;
    }
    return true;
  }

  std::optional<std::vector<int>> pack(int kappa, int nu) {
    std::vector<int> cap(n_, kappa);
    std::vector<int> chosen;
    if (exact()) {
      if (!packable(cap, nu)) return std::nullopt;
      std::size_t from = 0;
      for (int r = 0; r < nu; ++r) {
        bool placed = false;
        for (std::size_t b = from; b < bases_.size() && !placed; ++b) {
          if (!fits(cap, b)) continue;
          take(cap, b, -1);
          if (packable(cap, nu - r - 1)) {
            chosen.push_back(static_cast<int>(b));
            from = b;
            placed = true;
          } else {
            take(cap, b, +1);
          }
        }
        if (!placed) throw Error("base packing: exact condition held but no base could be placed");
      }
      return chosen;
    }
    long budget = kBacktrackBudget;
    if (backtrack(cap, nu, 0, chosen, budget)) return chosen;
    if (budget <= 0)
      throw GuardError("rate-matrix search for kappa/nu = " + std::to_string(kappa) + "/" + std::to_string(nu) +
                       " exceeded its backtracking budget");
    return std::nullopt;
  }

  const CoordSet& base(int i) const { return bases_[i]; }

 private:
  bool fits(const std::vector<int>& cap, std::size_t b) const {
    for (int j : base_idx_[b])
      if (cap[j] == 0) return false;
    return true;
  }
  void take(std::vector<int>& cap, std::size_t b, int delta) const {
    for (int j : base_idx_[b]) cap[j] += delta;
  }

  bool backtrack(std::vector<int>& cap, int left, std::size_t from, std::vector<int>& chosen, long& budget) {
    if (left == 0) return true;
    if (--budget <= 0) return false;
    const long room = std::accumulate(cap.begin(), cap.end(), 0L);
    if (room < static_cast<long>(left) * k_) return false;
    for (std::size_t b = from; b < bases_.size(); ++b) {
      if (!fits(cap, b)) continue;
      take(cap, b, -1);
      chosen.push_back(static_cast<int>(b));
      if (backtrack(cap, left - 1, b, chosen, budget)) return true;
      chosen.pop_back();
      take(cap, b, +1);
      if (budget <= 0) return false;
    }
    return false;
  }

  const LinearCode& c_;
  int n_, k_;
  std::vector<CoordSet> bases_;
  std::vector<std::vector<int>> base_idx_;
  std::vector<std::uint8_t> rank_;
  std::vector<long> sums_;
};

RateMatrix assemble(const LinearCode& c, const Packer& packer, const std::vector<int>& chosen, int kappa) {
  const int n = c.length(), nu = static_cast<int>(chosen.size());
  Matrix m(nu, n);
  for (int i = 0; i < nu; ++i)
    for (int j : packer.base(chosen[i])) m(i, j - 1) = 1;
  // Pad every column up to weight kappa, filling rows in order.
  for (int j = 0; j < n; ++j) {
    int w = 0;
    for (int i = 0; i < nu; ++i) w += m(i, j);
    for (int i = 0; i < nu && w < kappa; ++i)
      if (!m(i, j)) {
        m(i, j) = 1;
        ++w;
      }
  }
  auto v = validate_rate_matrix(c, m);
  if (auto* bad = std::get_if<Violation>(&v)) throw Error("internal: assembled rate matrix invalid: " + bad->what);
  return std::get<RateMatrix>(std::move(v));
}

}  // namespace

std::optional<RateMatrix> find_rate_matrix(const LinearCode& c, int kappa, int nu) {
  if (kappa < 1 || nu < 1 || kappa > nu) throw DimensionError("need 1 <= kappa <= nu");
  if (static_cast<long>(kappa) * c.length() < static_cast<long>(nu) * c.dimension()) return std::nullopt;
  Packer packer(c);
  auto chosen = packer.pack(kappa, nu);
  if (!chosen) return std::nullopt;
  return assemble(c, packer, *chosen, kappa);
}

RateMatrix search_min_rate_matrix(const LinearCode& c, int nu_max) {
  if (nu_max < 1) throw DimensionError("nu_max must be at least 1");
  const long n = c.length(), k = c.dimension();
  std::vector<std::pair<int, int>> fractions;
  for (int nu = 1; nu <= nu_max; ++nu)
    for (int kappa = 1; kappa <= nu; ++kappa)
      if (std::gcd(kappa, nu) == 1 && kappa * n >= k * nu) fractions.emplace_back(kappa, nu);
  std::sort(fractions.begin(), fractions.end(), [](auto a, auto b) {
    const long lhs = static_cast<long>(a.first) * b.second, rhs = static_cast<long>(b.first) * a.second;
    return lhs != rhs ? lhs < rhs : a.second < b.second;
  });
  Packer packer(c);
  for (auto [kappa, nu] : fractions)
    if (auto chosen = packer.pack(kappa, nu)) return assemble(c, packer, *chosen, kappa);
  throw Error("no rate matrix found, not even the all-ones row");
}

CapacityCertificate is_mds_pir_capacity_achieving(const LinearCode& c) {
  const int g = std::gcd(c.dimension(), c.length());
  CapacityCertificate cert;
  cert.matrix = find_rate_matrix(c, c.dimension() / g, c.length() / g);
  cert.achieving = cert.matrix.has_value();
  return cert;
}

GhwCondition ghw_necessary_condition(const LinearCode& c) {
  GhwCondition out;
  out.hierarchy = weight_hierarchy(c);
  for (int s = 1; s <= c.dimension(); ++s) {
    if (static_cast<long>(out.hierarchy[s - 1]) * c.dimension() < static_cast<long>(c.length()) * s) {
      out.holds = false;
      out.first_failing_s = s;
      break;
    }
  }
  return out;
}

}  // namespace pirlab
