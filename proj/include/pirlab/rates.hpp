#pragma once

// Closed-form PIR rates and capacities, exact.

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "pirlab/lincode.hpp"
#include "pirlab/rational.hpp"

namespace pirlab {

/// Number of stored files: a positive count or the asymptotic regime.
class FileCount {
 public:
  static FileCount finite(int f);
  static FileCount infinite() { return FileCount(0); }
  bool is_infinite() const noexcept { return f_ == 0; }
  int value() const;  ///< throws for the infinite marker
  std::string str() const { return is_infinite() ? "inf" : std::to_string(f_); }
  /// "inf", "oo" or a positive integer.
  static FileCount parse(const std::string& s);
  friend bool operator==(FileCount, FileCount) = default;

 private:
  explicit FileCount(int f) : f_(f) {}
  int f_;
};

/// (n-k)/n / (1 - (k/n)^f). Throws DimensionError unless 1 <= k < n.
Rational mds_pir_capacity(int n, int k, FileCount f);
/// (nu-kappa) k / (kappa n) / (1 - (kappa/nu)^f); 0 when kappa = nu.
Rational rate_symmetric(int kappa, int nu, int k, int n, FileCount f);
/// (1 - kappa/nu) / (1 - (kappa/nu)^f); 0 when kappa = nu.
Rational rate_asymmetric_A(int kappa, int nu, FileCount f);
/// [sum_p (k_p/k) / C_f(n_p, k_p)]^-1 over the parts of positive dimension.
/// Throws Error when a part is not certified capacity-achieving or has n_p = k_p.
Rational rate_B(const DirectSumDecomposition& d, FileCount f);

struct RateReport {
  std::string code;
  int n = 0, k = 0;
  int kappa = 0, nu = 0;
  FileCount f = FileCount::infinite();
  Rational rs, ra, capacity;
  std::optional<Rational> rb;
  std::optional<Rational> rc;  ///< measured Protocol C rate, shown when it is at least R_A
  int rc_downloads = 0;
};

/// One report per code. R_C comes from the executable Protocol C search and is
/// only defined for f = inf (file-independent plans).
std::vector<RateReport> reproduce_rate_table(const std::vector<std::pair<std::string, LinearCode>>& codes,
                                             FileCount f = FileCount::infinite(), int nu_max = 8);

std::string format_rate_table(const std::vector<RateReport>& rows);
/// code,kappa_nu,RS,RA,RB,RC,capacity
std::string format_rate_table_csv(const std::vector<RateReport>& rows);

}  // namespace pirlab
