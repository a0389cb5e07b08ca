#include <iomanip>
#include <sstream>

#include "pirlab/error.hpp"
#include "pirlab/protocol.hpp"
#include "pirlab/ratematrix.hpp"
#include "pirlab/rates.hpp"

namespace pirlab {

std::vector<RateReport> reproduce_rate_table(const std::vector<std::pair<std::string, LinearCode>>& codes,
                                             FileCount f, int nu_max) {
  std::vector<RateReport> out;
  for (const auto& [name, c] : codes) {
    const RateMatrix lam = search_min_rate_matrix(c, nu_max);
    RateReport r;
    r.code = name;
    r.n = c.length();
    r.k = c.dimension();
    r.kappa = lam.kappa;
    r.nu = lam.nu;
    r.f = f;
    r.rs = rate_symmetric(lam.kappa, lam.nu, r.k, r.n, f);
    r.ra = rate_asymmetric_A(lam.kappa, lam.nu, f);
    r.capacity = mds_pir_capacity(r.n, r.k, f);
    const auto d = finest_direct_sum(c);
    if (!d.trivial()) {
      try {
        r.rb = rate_B(d, f);
      } catch (const Error&) {
        // some part is not capacity-achieving: no Protocol B
      }
    }
    if (f.is_infinite()) {
      const PlanCost cost = plan_cost(build_plan_C(c, lam));
      if (cost.rate >= r.ra) {
        r.rc = cost.rate;
        r.rc_downloads = cost.downloads;
      }
    }
    out.push_back(std::move(r));
  }
  return out;
}

namespace {

std::string opt(const std::optional<Rational>& v) { return v ? format_decimal(*v) : "-"; }

}  // namespace

std::string format_rate_table(const std::vector<RateReport>& rows) {
  std::ostringstream os;
  os << std::left << std::setw(8) << "code" << std::setw(9) << "[n,k]" << std::setw(10) << "kappa/nu" << std::setw(8)
     << "R_S" << std::setw(8) << "R_A" << std::setw(8) << "R_B" << std::setw(8) << "R_C"
     << "capacity\n";
  for (const auto& r : rows) {
    os << std::left << std::setw(8) << r.code << std::setw(9)
       << ("[" + std::to_string(r.n) + "," + std::to_string(r.k) + "]") << std::setw(10)
       << (std::to_string(r.kappa) + "/" + std::to_string(r.nu)) << std::setw(8) << format_decimal(r.rs)
       << std::setw(8) << format_decimal(r.ra) << std::setw(8) << opt(r.rb) << std::setw(8) << opt(r.rc)
       << format_decimal(r.capacity) << "\n";
  }
  return os.str();
}

std::string format_rate_table_csv(const std::vector<RateReport>& rows) {
  std::ostringstream os;
  os << "code,kappa_nu,RS,RA,RB,RC,capacity\n";
  for (const auto& r : rows) {
    os << r.code << "," << r.kappa << "/" << r.nu << "," << format_decimal(r.rs) << "," << format_decimal(r.ra) << ","
       << (r.rb ? format_decimal(*r.rb) : "") << "," << (r.rc ? format_decimal(*r.rc) : "") << ","
       << format_decimal(r.capacity) << "\n";
  }
  return os.str();
}

}  // namespace pirlab
