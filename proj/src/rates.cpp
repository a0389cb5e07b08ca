#include "pirlab/rates.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include "pirlab/error.hpp"
#include "pirlab/ratematrix.hpp"

namespace pirlab {

FileCount FileCount::finite(int f) {
  if (f < 1) throw DimensionError("file count must be positive");
  return FileCount(f);
}

int FileCount::value() const {
  if (is_infinite()) throw DimensionError("file count is infinite");
  return f_;
}

FileCount FileCount::parse(const std::string& s) {
  if (s == "inf" || s == "oo" || s == "infinity") return infinite();
  std::size_t used = 0;
  int v = 0;
  try {
    v = std::stoi(s, &used);
  } catch (const std::exception&) {
    throw ParseError(0, "bad file count '" + s + "'");
  }
  if (used != s.size() || v < 1) throw ParseError(0, "bad file count '" + s + "'");
  return finite(v);
}

namespace {

// 1 / (1 - x^f), or 1 in the asymptotic regime.
Rational finite_factor(const Rational& x, FileCount f) {
  if (f.is_infinite()) return 1;
  Rational p = 1;
  for (int i = 0; i < f.value(); ++i) p *= x;
  return 1 / (1 - p);
}

void check_kappa_nu(int kappa, int nu) {
  if (kappa < 1 || nu < 1) throw DimensionError("kappa and nu must be positive");
  if (kappa > nu) throw DimensionError("kappa must not exceed nu");
}

}  // namespace

Rational mds_pir_capacity(int n, int k, FileCount f) {
  if (k < 1 || k >= n)
    throw DimensionError("capacity needs 1 <= k < n, got [" + std::to_string(n) + "," + std::to_string(k) + "]");
  return make_rational(n - k, n) * finite_factor(make_rational(k, n), f);
}

Rational rate_symmetric(int kappa, int nu, int k, int n, FileCount f) {
  check_kappa_nu(kappa, nu);
  if (kappa == nu) return 0;
  return make_rational(static_cast<long>(nu - kappa) * k, static_cast<long>(kappa) * n) *
         finite_factor(make_rational(kappa, nu), f);
}

Rational rate_asymmetric_A(int kappa, int nu, FileCount f) {
  check_kappa_nu(kappa, nu);
  if (kappa == nu) return 0;
  return (1 - make_rational(kappa, nu)) * finite_factor(make_rational(kappa, nu), f);
}

Rational rate_B(const DirectSumDecomposition& d, FileCount f) {
  int k = 0;
  for (const auto& p : d.parts) k += p.dimension();
  if (k == 0) throw DimensionError("decomposition has total dimension 0");
  Rational inv_sum = 0;
  for (const auto& p : d.parts) {
    if (p.dimension() == 0) continue;
    if (p.dimension() == p.length())
      throw Error("part " + p.coords.str() + " is a [" + std::to_string(p.length()) + "," +
                  std::to_string(p.dimension()) + "] code with no capacity");
    if (!is_mds_pir_capacity_achieving(p.subcode).achieving)
      throw Error("part " + p.coords.str() + " is not MDS-PIR capacity-achieving");
    inv_sum += make_rational(p.dimension(), k) / mds_pir_capacity(p.length(), p.dimension(), f);
  }
  return 1 / inv_sum;
}

}  // namespace pirlab
