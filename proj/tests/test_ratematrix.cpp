#include <functional>

#include "pirlab/corpus.hpp"
#include "pirlab/error.hpp"
#include "pirlab/ratematrix.hpp"
#include "test_support.hpp"

using namespace pirlab;

namespace {

LinearCode code(const char* name) { return *corpus_code(name); }

// Does some multiset of nu information sets cover each coordinate at most kappa times?
bool packing_oracle(const LinearCode& c, int kappa, int nu) {
  const auto bases = enumerate_information_sets(c);
  std::vector<int> cover(c.length(), 0);
  std::function<bool(int, std::size_t)> rec = [&](int left, std::size_t from) {
    if (left == 0) return true;
    for (std::size_t b = from; b < bases.size(); ++b) {
      bool ok = true;
      for (int j : bases[b]) ok = ok && cover[j - 1] < kappa;
      if (!ok) continue;
      for (int j : bases[b]) ++cover[j - 1];
      const bool found = rec(left - 1, b);
      for (int j : bases[b]) --cover[j - 1];
      if (found) return true;
    }
    return false;
  };
  return rec(nu, 0);
}

RateMatrix valid(const LinearCode& c, const Matrix& m) {
  auto v = validate_rate_matrix(c, m);
  REQUIRE(std::holds_alternative<RateMatrix>(v));
  return std::get<RateMatrix>(v);
}

}  // namespace

TEST_CASE("printed rate matrices validate") {
  const auto l1 = valid(code("C1"), Matrix::from_rows({{0, 1, 1, 1, 1}, {1, 0, 0, 1, 1}, {1, 1, 1, 0, 0}}));
  CHECK(l1.kappa == 2);
  CHECK(l1.nu == 3);
  CHECK(l1.certificates[0] == CoordSet{2, 3, 4});

  const auto l2 = valid(code("C2"), Matrix::from_rows({{0, 1, 0, 0, 0, 1, 1, 1, 1},
                                                       {1, 0, 1, 1, 1, 1, 1, 1, 1},
                                                       {1, 1, 1, 1, 1, 0, 0, 0, 0}}));
  CHECK(l2.kappa == 2);
  CHECK(l2.certificates[0] == CoordSet{2, 6, 7, 8, 9});
  CHECK(l2.certificates[1] == CoordSet{1, 3, 4, 5, 9});
  CHECK(l2.certificates[2] == CoordSet{1, 2, 3, 4, 5});

  for (const auto& e : corpus()) {
    const LinearCode c = code_parse(e.spec);
    Matrix ones(1, c.length());
    for (int j = 0; j < c.length(); ++j) ones(0, j) = 1;
    const auto l = valid(c, ones);
    CHECK(l.kappa == 1);
    CHECK(l.nu == 1);
  }
}

TEST_CASE("violations name the failing part") {
  const LinearCode c1 = code("C1");
  auto v = validate_rate_matrix(c1, Matrix::from_rows({{0, 1, 1, 1, 1}, {1, 0, 0, 1, 1}, {1, 1, 1, 0, 1}}));
  REQUIRE(std::holds_alternative<Violation>(v));
  CHECK(std::get<Violation>(v).column == 5);

  v = validate_rate_matrix(c1, Matrix::from_rows({{1, 1, 0, 1, 0}, {0, 0, 1, 0, 1}}));
  REQUIRE(std::holds_alternative<Violation>(v));
  CHECK(std::get<Violation>(v).row == 1);

  v = validate_rate_matrix(c1, Matrix::from_rows({{2, 1, 1, 1, 1}}));
  CHECK(std::holds_alternative<Violation>(v));
  CHECK_THROWS_AS(validate_rate_matrix(c1, Matrix(1, 4)), DimensionError);
}

TEST_CASE("text format round trip") {
  const auto lam = search_min_rate_matrix(code("C3"));
  const std::string text = format_rate_matrix(lam);
  CHECK(text.substr(0, 6) == "3 5 7\n");
  CHECK(parse_rate_matrix(text) == lam.as_matrix());
  CHECK_THROWS_AS(parse_rate_matrix("2 3 5\n01111\n10011\n"), ParseError);
  CHECK_THROWS_AS(parse_rate_matrix("2 3 5\n01111\n10011\n11101\n"), ParseError);
  CHECK_THROWS_AS(parse_rate_matrix("2 3\n"), ParseError);
}

TEST_CASE("minimal kappa/nu of the table codes") {
  const std::vector<std::pair<const char*, std::pair<int, int>>> expected = {
      {"C1", {2, 3}}, {"C2", {2, 3}}, {"C3", {3, 5}}, {"C4", {3, 4}}, {"rep2_1", {1, 2}},
      {"spc3_2", {2, 3}}, {"spc5_4", {4, 5}}};
  for (const auto& [name, frac] : expected) {
    CAPTURE(name);
    const LinearCode c = code(name);
    const auto lam = search_min_rate_matrix(c);
    CHECK(lam.kappa == frac.first);
    CHECK(lam.nu == frac.second);
    // round trip and counting bound
    const auto again = valid(c, lam.as_matrix());
    CHECK(again.rows == lam.rows);
    CHECK(lam.kappa * c.length() >= lam.nu * c.dimension());
    for (int i = 0; i < lam.nu; ++i) CHECK(lam.certificates[i].subset_of(lam.rows[i]));
  }
}

TEST_CASE("search is optimal against an exhaustive packing sweep") {
  for (const char* name : {"C1", "C2", "C3", "rep2_1", "spc3_2"}) {
    CAPTURE(name);
    const LinearCode c = code(name);
    const auto lam = search_min_rate_matrix(c, 5);
    for (int nu = 1; nu <= 5; ++nu)
      for (int kappa = 1; kappa <= nu; ++kappa) {
        if (kappa * lam.nu >= lam.kappa * nu) continue;  // not smaller than the result
        CAPTURE(kappa);
        CAPTURE(nu);
        CHECK_FALSE(packing_oracle(c, kappa, nu));
        CHECK_FALSE(find_rate_matrix(c, kappa, nu));
      }
    CHECK(packing_oracle(c, lam.kappa, lam.nu));
  }
  // C4: 2/3 is the only smaller fraction with nu <= 4 above 6/11
  CHECK_FALSE(packing_oracle(code("C4"), 2, 3));
  CHECK(packing_oracle(code("C4"), 3, 4));
}

TEST_CASE("capacity-achieving certificates") {
  for (const char* name : {"rep2_1", "spc3_2", "spc5_4"}) {
    CAPTURE(name);
    const auto cert = is_mds_pir_capacity_achieving(code(name));
    CHECK(cert.achieving);
    REQUIRE(cert.matrix);
    CHECK(cert.matrix->kappa * code(name).length() == cert.matrix->nu * code(name).dimension());
  }
  const auto g_prime = puncture(code("C2"), {1, 2, 4, 5, 9});
  CHECK(is_mds_pir_capacity_achieving(g_prime).achieving);
  for (const char* name : {"C1", "C2", "C3", "C4"}) {
    CAPTURE(name);
    CHECK_FALSE(is_mds_pir_capacity_achieving(code(name)).achieving);
  }
}

TEST_CASE("GHW necessary condition") {
  auto c2 = ghw_necessary_condition(code("C2"));
  CHECK_FALSE(c2.holds);
  CHECK(c2.first_failing_s == 2);
  CHECK(c2.hierarchy[1] == 3);
  CHECK(ghw_necessary_condition(code("C3")).first_failing_s == 3);
  // d_2 = 3 < 22/6 already fails for C4; d_3 = 4 < 33/6 fails as well
  const auto c4 = ghw_necessary_condition(code("C4"));
  CHECK(c4.first_failing_s == 2);
  CHECK(c4.hierarchy[2] * 6 < 11 * 3);
  CHECK(ghw_necessary_condition(code("rep2_1")).holds);

  // no false accepts: certified implies the condition
  for (const auto& e : corpus()) {
    const LinearCode c = code_parse(e.spec);
    CAPTURE(e.name);
    if (is_mds_pir_capacity_achieving(c).achieving) CHECK(ghw_necessary_condition(c).holds);
  }
}
