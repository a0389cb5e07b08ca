#include <sstream>

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "pirlab/audit.hpp"
#include "pirlab/corpus.hpp"
#include "pirlab/dss.hpp"
#include "pirlab/error.hpp"
#include "pirlab/protocol.hpp"
#include "pirlab/ratematrix.hpp"
#include "pirlab/rates.hpp"

namespace py = pybind11;
using namespace pirlab;

namespace {

py::object fraction(const Rational& r) {
  static py::object frac = py::module_::import("fractions").attr("Fraction");
  py::object to_int = py::module_::import("builtins").attr("int");
  return frac(to_int(numerator(r).str()), to_int(denominator(r).str()));
}

FileCount files_arg(const py::object& f) {
  if (f.is_none()) return FileCount::infinite();
  return FileCount::finite(f.cast<int>());
}

std::vector<std::vector<int>> rows_of(const Matrix& m) {
  std::vector<std::vector<int>> out;
  for (int i = 0; i < m.rows(); ++i) out.emplace_back(m.row(i).begin(), m.row(i).end());
  return out;
}

LinearCode load(const std::string& spec) {
  if (auto c = corpus_code(spec)) return *c;
  return code_parse(spec);
}

RateMatrix lambda_for(const LinearCode& c, const std::optional<std::string>& text) {
  if (!text) return search_min_rate_matrix(c);
  auto v = validate_rate_matrix(c, parse_rate_matrix(*text));
  if (auto* bad = std::get_if<Violation>(&v)) throw PlanError(bad->what);
  return std::get<RateMatrix>(v);
}

RoundPlan build(const LinearCode& c, const std::string& protocol, const std::optional<std::string>& hints,
                const std::optional<std::string>& lam) {
  if (protocol == "B") return build_plan_B(c);
  const RateMatrix m = lambda_for(c, lam);
  if (protocol == "S") return build_plan_symmetric(c, m);
  if (protocol == "A") return build_plan_A(c, m);
  if (protocol == "C") return build_plan_C(c, m, hints ? parse_plan_hints(*hints) : std::vector<RoundHint>{});
  throw PlanError("unknown protocol '" + protocol + "'");
}

py::dict report_dict(const RunReport& r) {
  py::dict d;
  d["seed"] = r.seed;
  d["downloads"] = r.downloads;
  d["per_node"] = r.per_node;
  d["rate"] = fraction(r.rate);
  d["success"] = r.success;
  d["decoded"] = rows_of(r.decoded);
  std::ostringstream os;
  write_trace(os, r);
  d["trace"] = os.str();
  return d;
}

py::dict verdict_dict(const AuditVerdict& v) {
  py::dict d;
  d["check"] = v.check;
  d["passed"] = v.pass;
  d["text"] = v.text();
  d["json"] = v.json();
  if (v.failing_round) d["failing_round"] = *v.failing_round;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Linear storage codes and private information retrieval";

  py::register_exception<Error>(m, "PirlabError", PyExc_ValueError);

  py::class_<LinearCode>(m, "LinearCode")
      .def_static("parse", &load, py::arg("spec"), "corpus name or code-spec text")
      .def_property_readonly("n", &LinearCode::length)
      .def_property_readonly("k", &LinearCode::dimension)
      .def_property_readonly("q", [](const LinearCode& c) { return c.field().order(); })
      .def_property_readonly("generator", [](const LinearCode& c) { return rows_of(c.generator()); })
      .def("information_sets",
           [](const LinearCode& c) {
             std::vector<std::vector<int>> out;
             for (const auto& s : enumerate_information_sets(c)) out.push_back(s.coords());
             return out;
           })
      .def("weight_hierarchy", &weight_hierarchy)
      .def("direct_sum",
           [](const LinearCode& c) {
             std::vector<std::tuple<std::vector<int>, int, int>> out;
             for (const auto& p : finest_direct_sum(c).parts) out.emplace_back(p.coords.coords(), p.length(), p.dimension());
             return out;
           })
      .def("capacity_achieving", [](const LinearCode& c) { return is_mds_pir_capacity_achieving(c).achieving; })
      .def("rate_matrix",
           [](const LinearCode& c, int nu_max) {
             const RateMatrix lam = search_min_rate_matrix(c, nu_max);
             py::dict d;
             d["kappa"] = lam.kappa;
             d["nu"] = lam.nu;
             d["text"] = format_rate_matrix(lam);
             return d;
           },
           py::arg("nu_max") = 8)
      .def("format", &code_format)
      .def("__repr__", &LinearCode::describe);

  m.def("corpus_names", [] {
    std::vector<std::string> out;
    for (const auto& e : corpus()) out.push_back(e.name);
    return out;
  });

  m.def("mds_pir_capacity", [](int n, int k, const py::object& f) { return fraction(mds_pir_capacity(n, k, files_arg(f))); },
        py::arg("n"), py::arg("k"), py::arg("f") = py::none(), "f=None is the asymptotic regime");
  m.def("rate_symmetric",
        [](int kappa, int nu, int k, int n, const py::object& f) {
          return fraction(rate_symmetric(kappa, nu, k, n, files_arg(f)));
        },
        py::arg("kappa"), py::arg("nu"), py::arg("k"), py::arg("n"), py::arg("f") = py::none());
  m.def("rate_asymmetric_A",
        [](int kappa, int nu, const py::object& f) { return fraction(rate_asymmetric_A(kappa, nu, files_arg(f))); },
        py::arg("kappa"), py::arg("nu"), py::arg("f") = py::none());
  m.def("rate_table_csv", [] {
    std::vector<std::pair<std::string, LinearCode>> codes;
    for (const auto& n : table_code_names()) codes.emplace_back(n, *corpus_code(n));
    return format_rate_table_csv(reproduce_rate_table(codes));
  });

  py::class_<RoundPlan>(m, "Plan")
      .def_property_readonly("protocol", [](const RoundPlan& p) { return protocol_name(p.protocol); })
      .def_property_readonly("downloads", &RoundPlan::downloads)
      .def_property_readonly("rate", [](const RoundPlan& p) { return fraction(plan_cost(p).rate); })
      .def_property_readonly("target", [](const RoundPlan& p) { return p.target.coords(); })
      .def("format", &format_plan)
      .def("response_grid", &response_grid)
      .def("simulate", [](const RoundPlan& p, int files, int m, std::uint64_t seed) { return report_dict(simulate(p, files, m, seed).report); },
           py::arg("files"), py::arg("m"), py::arg("seed"))
      .def("audit_privacy",
           [](const RoundPlan& p, int files, const std::string& mode) {
             return verdict_dict(audit_privacy(p, files, parse_audit_mode(mode)));
           },
           py::arg("files") = 2, py::arg("mode") = "exhaustive")
      .def("audit_recovery",
           [](const RoundPlan& p, int files, int trials, std::uint64_t seed) {
             return verdict_dict(audit_recovery(p, files, trials, seed));
           },
           py::arg("files") = 2, py::arg("trials") = 100, py::arg("seed") = 1);

  m.def("build_plan", &build, py::arg("code"), py::arg("protocol"), py::arg("hints") = py::none(),
        py::arg("rate_matrix") = py::none(), "protocol is one of S, A, B, C");

  m.def("golden_schedule",
        [](bool pruned, std::uint64_t seed) {
          const auto g = golden_f2_plan_5_3(pruned);
          py::dict d = report_dict(simulate_golden(g, seed).report);
          d["privacy"] = verdict_dict(audit_privacy_golden(g));
          return d;
        },
        py::arg("pruned") = false, py::arg("seed") = 1);
}
