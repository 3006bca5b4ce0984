#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "twistcoh/cli.hpp"
#include "twistcoh/gerbe.hpp"
#include "twistcoh/io.hpp"
#include "twistcoh/linalg.hpp"
#include "twistcoh/smith.hpp"
#include "twistcoh/twisted.hpp"

namespace py = pybind11;
using namespace twistcoh;

namespace {

Rational to_rational(const py::handle& h) {
  if (py::isinstance<py::int_>(h)) return parse_rational(py::str(h).cast<std::string>());
  if (py::isinstance<py::str>(h)) return parse_rational(h.cast<std::string>());
  throw py::type_error("matrix entries must be int or 'p/q' strings");
}

SparseMatrix to_matrix(const py::sequence& rows, std::size_t cols_if_empty = 0) {
  std::vector<std::vector<Rational>> dense;
  for (const auto& r : rows) {
    std::vector<Rational> row;
    for (const auto& x : r.cast<py::sequence>()) row.push_back(to_rational(x));
    if (!dense.empty() && row.size() != dense[0].size()) throw py::value_error("ragged matrix");
    dense.push_back(std::move(row));
  }
  if (dense.empty()) return SparseMatrix::zero(0, cols_if_empty);
  return SparseMatrix::from_dense(dense);
}

py::tuple run(const std::string& command, const std::string& input, const std::string& lambda,
              const std::string& presheaf, const std::string& functor, const std::string& fixtures, int max_degree,
              int p_min, int p_max, py::object seed) {
  cli::RunConfig c;
  c.command = command;
  c.input = input;
  c.lambda = lambda;
  c.presheaf = presheaf;
  c.functor = functor;
  c.fixtures = fixtures;
  c.max_degree = max_degree;
  c.p_min = p_min;
  c.p_max = p_max;
  if (!seed.is_none()) {
    c.seed = seed.cast<std::uint64_t>();
    c.seeded = true;
  }
  cli::RunResult r;
  {
    py::gil_scoped_release release;
    r = cli::run(c);
  }
  return py::make_tuple(r.exit_code, r.report.dump());
}

}  // namespace

PYBIND11_MODULE(_twistcoh, m) {
  m.doc() = "Exact twisted de Rham, gerbe and finite-site computations";

  m.def("run", &run, py::arg("command"), py::arg("input") = "", py::arg("lambda_") = "", py::arg("presheaf") = "",
        py::arg("functor") = "", py::arg("fixtures") = "", py::arg("max_degree") = -1, py::arg("p_min") = 1,
        py::arg("p_max") = -1, py::arg("seed") = py::none(),
        "Run a command; returns (exit code, JSON report text).");

  m.def("fixture_directory", [] { return io::FixtureLibrary::default_directory().string(); });

  m.def("rank", [](const py::sequence& rows) { return rank(to_matrix(rows)); }, py::arg("rows"));
  m.def("kernel_dim", [](const py::sequence& rows, std::size_t cols) { return kernel_basis(to_matrix(rows, cols)).dim(); },
        py::arg("rows"), py::arg("cols") = 0);
  m.def("smith_invariants",
        [](const py::sequence& rows) {
          std::vector<std::string> out;
          for (const auto& d : smith_normal_form(to_matrix(rows)).invariants) out.push_back(d.get_str());
          return out;
        },
        py::arg("rows"));

  m.def("twisted_betti",
        [](const std::string& cdga_json, const std::vector<std::pair<std::size_t, std::string>>& lambda) {
          CdgaPtr c = io::cdga_from_json(io::Json::parse(cdga_json));
          SparseVector v;
          for (const auto& [i, q] : lambda) v = v + SparseVector::unit(i, parse_rational(q));
          auto b = twisted_betti(two_periodic_complex(make_twist(c, v)));
          return std::make_pair(b[0], b[1]);
        },
        py::arg("cdga_json"), py::arg("lambda_"));

  m.def("bs1_dims", [](int max_degree) { return bs1_bar_complex(max_degree).dims; }, py::arg("max_degree"));

  static py::exception<io::ParseError> parse_error(m, "ParseError", PyExc_ValueError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const io::ParseError& e) {
      py::set_error(parse_error, e.what());
    } catch (const nlohmann::json::exception& e) {
      py::set_error(parse_error, e.what());
    }
  });
}
