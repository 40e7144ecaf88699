// Python bindings.  Vectors cross the boundary as lists; integer results
// stay Python ints so large determinants are exact.

#include "cfnc/baselines.hpp"
#include "cfnc/fp_enum.hpp"
#include "cfnc/montecarlo.hpp"
#include "cfnc/nc_builder.hpp"

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cstdint>
#include <string>
#include <vector>

namespace py = pybind11;
using namespace cfnc;

namespace {

using Ints = std::vector<std::int64_t>;
using Reals = std::vector<double>;

RateUnits units_of(const std::string& s) { return parse_rate_units(s); }

Ints ints(const CodingVector& a) { return {a.entries().begin(), a.entries().end()}; }

std::vector<Ints> ints(const SystemMatrix& m) {
  std::vector<Ints> out;
  for (const auto& row : m.rows()) out.push_back(ints(row));
  return out;
}

py::int_ to_pyint(const BigInt& v) {
  return py::reinterpret_steal<py::int_>(PyLong_FromString(v.str().c_str(), nullptr, 10));
}

ChannelRealization realization(const std::vector<Reals>& channels, double p_db, const std::string& units) {
  std::vector<ChannelVector> hs;
  for (std::size_t m = 0; m < channels.size(); ++m) hs.emplace_back(channels[m], static_cast<int>(m));
  return ChannelRealization(std::move(hs), Power::from_db(p_db), units_of(units));
}

std::vector<CandidateTable> tables_for(const std::vector<Reals>& channels, double p_db, std::size_t t_max,
                                       const std::string& units) {
  std::vector<CandidateTable> out;
  for (std::size_t m = 0; m < channels.size(); ++m) {
    out.push_back(candidate_set(ChannelVector(channels[m], static_cast<int>(m)), Power::from_db(p_db), t_max,
                                units_of(units)));
  }
  return out;
}

py::dict table_dict(const CandidateTable& t) {
  py::dict d;
  std::vector<Ints> vs;
  for (const auto& v : t.vectors) vs.push_back(ints(v));
  d["relay"] = t.relay_index;
  d["vectors"] = vs;
  d["rates"] = t.rates;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Compute-and-forward network coding: rates, lattice search and system-matrix construction";

  py::register_exception<NumericError>(m, "NumericError", PyExc_ArithmeticError);
  py::register_exception<CholeskyError>(m, "CholeskyError", PyExc_ArithmeticError);
  py::register_exception<CapacityError>(m, "CapacityError", PyExc_RuntimeError);

  m.def(
      "gram_matrix", [](const Reals& h, double p_db) { return gram_matrix(ChannelVector(h), Power::from_db(p_db)).entries(); },
      py::arg("h"), py::arg("p_db"));

  m.def(
      "computation_rate",
      [](const Reals& h, const Ints& a, double p_db, const std::string& units) {
        return computation_rate(ChannelVector(h), CodingVector(a), Power::from_db(p_db), units_of(units));
      },
      py::arg("h"), py::arg("a"), py::arg("p_db"), py::arg("units") = "bits");

  m.def(
      "beta_mmse",
      [](const Reals& h, const Ints& a, double p_db) {
        return beta_mmse(ChannelVector(h), CodingVector(a), Power::from_db(p_db));
      },
      py::arg("h"), py::arg("a"), py::arg("p_db"));

  m.def(
      "enumerate_ellipsoid",
      [](const Eigen::MatrixXd& g, double radius) {
        std::vector<Ints> out;
        for (const auto& t : enumerate_ellipsoid(cholesky(g), radius)) out.push_back(ints(t));
        return out;
      },
      py::arg("gram"), py::arg("radius"), "One vector per +- pair with t^T G t <= radius.");

  m.def("initial_radius", [](const Eigen::MatrixXd& g) { return initial_radius(g); }, py::arg("gram"));

  m.def(
      "candidate_set",
      [](const Reals& h, double p_db, std::size_t t_max, const std::string& units) {
        return table_dict(candidate_set(ChannelVector(h), Power::from_db(p_db), t_max, units_of(units)));
      },
      py::arg("h"), py::arg("p_db"), py::arg("t_max"), py::arg("units") = "bits");

  m.def(
      "determinant",
      [](const std::vector<Ints>& rows) {
        std::vector<CodingVector> vs;
        for (const auto& r : rows) vs.emplace_back(r);
        return to_pyint(exact_determinant(vs));
      },
      py::arg("rows"), "Exact integer determinant.");

  m.def(
      "construct_system_matrix",
      [](const std::vector<Reals>& channels, double p_db, std::size_t t_max, const std::string& units) -> py::object {
        const auto tables = tables_for(channels, p_db, t_max, units);
        const auto out = construct_system_matrix(tables);
        if (!out) return py::none();
        py::dict d;
        d["matrix"] = ints(out->matrix);
        d["bottleneck_rate"] = out->bottleneck_rate;
        d["chosen"] = out->chosen;
        d["determinant"] = to_pyint(out->matrix.determinant());
        py::list ts;
        for (const auto& t : tables) ts.append(table_dict(t));
        d["tables"] = ts;
        return d;
      },
      py::arg("channels"), py::arg("p_db"), py::arg("t_max") = 5, py::arg("units") = "bits",
      "Max-min full-rank matrix for one channel realization, or None.");

  m.def(
      "evaluate_strategy",
      [](const std::string& strategy, const std::vector<Reals>& channels, double p_db, std::size_t t_max,
         const std::string& units) {
        const auto res = evaluate_strategy(parse_strategy(strategy), realization(channels, p_db, units), t_max);
        py::dict d;
        d["rate"] = res.rate;
        d["rank_ok"] = res.rank_ok;
        d["matrix"] = res.matrix ? py::cast(ints(*res.matrix)) : py::none();
        return d;
      },
      py::arg("strategy"), py::arg("channels"), py::arg("p_db"), py::arg("t_max") = 5, py::arg("units") = "bits");

  m.def(
      "run_experiment",
      [](std::size_t relays, const Reals& p_db, std::size_t trials, std::size_t t_max, std::uint64_t seed,
         const std::string& units, const std::vector<std::string>& strategies, unsigned workers) {
        ExperimentConfig cfg;
        cfg.relays = relays;
        cfg.p_db = p_db;
        cfg.trials = trials;
        cfg.t_max = t_max;
        cfg.seed = seed;
        cfg.units = units_of(units);
        cfg.workers = workers;
        if (!strategies.empty()) {
          cfg.strategies.clear();
          for (const auto& s : strategies) cfg.strategies.push_back(parse_strategy(s));
        }
        std::vector<AggregateRow> rows;
        {
          py::gil_scoped_release release;
          rows = run_experiment(cfg);
        }
        py::list out;
        for (const auto& row : rows) {
          py::dict d, rates;
          d["p_db"] = row.p_db;
          d["trials"] = row.trials;
          for (const auto& [s, est] : row.rates) rates[to_string(s)] = py::make_tuple(est.mean, est.std_error);
          d["rates"] = rates;
          d["rank_failure_probability"] = row.rank_failure_probability;
          d["rank_failure_stderr"] = row.rank_failure_stderr;
          out.append(d);
        }
        return out;
      },
      py::arg("relays") = 3, py::arg("p_db") = Reals{0.0}, py::arg("trials") = 10000, py::arg("t_max") = 5,
      py::arg("seed") = 1, py::arg("units") = "bits", py::arg("strategies") = std::vector<std::string>{},
      py::arg("workers") = 0);

#ifdef VERSION_INFO
#define CFNC_STR(x) #x
#define CFNC_XSTR(x) CFNC_STR(x)
  m.attr("__version__") = CFNC_XSTR(VERSION_INFO);
#else
  m.attr("__version__") = "dev";
#endif
}
