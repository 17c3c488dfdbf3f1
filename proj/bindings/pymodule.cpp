#include <pybind11/functional.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "triphase/benchmarks.hpp"
#include "triphase/config.hpp"
#include "triphase/diagnostics.hpp"
#include "triphase/io.hpp"
#include "triphase/nsch.hpp"
#include "triphase/runner.hpp"

namespace py = pybind11;
using namespace triphase;

namespace {

py::array_t<double> fieldArray(const NodalField& f) {
  py::array_t<double> out(f.size());
  std::copy(f.v.begin(), f.v.end(), out.mutable_data());
  return out;
}

NodalField fieldFromArray(const py::array_t<double>& a) {
  const auto buf = a.request();
  NodalField f(static_cast<int>(buf.size));
  const double* src = static_cast<const double*>(buf.ptr);
  std::copy(src, src + buf.size, f.v.begin());
  return f;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Finite-element solver for the penalized multi-component "
            "Cahn-Hilliard system (TD1, NTD1, NTC2 and N-component schemes, "
            "plus the mini-element flow coupling)";

  py::register_exception<MeshError>(m, "MeshError");
  py::register_exception<ParameterError>(m, "ParameterError");
  py::register_exception<ConfigError>(m, "ConfigurationError");
  py::register_exception<SolverError>(m, "SolverFailure");

  py::class_<Rect>(m, "Rect")
      .def(py::init([](double x0, double x1, double y0, double y1) {
             return Rect{x0, x1, y0, y1};
           }),
           py::arg("x0"), py::arg("x1"), py::arg("y0"), py::arg("y1"))
      .def_readonly("x0", &Rect::x0)
      .def_readonly("x1", &Rect::x1)
      .def_readonly("y0", &Rect::y0)
      .def_readonly("y1", &Rect::y1)
      .def("area", &Rect::area);

  py::class_<Mesh, std::shared_ptr<Mesh>>(m, "Mesh")
      .def_property_readonly("num_vertices", &Mesh::numVertices)
      .def_property_readonly("num_triangles", &Mesh::numTriangles)
      .def_readonly("h", &Mesh::h)
      .def_property_readonly("vertices",
                             [](const Mesh& mesh) {
                               py::array_t<double> out({mesh.numVertices(), 2});
                               auto r = out.mutable_unchecked<2>();
                               for (int v = 0; v < mesh.numVertices(); ++v) {
                                 r(v, 0) = mesh.vertices[v].x;
                                 r(v, 1) = mesh.vertices[v].y;
                               }
                               return out;
                             })
      .def_property_readonly("triangles", [](const Mesh& mesh) {
        py::array_t<int> out({mesh.numTriangles(), 3});
        auto r = out.mutable_unchecked<2>();
        for (int t = 0; t < mesh.numTriangles(); ++t)
          for (int k = 0; k < 3; ++k) r(t, k) = mesh.triangles[t][k];
        return out;
      });

  m.def(
      "build_structured_mesh",
      [](const Rect& domain, int nx, int ny) {
        return std::make_shared<Mesh>(buildStructuredMesh(domain, nx, ny));
      },
      py::arg("domain"), py::arg("nx"), py::arg("ny"));

  py::class_<SpreadingCoefficients>(m, "SpreadingCoefficients")
      .def_static("from_values", &SpreadingCoefficients::fromValues)
      .def_static("from_pairwise", &SpreadingCoefficients::fromPairwise, py::arg("s12"),
                  py::arg("s13"), py::arg("s23"))
      .def_readonly("sigma", &SpreadingCoefficients::sigma)
      .def_property_readonly("total", [](const SpreadingCoefficients& s) {
        return s.kind == SpreadingKind::Total;
      });

  py::class_<ModelParams>(m, "ModelParams")
      .def(py::init<>())
      .def_readwrite("epsilon", &ModelParams::epsilon)
      .def_readwrite("penalty", &ModelParams::lambda)
      .def_readwrite("coupling", &ModelParams::bigLambda)
      .def_readwrite("mobility", &ModelParams::mobility)
      .def_readwrite("spreading", &ModelParams::spreading)
      .def_readwrite("tau", &ModelParams::tau)
      .def_readwrite("nu", &ModelParams::nu);

  py::enum_<SchemeId>(m, "Scheme")
      .value("TD1", SchemeId::TD1)
      .value("NTD1", SchemeId::NTD1)
      .value("NTC2", SchemeId::NTC2)
      .value("NCOMP", SchemeId::NCOMP);

  py::enum_<TauMode>(m, "TauMode")
      .value("AUTO", TauMode::Auto)
      .value("EXPLICIT", TauMode::Explicit)
      .value("ZERO", TauMode::Zero);

  py::class_<SchemeConfig>(m, "SchemeConfig")
      .def(py::init<>())
      .def_readwrite("scheme", &SchemeConfig::scheme)
      .def_readwrite("dt", &SchemeConfig::dt)
      .def_readwrite("tau_mode", &SchemeConfig::tauMode)
      .def_readwrite("truncated_potential", &SchemeConfig::truncatedPotential);

  py::class_<PhaseState>(m, "PhaseState")
      .def_readonly("t", &PhaseState::t)
      .def_property_readonly("n", &PhaseState::n)
      .def("phi", [](const PhaseState& s, int i) { return fieldArray(s.phi.at(i)); })
      .def("mu", [](const PhaseState& s, int i) { return fieldArray(s.mu.at(i)); })
      .def("volumes", [](const PhaseState& s) {
        std::vector<double> out;
        for (const auto& f : s.phi) out.push_back(integrate(*s.mesh, f));
        return out;
      });

  py::class_<SchemeWorkspace>(m, "Workspace")
      .def(py::init([](std::shared_ptr<Mesh> mesh) {
             return std::make_unique<SchemeWorkspace>(
                 std::shared_ptr<const Mesh>(std::move(mesh)));
           }),
           py::arg("mesh"));

  m.def(
      "init_state",
      [](std::shared_ptr<Mesh> mesh,
         const std::vector<std::function<double(double, double)>>& ics,
         const ModelParams& params, bool l2) {
        return initState(std::shared_ptr<const Mesh>(std::move(mesh)), ics, params, l2);
      },
      py::arg("mesh"), py::arg("ics"), py::arg("params"), py::arg("l2_projection") = true);
  m.def(
      "init_state_nodal",
      [](std::shared_ptr<Mesh> mesh, const std::vector<py::array_t<double>>& arrays) {
        std::vector<NodalField> phi;
        for (const auto& a : arrays) phi.push_back(fieldFromArray(a));
        return initStateNodal(std::shared_ptr<const Mesh>(std::move(mesh)), std::move(phi));
      },
      py::arg("mesh"), py::arg("phi"));

  m.def("step", &advance, py::arg("state"), py::arg("params"), py::arg("config"),
        py::arg("workspace"), "Advance one time step with the configured scheme.");
  m.def(
      "run",
      [](const PhaseState& s, const ModelParams& p, const SchemeConfig& c, double tEnd,
         SchemeWorkspace& ws) { return run(s, p, c, tEnd, ws); },
      py::arg("state"), py::arg("params"), py::arg("config"), py::arg("t_end"),
      py::arg("workspace"));

  m.def(
      "energy",
      [](const PhaseState& s, const ModelParams& p, bool truncated) {
        return energy(s, p, truncated);
      },
      py::arg("state"), py::arg("params"), py::arg("truncated") = false);
  m.def("constraint_norms", [](const PhaseState& s) {
    const auto cn = constraintNorms(s);
    return py::make_tuple(cn.l2, cn.linf);
  });
  m.def(
      "numerical_dissipation",
      [](const PhaseState& before, const PhaseState& after, const ModelParams& p,
         SchemeId scheme) {
        const auto nd = numericalDissipation(before, after, p, scheme);
        py::dict out;
        out["nd"] = nd.nd;
        out["tau_terms"] = nd.tauTerm;
        out["nd_coupled"] = nd.ndF123;
        out["tnd"] = nd.tnd;
        return out;
      },
      py::arg("before"), py::arg("after"), py::arg("params"), py::arg("scheme"));

  // pointwise chemistry
  m.def("double_well", [](double x) {
    const auto w = doubleWell(x);
    return py::make_tuple(w.F, w.f, w.fp);
  });
  m.def("truncated_double_well", [](double x) {
    const auto w = truncatedDoubleWell(x);
    return py::make_tuple(w.F, w.f, w.fp);
  });
  py::enum_<TauFormula>(m, "TauFormula")
      .value("TRUNCATED", TauFormula::Truncated)
      .value("NON_TRUNCATED", TauFormula::NonTruncated);
  m.def("tau_threshold", &tauThreshold, py::arg("mobility"), py::arg("sigma"),
        py::arg("epsilon"), py::arg("f_prime_bound") = 1.0,
        py::arg("formula") = TauFormula::Truncated);

  // batch interface
  py::class_<RunConfig>(m, "RunConfig")
      .def_readwrite("scheme", &RunConfig::scheme)
      .def_readwrite("dt", &RunConfig::dt)
      .def_readwrite("t_end", &RunConfig::tEnd)
      .def_readwrite("nx", &RunConfig::nx)
      .def_readwrite("ny", &RunConfig::ny)
      .def_readwrite("epsilon", &RunConfig::epsilon)
      .def_readwrite("out_dir", &RunConfig::outDir)
      .def_readwrite("output_stride", &RunConfig::outputStride)
      .def_readwrite("output_fields", &RunConfig::outputFields)
      .def_readwrite("seed", &RunConfig::seed);
  m.def(
      "parse_config", [](const std::string& path) { return parseConfig(path); },
      py::arg("path"));
  m.def("benchmark_defaults",
        [](const std::string& name) { return benchmarkDefaults(benchmarkFromName(name)); });
  m.def("cmd_run", [](const RunConfig& c) {
    const RunOutputs out = cmdRun(c);
    py::dict d;
    d["final_state"] = out.finalState;
    d["csv_path"] = out.csvPath;
    d["rows"] = static_cast<int>(out.records.size());
    return d;
  });
  m.def(
      "cmd_eoc",
      [](const RunConfig& c, const std::vector<double>& dts, double refDt) {
        const EocTable t = cmdEoc(c, dts, refDt);
        py::list rows;
        for (const auto& r : t.rows) {
          py::dict d;
          d["dt"] = r.dt;
          d["e2_phi"] = r.e2Phi;
          d["r2_phi"] = r.r2Phi;
          d["e1_phi"] = r.e1Phi;
          d["r1_phi"] = r.r1Phi;
          d["e2_mu"] = r.e2Mu;
          d["r2_mu"] = r.r2Mu;
          d["e1_mu"] = r.e1Mu;
          d["r1_mu"] = r.r1Mu;
          rows.append(d);
        }
        return rows;
      },
      py::arg("config"), py::arg("dts"), py::arg("ref_dt"));
  m.def("benchmark_catalog", [] {
    std::vector<std::string> names;
    for (BenchmarkId id : benchmarkCatalog()) names.push_back(benchmarkName(id));
    return names;
  });

  m.attr("__version__") = "1.0.0";
}
