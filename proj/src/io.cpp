#include "triphase/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace triphase {

namespace {

std::string sci9(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.8e", v);
  return buf;
}

}  // namespace

std::string formatCsvValue(double v) { return sci9(v); }

std::ofstream DiagnosticsCsv::stream() {
  std::ofstream out(path_, std::ios::app);
  if (!out) throw IoError("cannot open for writing: " + path_);
  return out;
}

DiagnosticsCsv::DiagnosticsCsv(const std::string& path, int nPhases)
    : path_(path), n_(nPhases) {
  std::ofstream out(path_, std::ios::trunc);
  if (!out) throw IoError("cannot open for writing: " + path_);
  out << "t,E,E_trunc,E_kin";
  for (int i = 1; i <= n_; ++i) out << ",vol_" << i;
  out << ",constraint_l2,constraint_linf,tnd,energy_law_residual\n";
}

void DiagnosticsCsv::writeRow(const DiagnosticsRecord& rec) {
  if (static_cast<int>(rec.volumes.size()) != n_)
    throw IoError("diagnostics row phase count does not match header");
  auto out = stream();
  out << sci9(rec.t) << ',' << sci9(rec.E) << ',' << sci9(rec.Etrunc) << ','
      << sci9(rec.Ekin);
  for (double v : rec.volumes) out << ',' << sci9(v);
  out << ',' << sci9(rec.constraintL2) << ',' << sci9(rec.constraintLinf) << ','
      << sci9(rec.tnd) << ',' << sci9(rec.energyLawResidual) << '\n';
  out.flush();
  ++rows_;
}

void writeFields(const PhaseState& state, const FlowState* flow, const std::string& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot open for writing: " + path);
  const Mesh& mesh = *state.mesh;

  out << "# vtk DataFile Version 3.0\n";
  out << "triphase fields t=" << sci9(state.t) << "\n";
  out << "ASCII\n";
  out << "DATASET UNSTRUCTURED_GRID\n";
  out << "POINTS " << mesh.numVertices() << " double\n";
  for (const Vec2& v : mesh.vertices)
    out << sci9(v.x) << ' ' << sci9(v.y) << ' ' << sci9(0.0) << '\n';
  out << "CELLS " << mesh.numTriangles() << ' ' << 4 * mesh.numTriangles() << '\n';
  for (const auto& t : mesh.triangles) out << "3 " << t[0] << ' ' << t[1] << ' ' << t[2] << '\n';
  out << "CELL_TYPES " << mesh.numTriangles() << '\n';
  for (int t = 0; t < mesh.numTriangles(); ++t) out << "5\n";

  out << "POINT_DATA " << mesh.numVertices() << '\n';
  auto scalars = [&out, &mesh](const std::string& name, const NodalField& f) {
    out << "SCALARS " << name << " double 1\n";
    out << "LOOKUP_TABLE default\n";
    for (int v = 0; v < mesh.numVertices(); ++v) out << sci9(f[v]) << '\n';
  };
  for (int i = 0; i < state.n(); ++i) scalars("phi_" + std::to_string(i + 1), state.phi[i]);
  for (int i = 0; i < state.n(); ++i) scalars("mu_" + std::to_string(i + 1), state.mu[i]);
  if (state.n() == 3) {
    NodalField comp(mesh.numVertices());
    for (int v = 0; v < mesh.numVertices(); ++v)
      comp[v] = 0.5 * state.phi[2][v] + state.phi[0][v];
    scalars("composite", comp);
  }
  if (flow) {
    out << "VECTORS velocity double\n";
    for (int v = 0; v < mesh.numVertices(); ++v)
      out << sci9(flow->ux[v]) << ' ' << sci9(flow->uy[v]) << ' ' << sci9(0.0) << '\n';
  }
  if (!out) throw IoError("write failed: " + path);
}

VtkSummary readVtkSummary(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open: " + path);
  VtkSummary s;
  std::string line;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::string tok;
    ls >> tok;
    if (tok == "POINTS") {
      ls >> s.points;
    } else if (tok == "CELLS") {
      ls >> s.cells;
    } else if (tok == "SCALARS") {
      std::string name;
      ls >> name;
      s.pointArrays.push_back(name);
    } else if (tok == "VECTORS") {
      s.hasVelocity = true;
    }
  }
  return s;
}

void writeEocCsv(const EocTable& table, std::ostream& os) {
  os << "dt,e2_phi,r2_phi,e1_phi,r1_phi,e2_mu,r2_mu,e1_mu,r1_mu\n";
  bool first = true;
  for (const EocRow& r : table.rows) {
    os << sci9(r.dt) << ',' << sci9(r.e2Phi) << ',';
    os << (first ? "-" : sci9(r.r2Phi)) << ',' << sci9(r.e1Phi) << ','
       << (first ? "-" : sci9(r.r1Phi)) << ',' << sci9(r.e2Mu) << ','
       << (first ? "-" : sci9(r.r2Mu)) << ',' << sci9(r.e1Mu) << ','
       << (first ? "-" : sci9(r.r1Mu)) << '\n';
    first = false;
  }
}

}  // namespace triphase
