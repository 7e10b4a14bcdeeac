#pragma once

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "chemotaxis/diagnostics.hpp"
#include "chemotaxis/field.hpp"
#include "chemotaxis/mesh.hpp"
#include "chemotaxis/model_params.hpp"

namespace chemotaxis::io {

inline constexpr const char* kSeriesHeader =
    "t,max_u,min_u,mass,max_v,min_v,max_w,min_w,clamped_mass,solver_iters,damping_residual";

/// %.16e: 17 significant digits, enough to round-trip any double.
inline std::string sci(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.16e", x);
  return buf;
}

inline std::string series_csv(const TimeSeries& s) {
  std::ostringstream os;
  os << kSeriesHeader << "\n";
  for (const auto& r : s.rows)
    os << sci(r.t) << ',' << sci(r.max_u) << ',' << sci(r.min_u) << ',' << sci(r.mass) << ',' << sci(r.max_v) << ','
       << sci(r.min_v) << ',' << sci(r.max_w) << ',' << sci(r.min_w) << ',' << sci(r.clamped_mass) << ','
       << r.solver_iters << ',' << sci(r.damping_residual) << "\n";
  return os.str();
}

inline TimeSeries parse_series_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != kSeriesHeader) throw std::runtime_error("series.csv: unexpected header");
  TimeSeries s;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::vector<std::string> cols;
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) cols.push_back(cell);
    if (cols.size() != 11) throw std::runtime_error("series.csv line " + std::to_string(line_no) + ": expected 11 columns");
    auto num = [&](std::size_t i) {
      char* end = nullptr;
      const double v = std::strtod(cols[i].c_str(), &end);
      if (end == cols[i].c_str() || *end != '\0')
        throw std::runtime_error("series.csv line " + std::to_string(line_no) + ": bad number '" + cols[i] + "'");
      return v;
    };
    DiagnosticsRow r;
    r.t = num(0);
    r.max_u = num(1);
    r.min_u = num(2);
    r.mass = num(3);
    r.max_v = num(4);
    r.min_v = num(5);
    r.max_w = num(6);
    r.min_w = num(7);
    r.clamped_mass = num(8);
    r.solver_iters = std::stol(cols[9]);
    r.damping_residual = num(10);
    s.push(r);
  }
  return s;
}

inline std::string verdict_text(const BlowupVerdict& v, const BlowupSettings& s) {
  std::ostringstream os;
  os << "blew_up=" << (v.blew_up ? "true" : "false") << "\n";
  os << "t_max_estimate=" << (v.t_max_estimate ? sci(*v.t_max_estimate) : std::string("none")) << "\n";
  os << "peak_value=" << sci(v.peak_value) << "\n";
  os << "growth=" << sci(v.growth) << "\n";
  os << "growth_factor=" << sci(s.growth_factor) << "\n";
  os << "window=" << s.window << "\n";
  os << "plateau_tol=" << sci(s.plateau_tol) << "\n";
  os << "rationale=" << v.rationale << "\n";
  return os.str();
}

inline std::string regime_text(const ModelParams& p, const RegimeReport& r) {
  std::ostringstream os;
  os << "n=" << p.n << "\ntau=" << p.tau << "\nnonlocal=" << (p.nonlocal ? "true" : "false") << "\n";
  os << "gamma=" << p.gamma << "\n";
  os << "theta_cap=" << sci(r.theta_cap) << "\n";
  os << "gamma_ok=" << (r.gamma_ok ? "true" : "false") << "\n";
  os << "mass_bound=" << (r.mass_bound ? sci(*r.mass_bound) : std::string("none")) << "\n";
  os << "pbar=" << (r.pbar ? sci(*r.pbar) : std::string("none")) << "\n";
  for (const auto& note : r.notes) os << "note=" << note << "\n";
  return os.str();
}

inline constexpr const char* kRegimeCsvHeader = "n,tau,nonlocal,gamma,m2,alpha,m3,beta,theta_cap,gamma_ok,mass_bound,pbar";

inline std::string regime_csv_row(const ModelParams& p, const RegimeReport& r) {
  std::ostringstream os;
  os << p.n << ',' << p.tau << ',' << (p.nonlocal ? 1 : 0) << ',' << sci(p.gamma) << ',' << sci(p.m2) << ','
     << sci(p.alpha) << ',' << sci(p.m3) << ',' << sci(p.beta) << ',' << sci(r.theta_cap) << ','
     << (r.gamma_ok ? "true" : "false") << ',' << (r.mass_bound ? sci(*r.mass_bound) : "") << ','
     << (r.pbar ? sci(*r.pbar) : "");
  return os.str();
}

/// Legacy ASCII VTK unstructured grid. Every cell is written with its own corner
/// points (2, 4 or 8 per cell) as VTK_LINE, VTK_PIXEL or VTK_VOXEL; the named
/// fields follow as CELL_DATA scalars.
inline void write_vtk(std::ostream& os, const Mesh& mesh, const std::vector<std::pair<std::string, const Field*>>& fields,
                      const std::string& title = "chemotaxis") {
  const int dim = mesh.dim();
  const std::size_t corners = std::size_t{1} << dim;
  const int cell_type = dim == 1 ? 3 : dim == 2 ? 8 : 11;
  const auto& dx = mesh.spacing();
  os << "# vtk DataFile Version 3.0\n" << title << "\nASCII\nDATASET UNSTRUCTURED_GRID\n";
  os << "POINTS " << mesh.num_cells() * corners << " double\n";
  for (const auto& c : mesh.cells())
    for (std::size_t k = 0; k < corners; ++k) {
      // Bit a of k selects the upper side along axis a (VTK pixel/voxel ordering).
      double x[3] = {c.center[0], c.center[1], c.center[2]};
      for (int a = 0; a < dim; ++a) x[a] += ((k >> a) & 1u ? 0.5 : -0.5) * dx[a];
      os << sci(x[0]) << ' ' << sci(x[1]) << ' ' << sci(x[2]) << "\n";
    }
  os << "CELLS " << mesh.num_cells() << ' ' << mesh.num_cells() * (corners + 1) << "\n";
  for (std::size_t i = 0; i < mesh.num_cells(); ++i) {
    os << corners;
    for (std::size_t k = 0; k < corners; ++k) os << ' ' << i * corners + k;
    os << "\n";
  }
  os << "CELL_TYPES " << mesh.num_cells() << "\n";
  for (std::size_t i = 0; i < mesh.num_cells(); ++i) os << cell_type << "\n";
  if (fields.empty()) return;
  os << "CELL_DATA " << mesh.num_cells() << "\n";
  for (const auto& [name, field] : fields) {
    field->check_on(mesh);
    os << "SCALARS " << name << " double 1\nLOOKUP_TABLE default\n";
    for (std::size_t i = 0; i < field->size(); ++i) os << sci((*field)[i]) << "\n";
  }
}

inline void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << content;
  if (!out) throw std::runtime_error("error writing '" + path + "'");
}

inline std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace chemotaxis::io
