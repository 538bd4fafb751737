#include "wgf/io.hpp"

#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>

#include "wgf/errors.hpp"

namespace wgf {

namespace {

std::ofstream open_out(const std::string& path, bool binary) {
  std::ofstream f(path, binary ? std::ios::binary : std::ios::out);
  if (!f) throw Error("cannot open '" + path + "' for writing");
  return f;
}

void append17(std::string& s, double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  s += buf;
}

}  // namespace

void write_snapshot_csv(const std::string& path, const DensityField& rho,
                        const GridSpec& g) {
  check_conforms(rho, g, "write_snapshot_csv");
  auto f = open_out(path, false);
  std::string out;
  out.reserve(rho.size() * 48);
  if (g.dim == 1) {
    out += "x,rho\n";
    for (int i = 0; i < g.n; ++i) {
      append17(out, g.cell_center(i));
      out += ',';
      append17(out, rho.values[i]);
      out += '\n';
    }
  } else {
    out += "x,y,rho\n";
    for (int j = 0; j < g.n; ++j)
      for (int i = 0; i < g.n; ++i) {
        auto c = g.cell_center2(i, j);
        append17(out, c[0]);
        out += ',';
        append17(out, c[1]);
        out += ',';
        append17(out, rho.values[g.cell_index(i, j)]);
        out += '\n';
      }
  }
  f << out;
  if (!f) throw Error("write failed for '" + path + "'");
}

void write_snapshot_binary(const std::string& path, const DensityField& rho,
                           const GridSpec& g) {
  check_conforms(rho, g, "write_snapshot_binary");
  auto f = open_out(path, true);
  char header[16] = {'W', 'G', 'F', '1'};
  std::uint32_t dim = g.dim, nx = g.n, ny = g.dim == 2 ? g.n : 1;
  std::memcpy(header + 4, &dim, 4);
  std::memcpy(header + 8, &nx, 4);
  std::memcpy(header + 12, &ny, 4);
  f.write(header, 16);
  f.write(reinterpret_cast<const char*>(rho.values.data()),
          static_cast<std::streamsize>(rho.values.size() * sizeof(double)));
  if (!f) throw Error("write failed for '" + path + "'");
}

DensityField read_snapshot_binary(const std::string& path, int& dim, int& nx,
                                  int& ny) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw Error("cannot open '" + path + "' for reading");
  char header[16];
  f.read(header, 16);
  if (!f || std::memcmp(header, "WGF1", 4) != 0)
    throw Error("'" + path + "' is not a WGF1 snapshot");
  std::uint32_t d, x, y;
  std::memcpy(&d, header + 4, 4);
  std::memcpy(&x, header + 8, 4);
  std::memcpy(&y, header + 12, 4);
  dim = static_cast<int>(d);
  nx = static_cast<int>(x);
  ny = static_cast<int>(y);
  DensityField rho;
  rho.values.resize(static_cast<std::size_t>(nx) * ny);
  f.read(reinterpret_cast<char*>(rho.values.data()),
         static_cast<std::streamsize>(rho.values.size() * sizeof(double)));
  if (!f) throw Error("truncated snapshot '" + path + "'");
  return rho;
}

void write_diagnostics_csv(const std::string& path,
                           const std::vector<StepDiagnostics>& series) {
  auto f = open_out(path, false);
  std::string out =
      "step,time,energy,mass,min_rho,max_rho,pdfb_iters,action,converged\n";
  for (const auto& d : series) {
    out += std::to_string(d.step);
    out += ',';
    append17(out, d.time);
    out += ',';
    append17(out, d.energy);
    out += ',';
    append17(out, d.mass);
    out += ',';
    append17(out, d.min_rho);
    out += ',';
    append17(out, d.max_rho);
    out += ',';
    out += std::to_string(d.pdfb_iters);
    out += ',';
    append17(out, d.action);
    out += ',';
    out += d.converged ? '1' : '0';
    out += '\n';
  }
  f << out;
  if (!f) throw Error("write failed for '" + path + "'");
}

std::vector<GridStudyRow> study_grid_independence(
    const std::string& preset_name, const std::vector<double>& h_list) {
  std::vector<GridStudyRow> rows;
  rows.reserve(h_list.size());
  Preset ps = load_preset(preset_name);
  for (double h : h_list) {
    GridSpec g = ps.make_grid_h(h);
    GradientFlowProblem p = ps.make_problem(g);
    DensityField rho0 = ps.initial(g, ps.default_seed);
    RunResult r = run(rho0, p, ps.solver, ps.loop);
    if (r.series.empty())
      throw DomainError("study_grid_independence: preset runs zero steps");
    long total = 0;
    for (const auto& d : r.series) total += d.pdfb_iters;
    rows.push_back({h, r.series.front().pdfb_iters,
                    static_cast<double>(total) /
                        static_cast<double>(r.series.size())});
  }
  return rows;
}

std::string grid_study_csv(const std::vector<GridStudyRow>& rows) {
  std::string out = "h,first_step_iters,mean_iters\n";
  for (const auto& r : rows) {
    append17(out, r.h);
    out += ',';
    out += std::to_string(r.first_step_iters);
    out += ',';
    append17(out, r.mean_iters);
    out += '\n';
  }
  return out;
}

}  // namespace wgf
