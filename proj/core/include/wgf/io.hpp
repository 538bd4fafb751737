#ifndef WGF_IO_HPP
#define WGF_IO_HPP

#include <string>
#include <vector>

#include "wgf/config.hpp"
#include "wgf/jko.hpp"

namespace wgf {

/// CSV snapshot: header "x,rho" (1D) or "x,y,rho" (2D), one row per cell in
/// x-fastest order, 17 significant digits, cell centers at origin+(i+1/2)h.
void write_snapshot_csv(const std::string& path, const DensityField& rho,
                        const GridSpec& g);

/// Binary snapshot: 16-byte header (magic "WGF1", u32 dim, u32 nx, u32 ny
/// with ny = 1 in 1D), then n^dim little-endian float64 in x-fastest order.
void write_snapshot_binary(const std::string& path, const DensityField& rho,
                           const GridSpec& g);

/// Reads a binary snapshot back; returns the grid extents through `g`
/// (spacing/origin are not stored in the format).
DensityField read_snapshot_binary(const std::string& path, int& dim, int& nx,
                                  int& ny);

/// Diagnostics CSV with header
/// step,time,energy,mass,min_rho,max_rho,pdfb_iters,action,converged
void write_diagnostics_csv(const std::string& path,
                           const std::vector<StepDiagnostics>& series);

struct GridStudyRow {
  double h;
  int first_step_iters;
  double mean_iters;
};

/// Reruns a preset across grid spacings and tabulates inner iteration
/// counts (first step and mean over all steps).
std::vector<GridStudyRow> study_grid_independence(
    const std::string& preset_name, const std::vector<double>& h_list);

std::string grid_study_csv(const std::vector<GridStudyRow>& rows);

}  // namespace wgf

#endif  // WGF_IO_HPP
