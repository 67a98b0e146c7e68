#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace dpsynth::kernels {

// Orthonormal packed real DFT. Entry 0 is the DC coefficient; entries
// (2j-1, 2j) hold the scaled (cos, sin) projections of harmonic j. For even
// lengths the final entry is the Nyquist coefficient. The packing is an
// orthonormal change of basis, so Parseval holds exactly: |F|_2 = |h|_2.
//
// Each public kernel has a serial reference and an OpenMP variant computing
// the same per-entry expression; results are bitwise identical.
std::vector<double> dft_real_serial(std::span<const double> h);
std::vector<double> dft_real_parallel(std::span<const double> h);
std::vector<double> idft_real_serial(std::span<const double> f, std::size_t n);
std::vector<double> idft_real_parallel(std::span<const double> f, std::size_t n);

// Kendall tau-a via exhaustive pair enumeration, for all column pairs.
double kendall_tau_pairs(std::span<const double> x, std::span<const double> y);
std::vector<std::vector<double>> kendall_matrix_serial(
    const std::vector<std::vector<double>>& cols);
std::vector<std::vector<double>> kendall_matrix_parallel(
    const std::vector<std::vector<double>>& cols);

// Mixed-record view for Gower scans: numeric columns hold raw values with a
// precomputed 1/range (0 for degenerate range); categorical columns hold
// integer codes from a dictionary shared by both sides of a scan.
struct GowerView {
  std::vector<std::vector<double>> cols;  // column-major
  std::vector<char> is_numeric;
  std::vector<double> inv_range;

  std::size_t rows() const { return cols.empty() ? 0 : cols[0].size(); }
  std::size_t width() const { return cols.size(); }
};

double gower_distance(const GowerView& a, std::size_t i, const GowerView& b,
                      std::size_t j);

// Distance from each target to its nearest pool record.
std::vector<double> min_gower_serial(const GowerView& targets,
                                     const GowerView& pool);
std::vector<double> min_gower_parallel(const GowerView& targets,
                                       const GowerView& pool);

}  // namespace dpsynth::kernels
