#pragma once

#include <Eigen/Dense>
#include <span>
#include <vector>

#include "dpsynth/dp.hpp"
#include "dpsynth/marginals.hpp"
#include "dpsynth/rng.hpp"

namespace dpsynth {

using Matrix = Eigen::MatrixXd;

// Composition factor for the per-entry Laplace scale of the private Kendall
// matrix: either the column count (literal reading) or the pair count.
enum class TauNoiseFactor { Columns, Pairs };

double kendall_tau(std::span<const double> x, std::span<const double> y);

Matrix kendall_matrix(const std::vector<std::vector<double>>& cols);

Matrix dp_kendall_matrix(const std::vector<std::vector<double>>& cols,
                         double epsilon, Rng& rng,
                         const NoiseSource& noise = default_noise(),
                         TauNoiseFactor factor = TauNoiseFactor::Columns);

Matrix tau_to_rho(const Matrix& tau);

Matrix nearest_pd(const Matrix& m);

// n x p matrix with entries in (0,1): multivariate normal through the
// standard normal CDF.
Matrix sample_gaussian_copula(const Matrix& rho, std::size_t n, Rng& rng);

struct DpCopulaModel {
  std::vector<StepCdf> marginals;
  Matrix rho;
  PrivacyBudget ledger;
};

DpCopulaModel dp_copula_fit(const std::vector<std::vector<double>>& cols,
                            double epsilon, double split_fraction, Rng& rng,
                            const NoiseSource& noise = default_noise());

std::vector<std::vector<double>> dp_copula_sample(const DpCopulaModel& model,
                                                  std::size_t n, Rng& rng);

}  // namespace dpsynth
