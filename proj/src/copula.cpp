#include "dpsynth/copula.hpp"

#include <cmath>
#include <stdexcept>

#include "dpsynth/kernels.hpp"
#include "dpsynth/stats.hpp"
#include "dpsynth/table.hpp"

namespace dpsynth {

double kendall_tau(std::span<const double> x, std::span<const double> y) {
  return kernels::kendall_tau_pairs(x, y);
}

Matrix kendall_matrix(const std::vector<std::vector<double>>& cols) {
#ifdef _OPENMP
  auto m = kernels::kendall_matrix_parallel(cols);
#else
  auto m = kernels::kendall_matrix_serial(cols);
#endif
  const auto p = static_cast<Eigen::Index>(cols.size());
  Matrix out(p, p);
  for (Eigen::Index a = 0; a < p; ++a) {
    for (Eigen::Index b = 0; b < p; ++b) {
      out(a, b) = m[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)];
    }
  }
  return out;
}

Matrix dp_kendall_matrix(const std::vector<std::vector<double>>& cols,
                         double epsilon, Rng& rng, const NoiseSource& noise,
                         TauNoiseFactor factor) {
  const std::size_t p = cols.size();
  if (p < 2) throw ConfigError("dp_kendall_matrix: need at least 2 columns");
  if (!(epsilon > 0.0)) throw ConfigError("dp_kendall_matrix: epsilon must be positive");
  const std::size_t n = cols[0].size();
  double delta = 4.0 / (static_cast<double>(n) + 1.0);
  double mult = factor == TauNoiseFactor::Columns
                    ? static_cast<double>(p)
                    : static_cast<double>(p * (p - 1) / 2);
  double scale = mult * delta / epsilon;
  Matrix m = kendall_matrix(cols);
  for (std::size_t a = 0; a < p; ++a) {
    for (std::size_t b = a + 1; b < p; ++b) {
      double noisy = m(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) +
                     noise.laplace(scale, rng);
      noisy = std::clamp(noisy, -1.0, 1.0);
      m(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) = noisy;
      m(static_cast<Eigen::Index>(b), static_cast<Eigen::Index>(a)) = noisy;
    }
  }
  return m;
}

Matrix tau_to_rho(const Matrix& tau) {
  Matrix rho = (M_PI / 2.0 * tau.array()).sin().matrix();
  rho.diagonal().setOnes();
  return nearest_pd(rho);
}

Matrix nearest_pd(const Matrix& m) {
  if (!m.isApprox(m.transpose(), 1e-12)) {
    throw ConfigError("nearest_pd: input not symmetric");
  }
  constexpr double kMinEig = 1e-8;
  Eigen::SelfAdjointEigenSolver<Matrix> es(m);
  if (es.eigenvalues().minCoeff() >= kMinEig &&
      (m.diagonal().array() - 1.0).abs().maxCoeff() <= 1e-12) {
    return m;
  }
  Eigen::VectorXd vals = es.eigenvalues().cwiseMax(kMinEig);
  Matrix repaired = es.eigenvectors() * vals.asDiagonal() *
                    es.eigenvectors().transpose();
  // Rescale back to unit diagonal.
  Eigen::VectorXd d = repaired.diagonal().cwiseSqrt().cwiseInverse();
  repaired = d.asDiagonal() * repaired * d.asDiagonal();
  repaired = ((repaired + repaired.transpose()) / 2.0).eval();
  repaired.diagonal().setOnes();
  return repaired;
}

Matrix sample_gaussian_copula(const Matrix& rho, std::size_t n, Rng& rng) {
  Eigen::LLT<Matrix> llt(rho);
  if (llt.info() != Eigen::Success) {
    // One jitter retry against rounding on repaired matrices.
    Matrix jittered = rho + 1e-10 * Matrix::Identity(rho.rows(), rho.cols());
    llt.compute(jittered);
    if (llt.info() != Eigen::Success) {
      throw DataError("sample_gaussian_copula: correlation matrix not PD");
    }
  }
  Matrix chol = llt.matrixL();
  const auto p = rho.rows();
  Matrix out(static_cast<Eigen::Index>(n), p);
  Eigen::VectorXd z(p);
  for (std::size_t r = 0; r < n; ++r) {
    for (Eigen::Index c = 0; c < p; ++c) z(c) = normal_quantile(rng.uniform());
    Eigen::VectorXd x = chol * z;
    for (Eigen::Index c = 0; c < p; ++c) {
      out(static_cast<Eigen::Index>(r), c) = normal_cdf(x(c));
    }
  }
  return out;
}

DpCopulaModel dp_copula_fit(const std::vector<std::vector<double>>& cols,
                            double epsilon, double split_fraction, Rng& rng,
                            const NoiseSource& noise) {
  if (!(epsilon > 0.0)) throw ConfigError("dp_copula_fit: epsilon must be positive");
  if (!(split_fraction > 0.0 && split_fraction < 1.0)) {
    throw ConfigError("dp_copula_fit: split_fraction must lie in (0,1)");
  }
  const std::size_t p = cols.size();
  DpCopulaModel model;
  model.ledger = PrivacyBudget(epsilon);
  double eps_marginal = epsilon * split_fraction / static_cast<double>(p);
  for (std::size_t i = 0; i < p; ++i) {
    Rng col_rng = rng.substream("dpcopula.marginal").substream(i);
    model.marginals.push_back(dp_marginal(cols[i], eps_marginal, col_rng, noise));
    model.ledger.spend("marginal[" + std::to_string(i) + "]", eps_marginal);
  }
  double eps_tau = epsilon * (1.0 - split_fraction);
  Rng tau_rng = rng.substream("dpcopula.kendall");
  Matrix tau = dp_kendall_matrix(cols, eps_tau, tau_rng, noise);
  model.rho = tau_to_rho(tau);
  model.ledger.spend("kendall", eps_tau);
  return model;
}

std::vector<std::vector<double>> dp_copula_sample(const DpCopulaModel& model,
                                                  std::size_t n, Rng& rng) {
  Rng sample_rng = rng.substream("dpcopula.sample");
  Matrix u = sample_gaussian_copula(model.rho, n, sample_rng);
  const std::size_t p = model.marginals.size();
  std::vector<std::vector<double>> cols(p, std::vector<double>(n));
  for (std::size_t c = 0; c < p; ++c) {
    for (std::size_t r = 0; r < n; ++r) {
      cols[c][r] = inverse_cdf(model.marginals[c],
                               u(static_cast<Eigen::Index>(r),
                                 static_cast<Eigen::Index>(c)));
    }
  }
  return cols;
}

}  // namespace dpsynth
