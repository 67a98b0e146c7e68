#pragma once

#include <span>
#include <string>
#include <vector>

#include "dpsynth/rng.hpp"

namespace dpsynth {

struct LedgerEntry {
  std::string label;
  double epsilon;
};

// Sequential-composition bookkeeping: every mechanism invocation records the
// budget it consumed.
class PrivacyBudget {
 public:
  PrivacyBudget() = default;
  explicit PrivacyBudget(double epsilon) : epsilon_(epsilon) {}

  void spend(std::string label, double eps);
  double spent() const;
  double epsilon() const { return epsilon_; }
  const std::vector<LedgerEntry>& entries() const { return entries_; }

 private:
  double epsilon_ = 0.0;
  std::vector<LedgerEntry> entries_;
};

// Real-valued histogram over either numeric bin edges or an explicit value
// support (one bin per distinct value). Counts may go negative after
// perturbation, before post-processing.
struct Histogram {
  std::vector<double> edges;   // size counts+1 when binned, else empty
  std::vector<double> values;  // unique-value support, else empty
  std::vector<double> counts;
};

// Noise injection points, virtual so tests can force the zero-noise /
// full-spectrum path through every private operation.
class NoiseSource {
 public:
  virtual ~NoiseSource() = default;
  virtual double laplace(double scale, Rng& rng) const;
  // Exponential-mechanism selection over cost vector (lower cost preferred).
  virtual std::size_t pick_index(std::span<const double> costs, double epsilon,
                                 Rng& rng) const;
};

// Emits zero Laplace noise and always selects the last candidate, which for
// EFPA means keeping the full spectrum (k = m).
class ZeroNoise final : public NoiseSource {
 public:
  double laplace(double, Rng&) const override { return 0.0; }
  std::size_t pick_index(std::span<const double> costs, double,
                         Rng&) const override {
    return costs.size() - 1;
  }
};

const NoiseSource& default_noise();

double laplace_noise(double scale, Rng& rng);

std::size_t exponential_mechanism(std::span<const double> costs, double epsilon,
                                  Rng& rng);

std::vector<double> dft_real(std::span<const double> h);
std::vector<double> idft_real(std::span<const double> f, std::size_t n);

// Cost of keeping only the first k coefficients: sqrt of the discarded
// spectral energy plus 2z/epsilon with z = 2k+1. k ranges over 1..m.
double efpa_cost(std::span<const double> spectrum, std::size_t k, double epsilon);

Histogram efpa(const Histogram& h, double epsilon, Rng& rng,
               const NoiseSource& noise = default_noise());

Histogram naive_dp_histogram(const Histogram& h, double epsilon,
                             double sensitivity, Rng& rng,
                             const NoiseSource& noise = default_noise());

double budget_split_dpnpc(double epsilon, std::size_t p);

// Clip negative counts to zero, then rescale so the total matches the noisy
// mass (data-independent post-processing). All-nonpositive inputs come back
// as all zeros.
void clip_and_renormalize(std::vector<double>& counts);

}  // namespace dpsynth
