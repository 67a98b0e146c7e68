#pragma once

#include <string>
#include <vector>

#include "dpsynth/rng.hpp"
#include "dpsynth/table.hpp"

namespace dpsynth {

// Uniform encoder: each category owns a sub-interval of [0,1] whose width is
// its empirical frequency; categories ordered by descending frequency, ties
// broken lexicographically.
struct EncoderSpec {
  std::vector<std::string> order;
  std::vector<double> breakpoints;  // size order.size()+1, from 0 to 1

  std::size_t interval_of(const std::string& label) const;
};

struct EncodeOptions {
  // The literal pseudocode centers the truncated Gaussian at (b-a)/2, which
  // lies outside the interval for a > (b-a)/2; default is the midpoint.
  bool literal_half_width_center = false;
};

EncoderSpec fit_uniform_encoder(const std::vector<std::string>& col);

double sample_truncated_gaussian(double a, double b, double mu, double sigma,
                                 Rng& rng);

std::vector<double> encode(const EncoderSpec& spec,
                           const std::vector<std::string>& col, Rng& rng,
                           const EncodeOptions& opts = {});

std::vector<std::string> decode(const EncoderSpec& spec,
                                const std::vector<double>& col);

}  // namespace dpsynth
