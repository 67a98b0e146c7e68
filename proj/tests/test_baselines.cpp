#include <doctest.h>

#include <cmath>

#include "dpsynth/baselines.hpp"
#include "dpsynth/copula.hpp"
#include "dpsynth/table.hpp"

using namespace dpsynth;

TEST_CASE("dp histogram fit zero-noise recovers bin masses") {
  std::vector<double> col;
  for (int i = 0; i < 100; ++i) col.push_back(i < 25 ? 0.1 : 0.9);
  Rng rng(4);
  DpHistogramModel m = dp_histogram_fit({col}, 1.0, 2, rng, ZeroNoise{});
  REQUIRE(m.histograms.size() == 1);
  const auto& h = m.histograms[0];
  REQUIRE(h.counts.size() == 2);
  CHECK(h.counts[0] == doctest::Approx(25.0).epsilon(1e-9));
  CHECK(h.counts[1] == doctest::Approx(75.0).epsilon(1e-9));
}

TEST_CASE("dp histogram ledger: p entries of eps/p") {
  std::vector<std::vector<double>> cols(4, std::vector<double>{1, 2, 3, 4, 5});
  Rng rng(0);
  DpHistogramModel m = dp_histogram_fit(cols, 2.0, 3, rng);
  CHECK(m.ledger.entries().size() == 4);
  for (const auto& e : m.ledger.entries()) {
    CHECK(e.epsilon == doctest::Approx(0.5).epsilon(1e-15));
  }
  CHECK(m.ledger.spent() == doctest::Approx(2.0).epsilon(1e-12));
  Rng r2(0);
  CHECK_THROWS_AS(dp_histogram_fit(cols, 0.0, 3, r2), ConfigError);
}

TEST_CASE("dp histogram sample masses match noisy model under zero noise") {
  std::vector<double> col;
  for (int i = 0; i < 200; ++i) col.push_back(i < 60 ? 0.25 : 0.75);
  Rng rng(9);
  DpHistogramModel m = dp_histogram_fit({col}, 1.0, 2, rng, ZeroNoise{});
  auto out = dp_histogram_sample(m, 20000, rng);
  std::size_t low = 0;
  for (double v : out[0]) {
    CHECK(v >= 0.0);
    CHECK(v <= 1.0);
    if (v < 0.5) ++low;
  }
  CHECK(std::fabs(double(low) / 20000.0 - 0.3) < 0.02);
}

TEST_CASE("dp histogram generator breaks cross-column dependence") {
  const std::size_t n = 500;
  std::vector<std::vector<double>> cols(2, std::vector<double>(n));
  Rng gen(6);
  for (std::size_t i = 0; i < n; ++i) {
    double v = gen.uniform();
    cols[0][i] = v;
    cols[1][i] = v;  // perfectly dependent input
  }
  Rng rng(12);
  auto out = dp_histogram_generate(cols, 10.0, 10, 4000, rng);
  CHECK(std::fabs(kendall_tau(out[0], out[1])) < 0.05);
}

TEST_CASE("dp histogram sampling is deterministic per seed") {
  std::vector<std::vector<double>> cols = {{0, 1, 2, 3, 4, 5, 6, 7}};
  Rng a(55), b(55);
  CHECK(dp_histogram_generate(cols, 1.0, 4, 200, a) ==
        dp_histogram_generate(cols, 1.0, 4, 200, b));
}
