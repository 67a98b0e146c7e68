#include <doctest.h>

#include <cmath>

#include "dpsynth/marginals.hpp"
#include "dpsynth/table.hpp"

using namespace dpsynth;

TEST_CASE("empirical cdf of [1,1,2,4]") {
  std::vector<double> col = {1, 1, 2, 4};
  StepCdf f = empirical_cdf(col);
  REQUIRE(f.support == std::vector<double>{1, 2, 4});
  CHECK(f.value_at(1) == 0.5);
  CHECK(f.value_at(2) == 0.75);
  CHECK(f.value_at(4) == 1.0);
  CHECK(f.value_at(0.5) == 0.0);
  CHECK(f.value_at(3) == 0.75);
}

TEST_CASE("empirical cdf degenerate constant column") {
  std::vector<double> col = {3, 3, 3};
  StepCdf f = empirical_cdf(col);
  CHECK(f.support == std::vector<double>{3});
  CHECK(f.cdf == std::vector<double>{1.0});
}

TEST_CASE("histogram_unique counts multiplicities in value order") {
  std::vector<double> col = {3, 1, 3, 3};
  Histogram h = histogram_unique(col);
  CHECK(h.values == std::vector<double>{1, 3});
  CHECK(h.counts == std::vector<double>{1, 3});

  std::vector<double> distinct = {5, 1, 9, 2};
  Histogram hd = histogram_unique(distinct);
  CHECK(hd.values.size() == 4);
  for (double c : hd.counts) CHECK(c == 1.0);
}

TEST_CASE("histogram_unique caps cardinality by pre-quantization") {
  std::vector<double> col(500);
  for (std::size_t i = 0; i < col.size(); ++i) col[i] = double(i);
  Histogram h = histogram_unique(col, 100);
  CHECK(h.values.size() <= 100);
  double total = 0.0;
  for (double c : h.counts) total += c;
  CHECK(total == 500.0);
}

TEST_CASE("histogram_binned on [0,1,2,3] with two bins") {
  std::vector<double> col = {0, 1, 2, 3};
  FrequencyTable t = histogram_binned(col, 2);
  REQUIRE(t.edges == std::vector<double>{0, 1.5, 3});
  CHECK(t.cumulative[0] == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(t.cumulative[1] == 1.0);
}

TEST_CASE("histogram_binned single bin and degenerate column") {
  std::vector<double> col = {1, 2, 3};
  FrequencyTable t1 = histogram_binned(col, 1);
  CHECK(t1.cumulative == std::vector<double>{1.0});

  std::vector<double> constant = {7, 7};
  FrequencyTable td = histogram_binned(constant, 5);
  CHECK(td.edges == std::vector<double>{7, 7});
  CHECK(td.cumulative == std::vector<double>{1.0});
}

TEST_CASE("histogram_binned masses partition the sample") {
  std::vector<double> col = {0.0, 0.2, 0.4, 0.9, 1.0, 0.5, 0.51};
  FrequencyTable t = histogram_binned(col, 4);
  CHECK(t.cumulative.back() == 1.0);
  for (std::size_t i = 1; i < t.cumulative.size(); ++i) {
    CHECK(t.cumulative[i] >= t.cumulative[i - 1]);
  }
}

TEST_CASE("dp_marginal with zero noise equals the empirical cdf") {
  std::vector<double> col = {1, 1, 2, 4, 4, 4, 9};
  Rng rng(2);
  StepCdf dp = dp_marginal(col, 1.0, rng, ZeroNoise{});
  StepCdf ref = empirical_cdf(col);
  REQUIRE(dp.support == ref.support);
  for (std::size_t i = 0; i < dp.cdf.size(); ++i) {
    CHECK(dp.cdf[i] == doctest::Approx(ref.cdf[i]).epsilon(1e-9));
  }
}

TEST_CASE("dp_marginal output is a valid cdf for any seed") {
  std::vector<double> col = {1, 2, 2, 3, 5, 5, 5, 8};
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    Rng rng(seed);
    StepCdf f = dp_marginal(col, 0.5, rng);
    CHECK(f.cdf.back() == 1.0);
    for (std::size_t i = 1; i < f.cdf.size(); ++i) {
      CHECK(f.cdf[i] >= f.cdf[i - 1]);
    }
  }
  Rng rng(0);
  CHECK_THROWS_AS(dp_marginal(col, 0.0, rng), ConfigError);
}

TEST_CASE("dp cdf error shrinks as epsilon grows") {
  // L1 distance between DP and true cdf, averaged over seeds, should drop
  // from eps=0.1 to eps=10 on a fixed 500-row column.
  std::vector<double> col(500);
  Rng gen(42);
  for (auto& v : col) v = std::floor(gen.uniform() * 40.0);
  StepCdf ref = empirical_cdf(col);
  auto avg_l1 = [&](double eps) {
    double total = 0.0;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      Rng rng(seed);
      StepCdf f = dp_marginal(col, eps, rng);
      double l1 = 0.0;
      for (std::size_t i = 0; i < ref.support.size(); ++i) {
        l1 += std::fabs(f.value_at(ref.support[i]) - ref.cdf[i]);
      }
      total += l1 / double(ref.support.size());
    }
    return total / 20.0;
  };
  CHECK(avg_l1(10.0) < avg_l1(0.1));
}

TEST_CASE("dp_frequency_table zero-noise identity and validity") {
  std::vector<double> col = {0, 1, 2, 3, 4, 5, 6, 7};
  Rng rng(1);
  FrequencyTable dp = dp_frequency_table(col, 4, 1.0, rng, ZeroNoise{});
  FrequencyTable ref = histogram_binned(col, 4);
  REQUIRE(dp.edges == ref.edges);
  for (std::size_t i = 0; i < dp.cumulative.size(); ++i) {
    CHECK(dp.cumulative[i] == doctest::Approx(ref.cumulative[i]).epsilon(1e-9));
  }
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    Rng r(seed);
    FrequencyTable t = dp_frequency_table(col, 4, 0.3, r);
    CHECK(t.cumulative.back() == 1.0);
    for (std::size_t i = 1; i < t.cumulative.size(); ++i) {
      CHECK(t.cumulative[i] >= t.cumulative[i - 1]);
    }
  }
}

TEST_CASE("inverse_cdf generalized inverse") {
  StepCdf f = empirical_cdf(std::vector<double>{1, 1, 2, 4});
  CHECK(inverse_cdf(f, 0.5) == 1.0);
  CHECK(inverse_cdf(f, 0.6) == 2.0);
  CHECK(inverse_cdf(f, 1.0) == 4.0);
  CHECK(inverse_cdf(f, 0.0) == 1.0);
  for (std::size_t i = 0; i < f.support.size(); ++i) {
    CHECK(inverse_cdf(f, f.cdf[i]) == f.support[i]);
  }
  CHECK_THROWS_AS(inverse_cdf(f, 1.5), ConfigError);
  CHECK_THROWS_AS(inverse_cdf(f, -0.1), ConfigError);
}
