#include <doctest.h>

#include <cmath>

#include "dpsynth/kernels.hpp"
#include "dpsynth/rng.hpp"

using namespace dpsynth;
namespace k = dpsynth::kernels;

namespace {

std::vector<double> random_vector(std::size_t n, Rng& rng) {
  std::vector<double> v(n);
  for (auto& x : v) x = rng.uniform() * 20.0 - 10.0;
  return v;
}

}  // namespace

TEST_CASE("dft serial and parallel are bitwise identical") {
  Rng rng(1);
  for (std::size_t n : {1ul, 2ul, 3ul, 7ul, 64ul, 255ul, 256ul, 501ul}) {
    auto h = random_vector(n, rng);
    auto a = k::dft_real_serial(h);
    auto b = k::dft_real_parallel(h);
    CHECK(a == b);
    auto ia = k::idft_real_serial(a, n);
    auto ib = k::idft_real_parallel(a, n);
    CHECK(ia == ib);
    for (std::size_t i = 0; i < n; ++i) {
      CHECK(ia[i] == doctest::Approx(h[i]).epsilon(1e-9));
    }
  }
}

TEST_CASE("idft handles truncated spectra identically in both variants") {
  Rng rng(2);
  auto h = random_vector(101, rng);
  auto f = k::dft_real_serial(h);
  f.resize(21);  // keep DC plus ten harmonics
  CHECK(k::idft_real_serial(f, 101) == k::idft_real_parallel(f, 101));
}

TEST_CASE("kendall matrix serial and parallel are bitwise identical") {
  Rng rng(3);
  std::vector<std::vector<double>> cols;
  for (int c = 0; c < 6; ++c) cols.push_back(random_vector(80, rng));
  auto a = k::kendall_matrix_serial(cols);
  auto b = k::kendall_matrix_parallel(cols);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i] == b[i]);
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i][i] == 1.0);
    for (std::size_t j = 0; j < a.size(); ++j) CHECK(a[i][j] == a[j][i]);
  }
}

TEST_CASE("kendall pair kernel matches exhaustive enumeration oracle") {
  Rng rng(4);
  for (int trial = 0; trial < 200; ++trial) {
    std::size_t n = 2 + rng.below(7);
    auto x = random_vector(n, rng);
    auto y = random_vector(n, rng);
    double concordant_minus_discordant = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        double s = (x[i] - x[j]) * (y[i] - y[j]);
        if (s > 0) concordant_minus_discordant += 1.0;
        else if (s < 0) concordant_minus_discordant -= 1.0;
      }
    }
    double oracle = concordant_minus_discordant / (0.5 * n * (n - 1));
    CHECK(k::kendall_tau_pairs(x, y) == doctest::Approx(oracle).epsilon(1e-12));
  }
}

TEST_CASE("gower distance on a mixed view") {
  k::GowerView a;
  a.cols = {{0.0}, {1.0}};
  a.is_numeric = {1, 0};
  a.inv_range = {0.1, 0.0};
  k::GowerView b;
  b.cols = {{5.0}, {2.0}};
  b.is_numeric = {1, 0};
  b.inv_range = {0.1, 0.0};
  CHECK(k::gower_distance(a, 0, b, 0) == doctest::Approx(0.75).epsilon(1e-12));
  CHECK(k::gower_distance(a, 0, a, 0) == 0.0);
}

TEST_CASE("min gower serial and parallel are bitwise identical") {
  Rng rng(5);
  auto make_view = [&](std::size_t rows) {
    k::GowerView v;
    v.cols.push_back(random_vector(rows, rng));
    std::vector<double> codes(rows);
    for (auto& c : codes) c = double(rng.below(3));
    v.cols.push_back(std::move(codes));
    v.is_numeric = {1, 0};
    v.inv_range = {0.05, 0.0};
    return v;
  };
  auto targets = make_view(37);
  auto pool = make_view(211);
  auto a = k::min_gower_serial(targets, pool);
  auto b = k::min_gower_parallel(targets, pool);
  CHECK(a == b);
  REQUIRE(a.size() == 37);
  // each reported minimum really is the minimum
  for (std::size_t i = 0; i < targets.rows(); ++i) {
    double best = 2.0;
    for (std::size_t j = 0; j < pool.rows(); ++j) {
      best = std::min(best, k::gower_distance(targets, i, pool, j));
    }
    CHECK(a[i] == best);
  }
}
