// Timing comparison of the serial reference kernels against the OpenMP
// variants. Prints one line per kernel and size with both wall times and the
// speedup, and verifies the two variants agree bitwise before reporting.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "dpsynth/kernels.hpp"
#include "dpsynth/rng.hpp"

namespace k = dpsynth::kernels;
using dpsynth::Rng;

namespace {

template <typename F>
double time_best_of(int reps, F&& f) {
  double best = 1e100;
  for (int i = 0; i < reps; ++i) {
    auto t0 = std::chrono::steady_clock::now();
    f();
    auto t1 = std::chrono::steady_clock::now();
    best = std::min(best, std::chrono::duration<double>(t1 - t0).count());
  }
  return best;
}

std::vector<double> random_vector(std::size_t n, Rng& rng) {
  std::vector<double> v(n);
  for (auto& x : v) x = rng.uniform() * 10.0;
  return v;
}

void report(const char* name, std::size_t n, double ts, double tp, bool same) {
  std::printf("%-16s n=%-8zu serial %10.4f ms   parallel %10.4f ms   speedup %5.2fx   %s\n",
              name, n, ts * 1e3, tp * 1e3, ts / tp,
              same ? "match" : "MISMATCH");
  if (!same) std::exit(1);
}

}  // namespace

int main() {
#ifdef _OPENMP
  std::printf("openmp threads: %d\n", omp_get_max_threads());
#else
  std::printf("openmp: disabled, parallel variants fall back to serial\n");
#endif
  Rng rng(12345);

  for (std::size_t n : {1001ul, 4001ul, 16001ul}) {
    auto h = random_vector(n, rng);
    std::vector<double> fs, fp;
    double ts = time_best_of(3, [&] { fs = k::dft_real_serial(h); });
    double tp = time_best_of(3, [&] { fp = k::dft_real_parallel(h); });
    report("dft_real", n, ts, tp, fs == fp);

    std::vector<double> hs, hp;
    double its = time_best_of(3, [&] { hs = k::idft_real_serial(fs, n); });
    double itp = time_best_of(3, [&] { hp = k::idft_real_parallel(fs, n); });
    report("idft_real", n, its, itp, hs == hp);
  }

  for (std::size_t p : {8ul, 16ul}) {
    std::vector<std::vector<double>> cols;
    for (std::size_t c = 0; c < p; ++c) cols.push_back(random_vector(1500, rng));
    std::vector<std::vector<double>> ms, mp;
    double ts = time_best_of(3, [&] { ms = k::kendall_matrix_serial(cols); });
    double tp = time_best_of(3, [&] { mp = k::kendall_matrix_parallel(cols); });
    report("kendall_matrix", p, ts, tp, ms == mp);
  }

  auto make_view = [&](std::size_t rows) {
    k::GowerView v;
    v.cols.push_back(random_vector(rows, rng));
    v.cols.push_back(random_vector(rows, rng));
    std::vector<double> codes(rows);
    for (auto& c : codes) c = double(rng.below(4));
    v.cols.push_back(std::move(codes));
    v.is_numeric = {1, 1, 0};
    v.inv_range = {0.1, 0.1, 0.0};
    return v;
  };
  for (std::size_t n : {500ul, 2000ul}) {
    auto targets = make_view(n);
    auto pool = make_view(4 * n);
    std::vector<double> ds, dp;
    double ts = time_best_of(3, [&] { ds = k::min_gower_serial(targets, pool); });
    double tp = time_best_of(3, [&] { dp = k::min_gower_parallel(targets, pool); });
    report("min_gower", n, ts, tp, ds == dp);
  }
  return 0;
}
