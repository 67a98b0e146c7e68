#include "dpsynth/kernels.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace dpsynth::kernels {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

double dft_entry(std::span<const double> h, std::size_t idx) {
  const std::size_t n = h.size();
  const double inv_sqrt_n = 1.0 / std::sqrt(static_cast<double>(n));
  if (idx == 0) {
    double s = 0.0;
    for (double v : h) s += v;
    return s * inv_sqrt_n;
  }
  if (n % 2 == 0 && idx == n - 1) {
    double s = 0.0;
    for (std::size_t t = 0; t < n; ++t) s += (t % 2 == 0 ? h[t] : -h[t]);
    return s * inv_sqrt_n;
  }
  const std::size_t j = (idx + 1) / 2;
  const bool cosine = idx % 2 == 1;
  const double w = kTwoPi * static_cast<double>(j) / static_cast<double>(n);
  double s = 0.0;
  for (std::size_t t = 0; t < n; ++t) {
    double ang = w * static_cast<double>(t);
    s += h[t] * (cosine ? std::cos(ang) : std::sin(ang));
  }
  return s * std::sqrt(2.0) * inv_sqrt_n;
}

double idft_entry(std::span<const double> f, std::size_t n, std::size_t t) {
  const double inv_sqrt_n = 1.0 / std::sqrt(static_cast<double>(n));
  double s = f.empty() ? 0.0 : f[0] * inv_sqrt_n;
  const std::size_t m = f.size();
  for (std::size_t idx = 1; idx < m; ++idx) {
    if (n % 2 == 0 && idx == n - 1) {
      s += f[idx] * inv_sqrt_n * (t % 2 == 0 ? 1.0 : -1.0);
      continue;
    }
    const std::size_t j = (idx + 1) / 2;
    const bool cosine = idx % 2 == 1;
    double ang = kTwoPi * static_cast<double>(j) * static_cast<double>(t) /
                 static_cast<double>(n);
    s += f[idx] * std::sqrt(2.0) * inv_sqrt_n *
         (cosine ? std::cos(ang) : std::sin(ang));
  }
  return s;
}

}  // namespace

std::vector<double> dft_real_serial(std::span<const double> h) {
  if (h.empty()) throw std::invalid_argument("dft_real: empty input");
  std::vector<double> f(h.size());
  for (std::size_t i = 0; i < h.size(); ++i) f[i] = dft_entry(h, i);
  return f;
}

std::vector<double> dft_real_parallel(std::span<const double> h) {
  if (h.empty()) throw std::invalid_argument("dft_real: empty input");
  std::vector<double> f(h.size());
  const std::int64_t n = static_cast<std::int64_t>(h.size());
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < n; ++i) {
    f[static_cast<std::size_t>(i)] = dft_entry(h, static_cast<std::size_t>(i));
  }
  return f;
}

std::vector<double> idft_real_serial(std::span<const double> f, std::size_t n) {
  if (f.size() > n) throw std::invalid_argument("idft_real: spectrum longer than n");
  std::vector<double> h(n);
  for (std::size_t t = 0; t < n; ++t) h[t] = idft_entry(f, n, t);
  return h;
}

std::vector<double> idft_real_parallel(std::span<const double> f, std::size_t n) {
  if (f.size() > n) throw std::invalid_argument("idft_real: spectrum longer than n");
  std::vector<double> h(n);
  const std::int64_t nn = static_cast<std::int64_t>(n);
#pragma omp parallel for schedule(static)
  for (std::int64_t t = 0; t < nn; ++t) {
    h[static_cast<std::size_t>(t)] = idft_entry(f, n, static_cast<std::size_t>(t));
  }
  return h;
}

double kendall_tau_pairs(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw std::invalid_argument("kendall_tau: length mismatch");
  const std::size_t n = x.size();
  if (n < 2) throw std::invalid_argument("kendall_tau: need n >= 2");
  long long s = 0;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      double prod = (x[i] - x[j]) * (y[i] - y[j]);
      s += (prod > 0.0) - (prod < 0.0);
    }
  }
  double pairs = static_cast<double>(n) * static_cast<double>(n - 1) / 2.0;
  return static_cast<double>(s) / pairs;
}

std::vector<std::vector<double>> kendall_matrix_serial(
    const std::vector<std::vector<double>>& cols) {
  const std::size_t p = cols.size();
  std::vector<std::vector<double>> m(p, std::vector<double>(p, 1.0));
  for (std::size_t a = 0; a < p; ++a) {
    for (std::size_t b = a + 1; b < p; ++b) {
      double tau = kendall_tau_pairs(cols[a], cols[b]);
      m[a][b] = tau;
      m[b][a] = tau;
    }
  }
  return m;
}

std::vector<std::vector<double>> kendall_matrix_parallel(
    const std::vector<std::vector<double>>& cols) {
  const std::size_t p = cols.size();
  std::vector<std::vector<double>> m(p, std::vector<double>(p, 1.0));
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t a = 0; a < p; ++a) {
    for (std::size_t b = a + 1; b < p; ++b) pairs.emplace_back(a, b);
  }
  const std::int64_t np = static_cast<std::int64_t>(pairs.size());
#pragma omp parallel for schedule(dynamic)
  for (std::int64_t i = 0; i < np; ++i) {
    auto [a, b] = pairs[static_cast<std::size_t>(i)];
    double tau = kendall_tau_pairs(cols[a], cols[b]);
    m[a][b] = tau;
    m[b][a] = tau;
  }
  return m;
}

double gower_distance(const GowerView& a, std::size_t i, const GowerView& b,
                      std::size_t j) {
  const std::size_t p = a.width();
  double s = 0.0;
  for (std::size_t c = 0; c < p; ++c) {
    if (a.is_numeric[c]) {
      s += std::fabs(a.cols[c][i] - b.cols[c][j]) * a.inv_range[c];
    } else {
      s += a.cols[c][i] != b.cols[c][j] ? 1.0 : 0.0;
    }
  }
  return s / static_cast<double>(p);
}

std::vector<double> min_gower_serial(const GowerView& targets,
                                     const GowerView& pool) {
  const std::size_t nt = targets.rows();
  const std::size_t np = pool.rows();
  std::vector<double> out(nt, std::numeric_limits<double>::infinity());
  for (std::size_t i = 0; i < nt; ++i) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < np; ++j) {
      double d = gower_distance(targets, i, pool, j);
      if (d < best) best = d;
    }
    out[i] = best;
  }
  return out;
}

std::vector<double> min_gower_parallel(const GowerView& targets,
                                       const GowerView& pool) {
  const std::size_t nt = targets.rows();
  const std::size_t np = pool.rows();
  std::vector<double> out(nt, std::numeric_limits<double>::infinity());
  const std::int64_t n = static_cast<std::int64_t>(nt);
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < n; ++i) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < np; ++j) {
      double d = gower_distance(targets, static_cast<std::size_t>(i), pool, j);
      if (d < best) best = d;
    }
    out[static_cast<std::size_t>(i)] = best;
  }
  return out;
}

}  // namespace dpsynth::kernels
