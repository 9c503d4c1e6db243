#include "thermo/kernels.hpp"

#include <cmath>

namespace thermo::kernels {

double pairwise_sum(const std::vector<double>& xs) {
  if (xs.empty()) return 0.0;
  std::vector<double> cur = xs;
  while (cur.size() > 1) {
    std::vector<double> next((cur.size() + 1) / 2);
    for (size_t i = 0; i < next.size(); ++i) {
      double s = cur[2 * i];
      if (2 * i + 1 < cur.size()) s += cur[2 * i + 1];
      next[i] = s;
    }
    cur.swap(next);
  }
  return cur[0];
}

namespace {

// logsumexp over log_u[k] + log_z[n-k], k = 1..n, chunked so the serial and
// OpenMP paths agree bitwise.
template <bool Parallel>
double convolve_step(const std::vector<double>& log_u,
                     const std::vector<double>& log_z, long n) {
  double m = -1.0 / 0.0;
  for (long k = 1; k <= n; ++k) {
    double t = log_u[(size_t)k] + log_z[(size_t)(n - k)];
    if (t > m) m = t;
  }
  if (std::isinf(m) && m < 0) return m;

  long nchunks = (n - 1) / kChunk + 1;
  std::vector<double> partial((size_t)nchunks, 0.0);
#pragma omp parallel for schedule(dynamic, 1) if (Parallel)
  for (long c = 0; c < nchunks; ++c) {
    long lo = 1 + c * kChunk;
    long hi = std::min(n, lo + kChunk - 1);
    double s = 0.0;
    for (long k = lo; k <= hi; ++k)
      s += std::exp(log_u[(size_t)k] + log_z[(size_t)(n - k)] - m);
    partial[(size_t)c] = s;
  }
  return m + std::log(pairwise_sum(partial));
}

template <bool Parallel>
std::vector<double> renewal_log_dp(const std::vector<double>& log_u, long n_max) {
  std::vector<double> log_z((size_t)n_max + 1, -1.0 / 0.0);
  log_z[0] = 0.0;
  for (long n = 1; n <= n_max; ++n)
    log_z[(size_t)n] = convolve_step<Parallel>(log_u, log_z, n);
  return log_z;
}

}  // namespace

std::vector<double> renewal_log_dp_serial(const std::vector<double>& log_u, long n_max) {
  return renewal_log_dp<false>(log_u, n_max);
}

std::vector<double> renewal_log_dp_omp(const std::vector<double>& log_u, long n_max) {
  return renewal_log_dp<true>(log_u, n_max);
}

}  // namespace thermo::kernels
