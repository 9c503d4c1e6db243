#pragma once

#include <algorithm>
#include <cstddef>
#include <vector>

namespace thermo::kernels {

// Pairwise (tree) reduction in index order. Error grows like log2(n)*eps
// instead of n*eps, and the result does not depend on how the inputs were
// produced.
double pairwise_sum(const std::vector<double>& xs);

// Both variants below chunk the index range into fixed blocks, accumulate
// each block serially, and combine the block sums in index order. The OpenMP
// variant therefore returns bit-identical results to the serial one for any
// thread count; tests assert exact equality.
inline constexpr long kChunk = 8192;

// Sums f(n) over the half-open range [a, b).
template <class F>
double sum_indexed_serial(long a, long b, F&& f) {
  if (b <= a) return 0.0;
  long nchunks = (b - a - 1) / kChunk + 1;
  std::vector<double> partial((size_t)nchunks, 0.0);
  for (long c = 0; c < nchunks; ++c) {
    long lo = a + c * kChunk;
    long hi = std::min(b - 1, lo + kChunk - 1);
    double s = 0.0;
    for (long n = lo; n <= hi; ++n) s += f(n);
    partial[(size_t)c] = s;
  }
  return pairwise_sum(partial);
}

template <class F>
double sum_indexed_omp(long a, long b, F&& f) {
  if (b <= a) return 0.0;
  long nchunks = (b - a - 1) / kChunk + 1;
  std::vector<double> partial((size_t)nchunks, 0.0);
#pragma omp parallel for schedule(dynamic, 1)
  for (long c = 0; c < nchunks; ++c) {
    long lo = a + c * kChunk;
    long hi = std::min(b - 1, lo + kChunk - 1);
    double s = 0.0;
    for (long n = lo; n <= hi; ++n) s += f(n);
    partial[(size_t)c] = s;
  }
  return pairwise_sum(partial);
}

template <class F>
double sum_indexed(long a, long b, F&& f) {
  return sum_indexed_omp(a, b, f);
}

// Max of f(n) over the half-open range [a, b).
template <class F>
double max_indexed(long a, long b, F&& f) {
  double m = -1.0 / 0.0;
  if (b <= a) return m;
  long nchunks = (b - a - 1) / kChunk + 1;
  std::vector<double> partial((size_t)nchunks, m);
#pragma omp parallel for schedule(dynamic, 1)
  for (long c = 0; c < nchunks; ++c) {
    long lo = a + c * kChunk;
    long hi = std::min(b - 1, lo + kChunk - 1);
    double s = -1.0 / 0.0;
    for (long n = lo; n <= hi; ++n) s = std::max(s, f(n));
    partial[(size_t)c] = s;
  }
  for (double v : partial) m = std::max(m, v);
  return m;
}

// Log-space renewal convolution: log z_0 = 0 and
//   z_n = sum_{k=1..n} u_k z_{n-k}.
// log_u[k] holds log u_k for k = 1..n_max (log_u[0] is ignored); entries may
// be -inf for absent return times. Returns log z_0..log z_n_max.
std::vector<double> renewal_log_dp_serial(const std::vector<double>& log_u, long n_max);
std::vector<double> renewal_log_dp_omp(const std::vector<double>& log_u, long n_max);

}  // namespace thermo::kernels
