// Benchmark of the OpenMP kernels against their serial references. The two
// implementations reduce chunkwise in the same order, so result equality is
// exact; the point of the run is throughput.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <vector>

#include "thermo/kernels.hpp"

using thermo::kernels::renewal_log_dp_omp;
using thermo::kernels::renewal_log_dp_serial;
using thermo::kernels::sum_indexed_omp;
using thermo::kernels::sum_indexed_serial;

namespace {

double now_ms() {
  using clock = std::chrono::steady_clock;
  return std::chrono::duration<double, std::milli>(
             clock::now().time_since_epoch())
      .count();
}

template <class F>
double timed(F&& body, int reps, double* out) {
  double best = 1e300;
  for (int i = 0; i < reps; ++i) {
    double t0 = now_ms();
    *out = body();
    best = std::min(best, now_ms() - t0);
  }
  return best;
}

}  // namespace

int main(int argc, char** argv) {
  long sum_n = argc > 1 ? std::atol(argv[1]) : 40000000L;
  long dp_n = argc > 2 ? std::atol(argv[2]) : 6000L;

  auto term = [](long n) {
    double x = (double)n;
    return std::exp(-3e-8 * x) / (1.0 + std::log1p(x));
  };

  double serial_val = 0.0, omp_val = 0.0;
  double ts = timed([&] { return sum_indexed_serial(0L, sum_n, term); }, 3,
                    &serial_val);
  double tp =
      timed([&] { return sum_indexed_omp(0L, sum_n, term); }, 3, &omp_val);
  std::printf("partial sum, %ld terms\n", sum_n);
  std::printf("  serial  %9.2f ms   value %.17g\n", ts, serial_val);
  std::printf("  openmp  %9.2f ms   value %.17g\n", tp, omp_val);
  std::printf("  speedup %.2fx, bitwise equal: %s\n", ts / tp,
              serial_val == omp_val ? "yes" : "NO");

  std::vector<double> log_u(dp_n + 1, 0.0);
  for (long k = 1; k <= dp_n; ++k)
    log_u[k] = -1.5 * std::log((double)k) - 0.25;

  std::vector<double> zs, zp;
  auto run_dp_serial = [&] {
    zs = renewal_log_dp_serial(log_u, dp_n);
    return zs.back();
  };
  auto run_dp_omp = [&] {
    zp = renewal_log_dp_omp(log_u, dp_n);
    return zp.back();
  };
  double vs = 0.0, vp = 0.0;
  double ds = timed(run_dp_serial, 2, &vs);
  double dp = timed(run_dp_omp, 2, &vp);
  bool same = zs == zp;
  std::printf("renewal dp, %ld steps\n", dp_n);
  std::printf("  serial  %9.2f ms   log z_n %.17g\n", ds, vs);
  std::printf("  openmp  %9.2f ms   log z_n %.17g\n", dp, vp);
  std::printf("  speedup %.2fx, bitwise equal: %s\n", ds / dp,
              same ? "yes" : "NO");
  return same && serial_val == omp_val ? 0 : 1;
}
