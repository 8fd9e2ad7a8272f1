#include "zetalab/numeric.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>

#include "zetalab/rng.hpp"

namespace zetalab {

void parallel_chunks(std::size_t n, unsigned threads,
                     const std::function<void(std::size_t, std::size_t, std::size_t)>& fn) {
  if (n == 0) return;
  if (threads == 0) threads = default_threads();
  // chunk layout independent of thread count
  std::size_t n_chunks = std::min<std::size_t>(n, std::max<std::size_t>(threads * 8, 16));
  std::size_t per = (n + n_chunks - 1) / n_chunks;
  n_chunks = (n + per - 1) / per;
  if (threads <= 1 || n_chunks == 1) {
    for (std::size_t c = 0; c < n_chunks; ++c)
      fn(c, c * per, std::min(n, (c + 1) * per));
    return;
  }
  std::vector<std::thread> pool;
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (;;) {
      std::size_t c = next.fetch_add(1);
      if (c >= n_chunks) return;
      fn(c, c * per, std::min(n, (c + 1) * per));
    }
  };
  unsigned use = std::min<std::size_t>(threads, n_chunks);
  pool.reserve(use);
  for (unsigned i = 0; i < use; ++i) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
}

unsigned default_threads() {
  unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights) {
  nodes.assign(n, 0.0);
  weights.assign(n, 0.0);
  const double pi = 3.14159265358979323846;
  int m = (n + 1) / 2;
  for (int i = 1; i <= m; ++i) {
    double z = std::cos(pi * (i - 0.25) / (n + 0.5));
    double z1, pp;
    do {
      double p1 = 1.0, p2 = 0.0;
      for (int j = 1; j <= n; ++j) {
        double p3 = p2;
        p2 = p1;
        p1 = ((2.0 * j - 1.0) * z * p2 - (j - 1.0) * p3) / j;
      }
      pp = n * (z * p1 - p2) / (z * z - 1.0);
      z1 = z;
      z = z1 - p1 / pp;
    } while (std::abs(z - z1) > 1e-15);
    nodes[i - 1] = -z;
    nodes[n - i] = z;
    weights[i - 1] = 2.0 / ((1.0 - z * z) * pp * pp);
    weights[n - i] = weights[i - 1];
  }
}

double bessel_i0_series(double x) {
  double q = x * x / 4.0;
  double term = 1.0, sum = 1.0;
  for (int k = 1; k < 1000; ++k) {
    term *= q / (static_cast<double>(k) * k);
    sum += term;
    if (term < 1e-16 * sum) break;
  }
  return sum;
}

double dfactorial_odd(int q) {
  double r = 1.0;
  for (int i = 3; i <= 2 * q - 1; i += 2) r *= i;
  return q >= 1 ? r : 1.0;
}

namespace rng {
uint64_t stream_key(uint64_t master_seed, const char* module_name) {
  uint64_t h = splitmix64(master_seed);
  for (const char* p = module_name; *p; ++p)
    h = splitmix64(h ^ static_cast<unsigned char>(*p));
  return h;
}
}  // namespace rng

}  // namespace zetalab
