#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <thread>
#include <vector>

namespace zetalab {

// Neumaier-compensated accumulator. Prime sums run over millions of terms
// of size ~1/sqrt(p); plain summation loses digits we later assert on.
class KahanSum {
 public:
  void add(double x) {
    double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x))
      comp_ += (sum_ - t) + x;
    else
      comp_ += (x - t) + sum_;
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

// Runs fn(chunk_index, begin, end) over [0, n) split into fixed chunks.
// Chunk boundaries do not depend on the thread count, so per-chunk results
// can be reduced in index order for a deterministic total.
void parallel_chunks(std::size_t n, unsigned threads,
                     const std::function<void(std::size_t, std::size_t, std::size_t)>& fn);

unsigned default_threads();

// Gauss-Legendre nodes/weights on [-1, 1].
void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights);

// Modified Bessel I0 by its power series, summed until the term falls
// below 1e-16 of the partial sum.
double bessel_i0_series(double x);

double dfactorial_odd(int q);  // (2q-1)!! as double

}  // namespace zetalab
