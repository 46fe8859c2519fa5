#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace symlab {

// Compensated (Kahan) accumulator. Norms and quadratures are sums of many
// small cells whose total enters differences of nearly equal numbers, so the
// extra digits matter.
class KahanSum {
public:
    void add(double x) {
        double y = x - comp_;
        double t = sum_ + y;
        comp_ = (t - sum_) - y;
        sum_ = t;
    }
    double value() const { return sum_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

// Worker cap: SYMLAB_THREADS if set, else hardware concurrency.
int thread_count();

// Splits [0, n) into fixed-size chunks and runs body(begin, end) on a pool of
// worker threads. Chunking is independent of the worker count so per-chunk
// results are reproducible.
void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& body,
                  std::size_t grain = 1 << 14);

// Deterministic parallel reduction: chunk partials are computed in parallel
// but combined in chunk order with compensated summation.
double parallel_sum(std::size_t n, const std::function<double(std::size_t, std::size_t)>& chunk_sum,
                    std::size_t grain = 1 << 14);

// Adaptive Simpson on [a, b]. Integrand must be finite on the interval.
double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double rel_tol = 1e-11, int max_depth = 48);

// Integral of g over [r0, +inf) via the substitution r = r0 / t, t in (0, 1].
// Requires g to decay fast enough for convergence; the caller checks that.
double radial_tail_integral(const std::function<double(double)>& g, double r0,
                            double rel_tol = 1e-11);

}  // namespace symlab
