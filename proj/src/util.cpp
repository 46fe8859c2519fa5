#include "symlab/util.hpp"

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <thread>

namespace symlab {

int thread_count() {
    if (const char* env = std::getenv("SYMLAB_THREADS")) {
        int t = std::atoi(env);
        if (t >= 1) return t;
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& body,
                  std::size_t grain) {
    if (n == 0) return;
    std::size_t chunks = (n + grain - 1) / grain;
    int workers = thread_count();
    if (workers <= 1 || chunks <= 1) {
        for (std::size_t c = 0; c < chunks; ++c)
            body(c * grain, std::min(n, (c + 1) * grain));
        return;
    }
    std::atomic<std::size_t> next{0};
    auto run = [&] {
        for (;;) {
            std::size_t c = next.fetch_add(1);
            if (c >= chunks) return;
            body(c * grain, std::min(n, (c + 1) * grain));
        }
    };
    std::vector<std::thread> pool;
    int nt = static_cast<int>(std::min<std::size_t>(workers, chunks));
    pool.reserve(nt - 1);
    for (int t = 0; t < nt - 1; ++t) pool.emplace_back(run);
    run();
    for (auto& th : pool) th.join();
}

double parallel_sum(std::size_t n, const std::function<double(std::size_t, std::size_t)>& chunk_sum,
                    std::size_t grain) {
    if (n == 0) return 0.0;
    std::size_t chunks = (n + grain - 1) / grain;
    std::vector<double> partial(chunks, 0.0);
    parallel_for(
        n,
        [&](std::size_t begin, std::size_t end) { partial[begin / grain] = chunk_sum(begin, end); },
        grain);
    KahanSum total;
    for (double p : partial) total.add(p);
    return total.value();
}

namespace {

double simpson_rec(const std::function<double(double)>& f, double a, double b, double fa,
                   double fm, double fb, double whole, double tol, int depth) {
    double m = 0.5 * (a + b);
    double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    double flm = f(lm), frm = f(rm);
    double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol)
        return left + right + delta / 15.0;
    return simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

}  // namespace

double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double rel_tol, int max_depth) {
    if (a == b) return 0.0;
    double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
    double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    double scale = std::abs(whole) + 1e-300;
    return simpson_rec(f, a, b, fa, fm, fb, whole, rel_tol * scale, max_depth);
}

double radial_tail_integral(const std::function<double(double)>& g, double r0, double rel_tol) {
    if (r0 <= 0.0) throw std::invalid_argument("radial_tail_integral: r0 must be positive");
    auto mapped = [&](double t) {
        if (t <= 0.0) return 0.0;
        double r = r0 / t;
        return g(r) * r0 / (t * t);
    };
    return adaptive_simpson(mapped, 0.0, 1.0, rel_tol);
}

}  // namespace symlab
