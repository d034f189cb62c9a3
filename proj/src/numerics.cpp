#include "revscatter/numerics.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <mutex>
#include <thread>

namespace revscatter {

std::vector<Complex> integrate_ivp(
    const std::function<std::vector<Complex>(double, const std::vector<Complex>&)>& rhs,
    double x0, double x1, std::vector<Complex> y0, int steps) {
    auto wrap = [&rhs](double x, const std::vector<Complex>& y, std::vector<Complex>& dy) {
        dy = rhs(x, y);
    };
    return rk4_integrate(wrap, x0, x1, std::move(y0), steps);
}

Complex trapezoid(std::span<const Complex> values, const Grid& grid) {
    if (static_cast<int>(values.size()) != grid.size())
        throw LengthMismatch("trapezoid: values size does not match grid");
    Complex acc = 0.5 * (values.front() + values.back());
    for (int j = 1; j < grid.n; ++j) acc += values[j];
    return acc * grid.step();
}

double trapezoid(std::span<const double> values, const Grid& grid) {
    if (static_cast<int>(values.size()) != grid.size())
        throw LengthMismatch("trapezoid: values size does not match grid");
    double acc = 0.5 * (values.front() + values.back());
    for (int j = 1; j < grid.n; ++j) acc += values[j];
    return acc * grid.step();
}

Complex dft_halfline(std::span<const Complex> samples, const Grid& kgrid, double x) {
    if (static_cast<int>(samples.size()) != kgrid.size())
        throw LengthMismatch("dft_halfline: samples size does not match grid");
    const Complex i(0.0, 1.0);
    Complex acc = 0.5 * (samples.front() * std::exp(i * x * kgrid.node(0)) +
                         samples.back() * std::exp(i * x * kgrid.node(kgrid.n)));
    for (int j = 1; j < kgrid.n; ++j)
        acc += samples[j] * std::exp(i * x * kgrid.node(j));
    return acc * kgrid.step() / (2.0 * M_PI);
}

namespace {
int g_max_threads = 0;  // 0 = use hardware_concurrency
}

int max_threads() {
    if (g_max_threads > 0) return g_max_threads;
    if (const char* env = std::getenv("REVSCATTER_THREADS")) {
        int t = std::atoi(env);
        if (t > 0) return t;
    }
    int hc = static_cast<int>(std::thread::hardware_concurrency());
    return hc > 0 ? hc : 1;
}

void set_max_threads(int t) { g_max_threads = t; }

void parallel_for(int n, const std::function<void(int)>& fn) {
    const int nt = std::min(max_threads(), n);
    if (nt <= 1) {
        for (int i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<int> next{0};
    std::exception_ptr err;
    std::mutex err_mu;
    auto worker = [&]() {
        for (;;) {
            int i = next.fetch_add(1);
            if (i >= n) return;
            try {
                fn(i);
            } catch (...) {
                std::lock_guard lk(err_mu);
                if (!err) err = std::current_exception();
            }
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(nt);
    for (int t = 0; t < nt; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
    if (err) std::rethrow_exception(err);
}

}  // namespace revscatter
