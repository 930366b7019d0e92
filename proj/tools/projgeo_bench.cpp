// Times the serial reference kernels against their OpenMP counterparts
// and checks that both give identical results.
#include <chrono>
#include <cstdio>

#include "projgeo/convex_sets.hpp"
#include "projgeo/kernels.hpp"
#include "projgeo/suites.hpp"

using namespace projgeo;

namespace {

template <typename F>
double time_seconds(F&& fn) {
    const auto t0 = std::chrono::steady_clock::now();
    fn();
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

void row(const char* name, double serial, double parallel, bool agree) {
    std::printf("%-28s %10.4fs %10.4fs %8.2fx   %s\n", name, serial, parallel,
                serial / parallel, agree ? "match" : "MISMATCH");
}

}  // namespace

int main() {
    std::printf("threads: %d\n", kernels::thread_count());
    std::printf("%-28s %11s %11s %9s\n", "kernel", "serial", "openmp", "speedup");

    {
        const NormSpec spec = suites::canonical_matsumoto();
        const auto [s1, s2] = matsumoto_demo_sets();
        const auto g1 = sample_grid(s1, 2001, 20.0);
        const auto g2 = sample_grid(s2, 2001, 20.0);
        kernels::PairMin a, b;
        const double ts = time_seconds([&] { a = kernels::min_pair_distance_serial(spec, g1, g2); });
        const double tp = time_seconds([&] { b = kernels::min_pair_distance(spec, g1, g2); });
        row("pair_grid_min", ts, tp,
            a.value == b.value && a.from_index == b.from_index && a.to_index == b.to_index);
    }

    {
        const NormSpec spec = suites::canonical_randers();
        kernels::SweepStats a, b;
        const double ts =
            time_seconds([&] { a = kernels::fundamental_sweep_serial(spec, 200000, 7, 1e-8); });
        const double tp =
            time_seconds([&] { b = kernels::fundamental_sweep(spec, 200000, 7, 1e-8); });
        row("fundamental_sweep", ts, tp,
            a.min_residual == b.min_residual && a.max_tensor_gap == b.max_tensor_gap &&
                a.violations == b.violations);
    }

    {
        kernels::ModelSweep a, b;
        const double ts = time_seconds(
            [&] { a = kernels::nonexpansiveness_sweep_serial(-1.0, 4000, 7, 1e-9); });
        const double tp =
            time_seconds([&] { b = kernels::nonexpansiveness_sweep(-1.0, 4000, 7, 1e-9); });
        row("nonexpansive_sweep", ts, tp,
            a.worst_residual == b.worst_residual && a.violations == b.violations);
    }
    return 0;
}
