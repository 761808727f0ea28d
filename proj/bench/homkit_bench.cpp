#include "homkit/lie_algebra.hpp"
#include "homkit/plane_wave.hpp"
#include "homkit/random.hpp"

#include <omp.h>

#include <chrono>
#include <cstdio>
#include <cstdlib>

using namespace homkit;

namespace
{
template <class Fn> double seconds(Fn &&fn, int reps)
{
    auto t0 = std::chrono::steady_clock::now();
    for (int r = 0; r < reps; ++r)
        fn();
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count() / reps;
}

LieAlgebra random_algebra(int d, std::uint64_t seed)
{
    Rng rng(seed);
    BracketTable t(d);
    for (int a = 0; a < d; ++a)
        for (int b = a + 1; b < d; ++b)
            for (int c = 0; c < d; ++c)
                if (rng() % 3 == 0)
                    t.set(a, b, c, random_rational(rng));
    return t.build();
}
} // namespace

int main(int argc, char **argv)
{
    int reps = argc > 1 ? std::atoi(argv[1]) : 3;
    std::printf("threads: %d\n", omp_get_max_threads());
    std::printf("%-34s %12s %12s %8s %s\n", "kernel", "serial [s]", "openmp [s]", "speedup", "agree");

    for (int d : {16, 24})
    {
        auto alg = random_algebra(d, 11 + d);
        JacobiResult js, jp;
        double ts = seconds([&] { js = jacobi_residual_serial(alg); }, reps);
        double tp = seconds([&] { jp = jacobi_residual(alg); }, reps);
        char name[64];
        std::snprintf(name, sizeof name, "jacobi_residual random d=%d", d);
        std::printf("%-34s %12.4f %12.4f %8.2f %s\n", name, ts, tp, ts / tp,
                    js.residual == jp.residual ? "yes" : "NO");
    }
    for (int n : {6, 10})
    {
        auto alg = pw_isometry_algebra(random_plane_wave(n, 5));
        JacobiResult js, jp;
        double ts = seconds([&] { js = jacobi_residual_serial(alg); }, reps);
        double tp = seconds([&] { jp = jacobi_residual(alg); }, reps);
        char name[64];
        std::snprintf(name, sizeof name, "jacobi_residual plane wave n=%d", n);
        std::printf("%-34s %12.4f %12.4f %8.2f %s\n", name, ts, tp, ts / tp,
                    js.residual == jp.residual ? "yes" : "NO");
    }
    for (int n : {2, 4})
    {
        auto pw = random_plane_wave(n, 9);
        auto pts = sample_points(n, 64, 3);
        ASResiduals rs, rp;
        double ts = seconds([&] { rs = as_residuals_serial(pw, pts); }, reps);
        double tp = seconds([&] { rp = as_residuals(pw, pts); }, reps);
        bool agree = rs.r_g == rp.r_g && rs.r_R == rp.r_R && rs.r_S == rp.r_S && rs.r_geo == rp.r_geo;
        char name[64];
        std::snprintf(name, sizeof name, "as_residuals n=%d, 64 points", n);
        std::printf("%-34s %12.4f %12.4f %8.2f %s\n", name, ts, tp, ts / tp, agree ? "yes" : "NO");
    }
}
