// Benchmark: OpenMP workspace-sampling kernel vs the serial reference.

#include <chrono>
#include <cstdio>
#include <cmath>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "handsim/hand_model.hpp"
#include "handsim/kinematics.hpp"

using namespace handsim;

namespace {

double time_ms(std::vector<FingertipPoint> (*fn)(const DHChain&, const CouplingRule&, int),
               const DHChain& chain, const CouplingRule& coupling, int steps,
               double* checksum) {
    const auto t0 = std::chrono::steady_clock::now();
    const auto pts = fn(chain, coupling, steps);
    const auto t1 = std::chrono::steady_clock::now();
    double sum = 0.0;
    for (const auto& p : pts) sum += p.x + p.y + p.z;
    *checksum = sum;
    return std::chrono::duration<double, std::milli>(t1 - t0).count();
}

}  // namespace

int main() {
    const HandSpec spec = default_hand_spec();
    const DHChain& chain = spec.finger("index");
    const CouplingRule coupling = *spec.coupling_for("index");

#ifdef _OPENMP
    std::printf("openmp threads: %d\n", omp_get_max_threads());
#else
    std::printf("built without openmp; both columns run serial code\n");
#endif
    std::printf("%8s %10s %12s %12s %9s %8s\n", "steps", "points", "serial_ms",
                "parallel_ms", "speedup", "match");

    for (int steps : {20, 40, 60, 80}) {
        double sum_s = 0, sum_p = 0;
        // warm-up pass so thread pool spin-up is not billed to the kernel
        (void)sample_workspace(chain, coupling, steps);
        const double ser = time_ms(&sample_workspace_serial, chain, coupling, steps, &sum_s);
        const double par = time_ms(&sample_workspace, chain, coupling, steps, &sum_p);
        const long points = static_cast<long>(steps) * steps * steps;
        std::printf("%8d %10ld %12.2f %12.2f %8.2fx %8s\n", steps, points, ser, par,
                    ser / par, sum_s == sum_p ? "exact" : "DIFF");
    }
    return 0;
}
