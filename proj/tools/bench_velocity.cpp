#include <chrono>
#include <cstdio>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "vring/ring_sim.hpp"

using vring::compute_velocities;
using vring::PlanarVec;

namespace {

double time_run(const std::vector<vring::ParticleBlob>& blobs, const vring::SimParams& params,
                bool parallel, std::vector<PlanarVec>& out) {
    const auto t0 = std::chrono::steady_clock::now();
    out = compute_velocities(blobs, params, parallel);
    const auto t1 = std::chrono::steady_clock::now();
    return std::chrono::duration<double>(t1 - t0).count();
}

} // namespace

int main() {
    vring::SimParams params = vring::make_sim_params(1e-2, 3.0);
    params.particles_per_blob = 2000;
    params.delta = 1e-4;
    const std::vector<vring::ParticleBlob> blobs =
        vring::init_blobs(params, {{0.0, 0.0}, {1.0, 0.0}}, {1.0, 0.8});

    std::size_t total = 0;
    for (const vring::ParticleBlob& b : blobs) total += b.positions.size();
    const double pairs = static_cast<double>(total) * static_cast<double>(total);

    std::vector<PlanarVec> serial, parallel;
    time_run(blobs, params, false, serial); // warm up caches and the table

    const double ts = time_run(blobs, params, false, serial);
    const double tp = time_run(blobs, params, true, parallel);

    int threads = 1;
#ifdef _OPENMP
    threads = omp_get_max_threads();
#endif
    std::printf("%zu particles, %.3g pair evaluations\n", total, pairs);
    std::printf("serial:   %8.3f ms  (%.1f ns/pair)\n", ts * 1e3, ts / pairs * 1e9);
    std::printf("parallel: %8.3f ms  (%.1f ns/pair, %d threads, speedup %.2fx)\n", tp * 1e3,
                tp / pairs * 1e9, threads, ts / tp);

    for (std::size_t i = 0; i < serial.size(); ++i)
        if (serial[i] != parallel[i]) {
            std::printf("MISMATCH at particle %zu: serial (%.17g, %.17g) parallel (%.17g, %.17g)\n",
                        i, serial[i].x1, serial[i].x2, parallel[i].x1, parallel[i].x2);
            return 1;
        }
    std::printf("serial and parallel results are bitwise identical\n");
    return 0;
}
