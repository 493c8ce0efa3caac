// Benchmark comparing the serial reference kernels against the OpenMP
// variants, plus the streamed persistence pass. The two edge-value kernels
// must agree bit for bit; the run aborts if they diverge.

#include <chrono>
#include <cstdio>
#include <random>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "coolcover/persistence.hpp"
#include "coolcover/witness.hpp"

using namespace coolcover;

namespace {

double ms_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
        .count();
}

witness::LandmarkSet random_landmarks(std::size_t n, std::mt19937& rng, double box) {
    std::uniform_real_distribution<double> dlat(30.0, 30.0 + box);
    std::uniform_real_distribution<double> dlon(-97.9, -97.9 + box);
    witness::LandmarkSet set;
    for (std::size_t i = 0; i < n; ++i) {
        set.points.push_back({dlat(rng), dlon(rng)});
        set.ids.push_back("B" + std::to_string(i));
    }
    return set;
}

} // namespace

int main(int argc, char** argv) {
    std::size_t n_landmarks = 1500;
    std::size_t n_witnesses = 250;
    unsigned seed = 7;
    if (argc > 1)
        n_landmarks = std::strtoull(argv[1], nullptr, 10);
    if (argc > 2)
        n_witnesses = std::strtoull(argv[2], nullptr, 10);
    if (argc > 3)
        seed = static_cast<unsigned>(std::strtoul(argv[3], nullptr, 10));

#ifdef _OPENMP
    std::printf("OpenMP threads: %d\n", omp_get_max_threads());
#else
    std::printf("OpenMP not enabled; parallel kernels run serially\n");
#endif
    std::printf("landmarks=%zu witnesses=%zu seed=%u\n\n", n_landmarks, n_witnesses, seed);

    std::mt19937 rng(seed);
    const auto landmarks = random_landmarks(n_landmarks, rng, 0.3);
    witness::WitnessSet witnesses;
    {
        auto as_landmarks = random_landmarks(n_witnesses, rng, 0.36);
        witnesses.points = std::move(as_landmarks.points);
        witnesses.ids = std::move(as_landmarks.ids);
    }

    auto t0 = std::chrono::steady_clock::now();
    const auto dist = witness::distance_matrix(landmarks, witnesses);
    std::printf("distance_matrix (parallel)     %10.1f ms\n", ms_since(t0));

    t0 = std::chrono::steady_clock::now();
    const auto serial = witness::edge_filtration_values_serial(dist);
    const double serial_ms = ms_since(t0);
    std::printf("edge values, serial reference  %10.1f ms\n", serial_ms);

    t0 = std::chrono::steady_clock::now();
    const auto parallel = witness::edge_filtration_values(dist);
    const double parallel_ms = ms_since(t0);
    std::printf("edge values, OpenMP            %10.1f ms   (speedup %.2fx)\n", parallel_ms,
                serial_ms / parallel_ms);

    if (serial != parallel) {
        std::fprintf(stderr, "kernel mismatch: serial and parallel edge values differ\n");
        return 1;
    }

    t0 = std::chrono::steady_clock::now();
    const auto diagram = persistence::flag_persistence_h01(landmarks.size(), parallel);
    std::printf("flag persistence (streamed)    %10.1f ms\n", ms_since(t0));

    std::size_t h0 = 0, h1 = 0;
    for (const auto& p : diagram.pairs)
        (p.dim == 0 ? h0 : h1) += 1;
    std::printf("\npairs: %zu in dim 0, %zu in dim 1\n", h0, h1);
    return 0;
}
