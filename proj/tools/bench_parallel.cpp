// Benchmark of the OpenMP kernels against their serial references:
// enumeration of biased dessins and the morphism matrix behind hasse().
// Outputs one line per kernel with both timings and checks the results agree.

#include <chrono>
#include <cstdio>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "dessins/dessin.hpp"
#include "dessins/lattice.hpp"

using namespace dessins;

namespace {

double seconds(std::chrono::steady_clock::time_point a,
               std::chrono::steady_clock::time_point b) {
    return std::chrono::duration<double>(b - a).count();
}

}  // namespace

int main(int argc, char** argv) {
    int enum_degree = 6;
    int hasse_degree = 4;
    int threads = 0;
    for (int i = 1; i < argc; ++i) {
        const std::string arg = argv[i];
        if (arg == "--degree" && i + 1 < argc) enum_degree = std::stoi(argv[++i]);
        else if (arg == "--hasse-degree" && i + 1 < argc) hasse_degree = std::stoi(argv[++i]);
        else if (arg == "--threads" && i + 1 < argc) threads = std::stoi(argv[++i]);
        else {
            std::printf("usage: bench_parallel [--degree N] [--hasse-degree N] [--threads K]\n");
            return 2;
        }
    }
#ifdef _OPENMP
    const int used = threads > 0 ? threads : omp_get_max_threads();
#else
    const int used = 1;
#endif
    std::printf("threads: %d\n", used);

    {
        const auto t0 = std::chrono::steady_clock::now();
        const auto serial = enumerate_biased_serial(enum_degree, false);
        const auto t1 = std::chrono::steady_clock::now();
        const auto parallel = enumerate_biased(enum_degree, false, threads);
        const auto t2 = std::chrono::steady_clock::now();
        const bool same = serial == parallel;
        std::printf("enumerate degree %d: %zu dessins  serial %.3fs  parallel %.3fs  speedup %.2fx  %s\n",
                    enum_degree, serial.size(), seconds(t0, t1), seconds(t1, t2),
                    seconds(t0, t1) / seconds(t1, t2), same ? "match" : "MISMATCH");
        if (!same) return 1;
    }

    {
        std::vector<BiasedDessin> nodes;
        for (const auto& key : enumerate_universe(hasse_degree)) {
            nodes.push_back(dessin_from_key(key));
        }
        const auto t0 = std::chrono::steady_clock::now();
        const auto serial = hasse_edges_serial(nodes);
        const auto t1 = std::chrono::steady_clock::now();
        const auto parallel = hasse_edges(nodes, threads);
        const auto t2 = std::chrono::steady_clock::now();
        const bool same = serial == parallel;
        std::printf("hasse on degree <= %d (%zu nodes): %zu edges  serial %.3fs  parallel %.3fs  speedup %.2fx  %s\n",
                    hasse_degree, nodes.size(), serial.size(), seconds(t0, t1), seconds(t1, t2),
                    seconds(t0, t1) / seconds(t1, t2), same ? "match" : "MISMATCH");
        if (!same) return 1;
    }
    return 0;
}
