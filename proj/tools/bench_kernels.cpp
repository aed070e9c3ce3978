// Benchmark of the enumeration kernels: serial reference vs the OpenMP
// partition-by-leading-node kernel, with a bit-identity check between them.

#include <chrono>
#include <cstring>
#include <iostream>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "synlab/pathint.hpp"
#include "synlab/redundancy.hpp"

namespace {

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

bool bit_identical(const std::vector<double>& a, const std::vector<double>& b) {
    return a.size() == b.size() &&
           std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0;
}

} // namespace

int main(int argc, char** argv) {
    int grid_points = 15;
    int num_steps = 6;
    if (argc > 1) grid_points = std::atoi(argv[1]);
    if (argc > 2) num_steps = std::atoi(argv[2]);

    synlab::pathint::LatticeSpec lattice;
    lattice.num_steps = num_steps;
    lattice.step = 0.5;
    for (int i = 0; i < grid_points; ++i)
        lattice.grid.push_back(-2.0 + 4.0 * i / (grid_points - 1));
    lattice.endpoint_start = 0.0;
    lattice.endpoint_end = 0.0;
    synlab::pathint::ActionSpec action{1.0, synlab::pathint::Potential::harmonic(1.0),
                                       synlab::pathint::Discretization::Midpoint};

    std::cout << "lattice: " << grid_points << " grid values, " << num_steps << " steps, "
              << lattice.history_count() << " histories\n";
#ifdef _OPENMP
    std::cout << "openmp threads available: " << omp_get_max_threads() << "\n";
#else
    std::cout << "built without OpenMP; both kernels run serial\n";
#endif

    auto start = std::chrono::steady_clock::now();
    const auto serial = synlab::pathint::exhaustive_measure_serial(lattice, action, 1.0);
    const double serial_time = seconds_since(start);
    std::cout << "serial reference:  " << serial_time << " s\n";

    for (int workers : {1, 2, 4, 8}) {
        start = std::chrono::steady_clock::now();
        const auto parallel = synlab::pathint::exhaustive_measure(lattice, action, 1.0, workers);
        const double parallel_time = seconds_since(start);
        const bool identical = bit_identical(serial.probabilities, parallel.probabilities) &&
                               bit_identical(serial.actions, parallel.actions);
        std::cout << "openmp x" << workers << ":         " << parallel_time << " s  (speedup "
                  << serial_time / parallel_time << ", bit-identical: "
                  << (identical ? "yes" : "NO") << ")\n";
        if (!identical) return 1;
    }
    return 0;
}
