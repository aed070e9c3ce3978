#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "synlab/precision.hpp"
#include "synlab/redundancy.hpp"

namespace synlab::pathint {

enum class PotentialKind { Free, Harmonic, Quartic };

struct Potential {
    PotentialKind kind = PotentialKind::Free;
    double omega = 1.0;   // harmonic / quartic quadratic part
    double quartic = 0.0; // quartic coupling

    double operator()(double x) const;

    static Potential free_particle() { return {PotentialKind::Free, 0.0, 0.0}; }
    static Potential harmonic(double omega) { return {PotentialKind::Harmonic, omega, 0.0}; }
    static Potential quartic_well(double omega, double coupling) {
        return {PotentialKind::Quartic, omega, coupling};
    }
};

enum class Discretization { Midpoint, Endpoint };

struct ActionSpec {
    double mass = 1.0;
    Potential potential;
    Discretization discretization = Discretization::Midpoint;
};

struct LatticeSpec {
    int num_steps = 1;      // segments; interior nodes = num_steps - 1
    double step = 1.0;      // Euclidean time spacing
    std::vector<double> grid;
    double endpoint_start = 0.0;
    double endpoint_end = 0.0;

    long long history_count() const;
};

/// Midpoint (or endpoint-averaged) discretization of the Euclidean action:
///   sum_k [ m/2 ((x_k - x_{k-1}) / eps)^2 + V(...) ] * eps
double euclidean_action(const std::vector<double>& nodes, const ActionSpec& action, double step);

struct Measure {
    std::vector<double> actions;        // per history, enumeration order
    std::vector<double> probabilities;  // normalized, pairwise summation
};

/// Exact enumeration of exp(-S_E / hbar) over all interior assignments.
/// Histories are indexed big-endian in node order; the OpenMP kernel
/// partitions by the leading node value and is bit-identical to the serial
/// reference for any worker count.  Throws TooLarge beyond 10^7 histories.
Measure exhaustive_measure(const LatticeSpec& lattice, const ActionSpec& action, double hbar,
                           int workers = 0);
Measure exhaustive_measure_serial(const LatticeSpec& lattice, const ActionSpec& action,
                                  double hbar);

struct HbarFit {
    double hbar_eff = 0.0;
    double r_squared = 0.0;
};

/// Least-squares slope of -log P against S_E; the intercept absorbs the
/// normalization.  Throws Unidentifiable with fewer than 3 distinct actions.
HbarFit hbar_eff_fit(const std::vector<std::pair<double, double>>& action_probability_pairs);

struct ClosureReport {
    double tv_distance = 0.0;      // redundancy measure vs Euclidean measure
    double tail_bound = 0.0;       // geometric bound from the finite ceiling
    double hbar_eff_expected = 0.0;
    HbarFit fit;                   // fit on the redundancy side
    double max_ell = 0.0;
    std::vector<double> actions;
    std::vector<double> redundancy_probability;
    std::vector<double> euclidean_probability;
};

/// Closes the loop: costs ell = alpha * S_E + B feed the junk-sector weights
/// at ceiling K; the induced measure must match exp(-S_E / hbar_eff) with
/// hbar_eff = 1 / (alpha * Lambda) up to the geometric tail of the ceiling.
/// Both measures are normalized in high precision before comparison.
ClosureReport closure_check(const LatticeSpec& lattice, const ActionSpec& action, double alpha,
                            const redundancy::RedundancyProfile& profile, double ceiling,
                            double boundary_shift = 0.0);

} // namespace synlab::pathint
