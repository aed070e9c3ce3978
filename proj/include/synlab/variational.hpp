#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "synlab/costs.hpp"

namespace synlab::variational {

enum class DerivativeMethod { Analytic, CentralDifference };

/// Discrete Euler-Lagrange operator at interior node j:
///   E_j = d/dx_j [ cost(x_{j-1}, x_j) + cost(x_j, x_{j+1}) ].
/// Central differences use step 1e-5 * (1 + |x_j|) per coordinate.
Vec el_operator(const costs::LocalCost& cost, const std::vector<Vec>& nodes, std::size_t j,
                DerivativeMethod method = DerivativeMethod::Analytic);

enum class StationarySolver { NewtonMultistart, ExhaustiveGrid };

struct StationaryOptions {
    double box_lo = -2.0;
    double box_hi = 2.0;
    int grid_points_per_dim = 5;
    double residual_tol = 1e-9;
    double dedup_tol = 1e-7;
    int max_newton_iterations = 100;
};

struct StationaryResult {
    // Each entry is one interior-node configuration x_1..x_{N-1}.
    std::vector<std::vector<Vec>> configurations;
    double best_residual = 0.0; // max_j |E_j| of the best configuration found
    bool empty() const { return configurations.empty(); }
};

/// All interior configurations solving E_j = 0 with the endpoints held fixed.
/// Newton runs from a multistart grid; the exhaustive solver returns grid
/// points whose |E| is locally minimal.  Duplicates within dedup_tol merge;
/// output is sorted, so results are deterministic.
StationaryResult stationary_set(const costs::CostPtr& cost, const Vec& endpoint_start,
                                const Vec& endpoint_end, int num_segments,
                                StationarySolver solver,
                                const StationaryOptions& options = {});

struct Disagreement {
    Vec a, b, c;
    double ell_operator_norm = 0.0;
    double lagrangian_operator_norm = 0.0;
};

struct SharedStationarityOptions {
    double box_lo = -1.0;
    double box_hi = 1.0;
    int dimension = 1;
    int num_samples = 2000;
    std::uint64_t seed = 20240901;
    double zero_tol = 1e-9;
    // Points where one operator is below zero_tol while the other exceeds
    // nonzero_tol count as disagreements; the band between is indeterminate.
    double nonzero_tol = 1e-6;
};

struct SharedStationarityReport {
    std::size_t samples_checked = 0;
    std::vector<Disagreement> disagreements;
    std::size_t degenerate_jacobian_points = 0;
};

/// Compares the zero sets of the two local EL operators on sampled triples:
/// generic box samples, shrinking-step probes near constant configurations,
/// and points root-solved onto each operator's zero set.
SharedStationarityReport shared_stationarity(const costs::CostPtr& ell,
                                             const costs::CostPtr& lagrangian,
                                             const SharedStationarityOptions& options = {});

struct ELFit {
    double c_hat = 0.0;
    std::vector<Vec> node_values;
    std::vector<double> g_values; // gauge-fixed: g_values[gauge_ref] == 0
    std::size_t gauge_ref = 0;
    double residual_max = 0.0;
    int design_rank = 0;
};

/// Least-squares recovery of the decomposition
///   ell(a, b) = c * L(a, b) + G(b) - G(a)
/// over segments drawn from a fixed set of node values, with G estimated
/// pointwise and gauge-fixed at node_values[gauge_ref].  Throws
/// Unidentifiable (with a null-space description) on rank-deficient designs.
ELFit el_locality_fit(const costs::CostPtr& ell, const costs::CostPtr& lagrangian,
                      const std::vector<Vec>& node_values,
                      std::vector<std::pair<std::size_t, std::size_t>> pairs = {},
                      std::size_t gauge_ref = 0);

struct GlobalDecompositionReport {
    double max_residual = 0.0;
    double max_shared_endpoint_residual = 0.0;
    std::size_t histories_checked = 0;
};

/// Verifies ell[x] = c * S[x] + G(x_N) - G(x_0) on whole histories whose
/// nodes are drawn from the fitted node values, and that histories sharing
/// endpoints differ by exactly c times the action difference.
GlobalDecompositionReport global_decomposition_check(const costs::CostPtr& ell,
                                                     const costs::CostPtr& lagrangian,
                                                     const ELFit& fit,
                                                     const std::vector<std::vector<Vec>>& histories);

} // namespace synlab::variational
