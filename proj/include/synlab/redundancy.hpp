#pragma once

#include <optional>
#include <string>
#include <vector>

#include "synlab/costs.hpp"
#include "synlab/grammar.hpp"
#include "synlab/precision.hpp"

namespace synlab::redundancy {

/// Growth data of the junk sector, with memoized exact counts when the
/// profile is backed by a constraint automaton or an integer growth rate.
class RedundancyProfile {
public:
    static RedundancyProfile from_rule(const grammar::JunkRule& rule);
    /// Pure geometric profile N(L) = gamma^L.  Exact counts are synthesized
    /// when gamma is an integer; otherwise only the closed form is available.
    static RedundancyProfile from_gamma(double gamma);

    double gamma() const { return gamma_; }
    double redundancy_exponent() const { return lambda_; }
    bool exact_counts() const { return has_counts_; }

    const BigInt& count(int length) const;
    BigInt cumulative(int length) const;

private:
    RedundancyProfile() = default;

    double gamma_ = 0.0;
    double lambda_ = 0.0;
    std::optional<grammar::JunkRule> rule_;
    bool has_counts_ = false;
    long long gamma_integer_ = 0;
    mutable std::vector<BigInt> counts_;
};

struct JunkWeight {
    int junk_budget = 0;                  // floor(K - ell), in symbol units
    std::optional<BigInt> exact;          // cumulative count up to the budget
    HighFloat closed_form;                // gamma^(K - ell + 1) / (gamma - 1)
    std::optional<double> exact_to_closed_ratio;
};

/// Multiplicity of junk completions under the ceiling K.  Throws
/// CeilingTooSmall when K < ell.
JunkWeight junk_weight(const RedundancyProfile& profile, double ell, double ceiling);

struct RelativeWeight {
    HighFloat ratio;     // W[x1] / W[x2]
    bool exact = false;  // big-integer path
    double limit = 0.0;  // gamma^(ell2 - ell1)
    HighFloat deviation; // |ratio - limit|
};

/// The ceiling cancels in relative weights up to a geometric tail; the exact
/// ratio converges to gamma^(ell2-ell1) as the ceiling grows.
RelativeWeight relative_weight(const RedundancyProfile& profile, double ell1, double ell2,
                               double ceiling);

struct CostEntry {
    std::string id;
    double ell = 0.0;
};

struct WeightRow {
    std::string id;
    double ell = 0.0;
    std::string weight_repr;
    HighFloat weight;
    double probability = 0.0;
};

struct WeightTable {
    std::vector<WeightRow> rows;
    double probability_sum = 0.0;
    bool used_exact_counts = false;
};

/// Redundancy weights for a cost table.  With a finite ceiling the weights
/// are exact cumulative counts when every cost is integer-valued and counts
/// are available, otherwise the real-exponent geometric form; without a
/// ceiling they collapse to exp(-Lambda * ell).  Normalization uses pairwise
/// summation in high precision.
WeightTable weight_table(const RedundancyProfile& profile, const std::vector<CostEntry>& entries,
                         bool normalize = true, std::optional<double> ceiling = std::nullopt);

struct EmergentScale {
    double alpha = 1.0;
    double redundancy_exponent = 1.0;

    double hbar_eff() const { return 1.0 / (alpha * redundancy_exponent); }
};

struct ScaleRedundancyReport {
    double rescale_factor = 1.0;
    double max_probability_deviation = 0.0;
    double hbar_eff_relative_deviation = 0.0;
    bool pass = false; // both deviations within 1e-12
};

/// Verifies the rescaling (ell, Lambda, alpha) -> (c ell, Lambda/c, c alpha):
/// normalized weights and the emergent scale must be unchanged.
ScaleRedundancyReport scale_redundancy_check(const RedundancyProfile& profile,
                                             const std::vector<CostEntry>& entries, double alpha,
                                             double rescale_factor);

struct ConcentrationSpec {
    std::vector<double> grid;  // admissible node values
    double endpoint_start = 0.0;
    double endpoint_end = 0.0;
    int num_segments = 4;
    costs::CostPtr cost;
    std::vector<double> lambdas;
    double neighborhood_radius = 0.0;
    // Interior stationary configuration; solved by the variational module
    // when absent.
    std::optional<std::vector<double>> stationary;
    int workers = 0;
    bool parallel = true;
};

struct ConcentrationPoint {
    double lambda = 0.0;
    double mass_near_stationary = 0.0;
};

struct ConcentrationResult {
    std::vector<double> stationary;
    std::vector<ConcentrationPoint> curve;
    long long history_count = 0;
};

/// Exhaustive sweep of exp(-lambda * cost) over all grid histories; reports
/// the probability mass within the neighborhood of the stationary
/// configuration for each lambda.
ConcentrationResult concentration_experiment(const ConcentrationSpec& spec);

} // namespace synlab::redundancy
