#include "synlab/pathint.hpp"

#include <algorithm>
#include <cmath>

#include "synlab/errors.hpp"
#include "synlab/lattice.hpp"
#include "synlab/precision.hpp"
#include "synlab/reduction.hpp"

namespace synlab::pathint {

namespace mp = boost::multiprecision;

double Potential::operator()(double x) const {
    switch (kind) {
        case PotentialKind::Free: return 0.0;
        case PotentialKind::Harmonic: return 0.5 * omega * omega * x * x;
        case PotentialKind::Quartic:
            return 0.5 * omega * omega * x * x + quartic * x * x * x * x;
    }
    return 0.0;
}

long long LatticeSpec::history_count() const {
    long long total = 1;
    for (int j = 0; j < num_steps - 1; ++j) total *= static_cast<long long>(grid.size());
    return total;
}

double euclidean_action(const std::vector<double>& nodes, const ActionSpec& action, double step) {
    double total = 0.0;
    for (std::size_t k = 1; k < nodes.size(); ++k) {
        const double velocity = (nodes[k] - nodes[k - 1]) / step;
        const double potential = action.discretization == Discretization::Midpoint
                                     ? action.potential(0.5 * (nodes[k] + nodes[k - 1]))
                                     : 0.5 * (action.potential(nodes[k]) +
                                              action.potential(nodes[k - 1]));
        total += (0.5 * action.mass * velocity * velocity + potential) * step;
    }
    return total;
}

namespace {

void validate_lattice(const LatticeSpec& lattice) {
    if (lattice.num_steps < 1)
        throw Error(ErrorCode::InvalidArgument, "lattice needs at least one step");
    if (!(lattice.step > 0.0))
        throw Error(ErrorCode::InvalidArgument, "lattice step must be positive");
    if (lattice.grid.empty())
        throw Error(ErrorCode::InvalidArgument, "lattice grid is empty");
}

std::vector<double> action_table(const LatticeSpec& lattice, const ActionSpec& action,
                                 int workers, bool parallel) {
    validate_lattice(lattice);
    const auto enumeration = lattice::make_enumeration(static_cast<int>(lattice.grid.size()),
                                                       lattice.num_steps - 1);
    std::vector<double> actions(enumeration.total);
    auto body = [&](long long idx, const std::vector<int>& digits) {
        std::vector<double> nodes;
        nodes.reserve(lattice.num_steps + 1);
        nodes.push_back(lattice.endpoint_start);
        for (int digit : digits) nodes.push_back(lattice.grid[digit]);
        nodes.push_back(lattice.endpoint_end);
        actions[idx] = euclidean_action(nodes, action, lattice.step);
    };
    if (parallel)
        lattice::for_each_history_parallel(enumeration, workers, body);
    else
        lattice::for_each_history_serial(enumeration, body);
    return actions;
}

Measure measure_from_actions(std::vector<double> actions, double hbar) {
    Measure m;
    std::vector<double> weights(actions.size());
    for (std::size_t i = 0; i < actions.size(); ++i) weights[i] = std::exp(-actions[i] / hbar);
    const double total = pairwise_sum(weights);
    m.actions = std::move(actions);
    m.probabilities.resize(weights.size());
    for (std::size_t i = 0; i < weights.size(); ++i) m.probabilities[i] = weights[i] / total;
    return m;
}

} // namespace

Measure exhaustive_measure(const LatticeSpec& lattice, const ActionSpec& action, double hbar,
                           int workers) {
    if (!(hbar > 0.0)) throw Error(ErrorCode::InvalidArgument, "hbar must be positive");
    return measure_from_actions(action_table(lattice, action, workers, true), hbar);
}

Measure exhaustive_measure_serial(const LatticeSpec& lattice, const ActionSpec& action,
                                  double hbar) {
    if (!(hbar > 0.0)) throw Error(ErrorCode::InvalidArgument, "hbar must be positive");
    return measure_from_actions(action_table(lattice, action, 1, false), hbar);
}

HbarFit hbar_eff_fit(const std::vector<std::pair<double, double>>& pairs) {
    std::vector<double> distinct;
    for (const auto& [s, p] : pairs) {
        if (!(p > 0.0))
            throw Error(ErrorCode::InvalidArgument, "probabilities must be positive");
        bool seen = false;
        for (double d : distinct)
            if (std::abs(d - s) < 1e-15) seen = true;
        if (!seen) distinct.push_back(s);
    }
    if (distinct.size() < 3)
        throw Error(ErrorCode::Unidentifiable, "need at least 3 distinct action values");

    const double n = static_cast<double>(pairs.size());
    double mean_s = 0.0, mean_y = 0.0;
    for (const auto& [s, p] : pairs) {
        mean_s += s;
        mean_y += -std::log(p);
    }
    mean_s /= n;
    mean_y /= n;
    double cov = 0.0, var_s = 0.0, var_y = 0.0;
    for (const auto& [s, p] : pairs) {
        const double ds = s - mean_s;
        const double dy = -std::log(p) - mean_y;
        cov += ds * dy;
        var_s += ds * ds;
        var_y += dy * dy;
    }
    if (var_s <= 0.0)
        throw Error(ErrorCode::Unidentifiable, "zero variance in the action values");
    const double slope = cov / var_s;
    if (!(slope > 0.0))
        throw Error(ErrorCode::Unidentifiable, "non-positive fitted slope");
    HbarFit fit;
    fit.hbar_eff = 1.0 / slope;
    fit.r_squared = var_y > 0.0 ? (cov * cov) / (var_s * var_y) : 1.0;
    return fit;
}

ClosureReport closure_check(const LatticeSpec& lattice, const ActionSpec& action, double alpha,
                            const redundancy::RedundancyProfile& profile, double ceiling,
                            double boundary_shift) {
    if (!(alpha > 0.0)) throw Error(ErrorCode::InvalidArgument, "alpha must be positive");
    init_precision_from_env();
    ClosureReport report;
    report.actions = action_table(lattice, action, 0, true);
    const double lambda = profile.redundancy_exponent();
    report.hbar_eff_expected = 1.0 / (alpha * lambda);

    std::vector<redundancy::CostEntry> entries;
    entries.reserve(report.actions.size());
    for (std::size_t i = 0; i < report.actions.size(); ++i) {
        const double ell = alpha * report.actions[i] + boundary_shift;
        report.max_ell = std::max(report.max_ell, ell);
        entries.push_back({std::to_string(i), ell});
    }
    const redundancy::WeightTable table =
        redundancy::weight_table(profile, entries, true, ceiling);

    // Euclidean side in matching precision; ln(gamma) is re-derived in high
    // precision so both pipelines share the same exponent base.
    std::vector<HighFloat> euclid_weights;
    euclid_weights.reserve(report.actions.size());
    const HighFloat inv_hbar = HighFloat(alpha) * mp::log(HighFloat(profile.gamma()));
    for (double s : report.actions)
        euclid_weights.push_back(mp::exp(-inv_hbar * HighFloat(s)));
    const HighFloat euclid_total = pairwise_sum(euclid_weights);

    std::vector<HighFloat> red_weights;
    red_weights.reserve(table.rows.size());
    for (const auto& row : table.rows) red_weights.push_back(row.weight);
    const HighFloat red_total = pairwise_sum(red_weights);

    std::vector<HighFloat> abs_diffs;
    abs_diffs.reserve(report.actions.size());
    report.redundancy_probability.resize(report.actions.size());
    report.euclidean_probability.resize(report.actions.size());
    for (std::size_t i = 0; i < report.actions.size(); ++i) {
        const HighFloat pr = red_weights[i] / red_total;
        const HighFloat pe = euclid_weights[i] / euclid_total;
        abs_diffs.push_back(mp::abs(pr - pe));
        report.redundancy_probability[i] = pr.convert_to<double>();
        report.euclidean_probability[i] = pe.convert_to<double>();
    }
    report.tv_distance = (pairwise_sum(abs_diffs) / 2).convert_to<double>();

    // Tail of the finite geometric sum: weights deviate from gamma^(-ell) by
    // at most delta = gamma^-(K - max_ell + 1) relatively, so TV <= delta/(1-delta).
    const double slack = ceiling - report.max_ell;
    const double delta = std::pow(profile.gamma(), -(slack + 1.0));
    report.tail_bound = delta < 1.0 ? delta / (1.0 - delta) : 1.0;

    std::vector<std::pair<double, double>> fit_input;
    fit_input.reserve(report.actions.size());
    for (std::size_t i = 0; i < report.actions.size(); ++i)
        fit_input.emplace_back(report.actions[i], report.redundancy_probability[i]);
    report.fit = hbar_eff_fit(fit_input);
    return report;
}

} // namespace synlab::pathint
