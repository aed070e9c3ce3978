#include "synlab/redundancy.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <sstream>

#include "synlab/errors.hpp"
#include "synlab/lattice.hpp"
#include "synlab/precision.hpp"
#include "synlab/reduction.hpp"
#include "synlab/variational.hpp"

namespace synlab::redundancy {

namespace mp = boost::multiprecision;

RedundancyProfile RedundancyProfile::from_rule(const grammar::JunkRule& rule) {
    RedundancyProfile p;
    const auto growth = grammar::growth_rate(rule);
    p.gamma_ = growth.gamma;
    p.lambda_ = growth.redundancy_exponent;
    p.rule_ = rule;
    p.has_counts_ = true;
    return p;
}

RedundancyProfile RedundancyProfile::from_gamma(double gamma) {
    if (!(gamma > 1.0))
        throw Error(ErrorCode::DegenerateGrammar, "growth rate must exceed 1");
    RedundancyProfile p;
    p.gamma_ = gamma;
    p.lambda_ = std::log(gamma);
    const double rounded = std::round(gamma);
    if (std::abs(gamma - rounded) < 1e-12) {
        p.has_counts_ = true;
        p.gamma_integer_ = static_cast<long long>(rounded);
    }
    return p;
}

const BigInt& RedundancyProfile::count(int length) const {
    if (!has_counts_)
        throw Error(ErrorCode::InvalidArgument, "profile has no exact counts");
    if (length < 0)
        throw Error(ErrorCode::InvalidArgument, "negative junk length");
    if (static_cast<int>(counts_.size()) <= length) {
        if (rule_) {
            counts_ = grammar::count_strings_upto(*rule_, std::max(length, 64));
        } else {
            if (counts_.empty()) counts_.push_back(1);
            while (static_cast<int>(counts_.size()) <= length)
                counts_.push_back(counts_.back() * gamma_integer_);
        }
    }
    return counts_[length];
}

BigInt RedundancyProfile::cumulative(int length) const {
    BigInt total = 0;
    for (int l = 0; l <= length; ++l) total += count(l);
    return total;
}

JunkWeight junk_weight(const RedundancyProfile& profile, double ell, double ceiling) {
    init_precision_from_env();
    if (ell < 0.0)
        throw Error(ErrorCode::InvalidArgument, "descriptive cost must be nonnegative");
    if (ceiling < ell)
        throw Error(ErrorCode::CeilingTooSmall,
                    "ceiling " + std::to_string(ceiling) + " below cost " + std::to_string(ell));
    JunkWeight w;
    w.junk_budget = static_cast<int>(std::floor(ceiling - ell + 1e-12));
    const HighFloat g(profile.gamma());
    w.closed_form = mp::pow(g, HighFloat(ceiling - ell + 1.0)) / (g - 1);
    if (profile.exact_counts()) {
        w.exact = profile.cumulative(w.junk_budget);
        const HighFloat ratio = HighFloat(*w.exact) / w.closed_form;
        w.exact_to_closed_ratio = ratio.convert_to<double>();
    }
    return w;
}

RelativeWeight relative_weight(const RedundancyProfile& profile, double ell1, double ell2,
                               double ceiling) {
    const JunkWeight w1 = junk_weight(profile, ell1, ceiling);
    const JunkWeight w2 = junk_weight(profile, ell2, ceiling);
    RelativeWeight r;
    if (w1.exact && w2.exact) {
        r.ratio = HighFloat(*w1.exact) / HighFloat(*w2.exact);
        r.exact = true;
    } else {
        r.ratio = w1.closed_form / w2.closed_form;
    }
    r.limit = std::pow(profile.gamma(), ell2 - ell1);
    r.deviation = mp::abs(r.ratio - HighFloat(r.limit));
    return r;
}

namespace {

bool all_integer_costs(const std::vector<CostEntry>& entries) {
    for (const auto& e : entries)
        if (std::abs(e.ell - std::round(e.ell)) > 1e-12) return false;
    return true;
}

std::string short_repr(const HighFloat& x) {
    std::ostringstream os;
    os << std::setprecision(24) << x;
    return os.str();
}

} // namespace

WeightTable weight_table(const RedundancyProfile& profile, const std::vector<CostEntry>& entries,
                         bool normalize, std::optional<double> ceiling) {
    init_precision_from_env();
    WeightTable table;
    if (entries.empty()) return table;
    for (const auto& e : entries)
        if (e.ell < 0.0)
            throw Error(ErrorCode::InvalidArgument, "descriptive cost must be nonnegative");

    const HighFloat log_gamma = mp::log(HighFloat(profile.gamma()));
    const bool exact_mode = ceiling && profile.exact_counts() && all_integer_costs(entries) &&
                            std::abs(*ceiling - std::round(*ceiling)) < 1e-12;
    table.used_exact_counts = exact_mode;

    table.rows.reserve(entries.size());
    for (const auto& e : entries) {
        WeightRow row;
        row.id = e.id;
        row.ell = e.ell;
        if (ceiling) {
            const JunkWeight w = junk_weight(profile, e.ell, *ceiling);
            if (exact_mode) {
                row.weight = HighFloat(*w.exact);
                row.weight_repr = w.exact->str();
            } else {
                row.weight = w.closed_form;
                row.weight_repr = short_repr(row.weight);
            }
        } else {
            row.weight = mp::exp(-log_gamma * HighFloat(e.ell));
            row.weight_repr = short_repr(row.weight);
        }
        table.rows.push_back(std::move(row));
    }

    if (normalize) {
        std::vector<HighFloat> weights;
        weights.reserve(table.rows.size());
        for (const auto& row : table.rows) weights.push_back(row.weight);
        const HighFloat total = pairwise_sum(weights);
        std::vector<HighFloat> probabilities;
        probabilities.reserve(table.rows.size());
        for (auto& row : table.rows) {
            const HighFloat p = row.weight / total;
            row.probability = p.convert_to<double>();
            probabilities.push_back(p);
        }
        table.probability_sum = pairwise_sum(probabilities).convert_to<double>();
    }
    return table;
}

ScaleRedundancyReport scale_redundancy_check(const RedundancyProfile& profile,
                                             const std::vector<CostEntry>& entries, double alpha,
                                             double rescale_factor) {
    if (!(rescale_factor > 0.0))
        throw Error(ErrorCode::InvalidArgument, "rescale factor must be positive");
    ScaleRedundancyReport report;
    report.rescale_factor = rescale_factor;

    const WeightTable base = weight_table(profile, entries, true);

    const double lambda = profile.redundancy_exponent();
    const double scaled_lambda = lambda / rescale_factor;
    const RedundancyProfile scaled_profile =
        RedundancyProfile::from_gamma(std::exp(scaled_lambda));
    std::vector<CostEntry> scaled_entries = entries;
    for (auto& e : scaled_entries) e.ell *= rescale_factor;
    const WeightTable scaled = weight_table(scaled_profile, scaled_entries, true);

    for (std::size_t i = 0; i < base.rows.size(); ++i)
        report.max_probability_deviation =
            std::max(report.max_probability_deviation,
                     std::abs(base.rows[i].probability - scaled.rows[i].probability));

    const EmergentScale original{alpha, lambda};
    const EmergentScale rescaled{alpha * rescale_factor, scaled_lambda};
    report.hbar_eff_relative_deviation =
        std::abs(rescaled.hbar_eff() / original.hbar_eff() - 1.0);
    report.pass = report.max_probability_deviation <= 1e-12 &&
                  report.hbar_eff_relative_deviation <= 1e-12;
    return report;
}

ConcentrationResult concentration_experiment(const ConcentrationSpec& spec) {
    if (spec.grid.empty() || spec.num_segments < 2)
        throw Error(ErrorCode::InvalidArgument, "concentration lattice is empty");
    if (!spec.cost)
        throw Error(ErrorCode::InvalidArgument, "concentration needs a cost");

    ConcentrationResult result;
    if (spec.stationary) {
        result.stationary = *spec.stationary;
    } else {
        const auto [lo_it, hi_it] = std::minmax_element(spec.grid.begin(), spec.grid.end());
        variational::StationaryOptions options;
        options.box_lo = *lo_it;
        options.box_hi = *hi_it;
        const auto stationary = variational::stationary_set(
            spec.cost, {spec.endpoint_start}, {spec.endpoint_end}, spec.num_segments,
            variational::StationarySolver::NewtonMultistart, options);
        if (stationary.empty())
            throw Error(ErrorCode::InvalidArgument,
                        "no stationary configuration found for the concentration lattice");
        for (const auto& node : stationary.configurations.front())
            result.stationary.push_back(node[0]);
    }

    const int interior = spec.num_segments - 1;
    const auto enumeration =
        lattice::make_enumeration(static_cast<int>(spec.grid.size()), interior);
    result.history_count = enumeration.total;

    std::vector<double> cost_of(enumeration.total);
    std::vector<char> near_stationary(enumeration.total);
    auto body = [&](long long idx, const std::vector<int>& digits) {
        double total = 0.0;
        double prev = spec.endpoint_start;
        bool near = true;
        for (int j = 0; j < interior; ++j) {
            const double value = spec.grid[digits[j]];
            total += spec.cost->eval({prev}, {value});
            prev = value;
            if (std::abs(value - result.stationary[j]) > spec.neighborhood_radius) near = false;
        }
        total += spec.cost->eval({prev}, {spec.endpoint_end});
        cost_of[idx] = total;
        near_stationary[idx] = near ? 1 : 0;
    };
    if (spec.parallel)
        lattice::for_each_history_parallel(enumeration, spec.workers, body);
    else
        lattice::for_each_history_serial(enumeration, body);

    std::vector<double> weights(enumeration.total);
    std::vector<double> masked(enumeration.total);
    for (double lambda : spec.lambdas) {
        for (long long i = 0; i < enumeration.total; ++i) {
            weights[i] = std::exp(-lambda * cost_of[i]);
            masked[i] = near_stationary[i] ? weights[i] : 0.0;
        }
        const double total = pairwise_sum(weights);
        const double inside = pairwise_sum(masked);
        result.curve.push_back({lambda, inside / total});
    }
    return result;
}

} // namespace synlab::redundancy
