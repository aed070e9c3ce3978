#include "synlab/gauge.hpp"

#include <algorithm>
#include <cmath>

#include "synlab/errors.hpp"

namespace synlab::gauge {

namespace {

void require_sign(int v) {
    if (v != 1 && v != -1)
        throw Error(ErrorCode::InvalidArgument, "site variables must be +1 or -1");
}

// Both configurations in the orbit labeled W, canonical order.
std::vector<std::pair<int, int>> orbit_members(int w) {
    if (w == +1) return {{+1, +1}, {-1, -1}};
    return {{+1, -1}, {-1, +1}};
}

} // namespace

int orbit_label(int a, int b) {
    require_sign(a);
    require_sign(b);
    return a * b;
}

Representatives representatives(const SelectionRule& rule, int orbit_w) {
    require_sign(orbit_w);
    Representatives result;
    switch (rule.kind) {
        case RuleKind::A:
            // Fix the gauge completely: keep a = +1.
            result.members = {orbit_w == +1 ? std::make_pair(+1, +1) : std::make_pair(+1, -1)};
            break;
        case RuleKind::B:
            // a = b when possible; both representatives otherwise.
            if (orbit_w == +1)
                result.members = {{+1, +1}};
            else
                result.members = {{+1, -1}, {-1, +1}};
            break;
        case RuleKind::Custom: {
            if (!rule.admit)
                throw Error(ErrorCode::InvalidArgument, "custom rule has no predicate");
            for (const auto& [a, b] : orbit_members(orbit_w))
                if (rule.admit(a, b)) result.members.emplace_back(a, b);
            if (result.members.empty())
                throw Error(ErrorCode::OrbitUncovered,
                            "custom rule admits no representative for W = " +
                                std::to_string(orbit_w));
            break;
        }
    }
    result.multiplicity = static_cast<int>(result.members.size());
    return result;
}

InducedWeight induced_weight(const SelectionRule& rule, double ell_plus, double ell_minus,
                             double lambda) {
    if (!(lambda > 0.0))
        throw Error(ErrorCode::InvalidArgument, "lambda must be positive");
    InducedWeight w;
    w.g_plus = representatives(rule, +1).multiplicity;
    w.g_minus = representatives(rule, -1).multiplicity;
    w.unnormalized_plus = w.g_plus * std::exp(-lambda * ell_plus);
    w.unnormalized_minus = w.g_minus * std::exp(-lambda * ell_minus);
    const double total = w.unnormalized_plus + w.unnormalized_minus;
    w.p_plus = w.unnormalized_plus / total;
    w.p_minus = w.unnormalized_minus / total;
    return w;
}

double orbit_cost(int orbit_w, const std::function<double(int, int)>& representative_cost) {
    require_sign(orbit_w);
    double best = 0.0;
    bool first = true;
    for (const auto& [a, b] : orbit_members(orbit_w)) {
        const double cost = representative_cost(a, b);
        if (first || cost < best) best = cost;
        first = false;
    }
    return best;
}

} // namespace synlab::gauge
