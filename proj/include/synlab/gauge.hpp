#pragma once

#include <functional>
#include <utility>
#include <vector>

namespace synlab::gauge {

// Two-site Z2 toy: configurations (a, b) with a, b in {+1, -1}; the gauge
// action flips both signs, so orbits are labeled by the invariant W = a * b.

/// W = a * b; arguments must be +1 or -1.
int orbit_label(int a, int b);

enum class RuleKind { A, B, Custom };

/// Representative-selection rule: which configurations a description scheme
/// may emit for each orbit.  Rule A keeps a = +1 only; rule B keeps a = b
/// when possible and both representatives otherwise.
struct SelectionRule {
    RuleKind kind = RuleKind::A;
    std::function<bool(int a, int b)> admit; // used when kind == Custom

    static SelectionRule rule_a() { return {RuleKind::A, nullptr}; }
    static SelectionRule rule_b() { return {RuleKind::B, nullptr}; }
    static SelectionRule custom(std::function<bool(int, int)> predicate) {
        return {RuleKind::Custom, std::move(predicate)};
    }
};

struct Representatives {
    std::vector<std::pair<int, int>> members;
    int multiplicity = 0; // g(W)
};

/// Admissible representatives of the orbit W under the rule.  Throws
/// OrbitUncovered when a custom rule leaves the orbit empty.
Representatives representatives(const SelectionRule& rule, int orbit_w);

struct InducedWeight {
    double p_plus = 0.0;  // P(W = +1)
    double p_minus = 0.0; // P(W = -1)
    int g_plus = 0;
    int g_minus = 0;
    double unnormalized_plus = 0.0;
    double unnormalized_minus = 0.0;
};

/// P(W) proportional to g(W) * exp(-Lambda * ell(W)), normalized over the two
/// orbits.  The multiplicity prefactor is the only rule-dependent piece.
InducedWeight induced_weight(const SelectionRule& rule, double ell_plus, double ell_minus,
                             double lambda);

/// Minimal cost of an orbit: minimum of a representative-level cost over the
/// whole orbit (both sign choices), independent of the selection rule.
double orbit_cost(int orbit_w, const std::function<double(int, int)>& representative_cost);

} // namespace synlab::gauge
