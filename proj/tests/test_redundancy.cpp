#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "synlab/errors.hpp"
#include "synlab/grammar.hpp"
#include "synlab/redundancy.hpp"

using namespace synlab;
using grammar::JunkRule;
using redundancy::CostEntry;
using redundancy::RedundancyProfile;

TEST_CASE("junk weights under a ceiling") {
    const auto binary = RedundancyProfile::from_gamma(2.0);

    const auto w = redundancy::junk_weight(binary, 4.0, 10.0);
    REQUIRE(w.exact.has_value());
    CHECK(*w.exact == 127);
    CHECK(w.closed_form.convert_to<double>() == doctest::Approx(128.0));
    CHECK(w.junk_budget == 6);

    // ell == K: only the empty junk string fits.
    const auto tight = redundancy::junk_weight(binary, 7.0, 7.0);
    CHECK(*tight.exact == 1);

    // Fibonacci rule: cumulative of the exact counts.
    const auto fib = RedundancyProfile::from_rule(JunkRule::forbid_substring(2, {1, 1}));
    const auto fw = redundancy::junk_weight(fib, 0.0, 5.0);
    CHECK(*fw.exact == 1 + 2 + 3 + 5 + 8 + 13);

    CHECK_THROWS_AS(redundancy::junk_weight(binary, 5.0, 4.0), Error);
}

TEST_CASE("relative weights converge to the exponential limit") {
    const auto binary = RedundancyProfile::from_gamma(2.0);

    const auto near = redundancy::relative_weight(binary, 4.0, 6.0, 10.0);
    CHECK(near.exact);
    CHECK(near.ratio.convert_to<double>() == doctest::Approx(127.0 / 31.0).epsilon(1e-15));
    CHECK(near.limit == doctest::Approx(4.0));

    // Equal costs: ratio is exactly 1 at every ceiling.
    for (double ceiling : {5.0, 9.0, 33.0})
        CHECK(redundancy::relative_weight(binary, 3.0, 3.0, ceiling).ratio == 1);

    // Exact big-integer ratio resolves deviations far below double precision.
    const auto far = redundancy::relative_weight(binary, 4.0, 6.0, 200.0);
    CHECK(far.deviation < HighFloat("1e-40"));
    CHECK(far.deviation > 0);
}

TEST_CASE("ceiling independence on the integer corpus") {
    const auto binary = RedundancyProfile::from_gamma(2.0);
    const double lambda = binary.redundancy_exponent();
    const double ell_max = 6.0;
    const double threshold = ell_max + 30.0 / lambda;
    const auto reference = redundancy::relative_weight(binary, 4.0, 6.0, 220.0);
    for (double ceiling = threshold; ceiling <= 120.0; ceiling += 7.0) {
        const auto rw = redundancy::relative_weight(binary, 4.0, 6.0, ceiling);
        const HighFloat diff = boost::multiprecision::abs(rw.ratio - reference.ratio);
        CHECK(diff <= HighFloat(1e-9) * reference.ratio);
    }
}

TEST_CASE("exact-to-exponential deviation carries a measured constant") {
    const auto fib = RedundancyProfile::from_rule(JunkRule::forbid_substring(2, {1, 1}));
    const double gamma = fib.gamma();
    const double ell1 = 2.0, ell2 = 5.0;
    // c is measured from the sweep, then the bound must hold uniformly.
    double measured_c = 0.0;
    std::vector<std::pair<double, double>> sweep;
    for (double ceiling = 10.0; ceiling <= 40.0; ceiling += 1.0) {
        const auto rw = redundancy::relative_weight(fib, ell1, ell2, ceiling);
        const double rel = std::abs(rw.ratio.convert_to<double>() / rw.limit - 1.0);
        const double scale = std::pow(gamma, -(ceiling - std::max(ell1, ell2)));
        measured_c = std::max(measured_c, rel / scale);
        sweep.emplace_back(ceiling, rel);
    }
    CHECK(measured_c < 10.0); // stays order-one for this automaton
    for (const auto& [ceiling, rel] : sweep)
        CHECK(rel <= measured_c * std::pow(gamma, -(ceiling - std::max(ell1, ell2))) + 1e-18);
}

TEST_CASE("weight tables: exponential law and normalization") {
    const auto binary = RedundancyProfile::from_gamma(2.0);

    // lambda = ln 2, ell = {1,2,3}: normalized 4/7, 2/7, 1/7.
    const auto table = redundancy::weight_table(
        binary, {{"a", 1.0}, {"b", 2.0}, {"c", 3.0}}, true);
    CHECK(table.rows[0].probability == doctest::Approx(4.0 / 7.0).epsilon(1e-14));
    CHECK(table.rows[1].probability == doctest::Approx(2.0 / 7.0).epsilon(1e-14));
    CHECK(table.rows[2].probability == doctest::Approx(1.0 / 7.0).epsilon(1e-14));
    CHECK(std::abs(table.probability_sum - 1.0) < 1e-12);

    // Cost gap of ln2 / Lambda gives probability ratio 2.
    const double gap = std::log(2.0) / binary.redundancy_exponent();
    const auto ratio_table =
        redundancy::weight_table(binary, {{"x", 0.0}, {"y", gap}}, true);
    CHECK(ratio_table.rows[0].probability / ratio_table.rows[1].probability ==
          doctest::Approx(2.0).epsilon(1e-13));

    // Equal costs: uniform.
    const auto uniform = redundancy::weight_table(
        binary, {{"u", 1.5}, {"v", 1.5}, {"w", 1.5}}, true);
    for (const auto& row : uniform.rows)
        CHECK(row.probability == doctest::Approx(1.0 / 3.0).epsilon(1e-14));

    CHECK_THROWS_AS(redundancy::weight_table(binary, {{"bad", -1.0}}, true), Error);
}

TEST_CASE("finite-ceiling tables stay monotone in the cost") {
    const auto binary = RedundancyProfile::from_gamma(2.0);
    const std::vector<CostEntry> entries = {
        {"a", 0.5}, {"b", 1.25}, {"c", 2.0}, {"d", 3.75}, {"e", 5.5}};
    for (double ceiling : {6.0, 9.0, 20.0, 60.0}) {
        const auto table = redundancy::weight_table(binary, entries, true, ceiling);
        for (std::size_t i = 1; i < table.rows.size(); ++i)
            CHECK(table.rows[i - 1].weight > table.rows[i].weight);
        CHECK(std::abs(table.probability_sum - 1.0) < 1e-12);
    }
    // Integer costs at an integer ceiling take the exact big-integer path.
    const auto exact_table = redundancy::weight_table(
        binary, {{"a", 1.0}, {"b", 3.0}}, true, 12.0);
    CHECK(exact_table.used_exact_counts);
    CHECK(exact_table.rows[0].weight_repr == "4095");
    CHECK(exact_table.rows[1].weight_repr == "1023");
}

TEST_CASE("scale redundancy: rescaling is a gauge choice") {
    const auto binary = RedundancyProfile::from_gamma(2.0);
    const std::vector<CostEntry> entries = {
        {"a", 0.0}, {"b", 0.37}, {"c", 1.1}, {"d", 2.5}, {"e", 3.14159}};

    const auto identity = redundancy::scale_redundancy_check(binary, entries, 2.0, 1.0);
    CHECK(identity.max_probability_deviation == 0.0);
    CHECK(identity.hbar_eff_relative_deviation == 0.0);

    for (double factor : {0.1, 3.7, 42.0}) {
        const auto report = redundancy::scale_redundancy_check(binary, entries, 2.0, factor);
        CHECK(report.pass);
        CHECK(report.max_probability_deviation <= 1e-12);
        CHECK(report.hbar_eff_relative_deviation <= 1e-12);
    }

    // hbar_eff invariance in closed form: (2, ln 2) vs (2c, ln2/c).
    const redundancy::EmergentScale base{2.0, std::log(2.0)};
    const redundancy::EmergentScale shifted{2.0 * 3.7, std::log(2.0) / 3.7};
    CHECK(base.hbar_eff() == doctest::Approx(shifted.hbar_eff()).epsilon(1e-15));
}

TEST_CASE("concentration sweeps mass onto the stationary configuration") {
    redundancy::ConcentrationSpec spec;
    for (int i = 0; i < 11; ++i) spec.grid.push_back(-1.0 + 0.2 * i);
    spec.endpoint_start = -0.4;
    spec.endpoint_end = 0.4;
    spec.num_segments = 4;
    spec.cost = costs::quadratic_kinetic(1.0);
    spec.lambdas = {0.0, 5.0, 50.0};
    spec.neighborhood_radius = 0.2 + 1e-9;

    const auto result = redundancy::concentration_experiment(spec);
    REQUIRE(result.stationary.size() == 3);
    CHECK(result.stationary[0] == doctest::Approx(-0.2).epsilon(1e-9));
    CHECK(result.stationary[1] == doctest::Approx(0.0).epsilon(1e-9));
    CHECK(result.stationary[2] == doctest::Approx(0.2).epsilon(1e-9));
    CHECK(result.history_count == 1331);

    // Uniform at lambda = 0: the neighborhood holds 27 of 1331 histories.
    CHECK(result.curve[0].mass_near_stationary == doctest::Approx(27.0 / 1331.0).epsilon(1e-12));

    // Independent oracle at lambda = 5: plain nested-loop summation.
    double inside = 0.0, total = 0.0;
    for (int i = 0; i < 11; ++i)
        for (int j = 0; j < 11; ++j)
            for (int k = 0; k < 11; ++k) {
                const double x1 = spec.grid[i], x2 = spec.grid[j], x3 = spec.grid[k];
                const double cost = (x1 + 0.4) * (x1 + 0.4) + (x2 - x1) * (x2 - x1) +
                                    (x3 - x2) * (x3 - x2) + (0.4 - x3) * (0.4 - x3);
                const double w = std::exp(-5.0 * cost);
                total += w;
                if (std::abs(x1 + 0.2) <= spec.neighborhood_radius &&
                    std::abs(x2) <= spec.neighborhood_radius &&
                    std::abs(x3 - 0.2) <= spec.neighborhood_radius)
                    inside += w;
            }
    CHECK(result.curve[1].mass_near_stationary ==
          doctest::Approx(inside / total).epsilon(1e-12));

    CHECK(result.curve[2].mass_near_stationary > 0.99);
    CHECK(result.curve[0].mass_near_stationary <= result.curve[1].mass_near_stationary);
    CHECK(result.curve[1].mass_near_stationary <= result.curve[2].mass_near_stationary);
}

TEST_CASE("concentration kernels: parallel equals serial bitwise") {
    redundancy::ConcentrationSpec spec;
    for (int i = 0; i < 9; ++i) spec.grid.push_back(-1.0 + 0.25 * i);
    spec.endpoint_start = -0.5;
    spec.endpoint_end = 0.5;
    spec.num_segments = 5;
    spec.cost = costs::kinetic_plus_potential(1.0, 0.5, 1.0);
    spec.lambdas = {0.0, 1.0, 10.0};
    spec.neighborhood_radius = 0.25 + 1e-9;
    spec.stationary = std::vector<double>{-0.25, 0.0, 0.0, 0.25};

    auto serial = spec;
    serial.parallel = false;
    const auto reference = redundancy::concentration_experiment(serial);

    for (int workers : {1, 2, 8}) {
        auto parallel = spec;
        parallel.workers = workers;
        const auto result = redundancy::concentration_experiment(parallel);
        REQUIRE(result.curve.size() == reference.curve.size());
        for (std::size_t i = 0; i < result.curve.size(); ++i)
            CHECK(result.curve[i].mass_near_stationary ==
                  reference.curve[i].mass_near_stationary); // bitwise
    }
}
