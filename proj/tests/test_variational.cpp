#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "synlab/costs.hpp"
#include "synlab/errors.hpp"
#include "synlab/rng.hpp"
#include "synlab/variational.hpp"

using namespace synlab;
using variational::DerivativeMethod;
using variational::StationarySolver;

TEST_CASE("EL operator on the quadratic segment cost") {
    const auto cost = costs::quadratic_kinetic(1.0); // (b - a)^2

    // Straight line is stationary.
    const std::vector<Vec> line = {{0.0}, {1.0}, {2.0}};
    CHECK(variational::el_operator(*cost, line, 1)[0] == doctest::Approx(0.0).epsilon(1e-14));

    // Hand algebra: 2(x1 - x0) - 2(x2 - x1) at (0, 1, 3) gives -2.
    const std::vector<Vec> bent = {{0.0}, {1.0}, {3.0}};
    CHECK(variational::el_operator(*cost, bent, 1)[0] == doctest::Approx(-2.0));

    // Constant cost has vanishing operator everywhere.
    const auto constant = costs::power(costs::quadratic_kinetic(0.0), 1.0, 5.0);
    CHECK(variational::el_operator(*constant, bent, 1)[0] == doctest::Approx(0.0));

    CHECK_THROWS_AS(variational::el_operator(*cost, bent, 0), Error);
    CHECK_THROWS_AS(variational::el_operator(*cost, bent, 2), Error);
}

TEST_CASE("analytic and central-difference operators agree at O(h^2)") {
    const auto cost = costs::kinetic_plus_potential(1.0, 0.7, 1.3);
    Rng rng(7);
    for (int trial = 0; trial < 25; ++trial) {
        const std::vector<Vec> nodes = {{rng.uniform(-1, 1), rng.uniform(-1, 1)},
                                        {rng.uniform(-1, 1), rng.uniform(-1, 1)},
                                        {rng.uniform(-1, 1), rng.uniform(-1, 1)}};
        const Vec analytic = variational::el_operator(*cost, nodes, 1, DerivativeMethod::Analytic);
        const Vec fd =
            variational::el_operator(*cost, nodes, 1, DerivativeMethod::CentralDifference);
        for (std::size_t i = 0; i < analytic.size(); ++i)
            CHECK(std::abs(analytic[i] - fd[i]) < 1e-8);
    }
}

TEST_CASE("central differences converge at second order") {
    // Quartic segment cost has a nonzero third derivative at the middle node,
    // so the central difference carries the full h^2 error; halving h cuts it
    // by about 4x.
    const auto cost = costs::power(costs::quadratic_kinetic(1.0), 2.0, 0.0);
    const Vec prev = {0.3}, here = {-0.2}, next = {0.7};
    const double analytic = cost->grad_b(prev, here)[0] + cost->grad_a(here, next)[0];
    auto fd_at = [&](double h) {
        const double up = cost->eval(prev, {here[0] + h}) + cost->eval({here[0] + h}, next);
        const double down = cost->eval(prev, {here[0] - h}) + cost->eval({here[0] - h}, next);
        return (up - down) / (2 * h);
    };
    const double coarse = std::abs(fd_at(1e-3) - analytic);
    const double fine = std::abs(fd_at(5e-4) - analytic);
    REQUIRE(coarse > 1e-12);
    CHECK(coarse / fine == doctest::Approx(4.0).epsilon(0.05));
}

TEST_CASE("no convergence from any start is reported, not fatal") {
    // Zero iteration budget with starts far from the stationary spacing:
    // nothing converges and the result comes back empty instead of throwing.
    const auto cost = costs::quadratic_kinetic(1.0);
    variational::StationaryOptions options;
    options.box_lo = 5.0;
    options.box_hi = 6.0;
    options.max_newton_iterations = 0;
    const auto result = variational::stationary_set(cost, {0.0}, {1.0}, 4,
                                                    StationarySolver::NewtonMultistart, options);
    CHECK(result.empty());
}

TEST_CASE("free-particle stationary set is the even spacing") {
    const auto cost = costs::quadratic_kinetic(1.0);
    variational::StationaryOptions options;
    options.box_lo = 0.0;
    options.box_hi = 1.0;
    const auto result = variational::stationary_set(cost, {0.0}, {1.0}, 4,
                                                    StationarySolver::NewtonMultistart, options);
    REQUIRE(result.configurations.size() == 1);
    const auto& config = result.configurations.front();
    CHECK(config[0][0] == doctest::Approx(0.25).epsilon(1e-10));
    CHECK(config[1][0] == doctest::Approx(0.50).epsilon(1e-10));
    CHECK(config[2][0] == doctest::Approx(0.75).epsilon(1e-10));
}

TEST_CASE("harmonic profile: newton agrees with the exhaustive grid") {
    const auto cost = costs::kinetic_plus_potential(1.0, 1.0, 2.0);
    variational::StationaryOptions options;
    options.box_lo = -1.2;
    options.box_hi = 1.2;

    const auto newton = variational::stationary_set(cost, {1.0}, {1.0}, 4,
                                                    StationarySolver::NewtonMultistart, options);
    REQUIRE(newton.configurations.size() == 1);
    const auto& config = newton.configurations.front();

    // Symmetric cosh-like sag between equal endpoints.
    CHECK(config[0][0] == doctest::Approx(config[2][0]).epsilon(1e-9));
    CHECK(config[1][0] < config[0][0]);
    CHECK(config[1][0] > 0.0);

    // Residual at the solution.
    const std::vector<Vec> nodes = {{1.0}, config[0], config[1], config[2], {1.0}};
    for (std::size_t j = 1; j <= 3; ++j)
        CHECK(std::abs(variational::el_operator(*cost, nodes, j)[0]) < 1e-9);

    // Coarse exhaustive grid lands near the newton solution.
    variational::StationaryOptions grid_options = options;
    grid_options.grid_points_per_dim = 13;
    const auto grid = variational::stationary_set(cost, {1.0}, {1.0}, 4,
                                                  StationarySolver::ExhaustiveGrid, grid_options);
    REQUIRE_FALSE(grid.empty());
    double best = 1e9;
    for (const auto& candidate : grid.configurations) {
        double dist = 0.0;
        for (std::size_t j = 0; j < candidate.size(); ++j)
            dist = std::max(dist, std::abs(candidate[j][0] - config[j][0]));
        best = std::min(best, dist);
    }
    CHECK(best < 0.2); // one grid cell at 13 points over [-1.2, 1.2]
}

TEST_CASE("single interior node matches a bisection oracle") {
    const auto cost = costs::kinetic_plus_potential(1.0, 3.0, 1.0);
    const double a = 0.8, b = 0.8;

    // Oracle: bisection on the scalar EL equation over the symmetric interval.
    auto el_scalar = [&](double x) {
        const std::vector<Vec> nodes = {{a}, {x}, {b}};
        return variational::el_operator(*cost, nodes, 1)[0];
    };
    double lo = 0.0, hi = 0.8;
    REQUIRE(el_scalar(lo) * el_scalar(hi) < 0);
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        (el_scalar(lo) * el_scalar(mid) <= 0 ? hi : lo) = mid;
    }
    const double oracle = 0.5 * (lo + hi);

    variational::StationaryOptions options;
    options.box_lo = -1.0;
    options.box_hi = 1.0;
    const auto result = variational::stationary_set(cost, {a}, {b}, 2,
                                                    StationarySolver::NewtonMultistart, options);
    REQUIRE(result.configurations.size() == 1);
    CHECK(result.configurations[0][0][0] == doctest::Approx(oracle).epsilon(1e-9));
}

TEST_CASE("stationary sets are invariant under cost scaling") {
    const auto base = costs::kinetic_plus_potential(1.0, 1.0, 1.5);
    const auto scaled = costs::composite(-4.0, base, {});
    variational::StationaryOptions options;
    options.box_lo = -1.0;
    options.box_hi = 1.0;
    const auto first = variational::stationary_set(base, {0.5}, {0.5}, 3,
                                                   StationarySolver::NewtonMultistart, options);
    const auto second = variational::stationary_set(scaled, {0.5}, {0.5}, 3,
                                                    StationarySolver::NewtonMultistart, options);
    REQUIRE(first.configurations.size() == second.configurations.size());
    for (std::size_t c = 0; c < first.configurations.size(); ++c)
        for (std::size_t j = 0; j < first.configurations[c].size(); ++j)
            CHECK(first.configurations[c][j][0] ==
                  doctest::Approx(second.configurations[c][j][0]).epsilon(1e-8));
}

TEST_CASE("shared stationarity: clean pairs and the degenerate counterexample") {
    const auto lagrangian = costs::quadratic_kinetic(0.5);

    // Exact telescoping member: ell = 3 L + dG.
    const auto member = costs::composite(3.0, lagrangian, {0.0, 1.0, 0.0, 2.0});
    CHECK(variational::shared_stationarity(member, lagrangian).disagreements.empty());

    // Identity.
    CHECK(variational::shared_stationarity(lagrangian, lagrangian).disagreements.empty());

    // ell = L^2 + 1: same naive zero locus, but the operator degenerates to
    // cubic order near constant configurations, which the scan must flag.
    const auto squared = costs::power(lagrangian, 2.0, 1.0);
    const auto report = variational::shared_stationarity(squared, lagrangian);
    CHECK_FALSE(report.disagreements.empty());
}

TEST_CASE("construct-and-recover around the locality fit") {
    const auto lagrangian = costs::quadratic_kinetic(0.5);
    std::vector<Vec> node_values;
    for (int i = 0; i < 9; ++i) node_values.push_back({-1.0 + 0.25 * i});

    SUBCASE("cubic boundary function") {
        // ell = 3 L + (b^3 - a^3)
        const auto ell = costs::composite(3.0, lagrangian, {0.0, 0.0, 0.0, 1.0});
        const auto fit = variational::el_locality_fit(ell, lagrangian, node_values);
        CHECK(fit.c_hat == doctest::Approx(3.0).epsilon(1e-10));
        CHECK(fit.residual_max < 1e-8);
        const double ref = std::pow(node_values[fit.gauge_ref][0], 3);
        for (std::size_t v = 0; v < node_values.size(); ++v)
            CHECK(fit.g_values[v] ==
                  doctest::Approx(std::pow(node_values[v][0], 3) - ref).epsilon(1e-9));
    }
    SUBCASE("identity pair") {
        const auto fit = variational::el_locality_fit(lagrangian, lagrangian, node_values);
        CHECK(fit.c_hat == doctest::Approx(1.0));
        for (double g : fit.g_values) CHECK(std::abs(g) < 1e-10);
    }
    SUBCASE("telescoping linear term") {
        const auto ell = costs::composite(1.0, lagrangian, {0.0, 1.0});
        const auto fit = variational::el_locality_fit(ell, lagrangian, node_values);
        CHECK(fit.c_hat == doctest::Approx(1.0));
        const double ref = node_values[fit.gauge_ref][0];
        for (std::size_t v = 0; v < node_values.size(); ++v)
            CHECK(fit.g_values[v] == doctest::Approx(node_values[v][0] - ref).epsilon(1e-10));
    }
    SUBCASE("rank-deficient design is reported") {
        // A pure difference Lagrangian sits inside the telescoping span, so
        // the scale cannot be identified.
        const auto difference = costs::composite(0.0, lagrangian, {0.0, 1.0});
        try {
            variational::el_locality_fit(difference, difference, node_values);
            FAIL("expected Unidentifiable");
        } catch (const Error& e) {
            CHECK(e.code() == ErrorCode::Unidentifiable);
            CHECK(std::string(e.what()).find("null space") != std::string::npos);
        }
    }
}

TEST_CASE("global decomposition holds on whole histories") {
    const auto lagrangian = costs::quadratic_kinetic(0.5);
    const auto ell = costs::composite(3.0, lagrangian, {0.0, 0.0, 0.0, 1.0});
    std::vector<Vec> node_values;
    for (int i = 0; i < 9; ++i) node_values.push_back({-1.0 + 0.25 * i});
    const auto fit = variational::el_locality_fit(ell, lagrangian, node_values);

    Rng rng(2024);
    std::vector<std::vector<Vec>> histories;
    for (int h = 0; h < 100; ++h) {
        std::vector<Vec> nodes;
        const int segments = 1 + static_cast<int>(rng.uniform_int(0, 5));
        for (int k = 0; k <= segments; ++k)
            nodes.push_back(node_values[static_cast<std::size_t>(rng.uniform_int(0, 8))]);
        histories.push_back(std::move(nodes));
    }
    // A pair sharing endpoints, plus a single-segment history.
    histories.push_back({node_values[0], node_values[3], node_values[8]});
    histories.push_back({node_values[0], node_values[6], node_values[8]});
    histories.push_back({node_values[2], node_values[7]});

    const auto report = variational::global_decomposition_check(ell, lagrangian, fit, histories);
    CHECK(report.histories_checked == histories.size());
    CHECK(report.max_residual < 1e-7);
    CHECK(report.max_shared_endpoint_residual < 1e-9);
}

TEST_CASE("boundary telescoping is exact") {
    const std::vector<double> poly = {0.0, 0.5, -1.0, 2.0};
    Rng rng(5);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<Vec> nodes;
        const int segments = 1 + static_cast<int>(rng.uniform_int(0, 8));
        for (int k = 0; k <= segments; ++k) nodes.push_back({rng.uniform(-2.0, 2.0)});
        double sum = 0.0;
        for (int k = 1; k <= segments; ++k)
            sum += costs::poly_eval(poly, nodes[k]) - costs::poly_eval(poly, nodes[k - 1]);
        const double direct =
            costs::poly_eval(poly, nodes.back()) - costs::poly_eval(poly, nodes.front());
        CHECK(sum == doctest::Approx(direct).epsilon(1e-12));
    }
}
