#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "synlab/cosmo.hpp"
#include "synlab/errors.hpp"
#include "synlab/rng.hpp"

using namespace synlab;
using cosmo::CosmoParams;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_CASE("holographic capacity in unit parameters") {
    CosmoParams unit;
    const auto h = cosmo::holographic_capacity(unit);
    CHECK(h.hubble_radius == doctest::Approx(1.0));
    CHECK(h.horizon_area == doctest::Approx(4.0 * kPi));
    CHECK(h.capacity == doctest::Approx(kPi));

    // Halving the expansion rate quadruples the capacity.
    CosmoParams slower = unit;
    slower.hubble = 0.5;
    CHECK(cosmo::holographic_capacity(slower).capacity == doctest::Approx(4.0 * kPi));
}

TEST_CASE("capacity with SI-like magnitudes (regression)") {
    CosmoParams si;
    si.hubble = 2.2e-18;
    si.newton_g = 6.674e-11;
    si.hbar = 1.055e-34;
    const auto h = cosmo::holographic_capacity(si);
    CHECK(h.capacity == doctest::Approx(9.218618636621432e79).epsilon(1e-12));
}

TEST_CASE("de Sitter action and the capacity identity") {
    CosmoParams unit;
    const auto action = cosmo::desitter_action(unit);
    CHECK(action.euclidean_period == doctest::Approx(2.0 * kPi));
    CHECK(action.horizon_energy == doctest::Approx(0.5));
    CHECK(action.euclidean_action == doctest::Approx(kPi));

    Rng rng(17);
    for (int draw = 0; draw < 1000; ++draw) {
        CosmoParams p;
        p.hubble = std::exp(rng.uniform(-8.0, 8.0));
        p.newton_g = std::exp(rng.uniform(-8.0, 8.0));
        p.hbar = std::exp(rng.uniform(-8.0, 8.0));
        p.usage_eta = 0.01 + 0.99 * rng.uniform();
        p.redundancy_exponent = std::exp(rng.uniform(-4.0, 4.0));
        const auto a = cosmo::desitter_action(p);
        const auto c = cosmo::holographic_capacity(p);
        CHECK(std::abs(a.euclidean_action / (p.hbar * c.capacity) - 1.0) <= 1e-14);
        // The on-shell action never involves the usage fraction.
        CosmoParams q = p;
        q.usage_eta = 0.123;
        CHECK(cosmo::desitter_action(q).euclidean_action == a.euclidean_action);
    }
}

TEST_CASE("calibration chain fixes the emergent scale") {
    CosmoParams p;
    p.redundancy_exponent = 0.693;

    SUBCASE("full capacity usage gives hbar_eff = hbar") {
        const auto r = cosmo::calibrate(p);
        CHECK(r.hbar_eff == doctest::Approx(1.0));
        CHECK(r.alpha == doctest::Approx(1.0 / 0.693));
    }
    SUBCASE("half usage doubles the scale") {
        p.usage_eta = 0.5;
        const auto r = cosmo::calibrate(p);
        CHECK(r.hbar_eff == doctest::Approx(2.0));
    }
    SUBCASE("cost of the universe equals alpha times the action") {
        Rng rng(23);
        for (int draw = 0; draw < 200; ++draw) {
            CosmoParams q;
            q.hubble = std::exp(rng.uniform(-5.0, 5.0));
            q.newton_g = std::exp(rng.uniform(-5.0, 5.0));
            q.hbar = std::exp(rng.uniform(-5.0, 5.0));
            q.usage_eta = 0.05 + 0.95 * rng.uniform();
            q.redundancy_exponent = std::exp(rng.uniform(-3.0, 3.0));
            const auto r = cosmo::calibrate(q);
            CHECK(std::abs(r.ell_univ / (r.alpha * r.S_E_univ) - 1.0) <= 1e-14);
            CHECK(std::abs(r.hbar_eff * q.usage_eta / q.hbar - 1.0) <= 1e-14);
        }
    }
    SUBCASE("redundancy exponent cancels in hbar_eff") {
        double reference = 0.0;
        bool first = true;
        for (double lambda = 1e-6; lambda <= 1e6; lambda *= 10.0) {
            CosmoParams q;
            q.usage_eta = 0.8;
            q.redundancy_exponent = lambda;
            const double h = cosmo::calibrate(q).hbar_eff;
            if (first) {
                reference = h;
                first = false;
            }
            CHECK(h == reference);
        }
    }
}

TEST_CASE("time-unit rescaling leaves dimensionless outputs invariant") {
    Rng rng(31);
    for (int draw = 0; draw < 200; ++draw) {
        CosmoParams p;
        p.hubble = std::exp(rng.uniform(-3.0, 3.0));
        p.newton_g = std::exp(rng.uniform(-3.0, 3.0));
        p.hbar = std::exp(rng.uniform(-3.0, 3.0));
        p.usage_eta = 0.25 + 0.75 * rng.uniform();
        p.redundancy_exponent = 1.7;
        const auto base = cosmo::calibrate(p);

        const double s = std::exp(rng.uniform(-2.0, 2.0));
        CosmoParams scaled = p;
        scaled.hubble /= s;      // t -> s t
        scaled.newton_g *= s;    // G has one inverse mass, one time
        scaled.hbar *= s;        // hbar has one mass, one time
        const auto other = cosmo::calibrate(scaled);

        CHECK(std::abs(other.hbar_eff / scaled.hbar - base.hbar_eff / p.hbar) <= 1e-14);
        CHECK(std::abs(other.I_holo / base.I_holo - 1.0) <= 1e-12);
        CHECK(std::abs(other.S_E_univ / scaled.hbar - base.S_E_univ / p.hbar) /
                  (base.S_E_univ / p.hbar) <=
              1e-12);
    }
}

TEST_CASE("SI adapter reproduces dimensionless combinations") {
    // c = 1 by construction when the speed of light input is 1.
    const auto trivial = cosmo::from_si(0.7, 1.3, 0.9, 1.0, 1.0, 1.0);
    CHECK(trivial.newton_g == doctest::Approx(1.3));
    CHECK(trivial.hbar == doctest::Approx(0.9));

    // Physical constants: capacity of order 10^122.
    const auto params = cosmo::from_si(2.2e-18, 6.674e-11, 1.055e-34, 2.998e8, 1.0, 1.0);
    const auto h = cosmo::holographic_capacity(params);
    CHECK(h.capacity > 1e121);
    CHECK(h.capacity < 1e124);
    // The identity holds in any unit system.
    const auto a = cosmo::desitter_action(params);
    CHECK(std::abs(a.euclidean_action / (params.hbar * h.capacity) - 1.0) <= 1e-14);
}

TEST_CASE("parameter validation") {
    CosmoParams bad;
    bad.hubble = -1.0;
    CHECK_THROWS_AS(cosmo::calibrate(bad), Error);
    CosmoParams eta_out;
    eta_out.usage_eta = 1.5;
    CHECK_THROWS_AS(cosmo::calibrate(eta_out), Error);
}
