#include "synlab/cosmo.hpp"

#include <cmath>
#include <numbers>

#include "synlab/errors.hpp"

namespace synlab::cosmo {

namespace {

void validate(const CosmoParams& p) {
    if (!(p.hubble > 0.0) || !(p.newton_g > 0.0) || !(p.hbar > 0.0) ||
        !(p.redundancy_exponent > 0.0))
        throw Error(ErrorCode::InvalidArgument, "cosmological parameters must be positive");
    if (!(p.usage_eta > 0.0) || p.usage_eta > 1.0)
        throw Error(ErrorCode::InvalidArgument, "usage fraction must lie in (0, 1]");
}

constexpr double kPi = std::numbers::pi;

} // namespace

HorizonCapacity holographic_capacity(const CosmoParams& params) {
    validate(params);
    HorizonCapacity h;
    h.hubble_radius = 1.0 / params.hubble;
    h.horizon_area = 4.0 * kPi * h.hubble_radius * h.hubble_radius;
    // Planck area G * hbar in c = 1 units; capacity = area / (4 l_p^2).
    h.capacity = kPi / (params.newton_g * params.hbar * params.hubble * params.hubble);
    return h;
}

DeSitterAction desitter_action(const CosmoParams& params) {
    validate(params);
    DeSitterAction a;
    a.euclidean_period = 2.0 * kPi / params.hubble;
    a.horizon_energy = 1.0 / (2.0 * params.newton_g * params.hubble);
    a.euclidean_action = a.euclidean_period * a.horizon_energy;
    return a;
}

CalibrationResult calibrate(const CosmoParams& params) {
    validate(params);
    const HorizonCapacity capacity = holographic_capacity(params);
    const DeSitterAction action = desitter_action(params);

    CalibrationResult r;
    r.R_H = capacity.hubble_radius;
    r.A_H = capacity.horizon_area;
    r.I_holo = capacity.capacity;
    r.beta_dS = action.euclidean_period;
    r.E_U = action.horizon_energy;
    r.S_E_univ = action.euclidean_action;
    r.ell_univ = params.usage_eta * capacity.capacity / params.redundancy_exponent;
    // ell_univ = alpha * S_E_univ with S_E_univ = hbar * I_holo pins
    // alpha = eta / (Lambda hbar), hence hbar_eff = 1/(alpha Lambda) = hbar/eta.
    r.alpha = params.usage_eta / (params.redundancy_exponent * params.hbar);
    r.hbar_eff = params.hbar / params.usage_eta;
    return r;
}

CosmoParams from_si(double hubble_si, double newton_g_si, double hbar_si, double c,
                    double usage_eta, double redundancy_exponent) {
    if (!(c > 0.0)) throw Error(ErrorCode::InvalidArgument, "c must be positive");
    CosmoParams p;
    // Base units: seconds for time, light-seconds for length, kilograms for
    // mass.  H0 is already 1/s; G (m^3 kg^-1 s^-2) picks up c^-3; hbar
    // (kg m^2 s^-1) picks up c^-2.  G * hbar then lands in s^2, the Planck
    // area of the c = 1 convention.
    p.hubble = hubble_si;
    p.newton_g = newton_g_si / (c * c * c);
    p.hbar = hbar_si / (c * c);
    p.usage_eta = usage_eta;
    p.redundancy_exponent = redundancy_exponent;
    return p;
}

} // namespace synlab::cosmo
