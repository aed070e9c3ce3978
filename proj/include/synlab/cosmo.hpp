#pragma once

namespace synlab::cosmo {

// Natural units with c = 1 throughout; the SI adapter below converts inputs
// that carry an explicit speed of light.

struct CosmoParams {
    double hubble = 1.0;              // H0, inverse time
    double newton_g = 1.0;            // G
    double hbar = 1.0;
    double usage_eta = 1.0;           // fraction of capacity in (0, 1]
    double redundancy_exponent = 1.0; // Lambda of the global grammar
};

struct HorizonCapacity {
    double hubble_radius = 0.0;   // R_H = 1 / H0
    double horizon_area = 0.0;    // A_H = 4 pi / H0^2
    double capacity = 0.0;        // I_holo = pi / (G hbar H0^2)
};

HorizonCapacity holographic_capacity(const CosmoParams& params);

struct DeSitterAction {
    double euclidean_period = 0.0; // beta = 2 pi / H0
    double horizon_energy = 0.0;   // E_U = 1 / (2 G H0)
    double euclidean_action = 0.0; // S_E = beta * E_U = hbar * I_holo
};

DeSitterAction desitter_action(const CosmoParams& params);

struct CalibrationResult {
    double R_H = 0.0;
    double A_H = 0.0;
    double I_holo = 0.0;
    double beta_dS = 0.0;
    double E_U = 0.0;
    double S_E_univ = 0.0;
    double ell_univ = 0.0;  // eta * I_holo / Lambda
    double alpha = 0.0;     // 1 / (eta * Lambda * hbar)
    double hbar_eff = 0.0;  // hbar / eta
};

/// Full calibration chain: horizon capacity, de Sitter on-shell action, and
/// the emergent scale hbar_eff = hbar / eta (independent of Lambda).
CalibrationResult calibrate(const CosmoParams& params);

/// Converts SI inputs (H0 in 1/s, G in m^3 kg^-1 s^-2, hbar in J s, c in m/s)
/// to the c = 1 convention with seconds as the base unit.
CosmoParams from_si(double hubble_si, double newton_g_si, double hbar_si, double c,
                    double usage_eta, double redundancy_exponent);

} // namespace synlab::cosmo
