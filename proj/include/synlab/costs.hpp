#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

namespace synlab {

using Vec = std::vector<double>;

namespace costs {

/// Smooth nonnegative cost of a single segment (a, b).  Analytic gradients
/// are provided per kind; the central-difference fallback exists so the
/// variational layer can cross-check them.
class LocalCost {
public:
    virtual ~LocalCost() = default;

    virtual double eval(const Vec& a, const Vec& b) const = 0;
    virtual Vec grad_a(const Vec& a, const Vec& b) const;
    virtual Vec grad_b(const Vec& a, const Vec& b) const;

    virtual std::string kind() const = 0;
};

using CostPtr = std::shared_ptr<const LocalCost>;

/// weight * |b - a|^2
CostPtr quadratic_kinetic(double weight = 1.0);

/// kinetic_weight * |b - a|^2 + potential_weight * |(a+b)/2|^2 * omega^2 / 2
CostPtr kinetic_plus_potential(double kinetic_weight, double potential_weight, double omega);

/// Catmull-Rom interpolation of tabulated values on a uniform (a, b) grid;
/// one-dimensional segments only.
CostPtr table_interpolated(double x_min, double x_max,
                           const std::vector<std::vector<double>>& values);

/// factor * base(a, b) + G(b) - G(a), with G a polynomial applied per
/// coordinate and summed.  This is the telescoping-boundary construction used
/// throughout the variational checks.
CostPtr composite(double factor, CostPtr base, const std::vector<double>& boundary_poly);

/// base(a, b)^exponent + offset.  Deliberately outside the telescoping family
/// when exponent != 1; used as the negative control in stationarity scans.
CostPtr power(CostPtr base, double exponent, double offset);

/// Polynomial helper shared with tests: sum_i poly[i] * x^i summed over
/// coordinates.
double poly_eval(const std::vector<double>& poly, const Vec& x);

} // namespace costs

/// Segment cost plus per-type additive offsets; the offsets model the header
/// contribution of each segment type.
struct CostSpec {
    costs::CostPtr local_cost;
    std::map<std::string, double> per_type_offsets;
    // Linear-equivalence constant between smoothed cost and raw symbol count,
    // checked empirically over encoding corpora.
    double linear_equivalence_constant = 32.0;

    double segment_cost(const Vec& a, const Vec& b, const std::string& segment_type) const;
};

} // namespace synlab
