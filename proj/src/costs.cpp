#include "synlab/costs.hpp"

#include <cmath>
#include <functional>

#include "synlab/errors.hpp"

namespace synlab::costs {

namespace {

Vec central_difference(const std::function<double(const Vec&)>& f, const Vec& x) {
    Vec g(x.size());
    Vec probe = x;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double h = 1e-6 * (1.0 + std::abs(x[i]));
        probe[i] = x[i] + h;
        const double up = f(probe);
        probe[i] = x[i] - h;
        const double down = f(probe);
        probe[i] = x[i];
        g[i] = (up - down) / (2.0 * h);
    }
    return g;
}

double sq_dist(const Vec& a, const Vec& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = b[i] - a[i];
        s += d * d;
    }
    return s;
}

class QuadraticKinetic final : public LocalCost {
public:
    explicit QuadraticKinetic(double weight) : weight_(weight) {}

    double eval(const Vec& a, const Vec& b) const override { return weight_ * sq_dist(a, b); }

    Vec grad_a(const Vec& a, const Vec& b) const override {
        Vec g(a.size());
        for (std::size_t i = 0; i < a.size(); ++i) g[i] = -2.0 * weight_ * (b[i] - a[i]);
        return g;
    }

    Vec grad_b(const Vec& a, const Vec& b) const override {
        Vec g(a.size());
        for (std::size_t i = 0; i < a.size(); ++i) g[i] = 2.0 * weight_ * (b[i] - a[i]);
        return g;
    }

    std::string kind() const override { return "quadratic-kinetic"; }

private:
    double weight_;
};

class KineticPlusPotential final : public LocalCost {
public:
    KineticPlusPotential(double kw, double pw, double omega)
        : kinetic_weight_(kw), potential_weight_(pw), omega_(omega) {}

    double eval(const Vec& a, const Vec& b) const override {
        double mid_sq = 0.0;
        for (std::size_t i = 0; i < a.size(); ++i) {
            const double m = 0.5 * (a[i] + b[i]);
            mid_sq += m * m;
        }
        return kinetic_weight_ * sq_dist(a, b) +
               0.5 * potential_weight_ * omega_ * omega_ * mid_sq;
    }

    Vec grad_a(const Vec& a, const Vec& b) const override {
        Vec g(a.size());
        for (std::size_t i = 0; i < a.size(); ++i) {
            const double m = 0.5 * (a[i] + b[i]);
            g[i] = -2.0 * kinetic_weight_ * (b[i] - a[i]) +
                   0.5 * potential_weight_ * omega_ * omega_ * m;
        }
        return g;
    }

    Vec grad_b(const Vec& a, const Vec& b) const override {
        Vec g(a.size());
        for (std::size_t i = 0; i < a.size(); ++i) {
            const double m = 0.5 * (a[i] + b[i]);
            g[i] = 2.0 * kinetic_weight_ * (b[i] - a[i]) +
                   0.5 * potential_weight_ * omega_ * omega_ * m;
        }
        return g;
    }

    std::string kind() const override { return "kinetic-plus-potential"; }

private:
    double kinetic_weight_, potential_weight_, omega_;
};

// Uniform Catmull-Rom spline in two variables; C^1 across cells.
class TableInterpolated final : public LocalCost {
public:
    TableInterpolated(double x_min, double x_max, std::vector<std::vector<double>> values)
        : x_min_(x_min), x_max_(x_max), values_(std::move(values)) {
        if (values_.size() < 4)
            throw Error(ErrorCode::InvalidArgument, "cost table needs at least 4x4 values");
        rows_ = values_.size();
        cols_ = values_[0].size();
        for (const auto& row : values_)
            if (row.size() != cols_)
                throw Error(ErrorCode::InvalidArgument, "ragged cost table");
        if (cols_ < 4)
            throw Error(ErrorCode::InvalidArgument, "cost table needs at least 4x4 values");
    }

    double eval(const Vec& a, const Vec& b) const override {
        if (a.size() != 1 || b.size() != 1)
            throw Error(ErrorCode::InvalidArgument, "table-interpolated cost is 1-d only");
        return sample(a[0], b[0]);
    }

    std::string kind() const override { return "table-interpolated"; }

private:
    static double catmull_rom(double p0, double p1, double p2, double p3, double t) {
        return p1 + 0.5 * t * (p2 - p0 +
                               t * (2 * p0 - 5 * p1 + 4 * p2 - p3 +
                                    t * (3 * (p1 - p2) + p3 - p0)));
    }

    double sample(double x, double y) const {
        const double fx = to_index(x, rows_);
        const double fy = to_index(y, cols_);
        const int ix = clamp_base(fx, rows_);
        const int iy = clamp_base(fy, cols_);
        const double tx = fx - ix;
        const double ty = fy - iy;
        double col[4];
        for (int k = -1; k <= 2; ++k) {
            const auto& r0 = values_[clamp_row(ix - 1)];
            const auto& r1 = values_[clamp_row(ix)];
            const auto& r2 = values_[clamp_row(ix + 1)];
            const auto& r3 = values_[clamp_row(ix + 2)];
            const int c = clamp_col(iy + k);
            col[k + 1] = catmull_rom(r0[c], r1[c], r2[c], r3[c], tx);
        }
        return catmull_rom(col[0], col[1], col[2], col[3], ty);
    }

    double to_index(double v, std::size_t n) const {
        return (v - x_min_) / (x_max_ - x_min_) * (static_cast<double>(n) - 1.0);
    }
    int clamp_base(double f, std::size_t n) const {
        int i = static_cast<int>(std::floor(f));
        if (i < 0) i = 0;
        if (i > static_cast<int>(n) - 2) i = static_cast<int>(n) - 2;
        return i;
    }
    int clamp_row(int i) const {
        return std::max(0, std::min(i, static_cast<int>(rows_) - 1));
    }
    int clamp_col(int i) const {
        return std::max(0, std::min(i, static_cast<int>(cols_) - 1));
    }

    double x_min_, x_max_;
    std::vector<std::vector<double>> values_;
    std::size_t rows_ = 0, cols_ = 0;
};

class Composite final : public LocalCost {
public:
    Composite(double factor, CostPtr base, std::vector<double> poly)
        : factor_(factor), base_(std::move(base)), poly_(std::move(poly)) {}

    double eval(const Vec& a, const Vec& b) const override {
        return factor_ * base_->eval(a, b) + poly_eval(poly_, b) - poly_eval(poly_, a);
    }

    Vec grad_a(const Vec& a, const Vec& b) const override {
        Vec g = base_->grad_a(a, b);
        for (std::size_t i = 0; i < g.size(); ++i)
            g[i] = factor_ * g[i] - poly_derivative(a[i]);
        return g;
    }

    Vec grad_b(const Vec& a, const Vec& b) const override {
        Vec g = base_->grad_b(a, b);
        for (std::size_t i = 0; i < g.size(); ++i)
            g[i] = factor_ * g[i] + poly_derivative(b[i]);
        return g;
    }

    std::string kind() const override { return "composite"; }

private:
    double poly_derivative(double x) const {
        double acc = 0.0, pw = 1.0;
        for (std::size_t k = 1; k < poly_.size(); ++k) {
            acc += static_cast<double>(k) * poly_[k] * pw;
            pw *= x;
        }
        return acc;
    }

    double factor_;
    CostPtr base_;
    std::vector<double> poly_;
};

class Power final : public LocalCost {
public:
    Power(CostPtr base, double exponent, double offset)
        : base_(std::move(base)), exponent_(exponent), offset_(offset) {}

    double eval(const Vec& a, const Vec& b) const override {
        return std::pow(base_->eval(a, b), exponent_) + offset_;
    }

    Vec grad_a(const Vec& a, const Vec& b) const override {
        const double v = base_->eval(a, b);
        const double scale = exponent_ * std::pow(v, exponent_ - 1.0);
        Vec g = base_->grad_a(a, b);
        for (double& x : g) x *= scale;
        return g;
    }

    Vec grad_b(const Vec& a, const Vec& b) const override {
        const double v = base_->eval(a, b);
        const double scale = exponent_ * std::pow(v, exponent_ - 1.0);
        Vec g = base_->grad_b(a, b);
        for (double& x : g) x *= scale;
        return g;
    }

    std::string kind() const override { return "power"; }

private:
    CostPtr base_;
    double exponent_, offset_;
};

} // namespace

Vec LocalCost::grad_a(const Vec& a, const Vec& b) const {
    return central_difference([&](const Vec& p) { return eval(p, b); }, a);
}

Vec LocalCost::grad_b(const Vec& a, const Vec& b) const {
    return central_difference([&](const Vec& p) { return eval(a, p); }, b);
}

CostPtr quadratic_kinetic(double weight) {
    return std::make_shared<QuadraticKinetic>(weight);
}

CostPtr kinetic_plus_potential(double kinetic_weight, double potential_weight, double omega) {
    return std::make_shared<KineticPlusPotential>(kinetic_weight, potential_weight, omega);
}

CostPtr table_interpolated(double x_min, double x_max,
                           const std::vector<std::vector<double>>& values) {
    return std::make_shared<TableInterpolated>(x_min, x_max, values);
}

CostPtr composite(double factor, CostPtr base, const std::vector<double>& boundary_poly) {
    return std::make_shared<Composite>(factor, std::move(base), boundary_poly);
}

CostPtr power(CostPtr base, double exponent, double offset) {
    return std::make_shared<Power>(std::move(base), exponent, offset);
}

double poly_eval(const std::vector<double>& poly, const Vec& x) {
    double acc = 0.0;
    for (double xi : x) {
        double pw = 1.0;
        for (double coeff : poly) {
            acc += coeff * pw;
            pw *= xi;
        }
    }
    return acc;
}

} // namespace synlab::costs

namespace synlab {

double CostSpec::segment_cost(const Vec& a, const Vec& b, const std::string& segment_type) const {
    double cost = local_cost->eval(a, b);
    const auto it = per_type_offsets.find(segment_type);
    if (it != per_type_offsets.end()) cost += it->second;
    return cost;
}

} // namespace synlab
