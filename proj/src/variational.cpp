#include "synlab/variational.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Dense>

#include "synlab/errors.hpp"
#include "synlab/rng.hpp"

namespace synlab::variational {

namespace {

double inf_norm(const Vec& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

Vec el_at(const costs::LocalCost& cost, const Vec& prev, const Vec& here, const Vec& next) {
    Vec e = cost.grad_b(prev, here);
    const Vec g = cost.grad_a(here, next);
    for (std::size_t i = 0; i < e.size(); ++i) e[i] += g[i];
    return e;
}

Vec el_at_fd(const costs::LocalCost& cost, const Vec& prev, const Vec& here, const Vec& next) {
    Vec e(here.size());
    Vec probe = here;
    for (std::size_t i = 0; i < here.size(); ++i) {
        const double h = 1e-5 * (1.0 + std::abs(here[i]));
        probe[i] = here[i] + h;
        const double up = cost.eval(prev, probe) + cost.eval(probe, next);
        probe[i] = here[i] - h;
        const double down = cost.eval(prev, probe) + cost.eval(probe, next);
        probe[i] = here[i];
        e[i] = (up - down) / (2.0 * h);
    }
    return e;
}

// Interior configurations flattened to one vector for the Newton solve.
struct InteriorProblem {
    const costs::LocalCost& cost;
    Vec start, end;
    int interior;
    int dim;

    int unknowns() const { return interior * dim; }

    std::vector<Vec> unflatten(const Eigen::VectorXd& z) const {
        std::vector<Vec> nodes(interior, Vec(dim));
        for (int j = 0; j < interior; ++j)
            for (int i = 0; i < dim; ++i) nodes[j][i] = z[j * dim + i];
        return nodes;
    }

    Eigen::VectorXd residual(const Eigen::VectorXd& z) const {
        const std::vector<Vec> interior_nodes = unflatten(z);
        Eigen::VectorXd f(unknowns());
        for (int j = 0; j < interior; ++j) {
            const Vec& prev = (j == 0) ? start : interior_nodes[j - 1];
            const Vec& next = (j == interior - 1) ? end : interior_nodes[j + 1];
            const Vec e = el_at(cost, prev, interior_nodes[j], next);
            for (int i = 0; i < dim; ++i) f[j * dim + i] = e[i];
        }
        return f;
    }

    Eigen::MatrixXd jacobian(const Eigen::VectorXd& z) const {
        const int n = unknowns();
        Eigen::MatrixXd jac(n, n);
        Eigen::VectorXd probe = z;
        for (int k = 0; k < n; ++k) {
            const double h = 1e-6 * (1.0 + std::abs(z[k]));
            probe[k] = z[k] + h;
            const Eigen::VectorXd up = residual(probe);
            probe[k] = z[k] - h;
            const Eigen::VectorXd down = residual(probe);
            probe[k] = z[k];
            jac.col(k) = (up - down) / (2.0 * h);
        }
        return jac;
    }
};

bool newton_solve(const InteriorProblem& problem, Eigen::VectorXd& z, double tol, int max_iter) {
    for (int iter = 0; iter < max_iter; ++iter) {
        const Eigen::VectorXd f = problem.residual(z);
        if (f.lpNorm<Eigen::Infinity>() < tol) return true;
        const Eigen::MatrixXd jac = problem.jacobian(z);
        Eigen::FullPivLU<Eigen::MatrixXd> lu(jac);
        if (!lu.isInvertible()) return false;
        const Eigen::VectorXd step = lu.solve(-f);
        if (!step.allFinite()) return false;
        z += step;
        if (z.lpNorm<Eigen::Infinity>() > 1e8) return false;
    }
    return problem.residual(z).lpNorm<Eigen::Infinity>() < tol;
}

bool config_less(const std::vector<Vec>& a, const std::vector<Vec>& b) {
    for (std::size_t j = 0; j < a.size(); ++j)
        for (std::size_t i = 0; i < a[j].size(); ++i) {
            if (a[j][i] < b[j][i]) return true;
            if (a[j][i] > b[j][i]) return false;
        }
    return false;
}

double config_distance(const std::vector<Vec>& a, const std::vector<Vec>& b) {
    double m = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j)
        for (std::size_t i = 0; i < a[j].size(); ++i)
            m = std::max(m, std::abs(a[j][i] - b[j][i]));
    return m;
}

} // namespace

Vec el_operator(const costs::LocalCost& cost, const std::vector<Vec>& nodes, std::size_t j,
                DerivativeMethod method) {
    if (nodes.size() < 3 || j == 0 || j + 1 >= nodes.size())
        throw Error(ErrorCode::IndexError,
                    "EL operator is defined at interior nodes only (got j = " +
                        std::to_string(j) + ")");
    if (method == DerivativeMethod::Analytic)
        return el_at(cost, nodes[j - 1], nodes[j], nodes[j + 1]);
    return el_at_fd(cost, nodes[j - 1], nodes[j], nodes[j + 1]);
}

StationaryResult stationary_set(const costs::CostPtr& cost, const Vec& endpoint_start,
                                const Vec& endpoint_end, int num_segments,
                                StationarySolver solver, const StationaryOptions& options) {
    if (num_segments < 2)
        throw Error(ErrorCode::InvalidArgument, "need at least one interior node");
    if (endpoint_start.size() != endpoint_end.size() || endpoint_start.empty())
        throw Error(ErrorCode::InvalidArgument, "endpoint dimensions disagree");

    InteriorProblem problem{*cost, endpoint_start, endpoint_end, num_segments - 1,
                            static_cast<int>(endpoint_start.size())};
    const int n = problem.unknowns();
    const int g = options.grid_points_per_dim;
    double total_starts = 1.0;
    for (int k = 0; k < n; ++k) total_starts *= g;
    if (total_starts > 2e6)
        throw Error(ErrorCode::TooLarge, "multistart grid exceeds 2e6 configurations");
    const long long starts = static_cast<long long>(total_starts);

    auto grid_value = [&](int idx) {
        if (g == 1) return 0.5 * (options.box_lo + options.box_hi);
        return options.box_lo + (options.box_hi - options.box_lo) * idx / (g - 1);
    };

    std::vector<std::vector<Vec>> found;
    double best_residual = std::numeric_limits<double>::infinity();

    if (solver == StationarySolver::NewtonMultistart) {
        for (long long s = 0; s < starts; ++s) {
            Eigen::VectorXd z(n);
            long long rest = s;
            for (int k = 0; k < n; ++k) {
                z[k] = grid_value(static_cast<int>(rest % g));
                rest /= g;
            }
            if (newton_solve(problem, z, 1e-12, options.max_newton_iterations)) {
                const double r = problem.residual(z).lpNorm<Eigen::Infinity>();
                if (r < options.residual_tol) {
                    found.push_back(problem.unflatten(z));
                    best_residual = std::min(best_residual, r);
                }
            }
        }
    } else {
        // Exhaustive grid: keep configurations whose residual norm is a local
        // minimum against all one-step neighbor configurations.
        std::vector<double> norms(starts);
        std::vector<int> digits(n);
        for (long long s = 0; s < starts; ++s) {
            Eigen::VectorXd z(n);
            long long rest = s;
            for (int k = 0; k < n; ++k) {
                z[k] = grid_value(static_cast<int>(rest % g));
                rest /= g;
            }
            norms[s] = problem.residual(z).lpNorm<Eigen::Infinity>();
        }
        for (long long s = 0; s < starts; ++s) {
            long long rest = s;
            for (int k = 0; k < n; ++k) {
                digits[k] = static_cast<int>(rest % g);
                rest /= g;
            }
            bool is_min = true;
            for (int k = 0; k < n && is_min; ++k) {
                for (int delta : {-1, 1}) {
                    const int moved = digits[k] + delta;
                    if (moved < 0 || moved >= g) continue;
                    long long neighbor = s + delta * [&] {
                        long long place = 1;
                        for (int q = 0; q < k; ++q) place *= g;
                        return place;
                    }();
                    if (norms[neighbor] < norms[s]) {
                        is_min = false;
                        break;
                    }
                }
            }
            if (is_min) {
                Eigen::VectorXd z(n);
                for (int k = 0; k < n; ++k) z[k] = grid_value(digits[k]);
                found.push_back(problem.unflatten(z));
                best_residual = std::min(best_residual, norms[s]);
            }
        }
    }

    std::sort(found.begin(), found.end(), config_less);
    StationaryResult result;
    for (auto& config : found) {
        if (!result.configurations.empty() &&
            config_distance(result.configurations.back(), config) <= options.dedup_tol)
            continue;
        result.configurations.push_back(std::move(config));
    }
    result.best_residual = found.empty() ? 0.0 : best_residual;
    return result;
}

namespace {

Vec triple_operator(const costs::LocalCost& cost, const Vec& a, const Vec& b, const Vec& c) {
    return el_at(cost, a, b, c);
}

// Root-solve c so that the EL operator of `cost` vanishes at (a, b, c).
std::optional<Vec> solve_third_point(const costs::LocalCost& cost, const Vec& a, const Vec& b) {
    const int d = static_cast<int>(a.size());
    Eigen::VectorXd z(d);
    for (int i = 0; i < d; ++i) z[i] = 2.0 * b[i] - a[i]; // mirrored start
    for (int iter = 0; iter < 80; ++iter) {
        Vec c(d);
        for (int i = 0; i < d; ++i) c[i] = z[i];
        const Vec f = triple_operator(cost, a, b, c);
        if (inf_norm(f) < 1e-12) return c;
        Eigen::MatrixXd jac(d, d);
        for (int k = 0; k < d; ++k) {
            const double h = 1e-6 * (1.0 + std::abs(c[k]));
            Vec probe = c;
            probe[k] = c[k] + h;
            const Vec up = triple_operator(cost, a, b, probe);
            probe[k] = c[k] - h;
            const Vec down = triple_operator(cost, a, b, probe);
            for (int i = 0; i < d; ++i) jac(i, k) = (up[i] - down[i]) / (2.0 * h);
        }
        Eigen::FullPivLU<Eigen::MatrixXd> lu(jac);
        if (!lu.isInvertible()) return std::nullopt;
        Eigen::VectorXd f_eigen(d);
        for (int i = 0; i < d; ++i) f_eigen[i] = f[i];
        const Eigen::VectorXd step = lu.solve(-f_eigen);
        if (!step.allFinite()) return std::nullopt;
        z += step;
        if (z.lpNorm<Eigen::Infinity>() > 1e8) return std::nullopt;
    }
    return std::nullopt;
}

} // namespace

SharedStationarityReport shared_stationarity(const costs::CostPtr& ell,
                                             const costs::CostPtr& lagrangian,
                                             const SharedStationarityOptions& options) {
    Rng rng(options.seed);
    SharedStationarityReport report;
    const int d = options.dimension;

    auto random_point = [&] {
        Vec p(d);
        for (int i = 0; i < d; ++i) p[i] = rng.uniform(options.box_lo, options.box_hi);
        return p;
    };

    auto classify = [&](double norm) {
        if (norm < options.zero_tol) return -1; // zero
        if (norm > options.nonzero_tol) return +1;
        return 0; // indeterminate band, not counted either way
    };

    auto check_point = [&](const Vec& a, const Vec& b, const Vec& c) {
        const double ne = inf_norm(triple_operator(*ell, a, b, c));
        const double nl = inf_norm(triple_operator(*lagrangian, a, b, c));
        ++report.samples_checked;
        const int se = classify(ne);
        const int sl = classify(nl);
        if ((se == -1 && sl == +1) || (se == +1 && sl == -1))
            report.disagreements.push_back({a, b, c, ne, nl});
    };

    const double step_scales[] = {1.0, 1e-1, 1e-2, 1e-3, 1e-4};
    const int per_mode = options.num_samples / 3;

    for (int s = 0; s < per_mode; ++s)
        check_point(random_point(), random_point(), random_point());

    for (int s = 0; s < per_mode; ++s) {
        const Vec p = random_point();
        const double scale = step_scales[s % 5];
        Vec b(d), c(d);
        for (int i = 0; i < d; ++i) {
            b[i] = p[i] + scale * rng.uniform(-1.0, 1.0);
            c[i] = b[i] + scale * rng.uniform(-1.0, 1.0);
        }
        check_point(p, b, c);
    }

    for (int s = 0; s < per_mode; ++s) {
        const Vec a = random_point();
        const Vec b = random_point();
        const auto& root_of = (s % 2 == 0) ? lagrangian : ell;
        const auto third = solve_third_point(*root_of, a, b);
        if (!third) {
            ++report.degenerate_jacobian_points;
            continue;
        }
        check_point(a, b, *third);
    }
    return report;
}

ELFit el_locality_fit(const costs::CostPtr& ell, const costs::CostPtr& lagrangian,
                      const std::vector<Vec>& node_values,
                      std::vector<std::pair<std::size_t, std::size_t>> pairs,
                      std::size_t gauge_ref) {
    const std::size_t m = node_values.size();
    if (m < 3)
        throw Error(ErrorCode::InvalidArgument, "need at least 3 node values");
    if (gauge_ref >= m)
        throw Error(ErrorCode::InvalidArgument, "gauge reference out of range");
    if (pairs.empty()) {
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = 0; j < m; ++j)
                if (i != j) pairs.emplace_back(i, j);
    }
    if (pairs.size() < 3 * m)
        throw Error(ErrorCode::InvalidArgument,
                    "need at least 3 sampled segments per node value");

    // Unknowns: c, then g at every node value except the gauge reference.
    const int unknowns = 1 + static_cast<int>(m) - 1;
    auto column_of = [&](std::size_t node) -> int {
        if (node == gauge_ref) return -1;
        return 1 + static_cast<int>(node < gauge_ref ? node : node - 1);
    };

    Eigen::MatrixXd design = Eigen::MatrixXd::Zero(static_cast<int>(pairs.size()), unknowns);
    Eigen::VectorXd rhs(static_cast<int>(pairs.size()));
    for (std::size_t r = 0; r < pairs.size(); ++r) {
        const auto [i, j] = pairs[r];
        design(r, 0) = lagrangian->eval(node_values[i], node_values[j]);
        if (const int cj = column_of(j); cj >= 0) design(r, cj) += 1.0;
        if (const int ci = column_of(i); ci >= 0) design(r, ci) -= 1.0;
        rhs[static_cast<int>(r)] = ell->eval(node_values[i], node_values[j]);
    }

    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(design);
    qr.setThreshold(1e-10);
    const int rank = static_cast<int>(qr.rank());
    if (rank < unknowns) {
        Eigen::FullPivLU<Eigen::MatrixXd> lu(design);
        lu.setThreshold(1e-10);
        const Eigen::MatrixXd kernel = lu.kernel();
        std::string description = "null space dimension " + std::to_string(kernel.cols());
        bool c_in_kernel = false;
        for (int k = 0; k < kernel.cols(); ++k)
            if (std::abs(kernel(0, k)) > 1e-8) c_in_kernel = true;
        if (c_in_kernel)
            description += "; the scale factor is confounded with boundary differences "
                           "(Lagrangian lies in the telescoping span)";
        throw Error(ErrorCode::Unidentifiable, description);
    }

    const Eigen::VectorXd solution = qr.solve(rhs);

    ELFit fit;
    fit.c_hat = solution[0];
    fit.node_values = node_values;
    fit.gauge_ref = gauge_ref;
    fit.g_values.assign(m, 0.0);
    for (std::size_t v = 0; v < m; ++v)
        if (const int col = column_of(v); col >= 0) fit.g_values[v] = solution[col];
    fit.design_rank = rank;

    double residual = 0.0;
    for (const auto& [i, j] : pairs) {
        const double predicted = fit.c_hat * lagrangian->eval(node_values[i], node_values[j]) +
                                 fit.g_values[j] - fit.g_values[i];
        residual = std::max(residual,
                            std::abs(ell->eval(node_values[i], node_values[j]) - predicted));
    }
    fit.residual_max = residual;
    return fit;
}

GlobalDecompositionReport global_decomposition_check(
    const costs::CostPtr& ell, const costs::CostPtr& lagrangian, const ELFit& fit,
    const std::vector<std::vector<Vec>>& histories) {
    auto g_at = [&](const Vec& x) {
        for (std::size_t v = 0; v < fit.node_values.size(); ++v) {
            double dist = 0.0;
            for (std::size_t i = 0; i < x.size(); ++i)
                dist = std::max(dist, std::abs(x[i] - fit.node_values[v][i]));
            if (dist < 1e-12) return fit.g_values[v];
        }
        throw Error(ErrorCode::InvalidArgument, "history node not on the fitted value set");
    };

    GlobalDecompositionReport report;
    struct Summary {
        Vec first, last;
        double ell_total, action_total;
    };
    std::vector<Summary> summaries;
    for (const auto& nodes : histories) {
        if (nodes.size() < 2) continue;
        double ell_total = 0.0, action_total = 0.0;
        for (std::size_t k = 1; k < nodes.size(); ++k) {
            ell_total += ell->eval(nodes[k - 1], nodes[k]);
            action_total += lagrangian->eval(nodes[k - 1], nodes[k]);
        }
        const double predicted =
            fit.c_hat * action_total + g_at(nodes.back()) - g_at(nodes.front());
        report.max_residual = std::max(report.max_residual, std::abs(ell_total - predicted));
        summaries.push_back({nodes.front(), nodes.back(), ell_total, action_total});
        ++report.histories_checked;
    }
    // Histories sharing endpoints: the boundary term must cancel exactly.
    for (std::size_t p = 0; p < summaries.size(); ++p) {
        for (std::size_t q = p + 1; q < summaries.size(); ++q) {
            if (summaries[p].first != summaries[q].first) continue;
            if (summaries[p].last != summaries[q].last) continue;
            const double lhs = summaries[p].ell_total - summaries[q].ell_total;
            const double rhs = fit.c_hat * (summaries[p].action_total - summaries[q].action_total);
            report.max_shared_endpoint_residual =
                std::max(report.max_shared_endpoint_residual, std::abs(lhs - rhs));
        }
    }
    return report;
}

} // namespace synlab::variational
