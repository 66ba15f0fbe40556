#include "concentric/least_squares.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "concentric/errors.hpp"

namespace concentric {

namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

constexpr double kStepFloor = 1e-3;
constexpr double kMaxDamping = 1e20;
// Relative size of J^T J diagonal below which a column counts as inert.
constexpr double kInertColumn = 1e-10;

double weight(const Observations& data, std::size_t i) {
    return data.sigma.empty() ? 1.0 : 1.0 / data.sigma[i];
}

VectorXd residuals(const ModelFunction& model, const Observations& data,
                   std::span<const double> p) {
    VectorXd r(static_cast<Eigen::Index>(data.size()));
    for (std::size_t i = 0; i < data.size(); ++i) {
        r[static_cast<Eigen::Index>(i)] = (model(data.x[i], p) - data.y[i]) * weight(data, i);
    }
    return r;
}

double step_size(double p, double rel_step) { return rel_step * std::max(std::fabs(p), kStepFloor); }

// Forward difference, stepping backwards when a forward step would leave the box.
MatrixXd jacobian(const ModelFunction& model, const Observations& data, const VectorXd& p,
                  const VectorXd& r0, const ParameterBounds& bounds, double rel_step) {
    const auto n = static_cast<Eigen::Index>(data.size());
    MatrixXd jac(n, p.size());
    std::vector<double> work(p.data(), p.data() + p.size());
    for (Eigen::Index k = 0; k < p.size(); ++k) {
        double h = step_size(p[k], rel_step);
        if (p[k] + h > bounds.upper[static_cast<std::size_t>(k)]) h = -h;
        work[static_cast<std::size_t>(k)] = p[k] + h;
        const VectorXd r1 = residuals(model, data, work);
        jac.col(k) = (r1 - r0) / h;
        work[static_cast<std::size_t>(k)] = p[k];
    }
    return jac;
}

VectorXd clamp(VectorXd p, const ParameterBounds& bounds) {
    for (Eigen::Index k = 0; k < p.size(); ++k) {
        const auto i = static_cast<std::size_t>(k);
        p[k] = std::clamp(p[k], bounds.lower[i], bounds.upper[i]);
    }
    return p;
}

double chi_square(const VectorXd& r) { return r.squaredNorm(); }

std::span<const double> as_span(const VectorXd& v) {
    return {v.data(), static_cast<std::size_t>(v.size())};
}

// Uncertainty of a parameter pinned at a bound with a vanishing gradient:
// the distance into the box at which chi^2 rises by `scale`.
double bound_uncertainty(const ModelFunction& model, const Observations& data, const VectorXd& p,
                         Eigen::Index k, const ParameterBounds& bounds, double chi2_min,
                         double scale) {
    const auto i = static_cast<std::size_t>(k);
    const double direction = (p[k] <= bounds.lower[i]) ? 1.0 : -1.0;
    std::vector<double> work(p.data(), p.data() + p.size());
    const auto excess = [&](double delta) {
        work[i] = p[k] + direction * delta;
        const double v = chi_square(residuals(model, data, work)) - chi2_min - scale;
        work[i] = p[k];
        return v;
    };
    double hi = step_size(p[k], 1e-3);
    for (int n = 0; n < 200 && excess(hi) < 0.0; ++n) hi *= 2.0;
    if (excess(hi) < 0.0) return std::numeric_limits<double>::infinity();
    double lo = 0.0;
    for (int n = 0; n < 200 && hi - lo > 1e-10 * hi; ++n) {
        const double mid = 0.5 * (lo + hi);
        (excess(mid) < 0.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace

double FitResult::value(const std::string& name) const {
    const auto it = std::find(names.begin(), names.end(), name);
    if (it == names.end()) throw std::out_of_range("no fit parameter named " + name);
    return parameters.at(static_cast<std::size_t>(it - names.begin()));
}

double FitResult::uncertainty(const std::string& name) const {
    const auto it = std::find(names.begin(), names.end(), name);
    if (it == names.end()) throw std::out_of_range("no fit parameter named " + name);
    return uncertainties.at(static_cast<std::size_t>(it - names.begin()));
}

std::vector<std::vector<double>> numeric_jacobian(const ModelFunction& model,
                                                  const Observations& data,
                                                  std::span<const double> params, double rel_step,
                                                  bool central) {
    std::vector<double> work(params.begin(), params.end());
    const VectorXd r0 = residuals(model, data, work);
    std::vector<std::vector<double>> cols;
    for (std::size_t k = 0; k < work.size(); ++k) {
        const double h = step_size(params[k], rel_step);
        work[k] = params[k] + h;
        const VectorXd up = residuals(model, data, work);
        VectorXd col;
        if (central) {
            work[k] = params[k] - h;
            const VectorXd down = residuals(model, data, work);
            col = (up - down) / (2.0 * h);
        } else {
            col = (up - r0) / h;
        }
        work[k] = params[k];
        cols.emplace_back(col.data(), col.data() + col.size());
    }
    return cols;
}

FitResult least_squares(const ModelFunction& model, const Observations& data,
                        std::vector<double> initial, std::vector<std::string> names,
                        const ParameterBounds& bounds, const LevenbergMarquardtSettings& settings) {
    const std::size_t n_params = initial.size();
    if (names.size() != n_params) throw std::invalid_argument("one name per parameter required");
    if (bounds.lower.size() != n_params || bounds.upper.size() != n_params) {
        throw std::invalid_argument("bounds must match the parameter count");
    }
    if (data.y.size() != data.size() || (!data.sigma.empty() && data.sigma.size() != data.size())) {
        throw std::invalid_argument("observation arrays differ in length");
    }
    if (data.size() < n_params) {
        throw DegenerateData("need at least as many points as parameters");
    }
    for (std::size_t k = 0; k < n_params; ++k) {
        if (!(initial[k] >= bounds.lower[k] && initial[k] <= bounds.upper[k])) {
            throw std::invalid_argument("initial value of " + names[k] + " lies outside its bounds");
        }
    }

    VectorXd p = Eigen::Map<const VectorXd>(initial.data(), static_cast<Eigen::Index>(n_params));
    VectorXd r = residuals(model, data, as_span(p));
    double chi2 = chi_square(r);
    MatrixXd jac = jacobian(model, data, p, r, bounds, settings.jacobian_rel_step);

    for (Eigen::Index k = 0; k < jac.cols(); ++k) {
        if (jac.col(k).squaredNorm() == 0.0) {
            throw SingularJacobian("parameter " + names[static_cast<std::size_t>(k)] +
                                   " has no effect on any residual");
        }
    }

    FitResult result;
    result.names = std::move(names);
    result.cost_history.push_back(chi2);

    double damping = settings.initial_damping;
    bool converged = false;
    int accepted = 0;
    while (!converged && accepted < settings.max_iterations) {
        const VectorXd grad = jac.transpose() * r;
        if (chi2 == 0.0 || grad.lpNorm<Eigen::Infinity>() < settings.gradient_tolerance) {
            converged = true;
            break;
        }
        const MatrixXd jtj = jac.transpose() * jac;
        const double diag_floor = kInertColumn * jtj.diagonal().maxCoeff();

        bool stepped = false;
        while (!stepped) {
            MatrixXd a = jtj;
            for (Eigen::Index k = 0; k < a.rows(); ++k) {
                a(k, k) += damping * std::max(jtj(k, k), diag_floor);
            }
            const VectorXd delta = a.ldlt().solve(-grad);
            const VectorXd trial = clamp(p + delta, bounds);
            const VectorXd r_trial = residuals(model, data, as_span(trial));
            const double chi2_trial = chi_square(r_trial);
            if (std::isfinite(chi2_trial) && chi2_trial < chi2) {
                const double rel_change = (chi2 - chi2_trial) / chi2;
                p = trial;
                r = r_trial;
                chi2 = chi2_trial;
                jac = jacobian(model, data, p, r, bounds, settings.jacobian_rel_step);
                damping /= settings.damping_down;
                ++accepted;
                result.cost_history.push_back(chi2);
                stepped = true;
                if (rel_change < settings.rel_cost_tolerance) converged = true;
            } else {
                damping *= settings.damping_up;
                if (damping > kMaxDamping) {
                    // No descent left at working precision: p is stationary.
                    converged = true;
                    break;
                }
            }
        }
    }

    result.parameters.assign(p.data(), p.data() + p.size());
    result.chi_square = chi2;
    result.residual_norm = std::sqrt(chi2);
    result.degrees_of_freedom = static_cast<int>(data.size()) - static_cast<int>(n_params);
    result.iterations = accepted;
    result.converged = converged;
    if (!converged) return result;

    const double scale =
        result.degrees_of_freedom > 0 ? chi2 / result.degrees_of_freedom : 1.0;
    const MatrixXd jtj = jac.transpose() * jac;
    const double max_diag = jtj.diagonal().maxCoeff();

    // Parameters pinned at a bound with an inert column get a one-sided scan;
    // the rest share the inverse of their sub-block.
    std::vector<Eigen::Index> active;
    result.uncertainties.assign(n_params, 0.0);
    for (Eigen::Index k = 0; k < jtj.rows(); ++k) {
        const auto i = static_cast<std::size_t>(k);
        const bool at_bound = p[k] <= bounds.lower[i] || p[k] >= bounds.upper[i];
        if (at_bound && jtj(k, k) <= kInertColumn * max_diag) {
            result.uncertainties[i] =
                bound_uncertainty(model, data, p, k, bounds, chi2, scale > 0.0 ? scale : 1.0);
        } else {
            active.push_back(k);
        }
    }
    if (!active.empty()) {
        const auto m = static_cast<Eigen::Index>(active.size());
        MatrixXd sub(m, m);
        for (Eigen::Index a = 0; a < m; ++a) {
            for (Eigen::Index b = 0; b < m; ++b) sub(a, b) = jtj(active[a], active[b]);
        }
        const MatrixXd cov = sub.completeOrthogonalDecomposition().pseudoInverse() * scale;
        for (Eigen::Index a = 0; a < m; ++a) {
            result.uncertainties[static_cast<std::size_t>(active[a])] = std::sqrt(std::max(cov(a, a), 0.0));
        }
    }
    return result;
}

}  // namespace concentric
