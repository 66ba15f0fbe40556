#pragma once

#include <functional>
#include <limits>
#include <span>
#include <string>
#include <vector>

namespace concentric {

// y = model(x, params)
using ModelFunction = std::function<double(double, std::span<const double>)>;

struct Observations {
    std::vector<double> x;
    std::vector<double> y;
    std::vector<double> sigma;  // empty means unit weights

    std::size_t size() const { return x.size(); }
};

struct ParameterBounds {
    std::vector<double> lower;
    std::vector<double> upper;

    static ParameterBounds unbounded(std::size_t n) {
        return {std::vector<double>(n, -std::numeric_limits<double>::infinity()),
                std::vector<double>(n, std::numeric_limits<double>::infinity())};
    }
};

struct LevenbergMarquardtSettings {
    double jacobian_rel_step = 1e-6;
    double initial_damping = 1e-3;
    double damping_up = 10.0;
    double damping_down = 10.0;
    double rel_cost_tolerance = 1e-10;
    double gradient_tolerance = 1e-12;
    int max_iterations = 200;
};

struct FitResult {
    std::vector<std::string> names;
    std::vector<double> parameters;
    // One-sigma values from (J^T W J)^-1 scaled by the reduced chi-square.
    // Empty unless converged.
    std::vector<double> uncertainties;
    double residual_norm = 0.0;  // sqrt(chi^2)
    double chi_square = 0.0;
    int degrees_of_freedom = 0;
    int iterations = 0;  // accepted steps
    bool converged = false;
    std::vector<double> cost_history;  // chi^2 after each accepted step, starting with the initial

    // Lookup by name; throws std::out_of_range for an unknown name.
    double value(const std::string& name) const;
    double uncertainty(const std::string& name) const;
};

// Minimizes sum(((model(x_i; p) - y_i) / sigma_i)^2) by Levenberg-Marquardt
// with a forward-difference Jacobian and box projection onto bounds.
//
// Throws DegenerateData when there are fewer points than parameters and
// SingularJacobian when some parameter has no effect on any residual at the
// starting point. Non-convergence is reported through FitResult::converged.
FitResult least_squares(const ModelFunction& model, const Observations& data,
                        std::vector<double> initial, std::vector<std::string> names,
                        const ParameterBounds& bounds,
                        const LevenbergMarquardtSettings& settings = {});

// Forward- or central-difference Jacobian of the weighted residuals, one
// column per parameter. Exposed for property checks.
std::vector<std::vector<double>> numeric_jacobian(const ModelFunction& model,
                                                  const Observations& data,
                                                  std::span<const double> params, double rel_step,
                                                  bool central);

}  // namespace concentric
