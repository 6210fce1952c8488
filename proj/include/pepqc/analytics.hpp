#pragma once

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace pepqc {

enum class Component { Gradient, DiagHessian, OffdiagHessian };

// Circuit-structure cases for the squared-average table; Case I is the
// two-design-sandwiching condition with exact averages, the rest are bounds.
enum class CaseLabel { I, II, III, IV, V, VI, VII };

double sinc(double x);              // sin(x)/x, sinc(0) = 1
double harmonic(int J, int k);      // sum_{m=1}^{J} m^{-k}

// Finite-copy MSE of the parameter-shift estimators: d/(N_T(d+1)) for
// gradient and off-diagonal Hessian, 9d/(8 N_T (d+1)) for the diagonal.
double mse_ps(Component comp, double d, double n_total);

struct MseBreakdown {
    double finite_copy;
    double nonzero_eps;
    double total;
};

// Closed-form FD MSE at step eps, split into the finite-copy part and the
// nonzero-step bias part.
MseBreakdown mse_fd(Component comp, double d, double n_total, double eps);

// Quadratic form M = copy_prefactor * A + bias_prefactor * v v^T such that
// MSE_GD(c) = c^T M c under the sum(c) = 1 constraint.
struct GDMatrices {
    Eigen::MatrixXd M;
    Eigen::MatrixXd A;
    Eigen::VectorXd v;
};

GDMatrices gd_matrices(Component comp, double d, double n_total, double eps, int J);

struct OptCoeffs {
    Eigen::VectorXd c;  // M^{-1} 1 / (1^T M^{-1} 1)
    double mse;         // (1^T M^{-1} 1)^{-1}
};

// Throws std::domain_error (with condition diagnostics) if M is not
// positive definite.
OptCoeffs optimal_coefficients(const GDMatrices& m);

struct EpsOpt {
    double eps;
    Eigen::VectorXd c;
    double mse;
};

// Global minimum of the coefficient-optimal GD MSE over eps in (0, 2pi):
// 2000-point coarse grid, then golden-section refinement to |d eps| < 1e-6.
EpsOpt minimize_over_eps(Component comp, double d, double n_total, int J);

// Leading-order optimal FD step and its MSE.
double eps_opt_approx(Component comp, double d, double n_total);
double mse_fd_opt_approx(Component comp, double d, double n_total);

// Closed-form upper bound on the optimal GD MSE; equals mse_fd_opt_approx at J=1.
double gd_mse_upper_bound(Component comp, double d, double n_total, int J);

// Approximate copy number at which PS overtakes optimal FD (J=1) / its GD
// generalization (a lower bound for J >= 1).
double n_star_fd_approx(Component comp, double d);
double n_star_gd_lower(Component comp, double d, int J);

// All roots of MSE_GD,opt(N_T) = MSE_PS(N_T) found in N_T within [1, 1e12]
// (bisection on log N_T to 0.1% relative tolerance).  Empty result means no
// crossover in the searched range.
std::vector<double> n_star_roots(Component comp, double d, int J);
std::optional<double> n_star_numeric(Component comp, double d, int J);

struct SquaredAverage {
    double value;
    bool is_bound;  // false only for the exact Case-I entries and <f^2>
};

// Circuit-averaged squared magnitudes: comp == nullopt requests <f^2>.
// Cases IV-VII are valid for the off-diagonal Hessian only.
SquaredAverage squared_average(std::optional<Component> comp, CaseLabel c, double d);

struct GeneralOpt {
    double eps;
    double mse;
};

// Optimal step and MSE from an arbitrary squared-average value (exact value
// or case bound); specializes to eps_opt_approx / mse_fd_opt_approx when fed
// the Case-I average.
GeneralOpt general_opt_from_averages(Component comp, double d, double n_total,
                                     double sq_avg);

const char* component_name(Component comp);
Component component_from_name(const std::string& name);

}  // namespace pepqc
