#include "pepqc/analytics.hpp"

#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace pepqc {

namespace {

constexpr double kPi = std::numbers::pi;

void check_dims(double d, double n_total) {
    if (!(d >= 2)) throw std::invalid_argument("dimension d must be >= 2");
    if (!(n_total >= 1)) throw std::invalid_argument("copy number N_T must be >= 1");
}

// Coefficient-optimal GD MSE at a fixed step; used by the eps search and the
// crossover root finder.
double mse_gd_opt_at_eps(Component comp, double d, double n_total, double eps, int J) {
    return optimal_coefficients(gd_matrices(comp, d, n_total, eps, J)).mse;
}

double golden_section(const std::function<double(double)>& g, double a, double b,
                      double tol) {
    const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double x1 = b - phi * (b - a), x2 = a + phi * (b - a);
    double f1 = g(x1), f2 = g(x2);
    while (b - a > tol) {
        if (f1 < f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - phi * (b - a);
            f1 = g(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + phi * (b - a);
            f2 = g(x2);
        }
    }
    return (a + b) / 2;
}

}  // namespace

double sinc(double x) { return x == 0.0 ? 1.0 : std::sin(x) / x; }

double harmonic(int J, int k) {
    double s = 0;
    for (int m = 1; m <= J; ++m) s += std::pow(static_cast<double>(m), -k);
    return s;
}

double mse_ps(Component comp, double d, double n_total) {
    check_dims(d, n_total);
    const double base = d / (n_total * (d + 1));
    return comp == Component::DiagHessian ? 9.0 / 8.0 * base : base;
}

MseBreakdown mse_fd(Component comp, double d, double n_total, double eps) {
    check_dims(d, n_total);
    if (!(eps > 0)) throw std::invalid_argument("step eps must be positive");
    const double dd1 = (d + 1) * (d * d - 1);
    double finite_copy = 0, nonzero_eps = 0;
    switch (comp) {
        case Component::Gradient: {
            const double b = 1 - sinc(eps / 2);
            finite_copy = 4 * d / (n_total * (d + 1) * eps * eps);
            nonzero_eps = d * d * b * b / (2 * dd1);
            break;
        }
        case Component::DiagHessian: {
            const double b = 1 - sinc(eps / 2) * sinc(eps / 2);
            finite_copy = 18 * d / (n_total * (d + 1) * std::pow(eps, 4));
            nonzero_eps = d * d * b * b / (2 * dd1);
            break;
        }
        case Component::OffdiagHessian: {
            const double b = 1 - sinc(eps / 2) * sinc(eps / 2);
            finite_copy = 16 * d / (n_total * (d + 1) * std::pow(eps, 4));
            nonzero_eps = std::pow(d, 4) * b * b / (4 * dd1 * (d * d - 1));
            break;
        }
    }
    return {finite_copy, nonzero_eps, finite_copy + nonzero_eps};
}

GDMatrices gd_matrices(Component comp, double d, double n_total, double eps, int J) {
    check_dims(d, n_total);
    if (J < 1) throw std::invalid_argument("GD order J must be >= 1");
    if (!(eps > 0)) throw std::invalid_argument("step eps must be positive");

    Eigen::VectorXd v(J);
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(J, J);
    double copy_pref = 0, bias_pref = 0;
    const double dd1 = (d + 1) * (d * d - 1);
    switch (comp) {
        case Component::Gradient:
            for (int j = 1; j <= J; ++j) {
                v(j - 1) = 1 - sinc(j * eps / 2);
                A(j - 1, j - 1) = 1.0 / (j * j);
            }
            copy_pref = 4.0 * J * d / (n_total * (d + 1) * eps * eps);
            bias_pref = d * d / (2 * dd1);
            break;
        case Component::DiagHessian: {
            Eigen::VectorXd u(J);
            for (int j = 1; j <= J; ++j) {
                const double s = sinc(j * eps / 2);
                v(j - 1) = 1 - s * s;
                u(j - 1) = 1.0 / (j * j);
                A(j - 1, j - 1) = 2.0 / std::pow(static_cast<double>(j), 4);
            }
            A += 4.0 * u * u.transpose();
            copy_pref = (2.0 * J + 1) * d / (n_total * (d + 1) * std::pow(eps, 4));
            bias_pref = d * d / (2 * dd1);
            break;
        }
        case Component::OffdiagHessian:
            for (int j = 1; j <= J; ++j) {
                const double s = sinc(j * eps / 2);
                v(j - 1) = 1 - s * s;
                A(j - 1, j - 1) = 1.0 / std::pow(static_cast<double>(j), 4);
            }
            copy_pref = 16.0 * J * d / (n_total * (d + 1) * std::pow(eps, 4));
            bias_pref = std::pow(d, 4) / (4 * dd1 * (d * d - 1));
            break;
    }
    GDMatrices out;
    out.A = A;
    out.v = v;
    out.M = copy_pref * A + bias_pref * v * v.transpose();
    return out;
}

OptCoeffs optimal_coefficients(const GDMatrices& m) {
    const Eigen::Index J = m.M.rows();
    Eigen::LLT<Eigen::MatrixXd> llt(m.M);
    if (llt.info() != Eigen::Success) {
        const auto sv = m.M.jacobiSvd().singularValues();
        const double cond = sv(0) / sv(sv.size() - 1);
        throw std::domain_error("GD quadratic form is not positive definite "
                                "(condition estimate " + std::to_string(cond) + ")");
    }
    const Eigen::VectorXd ones = Eigen::VectorXd::Ones(J);
    const Eigen::VectorXd w = llt.solve(ones);
    const double denom = ones.dot(w);
    if (!(denom > 0)) throw std::domain_error("degenerate GD quadratic form");
    OptCoeffs out;
    out.c = w / denom;
    out.mse = 1.0 / denom;
    return out;
}

EpsOpt minimize_over_eps(Component comp, double d, double n_total, int J) {
    // Coarse scan: 2000 interior grid points on (0, 2pi).
    const int grid = 2000;
    int best = 1;
    double best_val = std::numeric_limits<double>::infinity();
    auto g = [&](double eps) { return mse_gd_opt_at_eps(comp, d, n_total, eps, J); };
    for (int i = 1; i <= grid; ++i) {
        const double eps = 2 * kPi * i / (grid + 1);
        const double val = g(eps);
        if (val < best_val) {
            best_val = val;
            best = i;
        }
    }
    const double lo = 2 * kPi * std::max(best - 1, 1) / (grid + 1) * (best == 1 ? 0.5 : 1.0);
    const double hi = 2 * kPi * std::min(best + 1, grid) / (grid + 1);
    EpsOpt out;
    out.eps = golden_section(g, lo, hi, 1e-6);
    const auto oc = optimal_coefficients(gd_matrices(comp, d, n_total, out.eps, J));
    out.c = oc.c;
    out.mse = oc.mse;
    return out;
}

double eps_opt_approx(Component comp, double d, double n_total) {
    check_dims(d, n_total);
    switch (comp) {
        case Component::Gradient:
            return std::pow(2304 * (d * d - 1) / (n_total * d), 1.0 / 6.0);
        case Component::DiagHessian:
            return std::pow(5184 * (d * d - 1) / (n_total * d), 1.0 / 8.0);
        case Component::OffdiagHessian:
            return std::pow(9216 * std::pow(d * d - 1, 2) / (n_total * d * d * d), 1.0 / 8.0);
    }
    throw std::logic_error("unreachable");
}

double mse_fd_opt_approx(Component comp, double d, double n_total) {
    check_dims(d, n_total);
    switch (comp) {
        case Component::Gradient:
            return std::pow(3.0 / 32.0, 1.0 / 3.0) * std::pow(d, 4.0 / 3.0) /
                   ((d + 1) * std::cbrt(d * d - 1) * std::pow(n_total, 2.0 / 3.0));
        case Component::DiagHessian:
            return std::pow(d, 1.5) / (2 * (d + 1) * std::sqrt((d * d - 1) * n_total));
        case Component::OffdiagHessian:
            return std::pow(d, 2.5) /
                   (3 * (d + 1) * (d * d - 1) * std::sqrt(n_total));
    }
    throw std::logic_error("unreachable");
}

double gd_mse_upper_bound(Component comp, double d, double n_total, int J) {
    check_dims(d, n_total);
    if (J < 1) throw std::invalid_argument("GD order J must be >= 1");
    const double h2 = harmonic(J, 2), h4 = harmonic(J, 4);
    switch (comp) {
        case Component::Gradient:
            return 0.25 *
                   std::cbrt(std::pow(d, 4) * std::pow(J + 1.0, 2) * std::pow(2.0 * J + 1, 2) /
                             (6.0 * n_total * n_total * J * J * std::pow(d + 1, 3) *
                              (d * d - 1))) *
                   std::pow(h2, 2.0 / 3.0);
        case Component::DiagHessian:
            return (J + 1.0) / (36.0 * J) * std::pow((2.0 * d * J + d) / (d + 1), 1.5) *
                   std::sqrt((2 * h2 * h2 + h4) / (n_total * (d - 1)));
        case Component::OffdiagHessian:
            return (J + 1.0) * (2.0 * J + 1) / (18.0 * (d + 1) * (d * d - 1)) *
                   std::sqrt(std::pow(d, 5) * h4 / (n_total * J));
    }
    throw std::logic_error("unreachable");
}

double n_star_fd_approx(Component comp, double d) {
    if (!(d >= 2)) throw std::invalid_argument("dimension d must be >= 2");
    switch (comp) {
        case Component::Gradient:
            return 32 * (d * d - 1) / (3 * d);
        case Component::DiagHessian:
            return 81 * (d * d - 1) / (16 * d);
        case Component::OffdiagHessian:
            return 9 * std::pow(d * d - 1, 2) / (d * d * d);
    }
    throw std::logic_error("unreachable");
}

double n_star_gd_lower(Component comp, double d, int J) {
    if (!(d >= 2)) throw std::invalid_argument("dimension d must be >= 2");
    if (J < 1) throw std::invalid_argument("GD order J must be >= 1");
    const double h2 = harmonic(J, 2), h4 = harmonic(J, 4);
    const double jp1 = J + 1.0, j21 = 2.0 * J + 1;
    switch (comp) {
        case Component::Gradient:
            return 384.0 * J * J * (d * d - 1) /
                   (d * jp1 * jp1 * j21 * j21 * h2 * h2);
        case Component::DiagHessian:
            return 6561.0 * J * J * (d * d - 1) /
                   (4.0 * d * jp1 * jp1 * j21 * j21 * j21 * (2 * h2 * h2 + h4));
        case Component::OffdiagHessian:
            return 6561.0 * J * std::pow(d * d - 1, 2) /
                   (16.0 * d * d * d * jp1 * jp1 * j21 * j21 * h4);
    }
    throw std::logic_error("unreachable");
}

std::vector<double> n_star_roots(Component comp, double d, int J) {
    // PS minus optimal-GD MSE as a function of log10 N_T; both curves decay
    // monotonically but with different powers.
    auto h = [&](double log_nt) {
        const double nt = std::pow(10.0, log_nt);
        return minimize_over_eps(comp, d, nt, J).mse - mse_ps(comp, d, nt);
    };
    std::vector<double> roots;
    const double lo = 0.0, hi = 12.0, step = 0.1;
    double a = lo, fa = h(a);
    for (double b = lo + step; b <= hi + 1e-12; b += step) {
        const double fb = h(b);
        if (fa == 0.0) roots.push_back(std::pow(10.0, a));
        if (fa * fb < 0) {
            double x0 = a, x1 = b, f0 = fa;
            // 0.1% relative tolerance in N_T ~ 4.3e-4 in log10.
            while (x1 - x0 > 4.3e-4) {
                const double m = (x0 + x1) / 2, fm = h(m);
                if (f0 * fm <= 0)
                    x1 = m;
                else {
                    x0 = m;
                    f0 = fm;
                }
            }
            roots.push_back(std::pow(10.0, (x0 + x1) / 2));
        }
        a = b;
        fa = fb;
    }
    return roots;
}

std::optional<double> n_star_numeric(Component comp, double d, int J) {
    const auto roots = n_star_roots(comp, d, J);
    if (roots.empty()) return std::nullopt;
    return roots.front();
}

SquaredAverage squared_average(std::optional<Component> comp, CaseLabel c, double d) {
    if (!(d >= 2)) throw std::invalid_argument("dimension d must be >= 2");
    if (!comp) return {1.0 / (d + 1), false};  // <f^2> is case-independent

    const double dd1 = (d + 1) * (d * d - 1);
    if (*comp == Component::Gradient || *comp == Component::DiagHessian) {
        switch (c) {
            case CaseLabel::I: return {d * d / (2 * dd1), false};
            case CaseLabel::II: return {d / (2 * (d * d - 1)), true};
            case CaseLabel::III: return {1 / (d + 1), true};
            default:
                throw std::invalid_argument(
                    "cases IV-VII apply to the off-diagonal Hessian only");
        }
    }
    switch (c) {
        case CaseLabel::I: return {std::pow(d, 4) / (4 * dd1 * (d * d - 1)), false};
        case CaseLabel::II: return {d * d * d / (4 * std::pow(d * d - 1, 2)), true};
        case CaseLabel::III: return {1 / (2 * (d + 1)), true};
        case CaseLabel::IV: return {d * d / (2 * dd1), true};
        case CaseLabel::V: return {3 * d / (4 * (d * d - 1)), true};
        case CaseLabel::VI: return {d / (2 * (d * d - 1)), true};
        case CaseLabel::VII: return {1 / (2 * (d + 1)), true};
    }
    throw std::logic_error("unreachable");
}

GeneralOpt general_opt_from_averages(Component comp, double d, double n_total,
                                     double sq_avg) {
    check_dims(d, n_total);
    if (!(sq_avg > 0)) throw std::invalid_argument("squared average must be positive");
    GeneralOpt out;
    switch (comp) {
        case Component::Gradient: {
            // MSE(eps) ~ A/eps^2 + sq_avg eps^4/576 with A = 4d/(N_T(d+1)).
            const double A = 4 * d / (n_total * (d + 1));
            out.eps = std::pow(288 * A / sq_avg, 1.0 / 6.0);
            out.mse = std::cbrt(27.0 * A * A * sq_avg / 2304.0);
            break;
        }
        case Component::DiagHessian: {
            const double A = 18 * d / (n_total * (d + 1));
            out.eps = std::pow(144 * A / sq_avg, 1.0 / 8.0);
            out.mse = std::sqrt(A * sq_avg) / 6;
            break;
        }
        case Component::OffdiagHessian: {
            const double A = 16 * d / (n_total * (d + 1));
            out.eps = std::pow(144 * A / sq_avg, 1.0 / 8.0);
            out.mse = std::sqrt(A * sq_avg) / 6;
            break;
        }
    }
    return out;
}

const char* component_name(Component comp) {
    switch (comp) {
        case Component::Gradient: return "gradient";
        case Component::DiagHessian: return "diag_hessian";
        case Component::OffdiagHessian: return "offdiag_hessian";
    }
    return "?";
}

Component component_from_name(const std::string& name) {
    if (name == "gradient") return Component::Gradient;
    if (name == "diag_hessian") return Component::DiagHessian;
    if (name == "offdiag_hessian") return Component::OffdiagHessian;
    throw std::invalid_argument("unknown component '" + name + "'");
}

}  // namespace pepqc
