#include "pepqc/estimators.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "pepqc/sampling.hpp"

namespace pepqc {

namespace {

constexpr double kPi = std::numbers::pi;

struct Point {
    std::vector<std::pair<int, double>> shifts;  // (flat index, delta)
    double coeff;
};

// Shared evaluation loop: each distinct point is evaluated once, with an
// equal share of the copy budget in sampled mode.
double combine(const EvalFn& f, const std::vector<double>& theta,
               const std::vector<Point>& points, long long n_total) {
    long long per_eval = 0;
    if (n_total != 0)
        per_eval = split_budget(n_total, static_cast<int>(points.size())).per_eval;
    double acc = 0;
    for (int k = 0; k < static_cast<int>(points.size()); ++k) {
        std::vector<double> t = theta;
        for (const auto& [idx, delta] : points[k].shifts) t.at(idx) += delta;
        acc += points[k].coeff * f(t, per_eval, k);
    }
    return acc;
}

void check_gd_args(int J, double eps, const std::vector<double>& c) {
    if (J < 1) throw std::invalid_argument("GD order J must be >= 1");
    if (!(eps > 0) || !(eps < 2 * kPi))
        throw std::invalid_argument("step eps must lie in (0, 2pi)");
    if (static_cast<int>(c.size()) != J)
        throw std::invalid_argument("coefficient vector length must equal J");
    double sum = 0;
    for (double cj : c) sum += cj;
    if (std::abs(sum - 1.0) > 1e-12)
        throw std::invalid_argument("GD coefficients must sum to 1");
}

}  // namespace

double ps_gradient(const EvalFn& f, const std::vector<double>& theta, int idx,
                   long long n_total) {
    const std::vector<Point> pts = {
        {{{idx, kPi / 2}}, 0.5},
        {{{idx, -kPi / 2}}, -0.5},
    };
    return combine(f, theta, pts, n_total);
}

double ps_hessian(const EvalFn& f, const std::vector<double>& theta, int i, int j,
                  long long n_total) {
    if (i == j) {
        // Coincident +-pi/2 shifts merge to three distinct points; the centre
        // is evaluated once with coefficient -2.
        const std::vector<Point> pts = {
            {{{i, kPi}}, 0.25},
            {{}, -0.5},
            {{{i, -kPi}}, 0.25},
        };
        return combine(f, theta, pts, n_total);
    }
    const std::vector<Point> pts = {
        {{{i, kPi / 2}, {j, kPi / 2}}, 0.25},
        {{{i, kPi / 2}, {j, -kPi / 2}}, -0.25},
        {{{i, -kPi / 2}, {j, kPi / 2}}, -0.25},
        {{{i, -kPi / 2}, {j, -kPi / 2}}, 0.25},
    };
    return combine(f, theta, pts, n_total);
}

double fd_gradient(const EvalFn& f, const std::vector<double>& theta, int idx,
                   double eps, long long n_total) {
    return gd_gradient(f, theta, idx, 1, eps, {1.0}, n_total);
}

double fd_hessian(const EvalFn& f, const std::vector<double>& theta, int i, int j,
                  double eps, long long n_total) {
    return gd_hessian(f, theta, i, j, 1, eps, {1.0}, n_total);
}

double gd_gradient(const EvalFn& f, const std::vector<double>& theta, int idx,
                   int J, double eps, const std::vector<double>& c, long long n_total) {
    check_gd_args(J, eps, c);
    std::vector<Point> pts;
    pts.reserve(2 * J);
    for (int j = 1; j <= J; ++j) {
        pts.push_back({{{idx, j * eps / 2}}, c[j - 1] / (j * eps)});
        pts.push_back({{{idx, -j * eps / 2}}, -c[j - 1] / (j * eps)});
    }
    return combine(f, theta, pts, n_total);
}

double gd_hessian(const EvalFn& f, const std::vector<double>& theta, int i, int j,
                  int J, double eps, const std::vector<double>& c, long long n_total) {
    check_gd_args(J, eps, c);
    std::vector<Point> pts;
    if (i == j) {
        // 2J+1 points: the centre is shared across all j with its merged
        // coefficient -2 sum_j c_j / (j eps)^2.
        double centre = 0;
        for (int k = 1; k <= J; ++k) centre += -2.0 * c[k - 1] / (k * eps * k * eps);
        pts.push_back({{}, centre});
        for (int k = 1; k <= J; ++k) {
            const double w = c[k - 1] / (k * eps * k * eps);
            pts.push_back({{{i, k * eps}}, w});
            pts.push_back({{{i, -k * eps}}, w});
        }
    } else {
        for (int k = 1; k <= J; ++k) {
            const double d = k * eps / 2;
            const double w = c[k - 1] / (k * eps * k * eps);
            pts.push_back({{{i, d}, {j, d}}, w});
            pts.push_back({{{i, d}, {j, -d}}, -w});
            pts.push_back({{{i, -d}, {j, d}}, -w});
            pts.push_back({{{i, -d}, {j, -d}}, w});
        }
    }
    return combine(f, theta, pts, n_total);
}

}  // namespace pepqc
