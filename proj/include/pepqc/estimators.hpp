#pragma once

#include <functional>
#include <vector>

namespace pepqc {

// Function-evaluation oracle used by all estimators.  `copies == 0` requests
// the exact expectation value; otherwise the evaluation is sampled with
// `copies` copies per basis observable.  `eval_index` numbers the distinct
// evaluation points inside one estimator call (0-based, fixed order) so the
// caller can key independent RNG streams or caches.
using EvalFn = std::function<double(const std::vector<double>& theta,
                                    long long copies, int eval_index)>;

// All estimators below act on flat 0-based parameter indices into theta.
// Pass n_total == 0 for exact (noiseless) mode; otherwise n_total is the
// total copy budget split equally over the evaluation points.

// [f(+pi/2) - f(-pi/2)] / 2; exact for Pauli-encoded circuits.
double ps_gradient(const EvalFn& f, const std::vector<double>& theta, int idx,
                   long long n_total);

// Diagonal (i == j): [f(+pi) - 2 f(0) + f(-pi)] / 4 over 3 distinct points
// with the centre sampled once.  Off-diagonal: 4-point double shift / 4.
double ps_hessian(const EvalFn& f, const std::vector<double>& theta, int i, int j,
                  long long n_total);

// [f(+eps/2) - f(-eps/2)] / eps; exact mode equals sinc(eps/2) * df.
double fd_gradient(const EvalFn& f, const std::vector<double>& theta, int idx,
                   double eps, long long n_total);

// Diagonal: [f(+eps) - 2 f(0) + f(-eps)] / eps^2 (3 points, shared centre);
// off-diagonal: 4-point / eps^2.  Exact mode equals sinc(eps/2)^2 * ddf.
double fd_hessian(const EvalFn& f, const std::vector<double>& theta, int i, int j,
                  double eps, long long n_total);

// sum_j c_j FD^{j eps}; 2J evaluation points; sum c_j = 1 required.
double gd_gradient(const EvalFn& f, const std::vector<double>& theta, int idx,
                   int J, double eps, const std::vector<double>& c, long long n_total);

// Diagonal: 2J+1 points (shared centre with merged coefficient); off-diagonal:
// 4J points.  Exact mode equals [sum_j c_j sinc(j eps/2)^2] * ddf.
double gd_hessian(const EvalFn& f, const std::vector<double>& theta, int i, int j,
                  int J, double eps, const std::vector<double>& c, long long n_total);

}  // namespace pepqc
