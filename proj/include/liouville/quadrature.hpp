#pragma once

#include <functional>
#include <vector>

namespace liouville::quad {

using Integrand = std::function<double(double)>;

struct Options {
  double abs_tol = 1e-13;
  double rel_tol = 1e-11;
  int max_intervals = 4000;
};

struct Result {
  double value = 0.0;
  double error = 0.0;
  int evaluations = 0;
  bool converged = true;

  Result& operator+=(const Result& o) {
    value += o.value;
    error += o.error;
    evaluations += o.evaluations;
    converged = converged && o.converged;
    return *this;
  }
};

/// Globally adaptive Gauss-Kronrod (G10/K21) on [a, b].
Result integrate(const Integrand& f, double a, double b, const Options& opt = {});

/// As integrate(), but starts from the given breakpoints (sorted, first/last are the limits).
Result integrate(const Integrand& f, const std::vector<double>& breakpoints,
                 const Options& opt = {});

/// Integral over [a, b], 0 < a < b, after the substitution t = e^u.
/// Suited to integrands with algebraic decay over many decades.
Result integrate_log_scale(const Integrand& f, double a, double b, const Options& opt = {});

/// One leaf panel of an adaptive partition: nodes and weights of the K21 rule.
struct Panel {
  double nodes[21];
  double weights[21];
};

/// Adaptive partition of [a, b] for f, returned as a reusable rule.
/// sum_j w_j h(t_j) then approximates the integral of h over [a, b] for any h that
/// is as regular as f (used to integrate f against families of smooth kernels).
std::vector<Panel> adaptive_rule(const Integrand& f, double a, double b, double panel_width,
                                 const Options& opt = {});

}  // namespace liouville::quad
