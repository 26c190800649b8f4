#pragma once

#include <functional>
#include <stdexcept>
#include <string>

namespace nisac {

/// Tolerances and budget for the adaptive quadrature routines.
struct QuadratureSettings {
  double abs_tol = 1e-12;
  double rel_tol = 1e-10;
  int max_subdivisions = 200;
  int semi_infinite_nodes = 64;

  void validate() const;
};

/// Thrown when a quadrature or series evaluation fails to reach its
/// tolerance; carries the best estimate obtained so far.
class NumericError : public std::runtime_error {
 public:
  NumericError(const std::string& what, double best_estimate)
      : std::runtime_error(what), best_estimate_(best_estimate) {}
  double best_estimate() const { return best_estimate_; }

 private:
  double best_estimate_;
};

/// Gaussian tail probability Q(x) = P(N(0,1) > x).
double q_function(double x);

enum class GammaTail { lower, upper };

/// Regularized incomplete gamma function, P(a,x) or Q(a,x) = 1 - P(a,x).
/// Series expansion for x < a+1, continued fraction otherwise.
double regularized_gamma(double a, double x, GammaTail tail);

/// Gauss hypergeometric function 2F1(a,b;c;z) for z <= 0.  Direct series
/// for |z| <= 0.9; Pfaff transformation z -> z/(z-1) for z < -0.9, which
/// maps the full negative half-line into [0,1).
double gauss_2f1(double a, double b, double c, double z);

/// Adaptive Gauss-Kronrod integration over a finite interval [lo, hi].
double integrate(const std::function<double(double)>& f, double lo, double hi,
                 const QuadratureSettings& settings = {});

/// Adaptive integration over [0, inf) via the substitution x = t/(1-t).
/// Suited to exponentially decaying integrands (Gaussian and Gamma-family
/// weights).
double integrate_half_line(const std::function<double(double)>& f,
                           const QuadratureSettings& settings = {});

}  // namespace nisac
