#pragma once

#include <functional>
#include <string>
#include <vector>

namespace linboltz {

// Exponent bookkeeping for the L^p propagation estimate and the algebraic
// decay rate. holder_q = p - eta and holder_r = p + eta are the conjugate
// pair; moment_order is the moment scale controlling the L^p growth.
struct ExponentParameters {
    double p = 2.0;
    int d = 2;
    double gamma = -1.0;
    double eta0 = 0.0;
    double eta = 0.0;
    double holder_q = 0.0;
    double holder_r = 0.0;
    double moment_order = 0.0;  // r-bold
    double s_min = 0.0;

    double sigma_max(double s) const { return -1.0 + (s - 2.0) / std::abs(gamma); }
    bool constraints_ok(std::string* why = nullptr) const;
};

ExponentParameters exponent_parameters(double p, int d, double gamma, double eta_fraction = 0.5);

// Closed-form envelope for u' <= -C (1+t)^(-alpha) u^(1+beta) + xi(t):
//   u(t) <= max(1, u0, ((1-alpha+beta*C_xi)/(beta*C))^(1/beta)) (1+t)^(-(1-alpha)/beta).
struct DiffInequalityBound {
    double coefficient = 0.0;
    double exponent = 0.0;
    double c_xi = 0.0;
    double operator()(double t) const { return coefficient * std::pow(1.0 + t, -exponent); }
};

DiffInequalityBound diff_inequality_bound(double alpha, double beta, double C,
                                          const std::function<double(double)>& xi, double u0,
                                          double t_scan = 200.0);

enum class DecayLaw { Algebraic, StretchedExp };

struct RateFit {
    DecayLaw law = DecayLaw::Algebraic;
    double sigma_hat = 0.0;     // algebraic exponent
    double e_hat = 0.0;         // stretched exponent
    double lambda_hat = 0.0;    // stretched prefactor-rate
    double amplitude = 0.0;     // fitted C
    double window_a = 0.0, window_b = 0.0;
    double residual = 0.0;      // max |log-deviation| over the window
    std::size_t samples = 0;
};

// Least-squares slope of log H against log(1+t) on the window.
RateFit fit_algebraic(const std::vector<double>& times, const std::vector<double>& values,
                      double window_a, double window_b);

// One-sided envelope check: C fitted at the window start, then
// H(t) <= C (1+t)^(-sigma_target) across the window. Returns the minimal slack
// of log C - sigma_target log(1+t) - log H.
double one_sided_decay_slack(const std::vector<double>& times, const std::vector<double>& values,
                             double window_a, double window_b, double sigma_target);

// Regression of log(-log(H/H_ref)) against log t; target exponent 2/(2+|gamma|).
RateFit fit_stretched(const std::vector<double>& times, const std::vector<double>& values,
                      double window_a, double window_b, double gamma);

struct UniformBoundReport {
    double sup_value = 0.0;
    double last_quartile_increase = 0.0;  // relative
    bool plateaued = false;
    double beta_required = 0.0;           // beta > k(2+sigma)/sigma
};

UniformBoundReport uniform_bound_check(const std::vector<double>& times, const std::vector<double>& values,
                                       double k, double sigma, double plateau_tol = 0.02);

}  // namespace linboltz
