#pragma once

#include <Eigen/Dense>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "linboltz/field.hpp"
#include "linboltz/kernels.hpp"

namespace linboltz {

struct PhiFunctional {
    enum class Variant { Boltzmann, Power, Quadratic, AbsDeviation };
    Variant variant = Variant::Boltzmann;
    double p = 2.0;  // Power exponent

    double value(double x) const;
    double derivative(double x) const;
    std::string name() const;

    static PhiFunctional boltzmann() { return {Variant::Boltzmann, 0.0}; }
    static PhiFunctional power(double p) { return {Variant::Power, p}; }
    static PhiFunctional quadratic() { return {Variant::Quadratic, 0.0}; }
    static PhiFunctional l1() { return {Variant::AbsDeviation, 0.0}; }
};

// H_Phi(f|M) = sum_i q_i M_i Phi(f_i/M_i).
double phi_entropy(const DensityField& f, const PhiFunctional& phi);

// Boltzmann relative entropy, Phi(x) = x log x - x + 1.
double relative_entropy(const DensityField& f);

// H_p(f) = sum_i q_i M_i^(1-p) f_i^p.
double hp_functional(const DensityField& f, double p);

// Symmetric discrete entropy production
//   D^Phi(f) = 1/2 sum_ij a_ij q_i q_j (h_i - h_j)(Phi'(h_i) - Phi'(h_j)).
// Nonnegative for convex Phi. Returns +inf for the Boltzmann variant when f
// vanishes on a node that interacts with a non-vanishing one.
double entropy_production(const KernelAssembly& assembly, const DensityField& f,
                          const PhiFunctional& phi = PhiFunctional::boltzmann(), int threads = 0);

// ---- collision-sphere triple quadrature ----------------------------------

struct RateWeight {
    enum class Kind { PowerLaw, Exponential };
    Kind kind = Kind::PowerLaw;
    double alpha = 0.0;  // |v-v*|^alpha
    double a = 0.0;      // exp(a |v-v*|^q)
    double q = 2.0;

    static RateWeight power(double alpha) { return {Kind::PowerLaw, alpha, 0.0, 0.0}; }
    static RateWeight exponential(double a, double q) { return {Kind::Exponential, 0.0, a, q}; }
    double eval(double r) const;
};

// Quadrature of 1/2 sum_(i,j) int_S rate(|v_i-v_j|) b M_i M_j G(h_i, h(v'))
// over ordered node pairs and the collision sphere. h at the post-collision
// velocity is evaluated by multilinear interpolation; directions whose v'
// leaves the box are excluded from the discrete measure, which keeps
// constants in the kernel of every derived form. All rate weights share one
// set of nodes, so Holder-type relations between them hold at round-off.
class CollisionTripleQuad {
public:
    enum class PairIntegrand { PsiLog, Square };

    CollisionTripleQuad(GridPtr grid, AngularKernel b, double theta_min = 0.0, int theta_order = 32,
                        double pair_cut = 1e-22, int threads = 0);

    // One value per rate weight, evaluated in a single sweep.
    std::vector<double> productions(const DensityField& f, const std::vector<RateWeight>& rates,
                                    PairIntegrand kind = PairIntegrand::PsiLog) const;

    double production(const DensityField& f, const RateWeight& rate,
                      PairIntegrand kind = PairIntegrand::PsiLog) const;

    const GridPtr& grid() const { return grid_; }
    double theta_min() const { return theta_min_; }

private:
    GridPtr grid_;
    AngularKernel b_;
    double theta_min_;
    double pair_cut_;
    int threads_;
    std::vector<double> theta_, theta_w_;  // folded rule on (0, pi]
    std::vector<double> maxwell_;
};

// Gamma_{a,q}(f): entropy production with exponential rate exp(a|v-v*|^q).
// Overflow (non-finite quadrature) is reported via the optional.
std::optional<double> gamma_functional(const CollisionTripleQuad& quad, const DensityField& f,
                                       double a, double q);

// ---- inequality reports ---------------------------------------------------

struct InequalitySample {
    int id = 0;
    double lhs = 0.0;
    double rhs = 0.0;
    double slack = 0.0;  // lhs - rhs
    bool pass = false;
};

struct InequalityReport {
    std::string name;
    std::vector<InequalitySample> samples;
    double tolerance = 0.0;
    bool pass = true;
    double min_slack = 0.0;

    void finalize();
};

// D_gamma >= D_0^((mu-gamma)/mu) D_mu^(gamma/mu), plus the chained form with
// an externally supplied lambda0 estimate (skipped when lambda0 <= 0).
InequalityReport interpolation_audit(const KernelAssembly& a_gamma, const KernelAssembly& a_zero,
                                     const KernelAssembly& a_mu, const std::vector<DensityField>& samples,
                                     double lambda0 = 0.0, double rel_tol = 1e-10);

// Log form: D_gamma >= a^(|gamma|/q)/2 * D_0 * log(2 Gamma_{a,q}/D_0)^(gamma/q),
// with all three functionals on one shared quadrature.
InequalityReport dissipation_log_form_audit(const CollisionTripleQuad& quad, double gamma,
                                            const std::vector<DensityField>& samples, double a, double q,
                                            double rel_tol = 1e-10);

// H(f|M) <= H(f_d|M)/(1-d) + d/(1-d) (log(1/d) - (1-d)log(1-d)/d).
InequalityReport entropy_connection_audit(const std::vector<DensityField>& samples,
                                          const std::vector<double>& deltas, double rel_tol = 1e-10);

struct ProductionUpperSample {
    double d_mu = 0.0;
    double term_log = 0.0;    // int (1+|v|)^mu f log+ f
    double term_moment = 0.0; // int (1+|v|)^(mu+2) f
    double term_gain = 0.0;   // -sum q (K_mu f) log f
    double ratio = 0.0;       // d_mu / (term_log + term_moment + term_gain)
};
struct ProductionUpperReport {
    std::vector<ProductionUpperSample> samples;
    double c_max = 0.0, c_min = 0.0;
    bool pass = true;  // all ratios finite and positive denominators
};
ProductionUpperReport production_upper_audit(const KernelAssembly& a_mu, const std::vector<DensityField>& samples);

// Part-3 bound of the production upper estimate for Gaussian-floored samples:
// -sum q (K_mu f) log f <= C' (|log A|(1+m_mu) + B(1+m_{mu+2})).
struct GainLogBoundSample {
    double lhs = 0.0;
    double rhs_unit = 0.0;  // |log A|(1+m_mu) + B(1+m_{mu+2})
    double ratio = 0.0;
};
std::vector<GainLogBoundSample> gain_log_bound_audit(const KernelAssembly& a_mu,
                                                     const std::vector<DensityField>& samples,
                                                     const std::vector<std::pair<double, double>>& floors);

// ---- lambda0 estimate ------------------------------------------------------

struct Lambda0Report {
    double lambda0 = 0.0;
    std::string family;
    std::vector<double> params;
    double entropy = 0.0;
    double production = 0.0;
};

struct Lambda0Options {
    int restarts = 20;
    int iterations = 200;
    std::uint64_t seed = 1234;
};

// Minimises D_0(f)/H(f|M) over shifted, tempered and two-component Maxwellian
// families by Nelder-Mead search. The infimum found is an upper estimate of
// the true constant.
Lambda0Report estimate_lambda0(const KernelAssembly& maxwell_assembly, const Lambda0Options& opts = {});

// Same ratio minimisation for a production functional supplied as a callback
// (used by the non-cutoff conjecture probe).
Lambda0Report minimize_production_ratio(const GridPtr& grid,
                                        const std::function<double(const DensityField&)>& production,
                                        const Lambda0Options& opts = {});

// ---- Dirichlet form and spectral gap ---------------------------------------

struct DirichletOptions {
    int theta_intervals = 64;  // graded mesh resolving the angular singularity
    double pair_cut = 1e-22;
    int threads = 0;
};

// Quadratic form D(h) = h^T Q h with mass weights B = diag(M_i q_i).
struct DirichletAssembly {
    GridPtr grid;
    Eigen::MatrixXd form;
    Eigen::VectorXd bdiag;
    double theta_min = 0.0;
    double gamma = 0.0;
    std::string kernel_name;

    double evaluate(const std::vector<double>& h) const;
};

// Non-cutoff Dirichlet form over (v_i, v_j, sigma) with theta in [theta_min, pi].
DirichletAssembly assemble_dirichlet(const GridPtr& grid, double gamma, const AngularKernel& non_cutoff,
                                     double theta_min, const DirichletOptions& opts = {});

// Dirichlet form of a cutoff generator, D(h) = 1/2 sum a_ij q_i q_j (h_i-h_j)^2.
DirichletAssembly dirichlet_from_assembly(const KernelAssembly& assembly);

struct SpectralGapResult {
    double gap = 0.0;     // smallest nonzero generalized eigenvalue
    double bottom = 0.0;  // should be ~0 with constant eigenfunction
};

// Dense symmetric generalized eigensolve of Q h = lambda B h; deterministic.
SpectralGapResult spectral_gap(const DirichletAssembly& dirichlet);

struct ConjectureProbeResult {
    Lambda0Report minimum;
    std::vector<std::pair<std::string, double>> family_minima;
};

// Ratio D(f)/H(f|M) for the non-cutoff entropy production, minimised over the
// lambda0 families. Evidence for a positive lower bound, not a proof.
ConjectureProbeResult conjecture_probe(const GridPtr& grid, double gamma, const AngularKernel& non_cutoff,
                                       double theta_min, const Lambda0Options& opts = {});

}  // namespace linboltz
