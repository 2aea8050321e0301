#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "linboltz/field.hpp"
#include "linboltz/grid.hpp"

namespace linboltz {

// Surface measure of the unit sphere S^m in R^(m+1).
double sphere_area(int m);

struct AngularKernel {
    enum class Variant { ConstantNormalized, GradFamily, NonCutoff };

    Variant variant = Variant::ConstantNormalized;
    int dimension = 2;
    double nu = 0.0;   // GradFamily: exponent in (1-x^2)^(nu/2); NonCutoff: singularity order
    double b0 = 1.0;   // GradFamily coefficient after normalisation
    double c0 = 1.0;   // NonCutoff strength
    double l1 = 1.0;   // cached angular mass (cutoff variants)
    double sup = 1.0;  // cached sup of b (infinite for NonCutoff)

    static AngularKernel constant_normalized(int d);
    static AngularKernel grad_family(int d, double nu);         // normalised to unit angular mass
    static AngularKernel non_cutoff(int d, double nu, double c0 = 1.0);

    bool cutoff() const { return variant != Variant::NonCutoff; }
    double eval_cos(double s) const;      // cutoff variants only
    double eval_theta(double theta) const; // all variants, theta in (0, pi]
    std::string name() const;
};

struct AngularMass {
    double value = 0.0;
    bool divergent = false;
};

// ||b||_1 over S^(d-1) by 1D quadrature; divergence flag for NonCutoff.
AngularMass angular_mass(const AngularKernel& b, int d);

// Collision frequency Sigma_gamma(v) = int |v-v*|^gamma M(v*) dv*.
// Isotropic, so only |v| enters. Graded radial mesh resolves the r^gamma
// singularity; accurate to ~1e-6 relative for gamma >= -d + 0.5.
double collision_frequency(double gamma, int d, double speed);

// w_s(v) = int |v-v*|^gamma |v*|^s M(v*) dv*.
double weighted_frequency(double gamma, double s, int d, double speed);

// Gaussian lower-bound exponents for the gain kernel,
// lambda1 = 3/4 + (2 nu + d - gamma - 2)/(d - gamma - 2), lambda2 = lambda1 - 1/2.
std::pair<double, double> lower_bound_constants(int d, double gamma, double nu);

struct CarlemanOptions {
    int gh_order = 32;       // Gauss-Hermite order per hyperplane axis
    int sinh_order = 96;     // graded rule for small |v-w|
    double rho_switch = 0.0; // below this separation use the graded rule; 0 = only inside cell averages
};

// Pointwise gain kernel k_gamma(v,w) via the hyperplane representation.
// Requires a cutoff angular kernel and v != w.
double carleman_kernel(double gamma, const AngularKernel& b,
                       const std::array<double, 3>& v, const std::array<double, 3>& w,
                       const CarlemanOptions& opts = {});

struct AssemblyOptions {
    int gh_order = 32;
    int near_radial = 16;
    int near_angular = 16;
    double near_ratio = 1.5;        // pairs closer than near_ratio * spacing use cell averaging
    int threads = 0;                // 0 = hardware
    double memory_budget = 4.0e9;   // bytes for the dense weight matrix
};

// Discrete generator: symmetric interaction weights a_ij ~ k(v_i,v_j) M_j
// (symmetrised), and the collision frequency defined from row sums so the
// Maxwellian is an exact discrete equilibrium and mass is conserved exactly.
class KernelAssembly {
public:
    KernelAssembly(GridPtr grid, double gamma, AngularKernel angular, AssemblyOptions opts,
                   std::vector<double> weights, std::vector<double> maxwell);

    const GridPtr& grid() const { return grid_; }
    double gamma() const { return gamma_; }
    const AngularKernel& angular() const { return angular_; }
    const AssemblyOptions& options() const { return opts_; }
    std::size_t size() const { return n_; }

    double a(std::size_t i, std::size_t j) const { return a_[i * n_ + j]; }
    const std::vector<double>& weights() const { return a_; }
    const std::vector<double>& sigma() const { return sigma_; }
    double sigma_max() const { return sigma_max_; }
    const std::vector<double>& maxwell() const { return maxwell_; }

    // (K f)_i = sum_j a_ij (f_j / M_j) q_j
    void gain(const std::vector<double>& f, std::vector<double>& out, int threads = 0) const;
    // (L f)_i = (K f)_i - Sigma_i f_i
    void apply(const std::vector<double>& f, std::vector<double>& out, int threads = 0) const;

    std::uint64_t content_hash() const { return hash_; }
    std::string cache_key() const;

private:
    GridPtr grid_;
    double gamma_;
    AngularKernel angular_;
    AssemblyOptions opts_;
    std::size_t n_ = 0;
    std::vector<double> a_;       // n*n, symmetric, nonnegative
    std::vector<double> sigma_;   // row sums / M_i
    std::vector<double> maxwell_; // M_i
    double sigma_max_ = 0.0;
    std::uint64_t hash_ = 0;
};

// Assemble the discrete generator. The angular kernel must be cutoff. The
// exponent may exceed zero (needed for production audits with mu > 0); time
// integration only makes sense for gamma <= 0.
KernelAssembly assemble_generator(const GridPtr& grid, double gamma, const AngularKernel& b,
                                  const AssemblyOptions& opts = {});

struct PovznerResult {
    double value = 0.0;
    double s = 0.0;
    int order = 0;
};

// I_s(v,v*) = int_S b(cos t)(|v'|^s + |v*'|^s - |v|^s - |v*|^s) dsigma.
PovznerResult povzner_integral(const std::array<double, 3>& v, const std::array<double, 3>& vst,
                               const AngularKernel& b, double s, int d, int order = 64);

// ---- audits -------------------------------------------------------------

struct BalanceAudit {
    double max_rel_asym = 0.0;  // max |k(v,w)M(w) - k(w,v)M(v)| / max k M
    std::size_t pairs = 0;
    int gh_order = 0;
};

// Pre-symmetrisation detailed-balance audit over a deterministic sample of
// well-separated node pairs.
BalanceAudit detailed_balance_audit(const GridPtr& grid, double gamma, const AngularKernel& b,
                                    std::size_t max_pairs = 4096, const CarlemanOptions& opts = {});

struct FrequencySandwich {
    double c_lower = 0.0;  // min_i Sigma_i / (1+|v_i|)^gamma
    double c_upper = 0.0;  // max_i Sigma_i / (1+|v_i|)^gamma
};
FrequencySandwich frequency_sandwich(const KernelAssembly& assembly);

struct ColumnSumAudit {
    double max_rel_dev = 0.0;   // over nodes with |v| <= radius_cap
    std::size_t nodes = 0;
    double radius_cap = 0.0;
};
// Cross-validates row-sum frequencies against independent quadrature of the
// loss integral. Nodes beyond radius_cap are excluded: for those the gain
// sphere leaves the truncated box and the comparison measures truncation,
// not quadrature.
ColumnSumAudit column_sum_consistency(const KernelAssembly& assembly, double radius_cap);

struct InterpolationAudit {
    double min_rel_slack = 0.0;  // min over off-diagonal pairs of (a_g^t a_m^(1-t) - a_0)/a_0
    std::size_t pairs = 0;
};
// Pointwise kernel interpolation a_0 <= a_gamma^(mu/(mu-gamma)) a_mu^(-gamma/(mu-gamma))
// at every assembled off-diagonal pair. All assemblies must share a grid.
InterpolationAudit kernel_interpolation_audit(const KernelAssembly& a_gamma, const KernelAssembly& a_zero,
                                              const KernelAssembly& a_mu);

struct GainBoundAudit {
    double c_max = 0.0;  // max over samples of ||K f||_r / (||f||_q ||M||_l)
    double c_min = 0.0;
    double r = 0.0, q = 0.0, l = 0.0;
};
// ||K_gamma f||_r <= C ||f||_q ||M||_l with 1/q + 1/l = 1 + gamma/d + 1/r.
GainBoundAudit gain_integrability_audit(const KernelAssembly& assembly, double r, double q,
                                        std::size_t samples, std::uint64_t seed);

}  // namespace linboltz
