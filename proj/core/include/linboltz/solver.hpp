#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "linboltz/entropy.hpp"
#include "linboltz/field.hpp"
#include "linboltz/kernels.hpp"

namespace linboltz {

enum class Scheme { RK4, ExponentialEuler };

struct SolverConfig {
    double dt = 0.0;           // must satisfy dt <= 0.5/max Sigma
    double t_end = 10.0;
    Scheme scheme = Scheme::RK4;
    int snapshot_stride = 1;
    double mass_drift_tol = 1e-8;
    double positivity_floor = 1e-10;  // abort when min f < -floor * max f
    int threads = 0;

    // dt = factor / max Sigma, rounded down so t_end is an exact multiple.
    static SolverConfig with_guard(const KernelAssembly& assembly, double t_end, double factor = 0.1);
};

// delta(t) = 1/2 exp(-(1+t)^((mu+2)/s)), the decreasing floor schedule of the
// modified flow. Defaults follow mu = (s-2)/(1+eps) with eps = 0.1.
struct DeltaSchedule {
    double s = 6.0;
    double mu = 0.0;
    bool disabled = false;

    static DeltaSchedule standard(double s, double eps = 0.1);
    static DeltaSchedule off();

    double exponent() const { return (mu + 2.0) / s; }
    double delta(double t) const {
        return disabled ? 0.0 : 0.5 * std::exp(-std::pow(1.0 + t, exponent()));
    }
};

struct DiagnosticsConfig {
    double moment_s = 2.0;      // m_s column
    double bracket_k = 2.0;     // M_k (recorded internally)
    double lp_p = 2.0;          // Lp column
    double hp_p = 2.0;          // Hp column
    std::vector<double> hp_extra{1.5, 2.0, 3.0};
    double floor_lambda1 = 0.0;           // floor_c column weight; 0 disables
    const KernelAssembly* aux_zero = nullptr;  // D_0 column
    const KernelAssembly* aux_mu = nullptr;    // D_mu column
    const CollisionTripleQuad* gamma_quad = nullptr;  // Gamma_{a,q} column
    double gamma_a = 1.0 / 32.0;
    double gamma_q = 2.0;
};

struct TrajectoryRecord {
    double t = 0.0;
    double mass = 0.0;
    double entropy = 0.0;   // H(f|M)
    double d_gamma = 0.0;
    double d_zero = std::numeric_limits<double>::quiet_NaN();
    double d_mu = std::numeric_limits<double>::quiet_NaN();
    double m_s = 0.0;
    double bracket_moment = 0.0;
    double lp = 0.0;
    double hp = 0.0;
    std::vector<double> hp_extra;
    double h_boltzmann = 0.0, h_power2 = 0.0, h_quadratic = 0.0, h_l1 = 0.0;
    double gamma_aq = std::numeric_limits<double>::quiet_NaN();
    double floor_c = std::numeric_limits<double>::quiet_NaN();
    double delta = 0.0;  // modified runs
};

struct Trajectory {
    std::vector<double> times;
    std::vector<DensityField> snapshots;
    std::vector<TrajectoryRecord> records;
    double max_mass_drift = 0.0;
    double dt = 0.0;
    Scheme scheme = Scheme::RK4;

    const DensityField& nearest(double t) const;
    std::size_t nearest_index(double t) const;
};

// Integrate df/dt = K f - Sigma f. RK4 conserves mass to round-off;
// ExponentialEuler is positivity-preserving by construction.
Trajectory integrate(const KernelAssembly& assembly, const DensityField& f0, const SolverConfig& cfg,
                     const DiagnosticsConfig& diag = {});

// Modified flow dg/dt = L g - delta'/(1-delta) (g - M). The affine coupling is
// integrated exactly through the substitution g = (1-delta) f + delta M, with
// the generator advanced by the configured scheme.
Trajectory integrate_modified(const KernelAssembly& assembly, const DensityField& f0,
                              const DeltaSchedule& sched, const SolverConfig& cfg,
                              const DiagnosticsConfig& diag = {});

// Pointwise Duhamel floor exp(-Sigma_i t) f0_i.
std::vector<double> duhamel_floor(const KernelAssembly& assembly, const DensityField& f0, double t);

struct FloorCheckReport {
    std::vector<double> times;
    std::vector<double> c;  // min_i f_i exp(lambda1 (|v_i|^2 + sup_{tau<=t} (2 m_s)^(2/s)))
    double c_min = 0.0;
    bool positive = false;
    double t0 = 0.0;
};

// Instantaneous Maxwellian lower-bound certificate along a trajectory.
FloorCheckReport maxwellian_floor_check(const Trajectory& traj, double t0, double lambda1, double s);

struct SlowConvergenceRow {
    double t = 0.0;
    double lhs = 0.0;  // ||f(t) - M||_{L1_k}
    double rhs = 0.0;  // C1 * tail integral - C2 exp(-t^(2/|gamma|)/4)
    bool holds = false;
};

struct SlowConvergenceReport {
    std::vector<SlowConvergenceRow> rows;
    double c1 = 0.0, c2 = 0.0;
    double tail_fraction = 0.0;  // continuum mass beyond the box
    bool all_hold = false;
};

struct SlowConvergenceOptions {
    double tail_threshold = 0.10;  // reject when the continuum tail beyond R exceeds this
    bool override_tail_guard = false;
    Scheme scheme = Scheme::ExponentialEuler;
    double dt_factor = 0.1;
};

// Lower bound for the weighted L1 distance from heavy-tailed data:
//   ||f(t)-M||_{L1_k} >= e^{-c_gamma} int_{|v|>t^(1/|gamma|)} <v>^k f0 - C2 e^{-t^(2/|gamma|)/4},
// with c_gamma the audited upper frequency constant.
SlowConvergenceReport slow_convergence_probe(const KernelAssembly& assembly, double tail_exponent, double k,
                                             const std::vector<double>& times,
                                             const SlowConvergenceOptions& opts = {});

}  // namespace linboltz
