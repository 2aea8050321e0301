#include "linboltz/solver.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "linboltz/util.hpp"

namespace linboltz {

SolverConfig SolverConfig::with_guard(const KernelAssembly& assembly, double t_end, double factor) {
    if (!(factor > 0.0 && factor <= 0.5))
        throw std::invalid_argument("SolverConfig: dt factor must lie in (0, 0.5]");
    SolverConfig cfg;
    cfg.t_end = t_end;
    const double guard = factor / assembly.sigma_max();
    const auto steps = static_cast<std::size_t>(std::ceil(t_end / guard - 1e-12));
    cfg.dt = t_end / static_cast<double>(std::max<std::size_t>(steps, 1));
    return cfg;
}

DeltaSchedule DeltaSchedule::standard(double s, double eps) {
    if (!(s > 2.0)) throw std::invalid_argument("DeltaSchedule: s must exceed 2");
    DeltaSchedule d;
    d.s = s;
    d.mu = (s - 2.0) / (1.0 + eps);
    return d;
}

DeltaSchedule DeltaSchedule::off() {
    DeltaSchedule d;
    d.disabled = true;
    return d;
}

const DensityField& Trajectory::nearest(double t) const { return snapshots[nearest_index(t)]; }

std::size_t Trajectory::nearest_index(double t) const {
    if (times.empty()) throw std::runtime_error("Trajectory: empty");
    std::size_t best = 0;
    for (std::size_t k = 1; k < times.size(); ++k)
        if (std::abs(times[k] - t) < std::abs(times[best] - t)) best = k;
    return best;
}

namespace {

class DiagnosticsEngine {
public:
    DiagnosticsEngine(const KernelAssembly& assembly, const DiagnosticsConfig& cfg)
        : assembly_(assembly), cfg_(cfg), maxwell_(assembly.maxwell()) {}

    TrajectoryRecord record(double t, const DensityField& f, double delta) const {
        const auto& g = *f.grid();
        TrajectoryRecord r;
        r.t = t;
        r.mass = f.mass();
        r.delta = delta;
        r.entropy = phi(f, PhiFunctional::boltzmann());
        r.h_boltzmann = r.entropy;
        r.h_power2 = phi(f, PhiFunctional::power(2.0));
        r.h_quadratic = phi(f, PhiFunctional::quadratic());
        r.h_l1 = phi(f, PhiFunctional::l1());
        r.d_gamma = entropy_production(assembly_, f);
        if (cfg_.aux_zero) r.d_zero = entropy_production(*cfg_.aux_zero, f);
        if (cfg_.aux_mu) r.d_mu = entropy_production(*cfg_.aux_mu, f);
        r.m_s = moment(f, WeightSpec::plain(cfg_.moment_s));
        r.bracket_moment = moment(f, WeightSpec::bracket(cfg_.bracket_k));
        r.lp = lp_norm(f, cfg_.lp_p);
        r.hp = phi(f, PhiFunctional::power(cfg_.hp_p));
        for (double p : cfg_.hp_extra) r.hp_extra.push_back(phi(f, PhiFunctional::power(p)));
        if (cfg_.gamma_quad) {
            const auto gv = gamma_functional(*cfg_.gamma_quad, f, cfg_.gamma_a, cfg_.gamma_q);
            r.gamma_aq = gv ? *gv : std::numeric_limits<double>::infinity();
        }
        if (cfg_.floor_lambda1 > 0.0) {
            double min_log = std::numeric_limits<double>::infinity();
            for (std::size_t i = 0; i < f.size(); ++i) {
                const double lg = (f[i] > 0.0) ? std::log(f[i]) + cfg_.floor_lambda1 * g.norm2(i)
                                               : -std::numeric_limits<double>::infinity();
                min_log = std::min(min_log, lg);
            }
            r.floor_c = std::isfinite(min_log) ? std::exp(min_log) : 0.0;
        }
        return r;
    }

private:
    double phi(const DensityField& f, const PhiFunctional& fn) const {
        const auto& g = *f.grid();
        double sum = 0.0;
        for (std::size_t i = 0; i < f.size(); ++i)
            sum += g.weight(i) * maxwell_[i] * fn.value(f[i] / maxwell_[i]);
        return sum;
    }

    const KernelAssembly& assembly_;
    const DiagnosticsConfig& cfg_;
    const std::vector<double>& maxwell_;
};

void check_state(const std::vector<double>& f, std::size_t step, double floor) {
    double mn = 0.0;
    for (double v : f) {
        if (!std::isfinite(v)) {
            std::ostringstream os;
            os << "integrate: non-finite value at step " << step;
            throw std::runtime_error(os.str());
        }
        mn = std::min(mn, v);
    }
    if (mn < -floor) {
        std::ostringstream os;
        os << "integrate: negative value " << mn << " below floor at step " << step;
        throw std::runtime_error(os.str());
    }
}

struct Stepper {
    const KernelAssembly& assembly;
    Scheme scheme;
    double dt;
    int threads;
    std::vector<double> k1, k2, k3, k4, tmp, gain;
    std::vector<double> decay, gain_coeff;  // exponential Euler

    Stepper(const KernelAssembly& a, Scheme s, double dt_, int th)
        : assembly(a), scheme(s), dt(dt_), threads(th) {
        if (scheme == Scheme::ExponentialEuler) {
            const auto& sig = assembly.sigma();
            decay.resize(sig.size());
            gain_coeff.resize(sig.size());
            for (std::size_t i = 0; i < sig.size(); ++i) {
                decay[i] = std::exp(-sig[i] * dt);
                gain_coeff[i] = -std::expm1(-sig[i] * dt) / sig[i];
            }
        }
    }

    void step(std::vector<double>& f) {
        const std::size_t n = f.size();
        if (scheme == Scheme::RK4) {
            assembly.apply(f, k1, threads);
            tmp.resize(n);
            for (std::size_t i = 0; i < n; ++i) tmp[i] = f[i] + 0.5 * dt * k1[i];
            assembly.apply(tmp, k2, threads);
            for (std::size_t i = 0; i < n; ++i) tmp[i] = f[i] + 0.5 * dt * k2[i];
            assembly.apply(tmp, k3, threads);
            for (std::size_t i = 0; i < n; ++i) tmp[i] = f[i] + dt * k3[i];
            assembly.apply(tmp, k4, threads);
            for (std::size_t i = 0; i < n; ++i)
                f[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        } else {
            assembly.gain(f, gain, threads);
            for (std::size_t i = 0; i < n; ++i) f[i] = decay[i] * f[i] + gain_coeff[i] * gain[i];
        }
    }
};

}  // namespace

Trajectory integrate(const KernelAssembly& assembly, const DensityField& f0, const SolverConfig& cfg,
                     const DiagnosticsConfig& diag) {
    if (f0.grid() != assembly.grid()) throw std::invalid_argument("integrate: field/assembly grid mismatch");
    if (std::abs(f0.mass() - 1.0) > 1e-8)
        throw std::invalid_argument("integrate: initial datum must have unit mass within 1e-8");
    for (double v : f0.values())
        if (v < 0.0) throw std::invalid_argument("integrate: initial datum must be nonnegative");
    if (!(cfg.dt > 0.0)) throw std::invalid_argument("integrate: dt must be positive");
    if (cfg.dt > 0.5 / assembly.sigma_max() * (1.0 + 1e-12))
        throw std::invalid_argument("integrate: dt violates the stability guard 0.5/max Sigma");

    const auto steps = static_cast<std::size_t>(std::llround(cfg.t_end / cfg.dt));
    if (std::abs(steps * cfg.dt - cfg.t_end) > 1e-9 * std::max(1.0, cfg.t_end))
        throw std::invalid_argument("integrate: t_end must be an integer multiple of dt");

    DiagnosticsEngine engine(assembly, diag);
    Trajectory traj;
    traj.dt = cfg.dt;
    traj.scheme = cfg.scheme;

    std::vector<double> f = f0.values();
    const double mass0 = f0.mass();
    Stepper stepper(assembly, cfg.scheme, cfg.dt, cfg.threads);

    auto record_state = [&](std::size_t step) {
        const double t = step * cfg.dt;
        DensityField snap(f0.grid(), f);
        traj.times.push_back(t);
        traj.records.push_back(engine.record(t, snap, 0.0));
        traj.max_mass_drift = std::max(traj.max_mass_drift, std::abs(snap.mass() - mass0));
        traj.snapshots.push_back(std::move(snap));
    };

    record_state(0);
    for (std::size_t s = 1; s <= steps; ++s) {
        stepper.step(f);
        check_state(f, s, cfg.positivity_floor);
        if (s % static_cast<std::size_t>(cfg.snapshot_stride) == 0 || s == steps) record_state(s);
    }
    return traj;
}

Trajectory integrate_modified(const KernelAssembly& assembly, const DensityField& f0,
                              const DeltaSchedule& sched, const SolverConfig& cfg,
                              const DiagnosticsConfig& diag) {
    if (f0.grid() != assembly.grid())
        throw std::invalid_argument("integrate_modified: field/assembly grid mismatch");
    if (std::abs(f0.mass() - 1.0) > 1e-8)
        throw std::invalid_argument("integrate_modified: initial datum must have unit mass within 1e-8");
    if (!(cfg.dt > 0.0)) throw std::invalid_argument("integrate_modified: dt must be positive");
    if (cfg.dt > 0.5 / assembly.sigma_max() * (1.0 + 1e-12))
        throw std::invalid_argument("integrate_modified: dt violates the stability guard");

    const auto steps = static_cast<std::size_t>(std::llround(cfg.t_end / cfg.dt));
    DiagnosticsEngine engine(assembly, diag);
    const DensityField maxw = maxwellian(f0.grid());

    Trajectory traj;
    traj.dt = cfg.dt;
    traj.scheme = cfg.scheme;

    // The relaxation term -delta'/(1-delta)(g - M) is the image of the plain
    // flow under g = (1-delta) f + delta M; advancing f and mixing integrates
    // that coupling exactly.
    std::vector<double> f = f0.values();
    Stepper stepper(assembly, cfg.scheme, cfg.dt, cfg.threads);

    auto record_state = [&](std::size_t step) {
        const double t = step * cfg.dt;
        const double delta = sched.delta(t);
        std::vector<double> g(f.size());
        for (std::size_t i = 0; i < f.size(); ++i) g[i] = (1.0 - delta) * f[i] + delta * maxw[i];
        DensityField snap(f0.grid(), std::move(g));
        traj.times.push_back(t);
        traj.records.push_back(engine.record(t, snap, delta));
        traj.snapshots.push_back(std::move(snap));
    };

    record_state(0);
    for (std::size_t s = 1; s <= steps; ++s) {
        stepper.step(f);
        check_state(f, s, cfg.positivity_floor);
        if (s % static_cast<std::size_t>(cfg.snapshot_stride) == 0 || s == steps) record_state(s);
    }
    return traj;
}

std::vector<double> duhamel_floor(const KernelAssembly& assembly, const DensityField& f0, double t) {
    if (t < 0.0) throw std::invalid_argument("duhamel_floor: t must be nonnegative");
    std::vector<double> out(f0.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = std::exp(-assembly.sigma()[i] * t) * f0[i];
    return out;
}

FloorCheckReport maxwellian_floor_check(const Trajectory& traj, double t0, double lambda1, double s) {
    FloorCheckReport rep;
    rep.t0 = t0;
    rep.c_min = std::numeric_limits<double>::infinity();
    double sup_term = 0.0;
    bool any = false;
    for (std::size_t k = 0; k < traj.times.size(); ++k) {
        const auto& rec = traj.records[k];
        sup_term = std::max(sup_term, std::pow(2.0 * rec.m_s, 2.0 / s));
        if (traj.times[k] < t0) continue;
        const auto& f = traj.snapshots[k];
        const auto& g = *f.grid();
        double min_log = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < f.size(); ++i) {
            const double lg = (f[i] > 0.0) ? std::log(f[i]) + lambda1 * (g.norm2(i) + sup_term)
                                           : -std::numeric_limits<double>::infinity();
            min_log = std::min(min_log, lg);
        }
        const double c = std::isfinite(min_log) ? std::exp(min_log) : 0.0;
        rep.times.push_back(traj.times[k]);
        rep.c.push_back(c);
        rep.c_min = std::min(rep.c_min, c);
        any = true;
    }
    rep.positive = any && rep.c_min > 0.0;
    if (!any) rep.c_min = 0.0;
    return rep;
}

}  // namespace linboltz
