#include "linboltz/entropy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "linboltz/util.hpp"

namespace linboltz {

double PhiFunctional::value(double x) const {
    switch (variant) {
        case Variant::Boltzmann:
            return x > 0.0 ? x * std::log(x) - x + 1.0 : 1.0;
        case Variant::Power:
            return std::pow(x, p);
        case Variant::Quadratic:
            return (x - 1.0) * (x - 1.0);
        case Variant::AbsDeviation:
            return std::abs(x - 1.0);
    }
    return 0.0;
}

double PhiFunctional::derivative(double x) const {
    switch (variant) {
        case Variant::Boltzmann:
            return x > 0.0 ? std::log(x) : -std::numeric_limits<double>::infinity();
        case Variant::Power:
            return p * std::pow(x, p - 1.0);
        case Variant::Quadratic:
            return 2.0 * (x - 1.0);
        case Variant::AbsDeviation:
            return x > 1.0 ? 1.0 : (x < 1.0 ? -1.0 : 0.0);
    }
    return 0.0;
}

std::string PhiFunctional::name() const {
    switch (variant) {
        case Variant::Boltzmann: return "boltzmann";
        case Variant::Power: return "power" + std::to_string(p);
        case Variant::Quadratic: return "quadratic";
        case Variant::AbsDeviation: return "l1";
    }
    return "?";
}

double phi_entropy(const DensityField& f, const PhiFunctional& phi) {
    const auto& g = *f.grid();
    const DensityField m = maxwellian(f.grid());
    double sum = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) sum += g.weight(i) * m[i] * phi.value(f[i] / m[i]);
    return sum;
}

double relative_entropy(const DensityField& f) { return phi_entropy(f, PhiFunctional::boltzmann()); }

double hp_functional(const DensityField& f, double p) { return phi_entropy(f, PhiFunctional::power(p)); }

double entropy_production(const KernelAssembly& assembly, const DensityField& f, const PhiFunctional& phi,
                          int threads) {
    const auto& g = *f.grid();
    if (f.grid() != assembly.grid()) throw std::invalid_argument("entropy_production: field/assembly grid mismatch");
    const std::size_t n = f.size();
    std::vector<double> h(n), dphi(n), wq(n);
    bool has_zero = false;
    for (std::size_t i = 0; i < n; ++i) {
        h[i] = f[i] / assembly.maxwell()[i];
        dphi[i] = phi.derivative(h[i]);
        wq[i] = g.weight(i);
        if (h[i] <= 0.0) has_zero = true;
    }
    if (has_zero && phi.variant == PhiFunctional::Variant::Boltzmann) {
        // f vanishing against a positive Maxwellian: the production is +inf
        // whenever a vanishing node interacts with a non-vanishing one.
        for (std::size_t i = 0; i < n; ++i) {
            if (h[i] > 0.0) continue;
            for (std::size_t j = 0; j < n; ++j)
                if (h[j] > 0.0 && assembly.a(i, j) > 0.0)
                    return std::numeric_limits<double>::infinity();
        }
    }
    const auto& a = assembly.weights();
    return parallel_reduce(n, threads, [&](std::size_t ib, std::size_t ie) {
        double sum = 0.0;
        for (std::size_t i = ib; i < ie; ++i) {
            const double* ai = a.data() + i * n;
            const double hi = h[i], di = dphi[i], wi = wq[i];
            double row = 0.0;
            for (std::size_t j = i + 1; j < n; ++j) {
                if (h[j] == hi) continue;
                row += ai[j] * wq[j] * (hi - h[j]) * (di - dphi[j]);
            }
            sum += wi * row;
        }
        return sum;
    });
}

void InequalityReport::finalize() {
    pass = true;
    min_slack = std::numeric_limits<double>::infinity();
    for (const auto& s : samples) {
        min_slack = std::min(min_slack, s.slack);
        pass = pass && s.pass;
    }
    if (samples.empty()) min_slack = 0.0;
}

InequalityReport interpolation_audit(const KernelAssembly& a_gamma, const KernelAssembly& a_zero,
                                     const KernelAssembly& a_mu, const std::vector<DensityField>& samples,
                                     double lambda0, double rel_tol) {
    const double gamma = a_gamma.gamma();
    const double mu = a_mu.gamma();
    if (!(gamma < 0.0 && mu > 0.0)) throw std::invalid_argument("interpolation_audit: need gamma < 0 < mu");
    InequalityReport report;
    report.name = "dissipation_interpolation";
    report.tolerance = rel_tol;
    int id = 0;
    for (const auto& f : samples) {
        const double dg = entropy_production(a_gamma, f);
        const double d0 = entropy_production(a_zero, f);
        const double dm = entropy_production(a_mu, f);
        InequalitySample s;
        s.id = id++;
        s.lhs = dg;
        if (d0 <= 0.0) {
            // f = M up to round-off: trivially passing
            s.rhs = 0.0;
            s.slack = s.lhs;
            s.pass = s.lhs >= -rel_tol;
        } else {
            s.rhs = std::pow(d0, (mu - gamma) / mu) * std::pow(dm, gamma / mu);
            s.slack = s.lhs - s.rhs;
            const double scale = std::max(s.lhs, s.rhs);
            s.pass = s.slack >= -rel_tol * scale;
        }
        report.samples.push_back(s);

        if (lambda0 > 0.0 && d0 > 0.0) {
            const double H = relative_entropy(f);
            InequalitySample c;
            c.id = id++;
            c.lhs = dg;
            c.rhs = std::pow(lambda0, 1.0 - gamma / mu) * std::pow(dm, gamma / mu) *
                    std::pow(H, 1.0 - gamma / mu);
            c.slack = c.lhs - c.rhs;
            // lambda0 is a family infimum, not a proven constant; small headroom
            c.pass = c.lhs >= c.rhs * (1.0 - 0.05) - rel_tol;
            report.samples.push_back(c);
        }
    }
    report.finalize();
    return report;
}

InequalityReport entropy_connection_audit(const std::vector<DensityField>& samples,
                                          const std::vector<double>& deltas, double rel_tol) {
    InequalityReport report;
    report.name = "entropy_connection";
    report.tolerance = rel_tol;
    int id = 0;
    for (const auto& f : samples) {
        const double H = relative_entropy(f);
        for (double delta : deltas) {
            if (!(delta > 0.0 && delta < 1.0))
                throw std::invalid_argument("entropy_connection_audit: delta must lie in (0,1)");
            const DensityField fd = mix_with_maxwellian(f, delta);
            const double Hd = relative_entropy(fd);
            InequalitySample s;
            s.id = id++;
            s.lhs = H;
            s.rhs = Hd / (1.0 - delta) +
                    delta / (1.0 - delta) *
                        (std::log(1.0 / delta) - (1.0 - delta) * std::log(1.0 - delta) / delta);
            s.slack = s.rhs - s.lhs;  // inequality is lhs <= rhs
            s.pass = s.slack >= -rel_tol * std::max(1.0, std::abs(s.rhs));
            report.samples.push_back(s);
        }
    }
    report.finalize();
    return report;
}

ProductionUpperReport production_upper_audit(const KernelAssembly& a_mu, const std::vector<DensityField>& samples) {
    const double mu = a_mu.gamma();
    if (!(mu > 0.0)) throw std::invalid_argument("production_upper_audit: needs mu > 0");
    ProductionUpperReport report;
    report.c_min = std::numeric_limits<double>::infinity();
    std::vector<double> kf;
    for (const auto& f : samples) {
        const auto& g = *f.grid();
        ProductionUpperSample s;
        s.d_mu = entropy_production(a_mu, f);
        a_mu.gain(f.values(), kf);
        for (std::size_t i = 0; i < f.size(); ++i) {
            const double w = g.weight(i);
            const double speed = std::sqrt(g.norm2(i));
            if (f[i] <= 0.0) {
                report.pass = false;
                continue;
            }
            const double lf = std::log(f[i]);
            if (lf > 0.0) s.term_log += w * std::pow(1.0 + speed, mu) * f[i] * lf;
            s.term_moment += w * std::pow(1.0 + speed, mu + 2.0) * f[i];
            s.term_gain -= w * kf[i] * lf;
        }
        const double denom = s.term_log + s.term_moment + s.term_gain;
        if (denom > 0.0) {
            s.ratio = s.d_mu / denom;
            report.c_max = std::max(report.c_max, s.ratio);
            report.c_min = std::min(report.c_min, s.ratio);
        } else {
            report.pass = false;
        }
        report.samples.push_back(s);
    }
    if (!std::isfinite(report.c_min)) report.c_min = 0.0;
    return report;
}

std::vector<GainLogBoundSample> gain_log_bound_audit(const KernelAssembly& a_mu,
                                                     const std::vector<DensityField>& samples,
                                                     const std::vector<std::pair<double, double>>& floors) {
    const double mu = a_mu.gamma();
    std::vector<GainLogBoundSample> rows;
    std::vector<double> kf;
    for (std::size_t k = 0; k < samples.size(); ++k) {
        const auto& f = samples[k];
        const auto& g = *f.grid();
        a_mu.gain(f.values(), kf);
        GainLogBoundSample row;
        for (std::size_t i = 0; i < f.size(); ++i) {
            if (f[i] <= 0.0) continue;
            row.lhs -= g.weight(i) * kf[i] * std::log(f[i]);
        }
        const double A = floors[k].first, B = floors[k].second;
        const double m_mu = moment(f, WeightSpec::plain(mu));
        const double m_mu2 = moment(f, WeightSpec::plain(mu + 2.0));
        row.rhs_unit = std::abs(std::log(A)) * (1.0 + m_mu) + B * (1.0 + m_mu2);
        row.ratio = row.lhs / row.rhs_unit;
        rows.push_back(row);
    }
    return rows;
}

}  // namespace linboltz
