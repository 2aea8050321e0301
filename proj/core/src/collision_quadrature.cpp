#include <cmath>
#include <limits>
#include <stdexcept>

#include "linboltz/entropy.hpp"
#include "linboltz/quadrature.hpp"
#include "linboltz/util.hpp"

namespace linboltz {

double RateWeight::eval(double r) const {
    if (kind == Kind::PowerLaw) return alpha == 0.0 ? 1.0 : std::pow(r, alpha);
    return std::exp(a * std::pow(r, q));
}

CollisionTripleQuad::CollisionTripleQuad(GridPtr grid, AngularKernel b, double theta_min, int theta_order,
                                         double pair_cut, int threads)
    : grid_(std::move(grid)), b_(b), theta_min_(theta_min), pair_cut_(pair_cut), threads_(threads) {
    if (b_.dimension != grid_->dim())
        throw std::invalid_argument("CollisionTripleQuad: kernel/grid dimension mismatch");
    if (!b_.cutoff()) {
        if (!(theta_min > 0.0 && theta_min < 0.25 * M_PI))
            throw std::invalid_argument("CollisionTripleQuad: non-cutoff kernel needs theta_min in (0, pi/4)");
        // geometric mesh resolving the theta^-(d-1)-nu singularity
        const int K = theta_order;
        const double ratio = M_PI / theta_min;
        double prev = theta_min;
        for (int k = 1; k <= K; ++k) {
            const double next = theta_min * std::pow(ratio, static_cast<double>(k) / K);
            theta_.push_back(std::sqrt(prev * next));  // geometric midpoint
            theta_w_.push_back(next - prev);
            prev = next;
        }
    } else {
        const Quadrature1D q = gauss_legendre_on(theta_order, 0.0, M_PI);
        theta_ = q.x;
        theta_w_ = q.w;
    }
    const int d = grid_->dim();
    const double norm = std::pow(2.0 * M_PI, -0.5 * d);
    maxwell_.resize(grid_->size());
    for (std::size_t i = 0; i < maxwell_.size(); ++i) maxwell_[i] = norm * std::exp(-0.5 * grid_->norm2(i));
}

namespace {

inline double pair_value(CollisionTripleQuad::PairIntegrand kind, double x, double y) {
    if (kind == CollisionTripleQuad::PairIntegrand::Square) {
        const double d = x - y;
        return d * d;
    }
    if (x == y) return 0.0;
    if (x <= 0.0 || y <= 0.0) return std::numeric_limits<double>::infinity();
    return (x - y) * std::log(x / y);
}

// Multilinear interpolation of h at p. Returns false when p leaves the box;
// such directions are excluded from the discrete collision measure.
inline bool interp(const VelocityGrid& g, const std::vector<double>& h, const std::array<double, 3>& p,
                   double& out) {
    std::array<int, 3> cell;
    std::array<double, 3> frac;
    if (!g.locate(p, cell, frac)) return false;
    const int d = g.dim();
    const int N = g.spec().nodes_per_axis;
    double acc = 0.0;
    const int corners = 1 << d;
    for (int c = 0; c < corners; ++c) {
        double w = 1.0;
        std::size_t idx = 0;
        for (int k = 0; k < d; ++k) {
            const int bit = (c >> k) & 1;
            w *= bit ? frac[k] : (1.0 - frac[k]);
            idx = idx * N + static_cast<std::size_t>(cell[k] + bit);
        }
        acc += w * h[idx];
    }
    out = acc;
    return true;
}

}  // namespace

std::vector<double> CollisionTripleQuad::productions(const DensityField& f, const std::vector<RateWeight>& rates,
                                                     PairIntegrand kind) const {
    if (f.grid() != grid_) throw std::invalid_argument("CollisionTripleQuad: field grid mismatch");
    const auto& g = *grid_;
    const int d = g.dim();
    const std::size_t n = g.size();
    const std::size_t nr = rates.size();

    std::vector<double> h(n);
    for (std::size_t i = 0; i < n; ++i) h[i] = f[i] / maxwell_[i];

    double mmax = 0.0;
    for (double m : maxwell_) mmax = std::max(mmax, m);
    const double cut = pair_cut_ * mmax * mmax;

    const int nphi = (d == 3) ? 8 : 0;

    constexpr std::size_t kChunks = 64;
    const std::size_t nchunks = std::min<std::size_t>(kChunks, n);
    std::vector<std::vector<double>> partial(nchunks, std::vector<double>(nr, 0.0));
    const std::size_t per = (n + nchunks - 1) / nchunks;

    parallel_for(nchunks, threads_, [&](std::size_t cb, std::size_t ce) {
        std::vector<double> rate_val(nr);
        for (std::size_t c = cb; c < ce; ++c) {
            auto& acc = partial[c];
            const std::size_t ib = std::min(c * per, n);
            const std::size_t ie = std::min(ib + per, n);
            for (std::size_t i = ib; i < ie; ++i) {
                const auto vi = g.node(i);
                const double hi = h[i];
                const double wi = g.weight(i) * maxwell_[i];
                for (std::size_t j = 0; j < n; ++j) {
                    if (j == i) continue;
                    const double mm = maxwell_[i] * maxwell_[j];
                    if (mm < cut) continue;
                    const auto vj = g.node(j);
                    std::array<double, 3> mid{}, u{};
                    double rho2 = 0.0;
                    for (int k = 0; k < d; ++k) {
                        mid[k] = 0.5 * (vi[k] + vj[k]);
                        u[k] = vi[k] - vj[k];
                        rho2 += u[k] * u[k];
                    }
                    const double rho = std::sqrt(rho2);
                    for (int k = 0; k < d; ++k) u[k] /= rho;
                    for (std::size_t r = 0; r < nr; ++r) rate_val[r] = rates[r].eval(rho);

                    double sphere = 0.0;
                    if (d == 2) {
                        const std::array<double, 3> e{-u[1], u[0], 0.0};
                        for (std::size_t m = 0; m < theta_.size(); ++m) {
                            const double ct = std::cos(theta_[m]);
                            const double st = std::sin(theta_[m]);
                            const double bw = b_.eval_theta(theta_[m]) * theta_w_[m];
                            for (int sgn = -1; sgn <= 1; sgn += 2) {
                                std::array<double, 3> vp{};
                                for (int k = 0; k < d; ++k)
                                    vp[k] = mid[k] + 0.5 * rho * (ct * u[k] + sgn * st * e[k]);
                                double hp;
                                if (!interp(g, h, vp, hp)) continue;
                                sphere += bw * pair_value(kind, hi, hp);
                            }
                        }
                    } else {
                        // d == 3: product rule in (theta, phi)
                        int axis = 0;
                        double best = std::abs(u[0]);
                        for (int k = 1; k < 3; ++k)
                            if (std::abs(u[k]) < best) {
                                best = std::abs(u[k]);
                                axis = k;
                            }
                        std::array<double, 3> aax{0.0, 0.0, 0.0};
                        aax[axis] = 1.0;
                        const double au = aax[0] * u[0] + aax[1] * u[1] + aax[2] * u[2];
                        std::array<double, 3> e1{}, e2{};
                        double nrm = 0.0;
                        for (int k = 0; k < 3; ++k) {
                            e1[k] = aax[k] - au * u[k];
                            nrm += e1[k] * e1[k];
                        }
                        nrm = std::sqrt(nrm);
                        for (int k = 0; k < 3; ++k) e1[k] /= nrm;
                        e2 = {u[1] * e1[2] - u[2] * e1[1], u[2] * e1[0] - u[0] * e1[2],
                              u[0] * e1[1] - u[1] * e1[0]};
                        for (std::size_t m = 0; m < theta_.size(); ++m) {
                            const double ct = std::cos(theta_[m]);
                            const double st = std::sin(theta_[m]);
                            const double bw = b_.eval_theta(theta_[m]) * theta_w_[m] * st * (2.0 * M_PI / nphi);
                            for (int p = 0; p < nphi; ++p) {
                                const double phi = 2.0 * M_PI * (p + 0.5) / nphi;
                                std::array<double, 3> vp{};
                                for (int k = 0; k < 3; ++k)
                                    vp[k] = mid[k] + 0.5 * rho *
                                                         (ct * u[k] + st * (std::cos(phi) * e1[k] +
                                                                            std::sin(phi) * e2[k]));
                                double hp;
                                if (!interp(g, h, vp, hp)) continue;
                                sphere += bw * pair_value(kind, hi, hp);
                            }
                        }
                    }
                    const double base = 0.5 * wi * g.weight(j) * maxwell_[j] * sphere;
                    for (std::size_t r = 0; r < nr; ++r) acc[r] += base * rate_val[r];
                }
            }
        }
    });

    std::vector<double> out(nr, 0.0);
    for (std::size_t c = 0; c < nchunks; ++c)
        for (std::size_t r = 0; r < nr; ++r) out[r] += partial[c][r];
    return out;
}

double CollisionTripleQuad::production(const DensityField& f, const RateWeight& rate, PairIntegrand kind) const {
    return productions(f, {rate}, kind)[0];
}

std::optional<double> gamma_functional(const CollisionTripleQuad& quad, const DensityField& f, double a,
                                       double q) {
    if (!(a > 0.0) || !(q > 1.0 && q <= 2.0))
        throw std::invalid_argument("gamma_functional: need a > 0 and q in (1,2]");
    if (q == 2.0 && !(a < 0.25))
        throw std::invalid_argument("gamma_functional: q = 2 requires a < 1/4");
    const double value = quad.production(f, RateWeight::exponential(a, q));
    if (!std::isfinite(value)) return std::nullopt;
    return value;
}

InequalityReport dissipation_log_form_audit(const CollisionTripleQuad& quad, double gamma,
                                            const std::vector<DensityField>& samples, double a, double q,
                                            double rel_tol) {
    if (!(gamma < 0.0)) throw std::invalid_argument("dissipation_log_form_audit: gamma must be negative");
    InequalityReport report;
    report.name = "dissipation_log_form";
    report.tolerance = rel_tol;
    const std::vector<RateWeight> rates{RateWeight::power(gamma), RateWeight::power(0.0),
                                        RateWeight::exponential(a, q)};
    int id = 0;
    for (const auto& f : samples) {
        const auto vals = quad.productions(f, rates);
        const double dg = vals[0], d0 = vals[1], ga = vals[2];
        InequalitySample s;
        s.id = id++;
        s.lhs = dg;
        if (d0 <= 0.0) {
            s.rhs = 0.0;
            s.slack = s.lhs;
            s.pass = s.lhs >= -rel_tol;
        } else {
            s.rhs = 0.5 * std::pow(a, std::abs(gamma) / q) * d0 *
                    std::pow(std::log(2.0 * ga / d0), gamma / q);
            s.slack = s.lhs - s.rhs;
            s.pass = s.slack >= -rel_tol * std::max(s.lhs, s.rhs);
        }
        report.samples.push_back(s);
    }
    report.finalize();
    return report;
}

}  // namespace linboltz
