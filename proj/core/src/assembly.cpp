#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "linboltz/field.hpp"
#include "linboltz/kernels.hpp"
#include "linboltz/quadrature.hpp"
#include "linboltz/util.hpp"

namespace linboltz {

namespace {

// Clip the ray c + r*u, r >= 0, against the axis box [lo,hi]. Returns false
// when the intersection is empty.
bool clip_ray(const std::array<double, 3>& c, const std::array<double, 3>& u, const double* lo,
              const double* hi, int d, double& r0, double& r1) {
    r0 = 0.0;
    r1 = std::numeric_limits<double>::infinity();
    for (int k = 0; k < d; ++k) {
        if (std::abs(u[k]) < 1e-300) {
            if (c[k] < lo[k] || c[k] > hi[k]) return false;
            continue;
        }
        double t0 = (lo[k] - c[k]) / u[k];
        double t1 = (hi[k] - c[k]) / u[k];
        if (t0 > t1) std::swap(t0, t1);
        r0 = std::max(r0, t0);
        r1 = std::min(r1, t1);
    }
    return r1 > r0;
}

// Average of w -> k_gamma(v_c, w) M(w) over the quadrature cell of node j,
// in polar coordinates around v_c so the kernel singularity is integrable.
double cell_average(const VelocityGrid& grid, std::size_t c_idx, std::size_t j, double gamma,
                    const AngularKernel& b, const AssemblyOptions& opts, const CarlemanOptions& copts) {
    const int d = grid.dim();
    const double norm = std::pow(2.0 * M_PI, -0.5 * d);
    const auto vc = grid.node(c_idx);

    double lo[3], hi[3];
    grid.cell_bounds(j, lo, hi);
    double vol = 1.0;
    for (int k = 0; k < d; ++k) vol *= hi[k] - lo[k];

    const bool self = (c_idx == j);
    const Quadrature1D& rad = gauss_legendre(opts.near_radial);

    auto radial_sum = [&](const std::array<double, 3>& u, double r0, double r1) {
        // graded GL toward r0: r = r0 + (r1-r0) s^2
        double sum = 0.0;
        const double len = r1 - r0;
        for (int q = 0; q < opts.near_radial; ++q) {
            const double s = 0.5 * (rad.x[q] + 1.0);
            const double ws = 0.5 * rad.w[q];
            const double r = r0 + len * s * s;
            if (r <= 0.0) continue;
            const double jac = 2.0 * len * s * ws;
            std::array<double, 3> w{0.0, 0.0, 0.0};
            double wn2 = 0.0;
            for (int k = 0; k < d; ++k) {
                w[k] = vc[k] + r * u[k];
                wn2 += w[k] * w[k];
            }
            const double kval = carleman_kernel(gamma, b, vc, w, copts);
            sum += jac * kval * norm * std::exp(-0.5 * wn2) * std::pow(r, d - 1);
        }
        return sum;
    };

    double integral = 0.0;
    if (d == 2) {
        if (self) {
            const int na = opts.near_angular;
            for (int m = 0; m < na; ++m) {
                const double phi = 2.0 * M_PI * (m + 0.5) / na;
                const std::array<double, 3> u{std::cos(phi), std::sin(phi), 0.0};
                double r0, r1;
                if (!clip_ray(vc, u, lo, hi, d, r0, r1)) continue;
                integral += (2.0 * M_PI / na) * radial_sum(u, r0, r1);
            }
        } else {
            // angular window subtended by the cell, GL nodes inside it
            const double thc = std::atan2(grid.coord(j, 1) - vc[1], grid.coord(j, 0) - vc[0]);
            double dmin = 0.0, dmax = 0.0;
            for (int cx = 0; cx < 2; ++cx)
                for (int cy = 0; cy < 2; ++cy) {
                    const double px = (cx ? hi[0] : lo[0]) - vc[0];
                    const double py = (cy ? hi[1] : lo[1]) - vc[1];
                    double rel = std::atan2(py, px) - thc;
                    while (rel > M_PI) rel -= 2.0 * M_PI;
                    while (rel < -M_PI) rel += 2.0 * M_PI;
                    dmin = std::min(dmin, rel);
                    dmax = std::max(dmax, rel);
                }
            const Quadrature1D qa = gauss_legendre_on(opts.near_angular, thc + dmin, thc + dmax);
            for (int m = 0; m < opts.near_angular; ++m) {
                const std::array<double, 3> u{std::cos(qa.x[m]), std::sin(qa.x[m]), 0.0};
                double r0, r1;
                if (!clip_ray(vc, u, lo, hi, d, r0, r1)) continue;
                integral += qa.w[m] * radial_sum(u, r0, r1);
            }
        }
    } else if (d == 3) {
        // full-sphere product rule with ray clipping; adequate at small N
        const int np = std::max(4, opts.near_angular / 2);
        const int nphi = opts.near_angular;
        const Quadrature1D qu = gauss_legendre(np);
        for (int ip = 0; ip < np; ++ip) {
            const double ct = qu.x[ip];
            const double st = std::sqrt(std::max(0.0, 1.0 - ct * ct));
            for (int m = 0; m < nphi; ++m) {
                const double phi = 2.0 * M_PI * (m + 0.5) / nphi;
                const std::array<double, 3> u{st * std::cos(phi), st * std::sin(phi), ct};
                double r0, r1;
                if (!clip_ray(vc, u, lo, hi, d, r0, r1)) continue;
                integral += qu.w[ip] * (2.0 * M_PI / nphi) * radial_sum(u, r0, r1);
            }
        }
    } else {
        throw std::invalid_argument("assemble_generator: dimension must be 2 or 3");
    }
    return integral / vol;
}

}  // namespace

KernelAssembly::KernelAssembly(GridPtr grid, double gamma, AngularKernel angular, AssemblyOptions opts,
                               std::vector<double> weights, std::vector<double> maxwell)
    : grid_(std::move(grid)),
      gamma_(gamma),
      angular_(angular),
      opts_(opts),
      n_(grid_->size()),
      a_(std::move(weights)),
      maxwell_(std::move(maxwell)) {
    sigma_.assign(n_, 0.0);
    for (std::size_t i = 0; i < n_; ++i) {
        double row = 0.0;
        const double* ai = a_.data() + i * n_;
        for (std::size_t j = 0; j < n_; ++j) row += ai[j] * grid_->weight(j);
        sigma_[i] = row / maxwell_[i];
    }
    sigma_max_ = *std::max_element(sigma_.begin(), sigma_.end());

    std::uint64_t h = grid_->content_hash();
    h = fnv1a(&gamma_, sizeof gamma_, h);
    const int var = static_cast<int>(angular_.variant);
    h = fnv1a(&var, sizeof var, h);
    h = fnv1a(&angular_.nu, sizeof angular_.nu, h);
    h = fnv1a(&opts_.gh_order, sizeof opts_.gh_order, h);
    h = hash_doubles(a_, h);
    hash_ = h;
}

std::string KernelAssembly::cache_key() const {
    std::ostringstream os;
    os << "d" << grid_->dim() << "_N" << grid_->spec().nodes_per_axis << "_R"
       << grid_->spec().truncation_radius << "_g" << gamma_ << "_b" << angular_.name() << "_gh"
       << opts_.gh_order;
    return os.str();
}

void KernelAssembly::gain(const std::vector<double>& f, std::vector<double>& out, int threads) const {
    out.resize(n_);
    std::vector<double> hq(n_);
    for (std::size_t j = 0; j < n_; ++j) hq[j] = f[j] / maxwell_[j] * grid_->weight(j);
    parallel_for(n_, threads == 0 ? opts_.threads : threads, [&](std::size_t b, std::size_t e) {
        for (std::size_t i = b; i < e; ++i) {
            const double* ai = a_.data() + i * n_;
            double s = 0.0;
            for (std::size_t j = 0; j < n_; ++j) s += ai[j] * hq[j];
            out[i] = s;
        }
    });
}

void KernelAssembly::apply(const std::vector<double>& f, std::vector<double>& out, int threads) const {
    gain(f, out, threads);
    for (std::size_t i = 0; i < n_; ++i) out[i] -= sigma_[i] * f[i];
}

KernelAssembly assemble_generator(const GridPtr& grid, double gamma, const AngularKernel& b,
                                  const AssemblyOptions& opts) {
    if (!b.cutoff()) throw std::invalid_argument("assemble_generator: requires a cutoff angular kernel");
    if (b.dimension != grid->dim()) throw std::invalid_argument("assemble_generator: kernel/grid dimension mismatch");
    if (!(gamma > -grid->dim()))
        throw std::invalid_argument("assemble_generator: gamma must exceed -d");
    const std::size_t n = grid->size();
    const double bytes = static_cast<double>(n) * n * sizeof(double);
    if (bytes > opts.memory_budget) {
        std::ostringstream os;
        os << "assemble_generator: dense weight matrix needs " << bytes * 1e-9 << " GB, budget is "
           << opts.memory_budget * 1e-9 << " GB";
        throw std::runtime_error(os.str());
    }

    const int d = grid->dim();
    const double norm = std::pow(2.0 * M_PI, -0.5 * d);
    std::vector<double> maxwell(n);
    for (std::size_t i = 0; i < n; ++i) maxwell[i] = norm * std::exp(-0.5 * grid->norm2(i));

    const double near_cut = opts.near_ratio * grid->spacing();
    CarlemanOptions copts;
    copts.gh_order = opts.gh_order;
    copts.rho_switch = 0.0;  // plain GH for resolved pairs
    CarlemanOptions near_copts = copts;
    near_copts.rho_switch = std::max(near_cut, 1.0);  // graded rule inside cell averages

    std::vector<double> a(n * n, 0.0);
    parallel_for(n, opts.threads, [&](std::size_t ib, std::size_t ie) {
        for (std::size_t i = ib; i < ie; ++i) {
            const auto vi = grid->node(i);
            for (std::size_t j = i; j < n; ++j) {
                const auto vj = grid->node(j);
                double rho2 = 0.0;
                for (int k = 0; k < d; ++k) rho2 += (vi[k] - vj[k]) * (vi[k] - vj[k]);
                double value;
                if (i == j) {
                    value = cell_average(*grid, i, i, gamma, b, opts, near_copts);
                } else if (rho2 < near_cut * near_cut) {
                    const double x = cell_average(*grid, i, j, gamma, b, opts, near_copts);
                    const double y = cell_average(*grid, j, i, gamma, b, opts, near_copts);
                    value = 0.5 * (x + y);
                } else {
                    const double x = carleman_kernel(gamma, b, vi, vj, copts) * maxwell[j];
                    const double y = carleman_kernel(gamma, b, vj, vi, copts) * maxwell[i];
                    value = 0.5 * (x + y);
                }
                a[i * n + j] = value;
            }
        }
    });
    // mirror the strict lower triangle
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < i; ++j) a[i * n + j] = a[j * n + i];

    return KernelAssembly(grid, gamma, b, opts, std::move(a), std::move(maxwell));
}

FrequencySandwich frequency_sandwich(const KernelAssembly& assembly) {
    const auto& grid = *assembly.grid();
    FrequencySandwich s;
    s.c_lower = std::numeric_limits<double>::infinity();
    s.c_upper = 0.0;
    for (std::size_t i = 0; i < assembly.size(); ++i) {
        const double ref = std::pow(1.0 + std::sqrt(grid.norm2(i)), assembly.gamma());
        const double ratio = assembly.sigma()[i] / ref;
        s.c_lower = std::min(s.c_lower, ratio);
        s.c_upper = std::max(s.c_upper, ratio);
    }
    return s;
}

ColumnSumAudit column_sum_consistency(const KernelAssembly& assembly, double radius_cap) {
    const auto& grid = *assembly.grid();
    ColumnSumAudit audit;
    audit.radius_cap = radius_cap;
    for (std::size_t i = 0; i < assembly.size(); ++i) {
        const double speed = std::sqrt(grid.norm2(i));
        if (speed > radius_cap) continue;
        const double ref = collision_frequency(assembly.gamma(), grid.dim(), speed);
        const double dev = std::abs(assembly.sigma()[i] - ref) / ref;
        audit.max_rel_dev = std::max(audit.max_rel_dev, dev);
        ++audit.nodes;
    }
    return audit;
}

InterpolationAudit kernel_interpolation_audit(const KernelAssembly& a_gamma, const KernelAssembly& a_zero,
                                              const KernelAssembly& a_mu) {
    if (a_gamma.grid() != a_zero.grid() || a_zero.grid() != a_mu.grid())
        throw std::invalid_argument("kernel_interpolation_audit: assemblies must share a grid");
    const double gamma = a_gamma.gamma();
    const double mu = a_mu.gamma();
    if (!(gamma < 0.0 && mu > 0.0 && a_zero.gamma() == 0.0))
        throw std::invalid_argument("kernel_interpolation_audit: need gamma < 0 = alpha0 < mu");
    const double theta = mu / (mu - gamma);
    const std::size_t n = a_gamma.size();
    InterpolationAudit audit;
    audit.min_rel_slack = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const double a0 = a_zero.a(i, j);
            if (a0 <= 0.0) continue;
            const double bound = std::pow(a_gamma.a(i, j), theta) * std::pow(a_mu.a(i, j), 1.0 - theta);
            audit.min_rel_slack = std::min(audit.min_rel_slack, (bound - a0) / a0);
            ++audit.pairs;
        }
    }
    if (audit.pairs == 0) audit.min_rel_slack = 0.0;
    return audit;
}

GainBoundAudit gain_integrability_audit(const KernelAssembly& assembly, double r, double q,
                                        std::size_t samples, std::uint64_t seed) {
    const auto& grid = assembly.grid();
    const int d = grid->dim();
    const double gamma = assembly.gamma();
    // 1/q + 1/l = 1 + gamma/d + 1/r
    const double inv_l = 1.0 + gamma / d + 1.0 / r - 1.0 / q;
    if (!(inv_l > 0.0 && inv_l < 1.0))
        throw std::invalid_argument("gain_integrability_audit: exponents do not admit l in (1,inf)");
    const double l = 1.0 / inv_l;

    const DensityField m = maxwellian(grid);
    const double m_l = lp_norm(m, l);
    GainBoundAudit audit;
    audit.r = r;
    audit.q = q;
    audit.l = l;
    audit.c_min = std::numeric_limits<double>::infinity();
    Rng rng(seed);
    std::vector<double> kf;
    for (std::size_t s = 0; s < samples; ++s) {
        const DensityField f = random_density(grid, rng);
        assembly.gain(f.values(), kf);
        double kf_r = 0.0;
        for (std::size_t i = 0; i < kf.size(); ++i) kf_r += grid->weight(i) * std::pow(std::abs(kf[i]), r);
        kf_r = std::pow(kf_r, 1.0 / r);
        const double ratio = kf_r / (lp_norm(f, q) * m_l);
        audit.c_max = std::max(audit.c_max, ratio);
        audit.c_min = std::min(audit.c_min, ratio);
    }
    return audit;
}

}  // namespace linboltz
