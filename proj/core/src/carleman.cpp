#include <cmath>
#include <stdexcept>

#include "linboltz/kernels.hpp"
#include "linboltz/quadrature.hpp"

namespace linboltz {

namespace {

struct PairGeometry {
    double rho = 0.0;           // |v - w|
    double shift = 0.0;         // (|v|^2 - |w|^2)/rho
    int d = 2;
    // orthonormal basis of (v-w)^perp and the components of (v+w)/2 on it
    std::array<double, 3> e1{}, e2{};
    double c1 = 0.0, c2 = 0.0;
};

PairGeometry pair_geometry(const std::array<double, 3>& v, const std::array<double, 3>& w, int d) {
    PairGeometry g;
    g.d = d;
    std::array<double, 3> u{};
    double rho2 = 0.0, nv = 0.0, nw = 0.0;
    for (int k = 0; k < d; ++k) {
        u[k] = v[k] - w[k];
        rho2 += u[k] * u[k];
        nv += v[k] * v[k];
        nw += w[k] * w[k];
    }
    g.rho = std::sqrt(rho2);
    if (g.rho <= 0.0) throw std::invalid_argument("carleman_kernel: v == w");
    for (int k = 0; k < d; ++k) u[k] /= g.rho;
    g.shift = (nv - nw) / g.rho;

    std::array<double, 3> mid{};
    for (int k = 0; k < d; ++k) mid[k] = 0.5 * (v[k] + w[k]);

    if (d == 2) {
        g.e1 = {-u[1], u[0], 0.0};
        g.c1 = mid[0] * g.e1[0] + mid[1] * g.e1[1];
    } else if (d == 3) {
        // axis least aligned with u; this choice is invariant under u -> -u
        int axis = 0;
        double best = std::abs(u[0]);
        for (int k = 1; k < 3; ++k)
            if (std::abs(u[k]) < best) {
                best = std::abs(u[k]);
                axis = k;
            }
        std::array<double, 3> a{0.0, 0.0, 0.0};
        a[axis] = 1.0;
        const double au = a[0] * u[0] + a[1] * u[1] + a[2] * u[2];
        double norm = 0.0;
        for (int k = 0; k < 3; ++k) {
            g.e1[k] = a[k] - au * u[k];
            norm += g.e1[k] * g.e1[k];
        }
        norm = std::sqrt(norm);
        for (int k = 0; k < 3; ++k) g.e1[k] /= norm;
        g.e2 = {u[1] * g.e1[2] - u[2] * g.e1[1], u[2] * g.e1[0] - u[0] * g.e1[2],
                u[0] * g.e1[1] - u[1] * g.e1[0]};
        for (int k = 0; k < 3; ++k) {
            g.c1 += mid[k] * g.e1[k];
            g.c2 += mid[k] * g.e2[k];
        }
    } else {
        throw std::invalid_argument("carleman_kernel: dimension must be 2 or 3");
    }
    return g;
}

// Integrand of the hyperplane integral at |z|^2 = z2, without the Gaussian.
inline double plane_factor(const AngularKernel& b, double z2, double rho, double beta_exp) {
    const double denom = z2 + rho * rho;
    return b.eval_cos((z2 - rho * rho) / denom) * std::pow(denom, beta_exp);
}

// 1D hyperplane integral (d = 2). Gauss-Hermite matches the Gaussian weight
// exactly; for separations below rho_switch the (t^2+rho^2)^(beta) cusp is
// narrower than the node spacing and a sinh-graded rule is used instead.
double plane_integral_2d(const AngularKernel& b, const PairGeometry& g, double beta_exp,
                         const CarlemanOptions& opts) {
    const double rho = g.rho, c = g.c1;
    if (rho >= opts.rho_switch) {
        const Quadrature1D& gh = gauss_hermite(opts.gh_order);
        const double s2 = std::sqrt(2.0);
        double sum = 0.0;
        for (std::size_t k = 0; k < gh.x.size(); ++k) {
            const double t = -c + s2 * gh.x[k];
            sum += gh.w[k] * plane_factor(b, t * t, rho, beta_exp);
        }
        return s2 * sum;
    }
    const double T = std::abs(c) + 12.0;
    const double U = std::asinh(T / rho);
    const Quadrature1D q = gauss_legendre_on(opts.sinh_order, -U, U);
    double sum = 0.0;
    for (std::size_t k = 0; k < q.x.size(); ++k) {
        const double t = rho * std::sinh(q.x[k]);
        const double jac = rho * std::cosh(q.x[k]);
        sum += q.w[k] * jac * std::exp(-0.5 * (c + t) * (c + t)) * plane_factor(b, t * t, rho, beta_exp);
    }
    return sum;
}

double plane_integral_3d(const AngularKernel& b, const PairGeometry& g, double beta_exp,
                         const CarlemanOptions& opts) {
    const double rho = g.rho;
    if (rho >= opts.rho_switch) {
        const Quadrature1D& gh = gauss_hermite(opts.gh_order);
        const double s2 = std::sqrt(2.0);
        double sum = 0.0;
        for (std::size_t i = 0; i < gh.x.size(); ++i) {
            const double t1 = -g.c1 + s2 * gh.x[i];
            for (std::size_t j = 0; j < gh.x.size(); ++j) {
                const double t2 = -g.c2 + s2 * gh.x[j];
                sum += gh.w[i] * gh.w[j] * plane_factor(b, t1 * t1 + t2 * t2, rho, beta_exp);
            }
        }
        return 2.0 * sum;
    }
    // polar in the plane, sinh-graded radius
    const double cnorm = std::hypot(g.c1, g.c2);
    const double T = cnorm + 12.0;
    const double U = std::asinh(T / rho);
    const Quadrature1D qr = gauss_legendre_on(opts.sinh_order / 2, 0.0, U);
    const int n_phi = 32;
    double sum = 0.0;
    for (std::size_t k = 0; k < qr.x.size(); ++k) {
        const double s = rho * std::sinh(qr.x[k]);
        const double jac = rho * std::cosh(qr.x[k]) * s;
        const double pf = plane_factor(b, s * s, rho, beta_exp);
        double ang = 0.0;
        for (int m = 0; m < n_phi; ++m) {
            const double phi = 2.0 * M_PI * (m + 0.5) / n_phi;
            const double z1 = g.c1 + s * std::cos(phi);
            const double z2 = g.c2 + s * std::sin(phi);
            ang += std::exp(-0.5 * (z1 * z1 + z2 * z2));
        }
        sum += qr.w[k] * jac * pf * ang * (2.0 * M_PI / n_phi);
    }
    return sum;
}

}  // namespace

double carleman_kernel(double gamma, const AngularKernel& b, const std::array<double, 3>& v,
                       const std::array<double, 3>& w, const CarlemanOptions& opts) {
    if (!b.cutoff()) throw std::invalid_argument("carleman_kernel: requires a cutoff angular kernel");
    const int d = b.dimension;
    const PairGeometry g = pair_geometry(v, w, d);
    const double beta_exp = 0.5 * (gamma - (d - 2));
    const double plane = (d == 2) ? plane_integral_2d(b, g, beta_exp, opts)
                                  : plane_integral_3d(b, g, beta_exp, opts);
    const double arg = g.rho + g.shift;
    const double pref = std::pow(2.0, d - 1) * std::pow(2.0 * M_PI, -0.5 * d) / g.rho;
    return pref * std::exp(-0.125 * arg * arg) * plane;
}

BalanceAudit detailed_balance_audit(const GridPtr& grid, double gamma, const AngularKernel& b,
                                    std::size_t max_pairs, const CarlemanOptions& opts) {
    const std::size_t n = grid->size();
    const int d = grid->dim();
    const double norm = std::pow(2.0 * M_PI, -0.5 * d);
    const double near_cut = 1.5 * grid->spacing();

    // stride through the strict upper triangle for an unbiased deterministic sample
    const std::size_t total = n * (n - 1) / 2;
    const std::size_t stride = std::max<std::size_t>(1, total / std::max<std::size_t>(max_pairs, 1));

    BalanceAudit audit;
    audit.gh_order = opts.gh_order;
    double max_diff = 0.0, max_val = 0.0;
    std::size_t count = 0;
    for (std::size_t p = 0; p < total; p += stride) {
        // unrank pair index p -> (i,j), i<j
        std::size_t i = 0;
        std::size_t rem = p;
        std::size_t rowlen = n - 1;
        while (rem >= rowlen) {
            rem -= rowlen;
            ++i;
            --rowlen;
        }
        const std::size_t j = i + 1 + rem;
        const auto vi = grid->node(i);
        const auto vj = grid->node(j);
        double rho2 = 0.0;
        for (int k = 0; k < d; ++k) rho2 += (vi[k] - vj[k]) * (vi[k] - vj[k]);
        if (rho2 < near_cut * near_cut) continue;
        const double mi = norm * std::exp(-0.5 * grid->norm2(i));
        const double mj = norm * std::exp(-0.5 * grid->norm2(j));
        const double x = carleman_kernel(gamma, b, vi, vj, opts) * mj;
        const double y = carleman_kernel(gamma, b, vj, vi, opts) * mi;
        max_diff = std::max(max_diff, std::abs(x - y));
        max_val = std::max({max_val, x, y});
        ++count;
    }
    audit.pairs = count;
    audit.max_rel_asym = max_val > 0.0 ? max_diff / max_val : 0.0;
    return audit;
}

}  // namespace linboltz
