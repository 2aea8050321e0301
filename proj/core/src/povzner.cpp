#include <cmath>
#include <stdexcept>

#include "linboltz/kernels.hpp"
#include "linboltz/quadrature.hpp"

namespace linboltz {

PovznerResult povzner_integral(const std::array<double, 3>& v, const std::array<double, 3>& vst,
                               const AngularKernel& b, double s, int d, int order) {
    if (!b.cutoff()) throw std::invalid_argument("povzner_integral: requires a bounded angular kernel");
    if (d < 2 || d > 3) throw std::invalid_argument("povzner_integral: dimension must be 2 or 3");

    PovznerResult res;
    res.s = s;
    res.order = order;

    std::array<double, 3> mid{}, diff{};
    double rho2 = 0.0, nv = 0.0, nw = 0.0;
    for (int k = 0; k < d; ++k) {
        mid[k] = 0.5 * (v[k] + vst[k]);
        diff[k] = v[k] - vst[k];
        rho2 += diff[k] * diff[k];
        nv += v[k] * v[k];
        nw += vst[k] * vst[k];
    }
    const double rho = std::sqrt(rho2);
    if (rho == 0.0) return res;  // post-collision velocities coincide with (v, v*)

    std::array<double, 3> u{};
    for (int k = 0; k < d; ++k) u[k] = diff[k] / rho;
    const double base = std::pow(nv, 0.5 * s) + std::pow(nw, 0.5 * s);

    auto contribution = [&](const std::array<double, 3>& sigma) {
        double n1 = 0.0, n2 = 0.0;
        for (int k = 0; k < d; ++k) {
            const double a = mid[k] + 0.5 * rho * sigma[k];
            const double c = mid[k] - 0.5 * rho * sigma[k];
            n1 += a * a;
            n2 += c * c;
        }
        return std::pow(n1, 0.5 * s) + std::pow(n2, 0.5 * s) - base;
    };

    double sum = 0.0;
    if (d == 2) {
        const std::array<double, 3> e{-u[1], u[0], 0.0};
        const Quadrature1D q = gauss_legendre_on(order, 0.0, M_PI);
        for (int m = 0; m < order; ++m) {
            const double ct = std::cos(q.x[m]);
            const double st = std::sin(q.x[m]);
            std::array<double, 3> sp{}, sm{};
            for (int k = 0; k < d; ++k) {
                sp[k] = ct * u[k] + st * e[k];
                sm[k] = ct * u[k] - st * e[k];
            }
            sum += q.w[m] * b.eval_cos(ct) * (contribution(sp) + contribution(sm));
        }
    } else {
        // orthonormal completion of u
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
        std::array<double, 3> e1{}, e2{};
        double nrm = 0.0;
        for (int k = 0; k < 3; ++k) {
            e1[k] = a[k] - au * u[k];
            nrm += e1[k] * e1[k];
        }
        nrm = std::sqrt(nrm);
        for (int k = 0; k < 3; ++k) e1[k] /= nrm;
        e2 = {u[1] * e1[2] - u[2] * e1[1], u[2] * e1[0] - u[0] * e1[2], u[0] * e1[1] - u[1] * e1[0]};

        const Quadrature1D qu = gauss_legendre(order);  // in cos(theta)
        const int nphi = 2 * order;
        for (int m = 0; m < order; ++m) {
            const double ct = qu.x[m];
            const double st = std::sqrt(std::max(0.0, 1.0 - ct * ct));
            const double wb = qu.w[m] * b.eval_cos(ct) * (2.0 * M_PI / nphi);
            for (int p = 0; p < nphi; ++p) {
                const double phi = 2.0 * M_PI * (p + 0.5) / nphi;
                std::array<double, 3> sigma{};
                for (int k = 0; k < 3; ++k)
                    sigma[k] = ct * u[k] + st * (std::cos(phi) * e1[k] + std::sin(phi) * e2[k]);
                sum += wb * contribution(sigma);
            }
        }
    }
    res.value = sum;
    return res;
}

}  // namespace linboltz
