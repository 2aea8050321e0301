#include <cmath>
#include <stdexcept>

#include "linboltz/entropy.hpp"
#include "linboltz/quadrature.hpp"
#include "linboltz/util.hpp"

namespace linboltz {

double DirichletAssembly::evaluate(const std::vector<double>& h) const {
    const Eigen::Map<const Eigen::VectorXd> x(h.data(), static_cast<Eigen::Index>(h.size()));
    return x.dot(form * x);
}

DirichletAssembly assemble_dirichlet(const GridPtr& grid, double gamma, const AngularKernel& non_cutoff,
                                     double theta_min, const DirichletOptions& opts) {
    if (non_cutoff.cutoff())
        throw std::invalid_argument("assemble_dirichlet: expects a non-cutoff angular kernel");
    if (!(non_cutoff.nu > 0.0 && non_cutoff.nu < 2.0))
        throw std::invalid_argument("assemble_dirichlet: nu must lie in (0,2)");
    if (!(theta_min > 0.0 && theta_min < 0.25 * M_PI))
        throw std::invalid_argument("assemble_dirichlet: theta_min must lie in (0, pi/4)");
    if (non_cutoff.dimension != grid->dim())
        throw std::invalid_argument("assemble_dirichlet: kernel/grid dimension mismatch");
    const int d = grid->dim();
    if (d != 2 && d != 3) throw std::invalid_argument("assemble_dirichlet: dimension must be 2 or 3");

    const std::size_t n = grid->size();
    const double norm = std::pow(2.0 * M_PI, -0.5 * d);
    std::vector<double> maxwell(n);
    for (std::size_t i = 0; i < n; ++i) maxwell[i] = norm * std::exp(-0.5 * grid->norm2(i));
    double mmax = 0.0;
    for (double m : maxwell) mmax = std::max(mmax, m);
    const double cut = opts.pair_cut * mmax * mmax;

    // graded geometric theta mesh
    std::vector<double> theta, theta_w;
    const double ratio = M_PI / theta_min;
    double prev = theta_min;
    for (int k = 1; k <= opts.theta_intervals; ++k) {
        const double next = theta_min * std::pow(ratio, static_cast<double>(k) / opts.theta_intervals);
        theta.push_back(std::sqrt(prev * next));
        theta_w.push_back(next - prev);
        prev = next;
    }

    const int N = grid->spec().nodes_per_axis;
    const int nphi = (d == 3) ? 8 : 0;

    // fixed chunking over rows keeps the accumulation order independent of the
    // worker count, so assemblies are bitwise reproducible
    constexpr std::size_t kChunks = 16;
    const std::size_t nchunks = std::min<std::size_t>(kChunks, n);
    const std::size_t per = (n + nchunks - 1) / nchunks;
    std::vector<Eigen::MatrixXd> partial(nchunks);

    parallel_for(nchunks, opts.threads, [&](std::size_t cb, std::size_t ce) {
        for (std::size_t c = cb; c < ce; ++c) {
            Eigen::MatrixXd Q = Eigen::MatrixXd::Zero(n, n);
            const std::size_t ib = std::min(c * per, n);
            const std::size_t ie = std::min(ib + per, n);
            std::array<int, 3> cell;
            std::array<double, 3> frac;
            int idx[8];
            double lam[8];
            for (std::size_t i = ib; i < ie; ++i) {
                const auto vi = grid->node(i);
                for (std::size_t j = 0; j < n; ++j) {
                    if (j == i) continue;
                    const double mm = maxwell[i] * maxwell[j];
                    if (mm < cut) continue;
                    const auto vj = grid->node(j);
                    std::array<double, 3> mid{}, u{};
                    double rho2 = 0.0;
                    for (int k = 0; k < d; ++k) {
                        mid[k] = 0.5 * (vi[k] + vj[k]);
                        u[k] = vi[k] - vj[k];
                        rho2 += u[k] * u[k];
                    }
                    const double rho = std::sqrt(rho2);
                    for (int k = 0; k < d; ++k) u[k] /= rho;
                    const double pair_base =
                        0.5 * grid->weight(i) * grid->weight(j) * mm * std::pow(rho, gamma);

                    auto add_direction = [&](const std::array<double, 3>& sigma, double bw) {
                        std::array<double, 3> vp{};
                        for (int k = 0; k < d; ++k) vp[k] = mid[k] + 0.5 * rho * sigma[k];
                        if (!grid->locate(vp, cell, frac)) return;
                        const int corners = 1 << d;
                        for (int cc = 0; cc < corners; ++cc) {
                            double w = 1.0;
                            std::size_t id0 = 0;
                            for (int k = 0; k < d; ++k) {
                                const int bit = (cc >> k) & 1;
                                w *= bit ? frac[k] : (1.0 - frac[k]);
                                id0 = id0 * N + static_cast<std::size_t>(cell[k] + bit);
                            }
                            idx[cc] = static_cast<int>(id0);
                            lam[cc] = w;
                        }
                        const double omega = pair_base * bw;
                        // (e_i - sum lam_c e_c)(...)^T
                        Q(i, i) += omega;
                        for (int a = 0; a < corners; ++a) {
                            Q(i, idx[a]) -= omega * lam[a];
                            Q(idx[a], i) -= omega * lam[a];
                            for (int b2 = 0; b2 < corners; ++b2)
                                Q(idx[a], idx[b2]) += omega * lam[a] * lam[b2];
                        }
                    };

                    if (d == 2) {
                        const std::array<double, 3> e{-u[1], u[0], 0.0};
                        for (std::size_t m = 0; m < theta.size(); ++m) {
                            const double ct = std::cos(theta[m]);
                            const double st = std::sin(theta[m]);
                            const double bw = non_cutoff.eval_theta(theta[m]) * theta_w[m];
                            for (int sgn = -1; sgn <= 1; sgn += 2) {
                                std::array<double, 3> sigma{};
                                for (int k = 0; k < d; ++k) sigma[k] = ct * u[k] + sgn * st * e[k];
                                add_direction(sigma, bw);
                            }
                        }
                    } else {
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
                        for (std::size_t m = 0; m < theta.size(); ++m) {
                            const double ct = std::cos(theta[m]);
                            const double st = std::sin(theta[m]);
                            const double bw =
                                non_cutoff.eval_theta(theta[m]) * theta_w[m] * st * (2.0 * M_PI / nphi);
                            for (int p = 0; p < nphi; ++p) {
                                const double phi = 2.0 * M_PI * (p + 0.5) / nphi;
                                std::array<double, 3> sigma{};
                                for (int k = 0; k < 3; ++k)
                                    sigma[k] = ct * u[k] +
                                               st * (std::cos(phi) * e1[k] + std::sin(phi) * e2[k]);
                                add_direction(sigma, bw);
                            }
                        }
                    }
                }
            }
            partial[c] = std::move(Q);
        }
    });

    DirichletAssembly out;
    out.grid = grid;
    out.gamma = gamma;
    out.theta_min = theta_min;
    out.kernel_name = non_cutoff.name();
    out.form = Eigen::MatrixXd::Zero(n, n);
    for (std::size_t c = 0; c < nchunks; ++c)
        if (partial[c].size() > 0) out.form += partial[c];
    out.bdiag.resize(n);
    for (std::size_t i = 0; i < n; ++i) out.bdiag(i) = maxwell[i] * grid->weight(i);
    return out;
}

DirichletAssembly dirichlet_from_assembly(const KernelAssembly& assembly) {
    const auto& grid = assembly.grid();
    const std::size_t n = assembly.size();
    DirichletAssembly out;
    out.grid = grid;
    out.gamma = assembly.gamma();
    out.theta_min = 0.0;
    out.kernel_name = assembly.angular().name();
    out.form = Eigen::MatrixXd::Zero(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        double diag = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            const double w = assembly.a(i, j) * grid->weight(i) * grid->weight(j);
            diag += w;
            out.form(i, j) -= w;
        }
        out.form(i, i) += diag;
    }
    out.bdiag.resize(n);
    for (std::size_t i = 0; i < n; ++i) out.bdiag(i) = assembly.maxwell()[i] * grid->weight(i);
    return out;
}

SpectralGapResult spectral_gap(const DirichletAssembly& dirichlet) {
    const Eigen::Index n = dirichlet.form.rows();
    if (n > 2500) throw std::invalid_argument("spectral_gap: grid too large for a dense eigensolve");
    Eigen::MatrixXd B = Eigen::MatrixXd::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i) B(i, i) = dirichlet.bdiag(i);
    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(dirichlet.form, B);
    if (es.info() != Eigen::Success) throw std::runtime_error("spectral_gap: eigensolve failed");
    SpectralGapResult res;
    res.bottom = es.eigenvalues()(0);
    res.gap = es.eigenvalues()(1);
    const double scale = std::abs(es.eigenvalues()(n - 1));
    if (res.bottom < -1e-10 * std::max(scale, 1.0))
        throw std::runtime_error("spectral_gap: form is indefinite; assembly bug");
    return res;
}

}  // namespace linboltz
