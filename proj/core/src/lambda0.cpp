#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "linboltz/entropy.hpp"
#include "linboltz/util.hpp"

namespace linboltz {

namespace {

struct Family {
    std::string name;
    std::vector<std::pair<double, double>> bounds;  // per-parameter box
    std::function<DensityField(const GridPtr&, const std::vector<double>&)> make;
};

std::vector<Family> ratio_families() {
    std::vector<Family> fams;
    fams.push_back({"shifted",
                    {{0.05, 2.0}},
                    [](const GridPtr& g, const std::vector<double>& p) {
                        return shifted_maxwellian(g, {p[0], 0.0, 0.0});
                    }});
    fams.push_back({"tempered",
                    {{0.5, 2.0}},
                    [](const GridPtr& g, const std::vector<double>& p) {
                        return tempered_maxwellian(g, p[0]);
                    }});
    fams.push_back({"mixture",
                    {{-2.0, 2.0}, {-2.0, 2.0}, {0.05, 0.95}, {0.5, 2.0}},
                    [](const GridPtr& g, const std::vector<double>& p) {
                        std::vector<MixtureComponent> parts(2);
                        parts[0].weight = p[2];
                        parts[0].shift = {p[0], 0.0, 0.0};
                        parts[0].temperature = 1.0;
                        parts[1].weight = 1.0 - p[2];
                        parts[1].shift = {p[1], 0.0, 0.0};
                        parts[1].temperature = p[3];
                        return gaussian_mixture(g, parts);
                    }});
    return fams;
}

// Nelder-Mead with box clamping; deterministic for a fixed start simplex.
double nelder_mead(const std::function<double(const std::vector<double>&)>& fn,
                   const std::vector<std::pair<double, double>>& bounds, std::vector<double>& x,
                   int iterations) {
    const std::size_t n = x.size();
    auto clamp = [&](std::vector<double>& p) {
        for (std::size_t k = 0; k < n; ++k) p[k] = std::clamp(p[k], bounds[k].first, bounds[k].second);
    };
    std::vector<std::vector<double>> simplex(n + 1, x);
    std::vector<double> fv(n + 1);
    for (std::size_t k = 0; k < n; ++k) {
        const double span = bounds[k].second - bounds[k].first;
        simplex[k + 1][k] += 0.15 * span;
        clamp(simplex[k + 1]);
    }
    for (std::size_t k = 0; k <= n; ++k) fv[k] = fn(simplex[k]);

    for (int it = 0; it < iterations; ++it) {
        // order
        std::vector<std::size_t> ord(n + 1);
        for (std::size_t k = 0; k <= n; ++k) ord[k] = k;
        std::sort(ord.begin(), ord.end(), [&](std::size_t a, std::size_t b) { return fv[a] < fv[b]; });
        std::vector<std::vector<double>> s2(n + 1);
        std::vector<double> f2(n + 1);
        for (std::size_t k = 0; k <= n; ++k) {
            s2[k] = simplex[ord[k]];
            f2[k] = fv[ord[k]];
        }
        simplex = std::move(s2);
        fv = std::move(f2);
        if (std::abs(fv[n] - fv[0]) <= 1e-12 * (std::abs(fv[0]) + 1e-300)) break;

        std::vector<double> centroid(n, 0.0);
        for (std::size_t k = 0; k < n; ++k)
            for (std::size_t m = 0; m < n; ++m) centroid[m] += simplex[k][m] / n;

        auto blend = [&](double t) {
            std::vector<double> p(n);
            for (std::size_t m = 0; m < n; ++m) p[m] = centroid[m] + t * (simplex[n][m] - centroid[m]);
            clamp(p);
            return p;
        };
        auto xr = blend(-1.0);
        const double fr = fn(xr);
        if (fr < fv[0]) {
            auto xe = blend(-2.0);
            const double fe = fn(xe);
            if (fe < fr) {
                simplex[n] = xe;
                fv[n] = fe;
            } else {
                simplex[n] = xr;
                fv[n] = fr;
            }
        } else if (fr < fv[n - 1]) {
            simplex[n] = xr;
            fv[n] = fr;
        } else {
            auto xc = blend(0.5);
            const double fc = fn(xc);
            if (fc < fv[n]) {
                simplex[n] = xc;
                fv[n] = fc;
            } else {
                for (std::size_t k = 1; k <= n; ++k) {
                    for (std::size_t m = 0; m < n; ++m)
                        simplex[k][m] = simplex[0][m] + 0.5 * (simplex[k][m] - simplex[0][m]);
                    clamp(simplex[k]);
                    fv[k] = fn(simplex[k]);
                }
            }
        }
    }
    std::size_t best = 0;
    for (std::size_t k = 1; k <= n; ++k)
        if (fv[k] < fv[best]) best = k;
    x = simplex[best];
    return fv[best];
}

}  // namespace

Lambda0Report minimize_production_ratio(const GridPtr& grid,
                                        const std::function<double(const DensityField&)>& production,
                                        const Lambda0Options& opts) {
    Lambda0Report best;
    best.lambda0 = std::numeric_limits<double>::infinity();
    Rng rng(opts.seed);

    for (const auto& fam : ratio_families()) {
        auto objective = [&](const std::vector<double>& p) {
            const DensityField f = fam.make(grid, p);
            const double H = relative_entropy(f);
            if (H < 1e-12) return std::numeric_limits<double>::infinity();  // degenerate member
            const double D = production(f);
            if (!std::isfinite(D)) return std::numeric_limits<double>::infinity();
            return D / H;
        };
        for (int r = 0; r < opts.restarts; ++r) {
            std::vector<double> x(fam.bounds.size());
            for (std::size_t k = 0; k < x.size(); ++k)
                x[k] = rng.uniform(fam.bounds[k].first, fam.bounds[k].second);
            const double val = nelder_mead(objective, fam.bounds, x, opts.iterations);
            if (val < best.lambda0) {
                best.lambda0 = val;
                best.family = fam.name;
                best.params = x;
                const DensityField f = fam.make(grid, x);
                best.entropy = relative_entropy(f);
                best.production = best.lambda0 * best.entropy;
            }
        }
    }
    return best;
}

Lambda0Report estimate_lambda0(const KernelAssembly& maxwell_assembly, const Lambda0Options& opts) {
    if (std::abs(maxwell_assembly.gamma()) > 1e-12)
        throw std::invalid_argument("estimate_lambda0: expects the Maxwell assembly (gamma = 0)");
    return minimize_production_ratio(
        maxwell_assembly.grid(),
        [&](const DensityField& f) { return entropy_production(maxwell_assembly, f); }, opts);
}

ConjectureProbeResult conjecture_probe(const GridPtr& grid, double gamma, const AngularKernel& non_cutoff,
                                       double theta_min, const Lambda0Options& opts) {
    if (non_cutoff.cutoff()) throw std::invalid_argument("conjecture_probe: expects a non-cutoff kernel");
    if (!(gamma + non_cutoff.nu > 0.0))
        throw std::invalid_argument("conjecture_probe: requires gamma + nu > 0");
    CollisionTripleQuad quad(grid, non_cutoff, theta_min);
    auto production = [&](const DensityField& f) {
        return quad.production(f, RateWeight::power(gamma), CollisionTripleQuad::PairIntegrand::PsiLog);
    };

    ConjectureProbeResult result;
    result.minimum = minimize_production_ratio(grid, production, opts);

    // per-family minima on a coarse deterministic scan (for the report)
    for (const auto& fam : ratio_families()) {
        double best = std::numeric_limits<double>::infinity();
        const int n_scan = fam.bounds.size() == 1 ? 9 : 3;
        std::vector<int> idx(fam.bounds.size(), 0);
        while (true) {
            std::vector<double> p(fam.bounds.size());
            for (std::size_t k = 0; k < p.size(); ++k) {
                const auto [lo, hi] = fam.bounds[k];
                p[k] = lo + (hi - lo) * (idx[k] + 0.5) / n_scan;
            }
            const DensityField f = fam.make(grid, p);
            const double H = relative_entropy(f);
            if (H >= 1e-12) {
                const double D = production(f);
                if (std::isfinite(D)) best = std::min(best, D / H);
            }
            std::size_t k = 0;
            for (; k < idx.size(); ++k) {
                if (++idx[k] < n_scan) break;
                idx[k] = 0;
            }
            if (k == idx.size()) break;
        }
        result.family_minima.emplace_back(fam.name, best);
    }
    return result;
}

}  // namespace linboltz
