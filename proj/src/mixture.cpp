// Mixture density estimation over 2-D coordinates: truncated
// stick-breaking variational DPMM and EM-fit GMM, both with diagonal or
// spherical covariance and shared k-means++ initialization.

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "geoloc/mathutil.hpp"
#include "geoloc/model.hpp"
#include "geoloc/rng.hpp"

namespace geoloc::model {

namespace {

constexpr double kLog2Pi = 1.8378770664093453;  // ln(2*pi)

struct Data {
    std::vector<std::array<double, 2>> x;
    std::array<double, 2> mean{};
    std::array<double, 2> var{};
    std::size_t n() const { return x.size(); }
};

Data prepare(std::span<const geo::GeoPoint> points) {
    Data d;
    d.x.reserve(points.size());
    for (const geo::GeoPoint& p : points) d.x.push_back({p.lat, p.lon});
    for (const auto& xi : d.x) {
        d.mean[0] += xi[0];
        d.mean[1] += xi[1];
    }
    const double n = static_cast<double>(d.n());
    d.mean[0] /= n;
    d.mean[1] /= n;
    for (const auto& xi : d.x) {
        d.var[0] += (xi[0] - d.mean[0]) * (xi[0] - d.mean[0]);
        d.var[1] += (xi[1] - d.mean[1]) * (xi[1] - d.mean[1]);
    }
    d.var[0] = std::max(d.var[0] / n, kVarianceFloor);
    d.var[1] = std::max(d.var[1] / n, kVarianceFloor);
    return d;
}

bool all_identical(const Data& d) {
    for (const auto& xi : d.x) {
        if (xi[0] != d.x[0][0] || xi[1] != d.x[0][1]) return false;
    }
    return true;
}

MixtureDensity degenerate_single(const Data& d, MixtureKind kind,
                                 CovarianceKind cov) {
    MixtureDensity m;
    m.kind = kind;
    m.covariance = cov;
    m.weights = {1.0};
    m.means = {d.x[0]};
    m.vars = {{kVarianceFloor, kVarianceFloor}};
    return m;
}

// k-means++ seeding followed by hard assignment
std::vector<int> kmeanspp_assign(const Data& d, int k, Rng& rng) {
    const std::size_t n = d.n();
    std::vector<std::array<double, 2>> centers;
    centers.reserve(static_cast<std::size_t>(k));
    centers.push_back(d.x[rng.uniform_int(n)]);
    std::vector<double> dist2(n, 0.0);
    auto d2 = [](const std::array<double, 2>& a, const std::array<double, 2>& b) {
        return (a[0] - b[0]) * (a[0] - b[0]) + (a[1] - b[1]) * (a[1] - b[1]);
    };
    while (centers.size() < static_cast<std::size_t>(k)) {
        double total = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            double best = d2(d.x[i], centers[0]);
            for (std::size_t c = 1; c < centers.size(); ++c) {
                best = std::min(best, d2(d.x[i], centers[c]));
            }
            dist2[i] = best;
            total += best;
        }
        if (total <= 0.0) {
            centers.push_back(d.x[rng.uniform_int(n)]);
            continue;
        }
        double pick = rng.uniform() * total;
        std::size_t chosen = n - 1;
        for (std::size_t i = 0; i < n; ++i) {
            pick -= dist2[i];
            if (pick <= 0.0) {
                chosen = i;
                break;
            }
        }
        centers.push_back(d.x[chosen]);
    }
    std::vector<int> assign(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
        double best = d2(d.x[i], centers[0]);
        for (std::size_t c = 1; c < centers.size(); ++c) {
            const double v = d2(d.x[i], centers[c]);
            if (v < best) {
                best = v;
                assign[i] = static_cast<int>(c);
            }
        }
    }
    return assign;
}

void apply_covariance_kind(std::array<double, 2>& var, CovarianceKind cov) {
    if (cov == CovarianceKind::spherical) {
        const double s = 0.5 * (var[0] + var[1]);
        var[0] = s;
        var[1] = s;
    }
    var[0] = std::max(var[0], kVarianceFloor);
    var[1] = std::max(var[1], kVarianceFloor);
}

}  // namespace

MixtureDensity fit_dpmm(std::span<const geo::GeoPoint> points, const FitOptions& opts,
                        FitTrace* trace) {
    if (points.empty()) throw std::invalid_argument("fit_dpmm: no points");
    const Data d = prepare(points);
    if (d.n() == 1 || all_identical(d)) {
        return degenerate_single(d, MixtureKind::dpmm, opts.covariance);
    }
    const int k = std::max(1, std::min<int>(opts.max_components,
                                            static_cast<int>(d.n())));
    const std::size_t n = d.n();
    const std::size_t K = static_cast<std::size_t>(k);
    const double alpha = opts.alpha;

    // Normal-Gamma prior per dimension, centered on the data
    const std::array<double, 2> m0 = d.mean;
    const double beta0 = 0.05;
    const double a0 = 2.0;
    const std::array<double, 2> b0 = {a0 * d.var[0] / 4.0, a0 * d.var[1] / 4.0};

    // responsibilities from k-means++ hard assignment
    Rng rng(opts.seed);
    std::vector<int> assign = kmeanspp_assign(d, k, rng);
    std::vector<std::vector<double>> r(n, std::vector<double>(K, 0.0));
    for (std::size_t i = 0; i < n; ++i) {
        r[i][static_cast<std::size_t>(assign[i])] = 1.0;
    }

    std::vector<double> Nk(K), g1(K), g2(K);
    std::vector<std::array<double, 2>> xbar(K), S(K), m(K), b(K);
    std::vector<double> beta(K);
    std::vector<std::array<double, 2>> a_dim(K);  // per-dim shape (diagonal)

    auto m_step = [&]() {
        for (std::size_t kk = 0; kk < K; ++kk) {
            Nk[kk] = 0.0;
            xbar[kk] = {0.0, 0.0};
            for (std::size_t i = 0; i < n; ++i) {
                Nk[kk] += r[i][kk];
                xbar[kk][0] += r[i][kk] * d.x[i][0];
                xbar[kk][1] += r[i][kk] * d.x[i][1];
            }
            const double nk = std::max(Nk[kk], 1e-12);
            xbar[kk][0] /= nk;
            xbar[kk][1] /= nk;
            S[kk] = {0.0, 0.0};
            for (std::size_t i = 0; i < n; ++i) {
                const double dx0 = d.x[i][0] - xbar[kk][0];
                const double dx1 = d.x[i][1] - xbar[kk][1];
                S[kk][0] += r[i][kk] * dx0 * dx0;
                S[kk][1] += r[i][kk] * dx1 * dx1;
            }
            S[kk][0] /= nk;
            S[kk][1] /= nk;

            // stick-breaking posteriors
            double rest = 0.0;
            for (std::size_t j = kk + 1; j < K; ++j) rest += Nk[j];
            g1[kk] = 1.0 + Nk[kk];
            g2[kk] = alpha + rest;

            beta[kk] = beta0 + Nk[kk];
            m[kk][0] = (beta0 * m0[0] + Nk[kk] * xbar[kk][0]) / beta[kk];
            m[kk][1] = (beta0 * m0[1] + Nk[kk] * xbar[kk][1]) / beta[kk];
            for (int dim = 0; dim < 2; ++dim) {
                const double dd = xbar[kk][static_cast<std::size_t>(dim)] - m0[static_cast<std::size_t>(dim)];
                a_dim[kk][static_cast<std::size_t>(dim)] = a0 + 0.5 * Nk[kk];
                b[kk][static_cast<std::size_t>(dim)] =
                    b0[static_cast<std::size_t>(dim)] +
                    0.5 * (Nk[kk] * S[kk][static_cast<std::size_t>(dim)] +
                           beta0 * Nk[kk] * dd * dd / beta[kk]);
            }
            if (opts.covariance == CovarianceKind::spherical) {
                // one precision shared by both dimensions: a = a0 + Nk*D/2,
                // b pools the per-dimension data terms over one prior
                const double b0s = 0.5 * (b0[0] + b0[1]);
                const double bs = b0s + (b[kk][0] - b0[0]) + (b[kk][1] - b0[1]);
                a_dim[kk] = {a0 + Nk[kk], a0 + Nk[kk]};
                b[kk] = {bs, bs};
            }
        }
    };

    auto e_step = [&]() -> double {
        // expected log sticks
        std::vector<double> elog_v(K, 0.0), elog_1mv(K, 0.0), log_pi(K, 0.0);
        for (std::size_t kk = 0; kk < K; ++kk) {
            const double dg_sum = digamma(g1[kk] + g2[kk]);
            elog_v[kk] = digamma(g1[kk]) - dg_sum;
            elog_1mv[kk] = digamma(g2[kk]) - dg_sum;
        }
        double acc = 0.0;
        for (std::size_t kk = 0; kk < K; ++kk) {
            log_pi[kk] = (kk + 1 == K ? 0.0 : elog_v[kk]) + acc;
            acc += elog_1mv[kk];
        }

        // One pass updates the responsibilities and accumulates
        // ELBO = sum_i lse_i - KL(q(V)||p(V)) - KL(q(mu,lambda)||p(mu,lambda));
        // with optimal r the likelihood and q(Z) entropy terms fold into lse.
        std::vector<double> elog_lambda_k(K, 0.0);
        for (std::size_t kk = 0; kk < K; ++kk) {
            for (int dim = 0; dim < 2; ++dim) {
                const std::size_t sd = static_cast<std::size_t>(dim);
                elog_lambda_k[kk] += digamma(a_dim[kk][sd]) - std::log(b[kk][sd]);
            }
        }
        double elbo = 0.0;
        std::vector<double> logrho(K);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t kk = 0; kk < K; ++kk) {
                double quad = 0.0;
                for (int dim = 0; dim < 2; ++dim) {
                    const std::size_t sd = static_cast<std::size_t>(dim);
                    const double diff = d.x[i][sd] - m[kk][sd];
                    quad += 1.0 / beta[kk] +
                            (a_dim[kk][sd] / b[kk][sd]) * diff * diff;
                }
                logrho[kk] = log_pi[kk] +
                             0.5 * (elog_lambda_k[kk] - 2.0 * kLog2Pi) - 0.5 * quad;
            }
            const double lse = log_sum_exp(logrho);
            elbo += lse;
            for (std::size_t kk = 0; kk < K; ++kk) {
                r[i][kk] = std::exp(logrho[kk] - lse);
            }
        }

        // KL for the sticks: q=Beta(g1,g2), p=Beta(1,alpha)
        for (std::size_t kk = 0; kk + 1 < K; ++kk) {
            const double dg_sum = digamma(g1[kk] + g2[kk]);
            const double kl = log_beta(1.0, alpha) - log_beta(g1[kk], g2[kk]) +
                              (g1[kk] - 1.0) * (digamma(g1[kk]) - dg_sum) +
                              (g2[kk] - alpha) * (digamma(g2[kk]) - dg_sum);
            elbo -= kl;
        }

        // KL for Normal-Gamma parameters per component/dimension (the
        // spherical case re-counts its shared Gamma once per dimension,
        // which only rescales the convergence criterion)
        for (std::size_t kk = 0; kk < K; ++kk) {
            for (int dim = 0; dim < 2; ++dim) {
                const std::size_t sd = static_cast<std::size_t>(dim);
                const double ad = a_dim[kk][sd];
                const double bd = b[kk][sd];
                const double e_lambda = ad / bd;
                // KL(Gamma(ad,bd) || Gamma(a0,b0))
                double kl = (ad - a0) * digamma(ad) - std::lgamma(ad) +
                            std::lgamma(a0) + a0 * (std::log(bd) - std::log(b0[sd])) +
                            ad * (b0[sd] - bd) / bd;
                // E_q(lambda) KL(N(m, (beta lambda)^-1) || N(m0, (beta0 lambda)^-1))
                const double md = m[kk][sd] - m0[sd];
                kl += 0.5 * (std::log(beta[kk] / beta0) + beta0 / beta[kk] - 1.0 +
                             beta0 * e_lambda * md * md);
                elbo -= kl;
            }
        }
        return elbo;
    };

    m_step();
    double prev = -std::numeric_limits<double>::infinity();
    for (int iter = 0; iter < opts.max_iterations; ++iter) {
        const double elbo = e_step();
        m_step();
        if (trace) trace->objective.push_back(elbo);
        if (std::abs(elbo - prev) < opts.tol) break;
        prev = elbo;
    }

    // extract the plug-in mixture
    MixtureDensity out;
    out.kind = MixtureKind::dpmm;
    out.covariance = opts.covariance;
    std::vector<double> ev(K);
    for (std::size_t kk = 0; kk < K; ++kk) ev[kk] = g1[kk] / (g1[kk] + g2[kk]);
    double stick = 1.0;
    double total = 0.0;
    out.weights.resize(K);
    for (std::size_t kk = 0; kk < K; ++kk) {
        out.weights[kk] = (kk + 1 == K) ? stick : ev[kk] * stick;
        stick *= (1.0 - ev[kk]);
        total += out.weights[kk];
    }
    for (double& w : out.weights) w /= total;
    out.means.resize(K);
    out.vars.resize(K);
    for (std::size_t kk = 0; kk < K; ++kk) {
        out.means[kk] = m[kk];
        std::array<double, 2> var = {b[kk][0] / (a_dim[kk][0] - 1.0),
                                     b[kk][1] / (a_dim[kk][1] - 1.0)};
        apply_covariance_kind(var, opts.covariance);
        out.vars[kk] = var;
    }
    return out;
}

MixtureDensity fit_gmm(std::span<const geo::GeoPoint> points, const FitOptions& opts,
                       FitTrace* trace) {
    if (points.empty()) throw std::invalid_argument("fit_gmm: no points");
    const Data d = prepare(points);
    if (d.n() == 1 || all_identical(d)) {
        return degenerate_single(d, MixtureKind::gmm, opts.covariance);
    }
    const std::size_t n = d.n();
    const std::size_t K = static_cast<std::size_t>(
        std::max(1, std::min<int>(opts.max_components, static_cast<int>(n))));

    Rng rng(opts.seed);
    std::vector<int> assign = kmeanspp_assign(d, static_cast<int>(K), rng);

    std::vector<double> weights(K, 0.0);
    std::vector<std::array<double, 2>> means(K, {0.0, 0.0});
    std::vector<std::array<double, 2>> vars(K, {d.var[0], d.var[1]});

    // M-step from hard assignments
    {
        std::vector<double> cnt(K, 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            const std::size_t kk = static_cast<std::size_t>(assign[i]);
            cnt[kk] += 1.0;
            means[kk][0] += d.x[i][0];
            means[kk][1] += d.x[i][1];
        }
        for (std::size_t kk = 0; kk < K; ++kk) {
            if (cnt[kk] > 0.0) {
                means[kk][0] /= cnt[kk];
                means[kk][1] /= cnt[kk];
            } else {
                means[kk] = d.mean;
            }
            weights[kk] = std::max(cnt[kk] / static_cast<double>(n), 1e-10);
        }
        std::vector<std::array<double, 2>> acc(K, {0.0, 0.0});
        for (std::size_t i = 0; i < n; ++i) {
            const std::size_t kk = static_cast<std::size_t>(assign[i]);
            const double dx0 = d.x[i][0] - means[kk][0];
            const double dx1 = d.x[i][1] - means[kk][1];
            acc[kk][0] += dx0 * dx0;
            acc[kk][1] += dx1 * dx1;
        }
        for (std::size_t kk = 0; kk < K; ++kk) {
            if (cnt[kk] > 0.0) {
                vars[kk][0] = acc[kk][0] / cnt[kk];
                vars[kk][1] = acc[kk][1] / cnt[kk];
            }
            apply_covariance_kind(vars[kk], opts.covariance);
        }
        double wt = 0.0;
        for (double w : weights) wt += w;
        for (double& w : weights) w /= wt;
    }

    std::vector<std::vector<double>> r(n, std::vector<double>(K, 0.0));
    std::vector<double> logrho(K);
    double prev = -std::numeric_limits<double>::infinity();
    for (int iter = 0; iter < opts.max_iterations; ++iter) {
        // E-step
        double loglik = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t kk = 0; kk < K; ++kk) {
                double quad = 0.0;
                double logdet = 0.0;
                for (int dim = 0; dim < 2; ++dim) {
                    const std::size_t sd = static_cast<std::size_t>(dim);
                    const double diff = d.x[i][sd] - means[kk][sd];
                    quad += diff * diff / vars[kk][sd];
                    logdet += std::log(vars[kk][sd]);
                }
                logrho[kk] = std::log(weights[kk]) -
                             0.5 * (2.0 * kLog2Pi + logdet + quad);
            }
            const double lse = log_sum_exp(logrho);
            loglik += lse;
            for (std::size_t kk = 0; kk < K; ++kk) {
                r[i][kk] = std::exp(logrho[kk] - lse);
            }
        }
        if (trace) trace->objective.push_back(loglik);
        if (std::abs(loglik - prev) < opts.tol) break;
        prev = loglik;

        // M-step
        for (std::size_t kk = 0; kk < K; ++kk) {
            double nk = 0.0;
            std::array<double, 2> mu = {0.0, 0.0};
            for (std::size_t i = 0; i < n; ++i) {
                nk += r[i][kk];
                mu[0] += r[i][kk] * d.x[i][0];
                mu[1] += r[i][kk] * d.x[i][1];
            }
            if (nk < 1e-10) {
                weights[kk] = nk / static_cast<double>(n);
                continue;  // keep previous mean/var for an empty component
            }
            mu[0] /= nk;
            mu[1] /= nk;
            std::array<double, 2> var = {0.0, 0.0};
            for (std::size_t i = 0; i < n; ++i) {
                const double dx0 = d.x[i][0] - mu[0];
                const double dx1 = d.x[i][1] - mu[1];
                var[0] += r[i][kk] * dx0 * dx0;
                var[1] += r[i][kk] * dx1 * dx1;
            }
            var[0] /= nk;
            var[1] /= nk;
            apply_covariance_kind(var, opts.covariance);
            means[kk] = mu;
            vars[kk] = var;
            weights[kk] = nk / static_cast<double>(n);
        }
        double wt = 0.0;
        for (double w : weights) wt += w;
        for (double& w : weights) w /= wt;
    }

    MixtureDensity out;
    out.kind = MixtureKind::gmm;
    out.covariance = opts.covariance;
    out.weights = std::move(weights);
    out.means = std::move(means);
    out.vars = std::move(vars);
    return out;
}

MixtureDensity fit_mixture(std::span<const geo::GeoPoint> points,
                           const FitOptions& opts, FitTrace* trace) {
    return opts.kind == MixtureKind::gmm ? fit_gmm(points, opts, trace)
                                         : fit_dpmm(points, opts, trace);
}

double density_at(const MixtureDensity& m, const geo::GeoPoint& c) {
    std::vector<double> terms;
    terms.reserve(m.components());
    for (std::size_t k = 0; k < m.components(); ++k) {
        const double w = m.weights[k];
        if (w <= 0.0) continue;
        double quad = 0.0;
        double logdet = 0.0;
        const double dx0 = c.lat - m.means[k][0];
        const double dx1 = c.lon - m.means[k][1];
        quad = dx0 * dx0 / m.vars[k][0] + dx1 * dx1 / m.vars[k][1];
        logdet = std::log(m.vars[k][0]) + std::log(m.vars[k][1]);
        terms.push_back(std::log(w) - 0.5 * (2.0 * kLog2Pi + logdet + quad));
    }
    if (terms.empty()) return -std::numeric_limits<double>::infinity();
    return log_sum_exp(terms);
}

}  // namespace geoloc::model
