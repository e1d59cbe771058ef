// superkit: simulation of qubit channels and superchannels
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <numeric>
#include <vector>

#include "superkit/linalg.hpp"

namespace superkit {

using ObjectiveFn = std::function<double(const std::vector<double>&)>;

/// Objective returning its value and writing the gradient into the second
/// argument (resized by the callee).
using GradObjectiveFn =
    std::function<double(const std::vector<double>&, std::vector<double>&)>;

enum class OptimMethod { Adam, NelderMead };

struct OptimConfig {
    OptimMethod method = OptimMethod::Adam;
    int max_iters = 2000;
    double tolerance = 1e-4;
    double learning_rate = 0.05;
    double lr_decay = 0.0;  // lr_t = learning_rate / (1 + lr_decay * t)
    double fd_step = 1e-6;
};

struct OptimResult {
    std::vector<double> x;
    double value = 0;
    int iters = 0;
    bool converged = false;
};

/// Adam on an analytic gradient. Tracks the best point seen, so the returned
/// value never exceeds f(x0).
inline OptimResult minimize_adam(const GradObjectiveFn& f, std::vector<double> x,
                                 const OptimConfig& cfg) {
    const std::size_t n = x.size();
    std::vector<double> m(n, 0), v(n, 0), grad(n);
    const double b1 = 0.9, b2 = 0.999, eps = 1e-8;

    OptimResult best;
    best.x = x;
    best.value = f(x, grad);

    for (int it = 1; it <= cfg.max_iters; ++it) {
        const double c1 = 1.0 - std::pow(b1, it);
        const double c2 = 1.0 - std::pow(b2, it);
        const double lr = cfg.learning_rate / (1.0 + cfg.lr_decay * it);
        for (std::size_t i = 0; i < n; ++i) {
            m[i] = b1 * m[i] + (1 - b1) * grad[i];
            v[i] = b2 * v[i] + (1 - b2) * grad[i] * grad[i];
            x[i] -= lr * (m[i] / c1) / (std::sqrt(v[i] / c2) + eps);
        }
        const double fx = f(x, grad);
        if (fx < best.value) {
            best.value = fx;
            best.x = x;
        }
        best.iters = it;
        if (best.value <= cfg.tolerance) {
            best.converged = true;
            break;
        }
    }
    return best;
}

/// Adam on a forward-difference gradient, for objectives without an analytic
/// gradient. Tracks the best point seen, so the returned value never exceeds
/// f(x0).
inline OptimResult minimize_adam_fd(const ObjectiveFn& f, std::vector<double> x,
                                    const OptimConfig& cfg) {
    const std::size_t n = x.size();
    std::vector<double> m(n, 0), v(n, 0), grad(n);
    const double b1 = 0.9, b2 = 0.999, eps = 1e-8;

    OptimResult best;
    best.x = x;
    best.value = f(x);

    double fx = best.value;
    for (int it = 1; it <= cfg.max_iters; ++it) {
        for (std::size_t i = 0; i < n; ++i) {
            const double old = x[i];
            x[i] = old + cfg.fd_step;
            grad[i] = (f(x) - fx) / cfg.fd_step;
            x[i] = old;
        }
        const double c1 = 1.0 - std::pow(b1, it);
        const double c2 = 1.0 - std::pow(b2, it);
        const double lr = cfg.learning_rate / (1.0 + cfg.lr_decay * it);
        for (std::size_t i = 0; i < n; ++i) {
            m[i] = b1 * m[i] + (1 - b1) * grad[i];
            v[i] = b2 * v[i] + (1 - b2) * grad[i] * grad[i];
            x[i] -= lr * (m[i] / c1) / (std::sqrt(v[i] / c2) + eps);
        }
        fx = f(x);
        if (fx < best.value) {
            best.value = fx;
            best.x = x;
        }
        best.iters = it;
        if (best.value <= cfg.tolerance) {
            best.converged = true;
            break;
        }
    }
    return best;
}

/// Standard Nelder-Mead simplex with adaptive shrink, deterministic given x0.
inline OptimResult minimize_nelder_mead(const ObjectiveFn& f, std::vector<double> x0,
                                        const OptimConfig& cfg) {
    const std::size_t n = x0.size();
    const double alpha = 1.0, gamma = 2.0, rho = 0.5, sigma = 0.5;
    const double init_step = 0.1;

    std::vector<std::vector<double>> pts(n + 1, x0);
    std::vector<double> vals(n + 1);
    for (std::size_t i = 0; i < n; ++i) pts[i + 1][i] += init_step;
    for (std::size_t i = 0; i <= n; ++i) vals[i] = f(pts[i]);

    std::vector<std::size_t> order(n + 1);
    OptimResult res;
    for (int it = 0; it < cfg.max_iters; ++it) {
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::sort(order.begin(), order.end(),
                  [&](std::size_t a, std::size_t b) { return vals[a] < vals[b]; });
        res.iters = it + 1;
        if (vals[order[0]] <= cfg.tolerance ||
            vals[order[n]] - vals[order[0]] < 1e-14) {
            res.converged = vals[order[0]] <= cfg.tolerance;
            break;
        }

        std::vector<double> centroid(n, 0);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) centroid[j] += pts[order[i]][j] / double(n);

        auto combine = [&](double t) {
            std::vector<double> p(n);
            const auto& worst = pts[order[n]];
            for (std::size_t j = 0; j < n; ++j) p[j] = centroid[j] + t * (centroid[j] - worst[j]);
            return p;
        };

        auto refl = combine(alpha);
        const double fr = f(refl);
        if (fr < vals[order[0]]) {
            auto exp_pt = combine(gamma);
            const double fe = f(exp_pt);
            pts[order[n]] = fe < fr ? exp_pt : refl;
            vals[order[n]] = std::min(fe, fr);
        } else if (fr < vals[order[n - 1]]) {
            pts[order[n]] = refl;
            vals[order[n]] = fr;
        } else {
            auto con = combine(-rho);
            const double fc = f(con);
            if (fc < vals[order[n]]) {
                pts[order[n]] = con;
                vals[order[n]] = fc;
            } else {
                for (std::size_t i = 1; i <= n; ++i) {
                    auto& p = pts[order[i]];
                    for (std::size_t j = 0; j < n; ++j)
                        p[j] = pts[order[0]][j] + sigma * (p[j] - pts[order[0]][j]);
                    vals[order[i]] = f(p);
                }
            }
        }
    }
    std::size_t bi = std::distance(vals.begin(), std::min_element(vals.begin(), vals.end()));
    res.x = pts[bi];
    res.value = vals[bi];
    return res;
}

inline OptimResult minimize(const ObjectiveFn& f, std::vector<double> x0,
                            const OptimConfig& cfg) {
    return cfg.method == OptimMethod::Adam ? minimize_adam_fd(f, std::move(x0), cfg)
                                           : minimize_nelder_mead(f, std::move(x0), cfg);
}

/// 8x8 Hermitian generator from 64 reals: 8 diagonal entries, then the 28
/// upper-triangle pairs (re, im). exp(iH) is surjective onto U(8).
inline Matrix hermitian_from_params(const double* p, Eigen::Index d) {
    Matrix h(d, d);
    Eigen::Index idx = 0;
    for (Eigen::Index i = 0; i < d; ++i) h(i, i) = p[idx++];
    for (Eigen::Index i = 0; i < d; ++i)
        for (Eigen::Index j = i + 1; j < d; ++j) {
            h(i, j) = Complex(p[idx], p[idx + 1]);
            h(j, i) = std::conj(h(i, j));
            idx += 2;
        }
    return h;
}

inline Matrix unitary_from_params(const double* p, Eigen::Index d) {
    return exp_i_hermitian(hermitian_from_params(p, d));
}

/// Adjoint of hermitian_from_params: given G_H with df = Re tr(G_H^dag dH),
/// writes df/dp for the d*d real parameters (layout as above).
inline void hermitian_param_grad(const Matrix& gh, double* out) {
    const Eigen::Index d = gh.rows();
    Eigen::Index idx = 0;
    for (Eigen::Index i = 0; i < d; ++i) out[idx++] = std::real(gh(i, i));
    for (Eigen::Index i = 0; i < d; ++i)
        for (Eigen::Index j = i + 1; j < d; ++j) {
            out[idx++] = std::real(gh(i, j)) + std::real(gh(j, i));
            out[idx++] = std::imag(gh(i, j)) - std::imag(gh(j, i));
        }
}

inline constexpr Eigen::Index unitary_param_count(Eigen::Index d) { return d * d; }

/// Softmax over n-1 free logits (last logit pinned to 0).
inline std::vector<double> simplex_weights(const double* logits, std::size_t n) {
    std::vector<double> w(n);
    double mx = 0;
    for (std::size_t i = 0; i + 1 < n; ++i) mx = std::max(mx, logits[i]);
    double sum = 0;
    for (std::size_t i = 0; i < n; ++i) {
        w[i] = std::exp((i + 1 < n ? logits[i] : 0.0) - mx);
        sum += w[i];
    }
    for (auto& x : w) x /= sum;
    return w;
}

}  // namespace superkit
