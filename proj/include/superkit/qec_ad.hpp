// superkit: simulation of qubit channels and superchannels
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "superkit/channels.hpp"
#include "superkit/optim.hpp"

namespace superkit {

/// Amplitude-damping Kraus pair K0 = diag(1, sqrt(1-lambda)),
/// K1 = sqrt(lambda) |0><1|; operators with vanishing norm are pruned.
inline KrausChannel ad_kraus(double lambda) {
    if (lambda < 0 || lambda > 1)
        throw std::invalid_argument("ad_kraus: lambda must be in [0, 1]");
    Matrix k0 = Matrix::Zero(2, 2), k1 = Matrix::Zero(2, 2);
    k0(0, 0) = 1;
    k0(1, 1) = std::sqrt(1.0 - lambda);
    k1(0, 1) = std::sqrt(lambda);
    std::vector<Matrix> ops;
    for (const Matrix& k : {k0, k1})
        if (max_abs(k) > 1e-14) ops.push_back(k);
    return KrausChannel(2, 2, std::move(ops));
}

/// F_e = <omega|(ch (x) 1)(|omega><omega|)|omega> = sum_i |Tr K_i|^2 / 4.
inline double entanglement_fidelity(const KrausChannel& ch) {
    if (ch.dim_in() != 2 || ch.dim_out() != 2)
        throw std::invalid_argument("entanglement_fidelity: qubit channels only");
    double f = 0;
    for (const auto& k : ch.kraus()) f += std::norm(k.trace()) / 4.0;
    return f;
}

/// Entanglement fidelity of the bare AD channel, ((1 + sqrt(1-lambda)) / 2)^2.
inline double ad_uncorrected_fidelity(double lambda) {
    return std::pow((1.0 + std::sqrt(1.0 - lambda)) / 2.0, 2);
}

/// Damping locations for the 3-qubit code: the state-carrying qubit 1 and
/// qubit 2 are exposed to noise with the given probabilities; qubit 3 (the
/// ebit half) is always noise-free.
struct NoiseModel {
    double p_first = 0.5;
    double p_second = 0.5;

    void check() const {
        if (p_first < 0 || p_second < 0 || std::abs(p_first + p_second - 1.0) > 1e-12)
            throw std::invalid_argument("NoiseModel: probabilities must be >= 0 and sum to 1");
    }
};

/// Ebit-assisted 3-qubit code: free encoder/decoder unitaries around the
/// noisy block. Qubit ordering is big-endian with the logical qubit first.
struct EbitCode {
    Matrix encoder;
    Matrix decoder;
    NoiseModel noise;

    EbitCode(Matrix e, Matrix d, NoiseModel n = {})
        : encoder(std::move(e)), decoder(std::move(d)), noise(n) {
        if (encoder.rows() != 8 || decoder.rows() != 8 || !is_unitary(encoder) ||
            !is_unitary(decoder))
            throw std::invalid_argument("EbitCode: encoder/decoder must be 8x8 unitaries");
        noise.check();
    }
};

namespace detail {

/// AD Kraus operator on qubit `pos` (0 or 1) of the 3-qubit register.
inline Matrix ad_op_at(const Matrix& k, int pos) {
    return pos == 0 ? tensor_product(k, identity(4))
                    : tensor_product(identity(2), k, identity(2));
}

}  // namespace detail

/// Effective logical channel: ancillas in |00>, encode, AD on qubit 1 or 2
/// per the noise model, decode, trace qubits 2-3.
inline KrausChannel corrected_channel(const EbitCode& code, double lambda) {
    const KrausChannel ad = ad_kraus(lambda);
    std::vector<Matrix> out;
    const double probs[2] = {code.noise.p_first, code.noise.p_second};
    for (int pos = 0; pos < 2; ++pos) {
        if (probs[pos] == 0) continue;
        const double scale = std::sqrt(probs[pos]);
        for (const auto& k : ad.kraus()) {
            const Matrix m = code.decoder * detail::ad_op_at(k, pos) * code.encoder;
            for (int o = 0; o < 4; ++o) {
                Matrix l(2, 2);
                for (int s = 0; s < 2; ++s)
                    for (int t = 0; t < 2; ++t) l(s, t) = scale * m(s * 4 + o, t * 4);
                if (max_abs(l) > 1e-14) out.push_back(std::move(l));
            }
        }
    }
    return KrausChannel(2, 2, std::move(out));
}

namespace detail {

/// 1 - F_e of the corrected channel, with the analytic gradient over the
/// 2 x 64 encoder/decoder generator parameters.
inline double qec_objective_with_grad(const std::vector<double>& p, double lambda,
                                      const NoiseModel& noise, std::vector<double>& grad) {
    grad.assign(128, 0.0);
    const ExpIHermitian ee(hermitian_from_params(p.data(), 8));
    const ExpIHermitian ed(hermitian_from_params(p.data() + 64, 8));
    const Matrix& enc = ee.value();
    const Matrix& dec = ed.value();
    const KrausChannel ad = ad_kraus(lambda);

    double fe = 0;
    Matrix ge = Matrix::Zero(8, 8), gd = Matrix::Zero(8, 8);
    const double probs[2] = {noise.p_first, noise.p_second};
    for (int pos = 0; pos < 2; ++pos) {
        if (probs[pos] == 0) continue;
        for (const auto& k : ad.kraus()) {
            const Matrix a = ad_op_at(k, pos);
            const Matrix m = dec * a * enc;
            Matrix gm = Matrix::Zero(8, 8);
            for (int o = 0; o < 4; ++o) {
                Complex t = 0;
                for (int s = 0; s < 2; ++s) t += m(s * 4 + o, s * 4);
                fe += probs[pos] * std::norm(t) / 4.0;
                // maximizing F_e = minimizing 1 - F_e: cotangent of M carries
                // the negated coefficient p/2 * t at the traced entries
                for (int s = 0; s < 2; ++s) gm(s * 4 + o, s * 4) -= 0.5 * probs[pos] * t;
            }
            ge += (dec * a).adjoint() * gm;
            gd += gm * (a * enc).adjoint();
        }
    }
    hermitian_param_grad(ee.pullback(ge), grad.data());
    hermitian_param_grad(ed.pullback(gd), grad.data() + 64);
    return 1.0 - fe;
}

}  // namespace detail

struct QecConfig {
    int restarts = 3;
    int max_iters = 600;
    double tolerance = 1e-6;  // on 1 - F_e
    double learning_rate = 0.08;
    double lr_decay = 5e-3;
    std::uint64_t seed = 0;
};

struct OptimizedCode {
    EbitCode code;
    double achieved_fidelity = 0;
    bool converged = false;
};

/// Multi-start search for the code maximizing F_e under the given noise
/// model. Restart 0 starts from the identity code, so the result never falls
/// below the trivial-code baseline.
inline OptimizedCode optimize_code(double lambda, const QecConfig& cfg = {},
                                   const NoiseModel& noise = {}) {
    noise.check();
    auto objective = [&](const std::vector<double>& p, std::vector<double>& g) {
        return detail::qec_objective_with_grad(p, lambda, noise, g);
    };

    std::vector<double> best_x;
    double best_obj = std::numeric_limits<double>::infinity();
    bool converged = false;
    for (int r = 0; r < cfg.restarts; ++r) {
        std::vector<double> x0(128, 0.0);
        if (r > 0) {
            std::mt19937_64 rng(cfg.seed * 2654435761ULL + std::uint64_t(r));
            std::normal_distribution<double> gauss(0.0, 0.5);
            for (auto& v : x0) v = gauss(rng);
        }
        OptimConfig oc;
        oc.max_iters = cfg.max_iters;
        oc.tolerance = cfg.tolerance;
        oc.learning_rate = cfg.learning_rate;
        oc.lr_decay = cfg.lr_decay;
        OptimResult res = minimize_adam(objective, std::move(x0), oc);
        if (res.value < best_obj) {
            best_obj = res.value;
            best_x = res.x;
            converged = res.converged;
        }
        if (converged) break;
    }

    EbitCode code(unitary_from_params(best_x.data(), 8),
                  unitary_from_params(best_x.data() + 64, 8), noise);
    OptimizedCode out{std::move(code), 1.0 - best_obj, converged};
    return out;
}

struct FidelityPoint {
    double lambda = 0;
    double f_corrected = 0;
    double f_uncorrected = 0;
    bool converged = false;
};

/// Corrected/uncorrected entanglement-fidelity table over a lambda grid.
inline std::vector<FidelityPoint> fidelity_curve(const std::vector<double>& lambdas,
                                                 const QecConfig& cfg = {},
                                                 const NoiseModel& noise = {}) {
    std::vector<FidelityPoint> rows;
    rows.reserve(lambdas.size());
    for (std::size_t i = 0; i < lambdas.size(); ++i) {
        QecConfig point = cfg;
        point.seed = cfg.seed + i;
        const auto opt = optimize_code(lambdas[i], point, noise);
        rows.push_back({lambdas[i], opt.achieved_fidelity,
                        ad_uncorrected_fidelity(lambdas[i]), opt.converged});
    }
    return rows;
}

}  // namespace superkit
