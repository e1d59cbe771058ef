// superkit: simulation of qubit channels and superchannels
// SPDX-License-Identifier: Apache-2.0
#include <catch2/catch_amalgamated.hpp>

#include "superkit/qec_ad.hpp"

using namespace superkit;

TEST_CASE("ad_kraus endpoints and trace preservation") {
    // lambda = 0: identity after pruning the zero operator
    const KrausChannel id = ad_kraus(0.0);
    REQUIRE(id.kraus().size() == 1);
    REQUIRE(max_abs(id.kraus()[0] - identity(2)) < 1e-15);
    // lambda = 1: everything decays to |0><0|
    const KrausChannel full = ad_kraus(1.0);
    const DensityMatrix out = apply_channel(full, basis_state(Basis::Zbar).density());
    REQUIRE(out.entries()(0, 0).real() == Catch::Approx(1.0).margin(1e-14));
    // TP across a grid
    for (int i = 0; i <= 100; ++i) {
        const KrausChannel ch = ad_kraus(i / 100.0);
        Matrix sum = Matrix::Zero(2, 2);
        for (const auto& k : ch.kraus()) sum += k.adjoint() * k;
        REQUIRE(max_abs(sum - identity(2)) < 1e-12);
    }
    REQUIRE_THROWS_AS(ad_kraus(-0.1), std::invalid_argument);
    REQUIRE_THROWS_AS(ad_kraus(1.1), std::invalid_argument);
}

TEST_CASE("entanglement_fidelity oracle values") {
    REQUIRE(entanglement_fidelity(KrausChannel::identity_channel(2)) ==
            Catch::Approx(1.0).margin(1e-14));
    // uncorrected AD: ((1 + sqrt(1-lambda))/2)^2, 0.81 at lambda = 0.36
    for (double lam : {0.0, 0.2, 0.36, 0.8}) {
        const double expect = std::pow((1 + std::sqrt(1 - lam)) / 2, 2);
        REQUIRE(entanglement_fidelity(ad_kraus(lam)) ==
                Catch::Approx(expect).margin(1e-12));
        REQUIRE(ad_uncorrected_fidelity(lam) == Catch::Approx(expect).margin(1e-14));
    }
    REQUIRE(ad_uncorrected_fidelity(0.36) == Catch::Approx(0.81).margin(1e-12));
    // completely depolarizing channel: 1/4
    std::vector<Matrix> dep;
    for (int i = 0; i < 4; ++i) dep.push_back(0.5 * pauli(i));
    REQUIRE(entanglement_fidelity(KrausChannel(2, 2, dep)) ==
            Catch::Approx(0.25).margin(1e-14));
    // cross-check the |Tr K|^2 formula against the direct Choi overlap
    std::mt19937_64 rng(2);
    const Matrix u = haar_random_unitary(2, rng);
    const KrausChannel uch = KrausChannel::unitary(u);
    const ChoiState omega = channel_to_choi(uch);
    const Vector phi = max_entangled(2);
    const double direct = (phi.adjoint() * omega.entries() * phi).value().real();
    REQUIRE(entanglement_fidelity(uch) == Catch::Approx(direct).margin(1e-12));
}

TEST_CASE("corrected_channel reductions") {
    const EbitCode trivial(identity(8), identity(8), {1.0, 0.0});
    // lambda = 0: identity channel regardless of code
    REQUIRE(entanglement_fidelity(corrected_channel(trivial, 0.0)) ==
            Catch::Approx(1.0).margin(1e-12));
    // trivial code with noise on the state-holding qubit = bare AD
    for (double lam : {0.1, 0.36, 0.6})
        REQUIRE(entanglement_fidelity(corrected_channel(trivial, lam)) ==
                Catch::Approx(ad_uncorrected_fidelity(lam)).margin(1e-12));
}

TEST_CASE("mixture noise model averages the single-location fidelities") {
    std::mt19937_64 rng(7);
    const Matrix enc = haar_random_unitary(8, rng);
    const Matrix dec = haar_random_unitary(8, rng);
    for (double lam : {0.15, 0.4}) {
        const double f1 =
            entanglement_fidelity(corrected_channel(EbitCode(enc, dec, {1.0, 0.0}), lam));
        const double f2 =
            entanglement_fidelity(corrected_channel(EbitCode(enc, dec, {0.0, 1.0}), lam));
        const double fm =
            entanglement_fidelity(corrected_channel(EbitCode(enc, dec, {0.5, 0.5}), lam));
        REQUIRE(fm == Catch::Approx(0.5 * (f1 + f2)).margin(1e-12));
    }
}

TEST_CASE("corrected_channel is CPTP for random codes") {
    std::mt19937_64 rng(17);
    for (int t = 0; t < 5; ++t) {
        const EbitCode code(haar_random_unitary(8, rng), haar_random_unitary(8, rng));
        for (double lam : {0.0, 0.25, 0.5, 1.0})
            REQUIRE_NOTHROW(corrected_channel(code, lam));  // ctor enforces TP to 1e-9
    }
}

TEST_CASE("qec objective gradient matches finite differences") {
    std::mt19937_64 rng(29);
    std::normal_distribution<double> gauss(0.0, 0.4);
    std::vector<double> p(128);
    for (auto& v : p) v = gauss(rng);
    const NoiseModel noise;
    const double lam = 0.3;
    std::vector<double> grad;
    const double f0 = detail::qec_objective_with_grad(p, lam, noise, grad);
    REQUIRE(f0 > 0);
    const double eps = 1e-6;
    for (std::size_t i : {std::size_t(0), std::size_t(17), std::size_t(64), std::size_t(127)}) {
        std::vector<double> plus = p, minus = p;
        plus[i] += eps;
        minus[i] -= eps;
        std::vector<double> dummy;
        const double fd = (detail::qec_objective_with_grad(plus, lam, noise, dummy) -
                           detail::qec_objective_with_grad(minus, lam, noise, dummy)) /
                          (2 * eps);
        REQUIRE(grad[i] == Catch::Approx(fd).margin(1e-5));
    }
}

TEST_CASE("optimize_code beats the uncorrected baseline") {
    QecConfig cfg;
    cfg.seed = 0;
    const OptimizedCode at0 = optimize_code(0.0, cfg);
    REQUIRE(at0.achieved_fidelity == Catch::Approx(1.0).margin(1e-6));
    for (double lam : {0.1, 0.2, 0.3}) {
        const OptimizedCode opt = optimize_code(lam, cfg);
        REQUIRE(opt.achieved_fidelity > ad_uncorrected_fidelity(lam));
        // never below the trivial-code feasible point
        const EbitCode trivial(identity(8), identity(8));
        REQUIRE(opt.achieved_fidelity >=
                entanglement_fidelity(corrected_channel(trivial, lam)) - 1e-9);
    }
}

TEST_CASE("fidelity_curve rows and dominance") {
    QecConfig cfg;
    cfg.seed = 0;
    const auto rows = fidelity_curve({0.0, 0.2, 0.36}, cfg);
    REQUIRE(rows.size() == 3);
    REQUIRE(rows[0].f_corrected == Catch::Approx(1.0).margin(1e-6));
    REQUIRE(rows[0].f_uncorrected == Catch::Approx(1.0).margin(1e-12));
    REQUIRE(rows[2].f_uncorrected == Catch::Approx(0.81).margin(1e-12));
    for (const auto& r : rows) REQUIRE(r.f_corrected - r.f_uncorrected >= -1e-6);
}

TEST_CASE("optimize_code is deterministic for a fixed seed") {
    QecConfig cfg;
    cfg.seed = 5;
    cfg.max_iters = 100;
    const OptimizedCode a = optimize_code(0.25, cfg);
    const OptimizedCode b = optimize_code(0.25, cfg);
    REQUIRE(a.achieved_fidelity == b.achieved_fidelity);
    REQUIRE(max_abs(a.code.encoder - b.code.encoder) == 0.0);
    REQUIRE(max_abs(a.code.decoder - b.code.decoder) == 0.0);
}
