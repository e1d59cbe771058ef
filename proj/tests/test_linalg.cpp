// superkit: simulation of qubit channels and superchannels
// SPDX-License-Identifier: Apache-2.0
#include <catch2/catch_amalgamated.hpp>

#include "superkit/linalg.hpp"
#include "superkit/optim.hpp"

using namespace superkit;

TEST_CASE("pauli matrices square to identity and anticommute") {
    for (int i = 1; i < 4; ++i) {
        REQUIRE(max_abs(pauli(i) * pauli(i) - identity(2)) < 1e-15);
        for (int j = i + 1; j < 4; ++j)
            REQUIRE(max_abs(pauli(i) * pauli(j) + pauli(j) * pauli(i)) < 1e-15);
    }
    REQUIRE(max_abs(pauli(1) * pauli(2) - Complex(0, 1) * pauli(3)) < 1e-15);
}

TEST_CASE("tensor product dimensions and values") {
    const Matrix t = tensor_product(pauli(1), pauli(3));
    REQUIRE(t.rows() == 4);
    REQUIRE(t(0, 2) == Complex(1, 0));
    REQUIRE(t(1, 3) == Complex(-1, 0));
    REQUIRE(max_abs(tensor_product(pauli(1), pauli(2), pauli(3)) -
                    tensor_product(tensor_product(pauli(1), pauli(2)), pauli(3))) < 1e-15);
}

TEST_CASE("partial trace recovers marginals of product states") {
    std::mt19937_64 rng(11);
    const Matrix u = haar_random_unitary(2, rng);
    const Matrix a = u * Matrix(Eigen::Vector2cd(0.7, 0.3).asDiagonal()) * u.adjoint();
    Matrix b = Matrix::Zero(3, 3);
    b(0, 0) = 0.5;
    b(1, 1) = 0.25;
    b(2, 2) = 0.25;
    const Matrix ab = tensor_product(a, b);
    REQUIRE(max_abs(partial_trace(ab, {2, 3}, {0}) - a) < 1e-14);
    REQUIRE(max_abs(partial_trace(ab, {2, 3}, {1}) - b) < 1e-14);
    REQUIRE(std::abs(partial_trace(ab, {2, 3}, {0, 1}).trace() - Complex(1, 0)) < 1e-14);
}

TEST_CASE("trace distance is a metric on test matrices") {
    const Matrix z0 = 0.5 * (identity(2) + pauli(3));
    const Matrix z1 = 0.5 * (identity(2) - pauli(3));
    REQUIRE(trace_distance_matrices(z0, z0) < 1e-15);
    REQUIRE(trace_distance_matrices(z0, z1) == Catch::Approx(1.0).margin(1e-12));
    const Matrix x0 = 0.5 * (identity(2) + pauli(1));
    REQUIRE(trace_distance_matrices(z0, x0) ==
            Catch::Approx(1.0 / std::sqrt(2.0)).margin(1e-12));
}

TEST_CASE("exp_i_hermitian matches closed forms and stays unitary") {
    // exp(i theta sigma_z) = diag(e^{i theta}, e^{-i theta})
    const double theta = 0.37;
    const Matrix u = exp_i_hermitian(theta * pauli(3));
    REQUIRE(max_abs(u - Matrix((Eigen::Vector2cd() << std::polar(1.0, theta),
                                std::polar(1.0, -theta))
                                   .finished()
                                   .asDiagonal())) < 1e-14);
    std::mt19937_64 rng(5);
    for (int t = 0; t < 5; ++t) {
        const Matrix h = [&] {
            Matrix g(4, 4);
            std::normal_distribution<double> gauss;
            for (int r = 0; r < 4; ++r)
                for (int c = 0; c < 4; ++c) g(r, c) = Complex(gauss(rng), gauss(rng));
            return Matrix(0.5 * (g + g.adjoint().eval()));
        }();
        REQUIRE(is_unitary(exp_i_hermitian(h), 1e-12));
    }
}

TEST_CASE("ExpIHermitian directional derivative matches finite differences") {
    std::mt19937_64 rng(17);
    std::normal_distribution<double> gauss;
    auto rand_herm = [&](Eigen::Index d) {
        Matrix g(d, d);
        for (Eigen::Index r = 0; r < d; ++r)
            for (Eigen::Index c = 0; c < d; ++c) g(r, c) = Complex(gauss(rng), gauss(rng));
        return Matrix(0.5 * (g + g.adjoint().eval()));
    };
    const Matrix h = rand_herm(4), dh = rand_herm(4);
    const ExpIHermitian e(h);
    const double eps = 1e-6;
    const Matrix fd =
        (exp_i_hermitian(h + eps * dh) - exp_i_hermitian(h - eps * dh)) / (2 * eps);
    REQUIRE(max_abs(e.forward(dh) - fd) < 1e-8);

    // pullback is the adjoint of forward under the Re-trace inner product
    const Matrix gu = rand_herm(4);
    const double lhs = (gu.adjoint() * e.forward(dh)).trace().real();
    const double rhs = (e.pullback(gu).adjoint() * dh).trace().real();
    REQUIRE(lhs == Catch::Approx(rhs).margin(1e-10));
}

TEST_CASE("haar_random_unitary is unitary and seed-deterministic") {
    std::mt19937_64 a(42), b(42), c(43);
    const Matrix ua = haar_random_unitary(8, a);
    REQUIRE(is_unitary(ua, 1e-12));
    REQUIRE(max_abs(ua - haar_random_unitary(8, b)) == 0.0);
    REQUIRE(max_abs(ua - haar_random_unitary(8, c)) > 1e-3);
}

TEST_CASE("project_unitary restores rounded unitaries") {
    std::mt19937_64 rng(3);
    Matrix u = haar_random_unitary(4, rng);
    Matrix rounded = u;
    for (int r = 0; r < 4; ++r)
        for (int c = 0; c < 4; ++c)
            rounded(r, c) = Complex(std::round(u(r, c).real() * 1e4) / 1e4,
                                    std::round(u(r, c).imag() * 1e4) / 1e4);
    const Matrix fixed = project_unitary(rounded);
    REQUIRE(is_unitary(fixed, 1e-12));
    REQUIRE(max_abs(fixed - rounded) < 5e-4);
}

TEST_CASE("unitary_from_params is surjective onto test targets") {
    // exp(i H) with H = (pi/2)(1 - sigma_x) gives sigma_x up to global phase i
    std::vector<double> p(4, 0.0);
    p[0] = p[1] = kPi / 2;   // diagonal
    p[2] = -kPi / 2;         // re of upper off-diagonal
    const Matrix u = unitary_from_params(p.data(), 2);
    REQUIRE(max_abs(u * u.adjoint() - identity(2)) < 1e-12);
    const Complex phase = u(0, 1);
    REQUIRE(max_abs(u - phase * pauli(1)) < 1e-12);
}

TEST_CASE("hermitian_param_grad is the adjoint of hermitian_from_params") {
    std::mt19937_64 rng(23);
    std::normal_distribution<double> gauss;
    const Eigen::Index d = 3;
    std::vector<double> p(std::size_t(d * d));
    for (auto& v : p) v = gauss(rng);
    Matrix gh(d, d);
    for (Eigen::Index r = 0; r < d; ++r)
        for (Eigen::Index c = 0; c < d; ++c) gh(r, c) = Complex(gauss(rng), gauss(rng));

    std::vector<double> grad(p.size());
    hermitian_param_grad(gh, grad.data());
    // directional check: sum_k grad_k dp_k == Re tr(gh^dag dH)
    std::vector<double> dp(p.size());
    for (auto& v : dp) v = gauss(rng);
    std::vector<double> shifted = p;
    const double eps = 1e-7;
    for (std::size_t i = 0; i < p.size(); ++i) shifted[i] += eps * dp[i];
    const Matrix dh =
        (hermitian_from_params(shifted.data(), d) - hermitian_from_params(p.data(), d)) / eps;
    double lhs = 0;
    for (std::size_t i = 0; i < p.size(); ++i) lhs += grad[i] * dp[i];
    REQUIRE(lhs == Catch::Approx((gh.adjoint() * dh).trace().real()).margin(1e-6));
}

TEST_CASE("minimize_adam drives a quadratic to its minimum") {
    auto f = [](const std::vector<double>& x, std::vector<double>& g) {
        double v = 0;
        for (std::size_t i = 0; i < x.size(); ++i) {
            const double d = x[i] - double(i);
            v += d * d;
            g[i] = 2 * d;
        }
        return v;
    };
    OptimConfig cfg;
    cfg.max_iters = 3000;
    cfg.tolerance = 1e-12;
    cfg.learning_rate = 0.05;
    const OptimResult res = minimize_adam(f, {5.0, -3.0, 7.0}, cfg);
    REQUIRE(res.converged);
    for (std::size_t i = 0; i < 3; ++i)
        REQUIRE(res.x[i] == Catch::Approx(double(i)).margin(1e-5));
}

TEST_CASE("minimize_nelder_mead solves a shifted quadratic without gradients") {
    auto f = [](const std::vector<double>& x) {
        return std::pow(x[0] - 1.5, 2) + 4 * std::pow(x[1] + 0.25, 2);
    };
    OptimConfig cfg;
    cfg.max_iters = 5000;
    cfg.tolerance = 1e-12;
    const OptimResult res = minimize_nelder_mead(f, {0.5, 0.5}, cfg);
    REQUIRE(res.value < 1e-8);
    REQUIRE(res.x[0] == Catch::Approx(1.5).margin(1e-3));
    REQUIRE(res.x[1] == Catch::Approx(-0.25).margin(1e-3));
}

TEST_CASE("simplex_weights are positive and normalized") {
    // n weights from n-1 logits; the last weight carries an implicit logit 0
    const double logits[2] = {0.3, -1.2};
    const auto w = simplex_weights(logits, 3);
    REQUIRE(w.size() == 3);
    double sum = 0;
    for (double v : w) {
        REQUIRE(v > 0);
        sum += v;
    }
    REQUIRE(sum == Catch::Approx(1.0).margin(1e-14));
    REQUIRE(w[0] > w[2]);  // e^0.3 > e^0
    REQUIRE(w[2] > w[1]);  // e^0 > e^-1.2
}
