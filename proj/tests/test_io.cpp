// superkit: simulation of qubit channels and superchannels
// SPDX-License-Identifier: Apache-2.0
#include <catch2/catch_amalgamated.hpp>

#include "superkit/io.hpp"

using namespace superkit;

namespace {

std::filesystem::path temp_dir() {
    const auto dir = std::filesystem::temp_directory_path() / "superkit_io_test";
    std::filesystem::create_directories(dir);
    return dir;
}

}  // namespace

TEST_CASE("format_double round-trips doubles exactly") {
    for (double v : {0.0, 1.0 / 3.0, -1707.1, 1e-17, 123456789.123456789}) {
        const std::string s = io::format_double(v);
        REQUIRE(std::stod(s) == v);
    }
}

TEST_CASE("matrix json round trip is exact") {
    std::mt19937_64 rng(2);
    const Matrix u = haar_random_unitary(4, rng);
    const Matrix back = io::matrix_from_json(io::matrix_to_json(u));
    REQUIRE(max_abs(u - back) == 0.0);
    // and through a file
    const auto path = temp_dir() / "u.json";
    io::write_json(path, io::matrix_to_json(u));
    REQUIRE(max_abs(u - io::matrix_from_json(io::read_json(path))) < 1e-15);
}

TEST_CASE("channel json round trip") {
    Matrix k0 = identity(2), k1 = Matrix::Zero(2, 2);
    k0(1, 1) = std::sqrt(0.7);
    k1(0, 1) = std::sqrt(0.3);
    const KrausChannel ch(2, 2, {k0, k1});
    const KrausChannel back = io::channel_from_json(io::channel_to_json(ch));
    REQUIRE(back.kraus().size() == 2);
    REQUIRE(max_abs(back.kraus()[0] - k0) == 0.0);
    REQUIRE(max_abs(back.kraus()[1] - k1) == 0.0);
}

TEST_CASE("pulse json matches the documented schema and round-trips") {
    ControlPulse p = zero_pulse(3, 1e-4, 2);
    p.amplitudes[1][0] = {12.5, -3.25};
    const io::json j = io::pulse_to_json(p);
    REQUIRE(j.at("n_slices") == 3);
    REQUIRE(j.at("slice_duration_s") == 1e-4);
    REQUIRE(j.at("amplitudes_hz")[1][0][0] == 12.5);
    const ControlPulse back = io::pulse_from_json(j);
    REQUIRE(back.amplitudes[1][0][1] == -3.25);
    REQUIRE(back.total_duration() == Catch::Approx(3e-4));
}

TEST_CASE("spin system json round trip") {
    const SpinSystem tca = trans_crotonic_acid();
    const SpinSystem back = io::spin_system_from_json(io::spin_system_to_json(tca));
    REQUIRE(back.n_spins == 4);
    REQUIRE(back.chemical_shifts_hz == tca.chemical_shifts_hz);
    REQUIRE(back.j_couplings_hz == tca.j_couplings_hz);
}

TEST_CASE("decomposition json round trip") {
    ConvexDecomposition d;
    d.weights = {0.25, 0.75};
    d.components = {random_gen_extreme(1), random_gen_extreme(2)};
    d.achieved_distance = 1.5e-4;
    d.converged = true;
    d.seed = 42;
    const ConvexDecomposition back = io::decomposition_from_json(io::decomposition_to_json(d));
    REQUIRE(back.weights == d.weights);
    REQUIRE(back.seed == 42);
    REQUIRE(back.converged);
    REQUIRE(max_abs(back.components[1].w() - d.components[1].w()) == 0.0);
}

TEST_CASE("write_csv emits header plus one line per row") {
    const auto path = temp_dir() / "t.csv";
    io::write_csv(path, "a,b", {{"1", "2"}, {"3", "4"}});
    std::ifstream in(path);
    std::string line;
    std::getline(in, line);
    REQUIRE(line == "a,b");
    std::getline(in, line);
    REQUIRE(line == "1,2");
    std::getline(in, line);
    REQUIRE(line == "3,4");
    REQUIRE_FALSE(std::getline(in, line));
}

TEST_CASE("bundle_hash distinguishes perturbed bundles and is stable") {
    std::mt19937_64 rng(5);
    const Matrix u = haar_random_unitary(4, rng);
    Matrix v = u;
    v(2, 3) += Complex(1e-12, 0);
    REQUIRE(io::bundle_hash({u}) == io::bundle_hash({u}));
    REQUIRE(io::bundle_hash({u}) != io::bundle_hash({v}));
    REQUIRE(io::bundle_hash({u, v}) != io::bundle_hash({v, u}));
}

TEST_CASE("write_text fails loudly on an unwritable path") {
    REQUIRE_THROWS_AS(io::write_text("/nonexistent_dir_xyz/out.txt", "x"),
                      std::runtime_error);
}
