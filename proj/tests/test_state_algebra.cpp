#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "qgrid/state_algebra.hpp"
#include "qgrid/validation/suites.hpp"

using namespace qgrid;

TEST_CASE("werner parameter maps") {
    auto w = werner_from_fidelity(1.0);
    CHECK(w.weight == doctest::Approx(1.0));
    w = werner_from_fidelity(0.25);
    CHECK(w.weight == doctest::Approx(0.0));
    w = werner_from_weight(0.8);
    CHECK(w.fidelity == doctest::Approx(0.85));
    CHECK_THROWS_AS(werner_from_fidelity(0.2), std::domain_error);
    CHECK_THROWS_AS(werner_from_fidelity(1.01), std::domain_error);
    CHECK_THROWS_AS(werner_from_weight(-0.1), std::domain_error);
}

TEST_CASE("state constructor invariants") {
    CHECK_THROWS_AS(GHZDiagonalState({0, 1}, {0.5, 0.5, 0.5, 0.5}),
                    std::domain_error);
    CHECK_THROWS_AS(GHZDiagonalState({0, 1}, {1.0, 0.0, 0.0, -1e-6}),
                    std::domain_error);
    CHECK_THROWS_AS(GHZDiagonalState({0, 1}, {1.0, 0.0}),
                    std::invalid_argument);
    CHECK_THROWS_AS(GHZDiagonalState({0, 0}, {1.0, 0.0, 0.0, 0.0}),
                    std::invalid_argument);
    // A tiny negative value is clamped, not rejected.
    GHZDiagonalState s({0, 1}, {1.0, 5e-13, -5e-13, 0.0});
    CHECK(s.coeffs()[2] == 0.0);
    CHECK(s.coeff(0, 0) == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("bell pair labels") {
    auto s = bell_from_werner(werner_from_fidelity(0.7), 4, 9);
    CHECK(s.coeff(0, 0) == doctest::Approx(0.7));
    CHECK(s.coeff(0, 1) == doctest::Approx(0.1));
    CHECK(s.coeff(1, 0) == doctest::Approx(0.1));
    CHECK(s.coeff(1, 1) == doctest::Approx(0.1));
    CHECK(s.position_of(9) == 1);
    CHECK_THROWS_AS(s.position_of(5), std::invalid_argument);
}

TEST_CASE("three-arm swap closed form") {
    auto s = ghz_swap_equal(3, 0.9);
    CHECK(s.coeff(0, 0) == doctest::Approx(0.79325).epsilon(1e-12));
    CHECK(s.coeff(1, 0) == doctest::Approx(0.06425).epsilon(1e-12));
    for (int z = 0; z < 2; ++z)
        for (std::uint32_t x = 1; x < 4; ++x)
            CHECK(s.coeff(z, x) == doctest::Approx(0.02375).epsilon(1e-12));
}

TEST_CASE("two-arm swap reduces to a Werner pair") {
    auto s = ghz_swap_equal(2, 0.8);
    CHECK(s.coeff(0, 0) == doctest::Approx(0.73).epsilon(1e-12));
    CHECK(s.coeff(0, 1) == doctest::Approx(0.09).epsilon(1e-12));
    CHECK(s.coeff(1, 0) == doctest::Approx(0.09).epsilon(1e-12));
    CHECK(s.coeff(1, 1) == doctest::Approx(0.09).epsilon(1e-12));
}

TEST_CASE("perfect links swap to a pure GHZ state") {
    for (int n = 2; n <= 5; ++n) {
        auto s = ghz_swap_equal(n, 1.0);
        CHECK(s.coeff(0, 0) == doctest::Approx(1.0));
    }
}

TEST_CASE("mixed swap agrees with the equal-weight closed form") {
    for (int n = 2; n <= 4; ++n) {
        for (double w : {0.6, 0.95}) {
            auto a = ghz_swap_equal(n, w);
            auto b = ghz_swap_mixed(std::vector<double>(n, w));
            for (std::size_t i = 0; i < a.coeffs().size(); ++i)
                CHECK(a.coeffs()[i] ==
                      doctest::Approx(b.coeffs()[i]).epsilon(1e-12));
        }
    }
}

TEST_CASE("two-arm mixed swap multiplies weights") {
    auto s = ghz_swap_mixed({0.9, 0.7});
    CHECK(s.coeff(0, 0) == doctest::Approx((3.0 * 0.63 + 1.0) / 4.0));
}

TEST_CASE("x measurement of the anchor") {
    auto base = ghz_swap_equal(4, 0.85);
    auto plus = x_measure(base, 0, 0);
    CHECK(plus.num_qubits() == 3);
    CHECK(plus.qubit_ids() == std::vector<int>{1, 2, 3});
    CHECK(plus.coeff(0, 0) == doctest::Approx(0.656940625).epsilon(1e-12));
    CHECK(plus.coeff(1, 0) == doctest::Approx(0.134934375).epsilon(1e-12));
    for (int z = 0; z < 2; ++z)
        for (std::uint32_t x = 1; x < 4; ++x)
            CHECK(plus.coeff(z, x) ==
                  doctest::Approx(0.0346875).epsilon(1e-12));
    CHECK(plus.pauli_frame().empty());

    // The minus outcome is the same state up to a recorded Z correction.
    auto minus = x_measure(base, 0, 1);
    for (std::size_t i = 0; i < plus.coeffs().size(); ++i)
        CHECK(minus.coeffs()[i] == doctest::Approx(plus.coeffs()[i]));
    CHECK(minus.pauli_frame().at(1).z);
    auto folded = minus.with_frame_applied();
    CHECK(folded.coeff(1, 0) == doctest::Approx(0.656940625).epsilon(1e-12));
    CHECK(folded.coeff(0, 0) == doctest::Approx(0.134934375).epsilon(1e-12));
}

TEST_CASE("x measurement domain") {
    auto pair = bell_from_werner(werner_from_fidelity(0.9), 0, 1);
    CHECK_THROWS_AS(x_measure(pair, 0, 0), std::domain_error);
    auto s = ghz_swap_equal(3, 0.9);
    CHECK_THROWS_AS(x_measure(s, 3, 0), std::invalid_argument);
    CHECK_THROWS_AS(x_measure(s, 0, 2), std::invalid_argument);
}

TEST_CASE("chain merge multiplies Werner weights") {
    auto l1 = bell_from_werner(werner_from_weight(0.9), 0, 1);
    auto l2 = bell_from_werner(werner_from_weight(0.7), 1, 2);
    auto merged = merge_swap({&l1, &l2}, {1});
    CHECK(merged.num_qubits() == 2);
    CHECK(merged.qubit_ids() == std::vector<int>{0, 2});
    CHECK(merged.coeff(0, 0) == doctest::Approx(0.7225).epsilon(1e-12));
}

TEST_CASE("merge rejects fragments without a node memory") {
    auto l1 = bell_from_werner(werner_from_weight(0.9), 0, 1);
    auto l2 = bell_from_werner(werner_from_weight(0.7), 2, 3);
    CHECK_THROWS_AS(merge_swap({&l1, &l2}, {1}), std::invalid_argument);
}

TEST_CASE("coherent information") {
    auto perfect = bell_from_werner(werner_from_fidelity(1.0), 0, 1);
    CHECK(coherent_information(perfect) == doctest::Approx(1.0));
    auto noisy = bell_from_werner(werner_from_fidelity(0.95), 0, 1);
    CHECK(coherent_information(noisy) ==
          doctest::Approx(0.6343549178479858).epsilon(1e-12));
    auto useless = bell_from_werner(werner_from_fidelity(0.25), 0, 1);
    CHECK(coherent_information(useless) == doctest::Approx(-1.0));
    std::vector<double> certain{1.0, 0.0};
    CHECK(shannon_entropy_bits(certain) == 0.0);
}

TEST_CASE("dense-oracle cross checks") {
    auto results = validation::suite_state_algebra(12345);
    for (const auto& r : results) {
        INFO(r.name, " max_err=", r.max_err);
        CHECK(r.pass);
    }
}
