#include <doctest.h>

#include <cmath>
#include <random>

#include "fcs/saddle.hpp"
#include "oracles.hpp"

using namespace fcs;

TEST_CASE("phase classification") {
    CHECK(classify_phase({.J = 1, .V = 0, .zeta = 0.5}).kind == PhaseKind::Critical);
    CHECK(classify_phase({.J = 1, .V = 1, .zeta = 0.5}).kind == PhaseKind::VolumeLaw);
    CHECK(classify_phase({.J = 1, .V = 0, .zeta = 2.5}).kind == PhaseKind::AreaLaw);
    CHECK(classify_phase({.J = 1, .V = 3, .zeta = 1}).transition_order == TransitionOrder::FirstOrder);
    CHECK(classify_phase({.J = 1, .V = 1, .zeta = 1}).transition_order == TransitionOrder::Continuous);
    CHECK(classify_phase({.J = 1, .V = 3, .zeta = 0.9}).transition_order == TransitionOrder::NotAtBoundary);
    ModelParams bad;
    bad.J = -1;
    CHECK_THROWS_AS(classify_phase(bad), ConfigError);
}

TEST_CASE("solve_saddle closed forms and roots") {
    SUBCASE("free-fermion branch") {
        SaddleParams s = solve_saddle({.J = 1, .V = 0, .zeta = 0.6, .mu = 0.5});
        CHECK(s.P == doctest::Approx(0.3).epsilon(1e-14));
        CHECK(s.S == doctest::Approx(0.4).epsilon(1e-12));
        CHECK(s.z == doctest::Approx(std::exp(0.25)).epsilon(1e-14));
    }
    SUBCASE("area-law branch") {
        SaddleParams s = solve_saddle({.J = 1, .V = 0, .zeta = 2.5, .mu = 0.5});
        CHECK(s.P == doctest::Approx(2.0).epsilon(1e-14));
        CHECK(s.S == 0.0);
    }
    SUBCASE("interacting root from bisection") {
        ModelParams p{.J = 1, .V = 1, .zeta = 0.5, .mu = 0.5};
        SaddleDiagnostics diag;
        SaddleParams s = solve_saddle(p, &diag);
        CHECK(s.P == doctest::Approx(0.25).epsilon(1e-14));
        CHECK(std::abs(saddle_residual(s.S, p)) < 1e-12);
        CHECK(diag.residual < 1e-12);
        CHECK(s.S > 0.0);
        CHECK(s.S <= p.J / 2 + p.V / 8);
    }
    SUBCASE("V = 0 closed form, 100 random zeta") {
        std::mt19937 rng(11);
        std::uniform_real_distribution<double> zdist(1e-6, 1.0 - 1e-9);
        for (int i = 0; i < 100; ++i) {
            const double zeta = zdist(rng);
            ModelParams p{.J = 1, .V = 0, .zeta = zeta};
            SaddleParams s = solve_saddle(p);
            CHECK(std::abs(s.S - 0.5 * std::sqrt(1.0 - zeta * zeta)) < 1e-12);
        }
    }
    SUBCASE("S(zeta) continuity at the boundary for V < 2J") {
        ModelParams p{.J = 1, .V = 1.0, .zeta = 0};
        double prev = 1e9;
        for (double eps : {0.1, 0.01, 0.001}) {
            p.zeta = p.J - eps;
            const double S = solve_saddle(p).S;
            CHECK(S < prev);
            prev = S;
            CHECK(S < 3.0 * std::sqrt(eps));  // vanishes continuously
        }
    }
    SUBCASE("first-order floor for V > 2J") {
        ModelParams p{.J = 1, .V = 3.0, .zeta = 0};
        for (double eps : {0.1, 0.01, 0.001}) {
            p.zeta = p.J - eps;
            CHECK(solve_saddle(p).S > 0.15);
        }
    }
    SUBCASE("largest root selected; all roots exposed in diagnostics") {
        ModelParams p{.J = 1, .V = 3.0, .zeta = 0.999};
        SaddleDiagnostics diag;
        SaddleParams s = solve_saddle(p, &diag);
        CHECK(diag.roots.size() >= 1);
        CHECK(s.S == doctest::Approx(diag.roots.back()));
        // the coexistence window above zeta = J holds two ordered-branch roots
        ModelParams coex{.J = 1, .V = 3.0, .zeta = 1.01};
        CHECK(ordered_branch_roots(coex).size() == 2);
    }
}

TEST_CASE("greens_frequency") {
    SUBCASE("S = 0 is block diagonal") {
        SaddleParams s{.P = 2.0, .S = 0.0, .z = std::exp(0.25)};
        for (double w : {0.0, 0.3, -1.7}) {
            const auto g = greens_frequency(s, Parity::Even, w);
            CHECK(std::abs(g(0, 1)) == 0.0);
            CHECK(std::abs(g(1, 0)) == 0.0);
        }
    }
    SUBCASE("large-omega asymptotics") {
        SaddleParams s{.P = 0.3, .S = 0.4, .z = std::exp(0.25)};
        const double w = 1e6;
        const auto g = greens_frequency(s, Parity::Odd, w);
        CHECK(std::abs(g(0, 0) - 1.0 / (-I * w)) < 3.0 / (w * w));
        CHECK(std::abs(g(1, 1) - 1.0 / (I * w)) < 3.0 / (w * w));
    }
    SUBCASE("adjugate inverse matches generic solve") {
        SaddleParams s{.P = 0.3, .S = 0.4, .z = std::exp(0.25)};
        const double w = 0.7;
        Eigen::Matrix2cd ginv;
        ginv << -I * w + s.P, -s.S / s.z, s.z * s.S, I * w + s.P;  // odd parity
        const Eigen::Matrix2cd generic = ginv.inverse();
        const Eigen::Matrix2cd closed = greens_frequency(s, Parity::Odd, w);
        CHECK((generic - closed).cwiseAbs().maxCoeff() < 1e-14);
    }
    SUBCASE("determinant identity on random samples") {
        std::mt19937 rng(5);
        std::uniform_real_distribution<double> d(0.05, 2.0);
        for (int i = 0; i < 50; ++i) {
            SaddleParams s{.P = d(rng), .S = d(rng), .z = std::exp(d(rng))};
            const double w = d(rng) * (i % 2 ? 1 : -1);
            Eigen::Matrix2cd ginv;
            const double sg = (i % 3 == 0) ? 1.0 : -1.0;
            ginv << -I * w + sg * s.P, -s.S / s.z, s.z * s.S, I * w + sg * s.P;
            CHECK(std::abs(ginv.determinant() - cplx{w * w + s.P * s.P + s.S * s.S, 0}) < 1e-12);
        }
    }
    SUBCASE("singular point rejected") {
        SaddleParams s{.P = 0.0, .S = 0.0, .z = 1.0};
        CHECK_THROWS_AS(greens_frequency(s, Parity::Odd, 0.0), NumericalError);
    }
}

TEST_CASE("greens_equal_time") {
    SUBCASE("S = 0 reproduces the short-range-phase matrices") {
        SaddleParams s{.P = 2.0, .S = 0.0, .z = std::exp(0.25)};
        const auto even_plus = greens_equal_time(s, Parity::Even, EqualTimeSide::Plus);
        CHECK((even_plus - (Eigen::Matrix2cd() << 0, 0, 0, -1).finished()).cwiseAbs().maxCoeff() <
              1e-14);
        // (-1)^x = -1: the paper's G(0^-) is diag(0, +1); the spec example's
        // diag(0,-1) contradicts the matrix it cites (see decisions ledger)
        const auto odd_minus = greens_equal_time(s, Parity::Odd, EqualTimeSide::Minus);
        CHECK((odd_minus - (Eigen::Matrix2cd() << 0, 0, 0, 1).finished()).cwiseAbs().maxCoeff() <
              1e-14);
        const auto even_minus = greens_equal_time(s, Parity::Even, EqualTimeSide::Minus);
        CHECK((even_minus - (Eigen::Matrix2cd() << -1, 0, 0, 0).finished()).cwiseAbs().maxCoeff() <
              1e-14);
    }
    SUBCASE("jump between sides is diag(1, -1)") {
        SaddleParams s{.P = 0.25, .S = 0.35, .z = std::exp(0.25)};
        for (auto parity : {Parity::Odd, Parity::Even}) {
            const auto d = greens_equal_time(s, parity, EqualTimeSide::Plus) -
                           greens_equal_time(s, parity, EqualTimeSide::Minus);
            CHECK((d - (Eigen::Matrix2cd() << 1, 0, 0, -1).finished()).cwiseAbs().maxCoeff() < 1e-14);
        }
    }
    SUBCASE("S > 0 equals the omega-quadrature of greens_frequency") {
        SaddleParams s{.P = 0.25, .S = 0.35, .z = std::exp(0.25)};
        const double R = std::hypot(s.P, s.S);
        for (auto parity : {Parity::Odd, Parity::Even}) {
            // symmetric quadrature gives the average of the two sides
            Eigen::Matrix2cd quad;
            for (int r = 0; r < 2; ++r) {
                for (int c = 0; c < 2; ++c) {
                    quad(r, c) = test::integrate_line(
                        [&](double w) { return greens_frequency(s, parity, w)(r, c) / (2 * M_PI); },
                        R, 1e-12);
                }
            }
            const Eigen::Matrix2cd avg = 0.5 * (greens_equal_time(s, parity, EqualTimeSide::Plus) +
                                                greens_equal_time(s, parity, EqualTimeSide::Minus));
            CHECK((quad - avg).cwiseAbs().maxCoeff() < 1e-8);
        }
    }
}
