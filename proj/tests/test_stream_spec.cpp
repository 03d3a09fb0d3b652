#include <doctest.h>

#include <cmath>
#include <random>

#include "sweeplab/stream_spec.hpp"

using namespace sweeplab;

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

StreamSpec single_mode(double a, int n1, int n2, double phase) {
    StreamSpec s;
    s.add_component({{a, n1, n2, phase}});
    return s;
}

// Midpoint quadrature of the velocity field over the torus.
Vec2 quadrature_mean_velocity(const StreamSpec& s, std::size_t k, int n) {
    Vec2 sum{0, 0};
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) sum += s.velocity(k, {(i + 0.5) / n, (j + 0.5) / n});
    return (1.0 / (static_cast<double>(n) * n)) * sum;
}

Vec2 quadrature_mean_ito(const StreamSpec& s, int n) {
    Vec2 sum{0, 0};
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) sum += s.ito_drift({(i + 0.5) / n, (j + 0.5) / n});
    return (1.0 / (static_cast<double>(n) * n)) * sum;
}

}  // namespace

TEST_CASE("stream evaluation matches the cosine sum") {
    const StreamSpec s = single_mode(1.0, 0, 1, 0.0);
    CHECK(s.stream(0, {0.3, 0.0}) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(s.stream(0, {0.3, 0.25}) == doctest::Approx(0.0).epsilon(1e-15));

    StreamSpec two;
    two.add_component({{1.0, 1, 0, 0.0}, {1.0, 0, 1, 0.0}});
    CHECK(two.stream(0, {0.0, 0.0}) == doctest::Approx(2.0).epsilon(1e-15));
}

TEST_CASE("velocity is the rotated gradient") {
    const StreamSpec s = single_mode(1.0, 0, 1, 0.0);  // H = cos(2 pi x2)
    const Vec2 v = s.velocity(0, {0.0, 0.25});
    CHECK(v.x == doctest::Approx(kTwoPi).epsilon(1e-14));
    CHECK(v.y == doctest::Approx(0.0).epsilon(1e-14));
    const Vec2 v0 = s.velocity(0, {0.0, 0.0});
    CHECK(std::abs(v0.x) < 1e-14);
    CHECK(std::abs(v0.y) < 1e-14);

    StreamSpec cell;
    cell.add_component({{1.0, 1, 0, 0.0}, {1.0, 0, 1, 0.0}});
    const Vec2 vc = cell.velocity(0, {0.25, 0.25});
    CHECK(vc.x == doctest::Approx(kTwoPi).epsilon(1e-14));
    CHECK(vc.y == doctest::Approx(-kTwoPi).epsilon(1e-14));
}

TEST_CASE("jacobian of a single shear has one nonzero entry") {
    const StreamSpec s = single_mode(1.0, 0, 1, 0.0);
    for (double y : {0.0, 0.1, 0.37}) {
        const Mat2 j = s.jacobian(0, {0.4, y});
        CHECK(j.a == doctest::Approx(0.0).epsilon(1e-14));
        CHECK(j.c == doctest::Approx(0.0).epsilon(1e-14));
        CHECK(j.d == doctest::Approx(0.0).epsilon(1e-14));
        CHECK(j.b == doctest::Approx(kTwoPi * kTwoPi * std::cos(kTwoPi * y)).epsilon(1e-13));
    }
}

TEST_CASE("jacobian trace vanishes at random points") {
    const StreamSpec s = default_field_family_scaled(1.0);
    std::mt19937_64 gen(7);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    for (int i = 0; i < 100; ++i) {
        const Vec2 x{u(gen), u(gen)};
        for (std::size_t k = 0; k < s.num_components(); ++k)
            CHECK(std::abs(s.jacobian(k, x).trace()) < 1e-12);
    }
}

TEST_CASE("jacobian matches central finite differences at second order") {
    const StreamSpec s = default_field_family_scaled(1.0);
    std::mt19937_64 gen(13);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    auto fd_error = [&](double delta) {
        double worst = 0.0;
        std::mt19937_64 g(13);
        std::uniform_real_distribution<double> uu(0.0, 1.0);
        for (int i = 0; i < 30; ++i) {
            const Vec2 x{uu(g), uu(g)};
            for (std::size_t k = 0; k < s.num_components(); ++k) {
                const Mat2 j = s.jacobian(k, x);
                const Vec2 dx1 = (1.0 / (2 * delta)) *
                                 (s.velocity(k, {x.x + delta, x.y}) - s.velocity(k, {x.x - delta, x.y}));
                const Vec2 dx2 = (1.0 / (2 * delta)) *
                                 (s.velocity(k, {x.x, x.y + delta}) - s.velocity(k, {x.x, x.y - delta}));
                worst = std::max({worst, std::abs(dx1.x - j.a), std::abs(dx1.y - j.c),
                                  std::abs(dx2.x - j.b), std::abs(dx2.y - j.d)});
            }
        }
        return worst;
    };
    (void)gen;
    (void)u;
    const double e4 = fd_error(1e-4);
    const double e5 = fd_error(1e-5);
    CHECK(e5 < 1e-5);  // O(delta^2) with O(100) third derivatives
    // Second order: shrinking delta by 10 shrinks the error by ~100.
    CHECK(e4 / e5 > 30.0);
    CHECK(e4 / e5 < 300.0);
}

TEST_CASE("ito drift vanishes identically for a single shear") {
    const StreamSpec s = single_mode(1.0, 0, 1, 0.3);
    std::mt19937_64 gen(5);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 20; ++i) {
        const Vec2 d = s.ito_drift({u(gen), u(gen)});
        CHECK(std::abs(d.x) < 1e-13);
        CHECK(std::abs(d.y) < 1e-13);
    }
}

TEST_CASE("ito drift integrates to zero over the torus") {
    const StreamSpec s = default_field_family();
    const Vec2 mean = quadrature_mean_ito(s, 64);
    CHECK(mean.norm() < 1e-8);
}

TEST_CASE("velocity components have zero torus mean") {
    const StreamSpec s = default_field_family();
    const int n = 2 * s.max_wavenumber() + 2;
    for (std::size_t k = 0; k < s.num_components(); ++k)
        CHECK(quadrature_mean_velocity(s, k, n).norm() < 1e-12);
}

TEST_CASE("evaluation is exactly periodic when coordinates wrap first") {
    const StreamSpec s = default_field_family();
    for (int i = -2; i <= 2; ++i) {
        for (int j = -2; j <= 2; ++j) {
            const Vec2 a = s.velocity(1, {0.173, 0.642});
            const Vec2 b = s.velocity(1, {0.173 + i, 0.642 + j});
            CHECK(a.x == b.x);
            CHECK(a.y == b.y);
        }
    }
}

TEST_CASE("spec validation rejects bad mode lists") {
    StreamSpec s;
    CHECK_THROWS_AS(s.add_component({{1.0, 0, 0, 0.0}}), std::invalid_argument);
    CHECK_THROWS_AS(s.add_component({}), std::invalid_argument);
    s.add_component({{1.0, 1, 0, 0.0}});
    CHECK_THROWS_AS(s.velocity(3, {0, 0}), std::out_of_range);
}

TEST_CASE("default family structure") {
    const StreamSpec s = default_field_family();
    CHECK(s.num_components() == 4);
    CHECK(!s.has_drift());
    for (std::size_t k = 0; k < 4; ++k) CHECK(s.component(k).size() == 4);
    // The orbit relation: H_{k+1}(x) = H_k(g^{-1} x) for the quarter turn g
    // about (1/4, 0).
    auto ginv = [](Vec2 x) { return Vec2{x.y + 0.25, 0.25 - x.x}; };
    std::mt19937_64 gen(11);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 25; ++i) {
        const Vec2 x{u(gen), u(gen)};
        for (std::size_t k = 0; k < 4; ++k) {
            const double lhs = s.stream((k + 1) % 4, x);
            const double rhs = s.stream(k, ginv(x));
            CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
        }
    }
}
