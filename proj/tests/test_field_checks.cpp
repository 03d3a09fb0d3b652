#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "sweeplab/field_checks.hpp"
#include "sweeplab/pinned.hpp"
#include "sweeplab/stream_spec.hpp"

using namespace sweeplab;

TEST_CASE("plain cellular field fails condition (E) by coinciding saddle values") {
    // H = cos(2 pi x1) + cos(2 pi x2): saddles at (0, 1/2) and (1/2, 0) share
    // the critical value 0 (hand enumeration: max 2 at origin, min -2 at the
    // center, two saddles at 0).
    StreamSpec s;
    s.add_component({{1.0, 1, 0, 0.0}, {1.0, 0, 1, 0.0}});
    const FieldDiagnostics diag = check_conditions(s, 32);
    CHECK_FALSE(diag.condition_e_ok);
    REQUIRE(diag.critical_points.size() == 1);
    const auto& pts = diag.critical_points[0];
    REQUIRE(pts.size() == 4);
    CHECK(pts.front().value == doctest::Approx(-2.0).epsilon(1e-10));
    CHECK(pts.back().value == doctest::Approx(2.0).epsilon(1e-10));
    CHECK(pts[1].value == doctest::Approx(0.0).epsilon(1e-10));
    CHECK(pts[2].value == doctest::Approx(0.0).epsilon(1e-10));
    CHECK(pts[1].kind == CriticalKind::Saddle);
    CHECK(pts[2].kind == CriticalKind::Saddle);
    CHECK(diag.min_value_separation < 1e-9);
}

TEST_CASE("shear pair fails condition (E) with degenerate critical sets") {
    StreamSpec s;
    s.add_component({{1.0, 0, 1, 0.0}});  // H1 = cos(2 pi x2): critical circles
    s.add_component({{1.0, 1, 0, 0.0}});
    const FieldDiagnostics diag = check_conditions(s, 32);
    CHECK_FALSE(diag.condition_e_ok);
    // Hessian determinant vanishes identically along the critical lines, so
    // any converged point is degenerate (or nothing converges at all).
    for (const auto& pts : diag.critical_points)
        for (const auto& p : pts) CHECK(std::abs(p.hessian_det) < 1e-8);
}

TEST_CASE("parallel fields fail condition (A)") {
    StreamSpec s;
    s.add_component({{1.0, 1, 0, 0.0}});
    s.add_component({{2.0, 1, 0, 0.0}});  // same streamlines, brackets vanish
    const FieldDiagnostics diag = check_conditions(s, 16);
    CHECK_FALSE(diag.condition_a_all_ok);
}

TEST_CASE("default family passes all conditions at grid 64") {
    const FieldDiagnostics diag = check_conditions(default_field_family(), 64);
    CHECK(diag.condition_a_all_ok);
    CHECK(diag.condition_d_ok);
    CHECK(diag.condition_e_ok);
    CHECK(diag.condition_e_reason.empty());
    CHECK(diag.zero_drift_residual < 1e-8);
    CHECK(diag.component_mean_residual < 1e-12);
    CHECK(diag.min_value_separation > 1e-3);
    CHECK(diag.min_hessian_det > 1e-8);
    CHECK(diag.all_ok());
}

TEST_CASE("default family critical points sit on the half and quarter lattices") {
    const FieldDiagnostics diag = check_conditions(default_field_family(), 48);
    REQUIRE(diag.critical_points.size() == 4);
    // Components 1 and 3 (indices 0, 2): critical points at multiples of 1/2;
    // components 2 and 4: at odd multiples of 1/4.
    for (std::size_t k : {0u, 2u}) {
        REQUIRE(diag.critical_points[k].size() == 4);
        for (const auto& p : diag.critical_points[k]) {
            CHECK(std::abs(std::remainder(p.location.x, 0.5)) < 1e-8);
            CHECK(std::abs(std::remainder(p.location.y, 0.5)) < 1e-8);
        }
    }
    for (std::size_t k : {1u, 3u}) {
        REQUIRE(diag.critical_points[k].size() == 4);
        for (const auto& p : diag.critical_points[k]) {
            const double fx = std::abs(std::remainder(p.location.x - 0.25, 0.5));
            const double fy = std::abs(std::remainder(p.location.y - 0.25, 0.5));
            CHECK(fx < 1e-8);
            CHECK(fy < 1e-8);
        }
    }
}

TEST_CASE("condition-E verdict is stable under grid refinement") {
    const StreamSpec fam = default_field_family();
    const FieldDiagnostics d32 = check_conditions(fam, 32);
    const FieldDiagnostics d64 = check_conditions(fam, 64);
    CHECK(d32.condition_e_ok == d64.condition_e_ok);
    REQUIRE(d32.critical_points.size() == d64.critical_points.size());
    for (std::size_t k = 0; k < d32.critical_points.size(); ++k)
        CHECK(d32.critical_points[k].size() == d64.critical_points[k].size());
}

TEST_CASE("classification is consistent with Hessian signs") {
    const FieldDiagnostics diag = check_conditions(default_field_family(), 32);
    const StreamSpec fam = default_field_family();
    for (std::size_t k = 0; k < diag.critical_points.size(); ++k) {
        for (const auto& p : diag.critical_points[k]) {
            const Mat2 h = fam.stream_hessian(k, p.location);
            if (p.kind == CriticalKind::Saddle) CHECK(h.det() < 0.0);
            if (p.kind == CriticalKind::Minimum) {
                CHECK(h.det() > 0.0);
                CHECK(h.trace() > 0.0);
            }
            if (p.kind == CriticalKind::Maximum) {
                CHECK(h.det() > 0.0);
                CHECK(h.trace() < 0.0);
            }
        }
    }
}

TEST_CASE("grid_n below 8 is rejected") {
    CHECK_THROWS_AS(check_conditions(default_field_family(), 4), std::invalid_argument);
}
