#include <doctest.h>

#include <cmath>
#include <numbers>

#include "catr/slit_design.hpp"

using namespace catr;

namespace {

// reference slit tables for the two tube pairs (desk-scale robot)
SegmentDesign reference_proximal() {
    SlitDesign outer{30.0, 0.5070, 0.6348, 0.4697, 59.8, 5, 0.0317, 0.3, 1.1238};
    SlitDesign inner{30.0, 0.5, 0.5815, 0.35, 73.17, 5, 0.06, 0.25, 0.9557};
    return make_segment_design(outer, inner, 1.4, 1.7, 0.8, 1.1);
}

SegmentDesign reference_distal() {
    SlitDesign outer{30.0, 0.513, 0.6857, 0.4665, 59.94, 3, 0.0339, 0.3, 1.0893};
    SlitDesign inner{30.0, 0.4992, 0.5775, 0.35, 73.19, 3, 0.06, 0.25, 0.9161};
    return make_segment_design(outer, inner, 1.2, 1.5, 0.6, 0.9);
}

}  // namespace

TEST_CASE("max bend angle on the reference proximal pair") {
    const auto sd = reference_proximal();
    const double pulled = max_bend_angle(sd, BendMode::pulled);
    const double pushed = max_bend_angle(sd, BendMode::pushed);
    CHECK(pulled == doctest::Approx(1.7639354084318943).epsilon(1e-12));
    CHECK(std::abs(pulled - 1.77) <= 0.01);
    CHECK(pulled > pushed);  // cos(theta_s) < 1 shrinks the pulled divisor

    SegmentDesign closed = sd;
    closed.outer_slits.slit_width = 0.0;
    CHECK(max_bend_angle(closed, BendMode::pulled) == 0.0);
    CHECK(max_bend_angle(closed, BendMode::pushed) == 0.0);
}

TEST_CASE("objectives on the reference pairs (golden values)") {
    const auto prox = objectives(reference_proximal());
    CHECK(prox.f1 == doctest::Approx(17.007425).epsilon(1e-6));
    CHECK(prox.f2 == doctest::Approx(67.558877).epsilon(1e-6));
    const auto dist = objectives(reference_distal());
    CHECK(dist.f1 == doctest::Approx(14.309619).epsilon(1e-6));
    CHECK(dist.f2 == doctest::Approx(103.687868).epsilon(1e-6));
    CHECK(prox.f1 > 0.0);
    CHECK(prox.f2 > 0.0);
}

TEST_CASE("objective monotonicities") {
    auto sd = reference_proximal();
    const auto base = objectives(sd);

    // widening the uncut spine stiffens the pair
    auto wide = sd;
    wide.outer_slits.uncut_angle = 1.2;
    wide.outer_tube.uncut_angle = 1.2;
    CHECK(objectives(wide).f2 < base.f2);

    // halving the steerable length halves f1 at fixed saturation angle
    auto half = sd;
    half.outer_slits.steerable_length = 15.0;
    half.inner_slits.steerable_length = 15.0;
    CHECK(objectives(half).f1 == doctest::Approx(base.f1 / 2.0).epsilon(1e-12));
}

TEST_CASE("coupling residuals: exact identities") {
    auto sd = reference_proximal();

    // the axial relation is exact when N = L / (d_s + d_g)
    auto s = sd.outer_slits;
    s.slit_count = s.steerable_length / (s.slit_width + s.slit_gap);
    CHECK(coupling_residuals(s, sd.outer_tube)[1] == 0.0);

    // a full uncut spine leaves no patterned arc on the right-hand side
    auto full = sd.outer_slits;
    full.uncut_angle = 2.0 * std::numbers::pi;
    const double unit = 2.0 * full.tenon_length - 2.0 * full.tenon_height / std::tan(full.tenon_tilt);
    CHECK(coupling_residuals(full, sd.outer_tube)[0] ==
          doctest::Approx(unit * full.tenon_count).epsilon(1e-12));
}

TEST_CASE("coupling residuals on the reference tables") {
    struct Row {
        SlitDesign slits;
        TubeCrossSection tube;
        double r1_expected;  // frozen from independent evaluation
    };
    const auto prox = reference_proximal();
    const auto dist = reference_distal();
    const Row rows[] = {
        {prox.outer_slits, prox.outer_tube, -4.90958},
        {prox.inner_slits, prox.inner_tube, -2.31283},
        {dist.outer_slits, dist.outer_tube, -5.48160},
        {dist.inner_slits, dist.inner_tube, -2.89205},
    };
    for (const auto& row : rows) {
        const auto r = coupling_residuals(row.slits, row.tube);
        // the axial packing relation holds to well under 1%
        CHECK(std::abs(r[1]) <= 0.01 * row.slits.steerable_length);
        // the circumferential relation does NOT hold on the reference data;
        // pin the measured residuals so regressions are visible
        CHECK(r[0] == doctest::Approx(row.r1_expected).epsilon(1e-4));
    }
}

TEST_CASE("inter-tube residual on the reference tables and degenerate case") {
    const auto prox = reference_proximal();
    const double scale_p = prox.inner_slits.slit_count * prox.inner_slits.slit_width;
    CHECK(std::abs(inter_tube_residual(prox)) <= 0.01 * scale_p);

    const auto dist = reference_distal();
    const double scale_d = dist.inner_slits.slit_count * dist.inner_slits.slit_width;
    CHECK(std::abs(inter_tube_residual(dist)) <= 0.01 * scale_d);

    // identical tubes with zero tilt cancel exactly
    SlitDesign flat{30.0, 0.5, 0.5, 0.4, 60.0, 3, 0.05, 0.25, 1e-9};
    auto same = make_segment_design(flat, flat, 1.4, 1.7, 0.8, 1.1);
    same.outer_slits.tenon_tilt = 0.0;  // cos(0) = 1
    CHECK(inter_tube_residual(same) == 0.0);
}

TEST_CASE("slit validation names the offending field") {
    const DesignBounds bounds;
    SlitDesign ok{30.0, 0.5, 0.5, 0.4, 60.0, 3, 0.05, 0.27, 0.8};
    CHECK_NOTHROW(validate(ok, bounds));

    auto bad = ok;
    bad.tenon_length = 0.05;
    CHECK_THROWS_WITH_AS(validate(bad, bounds),
                         doctest::Contains("tenon_length"), ConfigError);
    bad = ok;
    bad.tenon_count = 4;
    CHECK_THROWS_AS(validate(bad, bounds), ConfigError);
    bad = ok;
    bad.slit_width = 0.1;
    CHECK_THROWS_WITH_AS(validate(bad, bounds), doctest::Contains("slit_width"), ConfigError);
}

TEST_CASE("design optimization emits feasible, dominant, reproducible designs") {
    const DesignBounds bounds;
    const FixedGeometry fixed{30.0, 1.4, 1.7, 0.8, 1.1, kDefaultYoungsModulus};
    DesignOptions opts;
    opts.optimizer.population = 12;
    opts.optimizer.elite = 6;
    opts.optimizer.max_iterations = 10;
    opts.optimizer.seed = 3;
    opts.epsilon_max_iterations = 30;

    const auto result = optimize_design(bounds, fixed, opts);
    CHECK(result.status == DesignStatus::ok);

    const auto& d = result.chosen;
    CHECK_NOTHROW(validate(d.outer_slits, bounds));
    CHECK_NOTHROW(validate(d.inner_slits, bounds));
    CHECK((d.outer_slits.tenon_count % 2) == 1);
    CHECK((d.inner_slits.tenon_count % 2) == 1);

    // eliminated couplings hold to machine precision
    const auto ro = coupling_residuals(d.outer_slits, d.outer_tube);
    const auto ri = coupling_residuals(d.inner_slits, d.inner_tube);
    const double scale_r1o = (2 * std::numbers::pi - d.outer_slits.uncut_angle) * d.outer_tube.outer_radius;
    CHECK(std::abs(ro[0]) <= 1e-6 * std::max(scale_r1o, 1.0));
    CHECK(std::abs(ro[1]) <= 1e-6 * d.outer_slits.steerable_length);
    CHECK(std::abs(ri[1]) <= 1e-6 * d.inner_slits.steerable_length);
    CHECK(std::abs(inter_tube_residual(d)) <=
          1e-6 * std::max(1.0, d.inner_slits.slit_count * d.inner_slits.slit_width));

    // weakly dominates the reference table under our own evaluators
    const auto ref = objectives(reference_proximal());
    CHECK(result.chosen_objectives.f1 <= 1.05 * ref.f1);
    CHECK(result.chosen_objectives.f2 <= 1.05 * ref.f2);

    // epsilon trace decreases in fixed steps
    for (std::size_t i = 1; i < result.epsilon_trace.size(); ++i)
        CHECK(result.epsilon_trace[i].epsilon ==
              doctest::Approx(result.epsilon_trace[i - 1].epsilon - opts.epsilon_step).epsilon(1e-12));

    // frontier points are mutually non-dominated
    for (std::size_t i = 0; i < result.frontier.size(); ++i)
        for (std::size_t j = 0; j < result.frontier.size(); ++j) {
            if (i == j) continue;
            const bool dominates = result.frontier[j].f1 <= result.frontier[i].f1 &&
                                   result.frontier[j].f2 <= result.frontier[i].f2 &&
                                   (result.frontier[j].f1 < result.frontier[i].f1 ||
                                    result.frontier[j].f2 < result.frontier[i].f2);
            CHECK_FALSE(dominates);
        }

    // bit-for-bit reproducible under the same seed
    const auto rerun = optimize_design(bounds, fixed, opts);
    CHECK(rerun.chosen.outer_slits.uncut_angle == d.outer_slits.uncut_angle);
    CHECK(rerun.chosen.inner_slits.slit_width == d.inner_slits.slit_width);
    CHECK(rerun.chosen_objectives.f1 == result.chosen_objectives.f1);
    CHECK(rerun.chosen_objectives.f2 == result.chosen_objectives.f2);
    REQUIRE(rerun.epsilon_trace.size() == result.epsilon_trace.size());
    for (std::size_t i = 0; i < rerun.epsilon_trace.size(); ++i) {
        CHECK(rerun.epsilon_trace[i].f1 == result.epsilon_trace[i].f1);
        CHECK(rerun.epsilon_trace[i].f2 == result.epsilon_trace[i].f2);
    }
}
