#include <doctest.h>

#include <cmath>
#include <vector>

#include "catr/optim.hpp"

using namespace catr;

namespace {

double sphere(const std::vector<double>& x) {
    double s = 0.0;
    for (double v : x) s += v * v;
    return s;
}

Box cube(int n, double lo, double hi) {
    Box b;
    b.lo.assign(n, lo);
    b.hi.assign(n, hi);
    return b;
}

}  // namespace

TEST_CASE("ga reaches the sphere minimum within the default budget") {
    OptimizerOptions opts;
    opts.seed = 17;
    const auto r = ga_minimize(sphere, cube(6, -5.0, 5.0), {}, opts);
    CHECK(r.best_value < 1e-2);
    CHECK(r.evaluations >= opts.population);
    CHECK(r.history.size() == static_cast<std::size_t>(opts.max_iterations) + 1);
}

TEST_CASE("ga on a single-point box returns that point") {
    OptimizerOptions opts;
    opts.seed = 1;
    const auto r = ga_minimize(sphere, cube(3, 2.0, 2.0), {}, opts);
    CHECK(r.best_point == std::vector<double>{2.0, 2.0, 2.0});
    for (double h : r.history) CHECK(h == r.best_value);
}

TEST_CASE("ga is deterministic and monotone") {
    OptimizerOptions opts;
    opts.seed = 99;
    const auto a = ga_minimize(sphere, cube(4, -3.0, 3.0), {}, opts);
    const auto b = ga_minimize(sphere, cube(4, -3.0, 3.0), {}, opts);
    CHECK(a.best_point == b.best_point);
    CHECK(a.best_value == b.best_value);
    CHECK(a.history == b.history);
    for (std::size_t i = 1; i < a.history.size(); ++i) CHECK(a.history[i] <= a.history[i - 1]);

    opts.seed = 100;
    const auto c = ga_minimize(sphere, cube(4, -3.0, 3.0), {}, opts);
    CHECK(c.best_point != a.best_point);  // different stream, different draw
}

TEST_CASE("ga respects box bounds and discrete value sets") {
    OptimizerOptions opts;
    opts.seed = 5;
    std::vector<DiscreteDim> discrete{{2, {1.0, 3.0, 5.0}}};
    bool inside = true, discrete_ok = true;
    Objective probe = [&](const std::vector<double>& x) {
        inside = inside && x[0] >= -1.0 && x[0] <= 2.0 && x[1] >= 0.5 && x[1] <= 0.9;
        discrete_ok = discrete_ok && (x[2] == 1.0 || x[2] == 3.0 || x[2] == 5.0);
        return sphere(x);
    };
    Box box;
    box.lo = {-1.0, 0.5, 1.0};
    box.hi = {2.0, 0.9, 5.0};
    const auto r = ga_minimize(probe, box, discrete, opts);
    CHECK(inside);
    CHECK(discrete_ok);
    CHECK(r.best_point[2] == 1.0);  // smallest square among the allowed values
}

TEST_CASE("pattern search refines a quadratic to high accuracy") {
    Objective f = [](const std::vector<double>& x) {
        return (x[0] - 0.7) * (x[0] - 0.7) + 3.0 * (x[1] + 0.2) * (x[1] + 0.2);
    };
    const auto r = pattern_search(f, cube(2, -2.0, 2.0), {0.0, 0.0});
    CHECK(std::abs(r.best_point[0] - 0.7) < 1e-8);
    CHECK(std::abs(r.best_point[1] + 0.2) < 1e-8);
}

TEST_CASE("constrained minimize: quadratic with a pinned coordinate") {
    Objective f = [](const std::vector<double>& x) { return x[0] * x[0]; };
    ResidualFn eq = [](const std::vector<double>& x) { return std::vector<double>{x[0] - 1.0}; };
    OptimizerOptions opts;
    const auto r = constrained_minimize(f, eq, cube(1, -5.0, 5.0), {0.0}, opts);
    CHECK(r.feasible);
    CHECK(std::abs(r.best_point[0] - 1.0) < 1e-4);
}

TEST_CASE("constrained minimize matches the hand-solved projection") {
    // min (x-2)^2 + (y-1)^2  s.t.  x + y = 1   ->  (1, 0)
    Objective f = [](const std::vector<double>& x) {
        return (x[0] - 2.0) * (x[0] - 2.0) + (x[1] - 1.0) * (x[1] - 1.0);
    };
    ResidualFn eq = [](const std::vector<double>& x) {
        return std::vector<double>{x[0] + x[1] - 1.0};
    };
    OptimizerOptions opts;
    const auto r = constrained_minimize(f, eq, cube(2, -5.0, 5.0), {0.0, 0.0}, opts);
    CHECK(r.feasible);
    CHECK(std::abs(r.best_point[0] - 1.0) < 1e-4);
    CHECK(std::abs(r.best_point[1] - 0.0) < 1e-4);
}

TEST_CASE("constrained minimize flags unreachable equalities") {
    Objective f = [](const std::vector<double>& x) { return x[0] * x[0]; };
    ResidualFn eq = [](const std::vector<double>& x) { return std::vector<double>{x[0] - 10.0}; };
    OptimizerOptions opts;
    const auto r = constrained_minimize(f, eq, cube(1, -5.0, 5.0), {0.0}, opts);
    CHECK_FALSE(r.feasible);
}

namespace {

// two quadratics with a known frontier: f1 min at x=1.5, f2 min at the origin
double front_f1(const std::vector<double>& x) {
    return 1.0 + (x[0] - 1.5) * (x[0] - 1.5) + x[1] * x[1];
}
double front_f2(const std::vector<double>& x) {
    return 1.0 + x[0] * x[0] + x[1] * x[1];
}

}  // namespace

TEST_CASE("epsilon sweep walks the synthetic frontier") {
    const Box box = cube(2, -2.0, 2.0);
    ScalarSolver solve = [&](const Objective& obj, std::uint64_t seed) {
        OptimizerOptions o;
        o.seed = seed;
        auto ga = ga_minimize(obj, box, {}, o);
        return pattern_search(obj, box, ga.best_point, 4000, 0.1);
    };
    const auto r = epsilon_constraint_minimize(front_f1, front_f2, solve, 2.0, 0.01, 200, 1e-6, 7);

    CHECK(r.f1_min == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(r.f2_min == doctest::Approx(1.0).epsilon(1e-6));
    REQUIRE(!r.trace.empty());

    // epsilon decreases in fixed steps along the accepted prefix
    for (std::size_t i = 1; i < r.trace.size(); ++i)
        CHECK(r.trace[i].epsilon == doctest::Approx(r.trace[i - 1].epsilon - 0.01).epsilon(1e-12));

    // every accepted point sits on the analytic frontier f1 = 1 + (sqrt(f2-1)-1.5)^2
    int feasible_count = 0;
    for (const auto& tp : r.trace) {
        if (!tp.feasible) continue;
        ++feasible_count;
        const double x_of_f2 = std::sqrt(std::max(0.0, tp.f2 - 1.0));
        const double f1_on_front = 1.0 + (x_of_f2 - 1.5) * (x_of_f2 - 1.5);
        CHECK(std::abs(tp.f1 - f1_on_front) < 1e-3);
    }
    CHECK(feasible_count > 50);  // the bound binds immediately, so the sweep runs long

    // f1 grows as the stiffness bound tightens
    for (std::size_t i = 1; i + 1 < r.trace.size(); ++i)
        if (r.trace[i].feasible && r.trace[i - 1].feasible)
            CHECK(r.trace[i].f1 >= r.trace[i - 1].f1 - 1e-9);
}

TEST_CASE("epsilon sweep below one is immediately infeasible") {
    const Box box = cube(2, -2.0, 2.0);
    ScalarSolver solve = [&](const Objective& obj, std::uint64_t seed) {
        OptimizerOptions o;
        o.seed = seed;
        auto ga = ga_minimize(obj, box, {}, o);
        return pattern_search(obj, box, ga.best_point, 4000, 0.1);
    };
    const auto r = epsilon_constraint_minimize(front_f1, front_f2, solve, 0.9, 0.01, 200, 1e-6, 7);
    REQUIRE(r.trace.size() == 1);
    CHECK_FALSE(r.trace.front().feasible);
    CHECK_FALSE(r.converged);
}
