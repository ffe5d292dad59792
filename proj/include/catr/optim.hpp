#pragma once
#include <cstdint>
#include <functional>
#include <vector>

namespace catr {

struct OptimizerOptions {
    int population = 20;
    int elite = 10;
    int max_iterations = 20;
    std::uint64_t seed = 0;
    double feasibility_tol = 1e-6;
    double convergence_tol = 1e-6;
};

struct SearchResult {
    std::vector<double> best_point;
    double best_value = 0.0;
    std::vector<double> history;  // best value after each iteration, non-increasing
    bool feasible = true;
    long evaluations = 0;
};

using Objective = std::function<double(const std::vector<double>&)>;

struct Box {
    std::vector<double> lo, hi;
    std::size_t size() const { return lo.size(); }
};

/// Dimension restricted to a finite value set; crossover copies a parent's
/// value, mutation resamples from the set.
struct DiscreteDim {
    int index = 0;
    std::vector<double> values;
};

/// Seeded, deterministic genetic search: tournament selection (size 3), blend
/// crossover on continuous dims, uniform resampling mutation at rate 0.1,
/// elite copy-through, plus one compass probe on the incumbent per generation.
/// Per-individual RNG streams are derived from (seed, generation, index), so
/// results do not depend on evaluation order.
SearchResult ga_minimize(const Objective& objective, const Box& box,
                         const std::vector<DiscreteDim>& discrete_dims,
                         const OptimizerOptions& opts);

/// Deterministic compass (pattern) search inside the box. Steps start at
/// initial_step * (hi - lo) per dimension and halve on a failed sweep.
SearchResult pattern_search(const Objective& objective, const Box& box, std::vector<double> x0,
                            long max_evals = 4000, double initial_step = 0.25);

using ResidualFn = std::function<std::vector<double>(const std::vector<double>&)>;

/// Exterior quadratic penalty around pattern_search; penalty weight grows x10
/// per outer round until every equality residual is within feasibility_tol.
/// feasible=false when the schedule runs out first.
SearchResult constrained_minimize(const Objective& objective, const ResidualFn& equality_residuals,
                                  const Box& box, const std::vector<double>& x0,
                                  const OptimizerOptions& opts);

// ---- two-objective epsilon-constraint sweep ----

struct EpsilonTracePoint {
    double epsilon = 0.0;
    std::vector<double> point;
    double f1 = 0.0, f2 = 0.0;
    bool feasible = true;
};

struct EpsilonResult {
    std::vector<double> f1_min_point, f2_min_point;
    double f1_min = 0.0, f2_min = 0.0;
    std::vector<EpsilonTracePoint> trace;
    std::vector<double> chosen;  // last accepted point
    bool converged = false;
    long iterations = 0;
};

/// Minimizes one scalar objective over the design space, honoring the
/// caller's own base constraints; the seed varies per subproblem.
using ScalarSolver = std::function<SearchResult(const Objective&, std::uint64_t seed)>;

/// Stage 1 minimizes f1 and f2 independently; stage 2 repeatedly minimizes f1
/// subject to f2 <= epsilon * f2_min with epsilon decreasing by epsilon_step
/// per iteration, until f1 stalls (three consecutive relative changes below
/// convergence_tol), the subproblem goes infeasible, or max_iterations.
EpsilonResult epsilon_constraint_minimize(const Objective& f1, const Objective& f2,
                                          const ScalarSolver& solve, double epsilon0,
                                          double epsilon_step, int max_iterations,
                                          double convergence_tol, std::uint64_t seed);

}  // namespace catr
