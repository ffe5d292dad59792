#include "catr/optim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include "catr/errors.hpp"

namespace catr {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

// One stream per (seed, generation, individual); evaluation order never matters.
std::mt19937_64 stream(std::uint64_t seed, std::uint64_t generation, std::uint64_t index) {
    return std::mt19937_64(splitmix64(seed ^ splitmix64(generation * 0x9E3779B97F4A7C15ull + index)));
}

double uniform(std::mt19937_64& rng, double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng);
}

struct DimKind {
    bool discrete = false;
    const std::vector<double>* values = nullptr;
};

std::vector<DimKind> dim_kinds(std::size_t n, const std::vector<DiscreteDim>& discrete_dims) {
    std::vector<DimKind> kinds(n);
    for (const auto& d : discrete_dims) {
        kinds.at(d.index).discrete = true;
        kinds.at(d.index).values = &d.values;
    }
    return kinds;
}

double sample_dim(std::mt19937_64& rng, const DimKind& kind, double lo, double hi) {
    if (kind.discrete) {
        const auto& v = *kind.values;
        return v[std::uniform_int_distribution<std::size_t>(0, v.size() - 1)(rng)];
    }
    if (lo == hi) return lo;
    return uniform(rng, lo, hi);
}

}  // namespace

SearchResult ga_minimize(const Objective& objective, const Box& box,
                         const std::vector<DiscreteDim>& discrete_dims,
                         const OptimizerOptions& opts) {
    const std::size_t n = box.size();
    if (n == 0 || box.hi.size() != n) throw InvalidGeometry("ga_minimize: empty or ragged box");
    if (!(opts.elite > 0 && opts.elite <= opts.population && opts.max_iterations >= 1))
        throw InvalidGeometry("ga_minimize: need 0 < elite <= population, max_iterations >= 1");
    for (std::size_t d = 0; d < n; ++d)
        if (box.lo[d] > box.hi[d]) throw InvalidGeometry("ga_minimize: box lo > hi");

    const auto kinds = dim_kinds(n, discrete_dims);
    const int pop = opts.population, elite = opts.elite;

    std::vector<std::vector<double>> population(pop, std::vector<double>(n));
    std::vector<double> fitness(pop);
    SearchResult result;
    result.evaluations = 0;

    for (int i = 0; i < pop; ++i) {
        auto rng = stream(opts.seed, 0, i);
        for (std::size_t d = 0; d < n; ++d)
            population[i][d] = sample_dim(rng, kinds[d], box.lo[d], box.hi[d]);
        fitness[i] = objective(population[i]);
        ++result.evaluations;
    }

    auto order_by_fitness = [&]() {
        std::vector<int> idx(pop);
        std::iota(idx.begin(), idx.end(), 0);
        std::stable_sort(idx.begin(), idx.end(), [&](int a, int b) { return fitness[a] < fitness[b]; });
        std::vector<std::vector<double>> p2(pop);
        std::vector<double> f2(pop);
        for (int i = 0; i < pop; ++i) {
            p2[i] = population[idx[i]];
            f2[i] = fitness[idx[i]];
        }
        population.swap(p2);
        fitness.swap(f2);
    };

    order_by_fitness();
    result.history.push_back(fitness[0]);

    // incumbent probe step, shrinks when the probe stalls
    std::vector<double> probe(n);
    for (std::size_t d = 0; d < n; ++d) probe[d] = 0.05 * (box.hi[d] - box.lo[d]);

    for (int gen = 1; gen <= opts.max_iterations; ++gen) {
        // elite refinement: one compass pass over the incumbent
        bool probe_hit = false;
        for (std::size_t d = 0; d < n; ++d) {
            if (kinds[d].discrete || probe[d] <= 0.0) continue;
            for (double sgn : {1.0, -1.0}) {
                auto trial = population[0];
                trial[d] = std::clamp(trial[d] + sgn * probe[d], box.lo[d], box.hi[d]);
                if (trial[d] == population[0][d]) continue;
                const double f = objective(trial);
                ++result.evaluations;
                if (f < fitness[0]) {
                    population[0] = trial;
                    fitness[0] = f;
                    probe_hit = true;
                    break;
                }
            }
        }
        if (!probe_hit)
            for (auto& s : probe) s *= 0.6;

        std::vector<std::vector<double>> children(pop - elite);
        std::vector<double> child_fitness(pop - elite);
        for (int c = 0; c < pop - elite; ++c) {
            auto rng = stream(opts.seed, gen, c);
            auto pick_parent = [&]() {
                int best = std::uniform_int_distribution<int>(0, pop - 1)(rng);
                for (int k = 1; k < 3; ++k) {
                    const int cand = std::uniform_int_distribution<int>(0, pop - 1)(rng);
                    if (fitness[cand] < fitness[best]) best = cand;
                }
                return best;
            };
            const auto& a = population[pick_parent()];
            const auto& b = population[pick_parent()];
            auto& child = children[c];
            child.resize(n);
            for (std::size_t d = 0; d < n; ++d) {
                if (kinds[d].discrete) {
                    child[d] = uniform(rng, 0.0, 1.0) < 0.5 ? a[d] : b[d];
                } else {
                    const double u = uniform(rng, -0.25, 1.25);
                    child[d] = std::clamp(u * a[d] + (1.0 - u) * b[d], box.lo[d], box.hi[d]);
                }
                if (uniform(rng, 0.0, 1.0) < 0.1) child[d] = sample_dim(rng, kinds[d], box.lo[d], box.hi[d]);
            }
            child_fitness[c] = objective(child);
            ++result.evaluations;
        }

        for (int c = 0; c < pop - elite; ++c) {
            population[elite + c] = std::move(children[c]);
            fitness[elite + c] = child_fitness[c];
        }
        order_by_fitness();
        result.history.push_back(fitness[0]);
    }

    result.best_point = population[0];
    result.best_value = fitness[0];
    return result;
}

SearchResult pattern_search(const Objective& objective, const Box& box, std::vector<double> x0,
                            long max_evals, double initial_step) {
    const std::size_t n = box.size();
    if (n == 0 || x0.size() != n) throw InvalidGeometry("pattern_search: dimension mismatch");

    for (std::size_t d = 0; d < n; ++d) x0[d] = std::clamp(x0[d], box.lo[d], box.hi[d]);

    SearchResult result;
    double f = objective(x0);
    result.evaluations = 1;
    result.history.push_back(f);

    std::vector<double> step(n);
    double max_range = 0.0;
    for (std::size_t d = 0; d < n; ++d) {
        step[d] = initial_step * (box.hi[d] - box.lo[d]);
        max_range = std::max(max_range, box.hi[d] - box.lo[d]);
    }
    const double floor_step = 1e-12 * std::max(max_range, 1.0);

    while (result.evaluations < max_evals) {
        bool improved = false;
        for (std::size_t d = 0; d < n && result.evaluations < max_evals; ++d) {
            if (step[d] <= 0.0) continue;
            for (double sgn : {1.0, -1.0}) {
                const double trial_val = std::clamp(x0[d] + sgn * step[d], box.lo[d], box.hi[d]);
                if (trial_val == x0[d]) continue;
                const double old = x0[d];
                x0[d] = trial_val;
                const double ft = objective(x0);
                ++result.evaluations;
                if (ft < f) {
                    f = ft;
                    improved = true;
                    break;
                }
                x0[d] = old;
                if (result.evaluations >= max_evals) break;
            }
        }
        result.history.push_back(f);
        if (!improved) {
            double largest = 0.0;
            for (auto& s : step) {
                s *= 0.5;
                largest = std::max(largest, s);
            }
            if (largest < floor_step) break;
        }
    }

    result.best_point = std::move(x0);
    result.best_value = f;
    return result;
}

SearchResult constrained_minimize(const Objective& objective, const ResidualFn& equality_residuals,
                                  const Box& box, const std::vector<double>& x0,
                                  const OptimizerOptions& opts) {
    std::vector<double> x = x0;
    double weight = 100.0;
    SearchResult result;
    result.feasible = false;

    auto residual_norm = [&](const std::vector<double>& p) {
        double worst = 0.0;
        for (double r : equality_residuals(p)) worst = std::max(worst, std::abs(r));
        return worst;
    };

    for (int round = 0; round < 12; ++round) {
        const double mu = weight;
        Objective penalized = [&](const std::vector<double>& p) {
            double pen = 0.0;
            for (double r : equality_residuals(p)) pen += r * r;
            return objective(p) + mu * pen;
        };
        auto inner = pattern_search(penalized, box, x, 6000, round == 0 ? 0.25 : 0.05);
        x = inner.best_point;
        result.evaluations += inner.evaluations;
        result.history.push_back(objective(x));
        if (residual_norm(x) <= opts.feasibility_tol) {
            result.feasible = true;
            break;
        }
        weight *= 10.0;
    }

    result.best_point = x;
    result.best_value = objective(x);
    return result;
}

EpsilonResult epsilon_constraint_minimize(const Objective& f1, const Objective& f2,
                                          const ScalarSolver& solve, double epsilon0,
                                          double epsilon_step, int max_iterations,
                                          double convergence_tol, std::uint64_t seed) {
    EpsilonResult out;

    auto stage1_f1 = solve(f1, splitmix64(seed ^ 0x51A6E1ull));
    auto stage1_f2 = solve(f2, splitmix64(seed ^ 0x52A6E2ull));
    out.f1_min_point = stage1_f1.best_point;
    out.f2_min_point = stage1_f2.best_point;
    out.f1_min = f1(stage1_f1.best_point);
    out.f2_min = f2(stage1_f2.best_point);

    const double f2_ref = out.f2_min;
    const double penalty_scale = 1e8 * (1.0 + std::abs(out.f1_min));

    double epsilon = epsilon0;
    double prev_f1 = std::numeric_limits<double>::quiet_NaN();
    int stall = 0;
    out.chosen = stage1_f1.best_point;

    for (int i = 0; i < max_iterations; ++i) {
        const double eps = epsilon;
        Objective sub = [&](const std::vector<double>& p) {
            const double violation = std::max(0.0, f2(p) / f2_ref - eps);
            return f1(p) + penalty_scale * violation * violation;
        };
        auto r = solve(sub, splitmix64(seed + 1000 + static_cast<std::uint64_t>(i)));
        const double v1 = f1(r.best_point), v2 = f2(r.best_point);
        const bool feasible = v2 <= eps * f2_ref * (1.0 + 1e-9) + 1e-12;
        out.trace.push_back({eps, r.best_point, v1, v2, feasible});
        ++out.iterations;

        if (!feasible) break;  // the bound can only tighten further

        out.chosen = r.best_point;
        if (!std::isnan(prev_f1) &&
            std::abs(v1 - prev_f1) < convergence_tol * std::max(std::abs(v1), 1e-30)) {
            if (++stall >= 3) {
                out.converged = true;
                break;
            }
        } else {
            stall = 0;
        }
        prev_f1 = v1;
        epsilon -= epsilon_step;
    }
    return out;
}

}  // namespace catr
