#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "ncc/errors.hpp"
#include "ncc/solver.hpp"

using namespace ncc;

namespace {

double sup_diff(const std::vector<double>& a, const std::vector<double>& b) {
    double d = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
    return d;
}

GridSpec small_grid() {
    GridSpec g;
    g.n_theta = g.n_ltilde = g.n_omega = 3;
    g.n_p = g.n_m = 3;
    g.quad_nodes = 3;
    return g;
}

}  // namespace

TEST_CASE("grid coordinates and indexing") {
    GridSpec g;
    CHECK(g.state_count() == 125);
    CHECK(g.action_count() == 25);
    CHECK(g.state_index(0, 0, 1) == 1);
    CHECK(g.state_index(0, 1, 0) == 5);
    CHECK(g.state_index(1, 0, 0) == 25);
    const auto c = g.state_coords(g.state_index(2, 3, 4));
    CHECK(c[0] == 0.5);
    CHECK(c[1] == 0.75);
    CHECK(c[2] == 1.0);
    CHECK(g.action_at(4, 1).p == 1.0);
    CHECK(g.action_at(4, 1).m == 0.25);

    GridSpec bad = g;
    bad.n_p = 1;
    CHECK_THROWS_AS(bad.validate(), DomainError);
    bad = g;
    bad.tol = 0.0;
    CHECK_THROWS_AS(bad.validate(), DomainError);
}

TEST_CASE("multilinear interpolation is exact for multilinear functions") {
    GridSpec g;
    g.n_theta = 4;
    g.n_ltilde = 3;
    g.n_omega = 6;
    auto f = [](double x, double y, double z) { return 1.0 + 2 * x - y + 0.5 * z + 3 * x * y - x * y * z; };
    std::vector<double> table(g.state_count());
    for (std::size_t s = 0; s < table.size(); ++s) {
        const auto c = g.state_coords(s);
        table[s] = f(c[0], c[1], c[2]);
    }
    std::mt19937_64 gen(1);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    for (int i = 0; i < 500; ++i) {
        const double x = u01(gen), y = u01(gen), z = u01(gen);
        CHECK(interpolate(table, g, x, y, z) == doctest::Approx(f(x, y, z)).epsilon(1e-13));
    }
    // clamped outside the box
    CHECK(interpolate(table, g, 1.5, -0.2, 0.5) == doctest::Approx(f(1.0, 0.0, 0.5)));
    CHECK(interpolate(table, g, 1.0, 1.0, 1.0) == doctest::Approx(f(1, 1, 1)));
}

TEST_CASE("Bellman backup is monotone and a delta-contraction") {
    const GridSpec g = small_grid();
    ModelParams p;
    p.delta = 0.9;
    const BellmanModel model(g, p);
    std::mt19937_64 gen(5);
    std::uniform_real_distribution<double> u(-3.0, 3.0), pos(0.0, 1.0);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<double> v(g.state_count()), w(g.state_count());
        for (std::size_t s = 0; s < v.size(); ++s) {
            v[s] = u(gen);
            w[s] = v[s] + pos(gen);
        }
        const auto tv = bellman_backup(v, model);
        const auto tw = bellman_backup(w, model);
        for (std::size_t s = 0; s < v.size(); ++s) CHECK(tv.value[s] <= tw.value[s] + 1e-14);
        CHECK(sup_diff(tv.value, tw.value) <= p.delta * sup_diff(v, w) + 1e-12);

        // adding a constant shifts the backup by delta times the constant
        std::vector<double> shifted = v;
        for (double& x : shifted) x += 2.0;
        const auto ts = bellman_backup(shifted, model);
        for (std::size_t s = 0; s < v.size(); ++s)
            CHECK(ts.value[s] == doctest::Approx(tv.value[s] + p.delta * 2.0).epsilon(1e-12));
    }
}

TEST_CASE("sparse model matches the direct backup") {
    const GridSpec g = small_grid();
    ModelParams p;
    const BellmanModel model(g, p);
    std::vector<double> v(g.state_count());
    for (std::size_t s = 0; s < v.size(); ++s) v[s] = std::sin(static_cast<double>(s));
    const auto a = bellman_backup(v, model);
    const auto b = bellman_backup(v, g, p);
    CHECK(sup_diff(a.value, b.value) == 0.0);
    for (std::size_t s = 0; s < v.size(); ++s) {
        for (std::size_t k = 0; k < g.action_count(); ++k) {
            const auto act = g.action_at(static_cast<int>(k / g.n_m), static_cast<int>(k % g.n_m));
            CHECK(model.objective_at(v, s, act) == doctest::Approx(model.objective(v, s, k)).epsilon(1e-12));
        }
    }
}

TEST_CASE("value iteration reaches a fixed point within the iteration bound") {
    GridSpec g;  // 5^3 states, 5^2 actions, 7 nodes
    ModelParams p;
    p.delta = 0.5;
    std::vector<double> history;
    const auto solved = solve_value_iteration(g, p, [&](int, double r) { history.push_back(r); });
    const BellmanModel model(g, p);
    const int bound = iteration_bound(model.utility_bound(), p.delta, g.tol);
    CHECK(solved.iterations <= bound);
    CHECK(solved.final_residual < g.tol);
    CHECK(history == solved.residual_history);
    for (std::size_t i = 1; i < history.size(); ++i) CHECK(history[i] <= p.delta * history[i - 1] + 1e-12);

    const auto again = bellman_backup(solved.value, model);
    CHECK(sup_diff(again.value, solved.value) <= g.tol);
    CHECK(again.policy_p == solved.policy_p);
    CHECK(again.policy_m == solved.policy_m);
    for (double v : solved.value) CHECK(std::abs(v) <= model.utility_bound() / (1 - p.delta) + 1e-12);
}

TEST_CASE("iteration bound") {
    CHECK(iteration_bound(1.0, 0.5, 1e-8) == static_cast<int>(std::ceil(std::log(1e-8) / std::log(0.5))) + 1);
    CHECK(iteration_bound(0.0, 0.9, 1e-8) == 1);
}

TEST_CASE("max_iter exhaustion carries the residual history") {
    GridSpec g = small_grid();
    g.max_iter = 3;
    ModelParams p;
    try {
        solve_value_iteration(g, p);
        FAIL("expected ConvergenceError");
    } catch (const ConvergenceError& e) {
        CHECK(e.residual_history().size() == 3);
    }
}

TEST_CASE("finite difference FOC classification") {
    auto quad = [](double x) { return -(x - 0.3) * (x - 0.3); };
    const auto in = finite_difference_foc(quad, 0.3, 0.05, 0.0, 1.0);
    CHECK(in.kind == FocKind::Interior);
    CHECK(in.satisfied);
    CHECK(std::abs(in.derivative) < 1e-12);
    CHECK(in.curvature == doctest::Approx(2.0));

    const auto off = finite_difference_foc(quad, 0.5, 0.05, 0.0, 1.0);
    CHECK_FALSE(off.satisfied);

    auto rising = [](double x) { return x; };
    const auto up = finite_difference_foc(rising, 1.0, 0.05, 0.0, 1.0);
    CHECK(up.kind == FocKind::UpperBoundary);
    CHECK(up.satisfied);
    const auto low = finite_difference_foc(rising, 0.0, 0.05, 0.0, 1.0);
    CHECK(low.kind == FocKind::LowerBoundary);
    CHECK_FALSE(low.satisfied);
}

TEST_CASE("FOC diagnostics hold at the solved policy") {
    GridSpec g = small_grid();
    g.n_p = g.n_m = 11;
    ModelParams p;
    const auto solved = solve_value_iteration(g, p);
    const auto res = foc_residuals(solved, p);
    CHECK(res.size() == g.state_count());
    for (const auto& r : res) {
        CHECK(r.p.satisfied);
        CHECK(r.m.satisfied);
    }
}

TEST_CASE("steady state credibility") {
    ModelParams p;
    p.beta0 = 0.5;
    CHECK(steady_state_credibility({0.8, 0.5}, 2.0, p) == doctest::Approx(0.32));
    p.c_min = 0.6;
    CHECK(steady_state_credibility({0.8, 0.5}, 2.0, p, true) == doctest::Approx(0.48));
}

TEST_CASE("solved policy lookup is clamped to the unit square") {
    GridSpec g = small_grid();
    ModelParams p;
    const auto solved = solve_value_iteration(g, p);
    const auto a = solved.action_at(EconState(0.37, 0.2, 0.11));
    CHECK(a.p >= 0.0);
    CHECK(a.p <= 1.0);
    CHECK(a.m >= 0.0);
    CHECK(a.m <= 1.0);
    const auto corner = solved.action_at(EconState(0.0, 0.0, 0.0));
    CHECK(corner.p == solved.policy_p[0]);
    CHECK(corner.m == solved.policy_m[0]);
}
