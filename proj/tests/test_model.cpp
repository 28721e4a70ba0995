#include <doctest.h>

#include <cmath>
#include <random>

#include "ncc/errors.hpp"
#include "ncc/model.hpp"

using namespace ncc;

namespace {

// Brute-force argmax of local_utility over c in [0,1] at the given step.
double grid_argmax(const ModelParams& p, const PolicyAction& a, double kappa, double theta,
                   double step = 1e-4) {
    double best_c = 0.0;
    double best_u = -1e300;
    const int n = static_cast<int>(std::round(1.0 / step));
    for (int i = 0; i <= n; ++i) {
        const double c = i * step;
        const double u = local_utility(c, theta, kappa, a, p);
        if (u > best_u) {
            best_u = u;
            best_c = c;
        }
    }
    return best_c;
}

ModelParams base() {
    ModelParams p;
    p.beta0 = 0.5;
    return p;
}

}  // namespace

TEST_CASE("local best response matches brute-force utility maximization") {
    ModelParams p = base();
    const PolicyAction a{0.8, 0.5};
    const double c = local_best_response(p, a, 1.0, false);
    // 2(beta0+m)p/(kappa+2(beta0+m)) = 1.6/3
    CHECK(c == doctest::Approx(1.6 / 3.0).epsilon(1e-14));
    CHECK(std::abs(c - grid_argmax(p, a, 1.0, 0.5)) <= 1e-4);
}

TEST_CASE("local best response edge cases") {
    ModelParams p = base();
    CHECK(local_best_response(p, {0.0, 0.7}, 1.3, false) == 0.0);

    p.c_min = 0.6;
    CHECK(local_best_response(p, {0.8, 0.5}, 1.0, true) == doctest::Approx(0.6));
    p.c_min = 0.5;
    // unconstrained value 0.5333 already above the floor
    CHECK(local_best_response(p, {0.8, 0.5}, 1.0, true) == doctest::Approx(1.6 / 3.0));
    CHECK(local_best_response(p, {0.2, 0.5}, 1.0, true) == doctest::Approx(0.5));

    CHECK_THROWS_AS(local_best_response(p, {0.5, 0.5}, 0.0, false), DomainError);
    CHECK_THROWS_AS(local_best_response(p, {0.5, 0.5}, -1.0, false), DomainError);
    CHECK_THROWS_AS(local_best_response(p, {0.5, 0.5}, NAN, false), DomainError);
    CHECK_THROWS_AS(local_best_response(p, {0.5, 0.5}, INFINITY, false), DomainError);
}

TEST_CASE("best response is locally optimal and never exceeds p when unconstrained") {
    std::mt19937_64 gen(7);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    ModelParams p = base();
    for (int trial = 0; trial < 500; ++trial) {
        p.beta0 = 2.0 * u01(gen);
        const PolicyAction a{u01(gen), u01(gen)};
        const double kappa = 0.1 + 5.0 * u01(gen);
        const double theta = u01(gen);
        const double c = local_best_response(p, a, kappa, false);
        CHECK(c <= a.p);
        const double u0 = local_utility(c, theta, kappa, a, p);
        CHECK(u0 >= local_utility(c + 0.01, theta, kappa, a, p));
        CHECK(u0 >= local_utility(c - 0.01, theta, kappa, a, p));
    }
}

TEST_CASE("comparative statics: c* increasing in p and m, decreasing in kappa") {
    std::mt19937_64 gen(11);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    ModelParams p = base();
    const double h = 1e-6;
    for (int trial = 0; trial < 1000; ++trial) {
        p.beta0 = 0.01 + 2.0 * u01(gen);
        const PolicyAction a{0.01 + 0.98 * u01(gen), 0.01 + 0.98 * u01(gen)};
        const double kappa = 0.1 + 5.0 * u01(gen);
        const double c = local_best_response(p, a, kappa, false);
        CHECK(local_best_response(p, {a.p + h, a.m}, kappa, false) > c);
        CHECK(local_best_response(p, {a.p, a.m + h}, kappa, false) > c);
        CHECK(local_best_response(p, a, kappa + h, false) < c);
    }
}

TEST_CASE("kappa-averaged best response: closed form vs Monte Carlo") {
    ModelParams p = base();
    p.kappa_lo = 1.0;
    p.kappa_hi = 2.0;
    const PolicyAction a{0.8, 0.5};
    // 2(beta0+m) = 2: 1.6 ln(4/3)
    const double closed = expected_best_response(p, a, false);
    CHECK(closed == doctest::Approx(1.6 * std::log(4.0 / 3.0)).epsilon(1e-14));

    std::mt19937_64 gen(3);
    std::uniform_real_distribution<double> kappa(p.kappa_lo, p.kappa_hi);
    const int n = 1000000;
    double sum = 0.0, sum2 = 0.0;
    for (int i = 0; i < n; ++i) {
        const double c = local_best_response(p, a, kappa(gen), false);
        sum += c;
        sum2 += c * c;
    }
    const double mean = sum / n;
    const double se = std::sqrt((sum2 / n - mean * mean) / n);
    CHECK(std::abs(mean - closed) < 4.0 * se);

    SUBCASE("with a binding floor on part of the support") {
        p.c_min = 0.5;  // binds for kappa > 1.2
        const double with_floor = expected_best_response(p, a, true);
        double s = 0.0;
        std::mt19937_64 g2(5);
        for (int i = 0; i < n; ++i) s += local_best_response(p, a, kappa(g2), true);
        CHECK(with_floor == doctest::Approx(s / n).epsilon(2e-4));
        CHECK(with_floor > closed);
    }
    SUBCASE("floor above the whole support and zero precision") {
        p.c_min = 0.9;
        CHECK(expected_best_response(p, a, true) == 0.9);
        CHECK(expected_best_response(p, {0.0, 0.3}, true) == 0.9);
        CHECK(expected_best_response(p, {0.0, 0.3}, false) == 0.0);
    }
}

TEST_CASE("aggregate investment") {
    ModelParams p;
    p.alpha = 0.2;
    p.k_b = p.k_r = p.k_s = 1.0;
    p.theta_bar = 0.5;
    const auto inv = aggregate_investment(EconState(0.6, 0.0, 0.3), {0.5, 0.0}, p);
    CHECK(inv.i_b == doctest::Approx(0.10));
    CHECK(inv.i_r == doctest::Approx(0.30));
    CHECK(inv.i_s == doctest::Approx(0.15));
    CHECK(inv.i_total == doctest::Approx(0.55));
    CHECK(inv.i_total == inv.i_b + inv.i_r + inv.i_s);

    CHECK(aggregate_investment(EconState(0.6, 0.0, 0.8), {0.5, 0.0}, p).i_r == 0.0);

    p.theta_bar = 0.0;
    CHECK(aggregate_investment(EconState(0.0, 0.0, 0.3), {0.0, 0.0}, p).i_total == 0.0);

    CHECK_THROWS_AS(aggregate_investment(EconState(0.5, 0.0, 0.9), {0.5, 0.0}, p), InvariantError);
}

TEST_CASE("aggregate investment is linear in p, theta and theta_bar") {
    std::mt19937_64 gen(19);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    ModelParams p;
    for (int trial = 0; trial < 200; ++trial) {
        p.alpha = 0.5 * u01(gen);
        p.k_b = 0.5 + u01(gen);
        p.k_r = 0.5 + u01(gen);
        p.k_s = 0.5 + u01(gen);
        const double omega = (1.0 - p.alpha) * u01(gen);
        const double theta = u01(gen), pp = u01(gen);
        p.theta_bar = u01(gen);
        auto total = [&](double th, double prec, double tb) {
            ModelParams q = p;
            q.theta_bar = tb;
            return aggregate_investment(EconState(th, 0.0, omega), {prec, 0.0}, q).i_total;
        };
        const double x0 = total(theta, pp, p.theta_bar);
        // f(x/2) = (f(0) + f(x)) / 2 along each argument
        CHECK(total(theta / 2, pp, p.theta_bar) ==
              doctest::Approx(0.5 * (total(0.0, pp, p.theta_bar) + x0)).epsilon(1e-12));
        CHECK(total(theta, pp / 2, p.theta_bar) ==
              doctest::Approx(0.5 * (total(theta, 0.0, p.theta_bar) + x0)).epsilon(1e-12));
        CHECK(total(theta, pp, p.theta_bar / 2) ==
              doctest::Approx(0.5 * (total(theta, pp, 0.0) + x0)).epsilon(1e-12));
    }
}

TEST_CASE("belief update") {
    ModelParams p;
    p.eta = 0.3;
    CHECK(update_belief(0.5, 0.8, {0.75, 0.0}, p, 0.0) == doctest::Approx(0.53));
    CHECK(update_belief(0.99, 0.8, {0.75, 0.0}, p, 5.0) == 1.0);
    CHECK(update_belief(0.01, 0.8, {0.75, 0.0}, p, -5.0) == 0.0);
    CHECK_THROWS_AS(update_belief(1.2, 0.5, {0.5, 0.0}, p, 0.0), DomainError);

    std::mt19937_64 gen(23);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    for (int trial = 0; trial < 1000; ++trial) {
        p.eta = 0.01 + 0.99 * u01(gen);
        const double c = u01(gen), pp = u01(gen);
        // fixed point
        CHECK(update_belief(c * pp, c, {pp, 0.0}, p, 0.0) == doctest::Approx(c * pp).epsilon(1e-15));
        // exact contraction toward c p
        const double theta = u01(gen);
        const double next = update_belief(theta, c, {pp, 0.0}, p, 0.0);
        CHECK(std::abs(next - c * pp) ==
              doctest::Approx((1.0 - p.eta) * std::abs(theta - c * pp)).epsilon(1e-12));
        // domain preserved under extreme draws
        const double wild = (u01(gen) - 0.5) * 1e6;
        const double out = update_belief(theta, c, {pp, 0.0}, p, wild);
        CHECK(out >= 0.0);
        CHECK(out <= 1.0);
    }
}

TEST_CASE("skeptic share and institutionalization transitions") {
    ModelParams p;
    p.n_s = 0.1;
    CHECK(update_skeptic_share(0.30, 0.5, p) == doctest::Approx(0.25));
    CHECK(update_skeptic_share(0.02, 0.5, p) == 0.0);
    CHECK(update_skeptic_share(0.30, 0.0, p) == 0.30);

    p.phi = 0.2;
    p.theta_threshold = 0.6;
    CHECK(update_institutionalization(1.0, 0.7, p) == doctest::Approx(1.14));
    CHECK(update_institutionalization(1.0, 0.5, p) == 1.0);
    CHECK(EconState(0.5, 1.0, 0.1).l_tilde() == 0.5);

    EconState s(0.5, 0.0, 0.1);
    s.set_l(3.0);
    CHECK(s.l_tilde() == 0.75);
    CHECK_THROWS_AS(s.set_theta(1.5), InvariantError);
    CHECK_THROWS_AS(s.set_l(-0.1), InvariantError);
}

TEST_CASE("local utility") {
    ModelParams p;
    p.xi = 1.0;
    p.beta0 = 0.5;
    CHECK(local_utility(0.4, 0.5, 1.0, {0.8, 0.5}, p) == doctest::Approx(0.26));
    CHECK(local_utility(0.7, 0.5, 0.0, {0.7, 0.3}, p) == doctest::Approx(0.5));
}

TEST_CASE("investment variance") {
    ModelParams p;
    p.alpha = 0.2;
    p.k_r = 1.0;
    p.eta = 0.3;
    p.sigma_nu = 0.1;
    p.sigma_eps = 0.05;
    CHECK(transmitted_variance(0.3, 0.8, p) == doctest::Approx(0.25 * (0.000576 + 0.0025)).epsilon(1e-12));
    CHECK(transmitted_variance(0.3, 0.0, p) == doctest::Approx(0.25 * 0.0025));

    ModelParams quiet = p;
    quiet.sigma_nu = quiet.sigma_eps = 0.0;
    CHECK(investment_variance(EconState(0.5, 0.0, 0.3), {0.8, 0.5}, quiet) == 0.0);
    ModelParams no_eps = p;
    no_eps.sigma_eps = 0.0;
    CHECK(investment_variance(EconState(0.5, 0.0, 0.3), {0.0, 0.5}, no_eps) == 0.0);

    SUBCASE("Monte Carlo: variance of simulated one-step investment") {
        // Simulate theta' = theta + eta((c* + nu) p - theta) + eps without clamping
        // and I' = (1 - alpha - omega') k_r theta' + const; compare variances.
        const double theta = 0.4, pp = 0.8, omega_next = 0.3;
        const double closed = transmitted_variance(omega_next, pp, p);
        CHECK(closed == doctest::Approx(7.69e-4).epsilon(1e-3));
        std::mt19937_64 gen(29);
        std::normal_distribution<double> nu(0.0, p.sigma_nu), eps(0.0, p.sigma_eps);
        const int n = 1000000;
        const double c_star = 0.5;
        double sum = 0.0, sum2 = 0.0;
        for (int i = 0; i < n; ++i) {
            const double c = c_star + nu(gen);
            const double next = theta + p.eta * (c * pp - theta) + eps(gen);
            const double inv = (1.0 - p.alpha - omega_next) * p.k_r * next;
            sum += inv;
            sum2 += inv * inv;
        }
        const double mean = sum / n;
        const double var = (sum2 / n - mean * mean) * n / (n - 1);
        CHECK(std::abs(var - closed) / closed < 0.01);
        // standard error of a normal sample variance: var sqrt(2/(n-1))
        CHECK(std::abs(var - closed) < 3.0 * closed * std::sqrt(2.0 / (n - 1)));
    }
}

TEST_CASE("central period utility") {
    ModelParams p;
    p.lambda = 1.0;
    p.gamma = 0.5;
    p.cost_p = p.cost_m = 0.1;
    p.psi = 0.05;
    CHECK(central_utility_from_components(0.55, 0.01, {0.5, 0.5}, 1.0, p) == doctest::Approx(0.47));

    ModelParams zero = p;
    zero.theta_bar = 0.0;
    // only the belief noise remains: -gamma ((1 - alpha - omega) k_r)^2 sigma_eps^2
    CHECK(central_period_utility(EconState(0.0, 0.0, 0.3), {0.0, 0.0}, zero) ==
          doctest::Approx(-0.5 * 0.25 * 0.0025).epsilon(1e-12));
    zero.gamma = 7.0;
    zero.sigma_eps = zero.sigma_nu = 0.0;
    CHECK(central_period_utility(EconState(0.0, 0.0, 0.3), {0.0, 0.0}, zero) == 0.0);

    // expectation and fixed-kappa forms agree when the variance does not
    // depend on c* (no skeptics)
    const EconState s(0.5, 0.4, 0.0);
    CHECK(central_period_utility(s, {0.6, 0.4}, p) ==
          doctest::Approx(central_period_utility(s, {0.6, 0.4}, p, 1.5)));
}

TEST_CASE("parameter validation names the field") {
    ModelParams p;
    CHECK_NOTHROW(p.validate());
    p.delta = 1.0;
    CHECK_THROWS_WITH_AS(p.validate(), doctest::Contains("delta"), DomainError);
    p = ModelParams{};
    p.kappa_hi = p.kappa_lo;
    CHECK_THROWS_WITH_AS(p.validate(), doctest::Contains("kappa_hi"), DomainError);
}
