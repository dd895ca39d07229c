#include <doctest.h>

#include <cmath>
#include <numbers>

#include "test_support.hpp"
#include "wronbeta/beta_engine.hpp"
#include "wronbeta/moments.hpp"
#include "wronbeta/series_core.hpp"
#include "wronbeta/window_moments.hpp"

using namespace wronbeta;
using namespace testsupport;

namespace {

constexpr double kPi = std::numbers::pi;

TimeSeries combine(const TimeSeries& grid_like, double alpha,
                   const std::vector<double>& betas, const std::vector<TimeSeries>& factors)
{
    std::vector<double> v(grid_like.size(), alpha);
    for (std::size_t f = 0; f < factors.size(); ++f)
        for (std::size_t j = 0; j < v.size(); ++j)
            v[j] += betas[f] * factors[f].values[j];
    return TimeSeries(grid_like.grid, std::move(v));
}

} // namespace

TEST_CASE("wronskian_with_one: constant factor is degenerate")
{
    const TimeSeries c = sample(0.0, 0.01, 300, [](double) { return 4.0; });
    FactorPanel panel(c, {c});
    const WindowSpec w{100};
    const double t = c.grid.time_at(200);
    CHECK(std::abs(wronskian_with_one(panel, w, t)) <= 1e-12);
    CHECK_THROWS_AS(estimate_alpha_betas(panel, w, t), NotIndependent);
}

TEST_CASE("wronskian_with_one: ramp factor matches -L^2/12")
{
    const double step = 0.001;
    const std::size_t m = 500;
    const double L = static_cast<double>(m) * step;
    const TimeSeries ramp = sample(0.0, step, 1001, [](double t) { return t; });
    FactorPanel panel(ramp, {ramp});
    const double got = wronskian_with_one(panel, WindowSpec{m}, ramp.grid.time_at(800));
    CHECK(std::abs(got - (-L * L / 12)) <= 2 * step * L);
}

TEST_CASE("wronskian_with_one: affine-dependent pair is degenerate")
{
    const double step = 0.01;
    const TimeSeries x1 = sample(0.0, step, 400, [](double t) { return std::sin(t) + t; });
    std::vector<double> x2v(400);
    for (std::size_t j = 0; j < 400; ++j)
        x2v[j] = 1.5 * x1.values[j] + 2.0;
    const TimeSeries x2 = make_series(0.0, step, x2v);
    FactorPanel panel(x1, {x1, x2});
    const WindowSpec w{150};
    const double t = x1.grid.time_at(350);
    CHECK_THROWS_AS(estimate_alpha_betas(panel, w, t), NotIndependent);
}

TEST_CASE("wronskian: one-factor cases")
{
    const double step = 0.001;
    const std::size_t m = 500;
    const TimeSeries ramp = sample(0.0, step, 1001, [](double t) { return t; });
    FactorPanel panel(ramp, {ramp});
    const double t = ramp.grid.time_at(800);
    CHECK(wronskian(panel, WindowSpec{m}, t) == window_average(ramp, WindowSpec{m}, t));

    std::vector<double> alt(1001);
    for (std::size_t j = 0; j < 1001; ++j)
        alt[j] = j % 2 == 0 ? 1.0 : -1.0;
    const TimeSeries a = make_series(0.0, step, alt);
    FactorPanel pa(a, {a});
    CHECK(wronskian(pa, WindowSpec{m}, t) == 0.0);
}

TEST_CASE("wronskian: two polynomial factors against direct 2x2 evaluation")
{
    const double step = 0.001;
    const std::size_t m = 400;
    const TimeSeries x1 = sample(0.0, step, 1001, [](double t) { return t; });
    const TimeSeries x2 = sample(0.0, step, 1001, [](double t) { return t * t; });
    FactorPanel panel(x1, {x1, x2});
    const double t = x1.grid.time_at(900);

    const double got = wronskian(panel, WindowSpec{m}, t);
    const DesignMatrix dm = design_matrix(panel, WindowSpec{m}, t, ModelKind::BetasOnly);
    const std::vector<double> square = wronskian_matrix(dm);
    const double direct = square[0] * square[3] - square[1] * square[2];
    CHECK(got != 0.0);
    CHECK((got > 0) == (direct > 0));
    CHECK(close_rel(got, direct, 1e-12));
}

TEST_CASE("estimate_alpha_betas: recovers a constructed affine relation")
{
    const double step = 0.001;
    const std::size_t m = 10000; // step / L = 1e-4
    const TimeSeries x1 = sample(0.0, step, 10001, [](double t) { return t; });
    const TimeSeries y = combine(x1, 5.0, {2.0}, {x1});
    FactorPanel panel(y, {x1});
    const BetaEstimate est = estimate_alpha_betas(panel, WindowSpec{m}, x1.grid.time_at(10000));
    REQUIRE(est.independent);
    REQUIRE(est.alpha.has_value());
    CHECK(close_rel(*est.alpha, 5.0, 1e-6));
    CHECK(close_rel(est.betas[0], 2.0, 1e-6));
}

TEST_CASE("estimate_alpha_betas: constant target")
{
    const double step = 0.01;
    const TimeSeries x1 = sample(0.0, step, 600, [](double t) { return t; });
    const TimeSeries y = sample(0.0, step, 600, [](double) { return 7.0; });
    FactorPanel panel(y, {x1});
    const BetaEstimate est = estimate_alpha_betas(panel, WindowSpec{200}, x1.grid.time_at(500));
    REQUIRE(est.independent);
    CHECK(close_rel(*est.alpha, 7.0, 1e-9));
    CHECK(std::abs(est.betas[0]) <= 1e-9);
}

TEST_CASE("estimate_betas: proportional and bivariate polynomial panels")
{
    const double step = 0.001;
    const TimeSeries x1 = sample(0.0, step, 1001, [](double t) { return t; });
    const TimeSeries y1 = combine(x1, 0.0, {2.0}, {x1});
    FactorPanel p1(y1, {x1});
    const BetaEstimate e1 = estimate_betas(p1, WindowSpec{500}, x1.grid.time_at(900));
    CHECK(close_rel(e1.betas[0], 2.0, 1e-9));
    CHECK(!e1.alpha.has_value());

    const TimeSeries x2 = sample(0.0, step, 1001, [](double t) { return t * t; });
    const TimeSeries y2 = combine(x1, 0.0, {3.0, -1.0}, {x1, x2});
    FactorPanel p2(y2, {x1, x2});
    const BetaEstimate e2 = estimate_betas(p2, WindowSpec{500}, x1.grid.time_at(900));
    CHECK(close_rel(e2.betas[0], 3.0, 1e-6));
    CHECK(close_rel(e2.betas[1], -1.0, 1e-6));
}

TEST_CASE("estimate_alpha_betas: full power basis of degree three")
{
    const double step = 1e-3;
    const std::size_t m = 10000;
    const TimeSeries x1 = sample(0.0, step, m + 1, [](double t) { return t; });
    const TimeSeries x2 = sample(0.0, step, m + 1, [](double t) { return t * t; });
    const TimeSeries x3 = sample(0.0, step, m + 1, [](double t) { return t * t * t; });
    const TimeSeries y = combine(x1, -1.25, {2.0, -3.0, 0.75}, {x1, x2, x3});
    FactorPanel panel(y, {x1, x2, x3});
    const BetaEstimate est = estimate_alpha_betas(panel, WindowSpec{m}, x1.grid.time_at(m));
    REQUIRE(est.independent);
    CHECK(close_rel(*est.alpha, -1.25, 1e-6));
    CHECK(close_rel(est.betas[0], 2.0, 1e-6));
    CHECK(close_rel(est.betas[1], -3.0, 1e-6));
    CHECK(close_rel(est.betas[2], 0.75, 1e-6));
}

TEST_CASE("estimate_betas: proportional factors are degenerate")
{
    const double step = 0.01;
    const TimeSeries x1 = sample(0.0, step, 400, [](double t) { return std::sin(t) + 2.0; });
    std::vector<double> x2v(400);
    for (std::size_t j = 0; j < 400; ++j)
        x2v[j] = 2.0 * x1.values[j];
    const TimeSeries x2 = make_series(0.0, step, x2v);
    FactorPanel panel(x1, {x1, x2});
    CHECK_THROWS_AS(estimate_betas(panel, WindowSpec{100}, x1.grid.time_at(300)), NotIndependent);
}

TEST_CASE("residual_integral: exact fit leaves a negligible window integral")
{
    const double step = 0.001;
    const std::size_t m = 500;
    const double L = static_cast<double>(m) * step;
    const TimeSeries x1 = sample(0.0, step, 1001, [](double t) { return t; });
    const TimeSeries y = combine(x1, 5.0, {2.0}, {x1});
    FactorPanel panel(y, {x1});
    BetaEstimate est = estimate_alpha_betas(panel, WindowSpec{m}, x1.grid.time_at(900));
    const double r = residual_integral(panel, est);
    CHECK(est.residual_integral.has_value());
    CHECK(std::abs(r) <= 1e-9 * L * 7.0);
}

TEST_CASE("residual_integral: alternating noise telescopes")
{
    const double step = 0.001;
    const std::size_t m = 500;
    const double a = 0.01;
    const TimeSeries x1 = sample(0.0, step, 1001, [](double t) { return t; });
    std::vector<double> yv(1001);
    for (std::size_t j = 0; j < 1001; ++j)
        yv[j] = 5.0 + 2.0 * x1.values[j] + a * (j % 2 == 0 ? 1.0 : -1.0);
    const TimeSeries y = make_series(0.0, step, yv);
    FactorPanel panel(y, {x1});

    // residual of the construction's own coefficients: only the noise remains
    BetaEstimate truth;
    truth.alpha = 5.0;
    truth.betas = {2.0};
    truth.window = WindowSpec{m};
    truth.at = x1.grid.time_at(900);
    truth.independent = true;
    CHECK(std::abs(residual_integral(panel, truth)) <= 2 * a * step);

    BetaEstimate fitted = estimate_alpha_betas(panel, WindowSpec{m}, x1.grid.time_at(900));
    CHECK(std::abs(residual_integral(panel, fitted)) <= 2 * a * step);
}

TEST_CASE("residual_integral: omitted intercept shows up away from the fit window")
{
    const double step = 0.001;
    const std::size_t m = 500;
    const double L = static_cast<double>(m) * step;
    const TimeSeries x1 = sample(0.0, step, 1001, [](double t) { return t; });
    const double t_fit = x1.grid.time_at(800);
    const double t_eval = x1.grid.time_at(600);

    auto shifted_residual = [&](double c) {
        const TimeSeries y = combine(x1, c, {2.0}, {x1});
        FactorPanel panel(y, {x1});
        BetaEstimate est = estimate_betas(panel, WindowSpec{m}, t_fit);
        est.at = t_eval; // rate the fit over an earlier window
        return residual_integral(panel, est);
    };

    const double mu_fit = t_fit - (L + step) / 2; // discrete window mean of the ramp
    const double r1 = shifted_residual(5.0);
    CHECK(r1 == doctest::Approx(L * 5.0 * (t_fit - t_eval) / mu_fit).epsilon(1e-6));
    CHECK(shifted_residual(10.0) == doctest::Approx(2.0 * r1).epsilon(1e-9));
}

TEST_CASE("residual_integral: mismatched estimates are rejected")
{
    const TimeSeries x = sample(0.0, 1.0, 50, [](double t) { return t + 1.0; });
    FactorPanel panel(x, {x});
    BetaEstimate est;
    est.betas = {1.0, 2.0}; // wrong count
    est.window = WindowSpec{10};
    est.at = x.grid.time_at(20);
    CHECK_THROWS_AS(residual_integral(panel, est), EstimateMismatch);

    est.betas = {1.0};
    est.at = 20.5; // off the grid
    CHECK_THROWS_AS(residual_integral(panel, est), EstimateMismatch);

    est.at = x.grid.time_at(5); // window does not fit before t
    CHECK_THROWS_AS(residual_integral(panel, est), EstimateMismatch);
}

TEST_CASE("monofactor_ratio_beta: constants, identity, zero denominator")
{
    const std::size_t n = 400;
    const WindowSpec w{80};
    const TimeSeries c1 = sample(0.0, 1.0, n, [](double) { return 3.0; });
    const TimeSeries c2 = sample(0.0, 1.0, n, [](double) { return 2.0; });
    const double t = c1.grid.time_at(300);
    CHECK(monofactor_ratio_beta(c1, c2, w, t) == doctest::Approx(1.5).epsilon(1e-12));
    CHECK(monofactor_ratio_beta(c1, c1, w, t) == 1.0);

    std::vector<double> alt(n);
    for (std::size_t j = 0; j < n; ++j)
        alt[j] = j % 2 == 0 ? 1.0 : -1.0;
    const TimeSeries a = make_series(0.0, 1.0, alt);
    CHECK_THROWS_AS(monofactor_ratio_beta(c1, a, w, t), ZeroDenominator);

    CHECK_THROWS_AS(monofactor_ratio_beta(c1, c2, w, c1.grid.time_at(100)), WindowUnderflow);
}

TEST_CASE("reverse_monofactor: values, identity, involution")
{
    const auto [a, b] = reverse_monofactor(1.0, 2.0);
    CHECK(a == -0.5);
    CHECK(b == 0.5);

    const auto [a0, b0] = reverse_monofactor(0.0, 1.0);
    CHECK(a0 == 0.0);
    CHECK(b0 == 1.0);

    auto gen = rng(31);
    std::uniform_real_distribution<double> dist(-10.0, 10.0);
    for (int k = 0; k < 1000; ++k) {
        const double alpha = dist(gen);
        double beta = dist(gen);
        if (std::abs(beta) < 1e-6)
            beta = 1e-6;
        const auto [ar, br] = reverse_monofactor(alpha, beta);
        const auto [a2, b2] = reverse_monofactor(ar, br);
        CHECK(std::abs(a2 - alpha) <= 1e-15 * std::max(1.0, std::abs(alpha)));
        CHECK(std::abs(b2 - beta) <= 1e-15 * std::max(1.0, std::abs(beta)));
    }

    CHECK_THROWS_AS(reverse_monofactor(1.0, 0.0), ZeroBeta);
}

TEST_CASE("rolling_estimate: constant-coefficient panel is recovered everywhere")
{
    const double step = 0.01;
    const std::size_t n = 900;
    const TimeSeries x1 = sample(0.0, step, n, [](double t) { return std::sin(t) + 2.0; });
    const TimeSeries x2 = sample(0.0, step, n, [](double t) { return t; });
    const TimeSeries y = combine(x1, 1.5, {2.0, -0.5}, {x1, x2});
    FactorPanel panel(y, {x1, x2});

    const std::size_t m = 200;
    const auto ests = rolling_estimate(panel, WindowSpec{m}, ModelKind::WithAlpha);
    REQUIRE(ests.size() == n - m);
    for (const auto& est : ests) {
        REQUIRE(est.independent);
        CHECK(close_rel(*est.alpha, 1.5, 1e-6));
        CHECK(close_rel(est.betas[0], 2.0, 1e-6));
        CHECK(close_rel(est.betas[1], -0.5, 1e-6));
    }
}

TEST_CASE("rolling_estimate: converges within one window after a coefficient switch")
{
    const double step = 0.01;
    const std::size_t n = 1200;
    const std::size_t j_switch = 600;
    const TimeSeries x1 = sample(0.0, step, n, [](double t) { return 2.0 + std::sin(t); });
    std::vector<double> yv(n);
    for (std::size_t j = 0; j < n; ++j)
        yv[j] = (j < j_switch ? 1.0 : 3.0) * x1.values[j];
    const TimeSeries y = make_series(0.0, step, yv);
    FactorPanel panel(y, {x1});

    const std::size_t m = 150;
    const auto ests = rolling_estimate(panel, WindowSpec{m}, ModelKind::BetasOnly);
    for (const auto& est : ests) {
        const std::size_t i = x1.grid.index_of(est.at);
        if (i < j_switch)
            CHECK(close_rel(est.betas[0], 1.0, 1e-9));
        else if (i >= j_switch + m)
            CHECK(close_rel(est.betas[0], 3.0, 0.05));
    }
}

TEST_CASE("rolling_estimate: mid-series dependence is flagged locally")
{
    const double step = 0.01;
    const std::size_t n = 1000;
    const std::size_t lo = 400, hi = 700; // collapsed stretch
    const TimeSeries x1 = sample(0.0, step, n, [](double t) { return 2.0 + std::sin(t); });
    std::vector<double> base(n), collapsed(n);
    for (std::size_t j = 0; j < n; ++j) {
        base[j] = 1.0 + 0.8 * std::cos(0.013 * static_cast<double>(j));
        collapsed[j] = (j >= lo && j < hi) ? 2.0 * x1.values[j] : base[j];
    }
    const TimeSeries x2_base = make_series(0.0, step, base);
    const TimeSeries x2_coll = make_series(0.0, step, collapsed);
    const TimeSeries y = combine(x1, 0.0, {1.0, 1.0}, {x1, x2_base});

    const std::size_t m = 100;
    const auto ref = rolling_estimate(FactorPanel(y, {x1, x2_base}), WindowSpec{m},
                                      ModelKind::BetasOnly);
    const auto got = rolling_estimate(FactorPanel(y, {x1, x2_coll}), WindowSpec{m},
                                      ModelKind::BetasOnly);
    REQUIRE(ref.size() == got.size());
    for (std::size_t k = 0; k < got.size(); ++k) {
        const std::size_t i = m + k; // window [i-m, i)
        if (i - m >= lo && i <= hi) {
            CHECK(!got[k].independent);
            CHECK(got[k].betas.empty());
        } else if (i <= lo ||
                   i - m >= hi + WindowMoments::kReanchorInterval) {
            // past the stretch and past any sliding state anchored inside it
            REQUIRE(got[k].independent);
            CHECK(got[k].betas[0] == ref[k].betas[0]);
            CHECK(got[k].betas[1] == ref[k].betas[1]);
        }
    }
}

TEST_CASE("rolling_estimate: too short a panel")
{
    const TimeSeries x = sample(0.0, 1.0, 10, [](double t) { return t + 1.0; });
    FactorPanel panel(x, {x});
    CHECK_THROWS_AS(rolling_estimate(panel, WindowSpec{10}, ModelKind::BetasOnly), EmptySeries);
}

TEST_CASE("estimate: window must span at least the system rows")
{
    const double step = 0.01;
    const TimeSeries x1 = sample(0.0, step, 100, [](double t) { return 2.0 + std::sin(t); });
    const TimeSeries x2 = sample(0.0, step, 100, [](double t) { return std::cos(3 * t); });
    const TimeSeries x3 = sample(0.0, step, 100, [](double t) { return t; });
    FactorPanel panel(x1, {x1, x2, x3});
    // with-alpha n=3 needs four average orders; a 3-sample window cannot carry them
    CHECK_THROWS_AS(estimate_alpha_betas(panel, WindowSpec{3}, x1.grid.time_at(50)),
                    WindowUnderflow);
}

TEST_CASE("independence threshold: a strict epsilon rejects ordinary panels")
{
    const double step = 0.01;
    const TimeSeries x1 = sample(0.0, step, 400, [](double t) { return 2.0 + std::sin(t); });
    const TimeSeries x2 = sample(0.0, step, 400, [](double t) { return t; });
    const TimeSeries y = combine(x1, 0.0, {1.0, 2.0}, {x1, x2});
    FactorPanel panel(y, {x1, x2});
    const double t = x1.grid.time_at(300);
    CHECK_NOTHROW(estimate_betas(panel, WindowSpec{150}, t));
    // Hadamard: |det| < product of column norms unless the columns are orthogonal
    CHECK_THROWS_AS(estimate_betas(panel, WindowSpec{150}, t, IndependenceThreshold{1.0}),
                    NotIndependent);
}

TEST_CASE("multiwindow_estimate: single window is a passthrough")
{
    const double step = 0.01;
    const TimeSeries x1 = sample(0.0, step, 500, [](double t) { return 2.0 + std::sin(t); });
    const TimeSeries y = combine(x1, 0.0, {1.7}, {x1});
    FactorPanel panel(y, {x1});
    const WindowSpec w{120};
    const double t = x1.grid.time_at(400);
    const BetaEstimate direct = estimate_betas(panel, w, t);
    const BetaEstimate multi = multiwindow_estimate(panel, {w}, t, ModelKind::BetasOnly);
    CHECK(multi.window == w);
    CHECK(multi.betas[0] == direct.betas[0]);
    CHECK(multi.wronskian == direct.wronskian);
}

TEST_CASE("multiwindow_estimate: picks the window with the healthier determinant")
{
    // X2 collapses onto 2*X1 late in the series, so a short window sees a
    // degenerate pair while a long one reaches the earlier distinct stretch.
    const double step = 0.01;
    const std::size_t n = 1200;
    const std::size_t lo = 650; // collapse start
    const TimeSeries x1 = sample(0.0, step, n, [](double t) { return 2.0 + std::sin(t); });
    std::vector<double> x2v(n);
    for (std::size_t j = 0; j < n; ++j) {
        x2v[j] = j < lo ? 1.0 + 0.8 * std::cos(0.017 * static_cast<double>(j))
                        : 2.0 * x1.values[j];
    }
    const TimeSeries x2 = make_series(0.0, step, x2v);
    const TimeSeries y = combine(x1, 0.0, {1.0, 0.5}, {x1, x2});
    FactorPanel panel(y, {x1, x2});

    const WindowSpec short_w{100};
    const WindowSpec long_w{500};
    const double t = x1.grid.time_at(lo + 200); // short window inside the collapse

    const double det_short = wronskian(panel, short_w, t);
    const double det_long = wronskian(panel, long_w, t);
    CHECK(std::abs(det_long) >= 10.0 * std::abs(det_short));

    const BetaEstimate est =
        multiwindow_estimate(panel, {short_w, long_w}, t, ModelKind::BetasOnly);
    CHECK(est.window == long_w);
    const BetaEstimate direct = estimate_betas(panel, long_w, t);
    CHECK(est.betas[0] == direct.betas[0]);
    CHECK(est.betas[1] == direct.betas[1]);
}

TEST_CASE("multiwindow_estimate: all windows degenerate")
{
    const TimeSeries c = sample(0.0, 1.0, 400, [](double) { return 3.0; });
    FactorPanel panel(c, {c, c});
    CHECK_THROWS_AS(multiwindow_estimate(panel, {WindowSpec{50}, WindowSpec{100}},
                                         c.grid.time_at(300), ModelKind::BetasOnly),
                    AllDegenerate);
}

TEST_CASE("volatility_beta: recovers the fluctuation scaling ratio")
{
    const std::size_t n = 400;
    std::vector<double> f(n);
    for (std::size_t j = 0; j < n; ++j)
        f[j] = std::sin(2 * kPi * static_cast<double>(j) / 50.0) +
               0.5 * (j % 2 == 0 ? 1.0 : -1.0);
    std::vector<double> yv(n), xv(n);
    for (std::size_t j = 0; j < n; ++j) {
        yv[j] = 1.0 + 3.0 * f[j];
        xv[j] = 3.0 + 2.0 * f[j];
    }
    FactorPanel panel(make_series(0.0, 1.0, yv), {make_series(0.0, 1.0, xv)});
    const auto ests = volatility_beta(panel, WindowSpec{60}, WindowSpec{40},
                                      ModelKind::BetasOnly);
    REQUIRE(!ests.empty());
    for (const auto& est : ests) {
        REQUIRE(est.independent);
        CHECK(close_rel(est.betas[0], 1.5, 0.02));
    }
}

TEST_CASE("volatility_beta: zero-volatility factor is degenerate everywhere")
{
    const std::size_t n = 300;
    const TimeSeries y = sample(0.0, 1.0, n, [](double t) { return std::sin(t) + 2.0; });
    const TimeSeries c = sample(0.0, 1.0, n, [](double) { return 5.0; });
    FactorPanel panel(y, {c});
    const auto ests = volatility_beta(panel, WindowSpec{40}, WindowSpec{30},
                                      ModelKind::BetasOnly);
    REQUIRE(!ests.empty());
    for (const auto& est : ests)
        CHECK(!est.independent);
}

TEST_CASE("volatility_beta: a panel against itself gives beta one")
{
    const std::size_t n = 300;
    const TimeSeries x = sample(0.0, 1.0, n, [](double t) {
        return 10.0 + std::sin(0.21 * t) + 0.4 * std::sin(2.7 * t);
    });
    FactorPanel panel(x, {x});
    const auto ests = volatility_beta(panel, WindowSpec{50}, WindowSpec{30},
                                      ModelKind::BetasOnly);
    REQUIRE(!ests.empty());
    for (const auto& est : ests) {
        REQUIRE(est.independent);
        CHECK(est.betas[0] == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("scaling laws: factor, target, permutation")
{
    const double step = 0.01;
    const std::size_t n = 800;
    const TimeSeries x1 = sample(0.0, step, n, [](double t) { return 2.0 + std::sin(t); });
    const TimeSeries x2 = sample(0.0, step, n, [](double t) { return t + 0.3 * std::cos(3 * t); });
    const TimeSeries y = combine(x1, 0.7, {2.0, -1.2}, {x1, x2});
    const WindowSpec w{250};
    const double t = x1.grid.time_at(700);

    const BetaEstimate base = estimate_alpha_betas(FactorPanel(y, {x1, x2}), w, t);

    const double c = 4.0;
    std::vector<double> x1s(n);
    for (std::size_t j = 0; j < n; ++j)
        x1s[j] = c * x1.values[j];
    const BetaEstimate fscaled =
        estimate_alpha_betas(FactorPanel(y, {make_series(0.0, step, x1s), x2}), w, t);
    CHECK(close_rel(fscaled.betas[0], base.betas[0] / c, 1e-12));
    CHECK(close_rel(fscaled.betas[1], base.betas[1], 1e-12));
    CHECK(close_rel(*fscaled.alpha, *base.alpha, 1e-12));

    const double cy = -3.0;
    std::vector<double> ys(n);
    for (std::size_t j = 0; j < n; ++j)
        ys[j] = cy * y.values[j];
    const BetaEstimate tscaled =
        estimate_alpha_betas(FactorPanel(make_series(0.0, step, ys), {x1, x2}), w, t);
    CHECK(close_rel(*tscaled.alpha, cy * *base.alpha, 1e-12));
    CHECK(close_rel(tscaled.betas[0], cy * base.betas[0], 1e-12));
    CHECK(close_rel(tscaled.betas[1], cy * base.betas[1], 1e-12));

    const BetaEstimate permuted = estimate_alpha_betas(FactorPanel(y, {x2, x1}), w, t);
    CHECK(close_rel(permuted.betas[0], base.betas[1], 1e-12));
    CHECK(close_rel(permuted.betas[1], base.betas[0], 1e-12));
    CHECK(close_rel(*permuted.alpha, *base.alpha, 1e-12));
}

TEST_CASE("per-row rescaling leaves Cramer ratios unchanged")
{
    const double step = 0.01;
    const std::size_t n = 600;
    const TimeSeries x1 = sample(0.0, step, n, [](double t) { return 2.0 + std::sin(t); });
    const TimeSeries x2 = sample(0.0, step, n, [](double t) { return t; });
    const TimeSeries y = combine(x1, 0.7, {2.0, -1.2}, {x1, x2});
    FactorPanel panel(y, {x1, x2});
    const WindowSpec w{200};
    const double t = x1.grid.time_at(500);

    const DesignMatrix dm = design_matrix(panel, w, t, ModelKind::WithAlpha);
    REQUIRE(dm.rows == 3);
    std::vector<double> square = wronskian_matrix(dm);
    std::vector<double> rhs(dm.rows);
    for (std::size_t r = 0; r < dm.rows; ++r)
        rhs[r] = dm(r, 0);

    const std::vector<double> plain = cofactor_cramer(square, rhs, dm.rows);

    const double row_factors[] = {3.0, 0.25, -7.0};
    std::vector<double> scaled = square;
    std::vector<double> scaled_rhs = rhs;
    for (std::size_t r = 0; r < dm.rows; ++r) {
        scaled_rhs[r] *= row_factors[r];
        for (std::size_t col = 0; col < dm.rows; ++col)
            scaled[r * dm.rows + col] *= row_factors[r];
    }
    const std::vector<double> rescaled = cofactor_cramer(scaled, scaled_rhs, dm.rows);

    const BetaEstimate est = estimate_alpha_betas(panel, w, t);
    for (std::size_t j = 0; j < dm.rows; ++j)
        CHECK(close_rel(plain[j], rescaled[j], 1e-12));
    CHECK(close_rel(plain[0], *est.alpha, 1e-9));
    CHECK(close_rel(plain[1], est.betas[0], 1e-9));
    CHECK(close_rel(plain[2], est.betas[1], 1e-9));
}

TEST_CASE("LU wronskian matches the cofactor oracle for n up to 3")
{
    // well-separated oscillations keep the determinant well conditioned, so
    // the two algorithms must agree tightly
    const double step = 0.01;
    const std::size_t n = 700;
    const TimeSeries x1 = sample(0.0, step, n, [](double t) { return 2.0 + std::sin(1.1 * t); });
    const TimeSeries x2 = sample(0.0, step, n, [](double t) { return 1.0 + std::cos(2.3 * t); });
    const TimeSeries x3 = sample(0.0, step, n, [](double t) { return 0.5 + std::sin(3.9 * t); });
    const WindowSpec w{180};
    const double t = x1.grid.time_at(600);

    const std::vector<std::vector<TimeSeries>> cases = {{x1}, {x1, x2}, {x1, x2, x3}};
    for (const auto& factors : cases) {
        FactorPanel panel(x1, factors);
        const DesignMatrix with_one = design_matrix(panel, w, t, ModelKind::WithAlpha);
        CHECK(close_rel(wronskian_with_one(panel, w, t),
                        cofactor_det(wronskian_matrix(with_one), with_one.rows), 1e-12));
        const DesignMatrix bare = design_matrix(panel, w, t, ModelKind::BetasOnly);
        CHECK(close_rel(wronskian(panel, w, t),
                        cofactor_det(wronskian_matrix(bare), bare.rows), 1e-12));
    }
}

TEST_CASE("raw-moment matrix gives the same bivariate betas")
{
    auto gen = rng(77);
    std::uniform_real_distribution<double> coeff(-3.0, 3.0);
    std::uniform_real_distribution<double> noise(-0.05, 0.05);
    for (int rep = 0; rep < 20; ++rep) {
        const std::size_t n = 150;
        const std::size_t m = 30 + static_cast<std::size_t>(rep);
        std::vector<double> x1v(n), x2v(n), yv(n);
        const double b1 = coeff(gen), b2 = coeff(gen);
        for (std::size_t j = 0; j < n; ++j) {
            const double tj = static_cast<double>(j);
            x1v[j] = 1.0 + std::sin(0.07 * tj) + noise(gen);
            x2v[j] = 0.5 + 0.03 * tj + noise(gen);
            yv[j] = b1 * x1v[j] + b2 * x2v[j] + noise(gen);
        }
        const TimeSeries x1 = make_series(0.0, 1.0, x1v);
        const TimeSeries x2 = make_series(0.0, 1.0, x2v);
        const TimeSeries y = make_series(0.0, 1.0, yv);
        FactorPanel panel(y, {x1, x2});
        const std::size_t i = n - 1;
        const double t = x1.grid.time_at(i);

        // raw-moment formulation: rows (integral X, integral tau X)
        auto raw_row = [&](const TimeSeries& s, bool weighted) {
            double sum = 0.0;
            for (std::size_t j = i - m; j < i; ++j)
                sum += (weighted ? s.grid.time_at(j) : 1.0) * s.values[j];
            return sum * s.grid.step;
        };
        const std::vector<double> B = {raw_row(x1, false), raw_row(x2, false),
                                       raw_row(x1, true), raw_row(x2, true)};
        const std::vector<double> rhs = {raw_row(y, false), raw_row(y, true)};
        const std::vector<double> beta_raw = cofactor_cramer(B, rhs, 2);

        const BetaEstimate est = estimate_betas(panel, WindowSpec{m}, t);
        CHECK(close_rel(est.betas[0], beta_raw[0], 1e-10));
        CHECK(close_rel(est.betas[1], beta_raw[1], 1e-10));
    }
}

TEST_CASE("rolling fast path matches direct single-point estimates")
{
    const double step = 1.0;
    const std::size_t n = 3000;
    auto gen = rng(55);
    std::normal_distribution<double> shock(0.0, 0.01);
    std::vector<double> x1v(n), x2v(n), yv(n);
    for (std::size_t j = 0; j < n; ++j) {
        x1v[j] = shock(gen) + 0.0005;
        x2v[j] = shock(gen) - 0.0003;
        yv[j] = 1.2 * x1v[j] - 0.4 * x2v[j] + shock(gen) * 0.1;
    }
    const TimeSeries x1 = make_series(0.0, step, x1v);
    const TimeSeries x2 = make_series(0.0, step, x2v);
    const TimeSeries y = make_series(0.0, step, yv);
    FactorPanel panel(y, {x1, x2});

    const WindowSpec w{300};
    const auto rolled = rolling_estimate(panel, w, ModelKind::BetasOnly);
    for (std::size_t k = 7; k < rolled.size(); k += 131) {
        if (!rolled[k].independent)
            continue;
        const BetaEstimate direct = estimate_betas(panel, w, rolled[k].at);
        CHECK(close_rel(rolled[k].betas[0], direct.betas[0], 1e-12));
        CHECK(close_rel(rolled[k].betas[1], direct.betas[1], 1e-12));
        CHECK(close_rel(rolled[k].wronskian, direct.wronskian, 1e-12, 1e-300));
    }
}
