#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "wronbeta/series.hpp"

namespace wronbeta {

/// One target series Y and n >= 1 factor series X_1..X_n on a shared grid.
class FactorPanel {
public:
    FactorPanel(TimeSeries target, std::vector<TimeSeries> factors);

    const TimeSeries& target() const { return target_; }
    const std::vector<TimeSeries>& factors() const { return factors_; }
    const SamplingGrid& grid() const { return target_.grid; }
    std::size_t factor_count() const { return factors_.size(); }

    /// Largest warm-up count across target and factors; estimation windows
    /// must not reach into it.
    std::size_t warmup() const;

private:
    TimeSeries target_;
    std::vector<TimeSeries> factors_;
};

enum class ModelKind { WithAlpha, BetasOnly };

/// Determinant-vs-scale cutoff deciding whether the factors are independent
/// enough for Cramer's rule. The scale is the product of the column 2-norms
/// of the window-local design matrix, so the test is unit-free.
struct IndependenceThreshold {
    double epsilon = 1e-8;
};

/// Coefficients of the windowed linear model at one evaluation time.
struct BetaEstimate {
    std::optional<double> alpha;     // present only for the with-alpha model
    std::vector<double> betas;       // empty when not independent
    double wronskian = 0.0;
    WindowSpec window{};
    double at = 0.0;
    bool independent = false;
    std::optional<double> residual_integral;
};

/// Stacked window averages of increasing order: rows k = 1..n+1 (with alpha)
/// or 1..n (betas only); columns ordered Y, [1,] X_1..X_n. Entries are the
/// order-k averages at (L, t).
struct DesignMatrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> entries; // row-major
    ModelKind kind = ModelKind::WithAlpha;
    WindowSpec window{};
    double at = 0.0;

    double operator()(std::size_t r, std::size_t c) const { return entries[r * cols + c]; }
};

DesignMatrix design_matrix(const FactorPanel& panel, WindowSpec w, double t, ModelKind kind);

/// Determinant of the (n+1)x(n+1) matrix with columns (1, X_1..X_n) of window
/// averages of orders 1..n+1. Zero (below threshold) means the factors plus
/// the constant are linearly dependent over the window.
double wronskian_with_one(const FactorPanel& panel, WindowSpec w, double t);

/// The n x n variant without the constant column, orders 1..n.
double wronskian(const FactorPanel& panel, WindowSpec w, double t);

/// Solves avg(Y) = alpha + sum_i beta_i avg(X_i) over the window by Cramer's
/// rule on the order-1..n+1 average equations. Throws NotIndependent when the
/// determinant test fails.
BetaEstimate estimate_alpha_betas(const FactorPanel& panel, WindowSpec w, double t,
                                  const IndependenceThreshold& thr = {});

/// Intercept-free variant: avg(Y) = sum_i beta_i avg(X_i), orders 1..n.
BetaEstimate estimate_betas(const FactorPanel& panel, WindowSpec w, double t,
                            const IndependenceThreshold& thr = {});

/// Integral over [t-L, t) of the pointwise residual Y - alpha - sum beta_i X_i
/// for the coefficients carried by `est` (alpha taken as 0 when absent).
/// Stores the value into est.residual_integral and returns it.
double residual_integral(const FactorPanel& panel, BetaEstimate& est);

/// Double-smoothed monofactor ratio: integral of the window-average series of
/// `num` over [t-L, t), divided by the same integral for `den`. Requires both
/// window-average series to exist over the outer window (t >= start + 2L).
double monofactor_ratio_beta(const TimeSeries& num, const TimeSeries& den, WindowSpec w,
                             double t);

/// Inverts avg(Y) = alpha + beta * avg(X) into avg(X) = -alpha/beta + (1/beta) avg(Y).
/// Returns (-alpha/beta, 1/beta); an involution.
std::pair<double, double> reverse_monofactor(double alpha, double beta);

/// One estimate per evaluation time with a full window clear of warm-up data,
/// computed with O(1) sliding moment updates. Points failing the independence
/// test are emitted flagged, with no coefficients.
std::vector<BetaEstimate> rolling_estimate(const FactorPanel& panel, WindowSpec w,
                                           ModelKind kind,
                                           const IndependenceThreshold& thr = {});

/// Evaluates every window at t and keeps the one with the largest determinant
/// relative to its scale (ties go to the longest window). Throws AllDegenerate
/// when no window passes the independence test.
BetaEstimate multiwindow_estimate(const FactorPanel& panel,
                                  const std::vector<WindowSpec>& windows, double t,
                                  ModelKind kind, const IndependenceThreshold& thr = {});

/// Rolling multiwindow selection over every time where all windows are full.
std::vector<BetaEstimate> rolling_multiwindow(const FactorPanel& panel,
                                              const std::vector<WindowSpec>& windows,
                                              ModelKind kind,
                                              const IndependenceThreshold& thr = {});

/// Betas of the volatility series: builds vol(Y), vol(X_i) with window w_vol,
/// then runs rolling_estimate with w_beta on the volatility panel.
std::vector<BetaEstimate> volatility_beta(const FactorPanel& panel, WindowSpec w_vol,
                                          WindowSpec w_beta, ModelKind kind,
                                          const IndependenceThreshold& thr = {});

} // namespace wronbeta
