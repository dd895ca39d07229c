#include "wronbeta/beta_engine.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "wronbeta/moments.hpp"
#include "wronbeta/series_core.hpp"
#include "wronbeta/window_moments.hpp"

namespace wronbeta {

FactorPanel::FactorPanel(TimeSeries target, std::vector<TimeSeries> factors)
    : target_(std::move(target)), factors_(std::move(factors))
{
    if (factors_.empty())
        throw Error("FactorPanel: need at least one factor");
    for (const auto& f : factors_) {
        if (f.grid != target_.grid)
            throw GridMismatch("FactorPanel: factor grid differs from target grid");
    }
}

std::size_t FactorPanel::warmup() const
{
    std::size_t w = target_.warmup;
    for (const auto& f : factors_)
        w = std::max(w, f.warmup);
    return w;
}

namespace {

// Determinant by LU with partial pivoting; a is row-major k x k, consumed.
double lu_determinant(std::vector<double> a, std::size_t k)
{
    double det = 1.0;
    for (std::size_t col = 0; col < k; ++col) {
        std::size_t piv = col;
        double best = std::abs(a[col * k + col]);
        for (std::size_t r = col + 1; r < k; ++r) {
            const double v = std::abs(a[r * k + col]);
            if (v > best) {
                best = v;
                piv = r;
            }
        }
        if (best == 0.0)
            return 0.0;
        if (piv != col) {
            for (std::size_t c = 0; c < k; ++c)
                std::swap(a[col * k + c], a[piv * k + c]);
            det = -det;
        }
        const double pivot = a[col * k + col];
        det *= pivot;
        for (std::size_t r = col + 1; r < k; ++r) {
            const double f = a[r * k + col] / pivot;
            if (f == 0.0)
                continue;
            for (std::size_t c = col; c < k; ++c)
                a[r * k + c] -= f * a[col * k + c];
        }
    }
    return det;
}

// Window-local design system at one evaluation point. Row k (1-based) holds
// the recentred order-k averages M_{k-1}/m^k; the common row factors
// L^{k-1}/(k-1)! cancel in every Cramer ratio.
struct LocalSystem {
    std::size_t k = 0;           // rows == solve columns
    std::vector<double> matrix;  // row-major k x k, columns [1,] X_1..X_n
    std::vector<double> rhs;     // recentred Y averages
};

std::size_t row_count(std::size_t n_factors, ModelKind kind)
{
    return kind == ModelKind::WithAlpha ? n_factors + 1 : n_factors;
}

LocalSystem build_system(std::span<const double> target_m,
                         std::span<const std::vector<double>> factor_m,
                         std::span<const double> unit_m, std::size_t m, ModelKind kind)
{
    const std::size_t n = factor_m.size();
    const std::size_t k = row_count(n, kind);
    LocalSystem sys;
    sys.k = k;
    sys.matrix.resize(k * k);
    sys.rhs.resize(k);

    double m_pow = static_cast<double>(m); // m^row, row 1-based
    for (std::size_t row = 0; row < k; ++row) {
        std::size_t col = 0;
        if (kind == ModelKind::WithAlpha)
            sys.matrix[row * k + col++] = unit_m[row] / m_pow;
        for (std::size_t f = 0; f < n; ++f)
            sys.matrix[row * k + col++] = factor_m[f][row] / m_pow;
        sys.rhs[row] = target_m[row] / m_pow;
        m_pow *= static_cast<double>(m);
    }
    return sys;
}

// Product of the row factors L^{k-1}/(k-1)! turning the recentred determinant
// back into the Wronskian value in original units.
double row_factor_product(double L, std::size_t k)
{
    double prod = 1.0;
    double f = 1.0; // L^{k-1}/(k-1)!
    for (std::size_t row = 1; row <= k; ++row) {
        prod *= f;
        f *= L / static_cast<double>(row);
    }
    return prod;
}

struct PointEval {
    double det_local = 0.0;
    double scale = 0.0;
    double wronskian = 0.0;
    bool independent = false;
    std::vector<double> coeffs; // filled only when independent
};

PointEval evaluate_system(const LocalSystem& sys, double L, double epsilon)
{
    PointEval ev;
    const std::size_t k = sys.k;
    ev.det_local = lu_determinant(sys.matrix, k);

    ev.scale = 1.0;
    for (std::size_t c = 0; c < k; ++c) {
        double s = 0.0;
        for (std::size_t r = 0; r < k; ++r) {
            const double v = sys.matrix[r * k + c];
            s += v * v;
        }
        ev.scale *= std::sqrt(s);
    }

    ev.wronskian = ev.det_local * row_factor_product(L, k);
    ev.independent = ev.det_local != 0.0 && ev.scale > 0.0 &&
                     std::abs(ev.det_local) >= epsilon * ev.scale;
    if (!ev.independent)
        return ev;

    ev.coeffs.resize(k);
    for (std::size_t j = 0; j < k; ++j) {
        std::vector<double> replaced = sys.matrix;
        for (std::size_t r = 0; r < k; ++r)
            replaced[r * k + j] = sys.rhs[r];
        ev.coeffs[j] = lu_determinant(std::move(replaced), k) / ev.det_local;
    }
    return ev;
}

// Window placement checks shared by the point operations.
std::size_t checked_end_index(const FactorPanel& panel, WindowSpec w, double t,
                              std::size_t k_rows)
{
    const std::size_t m = w.length_samples;
    const SamplingGrid& g = panel.grid();
    if (m > g.count)
        throw EmptySeries("window of " + std::to_string(m) + " samples does not fit a series of " +
                          std::to_string(g.count));
    if (m < k_rows)
        throw WindowUnderflow("window of " + std::to_string(m) +
                              " samples cannot support " + std::to_string(k_rows) +
                              " average orders");
    const std::size_t i = g.index_of(t);
    if (i < m + panel.warmup())
        throw WindowUnderflow("window at t = " + std::to_string(t) +
                              " reaches before the first usable sample");
    return i;
}

struct PointMoments {
    std::vector<double> target;
    std::vector<std::vector<double>> factors;
    std::vector<double> unit;
};

PointMoments point_moments(const FactorPanel& panel, std::size_t end_index, std::size_t m,
                           std::size_t k_rows)
{
    PointMoments pm;
    pm.target.resize(k_rows);
    WindowMoments::compute(panel.target().values, end_index, m, pm.target);
    pm.factors.resize(panel.factor_count());
    for (std::size_t f = 0; f < panel.factor_count(); ++f) {
        pm.factors[f].resize(k_rows);
        WindowMoments::compute(panel.factors()[f].values, end_index, m, pm.factors[f]);
    }
    pm.unit = unit_window_moments(m, static_cast<unsigned>(k_rows - 1));
    return pm;
}

PointEval evaluate_point(const FactorPanel& panel, WindowSpec w, double t, ModelKind kind,
                         double epsilon)
{
    const std::size_t k = row_count(panel.factor_count(), kind);
    const std::size_t i = checked_end_index(panel, w, t, k);
    const PointMoments pm = point_moments(panel, i, w.length_samples, k);
    const LocalSystem sys = build_system(pm.target, pm.factors, pm.unit, w.length_samples, kind);
    return evaluate_system(sys, w.length(panel.grid()), epsilon);
}

BetaEstimate make_estimate(const PointEval& ev, ModelKind kind, WindowSpec w, double t)
{
    BetaEstimate est;
    est.window = w;
    est.at = t;
    est.wronskian = ev.wronskian;
    est.independent = ev.independent;
    if (!ev.independent)
        return est;
    if (kind == ModelKind::WithAlpha) {
        est.alpha = ev.coeffs[0];
        est.betas.assign(ev.coeffs.begin() + 1, ev.coeffs.end());
    } else {
        est.betas = ev.coeffs;
    }
    return est;
}

BetaEstimate estimate_or_throw(const FactorPanel& panel, WindowSpec w, double t,
                               ModelKind kind, const IndependenceThreshold& thr)
{
    const PointEval ev = evaluate_point(panel, w, t, kind, thr.epsilon);
    if (!ev.independent)
        throw NotIndependent("factors fail the independence test at t = " + std::to_string(t));
    return make_estimate(ev, kind, w, t);
}

} // namespace

DesignMatrix design_matrix(const FactorPanel& panel, WindowSpec w, double t, ModelKind kind)
{
    const std::size_t n = panel.factor_count();
    const std::size_t k = row_count(n, kind);
    const std::size_t i = checked_end_index(panel, w, t, k);
    const std::size_t m = w.length_samples;
    const PointMoments pm = point_moments(panel, i, m, k);
    const double L = w.length(panel.grid());

    DesignMatrix dm;
    dm.rows = k;
    dm.cols = k + 1;
    dm.kind = kind;
    dm.window = w;
    dm.at = t;
    dm.entries.resize(dm.rows * dm.cols);

    double f = 1.0;                        // L^{k-1}/(k-1)!
    double m_pow = static_cast<double>(m); // m^row
    for (std::size_t row = 0; row < k; ++row) {
        std::size_t col = 0;
        dm.entries[row * dm.cols + col++] = f * pm.target[row] / m_pow;
        if (kind == ModelKind::WithAlpha)
            dm.entries[row * dm.cols + col++] = f * pm.unit[row] / m_pow;
        for (std::size_t x = 0; x < n; ++x)
            dm.entries[row * dm.cols + col++] = f * pm.factors[x][row] / m_pow;
        f *= L / static_cast<double>(row + 1);
        m_pow *= static_cast<double>(m);
    }
    return dm;
}

double wronskian_with_one(const FactorPanel& panel, WindowSpec w, double t)
{
    return evaluate_point(panel, w, t, ModelKind::WithAlpha, 0.0).wronskian;
}

double wronskian(const FactorPanel& panel, WindowSpec w, double t)
{
    return evaluate_point(panel, w, t, ModelKind::BetasOnly, 0.0).wronskian;
}

BetaEstimate estimate_alpha_betas(const FactorPanel& panel, WindowSpec w, double t,
                                  const IndependenceThreshold& thr)
{
    return estimate_or_throw(panel, w, t, ModelKind::WithAlpha, thr);
}

BetaEstimate estimate_betas(const FactorPanel& panel, WindowSpec w, double t,
                            const IndependenceThreshold& thr)
{
    return estimate_or_throw(panel, w, t, ModelKind::BetasOnly, thr);
}

double residual_integral(const FactorPanel& panel, BetaEstimate& est)
{
    const std::size_t n = panel.factor_count();
    if (est.betas.size() != n)
        throw EstimateMismatch("estimate carries " + std::to_string(est.betas.size()) +
                               " betas for a panel of " + std::to_string(n) + " factors");
    const std::size_t m = est.window.length_samples;
    std::size_t i = 0;
    try {
        i = panel.grid().index_of(est.at);
    } catch (const Error&) {
        throw EstimateMismatch("estimate time does not sit on the panel grid");
    }
    if (m < 1 || m > i)
        throw EstimateMismatch("estimate window does not fit the panel grid at its time");

    const double alpha = est.alpha.value_or(0.0);
    double sum = 0.0;
    for (std::size_t j = i - m; j < i; ++j) {
        double e = panel.target().values[j] - alpha;
        for (std::size_t f = 0; f < n; ++f)
            e -= est.betas[f] * panel.factors()[f].values[j];
        sum += e;
    }
    const double value = sum * panel.grid().step;
    est.residual_integral = value;
    return value;
}

double monofactor_ratio_beta(const TimeSeries& num, const TimeSeries& den, WindowSpec w,
                             double t)
{
    if (num.grid != den.grid)
        throw GridMismatch("monofactor_ratio_beta: series on different grids");
    const std::size_t m = w.length_samples;
    const SamplingGrid& g = num.grid;
    if (m < 1 || 2 * m > g.count)
        throw EmptySeries("monofactor_ratio_beta: two stacked windows of " + std::to_string(m) +
                          " samples do not fit");
    const std::size_t i = g.index_of(t);
    if (i < 2 * m + std::max(num.warmup, den.warmup))
        throw WindowUnderflow("monofactor_ratio_beta: outer window at t = " + std::to_string(t) +
                              " needs inner averages before the first usable sample");

    // integral over [t-L, t) of the window-average series of x
    auto second_stage = [&](const TimeSeries& x) {
        std::vector<double> prefix(g.count + 1, 0.0);
        for (std::size_t j = 0; j < g.count; ++j)
            prefix[j + 1] = prefix[j] + x.values[j];
        double sum = 0.0;
        for (std::size_t j = i - m; j < i; ++j)
            sum += (prefix[j] - prefix[j - m]) / static_cast<double>(m);
        return sum * g.step;
    };

    const double denominator = second_stage(den);
    if (denominator == 0.0)
        throw ZeroDenominator("monofactor_ratio_beta: denominator integral is zero at t = " +
                              std::to_string(t));
    return second_stage(num) / denominator;
}

std::pair<double, double> reverse_monofactor(double alpha, double beta)
{
    if (beta == 0.0)
        throw ZeroBeta("reverse_monofactor: beta is zero");
    return {-alpha / beta, 1.0 / beta};
}

std::vector<BetaEstimate> rolling_estimate(const FactorPanel& panel, WindowSpec w,
                                           ModelKind kind, const IndependenceThreshold& thr)
{
    const std::size_t n = panel.factor_count();
    const std::size_t k = row_count(n, kind);
    const SamplingGrid& g = panel.grid();
    const std::size_t m = w.length_samples;
    if (m > g.count || m < k)
        throw EmptySeries("rolling_estimate: window of " + std::to_string(m) +
                          " samples is unusable on this panel");
    const std::size_t first = m + panel.warmup();
    if (first > g.count - 1)
        throw EmptySeries("rolling_estimate: no full-window evaluation points");

    const unsigned max_power = static_cast<unsigned>(k - 1);
    WindowMoments target_mom(panel.target().values, m, max_power);
    std::vector<WindowMoments> factor_mom;
    factor_mom.reserve(n);
    for (const auto& f : panel.factors())
        factor_mom.emplace_back(f.values, m, max_power);

    target_mom.seek(first);
    for (auto& fm : factor_mom)
        fm.seek(first);
    const std::vector<double> unit = unit_window_moments(m, max_power);
    const double L = w.length(g);

    std::vector<BetaEstimate> out;
    out.reserve(g.count - first);
    std::vector<double> tgt(k);
    std::vector<std::vector<double>> fac(n, std::vector<double>(k));
    for (std::size_t i = first;; ++i) {
        for (std::size_t q = 0; q < k; ++q)
            tgt[q] = target_mom.moment(static_cast<unsigned>(q));
        for (std::size_t f = 0; f < n; ++f)
            for (std::size_t q = 0; q < k; ++q)
                fac[f][q] = factor_mom[f].moment(static_cast<unsigned>(q));

        const LocalSystem sys = build_system(tgt, fac, unit, m, kind);
        const PointEval ev = evaluate_system(sys, L, thr.epsilon);
        out.push_back(make_estimate(ev, kind, w, g.time_at(i)));

        if (i + 1 > g.count - 1)
            break;
        target_mom.advance();
        for (auto& fm : factor_mom)
            fm.advance();
    }
    return out;
}

namespace {

struct WindowRanking {
    std::size_t best = 0;  // index into windows
    bool any_independent = false;
};

WindowRanking rank_windows(const FactorPanel& panel, const std::vector<WindowSpec>& windows,
                           double t, ModelKind kind, double epsilon)
{
    WindowRanking rank;
    double best_ratio = -1.0;
    for (std::size_t wi = 0; wi < windows.size(); ++wi) {
        const PointEval ev = evaluate_point(panel, windows[wi], t, kind, epsilon);
        const double ratio = ev.scale > 0.0 ? std::abs(ev.det_local) / ev.scale : 0.0;
        const bool better =
            ratio > best_ratio ||
            (ratio == best_ratio &&
             windows[wi].length_samples > windows[rank.best].length_samples);
        if (better) {
            best_ratio = ratio;
            rank.best = wi;
        }
        rank.any_independent = rank.any_independent || ev.independent;
    }
    return rank;
}

} // namespace

BetaEstimate multiwindow_estimate(const FactorPanel& panel,
                                  const std::vector<WindowSpec>& windows, double t,
                                  ModelKind kind, const IndependenceThreshold& thr)
{
    if (windows.empty())
        throw Error("multiwindow_estimate: empty window list");
    const WindowRanking rank = rank_windows(panel, windows, t, kind, thr.epsilon);
    if (!rank.any_independent)
        throw AllDegenerate("every window fails the independence test at t = " +
                            std::to_string(t));
    return estimate_or_throw(panel, windows[rank.best], t, kind, thr);
}

std::vector<BetaEstimate> rolling_multiwindow(const FactorPanel& panel,
                                              const std::vector<WindowSpec>& windows,
                                              ModelKind kind, const IndependenceThreshold& thr)
{
    if (windows.empty())
        throw Error("rolling_multiwindow: empty window list");
    std::size_t max_m = 0;
    for (const auto& w : windows)
        max_m = std::max(max_m, w.length_samples);
    const SamplingGrid& g = panel.grid();
    const std::size_t first = max_m + panel.warmup();
    if (max_m > g.count || first > g.count - 1)
        throw EmptySeries("rolling_multiwindow: no evaluation points where every window is full");

    std::vector<BetaEstimate> out;
    out.reserve(g.count - first);
    for (std::size_t i = first; i < g.count; ++i) {
        const double t = g.time_at(i);
        const WindowRanking rank = rank_windows(panel, windows, t, kind, thr.epsilon);
        const WindowSpec& w = windows[rank.best];
        const PointEval ev = evaluate_point(panel, w, t, kind, thr.epsilon);
        out.push_back(make_estimate(ev, kind, w, t)); // flagged gap when degenerate
    }
    return out;
}

std::vector<BetaEstimate> volatility_beta(const FactorPanel& panel, WindowSpec w_vol,
                                          WindowSpec w_beta, ModelKind kind,
                                          const IndependenceThreshold& thr)
{
    MomentSeries target_vol = volatility(panel.target(), w_vol);
    std::vector<TimeSeries> factor_vols;
    factor_vols.reserve(panel.factor_count());
    for (const auto& f : panel.factors())
        factor_vols.push_back(volatility(f, w_vol).series);
    FactorPanel vol_panel(std::move(target_vol.series), std::move(factor_vols));
    return rolling_estimate(vol_panel, w_beta, kind, thr);
}

} // namespace wronbeta
