#include "wronbeta/series_core.hpp"

#include <cmath>
#include <string>

#include "wronbeta/window_moments.hpp"

namespace wronbeta {

namespace {

std::string fmt_time(double t)
{
    return std::to_string(t);
}

// Window end index for [t - L, t); throws if the window does not fit.
std::size_t window_end_index(const TimeSeries& x, WindowSpec w, double t)
{
    const std::size_t m = w.length_samples;
    if (m < 1 || m > x.grid.count)
        throw EmptySeries("window of " + std::to_string(m) + " samples does not fit a series of " +
                          std::to_string(x.grid.count));
    const std::size_t i = x.grid.index_of(t);
    if (i < m)
        throw WindowUnderflow("window of " + std::to_string(m) +
                              " samples underflows the grid start at t = " + fmt_time(t));
    return i;
}

} // namespace

double integrate(const TimeSeries& x, double a, double b)
{
    if (!(a <= b))
        throw OutOfRange("integrate: a > b");
    const std::size_t ia = x.grid.index_of(a);
    const std::size_t ib = x.grid.index_of(b);
    double sum = 0.0;
    for (std::size_t j = ia; j < ib; ++j)
        sum += x.values[j];
    return sum * x.grid.step;
}

double iterated_average(const TimeSeries& x, IterOrder nu, WindowSpec w, double t)
{
    if (nu.nu < 1)
        throw Error("iterated_average: order must be >= 1");
    const std::size_t m = w.length_samples;
    const std::size_t i = window_end_index(x, w, t);

    // M_{nu-1} = sum_{d=1..m} d^(nu-1) * x[i-d], d the distance from the window end.
    std::vector<double> moments(nu.nu);
    WindowMoments::compute(x.values, i, m, moments);
    const double acc = moments[nu.nu - 1];

    const double L = w.length(x.grid);
    double numerator = acc;
    for (unsigned q = 1; q < nu.nu; ++q)
        numerator *= L;
    double denominator = static_cast<double>(m);
    for (unsigned q = 1; q < nu.nu; ++q)
        denominator *= static_cast<double>(m) * static_cast<double>(q);
    return numerator / denominator;
}

double window_average(const TimeSeries& x, WindowSpec w, double t)
{
    return iterated_average(x, IterOrder{1}, w, t);
}

TimeSeries trend(const TimeSeries& x, WindowSpec w)
{
    const std::size_t n = x.size();
    const std::size_t m = w.length_samples;
    if (n == 0)
        throw EmptySeries("trend: empty series");
    if (m < 1 || m > n)
        throw EmptySeries("trend: window of " + std::to_string(m) +
                          " samples does not fit a series of " + std::to_string(n));

    std::vector<double> prefix(n + 1, 0.0);
    for (std::size_t j = 0; j < n; ++j)
        prefix[j + 1] = prefix[j] + x.values[j];

    std::vector<double> out(n);
    out[0] = x.values[0]; // no history yet
    for (std::size_t i = 1; i < n; ++i) {
        const std::size_t lo = i < m ? 0 : i - m;
        out[i] = (prefix[i] - prefix[lo]) / static_cast<double>(i - lo);
    }

    const std::size_t warm = std::min(n, x.warmup + m);
    return TimeSeries(x.grid, std::move(out), SeriesRole::Trend, warm);
}

TimeSeries fluctuation(const TimeSeries& x, WindowSpec w)
{
    TimeSeries t = trend(x, w);
    std::vector<double> out(x.size());
    for (std::size_t i = 0; i < out.size(); ++i)
        out[i] = x.values[i] - t.values[i];
    return TimeSeries(x.grid, std::move(out), SeriesRole::Fluctuation, t.warmup);
}

TimeSeries returns(const TimeSeries& prices, ReturnKind kind)
{
    const std::size_t n = prices.size();
    if (n < 2)
        throw EmptySeries("returns: need at least two prices");
    for (std::size_t i = 0; i < n; ++i) {
        if (!(prices.values[i] > 0.0))
            throw NonPositivePrice("returns: non-positive price at index " + std::to_string(i));
    }

    std::vector<double> out(n - 1);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        const double p0 = prices.values[i];
        const double p1 = prices.values[i + 1];
        out[i] = kind == ReturnKind::Simple ? (p1 - p0) / p0 : std::log(p1 / p0);
    }

    SamplingGrid g(prices.grid.time_at(1), prices.grid.step, n - 1);
    return TimeSeries(g, std::move(out), SeriesRole::Return, std::min(prices.warmup, n - 1));
}

} // namespace wronbeta
