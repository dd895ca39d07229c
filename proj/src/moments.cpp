#include "wronbeta/moments.hpp"

#include <cmath>

#include "wronbeta/series_core.hpp"

namespace wronbeta {

MomentSeries rolling_cov(const TimeSeries& x, const TimeSeries& y, WindowSpec w)
{
    if (x.grid != y.grid)
        throw GridMismatch("rolling_cov: series on different grids");

    std::vector<double> prod(x.size());
    for (std::size_t i = 0; i < prod.size(); ++i)
        prod[i] = x.values[i] * y.values[i];
    TimeSeries xy(x.grid, std::move(prod), SeriesRole::Generic,
                  std::max(x.warmup, y.warmup));

    // The fluctuation product does not average away, so E(XY) is computed in
    // full rather than shortcut to E(X)E(Y) plus a covariance of trends.
    const TimeSeries exy = trend(xy, w);
    const TimeSeries ex = trend(x, w);
    const TimeSeries ey = trend(y, w);

    std::vector<double> out(x.size());
    for (std::size_t i = 0; i < out.size(); ++i)
        out[i] = exy.values[i] - ex.values[i] * ey.values[i];

    return {TimeSeries(x.grid, std::move(out), SeriesRole::Generic, exy.warmup), w, 0};
}

MomentSeries rolling_var(const TimeSeries& x, WindowSpec w)
{
    MomentSeries v = rolling_cov(x, x, w);
    for (double& val : v.series.values) {
        if (val < 0.0) {
            val = 0.0;
            ++v.clamped;
        }
    }
    return v;
}

MomentSeries volatility(const TimeSeries& x, WindowSpec w)
{
    MomentSeries v = rolling_var(x, w);
    for (double& val : v.series.values)
        val = std::sqrt(val);
    v.series.role = SeriesRole::Volatility;
    return v;
}

} // namespace wronbeta
