#pragma once

#include "wronbeta/series.hpp"

namespace wronbeta {

/// A rolling moment series together with the window that produced it.
struct MomentSeries {
    TimeSeries series;
    WindowSpec window;
    std::size_t clamped = 0; // variance values clipped to 0 (floating cancellation)
};

/// Rolling covariance cov(t) = E(XY)(t) - E(X)(t) * E(Y)(t), E = trend(., w).
MomentSeries rolling_cov(const TimeSeries& x, const TimeSeries& y, WindowSpec w);

/// Rolling variance var(t) = E(X^2)(t) - E(X)(t)^2, clamped at 0.
MomentSeries rolling_var(const TimeSeries& x, WindowSpec w);

/// Rolling standard deviation sqrt(var(t)); the volatility time series.
MomentSeries volatility(const TimeSeries& x, WindowSpec w);

} // namespace wronbeta
