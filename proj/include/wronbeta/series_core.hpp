#pragma once

#include "wronbeta/series.hpp"

namespace wronbeta {

/// Discrete integral of x over [a, b): left Riemann sum of the grid samples,
/// sum_{t_i in [a,b)} x(t_i) * step. Both endpoints must be grid times.
double integrate(const TimeSeries& x, double a, double b);

/// Trailing window mean over [t - L, t), L = m * step. Requires t >= start + L.
double window_average(const TimeSeries& x, WindowSpec w, double t);

/// Order-nu window average at t:
///   (1 / (L * (nu-1)!)) * integral_{t-L}^{t} (t - tau)^{nu-1} x(tau) dtau.
/// Order 1 reduces to window_average (same arithmetic, bit for bit), and the
/// all-ones series yields L^{nu-1} / nu! up to quadrature error.
double iterated_average(const TimeSeries& x, IterOrder nu, WindowSpec w, double t);

/// Trailing-window mean series E(x). Entries before a full window is available
/// use the largest partial window and are flagged via the result's `warmup`.
TimeSeries trend(const TimeSeries& x, WindowSpec w);

/// x - trend(x, w): the quickly fluctuating remainder. trend + fluctuation
/// reconstructs x elementwise.
TimeSeries fluctuation(const TimeSeries& x, WindowSpec w);

enum class ReturnKind { Simple, Log };

/// Per-step returns of a positive price series; output has length count - 1,
/// sample i sitting at the grid time of price i+1.
TimeSeries returns(const TimeSeries& prices, ReturnKind kind);

} // namespace wronbeta
