#pragma once

#include <cstddef>
#include <vector>

#include "wronbeta/errors.hpp"

namespace wronbeta {

/// Uniform time grid: sample i lives at start + i * step.
struct SamplingGrid {
    double start = 0.0;
    double step = 1.0;
    std::size_t count = 0;

    SamplingGrid() = default;
    SamplingGrid(double start_, double step_, std::size_t count_);

    double time_at(std::size_t i) const { return start + static_cast<double>(i) * step; }
    double span_end() const { return time_at(count - 1); }

    /// Maps a time to its sample index. Throws NotOnGrid if t does not sit on
    /// a grid point (tolerance 1e-6 * step), OutOfRange if it falls outside.
    std::size_t index_of(double t) const;

    bool operator==(const SamplingGrid&) const = default;
};

enum class SeriesRole { Price, Return, Trend, Fluctuation, Volatility, Generic };

/// Values sampled on a uniform grid. `warmup` counts leading entries that
/// were computed from partial windows; estimators skip them.
struct TimeSeries {
    SamplingGrid grid;
    std::vector<double> values;
    SeriesRole role = SeriesRole::Generic;
    std::size_t warmup = 0;

    TimeSeries() = default;
    TimeSeries(SamplingGrid g, std::vector<double> v, SeriesRole r = SeriesRole::Generic,
               std::size_t warmup_count = 0);

    std::size_t size() const { return values.size(); }
};

/// Trailing window of m samples; covers [t - L, t) with L = m * step.
struct WindowSpec {
    std::size_t length_samples = 1;

    double length(const SamplingGrid& g) const
    {
        return static_cast<double>(length_samples) * g.step;
    }
    bool operator==(const WindowSpec&) const = default;
};

/// Order of an iterated window average (nu >= 1).
struct IterOrder {
    unsigned nu = 1;
};

} // namespace wronbeta
