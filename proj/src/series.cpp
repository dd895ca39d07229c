#include "wronbeta/series.hpp"

#include <cmath>
#include <string>

namespace wronbeta {

SamplingGrid::SamplingGrid(double start_, double step_, std::size_t count_)
    : start(start_), step(step_), count(count_)
{
    if (!(step > 0.0) || !std::isfinite(step) || !std::isfinite(start))
        throw Error("SamplingGrid: step must be finite and > 0");
    if (count == 0)
        throw EmptySeries("SamplingGrid: count must be >= 1");
}

std::size_t SamplingGrid::index_of(double t) const
{
    const double pos = (t - start) / step;
    const double rounded = std::round(pos);
    if (std::abs(t - (start + rounded * step)) > 1e-6 * step)
        throw NotOnGrid("time " + std::to_string(t) + " is not a grid point");
    if (rounded < 0.0 || rounded > static_cast<double>(count - 1))
        throw OutOfRange("time " + std::to_string(t) + " lies outside the grid span");
    return static_cast<std::size_t>(rounded);
}

TimeSeries::TimeSeries(SamplingGrid g, std::vector<double> v, SeriesRole r,
                       std::size_t warmup_count)
    : grid(g), values(std::move(v)), role(r), warmup(warmup_count)
{
    if (values.size() != grid.count)
        throw GridMismatch("TimeSeries: " + std::to_string(values.size()) +
                           " values on a grid of " + std::to_string(grid.count) + " points");
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (!std::isfinite(values[i]))
            throw Error("TimeSeries: non-finite value at index " + std::to_string(i));
    }
}

} // namespace wronbeta
