#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace wronbeta {

/// Weighted window sums M_q(i) = sum_{d=1..m} d^q * x[i-d] for q = 0..max_power,
/// over the m samples preceding grid index i. The powers d^q use the distance
/// from the window end, so every quantity stays bounded by m^q regardless of
/// how far the window has slid — no large-t cancellation.
///
/// The order-k window average of x at t_i is then
///   avg_k = (L^{k-1} / (k-1)!) * M_{k-1}(i) / m^k,   L = m * step,
/// and M_{k-1}(i) / m^k is its window-local (recentred) form.
class WindowMoments {
public:
    /// Direct evaluation of M_0..M_{out.size()-1} for the window ending at i.
    /// Requires i >= m. Shared by the single-point and the sliding path, so a
    /// freshly anchored slider is bit-identical to a direct evaluation.
    static void compute(std::span<const double> x, std::size_t i, std::size_t m,
                        std::span<double> out);

    /// Sliding evaluator. Advancing the window end from i to i+1 shifts every
    /// distance d by one, which mixes the moments through the binomial
    /// identity (d+1)^q = sum_r C(q,r) d^r:
    ///   M_q(i+1) = sum_{r<=q} C(q,r) * (M_r(i) - m^r * x[i-m] + [r==0] x[i]).
    /// O(max_power^2) per step; re-anchors with a direct evaluation every
    /// kReanchorInterval steps to keep rounding drift below ~1e-13 relative.
    WindowMoments(std::span<const double> x, std::size_t m, unsigned max_power);

    /// Positions the window end at sample index i (i >= m).
    void seek(std::size_t i);

    /// Moves the window end from i to i+1.
    void advance();

    std::size_t position() const { return end_; }
    double moment(unsigned q) const { return moments_[q]; }
    std::span<const double> moments() const { return moments_; }

    static constexpr std::size_t kReanchorInterval = 16;

private:
    std::span<const double> x_;
    std::size_t m_;
    unsigned max_power_;
    std::size_t end_ = 0;
    std::size_t steps_since_anchor_ = 0;
    std::vector<double> moments_;
    std::vector<double> m_pow_;   // m^0..m^max_power
    std::vector<double> binom_;   // Pascal rows, row q at offset q*(q+1)/2
};

/// sum_{d=1..m} d^q for q = 0..max_power: the moments of the all-ones series.
std::vector<double> unit_window_moments(std::size_t m, unsigned max_power);

} // namespace wronbeta
