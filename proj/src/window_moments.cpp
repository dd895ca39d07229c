#include "wronbeta/window_moments.hpp"

#include <cassert>

namespace wronbeta {

void WindowMoments::compute(std::span<const double> x, std::size_t i, std::size_t m,
                            std::span<double> out)
{
    assert(i >= m && i <= x.size());
    // Neumaier-compensated sums: keeps the column entries accurate to a few
    // ulp instead of m ulp, which the tight Cramer-ratio invariants need.
    const std::size_t powers = out.size();
    std::vector<double> sum(powers, 0.0);
    std::vector<double> comp(powers, 0.0);
    for (std::size_t d = 1; d <= m; ++d) {
        const double xv = x[i - d];
        double p = 1.0;
        for (std::size_t q = 0; q < powers; ++q) {
            const double term = p * xv;
            const double t = sum[q] + term;
            if (std::abs(sum[q]) >= std::abs(term))
                comp[q] += (sum[q] - t) + term;
            else
                comp[q] += (term - t) + sum[q];
            sum[q] = t;
            p *= static_cast<double>(d);
        }
    }
    for (std::size_t q = 0; q < powers; ++q)
        out[q] = sum[q] + comp[q];
}

WindowMoments::WindowMoments(std::span<const double> x, std::size_t m, unsigned max_power)
    : x_(x), m_(m), max_power_(max_power), moments_(max_power + 1, 0.0)
{
    m_pow_.resize(max_power + 1);
    m_pow_[0] = 1.0;
    for (unsigned q = 1; q <= max_power; ++q)
        m_pow_[q] = m_pow_[q - 1] * static_cast<double>(m);

    binom_.resize((max_power + 1) * (max_power + 2) / 2);
    for (unsigned q = 0; q <= max_power; ++q) {
        const std::size_t row = static_cast<std::size_t>(q) * (q + 1) / 2;
        binom_[row] = 1.0;
        binom_[row + q] = 1.0;
        for (unsigned r = 1; r < q; ++r) {
            const std::size_t prev = static_cast<std::size_t>(q - 1) * q / 2;
            binom_[row + r] = binom_[prev + r - 1] + binom_[prev + r];
        }
    }
}

void WindowMoments::seek(std::size_t i)
{
    end_ = i;
    steps_since_anchor_ = 0;
    compute(x_, i, m_, moments_);
}

void WindowMoments::advance()
{
    const std::size_t next = end_ + 1;
    if (++steps_since_anchor_ >= kReanchorInterval) {
        seek(next);
        return;
    }
    const double leaving = x_[end_ - m_];
    const double entering = x_[end_];
    // Descending q keeps the lower-order moments untouched until used.
    for (unsigned q = max_power_ + 1; q-- > 0;) {
        const std::size_t row = static_cast<std::size_t>(q) * (q + 1) / 2;
        double acc = 0.0;
        for (unsigned r = 0; r <= q; ++r) {
            double term = moments_[r] - m_pow_[r] * leaving;
            if (r == 0) term += entering;
            acc += binom_[row + r] * term;
        }
        moments_[q] = acc;
    }
    end_ = next;
}

std::vector<double> unit_window_moments(std::size_t m, unsigned max_power)
{
    std::vector<double> out(max_power + 1, 0.0);
    for (std::size_t d = 1; d <= m; ++d) {
        double p = 1.0;
        for (unsigned q = 0; q <= max_power; ++q) {
            out[q] += p;
            p *= static_cast<double>(d);
        }
    }
    return out;
}

} // namespace wronbeta
