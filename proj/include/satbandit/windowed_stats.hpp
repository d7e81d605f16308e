#pragma once
/*
Dyadic suffix-window statistics.

For a buffer B of length m the window set is {2^k : 2^k <= m, k >= 0}. The
windowed bounds are

    LCB(B) = max_w { AvgLast(B, w) - beta(w) }
    UCB(B) = min_w { AvgLast(B, w) + beta(w) }

with beta(w) = sqrt(2 (4 ln T + ln K) / w). Empty buffers give -inf / +inf.
Suffix averages come from prefix sums, so one bound evaluation costs
O(log m).
*/

#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <optional>
#include <vector>

#include "satbandit/errors.hpp"

namespace satbandit {

inline std::vector<std::size_t> win_set(std::size_t m) {
    std::vector<std::size_t> out;
    for (std::size_t w = 1; w != 0 && w <= m; w <<= 1) out.push_back(w);
    return out;
}

inline double beta(std::size_t w, std::size_t horizon, std::size_t num_arms) {
    if (w == 0) throw ContractError("beta: window must be positive");
    return std::sqrt(2.0 * (4.0 * std::log(static_cast<double>(horizon)) +
                            std::log(static_cast<double>(num_arms))) /
                     static_cast<double>(w));
}

/// Smallest n in [1, T] with beta(n) <= gap / 2, or nullopt if none exists.
inline std::optional<std::size_t> n_delta(std::size_t horizon, std::size_t num_arms, double gap) {
    const double target = gap / 2.0;
    if (beta(horizon, horizon, num_arms) > target) return std::nullopt;
    std::size_t lo = 1, hi = horizon;  // beta(hi) <= target
    while (lo < hi) {
        const std::size_t mid = lo + (hi - lo) / 2;
        if (beta(mid, horizon, num_arms) <= target)
            hi = mid;
        else
            lo = mid + 1;
    }
    return lo;
}

/// Confidence radius w -> beta(w). The override is a test hook.
class RadiusFn {
public:
    RadiusFn(std::size_t horizon, std::size_t num_arms) : horizon_(horizon), num_arms_(num_arms) {}
    explicit RadiusFn(std::function<double(std::size_t)> override_fn) : override_(std::move(override_fn)) {}

    static RadiusFn zero() {
        return RadiusFn([](std::size_t) { return 0.0; });
    }

    double operator()(std::size_t w) const { return override_ ? override_(w) : beta(w, horizon_, num_arms_); }

private:
    std::size_t horizon_ = 0;
    std::size_t num_arms_ = 0;
    std::function<double(std::size_t)> override_;
};

/// Append-only reward buffer for one arm within one epoch.
class EpochBuffer {
public:
    void append(double x) {
        entries_.push_back(x);
        prefix_.push_back(prefix_.back() + x);
    }

    void reset() {
        entries_.clear();
        prefix_.assign(1, 0.0);
    }

    std::size_t size() const noexcept { return entries_.size(); }
    bool empty() const noexcept { return entries_.empty(); }
    double operator[](std::size_t i) const { return entries_[i]; }
    const std::vector<double>& entries() const noexcept { return entries_; }

    /// Mean of the last w entries.
    double avg_last(std::size_t w) const {
        const std::size_t m = entries_.size();
        if (w == 0 || w > m) throw ContractError("avg_last: need 1 <= w <= buffer length");
        return (prefix_[m] - prefix_[m - w]) / static_cast<double>(w);
    }

private:
    std::vector<double> entries_;
    std::vector<double> prefix_{0.0};
};

inline double avg_last(const EpochBuffer& buffer, std::size_t w) { return buffer.avg_last(w); }

inline double lcb_win(const EpochBuffer& buffer, const RadiusFn& radius) {
    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t w = 1; w != 0 && w <= buffer.size(); w <<= 1)
        best = std::max(best, buffer.avg_last(w) - radius(w));
    return best;
}

inline double ucb_win(const EpochBuffer& buffer, const RadiusFn& radius) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t w = 1; w != 0 && w <= buffer.size(); w <<= 1)
        best = std::min(best, buffer.avg_last(w) + radius(w));
    return best;
}

} // namespace satbandit
