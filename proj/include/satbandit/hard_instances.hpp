#pragma once
/*
Lower-bound instance families on two arms with gap Delta around the threshold S.

The horizon is cut into blocks of length m. Candidate in-block positions are
T = {2, 2 + l, ..., 2 + (n - 1) l}; each block draws its latent position nu
uniformly from T.

  swap-window   (L odd,  (L-1)/2 blocks, m = 2T/(L-1), n l <= m - 2):
      means (S-D, S+D) on the window [nu, nu + l - 1] of the block,
      (S+D, S-D) elsewhere.
  single-switch (L even, L/2 blocks,     m = 2T/L,     n l <= m - 1, l >= 2):
      means (S-D, S+D) before nu, (S+D, S-D) from nu to the block end.

Both produce exactly L stationary segments with one satisficing arm each.
Arm 0 is the off-window (post-switch) satisficing arm.
*/

#include <cmath>
#include <cstddef>
#include <numeric>
#include <string>
#include <vector>

#include "satbandit/env.hpp"
#include "satbandit/errors.hpp"
#include "satbandit/rng.hpp"

namespace satbandit {

enum class Family { swap_window, single_switch };

inline const char* family_name(Family f) { return f == Family::swap_window ? "swap-window" : "single-switch"; }

struct InstanceParams {
    Family family = Family::swap_window;
    Time horizon = 0;
    std::size_t num_segments = 0;
    double gap = 0.0;
    double threshold = 0.0;
    Time block_length = 0;         // m
    std::size_t num_candidates = 0;  // n
    std::size_t window_length = 0;   // l
    std::size_t split = 0;           // r, single-switch only
    std::vector<Time> candidates;    // in-block positions, ascending
    std::size_t num_blocks = 0;

    BlockLayout layout() const { return {block_length, num_blocks}; }

    /// Absolute round of in-block position `pos` in block b (0-based block index).
    Time absolute(std::size_t block, Time pos) const { return block * block_length + pos; }

    /// 4 D^2 l + ln 2 <= (1/2) ln n: the margin that makes the swap-window Fano bound >= 1/2.
    bool fano_margin_holds() const {
        return 4.0 * gap * gap * static_cast<double>(window_length) + std::log(2.0) <=
               0.5 * std::log(static_cast<double>(num_candidates));
    }
};

using NuVector = std::vector<Time>;

/// x = ceil(sqrt(y)); satisfies x ln x <= y and ln x >= (1/2) ln y for y >= 4.
inline std::size_t lemma1_choose_n(double y) {
    if (!(y >= 4.0)) throw std::domain_error("lemma1_choose_n: need y >= 4");
    auto x = static_cast<std::size_t>(std::ceil(std::sqrt(y)));
    // Correct for rounding in sqrt so that (x-1)^2 < y <= x^2 exactly.
    while (x > 1 && static_cast<double>((x - 1) * (x - 1)) >= y) --x;
    while (static_cast<double>(x * x) < y) ++x;
    return x;
}

/// Largest T' <= T such that the block length of the family is an integer.
inline Time feasible_horizon(Family family, Time horizon, std::size_t num_segments) {
    const std::size_t divisor = family == Family::swap_window ? num_segments - 1 : num_segments;
    if (divisor == 0) throw ParameterError("feasible_horizon: invalid segment count");
    const std::size_t step = divisor / std::gcd(divisor, std::size_t{2});
    return (horizon / step) * step;
}

namespace detail {

inline void check_gap(double gap, double threshold) {
    if (!(gap > 0.0)) throw ParameterError("gap constraint violated: need delta > 0");
    // Equality is allowed: S +- delta still lies in [0, 1].
    if (!(gap <= std::min(threshold, 1.0 - threshold)))
        throw ParameterError("gap constraint violated: need delta <= min(S, 1 - S)");
}

inline std::vector<Time> candidate_set(std::size_t n, std::size_t l) {
    std::vector<Time> out(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = 2 + i * l;
    return out;
}

}  // namespace detail

inline InstanceParams swap_window_params(Time horizon, std::size_t num_segments, double gap, double threshold) {
    const std::size_t L = num_segments;
    if (L < 3) throw ParameterError("swap-window: need L >= 3");
    if (L % 2 == 0) throw ParameterError("swap-window: parity constraint violated, L must be odd");
    if ((2 * horizon) % (L - 1) != 0) throw ParameterError("swap-window: divisibility constraint, 2T/(L-1) must be an integer");
    if (gap * gap * static_cast<double>(horizon) < static_cast<double>(L))
        throw ParameterError("swap-window: need delta^2 T >= L");
    detail::check_gap(gap, threshold);

    InstanceParams p;
    p.family = Family::swap_window;
    p.horizon = horizon;
    p.num_segments = L;
    p.gap = gap;
    p.threshold = threshold;
    p.block_length = 2 * horizon / (L - 1);
    p.num_blocks = (L - 1) / 2;
    if (p.block_length < 4) throw ParameterError("swap-window: block length too short (need m >= 4)");

    const double d2 = gap * gap;
    const double y = 16.0 * d2 * static_cast<double>(p.block_length - 2);
    if (y < 4.0) throw ParameterError("swap-window: need 16 delta^2 (m - 2) >= 4");
    std::size_t n = lemma1_choose_n(y);
    auto window = [d2](std::size_t k) {
        return static_cast<std::size_t>(std::ceil(std::log(static_cast<double>(k)) / (16.0 * d2)));
    };
    std::size_t l = window(n);
    while (n >= 2 && n * l > p.block_length - 2) l = window(--n);
    if (n < 2 || l < 1) throw ParameterError("swap-window: no feasible (n, l) with n l <= m - 2");

    p.num_candidates = n;
    p.window_length = l;
    p.candidates = detail::candidate_set(n, l);
    return p;
}

inline InstanceParams single_switch_params(Time horizon, std::size_t num_segments, double gap, double threshold) {
    const std::size_t L = num_segments;
    if (L < 2) throw ParameterError("single-switch: need L >= 2");
    if (L % 2 != 0) throw ParameterError("single-switch: parity constraint violated, L must be even");
    if ((2 * horizon) % L != 0) throw ParameterError("single-switch: divisibility constraint, 2T/L must be an integer");
    if (gap * gap * static_cast<double>(horizon) < 13.0 * static_cast<double>(L))
        throw ParameterError("single-switch: need delta^2 T >= 13 L");
    detail::check_gap(gap, threshold);

    InstanceParams p;
    p.family = Family::single_switch;
    p.horizon = horizon;
    p.num_segments = L;
    p.gap = gap;
    p.threshold = threshold;
    p.block_length = 2 * horizon / L;
    p.num_blocks = L / 2;

    const double d2 = gap * gap;
    const double y = d2 / 6.0 * (static_cast<double>(p.block_length) - 1.0);
    if (y < 4.0) throw ParameterError("single-switch: need (delta^2 / 6)(m - 1) >= 4");
    std::size_t n = lemma1_choose_n(y);
    auto window = [d2](std::size_t k) {
        return static_cast<std::size_t>(std::ceil(6.0 * std::log(static_cast<double>(k)) / d2)) + 1;
    };
    std::size_t l = window(n);
    while (n >= 2 && n * l > p.block_length - 1) l = window(--n);
    if (n < 2) throw ParameterError("single-switch: no feasible (n, l) with n l <= m - 1");

    p.num_candidates = n;
    p.window_length = l;
    p.split = (l + 1) / 2;
    p.candidates = detail::candidate_set(n, l);
    return p;
}

inline InstanceParams make_params(Family family, Time horizon, std::size_t num_segments, double gap,
                                  double threshold) {
    return family == Family::swap_window ? swap_window_params(horizon, num_segments, gap, threshold)
                                         : single_switch_params(horizon, num_segments, gap, threshold);
}

inline void validate_nu(const InstanceParams& p, const NuVector& nu) {
    if (nu.size() != p.num_blocks) throw ContractError("nu: need one entry per block");
    for (Time v : nu) {
        if (v < 2 || (v - 2) % p.window_length != 0 || (v - 2) / p.window_length >= p.num_candidates)
            throw ContractError("nu: entry " + std::to_string(v) + " is not a candidate");
    }
}

/// Index of a candidate position within the candidate set.
inline std::size_t candidate_index(const InstanceParams& p, Time pos) { return (pos - 2) / p.window_length; }

inline NuVector sample_nu(const InstanceParams& p, RandomStream& rng) {
    NuVector nu(p.num_blocks);
    for (auto& v : nu) v = p.candidates[rng.uniform_index(p.num_candidates)];
    return nu;
}

inline MeanSchedule swap_window_instance(const InstanceParams& p, const NuVector& nu) {
    validate_nu(p, nu);
    const double S = p.threshold, D = p.gap;
    const std::vector<double> off{S + D, S - D}, win{S - D, S + D};
    std::vector<Time> cps{1};
    std::vector<std::vector<double>> segs{off};
    for (std::size_t b = 0; b < p.num_blocks; ++b) {
        const Time start = p.absolute(b, nu[b]);
        cps.push_back(start);
        segs.push_back(win);
        cps.push_back(start + p.window_length);
        segs.push_back(off);
    }
    cps.push_back(p.horizon + 1);
    return MeanSchedule(2, p.horizon, std::move(cps), std::move(segs));
}

inline MeanSchedule single_switch_instance(const InstanceParams& p, const NuVector& nu) {
    validate_nu(p, nu);
    const double S = p.threshold, D = p.gap;
    const std::vector<double> pre{S - D, S + D}, post{S + D, S - D};
    std::vector<Time> cps;
    std::vector<std::vector<double>> segs;
    for (std::size_t b = 0; b < p.num_blocks; ++b) {
        cps.push_back(b * p.block_length + 1);
        segs.push_back(pre);
        cps.push_back(p.absolute(b, nu[b]));
        segs.push_back(post);
    }
    cps.push_back(p.horizon + 1);
    return MeanSchedule(2, p.horizon, std::move(cps), std::move(segs));
}

inline MeanSchedule hard_instance(const InstanceParams& p, const NuVector& nu) {
    return p.family == Family::swap_window ? swap_window_instance(p, nu) : single_switch_instance(p, nu);
}

/// Hard instance wrapped as an environment carrying its block layout.
inline Environment hard_environment(const InstanceParams& p, const NuVector& nu,
                                    NoiseKind noise = NoiseKind::unit_gaussian) {
    return Environment(hard_instance(p, nu), p.threshold, noise, p.layout());
}

/// The class E_{L,D} with equally spaced change points: segment l has means
/// (S+D, S-D) for even l and (S-D, S+D) for odd l.
inline MeanSchedule alternating_instance(Time horizon, std::size_t num_segments, double gap, double threshold) {
    if (num_segments < 1 || horizon < num_segments)
        throw ParameterError("alternating: need 1 <= L <= T");
    detail::check_gap(gap, threshold);
    std::vector<Time> cps;
    std::vector<std::vector<double>> segs;
    for (std::size_t l = 0; l < num_segments; ++l) {
        cps.push_back(1 + l * horizon / num_segments);
        if (l % 2 == 0)
            segs.push_back({threshold + gap, threshold - gap});
        else
            segs.push_back({threshold - gap, threshold + gap});
    }
    cps.push_back(horizon + 1);
    return MeanSchedule(2, horizon, std::move(cps), std::move(segs));
}

} // namespace satbandit
