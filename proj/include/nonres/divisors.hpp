#pragma once

// Divisor enumeration, the greedy well-spaced divisor chain, the neighbor-pair
// statistic W*(n; sigma), and the exhaustive density experiments over [1, x].

#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "nonres/modarith.hpp"

namespace nonres {

inline std::vector<u64> enumerate_divisors(const FactoredInteger& n) {
    std::vector<u64> divs{1};
    for (const auto& [p, e] : n.factors) {
        const std::size_t base = divs.size();
        u64 pe = 1;
        for (u32 k = 1; k <= e; ++k) {
            pe *= p;
            for (std::size_t i = 0; i < base; ++i) divs.push_back(divs[i] * pe);
        }
    }
    std::sort(divs.begin(), divs.end());
    return divs;
}

namespace detail {

// Spacing comparisons run in extended precision with a relative 1e-12 guard
// band; anything inside the band counts as equality and resolves to "not
// exceeding" / "not below", so near-ties select fewer divisors.
inline constexpr long double kSpacingGuard = 1e-12L;

inline bool ratio_exceeds(u64 d, long double rho, u64 anchor) {
    return static_cast<long double>(d) >
           rho * static_cast<long double>(anchor) * (1.0L + kSpacingGuard);
}

inline bool ratio_below(u64 d, long double rho, u64 anchor) {
    return static_cast<long double>(d) <
           rho * static_cast<long double>(anchor) * (1.0L - kSpacingGuard);
}

}  // namespace detail

// Greedy chain D_1 = 1, D_{i+1} = min{d : d > rho * D_i}; maximal in the sense
// that every divisor skipped between successive picks is <= rho * D_i.
struct WellSpacedSubset {
    std::vector<u64> divisors;
    long double ratio = 0;
};

inline WellSpacedSubset well_spaced_subset(std::span<const u64> divs, long double rho) {
    if (divs.empty() || divs.front() != 1)
        throw std::invalid_argument("well_spaced_subset: divisor list must start at 1");
    if (!(rho > 1.0L)) throw std::invalid_argument("well_spaced_subset: rho must exceed 1");
    WellSpacedSubset out;
    out.ratio = rho;
    out.divisors.push_back(1);
    u64 anchor = 1;
    for (std::size_t i = 1; i < divs.size(); ++i) {
        if (detail::ratio_exceeds(divs[i], rho, anchor)) {
            out.divisors.push_back(divs[i]);
            anchor = divs[i];
        }
    }
    return out;
}

// Ordered pairs of distinct divisors whose log-ratio is at most sigma.  The
// list is strictly increasing, so the count is twice the number of unordered
// close pairs.
inline u64 neighbor_pair_count(std::span<const u64> divs, double sigma) {
    if (!(sigma > 0)) throw std::invalid_argument("neighbor_pair_count: sigma must be positive");
    const long double lim = std::exp(static_cast<long double>(sigma));
    u64 unordered = 0;
    std::size_t hi = 0;
    for (std::size_t i = 0; i < divs.size(); ++i) {
        if (hi < i + 1) hi = i + 1;
        while (hi < divs.size() && !detail::ratio_exceeds(divs[hi], lim, divs[i])) ++hi;
        unordered += hi - i - 1;
    }
    return 2 * unordered;
}

// Smallest-prime-factor sieve; factors every n <= limit in O(log n) after an
// O(n log log n) setup.
class SpfSieve {
public:
    explicit SpfSieve(u32 limit) : spf_(static_cast<std::size_t>(limit) + 1, 0) {
        for (u32 i = 2; i <= limit; ++i) {
            if (spf_[i] != 0) continue;
            for (u64 j = i; j <= limit; j += i) {
                if (spf_[j] == 0) spf_[j] = i;
            }
        }
    }

    u32 limit() const { return static_cast<u32>(spf_.size() - 1); }

    FactoredInteger factor(u32 n) const {
        FactoredInteger out;
        out.value = n;
        while (n > 1) {
            const u32 p = spf_[n];
            u32 e = 0;
            while (n % p == 0) {
                n /= p;
                ++e;
            }
            out.factors.emplace_back(p, e);
        }
        return out;
    }

    std::vector<u64> divisors(u32 n) const { return enumerate_divisors(factor(n)); }

    bool is_prime(u32 n) const { return n >= 2 && spf_[n] == n; }

private:
    std::vector<u32> spf_;
};

inline constexpr u64 kMaxExperimentBound = 10'000'000;

namespace detail {

inline void validate_experiment_params(u64 x, u64 t, double c) {
    if (x < 2 || x > kMaxExperimentBound)
        throw std::invalid_argument("experiment bound x must lie in [2, 1e7]");
    if (t < 2) throw std::invalid_argument("t must be at least 2");
    if (!(c > 0)) throw std::invalid_argument("c must be positive");
    const long double tmax = std::pow(std::log(static_cast<long double>(x)), 1.0L / c);
    if (static_cast<long double>(t) > tmax)
        throw std::invalid_argument("t exceeds (log x)^{1/c}");
}

}  // namespace detail

struct DensityResult {
    u64 count_good = 0;
    u64 count_total = 0;
    double fraction = 0;
    long double rho = 0;
};

// For every n <= x, does the greedy chain at rho = x^{1/t^c} reach t divisors?
// Exact counts; the greedy chain is length-maximal, so this tests exactly the
// existence of t divisors with all consecutive ratios above rho.
inline DensityResult spacing_density_experiment(u64 x, u64 t, double c) {
    detail::validate_experiment_params(x, t, c);
    const long double rho =
        std::pow(static_cast<long double>(x),
                 1.0L / std::pow(static_cast<long double>(t), static_cast<long double>(c)));
    const SpfSieve sieve(static_cast<u32>(x));
    u64 good = 0;
    for (u64 n = 1; n <= x; ++n) {
        const std::vector<u64> divs = sieve.divisors(static_cast<u32>(n));
        u64 anchor = 1;
        u64 len = 1;
        for (std::size_t i = 1; i < divs.size() && len < t; ++i) {
            if (detail::ratio_exceeds(divs[i], rho, anchor)) {
                anchor = divs[i];
                ++len;
            }
        }
        if (len >= t) ++good;
    }
    DensityResult out;
    out.count_good = good;
    out.count_total = x;
    out.fraction = static_cast<double>(good) / static_cast<double>(x);
    out.rho = rho;
    return out;
}

struct SharpnessResult {
    u64 count_clustered = 0;
    u64 count_total = 0;
};

// Counts n <= x possessing t divisors with every consecutive ratio below
// n^{1/t^c} (the clustered configuration); only meaningful for c < 1/log 2.
// A valid t-subset exists iff some window of t consecutive divisors has all
// adjacent ratios below the threshold, so a longest-run scan is exact.
inline SharpnessResult sharpness_probe(u64 x, u64 t, double c) {
    detail::validate_experiment_params(x, t, c);
    if (!(c < 1.0 / std::log(2.0)))
        throw std::invalid_argument("sharpness_probe: c must be below 1/log 2");
    const long double inv_tc =
        1.0L / std::pow(static_cast<long double>(t), static_cast<long double>(c));
    const SpfSieve sieve(static_cast<u32>(x));
    u64 clustered = 0;
    for (u64 n = 1; n <= x; ++n) {
        const std::vector<u64> divs = sieve.divisors(static_cast<u32>(n));
        if (divs.size() < t) continue;
        const long double rho_n = std::pow(static_cast<long double>(n), inv_tc);
        u64 run = 1, best = 1;
        for (std::size_t i = 1; i < divs.size(); ++i) {
            run = detail::ratio_below(divs[i], rho_n, divs[i - 1]) ? run + 1 : 1;
            if (run > best) best = run;
        }
        if (best >= t) ++clustered;
    }
    SharpnessResult out;
    out.count_clustered = clustered;
    out.count_total = x;
    return out;
}

}  // namespace nonres
