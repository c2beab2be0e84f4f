#pragma once

// Exhaustive scans and analytic reporting: least nonresidues, least primitive
// roots, least simultaneous nonresidues, exact nonresidue counts up to H
// (computed two independent ways), Dirichlet character partial sums from a
// full index table, and the bound formulas they are compared against.

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "nonres/errors.hpp"
#include "nonres/modarith.hpp"

namespace nonres {

// Full discrete-log table for p: ind[x] = ind_g x for 1 <= x < p, built once
// by iterating the least primitive root.  Memory O(p); gated at 2^26.
struct IndexTable {
    u64 p = 0;
    u64 g = 0;
    std::vector<u32> ind;
};

inline constexpr u64 kMaxIndexTablePrime = u64(1) << 26;

inline IndexTable build_index_table(u64 p) {
    if (!is_prime(p)) throw std::invalid_argument("build_index_table: p must be prime");
    if (p > kMaxIndexTablePrime)
        throw std::invalid_argument("build_index_table: p exceeds the table gate 2^26");
    IndexTable table;
    table.p = p;
    table.g = find_primitive_root(p, factorize(p - 1));
    table.ind.assign(p, 0);
    u64 cur = 1;
    for (u64 e = 0; e + 1 < p; ++e) {
        table.ind[cur] = static_cast<u32>(e);
        cur = cur * table.g % p;  // p <= 2^26 keeps the product in 64 bits
    }
    return table;
}

// Smallest n >= 2 with n^{(p-1)/q} != 1 (mod p).
inline u64 least_q_nonresidue(u64 p, u64 q) {
    if (!is_prime(p)) throw std::invalid_argument("least_q_nonresidue: p must be prime");
    if (q < 2 || (p - 1) % q != 0)
        throw std::invalid_argument("least_q_nonresidue: q must divide p-1");
    const u64 exponent = (p - 1) / q;
    for (u64 n = 2;; ++n) {
        if (n % p == 0) continue;
        if (mod_pow(n % p, exponent, p) != 1) return n;
    }
}

// Smallest n >= 2 failing the residue test for every target; exists because a
// primitive root qualifies.
inline u64 least_simultaneous_nonresidue(const ModulusContext& ctx) {
    const u64 p = ctx.p();
    for (u64 n = 2;; ++n) {
        if (n % p == 0) continue;
        bool all_nonresidue = true;
        for (std::size_t k = 0; k < ctx.r(); ++k) {
            if (power_residue_test(n % p, ctx, k)) {
                all_nonresidue = false;
                break;
            }
        }
        if (all_nonresidue) return n;
    }
}

// Smallest positive primitive root; cross-checked against the least
// simultaneous nonresidue over all prime divisors of p-1 (the two coincide).
inline u64 least_primitive_root(u64 p) {
    if (p < 3 || !is_prime(p))
        throw std::invalid_argument("least_primitive_root: p must be an odd prime");
    FactoredInteger pm1 = factorize(p - 1);
    std::vector<u64> targets = pm1.primes();
    const u64 g = find_primitive_root(p, pm1);
    const ModulusContext ctx = ModulusContext::with_targets(p, std::move(pm1), std::move(targets));
    const u64 n = least_simultaneous_nonresidue(ctx);
    if (n != g)
        throw internal_error("least_primitive_root: disagrees with the simultaneous-nonresidue scan");
    return g;
}

// Exact count J of n <= H that are simultaneous nonresidues for every target,
// computed by Euler tests and re-computed from the index table as the count of
// n with gcd(ind_g n, p_1...p_r) = 1; the two must agree.
inline u64 count_simultaneous_nonresidues(const ModulusContext& ctx, u64 H) {
    const u64 p = ctx.p();
    if (H < 1 || H >= p)
        throw std::invalid_argument("count_simultaneous_nonresidues: need 1 <= H < p");
    u64 euler_count = 0;
    for (u64 n = 1; n <= H; ++n) {
        bool all_nonresidue = true;
        for (std::size_t k = 0; k < ctx.r(); ++k) {
            if (power_residue_test(n, ctx, k)) {
                all_nonresidue = false;
                break;
            }
        }
        if (all_nonresidue) ++euler_count;
    }
    const IndexTable table = build_index_table(p);
    u64 index_count = 0;
    for (u64 n = 1; n <= H; ++n) {
        bool coprime_index = true;
        for (u64 q : ctx.targets()) {
            if (table.ind[n] % q == 0) {
                coprime_index = false;
                break;
            }
        }
        if (coprime_index) ++index_count;
    }
    if (euler_count != index_count)
        throw internal_error("count_simultaneous_nonresidues: counting routes disagree");
    return euler_count;
}

// Partial sums of the character chi(n) = e(k * ind_g n / (p-1)) at a list of
// checkpoints H <= p-1, accumulated with compensated summation.
struct CharacterSumSeries {
    u64 p = 0;
    u64 k = 0;
    u64 order = 0;  // order of the character, (p-1)/gcd(k, p-1)
    std::vector<u64> checkpoints;
    std::vector<std::complex<double>> sums;
};

inline CharacterSumSeries character_sum_series(u64 p, u64 k, std::span<const u64> checkpoints) {
    if (!is_prime(p) || p < 3)
        throw std::invalid_argument("character_sum_series: p must be an odd prime");
    if (p > kMaxIndexTablePrime)
        throw std::invalid_argument("character_sum_series: p exceeds the table gate 2^26");
    if (k < 1 || k > p - 2)
        throw std::invalid_argument("character_sum_series: k must be in [1, p-2] (nonprincipal)");
    CharacterSumSeries series;
    series.p = p;
    series.k = k;
    series.order = (p - 1) / std::gcd(k, p - 1);
    series.checkpoints.assign(checkpoints.begin(), checkpoints.end());
    std::sort(series.checkpoints.begin(), series.checkpoints.end());
    for (u64 H : series.checkpoints) {
        if (H > p - 1)
            throw std::invalid_argument("character_sum_series: checkpoint exceeds p-1");
    }
    series.sums.reserve(series.checkpoints.size());
    const IndexTable table = build_index_table(p);
    const double angle_unit = 2.0 * std::numbers::pi / static_cast<double>(p - 1);
    double re = 0, re_c = 0, im = 0, im_c = 0;  // Kahan accumulators
    std::size_t next = 0;
    const u64 last = series.checkpoints.empty() ? 0 : series.checkpoints.back();
    for (u64 n = 0; n <= last; ++n) {
        if (n >= 1) {
            const u64 j = (k * static_cast<u64>(table.ind[n])) % (p - 1);
            const double angle = angle_unit * static_cast<double>(j);
            const double tre = std::cos(angle), tim = std::sin(angle);
            double y = tre - re_c;
            double s = re + y;
            re_c = (s - re) - y;
            re = s;
            y = tim - im_c;
            s = im + y;
            im_c = (s - im) - y;
            im = s;
        }
        while (next < series.checkpoints.size() && series.checkpoints[next] == n) {
            series.sums.emplace_back(re, im);
            ++next;
        }
    }
    return series;
}

inline std::complex<double> character_partial_sum(u64 p, u64 k, u64 H) {
    const u64 checkpoint[1] = {H};
    return character_sum_series(p, k, checkpoint).sums.front();
}

// Burgess-shaped right-hand side: constant * H^{1-1/m} p^{(m+1)/(4m^2)} (log p)^{1/m}.
inline double burgess_rhs(u64 p, double H, u64 m, double constant) {
    if (m < 1) throw std::invalid_argument("burgess_rhs: m must be at least 1");
    const double md = static_cast<double>(m);
    const double pd = static_cast<double>(p);
    return constant * std::pow(H, 1.0 - 1.0 / md) * std::pow(pd, (md + 1.0) / (4.0 * md * md)) *
           std::pow(std::log(pd), 1.0 / md);
}

// The bound parameters H = p^{1/4} e^{(C''+3) sqrt(log p) sqrt(log 5r)} log p
// and m = floor(sqrt(log p) / sqrt(log 5r)); the constant stands in for the
// unspecified C''.
struct BoundParameters {
    double H = 0;
    u64 m = 0;
};

inline BoundParameters bound_parameters(u64 p, u64 r, double constant) {
    if (p < 3) throw std::invalid_argument("bound_parameters: p must be at least 3");
    if (r < 1) throw std::invalid_argument("bound_parameters: r must be at least 1");
    const double lp = std::log(static_cast<double>(p));
    const double l5r = std::log(5.0 * static_cast<double>(r));
    BoundParameters out;
    out.H = std::pow(static_cast<double>(p), 0.25) *
            std::exp((constant + 3.0) * std::sqrt(lp) * std::sqrt(l5r)) * lp;
    out.m = static_cast<u64>(std::floor(std::sqrt(lp) / std::sqrt(l5r)));
    return out;
}

struct NonresidueReport {
    u64 p = 0;
    std::vector<u64> targets;
    u64 least_simultaneous = 0;
    u64 least_primitive_root = 0;
    double exponent_ratio = 0;  // log(least_simultaneous) / log(p)
    double bound_H = 0;
    u64 bound_m = 0;
    std::optional<u64> J_exact;  // count up to a supplied H < p, when requested
};

inline NonresidueReport make_report(const ModulusContext& ctx, double constant,
                                    std::optional<u64> count_H = std::nullopt) {
    NonresidueReport report;
    report.p = ctx.p();
    report.targets = ctx.targets();
    report.least_simultaneous = least_simultaneous_nonresidue(ctx);
    report.least_primitive_root = least_primitive_root(ctx.p());
    report.exponent_ratio = std::log(static_cast<double>(report.least_simultaneous)) /
                            std::log(static_cast<double>(ctx.p()));
    const BoundParameters tp = bound_parameters(ctx.p(), ctx.r(), constant);
    report.bound_H = tp.H;
    report.bound_m = tp.m;
    if (count_H) report.J_exact = count_simultaneous_nonresidues(ctx, *count_H);
    return report;
}

}  // namespace nonres
