#pragma once

// Shrinking a simultaneous nonresidue: if n has enough divisors, some divisor
// pair d_i < d_j keeps n' = n*d_i/d_j a simultaneous nonresidue, because the
// index vector of n' is b + vec(d_i) - vec(d_j) and the pair was chosen so
// that no component cancels.

#include <cstdint>
#include <vector>

#include "nonres/divisors.hpp"
#include "nonres/errors.hpp"
#include "nonres/modarith.hpp"
#include "nonres/selection.hpp"

namespace nonres {

struct ReductionStep {
    u64 n = 0;
    u64 d_i = 0;
    u64 d_j = 0;
    u64 n_prime = 0;
    std::vector<bool> verified;  // per target: n' fails the residue test
};

// One application of the divisor-ratio reduction.  Preconditions: gcd(n, p)=1,
// n is a simultaneous nonresidue for every target (checked), and tau(n) meets
// required_length(targets).  Among all admissible pairs the one maximizing
// d_j/d_i is taken (greatest shrink), ties by smallest i then smallest j.
inline ReductionStep reduce_nonresidue(u64 n, const ModulusContext& ctx) {
    const u64 p = ctx.p();
    if (n == 0 || n % p == 0)
        throw std::invalid_argument("reduce_nonresidue: n must be coprime to p");
    for (std::size_t k = 0; k < ctx.r(); ++k) {
        if (power_residue_test(n % p, ctx, k))
            throw precondition_error("reduce_nonresidue: n is a residue for a target");
    }
    const FactoredInteger fn = factorize(n);
    const u64 threshold = required_length(ctx.targets());
    const u64 tau = fn.tau();
    if (tau < threshold) throw too_few_divisors(tau, threshold);

    const std::vector<u64> divs = enumerate_divisors(fn);
    const ResidueVector b = residue_vector(n % p, ctx);
    std::vector<ResidueVector> vecs;
    vecs.reserve(divs.size());
    for (u64 d : divs) vecs.push_back(residue_vector(d % p, ctx));

    bool found = false;
    std::size_t bi = 0, bj = 0;
    for (std::size_t i = 0; i < divs.size(); ++i) {
        for (std::size_t j = i + 1; j < divs.size(); ++j) {
            if (!pair_avoids(vecs, i, j, b, ctx.targets())) continue;
            if (found) {
                // compare d_j/d_i against the incumbent by cross-multiplying
                const u128 lhs = u128(divs[j]) * divs[bi];
                const u128 rhs = u128(divs[bj]) * divs[i];
                if (lhs < rhs || (lhs == rhs && (i > bi || (i == bi && j > bj)))) continue;
            }
            found = true;
            bi = i;
            bj = j;
        }
    }
    if (!found)
        throw internal_error("reduce_nonresidue: no admissible divisor pair below the guarantee");

    ReductionStep step;
    step.n = n;
    step.d_i = divs[bi];
    step.d_j = divs[bj];
    step.n_prime = n / divs[bj] * divs[bi];
    step.verified.reserve(ctx.r());
    for (std::size_t k = 0; k < ctx.r(); ++k)
        step.verified.push_back(!power_residue_test(step.n_prime % p, ctx, k));
    for (bool ok : step.verified) {
        if (!ok) throw internal_error("reduce_nonresidue: reduced value failed verification");
    }
    if (step.n_prime >= n) throw internal_error("reduce_nonresidue: value did not shrink");
    return step;
}

// Iterate the reduction until the current value runs out of divisors.  The
// divisor-count precondition may fail immediately (empty chain); every other
// precondition violation propagates.
inline std::vector<ReductionStep> reduction_chain(u64 n, const ModulusContext& ctx) {
    std::vector<ReductionStep> chain;
    u64 current = n;
    for (;;) {
        try {
            chain.push_back(reduce_nonresidue(current, ctx));
        } catch (const too_few_divisors&) {
            break;
        }
        current = chain.back().n_prime;
    }
    return chain;
}

}  // namespace nonres
