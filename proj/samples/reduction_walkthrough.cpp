// Walk one prime end to end: least primitive root, least simultaneous
// nonresidue, and a divisor-ratio reduction chain with its certificates.

#include <cstdio>

#include "nonres/nonres.hpp"

int main() {
    using namespace nonres;

    const u64 p = 211;  // p - 1 = 2 * 3 * 5 * 7
    const ModulusContext ctx = ModulusContext::with_all_targets(p);
    std::printf("p = %llu, primitive root g = %llu, targets:",
                (unsigned long long)p, (unsigned long long)ctx.g());
    for (u64 q : ctx.targets()) std::printf(" %llu", (unsigned long long)q);
    std::printf("\n");

    const u64 n0 = least_simultaneous_nonresidue(ctx);
    std::printf("least simultaneous nonresidue: %llu\n", (unsigned long long)n0);

    // find a starting nonresidue with enough divisors for the reduction
    const u64 threshold = required_length(ctx.targets());
    u64 start = 0;
    for (u64 n = 2; n < 100'000; ++n) {
        if (n % p == 0) continue;
        bool all_fail = true;
        for (std::size_t k = 0; k < ctx.r() && all_fail; ++k)
            all_fail = !power_residue_test(n % p, ctx, k);
        if (all_fail && factorize(n).tau() >= threshold) {
            start = n;
            break;
        }
    }
    if (start == 0) {
        std::printf("no starting value with tau >= %llu below the cap\n",
                    (unsigned long long)threshold);
        return 0;
    }

    std::printf("reduction threshold tau >= %llu, starting at n = %llu\n",
                (unsigned long long)threshold, (unsigned long long)start);
    for (const ReductionStep& step : reduction_chain(start, ctx)) {
        std::printf("  %llu = n, pair (%llu, %llu) -> n' = %llu\n",
                    (unsigned long long)step.n, (unsigned long long)step.d_i,
                    (unsigned long long)step.d_j, (unsigned long long)step.n_prime);
    }
    return 0;
}
