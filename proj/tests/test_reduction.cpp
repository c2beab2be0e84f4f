#include <catch2/catch_amalgamated.hpp>

#include "nonres/reduction.hpp"
#include "nonres/scan.hpp"
#include "oracles.hpp"

using namespace nonres;

TEST_CASE("reduce_nonresidue on the p = 7 instance") {
    const ModulusContext ctx = ModulusContext::with_targets(7, {2});
    // divisors of 12 have ind-parities (0,0,1,0,1,1) and b = (1); among the
    // admissible pairs, (1,4) maximizes d_j/d_i
    const ReductionStep step = reduce_nonresidue(12, ctx);
    CHECK(step.n == 12);
    CHECK(step.d_i == 1);
    CHECK(step.d_j == 4);
    CHECK(step.n_prime == 3);
    REQUIRE(step.verified == std::vector<bool>{true});
    CHECK_FALSE(power_residue_test(step.n_prime, ctx, 0));
}

TEST_CASE("reduce_nonresidue error paths") {
    const ModulusContext ctx7 = ModulusContext::with_targets(7, {2});
    // 2 is a square mod 7
    CHECK_THROWS_AS(reduce_nonresidue(2, ctx7), precondition_error);
    // multiples of p are rejected
    CHECK_THROWS_AS(reduce_nonresidue(14, ctx7), std::invalid_argument);

    const ModulusContext ctx23 = ModulusContext::with_targets(7, {2, 3});
    try {
        reduce_nonresidue(3, ctx23);
        FAIL("expected too_few_divisors");
    } catch (const too_few_divisors& e) {
        CHECK(e.tau == 2);
        CHECK(e.threshold == 7);
    }
}

TEST_CASE("reduction_chain examples") {
    const ModulusContext ctx = ModulusContext::with_targets(7, {2});
    const auto chain = reduction_chain(12, ctx);
    REQUIRE(chain.size() == 1);  // 12 -> 3, then tau(3) = 2 < 3 stops
    CHECK(chain[0].n_prime == 3);

    const ModulusContext ctx23 = ModulusContext::with_targets(7, {2, 3});
    CHECK(reduction_chain(3, ctx23).empty());
}

TEST_CASE("chains strictly decrease through verified nonresidues") {
    const ModulusContext ctx = ModulusContext::with_targets(211, {2, 3, 5});
    const u64 threshold = required_length(ctx.targets());
    u64 start = 0;
    for (u64 n = 2; n < 50'000; ++n) {
        if (n % 211 == 0) continue;
        bool all_fail = true;
        for (std::size_t k = 0; k < ctx.r() && all_fail; ++k)
            all_fail = !power_residue_test(n % 211, ctx, k);
        if (all_fail && factorize(n).tau() >= threshold) {
            start = n;
            break;
        }
    }
    REQUIRE(start > 0);
    const auto chain = reduction_chain(start, ctx);
    REQUIRE_FALSE(chain.empty());
    u64 prev = start;
    for (const ReductionStep& step : chain) {
        REQUIRE(step.n == prev);
        REQUIRE(step.n_prime < step.n);
        for (bool ok : step.verified) REQUIRE(ok);
        prev = step.n_prime;
    }
}

TEST_CASE("the index-vector identity drives every reduction") {
    // vec(n') = b + vec(d_i) - vec(d_j) componentwise, all components nonzero
    for (u64 p : {11ULL, 13ULL, 31ULL, 61ULL, 211ULL, 1009ULL}) {
        const ModulusContext ctx = ModulusContext::with_smallest_targets(p, 2);
        const u64 threshold = required_length(ctx.targets());
        for (u64 n = 2; n < std::min<u64>(p - 1, 5000); ++n) {
            if (n % p == 0) continue;
            bool all_fail = true;
            for (std::size_t k = 0; k < ctx.r() && all_fail; ++k)
                all_fail = !power_residue_test(n % p, ctx, k);
            if (!all_fail || factorize(n).tau() < threshold) continue;

            const ReductionStep step = reduce_nonresidue(n, ctx);
            const ResidueVector b = residue_vector(n % p, ctx);
            const ResidueVector vi = residue_vector(step.d_i % p, ctx);
            const ResidueVector vj = residue_vector(step.d_j % p, ctx);
            const ResidueVector vn = residue_vector(step.n_prime % p, ctx);
            for (std::size_t k = 0; k < ctx.r(); ++k) {
                const u64 q = ctx.target(k);
                REQUIRE(vn[k] == (b[k] + vi[k] + q - vj[k]) % q);
                REQUIRE(vn[k] != 0);
            }
            break;  // one qualifying n per prime is enough here
        }
    }
}

TEST_CASE("soundness sample: first qualifying nonresidue reduces for p <= 3000") {
    // the acceptance suite runs the full p <= 1e5 version
    for (u64 p = 3; p <= 3000; ++p) {
        if (!is_prime(p)) continue;
        const FactoredInteger pm1 = factorize(p - 1);
        const std::vector<u64> divisor_primes = pm1.primes();
        for (std::size_t take = 1; take <= std::min<std::size_t>(2, divisor_primes.size()); ++take) {
            std::vector<u64> targets(divisor_primes.begin(), divisor_primes.begin() + take);
            const ModulusContext ctx = ModulusContext::with_targets(p, pm1, targets);
            const u64 threshold = required_length(ctx.targets());
            for (u64 n = 2; n <= std::min<u64>(p - 1, 2000); ++n) {
                bool all_fail = true;
                for (std::size_t k = 0; k < ctx.r() && all_fail; ++k)
                    all_fail = !power_residue_test(n, ctx, k);
                if (!all_fail || factorize(n).tau() < threshold) continue;
                const ReductionStep step = reduce_nonresidue(n, ctx);
                REQUIRE(step.n_prime < n);
                break;
            }
        }
    }
}
