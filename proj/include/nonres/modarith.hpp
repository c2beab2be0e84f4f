#pragma once

// Exact modular arithmetic over word-sized moduli: powering, deterministic
// primality, factorization, primitive roots, and discrete logs restricted to
// prime-order subgroups of (Z/pZ)*.  Everything here is a pure function of
// immutable inputs; a ModulusContext is safe to share across threads.

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <span>
#include <stdexcept>
#include <unordered_map>
#include <utility>
#include <vector>

#include "nonres/errors.hpp"

namespace nonres {

using u32 = std::uint32_t;
using u64 = std::uint64_t;
using i64 = std::int64_t;
using u128 = unsigned __int128;
using i128 = __int128;

// Moduli (and factorization inputs) are capped at 2^62 so every intermediate
// product fits in 128 bits with room to spare.
inline constexpr u64 kMaxModulus = u64(1) << 62;

inline u64 mod_mul(u64 a, u64 b, u64 m) {
    return static_cast<u64>(u128(a) * b % m);
}

inline u64 mod_pow(u64 base, u64 exp, u64 modulus) {
    if (modulus < 2) throw std::invalid_argument("mod_pow: modulus must be >= 2");
    u64 result = 1;
    base %= modulus;
    while (exp != 0) {
        if (exp & 1) result = mod_mul(result, base, modulus);
        base = mod_mul(base, base, modulus);
        exp >>= 1;
    }
    return result;
}

// Deterministic Miller-Rabin; the witness set below is a proven base set for
// all n < 2^64.
inline bool is_prime(u64 n) {
    if (n < 2) return false;
    for (u64 p : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
        if (n % p == 0) return n == p;
    }
    const int s = std::countr_zero(n - 1);
    const u64 d = (n - 1) >> s;
    for (u64 a : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
        u64 x = mod_pow(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool witness = true;
        for (int i = 1; i < s; ++i) {
            x = mod_mul(x, x, n);
            if (x == n - 1) {
                witness = false;
                break;
            }
        }
        if (witness) return false;
    }
    return true;
}

// A positive integer together with its complete prime factorization,
// (prime, exponent) pairs with strictly increasing primes.
struct FactoredInteger {
    u64 value = 1;
    std::vector<std::pair<u64, u32>> factors;

    u64 tau() const {
        u64 t = 1;
        for (const auto& [p, e] : factors) t *= e + 1;
        return t;
    }

    std::size_t omega() const { return factors.size(); }

    std::vector<u64> primes() const {
        std::vector<u64> ps;
        ps.reserve(factors.size());
        for (const auto& [p, e] : factors) ps.push_back(p);
        return ps;
    }
};

namespace detail {

// Pollard rho with Floyd cycle detection and a fixed polynomial schedule
// x^2 + c, c = 1, 2, ...; deterministic output for a given n.
inline u64 pollard_rho(u64 n) {
    for (u64 c = 1;; ++c) {
        u64 x = 2, y = 2, d = 1;
        while (d == 1) {
            x = (mod_mul(x, x, n) + c) % n;
            y = (mod_mul(y, y, n) + c) % n;
            y = (mod_mul(y, y, n) + c) % n;
            d = std::gcd(x > y ? x - y : y - x, n);
        }
        if (d != n) return d;
    }
}

inline void factor_into(u64 m, std::vector<u64>& primes) {
    if (m == 1) return;
    if (is_prime(m)) {
        primes.push_back(m);
        return;
    }
    const u64 d = pollard_rho(m);
    factor_into(d, primes);
    factor_into(m / d, primes);
}

}  // namespace detail

// Complete, deterministic factorization: trial division below 1e6, then
// Miller-Rabin plus rho splitting for whatever survives.
inline FactoredInteger factorize(u64 m) {
    if (m == 0) throw std::invalid_argument("factorize: input must be positive");
    if (m >= kMaxModulus) throw std::invalid_argument("factorize: input must be < 2^62");
    FactoredInteger out;
    out.value = m;
    std::vector<u64> primes;
    u64 rest = m;
    for (u64 d = 2; d < 1'000'000 && d * d <= rest; d += (d == 2 ? 1 : 2)) {
        while (rest % d == 0) {
            primes.push_back(d);
            rest /= d;
        }
    }
    if (rest > 1) detail::factor_into(rest, primes);
    std::sort(primes.begin(), primes.end());
    for (std::size_t i = 0; i < primes.size();) {
        std::size_t j = i;
        while (j < primes.size() && primes[j] == primes[i]) ++j;
        out.factors.emplace_back(primes[i], static_cast<u32>(j - i));
        i = j;
    }
    return out;
}

// Smallest g >= 1 with g^{(p-1)/q} != 1 (mod p) for every prime q | p-1.
// p = 2 degenerates to g = 1.
inline u64 find_primitive_root(u64 p, const FactoredInteger& pm1) {
    if (!is_prime(p)) throw std::invalid_argument("find_primitive_root: p must be prime");
    if (pm1.value != p - 1)
        throw std::invalid_argument("find_primitive_root: factorization does not match p-1");
    if (p == 2) return 1;
    for (u64 g = 2;; ++g) {
        bool primitive = true;
        for (const auto& [q, e] : pm1.factors) {
            if (mod_pow(g, (p - 1) / q, p) == 1) {
                primitive = false;
                break;
            }
        }
        if (primitive) return g;
    }
}

// Index vector of x: component i is ind_g x reduced mod the i-th target.
using ResidueVector = std::vector<u64>;

// A prime p with the factorization of p-1, a primitive root g, and a chosen
// set of target primes p_1 < ... < p_r dividing p-1.  For each target we keep
// the cofactor (p-1)/p_i and the subgroup generator g^{(p-1)/p_i} mod p.
// Immutable after construction.
class ModulusContext {
public:
    static ModulusContext with_targets(u64 p, std::vector<u64> targets) {
        return ModulusContext(p, factorize(p >= 1 ? p - 1 : 0), std::move(targets));
    }

    static ModulusContext with_targets(u64 p, FactoredInteger pm1, std::vector<u64> targets) {
        return ModulusContext(p, std::move(pm1), std::move(targets));
    }

    // All prime divisors of p-1 as targets.
    static ModulusContext with_all_targets(u64 p) {
        FactoredInteger pm1 = factorize(p >= 1 ? p - 1 : 0);
        std::vector<u64> targets = pm1.primes();
        return ModulusContext(p, std::move(pm1), std::move(targets));
    }

    // The r smallest prime divisors of p-1 (all of them if fewer than r).
    static ModulusContext with_smallest_targets(u64 p, std::size_t r) {
        FactoredInteger pm1 = factorize(p >= 1 ? p - 1 : 0);
        std::vector<u64> targets = pm1.primes();
        if (targets.size() > r) targets.resize(r);
        return ModulusContext(p, std::move(pm1), std::move(targets));
    }

    u64 p() const { return p_; }
    u64 g() const { return g_; }
    const FactoredInteger& pm1() const { return pm1_; }
    const std::vector<u64>& targets() const { return targets_; }
    std::size_t r() const { return targets_.size(); }
    u64 target(std::size_t i) const { return targets_.at(i); }
    u64 cofactor(std::size_t i) const { return cofactors_.at(i); }
    u64 subgen(std::size_t i) const { return subgens_.at(i); }

private:
    ModulusContext(u64 p, FactoredInteger pm1, std::vector<u64> targets)
        : p_(p), pm1_(std::move(pm1)), targets_(std::move(targets)) {
        if (p < 2 || p >= kMaxModulus || !is_prime(p))
            throw std::invalid_argument("ModulusContext: p must be an odd prime (or 2) below 2^62");
        if (pm1_.value != p - 1)
            throw std::invalid_argument("ModulusContext: factorization does not match p-1");
        if (p == 2) {
            // Degenerate context: g = 1, no targets.
            if (!targets_.empty())
                throw std::invalid_argument("ModulusContext: p = 2 admits no targets");
            g_ = 1;
            return;
        }
        if (targets_.empty())
            throw std::invalid_argument("ModulusContext: at least one target required");
        std::sort(targets_.begin(), targets_.end());
        for (std::size_t i = 0; i + 1 < targets_.size(); ++i) {
            if (targets_[i] == targets_[i + 1])
                throw std::invalid_argument("ModulusContext: duplicate target");
        }
        const std::vector<u64> divisor_primes = pm1_.primes();
        for (u64 q : targets_) {
            if (!std::binary_search(divisor_primes.begin(), divisor_primes.end(), q))
                throw std::invalid_argument("ModulusContext: target does not divide p-1");
        }
        g_ = find_primitive_root(p_, pm1_);
        cofactors_.reserve(targets_.size());
        subgens_.reserve(targets_.size());
        for (u64 q : targets_) {
            const u64 cof = (p_ - 1) / q;
            const u64 h = mod_pow(g_, cof, p_);
            // h has order exactly q: h^q = g^{p-1} = 1 and h != 1 since g is primitive.
            if (h == 1) throw internal_error("ModulusContext: subgroup generator collapsed");
            cofactors_.push_back(cof);
            subgens_.push_back(h);
        }
    }

    u64 p_ = 2;
    u64 g_ = 1;
    FactoredInteger pm1_;
    std::vector<u64> targets_;
    std::vector<u64> cofactors_;
    std::vector<u64> subgens_;
};

// Euler-criterion test: true iff x is a p_i-th power residue mod p,
// equivalently iff p_i | ind_g x.
inline bool power_residue_test(u64 x, const ModulusContext& ctx, std::size_t i) {
    if (i >= ctx.r()) throw std::invalid_argument("power_residue_test: target index out of range");
    if (x % ctx.p() == 0) throw std::invalid_argument("power_residue_test: x must be coprime to p");
    return mod_pow(x % ctx.p(), ctx.cofactor(i), ctx.p()) == 1;
}

namespace detail {

inline constexpr u64 kLinearScanLimit = u64(1) << 20;

// Baby table capped at 2^19 entries so the map stays below ~32 MB; for
// subgroup orders beyond 2^38 the walk becomes giant-step-heavy instead of
// growing the table.
inline constexpr u64 kBabyTableCap = u64(1) << 19;

// Discrete log in the order-q subgroup generated by h: the unique k in [0, q)
// with h^k = y (mod p).  Linear scan for small q, baby-step/giant-step above.
inline u64 subgroup_log(u64 y, u64 h, u64 q, u64 p) {
    if (q <= kLinearScanLimit) {
        u64 cur = 1;
        for (u64 k = 0; k < q; ++k) {
            if (cur == y) return k;
            cur = mod_mul(cur, h, p);
        }
        throw internal_error("subgroup_log: no solution; corrupted context");
    }
    u64 m = static_cast<u64>(std::ceil(std::sqrt(static_cast<double>(q))));
    while (m * m < q) ++m;
    m = std::min(m, kBabyTableCap);
    std::unordered_map<u64, u64> baby;
    baby.reserve(static_cast<std::size_t>(m) * 2);
    u64 cur = 1;
    for (u64 j = 0; j < m; ++j) {
        baby.emplace(cur, j);
        cur = mod_mul(cur, h, p);
    }
    const u64 h_inv_m = mod_pow(mod_pow(h, q - 1, p), m, p);  // h^{-m}
    u64 gamma = y;
    for (u64 i = 0; i * m < q; ++i) {
        auto it = baby.find(gamma);
        if (it != baby.end()) {
            const u64 k = i * m + it->second;
            if (k < q) return k;
        }
        gamma = mod_mul(gamma, h_inv_m, p);
    }
    throw internal_error("subgroup_log: no solution; corrupted context");
}

}  // namespace detail

// The unique k in [0, p_i) with subgen_i^k = x^{(p-1)/p_i} (mod p); this is
// ind_g x reduced mod p_i.
inline u64 index_mod_q(u64 x, const ModulusContext& ctx, std::size_t i) {
    if (i >= ctx.r()) throw std::invalid_argument("index_mod_q: target index out of range");
    if (x % ctx.p() == 0) throw std::invalid_argument("index_mod_q: x must be coprime to p");
    const u64 y = mod_pow(x % ctx.p(), ctx.cofactor(i), ctx.p());
    return detail::subgroup_log(y, ctx.subgen(i), ctx.target(i), ctx.p());
}

inline ResidueVector residue_vector(u64 x, const ModulusContext& ctx) {
    ResidueVector v;
    v.reserve(ctx.r());
    for (std::size_t i = 0; i < ctx.r(); ++i) v.push_back(index_mod_q(x, ctx, i));
    return v;
}

}  // namespace nonres
