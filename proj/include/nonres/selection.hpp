#pragma once

// Difference-avoiding selection: given a sequence, pick a large subsequence
// none of whose internal differences equals (or is congruent to) a forbidden
// value, and the componentwise pair search built from r such selections.
// These are the constructive engines behind the nonresidue reduction step.

#include <cstdint>
#include <map>
#include <numeric>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "nonres/errors.hpp"
#include "nonres/modarith.hpp"

namespace nonres {

// Exact rational, just enough for the length bookkeeping below.
struct Rational {
    i64 num = 0;
    i64 den = 1;

    Rational(i64 value) : num(value) {}  // NOLINT: implicit from integers
    Rational(i64 n, i64 d) : num(n), den(d) {
        if (den == 0) throw std::invalid_argument("Rational: zero denominator");
        if (den < 0) {
            num = -num;
            den = -den;
        }
        const i64 g = std::gcd(num < 0 ? -num : num, den);
        if (g > 1) {
            num /= g;
            den /= g;
        }
    }

    bool greater_than(i64 k) const { return i128(num) > i128(k) * den; }
};

inline u64 rational_ceil(const Rational& u) {
    if (u.num <= 0) return 0;
    return static_cast<u64>((u.num + u.den - 1) / u.den);
}

// Minimal sequence length the modular selection demands: ceil(2uq/(q-1)) for
// odd q, ceil(2u) for q = 2.
inline u64 modular_min_length(u64 q, const Rational& u) {
    if (q == 2) {
        const i128 n = i128(2) * u.num;
        return static_cast<u64>((n + u.den - 1) / u.den);
    }
    const i128 n = i128(2) * u.num * q;
    const i128 d = i128(u.den) * (q - 1);
    return static_cast<u64>((n + d - 1) / d);
}

// Componentwise-forbidden vector for the pair search: entry k is a nonzero
// element of F_{q_k}.
using ForbiddenVector = ResidueVector;

// Indices chosen by a selection plus the certificate they avoid: no ordered
// pair of selected elements differs by `avoided` (exactly when modulus == 0,
// mod `modulus` otherwise).
struct SelectionResult {
    std::vector<std::size_t> indices;  // strictly increasing positions into the input
    i64 avoided = 0;
    u64 modulus = 0;
};

// From any sequence of exact integers, keep at least ceil(len/2) positions so
// that no two kept values differ by exactly a.  Construction: partition by
// value mod |a|, split each class by the parity of the multiplier relative to
// the class minimum, keep the larger half (even multipliers on ties).
inline SelectionResult select_avoiding_difference(std::span<const i64> values, i64 a) {
    if (a == 0) throw std::invalid_argument("select_avoiding_difference: a must be nonzero");
    if (values.empty()) throw std::invalid_argument("select_avoiding_difference: empty input");
    const i64 step = a < 0 ? -a : a;  // the condition is symmetric in the sign of a
    std::map<i64, std::vector<std::size_t>> classes;
    for (std::size_t i = 0; i < values.size(); ++i) {
        i64 key = values[i] % step;
        if (key < 0) key += step;
        classes[key].push_back(i);
    }
    SelectionResult out;
    out.avoided = a;
    out.modulus = 0;
    for (const auto& [key, members] : classes) {
        i64 lo = values[members.front()];
        for (std::size_t i : members) lo = std::min(lo, values[i]);
        std::vector<std::size_t> even_half, odd_half;
        for (std::size_t i : members) {
            const i128 k = (i128(values[i]) - lo) / step;
            if (k & 1)
                odd_half.push_back(i);
            else
                even_half.push_back(i);
        }
        const auto& keep = even_half.size() >= odd_half.size() ? even_half : odd_half;
        out.indices.insert(out.indices.end(), keep.begin(), keep.end());
    }
    std::sort(out.indices.begin(), out.indices.end());
    return out;
}

namespace detail {

// Shared body of the modular selection once the guaranteed output size is
// known: normalize the forbidden difference to 1, drop a least-populated
// residue class, re-anchor survivors into {1,...,q-1}, and delegate to the
// exact-difference selection.  q = 2 keeps the majority parity directly
// (even residues on ties).
inline SelectionResult modular_select(std::span<const i64> values, u64 q, i64 a, u64 min_keep) {
    const i64 qi = static_cast<i64>(q);
    SelectionResult out;
    out.avoided = a;
    out.modulus = q;
    if (q == 2) {
        std::vector<std::size_t> even_class, odd_class;
        for (std::size_t i = 0; i < values.size(); ++i) {
            const i64 par = ((values[i] % 2) + 2) % 2;
            (par == 0 ? even_class : odd_class).push_back(i);
        }
        out.indices = even_class.size() >= odd_class.size() ? even_class : odd_class;
    } else {
        const u64 amod = static_cast<u64>(((a % qi) + qi) % qi);
        const u64 ainv = mod_pow(amod, q - 2, q);
        std::vector<u64> w(values.size());
        std::map<u64, u64> counts;
        for (std::size_t i = 0; i < values.size(); ++i) {
            const u64 v = static_cast<u64>(((values[i] % qi) + qi) % qi);
            w[i] = mod_mul(v, ainv, q);
            ++counts[w[i]];
        }
        // Least-populated class; empty classes count as zero, ties resolve to
        // the smallest h.
        u64 h = 0;
        if (counts.size() < q) {
            u64 expect = 0;
            for (const auto& [cls, cnt] : counts) {
                if (cls != expect) break;
                ++expect;
            }
            h = expect;
        } else {
            u64 best = values.size() + 1;
            for (const auto& [cls, cnt] : counts) {
                if (cnt < best) {
                    best = cnt;
                    h = cls;
                }
            }
        }
        std::vector<std::size_t> survivors;
        std::vector<i64> anchored;
        for (std::size_t i = 0; i < values.size(); ++i) {
            if (w[i] == h) continue;
            survivors.push_back(i);
            anchored.push_back(static_cast<i64>((w[i] + q - h) % q));  // in {1,...,q-1}
        }
        const SelectionResult inner = select_avoiding_difference(anchored, 1);
        out.indices.reserve(inner.indices.size());
        for (std::size_t t : inner.indices) out.indices.push_back(survivors[t]);
    }
    if (out.indices.size() < min_keep)
        throw internal_error("modular_select: selection fell short of its guarantee");
    return out;
}

}  // namespace detail

// Modular variant: from t >= ceil(2uq/(q-1)) integers (t >= ceil(2u) for
// q = 2) keep at least ceil(u) positions with no ordered difference congruent
// to a mod q.  q must be prime and a nonzero mod q; u is a rational > 1.
inline SelectionResult select_avoiding_difference_mod(std::span<const i64> values, u64 q, i64 a,
                                                      const Rational& u) {
    if (q < 2) throw std::invalid_argument("select_avoiding_difference_mod: q must be a prime");
    const i64 qi = static_cast<i64>(q);
    if (((a % qi) + qi) % qi == 0)
        throw std::invalid_argument("select_avoiding_difference_mod: a must be nonzero mod q");
    if (!u.greater_than(1))
        throw std::invalid_argument("select_avoiding_difference_mod: u must exceed 1");
    const u64 need = modular_min_length(q, u);
    if (values.size() < need)
        throw precondition_error("select_avoiding_difference_mod: sequence of length " +
                                 std::to_string(values.size()) + " is below the threshold " +
                                 std::to_string(need));
    return detail::modular_select(values, q, a, rational_ceil(u));
}

namespace detail {

// Chain stage: run the modular selection with the largest admissible u for
// the actual length, u = len(q-1)/(2q) (len/2 for q = 2).  Requires u > 1.
inline SelectionResult modular_select_max(std::span<const i64> values, u64 q, i64 a) {
    const u128 len = values.size();
    u64 keep = 0;
    if (q == 2) {
        if (len <= 2) throw internal_error("modular_select_max: stage too short");
        keep = static_cast<u64>((len + 1) / 2);
    } else {
        if (len * (q - 1) <= 2 * u128(q)) throw internal_error("modular_select_max: stage too short");
        keep = static_cast<u64>((len * (q - 1) + 2 * u128(q) - 1) / (2 * u128(q)));
    }
    return modular_select(values, q, a, keep);
}

inline void validate_targets(std::span<const u64> targets) {
    for (std::size_t k = 0; k < targets.size(); ++k) {
        if (targets[k] < 2 || !is_prime(targets[k]))
            throw std::invalid_argument("targets must be primes");
        if (k > 0 && targets[k - 1] >= targets[k])
            throw std::invalid_argument("targets must be strictly increasing");
    }
}

}  // namespace detail

// Minimal input length the chained construction needs to guarantee a final
// pair: starting from a requirement of 2 survivors, thread backwards through
// the targets in increasing order (the construction itself consumes them in
// decreasing order), taking the least length whose maximal admissible u
// yields the next stage's count.  Never exceeds r*2^r + 1 whenever
// r > prod_{q>2} q/(q-1), and always exceeds 2^r * prod_{q>2} q/(q-1).
inline u64 required_length(std::span<const u64> targets) {
    std::vector<u64> sorted(targets.begin(), targets.end());
    std::sort(sorted.begin(), sorted.end());
    detail::validate_targets(sorted);
    u128 T = 2;
    for (u64 q : sorted) {
        if (q == 2)
            T = 2 * T - 1;
        else
            T = (2 * (T - 1) * q) / (q - 1) + 1;
        if (T > (u128(1) << 62))
            throw std::invalid_argument("required_length: threshold overflows");
    }
    return static_cast<u64>(T);
}

// True iff vectors[j] - vectors[i] misses b in every component mod the
// corresponding target.
inline bool pair_avoids(const std::vector<ResidueVector>& vectors, std::size_t i, std::size_t j,
                        const ForbiddenVector& b, std::span<const u64> targets) {
    for (std::size_t k = 0; k < targets.size(); ++k) {
        const u64 q = targets[k];
        const u64 diff = (vectors[j][k] + q - vectors[i][k]) % q;
        if (diff == b[k] % q) return false;
    }
    return true;
}

namespace detail {

inline void validate_pair_inputs(const std::vector<ResidueVector>& vectors,
                                 const ForbiddenVector& b, std::span<const u64> targets) {
    validate_targets(targets);
    if (b.size() != targets.size())
        throw std::invalid_argument("forbidden vector size must match the target count");
    for (std::size_t k = 0; k < targets.size(); ++k) {
        if (b[k] == 0 || b[k] >= targets[k])
            throw std::invalid_argument("forbidden vector components must lie in [1, q)");
    }
    for (const auto& v : vectors) {
        if (v.size() != targets.size())
            throw std::invalid_argument("vector arity must match the target count");
        for (std::size_t k = 0; k < targets.size(); ++k) {
            if (v[k] >= targets[k])
                throw std::invalid_argument("vector component out of range");
        }
    }
    if (vectors.size() < required_length(targets))
        throw precondition_error("sequence of " + std::to_string(vectors.size()) +
                                 " vectors is below required_length " +
                                 std::to_string(required_length(targets)));
}

}  // namespace detail

// Exhaustive route (the production default): scan pairs i < j in lexicographic
// order and return the first whose difference avoids b componentwise.  The
// length precondition makes failure impossible; failure anyway is reported as
// an internal inconsistency.
inline std::pair<std::size_t, std::size_t> select_pair_avoiding_forbidden(
    const std::vector<ResidueVector>& vectors, const ForbiddenVector& b,
    std::span<const u64> targets) {
    detail::validate_pair_inputs(vectors, b, targets);
    for (std::size_t i = 0; i < vectors.size(); ++i) {
        for (std::size_t j = i + 1; j < vectors.size(); ++j) {
            if (pair_avoids(vectors, i, j, b, targets)) return {i, j};
        }
    }
    throw internal_error("select_pair_avoiding_forbidden: no admissible pair below the guarantee");
}

// Constructive route embodying the proof: one modular selection per component,
// targets consumed in decreasing order so the most length-expensive moduli see
// the longest sequence.  Within the surviving set no ordered difference hits b
// in any component, so the two smallest survivors form the pair.
inline std::pair<std::size_t, std::size_t> select_pair_constructive(
    const std::vector<ResidueVector>& vectors, const ForbiddenVector& b,
    std::span<const u64> targets) {
    detail::validate_pair_inputs(vectors, b, targets);
    std::vector<std::size_t> surviving(vectors.size());
    std::iota(surviving.begin(), surviving.end(), 0);
    for (std::size_t k = targets.size(); k-- > 0;) {
        std::vector<i64> vals;
        vals.reserve(surviving.size());
        for (std::size_t idx : surviving) vals.push_back(static_cast<i64>(vectors[idx][k]));
        const SelectionResult stage =
            detail::modular_select_max(vals, targets[k], static_cast<i64>(b[k]));
        std::vector<std::size_t> next;
        next.reserve(stage.indices.size());
        for (std::size_t t : stage.indices) next.push_back(surviving[t]);
        surviving = std::move(next);
    }
    if (surviving.size() < 2)
        throw internal_error("select_pair_constructive: fewer than two survivors");
    return {surviving[0], surviving[1]};
}

}  // namespace nonres
