// nonres: batch driver over the library for exhaustive prime scans, nonresidue
// reduction chains, divisor-spacing experiments, character sums, and exact
// nonresidue counts, emitted as deterministic CSV or JSON.
//
// Exit codes: 0 success, 2 usage/parameter error, 3 internal invariant failure.

#include <atomic>
#include <cmath>
#include <cstdint>
#include <exception>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "nonres/nonres.hpp"

namespace {

using nonres::u32;
using nonres::u64;

// ---------------------------------------------------------------------------
// table model

struct Cell {
    enum Kind { Int, Real, Str, Null } kind = Null;
    std::string text;

    static Cell of_int(u64 v) { return {Int, nonres::format_int(v)}; }
    static Cell of_real(double v) { return {Real, nonres::format_real(v)}; }
    static Cell of_str(std::string s) { return {Str, std::move(s)}; }
    static Cell null() { return {}; }
};

using Row = std::vector<Cell>;

struct Table {
    std::vector<std::string> header;
    std::vector<Row> rows;
};

void emit_csv(const Table& table, std::ostream& out) {
    std::vector<std::string> cells(table.header.begin(), table.header.end());
    out << nonres::csv_join(cells);
    for (const Row& row : table.rows) {
        cells.clear();
        for (const Cell& cell : row) cells.push_back(cell.text);
        out << nonres::csv_join(cells);
    }
}

void emit_json(const Table& table, std::ostream& out) {
    out << "[\n";
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        out << "  {";
        const Row& row = table.rows[r];
        for (std::size_t c = 0; c < row.size(); ++c) {
            if (c) out << ",";
            out << "\"" << table.header[c] << "\":";
            switch (row[c].kind) {
                case Cell::Null: out << "null"; break;
                case Cell::Str: out << "\"" << row[c].text << "\""; break;
                default: out << row[c].text; break;
            }
        }
        out << "}" << (r + 1 < table.rows.size() ? "," : "") << "\n";
    }
    out << "]\n";
}

// ---------------------------------------------------------------------------
// shared option plumbing

struct CommonOpts {
    u64 lo = 0, hi = 0;
    std::string primes;
    std::string targets = "all";
    std::string out;
    std::string format = "csv";
    unsigned workers = 1;
    double constant = 1.0;
};

constexpr u64 kMaxSieveBound = 100'000'000;

std::vector<u64> sieve_primes(u64 lo, u64 hi) {
    if (hi > kMaxSieveBound) throw std::invalid_argument("--hi exceeds the sieve cap 1e8");
    std::vector<u64> out;
    if (hi < 2 || hi < lo) return out;
    std::vector<bool> composite(hi + 1, false);
    for (u64 i = 2; i * i <= hi; ++i) {
        if (composite[i]) continue;
        for (u64 j = i * i; j <= hi; j += i) composite[j] = true;
    }
    for (u64 n = std::max<u64>(lo, 2); n <= hi; ++n) {
        if (!composite[n]) out.push_back(n);
    }
    return out;
}

std::vector<u64> parse_u64_list(const std::string& text) {
    std::vector<u64> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        out.push_back(std::stoull(item));
    }
    return out;
}

// Primes to iterate, from --primes or the [--lo, --hi] range.
std::vector<u64> resolve_primes(const CommonOpts& opts) {
    if (!opts.primes.empty()) {
        if (opts.lo != 0 || opts.hi != 0)
            throw std::invalid_argument("--primes and --lo/--hi are mutually exclusive");
        std::vector<u64> ps = parse_u64_list(opts.primes);
        for (u64 p : ps) {
            if (!nonres::is_prime(p))
                throw std::invalid_argument("--primes contains the non-prime " + std::to_string(p));
        }
        std::sort(ps.begin(), ps.end());
        ps.erase(std::unique(ps.begin(), ps.end()), ps.end());
        return ps;
    }
    if (opts.lo == 0 && opts.hi == 0)
        throw std::invalid_argument("a prime range (--lo/--hi) or --primes is required");
    if (opts.hi < opts.lo) throw std::invalid_argument("invalid range: --hi below --lo");
    return sieve_primes(opts.lo, opts.hi);
}

struct TargetRule {
    enum Kind { All, First, List } kind = All;
    std::size_t first_r = 1;
    std::vector<u64> list;
};

TargetRule parse_target_rule(const std::string& text) {
    TargetRule rule;
    if (text == "all") {
        rule.kind = TargetRule::All;
    } else if (text.rfind("first:", 0) == 0) {
        rule.kind = TargetRule::First;
        rule.first_r = std::stoull(text.substr(6));
        if (rule.first_r == 0) throw std::invalid_argument("--targets first:r needs r >= 1");
    } else if (text.rfind("list:", 0) == 0) {
        rule.kind = TargetRule::List;
        rule.list = parse_u64_list(text.substr(5));
        if (rule.list.empty()) throw std::invalid_argument("--targets list is empty");
        for (u64 q : rule.list) {
            if (!nonres::is_prime(q))
                throw std::invalid_argument("--targets list contains the non-prime " +
                                            std::to_string(q));
        }
        std::sort(rule.list.begin(), rule.list.end());
        rule.list.erase(std::unique(rule.list.begin(), rule.list.end()), rule.list.end());
    } else {
        throw std::invalid_argument("--targets must be all, first:r, or list:q1,q2,...");
    }
    return rule;
}

// Targets for one prime, or nothing when the rule does not apply (p = 2, or a
// listed target not dividing p-1); such primes produce no row.
std::optional<nonres::ModulusContext> context_for(u64 p, const TargetRule& rule) {
    if (p < 3) return std::nullopt;
    switch (rule.kind) {
        case TargetRule::All: return nonres::ModulusContext::with_all_targets(p);
        case TargetRule::First: return nonres::ModulusContext::with_smallest_targets(p, rule.first_r);
        case TargetRule::List: {
            for (u64 q : rule.list) {
                if ((p - 1) % q != 0) return std::nullopt;
            }
            return nonres::ModulusContext::with_targets(p, rule.list);
        }
    }
    return std::nullopt;
}

struct HRule {
    enum Kind { Pm1, Frac, List, Bound } kind = Pm1;
    std::vector<double> fracs;
    std::vector<u64> values;
};

HRule parse_h_rule(const std::string& text) {
    HRule rule;
    if (text == "pm1") {
        rule.kind = HRule::Pm1;
    } else if (text == "bound") {
        rule.kind = HRule::Bound;
    } else if (text.rfind("frac:", 0) == 0) {
        rule.kind = HRule::Frac;
        std::stringstream ss(text.substr(5));
        std::string item;
        while (std::getline(ss, item, ',')) {
            if (item.empty()) continue;
            const double f = std::stod(item);
            if (!(f > 0) || f > 1) throw std::invalid_argument("--H-rule frac values must be in (0,1]");
            rule.fracs.push_back(f);
        }
        if (rule.fracs.empty()) throw std::invalid_argument("--H-rule frac list is empty");
    } else if (text.rfind("list:", 0) == 0) {
        rule.kind = HRule::List;
        rule.values = parse_u64_list(text.substr(5));
        if (rule.values.empty()) throw std::invalid_argument("--H-rule list is empty");
    } else {
        throw std::invalid_argument("--H-rule must be pm1, bound, frac:..., or list:...");
    }
    return rule;
}

// Checkpoints for one prime, ascending, restricted to [1, p-1].
std::vector<u64> resolve_h(u64 p, std::size_t r, double constant, const HRule& rule) {
    std::vector<u64> hs;
    switch (rule.kind) {
        case HRule::Pm1: hs.push_back(p - 1); break;
        case HRule::Bound: {
            const auto tp = nonres::bound_parameters(p, std::max<std::size_t>(r, 1), constant);
            hs.push_back(std::min<u64>(p - 1, static_cast<u64>(tp.H)));
            break;
        }
        case HRule::Frac:
            for (double f : rule.fracs)
                hs.push_back(std::min<u64>(p - 1, static_cast<u64>(f * static_cast<double>(p))));
            break;
        case HRule::List: hs = rule.values; break;
    }
    std::sort(hs.begin(), hs.end());
    hs.erase(std::unique(hs.begin(), hs.end()), hs.end());
    std::erase_if(hs, [p](u64 h) { return h < 1 || h > p - 1; });
    return hs;
}

// Run fn(i) for i in [0, n) across a worker pool; results land in item order,
// so output bytes do not depend on the worker count.
template <typename Fn>
std::vector<std::vector<Row>> parallel_map(std::size_t n, unsigned workers, Fn&& fn) {
    std::vector<std::vector<Row>> results(n);
    if (n == 0) return results;
    const unsigned pool = std::max(1u, workers);
    std::atomic<std::size_t> cursor{0};
    std::vector<std::exception_ptr> errors(pool);
    std::vector<std::thread> threads;
    threads.reserve(pool);
    for (unsigned w = 0; w < pool; ++w) {
        threads.emplace_back([&, w] {
            try {
                for (;;) {
                    const std::size_t i = cursor.fetch_add(1);
                    if (i >= n) return;
                    results[i] = fn(i);
                }
            } catch (...) {
                errors[w] = std::current_exception();
                cursor.store(n);
            }
        });
    }
    for (auto& t : threads) t.join();
    for (const auto& err : errors) {
        if (err) std::rethrow_exception(err);
    }
    return results;
}

std::string join_targets(const std::vector<u64>& targets) {
    std::string out;
    for (std::size_t i = 0; i < targets.size(); ++i) {
        if (i) out += ';';
        out += std::to_string(targets[i]);
    }
    return out;
}

// ---------------------------------------------------------------------------
// commands

Table cmd_scan(const CommonOpts& opts) {
    const std::vector<u64> primes = resolve_primes(opts);
    const TargetRule rule = parse_target_rule(opts.targets);
    Table table;
    table.header = {"p", "r", "targets", "g", "n", "ratio", "H", "m"};
    auto rows = parallel_map(primes.size(), opts.workers, [&](std::size_t i) -> std::vector<Row> {
        const u64 p = primes[i];
        const auto ctx = context_for(p, rule);
        if (!ctx) return {};
        const u64 n = nonres::least_simultaneous_nonresidue(*ctx);
        const auto tp = nonres::bound_parameters(p, ctx->r(), opts.constant);
        Row row{Cell::of_int(p),
                Cell::of_int(ctx->r()),
                Cell::of_str(join_targets(ctx->targets())),
                Cell::of_int(ctx->g()),
                Cell::of_int(n),
                Cell::of_real(std::log(double(n)) / std::log(double(p))),
                Cell::of_real(tp.H),
                Cell::of_int(tp.m)};
        return {row};
    });
    for (auto& rs : rows)
        for (auto& r : rs) table.rows.push_back(std::move(r));
    return table;
}

Table cmd_reduce(const CommonOpts& opts, u64 cap) {
    const std::vector<u64> primes = resolve_primes(opts);
    const TargetRule rule = parse_target_rule(opts.targets);
    Table table;
    table.header = {"p", "status", "n", "steps", "final"};
    auto rows = parallel_map(primes.size(), opts.workers, [&](std::size_t i) -> std::vector<Row> {
        const u64 p = primes[i];
        const auto ctx = context_for(p, rule);
        if (!ctx) return {};
        const u64 threshold = nonres::required_length(ctx->targets());
        std::optional<u64> found;
        for (u64 n = 2; n <= cap; ++n) {
            if (n % p == 0) continue;
            bool all_nonresidue = true;
            for (std::size_t k = 0; k < ctx->r(); ++k) {
                if (nonres::power_residue_test(n % p, *ctx, k)) {
                    all_nonresidue = false;
                    break;
                }
            }
            if (!all_nonresidue) continue;
            if (nonres::factorize(n).tau() < threshold) continue;
            found = n;
            break;
        }
        if (!found) {
            return {Row{Cell::of_int(p), Cell::of_str("none-found"), Cell::null(), Cell::null(),
                        Cell::null()}};
        }
        const auto chain = nonres::reduction_chain(*found, *ctx);
        const u64 final_value = chain.empty() ? *found : chain.back().n_prime;
        return {Row{Cell::of_int(p), Cell::of_str("ok"), Cell::of_int(*found),
                    Cell::of_int(chain.size()), Cell::of_int(final_value)}};
    });
    for (auto& rs : rows)
        for (auto& r : rs) table.rows.push_back(std::move(r));
    return table;
}

Table cmd_spacing(u64 x, u64 t, double c, std::optional<double> rho_override) {
    Table table;
    table.header = {"x", "t", "c", "rho", "count_good", "count_total", "fraction", "clustered"};
    Row row;
    row.push_back(Cell::of_int(x));
    row.push_back(Cell::of_int(t));
    row.push_back(Cell::of_real(c));
    if (rho_override) {
        // fixed threshold instead of x^{1/t^c}; the clustered probe keeps its
        // own n-relative threshold and is omitted here
        if (!(*rho_override > 1.0))
            throw std::invalid_argument("--rho must exceed 1");
        if (x < 2 || x > nonres::kMaxExperimentBound || t < 2)
            throw std::invalid_argument("spacing: need 2 <= t and 2 <= x <= 1e7");
        const nonres::SpfSieve sieve(static_cast<u32>(x));
        u64 good = 0;
        for (u64 n = 1; n <= x; ++n) {
            const auto divs = sieve.divisors(static_cast<u32>(n));
            const auto subset = nonres::well_spaced_subset(divs, *rho_override);
            if (subset.divisors.size() >= t) ++good;
        }
        row.push_back(Cell::of_real(*rho_override));
        row.push_back(Cell::of_int(good));
        row.push_back(Cell::of_int(x));
        row.push_back(Cell::of_real(double(good) / double(x)));
        row.push_back(Cell::null());
    } else {
        const auto density = nonres::spacing_density_experiment(x, t, c);
        row.push_back(Cell::of_real(static_cast<double>(density.rho)));
        row.push_back(Cell::of_int(density.count_good));
        row.push_back(Cell::of_int(density.count_total));
        row.push_back(Cell::of_real(density.fraction));
        if (c < 1.0 / std::log(2.0)) {
            const auto probe = nonres::sharpness_probe(x, t, c);
            row.push_back(Cell::of_int(probe.count_clustered));
        } else {
            row.push_back(Cell::null());
        }
    }
    table.rows.push_back(std::move(row));
    return table;
}

Table cmd_charsum(const CommonOpts& opts, u64 k, u64 m, const HRule& h_rule) {
    const std::vector<u64> primes = resolve_primes(opts);
    Table table;
    table.header = {"p", "k", "order", "H", "re", "im", "abs", "m", "rhs"};
    auto rows = parallel_map(primes.size(), opts.workers, [&](std::size_t i) -> std::vector<Row> {
        const u64 p = primes[i];
        if (p < 3 || k < 1 || k > p - 2) return {};
        const std::vector<u64> hs = resolve_h(p, 1, opts.constant, h_rule);
        if (hs.empty()) return {};
        const auto series = nonres::character_sum_series(p, k, hs);
        std::vector<Row> out;
        for (std::size_t t = 0; t < hs.size(); ++t) {
            const auto s = series.sums[t];
            out.push_back(Row{Cell::of_int(p), Cell::of_int(k), Cell::of_int(series.order),
                              Cell::of_int(hs[t]), Cell::of_real(s.real()), Cell::of_real(s.imag()),
                              Cell::of_real(std::abs(s)), Cell::of_int(m),
                              Cell::of_real(nonres::burgess_rhs(p, double(hs[t]), m, opts.constant))});
        }
        return out;
    });
    for (auto& rs : rows)
        for (auto& r : rs) table.rows.push_back(std::move(r));
    return table;
}

Table cmd_count(const CommonOpts& opts, const HRule& h_rule) {
    const std::vector<u64> primes = resolve_primes(opts);
    const TargetRule rule = parse_target_rule(opts.targets);
    Table table;
    table.header = {"p", "r", "targets", "H", "J", "main_term"};
    auto rows = parallel_map(primes.size(), opts.workers, [&](std::size_t i) -> std::vector<Row> {
        const u64 p = primes[i];
        const auto ctx = context_for(p, rule);
        if (!ctx) return {};
        const std::vector<u64> hs = resolve_h(p, ctx->r(), opts.constant, h_rule);
        std::vector<Row> out;
        for (u64 H : hs) {
            const u64 J = nonres::count_simultaneous_nonresidues(*ctx, H);
            double main_term = static_cast<double>(H);
            for (u64 q : ctx->targets()) main_term *= 1.0 - 1.0 / static_cast<double>(q);
            out.push_back(Row{Cell::of_int(p), Cell::of_int(ctx->r()),
                              Cell::of_str(join_targets(ctx->targets())), Cell::of_int(H),
                              Cell::of_int(J), Cell::of_real(main_term)});
        }
        return out;
    });
    for (auto& rs : rows)
        for (auto& r : rs) table.rows.push_back(std::move(r));
    return table;
}

void write_table(const Table& table, const CommonOpts& opts) {
    std::ostream* out = &std::cout;
    std::ofstream file;
    if (!opts.out.empty()) {
        file.open(opts.out, std::ios::binary);
        if (!file) throw std::invalid_argument("cannot open output file " + opts.out);
        out = &file;
    }
    if (opts.format == "csv")
        emit_csv(table, *out);
    else if (opts.format == "json")
        emit_json(table, *out);
    else
        throw std::invalid_argument("--format must be csv or json");
}

void add_common_flags(CLI::App* sub, CommonOpts& opts) {
    sub->add_option("--lo", opts.lo, "lower end of the prime range");
    sub->add_option("--hi", opts.hi, "upper end of the prime range");
    sub->add_option("--primes", opts.primes, "explicit comma-separated prime list");
    sub->add_option("--targets", opts.targets, "target rule: all | first:r | list:q1,q2,...");
    sub->add_option("--out", opts.out, "output path (default stdout)");
    sub->add_option("--format", opts.format, "output format: csv | json");
    sub->add_option("--workers", opts.workers, "worker thread count (output is identical)");
    sub->add_option("--constant", opts.constant, "the unspecified bound constant C''");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"simultaneous power nonresidue toolkit"};
    app.require_subcommand(1);

    CommonOpts scan_opts;
    CLI::App* scan = app.add_subcommand("scan", "least nonresidues and bound parameters per prime");
    add_common_flags(scan, scan_opts);

    CommonOpts reduce_opts;
    u64 reduce_cap = 10'000;
    CLI::App* reduce = app.add_subcommand("reduce", "divisor-ratio reduction chains per prime");
    add_common_flags(reduce, reduce_opts);
    reduce->add_option("--cap", reduce_cap, "search cap for the starting nonresidue");

    CommonOpts spacing_opts;
    u64 spacing_x = 1000, spacing_t = 2;
    double spacing_c = 1.5;
    std::optional<double> spacing_rho;
    CLI::App* spacing = app.add_subcommand("spacing", "well-spaced divisor density experiment");
    add_common_flags(spacing, spacing_opts);
    spacing->add_option("--x", spacing_x, "upper bound of the integer range");
    spacing->add_option("--t", spacing_t, "required chain length");
    spacing->add_option("--c", spacing_c, "spacing exponent");
    spacing->add_option("--rho", spacing_rho, "fixed spacing threshold overriding x^(1/t^c)");

    CommonOpts charsum_opts;
    u64 charsum_k = 1, charsum_m = 2;
    std::string charsum_h = "pm1";
    CLI::App* charsum = app.add_subcommand("charsum", "character partial sums against the bound shape");
    add_common_flags(charsum, charsum_opts);
    charsum->add_option("--k", charsum_k, "character index in [1, p-2]");
    charsum->add_option("--m", charsum_m, "Burgess exponent for the reported bound");
    charsum->add_option("--H-rule", charsum_h, "checkpoints: pm1 | bound | frac:... | list:...");

    CommonOpts count_opts;
    std::string count_h = "pm1";
    CLI::App* count = app.add_subcommand("count", "exact simultaneous nonresidue counts up to H");
    add_common_flags(count, count_opts);
    count->add_option("--H-rule", count_h, "count bounds: pm1 | bound | frac:... | list:...");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (scan->parsed()) {
            write_table(cmd_scan(scan_opts), scan_opts);
        } else if (reduce->parsed()) {
            write_table(cmd_reduce(reduce_opts, reduce_cap), reduce_opts);
        } else if (spacing->parsed()) {
            write_table(cmd_spacing(spacing_x, spacing_t, spacing_c, spacing_rho), spacing_opts);
        } else if (charsum->parsed()) {
            write_table(cmd_charsum(charsum_opts, charsum_k, charsum_m, parse_h_rule(charsum_h)),
                        charsum_opts);
        } else if (count->parsed()) {
            write_table(cmd_count(count_opts, parse_h_rule(count_h)), count_opts);
        }
    } catch (const nonres::internal_error& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 3;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "unexpected error: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
