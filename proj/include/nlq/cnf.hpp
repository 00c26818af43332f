#pragma once

// CNF formulas: DIMACS I/O, evaluation, the truth-table model counter and seeded instance
// generators.

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "nlq/errors.hpp"

namespace nlq {

inline constexpr int kDefaultBruteForceCap = 24;
inline constexpr int kDefaultCircuitCap = 20;

// NLQ_MAX_N overrides both caps. Values above 62 are clamped (64-bit counts).
inline int cap_override(int fallback) {
    if (const char* env = std::getenv("NLQ_MAX_N")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && v >= 1) return static_cast<int>(std::min<long>(v, 62));
    }
    return fallback;
}

inline int brute_force_cap() { return cap_override(kDefaultBruteForceCap); }
inline int circuit_cap() { return cap_override(kDefaultCircuitCap); }

// DIMACS literal: +v for x_v, -v for not x_v, v in 1..n.
using Literal = int;
using Clause = std::vector<Literal>;

struct CnfFormula {
    int n = 0;
    std::vector<Clause> clauses;

    // Common clause width, or 0 when widths are mixed or there are no clauses.
    int width() const {
        if (clauses.empty()) return 0;
        const auto w = clauses.front().size();
        for (const auto& c : clauses) {
            if (c.size() != w) return 0;
        }
        return static_cast<int>(w);
    }

    friend bool operator==(const CnfFormula&, const CnfFormula&) = default;
};

inline void validate(const CnfFormula& f) {
    if (f.n < 1) throw DomainError("formula must have at least one variable");
    for (const auto& c : f.clauses) {
        if (c.empty()) throw DomainError("empty clause");
        for (Literal l : c) {
            if (l == 0 || std::abs(l) > f.n) {
                throw DomainError("literal " + std::to_string(l) + " out of range for n = " + std::to_string(f.n));
            }
        }
    }
}

// ---------------------------------------------------------------------------------------------
// DIMACS

// Strict on structure (header, terminators, counts, ranges), lenient on whitespace and on
// clauses spanning lines.
inline CnfFormula parse_dimacs(std::string_view text) {
    CnfFormula f;
    bool have_header = false;
    long declared_clauses = 0;
    Clause current;
    std::size_t current_start_line = 0;
    std::size_t line_no = 0;
    std::size_t pos = 0;

    while (pos <= text.size()) {
        const auto eol = text.find('\n', pos);
        std::string_view line = text.substr(pos, eol == std::string_view::npos ? std::string_view::npos : eol - pos);
        pos = (eol == std::string_view::npos) ? text.size() + 1 : eol + 1;
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);

        const auto first = line.find_first_not_of(" \t");
        if (first == std::string_view::npos) continue;
        if (line[first] == 'c') continue;

        std::istringstream in{std::string(line.substr(first))};
        if (line[first] == 'p') {
            if (have_header) throw ParseError(line_no, "duplicate problem line");
            std::string p, kind, extra;
            long n = -1, m = -1;
            if (!(in >> p >> kind >> n >> m) || p != "p" || kind != "cnf" || (in >> extra)) {
                throw ParseError(line_no, "malformed header, expected 'p cnf <variables> <clauses>'");
            }
            if (n < 1 || n > 1'000'000 || m < 0) throw ParseError(line_no, "header counts out of range");
            f.n = static_cast<int>(n);
            declared_clauses = m;
            have_header = true;
            continue;
        }
        if (!have_header) throw ParseError(line_no, "clause data before 'p cnf' header");

        std::string token;
        while (in >> token) {
            long lit = 0;
            std::size_t used = 0;
            try {
                lit = std::stol(token, &used);
            } catch (const std::exception&) {
                used = 0;
            }
            if (used != token.size()) throw ParseError(line_no, "invalid literal '" + token + "'");
            if (lit == 0) {
                if (current.empty()) throw ParseError(line_no, "empty clause");
                f.clauses.push_back(std::move(current));
                current.clear();
                continue;
            }
            if (std::labs(lit) > f.n) {
                throw ParseError(line_no, "literal " + token + " exceeds n=" + std::to_string(f.n));
            }
            if (current.empty()) current_start_line = line_no;
            current.push_back(static_cast<Literal>(lit));
        }
    }
    if (!have_header) throw ParseError(0, "missing 'p cnf' header");
    if (!current.empty()) throw ParseError(current_start_line, "clause missing terminating 0");
    if (static_cast<long>(f.clauses.size()) != declared_clauses) {
        throw ParseError(0, "header declares " + std::to_string(declared_clauses) + " clauses, found " +
                                std::to_string(f.clauses.size()));
    }
    return f;
}

// Header line, one clause per line, "0" terminators, LF endings.
inline std::string emit_dimacs(const CnfFormula& f) {
    std::string out = "p cnf " + std::to_string(f.n) + " " + std::to_string(f.clauses.size()) + "\n";
    for (const auto& c : f.clauses) {
        for (Literal l : c) {
            out += std::to_string(l);
            out += ' ';
        }
        out += "0\n";
    }
    return out;
}

// ---------------------------------------------------------------------------------------------
// Evaluation and counting

// Bit (v-1) of an assignment mask holds x_v.
class ClauseMasks {
public:
    explicit ClauseMasks(const CnfFormula& f) {
        if (f.n > 63) throw ResourceError("mask evaluation supports at most 63 variables");
        for (const auto& c : f.clauses) {
            std::uint64_t pos = 0, neg = 0;
            for (Literal l : c) {
                const std::uint64_t bit = std::uint64_t{1} << (std::abs(l) - 1);
                (l > 0 ? pos : neg) |= bit;
            }
            pos_.push_back(pos);
            neg_.push_back(neg);
        }
    }

    bool satisfied(std::uint64_t x) const {
        for (std::size_t i = 0; i < pos_.size(); ++i) {
            if (((x & pos_[i]) | (~x & neg_[i])) == 0) return false;
        }
        return true;
    }

private:
    std::vector<std::uint64_t> pos_;
    std::vector<std::uint64_t> neg_;
};

// assignment[i] is the value of x_{i+1}. An empty clause list is satisfied by everything.
inline bool evaluate(const CnfFormula& f, const std::vector<bool>& assignment) {
    if (assignment.size() != static_cast<std::size_t>(f.n)) {
        throw DomainError("assignment has " + std::to_string(assignment.size()) + " bits, formula has " +
                          std::to_string(f.n) + " variables");
    }
    for (const auto& c : f.clauses) {
        const bool sat = std::any_of(c.begin(), c.end(), [&](Literal l) {
            const bool value = assignment[static_cast<std::size_t>(std::abs(l) - 1)];
            return l > 0 ? value : !value;
        });
        if (!sat) return false;
    }
    return true;
}

struct SatCount {
    std::uint64_t s = 0;
    friend bool operator==(const SatCount&, const SatCount&) = default;
};

// Exact truth-table count. Blocks run on worker threads; the integer sum does not depend on
// the thread count.
inline SatCount count_solutions(const CnfFormula& f, int cap = brute_force_cap()) {
    validate(f);
    if (f.n > cap) {
        throw ResourceError("n = " + std::to_string(f.n) + " exceeds the brute-force cap " + std::to_string(cap));
    }
    const ClauseMasks masks(f);
    const std::uint64_t total = std::uint64_t{1} << f.n;
    const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    const unsigned workers = total >= (1u << 16) ? std::min<unsigned>(hw, 16) : 1;
    std::vector<std::uint64_t> partial(workers, 0);
    auto work = [&](unsigned w) {
        const std::uint64_t lo = total * w / workers;
        const std::uint64_t hi = total * (w + 1) / workers;
        std::uint64_t count = 0;
        for (std::uint64_t x = lo; x < hi; ++x) count += masks.satisfied(x) ? 1 : 0;
        partial[w] = count;
    };
    if (workers == 1) {
        work(0);
    } else {
        std::vector<std::jthread> pool;
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work, w);
    }
    return {std::accumulate(partial.begin(), partial.end(), std::uint64_t{0})};
}

// ---------------------------------------------------------------------------------------------
// Generators. mt19937_64 output is fixed by the standard; bounded draws are done here so the
// instances do not depend on the standard library's distribution implementations.

namespace detail {

inline std::uint64_t draw_below(std::mt19937_64& rng, std::uint64_t bound) {
    const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % bound);
    std::uint64_t x;
    do {
        x = rng();
    } while (x >= limit);
    return x % bound;
}

inline Clause random_clause(std::mt19937_64& rng, int n, int width) {
    Clause c;
    while (static_cast<int>(c.size()) < width) {
        const int v = static_cast<int>(draw_below(rng, static_cast<std::uint64_t>(n))) + 1;
        if (std::any_of(c.begin(), c.end(), [v](Literal l) { return std::abs(l) == v; })) continue;
        c.push_back((rng() & 1) ? v : -v);
    }
    return c;
}

template <class T>
void shuffle(std::vector<T>& items, std::mt19937_64& rng) {
    for (std::size_t i = items.size(); i > 1; --i) {
        std::swap(items[i - 1], items[draw_below(rng, i)]);
    }
}

} // namespace detail

// m clauses of 3 distinct variables with uniform polarities.
inline CnfFormula generate_random_3cnf(int n, int m, std::uint64_t seed) {
    if (n < 3) throw DomainError("random 3-CNF requires n >= 3");
    if (m < 0) throw DomainError("clause count must be >= 0");
    std::mt19937_64 rng(seed);
    CnfFormula f{n, {}};
    for (int i = 0; i < m; ++i) f.clauses.push_back(detail::random_clause(rng, n, 3));
    return f;
}

// m clauses with widths drawn uniformly from [min_width, max_width].
inline CnfFormula generate_random_cnf(int n, int m, int min_width, int max_width, std::uint64_t seed) {
    if (n < 1 || min_width < 1 || max_width < min_width || max_width > n) {
        throw DomainError("invalid random CNF parameters");
    }
    std::mt19937_64 rng(seed);
    CnfFormula f{n, {}};
    for (int i = 0; i < m; ++i) {
        const int w = min_width + static_cast<int>(detail::draw_below(rng, static_cast<std::uint64_t>(max_width - min_width + 1)));
        f.clauses.push_back(detail::random_clause(rng, n, w));
    }
    return f;
}

// Formula with exactly s_target in {0, 1} solutions. A random assignment a* is planted and
// pinned by a unit clause plus an implication chain over a random variable order; random
// 3-clauses satisfied by a* are mixed in. For s_target = 0, two 3-clauses falsified by a*
// are added. The count is always checked with count_solutions.
inline CnfFormula generate_promise_instance(int n, int s_target, std::uint64_t seed, int max_attempts = 16) {
    if (n < 2) throw DomainError("promise instance requires n >= 2");
    if (s_target != 0 && s_target != 1) throw DomainError("promise target must be 0 or 1");
    for (int attempt = 0; attempt < max_attempts; ++attempt) {
        std::mt19937_64 rng(seed + 0x9e3779b97f4a7c15ULL * static_cast<std::uint64_t>(attempt));
        std::vector<bool> planted(static_cast<std::size_t>(n));
        for (int v = 0; v < n; ++v) planted[static_cast<std::size_t>(v)] = (rng() & 1) != 0;
        auto true_literal = [&](int v) { return planted[static_cast<std::size_t>(v - 1)] ? v : -v; };

        std::vector<int> order(static_cast<std::size_t>(n));
        std::iota(order.begin(), order.end(), 1);
        detail::shuffle(order, rng);

        CnfFormula f{n, {}};
        f.clauses.push_back({true_literal(order[0])});
        for (std::size_t i = 1; i < order.size(); ++i) {
            f.clauses.push_back({-true_literal(order[i - 1]), true_literal(order[i])});
        }
        const int width = std::min(3, n);
        for (int i = 0; i < 2 * n; ++i) {
            Clause c = detail::random_clause(rng, n, width);
            const bool sat_by_planted = std::any_of(c.begin(), c.end(), [&](Literal l) {
                return l == true_literal(std::abs(l));
            });
            if (!sat_by_planted) c[0] = -c[0];
            f.clauses.push_back(std::move(c));
        }
        if (s_target == 0) {
            for (int i = 0; i < 2; ++i) {
                Clause c = detail::random_clause(rng, n, width);
                for (auto& l : c) l = -true_literal(std::abs(l));
                f.clauses.push_back(std::move(c));
            }
        }
        detail::shuffle(f.clauses, rng);
        if (count_solutions(f).s == static_cast<std::uint64_t>(s_target)) return f;
    }
    throw GenerationError("could not build a promise instance with s = " + std::to_string(s_target));
}

} // namespace nlq
