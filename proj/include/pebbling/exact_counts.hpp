#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "pebbling/configuration.hpp"
#include "pebbling/error.hpp"
#include "pebbling/graph.hpp"
#include "pebbling/numeric.hpp"
#include "pebbling/orbits.hpp"
#include "pebbling/pebble_engine.hpp"

namespace pebbling {

using BigInt = boost::multiprecision::cpp_int;
using BigRational = boost::multiprecision::cpp_rational;

inline BigInt binomial(std::uint64_t n, std::uint64_t k) {
    if (k > n) return 0;
    k = std::min(k, n - k);
    BigInt r = 1;
    for (std::uint64_t i = 0; i < k; ++i) {
        r *= n - i;
        r /= i + 1;
    }
    return r;
}

/// Natural log of C(n, k) via log-gamma in extended precision.
inline long double log_binomial(std::uint64_t n, std::uint64_t k) {
    if (k > n) return -std::numeric_limits<long double>::infinity();
    const auto ld = [](std::uint64_t x) { return static_cast<long double>(x); };
    return std::lgamma(ld(n) + 1) - std::lgamma(ld(k) + 1) - std::lgamma(ld(n - k) + 1);
}

/// Natural log of a positive big integer.
inline long double log_of(const BigInt& x) {
    if (x <= 0) return -std::numeric_limits<long double>::infinity();
    const std::size_t bits = boost::multiprecision::msb(x) + 1;
    const std::size_t shift = bits > 60 ? bits - 60 : 0;
    const BigInt top = x >> shift;
    return std::log(static_cast<long double>(top.convert_to<std::uint64_t>())) +
           static_cast<long double>(shift) * std::log(2.0L);
}

/// log(exp(a) + exp(b)) without overflow.
inline long double log_add(long double a, long double b) {
    const long double inf = std::numeric_limits<long double>::infinity();
    if (a == -inf) return b;
    if (b == -inf) return a;
    if (a < b) std::swap(a, b);
    return a + std::log1p(std::exp(b - a));
}

namespace detail {

inline void require_nonnegative(std::int64_t x, const char* name) {
    if (x < 0) throw InvalidParameter(std::string(name) + " must be non-negative");
}

// Yields a(0), a(1), ... with exact incremental updates of both binomials:
// C(n, m) = C(n, m+1) (m+1) / (n-m) and C(t-1, k) = C(t-1, k-1) (t-k) / k.
class BirthdayWalk {
public:
    BirthdayWalk(std::uint64_t n, std::uint64_t t) : n_(n), t_(t) {}

    BigInt next() {
        const std::uint64_t k = k_++;
        const std::uint64_t m = t_ - k;
        if (k > 0) extra_ = extra_ * (t_ - k) / k;
        if (m > n_) return 0;
        if (!occupied_valid_) {
            occupied_ = binomial(n_, m);
            occupied_valid_ = true;
        } else {
            occupied_ = occupied_ * (m + 1) / (n_ - m);
        }
        return occupied_ * extra_;
    }

private:
    std::uint64_t n_, t_;
    std::uint64_t k_ = 0;
    BigInt occupied_ = 0;  // C(n, t-k)
    BigInt extra_ = 1;     // C(t-1, k)
    bool occupied_valid_ = false;
};

}  // namespace detail

/// Number of size-t configurations on n vertices with exactly k birthdays:
/// choose the t-k occupied vertices, then spread the k extra pebbles over them.
inline BigInt birthday_count(std::int64_t n, std::int64_t t, std::int64_t k) {
    detail::require_nonnegative(n, "n");
    detail::require_nonnegative(t, "t");
    detail::require_nonnegative(k, "k");
    if (n < 1) throw InvalidParameter("n must be at least 1");
    if (t < 1) throw InvalidParameter("t must be at least 1");
    if (k > t - 1) throw InvalidParameter("k must lie in [0, t-1]");
    const auto un = static_cast<std::uint64_t>(n), ut = static_cast<std::uint64_t>(t),
               uk = static_cast<std::uint64_t>(k);
    return binomial(un, ut - uk) * binomial(ut - 1, uk);
}

/// a(k-1)/a(k) = k(n-t+k) / ((t-k)(t-k+1)).
inline BigRational ratio_a(std::int64_t n, std::int64_t t, std::int64_t k) {
    detail::require_nonnegative(n, "n");
    detail::require_nonnegative(t, "t");
    detail::require_nonnegative(k, "k");
    if (k < 1 || k > t - 1) throw InvalidParameter("k must lie in [1, t-1]");
    if (t - k > n) throw DomainError("a(k) is zero, the ratio is undefined");
    const BigInt num = BigInt(k) * BigInt(n - t + k);
    const BigInt den = BigInt(t - k) * BigInt(t - k + 1);
    return BigRational(num, den);
}

/// The condition under which a(k-1) < a(k): n k < t^2 - k t + t - k.
inline bool ratio_below_one(std::int64_t n, std::int64_t t, std::int64_t k) {
    const BigInt lhs = BigInt(n) * k;
    const BigInt rhs = BigInt(t) * t - BigInt(k) * t + t - k;
    return lhs < rhs;
}

enum class Backend { exact_integer, log_space, automatic };

inline std::string_view to_string(Backend b) {
    switch (b) {
        case Backend::exact_integer: return "exact_integer";
        case Backend::log_space: return "log_space";
        case Backend::automatic: return "automatic";
    }
    return "automatic";
}

struct CountOptions {
    Backend backend = Backend::automatic;
    /// Exact arithmetic is refused (or, in automatic mode, skipped) once
    /// C(n+t-1, t) would need more bits than this.
    double max_exact_bits = 20000;
};

/// Estimated bit length of C(n+t-1, t).
inline double total_configurations_bits(std::uint64_t n, std::uint64_t t) {
    if (n == 0) return 0;
    return static_cast<double>(log_binomial(n + t - 1, t) / std::log(2.0L));
}

inline Backend resolve_backend(std::uint64_t n, std::uint64_t t, const CountOptions& opts) {
    const bool fits = total_configurations_bits(n, t) <= opts.max_exact_bits;
    switch (opts.backend) {
        case Backend::exact_integer:
            if (!fits)
                throw BackendRefusal("exact arithmetic for n=" + std::to_string(n) + ", t=" + std::to_string(t) +
                                     " exceeds the size limit; use the log_space backend");
            return Backend::exact_integer;
        case Backend::log_space: return Backend::log_space;
        case Backend::automatic: return fits ? Backend::exact_integer : Backend::log_space;
    }
    return Backend::log_space;
}

/// a(k) for k = 0..t-1, either exactly or as natural logs.
///
/// Log-space entries come from long-double lgamma; their absolute error is a
/// few ulps of the largest lgamma argument, i.e. about 1e-19 * (n + t) * ln(n + t),
/// which keeps the relative error of a(k) below 1e-9 up to n + t of about 1e7.
struct BirthdayTable {
    std::uint64_t n = 0;
    std::uint64_t t = 0;
    Backend backend = Backend::exact_integer;
    std::vector<BigInt> a;          // exact backend
    std::vector<long double> log_a;  // log-space backend; -inf for zero entries

    /// S(j) = a(0) + ... + a(j), exact backend only.
    BigInt partial_sum(std::uint64_t j) const {
        if (backend != Backend::exact_integer) throw BackendRefusal("partial_sum needs the exact backend");
        BigInt s = 0;
        for (std::uint64_t k = 0; k <= j && k < a.size(); ++k) s += a[k];
        return s;
    }

    /// log S(j), either backend.
    long double log_partial_sum(std::uint64_t j) const {
        if (backend == Backend::exact_integer) return log_of(partial_sum(j));
        long double s = -std::numeric_limits<long double>::infinity();
        for (std::uint64_t k = 0; k <= j && k < log_a.size(); ++k) s = log_add(s, log_a[k]);
        return s;
    }
};

inline BirthdayTable birthday_table(std::uint64_t n, std::uint64_t t, const CountOptions& opts = {}) {
    if (n < 1) throw InvalidParameter("n must be at least 1");
    if (t < 1) throw InvalidParameter("t must be at least 1");
    BirthdayTable table{.n = n, .t = t, .backend = resolve_backend(n, t, opts)};
    if (table.backend == Backend::exact_integer) {
        table.a.resize(t);
        detail::BirthdayWalk walk(n, t);
        for (std::uint64_t k = 0; k < t; ++k) table.a[k] = walk.next();
    } else {
        table.log_a.resize(t);
        for (std::uint64_t k = 0; k < t; ++k)
            table.log_a[k] = log_binomial(n, t - k) + log_binomial(t - 1, k);
    }
    return table;
}

struct TailRatio {
    long double log_value = 0;  // natural log of S(j) / S(t-1)
    Backend backend = Backend::exact_integer;
    std::optional<BigRational> exact;  // set by the exact backend

    long double value() const { return std::exp(log_value); }
};

/// S(j) / S(t-1), the probability of at most j birthdays, with
/// S(t-1) = C(n+t-1, t).
inline TailRatio tail_ratio(std::uint64_t n, std::uint64_t t, std::uint64_t j, const CountOptions& opts = {}) {
    if (n < 1) throw InvalidParameter("n must be at least 1");
    if (t < 1) throw InvalidParameter("t must be at least 1");
    if (j > t - 1) throw InvalidParameter("j must lie in [0, t-1]");
    TailRatio out;
    out.backend = resolve_backend(n, t, opts);
    if (out.backend == Backend::exact_integer) {
        BigInt partial = 0;
        detail::BirthdayWalk walk(n, t);
        for (std::uint64_t k = 0; k <= j; ++k) partial += walk.next();
        const BigInt total = binomial(n + t - 1, t);
        out.exact = BigRational(partial, total);
        out.log_value = log_of(partial) - log_of(total);
        return out;
    }
    long double log_partial = -std::numeric_limits<long double>::infinity();
    // a(k) vanishes while t - k > n.
    const std::uint64_t first = t > n ? t - n : 0;
    for (std::uint64_t k = first; k <= j; ++k)
        log_partial = log_add(log_partial, log_binomial(n, t - k) + log_binomial(t - 1, k));
    out.log_value = log_partial - log_binomial(n + t - 1, t);
    return out;
}

/// Number of configurations in the orbit of canonical `conf`: the product over
/// classes of |class|! / prod(multiplicity of each count value)!.
inline BigInt orbit_size(const Configuration& conf, const OrbitSpec& orbits) {
    BigInt size = 1;
    for (const auto& c : orbits.classes()) {
        std::vector<Count> vals;
        for (Vertex v : c) vals.push_back(conf[v]);
        std::sort(vals.begin(), vals.end());
        std::uint64_t placed = 0;
        for (std::size_t i = 0; i < vals.size();) {
            std::size_t run = 1;
            while (i + run < vals.size() && vals[i + run] == vals[i]) ++run;
            size *= binomial(c.size() - placed, run);
            placed += run;
            i += run;
        }
    }
    return size;
}

struct ExactProbability {
    BigInt numerator = 0;
    BigInt denominator = 1;

    BigRational ratio() const { return BigRational(numerator, denominator); }
    double value() const { return ratio().convert_to<double>(); }
};

struct EnumerationOptions {
    /// Maximum number of canonical configurations visited.
    std::uint64_t budget = 50'000'000;
    SolverOptions solver{};
};

/// P(G; t) by enumerating one configuration per orbit, weighted by orbit size.
inline ExactProbability solvable_probability_exact(const Graph& g, std::uint64_t t, const OrbitSpec& orbits,
                                                   const EnumerationOptions& opts = {}) {
    if (g.size() == 0) throw InvalidParameter("empty graph");
    if (orbits.size() != g.size()) throw InvalidParameter("orbit spec size does not match graph");
    orbits.validate(g);
    SolvabilityOracle oracle(g, opts.solver);
    ExactProbability out;
    out.denominator = binomial(g.size() + t - 1, t);
    std::uint64_t visited = 0;
    bool exhausted = false;
    for_each_canonical(orbits, t, [&](const Configuration& conf) {
        if (++visited > opts.budget) {
            exhausted = true;
            return false;
        }
        if (oracle.solvable(conf)) out.numerator += orbit_size(conf, orbits);
        return true;
    });
    if (exhausted)
        throw ResourceExhausted("exact probability enumeration exceeded " + std::to_string(opts.budget) +
                                    " configurations",
                                0, 1);
    return out;
}

struct TauExactOptions {
    EnumerationOptions enumeration{};
    std::uint64_t t_max = 1'000'000;
};

struct TauExactResult {
    std::uint64_t tau = 0;
    ExactProbability p_at_tau;
    std::optional<ExactProbability> p_before;  // P(tau - 1), absent when tau == 1
};

/// Smallest t >= 1 with P(G; t) >= alpha, scanning upward.
inline TauExactResult tau_exact(const Graph& g, Ratio alpha, const OrbitSpec& orbits,
                                const TauExactOptions& opts = {}) {
    if (alpha.num <= 0 || alpha.den <= 0 || alpha.num > alpha.den)
        throw InvalidParameter("alpha must lie in (0, 1]");
    const BigRational target(alpha.num, alpha.den);
    std::optional<ExactProbability> prev;
    for (std::uint64_t t = 1; t <= opts.t_max; ++t) {
        ExactProbability p;
        try {
            p = solvable_probability_exact(g, t, orbits, opts.enumeration);
        } catch (const ResourceExhausted&) {
            throw ResourceExhausted("tau enumeration ran out of budget at t=" + std::to_string(t),
                                    static_cast<std::int64_t>(t), -1);
        }
        if (p.ratio() >= target) return {.tau = t, .p_at_tau = p, .p_before = prev};
        prev = p;
    }
    throw ResourceExhausted("no t up to " + std::to_string(opts.t_max) + " reaches alpha",
                            static_cast<std::int64_t>(opts.t_max + 1), -1);
}

}  // namespace pebbling
