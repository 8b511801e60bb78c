#pragma once

#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <string>
#include <string_view>

#include "pebbling/error.hpp"

namespace pebbling {

/// floor(log2(x)) for x >= 1.
constexpr std::uint64_t floor_log2(std::uint64_t x) {
    if (x == 0) throw InvalidParameter("floor_log2 of zero");
    return static_cast<std::uint64_t>(std::bit_width(x)) - 1;
}

namespace detail {

// Values within this relative distance of an integer are treated as that
// integer before flooring/ceiling (pow(1e5, 0.8) is not exactly 1e4).
inline constexpr long double kSnapTolerance = 1e-9L;

inline long double snap(long double x) {
    const long double r = std::nearbyint(x);
    if (std::fabs(x - r) <= kSnapTolerance * std::fmax(1.0L, std::fabs(x))) return r;
    return x;
}

}  // namespace detail

inline std::int64_t snapped_floor(long double x) {
    return static_cast<std::int64_t>(std::floor(detail::snap(x)));
}

inline std::int64_t snapped_ceil(long double x) {
    return static_cast<std::int64_t>(std::ceil(detail::snap(x)));
}

/// floor(n^e) with integer snapping.
inline std::int64_t floor_pow(std::uint64_t n, long double e) {
    return snapped_floor(std::pow(static_cast<long double>(n), e));
}

/// ceil(n^e) with integer snapping.
inline std::int64_t ceil_pow(std::uint64_t n, long double e) {
    return snapped_ceil(std::pow(static_cast<long double>(n), e));
}

/// Exact positive rational, used for alpha and epsilon parameters.
struct Ratio {
    std::int64_t num = 1;
    std::int64_t den = 2;

    constexpr double value() const { return static_cast<double>(num) / static_cast<double>(den); }
    constexpr long double value_ld() const {
        return static_cast<long double>(num) / static_cast<long double>(den);
    }
    friend constexpr bool operator==(const Ratio&, const Ratio&) = default;
};

/// Lowest-terms ratio num/den; den must be positive.
inline Ratio make_ratio(std::int64_t num, std::int64_t den) {
    if (den <= 0) throw InvalidParameter("ratio denominator must be positive");
    const std::int64_t g = std::gcd(num, den);
    return {num / g, den / g};
}

/// Parses "p/q", a decimal such as "0.25", or an integer.
inline Ratio parse_ratio(std::string_view text) {
    auto digits = [&](std::string_view s) {
        if (s.empty() || s.size() > 18) throw InvalidParameter("malformed ratio '" + std::string(text) + "'");
        std::int64_t v = 0;
        for (char c : s) {
            if (c < '0' || c > '9') throw InvalidParameter("malformed ratio '" + std::string(text) + "'");
            v = v * 10 + (c - '0');
        }
        return v;
    };
    if (const auto slash = text.find('/'); slash != std::string_view::npos)
        return make_ratio(digits(text.substr(0, slash)), digits(text.substr(slash + 1)));
    if (const auto dot = text.find('.'); dot != std::string_view::npos) {
        const std::string_view whole = text.substr(0, dot), frac = text.substr(dot + 1);
        std::int64_t den = 1;
        for (std::size_t i = 0; i < frac.size(); ++i) den *= 10;
        const std::int64_t w = whole.empty() ? 0 : digits(whole);
        if (frac.size() > 17 || w > (std::numeric_limits<std::int64_t>::max() / den) - 1) throw InvalidParameter("ratio out of range");
        return make_ratio(w * den + (frac.empty() ? 0 : digits(frac)), den);
    }
    return make_ratio(digits(text), 1);
}

inline std::string to_string(const Ratio& r) {
    return std::to_string(r.num) + "/" + std::to_string(r.den);
}

}  // namespace pebbling
