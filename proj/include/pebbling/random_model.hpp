#pragma once

#include <bit>
#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

#include "pebbling/configuration.hpp"
#include "pebbling/error.hpp"

namespace pebbling {

/// splitmix64 finalizer; used to derive independent seeds.
constexpr std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// (master_seed, stream_id) names one reproducible random stream.
struct SeededStream {
    std::uint64_t master_seed = 0;
    std::uint64_t stream_id = 0;

    /// Stream for sub-task `index` of this stream, e.g. one Monte Carlo trial.
    constexpr SeededStream child(std::uint64_t index) const {
        return {master_seed, mix64(stream_id ^ mix64(index + 0x632be59bd9b4e019ULL))};
    }

    constexpr std::uint64_t engine_seed() const { return mix64(master_seed ^ mix64(stream_id)); }

    friend constexpr bool operator==(const SeededStream&, const SeededStream&) = default;
};

/// Random source over std::mt19937_64, whose output sequence is fixed by the
/// standard. Bounded integers use rejection sampling rather than
/// std::uniform_int_distribution, whose algorithm is implementation-defined.
class RandomSource {
public:
    explicit RandomSource(SeededStream s) : engine_(s.engine_seed()) {}

    std::uint64_t next() { return engine_(); }

    /// Uniform integer in [0, bound).
    std::uint64_t below(std::uint64_t bound) {
        if (bound == 0) throw InvalidParameter("empty range");
        if (std::has_single_bit(bound)) return engine_() & (bound - 1);
        const std::uint64_t limit = (~std::uint64_t{0}) - (~std::uint64_t{0}) % bound;
        std::uint64_t x;
        do {
            x = engine_();
        } while (x >= limit);
        return x % bound;
    }

    /// Uniform double in [0, 1).
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

private:
    std::mt19937_64 engine_;
};

enum class RandomModel {
    uniform_configuration,  // every size-t configuration equally likely
    iid_pebbles,            // each pebble independently uniform on the vertices
};

inline std::string_view to_string(RandomModel m) {
    return m == RandomModel::uniform_configuration ? "uniform_configuration" : "iid_pebbles";
}

/// Uniform size-t configuration on n vertices.
///
/// A uniform t-subset of the n+t-1 slots of a stars-and-bars word is drawn
/// with Floyd's algorithm into a bitset; reading the stars in order, the i-th
/// star (0-based) at slot s lands on vertex s - i.
inline Configuration sample_configuration(std::uint64_t n, std::uint64_t t, RandomSource& rng) {
    if (n == 0) {
        if (t > 0) throw InvalidParameter("cannot place pebbles on an empty graph");
        return Configuration(0);
    }
    std::vector<Count> counts(n, 0);
    if (t == 0) return Configuration(std::move(counts));
    const std::uint64_t slots = n + t - 1;
    std::vector<std::uint64_t> bits((slots + 63) / 64, 0);
    auto test = [&](std::uint64_t i) { return (bits[i >> 6] >> (i & 63)) & 1; };
    auto set = [&](std::uint64_t i) { bits[i >> 6] |= std::uint64_t{1} << (i & 63); };
    for (std::uint64_t j = slots - t; j < slots; ++j) {
        const std::uint64_t r = rng.below(j + 1);
        set(test(r) ? j : r);
    }
    std::uint64_t star = 0;
    for (std::uint64_t w = 0; w < bits.size(); ++w) {
        std::uint64_t word = bits[w];
        while (word != 0) {
            const std::uint64_t s = w * 64 + static_cast<std::uint64_t>(std::countr_zero(word));
            ++counts[s - star];
            ++star;
            word &= word - 1;
        }
    }
    return Configuration(std::move(counts));
}

inline Configuration sample_configuration(std::uint64_t n, std::uint64_t t, SeededStream stream) {
    RandomSource rng(stream);
    return sample_configuration(n, t, rng);
}

/// Each of the t pebbles placed on an independent uniform vertex.
inline Configuration sample_iid_pebbles(std::uint64_t n, std::uint64_t t, RandomSource& rng) {
    if (n == 0 && t > 0) throw InvalidParameter("cannot place pebbles on an empty graph");
    std::vector<Count> counts(n, 0);
    for (std::uint64_t i = 0; i < t; ++i) ++counts[rng.below(n)];
    return Configuration(std::move(counts));
}

inline Configuration sample(RandomModel model, std::uint64_t n, std::uint64_t t, RandomSource& rng) {
    return model == RandomModel::uniform_configuration ? sample_configuration(n, t, rng)
                                                       : sample_iid_pebbles(n, t, rng);
}

/// Histogram of B(C) over `trials` draws; bin k counts draws with k birthdays.
struct BirthdayHistogram {
    std::uint64_t n = 0;
    std::uint64_t t = 0;
    std::uint64_t trials = 0;
    std::vector<std::uint64_t> counts;  // size max(t, 1)
};

inline BirthdayHistogram empirical_birthday_distribution(std::uint64_t n, std::uint64_t t, std::uint64_t trials,
                                                         SeededStream stream,
                                                         RandomModel model = RandomModel::uniform_configuration) {
    if (trials < 1) throw InvalidParameter("trials must be at least 1");
    if (n < 1) throw InvalidParameter("n must be at least 1");
    BirthdayHistogram h{.n = n, .t = t, .trials = trials, .counts = std::vector<std::uint64_t>(t == 0 ? 1 : t, 0)};
    RandomSource rng(stream);
    for (std::uint64_t i = 0; i < trials; ++i) ++h.counts[birthdays(sample(model, n, t, rng))];
    return h;
}

}  // namespace pebbling
