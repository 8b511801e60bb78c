#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <vector>

#include "pebbling/configuration.hpp"
#include "pebbling/error.hpp"
#include "pebbling/graph.hpp"

namespace pebbling {

/// Partition of the vertices into classes whose members can be permuted
/// freely by graph automorphisms. Singletons are listed explicitly.
class OrbitSpec {
public:
    OrbitSpec() = default;

    explicit OrbitSpec(std::vector<std::vector<Vertex>> classes) : classes_(std::move(classes)) {
        std::size_t n = 0;
        for (auto& c : classes_) {
            std::sort(c.begin(), c.end());
            n += c.size();
        }
        std::vector<bool> seen(n, false);
        for (const auto& c : classes_) {
            if (c.empty()) throw InvalidParameter("empty orbit class");
            for (Vertex v : c) {
                if (v >= n || seen[v]) throw InvalidParameter("orbit classes do not partition the vertices");
                seen[v] = true;
            }
        }
        std::sort(classes_.begin(), classes_.end());
    }

    /// Every vertex in its own class.
    static OrbitSpec trivial(std::size_t n) {
        std::vector<std::vector<Vertex>> classes;
        for (Vertex v = 0; v < n; ++v) classes.push_back({v});
        return OrbitSpec(std::move(classes));
    }

    /// Classes recorded by the generator, validated against the graph.
    static OrbitSpec from_graph(const Graph& g) {
        std::vector<bool> listed(g.size(), false);
        std::vector<std::vector<Vertex>> classes;
        for (const auto& c : g.labels().orbit_classes) {
            for (Vertex v : c) listed.at(v) = true;
            classes.push_back(c);
        }
        for (Vertex v = 0; v < g.size(); ++v)
            if (!listed[v]) classes.push_back({v});
        OrbitSpec spec(std::move(classes));
        spec.validate(g);
        return spec;
    }

    /// Throws unless swapping any two members of a class is an automorphism.
    void validate(const Graph& g) const {
        if (size() != g.size()) throw InvalidParameter("orbit spec size does not match graph");
        for (const auto& c : classes_) {
            for (std::size_t i = 1; i < c.size(); ++i) {
                const Vertex u = c[0], w = c[i];
                std::vector<Vertex> nu, nw;
                for (Vertex x : g.neighbors(u))
                    if (x != w) nu.push_back(x);
                for (Vertex x : g.neighbors(w))
                    if (x != u) nw.push_back(x);
                if (nu != nw) throw InvalidParameter("orbit class members are not interchangeable");
            }
        }
    }

    const std::vector<std::vector<Vertex>>& classes() const noexcept { return classes_; }

    std::size_t size() const {
        std::size_t n = 0;
        for (const auto& c : classes_) n += c.size();
        return n;
    }

    /// The same partition with `v` split off into its own class.
    OrbitSpec fixing(Vertex v) const {
        std::vector<std::vector<Vertex>> out;
        for (const auto& c : classes_) {
            std::vector<Vertex> rest;
            for (Vertex x : c)
                if (x != v) rest.push_back(x);
            if (rest.size() != c.size()) out.push_back({v});
            if (!rest.empty()) out.push_back(std::move(rest));
        }
        return OrbitSpec(std::move(out));
    }

private:
    std::vector<std::vector<Vertex>> classes_;
};

/// Canonical orbit representative: counts sorted descending within each class.
inline Configuration canonicalize(const Configuration& conf, const OrbitSpec& orbits) {
    if (conf.size() != orbits.size()) throw InvalidParameter("configuration size does not match orbit spec");
    std::vector<Count> counts(conf.counts().begin(), conf.counts().end());
    for (const auto& c : orbits.classes()) {
        std::vector<Count> vals;
        for (Vertex v : c) vals.push_back(counts[v]);
        std::sort(vals.begin(), vals.end(), std::greater<>());
        for (std::size_t i = 0; i < c.size(); ++i) counts[c[i]] = vals[i];
    }
    return Configuration(std::move(counts));
}

/// Visits one canonical representative of every orbit of size-`t`
/// configurations. The visitor returns false to stop early; the function
/// returns false in that case.
inline bool for_each_canonical(const OrbitSpec& orbits, Count t,
                               const std::function<bool(const Configuration&)>& visit) {
    std::vector<Vertex> slots;
    std::vector<bool> continues_class;  // slot shares a class with the previous slot
    for (const auto& c : orbits.classes())
        for (std::size_t i = 0; i < c.size(); ++i) {
            slots.push_back(c[i]);
            continues_class.push_back(i > 0);
        }
    // Slots remaining in the current class after position p (inclusive of p).
    std::vector<std::size_t> class_tail(slots.size(), 1);
    for (std::size_t p = slots.size(); p-- > 0;)
        if (p + 1 < slots.size() && continues_class[p + 1]) class_tail[p] = class_tail[p + 1] + 1;

    Configuration conf(orbits.size());
    if (slots.empty()) return t == 0 ? visit(conf) : true;

    std::function<bool(std::size_t, Count)> rec = [&](std::size_t p, Count remaining) -> bool {
        const Vertex v = slots[p];
        const Count cap = continues_class[p] ? std::min(remaining, conf[slots[p - 1]]) : remaining;
        if (p + 1 == slots.size()) {
            if (remaining > cap) return true;
            conf.set(v, remaining);
            const bool go_on = visit(conf);
            conf.set(v, 0);
            return go_on;
        }
        // If the rest of the slots sit in this class, each holds at most x.
        const bool closed = class_tail[p] == slots.size() - p;
        for (Count x = cap + 1; x-- > 0;) {
            if (closed && x * class_tail[p] < remaining) break;
            conf.set(v, x);
            if (!rec(p + 1, remaining - x)) {
                conf.set(v, 0);
                return false;
            }
        }
        conf.set(v, 0);
        return true;
    };
    return rec(0, t);
}

}  // namespace pebbling
