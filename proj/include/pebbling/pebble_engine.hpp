#pragma once

#include <optional>
#include <vector>

#include "pebbling/configuration.hpp"
#include "pebbling/graph.hpp"
#include "pebbling/reachability.hpp"
#include "pebbling/structural.hpp"

namespace pebbling {

/// Whole-graph solvability backed by the structural solver when the graph
/// carries block labels, and by per-target generic searches otherwise.
/// Generic solvers are kept per target so their memo tables persist across
/// queries; an instance is therefore not thread-safe.
class SolvabilityOracle {
public:
    explicit SolvabilityOracle(const Graph& g, SolverOptions opts = {}) : g_(&g), opts_(opts) {
        if (!g.labels().blocks.empty() || g.size() <= 1) {
            try {
                structural_.emplace(g);
            } catch (const UnsupportedStructure&) {
                structural_.reset();
            }
        }
    }

    bool uses_structural() const noexcept { return structural_.has_value(); }

    /// Throws ResourceExhausted if a generic search runs out of budget.
    bool solvable(const Configuration& conf) {
        if (structural_) return structural_->solvable(conf);
        if (generic_.empty()) {
            generic_.reserve(g_->size());
            for (Vertex v = 0; v < g_->size(); ++v) generic_.emplace_back(*g_, v, opts_);
        }
        for (Vertex v = 0; v < g_->size(); ++v) {
            if (conf[v] >= 1) continue;
            if (!generic_[v].reachable(conf)) return false;
        }
        return true;
    }

    bool reachable(const Configuration& conf, Vertex target) {
        if (structural_) return structural_->reachable(conf, target);
        if (generic_.empty()) {
            generic_.reserve(g_->size());
            for (Vertex v = 0; v < g_->size(); ++v) generic_.emplace_back(*g_, v, opts_);
        }
        return generic_.at(target).reachable(conf);
    }

private:
    const Graph* g_;
    SolverOptions opts_;
    std::optional<StructuralSolver> structural_;
    std::vector<ReachabilitySolver> generic_;
};

}  // namespace pebbling
