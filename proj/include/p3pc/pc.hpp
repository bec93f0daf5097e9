#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "p3pc/combinatorics.hpp"
#include "p3pc/dag.hpp"
#include "p3pc/dsep.hpp"
#include "p3pc/error.hpp"

namespace p3pc {

/// Undirected adjacency plus the separating set recorded for each removed pair.
class Skeleton {
public:
    /// n nodes, no edges.
    explicit Skeleton(std::size_t n = 0) : n_(n), adj_(n * n, 0) {}

    static Skeleton complete(std::size_t n) {
        Skeleton s(n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) s.adj_[i * n + j] = i != j;
        return s;
    }

    /// The undirected version of dag.
    static Skeleton of(const Dag& dag) {
        Skeleton s(dag.size());
        for (const Edge& e : dag.edges()) s.add_edge(e.tail, e.head);
        return s;
    }

    std::size_t size() const noexcept { return n_; }

    bool adjacent(NodeId a, NodeId b) const { return adj_[a.index() * n_ + b.index()] != 0; }

    void add_edge(NodeId a, NodeId b) {
        check(a, b);
        adj_[a.index() * n_ + b.index()] = 1;
        adj_[b.index() * n_ + a.index()] = 1;
        sepsets_.erase(ordered(a, b));
    }

    /// Removes a-b. A sepset is recorded when the removal came from a CI decision.
    void remove_edge(NodeId a, NodeId b, std::optional<NodeSet> sepset = std::nullopt) {
        check(a, b);
        adj_[a.index() * n_ + b.index()] = 0;
        adj_[b.index() * n_ + a.index()] = 0;
        if (sepset) {
            sepsets_[ordered(a, b)] = std::move(*sepset);
        } else {
            sepsets_.erase(ordered(a, b));
        }
    }

    /// Current neighbours of a in ascending index order.
    NodeSet neighbors(NodeId a) const {
        NodeSet out;
        const std::size_t row = a.index() * n_;
        for (std::size_t j = 0; j < n_; ++j)
            if (adj_[row + j]) out.emplace_back(j);
        return out;
    }

    std::size_t edge_count() const noexcept {
        std::size_t count = 0;
        for (std::size_t i = 0; i < n_; ++i)
            for (std::size_t j = i + 1; j < n_; ++j) count += adj_[i * n_ + j];
        return count;
    }

    /// Unordered pairs (a < b) that are adjacent.
    std::vector<std::pair<NodeId, NodeId>> edges() const {
        std::vector<std::pair<NodeId, NodeId>> out;
        for (std::size_t i = 0; i < n_; ++i)
            for (std::size_t j = i + 1; j < n_; ++j)
                if (adj_[i * n_ + j]) out.emplace_back(NodeId{i}, NodeId{j});
        return out;
    }

    const NodeSet* sepset(NodeId a, NodeId b) const {
        auto it = sepsets_.find(ordered(a, b));
        return it == sepsets_.end() ? nullptr : &it->second;
    }

    const std::map<std::pair<std::size_t, std::size_t>, NodeSet>& sepsets() const noexcept { return sepsets_; }

    /// Adjacency equality; sepsets are ignored.
    bool same_adjacency(const Skeleton& other) const { return n_ == other.n_ && adj_ == other.adj_; }

private:
    void check(NodeId a, NodeId b) const {
        if (a.index() >= n_ || b.index() >= n_) throw ParameterError("Skeleton: node out of range");
        if (a == b) throw ParameterError("Skeleton: no self-adjacency");
    }

    static std::pair<std::size_t, std::size_t> ordered(NodeId a, NodeId b) {
        return std::minmax(a.index(), b.index());
    }

    std::size_t n_;
    std::vector<char> adj_;
    std::map<std::pair<std::size_t, std::size_t>, NodeSet> sepsets_;
};

inline Skeleton complete_skeleton(std::size_t n) {
    if (n < 1) throw ParameterError("complete_skeleton: n must be >= 1");
    return Skeleton::complete(n);
}

struct PcReport {
    Skeleton skeleton;
    std::uint64_t tests_performed = 0;
    /// Highest level at which some ordered pair was eligible; -1 if none ever was.
    int max_level_reached = -1;
};

enum class PcVariant {
    /// Conditioning candidates adj(a) are frozen at the start of each level
    /// (the PC-stable adjacency search). Edge deletions still apply at once.
    stable,
    /// Candidates are read from the live skeleton (order-dependent PC).
    original,
};

/// PC adjacency search.
///
/// For level l = 0, 1, ...: visit ordered pairs (a, b) lexicographically; if
/// a-b is still adjacent and |adj(a) \ {b}| >= l, query a _||_ b | S for every
/// size-l subset S of adj(a) \ {b} (sorted by index, lexicographic
/// combinations). The first independence deletes a-b and records S. Stops
/// after the first level at which no ordered pair was eligible. `variant`
/// selects where adj(a) is read from.
inline PcReport pc_skeleton(CountingOracle& oracle, Skeleton initial, PcVariant variant = PcVariant::stable) {
    const std::size_t n = oracle.dag().size();
    if (initial.size() != n) {
        throw ParameterError("pc_skeleton: skeleton has " + std::to_string(initial.size()) +
                             " nodes, oracle DAG has " + std::to_string(n));
    }
    const std::uint64_t before = oracle.queries_issued();
    PcReport report{std::move(initial), 0, -1};
    Skeleton& g = report.skeleton;
    std::vector<NodeSet> frozen(n);

    for (std::size_t level = 0;; ++level) {
        if (variant == PcVariant::stable) {
            for (std::size_t i = 0; i < n; ++i) frozen[i] = g.neighbors(NodeId{i});
        }
        bool any_eligible = false;
        for (std::size_t ai = 0; ai < n; ++ai) {
            const NodeId a{ai};
            for (std::size_t bi = 0; bi < n; ++bi) {
                const NodeId b{bi};
                if (ai == bi || !g.adjacent(a, b)) continue;
                NodeSet candidates = variant == PcVariant::stable ? frozen[ai] : g.neighbors(a);
                std::erase(candidates, b);
                if (candidates.size() < level) continue;
                any_eligible = true;
                for_each_combination(std::span<const NodeId>(candidates), level, [&](const NodeSet& s) {
                    if (!oracle.query(a, b, s)) return true;
                    g.remove_edge(a, b, s);
                    return false;
                });
            }
        }
        if (!any_eligible) break;
        report.max_level_reached = static_cast<int>(level);
    }
    report.tests_performed = oracle.queries_issued() - before;
    return report;
}

}  // namespace p3pc
