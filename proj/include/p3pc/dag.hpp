#pragma once

#include <algorithm>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "p3pc/error.hpp"
#include "p3pc/rng.hpp"

namespace p3pc {

/// Dense node index. For Erdos-Renyi graphs the index order is the label
/// order v1 < v2 < ... < vn that constrains edge direction.
class NodeId {
public:
    constexpr NodeId() = default;
    constexpr explicit NodeId(std::size_t index) noexcept : index_(index) {}

    constexpr std::size_t index() const noexcept { return index_; }

    friend constexpr auto operator<=>(NodeId, NodeId) = default;

private:
    std::size_t index_ = 0;
};

/// Sorted, duplicate-free list of nodes. Conditioning sets use this type.
using NodeSet = std::vector<NodeId>;

inline NodeSet make_node_set(std::initializer_list<std::size_t> indices) {
    NodeSet s;
    s.reserve(indices.size());
    for (auto i : indices) s.emplace_back(i);
    std::sort(s.begin(), s.end());
    s.erase(std::unique(s.begin(), s.end()), s.end());
    return s;
}

struct Edge {
    NodeId tail;
    NodeId head;

    friend constexpr auto operator<=>(const Edge&, const Edge&) = default;
};

/// Immutable directed acyclic graph.
///
/// Adjacency is kept twice: sorted child/parent lists for deterministic
/// iteration and a hash set of packed (tail, head) pairs for O(1) lookups.
/// Construction rejects self-loops, duplicate edges and cycles.
class Dag {
public:
    Dag() = default;

    /// Unnamed nodes are called "v1".."vn".
    explicit Dag(std::size_t n, std::vector<Edge> edges = {}, std::vector<std::string> names = {})
        : n_(n), names_(std::move(names)), children_(n), parents_(n) {
        if (names_.empty()) {
            names_.reserve(n);
            for (std::size_t i = 0; i < n; ++i) names_.push_back("v" + std::to_string(i + 1));
        } else if (names_.size() != n) {
            throw ParameterError("Dag: " + std::to_string(names_.size()) + " names for " +
                                 std::to_string(n) + " nodes");
        }
        for (std::size_t i = 0; i < n; ++i) {
            auto [it, inserted] = by_name_.emplace(names_[i], NodeId{i});
            if (!inserted) throw FormatError("Dag: duplicate node name '" + names_[i] + "'");
        }
        edge_set_.reserve(edges.size() * 2);
        for (const auto& e : edges) {
            if (e.tail.index() >= n || e.head.index() >= n) {
                throw ParameterError("Dag: edge endpoint out of range");
            }
            if (e.tail == e.head) {
                throw FormatError("Dag: self-loop on '" + names_[e.tail.index()] + "'");
            }
            if (!edge_set_.insert(key(e.tail, e.head)).second) {
                throw FormatError("Dag: duplicate edge " + names_[e.tail.index()] + " -> " +
                                  names_[e.head.index()]);
            }
            children_[e.tail.index()].push_back(e.head);
            parents_[e.head.index()].push_back(e.tail);
        }
        for (std::size_t i = 0; i < n; ++i) {
            std::sort(children_[i].begin(), children_[i].end());
            std::sort(parents_[i].begin(), parents_[i].end());
        }
        edges_ = std::move(edges);
        std::sort(edges_.begin(), edges_.end());
        topo_ = topological_sort();
    }

    std::size_t size() const noexcept { return n_; }
    std::size_t edge_count() const noexcept { return edges_.size(); }

    /// All edges sorted by (tail, head).
    std::span<const Edge> edges() const noexcept { return edges_; }

    std::span<const NodeId> children(NodeId v) const { return children_.at(v.index()); }
    std::span<const NodeId> parents(NodeId v) const { return parents_.at(v.index()); }
    std::size_t in_degree(NodeId v) const { return parents_.at(v.index()).size(); }

    bool has_edge(NodeId tail, NodeId head) const { return edge_set_.contains(key(tail, head)); }

    /// Edge in either direction.
    bool adjacent(NodeId a, NodeId b) const { return has_edge(a, b) || has_edge(b, a); }

    const std::string& name(NodeId v) const { return names_.at(v.index()); }
    std::span<const std::string> names() const noexcept { return names_; }

    std::optional<NodeId> find(const std::string& name) const {
        auto it = by_name_.find(name);
        if (it == by_name_.end()) return std::nullopt;
        return it->second;
    }

    std::span<const NodeId> topological_order() const noexcept { return topo_; }

    /// Nodes reachable from v along directed edges, excluding v.
    std::vector<bool> descendants(NodeId v) const {
        std::vector<bool> seen(n_, false);
        std::vector<NodeId> stack(children_[v.index()].begin(), children_[v.index()].end());
        while (!stack.empty()) {
            NodeId u = stack.back();
            stack.pop_back();
            if (seen[u.index()]) continue;
            seen[u.index()] = true;
            for (NodeId c : children_[u.index()]) stack.push_back(c);
        }
        return seen;
    }

private:
    static std::uint64_t key(NodeId tail, NodeId head) noexcept {
        return (static_cast<std::uint64_t>(tail.index()) << 32) | static_cast<std::uint64_t>(head.index());
    }

    // Iterative three-colour DFS; the first grey-to-grey edge is reported.
    std::vector<NodeId> topological_sort() const {
        enum : char { white, grey, black };
        std::vector<char> colour(n_, white);
        std::vector<NodeId> post;
        post.reserve(n_);
        std::vector<std::pair<std::size_t, std::size_t>> stack;  // (node, next child slot)
        for (std::size_t root = 0; root < n_; ++root) {
            if (colour[root] != white) continue;
            stack.emplace_back(root, 0);
            colour[root] = grey;
            while (!stack.empty()) {
                auto& [u, slot] = stack.back();
                if (slot < children_[u].size()) {
                    std::size_t c = children_[u][slot++].index();
                    if (colour[c] == grey) {
                        throw CycleError("cycle through edge " + names_[u] + " -> " + names_[c]);
                    }
                    if (colour[c] == white) {
                        colour[c] = grey;
                        stack.emplace_back(c, 0);
                    }
                } else {
                    colour[u] = black;
                    post.emplace_back(u);
                    stack.pop_back();
                }
            }
        }
        std::reverse(post.begin(), post.end());
        return post;
    }

    std::size_t n_ = 0;
    std::vector<std::string> names_;
    std::unordered_map<std::string, NodeId> by_name_;
    std::vector<std::vector<NodeId>> children_;
    std::vector<std::vector<NodeId>> parents_;
    std::unordered_set<std::uint64_t> edge_set_;
    std::vector<Edge> edges_;
    std::vector<NodeId> topo_;
};

/// Erdos-Renyi DAG: for every i < j (lexicographic), v_i -> v_j with
/// probability p. Consumes exactly C(n,2) Bernoulli draws in that order.
inline Dag generate_er(std::size_t n, double p, std::uint64_t seed) {
    if (n < 1) throw ParameterError("generate_er: n must be >= 1");
    if (!(p >= 0.0 && p <= 1.0)) throw ParameterError("generate_er: p must lie in [0, 1]");
    Rng rng(seed);
    std::vector<Edge> edges;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            if (rng.bernoulli(p)) edges.push_back({NodeId{i}, NodeId{j}});
        }
    }
    return Dag(n, std::move(edges));
}

/// v_i -> v_j for all i < j.
inline Dag complete_dag(std::size_t n) {
    std::vector<Edge> edges;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) edges.push_back({NodeId{i}, NodeId{j}});
    return Dag(n, std::move(edges));
}

/// v1 -> v2 -> ... -> vn.
inline Dag chain_dag(std::size_t n) {
    std::vector<Edge> edges;
    for (std::size_t i = 0; i + 1 < n; ++i) edges.push_back({NodeId{i}, NodeId{i + 1}});
    return Dag(n, std::move(edges));
}

/// Nodes that are a collider on at least one trail, i.e. in-degree >= 2.
inline NodeSet collider_nodes(const Dag& dag) {
    NodeSet out;
    for (std::size_t i = 0; i < dag.size(); ++i) {
        if (dag.in_degree(NodeId{i}) >= 2) out.emplace_back(i);
    }
    return out;
}

}  // namespace p3pc

template <>
struct std::hash<p3pc::NodeId> {
    std::size_t operator()(p3pc::NodeId v) const noexcept { return std::hash<std::size_t>{}(v.index()); }
};
