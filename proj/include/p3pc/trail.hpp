#pragma once

#include <algorithm>
#include <cstddef>
#include <optional>
#include <vector>

#include "p3pc/dag.hpp"
#include "p3pc/error.hpp"

namespace p3pc {

/// A walk u_0 .. u_l through l distinct edges, ignoring edge direction.
/// edges[i] joins nodes[i] and nodes[i + 1].
struct Trail {
    std::vector<NodeId> nodes;
    std::vector<Edge> edges;

    std::size_t length() const noexcept { return edges.size(); }
    NodeId front() const { return nodes.front(); }
    NodeId back() const { return nodes.back(); }

    /// Position i in [1, length) is a collider when it is the head of both
    /// incident trail edges.
    bool is_collider_at(std::size_t i) const {
        return i >= 1 && i < nodes.size() - 1 && edges[i - 1].head == nodes[i] && edges[i].head == nodes[i];
    }

    NodeSet colliders() const {
        NodeSet out;
        for (std::size_t i = 1; i + 1 < nodes.size(); ++i) {
            if (is_collider_at(i)) out.push_back(nodes[i]);
        }
        std::sort(out.begin(), out.end());
        out.erase(std::unique(out.begin(), out.end()), out.end());
        return out;
    }

    Trail reversed() const {
        return Trail{{nodes.rbegin(), nodes.rend()}, {edges.rbegin(), edges.rend()}};
    }

    friend bool operator==(const Trail&, const Trail&) = default;
};

enum class TrailKind {
    /// Edges distinct; nodes, including the endpoints, may repeat.
    edge_distinct,
    /// Nodes distinct (classic paths); the walk stops on first reaching b.
    node_distinct,
};

namespace detail {

struct Incidence {
    NodeId other;
    std::size_t edge;  // index into Dag::edges()
};

inline std::vector<std::vector<Incidence>> incidences(const Dag& dag) {
    std::vector<std::vector<Incidence>> inc(dag.size());
    auto edges = dag.edges();
    for (std::size_t i = 0; i < edges.size(); ++i) {
        inc[edges[i].tail.index()].push_back({edges[i].head, i});
        inc[edges[i].head.index()].push_back({edges[i].tail, i});
    }
    for (auto& list : inc) {
        std::sort(list.begin(), list.end(), [](const Incidence& x, const Incidence& y) {
            return x.other < y.other;
        });
    }
    return inc;
}

}  // namespace detail

/// Depth-first enumeration of trails from a to b of length <= max_len.
/// The visitor receives each trail as a const Trail& and returns false to
/// stop early. Returns false iff the visitor stopped the walk.
///
/// Order is deterministic: neighbours are expanded by ascending index.
template <class Visitor>
bool visit_trails(const Dag& dag, NodeId a, NodeId b, std::size_t max_len, TrailKind kind, Visitor&& visit) {
    if (a.index() >= dag.size() || b.index() >= dag.size()) throw ParameterError("visit_trails: node out of range");
    if (a == b) throw ParameterError("visit_trails: endpoints must differ");
    if (max_len < 1) throw ParameterError("visit_trails: max_len must be >= 1");

    const auto inc = detail::incidences(dag);
    const auto edges = dag.edges();
    std::vector<char> edge_used(edges.size(), 0);
    std::vector<char> on_path(dag.size(), 0);
    Trail trail;
    trail.nodes.push_back(a);
    on_path[a.index()] = 1;

    // Explicit stack of next-incidence cursors, one per node on the trail.
    std::vector<std::size_t> cursor{0};
    std::vector<std::size_t> edge_stack;
    while (!cursor.empty()) {
        NodeId u = trail.nodes.back();
        std::size_t& slot = cursor.back();
        const bool can_extend = trail.length() < max_len && !(kind == TrailKind::node_distinct && u == b);
        if (!can_extend || slot >= inc[u.index()].size()) {
            cursor.pop_back();
            if (trail.edges.empty()) break;
            on_path[u.index()] = 0;
            edge_used[edge_stack.back()] = 0;
            edge_stack.pop_back();
            trail.nodes.pop_back();
            trail.edges.pop_back();
            continue;
        }
        const detail::Incidence step = inc[u.index()][slot++];
        if (edge_used[step.edge]) continue;
        if (kind == TrailKind::node_distinct && on_path[step.other.index()]) continue;

        edge_used[step.edge] = 1;
        edge_stack.push_back(step.edge);
        on_path[step.other.index()] = 1;
        trail.nodes.push_back(step.other);
        trail.edges.push_back(edges[step.edge]);
        cursor.push_back(0);
        if (step.other == b && !visit(static_cast<const Trail&>(trail))) return false;
    }
    return true;
}

/// All trails from a to b with length <= max_len.
inline std::vector<Trail> enumerate_trails(const Dag& dag, NodeId a, NodeId b, std::size_t max_len,
                                           TrailKind kind = TrailKind::edge_distinct) {
    std::vector<Trail> out;
    visit_trails(dag, a, b, max_len, kind, [&](const Trail& t) {
        out.push_back(t);
        return true;
    });
    return out;
}

/// Number of trails from a to b with length <= max_len.
inline std::size_t count_trails(const Dag& dag, NodeId a, NodeId b, std::size_t max_len,
                                TrailKind kind = TrailKind::edge_distinct) {
    std::size_t count = 0;
    visit_trails(dag, a, b, max_len, kind, [&](const Trail&) {
        ++count;
        return true;
    });
    return count;
}

/// Literal trail-blocking rule: blocked iff some intermediate non-collider is
/// in s, or some intermediate collider is not in s. There is no descendant
/// clause here; d_separated() applies the full rule.
inline bool is_blocked(const Trail& trail, const NodeSet& s) {
    auto in_s = [&](NodeId v) { return std::find(s.begin(), s.end(), v) != s.end(); };
    if (in_s(trail.front()) || in_s(trail.back())) {
        throw ParameterError("is_blocked: conditioning set contains a trail endpoint");
    }
    for (std::size_t i = 1; i + 1 < trail.nodes.size(); ++i) {
        const bool collider = trail.is_collider_at(i);
        if (collider != in_s(trail.nodes[i])) return true;
    }
    return false;
}

}  // namespace p3pc
