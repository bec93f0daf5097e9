#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <map>
#include <mutex>
#include <tuple>
#include <utility>
#include <vector>

#include "p3pc/dag.hpp"
#include "p3pc/error.hpp"

namespace p3pc {

/// "Is a independent of b given s?"
struct CiQuery {
    NodeId a;
    NodeId b;
    NodeSet s;

    friend bool operator==(const CiQuery&, const CiQuery&) = default;
};

inline void validate(const Dag& dag, const CiQuery& q) {
    const auto n = dag.size();
    if (q.a.index() >= n || q.b.index() >= n) throw ParameterError("CiQuery: endpoint out of range");
    if (q.a == q.b) throw ParameterError("CiQuery: a and b must differ");
    for (NodeId v : q.s) {
        if (v.index() >= n) throw ParameterError("CiQuery: conditioning node out of range");
        if (v == q.a || v == q.b) throw ParameterError("CiQuery: conditioning set contains an endpoint");
    }
}

namespace detail {

struct DsepScratch {
    std::vector<char> in_s;
    std::vector<char> ancestor;  // of s, including s itself
    std::vector<char> seen_up;   // entered from a child
    std::vector<char> seen_down; // entered from a parent
    std::vector<std::pair<NodeId, bool>> stack;
    std::vector<NodeId> work;

    void reset(std::size_t n) {
        in_s.assign(n, 0);
        ancestor.assign(n, 0);
        seen_up.assign(n, 0);
        seen_down.assign(n, 0);
        stack.clear();
        work.clear();
    }
};

inline DsepScratch& dsep_scratch() {
    thread_local DsepScratch scratch;
    return scratch;
}

}  // namespace detail

/// Standard d-separation by reachability over (node, direction) states.
///
/// Phase 1 marks s and its ancestors. Phase 2 walks from a: a state entered
/// from a child passes through unless the node is in s; a state entered from
/// a parent continues to children unless the node is in s, and turns back up
/// to parents only if the node is an ancestor of s (active collider).
/// Linear in nodes + edges.
inline bool d_separated(const Dag& dag, const CiQuery& q) {
    validate(dag, q);
    auto& w = detail::dsep_scratch();
    w.reset(dag.size());

    for (NodeId v : q.s) {
        w.in_s[v.index()] = 1;
        if (!w.ancestor[v.index()]) {
            w.ancestor[v.index()] = 1;
            w.work.push_back(v);
        }
    }
    while (!w.work.empty()) {
        NodeId v = w.work.back();
        w.work.pop_back();
        for (NodeId parent : dag.parents(v)) {
            if (!w.ancestor[parent.index()]) {
                w.ancestor[parent.index()] = 1;
                w.work.push_back(parent);
            }
        }
    }

    constexpr bool up = true;
    constexpr bool down = false;
    w.stack.emplace_back(q.a, up);
    while (!w.stack.empty()) {
        auto [y, dir] = w.stack.back();
        w.stack.pop_back();
        auto& seen = dir == up ? w.seen_up : w.seen_down;
        if (seen[y.index()]) continue;
        seen[y.index()] = 1;
        if (y == q.b) return false;

        const bool blocked_here = w.in_s[y.index()];
        if (dir == up) {
            if (blocked_here) continue;
            for (NodeId p : dag.parents(y)) w.stack.emplace_back(p, up);
            for (NodeId c : dag.children(y)) w.stack.emplace_back(c, down);
        } else {
            if (!blocked_here) {
                for (NodeId c : dag.children(y)) w.stack.emplace_back(c, down);
            }
            if (w.ancestor[y.index()]) {
                for (NodeId p : dag.parents(y)) w.stack.emplace_back(p, up);
            }
        }
    }
    return true;
}

/// d-separation oracle that counts every query, standing in for a CI test.
///
/// Holds a reference to the DAG; the DAG must outlive the oracle. The counter
/// is atomic and exact under concurrent use. The optional log keeps queries in
/// issue order, which is only meaningful single-threaded. Memoization, when
/// enabled, saves recomputation but every call is still counted.
class CountingOracle {
public:
    struct Options {
        bool log_queries = false;
        bool memoize = false;
    };

    explicit CountingOracle(const Dag& dag) : CountingOracle(dag, Options{}) {}
    CountingOracle(const Dag& dag, Options options) : dag_(&dag), options_(options) {}

    CountingOracle(const CountingOracle&) = delete;
    CountingOracle& operator=(const CountingOracle&) = delete;

    const Dag& dag() const noexcept { return *dag_; }

    bool query(const CiQuery& q) {
        validate(*dag_, q);
        queries_.fetch_add(1, std::memory_order_relaxed);
        if (options_.log_queries) {
            std::lock_guard lock(mutex_);
            log_.push_back(q);
        }
        if (!options_.memoize) return d_separated(*dag_, q);

        auto key = cache_key(q);
        {
            std::lock_guard lock(mutex_);
            if (auto it = cache_.find(key); it != cache_.end()) return it->second;
        }
        const bool result = d_separated(*dag_, q);
        std::lock_guard lock(mutex_);
        cache_.emplace(std::move(key), result);
        return result;
    }

    bool query(NodeId a, NodeId b, NodeSet s = {}) { return query(CiQuery{a, b, std::move(s)}); }

    std::uint64_t queries_issued() const noexcept { return queries_.load(std::memory_order_relaxed); }

    std::vector<CiQuery> log() const {
        std::lock_guard lock(mutex_);
        return log_;
    }

private:
    using Key = std::tuple<std::size_t, std::size_t, std::vector<std::size_t>>;

    static Key cache_key(const CiQuery& q) {
        std::vector<std::size_t> s;
        s.reserve(q.s.size());
        for (NodeId v : q.s) s.push_back(v.index());
        std::sort(s.begin(), s.end());
        auto [lo, hi] = std::minmax(q.a.index(), q.b.index());
        return {lo, hi, std::move(s)};
    }

    const Dag* dag_;
    Options options_;
    std::atomic<std::uint64_t> queries_{0};
    mutable std::mutex mutex_;
    std::vector<CiQuery> log_;
    std::map<Key, bool> cache_;
};

}  // namespace p3pc
