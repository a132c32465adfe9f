#pragma once

#include <algorithm>
#include <cassert>
#include <concepts>
#include <cstdint>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "mimome/errors.hpp"

namespace mimome {

// Increasing-index combination tree: the root (depth 0) branches into levels
// 1..L, a node at level a holds the a-th selected antenna index, and every
// root-to-leaf path is a size-L subset in ascending order.
struct SearchTreeShape {
    int n_total;      // number of transmit antennas Nt
    int subset_size;  // number of selected antennas L

    void validate() const {
        if (subset_size < 1 || n_total < 1 || subset_size > n_total) {
            throw DimensionError("SearchTreeShape: need 1 <= L <= Nt (got L=" +
                                 std::to_string(subset_size) + ", Nt=" + std::to_string(n_total) +
                                 ")");
        }
    }
};

// Inclusive contiguous index range; empty when lo > hi.
struct IndexRange {
    int lo;
    int hi;

    bool empty() const { return lo > hi; }
    int size() const { return empty() ? 0 : hi - lo + 1; }
    bool contains(int k) const { return k >= lo && k <= hi; }

    std::vector<int> to_vector() const {
        std::vector<int> v;
        v.reserve(static_cast<std::size_t>(size()));
        for (int k = lo; k <= hi; ++k) v.push_back(k);
        return v;
    }
};

// Indices that can legally appear at tree level `level`: {a, ..., Nt-L+a}.
// Smaller indices would collide with earlier levels, larger ones would leave
// no room for the remaining L-a picks.
inline IndexRange level_candidates(int level, const SearchTreeShape& shape) {
    shape.validate();
    if (level < 1 || level > shape.subset_size) {
        throw DimensionError("level_candidates: level " + std::to_string(level) +
                             " outside [1, " + std::to_string(shape.subset_size) + "]");
    }
    return IndexRange{level, shape.n_total - shape.subset_size + level};
}

// Children of a node with index `parent_index` at depth `parent_depth`
// (parent_index = 0 at the root): {K+1, ..., Nt-L+n+1}. Empty when the
// parent cannot be extended to a full subset.
inline IndexRange child_candidates(int parent_index, int parent_depth,
                                   const SearchTreeShape& shape) {
    return IndexRange{parent_index + 1,
                      shape.n_total - shape.subset_size + parent_depth + 1};
}

// C(n, k), saturating at the maximum representable value.
inline std::uint64_t binomial(int n, int k) {
    if (k < 0 || n < 0 || k > n) return 0;
    k = std::min(k, n - k);
    unsigned __int128 result = 1;
    constexpr unsigned __int128 kMax = std::numeric_limits<std::uint64_t>::max();
    for (int i = 1; i <= k; ++i) {
        result = result * static_cast<unsigned>(n - k + i) / static_cast<unsigned>(i);
        if (result > kMax) return std::numeric_limits<std::uint64_t>::max();
    }
    return static_cast<std::uint64_t>(result);
}

// Total node count of the full search tree (root excluded): level a holds
// C(Nt-L+a, a) nodes, so an exhaustive traversal visits their sum.
inline std::uint64_t full_tree_node_count(const SearchTreeShape& shape) {
    shape.validate();
    std::uint64_t total = 0;
    for (int a = 1; a <= shape.subset_size; ++a) {
        const std::uint64_t level = binomial(shape.n_total - shape.subset_size + a, a);
        if (total > std::numeric_limits<std::uint64_t>::max() - level) {
            return std::numeric_limits<std::uint64_t>::max();
        }
        total += level;
    }
    return total;
}

// Best complete-path adjusted objective seen so far, with its path.
struct Incumbent {
    double bound = -std::numeric_limits<double>::infinity();
    std::vector<int> best_path;
};

struct BabOptions {
    // Initial global lower bound; the warm-start hook seeds it with a
    // heuristic subset's adjusted objective instead of -infinity.
    double initial_bound = -std::numeric_limits<double>::infinity();
    // Nodes are expanded only when score > bound + prune_epsilon. Zero keeps
    // node counts comparable across runs; a positive value trades optimality
    // guarantees for extra pruning in robustness experiments.
    double prune_epsilon = 0.0;
};

// Emitted once per scored node (the unit the visited-node counter counts).
struct NodeEvent {
    int level;                // tree level of the scored node, 1..L
    int antenna;              // antenna index of the scored node, 1-based
    double parent_objective;  // adjusted objective of the parent
    double increment;         // Delta_{k,n}: objective gain of picking this antenna
    double level_bound;       // Z for this level
    double score;             // parent_objective + increment - level_bound
    bool is_leaf;
};

struct NoObserver {
    void operator()(const NodeEvent&) const noexcept {}
};

struct BabResult {
    std::vector<int> selected;  // ascending 1-based antenna indices; empty only
                                // when a warm-start bound was never beaten
    double adjusted_objective;  // incumbent bound at termination
    std::uint64_t visited_nodes = 0;
};

// A scenario driver owns the per-path search state (rank-one updated inverse
// matrices and quadratic-form caches) and the per-level bound constants Z.
// The engine requires increment(s, k) <= level_bound(level_of_k) so that the
// adjusted objective is non-increasing along every path, which is what makes
// the incumbent bound a sound pruning test.
template <typename D>
concept ScenarioDriver = requires(const D d, const typename D::State cs, typename D::State s,
                                  int k, double c) {
    { d.make_root() } -> std::same_as<typename D::State>;
    { d.increment(cs, k) } -> std::convertible_to<double>;
    { d.level_bound(k) } -> std::convertible_to<double>;
    { cs.c_tilde } -> std::convertible_to<double>;
    d.advance(cs, k, c, s);
};

inline constexpr double kMonotoneSlack = 1e-9;

// Depth-first best-first branch-and-bound over the increasing-index tree.
//
// At each expanded node the children are scored from the cached state, sorted
// by descending score (ties broken by ascending antenna index), and descended
// into while their score strictly exceeds the incumbent bound; because the
// siblings are score-sorted, the first failure prunes the rest. Leaf
// candidates are evaluated in one batch against the incumbent. The visited
// counter increments once per scored node, so an un-pruned run counts exactly
// full_tree_node_count(shape).
template <typename Driver, typename Observer = NoObserver>
    requires ScenarioDriver<Driver>
BabResult run_bab(const SearchTreeShape& shape, const Driver& driver, const BabOptions& opts = {},
                  Observer&& observe = {}) {
    shape.validate();
    const int leaf_level = shape.subset_size;
    using State = typename Driver::State;

    std::vector<State> states(static_cast<std::size_t>(leaf_level));
    states[0] = driver.make_root();
    std::vector<std::vector<std::pair<double, int>>> scored(
        static_cast<std::size_t>(leaf_level));
    std::vector<int> path(static_cast<std::size_t>(leaf_level));
    Incumbent incumbent;
    incumbent.bound = opts.initial_bound;
    std::uint64_t visited = 0;

    auto expand = [&](auto&& self, int parent_index, int depth) -> void {
        const State& state = states[static_cast<std::size_t>(depth)];
        const int level = depth + 1;
        const double z = driver.level_bound(level);
        const IndexRange kids = child_candidates(parent_index, depth, shape);

        if (level == leaf_level) {
            int best_k = -1;
            double best_c = -std::numeric_limits<double>::infinity();
            for (int k = kids.lo; k <= kids.hi; ++k) {
                const double delta = driver.increment(state, k);
                const double c = state.c_tilde + delta - z;
                ++visited;
                observe(NodeEvent{level, k, state.c_tilde, delta, z, c, true});
                assert(delta <= z + kMonotoneSlack);
                if (c > best_c) {
                    best_c = c;
                    best_k = k;
                }
            }
            if (best_k != -1 && best_c > incumbent.bound) {
                path[static_cast<std::size_t>(leaf_level - 1)] = best_k;
                incumbent.bound = best_c;
                incumbent.best_path.assign(path.begin(), path.end());
            }
            return;
        }

        auto& batch = scored[static_cast<std::size_t>(depth)];
        batch.clear();
        for (int k = kids.lo; k <= kids.hi; ++k) {
            const double delta = driver.increment(state, k);
            const double c = state.c_tilde + delta - z;
            ++visited;
            observe(NodeEvent{level, k, state.c_tilde, delta, z, c, false});
            assert(delta <= z + kMonotoneSlack);
            batch.emplace_back(c, k);
        }
        std::sort(batch.begin(), batch.end(), [](const auto& a, const auto& b) {
            if (a.first != b.first) return a.first > b.first;
            return a.second < b.second;
        });
        for (const auto& [c, k] : batch) {
            if (!(c > incumbent.bound + opts.prune_epsilon)) break;
            path[static_cast<std::size_t>(depth)] = k;
            driver.advance(state, k, c, states[static_cast<std::size_t>(depth + 1)]);
            self(self, k, depth + 1);
        }
    };
    expand(expand, 0, 0);

    return BabResult{std::move(incumbent.best_path), incumbent.bound, visited};
}

}  // namespace mimome
