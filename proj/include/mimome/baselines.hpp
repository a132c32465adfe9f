#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "mimome/capacity.hpp"
#include "mimome/channel.hpp"
#include "mimome/errors.hpp"
#include "mimome/search_tree.hpp"
#include "mimome/selection_types.hpp"

namespace mimome {

// Lexicographic enumeration of all C(n, k) strictly increasing index
// subsets, 1-based.
class SubsetEnumerator {
  public:
    SubsetEnumerator(int n_total, int subset_size) : n_(n_total), k_(subset_size) {
        SearchTreeShape{n_total, subset_size}.validate();
        current_.resize(static_cast<std::size_t>(k_));
        std::iota(current_.begin(), current_.end(), 1);
    }

    bool done() const { return done_; }
    const std::vector<int>& current() const { return current_; }

    void advance() {
        int i = k_ - 1;
        while (i >= 0 && current_[static_cast<std::size_t>(i)] == n_ - k_ + i + 1) --i;
        if (i < 0) {
            done_ = true;
            return;
        }
        ++current_[static_cast<std::size_t>(i)];
        for (int j = i + 1; j < k_; ++j) {
            current_[static_cast<std::size_t>(j)] = current_[static_cast<std::size_t>(j - 1)] + 1;
        }
    }

  private:
    int n_;
    int k_;
    std::vector<int> current_;
    bool done_ = false;
};

// Indices of the L largest column squared norms of hm, ties broken by
// ascending index, returned ascending. Only the legitimate channel is used,
// also under CSIE.
inline std::vector<int> norm_based_select(const ChannelMatrix& hm, int subset_size) {
    SearchTreeShape{static_cast<int>(hm.cols()), subset_size}.validate();
    std::vector<std::pair<double, int>> norms;
    norms.reserve(static_cast<std::size_t>(hm.cols()));
    for (int k = 0; k < hm.cols(); ++k) {
        norms.emplace_back(hm.col(k).squaredNorm(), k + 1);
    }
    std::sort(norms.begin(), norms.end(), [](const auto& a, const auto& b) {
        if (a.first != b.first) return a.first > b.first;
        return a.second < b.second;
    });
    std::vector<int> selected;
    selected.reserve(static_cast<std::size_t>(subset_size));
    for (int i = 0; i < subset_size; ++i) selected.push_back(norms[static_cast<std::size_t>(i)].second);
    std::sort(selected.begin(), selected.end());
    return selected;
}

// Evaluates the scenario objective on every size-L subset via direct log-det
// capacity (independent of the branch-and-bound recursions) and returns the
// lexicographically-first argmax. The reported node count is what an
// un-pruned traversal of the search tree would visit.
inline SelectionResult exhaustive_select(Scenario scenario, const ChannelMatrix& hm,
                                         const ChannelMatrix* he, int subset_size,
                                         NormalizedSnr rho_m,
                                         std::optional<NormalizedSnr> rho_e = std::nullopt,
                                         std::uint64_t subset_cap = 10'000'000) {
    const SearchTreeShape shape{static_cast<int>(hm.cols()), subset_size};
    shape.validate();
    if (scenario == Scenario::csie) {
        if (he == nullptr || !rho_e.has_value()) {
            throw ConfigError("exhaustive_select: CSIE requires the eavesdropper channel and SNR");
        }
        if (he->cols() != hm.cols()) {
            throw DimensionError("exhaustive_select: Hm and He column counts differ");
        }
    }
    const std::uint64_t n_subsets = binomial(shape.n_total, shape.subset_size);
    if (n_subsets > subset_cap) {
        throw BudgetError("exhaustive_select: C(" + std::to_string(shape.n_total) + "," +
                          std::to_string(shape.subset_size) + ")=" + std::to_string(n_subsets) +
                          " subsets exceeds cap " + std::to_string(subset_cap));
    }

    SelectionResult best;
    best.objective_bits = -std::numeric_limits<double>::infinity();
    for (SubsetEnumerator e(shape.n_total, shape.subset_size); !e.done(); e.advance()) {
        const ChannelMatrix sub_m = select_columns(hm, e.current());
        double objective = link_capacity(sub_m, rho_m);
        if (scenario == Scenario::csie) {
            objective -= link_capacity(select_columns(*he, e.current()), *rho_e);
        }
        if (objective > best.objective_bits) {
            best.objective_bits = objective;
            best.indices = e.current();
        }
    }
    best.secrecy_bits = std::max(0.0, best.objective_bits);
    best.visited_nodes = full_tree_node_count(shape);
    return best;
}

}  // namespace mimome
