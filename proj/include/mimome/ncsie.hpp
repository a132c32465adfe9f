#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include "mimome/baselines.hpp"
#include "mimome/capacity.hpp"
#include "mimome/channel.hpp"
#include "mimome/errors.hpp"
#include "mimome/search_tree.hpp"
#include "mimome/selection_types.hpp"

namespace mimome {

// phi caches are downdated by subtraction and may drift slightly negative;
// values in [-kPhiDriftTolerance, 0) are clamped to zero, anything below is
// treated as a numerical failure.
inline constexpr double kPhiDriftTolerance = 1e-12;

// Per-level bound constants for the adjusted objective. Entry i corresponds
// to tree level i+1: z[i] = log2(1 + rho * zeta_sq[i]) with zeta_sq[i] the
// largest column squared norm among that level's candidates. Since phi_k
// never exceeds ||h_k||^2, every per-node increment at level i+1 is bounded
// by z[i], making the adjusted objective non-increasing along paths.
struct LevelBounds {
    std::vector<double> z;
    std::vector<double> zeta_sq;

    double sum_z() const { return std::accumulate(z.begin(), z.end(), 0.0); }
};

inline LevelBounds precompute_bounds_ncsie(const ChannelMatrix& h, NormalizedSnr rho_m,
                                           int subset_size) {
    const SearchTreeShape shape{static_cast<int>(h.cols()), subset_size};
    shape.validate();
    Eigen::VectorXd norms(h.cols());
    for (int k = 0; k < h.cols(); ++k) norms[k] = h.col(k).squaredNorm();

    LevelBounds bounds;
    bounds.z.resize(static_cast<std::size_t>(subset_size));
    bounds.zeta_sq.resize(static_cast<std::size_t>(subset_size));
    for (int level = 1; level <= subset_size; ++level) {
        const IndexRange range = level_candidates(level, shape);
        const double zeta_sq = norms.segment(range.lo - 1, range.size()).maxCoeff();
        bounds.zeta_sq[static_cast<std::size_t>(level - 1)] = zeta_sq;
        bounds.z[static_cast<std::size_t>(level - 1)] = std::log2(1.0 + rho_m.linear * zeta_sq);
    }
    return bounds;
}

// Scenario driver maximizing the legitimate-link capacity (no eavesdropper
// CSI). State per path: T = (I + rho Hsel Hsel^dagger)^-1 maintained by
// rank-one downdates, and phi[k] = h_k^dagger T h_k cached per antenna so the
// capacity increment log2(1 + rho phi_k) never recomputes a determinant.
class NcsieDriver {
  public:
    struct State {
        Eigen::MatrixXcd t;    // Nr x Nr, Hermitian, eigenvalues in (0, 1]
        Eigen::VectorXd phi;   // one entry per antenna, 0-based
        double c_tilde = 0.0;  // adjusted objective at this node
    };

    NcsieDriver(const ChannelMatrix& h, NormalizedSnr rho_m, int subset_size)
        : h_(h),
          rho_(rho_m.linear),
          bounds_(precompute_bounds_ncsie(h, rho_m, subset_size)) {}

    // A driver instance serves one search at a time (scratch buffers are
    // reused across advance calls).
    State make_root() const {
        State s;
        s.t = Eigen::MatrixXcd::Identity(h_.rows(), h_.rows());
        s.phi.resize(h_.cols());
        for (int k = 0; k < h_.cols(); ++k) s.phi[k] = h_.col(k).squaredNorm();
        s.c_tilde = 0.0;
        return s;
    }

    double increment(const State& s, int k) const { return std::log2(1.0 + rho_ * s.phi[k - 1]); }

    double level_bound(int level) const { return bounds_.z[static_cast<std::size_t>(level - 1)]; }

    // Rank-one downdate after picking antenna k: with t = T h_k / sqrt(1/rho
    // + phi_k), T' = T - t t^dagger, and phi'_a = phi_a - |h_a^dagger t|^2
    // for the still-selectable antennas a > k. Cost O(Nt Nr) per node.
    void advance(const State& s, int k, double child_c_tilde, State& out) const {
        const int col = k - 1;
        tvec_.noalias() = s.t * h_.col(col);
        tvec_ /= std::sqrt(1.0 / rho_ + s.phi[col]);

        out.t = s.t;
        out.t.noalias() -= tvec_ * tvec_.adjoint();
        out.phi = s.phi;
        const int live = static_cast<int>(h_.cols()) - k;
        if (live > 0) {
            if (xi_.size() != h_.cols()) xi_.resize(h_.cols());
            xi_.head(live).noalias() = h_.rightCols(live).adjoint() * tvec_;
            out.phi.tail(live) -= xi_.head(live).cwiseAbs2();
            clamp_phi(out.phi, k);
        }
        out.c_tilde = child_c_tilde;
    }

    const LevelBounds& bounds() const { return bounds_; }
    const ChannelMatrix& channel() const { return h_; }
    double rho() const { return rho_; }

    static void clamp_phi(Eigen::VectorXd& phi, int first_live_col) {
        for (int a = first_live_col; a < phi.size(); ++a) {
            if (phi[a] < 0.0) {
                if (phi[a] < -kPhiDriftTolerance) {
                    throw NumericalError("phi cache drifted below -" +
                                         std::to_string(kPhiDriftTolerance));
                }
                phi[a] = 0.0;
            }
        }
    }

  private:
    const ChannelMatrix& h_;
    double rho_;
    LevelBounds bounds_;
    mutable Eigen::VectorXcd tvec_;
    mutable Eigen::VectorXcd xi_;
};

// Optimal transmit antenna selection without eavesdropper CSI: maximizes
// log2 det(I + rho Hsel Hsel^dagger) over all size-L column subsets.
template <typename Observer = NoObserver>
SelectionResult select_ncsie(const ChannelMatrix& h, int subset_size, NormalizedSnr rho_m,
                             const SelectOptions& options = {}, Observer&& observe = {}) {
    const SearchTreeShape shape{static_cast<int>(h.cols()), subset_size};
    shape.validate();
    const NcsieDriver driver(h, rho_m, subset_size);
    const double z_sum = driver.bounds().sum_z();

    BabOptions bab;
    bab.prune_epsilon = options.prune_epsilon;
    std::vector<int> warm_set;
    if (options.warm_start) {
        warm_set = norm_based_select(h, subset_size);
        bab.initial_bound = link_capacity(select_columns(h, warm_set), rho_m) - z_sum;
    }

    const BabResult r = run_bab(shape, driver, bab, std::forward<Observer>(observe));
    SelectionResult result;
    result.indices = r.selected.empty() ? warm_set : r.selected;
    result.objective_bits = r.adjusted_objective + z_sum;
    result.secrecy_bits = std::max(0.0, result.objective_bits);
    result.visited_nodes = r.visited_nodes;
    return result;
}

}  // namespace mimome
