#pragma once

#include <Eigen/Cholesky>
#include <Eigen/Dense>

#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include "mimome/baselines.hpp"
#include "mimome/capacity.hpp"
#include "mimome/channel.hpp"
#include "mimome/errors.hpp"
#include "mimome/ncsie.hpp"
#include "mimome/search_tree.hpp"
#include "mimome/selection_types.hpp"

namespace mimome {

// Quadratic forms against the complete-selection eavesdropper inverse
// (I + rho_e He He^dagger)^-1, minimized over each level's candidate set.
// The complete-selection inverse is the same whatever order the antennas are
// picked in, and every partial-selection T_e dominates it, so these minima
// bound the eavesdropper term of the per-node increment from below.
inline std::vector<double> eavesdropper_eta(const ChannelMatrix& he, NormalizedSnr rho_e,
                                            int subset_size) {
    const SearchTreeShape shape{static_cast<int>(he.cols()), subset_size};
    shape.validate();

    Eigen::MatrixXcd gram = Eigen::MatrixXcd::Identity(he.rows(), he.rows());
    gram.noalias() += rho_e.linear * (he * he.adjoint());
    const Eigen::LLT<Eigen::MatrixXcd> llt(gram);
    if (llt.info() != Eigen::Success) {
        throw NumericalError("eavesdropper_eta: Cholesky factorization failed");
    }
    const Eigen::MatrixXcd full_inverse =
        llt.solve(Eigen::MatrixXcd::Identity(he.rows(), he.rows()));

    Eigen::VectorXd forms(he.cols());
    for (int k = 0; k < he.cols(); ++k) {
        forms[k] = (he.col(k).adjoint() * full_inverse * he.col(k)).value().real();
    }

    std::vector<double> eta(static_cast<std::size_t>(subset_size));
    for (int level = 1; level <= subset_size; ++level) {
        const IndexRange range = level_candidates(level, shape);
        eta[static_cast<std::size_t>(level - 1)] =
            forms.segment(range.lo - 1, range.size()).minCoeff();
    }
    return eta;
}

// Per-level constants for the CSIE adjusted objective:
// z[i] = log2(1 + rho_m zeta_sq[i]) - log2(1 + rho_e eta[i]). May be
// negative; soundness only needs increment <= z per level.
struct CsieLevelBounds {
    std::vector<double> z;
    std::vector<double> zeta_sq;
    std::vector<double> eta;

    double sum_z() const { return std::accumulate(z.begin(), z.end(), 0.0); }
};

inline CsieLevelBounds precompute_bounds_csie(const ChannelMatrix& hm, const ChannelMatrix& he,
                                              NormalizedSnr rho_m, NormalizedSnr rho_e,
                                              int subset_size) {
    if (hm.cols() != he.cols()) {
        throw DimensionError("precompute_bounds_csie: Hm and He column counts differ");
    }
    const LevelBounds legit = precompute_bounds_ncsie(hm, rho_m, subset_size);
    CsieLevelBounds bounds;
    bounds.zeta_sq = legit.zeta_sq;
    bounds.eta = eavesdropper_eta(he, rho_e, subset_size);
    bounds.z.resize(static_cast<std::size_t>(subset_size));
    for (std::size_t i = 0; i < bounds.z.size(); ++i) {
        bounds.z[i] = legit.z[i] - std::log2(1.0 + rho_e.linear * bounds.eta[i]);
    }
    return bounds;
}

// Scenario driver maximizing the capacity difference C_m - C_e with full
// eavesdropper CSI. Both links carry the same rank-one machinery as the
// NCSIE driver; the increment is the difference of the two per-link gains.
class CsieDriver {
  public:
    struct State {
        Eigen::MatrixXcd t_m;  // Nr x Nr
        Eigen::MatrixXcd t_e;  // Ne x Ne
        Eigen::VectorXd phi_m;
        Eigen::VectorXd phi_e;
        double c_tilde = 0.0;
    };

    CsieDriver(const ChannelMatrix& hm, const ChannelMatrix& he, NormalizedSnr rho_m,
               NormalizedSnr rho_e, int subset_size)
        : hm_(hm),
          he_(he),
          rho_m_(rho_m.linear),
          rho_e_(rho_e.linear),
          bounds_(precompute_bounds_csie(hm, he, rho_m, rho_e, subset_size)) {}

    State make_root() const {
        State s;
        s.t_m = Eigen::MatrixXcd::Identity(hm_.rows(), hm_.rows());
        s.t_e = Eigen::MatrixXcd::Identity(he_.rows(), he_.rows());
        s.phi_m.resize(hm_.cols());
        s.phi_e.resize(he_.cols());
        for (int k = 0; k < hm_.cols(); ++k) {
            s.phi_m[k] = hm_.col(k).squaredNorm();
            s.phi_e[k] = he_.col(k).squaredNorm();
        }
        s.c_tilde = 0.0;
        return s;
    }

    double increment(const State& s, int k) const {
        return std::log2(1.0 + rho_m_ * s.phi_m[k - 1]) -
               std::log2(1.0 + rho_e_ * s.phi_e[k - 1]);
    }

    double level_bound(int level) const { return bounds_.z[static_cast<std::size_t>(level - 1)]; }

    void advance(const State& s, int k, double child_c_tilde, State& out) const {
        const int col = k - 1;
        const int live = static_cast<int>(hm_.cols()) - k;

        tvec_m_.noalias() = s.t_m * hm_.col(col);
        tvec_m_ /= std::sqrt(1.0 / rho_m_ + s.phi_m[col]);
        out.t_m = s.t_m;
        out.t_m.noalias() -= tvec_m_ * tvec_m_.adjoint();

        tvec_e_.noalias() = s.t_e * he_.col(col);
        tvec_e_ /= std::sqrt(1.0 / rho_e_ + s.phi_e[col]);
        out.t_e = s.t_e;
        out.t_e.noalias() -= tvec_e_ * tvec_e_.adjoint();

        out.phi_m = s.phi_m;
        out.phi_e = s.phi_e;
        if (live > 0) {
            if (xi_.size() != hm_.cols()) xi_.resize(hm_.cols());
            xi_.head(live).noalias() = hm_.rightCols(live).adjoint() * tvec_m_;
            out.phi_m.tail(live) -= xi_.head(live).cwiseAbs2();
            NcsieDriver::clamp_phi(out.phi_m, k);
            xi_.head(live).noalias() = he_.rightCols(live).adjoint() * tvec_e_;
            out.phi_e.tail(live) -= xi_.head(live).cwiseAbs2();
            NcsieDriver::clamp_phi(out.phi_e, k);
        }
        out.c_tilde = child_c_tilde;
    }

    const CsieLevelBounds& bounds() const { return bounds_; }

  private:
    const ChannelMatrix& hm_;
    const ChannelMatrix& he_;
    double rho_m_;
    double rho_e_;
    CsieLevelBounds bounds_;
    mutable Eigen::VectorXcd tvec_m_;
    mutable Eigen::VectorXcd tvec_e_;
    mutable Eigen::VectorXcd xi_;
};

// Optimal transmit antenna selection with full eavesdropper CSI: maximizes
// the unclamped difference C_m - C_e over all size-L column subsets; the
// reported secrecy capacity clamps the achieved objective at zero.
template <typename Observer = NoObserver>
SelectionResult select_csie(const ChannelMatrix& hm, const ChannelMatrix& he, int subset_size,
                            NormalizedSnr rho_m, NormalizedSnr rho_e,
                            const SelectOptions& options = {}, Observer&& observe = {}) {
    if (hm.cols() != he.cols()) {
        throw DimensionError("select_csie: Hm and He column counts differ");
    }
    const SearchTreeShape shape{static_cast<int>(hm.cols()), subset_size};
    shape.validate();
    const CsieDriver driver(hm, he, rho_m, rho_e, subset_size);
    const double z_sum = driver.bounds().sum_z();

    BabOptions bab;
    bab.prune_epsilon = options.prune_epsilon;
    std::vector<int> warm_set;
    if (options.warm_start) {
        warm_set = norm_based_select(hm, subset_size);
        const double warm_objective = link_capacity(select_columns(hm, warm_set), rho_m) -
                                      link_capacity(select_columns(he, warm_set), rho_e);
        bab.initial_bound = warm_objective - z_sum;
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
