#pragma once

#include <Eigen/Cholesky>
#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <string>

#include "mimome/channel.hpp"
#include "mimome/errors.hpp"

namespace mimome {

// Normalized SNR: the per-antenna SNR already divided by the number of
// selected antennas L (uniform power allocation). Strictly positive, finite.
struct NormalizedSnr {
    double linear;

    explicit NormalizedSnr(double value) : linear(value) {
        if (!(std::isfinite(value) && value > 0.0)) {
            throw ConfigError("NormalizedSnr: value must be finite and > 0 (got " +
                              std::to_string(value) + ")");
        }
    }
};

inline NormalizedSnr db_to_linear(double db) {
    if (!std::isfinite(db)) throw ConfigError("db_to_linear: non-finite input");
    return NormalizedSnr(std::pow(10.0, db / 10.0));
}

// log2 det(I + rho H H^dagger) in bits/s/Hz, evaluated by Cholesky on the
// smaller Gram side (det(I + rho H H^dagger) = det(I + rho H^dagger H)).
inline double link_capacity(const ChannelMatrix& h, NormalizedSnr rho) {
    if (h.rows() == 0 || h.cols() == 0) return 0.0;

    Eigen::MatrixXcd gram;
    if (h.cols() <= h.rows()) {
        gram = Eigen::MatrixXcd::Identity(h.cols(), h.cols());
        gram.noalias() += rho.linear * (h.adjoint() * h);
    } else {
        gram = Eigen::MatrixXcd::Identity(h.rows(), h.rows());
        gram.noalias() += rho.linear * (h * h.adjoint());
    }

    const Eigen::LLT<Eigen::MatrixXcd> llt(gram);
    if (llt.info() != Eigen::Success) {
        throw NumericalError("link_capacity: Cholesky factorization failed");
    }
    double log2det = 0.0;
    const auto& factor = llt.matrixLLT();
    for (Eigen::Index i = 0; i < factor.rows(); ++i) {
        log2det += std::log2(factor(i, i).real());
    }
    log2det *= 2.0;
    if (!std::isfinite(log2det)) {
        throw NumericalError("link_capacity: non-finite result");
    }
    return std::max(0.0, log2det);
}

struct SecrecyCapacity {
    double difference_bits;  // C_m - C_e, unclamped (search objective)
    double secrecy_bits;     // [C_m - C_e]^+
};

// Secrecy capacity of a selected subset: both submatrices must hold the same
// antenna set (equal column counts).
inline SecrecyCapacity secrecy_capacity_direct(const ChannelMatrix& hm_sub,
                                               const ChannelMatrix& he_sub, NormalizedSnr rho_m,
                                               NormalizedSnr rho_e) {
    if (hm_sub.cols() != he_sub.cols()) {
        throw DimensionError("secrecy_capacity_direct: column-count mismatch (" +
                             std::to_string(hm_sub.cols()) + " vs " +
                             std::to_string(he_sub.cols()) + ")");
    }
    const double cm = link_capacity(hm_sub, rho_m);
    const double ce = link_capacity(he_sub, rho_e);
    const double diff = cm - ce;
    return SecrecyCapacity{diff, std::max(0.0, diff)};
}

}  // namespace mimome
