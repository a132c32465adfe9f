#include "doctest.h"

#include <Eigen/Dense>
#include <cmath>
#include <random>
#include <vector>

#include "mimome/baselines.hpp"
#include "mimome/capacity.hpp"
#include "mimome/channel.hpp"
#include "mimome/csie.hpp"
#include "mimome/ncsie.hpp"

using namespace mimome;

namespace {

Eigen::MatrixXcd direct_t_matrix(const ChannelMatrix& h, const std::vector<int>& path,
                                 double rho) {
    Eigen::MatrixXcd gram = Eigen::MatrixXcd::Identity(h.rows(), h.rows());
    for (int k : path) {
        gram.noalias() += rho * (h.col(k - 1) * h.col(k - 1).adjoint());
    }
    return gram.llt().solve(Eigen::MatrixXcd::Identity(h.rows(), h.rows()));
}

double quad_form(const ChannelMatrix& h, const Eigen::MatrixXcd& t, int k) {
    return (h.col(k - 1).adjoint() * t * h.col(k - 1)).value().real();
}

std::vector<int> random_path(std::mt19937_64& pick, int nt, int subset) {
    const SearchTreeShape shape{nt, subset};
    std::vector<int> path;
    int last = 0;
    for (int depth = 0; depth < subset; ++depth) {
        const IndexRange kids = child_candidates(last, depth, shape);
        last = kids.lo + static_cast<int>(pick() % static_cast<std::uint64_t>(kids.size()));
        path.push_back(last);
    }
    return path;
}

struct EventLog {
    std::vector<NodeEvent> events;
    void operator()(const NodeEvent& ev) { events.push_back(ev); }
};

}  // namespace

TEST_CASE("eavesdropper_eta closed forms") {
    SUBCASE("silent eavesdropper") {
        const ChannelMatrix he = ChannelMatrix::Zero(4, 8);
        const std::vector<double> eta = eavesdropper_eta(he, NormalizedSnr(2.0), 3);
        for (double e : eta) CHECK(e == 0.0);
    }
    SUBCASE("identity channel, Nt = 2, L = 1") {
        const ChannelMatrix he = ChannelMatrix::Identity(2, 2);
        const std::vector<double> eta = eavesdropper_eta(he, NormalizedSnr(1.0), 1);
        REQUIRE(eta.size() == 1);
        CHECK(eta[0] == doctest::Approx(0.5).epsilon(1e-12));
    }
    SUBCASE("random 4x10 matches an explicit full inverse") {
        const ChannelMatrix he = generate_rayleigh(4, 10, Seed{81});
        const NormalizedSnr rho = db_to_linear(3.0);
        const std::vector<double> eta = eavesdropper_eta(he, rho, 4);

        Eigen::MatrixXcd gram = Eigen::MatrixXcd::Identity(4, 4) +
                                rho.linear * (he * he.adjoint());
        const Eigen::MatrixXcd inv = gram.inverse();
        const SearchTreeShape shape{10, 4};
        for (int level = 1; level <= 4; ++level) {
            double expected = std::numeric_limits<double>::infinity();
            const IndexRange range = level_candidates(level, shape);
            for (int k = range.lo; k <= range.hi; ++k) {
                expected = std::min(expected, quad_form(he, inv, k));
            }
            CHECK(eta[level - 1] == doctest::Approx(expected).epsilon(1e-10));
        }
    }
}

TEST_CASE("delta_csie matches the direct difference of capacity increments") {
    const ChannelMatrix hm = generate_rayleigh(4, 10, Seed{82});
    const ChannelMatrix he = generate_rayleigh(4, 10, Seed{83});
    const NormalizedSnr rho_m = db_to_linear(6.0);
    const NormalizedSnr rho_e = db_to_linear(2.0);
    const CsieDriver driver(hm, he, rho_m, rho_e, 3);

    SUBCASE("symmetric phi and rho cancel") {
        const CsieDriver symmetric(hm, hm, rho_m, rho_m, 3);
        const CsieDriver::State root = symmetric.make_root();
        for (int k = 1; k <= 10; ++k) CHECK(symmetric.increment(root, k) == 0.0);
    }
    SUBCASE("zero eavesdropper phi reduces to the NCSIE increment") {
        const NcsieDriver legit(hm, rho_m, 3);
        CsieDriver::State root = driver.make_root();
        root.phi_e.setZero();
        const NcsieDriver::State legit_root = legit.make_root();
        for (int k = 1; k <= 10; ++k) {
            CHECK(driver.increment(root, k) == legit.increment(legit_root, k));
        }
    }
    SUBCASE("mid-path increments equal direct objective differences") {
        std::mt19937_64 pick(84);
        for (int rep = 0; rep < 8; ++rep) {
            const std::vector<int> path = random_path(pick, 10, 3);
            CsieDriver::State state = driver.make_root();
            std::vector<int> sofar;
            double c_tilde = 0.0;
            int depth = 0;
            for (int k : path) {
                const auto objective = [&](const std::vector<int>& subset) {
                    if (subset.empty()) return 0.0;
                    return link_capacity(select_columns(hm, subset), rho_m) -
                           link_capacity(select_columns(he, subset), rho_e);
                };
                std::vector<int> extended = sofar;
                extended.push_back(k);
                const double expected = objective(extended) - objective(sofar);
                CHECK(driver.increment(state, k) == doctest::Approx(expected).epsilon(1e-9));

                c_tilde += driver.increment(state, k) - driver.level_bound(depth + 1);
                CsieDriver::State next;
                driver.advance(state, k, c_tilde, next);
                state = next;
                sofar.push_back(k);
                ++depth;
            }
        }
    }
}

TEST_CASE("advance_csie keeps both T matrices and phi caches exact") {
    std::mt19937_64 pick(85);
    for (int rep = 0; rep < 8; ++rep) {
        const int nt = 8 + static_cast<int>(pick() % 5);
        const int subset = 2 + static_cast<int>(pick() % 3);
        const int ne = 2 + static_cast<int>(pick() % 7);
        const ChannelMatrix hm = generate_rayleigh(4, nt, Seed{pick()});
        const ChannelMatrix he = generate_rayleigh(ne, nt, Seed{pick()});
        const NormalizedSnr rho_m = db_to_linear(static_cast<double>(pick() % 15) - 5.0);
        const NormalizedSnr rho_e = db_to_linear(static_cast<double>(pick() % 11) - 5.0);
        const CsieDriver driver(hm, he, rho_m, rho_e, subset);

        CsieDriver::State state = driver.make_root();
        std::vector<int> sofar;
        double c_tilde = 0.0;
        int depth = 0;
        for (int k : random_path(pick, nt, subset)) {
            c_tilde += driver.increment(state, k) - driver.level_bound(depth + 1);
            CsieDriver::State next;
            driver.advance(state, k, c_tilde, next);
            state = next;
            sofar.push_back(k);
            ++depth;

            const Eigen::MatrixXcd tm_direct = direct_t_matrix(hm, sofar, rho_m.linear);
            const Eigen::MatrixXcd te_direct = direct_t_matrix(he, sofar, rho_e.linear);
            CHECK((state.t_m - tm_direct).norm() <= 1e-9 * std::max(1.0, tm_direct.norm()));
            CHECK((state.t_e - te_direct).norm() <= 1e-9 * std::max(1.0, te_direct.norm()));
            for (int a = k + 1; a <= nt; ++a) {
                CHECK(std::abs(state.phi_m[a - 1] - quad_form(hm, tm_direct, a)) <=
                      1e-9 * std::max(1.0, state.phi_m[a - 1]));
                CHECK(std::abs(state.phi_e[a - 1] - quad_form(he, te_direct, a)) <=
                      1e-9 * std::max(1.0, state.phi_e[a - 1]));
            }
        }

        // Leaf reconstruction: c_tilde + sum(Z) equals the direct difference.
        const double z_sum = driver.bounds().sum_z();
        const double direct = link_capacity(select_columns(hm, sofar), rho_m) -
                              link_capacity(select_columns(he, sofar), rho_e);
        CHECK(std::abs(state.c_tilde + z_sum - direct) <= 1e-9);
    }
}

TEST_CASE("advance_csie with a zero eavesdropper column leaves T_e untouched") {
    const ChannelMatrix hm = generate_rayleigh(4, 6, Seed{86});
    ChannelMatrix he = generate_rayleigh(4, 6, Seed{87});
    he.col(1).setZero();
    const CsieDriver driver(hm, he, NormalizedSnr(2.0), NormalizedSnr(1.0), 3);
    const CsieDriver::State root = driver.make_root();
    CsieDriver::State next;
    driver.advance(root, 2, 0.0, next);
    CHECK(next.t_e == root.t_e);
    CHECK(next.phi_e.tail(4) == root.phi_e.tail(4));
}

TEST_CASE("cached eavesdropper quadratic forms dominate the full-inverse forms") {
    // The complete-selection inverse is dominated by every partial T_e, so
    // each live phi_e entry stays above the corresponding full-inverse form.
    std::mt19937_64 pick(88);
    for (int rep = 0; rep < 6; ++rep) {
        const int nt = 8 + static_cast<int>(pick() % 5);
        const ChannelMatrix hm = generate_rayleigh(4, nt, Seed{pick()});
        const ChannelMatrix he = generate_rayleigh(4, nt, Seed{pick()});
        const NormalizedSnr rho_m = db_to_linear(6.0);
        const NormalizedSnr rho_e = db_to_linear(4.0);
        const CsieDriver driver(hm, he, rho_m, rho_e, 4);

        Eigen::MatrixXcd gram = Eigen::MatrixXcd::Identity(4, 4) +
                                rho_e.linear * (he * he.adjoint());
        const Eigen::MatrixXcd full_inverse = gram.inverse();

        CsieDriver::State state = driver.make_root();
        int depth = 0;
        for (int k : random_path(pick, nt, 4)) {
            CsieDriver::State next;
            driver.advance(state, k, 0.0, next);
            state = next;
            ++depth;
            for (int a = k + 1; a <= nt; ++a) {
                CHECK(state.phi_e[a - 1] >= quad_form(he, full_inverse, a) - 1e-9);
            }
        }
    }
}

TEST_CASE("select_csie with a silent eavesdropper reduces to select_ncsie node-for-node") {
    const ChannelMatrix hm = generate_rayleigh(4, 12, Seed{89});
    const ChannelMatrix he = ChannelMatrix::Zero(6, 12);
    const NormalizedSnr rho_m = db_to_linear(8.0);
    const NormalizedSnr rho_e = db_to_linear(3.0);

    EventLog csie_log;
    EventLog ncsie_log;
    const CsieDriver cd(hm, he, rho_m, rho_e, 4);
    const NcsieDriver nd(hm, rho_m, 4);
    const SearchTreeShape shape{12, 4};
    const BabResult cr = run_bab(shape, cd, BabOptions{}, std::ref(csie_log));
    const BabResult nr = run_bab(shape, nd, BabOptions{}, std::ref(ncsie_log));

    CHECK(cr.selected == nr.selected);
    CHECK(cr.visited_nodes == nr.visited_nodes);
    REQUIRE(csie_log.events.size() == ncsie_log.events.size());
    for (std::size_t i = 0; i < csie_log.events.size(); ++i) {
        CHECK(csie_log.events[i].antenna == ncsie_log.events[i].antenna);
        CHECK(csie_log.events[i].increment == ncsie_log.events[i].increment);
        CHECK(csie_log.events[i].level_bound == ncsie_log.events[i].level_bound);
        CHECK(csie_log.events[i].score == ncsie_log.events[i].score);
    }
}

TEST_CASE("select_csie degenerate and random-instance behavior") {
    SUBCASE("identical links make every subset tie at zero") {
        const ChannelMatrix h = generate_rayleigh(4, 10, Seed{90});
        const NormalizedSnr rho(3.0);
        const SelectionResult r = select_csie(h, h, 3, rho, rho);
        CHECK(std::abs(r.objective_bits) <= 1e-9);
        CHECK(r.secrecy_bits <= 1e-9);
    }
    SUBCASE("random instances equal exhaustive search") {
        std::mt19937_64 pick(91);
        for (int nt : {8, 12, 16}) {
            for (int subset : {2, 3, 4}) {
                for (int rep = 0; rep < 5; ++rep) {
                    const int ne = (pick() % 2 == 0) ? 4 : 8;
                    const ChannelMatrix hm = generate_rayleigh(4, nt, Seed{pick()});
                    const ChannelMatrix he = generate_rayleigh(ne, nt, Seed{pick()});
                    const NormalizedSnr rho_m = db_to_linear(static_cast<double>(pick() % 15) - 5.0);
                    const NormalizedSnr rho_e = db_to_linear(static_cast<double>(pick() % 7) - 1.0);
                    const SelectionResult bab = select_csie(hm, he, subset, rho_m, rho_e);
                    const SelectionResult es =
                        exhaustive_select(Scenario::csie, hm, &he, subset, rho_m, rho_e);
                    CHECK(std::abs(bab.objective_bits - es.objective_bits) <= 1e-9);
                    CHECK(bab.visited_nodes <= es.visited_nodes);
                    CHECK(bab.secrecy_bits == std::max(0.0, bab.objective_bits));
                }
            }
        }
    }
    SUBCASE("dimension mismatch rejected") {
        const ChannelMatrix hm = generate_rayleigh(4, 10, Seed{92});
        const ChannelMatrix he = generate_rayleigh(4, 9, Seed{93});
        CHECK_THROWS_AS(select_csie(hm, he, 3, NormalizedSnr(1.0), NormalizedSnr(1.0)),
                        DimensionError);
    }
}

TEST_CASE("csie warm start never changes the achieved objective") {
    std::mt19937_64 pick(94);
    for (int rep = 0; rep < 15; ++rep) {
        const int nt = 8 + static_cast<int>(pick() % 6);
        const ChannelMatrix hm = generate_rayleigh(4, nt, Seed{pick()});
        const ChannelMatrix he = generate_rayleigh(4, nt, Seed{pick()});
        const NormalizedSnr rho_m = db_to_linear(static_cast<double>(pick() % 15) - 5.0);
        const NormalizedSnr rho_e = db_to_linear(static_cast<double>(pick() % 7) - 1.0);
        const SelectionResult cold = select_csie(hm, he, 3, rho_m, rho_e);
        SelectOptions warm;
        warm.warm_start = true;
        const SelectionResult warm_run = select_csie(hm, he, 3, rho_m, rho_e, warm);
        CHECK(std::abs(cold.objective_bits - warm_run.objective_bits) <= 1e-9);
        CHECK(warm_run.visited_nodes <= cold.visited_nodes);
    }
}
