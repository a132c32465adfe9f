#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "mimome/baselines.hpp"
#include "mimome/capacity.hpp"
#include "mimome/channel.hpp"
#include "mimome/csie.hpp"
#include "mimome/errors.hpp"
#include "mimome/ncsie.hpp"
#include "mimome/selection_types.hpp"

namespace mimome {

enum class Method { bab, norm, es };

inline std::string method_name(Method m) {
    switch (m) {
        case Method::bab: return "bab";
        case Method::norm: return "norm";
        case Method::es: return "es";
    }
    throw ConfigError("method_name: invalid method");
}

inline Method method_from_name(const std::string& name) {
    if (name == "bab") return Method::bab;
    if (name == "norm") return Method::norm;
    if (name == "es") return Method::es;
    throw ConfigError("unknown method '" + name + "' (expected bab, norm or es)");
}

struct SweepConfig {
    Scenario scenario = Scenario::ncsie;
    std::vector<int> nt_grid;  // empty = default: {16} with es requested, {64} otherwise
    int nr = 4;
    int ne = 8;
    int subset_size = 4;
    std::vector<double> rho_m_db_grid;
    std::vector<double> rho_e_db_grid;
    int n_trials = 2000;
    std::vector<Method> methods = {Method::bab, Method::norm};
    std::uint64_t seed = 1;
    std::uint64_t es_cap = 10'000'000;
    bool warm_start = false;
};

// One resolved grid point; `index` is its position in the nt x rho_m x rho_e
// cross product and feeds the per-trial seed derivation.
struct SweepPoint {
    int nt;
    double rho_m_db;
    double rho_e_db;
    std::size_t index;
};

struct TrialOutcome {
    double secrecy_bits;    // clamped C_s of the method's selected subset
    double objective_bits;  // scenario objective of the selected subset
    double nodes;           // visited-node count (norm := Nt, es := full tree)
};

struct SweepRecord {
    Scenario scenario;
    Method method;
    int nt, nr, ne, subset_size, n_trials;
    double rho_m_db, rho_e_db;
    double mean_secrecy_bits;
    double mean_nodes;

    friend bool operator==(const SweepRecord&, const SweepRecord&) = default;
};

// --- deterministic per-trial seeding --------------------------------------

// SplitMix64 finalizer.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

inline std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b) {
    return splitmix64(a ^ (b + 0x9E3779B97F4A7C15ULL + (a << 6) + (a >> 2)));
}

// Seed for one generated matrix: chained mix of the base seed, the grid point
// index, the trial index, and a stream tag (0 = legitimate, 1 = eavesdropper).
// Methods within a trial share these seeds, so comparisons are paired.
inline Seed trial_seed(std::uint64_t base, std::size_t point_index, int trial, int stream) {
    return Seed{mix_seed(mix_seed(mix_seed(base, point_index), static_cast<std::uint64_t>(trial)),
                         static_cast<std::uint64_t>(stream))};
}

// ---------------------------------------------------------------------------

inline void validate_config(const SweepConfig& cfg) {
    if (cfg.n_trials < 1) throw ConfigError("sweep config: n_trials must be >= 1");
    if (cfg.nt_grid.empty()) throw ConfigError("sweep config: empty Nt grid");
    if (cfg.rho_m_db_grid.empty()) throw ConfigError("sweep config: empty rho_m grid");
    if (cfg.rho_e_db_grid.empty()) throw ConfigError("sweep config: empty rho_e grid");
    if (cfg.methods.empty()) throw ConfigError("sweep config: no methods requested");
    if (cfg.nr < 1 || cfg.ne < 1) throw ConfigError("sweep config: Nr and Ne must be >= 1");
    for (int nt : cfg.nt_grid) {
        SearchTreeShape{nt, cfg.subset_size}.validate();
        const bool wants_es =
            std::find(cfg.methods.begin(), cfg.methods.end(), Method::es) != cfg.methods.end();
        if (wants_es) {
            const std::uint64_t n_subsets = binomial(nt, cfg.subset_size);
            if (n_subsets > cfg.es_cap) {
                throw BudgetError("sweep config: exhaustive search over C(" + std::to_string(nt) +
                                  "," + std::to_string(cfg.subset_size) + ")=" +
                                  std::to_string(n_subsets) + " subsets exceeds cap " +
                                  std::to_string(cfg.es_cap));
            }
        }
    }
    for (double db : cfg.rho_m_db_grid) {
        if (!std::isfinite(db)) throw ConfigError("sweep config: non-finite rho_m dB value");
    }
    for (double db : cfg.rho_e_db_grid) {
        if (!std::isfinite(db)) throw ConfigError("sweep config: non-finite rho_e dB value");
    }
}

inline std::vector<SweepPoint> grid_points(const SweepConfig& cfg) {
    std::vector<SweepPoint> points;
    std::size_t index = 0;
    for (int nt : cfg.nt_grid) {
        for (double rm : cfg.rho_m_db_grid) {
            for (double re : cfg.rho_e_db_grid) {
                points.push_back(SweepPoint{nt, rm, re, index++});
            }
        }
    }
    return points;
}

// Runs every configured method on one freshly drawn channel pair; outcomes
// are aligned with cfg.methods.
inline std::vector<TrialOutcome> run_trial(const SweepConfig& cfg, const SweepPoint& point,
                                           int trial) {
    const ChannelMatrix hm =
        generate_rayleigh(cfg.nr, point.nt, trial_seed(cfg.seed, point.index, trial, 0));
    const ChannelMatrix he =
        generate_rayleigh(cfg.ne, point.nt, trial_seed(cfg.seed, point.index, trial, 1));
    const NormalizedSnr rho_m = db_to_linear(point.rho_m_db);
    const NormalizedSnr rho_e = db_to_linear(point.rho_e_db);

    SelectOptions select_options;
    select_options.warm_start = cfg.warm_start;

    std::vector<TrialOutcome> outcomes;
    outcomes.reserve(cfg.methods.size());
    for (Method method : cfg.methods) {
        std::vector<int> indices;
        double objective = 0.0;
        double nodes = 0.0;
        switch (method) {
            case Method::bab: {
                const SelectionResult r =
                    cfg.scenario == Scenario::ncsie
                        ? select_ncsie(hm, cfg.subset_size, rho_m, select_options)
                        : select_csie(hm, he, cfg.subset_size, rho_m, rho_e, select_options);
                indices = r.indices;
                objective = r.objective_bits;
                nodes = static_cast<double>(r.visited_nodes);
                break;
            }
            case Method::norm: {
                indices = norm_based_select(hm, cfg.subset_size);
                objective = link_capacity(select_columns(hm, indices), rho_m);
                if (cfg.scenario == Scenario::csie) {
                    objective -= link_capacity(select_columns(he, indices), rho_e);
                }
                nodes = static_cast<double>(point.nt);
                break;
            }
            case Method::es: {
                const SelectionResult r =
                    exhaustive_select(cfg.scenario, hm, &he, cfg.subset_size, rho_m, rho_e,
                                      cfg.es_cap);
                indices = r.indices;
                objective = r.objective_bits;
                nodes = static_cast<double>(r.visited_nodes);
                break;
            }
        }
        const SecrecyCapacity cs = secrecy_capacity_direct(
            select_columns(hm, indices), select_columns(he, indices), rho_m, rho_e);
        outcomes.push_back(TrialOutcome{cs.secrecy_bits, objective, nodes});
    }
    return outcomes;
}

// Applies the default transmit-array size when the config leaves it open:
// Nt = 16 for exhaustive-search-inclusive runs, Nt = 64 otherwise.
inline SweepConfig with_default_nt(SweepConfig cfg) {
    if (cfg.nt_grid.empty()) {
        const bool wants_es =
            std::find(cfg.methods.begin(), cfg.methods.end(), Method::es) != cfg.methods.end();
        cfg.nt_grid = {wants_es ? 16 : 64};
    }
    return cfg;
}

namespace detail {

inline std::vector<SweepRecord> run_sweep_impl(SweepConfig cfg) {
    cfg = with_default_nt(std::move(cfg));
    validate_config(cfg);
    std::vector<SweepRecord> records;
    for (const SweepPoint& point : grid_points(cfg)) {
        std::vector<double> sum_cs(cfg.methods.size(), 0.0);
        std::vector<double> sum_nodes(cfg.methods.size(), 0.0);
        for (int trial = 0; trial < cfg.n_trials; ++trial) {
            const std::vector<TrialOutcome> outcomes = run_trial(cfg, point, trial);
            for (std::size_t m = 0; m < outcomes.size(); ++m) {
                sum_cs[m] += outcomes[m].secrecy_bits;
                sum_nodes[m] += outcomes[m].nodes;
            }
        }
        for (std::size_t m = 0; m < cfg.methods.size(); ++m) {
            records.push_back(SweepRecord{cfg.scenario, cfg.methods[m], point.nt, cfg.nr, cfg.ne,
                                          cfg.subset_size, cfg.n_trials, point.rho_m_db,
                                          point.rho_e_db, sum_cs[m] / cfg.n_trials,
                                          sum_nodes[m] / cfg.n_trials});
        }
    }
    return records;
}

}  // namespace detail

// Ergodic secrecy capacity versus the SNR grid, one record per (grid point,
// method); all methods in a trial see the same channel pair.
inline std::vector<SweepRecord> run_ergodic_sweep(const SweepConfig& cfg) {
    return detail::run_sweep_impl(cfg);
}

// Visited-node complexity sweep (typically over an Nt grid or SNR grids).
// Same record schema; the node columns carry the signal here.
inline std::vector<SweepRecord> run_complexity_sweep(const SweepConfig& cfg) {
    return detail::run_sweep_impl(cfg);
}

// --- record serialization ---------------------------------------------------

enum class RecordFormat { csv, json };

inline constexpr char kRecordCsvHeader[] =
    "scenario,method,Nt,Nr,Ne,L,rho_m_db,rho_e_db,n_trials,mean_cs_bits,mean_nodes";

namespace detail {

// 12 significant digits, the pinned record precision.
inline std::string fmt_g12(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

inline void sort_records(std::vector<SweepRecord>& records) {
    std::sort(records.begin(), records.end(), [](const SweepRecord& a, const SweepRecord& b) {
        return std::tuple(a.nt, a.rho_m_db, a.rho_e_db, static_cast<int>(a.scenario),
                          static_cast<int>(a.method)) <
               std::tuple(b.nt, b.rho_m_db, b.rho_e_db, static_cast<int>(b.scenario),
                          static_cast<int>(b.method));
    });
}

}  // namespace detail

inline void write_records(const std::vector<SweepRecord>& records, std::ostream& out,
                          RecordFormat format) {
    if (records.empty()) throw ConfigError("write_records: no records to write");
    std::vector<SweepRecord> sorted = records;
    detail::sort_records(sorted);

    if (format == RecordFormat::csv) {
        out << kRecordCsvHeader << '\n';
        for (const SweepRecord& r : sorted) {
            out << scenario_name(r.scenario) << ',' << method_name(r.method) << ',' << r.nt << ','
                << r.nr << ',' << r.ne << ',' << r.subset_size << ','
                << detail::fmt_g12(r.rho_m_db) << ',' << detail::fmt_g12(r.rho_e_db) << ','
                << r.n_trials << ',' << detail::fmt_g12(r.mean_secrecy_bits) << ','
                << detail::fmt_g12(r.mean_nodes) << '\n';
        }
    } else {
        out << "[\n";
        for (std::size_t i = 0; i < sorted.size(); ++i) {
            const SweepRecord& r = sorted[i];
            out << "  {\"scenario\":\"" << scenario_name(r.scenario) << "\",\"method\":\""
                << method_name(r.method) << "\",\"Nt\":" << r.nt << ",\"Nr\":" << r.nr
                << ",\"Ne\":" << r.ne << ",\"L\":" << r.subset_size << ",\"rho_m_db\":"
                << detail::fmt_g12(r.rho_m_db) << ",\"rho_e_db\":" << detail::fmt_g12(r.rho_e_db)
                << ",\"n_trials\":" << r.n_trials << ",\"mean_cs_bits\":"
                << detail::fmt_g12(r.mean_secrecy_bits) << ",\"mean_nodes\":"
                << detail::fmt_g12(r.mean_nodes) << "}" << (i + 1 < sorted.size() ? "," : "")
                << '\n';
        }
        out << "]\n";
    }
    if (!out) throw FormatError("write_records: write failed");
}

inline void write_records_file(const std::vector<SweepRecord>& records, const std::string& path,
                               RecordFormat format) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw FormatError("write_records: cannot open '" + path + "' for writing");
    write_records(records, out, format);
}

}  // namespace mimome

