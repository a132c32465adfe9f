// Command-line front end for MIMOME transmit antenna selection: single
// instance selection, Monte Carlo sweeps, complexity benchmarks and channel
// file generation.

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "mimome/mimome.hpp"
#include "mimome/record_io.hpp"

namespace {

using nlohmann::ordered_json;
using namespace mimome;

double elapsed_ms(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
        .count();
}

std::vector<Method> parse_methods(const std::vector<std::string>& names) {
    std::vector<Method> methods;
    for (const std::string& name : names) methods.push_back(method_from_name(name));
    return methods;
}

// Grid field in a sweep config: a number, an array, or {min,max,step}.
std::vector<double> parse_grid(const nlohmann::json& node, const std::string& what) {
    std::vector<double> grid;
    if (node.is_number()) {
        grid.push_back(node.get<double>());
    } else if (node.is_array()) {
        for (const auto& v : node) grid.push_back(v.get<double>());
    } else if (node.is_object()) {
        const double lo = node.at("min").get<double>();
        const double hi = node.at("max").get<double>();
        const double step = node.at("step").get<double>();
        if (!(step > 0.0)) throw ConfigError(what + ": step must be positive");
        for (double x = lo; x <= hi + 1e-12; x += step) grid.push_back(x);
    } else {
        throw ConfigError(what + ": expected number, array or {min,max,step}");
    }
    if (grid.empty()) throw ConfigError(what + ": empty grid");
    return grid;
}

SweepConfig config_from_json(const nlohmann::json& doc) {
    SweepConfig cfg;
    cfg.scenario = scenario_from_name(doc.value("scenario", std::string("ncsie")));
    if (doc.contains("nt")) {
        cfg.nt_grid.clear();
        if (doc["nt"].is_array()) {
            for (const auto& v : doc["nt"]) cfg.nt_grid.push_back(v.get<int>());
        } else {
            cfg.nt_grid.push_back(doc["nt"].get<int>());
        }
    }
    cfg.nr = doc.value("nr", cfg.nr);
    cfg.ne = doc.value("ne", cfg.ne);
    cfg.subset_size = doc.value("L", cfg.subset_size);
    if (doc.contains("rho_m_db")) cfg.rho_m_db_grid = parse_grid(doc["rho_m_db"], "rho_m_db");
    if (doc.contains("rho_e_db")) cfg.rho_e_db_grid = parse_grid(doc["rho_e_db"], "rho_e_db");
    cfg.n_trials = doc.value("trials", cfg.n_trials);
    if (doc.contains("methods")) {
        cfg.methods = parse_methods(doc["methods"].get<std::vector<std::string>>());
    }
    cfg.seed = doc.value("seed", cfg.seed);
    cfg.es_cap = doc.value("es_cap", cfg.es_cap);
    cfg.warm_start = doc.value("warm_start", cfg.warm_start);
    return cfg;
}

void emit_plot_series(const std::vector<SweepRecord>& records, const std::string& out_path,
                      bool nodes_as_y) {
    std::string stem = out_path;
    if (const auto dot = stem.rfind('.'); dot != std::string::npos && dot > stem.rfind('/') + 1) {
        stem = stem.substr(0, dot);
    }
    std::set<double> rho_e_values;
    std::set<int> nt_values;
    std::set<Method> methods;
    for (const SweepRecord& r : records) {
        rho_e_values.insert(r.rho_e_db);
        nt_values.insert(r.nt);
        methods.insert(r.method);
    }
    const bool x_is_nt = nt_values.size() > 1;
    for (Method method : methods) {
        for (double rho_e : rho_e_values) {
            std::string path = stem + "." + method_name(method);
            if (rho_e_values.size() > 1) {
                char tag[32];
                std::snprintf(tag, sizeof tag, ".rhoe%g", rho_e);
                path += tag;
            }
            path += ".dat";
            std::ofstream out(path);
            if (!out) throw FormatError("emit-plot: cannot open '" + path + "'");
            out << "# " << (x_is_nt ? "Nt" : "rho_m_db") << ' '
                << (nodes_as_y ? "mean_nodes" : "mean_cs_bits") << '\n';
            for (const SweepRecord& r : records) {
                if (r.method != method || r.rho_e_db != rho_e) continue;
                const double x = x_is_nt ? static_cast<double>(r.nt) : r.rho_m_db;
                out << x << ' ' << (nodes_as_y ? r.mean_nodes : r.mean_secrecy_bits) << '\n';
            }
        }
    }
}

struct SelectArgs {
    std::string scenario = "ncsie";
    std::string hm_path, he_path;
    int nt = 0, nr = 4, ne = 4;
    int subset_size = 0;
    double rho_m_db = 0.0;
    std::optional<double> rho_e_db;
    std::uint64_t seed = 1;
    bool warm_start = false;
};

int cmd_select(const SelectArgs& args) {
    const auto start = std::chrono::steady_clock::now();
    const Scenario scenario = scenario_from_name(args.scenario);

    ChannelMatrix hm;
    if (!args.hm_path.empty()) {
        hm = load_matrix_file(args.hm_path);
    } else if (args.nt > 0) {
        hm = generate_rayleigh(args.nr, args.nt, trial_seed(args.seed, 0, 0, 0));
    } else {
        throw ConfigError("select: provide --hm FILE or --nt/--nr with --seed");
    }

    std::optional<ChannelMatrix> he;
    if (!args.he_path.empty()) {
        he = load_matrix_file(args.he_path);
    } else if (scenario == Scenario::csie) {
        if (args.nt > 0) {
            he = generate_rayleigh(args.ne, args.nt, trial_seed(args.seed, 0, 0, 1));
        } else {
            throw ConfigError("select: CSIE needs --he FILE or --ne with --seed");
        }
    }
    if (he && he->cols() != hm.cols()) {
        throw DimensionError("select: dimension mismatch, Hm has " + std::to_string(hm.cols()) +
                             " columns but He has " + std::to_string(he->cols()));
    }

    const NormalizedSnr rho_m = db_to_linear(args.rho_m_db);
    std::optional<NormalizedSnr> rho_e;
    if (args.rho_e_db) rho_e = db_to_linear(*args.rho_e_db);
    if (scenario == Scenario::csie && !rho_e) {
        throw ConfigError("select: CSIE needs --rho-e-db");
    }

    SelectOptions options;
    options.warm_start = args.warm_start;

    SelectionResult result;
    if (scenario == Scenario::ncsie) {
        result = select_ncsie(hm, args.subset_size, rho_m, options);
    } else {
        result = select_csie(hm, *he, args.subset_size, rho_m, *rho_e, options);
    }

    ordered_json report;
    report["scenario"] = args.scenario;
    report["L"] = args.subset_size;
    report["rho_m_db"] = args.rho_m_db;
    if (args.rho_e_db) report["rho_e_db"] = *args.rho_e_db;
    report["indices"] = result.indices;
    report["objective_bits"] = result.objective_bits;
    // With an eavesdropper channel at hand, report the secrecy capacity of
    // the selected subset against it (under NCSIE the selection itself never
    // looks at He).
    double secrecy = result.secrecy_bits;
    if (he && rho_e) {
        secrecy = secrecy_capacity_direct(select_columns(hm, result.indices),
                                          select_columns(*he, result.indices), rho_m, *rho_e)
                      .secrecy_bits;
    }
    report["secrecy_bits"] = secrecy;
    report["visited_nodes"] = result.visited_nodes;
    report["wall_time_ms"] = elapsed_ms(start);
    std::cout << report.dump(2) << '\n';
    return 0;
}

struct SweepArgs {
    std::string config_path;
    std::string out_path;
    std::string format = "csv";
    std::string kind = "ergodic";
    bool emit_plot = false;

    // Inline overrides (applied over the config file when present).
    std::optional<std::string> scenario;
    std::vector<int> nt;
    std::optional<int> nr, ne, subset_size, trials;
    std::vector<double> rho_m_db, rho_e_db;
    std::vector<std::string> methods;
    std::optional<std::uint64_t> seed, es_cap;
    bool warm_start = false;
};

SweepConfig resolve_sweep_config(const SweepArgs& args) {
    SweepConfig cfg;
    if (!args.config_path.empty()) {
        std::ifstream in(args.config_path);
        if (!in) throw ConfigError("sweep: cannot open config '" + args.config_path + "'");
        nlohmann::json doc;
        try {
            in >> doc;
        } catch (const nlohmann::json::exception& e) {
            throw ConfigError(std::string("sweep: bad config JSON: ") + e.what());
        }
        cfg = config_from_json(doc);
    }
    if (args.scenario) cfg.scenario = scenario_from_name(*args.scenario);
    if (!args.nt.empty()) cfg.nt_grid = args.nt;
    if (args.nr) cfg.nr = *args.nr;
    if (args.ne) cfg.ne = *args.ne;
    if (args.subset_size) cfg.subset_size = *args.subset_size;
    if (!args.rho_m_db.empty()) cfg.rho_m_db_grid = args.rho_m_db;
    if (!args.rho_e_db.empty()) cfg.rho_e_db_grid = args.rho_e_db;
    if (args.trials) cfg.n_trials = *args.trials;
    if (!args.methods.empty()) cfg.methods = parse_methods(args.methods);
    if (args.seed) cfg.seed = *args.seed;
    if (args.es_cap) cfg.es_cap = *args.es_cap;
    if (args.warm_start) cfg.warm_start = true;
    // An empty Nt grid falls back to the harness default (16 with es, 64 otherwise).
    if (cfg.rho_m_db_grid.empty()) throw ConfigError("sweep: no rho_m grid specified");
    if (cfg.rho_e_db_grid.empty()) cfg.rho_e_db_grid = {5.0};
    return cfg;
}

int cmd_sweep(const SweepArgs& args) {
    const SweepConfig cfg = resolve_sweep_config(args);
    const bool complexity = args.kind == "complexity";
    const std::vector<SweepRecord> records =
        complexity ? run_complexity_sweep(cfg) : run_ergodic_sweep(cfg);
    const RecordFormat format =
        args.format == "json" ? RecordFormat::json : RecordFormat::csv;
    if (args.out_path.empty() || args.out_path == "-") {
        write_records(records, std::cout, format);
    } else {
        write_records_file(records, args.out_path, format);
    }
    if (args.emit_plot) {
        if (args.out_path.empty() || args.out_path == "-") {
            throw ConfigError("sweep: --emit-plot needs --out FILE");
        }
        emit_plot_series(records, args.out_path, complexity);
    }
    return 0;
}

int cmd_bench(const SweepArgs& args) {
    const SweepConfig cfg = with_default_nt(resolve_sweep_config(args));
    validate_config(cfg);

    std::printf("%-8s %6s %10s %8s %14s %14s %14s %14s\n", "scenario", "Nt", "rho_m_db", "method",
                "mean_nodes", "mean_time_ms", "node_ratio_es", "speedup_vs_es");
    for (const SweepPoint& point : grid_points(cfg)) {
        const NormalizedSnr rho_m = db_to_linear(point.rho_m_db);
        const NormalizedSnr rho_e = db_to_linear(point.rho_e_db);
        std::vector<double> sum_nodes(cfg.methods.size(), 0.0);
        std::vector<double> sum_ms(cfg.methods.size(), 0.0);
        for (int trial = 0; trial < cfg.n_trials; ++trial) {
            const ChannelMatrix hm =
                generate_rayleigh(cfg.nr, point.nt, trial_seed(cfg.seed, point.index, trial, 0));
            const ChannelMatrix he =
                generate_rayleigh(cfg.ne, point.nt, trial_seed(cfg.seed, point.index, trial, 1));
            SelectOptions options;
            options.warm_start = cfg.warm_start;
            for (std::size_t m = 0; m < cfg.methods.size(); ++m) {
                const auto start = std::chrono::steady_clock::now();
                switch (cfg.methods[m]) {
                    case Method::bab: {
                        const SelectionResult r =
                            cfg.scenario == Scenario::ncsie
                                ? select_ncsie(hm, cfg.subset_size, rho_m, options)
                                : select_csie(hm, he, cfg.subset_size, rho_m, rho_e, options);
                        sum_nodes[m] += static_cast<double>(r.visited_nodes);
                        break;
                    }
                    case Method::norm:
                        norm_based_select(hm, cfg.subset_size);
                        sum_nodes[m] += static_cast<double>(point.nt);
                        break;
                    case Method::es: {
                        const SelectionResult r = exhaustive_select(
                            cfg.scenario, hm, &he, cfg.subset_size, rho_m, rho_e, cfg.es_cap);
                        sum_nodes[m] += static_cast<double>(r.visited_nodes);
                        break;
                    }
                }
                sum_ms[m] += elapsed_ms(start);
            }
        }
        std::optional<std::size_t> es_index;
        for (std::size_t m = 0; m < cfg.methods.size(); ++m) {
            if (cfg.methods[m] == Method::es) es_index = m;
        }
        for (std::size_t m = 0; m < cfg.methods.size(); ++m) {
            const double nodes = sum_nodes[m] / cfg.n_trials;
            const double ms = sum_ms[m] / cfg.n_trials;
            char node_ratio[32] = "-";
            char speedup[32] = "-";
            if (es_index && *es_index != m) {
                std::snprintf(node_ratio, sizeof node_ratio, "%.4g",
                              nodes / (sum_nodes[*es_index] / cfg.n_trials));
                if (ms > 0.0) {
                    std::snprintf(speedup, sizeof speedup, "%.4g",
                                  (sum_ms[*es_index] / cfg.n_trials) / ms);
                }
            }
            std::printf("%-8s %6d %10g %8s %14.6g %14.6g %14s %14s\n",
                        scenario_name(cfg.scenario).c_str(), point.nt, point.rho_m_db,
                        method_name(cfg.methods[m]).c_str(), nodes, ms, node_ratio, speedup);
        }
    }
    return 0;
}

struct GenArgs {
    int rows = 4;
    int cols = 64;
    std::uint64_t seed = 1;
    std::string out_path;
    bool binary = false;
};

int cmd_gen(const GenArgs& args) {
    const ChannelMatrix h = generate_rayleigh(args.rows, args.cols, Seed{args.seed});
    const MatrixFileFormat format =
        args.binary ? MatrixFileFormat::binary : MatrixFileFormat::text;
    if (args.out_path.empty() || args.out_path == "-") {
        store_matrix(h, std::cout, format);
    } else {
        store_matrix_file(h, args.out_path, format);
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Optimal transmit antenna selection for MIMO wiretap channels"};
    app.require_subcommand(1);

    SelectArgs select_args;
    CLI::App* select = app.add_subcommand("select", "Select L antennas for one instance");
    select->add_option("--scenario", select_args.scenario, "ncsie or csie")
        ->check(CLI::IsMember({"ncsie", "csie"}));
    select->add_option("--hm", select_args.hm_path, "legitimate channel matrix file");
    select->add_option("--he", select_args.he_path, "eavesdropper channel matrix file");
    select->add_option("--nt", select_args.nt, "transmit antennas (generate instead of --hm)");
    select->add_option("--nr", select_args.nr, "legitimate receive antennas");
    select->add_option("--ne", select_args.ne, "eavesdropper antennas");
    select->add_option("-L,--subset-size", select_args.subset_size, "antennas to select")
        ->required();
    select->add_option("--rho-m-db", select_args.rho_m_db, "normalized legitimate SNR in dB")
        ->required();
    select->add_option("--rho-e-db", select_args.rho_e_db, "normalized eavesdropper SNR in dB");
    select->add_option("--seed", select_args.seed, "seed for generated channels");
    select->add_flag("--warm-start", select_args.warm_start,
                     "seed the search bound with the norm-based subset");

    SweepArgs sweep_args;
    CLI::App* sweep = app.add_subcommand("sweep", "Run a Monte Carlo sweep");
    auto add_sweep_options = [](CLI::App* cmd, SweepArgs& a) {
        cmd->add_option("--config", a.config_path, "sweep config JSON file");
        cmd->add_option("--scenario", a.scenario, "ncsie or csie")
            ->check(CLI::IsMember({"ncsie", "csie"}));
        cmd->add_option("--nt", a.nt, "transmit antenna grid");
        cmd->add_option("--nr", a.nr, "legitimate receive antennas");
        cmd->add_option("--ne", a.ne, "eavesdropper antennas");
        cmd->add_option("-L,--subset-size", a.subset_size, "antennas to select");
        cmd->add_option("--rho-m-db", a.rho_m_db, "legitimate SNR grid in dB");
        cmd->add_option("--rho-e-db", a.rho_e_db, "eavesdropper SNR grid in dB");
        cmd->add_option("--trials", a.trials, "Monte Carlo trials per grid point");
        cmd->add_option("--methods", a.methods, "subset of bab,norm,es")->delimiter(',');
        cmd->add_option("--seed", a.seed, "base seed");
        cmd->add_option("--es-cap", a.es_cap, "max exhaustive-search subsets");
        cmd->add_flag("--warm-start", a.warm_start, "warm-start the search bound");
    };
    add_sweep_options(sweep, sweep_args);
    sweep->add_option("--out", sweep_args.out_path, "output file ('-' for stdout)");
    sweep->add_option("--format", sweep_args.format, "csv or json")
        ->check(CLI::IsMember({"csv", "json"}));
    sweep->add_option("--kind", sweep_args.kind, "ergodic or complexity")
        ->check(CLI::IsMember({"ergodic", "complexity"}));
    sweep->add_flag("--emit-plot", sweep_args.emit_plot,
                    "write per-method x,y series next to --out");

    SweepArgs bench_args;
    CLI::App* bench = app.add_subcommand("bench", "Compare method complexity");
    add_sweep_options(bench, bench_args);

    GenArgs gen_args;
    CLI::App* gen = app.add_subcommand("gen", "Generate a channel matrix file");
    gen->add_option("--nr,--rows", gen_args.rows, "receive antennas (rows)");
    gen->add_option("--nt,--cols", gen_args.cols, "transmit antennas (columns)");
    gen->add_option("--seed", gen_args.seed, "seed")->required();
    gen->add_option("--out", gen_args.out_path, "output path ('-' for stdout)");
    gen->add_flag("--binary", gen_args.binary, "write the binary format");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (select->parsed()) return cmd_select(select_args);
        if (sweep->parsed()) return cmd_sweep(sweep_args);
        if (bench->parsed()) return cmd_bench(bench_args);
        if (gen->parsed()) return cmd_gen(gen_args);
    } catch (const BudgetError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 4;
    } catch (const NumericalError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
