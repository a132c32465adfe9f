#pragma once

#include <istream>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "mimome/errors.hpp"
#include "mimome/experiments.hpp"

namespace mimome {

// Parses the JSON record format emitted by write_records.
inline std::vector<SweepRecord> read_records_json(std::istream& in) {
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::exception& e) {
        throw FormatError(std::string("read_records_json: ") + e.what());
    }
    if (!doc.is_array()) throw FormatError("read_records_json: expected a JSON array");
    std::vector<SweepRecord> records;
    records.reserve(doc.size());
    for (const auto& item : doc) {
        try {
            SweepRecord r;
            r.scenario = scenario_from_name(item.at("scenario").get<std::string>());
            r.method = method_from_name(item.at("method").get<std::string>());
            r.nt = item.at("Nt").get<int>();
            r.nr = item.at("Nr").get<int>();
            r.ne = item.at("Ne").get<int>();
            r.subset_size = item.at("L").get<int>();
            r.n_trials = item.at("n_trials").get<int>();
            r.rho_m_db = item.at("rho_m_db").get<double>();
            r.rho_e_db = item.at("rho_e_db").get<double>();
            r.mean_secrecy_bits = item.at("mean_cs_bits").get<double>();
            r.mean_nodes = item.at("mean_nodes").get<double>();
            records.push_back(r);
        } catch (const nlohmann::json::exception& e) {
            throw FormatError(std::string("read_records_json: bad record: ") + e.what());
        }
    }
    return records;
}

inline std::vector<SweepRecord> read_records_json_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FormatError("read_records_json: cannot open '" + path + "'");
    return read_records_json(in);
}

}  // namespace mimome
