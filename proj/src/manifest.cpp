#include "nowcast/manifest.hpp"

#include <fstream>

#include <json.hpp>

#include "nowcast/errors.hpp"

namespace nowcast {

void write_manifest(const RunManifest& m, const std::string& path) {
    nlohmann::ordered_json j;
    j["command"] = m.command;
    j["config"] = m.config;  // std::map keeps keys sorted
    j["seed"] = m.seed;
    j["tool_version"] = m.tool_version;
    j["output_paths"] = m.output_paths;
    std::ofstream out(path);
    if (!out) throw FormatError("cannot write '" + path + "'");
    out << j.dump(2) << '\n';
}

RunManifest read_manifest(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw FormatError("cannot open '" + path + "'");
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw FormatError(path + ": " + e.what());
    }
    RunManifest m;
    try {
        m.command = j.at("command").get<std::string>();
        m.config = j.at("config").get<std::map<std::string, std::string>>();
        m.seed = j.at("seed").get<std::uint64_t>();
        m.tool_version = j.at("tool_version").get<std::string>();
        m.output_paths = j.at("output_paths").get<std::vector<std::string>>();
    } catch (const nlohmann::json::exception& e) {
        throw FormatError(path + ": " + e.what());
    }
    return m;
}

} // namespace nowcast
