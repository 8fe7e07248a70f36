#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace nowcast {

inline constexpr const char* kToolVersion = "0.1.0";

/// Written alongside every command's outputs. The resolved config map plus
/// the seed is sufficient to reproduce the outputs byte for byte; output
/// paths are stored relative to the manifest's directory.
struct RunManifest {
    std::string command;
    std::map<std::string, std::string> config;
    std::uint64_t seed = 0;
    std::string tool_version = kToolVersion;
    std::vector<std::string> output_paths;
};

void write_manifest(const RunManifest& m, const std::string& path);
RunManifest read_manifest(const std::string& path);

} // namespace nowcast
