#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace levy::cli {

struct RunManifest {
    std::string command_line;
    std::string version;
    std::map<std::string, std::string> config;
    std::vector<std::uint64_t> seeds;
    std::string start_time;  // UTC, ISO 8601
    std::string end_time;
    std::vector<std::string> outputs;
    std::string status = "running";
    std::string error;
};

std::string utc_now();
std::string to_json_text(const RunManifest& m);
RunManifest manifest_from_json_text(const std::string& text);
void write_manifest(const std::string& path, const RunManifest& m);

}  // namespace levy::cli
