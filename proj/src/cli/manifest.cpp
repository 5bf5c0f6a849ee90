#include "manifest.hpp"

#include <chrono>
#include <ctime>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

namespace levy::cli {

std::string utc_now() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

std::string to_json_text(const RunManifest& m) {
    nlohmann::ordered_json j;
    j["command_line"] = m.command_line;
    j["version"] = m.version;
    j["config"] = m.config;
    j["seeds"] = m.seeds;
    j["start_time"] = m.start_time;
    j["end_time"] = m.end_time;
    j["outputs"] = m.outputs;
    j["status"] = m.status;
    j["error"] = m.error.empty() ? nlohmann::ordered_json(nullptr) : nlohmann::ordered_json(m.error);
    return j.dump(2) + "\n";
}

RunManifest manifest_from_json_text(const std::string& text) {
    const auto j = nlohmann::json::parse(text);
    RunManifest m;
    m.command_line = j.at("command_line").get<std::string>();
    m.version = j.at("version").get<std::string>();
    m.config = j.at("config").get<std::map<std::string, std::string>>();
    m.seeds = j.at("seeds").get<std::vector<std::uint64_t>>();
    m.start_time = j.at("start_time").get<std::string>();
    m.end_time = j.at("end_time").get<std::string>();
    m.outputs = j.at("outputs").get<std::vector<std::string>>();
    m.status = j.at("status").get<std::string>();
    if (!j.at("error").is_null()) m.error = j.at("error").get<std::string>();
    return m;
}

void write_manifest(const std::string& path, const RunManifest& m) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write manifest '" + path + "'");
    out << to_json_text(m);
}

}  // namespace levy::cli
