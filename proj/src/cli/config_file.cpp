#include "config_file.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace levy::cli {

namespace {

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return {};
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

std::vector<std::string> split_commas(const std::string& text) {
    std::vector<std::string> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

int parse_int(const std::string& key, const std::string& text) {
    int v = 0;
    const auto* end = text.data() + text.size();
    auto [p, ec] = std::from_chars(text.data(), end, v);
    if (ec != std::errc() || p != end) throw ConfigError(key, "expected an integer, got '" + text + "'");
    return v;
}

}  // namespace

std::vector<Setting> parse_config_text(const std::string& text, const std::string& origin) {
    std::vector<Setting> out;
    std::stringstream ss(text);
    std::string line;
    int lineno = 0;
    while (std::getline(ss, line)) {
        ++lineno;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("", origin + ":" + std::to_string(lineno) + ": expected key=value");
        std::string key = trim(line.substr(0, eq));
        if (key.empty()) throw ConfigError("", origin + ":" + std::to_string(lineno) + ": empty key");
        out.emplace_back(std::move(key), trim(line.substr(eq + 1)));
    }
    return out;
}

std::vector<Setting> read_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("", "cannot read config file '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str(), path);
}

Setting parse_assignment(const std::string& text) {
    const auto eq = text.find('=');
    if (eq == std::string::npos || eq == 0) throw ConfigError("", "expected key=value, got '" + text + "'");
    return {trim(text.substr(0, eq)), trim(text.substr(eq + 1))};
}

bool is_sweep_key(const std::string& key) {
    return key == "rates" || key == "gammas" || key == "biases" || key == "trials" || key == "jobs";
}

std::vector<double> parse_number_list(const std::string& key, const std::string& text) {
    std::vector<double> out;
    for (const auto& item : split_commas(text)) {
        double v = 0.0;
        const auto* end = item.data() + item.size();
        auto [p, ec] = std::from_chars(item.data(), end, v);
        if (ec != std::errc() || p != end || !std::isfinite(v))
            throw ConfigError(key, "expected a number, got '" + item + "'");
        out.push_back(v);
    }
    return out;
}

std::vector<double> parse_grid(const std::string& key, const std::string& text) {
    if (std::count(text.begin(), text.end(), ':') == 2) {
        const auto a = text.find(':');
        const auto b = text.find(':', a + 1);
        const double lo = parse_number_list(key, text.substr(0, a)).at(0);
        const double hi = parse_number_list(key, text.substr(a + 1, b - a - 1)).at(0);
        const auto n = parse_number_list(key, text.substr(b + 1));
        if (n.size() != 1 || n[0] < 1 || n[0] != std::floor(n[0]))
            throw ConfigError(key, "range count must be a positive integer");
        const int count = static_cast<int>(n[0]);
        std::vector<double> out(count);
        for (int i = 0; i < count; ++i) out[i] = count == 1 ? lo : lo + (hi - lo) * i / (count - 1);
        return out;
    }
    auto v = parse_number_list(key, text);
    if (v.empty()) throw ConfigError(key, "empty grid");
    return v;
}

std::vector<Bias> parse_bias_list(const std::string& key, const std::string& text) {
    std::vector<Bias> out;
    for (const auto& item : split_commas(text)) {
        try {
            out.push_back(parse_bias(item));
        } catch (const ConfigError& e) {
            throw ConfigError(key, e.what());
        }
    }
    return out;
}

std::uint64_t parse_seed(const std::string& key, const std::string& text) {
    std::uint64_t v = 0;
    const auto* end = text.data() + text.size();
    auto [p, ec] = std::from_chars(text.data(), end, v);
    if (ec != std::errc() || p != end) throw ConfigError(key, "expected an unsigned integer, got '" + text + "'");
    return v;
}

void apply_sweep_setting(SweepSettings& s, const std::string& key, const std::string& value) {
    if (key == "rates") s.rates = parse_grid(key, value);
    else if (key == "gammas") s.gammas = parse_grid(key, value);
    else if (key == "biases") s.biases = parse_bias_list(key, value);
    else if (key == "trials") s.trials = parse_int(key, value);
    else if (key == "jobs") s.jobs = parse_int(key, value);
    else throw ConfigError(key, "unknown sweep key");
}

}  // namespace levy::cli
