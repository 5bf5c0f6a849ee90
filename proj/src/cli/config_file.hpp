#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "levy/simulation.hpp"
#include "levy/sweep.hpp"

namespace levy::cli {

using Setting = std::pair<std::string, std::string>;

// Flat key=value text; '#' starts a comment, blank lines are skipped. Later keys win.
std::vector<Setting> parse_config_text(const std::string& text, const std::string& origin = "config");
std::vector<Setting> read_config_file(const std::string& path);
// "key=value" from the command line.
Setting parse_assignment(const std::string& text);

// Grid keys a sweep config may carry on top of the trial keys.
struct SweepSettings {
    std::optional<std::vector<double>> rates;
    std::optional<std::vector<double>> gammas;
    std::optional<std::vector<Bias>> biases;
    std::optional<int> trials;
    std::optional<int> jobs;
};

bool is_sweep_key(const std::string& key);
void apply_sweep_setting(SweepSettings& s, const std::string& key, const std::string& value);

std::vector<double> parse_number_list(const std::string& key, const std::string& text);
// "a,b,c" or a linear range "lo:hi:n".
std::vector<double> parse_grid(const std::string& key, const std::string& text);
std::vector<Bias> parse_bias_list(const std::string& key, const std::string& text);
std::uint64_t parse_seed(const std::string& key, const std::string& text);

}  // namespace levy::cli
