#include <catch_amalgamated.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "commands.hpp"
#include "config_file.hpp"
#include "levy/density.hpp"
#include "levy/sweep.hpp"
#include "levy/tape_io.hpp"
#include "manifest.hpp"

namespace fs = std::filesystem;
using namespace levy::cli;
using Catch::Approx;

namespace {

struct Run {
    int code = 0;
    std::string out, err;
};

Run cli(std::vector<std::string> args) {
    args.insert(args.begin(), "levy-auction");
    std::ostringstream out, err;
    Run r;
    r.code = run_cli(args, out, err);
    r.out = out.str();
    r.err = err.str();
    return r;
}

fs::path scratch(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / ("levy_cli_test_" + name);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

RunManifest manifest_in(const fs::path& dir) { return manifest_from_json_text(slurp(dir / "manifest.json")); }

std::vector<std::string> lines(const std::string& text) {
    std::vector<std::string> v;
    std::stringstream ss(text);
    std::string l;
    while (std::getline(ss, l))
        if (!l.empty()) v.push_back(l);
    return v;
}

const std::vector<std::string> kSmall{"--n-traders", "20", "--max-events", "300", "--event-rate", "10"};

std::vector<std::string> simulate_args(const fs::path& dir, std::vector<std::string> extra = {}) {
    std::vector<std::string> a{"simulate", "--out", dir.string()};
    a.insert(a.end(), kSmall.begin(), kSmall.end());
    a.insert(a.end(), extra.begin(), extra.end());
    return a;
}

}  // namespace

TEST_CASE("simulate writes tape, report and manifest", "[cli]") {
    const auto dir = scratch("simulate");
    const Run r = cli(simulate_args(dir, {"--seed", "42", "--walk-log"}));
    REQUIRE(r.code == 0);
    CHECK(fs::exists(dir / "tape.csv"));
    CHECK(fs::exists(dir / "report.csv"));
    CHECK(fs::exists(dir / "walk.csv"));
    const auto m = manifest_in(dir);
    CHECK(m.status == "ok");
    CHECK(m.seeds == std::vector<std::uint64_t>{42});
    CHECK(m.config.at("seed") == "42");
    CHECK(m.outputs.size() == 3);
    CHECK(!m.start_time.empty());
    CHECK(m.end_time >= m.start_time);
    CHECK(m.command_line.find("--seed 42") != std::string::npos);

    std::ifstream tin(dir / "tape.csv");
    const auto tape = levy::read_tape_csv(tin);
    for (std::size_t i = 1; i < tape.size(); ++i) CHECK(tape[i].time >= tape[i - 1].time);
    const auto rep = lines(slurp(dir / "report.csv"));
    REQUIRE(rep.size() == 2);
    CHECK(rep[0].rfind("n_trades,", 0) == 0);
    CHECK(std::stoul(rep[1].substr(0, rep[1].find(','))) == tape.size());
}

TEST_CASE("same seed gives byte-identical tapes", "[cli]") {
    const auto a = scratch("seed_a"), b = scratch("seed_b"), c = scratch("seed_c");
    REQUIRE(cli(simulate_args(a, {"--seed", "42"})).code == 0);
    REQUIRE(cli(simulate_args(b, {"--seed", "42"})).code == 0);
    REQUIRE(cli(simulate_args(c, {"--seed", "43"})).code == 0);
    CHECK(slurp(a / "tape.csv") == slurp(b / "tape.csv"));
    CHECK(slurp(a / "report.csv") == slurp(b / "report.csv"));
    CHECK(slurp(a / "tape.csv") != slurp(c / "tape.csv"));
}

TEST_CASE("configuration errors exit 2 and name the key", "[cli][config]") {
    const auto dir = scratch("errors");
    const fs::path cfg = dir / "bad.cfg";
    std::ofstream(cfg) << "# comment\nfoo = 3\n";
    Run r = cli(simulate_args(dir, {"--config", cfg.string()}));
    CHECK(r.code == 2);
    CHECK(r.err.find("foo") != std::string::npos);

    r = cli(simulate_args(dir, {"--gamma", "-1"}));
    CHECK(r.code == 2);
    CHECK(r.err.find("gamma") != std::string::npos);

    r = cli(simulate_args(dir, {"--set", "noequals"}));
    CHECK(r.code == 2);
    r = cli(simulate_args(dir, {"--config", (dir / "missing.cfg").string()}));
    CHECK(r.code == 2);
    r = cli({"simulate", "--no-such-flag"});
    CHECK(r.code == 2);
    r = cli({"frobnicate"});
    CHECK(r.code == 2);
}

TEST_CASE("precedence: defaults, env seed, config file, --set, flags", "[cli][config]") {
    const auto dir = scratch("precedence");
    const fs::path cfg = dir / "run.cfg";
    std::ofstream(cfg) << "gamma = 1.2\nu0 = 7\nseed = 11\n";

    ::setenv("LEVY_AUCTION_SEED", "99", 1);
    REQUIRE(cli(simulate_args(dir)).code == 0);
    CHECK(manifest_in(dir).config.at("seed") == "99");

    REQUIRE(cli(simulate_args(dir, {"--config", cfg.string()})).code == 0);
    auto m = manifest_in(dir);
    CHECK(m.config.at("seed") == "11");
    CHECK(std::stod(m.config.at("gamma")) == 1.2);
    CHECK(m.config.at("u0") == "7");

    REQUIRE(cli(simulate_args(dir, {"--config", cfg.string(), "--set", "gamma=1.7", "--set", "seed=12"})).code == 0);
    m = manifest_in(dir);
    CHECK(std::stod(m.config.at("gamma")) == 1.7);
    CHECK(m.config.at("seed") == "12");

    REQUIRE(cli(simulate_args(dir, {"--config", cfg.string(), "--set", "gamma=1.7", "--gamma", "2.1"})).code == 0);
    m = manifest_in(dir);
    CHECK(std::stod(m.config.at("gamma")) == 2.1);
    CHECK(m.config.at("u0") == "7");
    ::unsetenv("LEVY_AUCTION_SEED");

    ::setenv("LEVY_AUCTION_SEED", "not-a-seed", 1);
    CHECK(cli(simulate_args(dir)).code == 2);
    ::unsetenv("LEVY_AUCTION_SEED");
}

TEST_CASE("manifest JSON round trip", "[cli][manifest]") {
    RunManifest m;
    m.command_line = "levy-auction simulate --seed 1";
    m.version = "0.1.0";
    m.config = {{"gamma", "1.5"}, {"seed", "1"}};
    m.seeds = {1, 18446744073709551615ull};
    m.start_time = utc_now();
    m.end_time = m.start_time;
    m.outputs = {"a/tape.csv", "a/report.csv"};
    m.status = "failed";
    m.error = "quote \"x\"";
    const auto back = manifest_from_json_text(to_json_text(m));
    CHECK(back.command_line == m.command_line);
    CHECK(back.config == m.config);
    CHECK(back.seeds == m.seeds);
    CHECK(back.outputs == m.outputs);
    CHECK(back.status == m.status);
    CHECK(back.error == m.error);
    CHECK(m.start_time.size() == 20);
    CHECK(m.start_time.back() == 'Z');
    CHECK_THROWS(manifest_from_json_text("{not json"));
}

TEST_CASE("sweep grids", "[cli][sweep]") {
    CHECK(levy::paper_grid().trial_count() == 3960);
    CHECK(levy::desk_grid().trial_count() == 240);

    const auto dir = scratch("sweep");
    Run r = cli({"sweep", "--out", dir.string()});
    CHECK(r.code == 2);
    r = cli({"sweep", "--paper-grid", "--desk-scale", "--out", dir.string()});
    CHECK(r.code == 2);

    r = cli({"sweep", "--rates", "5,20", "--gammas", "1.5", "--biases", "none,quantity", "--trials", "2",
             "--jobs", "2", "--n-traders", "20", "--max-events", "200", "--seed", "5", "--out", dir.string()});
    REQUIRE(r.code == 0);
    CHECK(lines(slurp(dir / "trials.csv")).size() == 1 + 2 * 2 * 2);
    CHECK(lines(slurp(dir / "cells.csv")).size() == 1 + 4);
    auto m = manifest_in(dir);
    CHECK(m.seeds.size() == 8);
    CHECK(m.config.at("rates") == "5,20");
    CHECK(m.outputs.size() == 2);

    // grid keys from a config file
    const fs::path cfg = dir / "grid.cfg";
    std::ofstream(cfg) << "rates = 3\ngammas = 1.5:2.5:2\ntrials = 1\nn_traders = 20\nmax_events = 100\n";
    const auto dir2 = scratch("sweep_cfg");
    REQUIRE(cli({"sweep", "--config", cfg.string(), "--out", dir2.string()}).code == 0);
    CHECK(lines(slurp(dir2 / "trials.csv")).size() == 1 + 2);
}

TEST_CASE("desk-scale sweep writes 240 trials", "[cli][sweep][slow]") {
    const auto dir = scratch("desk");
    REQUIRE(cli({"sweep", "--desk-scale", "--out", dir.string()}).code == 0);
    CHECK(lines(slurp(dir / "trials.csv")).size() == 241);
    CHECK(manifest_in(dir).seeds.size() == 240);
}

TEST_CASE("analytics commands", "[cli][analytics]") {
    Run r = cli({"analytics", "cauchy", "--u0", "1", "--x", "0", "--t", "1"});
    REQUIRE(r.code == 0);
    auto l = lines(r.out);
    REQUIRE(l.size() == 2);
    CHECK(l[0] == "x,t,value");
    CHECK(std::stod(l[1].substr(l[1].rfind(',') + 1)) == Approx(0.318309886).margin(1e-9));

    r = cli({"analytics", "scaling", "--y", "0", "--gamma", "0.5"});
    REQUIRE(r.code == 0);
    l = lines(r.out);
    REQUIRE(l.size() == 2);
    const double phi = std::stod(l[1].substr(l[1].find(',') + 1));
    CHECK(phi == Approx(0.318309886).margin(1e-3));

    r = cli({"analytics", "propagator", "--form", "cauchy", "--k", "0,1", "--s", "2", "--u0", "0.5"});
    REQUIRE(r.code == 0);
    l = lines(r.out);
    REQUIRE(l.size() == 3);
    CHECK(l[2].rfind("1,2,0,0.4,0", 0) == 0);

    r = cli({"analytics", "density", "--scenario", "interauction"});
    REQUIRE(r.code == 0);
    l = lines(r.out);
    REQUIRE(l.size() >= 2);
    CHECK(l[1].find("0.39894228") != std::string::npos);

    r = cli({"analytics", "propagator", "--form", "sideways"});
    CHECK(r.code == 2);
    r = cli({"analytics", "cauchy", "--x", "1:0"});
    CHECK(r.code == 2);
}

TEST_CASE("surface output is monotone", "[cli][analytics]") {
    const auto dir = scratch("surface");
    const fs::path file = dir / "surface.csv";
    REQUIRE(cli({"analytics", "surface", "--zoom", "--out", file.string()}).code == 0);
    const auto l = lines(slurp(file));
    REQUIRE(l.size() == 51);
    CHECK(l[0].rfind("tau\\B,", 0) == 0);
    std::vector<std::vector<double>> rows;
    for (std::size_t i = 1; i < l.size(); ++i) {
        std::vector<double> row;
        std::stringstream ss(l[i]);
        std::string cell;
        std::getline(ss, cell, ',');
        while (std::getline(ss, cell, ',')) row.push_back(std::stod(cell));
        REQUIRE(row.size() == 21);
        for (std::size_t j = 1; j < row.size(); ++j) CHECK(row[j] < row[j - 1]);
        if (!rows.empty())
            for (std::size_t j = 0; j < row.size(); ++j) CHECK(row[j] > rows.back()[j]);
        rows.push_back(row);
    }
}

TEST_CASE("msd from synthetic walkers and from a walk log", "[cli][analytics]") {
    Run r = cli({"analytics", "msd", "--synthetic", "--gamma", "1.5", "--walkers", "2000", "--seed", "3"});
    REQUIRE(r.code == 0);
    auto l = lines(r.out);
    REQUIRE(l.size() == 2);
    CHECK(l[0].rfind("alpha,std_error", 0) == 0);
    const double alpha = std::stod(l[1].substr(0, l[1].find(',')));
    CHECK(alpha == Approx(1.5).margin(0.3));

    const auto dir = scratch("msd");
    REQUIRE(cli(simulate_args(dir, {"--seed", "8", "--walk-log"})).code == 0);
    r = cli({"analytics", "msd", "--walk-log", (dir / "walk.csv").string()});
    CHECK(r.code == 0);
    CHECK(lines(r.out).size() == 2);
    CHECK(cli({"analytics", "msd"}).code == 2);
}

TEST_CASE("help and version", "[cli]") {
    CHECK(cli({"--help"}).code == 0);
    CHECK(cli({"simulate", "--help"}).code == 0);
    CHECK(cli({"--version"}).code == 0);
}

TEST_CASE("grid parsing", "[cli][config]") {
    CHECK(parse_grid("x", "1,2.5,-3") == std::vector<double>{1.0, 2.5, -3.0});
    const auto g = parse_grid("x", "0:1:5");
    REQUIRE(g.size() == 5);
    CHECK(g[1] == Approx(0.25));
    CHECK(g.back() == 1.0);
    CHECK_THROWS(parse_grid("x", "0:1"));
    CHECK_THROWS(parse_grid("x", "a,b"));
    CHECK_THROWS(parse_grid("x", ""));
}

TEST_CASE("config file parsing", "[cli][config]") {
    const auto s = parse_config_text("# header\n\n gamma = 1.5 # trailing\nseed=3\ngamma=2\n");
    REQUIRE(s.size() == 3);
    CHECK(s[0] == Setting{"gamma", "1.5"});
    CHECK(s[2] == Setting{"gamma", "2"});
    CHECK_THROWS_AS(parse_config_text("just words\n"), levy::ConfigError);
    CHECK_THROWS_AS(parse_config_text("=3\n"), levy::ConfigError);
    CHECK(parse_assignment("u0=2") == Setting{"u0", "2"});
    CHECK(parse_seed("seed", "18446744073709551615") == 18446744073709551615ull);
    CHECK_THROWS_AS(parse_seed("seed", "-1"), levy::ConfigError);
    CHECK_THROWS_AS(parse_seed("seed", "12x"), levy::ConfigError);
    CHECK(parse_bias_list("biases", "none,quantity").size() == 2);
    CHECK_THROWS(parse_bias_list("biases", "none,price"));
    CHECK(is_sweep_key("rates"));
    CHECK_FALSE(is_sweep_key("gamma"));
    SweepSettings ss;
    apply_sweep_setting(ss, "trials", "4");
    CHECK(ss.trials == 4);
    CHECK_THROWS(apply_sweep_setting(ss, "trials", "four"));
}
