#include <catch_amalgamated.hpp>

#include <cmath>

#include "fd_solver.hpp"
#include "levy/density.hpp"
#include "stats.hpp"

using Catch::Approx;

// reference values computed with scipy.stats
TEST_CASE("rank statistics match the reference implementation", "[support][stats]") {
    const std::vector<double> a{3.1, 4.7, 5.2, 6.0, 2.2, 7.4, 5.9, 6.6, 4.1, 5.5};
    const std::vector<double> b{2.0, 3.3, 1.9, 4.4, 2.8, 3.9, 1.2, 2.5, 3.0, 4.9};
    CHECK(oracle::mann_whitney_greater(a, b) == Approx(0.0025980211738725672).epsilon(1e-10));

    const std::vector<double> c{1, 2, 2, 3, 4, 4, 4, 5};
    const std::vector<double> d{2, 3, 3, 4, 5, 5, 6, 7};
    CHECK(oracle::mann_whitney_greater(c, d) == Approx(0.9324998872721837).epsilon(1e-10));

    CHECK(oracle::spearman({1, 2, 3, 4, 5, 6}, {2, 1, 4, 3, 6, 5}) == Approx(0.8285714285714287).epsilon(1e-12));
    CHECK(oracle::spearman({1, 2, 2, 3, 5}, {5, 6, 7, 7, 1}) == Approx(-0.13157894736842107).epsilon(1e-12));
    CHECK(oracle::ranks({10, 20, 20, 5}) == std::vector<double>{2.0, 3.5, 3.5, 1.0});
    CHECK(oracle::mann_whitney_u(a, b) == Approx(86.0));
}

TEST_CASE("moments", "[support][stats]") {
    const std::vector<double> v{1.0, 2.0, 4.0, 7.0};
    CHECK(oracle::mean(v) == 3.5);
    CHECK(oracle::sample_sd(v) == Approx(std::sqrt(7.0)));
    CHECK(oracle::pearson({1, 2, 3}, {2, 4, 6}) == Approx(1.0));
}

TEST_CASE("finite-difference solver reproduces the heat kernel", "[support][fd]") {
    levy::ScenarioParams p;
    p.D = 0.5;
    const double t0 = 0.5;
    auto start = [&](double x) { return levy::heat_kernel(x, 0.5 * t0); };
    auto fd = oracle::solve_fd(p, start, nullptr, {1.0}, {-10.0, 10.0, 401});
    double worst = 0.0;
    for (std::size_t i = 0; i < fd.x.size(); ++i)
        worst = std::max(worst, std::abs(fd.g[0][i] - levy::heat_kernel(fd.x[i], 0.5 * (t0 + 1.0))));
    CHECK(worst / levy::heat_kernel(0.0, 0.75) < 2e-3);
}
