#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <queue>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace levy::quad {

struct Tolerance {
    double abs = 1e-9;
    double rel = 1e-7;
    int max_intervals = 4000;
};

class QuadratureError : public std::runtime_error {
public:
    QuadratureError(const std::string& what, double achieved, double requested)
        : std::runtime_error(what + ": achieved error " + std::to_string(achieved) +
                             ", requested " + std::to_string(requested)),
          achieved_(achieved), requested_(requested) {}
    double achieved() const { return achieved_; }
    double requested() const { return requested_; }

private:
    double achieved_;
    double requested_;
};

template <class T>
struct Result {
    T value{};
    double error = 0.0;
    int evaluations = 0;
    bool converged = false;
};

namespace detail {

template <class T>
double magnitude(const T& v) { return std::abs(v); }

template <class T>
struct Panel {
    double a, b;
    T value;
    double error;
    bool operator<(const Panel& o) const { return error < o.error; }
};

// 15-point Kronrod rule with embedded 7-point Gauss rule on [a, b].
template <class T, class F>
Panel<T> kronrod15(F& f, double a, double b) {
    using GK = boost::math::quadrature::gauss_kronrod<double, 15>;
    using G = boost::math::quadrature::gauss<double, 7>;
    const auto& x = GK::abscissa();
    const auto& wk = GK::weights();
    const auto& wg = G::weights();
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);

    T centre = f(mid);
    T kronrod = centre * wk[0];
    T gauss = centre * wg[0];
    for (std::size_t i = 1; i < x.size(); ++i) {
        T fp = f(mid + half * x[i]);
        T fm = f(mid - half * x[i]);
        kronrod += (fp + fm) * wk[i];
        if (i % 2 == 0) gauss += (fp + fm) * wg[i / 2];
    }
    kronrod *= half;
    gauss *= half;
    double err = magnitude(kronrod - gauss);
    err = std::max(err, 50.0 * std::numeric_limits<double>::epsilon() * magnitude(kronrod));
    return {a, b, kronrod, err};
}

}  // namespace detail

// Globally adaptive Gauss-Kronrod on [a, b]; interior breakpoints seed the initial panels.
template <class T = double, class F>
Result<T> integrate(F&& f, double a, double b, const Tolerance& tol = {},
                    const std::vector<double>& breakpoints = {}) {
    Result<T> out;
    if (a == b) {
        out.converged = true;
        return out;
    }
    double sign = 1.0;
    if (b < a) {
        std::swap(a, b);
        sign = -1.0;
    }
    std::vector<double> cuts{a};
    for (double p : breakpoints)
        if (p > a && p < b) cuts.push_back(p);
    cuts.push_back(b);
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

    std::priority_queue<detail::Panel<T>> heap;
    T total{};
    double total_err = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        auto p = detail::kronrod15<T>(f, cuts[i], cuts[i + 1]);
        total += p.value;
        total_err += p.error;
        heap.push(p);
    }
    out.evaluations = 15 * static_cast<int>(heap.size());

    auto target = [&] { return std::max(tol.abs, tol.rel * detail::magnitude(total)); };
    while (total_err > target() && static_cast<int>(heap.size()) < tol.max_intervals) {
        auto worst = heap.top();
        const double mid = 0.5 * (worst.a + worst.b);
        if (!(mid > worst.a && mid < worst.b)) break;  // panel at floating-point resolution
        heap.pop();
        auto left = detail::kronrod15<T>(f, worst.a, mid);
        auto right = detail::kronrod15<T>(f, mid, worst.b);
        out.evaluations += 30;
        total += left.value + right.value - worst.value;
        total_err += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
    }
    // recompute to shed accumulated cancellation in the running sums
    total = T{};
    total_err = 0.0;
    auto panels = heap;
    while (!panels.empty()) {
        total += panels.top().value;
        total_err += panels.top().error;
        panels.pop();
    }
    out.value = total * sign;
    out.error = total_err;
    out.converged = total_err <= target();
    return out;
}

// Like integrate() but throws QuadratureError when tolerance is not met.
template <class T = double, class F>
T integrate_or_throw(F&& f, double a, double b, const Tolerance& tol = {},
                     const std::vector<double>& breakpoints = {}, const char* what = "quadrature") {
    auto r = integrate<T>(f, a, b, tol, breakpoints);
    if (!r.converged)
        throw QuadratureError(what, r.error, std::max(tol.abs, tol.rel * detail::magnitude(r.value)));
    return r.value;
}

// Integral over [0, inf) with x = t / (1 - t).
template <class T = double, class F>
Result<T> integrate_half_line(F&& f, const Tolerance& tol = {}) {
    auto g = [&](double t) -> T {
        const double s = 1.0 - t;
        if (s <= 0.0) return T{};  // nodes rounded onto the far end
        return f(t / s) * (1.0 / (s * s));
    };
    return integrate<T>(g, 0.0, 1.0, tol);
}

// Average of g over a Cauchy(0, u0) law. Core via v = u0 tan(theta); if g grows like
// |v|^p (0 <= p < 1) the tails use v = V w^{-1/(1-p)}, which keeps the integrand bounded.
template <class T = double, class F>
Result<T> cauchy_average(F&& g, double u0, const Tolerance& tol = {}, double growth = 0.0,
                         const std::vector<double>& breakpoints = {}) {
    constexpr double pi = std::numbers::pi;
    if (growth <= 0.0) {
        auto h = [&](double theta) -> T { return g(u0 * std::tan(theta)) * (1.0 / pi); };
        std::vector<double> thetas;
        for (double v : breakpoints) thetas.push_back(std::atan(v / u0));
        const double edge = 0.5 * pi;
        return integrate<T>(h, -edge, edge, tol, thetas);
    }
    if (growth >= 1.0) throw std::invalid_argument("cauchy_average: growth exponent must be < 1");

    double reach = 0.0;
    for (double v : breakpoints) reach = std::max(reach, std::abs(v));
    const double cut = std::max(10.0 * u0, 2.0 * reach + u0);
    const double theta_cut = std::atan(cut / u0);

    auto core = [&](double theta) -> T { return g(u0 * std::tan(theta)) * (1.0 / pi); };
    std::vector<double> thetas;
    for (double v : breakpoints) thetas.push_back(std::atan(v / u0));
    Tolerance part = tol;
    part.abs = tol.abs / 3.0;
    auto mid = integrate<T>(core, -theta_cut, theta_cut, part, thetas);

    const double kappa = 1.0 - growth;
    const double alpha = 1.0 / kappa;
    auto density = [&](double v) { return u0 / (pi * (u0 * u0 + v * v)); };
    // v = cut * w^{-alpha}, dv = alpha * cut * w^{-alpha-1} dw
    auto upper = [&](double w) -> T {
        const double v = cut * std::pow(w, -alpha);
        if (!std::isfinite(v)) return T{};
        return g(v) * (density(v) * alpha * v / w);
    };
    auto lower = [&](double w) -> T {
        const double v = cut * std::pow(w, -alpha);
        if (!std::isfinite(v)) return T{};
        return g(-v) * (density(v) * alpha * v / w);
    };
    auto hi = integrate<T>(upper, 0.0, 1.0, part);
    auto lo = integrate<T>(lower, 0.0, 1.0, part);

    Result<T> out;
    out.value = mid.value + hi.value + lo.value;
    out.error = mid.error + hi.error + lo.error;
    out.evaluations = mid.evaluations + hi.evaluations + lo.evaluations;
    out.converged = out.error <= std::max(tol.abs, tol.rel * detail::magnitude(out.value));
    return out;
}

// Adaptive Simpson with Richardson correction.
template <class F>
double simpson(F&& f, double a, double b, double tol = 1e-9, int max_depth = 40) {
    if (a == b) return 0.0;
    struct Rec {
        static double step(F& f, double a, double b, double fa, double fm, double fb, double whole,
                           double tol, int depth) {
            const double m = 0.5 * (a + b);
            const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
            const double flm = f(lm), frm = f(rm);
            const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
            const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
            const double delta = left + right - whole;
            if (depth <= 0 || std::abs(delta) <= 15.0 * tol)
                return left + right + delta / 15.0;
            return step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
                   step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
        }
    };
    // split once up front so a symmetric integrand cannot fool the first comparison
    const double m = 0.5 * (a + b);
    const double fa = f(a), fm = f(m), fb = f(b);
    const double flm = f(0.5 * (a + m)), frm = f(0.5 * (m + b));
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    return Rec::step(f, a, m, fa, flm, fm, left, 0.5 * tol, max_depth) +
           Rec::step(f, m, b, fm, frm, fb, right, 0.5 * tol, max_depth);
}

}  // namespace levy::quad
