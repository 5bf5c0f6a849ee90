#include "levy/search.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace levy {

namespace {

constexpr double kPi = std::numbers::pi;

void require_converged(const quad::Result<cplx>& r, const quad::Tolerance& tol, const char* what) {
    if (!r.converged)
        throw quad::QuadratureError(what, r.error, std::max(tol.abs, tol.rel * std::abs(r.value)));
}

quad::Tolerance split(const quad::Tolerance& tol, double parts) {
    quad::Tolerance t = tol;
    t.abs = tol.abs / parts;
    return t;
}

// feature scales of f^(s + ikv) along v
std::vector<double> velocity_breaks(double u0, double k, cplx s) {
    std::vector<double> b{-u0, u0};
    if (k != 0.0) {
        const double w = std::abs(s) / std::abs(k);
        b.push_back(-w);
        b.push_back(w);
    }
    return b;
}

}  // namespace

void SearchModel::validate() const {
    if (!(velocity.u0 > 0.0)) throw std::invalid_argument("u0 must be > 0");
    if (!(flight.gamma > 0.0)) throw std::invalid_argument("gamma must be > 0");
    if (!(eta > 0.0)) throw std::invalid_argument("eta must be > 0");
}

cplx flight_laplace(const FlightTimeDist& flight, cplx z, const quad::Tolerance& tol) {
    if (!(z.real() > 0.0)) throw std::domain_error("flight_laplace: Re(z) must be > 0");
    const double g = flight.gamma;
    const double rho = std::abs(z);
    const double theta = std::arg(z);
    const cplx ray = std::polar(1.0, -theta);
    // rotate the path onto tau = r e^{-i theta} so that z tau = rho r is real
    auto integrand = [&](double r) -> cplx {
        return std::exp(-rho * r) * g * std::pow(1.0 + r * ray, -1.0 - g);
    };
    auto head = quad::integrate<cplx>(integrand, 0.0, 1.0, split(tol, 2.0));
    require_converged(head, tol, "flight_laplace");
    const double r_max = std::max(2.0, 45.0 / rho);
    auto logged = [&](double y) -> cplx {
        const double r = std::exp(y);
        return integrand(r) * r;
    };
    auto tail = quad::integrate<cplx>(logged, 0.0, std::log(r_max), split(tol, 2.0));
    require_converged(tail, tol, "flight_laplace");
    return ray * (head.value + tail.value);
}

cplx survival_laplace(const FlightTimeDist& flight, cplx z, const quad::Tolerance& tol) {
    return (1.0 - flight_laplace(flight, z, tol)) / z;
}

cplx flight_velocity_average(const SearchModel& model, double k, cplx s, const quad::Tolerance& tol) {
    model.validate();
    if (k == 0.0) return flight_laplace(model.flight, s, tol);
    auto g = [&](double v) { return flight_laplace(model.flight, s + cplx(0.0, k * v), tol); };
    auto r = quad::cauchy_average<cplx>(g, model.velocity.u0, tol, 0.0,
                                        velocity_breaks(model.velocity.u0, k, s));
    require_converged(r, tol, "flight_velocity_average");
    return r.value;
}

cplx propagator_fl(const SearchModel& model, double k, cplx s, const quad::Tolerance& tol) {
    model.validate();
    if (!(s.real() > 0.0)) throw std::domain_error("propagator_fl: Re(s) must be > 0");
    const cplx psi = flight_velocity_average(model, k, s, tol);
    cplx phi;
    if (k == 0.0) {
        phi = survival_laplace(model.flight, s, tol);
    } else {
        auto g = [&](double v) { return survival_laplace(model.flight, s + cplx(0.0, k * v), tol); };
        auto r = quad::cauchy_average<cplx>(g, model.velocity.u0, tol, 0.0,
                                            velocity_breaks(model.velocity.u0, k, s));
        require_converged(r, tol, "propagator_fl");
        phi = r.value;
    }
    return phi / (1.0 - psi);
}

cplx renewal_density_fl(const SearchModel& model, double k, cplx s, const quad::Tolerance& tol) {
    if (!(s.real() > 0.0)) throw std::domain_error("renewal_density_fl: Re(s) must be > 0");
    const cplx psi = flight_velocity_average(model, k, s, tol);
    return psi / (1.0 - psi);
}

cplx cauchy_propagator_fl(double u0, double k, cplx s) {
    if (!(u0 > 0.0)) throw std::invalid_argument("u0 must be > 0");
    return 1.0 / (s + u0 * std::abs(k));
}

cplx velocity_power_moment(const SearchModel& model, double k, cplx s, double p,
                           const quad::Tolerance& tol) {
    model.validate();
    if (!(s.real() > 0.0)) throw std::domain_error("velocity_power_moment: Re(s) must be > 0");
    if (k == 0.0 || p == 0.0) return 1.0;
    const double u0 = model.velocity.u0;
    if (p >= 1.0) return std::pow(1.0 + u0 * std::abs(k) / s, p);
    // with Re(s) > 0 the line 1 + ikv/s meets the real axis only at v = 0, so the principal
    // branch never jumps along the path
    const cplx c = cplx(0.0, k) / s;
    auto g = [&](double v) { return std::pow(1.0 + c * v, p); };
    auto r = quad::cauchy_average<cplx>(g, u0, tol, std::max(p, 0.0), velocity_breaks(u0, k, s));
    require_converged(r, tol, "velocity_power_moment");
    return r.value;
}

cplx asymptotic_propagator(const SearchModel& model, double k, cplx s, const quad::Tolerance& tol) {
    const double g = model.flight.gamma;
    if (std::abs(g - 1.0) < 1e-9 || std::abs(g - 2.0) < 1e-9)
        throw std::domain_error("asymptotic_propagator: expansion invalid at gamma = 1 or 2");
    if (k == 0.0) return 1.0 / s;
    const cplx num = velocity_power_moment(model, k, s, g - 1.0, tol);
    const cplx den = velocity_power_moment(model, k, s, g, tol);
    return num / (den * s);
}

double ballistic_scaling_at(const SearchModel& model, double y, double eps, const quad::Tolerance& tol) {
    model.validate();
    const double g = model.flight.gamma;
    if (!(g > 0.0 && g < 1.0))
        throw std::domain_error("ballistic_scaling_function: gamma must lie in (0, 1)");
    if (!(eps > 0.0)) throw std::domain_error("ballistic_scaling_function: eps must be > 0");
    const cplx z(y, eps);
    const double u0 = model.velocity.u0;
    const std::vector<double> breaks{y - 10.0 * eps, y, y + 10.0 * eps};
    auto lower = [&](double v) { return std::pow(z - v, g - 1.0); };
    auto upper = [&](double v) { return std::pow(z - v, g); };
    auto a = quad::cauchy_average<cplx>(lower, u0, tol, 0.0, breaks);
    require_converged(a, tol, "ballistic_scaling_function");
    auto b = quad::cauchy_average<cplx>(upper, u0, tol, g, breaks);
    require_converged(b, tol, "ballistic_scaling_function");
    return -std::imag(a.value / b.value) / kPi;
}

ScalingValue ballistic_scaling_function(const SearchModel& model, double y, const quad::Tolerance& tol) {
    ScalingValue out;
    for (std::size_t i = 0; i < 3; ++i) out.raw[i] = ballistic_scaling_at(model, y, out.eps[i], tol);
    // eps shrinks tenfold per step; first eliminate the O(eps) term, then O(eps^2)
    const double r1 = (10.0 * out.raw[1] - out.raw[0]) / 9.0;
    const double r2 = (10.0 * out.raw[2] - out.raw[1]) / 9.0;
    out.value = (100.0 * r2 - r1) / 99.0;
    const double d1 = out.raw[1] - out.raw[0];
    const double d2 = out.raw[2] - out.raw[1];
    const double noise = 1e-9 * std::max(1.0, std::abs(out.raw[2]));
    out.flagged = std::abs(d1) > noise && std::abs(d2) > noise && (d1 > 0.0) != (d2 > 0.0);
    return out;
}

double cauchy_propagator(double u0, double x, double t) {
    if (!(t > 0.0)) throw std::domain_error("cauchy_propagator: t must be > 0");
    if (!(u0 > 0.0)) throw std::invalid_argument("cauchy_propagator: u0 must be > 0");
    const double w = u0 * t;
    return w / (kPi * (w * w + x * x));
}

}  // namespace levy
