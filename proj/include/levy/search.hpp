#pragma once

#include <array>
#include <complex>
#include <functional>

#include "levy/agents.hpp"
#include "levy/quadrature.hpp"

namespace levy {

using cplx = std::complex<double>;

struct SearchModel {
    VelocityDist velocity{1.0};
    FlightTimeDist flight{1.5};
    std::function<double(double)> n0;  // initial price density; optional
    double eta = 1.0;

    void validate() const;
};

// Laplace transform of the flight-time density, f^(z) for Re z > 0.
cplx flight_laplace(const FlightTimeDist& flight, cplx z, const quad::Tolerance& tol = {});
// Laplace transform of the survival function, (1 - f^(z)) / z.
cplx survival_laplace(const FlightTimeDist& flight, cplx z, const quad::Tolerance& tol = {});

// Velocity average psi(k,s) = <f^(s + i k v)> over h(v).
cplx flight_velocity_average(const SearchModel& model, double k, cplx s,
                             const quad::Tolerance& tol = {});

// Walker density in Fourier-Laplace space: <(1 - f^(z))/z> / (1 - psi), z = s + i k v.
// Reduces to 1/(s + u0|k|) for the Lorentzian velocity law.
cplx propagator_fl(const SearchModel& model, double k, cplx s, const quad::Tolerance& tol = {});
// Renewal (turning-point) density psi / (1 - psi); at k = 0 this is f^(s) / (1 - f^(s)).
cplx renewal_density_fl(const SearchModel& model, double k, cplx s, const quad::Tolerance& tol = {});
// Closed form for Lorentzian velocities.
cplx cauchy_propagator_fl(double u0, double k, cplx s);

// <(1 + i k v / s)^p> over h(v). Quadrature for p < 1; for p >= 1 the integral diverges and the
// value is the analytic continuation in p of the convergent case, (1 + u0|k|/s)^p.
cplx velocity_power_moment(const SearchModel& model, double k, cplx s, double p,
                           const quad::Tolerance& tol = {});
// Tauberian form: (1/s) <(1 + ikv/s)^(gamma-1)> / <(1 + ikv/s)^gamma>.
cplx asymptotic_propagator(const SearchModel& model, double k, cplx s,
                           const quad::Tolerance& tol = {});

struct ScalingValue {
    double value = 0.0;
    std::array<double, 3> raw{};       // at eps = 1e-2, 1e-3, 1e-4
    std::array<double, 3> eps{1e-2, 1e-3, 1e-4};
    bool flagged = false;              // raw sequence not monotone in eps
};

// Scaling function phi(y) = -(1/pi) lim Im[<(z - v)^(gamma-1)> / <(z - v)^gamma>], z = y + i eps,
// Richardson-extrapolated to eps -> 0. Requires 0 < gamma < 1.
ScalingValue ballistic_scaling_function(const SearchModel& model, double y,
                                        const quad::Tolerance& tol = {});
// Value at one eps, no extrapolation.
double ballistic_scaling_at(const SearchModel& model, double y, double eps,
                            const quad::Tolerance& tol = {});

// u0 t / (pi (u0^2 t^2 + x^2)).
double cauchy_propagator(double u0, double x, double t);

}  // namespace levy
