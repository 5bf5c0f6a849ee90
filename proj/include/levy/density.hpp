#pragma once

#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "levy/quadrature.hpp"

namespace levy {

// A time coefficient: constant, or tabulated with linear interpolation (held flat outside the table).
class Coefficient {
public:
    Coefficient(double value = 0.0);  // NOLINT: implicit on purpose
    static Coefficient tabulated(std::vector<double> times, std::vector<double> values);

    double operator()(double t) const;
    // Exact integral of the interpolant over [a, b].
    double integral(double a, double b) const;
    bool is_constant() const { return times_.empty(); }
    bool identically_zero() const;
    const std::vector<double>& times() const { return times_; }
    const std::vector<double>& values() const { return values_; }

private:
    double primitive(double t) const;  // measured from the first knot
    double constant_ = 0.0;
    std::vector<double> times_;
    std::vector<double> values_;
    std::vector<double> cumulative_;  // integral from times_[0] to times_[i]
};

// Coefficients of  g_t = D g_xx - lambda1 f_x g_x - lambda1 f_xx g - lambda2 g_x + v g + q
// with the perceived resource gradient f = ((v - v1) / (2 lambda1)) x^2 + phi2 x + c.
struct ScenarioParams {
    Coefficient D = 1.0;
    Coefficient lambda1 = 0.0;
    Coefficient lambda2 = 0.0;
    Coefficient v = 0.0;
    Coefficient v1 = 0.0;
    Coefficient phi2 = 0.0;
    double v_star = 0.0;
    double c = 0.0;

    void validate() const;
};

class SingularKernelError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// Time transforms of the scenario. beta = exp(int (v - v1)), beta1 = exp(int v1),
// T(t) = int_0^t D / beta^2, S(t) = int_0^t (lambda2 + lambda1 phi2) / beta; composite
// integrals use adaptive Simpson.
class Transforms {
public:
    explicit Transforms(const ScenarioParams& params, double simpson_tol = 1e-9);

    double log_beta(double t) const;
    double beta(double t) const;
    double beta1(double t) const;
    // diffusion time between a and b, D folded in
    double diffusion_time(double a, double b) const;
    double shift(double a, double b) const;
    // transformed coordinate eta = x / beta(t) - S(t)
    double eta(double x, double t) const;
    // raw drift integral int_0^t (lambda2 + lambda1 phi2) ds, no beta weighting
    double drift_integral(double t) const;

private:
    ScenarioParams p_;
    double tol_;
};

// exp(-z^2 / (4 T)) / sqrt(4 pi T), T being a diffusion time with D folded in
double heat_kernel(double z, double T);

struct PointMass {
    double x = 0.0;
    double mass = 1.0;
};

// G_i omega: a smooth density and/or point masses, times `scale`.
struct InitialCondition {
    std::function<double(double)> density;
    std::vector<PointMass> masses;
    double scale = 1.0;
};

struct Impulse {
    double x = 0.0;
    double t = 0.0;
    double mass = 1.0;
};

// q = rate(t) delta(x - x0)
struct LineSource {
    double x = 0.0;
    Coefficient rate = 0.0;
};

// q(x, t) in original price coordinates.
struct Source {
    std::function<double(double, double)> field;
    std::vector<Impulse> impulses;
    std::vector<LineSource> lines;
};

// Green's function solution traced back to (x, t):
//   g = beta1(t) [ int dchi G_i omega(chi) H(eta - chi, T(t))
//                + int_0^t dtau / beta1(tau) int dchi q(beta(tau)(chi + S(tau)), tau) H(eta - chi, T(t) - T(tau)) ]
double master_density(const ScenarioParams& params, const Source& source, const InitialCondition& initial,
                      double x, double t, const quad::Tolerance& tol = {});

struct DensityField {
    std::vector<double> x;
    std::vector<double> t;
    std::vector<double> values;  // row-major over t then x
};

DensityField evaluate_field(const std::function<double(double, double)>& g, const std::vector<double>& xs,
                            const std::vector<double>& ts);

// Steady state with the square-root-law exponent: (beta1 / sqrt(pi)) exp(-Q(x) / sqrt(4 D e)),
// beta1 and D read at t = e.
double steady_state_density(const ScenarioParams& params, const std::function<double(double)>& Q, double x);
// Diffusion lag of the steady state.
inline constexpr double kSteadyLag = 2.718281828459045;

// Large-demand form: e^{v* t} M H(e^{-v* t / 2} (x - int (lambda2 + lambda1 phi2)), T(t)).
double large_demand_density(const ScenarioParams& params, double M, double x, double t);

enum class InflowRegime { Time, Spatial, SpatialReduced };
const char* to_string(InflowRegime r);
InflowRegime parse_inflow_regime(const std::string& text);

// Time: beta1 int_0^t phi2(tau) H(e^{-v* t / 2} eta(x, t), T(t) - T(tau)) dtau.
// Spatial: beta1 int_0^t int (v - v1)(tau) chi H(x / beta - chi, T(t) - T(tau)) dchi dtau.
// SpatialReduced: e^{v* t} int_0^t int v* chi H(e^{v* t} x - chi, T(t) - T(tau)) dchi dtau.
double sustained_inflow_density(const ScenarioParams& params, InflowRegime regime, double x, double t,
                                const quad::Tolerance& tol = {});

// Reaction-only field; requires phi2 == 0.
double high_reaction_density(const ScenarioParams& params, const InitialCondition& omega, double x, double t,
                             const quad::Tolerance& tol = {});

enum class InterauctionRegime { Diffusive, TransactionDrift, GradientDrift };
const char* to_string(InterauctionRegime r);
InterauctionRegime parse_interauction_regime(const std::string& text);

struct InterauctionParams {
    double B = 0.2;
    double D = 1.0;
    double v_star = 1.0;
    double tau = 0.01;
    double omega = 1.0;
    double lambda2_star = 0.0;
    double lambda1_star = 0.0;
    double phi2_star = 0.0;
};

// Point mass carried by the Green kernel: beta1 omega / sqrt(4 pi D T) exp(-d^2 / (4 D T)).
double interauction_kernel(double omega, double beta1, double D, double T, double displacement);
// Density at the next trade price. Diffusive and TransactionDrift are the closed forms;
// GradientDrift runs the kernel with beta = e^{v* tau}, beta1 = 1, T = (1 - e^{-2 v* tau}) / (2 v*).
double interauction_density(const InterauctionParams& p, InterauctionRegime regime);

struct FactorSurface {
    std::vector<double> tau;
    std::vector<double> B;
    std::vector<std::vector<double>> factor;  // [tau index][B index]
};

FactorSurface multiplying_factor_surface(const std::vector<double>& B_grid, const std::vector<double>& tau_grid,
                                         double D = 1.0, double v_star = 1.0);
// wide view and the zoom on short interauction times
FactorSurface default_factor_surface(bool zoom = false);
bool surface_is_monotone(const FactorSurface& s);

// f(x, t) with lambda1 f_xx = v - v1, the value the transformation needs.
double resource_gradient(const ScenarioParams& params, double x, double t);
double resource_gradient_curvature(const ScenarioParams& params, double t);
// f(x, t) exactly as printed, ((v - v1) / lambda1) x^2 + phi2 x + c.
double resource_gradient_printed(const ScenarioParams& params, double x, double t);
double resource_gradient_printed_curvature(const ScenarioParams& params, double t);

}  // namespace levy
