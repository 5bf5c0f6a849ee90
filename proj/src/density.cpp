#include "levy/density.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>

namespace levy {

namespace {

constexpr double kPi = std::numbers::pi;

bool all_finite(const std::vector<double>& xs) {
    return std::all_of(xs.begin(), xs.end(), [](double x) { return std::isfinite(x); });
}

// knots of every tabulated coefficient inside (a, b)
std::vector<double> knots_between(const ScenarioParams& p, double a, double b) {
    std::set<double> k;
    for (const Coefficient* c : {&p.D, &p.lambda1, &p.lambda2, &p.v, &p.v1, &p.phi2})
        for (double t : c->times())
            if (t > a && t < b) k.insert(t);
    return {k.begin(), k.end()};
}

template <class F>
double piecewise_simpson(const ScenarioParams& p, F&& f, double a, double b, double tol) {
    if (a == b) return 0.0;
    double sign = 1.0;
    if (b < a) {
        std::swap(a, b);
        sign = -1.0;
    }
    double lo = a, total = 0.0;
    for (double k : knots_between(p, a, b)) {
        total += quad::simpson(f, lo, k, tol);
        lo = k;
    }
    total += quad::simpson(f, lo, b, tol);
    return sign * total;
}

double gaussian_window_integral(const std::function<double(double)>& f, double centre, double T,
                                const quad::Tolerance& tol, const char* what) {
    const double w = 12.0 * std::sqrt(2.0 * T);
    auto g = [&](double chi) { return f(chi) * heat_kernel(centre - chi, T); };
    return quad::integrate_or_throw<double>(g, centre - w, centre + w, tol, {centre}, what);
}

double initial_term(const InitialCondition& ic, double eta, double T, const quad::Tolerance& tol) {
    double sum = 0.0;
    if (ic.density) sum += gaussian_window_integral(ic.density, eta, T, tol, "initial-condition integral");
    for (const PointMass& m : ic.masses) sum += m.mass * heat_kernel(eta - m.x, T);
    return ic.scale * sum;
}

}  // namespace

Coefficient::Coefficient(double value) : constant_(value) {}

Coefficient Coefficient::tabulated(std::vector<double> times, std::vector<double> values) {
    if (times.empty() || times.size() != values.size())
        throw std::invalid_argument("tabulated coefficient: need matching nonempty time and value lists");
    if (!all_finite(times) || !all_finite(values))
        throw std::invalid_argument("tabulated coefficient: non-finite entry");
    for (std::size_t i = 1; i < times.size(); ++i)
        if (!(times[i] > times[i - 1]))
            throw std::invalid_argument("tabulated coefficient: times must increase strictly");
    if (times.size() == 1) return Coefficient(values[0]);
    Coefficient c;
    c.times_ = std::move(times);
    c.values_ = std::move(values);
    c.cumulative_.assign(c.times_.size(), 0.0);
    for (std::size_t i = 1; i < c.times_.size(); ++i)
        c.cumulative_[i] = c.cumulative_[i - 1] +
                           0.5 * (c.values_[i] + c.values_[i - 1]) * (c.times_[i] - c.times_[i - 1]);
    return c;
}

double Coefficient::operator()(double t) const {
    if (times_.empty()) return constant_;
    if (t <= times_.front()) return values_.front();
    if (t >= times_.back()) return values_.back();
    const auto it = std::upper_bound(times_.begin(), times_.end(), t);
    const std::size_t i = static_cast<std::size_t>(it - times_.begin()) - 1;
    const double w = (t - times_[i]) / (times_[i + 1] - times_[i]);
    return values_[i] + w * (values_[i + 1] - values_[i]);
}

double Coefficient::primitive(double t) const {
    if (times_.empty()) return constant_ * t;
    // integral measured from the first knot; only differences are used
    if (t <= times_.front()) return (t - times_.front()) * values_.front();
    if (t >= times_.back()) return cumulative_.back() + (t - times_.back()) * values_.back();
    const auto it = std::upper_bound(times_.begin(), times_.end(), t);
    const std::size_t i = static_cast<std::size_t>(it - times_.begin()) - 1;
    return cumulative_[i] + 0.5 * (values_[i] + (*this)(t)) * (t - times_[i]);
}

double Coefficient::integral(double a, double b) const { return primitive(b) - primitive(a); }

bool Coefficient::identically_zero() const {
    if (times_.empty()) return constant_ == 0.0;
    return std::all_of(values_.begin(), values_.end(), [](double v) { return v == 0.0; });
}

void ScenarioParams::validate() const {
    if (D.is_constant()) {
        if (!(D(0.0) > 0.0)) throw std::invalid_argument("D must be > 0");
    } else {
        for (double d : D.values())
            if (!(d > 0.0)) throw std::invalid_argument("D must be > 0 at every knot");
    }
    if (!std::isfinite(v_star) || !std::isfinite(c)) throw std::invalid_argument("v_star and c must be finite");
}

Transforms::Transforms(const ScenarioParams& params, double simpson_tol) : p_(params), tol_(simpson_tol) {
    p_.validate();
}

double Transforms::log_beta(double t) const { return p_.v.integral(0.0, t) - p_.v1.integral(0.0, t); }
double Transforms::beta(double t) const { return std::exp(log_beta(t)); }
double Transforms::beta1(double t) const { return std::exp(p_.v1.integral(0.0, t)); }

double Transforms::diffusion_time(double a, double b) const {
    auto f = [&](double s) { return p_.D(s) * std::exp(-2.0 * log_beta(s)); };
    return piecewise_simpson(p_, f, a, b, tol_);
}

double Transforms::shift(double a, double b) const {
    if (p_.lambda2.identically_zero() && (p_.lambda1.identically_zero() || p_.phi2.identically_zero()))
        return 0.0;
    auto f = [&](double s) { return (p_.lambda2(s) + p_.lambda1(s) * p_.phi2(s)) / beta(s); };
    return piecewise_simpson(p_, f, a, b, tol_);
}

double Transforms::eta(double x, double t) const { return x / beta(t) - shift(0.0, t); }

double Transforms::drift_integral(double t) const {
    double out = p_.lambda2.integral(0.0, t);
    if (p_.lambda1.identically_zero() || p_.phi2.identically_zero()) return out;
    if (p_.lambda1.is_constant() && p_.phi2.is_constant()) return out + p_.lambda1(0.0) * p_.phi2(0.0) * t;
    auto f = [&](double s) { return p_.lambda1(s) * p_.phi2(s); };
    return out + piecewise_simpson(p_, f, 0.0, t, tol_);
}

double heat_kernel(double z, double T) {
    if (!(T > 0.0)) throw SingularKernelError("diffusion time T - zeta must be > 0");
    return std::exp(-z * z / (4.0 * T)) / std::sqrt(4.0 * kPi * T);
}

double master_density(const ScenarioParams& params, const Source& source, const InitialCondition& initial,
                      double x, double t, const quad::Tolerance& tol) {
    if (!(t > 0.0)) throw SingularKernelError("master_density: t must be > 0");
    const Transforms tr(params);
    const double eta = tr.eta(x, t);
    const double T = tr.diffusion_time(0.0, t);
    if (!(T > 0.0)) throw SingularKernelError("master_density: T(t) must be > 0");

    double inner = initial_term(initial, eta, T, tol);

    if (source.field) {
        auto over_tau = [&](double tau) {
            const double dT = tr.diffusion_time(tau, t);
            if (!(dT > 0.0)) throw SingularKernelError("master_density: T - zeta <= 0 inside the source integral");
            const double b = tr.beta(tau);
            const double S = tr.shift(0.0, tau);
            auto q = [&](double chi) { return source.field(b * (chi + S), tau); };
            return gaussian_window_integral(q, eta, dT, tol, "source integral") / tr.beta1(tau);
        };
        inner += quad::integrate_or_throw<double>(over_tau, 0.0, t, tol, {}, "source time integral");
    }
    for (const Impulse& imp : source.impulses) {
        if (!(imp.t < t) || imp.t < 0.0) continue;
        const double b = tr.beta(imp.t);
        const double y = imp.x / b - tr.shift(0.0, imp.t);
        inner += imp.mass / (tr.beta1(imp.t) * b) * heat_kernel(eta - y, tr.diffusion_time(imp.t, t));
    }
    for (const LineSource& line : source.lines) {
        // tau = t - u^2 removes the 1/sqrt(t - tau) endpoint behaviour
        auto over_u = [&](double u) {
            const double tau = t - u * u;
            const double b = tr.beta(tau);
            const double y = line.x / b - tr.shift(0.0, tau);
            return 2.0 * u * line.rate(tau) / (tr.beta1(tau) * b) * heat_kernel(eta - y, tr.diffusion_time(tau, t));
        };
        inner += quad::integrate_or_throw<double>(over_u, 0.0, std::sqrt(t), tol, {}, "line source integral");
    }
    return tr.beta1(t) * inner;
}

DensityField evaluate_field(const std::function<double(double, double)>& g, const std::vector<double>& xs,
                            const std::vector<double>& ts) {
    DensityField f;
    f.x = xs;
    f.t = ts;
    f.values.reserve(xs.size() * ts.size());
    for (double t : ts)
        for (double x : xs) f.values.push_back(g(x, t));
    return f;
}

double steady_state_density(const ScenarioParams& params, const std::function<double(double)>& Q, double x) {
    const Transforms tr(params);
    const double D = params.D(kSteadyLag);
    return tr.beta1(kSteadyLag) / std::sqrt(kPi) * std::exp(-Q(x) / std::sqrt(4.0 * D * kSteadyLag));
}

double large_demand_density(const ScenarioParams& params, double M, double x, double t) {
    if (!(M > 0.0)) throw std::invalid_argument("large_demand_density: M must be > 0");
    const Transforms tr(params);
    const double T = tr.diffusion_time(0.0, t);
    if (!(T > 0.0)) throw SingularKernelError("large_demand_density: T must be > 0");
    const double vs = params.v_star;
    const double z = std::exp(-0.5 * vs * t) * (x - tr.drift_integral(t));
    return std::exp(vs * t) * M * heat_kernel(z, T);
}

const char* to_string(InflowRegime r) {
    switch (r) {
        case InflowRegime::Time: return "time";
        case InflowRegime::Spatial: return "spatial";
        case InflowRegime::SpatialReduced: return "spatial-reduced";
    }
    return "?";
}

InflowRegime parse_inflow_regime(const std::string& text) {
    if (text == "time") return InflowRegime::Time;
    if (text == "spatial") return InflowRegime::Spatial;
    if (text == "spatial-reduced") return InflowRegime::SpatialReduced;
    throw std::invalid_argument("unknown inflow regime '" + text + "'");
}

double sustained_inflow_density(const ScenarioParams& params, InflowRegime regime, double x, double t,
                                const quad::Tolerance& tol) {
    if (!(t > 0.0)) throw SingularKernelError("sustained_inflow_density: t must be > 0");
    const Transforms tr(params);
    const double vs = params.v_star;
    switch (regime) {
        case InflowRegime::Time: {
            const double z = std::exp(-0.5 * vs * t) * tr.eta(x, t);
            auto over_u = [&](double u) {
                const double tau = t - u * u;
                return 2.0 * u * params.phi2(tau) * heat_kernel(z, tr.diffusion_time(tau, t));
            };
            return tr.beta1(t) *
                   quad::integrate_or_throw<double>(over_u, 0.0, std::sqrt(t), tol, {}, "time inflow integral");
        }
        case InflowRegime::Spatial:
        case InflowRegime::SpatialReduced: {
            const bool reduced = regime == InflowRegime::SpatialReduced;
            const double centre = reduced ? std::exp(vs * t) * x : x / tr.beta(t);
            auto over_tau = [&](double tau) {
                const double rate = reduced ? vs : params.v(tau) - params.v1(tau);
                auto q = [&](double chi) { return rate * chi; };
                return gaussian_window_integral(q, centre, tr.diffusion_time(tau, t), tol, "spatial inflow integral");
            };
            const double pre = reduced ? std::exp(vs * t) : tr.beta1(t);
            return pre * quad::integrate_or_throw<double>(over_tau, 0.0, t, tol, {}, "spatial inflow time integral");
        }
    }
    throw std::invalid_argument("sustained_inflow_density: bad regime");
}

double high_reaction_density(const ScenarioParams& params, const InitialCondition& omega, double x, double t,
                             const quad::Tolerance& tol) {
    if (!params.phi2.identically_zero())
        throw std::invalid_argument("high_reaction_density: requires phi2 = 0");
    if (!(t > 0.0)) throw SingularKernelError("high_reaction_density: t must be > 0");
    const Transforms tr(params);
    const double T = tr.diffusion_time(0.0, t);
    return tr.beta1(t) * initial_term(omega, tr.eta(x, t), T, tol);
}

const char* to_string(InterauctionRegime r) {
    switch (r) {
        case InterauctionRegime::Diffusive: return "diffusive";
        case InterauctionRegime::TransactionDrift: return "transaction-drift";
        case InterauctionRegime::GradientDrift: return "gradient-drift";
    }
    return "?";
}

InterauctionRegime parse_interauction_regime(const std::string& text) {
    if (text == "diffusive") return InterauctionRegime::Diffusive;
    if (text == "transaction-drift") return InterauctionRegime::TransactionDrift;
    if (text == "gradient-drift") return InterauctionRegime::GradientDrift;
    throw std::invalid_argument("unknown interauction regime '" + text + "'");
}

double interauction_kernel(double omega, double beta1, double D, double T, double displacement) {
    if (!(D > 0.0) || !(T > 0.0)) throw SingularKernelError("interauction kernel: D and T must be > 0");
    return beta1 * omega / std::sqrt(4.0 * kPi * D * T) * std::exp(-displacement * displacement / (4.0 * D * T));
}

double interauction_density(const InterauctionParams& p, InterauctionRegime regime) {
    if (!(p.tau > 0.0)) throw std::invalid_argument("interauction: tau must be > 0");
    if (!(p.D > 0.0)) throw std::invalid_argument("interauction: D must be > 0");
    if (!(p.v_star > 0.0)) throw std::invalid_argument("interauction: v_star must be > 0");
    const double vs = p.v_star;
    const double front = p.omega / std::sqrt(4.0 * kPi * p.D / (2.0 * vs));
    switch (regime) {
        case InterauctionRegime::Diffusive:
            return front * std::exp(2.0 * vs * (p.tau - p.B * p.B / (4.0 * p.D)));
        case InterauctionRegime::TransactionDrift: {
            const double d = p.B - p.lambda2_star * p.tau;
            return front * std::exp(-2.0 * vs / (4.0 * p.D) * d * d);
        }
        case InterauctionRegime::GradientDrift: {
            const double beta = std::exp(vs * p.tau);
            const double T = -std::expm1(-2.0 * vs * p.tau) / (2.0 * vs);
            const double drift = p.lambda1_star * p.phi2_star * (-std::expm1(-vs * p.tau)) / vs;
            return interauction_kernel(p.omega, 1.0, p.D, T, p.B / beta - drift);
        }
    }
    throw std::invalid_argument("interauction: bad regime");
}

FactorSurface multiplying_factor_surface(const std::vector<double>& B_grid, const std::vector<double>& tau_grid,
                                         double D, double v_star) {
    if (B_grid.empty() || tau_grid.empty()) throw std::invalid_argument("factor surface: grids must be nonempty");
    FactorSurface s;
    s.B = B_grid;
    s.tau = tau_grid;
    InterauctionParams p;
    p.D = D;
    p.v_star = v_star;
    p.omega = 1.0;
    for (double tau : tau_grid) {
        std::vector<double> row;
        row.reserve(B_grid.size());
        for (double B : B_grid) {
            p.B = B;
            p.tau = tau;
            row.push_back(interauction_density(p, InterauctionRegime::Diffusive));
        }
        s.factor.push_back(std::move(row));
    }
    return s;
}

FactorSurface default_factor_surface(bool zoom) {
    std::vector<double> B, tau;
    const int nb = 21;
    const double b_hi = zoom ? 0.4 : 1.0;
    for (int i = 0; i < nb; ++i) B.push_back(b_hi * i / (nb - 1));
    const int nt = zoom ? 50 : 100;
    const double t_lo = zoom ? 0.001 : 0.01;
    const double t_hi = zoom ? 0.05 : 1.0;
    for (int i = 0; i < nt; ++i) tau.push_back(t_lo + (t_hi - t_lo) * i / (nt - 1));
    return multiplying_factor_surface(B, tau);
}

bool surface_is_monotone(const FactorSurface& s) {
    for (std::size_t i = 0; i < s.tau.size(); ++i)
        for (std::size_t j = 0; j < s.B.size(); ++j) {
            const double f = s.factor[i][j];
            if (i + 1 < s.tau.size() && s.tau[i + 1] > s.tau[i] && !(s.factor[i + 1][j] > f)) return false;
            if (j + 1 < s.B.size() && s.B[j + 1] > s.B[j] && s.B[j] >= 0.0 && !(s.factor[i][j + 1] < f))
                return false;
        }
    return true;
}

namespace {

double lambda1_at(const ScenarioParams& p, double t) {
    const double l1 = p.lambda1(t);
    if (l1 == 0.0) throw std::domain_error("resource gradient: lambda1 must be nonzero");
    return l1;
}

}  // namespace

double resource_gradient_curvature(const ScenarioParams& p, double t) {
    return (p.v(t) - p.v1(t)) / lambda1_at(p, t);
}

double resource_gradient(const ScenarioParams& p, double x, double t) {
    return 0.5 * resource_gradient_curvature(p, t) * x * x + p.phi2(t) * x + p.c;
}

double resource_gradient_printed_curvature(const ScenarioParams& p, double t) {
    return 2.0 * (p.v(t) - p.v1(t)) / lambda1_at(p, t);
}

double resource_gradient_printed(const ScenarioParams& p, double x, double t) {
    return (p.v(t) - p.v1(t)) / lambda1_at(p, t) * x * x + p.phi2(t) * x + p.c;
}

}  // namespace levy
