// The gap equation is solved by bisection on the monotone-in-delta right-hand
// side. At T = 0 the integrand reduces to 1/sqrt(xi^2 + delta^2); the quadrature
// still runs numerically so the closed-form root stays an independent check of
// the whole chain rather than a shortcut inside it. The normal phase is
// detected up front: if the T > 0 right-hand side is already negative for an
// infinitesimal gap, delta = 0 is the only solution.

#include "uhlmann/bcs.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/legendre.hpp>

#include "uhlmann/errors.hpp"

namespace uhlmann {

namespace {

void check_bcs_params(const BCSParams& params) {
    if (!(params.omega_D > 0.0) || !std::isfinite(params.omega_D) ||
        !(params.N0 > 0.0) || !std::isfinite(params.N0)) {
        throw InvalidSpec("BCS parameters require omega_D > 0 and N0 > 0");
    }
}

double shell_integral(double delta, double T, const BCSParams& params) {
    using boost::math::quadrature::gauss_kronrod;
    auto integrand = [delta, T](double xi) {
        const double E = std::hypot(xi, delta);
        if (T == 0.0) return 1.0 / E;
        return std::tanh(E / (2.0 * T)) / E;
    };
    double err = 0.0;
    const double val = gauss_kronrod<double, 15>::integrate(
        integrand, 0.0, params.omega_D, 20, 1e-12, &err);
    if (!std::isfinite(val) || err > 1e-9 * std::max(1.0, std::abs(val))) {
        throw QuadratureFailure("gap_rhs: shell integral did not reach the "
                                "requested accuracy (estimate " +
                                std::to_string(err) + ")");
    }
    return val;
}

BdGMode mode_from(double xi, double delta) {
    BdGMode m;
    m.xi = xi;
    m.E = std::hypot(xi, delta);
    if (delta == 0.0) {
        m.n = {0.0, 0.0, xi > 0.0 ? 1.0 : (xi < 0.0 ? -1.0 : 1.0)};
    } else {
        m.n = {delta / m.E, 0.0, xi / m.E};
    }
    return m;
}

} // namespace

double gap_rhs(double delta, double V, double T, const BCSParams& params) {
    check_bcs_params(params);
    if (!(delta >= 0.0) || !std::isfinite(delta) || std::isnan(T) || T < 0.0 ||
        std::isnan(V)) {
        throw NonFiniteInput("gap_rhs: delta >= 0 and T >= 0 required");
    }
    if (V == 0.0) return -1.0;
    if (delta == 0.0 && T == 0.0) {
        throw NonFiniteInput("gap_rhs diverges at delta = 0, T = 0");
    }
    return params.N0 * V * shell_integral(delta, T, params) - 1.0;
}

GapSolution solve_gap(double V, double T, const BCSParams& params) {
    check_bcs_params(params);
    if (V < 0.0 || !std::isfinite(V)) {
        throw InvalidSpec("solve_gap: coupling must be finite and >= 0");
    }
    if (std::isnan(T) || T < 0.0) {
        throw NonFiniteInput("solve_gap: temperature must be finite and >= 0");
    }
    GapSolution sol;
    if (V == 0.0) {
        sol.converged = true;
        return sol;
    }
    // Normal phase: for T > 0 the right-hand side is finite as delta -> 0; if
    // it is already negative there, no positive root exists.
    if (T > 0.0 && gap_rhs(1e-300, V, T, params) < 0.0) {
        sol.converged = true;
        return sol;
    }
    const double d0 = params.omega_D / std::sinh(1.0 / (params.N0 * V));
    double lo = 0.0;
    double hi = 10.0 * d0;
    const int max_iterations = 200;
    int it = 0;
    for (; it < max_iterations; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (gap_rhs(mid, V, T, params) > 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
        if (hi - lo < 1e-13 * std::max(1.0, mid)) break;
    }
    if (it == max_iterations) {
        throw NoConvergence("solve_gap: bisection failed to tighten in 200 iterations");
    }
    sol.delta = 0.5 * (lo + hi);
    sol.iterations = it + 1;
    sol.residual = std::abs(gap_rhs(sol.delta, V, T, params));
    sol.converged = true;
    return sol;
}

double critical_temperature(double V, const BCSParams& params) {
    check_bcs_params(params);
    if (!(V >= 0.0) || !std::isfinite(V)) {
        throw InvalidSpec("critical_temperature: coupling must be finite and >= 0");
    }
    if (V == 0.0) return 0.0;
    double hi = 1.0;
    int grow = 0;
    while (solve_gap(V, hi, params).delta >= 1e-12) {
        hi *= 2.0;
        if (++grow > 60) {
            throw NoConvergence("critical_temperature: no normal phase found");
        }
    }
    double lo = 0.0;
    for (int i = 0; i < 200 && hi - lo >= 1e-8; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (solve_gap(V, mid, params).delta < 1e-12) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    return hi;
}

BdGMode bcs_bloch(double xi, double V, double T, const BCSParams& params) {
    if (!std::isfinite(xi)) {
        throw NonFiniteInput("bcs_bloch: xi must be finite");
    }
    const GapSolution sol = solve_gap(V, T, params);
    return mode_from(xi, sol.delta);
}

FidelityReport bcs_fidelity_total(double V1, double T1, double V2, double T2,
                                  const BCSParams& params, int nodes) {
    if (nodes < 2) throw InvalidSpec("bcs_fidelity_total: need at least 2 nodes");
    const std::vector<double> xis = detail::gauss_legendre_nodes(nodes, params.omega_D);
    const double delta1 = solve_gap(V1, T1, params).delta;
    const double delta2 = solve_gap(V2, T2, params).delta;

    std::vector<double> f(xis.size());
    std::vector<double> ts(xis.size());
    for (std::size_t i = 0; i < xis.size(); ++i) {
        const BdGMode m1 = mode_from(xis[i], delta1);
        const BdGMode m2 = mode_from(xis[i], delta2);
        // The fidelity formulas take the full two-level splitting 2E.
        ModePair pair{{2.0 * m1.E, m1.n, T1}, {2.0 * m2.E, m2.n, T2}};
        f[i] = fidelity_per_mode(pair);
        ts[i] = trace_sqrt_per_mode(pair);
    }
    FidelityReport report;
    report.Nk = static_cast<int>(xis.size());
    report.F = pairwise_product(f);
    report.trace_sqrt = pairwise_product(ts);
    report.delta = report.F - report.trace_sqrt;
    report.F_density = std::pow(report.F, 1.0 / static_cast<double>(report.Nk));
    return report;
}

namespace detail {

std::vector<double> gauss_legendre_nodes(int n, double scale) {
    if (n < 1) throw InvalidSpec("gauss_legendre_nodes: n must be positive");
    const std::vector<double> nonneg = boost::math::legendre_p_zeros<double>(n);
    std::vector<double> nodes;
    nodes.reserve(static_cast<std::size_t>(n));
    for (auto it = nonneg.rbegin(); it != nonneg.rend(); ++it) {
        if (*it > 0.0) nodes.push_back(-scale * *it);
    }
    for (double z : nonneg) nodes.push_back(scale * z);
    return nodes;
}

} // namespace detail

} // namespace uhlmann
