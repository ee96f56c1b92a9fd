// Per-mode closed forms are evaluated in log-space: with a = E/2T, b = E'/2T'
// every term is written with non-positive exponents only (ea = e^-a, eb = e^-b,
// es = e^-(a+b)/2), so the expressions stay finite for arbitrarily small T and
// the T = 0 limits (ea, eb, es -> 0) emerge from the same code path. The dense
// oracle reconstructs the same quantities from matrix exponentials and the
// determinant relations for quadratic fermion Hamiltonians; it is the ground
// truth the closed forms are tested against.

#include "uhlmann/fidelity.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "uhlmann/errors.hpp"

namespace uhlmann {

namespace {

void check_mode(const ThermalMode& m, const char* side) {
    if (!std::isfinite(m.E) || m.E < 0.0) {
        throw NonFiniteInput(std::string("mode energy must be finite and >= 0 (") + side + ")");
    }
    if (std::isnan(m.T) || m.T < 0.0) {
        throw NonFiniteInput(std::string("temperature must be finite and >= 0 (") + side + ")");
    }
    for (double ni : m.n) {
        if (!std::isfinite(ni)) {
            throw NonFiniteInput(std::string("Bloch vector has non-finite component (") + side + ")");
        }
    }
}

double dot_clamped(const std::array<double, 3>& x, const std::array<double, 3>& y) {
    double c = x[0] * y[0] + x[1] * y[1] + x[2] * y[2];
    return std::clamp(c, -1.0, 1.0);
}

} // namespace

double half_beta_E(double E, double T) {
    if (E == 0.0) return 0.0;
    if (T == 0.0) return std::numeric_limits<double>::infinity();
    return E / (2.0 * T);
}

double fidelity_per_mode(const ModePair& pair) {
    check_mode(pair.a, "first state");
    check_mode(pair.b, "second state");
    const double a = half_beta_E(pair.a.E, pair.a.T);
    const double b = half_beta_E(pair.b.E, pair.b.T);
    const double c = dot_clamped(pair.a.n, pair.b.n);
    const double ea = std::exp(-a);
    const double eb = std::exp(-b);
    const double es = std::exp(-(a + b) / 2.0);
    const double inner = 2.0 * es * es
        + 0.5 * ((1.0 + c) + (1.0 - c) * (ea * ea + eb * eb) + (1.0 + c) * es * es * es * es);
    return (2.0 * es + std::sqrt(inner)) / ((1.0 + ea) * (1.0 + eb));
}

double trace_sqrt_per_mode(const ModePair& pair) {
    check_mode(pair.a, "first state");
    check_mode(pair.b, "second state");
    const double a = half_beta_E(pair.a.E, pair.a.T);
    const double b = half_beta_E(pair.b.E, pair.b.T);
    const double c = dot_clamped(pair.a.n, pair.b.n);
    const double ea = std::exp(-a);
    const double eb = std::exp(-b);
    const double es = std::exp(-(a + b) / 2.0);
    const double num = 2.0 * es
        + 0.5 * ((1.0 + c) + (1.0 - c) * (ea + eb) + (1.0 + c) * es * es);
    return num / ((1.0 + ea) * (1.0 + eb));
}

double pairwise_product(const std::vector<double>& values) {
    // Fixed binary split keeps the reduction order independent of how the
    // per-mode work was scheduled, so totals are bit-stable.
    struct Reduce {
        const std::vector<double>& v;
        double run(std::size_t lo, std::size_t n) const {
            if (n == 1) return v[lo];
            const std::size_t h = n / 2;
            return run(lo, h) * run(lo + h, n - h);
        }
    };
    if (values.empty()) return 1.0;
    return Reduce{values}.run(0, values.size());
}

FidelityReport fidelity_total(const ModelParams& model_a,
                              const ModelParams& model_b,
                              const MomentumGrid& grid,
                              bool keep_per_mode) {
    if (model_a.kind.index() != model_b.kind.index()) {
        throw InvalidSpec("fidelity_total requires both models to be of the same family");
    }
    if (std::holds_alternative<BCSParams>(model_a.kind)) {
        throw UnsupportedModel(
            "fidelity_total integrates over a momentum grid; BCS states use the "
            "energy-shell total in the bcs module");
    }
    if (grid.Nk < 1) throw InvalidSpec("momentum grid is empty");

    std::vector<double> f(static_cast<std::size_t>(grid.Nk));
    std::vector<double> ts(static_cast<std::size_t>(grid.Nk));
    for (int j = 0; j < grid.Nk; ++j) {
        const double k = grid.point(j);
        try {
            const BlochState sa = bloch_state(model_a, k);
            const BlochState sb = bloch_state(model_b, k);
            ModePair pair{{sa.E, sa.n, model_a.T}, {sb.E, sb.n, model_b.T}};
            f[static_cast<std::size_t>(j)] = fidelity_per_mode(pair);
            ts[static_cast<std::size_t>(j)] = trace_sqrt_per_mode(pair);
        } catch (const NonFiniteInput& e) {
            throw NonFiniteInput(std::string(e.what()) + " at k = " + std::to_string(k)
                                 + " (grid index " + std::to_string(j) + ")");
        }
    }

    FidelityReport report;
    report.Nk = grid.Nk;
    report.F = pairwise_product(f);
    report.trace_sqrt = pairwise_product(ts);
    report.delta = report.F - report.trace_sqrt;
    report.F_density = std::pow(report.F, 1.0 / static_cast<double>(grid.Nk));
    if (keep_per_mode) report.per_mode = std::move(f);
    return report;
}

std::pair<double, double> fidelity_oracle_mode(const Eigen::Matrix2cd& H,
                                               const Eigen::Matrix2cd& Hp,
                                               double T, double Tp) {
    if (!H.allFinite() || !Hp.allFinite()) {
        throw NonFiniteInput("oracle Hamiltonian has non-finite entries");
    }
    if (!(T > 0.0) || !(Tp > 0.0) || !std::isfinite(T) || !std::isfinite(Tp)) {
        throw NonFiniteInput("oracle temperatures must be finite and > 0");
    }
    const double b1 = 1.0 / T;
    const double b2 = 1.0 / Tp;

    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd> s1(H);
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd> s2(Hp);
    if (s1.info() != Eigen::Success || s2.info() != Eigen::Success) {
        throw NoConvergence("2x2 eigendecomposition failed in fidelity oracle");
    }
    const Eigen::Vector2d w1 = s1.eigenvalues();
    const Eigen::Vector2d w2 = s2.eigenvalues();

    // Guard the combined exponent so every intermediate (largest eigenvalue of
    // the sandwich products, the normalization determinants and their product)
    // stays inside the double range.
    const double expo = b1 * w1.cwiseAbs().maxCoeff() + b2 * w2.cwiseAbs().maxCoeff();
    if (expo > 600.0) {
        throw IllConditioned("oracle exponent magnitude exceeds the safe range");
    }

    auto expm = [](const Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd>& s,
                   double scale) -> Eigen::Matrix2cd {
        const Eigen::Vector2d e = (scale * s.eigenvalues().array()).exp();
        return s.eigenvectors() * e.asDiagonal() * s.eigenvectors().adjoint();
    };

    const double trH = std::real(H.trace());
    const double trHp = std::real(Hp.trace());

    // Fidelity sandwich: M = e^{-b H/2} e^{-b' H'} e^{-b H/2}. Its smaller
    // eigenvalue is recovered from the exactly known determinant, which avoids
    // the cancellation the solver suffers when the spread is large.
    const Eigen::Matrix2cd A = expm(s1, -b1 / 2.0);
    const Eigen::Matrix2cd G = expm(s2, -b2);
    Eigen::Matrix2cd M = A * G * A;
    M = 0.5 * (M + M.adjoint()).eval();
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd> sm(M, Eigen::EigenvaluesOnly);
    if (sm.info() != Eigen::Success) {
        throw NoConvergence("2x2 eigendecomposition failed in fidelity oracle");
    }
    const double l1 = sm.eigenvalues().maxCoeff();
    if (!(l1 > 0.0) || !std::isfinite(l1)) {
        throw IllConditioned("oracle sandwich product lost positivity");
    }
    const double detM = std::exp(-b1 * trH - b2 * trHp);
    const double l2 = detM / l1;

    const double D1 = 1.0 + std::exp(-b1 * w1[0]) + std::exp(-b1 * w1[1]) + std::exp(-b1 * w1.sum());
    const double D2 = 1.0 + std::exp(-b2 * w2[0]) + std::exp(-b2 * w2[1]) + std::exp(-b2 * w2.sum());
    const double denom = std::sqrt(D1) * std::sqrt(D2);
    if (!std::isfinite(denom) || denom == 0.0) {
        throw IllConditioned("oracle normalization left the double range");
    }
    const double F = (1.0 + std::sqrt(l1) + std::sqrt(l2) + std::sqrt(detM)) / denom;

    // Trace-sqrt sandwich: Q = e^{-b H/4} e^{-b' H'/2} e^{-b H/4}.
    const Eigen::Matrix2cd A4 = expm(s1, -b1 / 4.0);
    const Eigen::Matrix2cd G2 = expm(s2, -b2 / 2.0);
    Eigen::Matrix2cd Q = A4 * G2 * A4;
    Q = 0.5 * (Q + Q.adjoint()).eval();
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd> sq(Q, Eigen::EigenvaluesOnly);
    if (sq.info() != Eigen::Success) {
        throw NoConvergence("2x2 eigendecomposition failed in fidelity oracle");
    }
    const double q1 = sq.eigenvalues().maxCoeff();
    if (!(q1 > 0.0) || !std::isfinite(q1)) {
        throw IllConditioned("oracle sandwich product lost positivity");
    }
    const double detQ = std::exp(-b1 * trH / 2.0 - b2 * trHp / 2.0);
    const double q2 = detQ / q1;
    const double TS = (1.0 + q1 + q2 + detQ) / denom;

    return {F, TS};
}

} // namespace uhlmann
