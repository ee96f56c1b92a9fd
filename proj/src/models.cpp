// Momentum-space decompositions, winding numbers, and the periodic-chain
// spectral oracle. The d-vectors below were derived by Fourier transform of
// the real-space Hamiltonians; periodic_chain_spectrum pins the conventions.
#include "uhlmann/models.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <string>

#include <Eigen/Dense>

namespace uhlmann {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Equatorial components of the Bloch vector in the chiral basis. The third
// (chiral-axis) component vanishes identically for all three lattice models.
struct Equatorial {
    double d1;
    double d2;
};

Equatorial equatorial_d(const CreutzParams& p, double k) {
    // Chiral basis of the ladder: d = (2K sin(phi_flux) sin k, -(M + 2K cos k)).
    // A flux away from pi/2 adds only an identity part to H(k), which cancels
    // in the normalized thermal state and leaves the splitting unchanged.
    return {2.0 * p.K * std::sin(p.phi_flux) * std::sin(k),
            -(p.M + 2.0 * p.K * std::cos(k))};
}

Equatorial equatorial_d(const SSHParams& p, double k) {
    return {p.v + p.w * std::cos(k), p.w * std::sin(k)};
}

Equatorial equatorial_d(const KitaevParams& p, double k) {
    // Nambu-space d rotated so the particle-hole/chiral operator is diagonal:
    // (-2 delta sin k, xi_k) with xi_k = -2t cos k - mu.
    return {-2.0 * p.delta * std::sin(k), -2.0 * p.t * std::cos(k) - p.mu};
}

Equatorial equatorial_for(const ModelParams& model, double k) {
    if (!std::isfinite(k)) {
        throw NonFiniteInput("bloch_state: momentum is not finite");
    }
    return std::visit(
        [k](const auto& p) -> Equatorial {
            using P = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<P, BCSParams>) {
                throw UnsupportedModel(
                    "bloch_state: the continuum pairing model has no lattice "
                    "Bloch decomposition; use bcs_bloch");
            } else {
                return equatorial_d(p, k);
            }
        },
        model.kind);
}

double wrap_to_pi(double x) {
    // Map to (-pi, pi] without accumulating error for |x| of a few pi.
    while (x > kPi) x -= 2.0 * kPi;
    while (x <= -kPi) x += 2.0 * kPi;
    return x;
}

using Cplx = std::complex<double>;

Eigen::MatrixXcd periodic_creutz(const CreutzParams& p, int N) {
    Eigen::MatrixXcd H = Eigen::MatrixXcd::Zero(2 * N, 2 * N);
    const Cplx leg_a = -p.K * std::exp(Cplx(0.0, -p.phi_flux));
    const Cplx leg_b = -p.K * std::exp(Cplx(0.0, +p.phi_flux));
    auto a = [N](int i) { return 2 * (((i % N) + N) % N); };
    auto b = [N](int i) { return 2 * (((i % N) + N) % N) + 1; };
    for (int i = 0; i < N; ++i) {
        H(a(i + 1), a(i)) += leg_a;
        H(b(i + 1), b(i)) += leg_b;
        H(b(i + 1), a(i)) += -p.K;
        H(a(i + 1), b(i)) += -p.K;
        H(a(i), b(i)) += -p.M;
    }
    Eigen::MatrixXcd Hh = H + H.adjoint().eval();
    return Hh;
}

Eigen::MatrixXcd periodic_ssh(const SSHParams& p, int N) {
    Eigen::MatrixXcd H = Eigen::MatrixXcd::Zero(2 * N, 2 * N);
    auto A = [N](int i) { return 2 * (((i % N) + N) % N); };
    auto B = [N](int i) { return 2 * (((i % N) + N) % N) + 1; };
    for (int i = 0; i < N; ++i) {
        H(A(i), B(i)) += p.v;
        H(B(i), A(i + 1)) += p.w;
    }
    Eigen::MatrixXcd Hh = H + H.adjoint().eval();
    return Hh;
}

Eigen::MatrixXcd periodic_kitaev(const KitaevParams& p, int N) {
    // BdG blocks [[h, D], [-D, -h]] with h symmetric and D antisymmetric.
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(N, N);
    Eigen::MatrixXd D = Eigen::MatrixXd::Zero(N, N);
    for (int i = 0; i < N; ++i) {
        h(i, i) = -p.mu;
        int j = (i + 1) % N;
        h(i, j) += -p.t;
        h(j, i) += -p.t;
        D(j, i) += -p.delta;
        D(i, j) += +p.delta;
    }
    Eigen::MatrixXd H(2 * N, 2 * N);
    H << h, D, -D, -h;
    return H.cast<Cplx>();
}

} // namespace

double MomentumGrid::point(int j) const {
    return -kPi + 2.0 * kPi * static_cast<double>(j) / static_cast<double>(Nk);
}

MomentumGrid MomentumGrid::uniform(int Nk) {
    if (Nk < 3) {
        throw InvalidSpec("MomentumGrid: need at least 3 points, got " +
                          std::to_string(Nk));
    }
    return MomentumGrid{Nk};
}

BlochState bloch_state(const ModelParams& model, double k) {
    const Equatorial d = equatorial_for(model, k);
    BlochState s;
    s.E = 2.0 * std::hypot(d.d1, d.d2);
    s.phi = std::atan2(d.d2, d.d1);
    if (s.E > 0.0) {
        const double r = std::hypot(d.d1, d.d2);
        s.n = {d.d1 / r, d.d2 / r, 0.0};
    }
    return s;
}

UnwrappedAngles unwrapped_phi(const ModelParams& model, const MomentumGrid& grid) {
    const int Nk = grid.Nk;
    UnwrappedAngles out;
    out.E.resize(Nk);
    out.phi.resize(Nk);
    double prev_raw = 0.0;
    for (int j = 0; j < Nk; ++j) {
        const BlochState s = bloch_state(model, grid.point(j));
        out.E[j] = s.E;
        if (j == 0) {
            out.phi[0] = s.phi;
        } else {
            const double step = wrap_to_pi(s.phi - prev_raw);
            if (std::abs(step) > kPi / 2.0) {
                throw UnwrapFailure(
                    "unwrapped_phi: adjacent angle jump " + std::to_string(step) +
                    " exceeds pi/2 at grid index " + std::to_string(j) +
                    "; refine the momentum grid");
            }
            out.phi[j] = out.phi[j - 1] + step;
        }
        prev_raw = s.phi;
    }
    // Close the loop back to k0 + 2pi (same physical point as k0).
    const BlochState s0 = bloch_state(model, grid.point(0) + 2.0 * kPi);
    const double last_step = wrap_to_pi(s0.phi - prev_raw);
    if (std::abs(last_step) > kPi / 2.0) {
        throw UnwrapFailure("unwrapped_phi: closing angle jump exceeds pi/2; "
                            "refine the momentum grid");
    }
    out.total = out.phi[Nk - 1] + last_step - out.phi[0];
    return out;
}

int winding_number(const ModelParams& model, const MomentumGrid& grid) {
    const double gap_tol = 1e-8 * dominant_hopping(model);
    for (int j = 0; j < grid.Nk; ++j) {
        const BlochState s = bloch_state(model, grid.point(j));
        if (s.E < gap_tol) {
            throw GapClosed("winding_number: gap " + std::to_string(s.E) +
                            " below tolerance at k = " +
                            std::to_string(grid.point(j)));
        }
    }
    const UnwrappedAngles u = unwrapped_phi(model, grid);
    const double nu = u.total / (2.0 * kPi);
    const double rounded = std::round(nu);
    if (std::abs(nu - rounded) > 0.01) {
        throw UnwrapFailure("winding_number: non-integer winding " +
                            std::to_string(nu));
    }
    return static_cast<int>(rounded);
}

std::vector<double> periodic_chain_spectrum(const ModelParams& model, int N) {
    if (N < 4) {
        throw InvalidSpec("periodic_chain_spectrum: need N >= 4");
    }
    Eigen::MatrixXcd H = std::visit(
        [N](const auto& p) -> Eigen::MatrixXcd {
            using P = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<P, CreutzParams>) {
                return periodic_creutz(p, N);
            } else if constexpr (std::is_same_v<P, SSHParams>) {
                return periodic_ssh(p, N);
            } else if constexpr (std::is_same_v<P, KitaevParams>) {
                return periodic_kitaev(p, N);
            } else {
                throw UnsupportedModel(
                    "periodic_chain_spectrum: continuum pairing model has no "
                    "lattice chain");
            }
        },
        model.kind);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(H,
                                                           Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) {
        throw NoConvergence("periodic_chain_spectrum: eigensolver failed");
    }
    std::vector<double> vals(solver.eigenvalues().data(),
                             solver.eigenvalues().data() + H.rows());
    std::sort(vals.begin(), vals.end());
    return vals;
}

double dominant_hopping(const ModelParams& model) {
    return std::visit(
        [](const auto& p) -> double {
            using P = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<P, CreutzParams>) {
                return std::max(2.0 * std::abs(p.K), std::abs(p.M));
            } else if constexpr (std::is_same_v<P, SSHParams>) {
                return std::max(std::abs(p.v), std::abs(p.w));
            } else if constexpr (std::is_same_v<P, KitaevParams>) {
                return std::max(2.0 * std::abs(p.t), std::abs(p.delta));
            } else {
                return p.omega_D;
            }
        },
        model.kind);
}

const char* model_name(const ModelParams& model) {
    return std::visit(
        [](const auto& p) -> const char* {
            using P = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<P, CreutzParams>) return "creutz";
            else if constexpr (std::is_same_v<P, SSHParams>) return "ssh";
            else if constexpr (std::is_same_v<P, KitaevParams>) return "kitaev";
            else return "bcs";
        },
        model.kind);
}

} // namespace uhlmann
