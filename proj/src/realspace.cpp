// Open-chain assembly, dense Hermitian diagonalization, and thermal
// occupation profiles.
//
// The pairing-chain occupation walks eigenvalue pairs (m, 2N-1-m) of the
// particle-hole symmetric spectrum and accumulates, per positive branch,
//   n_i += |u_i|^2 f(eps) + |v_i|^2 (1 - f(eps)),   f(x) = 1/(1 + e^x),
// with x = (eps - mu_qp)/T. A Majorana pair split below deg_tol is first
// rebuilt from a particle-hole self-conjugate (Majorana) basis of its 2d
// eigenspace; otherwise the eigensolver's arbitrary rotation inside the
// near-degenerate space would leak into the occupations.
#include "uhlmann/realspace.hpp"

#include <cmath>
#include <complex>
#include <string>
#include <variant>

#include "uhlmann/errors.hpp"

namespace uhlmann {

namespace {

using std::complex;

double fermi(double x) {
    // exp overflows to +inf for large x, giving exactly 0; underflow gives 1.
    return 1.0 / (1.0 + std::exp(x));
}

ChainHamiltonian creutz_open(const CreutzParams& p, int N) {
    ChainHamiltonian chain;
    chain.kind = ChainKind::NumberConserving;
    chain.sites = N;
    chain.orbitals_per_site = 2;
    Eigen::MatrixXcd H = Eigen::MatrixXcd::Zero(2 * N, 2 * N);
    const auto a = [](int i) { return 2 * i; };
    const auto b = [](int i) { return 2 * i + 1; };
    const complex<double> horizontal = -p.K * std::exp(complex<double>(0.0, -p.phi_flux));
    for (int i = 0; i + 1 < N; ++i) {
        H(a(i + 1), a(i)) += horizontal;
        H(b(i + 1), b(i)) += std::conj(horizontal);
        H(b(i + 1), a(i)) += -p.K;
        H(a(i + 1), b(i)) += -p.K;
    }
    for (int i = 0; i < N; ++i) H(a(i), b(i)) += -p.M;
    chain.H = H + H.adjoint().eval();
    return chain;
}

ChainHamiltonian ssh_open(const SSHParams& p, int N) {
    ChainHamiltonian chain;
    chain.kind = ChainKind::NumberConserving;
    chain.sites = N;
    chain.orbitals_per_site = 2;
    Eigen::MatrixXcd H = Eigen::MatrixXcd::Zero(2 * N, 2 * N);
    for (int i = 0; i < N; ++i) H(2 * i, 2 * i + 1) += p.v;
    for (int i = 0; i + 1 < N; ++i) H(2 * i + 1, 2 * (i + 1)) += p.w;
    chain.H = H + H.adjoint().eval();
    return chain;
}

ChainHamiltonian kitaev_open(const KitaevParams& p, int N) {
    // Nambu blocks [[h, D], [-D, -h]] with h symmetric and D antisymmetric;
    // the constant shift from the doubling is dropped.
    ChainHamiltonian chain;
    chain.kind = ChainKind::BdG;
    chain.sites = N;
    chain.orbitals_per_site = 1;
    Eigen::MatrixXcd H = Eigen::MatrixXcd::Zero(2 * N, 2 * N);
    for (int i = 0; i < N; ++i) {
        H(i, i) = -p.mu;
        H(N + i, N + i) = p.mu;
    }
    for (int i = 0; i + 1 < N; ++i) {
        H(i, i + 1) = -p.t;
        H(i + 1, i) = -p.t;
        H(N + i, N + i + 1) = p.t;
        H(N + i + 1, N + i) = p.t;
        H(i, N + i + 1) = p.delta;       // D_{i,i+1} = +delta
        H(i + 1, N + i) = -p.delta;      // D_{i+1,i} = -delta
        H(N + i, i + 1) = -p.delta;      // -D block
        H(N + i + 1, i) = p.delta;
    }
    chain.H = std::move(H);
    return chain;
}

// Particle-hole conjugation in the Nambu basis: C(u, v) = (conj v, conj u).
Eigen::VectorXcd ph_conj(const Eigen::VectorXcd& col) {
    const Eigen::Index N = col.size() / 2;
    Eigen::VectorXcd out(col.size());
    out.head(N) = col.tail(N).conjugate();
    out.tail(N) = col.head(N).conjugate();
    return out;
}

// Orthonormal particle-hole self-conjugate basis of the span of two columns.
std::array<Eigen::VectorXcd, 2> majorana_basis(const Eigen::VectorXcd& c0,
                                               const Eigen::VectorXcd& c1) {
    std::array<Eigen::VectorXcd, 2> out;
    std::size_t have = 0;
    for (const Eigen::VectorXcd* c : {&c0, &c1}) {
        const Eigen::VectorXcd conj_part = ph_conj(*c);
        const complex<double> i_unit(0.0, 1.0);
        for (Eigen::VectorXcd cand :
             {Eigen::VectorXcd(*c + conj_part), Eigen::VectorXcd(i_unit * (*c - conj_part))}) {
            for (std::size_t m = 0; m < have; ++m) cand -= out[m] * out[m].dot(cand);
            const double norm = cand.norm();
            if (norm > 1e-8) {
                out[have++] = cand / norm;
                break;
            }
        }
    }
    if (have != 2) {
        throw NoConvergence("could not build a particle-hole self-conjugate basis "
                            "for a degenerate quasi-particle pair");
    }
    return out;
}

std::vector<double> bdg_occupations(const EigenSystem& es, int N, double T, double mu_qp) {
    constexpr double deg_tol = 1e-10;
    std::vector<double> n(static_cast<std::size_t>(N), 0.0);
    for (int m = 0; m < N; ++m) {
        const int pos = 2 * N - 1 - m;
        const int neg = m;
        Eigen::VectorXcd col = es.vectors.col(pos);
        double eps = es.values(pos);
        if (std::abs(eps) < deg_tol) {
            const auto basis = majorana_basis(es.vectors.col(pos), es.vectors.col(neg));
            col = (basis[0] + complex<double>(0.0, 1.0) * basis[1]) / std::sqrt(2.0);
            eps = 0.5 * (es.values(pos) - es.values(neg));
        }
        const double f = fermi((eps - mu_qp) / T);
        for (int i = 0; i < N; ++i) {
            n[static_cast<std::size_t>(i)] +=
                std::norm(col(i)) * f + std::norm(col(N + i)) * (1.0 - f);
        }
    }
    return n;
}

} // namespace

ChainHamiltonian build_open_chain(const ModelParams& model, int sites) {
    if (sites < 4) {
        throw InvalidSpec("open chain needs at least 4 sites, got " + std::to_string(sites));
    }
    return std::visit(
        [&](const auto& p) -> ChainHamiltonian {
            using P = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<P, CreutzParams>) return creutz_open(p, sites);
            else if constexpr (std::is_same_v<P, SSHParams>) return ssh_open(p, sites);
            else if constexpr (std::is_same_v<P, KitaevParams>) return kitaev_open(p, sites);
            else throw UnsupportedModel("the continuum pairing model has no chain form");
        },
        model.kind);
}

EigenSystem eigh(const Eigen::MatrixXcd& H) {
    if (H.rows() != H.cols() || H.rows() == 0) {
        throw InvalidSpec("eigh needs a nonempty square matrix");
    }
    const double scale = H.cwiseAbs().maxCoeff();
    const double herm_dev = (H - H.adjoint()).cwiseAbs().maxCoeff();
    if (herm_dev > 1e-12 * std::max(1.0, scale)) {
        throw InvalidSpec("eigh input is not Hermitian");
    }
    EigenSystem es;
    if (H.imag().cwiseAbs().maxCoeff() == 0.0) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(H.real());
        if (solver.info() != Eigen::Success) {
            throw NoConvergence("real symmetric eigensolver did not converge");
        }
        es.values = solver.eigenvalues();
        es.vectors = solver.eigenvectors().cast<complex<double>>();
    } else {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(H);
        if (solver.info() != Eigen::Success) {
            throw NoConvergence("Hermitian eigensolver did not converge");
        }
        es.values = solver.eigenvalues();
        es.vectors = solver.eigenvectors();
    }
    return es;
}

EigenSystem eigh(const ChainHamiltonian& chain) { return eigh(chain.H); }

OccupationProfile thermal_occupations(const ModelParams& model, int sites, double T,
                                      double mu_qp) {
    if (!std::isfinite(T) || T <= 0.0) {
        throw NonFiniteInput("thermal occupations need a finite temperature > 0");
    }
    if (!std::isfinite(mu_qp)) {
        throw NonFiniteInput("quasi-particle chemical potential must be finite");
    }
    const ChainHamiltonian chain = build_open_chain(model, sites);
    const EigenSystem es = eigh(chain);

    OccupationProfile profile;
    profile.T = T;
    profile.mu_qp = mu_qp;
    profile.orbitals_per_site = chain.orbitals_per_site;
    if (chain.kind == ChainKind::BdG) {
        profile.n = bdg_occupations(es, chain.sites, T, mu_qp);
        return profile;
    }
    const Eigen::Index dim = es.values.size();
    Eigen::VectorXd occ(dim);
    for (Eigen::Index m = 0; m < dim; ++m) occ(m) = fermi((es.values(m) - mu_qp) / T);
    const Eigen::VectorXd per_orbital = es.vectors.cwiseAbs2() * occ;
    profile.n.resize(static_cast<std::size_t>(chain.sites));
    for (int i = 0; i < chain.sites; ++i) {
        profile.n[static_cast<std::size_t>(i)] = per_orbital(2 * i) + per_orbital(2 * i + 1);
    }
    return profile;
}

OccupationProfile thermal_occupations(const ModelParams& model, int sites, double T) {
    return thermal_occupations(model, sites, T, -1e-3 * dominant_hopping(model));
}

double edge_bulk_ratio(const OccupationProfile& profile, int edge_window) {
    const int sites = static_cast<int>(profile.n.size());
    if (sites < 8) {
        throw InvalidSpec("edge/bulk ratio needs at least 8 sites, got " +
                          std::to_string(sites));
    }
    if (edge_window < 1 || 4 * edge_window > sites) {
        throw InvalidSpec("edge window must cover between 1 site and a quarter of the chain");
    }
    double edge = 0.0;
    for (int i = 0; i < edge_window; ++i) edge += profile.n[static_cast<std::size_t>(i)];
    edge /= edge_window;
    const double bulk = profile.n[static_cast<std::size_t>(sites / 2)];
    if (bulk < 1e-15) {
        throw DivisionByZero("bulk occupation vanishes, edge/bulk ratio undefined");
    }
    return edge / bulk;
}

} // namespace uhlmann
