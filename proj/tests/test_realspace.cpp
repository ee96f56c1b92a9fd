// Position-space checks: chain assembly against hand-written entries, the
// eigensolver residual contract, occupation profiles against frozen
// references (edge dips in the nontrivial phase, flat profiles otherwise),
// Majorana zero-mode localization, and the edge/bulk ratio table.
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "uhlmann/errors.hpp"
#include "uhlmann/models.hpp"
#include "uhlmann/realspace.hpp"

using namespace uhlmann;
using std::complex;

namespace {

constexpr double kPi = 3.14159265358979323846;

ModelParams creutz(double M) { return ModelParams{CreutzParams{0.5, M, kPi / 2}, 0.0}; }
ModelParams ssh(double v, double w) { return ModelParams{SSHParams{v, w}, 0.0}; }
ModelParams kitaev(double mu) { return ModelParams{KitaevParams{0.5, mu, 1.0}, 0.0}; }

std::vector<double> sorted_abs(const Eigen::VectorXd& w) {
    std::vector<double> a(w.data(), w.data() + w.size());
    for (double& x : a) x = std::abs(x);
    std::sort(a.begin(), a.end());
    return a;
}

double residual(const Eigen::MatrixXcd& H, const EigenSystem& es) {
    return (H * es.vectors - es.vectors * es.values.asDiagonal().toDenseMatrix()
                                              .cast<complex<double>>())
        .cwiseAbs()
        .maxCoeff();
}

double orthonormality(const EigenSystem& es) {
    const Eigen::Index dim = es.vectors.rows();
    return (es.vectors.adjoint() * es.vectors -
            Eigen::MatrixXcd::Identity(dim, dim))
        .cwiseAbs()
        .maxCoeff();
}

} // namespace

TEST_SUITE("realspace") {

TEST_CASE("open chains assemble the advertised matrix elements") {
    const ChainHamiltonian cz = build_open_chain(creutz(0.7), 6);
    REQUIRE(cz.H.rows() == 12);
    CHECK(cz.kind == ChainKind::NumberConserving);
    CHECK(cz.orbitals_per_site == 2);
    CHECK((cz.H - cz.H.adjoint()).cwiseAbs().maxCoeff() < 1e-14);
    // Horizontal hop picks up the flux phase, rungs are real.
    CHECK(std::abs(cz.H(2, 0) - complex<double>(0.0, 0.5)) < 1e-15);
    CHECK(std::abs(cz.H(3, 1) - complex<double>(0.0, -0.5)) < 1e-15);
    CHECK(std::abs(cz.H(3, 0) - complex<double>(-0.5, 0.0)) < 1e-15);
    CHECK(std::abs(cz.H(0, 1) - complex<double>(-0.7, 0.0)) < 1e-15);
    CHECK(std::abs(cz.H(0, 10)) == 0.0); // open ends: no wrap-around hop

    const ChainHamiltonian sh = build_open_chain(ssh(1.2, 0.4), 5);
    REQUIRE(sh.H.rows() == 10);
    CHECK(sh.H.imag().cwiseAbs().maxCoeff() == 0.0);
    CHECK(std::abs(sh.H(0, 1) - complex<double>(1.2, 0.0)) < 1e-15);
    CHECK(std::abs(sh.H(1, 2) - complex<double>(0.4, 0.0)) < 1e-15);
    CHECK(std::abs(sh.H(9, 0)) == 0.0);

    const ChainHamiltonian kv = build_open_chain(kitaev(0.8), 4);
    REQUIRE(kv.H.rows() == 8);
    CHECK(kv.kind == ChainKind::BdG);
    CHECK(kv.orbitals_per_site == 1);
    CHECK((kv.H - kv.H.adjoint()).cwiseAbs().maxCoeff() < 1e-14);
    CHECK(std::abs(kv.H(0, 0) - complex<double>(-0.8, 0.0)) < 1e-15);
    CHECK(std::abs(kv.H(4, 4) - complex<double>(0.8, 0.0)) < 1e-15);
    CHECK(std::abs(kv.H(0, 1) - complex<double>(-0.5, 0.0)) < 1e-15);
    CHECK(std::abs(kv.H(0, 5) - complex<double>(1.0, 0.0)) < 1e-15);  // pairing block
    CHECK(std::abs(kv.H(1, 4) - complex<double>(-1.0, 0.0)) < 1e-15); // antisymmetric
    CHECK(std::abs(kv.H(4, 1) - complex<double>(-1.0, 0.0)) < 1e-15); // -D block

    CHECK_THROWS_AS(build_open_chain(creutz(0.5), 3), InvalidSpec);
    CHECK_THROWS_AS(build_open_chain(ModelParams{BCSParams{}, 0.0}, 50), UnsupportedModel);
}

TEST_CASE("bdg spectra pair up under particle hole conjugation") {
    const EigenSystem es = eigh(build_open_chain(kitaev(0.8), 30));
    for (int m = 0; m < 30; ++m) {
        CHECK(std::abs(es.values(m) + es.values(59 - m)) < 1e-11);
    }
}

TEST_CASE("eigensolver meets its residual contract") {
    // Diagonal input comes back sorted with unit coordinate vectors.
    Eigen::MatrixXcd D = Eigen::MatrixXcd::Zero(4, 4);
    D(0, 0) = 3.0; D(1, 1) = -1.0; D(2, 2) = 2.0; D(3, 3) = 0.0;
    const EigenSystem de = eigh(D);
    CHECK(de.values(0) == -1.0);
    CHECK(de.values(1) == 0.0);
    CHECK(de.values(2) == 2.0);
    CHECK(de.values(3) == 3.0);
    for (int m = 0; m < 4; ++m) CHECK(de.vectors.col(m).cwiseAbs().maxCoeff() ==
                                      doctest::Approx(1.0).epsilon(1e-14));

    Eigen::MatrixXcd X(2, 2);
    X << 0.0, 1.0, 1.0, 0.0;
    const EigenSystem xe = eigh(X);
    CHECK(std::abs(xe.values(0) + 1.0) < 1e-15);
    CHECK(std::abs(xe.values(1) - 1.0) < 1e-15);

    std::mt19937_64 rng(314159);
    std::uniform_real_distribution<double> uni(-1.0, 1.0);

    const int nr = 1000;
    Eigen::MatrixXcd R(nr, nr);
    for (int i = 0; i < nr; ++i)
        for (int j = 0; j < nr; ++j) R(i, j) = uni(rng);
    R = (R + R.adjoint()).eval();
    const EigenSystem re = eigh(R);
    const double scale_r = R.cwiseAbs().maxCoeff();
    CHECK(residual(R, re) < nr * 1e-11 * scale_r);
    CHECK(orthonormality(re) < nr * 1e-12);
    CHECK(std::is_sorted(re.values.data(), re.values.data() + nr));

    const int nc = 300;
    Eigen::MatrixXcd C(nc, nc);
    for (int i = 0; i < nc; ++i)
        for (int j = 0; j < nc; ++j) C(i, j) = complex<double>(uni(rng), uni(rng));
    C = (C + C.adjoint()).eval();
    const EigenSystem ce = eigh(C);
    CHECK(residual(C, ce) < nc * 1e-11 * C.cwiseAbs().maxCoeff());
    CHECK(orthonormality(ce) < nc * 1e-12);

    Eigen::MatrixXcd bad(2, 2);
    bad << 0.0, 1.0, 0.0, 0.0;
    CHECK_THROWS_AS(eigh(bad), InvalidSpec);
}

TEST_CASE("open spectra show in-gap modes only in the nontrivial phase") {
    const auto nontrivial = sorted_abs(eigh(build_open_chain(creutz(0.1), 500)).values);
    CHECK(nontrivial[0] < 1e-6);
    CHECK(nontrivial[1] < 1e-6);
    CHECK(nontrivial[2] > 0.3); // rest of the spectrum stays outside the gap

    // Trivial phase: the gap at this coupling is 0.5, no states inside it.
    const auto trivial = sorted_abs(eigh(build_open_chain(creutz(1.5), 500)).values);
    CHECK(trivial[0] > 0.45);

    const auto majorana = sorted_abs(eigh(build_open_chain(kitaev(0.5), 300)).values);
    CHECK(majorana[1] < 1e-8); // two-fold near-zero pair
    CHECK(majorana[1] - majorana[0] < 1e-8);
    CHECK(majorana[2] > 0.4);
}

TEST_CASE("open spectra approach the periodic band edges as the chain grows") {
    // Trivial-phase couplings: band |eps| in [0.6, 2.0] for these values.
    double prev_gap_err = 2.0;
    for (int N : {64, 256}) {
        const auto a = sorted_abs(eigh(build_open_chain(ssh(1.3, 0.7), N)).values);
        const double gap_err = std::abs(a.front() - 0.6);
        CHECK(gap_err < prev_gap_err);
        CHECK(gap_err < 12.0 / N);
        CHECK(a.back() < 2.0 + 1e-9);
        CHECK(a.back() > 2.0 - 12.0 / N);
        prev_gap_err = gap_err;
    }
}

TEST_CASE("zero modes localize at the chain ends") {
    const EigenSystem es = eigh(build_open_chain(creutz(0.1), 500));
    // The two smallest-|eps| columns sit at indices 499 and 500 of the
    // ascending spectrum.
    for (int m : {499, 500}) {
        REQUIRE(std::abs(es.values(m)) < 1e-6);
        double outer = 0.0, total = 0.0;
        for (int i = 0; i < 500; ++i) {
            const double w = std::norm(es.vectors(2 * i, m)) + std::norm(es.vectors(2 * i + 1, m));
            total += w;
            if (i < 50 || i >= 450) outer += w;
        }
        CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(outer / total > 0.99);
    }
}

TEST_CASE("ladder occupation profiles match frozen references") {
    const OccupationProfile cold = thermal_occupations(creutz(0.1), 500, 1e-5);
    REQUIRE(cold.n.size() == 500);
    CHECK(cold.mu_qp == doctest::Approx(-1e-3).epsilon(1e-12));
    // Empty zero modes carve half a particle out of each edge.
    CHECK(cold.n.front() == doctest::Approx(0.505).epsilon(1e-9));
    CHECK(cold.n.back() == doctest::Approx(0.505).epsilon(1e-9));
    CHECK(std::abs(cold.n.front() - 1.0) > 0.1);
    double mid_flat = 0.0;
    for (int i = 166; i < 333; ++i) mid_flat = std::max(mid_flat, std::abs(cold.n[i] - 1.0));
    CHECK(mid_flat < 1e-12);
    for (double n : cold.n) {
        CHECK(n >= 0.0);
        CHECK(n <= 2.0);
    }

    // Moderate temperature half-fills the zero modes and washes the dip out.
    const OccupationProfile warm = thermal_occupations(creutz(0.1), 500, 0.2);
    CHECK(warm.n.front() == doctest::Approx(0.998728536772).epsilon(1e-8));
    CHECK(std::abs(cold.n.front() - 1.0) / std::abs(warm.n.front() - 1.0) > 50.0);

    const OccupationProfile flat = thermal_occupations(creutz(1.0001), 500, 1e-5);
    double dev = 0.0;
    for (double n : flat.n) dev = std::max(dev, std::abs(n - 1.0));
    CHECK(dev < 1e-12);

    const OccupationProfile hot = thermal_occupations(creutz(0.1), 500, 100.0);
    double hot_dev = 0.0;
    for (double n : hot.n) hot_dev = std::max(hot_dev, std::abs(n - 1.0));
    CHECK(hot_dev < 1e-5);
}

TEST_CASE("occupation totals match the mode sum of fermi factors") {
    struct Probe { ModelParams model; int N; double T; };
    for (const Probe& p : {Probe{ssh(1.3, 0.7), 40, 0.3}, Probe{creutz(0.8), 60, 0.5}}) {
        const double mu_qp = -1e-3 * dominant_hopping(p.model);
        const OccupationProfile prof = thermal_occupations(p.model, p.N, p.T);
        double total = 0.0;
        for (double n : prof.n) total += n;
        const EigenSystem es = eigh(build_open_chain(p.model, p.N));
        double mode_sum = 0.0;
        for (Eigen::Index m = 0; m < es.values.size(); ++m) {
            mode_sum += 1.0 / (1.0 + std::exp((es.values(m) - mu_qp) / p.T));
        }
        CHECK(std::abs(total - mode_sum) < 1e-9);
    }
}

TEST_CASE("edge bulk ratios match frozen references across the transition") {
    struct Row { double mu, T, ratio; };
    const Row table[] = {
        {0.5, 1e-5, 1.152869036984}, {0.8, 1e-5, 1.182975384406},
        {1.0, 1e-5, 1.147630116361}, {1.5, 1e-5, 1.073049465805},
        {0.5, 0.2, 1.139826184581},  {0.8, 0.2, 1.154727438813},
        {1.0, 0.2, 1.135950898713},  {1.5, 0.2, 1.076303042600},
    };
    for (const Row& row : table) {
        const OccupationProfile prof = thermal_occupations(kitaev(row.mu), 300, row.T);
        CAPTURE(row.mu);
        CAPTURE(row.T);
        CHECK(edge_bulk_ratio(prof) == doctest::Approx(row.ratio).epsilon(1e-9));
        for (double n : prof.n) {
            CHECK(n >= 0.0);
            CHECK(n <= 1.0);
        }
    }
}

TEST_CASE("edge bulk ratio handles flat and degenerate profiles") {
    OccupationProfile flat;
    flat.n.assign(16, 0.7);
    CHECK(edge_bulk_ratio(flat) == 1.0);
    CHECK(edge_bulk_ratio(flat, 4) == 1.0);
    CHECK_THROWS_AS(edge_bulk_ratio(flat, 0), InvalidSpec);
    CHECK_THROWS_AS(edge_bulk_ratio(flat, 5), InvalidSpec);

    OccupationProfile empty_bulk;
    empty_bulk.n.assign(16, 0.5);
    empty_bulk.n[8] = 0.0;
    CHECK_THROWS_AS(edge_bulk_ratio(empty_bulk), DivisionByZero);

    OccupationProfile tiny;
    tiny.n.assign(5, 1.0);
    CHECK_THROWS_AS(edge_bulk_ratio(tiny), InvalidSpec);
}

TEST_CASE("occupation operations validate their inputs") {
    CHECK_THROWS_AS(thermal_occupations(creutz(0.5), 20, 0.0), NonFiniteInput);
    CHECK_THROWS_AS(thermal_occupations(creutz(0.5), 20, -0.1), NonFiniteInput);
    CHECK_THROWS_AS(thermal_occupations(creutz(0.5), 20, 0.1, std::nan("")), NonFiniteInput);
    CHECK_THROWS_AS(thermal_occupations(ModelParams{BCSParams{}, 0.0}, 20, 0.1),
                    UnsupportedModel);
    CHECK_THROWS_AS(thermal_occupations(creutz(0.5), 3, 0.1), InvalidSpec);
}

} // TEST_SUITE
