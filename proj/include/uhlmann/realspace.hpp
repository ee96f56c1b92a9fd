// Open-boundary chain Hamiltonians, a dense Hermitian eigensolver wrapper,
// thermal occupation profiles, and the edge/bulk occupation ratio used to
// locate phase boundaries from position-space data.
//
// Chains are assembled in an interleaved orbital basis (a_1, b_1, a_2, b_2,
// ...) for the two-orbital ladders and in Nambu form (c_1..c_N, c_1^..c_N^)
// for the pairing chain. Occupations for the pairing chain count physical
// fermions by summing the positive quasi-particle branch only, so the Nambu
// doubling never double counts.
#pragma once

#include <Eigen/Dense>
#include <vector>

#include "uhlmann/models.hpp"

namespace uhlmann {

enum class ChainKind { NumberConserving, BdG };

struct ChainHamiltonian {
    Eigen::MatrixXcd H;        // dim x dim, Hermitian
    ChainKind kind = ChainKind::NumberConserving;
    int sites = 0;             // number of unit cells (ladders) or sites (pairing chain)
    int orbitals_per_site = 1; // per-site particle-number bound
};

struct EigenSystem {
    Eigen::VectorXd values;    // ascending
    Eigen::MatrixXcd vectors;  // orthonormal columns, vectors.col(m) <-> values(m)
};

struct OccupationProfile {
    std::vector<double> n;     // expected particle number per site
    double T = 0.0;
    double mu_qp = 0.0;
    int orbitals_per_site = 1;
};

// Assembles the open-boundary chain for ladder and pairing models.
// Throws InvalidSpec for sites < 4 and UnsupportedModel for the continuum
// pairing model, which has no chain form.
ChainHamiltonian build_open_chain(const ModelParams& model, int sites);

// Dense Hermitian eigendecomposition with ascending eigenvalues.
// Throws InvalidSpec when the input is not Hermitian and NoConvergence when
// the iteration fails. Real symmetric input takes a faster real-arithmetic
// path; the results satisfy
//   max|HV - V diag(w)| < dim * 1e-11 * max|H|,  max|V^ V - I| < dim * 1e-12.
EigenSystem eigh(const Eigen::MatrixXcd& H);
EigenSystem eigh(const ChainHamiltonian& chain);

// Thermal occupation per site at temperature T > 0 with a quasi-particle
// chemical potential mu_qp. Number-conserving chains fill eigenmodes with
// Fermi factors; the pairing chain fills positive-energy quasi-particle
// modes and counts their hole content, with numerically degenerate +-0 pairs
// re-expressed in a particle-hole self-conjugate basis first so the result
// does not depend on the arbitrary mixing returned by the eigensolver.
OccupationProfile thermal_occupations(const ModelParams& model, int sites, double T,
                                      double mu_qp);

// Same, with the default probe potential mu_qp = -1e-3 * dominant_hopping,
// small and negative so the lower band fills completely at low temperature.
OccupationProfile thermal_occupations(const ModelParams& model, int sites, double T);

// Ratio of the edge occupation (averaged over the first edge_window sites,
// one site by default) to the occupation of the middle site. Throws
// InvalidSpec for fewer than 8 sites or a window exceeding a quarter of the
// chain, DivisionByZero when the bulk occupation is below 1e-15.
double edge_bulk_ratio(const OccupationProfile& profile, int edge_window = 1);

} // namespace uhlmann
