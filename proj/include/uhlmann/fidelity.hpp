// Closed-form per-mode and total fidelity F(rho, rho'), Tr sqrt(rho) sqrt(rho'),
// and the indicator Delta = F - Tr sqrt(rho) sqrt(rho') for thermal states of
// quadratic fermion Hamiltonians, plus a dense 2x2 matrix-function oracle that
// serves as the brute-force ground truth for the closed forms.
#pragma once

#include <array>
#include <complex>
#include <optional>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "uhlmann/models.hpp"

namespace uhlmann {

// One thermal two-level mode: full level splitting E, Bloch direction n,
// temperature T. T = 0 is legal and handled by exact limits.
struct ThermalMode {
    double E = 0.0;
    std::array<double, 3> n{0.0, 0.0, 1.0};
    double T = 0.0;
};

struct ModePair {
    ThermalMode a;
    ThermalMode b;
};

double fidelity_per_mode(const ModePair& pair);
double trace_sqrt_per_mode(const ModePair& pair);

struct FidelityReport {
    double F = 1.0;            // total fidelity, product over modes
    double F_density = 1.0;    // per-mode geometric mean F^(1/Nk)
    double trace_sqrt = 1.0;   // total Tr sqrt(rho) sqrt(rho')
    double delta = 0.0;        // F - trace_sqrt
    int Nk = 0;
    std::optional<std::vector<double>> per_mode; // per-k fidelity factors
};

// Product of per-mode values over the momentum grid for two lattice models of
// the same family (temperatures carried by the ModelParams). The reduction
// uses a fixed binary tree so results are bit-identical for any worker count.
FidelityReport fidelity_total(const ModelParams& model_a,
                              const ModelParams& model_b,
                              const MomentumGrid& grid,
                              bool keep_per_mode = false);

// Dense oracle: builds e^{-beta H/2} e^{-beta' H'} e^{-beta H/2} (and the
// analogous quarter-power product for the trace-sqrt) by eigendecomposition
// and evaluates the quadratic-Hamiltonian trace/determinant relations.
// Returns (fidelity, trace_sqrt). Raises IllConditioned when an intermediate
// exponent leaves the numerically safe range.
std::pair<double, double> fidelity_oracle_mode(const Eigen::Matrix2cd& H,
                                               const Eigen::Matrix2cd& Hp,
                                               double T, double Tp);

// E/(2T) with exact limits: 0 when E = 0, +infinity when T = 0 and E > 0.
double half_beta_E(double E, double T);

// Fixed binary-tree product reduction (split at n/2), the deterministic
// reduction order used for all totals.
double pairwise_product(const std::vector<double>& values);

} // namespace uhlmann
