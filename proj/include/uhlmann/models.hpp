// Model definitions and momentum-space two-level decompositions. Each lattice
// model is mapped to H(k) = E(k) n(k).sigma/2 in the basis where its chiral
// operator is diagonal, so n lies in the equatorial plane and the polar angle
// phi(k) is well defined. Conventions are pinned by the periodic-chain
// spectral oracle: real-space single-particle energies are +-E(k)/2.
#pragma once

#include <array>
#include <variant>
#include <vector>

#include "uhlmann/errors.hpp"

namespace uhlmann {

struct CreutzParams {
    double K = 0.5;              // leg hopping; the standard point is 2K = 1
    double M = 1.0;              // rung hopping; transition at M = 2K
    double phi_flux = 1.5707963267948966; // pi/2, one flux quantum per plaquette
};

struct SSHParams {
    double v = 1.0;              // intra-cell hopping
    double w = 1.0;              // inter-cell hopping; transition at v = w
};

struct KitaevParams {
    double t = 0.5;              // hopping
    double mu = 1.0;             // chemical potential; transition at |mu| = 2t
    double delta = 1.0;          // p-wave pairing amplitude
};

struct BCSParams {
    double V = 0.3;              // pairing coupling (N0*V is the dimensionless strength)
    double mu = 0.0;             // chemical potential (energies measured from it)
    double omega_D = 1.0;        // Debye cutoff, the energy unit
    double N0 = 1.0;             // density of states at the Fermi level
};

using ModelKind = std::variant<CreutzParams, SSHParams, KitaevParams, BCSParams>;

struct ModelParams {
    ModelKind kind;
    double T = 0.0;              // temperature of the thermal state
};

// Per-momentum two-level data. E is the full splitting between the two
// levels of H(k) (twice the single-particle energy |d(k)|); n is the unit
// Bloch direction in the chiral basis; phi its equatorial polar angle.
struct BlochState {
    double E = 0.0;
    std::array<double, 3> n{0.0, 0.0, 0.0};
    double phi = 0.0;
};

// Uniform closed discretization of the Brillouin zone [-pi, pi).
struct MomentumGrid {
    int Nk = 501;

    double point(int j) const;
    static MomentumGrid uniform(int Nk);
};

BlochState bloch_state(const ModelParams& model, double k);

// Signed winding of phi(k) around the zone, rounded to the nearest integer.
// Raises GapClosed near criticality and UnwrapFailure on too-coarse grids.
int winding_number(const ModelParams& model, const MomentumGrid& grid);

// Eigenvalues of the N-cell periodic real-space Hamiltonian (BdG doubled for
// the pairing model), sorted ascending. Oracle for bloch_state conventions.
std::vector<double> periodic_chain_spectrum(const ModelParams& model, int N);

// Continuation of phi along the grid by nearest-branch unwrapping. Returns
// Nk angles plus the total increment around the closed loop. Shared by the
// winding and holonomy integrals.
struct UnwrappedAngles {
    std::vector<double> E;       // full two-level splitting per point
    std::vector<double> phi;     // unwrapped polar angle per point
    double total = 0.0;          // phi(k0 + 2pi) - phi(k0)
};
UnwrappedAngles unwrapped_phi(const ModelParams& model, const MomentumGrid& grid);

// Largest hopping scale of the model; sets default tolerances and the
// default quasi-particle chemical potential in the realspace module.
double dominant_hopping(const ModelParams& model);

const char* model_name(const ModelParams& model);

} // namespace uhlmann
