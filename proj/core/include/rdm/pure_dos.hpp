#pragma once

#include "rdm/hs_dos.hpp"
#include "rdm/spectrum.hpp"

namespace rdm {

// Haar pure-state populations are Dirichlet(1, ..., 1), so <psi|H|psi> has the
// divided-difference (B-spline) density of the levels. Both functions are
// Plateau-normalized (Omega(E_max) = 1) and need a non-degenerate spectrum.
double pure_omega_density(const Spectrum& spectrum, double energy);
double pure_omega_integrated(const Spectrum& spectrum, double energy);

/// Residue table with unit weight per degeneracy unit; covers degenerate
/// spectra too. Raw plateau is 1/(d-1)!.
HsCoefficientTable pure_table(const Spectrum& spectrum, Arithmetic arithmetic = Arithmetic::Exact);

}  // namespace rdm
