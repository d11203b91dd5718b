#pragma once

#include "nsf/grid.hpp"

namespace nsf {

/// Upwind mass flux rho_up * adv through every cell face, stored in the
/// VectorField layout. Wall faces carry no flux. For a zero face velocity the
/// two cells are averaged (the flux vanishes either way).
VectorField mass_flux(const ScalarField& rho, const VectorField& adv, const Grid& g);

/// Largest per-cell outflow Courant sum dt * sum_out |a_f| / h_f. The upwind
/// update is a convex combination of neighbours whenever this is <= 1.
double courant_number(const VectorField& adv, double dt, const Grid& g);

/// One explicit first-order upwind step of rho_t + div(rho adv) = 0.
/// Throws std::domain_error when courant_number > 1.
ScalarField transport_density(const ScalarField& rho, const VectorField& adv, double dt,
                              const Grid& g);

/// Upwind rho (adv . grad) s at cell centres.
ScalarField advect_scalar(const ScalarField& s, const ScalarField& rho, const VectorField& adv,
                          const Grid& g);

/// Face-wise upwind rho (adv . grad) w on interior faces.
VectorField advect_velocity(const VectorField& w, const ScalarField& rho, const VectorField& adv,
                            const Grid& g);

/// The same operators with a precomputed cell-face mass flux. Results are
/// accumulated into `out` (out += ...).
///
/// For cells: sum over inflow faces of |F| (s_self - s_upwind) / h.
/// For face control volumes the fluxes are averages of the two adjacent
/// cell-face fluxes, which keeps the face densities (arithmetic means of the
/// cell densities) consistent with the discrete continuity equation.
void add_scalar_advection(const VectorField& flux, const ScalarField& s, ScalarField& out);
void add_velocity_advection(const VectorField& flux, const VectorField& w, VectorField& out);

/// Diagonal entries of the two advection operators (sum of inflow |F|/h).
ScalarField scalar_advection_diagonal(const VectorField& flux);
VectorField velocity_advection_diagonal(const VectorField& flux);

/// Arithmetic mean of the adjacent cells on interior faces; zero on walls.
VectorField face_density(const ScalarField& rho);

}  // namespace nsf
