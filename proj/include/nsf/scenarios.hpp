#pragma once

#include "nsf/config.hpp"
#include "nsf/state.hpp"

namespace nsf {

/// Discretely divergence-free velocity from the node stream function
/// psi = amp * ly/(k pi) * sin^2(k pi x/lx) sin^2(k pi y/ly); the peak speed is
/// close to amp and the wall normals vanish.
VectorField stream_velocity(const Grid& g, double amp, int k);

/// Smooth non-negative bump cos^2(pi r / 2R) inside radius R around (x0,y0).
ScalarField warm_spot(const Grid& g, double x0, double y0, double radius);

/// Initial state described by the config:
///   pudding  density 1 + a sin(2 pi x/lx) sin(pi y/ly), stream-function
///            velocity, temperature theta_min plus a central warm spot;
///   rest     uniform density, no motion, the same temperature;
///   random   seeded smooth random modes for all three fields.
/// In all cases min theta0 = theta_min (the spot vanishes near the walls).
SimState initial_state(const RunConfig& c);

}  // namespace nsf
