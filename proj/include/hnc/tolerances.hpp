#pragma once

namespace hnc::tol {

// Absolute tolerance for hyperplane/boundary comparisons (closed strata use
// s >= -kGeom, interior strata use s > +kGeom, predicate memberships resolve
// toward the conservative branch within kGeom of their boundary).
inline constexpr double kGeom = 1e-9;

// Post-step drift allowance for the fixed-step integrator: closed-stratum
// margins may dip this far below zero before the executor flags an
// integration error.
inline constexpr double kIntegration = 1e-6;

}  // namespace hnc::tol
