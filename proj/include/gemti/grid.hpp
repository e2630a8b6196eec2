#ifndef GEMTI_GRID_HPP
#define GEMTI_GRID_HPP

#include <cmath>

#include "gemti/errors.hpp"

namespace gemti {

// Uniform sampling lattice for t (us).
struct TimeGrid {
  double t0 = 0.0;
  double dt = 1.0;
  int n = 2;

  TimeGrid() = default;
  TimeGrid(double t0_, double dt_, int n_) : t0(t0_), dt(dt_), n(n_) {
    if (!(dt > 0.0) || !std::isfinite(dt))
      throw InvalidParamsError("TimeGrid: dt must be positive and finite");
    if (n < 2) throw InvalidParamsError("TimeGrid: need at least 2 samples");
    if (!std::isfinite(t0) || !std::isfinite(span()))
      throw InvalidParamsError("TimeGrid: non-finite extent");
  }

  double t(int i) const { return t0 + i * dt; }
  double span() const { return n * dt; }
  double t_end() const { return t0 + (n - 1) * dt; }

  bool operator==(const TimeGrid&) const = default;
};

// Uniform sampling lattice for z (cm).
struct SpaceGrid {
  double z0 = 0.0;
  double dz = 1.0;
  int n = 2;

  SpaceGrid() = default;
  SpaceGrid(double z0_, double dz_, int n_) : z0(z0_), dz(dz_), n(n_) {
    if (!(dz > 0.0) || !std::isfinite(dz))
      throw InvalidParamsError("SpaceGrid: dz must be positive and finite");
    if (n < 1) throw InvalidParamsError("SpaceGrid: need at least 1 cell");
  }

  double z(int i) const { return z0 + i * dz; }
  double span() const { return n * dz; }

  bool operator==(const SpaceGrid&) const = default;
};

}  // namespace gemti

#endif
