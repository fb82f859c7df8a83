// Bob's measurement direction sets: one representative per antipodal pair of
// the square, octahedron, icosahedron, dodecahedron and cube vertices, the
// two custom constructions (n = 4, 5) with a tilted ring around +z, a marker
// for the continuum limit, and user-supplied sets loaded from text files.
// align_set rotates a set into the analysis frame where the bound-maximizing
// signed sum of directions points along +z.
#pragma once

#include "qsteer/qubit_algebra.hpp"

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace qsteer {

enum class SetLabel {
  square,
  octahedron,
  custom4,
  custom5,
  icosahedron,
  dodecahedron,
  cube4,
  continuum,
  user,
};

std::string_view to_string(SetLabel label);
SetLabel parse_set_label(std::string_view name);  // throws std::invalid_argument

struct MeasurementSet {
  SetLabel label = SetLabel::user;
  std::string name = "user";
  std::vector<Vec3> directions;  // empty for the continuum marker
  bool aligned = false;          // true implies sum of directions parallel to +z

  bool is_continuum() const { return label == SetLabel::continuum; }
  int n() const { return static_cast<int>(directions.size()); }
};

// Canonical (not yet aligned) vertex representatives for square, octahedron,
// icosahedron, dodecahedron and cube4; golden-ratio coordinates for the last
// three.  Representatives have nonnegative z (ties broken by y, then x).
// Throws std::invalid_argument for other labels.
MeasurementSet platonic_set(SetLabel label);

// The tilted-ring constructions: b_1 = (0,0,1) plus n-1 directions at polar
// angle beta_0 with cos(beta_0) = (sqrt(13)-1)/6, azimuths 0, 2pi/3, 4pi/3
// (n = 4) or 0, pi/2, pi, 3pi/2 (n = 5).  Aligned by construction.
MeasurementSet custom_set(int n);

// Marker for the n -> infinity limit (uniform over the upper hemisphere).
MeasurementSet continuum_set();

// Dispatch on any constructible label (everything except user).
MeasurementSet make_set(SetLabel label);

// Parse a user set: one direction per line as three whitespace-separated
// numbers; lines starting with # and blank lines are ignored.  Directions are
// normalized on load; a warning is written (to `warnings`, or std::cerr when
// null) whenever a norm deviates from 1 by more than 1e-6.
MeasurementSet parse_set_text(std::istream& in, std::string name,
                              std::ostream* warnings = nullptr);
MeasurementSet load_set_file(const std::string& path,
                             std::ostream* warnings = nullptr);

// Rigid rotation taking the C_n-maximizing signed direction sum to +z (after
// replacing each direction by its sign-preferred representative), with the
// azimuthal gauge fixed by putting the first off-axis direction at azimuth 0.
// Idempotent on aligned sets.  Throws std::invalid_argument if the maximizing
// sum vanishes and the continuum marker is returned unchanged.
MeasurementSet align_set(const MeasurementSet& set);

// Enforce the type invariants: unit norms, no duplicate or antipodal pair
// within 1e-9, and (when the aligned flag is set) direction sum parallel to
// +z within 1e-9.  Throws std::invalid_argument.
void validate_set(const MeasurementSet& set);

}  // namespace qsteer
