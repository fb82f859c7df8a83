#include "qsteer/measurement_sets.hpp"

#include "qsteer/lhs_bound.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace qsteer {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kPhi = std::numbers::phi;  // golden ratio (1+sqrt(5))/2

// Tolerance for geometric sanity checks (duplicates, alignment, unit norm).
constexpr double kGeomTol = 1e-9;

MeasurementSet finish(SetLabel label, std::vector<Vec3> dirs, bool aligned) {
  MeasurementSet set;
  set.label = label;
  set.name = std::string(to_string(label));
  set.directions = std::move(dirs);
  set.aligned = aligned;
  for (Vec3& d : set.directions) d.normalize();
  validate_set(set);
  return set;
}

}  // namespace

std::string_view to_string(SetLabel label) {
  switch (label) {
    case SetLabel::square: return "square";
    case SetLabel::octahedron: return "octahedron";
    case SetLabel::custom4: return "custom4";
    case SetLabel::custom5: return "custom5";
    case SetLabel::icosahedron: return "icosahedron";
    case SetLabel::dodecahedron: return "dodecahedron";
    case SetLabel::cube4: return "cube4";
    case SetLabel::continuum: return "continuum";
    case SetLabel::user: return "user";
  }
  return "unknown";
}

SetLabel parse_set_label(std::string_view name) {
  for (SetLabel label :
       {SetLabel::square, SetLabel::octahedron, SetLabel::custom4, SetLabel::custom5,
        SetLabel::icosahedron, SetLabel::dodecahedron, SetLabel::cube4,
        SetLabel::continuum, SetLabel::user}) {
    if (name == to_string(label)) return label;
  }
  throw std::invalid_argument("unknown measurement set label: " + std::string(name));
}

MeasurementSet platonic_set(SetLabel label) {
  switch (label) {
    case SetLabel::square:
      // Vertices (+-1, 0, +-1)/sqrt(2) of a square in the xz-plane.
      return finish(label, {{1, 0, 1}, {-1, 0, 1}}, false);
    case SetLabel::octahedron:
      return finish(label, {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}, false);
    case SetLabel::icosahedron:
      // Cyclic permutations of (0, +-1, +-phi).
      return finish(label,
                    {{0, 1, kPhi},
                     {0, -1, kPhi},
                     {1, kPhi, 0},
                     {-1, kPhi, 0},
                     {kPhi, 0, 1},
                     {-kPhi, 0, 1}},
                    false);
    case SetLabel::dodecahedron:
      // (+-1, +-1, +-1) plus cyclic permutations of (0, +-1/phi, +-phi).
      return finish(label,
                    {{1, 1, 1},
                     {-1, 1, 1},
                     {1, -1, 1},
                     {-1, -1, 1},
                     {0, 1 / kPhi, kPhi},
                     {0, -1 / kPhi, kPhi},
                     {1 / kPhi, kPhi, 0},
                     {-1 / kPhi, kPhi, 0},
                     {kPhi, 0, 1 / kPhi},
                     {-kPhi, 0, 1 / kPhi}},
                    false);
    case SetLabel::cube4:
      return finish(label, {{1, 1, 1}, {-1, 1, 1}, {1, -1, 1}, {-1, -1, 1}}, false);
    default:
      throw std::invalid_argument("platonic_set: label has no platonic construction");
  }
}

MeasurementSet custom_set(int n) {
  if (n != 4 && n != 5) {
    throw std::invalid_argument("custom_set: only n = 4 and n = 5 are defined");
  }
  const double cos_b0 = (std::sqrt(13.0) - 1.0) / 6.0;
  const double sin_b0 = std::sqrt(1.0 - cos_b0 * cos_b0);
  std::vector<Vec3> dirs{{0, 0, 1}};
  const int ring = n - 1;
  for (int j = 0; j < ring; ++j) {
    const double phi = 2.0 * kPi * j / ring;
    dirs.emplace_back(sin_b0 * std::cos(phi), sin_b0 * std::sin(phi), cos_b0);
  }
  // The ring azimuths cancel in the sum, so the set is aligned as built.
  return finish(n == 4 ? SetLabel::custom4 : SetLabel::custom5, std::move(dirs), true);
}

MeasurementSet continuum_set() {
  MeasurementSet set;
  set.label = SetLabel::continuum;
  set.name = "continuum";
  set.aligned = true;  // the hemisphere convention is the aligned frame
  return set;
}

MeasurementSet make_set(SetLabel label) {
  switch (label) {
    case SetLabel::custom4: return custom_set(4);
    case SetLabel::custom5: return custom_set(5);
    case SetLabel::continuum: return continuum_set();
    case SetLabel::user:
      throw std::invalid_argument("make_set: user sets are loaded from files");
    default: return platonic_set(label);
  }
}

MeasurementSet parse_set_text(std::istream& in, std::string name,
                              std::ostream* warnings) {
  std::ostream& warn = warnings ? *warnings : std::cerr;
  std::vector<Vec3> dirs;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream fields(line);
    double x = 0, y = 0, z = 0;
    std::string extra;
    if (!(fields >> x >> y >> z)) {
      throw std::invalid_argument(name + ": line " + std::to_string(line_no) +
                                  " is not three numbers");
    }
    if (fields >> extra) {
      throw std::invalid_argument(name + ": line " + std::to_string(line_no) +
                                  " has trailing fields");
    }
    Vec3 d{x, y, z};
    const double norm = d.norm();
    if (norm < 1e-12) {
      throw std::invalid_argument(name + ": line " + std::to_string(line_no) +
                                  " is a zero vector");
    }
    if (std::abs(norm - 1.0) > 1e-6) {
      warn << "warning: " << name << " line " << line_no << ": direction norm "
           << norm << " deviates from 1; normalizing\n";
    }
    dirs.push_back(d / norm);
  }
  MeasurementSet set;
  set.label = SetLabel::user;
  set.name = std::move(name);
  set.directions = std::move(dirs);
  set.aligned = false;
  validate_set(set);
  return set;
}

MeasurementSet load_set_file(const std::string& path, std::ostream* warnings) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open set file: " + path);
  return parse_set_text(in, path, warnings);
}

MeasurementSet align_set(const MeasurementSet& set) {
  if (set.is_continuum()) return set;
  validate_set(set);

  // Pick the bound-maximizing sign pattern; among degenerate maximizers take
  // the one flipping fewest directions (ties: lexicographically largest), so
  // aligned inputs come back unchanged.
  const SteeringBound bound = lhs_bound(set);
  const std::vector<int>* best = nullptr;
  int best_score = std::numeric_limits<int>::min();
  for (const auto& pattern : bound.maximizing_patterns) {
    int score = 0;
    for (int s : pattern) score += s;
    if (best == nullptr || score > best_score ||
        (score == best_score && pattern > *best)) {
      best = &pattern;
      best_score = score;
    }
  }

  std::vector<Vec3> dirs = set.directions;
  Vec3 sum = Vec3::Zero();
  for (size_t k = 0; k < dirs.size(); ++k) {
    dirs[k] *= (*best)[k];
    sum += dirs[k];
  }
  const double norm = sum.norm();
  if (norm < kGeomTol) {
    throw std::invalid_argument("align_set: maximizing direction sum vanishes");
  }

  // Rodrigues rotation taking sum/|sum| to +z.
  const Vec3 u = sum / norm;
  const Vec3 z{0, 0, 1};
  const Vec3 axis = u.cross(z);
  const double s = axis.norm();
  const double c = u.dot(z);
  Eigen::Matrix3d rot;
  if (s < 1e-12) {
    rot = Eigen::Matrix3d::Identity();
    if (c < 0) rot.diagonal() << 1, -1, -1;  // u = -z: half turn about x
  } else {
    Eigen::Matrix3d skew;
    skew << 0, -axis.z(), axis.y(), axis.z(), 0, -axis.x(), -axis.y(), axis.x(), 0;
    rot = Eigen::Matrix3d::Identity() + skew + skew * skew * ((1.0 - c) / (s * s));
  }
  for (Vec3& d : dirs) d = (rot * d).normalized();

  // Azimuthal gauge: first off-axis direction at azimuth 0.
  for (const Vec3& d : dirs) {
    if (std::hypot(d.x(), d.y()) > kGeomTol) {
      const double gamma = std::atan2(d.y(), d.x());
      Eigen::Matrix3d gauge;
      gauge << std::cos(gamma), std::sin(gamma), 0, -std::sin(gamma),
          std::cos(gamma), 0, 0, 0, 1;
      for (Vec3& e : dirs) e = (gauge * e).normalized();
      break;
    }
  }

  MeasurementSet out;
  out.label = set.label;
  out.name = set.name;
  out.directions = std::move(dirs);
  out.aligned = true;
  validate_set(out);
  return out;
}

void validate_set(const MeasurementSet& set) {
  if (set.is_continuum()) {
    if (!set.directions.empty()) {
      throw std::invalid_argument("continuum marker must carry no directions");
    }
    return;
  }
  for (const Vec3& d : set.directions) {
    if (std::abs(d.squaredNorm() - 1.0) > kGeomTol) {
      throw std::invalid_argument(set.name + ": direction is not unit length");
    }
  }
  for (size_t i = 0; i < set.directions.size(); ++i) {
    for (size_t j = i + 1; j < set.directions.size(); ++j) {
      if (std::abs(set.directions[i].dot(set.directions[j])) > 1.0 - kGeomTol) {
        throw std::invalid_argument(set.name +
                                    ": directions " + std::to_string(i) + " and " +
                                    std::to_string(j) + " are equal or antipodal");
      }
    }
  }
  if (set.aligned && !set.directions.empty()) {
    Vec3 sum = Vec3::Zero();
    for (const Vec3& d : set.directions) sum += d;
    if (std::hypot(sum.x(), sum.y()) > kGeomTol * std::max(1.0, sum.norm())) {
      throw std::invalid_argument(set.name + ": aligned flag set but direction sum "
                                             "is not parallel to +z");
    }
  }
}

}  // namespace qsteer
