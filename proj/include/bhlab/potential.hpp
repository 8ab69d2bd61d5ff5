#pragma once

#include <optional>
#include <string>
#include <vector>

#include "bhlab/grid.hpp"
#include "bhlab/probes.hpp"

namespace bhlab {

enum class PotentialKind { GaussianBump, SumOfBumps, SingleMode };

std::string to_string(PotentialKind kind);
PotentialKind potential_kind_from_string(const std::string& name);

struct Bump {
  Vec3<double> center = Vec3<double>::Constant(3.0);
  double width = 0.3;      // e-folding radius of exp(-|x-c|^2 / width^2)
  double amplitude = 1.0;
  std::optional<double> support_radius;  // default: distance to nearest face minus margin
};

/// Test potentials for the inverse problem: smooth, real, and compactly supported
/// strictly inside the box. Each bump is multiplied by a C-infinity radial cutoff
/// that is 1 on the inner three quarters of its support radius.
struct PotentialSpec {
  PotentialKind kind = PotentialKind::GaussianBump;
  std::vector<Bump> bumps{Bump{}};
  double margin = 0.4;                                // q == 0 within this distance of a face
  double s = 2.0;                                     // Sobolev exponent, > n/2
  std::optional<double> bound_M;                      // optional H^s bound to enforce
  Vec3<double> wavevector = Vec3<double>(2, 0, 0);    // single-mode only

  static constexpr int dimension = 3;
};

/// Support radius actually used for bump b.
double effective_support_radius(const PotentialSpec& spec, const Bump& b, const BoxDomain& box);

void validate_potential(const PotentialSpec& spec, const BoxDomain& box);

/// Samples q on every lattice node. Throws InvalidInput when any support reaches the margin.
ScalarField synthesize_potential(const PotentialSpec& spec, const BoxDomain& box);

/// C-infinity step: 1 for t <= 0, 0 for t >= 1.
double smooth_cutoff(double t);

}  // namespace bhlab
