#include "bhlab/potential.hpp"

#include <cmath>
#include <sstream>

#include "bhlab/sobolev.hpp"

namespace bhlab {

std::string to_string(PotentialKind kind) {
  switch (kind) {
    case PotentialKind::GaussianBump: return "gaussian-bump";
    case PotentialKind::SumOfBumps: return "sum-of-bumps";
    case PotentialKind::SingleMode: return "single-mode";
  }
  return "unknown";
}

PotentialKind potential_kind_from_string(const std::string& name) {
  if (name == "gaussian-bump") return PotentialKind::GaussianBump;
  if (name == "sum-of-bumps") return PotentialKind::SumOfBumps;
  if (name == "single-mode") return PotentialKind::SingleMode;
  throw InvalidInput("unknown potential kind '" + name +
                     "' (expected gaussian-bump, sum-of-bumps or single-mode)");
}

double smooth_cutoff(double t) {
  if (t <= 0) return 1.0;
  if (t >= 1) return 0.0;
  const double up = std::exp(-1.0 / (1.0 - t));
  const double down = std::exp(-1.0 / t);
  return up / (up + down);
}

double effective_support_radius(const PotentialSpec& spec, const Bump& b, const BoxDomain& box) {
  if (b.support_radius) return *b.support_radius;
  double nearest = box.length;
  for (int d = 0; d < 3; ++d) nearest = std::min({nearest, b.center[d], box.length - b.center[d]});
  return nearest - spec.margin;
}

void validate_potential(const PotentialSpec& spec, const BoxDomain& box) {
  std::ostringstream os;
  const double half_n = PotentialSpec::dimension / 2.0;
  if (!(spec.s > half_n)) os << "s must exceed n/2 = 1.5 (got " << spec.s << "); ";
  if (!(spec.margin > 0)) os << "margin must be positive; ";
  if (spec.bumps.empty()) os << "at least one bump is required; ";
  if (spec.kind != PotentialKind::SumOfBumps && spec.bumps.size() > 1)
    os << to_string(spec.kind) << " takes exactly one bump; ";
  for (std::size_t i = 0; i < spec.bumps.size(); ++i) {
    const Bump& b = spec.bumps[i];
    if (spec.kind != PotentialKind::SingleMode && !(b.width > 0)) os << "bump " << i << ": width must be positive; ";
    const double radius = effective_support_radius(spec, b, box);
    if (!(radius > 0)) {
      os << "bump " << i << ": support touches the boundary margin; ";
      continue;
    }
    for (int d = 0; d < 3; ++d) {
      if (b.center[d] - radius < spec.margin - 1e-12 || b.center[d] + radius > box.length - spec.margin + 1e-12) {
        os << "bump " << i << ": support leaves the box interior along axis " << d << "; ";
        break;
      }
    }
  }
  if (os.tellp() != 0) throw InvalidInput("invalid potential: " + os.str());
}

ScalarField synthesize_potential(const PotentialSpec& spec, const BoxDomain& box) {
  box.validate();
  validate_potential(spec, box);
  ScalarField q(box);
  const int side = box.lattice_side();
  for (const Bump& b : spec.bumps) {
    const double radius = effective_support_radius(spec, b, box);
    const double inner = 0.75 * radius;
    for (int k = 0; k < side; ++k)
      for (int j = 0; j < side; ++j)
        for (int i = 0; i < side; ++i) {
          const Vec3<double> d = Vec3<double>(box.coordinate(i), box.coordinate(j), box.coordinate(k)) - b.center;
          const double rho = d.norm();
          if (rho >= radius) continue;
          const double taper = smooth_cutoff((rho - inner) / (radius - inner));
          double shape;
          if (spec.kind == PotentialKind::SingleMode) {
            shape = std::cos(spec.wavevector.dot(d));
          } else {
            shape = std::exp(-(rho * rho) / (b.width * b.width));
          }
          q(i, j, k) += b.amplitude * shape * taper;
        }
  }
  if (spec.bound_M) {
    const double hs = sobolev_norm(q, spec.s);
    if (hs > *spec.bound_M) {
      std::ostringstream os;
      os << "potential H^" << spec.s << " norm " << hs << " exceeds the declared bound M = " << *spec.bound_M;
      throw InvalidInput(os.str());
    }
  }
  return q;
}

}  // namespace bhlab
