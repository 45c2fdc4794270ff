#pragma once

#include <map>

#include "peclet/shear_profile.hpp"

namespace peclet {

// ---------------------------------------------------------------------------
// Bump primitives
//   theta(z) = exp(-1/z) for z > 0, else 0
//   psi(z)   = theta(z) / (theta(z) + theta(1-z))
//   phi(z)   = psi(z+2) psi(2-z)
// phi is 1 on |z|<=1 and 0 on |z|>=2. Evaluations go through the log-ratio
// e = 1/z - 1/(1-z) so nothing overflows near the endpoints.
// ---------------------------------------------------------------------------

inline double bump_theta(double z) {
  if (z <= 0.0) return 0.0;
  const double e = -1.0 / z;
  return e < -700.0 ? 0.0 : std::exp(e);
}

namespace bump_detail {

// psi(z) = 1 / (1 + exp(e)) with e = 1/z - 1/(1-z), for z in (0,1)
inline double expo(double z) { return 1.0 / z - 1.0 / (1.0 - z); }

inline double logistic(double e) {
  if (e > 700.0) return 0.0;
  if (e < -700.0) return 1.0;
  return 1.0 / (1.0 + std::exp(e));
}

// psi(z) * psi(1-z) = r / (1+r)^2 with r = exp(e)
inline double psi_product(double z) {
  const double e = expo(z);
  if (std::abs(e) > 700.0) return 0.0;
  const double r = std::exp(e);
  return r / ((1.0 + r) * (1.0 + r));
}

inline double G(double z) { return 1.0 / (z * z) + 1.0 / ((1.0 - z) * (1.0 - z)); }
inline double Gp(double z) {
  return -2.0 / (z * z * z) + 2.0 / ((1.0 - z) * (1.0 - z) * (1.0 - z));
}

}  // namespace bump_detail

inline double bump_psi(double z) {
  if (z <= 0.0) return 0.0;
  if (z >= 1.0) return 1.0;
  return bump_detail::logistic(bump_detail::expo(z));
}

inline double bump_psi_d1(double z) {
  if (z <= 0.0 || z >= 1.0) return 0.0;
  return bump_detail::G(z) * bump_detail::psi_product(z);
}

inline double bump_psi_d2(double z) {
  if (z <= 0.0 || z >= 1.0) return 0.0;
  using namespace bump_detail;
  const double pp = psi_product(z);
  const double psi1mz = logistic(-expo(z));  // psi(1-z)
  const double psiz = 1.0 - psi1mz;
  return Gp(z) * pp + G(z) * G(z) * pp * (psi1mz - psiz);
}

inline double bump_phi(double z) { return bump_psi(z + 2.0) * bump_psi(2.0 - z); }

inline double bump_phi_d1(double z) {
  return bump_psi_d1(z + 2.0) * bump_psi(2.0 - z) -
         bump_psi(z + 2.0) * bump_psi_d1(2.0 - z);
}

inline double bump_phi_d2(double z) {
  return bump_psi_d2(z + 2.0) * bump_psi(2.0 - z) -
         2.0 * bump_psi_d1(z + 2.0) * bump_psi_d1(2.0 - z) +
         bump_psi(z + 2.0) * bump_psi_d2(2.0 - z);
}

// ---------------------------------------------------------------------------
// Partition of unity adapted to the critical points: one bump per critical
// point at radius 2*delta, merged per vanishing order, phi_0 carrying the
// rest. The channel adds wall bumps phi_{b,0/1}.
// ---------------------------------------------------------------------------

struct PartitionOfUnity {
  DomainKind domain = DomainKind::torus;
  double delta = 0.0;
  int n0 = 0;
  // centers of the order-j bumps, j >= 1 (empty vector when order absent)
  std::map<int, std::vector<double>> groups;
  double c_sigma = 0.0;  // measured constant in |phi_j'| <= C |phi_j|^{1/2}

  bool has_boundary() const { return domain == DomainKind::channel; }
  double period() const { return 2.0 * pi; }

  double wrap(double d) const {
    if (domain != DomainKind::torus) return d;
    d = std::fmod(d, period());
    if (d < -pi) d += period();
    if (d > pi) d -= period();
    return d;
  }

  // order-j bump group (j >= 1); derivatives carry the 1/delta chain factors
  double phi_group(int j, double y, int deriv = 0) const {
    auto it = groups.find(j);
    if (it == groups.end()) return 0.0;
    double s = 0.0;
    for (double c : it->second) {
      const double z = wrap(y - c) / delta;
      if (deriv == 0) s += bump_phi(z);
      else if (deriv == 1) s += bump_phi_d1(z) / delta;
      else s += bump_phi_d2(z) / (delta * delta);
    }
    return s;
  }

  double phi_b0(double y, int deriv = 0) const {
    if (!has_boundary()) return 0.0;
    const double z = y / delta;
    if (deriv == 0) return bump_phi(z);
    if (deriv == 1) return bump_phi_d1(z) / delta;
    return bump_phi_d2(z) / (delta * delta);
  }

  double phi_b1(double y, int deriv = 0) const {
    if (!has_boundary()) return 0.0;
    const double z = (y - 1.0) / delta;
    if (deriv == 0) return bump_phi(z);
    if (deriv == 1) return bump_phi_d1(z) / delta;
    return bump_phi_d2(z) / (delta * delta);
  }

  double phi_b(double y, int deriv = 0) const {
    return phi_b0(y, deriv) + phi_b1(y, deriv);
  }

  double phi0(double y, int deriv = 0) const {
    double s = deriv == 0 ? 1.0 : 0.0;
    for (const auto& [j, centers] : groups) {
      (void)centers;
      s -= phi_group(j, y, deriv);
    }
    s -= phi_b(y, deriv);
    return s;
  }

  // phi_j for j = 0..n0 in one call
  double phi(int j, double y, int deriv = 0) const {
    return j == 0 ? phi0(y, deriv) : phi_group(j, y, deriv);
  }

  double sum(double y) const {
    double s = phi0(y);
    for (const auto& [j, centers] : groups) {
      (void)centers;
      s += phi_group(j, y);
    }
    s += phi_b(y);
    return s;
  }
};

inline PartitionOfUnity build_partition(const ShearProfile& profile) {
  const bool channel = profile.domain == DomainKind::channel;
  if (profile.critical_points.empty() && !channel)
    throw error("build_partition: torus profile without critical points");

  PartitionOfUnity part;
  part.domain = profile.domain;
  part.n0 = profile.n0;

  const auto& cps = profile.critical_points;
  double delta = channel ? 1.0 / 8.0 : profile.grid.length() / 8.0;
  for (std::size_t i = 0; i < cps.size(); ++i) {
    for (std::size_t j = i + 1; j < cps.size(); ++j) {
      double d = std::abs(cps[i].y - cps[j].y);
      if (!channel) d = std::min(d, profile.grid.length() - d);
      delta = std::min(delta, d / 8.0);
    }
    if (channel) {
      delta = std::min(delta, std::abs(cps[i].y) / 8.0);
      delta = std::min(delta, std::abs(cps[i].y - 1.0) / 8.0);
    }
  }
  part.delta = delta;
  if (delta < 4.0 * profile.grid.h)
    throw degenerate_spacing(delta, profile.grid.h);

  for (const auto& cp : cps) part.groups[cp.order].push_back(cp.y);

  // measured Holder-type constant for sigma = 1/2 over a fine sample
  double c = 0.0;
  const int fine = 8 * profile.grid.n;
  for (int i = 0; i < fine; ++i) {
    const double y = profile.grid.length() * (i + 0.5) / fine;
    for (int j = 0; j <= part.n0; ++j) {
      const double v = part.phi(j, y);
      const double d = std::abs(part.phi(j, y, 1));
      if (v > 1e-290 && d > 0.0) c = std::max(c, d / std::sqrt(v));
    }
    if (channel) {
      const double v = part.phi_b(y);
      const double d = std::abs(part.phi_b(y, 1));
      if (v > 1e-290 && d > 0.0) c = std::max(c, d / std::sqrt(v));
    }
  }
  part.c_sigma = c;
  return part;
}

}  // namespace peclet
