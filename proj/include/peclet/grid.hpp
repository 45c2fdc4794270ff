#pragma once

#include <cassert>

#include "peclet/common.hpp"

namespace peclet {

enum class DomainKind { torus, channel };

inline const char* to_string(DomainKind d) {
  return d == DomainKind::torus ? "torus" : "channel";
}

// One-dimensional y-grid. Torus: nodes y_i = i*h on [0, 2*pi), h = 2*pi/n.
// Channel: cell centers y_i = (i+1/2)*h on [0, 1], h = 1/n, so no node sits
// on the wall and the Neumann second-difference stays symmetric.
struct Grid {
  DomainKind kind;
  int n = 0;
  double h = 0.0;
  rvec nodes;

  static Grid torus(int n) {
    check(n);
    Grid g{DomainKind::torus, n, 2.0 * pi / n, {}};
    g.nodes.resize(n);
    for (int i = 0; i < n; ++i) g.nodes[i] = i * g.h;
    return g;
  }

  static Grid channel(int n) {
    check(n);
    Grid g{DomainKind::channel, n, 1.0 / n, {}};
    g.nodes.resize(n);
    for (int i = 0; i < n; ++i) g.nodes[i] = (i + 0.5) * g.h;
    return g;
  }

  static Grid make(DomainKind kind, int n) {
    return kind == DomainKind::torus ? torus(n) : channel(n);
  }

  double length() const { return kind == DomainKind::torus ? 2.0 * pi : 1.0; }
  bool periodic() const { return kind == DomainKind::torus; }

  // Staggered half-grid carrying first differences: torus has n wrap-around
  // faces at y_{i+1/2}, the channel only the n-1 interior faces.
  int half_count() const { return periodic() ? n : n - 1; }
  double half_node(int i) const {
    return periodic() ? (i + 0.5) * h : (i + 1) * h;
  }

 private:
  static void check(int n) {
    if (n < 64) throw error("grid size must be at least 64, got " + std::to_string(n));
  }
};

inline bool same_grid(const Grid& a, const Grid& b) {
  return a.kind == b.kind && a.n == b.n;
}

}  // namespace peclet
