#include "expphi2/functionals.hpp"

#include <cmath>

namespace expphi2 {

namespace {
constexpr double kSqrt2 = 1.4142135623730951;
}

double RealConsElement::pair(const SpectralCoeffs& c) const {
  if (is_zero()) return c.at_mode(0, 0).real();
  if (positive_half()) return kSqrt2 * c.at_mode(k1, k2).real();
  // sine element: e_k = (e_k - e_-k) sqrt2 / (2i); pairing gives -sqrt2 Im c(-k)...
  // with c(-k) = conj c(k) for real fields: <phi, e_k> = -sqrt2 Im c(k1,k2)
  return -kSqrt2 * c.at_mode(k1, k2).imag();
}

TorusField RealConsElement::field(const TorusGrid& grid) const {
  TorusField f(grid);
  const int m = grid.m();
  for (int i = 0; i < m; ++i) {
    const double x = grid.node_coord(i);
    for (int j = 0; j < m; ++j) {
      const double y = grid.node_coord(j);
      if (is_zero()) {
        f.at(i, j) = 1.0 / kTwoPi;
      } else {
        const double phase = k1 * x + k2 * y;
        f.at(i, j) = (positive_half() ? std::cos(phase) : std::sin(phase)) / (kSqrt2 * kPi);
      }
    }
  }
  return f;
}

std::string to_string(OuterKind o) {
  switch (o) {
    case OuterKind::poly2: return "poly2";
    case OuterKind::tanh_sum: return "tanh";
    case OuterKind::cos_sum: return "cos";
  }
  return "?";
}

double CylinderFunctional::value(const SpectralCoeffs& phi) const {
  double s = 0.0;
  switch (outer) {
    case OuterKind::poly2: {
      for (const auto& d : directions) {
        const double u = d.pair(phi);
        s += u * u / (1.0 + u * u);
      }
      return s;
    }
    case OuterKind::tanh_sum: {
      for (const auto& d : directions) s += d.pair(phi);
      return std::tanh(s);
    }
    case OuterKind::cos_sum: {
      for (const auto& d : directions) s += d.pair(phi);
      return std::cos(s);
    }
  }
  return 0.0;
}

std::vector<double> CylinderFunctional::gradient_coefficients(const SpectralCoeffs& phi) const {
  std::vector<double> g(directions.size(), 0.0);
  switch (outer) {
    case OuterKind::poly2: {
      for (std::size_t j = 0; j < directions.size(); ++j) {
        const double u = directions[j].pair(phi);
        const double den = 1.0 + u * u;
        g[j] = 2.0 * u / (den * den);
      }
      break;
    }
    case OuterKind::tanh_sum: {
      double s = 0.0;
      for (const auto& d : directions) s += d.pair(phi);
      const double t = std::tanh(s);
      const double sech2 = 1.0 - t * t;
      for (auto& v : g) v = sech2;
      break;
    }
    case OuterKind::cos_sum: {
      double s = 0.0;
      for (const auto& d : directions) s += d.pair(phi);
      const double ds = -std::sin(s);
      for (auto& v : g) v = ds;
      break;
    }
  }
  return g;
}

CylinderFunctional make_functional(OuterKind outer, const std::vector<RealConsElement>& dirs) {
  CylinderFunctional f;
  f.outer = outer;
  f.directions = dirs;
  std::string desc = to_string(outer) + "(";
  for (std::size_t i = 0; i < dirs.size(); ++i) {
    if (i) desc += ",";
    desc += "<phi,e_(" + std::to_string(dirs[i].k1) + "," + std::to_string(dirs[i].k2) + ")>";
  }
  desc += ")";
  f.description = desc;
  return f;
}

std::vector<CylinderFunctional> default_functional_family() {
  std::vector<CylinderFunctional> out;
  const RealConsElement c10{1, 0}, c01{0, 1}, c11{1, 1}, c21{2, 1};
  const RealConsElement s10{-1, 0}, s01{0, -1}, s11{-1, -1};
  out.push_back(make_functional(OuterKind::tanh_sum, {c10}));
  out.push_back(make_functional(OuterKind::tanh_sum, {c01}));
  out.push_back(make_functional(OuterKind::tanh_sum, {s10}));
  out.push_back(make_functional(OuterKind::cos_sum, {c10}));
  out.push_back(make_functional(OuterKind::cos_sum, {s01}));
  out.push_back(make_functional(OuterKind::cos_sum, {c11}));
  out.push_back(make_functional(OuterKind::poly2, {c10, s10}));
  out.push_back(make_functional(OuterKind::poly2, {c01, s01}));
  out.push_back(make_functional(OuterKind::poly2, {c11, s11}));
  out.push_back(make_functional(OuterKind::poly2, {c21}));
  return out;
}

}  // namespace expphi2
