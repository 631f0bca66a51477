#include "expphi2/gff.hpp"

#include <cmath>

#include "expphi2/fft.hpp"

namespace expphi2 {

namespace {
constexpr double kInvSqrt2 = 0.70710678118654752440;
}

GffSample sample_gff(const TorusGrid& grid, RngStream& rng) {
  GffSample out;
  out.spectral = SpectralCoeffs(grid);
  out.spectral.at_mode(0, 0) = rng.normal();
  detail::for_each_positive_mode(grid, [&](int k1, int k2) {
    const double sd = std::sqrt(GffSample::mode_variance(k1, k2)) * kInvSqrt2;
    const auto z = rng.normal_pair();
    const std::complex<double> c(sd * z[0], sd * z[1]);
    out.spectral.at_mode(k1, k2) = c;
    out.spectral.at_mode(-k1, -k2) = std::conj(c);
  });
  return out;
}

OuState ou_step(const OuState& state, double dt, RngStream& rng, const OuNoise& noise) {
  if (dt <= 0.0) throw ConfigInvalid("ou_step requires dt > 0");
  const TorusGrid& grid = state.spectral.grid;
  const std::vector<double>* mask = nullptr;
  if (noise.spec != nullptr) {
    require_oversampling(*noise.spec, noise.n, grid);
    mask = &pn_mask(*noise.spec, noise.n, grid);
  }
  auto sigma_at = [&](int k1, int k2) -> double {
    double s = noise.scale;
    if (mask != nullptr) {
      const std::size_t idx =
          static_cast<std::size_t>(grid.index_of_mode(k1)) * grid.m() + grid.index_of_mode(k2);
      s *= (*mask)[idx];
    }
    return s;
  };

  OuState out;
  out.time = state.time + dt;
  out.spectral = SpectralCoeffs(grid);

  {  // zero mode: real
    const double lambda = 1.0;
    const double decay = std::exp(-0.5 * dt * lambda);
    const double sd = sigma_at(0, 0) * std::sqrt((1.0 - std::exp(-dt * lambda)) / lambda);
    out.spectral.at_mode(0, 0) =
        decay * state.spectral.at_mode(0, 0).real() + sd * rng.normal();
  }
  detail::for_each_positive_mode(grid, [&](int k1, int k2) {
    const double lambda = 1.0 + double(k1) * k1 + double(k2) * k2;
    const double decay = std::exp(-0.5 * dt * lambda);
    // complex variance sigma^2 (1-e^{-dt lambda})/lambda split over Re/Im
    const double sd =
        sigma_at(k1, k2) * std::sqrt((1.0 - std::exp(-dt * lambda)) / lambda) * kInvSqrt2;
    const auto z = rng.normal_pair();
    const std::complex<double> eta(sd * z[0], sd * z[1]);
    const std::complex<double> c = decay * state.spectral.at_mode(k1, k2) + eta;
    out.spectral.at_mode(k1, k2) = c;
    out.spectral.at_mode(-k1, -k2) = std::conj(c);
  });
  return out;
}

std::vector<OuState> ou_trajectory(const TorusField& initial, double horizon, double dt,
                                   RngStream& rng, const OuNoise& noise) {
  if (horizon < dt) throw InvalidHorizon("horizon < dt");
  std::vector<OuState> traj;
  OuState s;
  s.time = 0.0;
  s.spectral = to_spectral(initial);
  traj.push_back(s);
  const auto steps = static_cast<std::size_t>(std::floor(horizon / dt + 1e-9));
  for (std::size_t i = 0; i < steps; ++i) {
    s = ou_step(s, dt, rng, noise);
    traj.push_back(s);
  }
  return traj;
}

}  // namespace expphi2
