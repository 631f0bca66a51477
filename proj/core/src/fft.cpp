#include "expphi2/fft.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <sstream>

namespace expphi2 {

namespace {

// One forward and one backward c2c plan per grid size. Planning is guarded by
// a mutex (the FFTW planner is not thread-safe); execution via the new-array
// interface is concurrent. FFTW_UNALIGNED removes the alignment contract so
// plans apply to any heap buffer.
struct PlanPair {
  fftw_plan forward = nullptr;
  fftw_plan backward = nullptr;
  ~PlanPair() {
    if (forward) fftw_destroy_plan(forward);
    if (backward) fftw_destroy_plan(backward);
  }
};

PlanPair& plans_for(int m) {
  static std::mutex mu;
  static std::map<int, std::unique_ptr<PlanPair>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(m);
  if (it == cache.end()) {
    auto pp = std::make_unique<PlanPair>();
    std::vector<std::complex<double>> a(static_cast<std::size_t>(m) * m);
    std::vector<std::complex<double>> b(a.size());
    auto* ap = reinterpret_cast<fftw_complex*>(a.data());
    auto* bp = reinterpret_cast<fftw_complex*>(b.data());
    pp->forward = fftw_plan_dft_2d(m, m, ap, bp, FFTW_FORWARD, FFTW_ESTIMATE | FFTW_UNALIGNED);
    pp->backward = fftw_plan_dft_2d(m, m, ap, bp, FFTW_BACKWARD, FFTW_ESTIMATE | FFTW_UNALIGNED);
    it = cache.emplace(m, std::move(pp)).first;
  }
  return *it->second;
}

inline double parity_sign(int a, int b) { return ((a + b) & 1) ? -1.0 : 1.0; }

}  // namespace

SpectralCoeffs to_spectral(const TorusField& f) {
  const int m = f.grid.m();
  std::vector<std::complex<double>> in(f.grid.nodes());
  for (std::size_t i = 0; i < in.size(); ++i) in[i] = f.values[i];
  SpectralCoeffs out(f.grid);

  auto& pp = plans_for(m);
  fftw_execute_dft(pp.forward, reinterpret_cast<fftw_complex*>(in.data()),
                   reinterpret_cast<fftw_complex*>(out.coeffs.data()));

  // coeff(k) = (h^2/2pi) (-1)^{k1+k2} DFT[f](k); the sign comes from the
  // node offset x_j = -pi + j h.
  const double h = f.grid.spacing();
  const double scale = h * h / kTwoPi;
  for (int a = 0; a < m; ++a) {
    for (int b = 0; b < m; ++b) {
      out.at_index(a, b) *= scale * parity_sign(a, b);
    }
  }
  return out;
}

TorusField from_spectral_unchecked(const SpectralCoeffs& c) {
  const int m = c.grid.m();
  std::vector<std::complex<double>> in(c.grid.nodes());
  for (int a = 0; a < m; ++a) {
    for (int b = 0; b < m; ++b) {
      in[static_cast<std::size_t>(a) * m + b] = c.at_index(a, b) * parity_sign(a, b);
    }
  }
  std::vector<std::complex<double>> out(in.size());
  auto& pp = plans_for(m);
  fftw_execute_dft(pp.backward, reinterpret_cast<fftw_complex*>(in.data()),
                   reinterpret_cast<fftw_complex*>(out.data()));

  TorusField f(c.grid);
  const double scale = 1.0 / kTwoPi;
  for (std::size_t i = 0; i < out.size(); ++i) f.values[i] = scale * out[i].real();
  return f;
}

TorusField from_spectral(const SpectralCoeffs& c) {
  double top = 0.0;
  for (const auto& z : c.coeffs) top = std::max(top, std::abs(z));
  const double defect = c.hermitian_defect();
  if (defect > 1e-8 * std::max(top, 1.0)) {
    std::ostringstream msg;
    msg << "Hermitian defect " << defect << " exceeds tolerance (max coeff " << top << ")";
    throw SymmetryViolation(msg.str());
  }
  return from_spectral_unchecked(c);
}

}  // namespace expphi2
