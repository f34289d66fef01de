#pragma once

#include <span>
#include <vector>

#include "core/field.hpp"
#include "core/filter.hpp"

namespace trelax {

// Shell index of an integer mode: round(|m|) with half-integer ties binned
// down (such ties cannot occur on the integer lattice, but the convention is
// fixed anyway).
int shell_index(long long mode_norm2);

// Isotropic shell spectrum: shell s collects modes with shell_index == s.
// energy[s] = (L/2pi) * sum_shell |u_hat|^2/2 summed over components, so that
// sum_s energy[s] * (2pi/L) recovers the total Parseval energy.
struct Spectrum {
  double shell_width = 0.0;  // 2*pi/L
  std::vector<double> energy;

  double shell_center(int s) const { return shell_width * s; }
  int shells() const { return static_cast<int>(energy.size()); }
  double total() const;  // sum energy * shell_width
};

Spectrum shell_spectrum(const SpectralField& f);

// Finite-horizon average (1/T) * integral via the trapezoid rule.
// Requires >= 2 samples and strictly increasing times.
double time_average(std::span<const double> t, std::span<const double> v);

// Spectra sampled over time plus their trapezoid time average.
struct SpectrumSeries {
  std::vector<double> times;
  std::vector<Spectrum> spectra;

  void push(double t, Spectrum s);
  Spectrum time_averaged() const;
};

// Energy drain of the relaxation term: (chi/delta) sum (1-h_N)|u_hat|^2.
double eps_model(const SpectralField& u, const FilterParams& p, double chi);

// nu * sum |k|^2 |u_hat|^2 = (nu/L^dim) * integral |grad u|^2.
double viscous_dissipation(const SpectralField& u, double nu);

// (1/L^dim) * integral f.u.
double forcing_input(const SpectralField& f, const SpectralField& u);

// Energy of the unresolved part: sum (1-h_N)^2 |u_hat|^2 = |u - H_N u|^2.
double fluctuation_energy(const SpectralField& u, const FilterParams& p);

// Tail-energy ratio beyond k_cutoff: sum_{k > cutoff} E_a / same for E_b.
// Throws UndefinedRatio when the reference tail is zero.
double truncation_ratio(const Spectrum& a, const Spectrum& b, double k_cutoff);

// One row of the energy-budget time series.
struct EnergyRecord {
  double t = 0.0;
  double e_model = 0.0;        // sum |u_hat|^2 / 2
  double eps_model = 0.0;      // relaxation drain
  double viscous = 0.0;        // viscous dissipation
  double forcing_input = 0.0;  // power injected by f
  double max_div = 0.0;        // max_k |k.u_hat|
};

}  // namespace trelax
