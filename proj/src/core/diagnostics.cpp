#include "core/diagnostics.hpp"

#include <cmath>

#include "core/common.hpp"

namespace trelax {

int shell_index(long long mode_norm2) {
  double r = std::sqrt(static_cast<double>(mode_norm2));
  int s = static_cast<int>(std::floor(r + 0.5));
  // |m| = s - 1/2 would need m2 = s^2 - s + 1/4, never integral, so the tie
  // guard is vacuous on the lattice; it pins the tie-down convention anyway.
  if (s > 0 && 2.0 * r == 2.0 * s - 1.0) --s;
  return s;
}

double Spectrum::total() const {
  double sum = 0.0;
  for (double e : energy) sum += e;
  return sum * shell_width;
}

Spectrum shell_spectrum(const SpectralField& f) {
  const GridSpec& g = f.grid();
  Spectrum out;
  out.shell_width = g.wavenumber_unit();
  out.energy.assign(static_cast<std::size_t>(g.max_shell()) + 1, 0.0);
  double scale = 0.5 / g.wavenumber_unit();  // (L/2pi) * 1/2
  std::size_t per = g.lattice_size();
  for (std::size_t i = 0; i < per; ++i) {
    int s = shell_index(g.mode_norm2(i));
    double e = 0.0;
    for (int c = 0; c < f.components(); ++c) e += std::norm(f.at(c, i));
    out.energy[static_cast<std::size_t>(s)] += scale * e;
  }
  return out;
}

double time_average(std::span<const double> t, std::span<const double> v) {
  if (t.size() != v.size())
    throw InvalidInput("time and value arrays differ in length");
  if (t.size() < 2)
    throw InvalidInput("time average needs at least two samples");
  double integral = 0.0;
  for (std::size_t i = 1; i < t.size(); ++i) {
    double dt = t[i] - t[i - 1];
    if (!(dt > 0.0))
      throw InvalidInput("times must be strictly increasing");
    integral += 0.5 * dt * (v[i] + v[i - 1]);
  }
  return integral / (t.back() - t.front());
}

void SpectrumSeries::push(double t, Spectrum s) {
  if (!times.empty()) {
    if (!(t > times.back()))
      throw InvalidInput("spectrum samples must have increasing times");
    if (s.energy.size() != spectra.front().energy.size() ||
        s.shell_width != spectra.front().shell_width)
      throw InvalidInput("spectrum shape changed mid-series");
  }
  times.push_back(t);
  spectra.push_back(std::move(s));
}

Spectrum SpectrumSeries::time_averaged() const {
  if (times.size() < 2)
    throw InvalidInput("time average needs at least two samples");
  Spectrum avg;
  avg.shell_width = spectra.front().shell_width;
  std::size_t shells = spectra.front().energy.size();
  avg.energy.assign(shells, 0.0);
  double span = times.back() - times.front();
  for (std::size_t i = 1; i < times.size(); ++i) {
    double w = 0.5 * (times[i] - times[i - 1]) / span;
    for (std::size_t s = 0; s < shells; ++s)
      avg.energy[s] += w * (spectra[i].energy[s] + spectra[i - 1].energy[s]);
  }
  return avg;
}

double eps_model(const SpectralField& u, const FilterParams& p, double chi) {
  p.validate();
  if (chi == 0.0 || p.delta == 0.0) return 0.0;
  const GridSpec& g = u.grid();
  std::size_t per = g.lattice_size();
  double sum = 0.0;
  for (std::size_t i = 0; i < per; ++i) {
    double w = fluctuation_multiplier(p, g.k_norm(i));
    for (int c = 0; c < u.components(); ++c) sum += w * std::norm(u.at(c, i));
  }
  return (chi / p.delta) * sum;
}

double viscous_dissipation(const SpectralField& u, double nu) {
  const GridSpec& g = u.grid();
  std::size_t per = g.lattice_size();
  double sum = 0.0;
  for (std::size_t i = 0; i < per; ++i) {
    double k2 = g.k_norm2(i);
    for (int c = 0; c < u.components(); ++c) sum += k2 * std::norm(u.at(c, i));
  }
  return nu * sum;
}

double forcing_input(const SpectralField& f, const SpectralField& u) {
  return inner_product(f, u);
}

double fluctuation_energy(const SpectralField& u, const FilterParams& p) {
  p.validate();
  if (p.delta == 0.0) return 0.0;
  const GridSpec& g = u.grid();
  std::size_t per = g.lattice_size();
  double sum = 0.0;
  for (std::size_t i = 0; i < per; ++i) {
    double w = fluctuation_multiplier(p, g.k_norm(i));
    for (int c = 0; c < u.components(); ++c)
      sum += w * w * std::norm(u.at(c, i));
  }
  return sum;
}

double truncation_ratio(const Spectrum& a, const Spectrum& b, double k_cutoff) {
  if (a.energy.size() != b.energy.size() || a.shell_width != b.shell_width)
    throw InvalidInput("spectra must share shell layout");
  if (!(k_cutoff > 0.0))
    throw InvalidInput("cutoff wavenumber must be positive");
  double tail_a = 0.0, tail_b = 0.0;
  for (int s = 0; s < a.shells(); ++s) {
    if (a.shell_center(s) > k_cutoff) {
      tail_a += a.energy[static_cast<std::size_t>(s)];
      tail_b += b.energy[static_cast<std::size_t>(s)];
    }
  }
  if (tail_b == 0.0)
    throw UndefinedRatio("reference spectrum has no energy beyond the cutoff");
  return tail_a / tail_b;
}

}  // namespace trelax
