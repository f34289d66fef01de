#include "core/solver.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "core/common.hpp"

namespace trelax {

namespace {

// Truncation mask: 2/3 rule keeps |m_d| <= floor(n/3) on every axis; the
// Nyquist planes m_d = -n/2 are dropped unconditionally (their derivative
// has no real-field representation).
std::vector<double> truncation_mask(const GridSpec& g, bool dealias) {
  int limit = g.n() / 3;
  std::size_t per = g.lattice_size();
  std::vector<double> mask(per, 1.0);
  for (std::size_t i = 0; i < per; ++i) {
    auto m = g.mode(i);
    for (int d = 0; d < g.dim(); ++d) {
      bool drop = dealias ? std::abs(m[d]) > limit : m[d] == -g.n() / 2;
      if (drop) {
        mask[i] = 0.0;
        break;
      }
    }
  }
  return mask;
}

double uniform_pm1(std::mt19937_64& eng) {
  // 53-bit mantissa extraction; identical across platforms, unlike
  // std::uniform_real_distribution.
  double u01 = static_cast<double>(eng() >> 11) * 0x1.0p-53;
  return 2.0 * u01 - 1.0;
}

}  // namespace

SpectralField forcing_field(const GridSpec& grid, const ForcingSpec& spec) {
  SpectralField f(grid, grid.dim());
  switch (spec.kind) {
    case ForcingKind::none:
      break;
    case ForcingKind::steady_low_mode: {
      // A sin(2pi x_last / L) e_1: single lowest shell, exactly solenoidal.
      std::size_t plus = 1;  // mode (0,...,0,+1)
      std::size_t minus = grid.conjugate(plus);
      std::complex<double> coeff(0.0, -0.5 * spec.amplitude);  // A/(2i)
      f.at(0, plus) = coeff;
      f.at(0, minus) = std::conj(coeff);
      break;
    }
    case ForcingKind::custom: {
      if (!spec.custom)
        throw InvalidInput("custom forcing requires a field");
      if (!(spec.custom->grid() == grid) ||
          spec.custom->components() != grid.dim())
        throw InvalidInput("custom forcing shape does not match the grid");
      double scale = spec.custom->max_abs();
      if (std::abs(spec.custom->at(0, 0)) > 1e-12 * (1.0 + scale))
        throw InvalidInput("custom forcing must be mean-free");
      if (max_divergence(*spec.custom) > 1e-10 * (1.0 + scale))
        throw InvalidInput("custom forcing must be solenoidal");
      f = *spec.custom;
      break;
    }
  }
  return f;
}

void SolverConfig::validate() const {
  if (!(dt > 0.0) || !std::isfinite(dt))
    throw InvalidInput("dt must be positive and finite");
  if (!(t_end >= 0.0) || !std::isfinite(t_end))
    throw InvalidInput("t_end must be >= 0 and finite");
  if (record_every < 1)
    throw InvalidInput("record_every must be >= 1");
}

SpectralField relaxation_term(const SpectralField& u, const FilterParams& p,
                              double chi) {
  p.validate();
  SpectralField out = u;
  if (chi == 0.0 || p.delta == 0.0) {
    out *= 0.0;
    return out;
  }
  double rate = chi / p.delta;
  out.scale_modes(isotropic_table(
      u.grid(), [&](double k) { return rate * fluctuation_multiplier(p, k); }));
  return out;
}

SpectralField nonlinear_term(const SpectralField& u, bool dealias,
                             double* max_speed) {
  const GridSpec& g = u.grid();
  int dim = g.dim();
  if (u.components() != dim)
    throw InvalidInput("advection needs a vector field with dim components");
  std::size_t per = g.lattice_size();
  auto mask = truncation_mask(g, dealias);

  SpectralField ut = u;
  ut.scale_modes(mask);
  std::vector<double> phys = ut.to_physical_unchecked();

  if (max_speed) {
    double worst = 0.0;
    for (double v : phys) worst = std::max(worst, std::abs(v));
    *max_speed = worst;
  }

  // w_ij = u_i u_j transformed back; symmetric, so only i <= j.
  std::vector<SpectralField> w;
  w.reserve(static_cast<std::size_t>(dim * (dim + 1) / 2));
  std::vector<double> prod(per);
  for (int i = 0; i < dim; ++i) {
    const double* ui = phys.data() + static_cast<std::size_t>(i) * per;
    for (int j = i; j < dim; ++j) {
      const double* uj = phys.data() + static_cast<std::size_t>(j) * per;
      for (std::size_t x = 0; x < per; ++x) prod[x] = ui[x] * uj[x];
      w.push_back(SpectralField::from_physical(g, 1, prod));
    }
  }
  auto w_at = [&](int i, int j) -> const SpectralField& {
    if (i > j) std::swap(i, j);
    // row-major upper triangle offset
    return w[static_cast<std::size_t>(i * dim - i * (i - 1) / 2 + (j - i))];
  };

  SpectralField out(g, dim);
  const std::complex<double> minus_i(0.0, -1.0);
  for (std::size_t x = 0; x < per; ++x) {
    if (mask[x] == 0.0) continue;
    auto kv = g.wavevector(x);
    for (int c = 0; c < dim; ++c) {
      std::complex<double> acc(0.0, 0.0);
      for (int j = 0; j < dim; ++j) acc += kv[j] * w_at(c, j).at(0, x);
      out.at(c, x) = minus_i * acc;
    }
  }
  out.zero_mean();
  leray_project(out);
  return out;
}

Simulation::Simulation(FlowState initial, SolverConfig cfg)
    : s_(std::move(initial)), cfg_(cfg), force_(s_.grid, s_.grid.dim()) {
  cfg_.validate();
  s_.filter.validate();
  if (!(s_.grid == s_.u.grid()))
    throw InvalidInput("state grid does not match its field");
  if (s_.u.components() != s_.grid.dim())
    throw InvalidInput("velocity must have dim components");
  if (!(s_.nu >= 0.0) || !std::isfinite(s_.nu))
    throw InvalidInput("viscosity must be finite and >= 0");
  if (!(s_.chi >= 0.0) || !std::isfinite(s_.chi))
    throw InvalidInput("relaxation coefficient must be finite and >= 0");
  s_.u.zero_mean();

  const GridSpec& g = s_.grid;
  std::size_t per = g.lattice_size();
  bool relax = s_.chi != 0.0 && s_.filter.delta != 0.0;
  double rate = relax ? s_.chi / s_.filter.delta : 0.0;
  lambda_.resize(per);
  e_half_.resize(per);
  e_full_.resize(per);
  for (std::size_t i = 0; i < per; ++i) {
    double lam = s_.nu * g.k_norm2(i);
    if (relax) lam += rate * fluctuation_multiplier(s_.filter, g.k_norm(i));
    lambda_[i] = lam;
    e_half_[i] = std::exp(-0.5 * cfg_.dt * lam);
    e_full_[i] = std::exp(-cfg_.dt * lam);
  }

  force_ = forcing_field(g, s_.forcing);
  force_.scale_modes(truncation_mask(g, cfg_.dealias));
}

void Simulation::rk_step() {
  const double dt = cfg_.dt;
  SpectralField& u = s_.u;

  // F(v) = P[-div(v v)] + f; the linear symbol is handled by the
  // integrating factors (or folded into F for the plain-RK4 variant).
  auto rhs = [&](const SpectralField& v, double* speed) {
    SpectralField r = cfg_.nonlinear ? nonlinear_term(v, cfg_.dealias, speed)
                                     : SpectralField(s_.grid, s_.grid.dim());
    if (s_.forcing.kind != ForcingKind::none) r += force_;
    if (!cfg_.exact_linear) {
      SpectralField lin = v;
      lin.scale_modes(lambda_);
      r -= lin;
    }
    return r;
  };

  double speed = 0.0;
  SpectralField f1 = rhs(u, cfg_.nonlinear ? &speed : nullptr);
  if (cfg_.nonlinear && !cfl_warned_ && speed > 0.0) {
    double limit = 0.5 * s_.grid.grid_spacing() / speed;
    if (dt > limit) {
      emit_warning("dt = " + std::to_string(dt) +
                   " exceeds the advisory CFL limit " + std::to_string(limit));
      cfl_warned_ = true;
    }
  }

  if (cfg_.exact_linear) {
    SpectralField stage = u;
    stage.axpy(0.5 * dt, f1);
    stage.scale_modes(e_half_);
    SpectralField f2 = rhs(stage, nullptr);

    stage = u;
    stage.scale_modes(e_half_);
    stage.axpy(0.5 * dt, f2);
    SpectralField f3 = rhs(stage, nullptr);

    stage = u;
    stage.scale_modes(e_full_);
    SpectralField tmp = f3;
    tmp.scale_modes(e_half_);
    stage.axpy(dt, tmp);
    SpectralField f4 = rhs(stage, nullptr);

    u.scale_modes(e_full_);
    f1.scale_modes(e_full_);
    u.axpy(dt / 6.0, f1);
    f2 += f3;
    f2.scale_modes(e_half_);
    u.axpy(dt / 3.0, f2);
    u.axpy(dt / 6.0, f4);
  } else {
    SpectralField stage = u;
    stage.axpy(0.5 * dt, f1);
    SpectralField f2 = rhs(stage, nullptr);

    stage = u;
    stage.axpy(0.5 * dt, f2);
    SpectralField f3 = rhs(stage, nullptr);

    stage = u;
    stage.axpy(dt, f3);
    SpectralField f4 = rhs(stage, nullptr);

    u.axpy(dt / 6.0, f1);
    u.axpy(dt / 3.0, f2);
    u.axpy(dt / 3.0, f3);
    u.axpy(dt / 6.0, f4);
  }
}

bool Simulation::advance(long long steps) {
  if (blown_) return false;
  for (long long i = 0; i < steps; ++i) {
    double t_before = s_.t;
    rk_step();
    if (!std::isfinite(norm2(s_.u))) {
      blown_ = true;
      s_.t = t_before;  // last valid time; the field itself is garbage now
      return false;
    }
    s_.t = t_before + cfg_.dt;
  }
  return true;
}

EnergyRecord Simulation::energy_record() const {
  EnergyRecord r;
  r.t = s_.t;
  r.e_model = parseval_energy(s_.u);
  r.eps_model = eps_model(s_.u, s_.filter, s_.chi);
  r.viscous = viscous_dissipation(s_.u, s_.nu);
  r.forcing_input = forcing_input(force_, s_.u);
  r.max_div = max_divergence(s_.u);
  return r;
}

double Simulation::fluctuation() const {
  return fluctuation_energy(s_.u, s_.filter);
}

FlowState step(FlowState state, const SolverConfig& cfg) {
  Simulation sim(std::move(state), cfg);
  if (!sim.advance(1))
    throw BlowUpError("solution became non-finite", sim.time());
  return sim.state();
}

RunResult run(FlowState initial, const SolverConfig& cfg,
              const DiagnosticsSink& sink) {
  cfg.validate();
  long long total = std::llround(cfg.t_end / cfg.dt);
  Simulation sim(std::move(initial), cfg);

  RunResult res;
  auto record = [&] {
    EnergyRecord r = sim.energy_record();
    res.records.push_back(r);
    if (sink) sink(r, sim.state());
  };
  record();
  long long done = 0;
  while (done < total) {
    long long m = std::min<long long>(cfg.record_every, total - done);
    if (!sim.advance(m)) {
      res.status = RunStatus::blew_up;
      res.blow_up_time = sim.time();
      break;
    }
    done += m;
    record();
  }
  res.final_state = std::make_unique<FlowState>(sim.state());
  return res;
}

SpectralField make_taylor_green(const GridSpec& grid) {
  int n = grid.n();
  std::size_t per = grid.lattice_size();
  double h = 2.0 * pi / n;  // phase advance per sample
  std::vector<double> samples(static_cast<std::size_t>(grid.dim()) * per);
  if (grid.dim() == 2) {
    for (int ix = 0; ix < n; ++ix)
      for (int iy = 0; iy < n; ++iy) {
        std::size_t flat = static_cast<std::size_t>(ix) * n + iy;
        double x = h * ix, y = h * iy;
        samples[flat] = std::sin(x) * std::cos(y);
        samples[per + flat] = -std::cos(x) * std::sin(y);
      }
  } else {
    for (int ix = 0; ix < n; ++ix)
      for (int iy = 0; iy < n; ++iy)
        for (int iz = 0; iz < n; ++iz) {
          std::size_t flat =
              (static_cast<std::size_t>(ix) * n + static_cast<std::size_t>(iy)) * n +
              iz;
          double x = h * ix, y = h * iy, z = h * iz;
          samples[flat] = std::sin(x) * std::cos(y) * std::cos(z);
          samples[per + flat] = -std::cos(x) * std::sin(y) * std::cos(z);
          // third component identically zero
        }
  }
  SpectralField u =
      SpectralField::from_physical(grid, grid.dim(), samples);
  u.zero_mean();
  u.symmetrize();
  return u;
}

SpectralField make_random_spectrum(const GridSpec& grid, double slope,
                                   int shell_lo, int shell_hi, double amplitude,
                                   std::uint64_t seed) {
  if (shell_lo < 1 || shell_hi < shell_lo || shell_hi > grid.n() / 2 - 1)
    throw InvalidInput("spectrum band must satisfy 1 <= lo <= hi <= n/2 - 1");
  if (!(amplitude > 0.0) || !std::isfinite(amplitude))
    throw InvalidInput("amplitude must be positive and finite");
  if (!std::isfinite(slope)) throw InvalidInput("slope must be finite");

  const int dim = grid.dim();
  std::size_t per = grid.lattice_size();
  SpectralField u(grid, dim);
  std::mt19937_64 eng(seed);
  for (std::size_t i = 1; i < per; ++i) {
    std::size_t j = grid.conjugate(i);
    if (j < i) continue;  // partner already filled
    int s = shell_index(grid.mode_norm2(i));
    if (s < shell_lo || s > shell_hi) continue;
    // band stops below n/2, so no self-conjugate mode can land here
    for (int c = 0; c < dim; ++c) {
      double re = uniform_pm1(eng);
      double im = uniform_pm1(eng);
      u.at(c, i) = std::complex<double>(re, im);
      u.at(c, j) = std::complex<double>(re, -im);
    }
  }
  leray_project(u);

  // Rescale each shell to C s^slope, C fixed by the total-energy target.
  Spectrum sp = shell_spectrum(u);
  double target_total = 0.5 * amplitude * amplitude;
  double norm = 0.0;
  for (int s = shell_lo; s <= shell_hi; ++s)
    norm += std::pow(static_cast<double>(s), slope);
  std::vector<double> factor(sp.energy.size(), 1.0);
  for (int s = shell_lo; s <= shell_hi; ++s) {
    double have = sp.energy[static_cast<std::size_t>(s)] * sp.shell_width;
    if (!(have > 0.0))
      throw InvalidInput("degenerate draw: empty spectrum shell " +
                         std::to_string(s));
    double want = target_total * std::pow(static_cast<double>(s), slope) / norm;
    factor[static_cast<std::size_t>(s)] = std::sqrt(want / have);
  }
  std::vector<double> table(per, 0.0);
  for (std::size_t i = 0; i < per; ++i) {
    int s = shell_index(grid.mode_norm2(i));
    if (s >= shell_lo && s <= shell_hi)
      table[i] = factor[static_cast<std::size_t>(s)];
  }
  u.scale_modes(table);
  return u;
}

}  // namespace trelax
