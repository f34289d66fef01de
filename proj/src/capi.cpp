// C surface over the spectral core: opaque handles, status codes, a
// thread-local error message.  Exceptions stop here.

#include "trelax.h"

#include <cmath>
#include <cstdio>
#include <cstring>
#include <limits>
#include <new>
#include <string>

#include "core/checkpoint.hpp"
#include "core/common.hpp"
#include "core/diagnostics.hpp"
#include "core/filter.hpp"
#include "core/similarity.hpp"
#include "core/solver.hpp"
#include "core/textio.hpp"

using namespace trelax;

namespace {

thread_local std::string g_last_error;

template <typename Fn>
trx_status guarded(Fn&& fn) {
  try {
    fn();
    g_last_error.clear();
    return TRX_OK;
  } catch (const BlowUpError& e) {
    g_last_error = e.what();
    return TRX_ERR_BLOWUP;
  } catch (const IoError& e) {
    g_last_error = e.what();
    return TRX_ERR_IO;
  } catch (const InvalidInput& e) {
    g_last_error = e.what();
    return TRX_ERR_INVALID;
  } catch (const UndefinedRatio& e) {
    g_last_error = e.what();
    return TRX_ERR_INVALID;
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return TRX_ERR_INTERNAL;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return TRX_ERR_INTERNAL;
  } catch (...) {
    g_last_error = "unknown failure";
    return TRX_ERR_INTERNAL;
  }
}

trx_status invalid(const char* message) {
  g_last_error = message;
  return TRX_ERR_INVALID;
}

FilterParams to_core(const trx_filter_params& p) {
  return FilterParams{p.delta, p.alpha, p.order};
}

double nan_value() { return std::numeric_limits<double>::quiet_NaN(); }

bool given(double v) { return std::isfinite(v) && v > 0.0; }

}  // namespace

extern "C" {

struct trx_sim {
  Simulation impl;
};

const char* trx_version(void) { return "0.1.0"; }

const char* trx_last_error(void) { return g_last_error.c_str(); }

void trx_set_warning_handler(trx_warning_fn fn, void* ctx) {
  if (!fn) {
    set_warning_handler({});
    return;
  }
  set_warning_handler(
      [fn, ctx](const std::string& message) { fn(message.c_str(), ctx); });
}

trx_status trx_write_text_file(const char* path, const char* content) {
  if (!path || !content) return invalid("path and content must be non-NULL");
  return guarded([&] { atomic_write_file(path, content); });
}

trx_status trx_time_average(const double* t, const double* v, int count,
                            double* out) {
  if (!t || !v || !out) return invalid("NULL argument");
  return guarded([&] {
    *out = time_average({t, static_cast<std::size_t>(count < 0 ? 0 : count)},
                        {v, static_cast<std::size_t>(count < 0 ? 0 : count)});
  });
}

/* ---------------------------------------------------------------- filters */

trx_status trx_transfer_table(const trx_filter_params* p,
                              const double* wavenumbers, int count,
                              double* g_hat, double* d0_hat, double* h_hat) {
  if (!p || !wavenumbers) return invalid("NULL argument");
  if (count <= 0) return invalid("count must be positive");
  return guarded([&] {
    TransferTable t = transfer_table(
        to_core(*p), {wavenumbers, static_cast<std::size_t>(count)});
    for (int i = 0; i < count; ++i) {
      if (g_hat) g_hat[i] = t.g_hat[static_cast<std::size_t>(i)];
      if (d0_hat) d0_hat[i] = t.d0_hat[static_cast<std::size_t>(i)];
      if (h_hat) h_hat[i] = t.h_hat[static_cast<std::size_t>(i)];
    }
  });
}

trx_status trx_transfer_table_write_csv(const trx_filter_params* p,
                                        const double* wavenumbers, int count,
                                        const char* path) {
  if (!p || !wavenumbers || !path) return invalid("NULL argument");
  if (count <= 0) return invalid("count must be positive");
  return guarded([&] {
    TransferTable t = transfer_table(
        to_core(*p), {wavenumbers, static_cast<std::size_t>(count)});
    atomic_write_file(path, t.to_csv());
  });
}

trx_status trx_consistency_error(const trx_filter_params* p, double k,
                                 double* out) {
  if (!p || !out) return invalid("NULL argument");
  return guarded([&] { *out = consistency_error_estimate(to_core(*p), k); });
}

trx_status trx_deconv_error(int dim, int n, double box_length,
                            const trx_filter_params* p, double* out) {
  if (!p || !out) return invalid("NULL argument");
  return guarded([&] {
    GridSpec grid(dim, n, box_length);
    // cos combination over the three lowest nonzero modes; real symmetric
    // coefficients by construction.
    SpectralField u(grid, 1);
    auto set_pair = [&](std::size_t flat, double amp) {
      u.at(0, flat) = amp;
      u.at(0, grid.conjugate(flat)) = amp;
    };
    std::size_t un = static_cast<std::size_t>(n);
    std::size_t unit_last = 1;              // mode (0,...,0,1)
    std::size_t unit_first =                // mode (1,0,...,0)
        dim == 2 ? un : un * un;
    set_pair(unit_first, 0.5);
    set_pair(unit_last, 0.4);
    set_pair(unit_first + unit_last, 0.3);  // mode (1,0,..,1)

    FilterParams params = to_core(*p);
    SpectralField recovered = deconvolve(apply_filter(u, params), params);
    recovered -= u;
    *out = std::sqrt(norm2(recovered) / norm2(u));
  });
}

/* ----------------------------------------------------------- simulations */

void trx_sim_spec_init(trx_sim_spec* spec) {
  if (!spec) return;
  std::memset(spec, 0, sizeof *spec);
  spec->dim = 2;
  spec->n = 64;
  spec->box_length = 2.0 * pi;
  spec->nu = 1e-3;
  spec->chi = 0.0;
  spec->filter = trx_filter_params{0.0, 0.5, 0};
  spec->forcing = TRX_FORCING_NONE;
  spec->forcing_amplitude = 0.0;
  spec->ic = TRX_IC_TAYLOR_GREEN;
  spec->ic_amplitude = 1.0;
  spec->ic_slope = -2.0;
  spec->ic_shell_lo = 1;
  spec->ic_shell_hi = 4;
  spec->seed = 1;
  spec->dt = 1e-2;
  spec->dealias = 1;
  spec->nonlinear = 1;
  spec->exact_linear = 1;
}

namespace {

SolverConfig runtime_config(const trx_sim_spec& spec) {
  SolverConfig cfg;
  cfg.dt = spec.dt;
  cfg.t_end = 0.0;  // stepping is driven by trx_sim_advance
  cfg.dealias = spec.dealias != 0;
  cfg.nonlinear = spec.nonlinear != 0;
  cfg.exact_linear = spec.exact_linear != 0;
  cfg.seed = spec.seed;
  return cfg;
}

ForcingSpec forcing_spec(const trx_sim_spec& spec) {
  ForcingSpec f;
  switch (spec.forcing) {
    case TRX_FORCING_NONE:
      break;
    case TRX_FORCING_STEADY_LOW_MODE:
      f.kind = ForcingKind::steady_low_mode;
      f.amplitude = spec.forcing_amplitude;
      break;
    default:
      throw InvalidInput("unknown forcing kind " + std::to_string(spec.forcing));
  }
  return f;
}

}  // namespace

trx_status trx_sim_create(const trx_sim_spec* spec, trx_sim** out) {
  if (!spec || !out) return invalid("NULL argument");
  *out = nullptr;
  return guarded([&] {
    GridSpec grid(spec->dim, spec->n, spec->box_length);
    SpectralField u0 = [&] {
      switch (spec->ic) {
        case TRX_IC_TAYLOR_GREEN: {
          SpectralField f = make_taylor_green(grid);
          f *= spec->ic_amplitude;
          return f;
        }
        case TRX_IC_RANDOM_SPECTRUM:
          return make_random_spectrum(grid, spec->ic_slope, spec->ic_shell_lo,
                                      spec->ic_shell_hi, spec->ic_amplitude,
                                      spec->seed);
        default:
          throw InvalidInput("unknown initial condition kind " +
                             std::to_string(spec->ic));
      }
    }();
    FlowState state(grid, std::move(u0));
    state.nu = spec->nu;
    state.chi = spec->chi;
    state.filter = to_core(spec->filter);
    state.forcing = forcing_spec(*spec);
    *out = new trx_sim{Simulation(std::move(state), runtime_config(*spec))};
  });
}

trx_status trx_sim_open(const char* checkpoint_path,
                        const trx_sim_spec* runtime, trx_sim** out) {
  if (!checkpoint_path || !out) return invalid("NULL argument");
  *out = nullptr;
  return guarded([&] {
    FlowState state = load_checkpoint(checkpoint_path);
    trx_sim_spec defaults;
    trx_sim_spec_init(&defaults);
    const trx_sim_spec& rt = runtime ? *runtime : defaults;
    state.forcing = forcing_spec(rt);
    *out = new trx_sim{Simulation(std::move(state), runtime_config(rt))};
  });
}

void trx_sim_destroy(trx_sim* sim) { delete sim; }

trx_status trx_sim_advance(trx_sim* sim, long long steps) {
  if (!sim) return invalid("NULL simulation");
  if (steps < 0) return invalid("steps must be >= 0");
  return guarded([&] {
    if (!sim->impl.advance(steps))
      throw BlowUpError("solution became non-finite", sim->impl.time());
  });
}

double trx_sim_time(const trx_sim* sim) {
  return sim ? sim->impl.time() : nan_value();
}

trx_status trx_sim_energy(const trx_sim* sim, trx_energy_row* out) {
  if (!sim || !out) return invalid("NULL argument");
  return guarded([&] {
    EnergyRecord r = sim->impl.energy_record();
    *out = trx_energy_row{r.t,       r.e_model,       r.eps_model,
                          r.viscous, r.forcing_input, r.max_div};
  });
}

trx_status trx_sim_fluctuation(const trx_sim* sim, double* out) {
  if (!sim || !out) return invalid("NULL argument");
  return guarded([&] { *out = sim->impl.fluctuation(); });
}

int trx_sim_shells(const trx_sim* sim) {
  return sim ? sim->impl.state().grid.max_shell() + 1 : 0;
}

trx_status trx_sim_spectrum(const trx_sim* sim, double* k, double* e,
                            int capacity) {
  if (!sim || !k || !e) return invalid("NULL argument");
  return guarded([&] {
    Spectrum sp = shell_spectrum(sim->impl.state().u);
    if (capacity < sp.shells())
      throw InvalidInput("spectrum capacity too small: need " +
                         std::to_string(sp.shells()));
    for (int s = 0; s < sp.shells(); ++s) {
      k[s] = sp.shell_center(s);
      e[s] = sp.energy[static_cast<std::size_t>(s)];
    }
  });
}

int64_t trx_sim_coeff_count(const trx_sim* sim) {
  return sim ? static_cast<int64_t>(sim->impl.state().u.size()) : 0;
}

trx_status trx_sim_copy_coeffs(const trx_sim* sim, double* out,
                               int64_t capacity_doubles) {
  if (!sim || !out) return invalid("NULL argument");
  const SpectralField& u = sim->impl.state().u;
  int64_t need = 2 * static_cast<int64_t>(u.size());
  if (capacity_doubles < need) return invalid("coefficient buffer too small");
  std::memcpy(out, u.data(), static_cast<std::size_t>(need) * sizeof(double));
  return TRX_OK;
}

trx_status trx_sim_save(const trx_sim* sim, const char* path) {
  if (!sim || !path) return invalid("NULL argument");
  return guarded([&] { save_checkpoint(sim->impl.state(), path); });
}

/* ------------------------------------------------------------ similarity */

static SimilarityInputs to_core(const trx_similarity_inputs& in) {
  SimilarityInputs s;
  s.u_ref = in.u_ref;
  s.l_ref = in.l_ref;
  if (given(in.nu)) s.nu = in.nu;
  if (given(in.re)) s.re = in.re;
  s.delta = in.delta;
  s.alpha = in.alpha;
  s.order = in.order;
  if (given(in.chi)) s.chi = in.chi;
  if (given(in.u_small)) s.u_small = in.u_small;
  if (given(in.eta_model)) s.eta_model = in.eta_model;
  return s;
}

trx_status trx_similarity_classify(const trx_similarity_inputs* in,
                                   trx_similarity_report* out) {
  if (!in || !out) return invalid("NULL argument");
  return guarded([&] {
    SimilarityReport r = classify_case(to_core(*in));
    trx_similarity_report o{};
    o.re = r.re;
    o.re_n = r.re_n;
    o.re_n_small = r.re_n_small.value_or(nan_value());
    o.eta_resolved = r.resolved.value;
    o.eta_resolved_consistent = r.resolved.consistent ? 1 : 0;
    o.eta_large_alpha = r.large_alpha.value;
    o.eta_large_alpha_consistent = r.large_alpha.consistent ? 1 : 0;
    std::snprintf(o.case_label, sizeof o.case_label, "%s", to_string(r.which));
    o.eta_selected = r.eta_selected.value_or(nan_value());
    o.chi = r.chi;
    o.chi_given = r.chi_given ? 1 : 0;
    o.consistency_error = r.consistency_error;
    o.case3_error = r.case3_error.value_or(nan_value());
    o.eta_kolmogorov = r.eta_kolmogorov;
    o.chi_bound_kolmogorov = r.chi_bound_kolmogorov;
    o.chi_bound_microscale = r.chi_bound_microscale.value_or(nan_value());
    o.chi_satisfies_bounds = r.chi_satisfies_bounds ? 1 : 0;
    o.n_dof = r.dof.n_dof;
    o.n_dof_nse = r.dof.n_dof_nse;
    o.speedup = r.dof.speedup;
    *out = o;
  });
}

trx_status trx_reynolds_n(double u_ref, double l_ref, double chi, double alpha,
                          double delta, int order, double* out) {
  if (!out) return invalid("NULL output");
  return guarded(
      [&] { *out = reynolds_n(u_ref, l_ref, chi, alpha, delta, order); });
}

trx_status trx_reynolds_n_small(double u_small, double eta, double chi,
                                double alpha, double delta, int order,
                                double* out) {
  if (!out) return invalid("NULL output");
  return guarded([&] {
    *out = reynolds_n_small(u_small, eta, chi, alpha, delta, order);
  });
}

trx_status trx_microscale_resolved(double u_ref, double l_ref, double chi,
                                   double alpha, double delta, int order,
                                   double* eta, int* consistent) {
  if (!eta) return invalid("NULL output");
  return guarded([&] {
    MicroScale m = microscale_resolved(u_ref, l_ref, chi, alpha, delta, order);
    *eta = m.value;
    if (consistent) *consistent = m.consistent ? 1 : 0;
  });
}

trx_status trx_microscale_large_alpha(double u_ref, double l_ref, double chi,
                                      double alpha, double delta, double* eta,
                                      int* consistent) {
  if (!eta) return invalid("NULL output");
  return guarded([&] {
    MicroScale m = microscale_large_alpha(u_ref, l_ref, chi, alpha, delta);
    *eta = m.value;
    if (consistent) *consistent = m.consistent ? 1 : 0;
  });
}

trx_status trx_chi_critical_alpha(double u_ref, double l_ref, double delta,
                                  double alpha, int order, double* chi,
                                  double* consistency_error) {
  if (!chi) return invalid("NULL output");
  return guarded([&] {
    ChiSelection s = chi_critical_alpha(u_ref, l_ref, delta, alpha, order);
    *chi = s.chi;
    if (consistency_error) *consistency_error = s.consistency_error;
  });
}

trx_status trx_chi_perfectly_resolved(double u_ref, double l_ref, double delta,
                                      double alpha, int order, double* chi,
                                      double* consistency_error) {
  if (!chi) return invalid("NULL output");
  return guarded([&] {
    ChiSelection s = chi_perfectly_resolved(u_ref, l_ref, delta, alpha, order);
    *chi = s.chi;
    if (consistency_error) *consistency_error = s.consistency_error;
  });
}

trx_status trx_chi_lower_bound_kolmogorov(double u_ref, double l_ref,
                                          double re, double alpha,
                                          double delta, int order,
                                          double* out) {
  if (!out) return invalid("NULL output");
  return guarded([&] {
    *out = chi_lower_bound_kolmogorov(u_ref, l_ref, re, alpha, delta, order);
  });
}

trx_status trx_chi_lower_bound_microscale(double nu, double delta, double eta,
                                          double alpha, int order,
                                          double* out) {
  if (!out) return invalid("NULL output");
  return guarded([&] {
    *out = chi_lower_bound_microscale(nu, delta, eta, alpha, order);
  });
}

trx_status trx_kolmogorov_scale(double l_ref, double re, double* out) {
  if (!out) return invalid("NULL output");
  return guarded([&] { *out = kolmogorov_scale(l_ref, re); });
}

trx_status trx_dof_speedup(double l_ref, double delta, double re,
                           double* n_dof, double* n_dof_nse, double* speedup) {
  return guarded([&] {
    DofSpeedup d = dof_and_speedup(l_ref, delta, re);
    if (n_dof) *n_dof = d.n_dof;
    if (n_dof_nse) *n_dof_nse = d.n_dof_nse;
    if (speedup) *speedup = d.speedup;
  });
}

} /* extern "C" */
