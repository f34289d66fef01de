#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <vector>

#include "core/diagnostics.hpp"
#include "core/field.hpp"
#include "core/filter.hpp"

namespace trelax {

// Body force assembled in spectral space; always mean-free and solenoidal.
enum class ForcingKind { none, steady_low_mode, custom };

struct ForcingSpec {
  ForcingKind kind = ForcingKind::none;
  double amplitude = 0.0;
  // For `custom`: a caller-supplied spectral field (dim components).
  std::shared_ptr<const SpectralField> custom;
};

SpectralField forcing_field(const GridSpec& grid, const ForcingSpec& spec);

struct SolverConfig {
  double dt = 1e-2;
  double t_end = 1.0;
  bool dealias = true;       // 2/3-rule truncation of the quadratic term
  bool nonlinear = true;     // false: drop u.grad u (linear decay runs)
  bool exact_linear = true;  // integrating-factor treatment of the linear part
  int record_every = 1;      // steps between diagnostic records in run()
  std::uint64_t seed = 0;    // recorded for provenance; ICs draw their own

  void validate() const;
};

// Complete model state: velocity plus the physical and filter parameters.
struct FlowState {
  GridSpec grid;
  SpectralField u;
  double t = 0.0;
  double nu = 0.0;
  double chi = 0.0;       // relaxation coefficient
  FilterParams filter;    // delta = 0 switches relaxation off
  ForcingSpec forcing;

  FlowState(GridSpec g, SpectralField field) : grid(g), u(std::move(field)) {}
};

// (chi/delta)(u - D_N G u), evaluated as a diagonal multiplier.
SpectralField relaxation_term(const SpectralField& u, const FilterParams& p,
                              double chi);

// -P[div(u u)] computed pseudo-spectrally in divergence form; inputs and
// outputs are truncated by the 2/3 rule when `dealias` (Nyquist planes are
// always dropped).  Optionally reports max_c max_x |u_c| for CFL advice.
SpectralField nonlinear_term(const SpectralField& u, bool dealias,
                             double* max_speed = nullptr);

// Time integrator: classical RK4 on the nonlinear part with the linear
// symbol nu k^2 + (chi/delta)(1 - h_N) folded in exactly through
// integrating factors (exact_linear), or plain RK4 on everything.
class Simulation {
 public:
  Simulation(FlowState initial, SolverConfig cfg);

  // Advance `steps` steps of cfg.dt.  Returns false when the solution went
  // non-finite; the step is not counted and time() stays at the last valid
  // value.
  bool advance(long long steps);

  const FlowState& state() const { return s_; }
  const SolverConfig& config() const { return cfg_; }
  double time() const { return s_.t; }
  bool blew_up() const { return blown_; }

  EnergyRecord energy_record() const;
  double fluctuation() const;  // |u - H_N u|^2, see fluctuation_energy()

 private:
  void rk_step();

  FlowState s_;
  SolverConfig cfg_;
  SpectralField force_;
  std::vector<double> e_half_;  // exp(-lambda dt/2)
  std::vector<double> e_full_;  // exp(-lambda dt)
  std::vector<double> lambda_;  // nu k^2 + (chi/delta)(1-h_N)
  bool blown_ = false;
  bool cfl_warned_ = false;
};

// One step of the scheme; throws BlowUpError if the result is non-finite.
FlowState step(FlowState state, const SolverConfig& cfg);

enum class RunStatus { ok, blew_up };

struct RunResult {
  RunStatus status = RunStatus::ok;
  double blow_up_time = 0.0;  // meaningful when status == blew_up
  std::vector<EnergyRecord> records;
  std::unique_ptr<FlowState> final_state;
};

// round(t_end/dt) steps with an EnergyRecord every record_every steps (plus
// t = 0 and the final state).  The sink, when set, sees each record alongside
// the live state.  Blow-up stops the run and keeps the records so far.
using DiagnosticsSink =
    std::function<void(const EnergyRecord&, const FlowState&)>;
RunResult run(FlowState initial, const SolverConfig& cfg,
              const DiagnosticsSink& sink = {});

// Classical cellular vortex array; solenoidal by construction.
SpectralField make_taylor_green(const GridSpec& grid);

// Random solenoidal field with shell energies proportional to k^slope on
// integer shells [shell_lo, shell_hi] and total energy amplitude^2/2.
// Identical seeds give bit-identical fields.
SpectralField make_random_spectrum(const GridSpec& grid, double slope,
                                   int shell_lo, int shell_hi, double amplitude,
                                   std::uint64_t seed);

}  // namespace trelax
