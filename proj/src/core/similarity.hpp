#pragma once

#include <optional>
#include <string>

namespace trelax {

// Scaling relations connecting the relaxation coefficient chi, the filter
// radius delta, the Lavrentiev weight alpha and deconvolution order N to the
// model's effective Reynolds number and micro-scale eta.  Everything here is
// closed-form arithmetic on positive reals.
struct SimilarityInputs {
  double u_ref = 0.0;  // large-scale velocity U
  double l_ref = 0.0;  // large-scale length L
  std::optional<double> nu;  // give exactly one of nu / re
  std::optional<double> re;
  double delta = 0.0;
  double alpha = 1.0;
  int order = 0;
  std::optional<double> chi;        // absent: selected by the calculator
  std::optional<double> u_small;    // measured small-scale velocity (optional)
  std::optional<double> eta_model;  // measured micro-scale (optional)

  void validate() const;
  double viscosity() const;        // nu, derived from Re when absent
  double reynolds() const;         // Re = U L / nu
};

enum class ResolutionCase {
  fully_resolved,
  under_resolved_small_alpha,
  under_resolved_large_alpha,
  under_resolved_critical_alpha,
  perfectly_resolved,
  indeterminate,
};

const char* to_string(ResolutionCase c);

// Model Reynolds number Re_N = U L^{2N+1} / (chi alpha^{N+1} delta^{2N+1}).
double reynolds_n(double u_ref, double l_ref, double chi, double alpha,
                  double delta, int order);

// Small-scale variant at scale eta with velocity u_small:
// Re_N^small = u eta^{2N+1} (1 + alpha delta^2/eta^2)^{N+1}
//              / (chi alpha^{N+1} delta^{2N+1}).
double reynolds_n_small(double u_small, double eta, double chi, double alpha,
                        double delta, int order);

// Micro-scale candidates; `consistent` records whether the closing
// assumption of the derivation holds for the computed value.
struct MicroScale {
  double value = 0.0;
  bool consistent = false;
};

// Balance assuming eta > delta:
// eta = (chi^3 L / U^3)^{1/(6N+4)} alpha^{1/2 + 1/(6N+4)} delta^{1 - 1/(6N+4)}.
MicroScale microscale_resolved(double u_ref, double l_ref, double chi,
                               double alpha, double delta, int order);

// Balance assuming eta < delta and alpha > (eta/delta)^2:
// eta = sqrt(U^3 delta^3 / (chi^3 L))   (order drops out).
MicroScale microscale_large_alpha(double u_ref, double l_ref, double chi,
                                  double alpha, double delta);

// chi choices and the consistency error they induce.
struct ChiSelection {
  double chi = 0.0;
  double consistency_error = 0.0;
};

// eta = delta sqrt(alpha):  chi = (U/L^{1/3}) 2^{N+1} (delta/alpha)^{1/3};
// error reported as the exact product chi alpha^{N+1} delta^{2N+1}.
ChiSelection chi_critical_alpha(double u_ref, double l_ref, double delta,
                                double alpha, int order);

// eta = delta:  chi = (U/L^{1/3}) delta^{1/3} (1 + 1/alpha)^{N+1};
// error reported as (1 + alpha)^{N+1} delta^{2N + 7/3}.
ChiSelection chi_perfectly_resolved(double u_ref, double l_ref, double delta,
                                    double alpha, int order);

// Lower bounds on chi for the relaxation drain to dominate viscous
// dissipation at the model micro-scale:
//   bound 1: chi > (Re^{-3/4} L)^{2N+4/3} (U/L^{1/3}) / (alpha^{N+1} delta^{2N+1})
//   bound 2: chi > nu (delta/eta)^{-2N} delta^{-1} alpha^{-(N+1)}
//                  (1 + alpha delta^2/eta^2)^{N+1}
double chi_lower_bound_kolmogorov(double u_ref, double l_ref, double re,
                                  double alpha, double delta, int order);
double chi_lower_bound_microscale(double nu, double delta, double eta,
                                  double alpha, int order);

double kolmogorov_scale(double l_ref, double re);  // eta_K = Re^{-3/4} L

struct DofSpeedup {
  double n_dof = 0.0;      // (L/delta)^3
  double n_dof_nse = 0.0;  // Re^{9/4}
  double speedup = 0.0;    // (delta/L)^4 Re^3
};

DofSpeedup dof_and_speedup(double l_ref, double delta, double re);

// Full report: case classification plus every derived quantity.
struct SimilarityReport {
  double re = 0.0;
  double re_n = 0.0;
  std::optional<double> re_n_small;
  MicroScale resolved;     // eta > delta branch
  MicroScale large_alpha;  // eta < delta, alpha large branch
  ResolutionCase which = ResolutionCase::indeterminate;
  std::optional<double> eta_selected;
  double chi = 0.0;
  bool chi_given = false;  // false: chi came from chi_perfectly_resolved
  double consistency_error = 0.0;  // chi alpha^{N+1} delta^{2N+1}
  std::optional<double> case3_error;  // present when chi selected for eta=delta
  double eta_kolmogorov = 0.0;
  double chi_bound_kolmogorov = 0.0;
  std::optional<double> chi_bound_microscale;
  bool chi_satisfies_bounds = false;  // vs every bound that could be formed
  DofSpeedup dof;
};

SimilarityReport classify_case(const SimilarityInputs& in);

}  // namespace trelax
