#pragma once

#include <span>
#include <string>
#include <vector>

#include "core/field.hpp"

namespace trelax {

// Differential filter G = (I - delta^2 Lap)^{-1} plus the modified-Lavrentiev
// deconvolution family built on it.  All operators are Fourier multipliers;
// with z^2 = alpha * delta^2 * k^2,
//   g_hat  = 1 / (1 + delta^2 k^2)
//   d0_hat = (1 + delta^2 k^2) / (1 + alpha delta^2 k^2)   (= 1/((1-a)g+a))
//   h_hat  = 1 - (z^2/(1+z^2))^{N+1}
// delta = 0 degenerates every multiplier to 1; alpha = 0 removes the
// regularization (d0 becomes the exact inverse filter) and is admitted with
// a warning.
struct FilterParams {
  double delta = 0.0;  // filter radius
  double alpha = 1.0;  // Lavrentiev weight in [0, 1]
  int order = 0;       // deconvolution iteration count N >= 0

  void validate() const;
};

double filter_multiplier(const FilterParams& p, double k);          // g_hat
double inverse_filter_multiplier(const FilterParams& p, double k);  // 1/g_hat
double d0_multiplier(const FilterParams& p, double k);
double deconv_multiplier(const FilterParams& p, double k);       // d_N closed form
double hn_multiplier(const FilterParams& p, double k);           // h_N = d_N * g
double fluctuation_multiplier(const FilterParams& p, double k);  // 1 - h_N

SpectralField apply_filter(SpectralField f, const FilterParams& p);
SpectralField apply_inverse_filter(SpectralField f, const FilterParams& p);
SpectralField apply_d0(SpectralField f, const FilterParams& p);

// N fixed-point corrections starting from u_0 = D0 ubar:
//   u_m = u_{m-1} + D0 (ubar - G u_{m-1}).
// Deliberately iterative; the closed-form multiplier is the cross-check.
SpectralField deconvolve(SpectralField filtered, const FilterParams& p);

// H_N = D_N G via the closed-form multiplier.
SpectralField apply_hn(SpectralField f, const FilterParams& p);

struct TransferTable {
  std::vector<double> wavenumbers;
  std::vector<double> g_hat;
  std::vector<double> d0_hat;
  std::vector<double> h_hat;

  std::string to_csv() const;  // header k,g_hat,d0_hat,h_hat
};

TransferTable transfer_table(const FilterParams& p,
                             std::span<const double> wavenumbers);

// A-priori size of u - H_N ubar relative to u at a single wavenumber:
//   (alpha delta^2 k^2 / (1 + alpha delta^2 k^2))^{N+1}, k > 0.
double consistency_error_estimate(const FilterParams& p, double k);

}  // namespace trelax
