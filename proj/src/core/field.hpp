#pragma once

#include <complex>
#include <functional>
#include <span>
#include <vector>

#include "core/grid.hpp"

namespace trelax {

// A scalar or vector field stored as its full complex Fourier lattice,
// component-major.  Coefficients follow the convention
//   u(x) = sum_k u_hat(k) exp(i k.x),
// i.e. u_hat = FFT_forward(samples) / n^dim, which matches
// u_hat(k) = (1/L^dim) * integral of u exp(-i k.x).
//
// Fields representing real data keep u_hat(-k) = conj(u_hat(k)); the checked
// to_physical() refuses fields that lost that symmetry.
class SpectralField {
 public:
  SpectralField(const GridSpec& grid, int components);  // zero field

  // Forward transform of real samples (component-major, grid layout).
  static SpectralField from_physical(const GridSpec& grid, int components,
                                     std::span<const double> samples);

  // Inverse transform to real samples; validates conjugate symmetry first.
  std::vector<double> to_physical() const;
  std::vector<double> to_physical_unchecked() const;

  const GridSpec& grid() const { return grid_; }
  int components() const { return components_; }
  std::size_t size() const { return data_.size(); }

  std::complex<double>* component(int c);
  const std::complex<double>* component(int c) const;
  std::complex<double>& at(int c, std::size_t flat);
  const std::complex<double>& at(int c, std::size_t flat) const;

  std::complex<double>* data() { return data_.data(); }
  const std::complex<double>* data() const { return data_.data(); }

  void zero_mean();    // clear the k = 0 coefficient of every component
  void symmetrize();   // project onto u_hat(-k) = conj(u_hat(k))
  double symmetry_defect() const;  // max |u_hat(k) - conj(u_hat(-k))|
  double max_abs() const;

  // Multiply every component by a per-mode real table of lattice size.
  void scale_modes(std::span<const double> table);

  SpectralField& operator+=(const SpectralField& o);
  SpectralField& operator-=(const SpectralField& o);
  SpectralField& operator*=(double s);
  void axpy(double a, const SpectralField& x);  // this += a*x

 private:
  GridSpec grid_;
  int components_;
  std::vector<std::complex<double>> data_;
};

// Per-mode real multiplier table from an isotropic symbol fn(|k|).
std::vector<double> isotropic_table(const GridSpec& grid,
                                    const std::function<double(double)>& fn);

// Remove the non-solenoidal part: u_hat -= k (k.u_hat)/|k|^2 for k != 0.
void leray_project(SpectralField& f);

// sum_k (1/2)|u_hat|^2 over all components
// = (1/L^dim) * integral of |u|^2/2 by Parseval.
double parseval_energy(const SpectralField& f);

// sum_k |u_hat|^2 (no 1/2), i.e. (1/L^dim) * integral of |u|^2.
double norm2(const SpectralField& f);

// sum_k Re(a_hat . conj(b_hat)) = (1/L^dim) * integral of a.b.
double inner_product(const SpectralField& a, const SpectralField& b);

// max_k |k . u_hat(k)|; zero (to round-off) for solenoidal fields.
double max_divergence(const SpectralField& f);

// max |Im| of the raw inverse transform, a direct measure of how far the
// field is from representing real data.
double inverse_imag_residual(const SpectralField& f);

}  // namespace trelax
