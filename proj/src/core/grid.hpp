#pragma once

#include <array>
#include <cstddef>

namespace trelax {

// Uniform periodic box (0,L)^dim, dim in {2,3}, n samples per axis (n even).
//
// Spectral storage follows the usual FFT layout: the coefficient for the
// integer mode m_d in [-n/2, n/2) sits at axis position m_d mod n, with the
// last axis varying fastest.  Physical wavenumbers are k = (2*pi/L) * m.
class GridSpec {
 public:
  GridSpec(int dim, int points_per_axis, double box_length);

  int dim() const { return dim_; }
  int n() const { return n_; }
  double length() const { return length_; }
  std::size_t lattice_size() const { return size_; }  // n^dim, also the
                                                      // physical sample count
  double wavenumber_unit() const { return k0_; }      // 2*pi/L
  double grid_spacing() const { return length_ / n_; }

  // Signed integer mode of a flat lattice index (unused axes report 0).
  std::array<int, 3> mode(std::size_t flat) const;
  std::array<double, 3> wavevector(std::size_t flat) const;
  long long mode_norm2(std::size_t flat) const;  // |m|^2
  double k_norm2(std::size_t flat) const { return k0_ * k0_ * mode_norm2(flat); }
  double k_norm(std::size_t flat) const;
  double k_inf_norm(std::size_t flat) const;       // (2*pi/L) * max_d |m_d|
  double mode_length_scale(std::size_t flat) const;  // 2*pi / |k|_inf, flat != 0

  // Index holding the conjugate partner mode -m.
  std::size_t conjugate(std::size_t flat) const;

  // Largest nearest-integer shell index |m| can bin to.
  int max_shell() const;

  bool operator==(const GridSpec& o) const {
    return dim_ == o.dim_ && n_ == o.n_ && length_ == o.length_;
  }

 private:
  int dim_;
  int n_;
  double length_;
  double k0_;
  std::size_t size_;
};

}  // namespace trelax
