#include "core/grid.hpp"

#include <cmath>
#include <string>

#include "core/common.hpp"

namespace trelax {

namespace {

inline int signed_freq(int index, int n) {
  // index n/2 maps to -n/2: the negative Nyquist representative.
  return index < n / 2 ? index : index - n;
}

}  // namespace

GridSpec::GridSpec(int dim, int points_per_axis, double box_length)
    : dim_(dim), n_(points_per_axis), length_(box_length) {
  if (dim != 2 && dim != 3)
    throw InvalidInput("grid dimension must be 2 or 3, got " + std::to_string(dim));
  if (n_ < 4 || n_ % 2 != 0)
    throw InvalidInput("points per axis must be even and >= 4, got " +
                       std::to_string(n_));
  if (!(length_ > 0.0) || !std::isfinite(length_))
    throw InvalidInput("box length must be positive and finite");
  k0_ = 2.0 * pi / length_;
  size_ = 1;
  for (int d = 0; d < dim_; ++d) size_ *= static_cast<std::size_t>(n_);
}

std::array<int, 3> GridSpec::mode(std::size_t flat) const {
  std::array<int, 3> m{0, 0, 0};
  auto un = static_cast<std::size_t>(n_);
  if (dim_ == 2) {
    m[0] = signed_freq(static_cast<int>(flat / un), n_);
    m[1] = signed_freq(static_cast<int>(flat % un), n_);
  } else {
    m[2] = signed_freq(static_cast<int>(flat % un), n_);
    flat /= un;
    m[1] = signed_freq(static_cast<int>(flat % un), n_);
    m[0] = signed_freq(static_cast<int>(flat / un), n_);
  }
  return m;
}

std::array<double, 3> GridSpec::wavevector(std::size_t flat) const {
  auto m = mode(flat);
  return {k0_ * m[0], k0_ * m[1], k0_ * m[2]};
}

long long GridSpec::mode_norm2(std::size_t flat) const {
  auto m = mode(flat);
  return static_cast<long long>(m[0]) * m[0] + static_cast<long long>(m[1]) * m[1] +
         static_cast<long long>(m[2]) * m[2];
}

double GridSpec::k_norm(std::size_t flat) const {
  return k0_ * std::sqrt(static_cast<double>(mode_norm2(flat)));
}

double GridSpec::k_inf_norm(std::size_t flat) const {
  auto m = mode(flat);
  int a = std::abs(m[0]), b = std::abs(m[1]), c = std::abs(m[2]);
  int mx = a > b ? a : b;
  if (c > mx) mx = c;
  return k0_ * mx;
}

double GridSpec::mode_length_scale(std::size_t flat) const {
  double ki = k_inf_norm(flat);
  if (ki == 0.0)
    throw InvalidInput("mode length scale is undefined for the mean mode");
  return 2.0 * pi / ki;
}

std::size_t GridSpec::conjugate(std::size_t flat) const {
  auto un = static_cast<std::size_t>(n_);
  std::size_t result = 0;
  // Reverse each axis index modulo n; axis order does not matter as long as
  // strides are rebuilt consistently (last axis fastest).
  std::size_t stride = size_ / un;
  std::size_t rem = flat;
  for (int d = 0; d < dim_; ++d) {
    std::size_t idx = rem / stride;
    rem %= stride;
    std::size_t conj_idx = idx == 0 ? 0 : un - idx;
    result += conj_idx * stride;
    stride /= un;
  }
  return result;
}

int GridSpec::max_shell() const {
  double r = std::sqrt(static_cast<double>(dim_)) * (n_ / 2);
  return static_cast<int>(std::lround(r));
}

}  // namespace trelax
