#include "core/field.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <cstring>
#include <map>
#include <memory>
#include <mutex>
#include <string>

#include "core/common.hpp"

namespace trelax {

namespace {

// One c2c plan pair per (dim, n), created with FFTW_ESTIMATE so planning is
// deterministic and never touches the input data.  Execution goes through the
// plan's own aligned buffers; the mutex serializes both planning and use.
struct PlanSet {
  fftw_complex* buf = nullptr;
  fftw_plan fwd = nullptr;
  fftw_plan bwd = nullptr;
  std::size_t size = 0;

  PlanSet(int dim, int n) {
    size = 1;
    for (int d = 0; d < dim; ++d) size *= static_cast<std::size_t>(n);
    buf = fftw_alloc_complex(size);
    if (!buf) throw std::bad_alloc();
    int dims[3] = {n, n, n};
    fwd = fftw_plan_dft(dim, dims, buf, buf, FFTW_FORWARD, FFTW_ESTIMATE);
    bwd = fftw_plan_dft(dim, dims, buf, buf, FFTW_BACKWARD, FFTW_ESTIMATE);
    if (!fwd || !bwd) throw std::runtime_error("fftw plan creation failed");
  }
  ~PlanSet() {
    if (fwd) fftw_destroy_plan(fwd);
    if (bwd) fftw_destroy_plan(bwd);
    if (buf) fftw_free(buf);
  }
  PlanSet(const PlanSet&) = delete;
  PlanSet& operator=(const PlanSet&) = delete;
};

std::mutex g_fft_mutex;

PlanSet& plans_for(const GridSpec& grid) {
  static std::map<std::pair<int, int>, std::unique_ptr<PlanSet>> cache;
  auto key = std::make_pair(grid.dim(), grid.n());
  auto it = cache.find(key);
  if (it == cache.end())
    it = cache.emplace(key, std::make_unique<PlanSet>(grid.dim(), grid.n())).first;
  return *it->second;
}

}  // namespace

SpectralField::SpectralField(const GridSpec& grid, int components)
    : grid_(grid), components_(components) {
  if (components != 1 && components != grid.dim())
    throw InvalidInput("field must have 1 or dim components, got " +
                       std::to_string(components));
  data_.assign(static_cast<std::size_t>(components) * grid.lattice_size(),
               std::complex<double>(0.0, 0.0));
}

SpectralField SpectralField::from_physical(const GridSpec& grid, int components,
                                           std::span<const double> samples) {
  std::size_t per = grid.lattice_size();
  if (samples.size() != per * static_cast<std::size_t>(components))
    throw InvalidInput("sample count does not match grid and component count");
  SpectralField out(grid, components);
  std::lock_guard<std::mutex> lock(g_fft_mutex);
  PlanSet& plans = plans_for(grid);
  const double scale = 1.0 / static_cast<double>(per);
  for (int c = 0; c < components; ++c) {
    const double* src = samples.data() + static_cast<std::size_t>(c) * per;
    for (std::size_t i = 0; i < per; ++i) {
      plans.buf[i][0] = src[i];
      plans.buf[i][1] = 0.0;
    }
    fftw_execute(plans.fwd);
    std::complex<double>* dst = out.component(c);
    for (std::size_t i = 0; i < per; ++i)
      dst[i] = std::complex<double>(plans.buf[i][0] * scale, plans.buf[i][1] * scale);
  }
  return out;
}

std::vector<double> SpectralField::to_physical() const {
  double defect = symmetry_defect();
  double scale = max_abs();
  if (defect > 1e-8 * (1.0 + scale))
    throw InvalidInput("field violates conjugate symmetry (defect " +
                       std::to_string(defect) + "); not a real field");
  return to_physical_unchecked();
}

std::vector<double> SpectralField::to_physical_unchecked() const {
  std::size_t per = grid_.lattice_size();
  std::vector<double> out(static_cast<std::size_t>(components_) * per);
  std::lock_guard<std::mutex> lock(g_fft_mutex);
  PlanSet& plans = plans_for(grid_);
  for (int c = 0; c < components_; ++c) {
    const std::complex<double>* src = component(c);
    for (std::size_t i = 0; i < per; ++i) {
      plans.buf[i][0] = src[i].real();
      plans.buf[i][1] = src[i].imag();
    }
    fftw_execute(plans.bwd);
    double* dst = out.data() + static_cast<std::size_t>(c) * per;
    for (std::size_t i = 0; i < per; ++i) dst[i] = plans.buf[i][0];
  }
  return out;
}

std::complex<double>* SpectralField::component(int c) {
  return data_.data() + static_cast<std::size_t>(c) * grid_.lattice_size();
}

const std::complex<double>* SpectralField::component(int c) const {
  return data_.data() + static_cast<std::size_t>(c) * grid_.lattice_size();
}

std::complex<double>& SpectralField::at(int c, std::size_t flat) {
  return component(c)[flat];
}

const std::complex<double>& SpectralField::at(int c, std::size_t flat) const {
  return component(c)[flat];
}

void SpectralField::zero_mean() {
  for (int c = 0; c < components_; ++c) component(c)[0] = 0.0;
}

void SpectralField::symmetrize() {
  std::size_t per = grid_.lattice_size();
  for (int c = 0; c < components_; ++c) {
    std::complex<double>* a = component(c);
    for (std::size_t i = 0; i < per; ++i) {
      std::size_t j = grid_.conjugate(i);
      if (j < i) continue;  // each pair once
      if (j == i) {
        a[i] = std::complex<double>(a[i].real(), 0.0);
      } else {
        std::complex<double> avg = 0.5 * (a[i] + std::conj(a[j]));
        a[i] = avg;
        a[j] = std::conj(avg);
      }
    }
  }
}

double SpectralField::symmetry_defect() const {
  std::size_t per = grid_.lattice_size();
  double worst = 0.0;
  for (int c = 0; c < components_; ++c) {
    const std::complex<double>* a = component(c);
    for (std::size_t i = 0; i < per; ++i) {
      std::size_t j = grid_.conjugate(i);
      if (j < i) continue;
      worst = std::max(worst, std::abs(a[i] - std::conj(a[j])));
    }
  }
  return worst;
}

double SpectralField::max_abs() const {
  double worst = 0.0;
  for (const auto& z : data_) worst = std::max(worst, std::abs(z));
  return worst;
}

void SpectralField::scale_modes(std::span<const double> table) {
  std::size_t per = grid_.lattice_size();
  if (table.size() != per)
    throw InvalidInput("multiplier table size does not match the lattice");
  for (int c = 0; c < components_; ++c) {
    std::complex<double>* a = component(c);
    for (std::size_t i = 0; i < per; ++i) a[i] *= table[i];
  }
}

SpectralField& SpectralField::operator+=(const SpectralField& o) {
  if (!(grid_ == o.grid_) || components_ != o.components_)
    throw InvalidInput("field shape mismatch");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
  return *this;
}

SpectralField& SpectralField::operator-=(const SpectralField& o) {
  if (!(grid_ == o.grid_) || components_ != o.components_)
    throw InvalidInput("field shape mismatch");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= o.data_[i];
  return *this;
}

SpectralField& SpectralField::operator*=(double s) {
  for (auto& z : data_) z *= s;
  return *this;
}

void SpectralField::axpy(double a, const SpectralField& x) {
  if (!(grid_ == x.grid_) || components_ != x.components_)
    throw InvalidInput("field shape mismatch");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += a * x.data_[i];
}

std::vector<double> isotropic_table(const GridSpec& grid,
                                    const std::function<double(double)>& fn) {
  std::size_t per = grid.lattice_size();
  std::vector<double> table(per);
  for (std::size_t i = 0; i < per; ++i) table[i] = fn(grid.k_norm(i));
  return table;
}

void leray_project(SpectralField& f) {
  const GridSpec& g = f.grid();
  int dim = g.dim();
  if (f.components() != dim)
    throw InvalidInput("projection requires a vector field with dim components");
  std::size_t per = g.lattice_size();
  for (std::size_t i = 1; i < per; ++i) {
    auto kv = g.wavevector(i);
    double k2 = kv[0] * kv[0] + kv[1] * kv[1] + kv[2] * kv[2];
    std::complex<double> kdotu(0.0, 0.0);
    for (int c = 0; c < dim; ++c) kdotu += kv[c] * f.at(c, i);
    std::complex<double> s = kdotu / k2;
    for (int c = 0; c < dim; ++c) f.at(c, i) -= kv[c] * s;
  }
}

double parseval_energy(const SpectralField& f) { return 0.5 * norm2(f); }

double norm2(const SpectralField& f) {
  double sum = 0.0;
  const std::complex<double>* a = f.data();
  for (std::size_t i = 0; i < f.size(); ++i) sum += std::norm(a[i]);
  return sum;
}

double inner_product(const SpectralField& a, const SpectralField& b) {
  if (!(a.grid() == b.grid()) || a.components() != b.components())
    throw InvalidInput("field shape mismatch");
  double sum = 0.0;
  const std::complex<double>* pa = a.data();
  const std::complex<double>* pb = b.data();
  for (std::size_t i = 0; i < a.size(); ++i)
    sum += pa[i].real() * pb[i].real() + pa[i].imag() * pb[i].imag();
  return sum;
}

double max_divergence(const SpectralField& f) {
  const GridSpec& g = f.grid();
  if (f.components() != g.dim())
    throw InvalidInput("divergence requires a vector field");
  std::size_t per = g.lattice_size();
  double worst = 0.0;
  for (std::size_t i = 0; i < per; ++i) {
    auto kv = g.wavevector(i);
    std::complex<double> kdotu(0.0, 0.0);
    for (int c = 0; c < g.dim(); ++c) kdotu += kv[c] * f.at(c, i);
    worst = std::max(worst, std::abs(kdotu));
  }
  return worst;
}

double inverse_imag_residual(const SpectralField& f) {
  std::size_t per = f.grid().lattice_size();
  double worst = 0.0;
  std::lock_guard<std::mutex> lock(g_fft_mutex);
  PlanSet& plans = plans_for(f.grid());
  for (int c = 0; c < f.components(); ++c) {
    const std::complex<double>* src = f.component(c);
    for (std::size_t i = 0; i < per; ++i) {
      plans.buf[i][0] = src[i].real();
      plans.buf[i][1] = src[i].imag();
    }
    fftw_execute(plans.bwd);
    for (std::size_t i = 0; i < per; ++i)
      worst = std::max(worst, std::abs(plans.buf[i][1]));
  }
  return worst;
}

}  // namespace trelax
