#include "core/filter.hpp"

#include <cmath>
#include <string>

#include "core/common.hpp"
#include "core/textio.hpp"

namespace trelax {

namespace {

void maybe_warn_alpha(const FilterParams& p) {
  if (p.alpha == 0.0 && p.delta > 0.0)
    emit_warning("alpha = 0 disables the Lavrentiev regularization; "
                 "deconvolution is the unregularized inverse filter");
}

std::vector<double> multiplier_table(const SpectralField& f,
                                     double (*mult)(const FilterParams&, double),
                                     const FilterParams& p) {
  return isotropic_table(f.grid(), [&](double k) { return mult(p, k); });
}

}  // namespace

void FilterParams::validate() const {
  if (!(delta >= 0.0) || !std::isfinite(delta))
    throw InvalidInput("filter radius must be finite and >= 0");
  if (!(alpha >= 0.0 && alpha <= 1.0))
    throw InvalidInput("alpha must lie in [0, 1], got " + std::to_string(alpha));
  if (order < 0)
    throw InvalidInput("deconvolution order must be >= 0, got " +
                       std::to_string(order));
}

double filter_multiplier(const FilterParams& p, double k) {
  double d2k2 = p.delta * p.delta * k * k;
  return 1.0 / (1.0 + d2k2);
}

double inverse_filter_multiplier(const FilterParams& p, double k) {
  double d2k2 = p.delta * p.delta * k * k;
  return 1.0 + d2k2;
}

double d0_multiplier(const FilterParams& p, double k) {
  double d2k2 = p.delta * p.delta * k * k;
  return (1.0 + d2k2) / (1.0 + p.alpha * d2k2);
}

double fluctuation_multiplier(const FilterParams& p, double k) {
  double z2 = p.alpha * p.delta * p.delta * k * k;
  double r = std::isinf(z2) ? 1.0 : z2 / (1.0 + z2);  // in [0, 1]
  return std::pow(r, p.order + 1);
}

double hn_multiplier(const FilterParams& p, double k) {
  return 1.0 - fluctuation_multiplier(p, k);
}

double deconv_multiplier(const FilterParams& p, double k) {
  // d_N = h_N / g; safe because g_hat never vanishes.
  return hn_multiplier(p, k) * inverse_filter_multiplier(p, k);
}

SpectralField apply_filter(SpectralField f, const FilterParams& p) {
  p.validate();
  f.scale_modes(multiplier_table(f, filter_multiplier, p));
  return f;
}

SpectralField apply_inverse_filter(SpectralField f, const FilterParams& p) {
  p.validate();
  f.scale_modes(multiplier_table(f, inverse_filter_multiplier, p));
  return f;
}

SpectralField apply_d0(SpectralField f, const FilterParams& p) {
  p.validate();
  maybe_warn_alpha(p);
  f.scale_modes(multiplier_table(f, d0_multiplier, p));
  return f;
}

SpectralField deconvolve(SpectralField filtered, const FilterParams& p) {
  p.validate();
  maybe_warn_alpha(p);
  auto g_table = multiplier_table(filtered, filter_multiplier, p);
  auto d0_table = multiplier_table(filtered, d0_multiplier, p);

  // u_0 = D0 ubar
  SpectralField u = filtered;
  u.scale_modes(d0_table);
  for (int step = 1; step <= p.order; ++step) {
    SpectralField resid = u;
    resid.scale_modes(g_table);   // G u_{m-1}
    resid *= -1.0;
    resid += filtered;            // ubar - G u_{m-1}
    resid.scale_modes(d0_table);  // D0 (...)
    u += resid;
  }
  return u;
}

SpectralField apply_hn(SpectralField f, const FilterParams& p) {
  p.validate();
  f.scale_modes(multiplier_table(f, hn_multiplier, p));
  return f;
}

std::string TransferTable::to_csv() const {
  std::string out = "k,g_hat,d0_hat,h_hat\n";
  for (std::size_t i = 0; i < wavenumbers.size(); ++i) {
    out += format_double(wavenumbers[i]);
    out += ',';
    out += format_double(g_hat[i]);
    out += ',';
    out += format_double(d0_hat[i]);
    out += ',';
    out += format_double(h_hat[i]);
    out += '\n';
  }
  return out;
}

TransferTable transfer_table(const FilterParams& p,
                             std::span<const double> wavenumbers) {
  p.validate();
  if (wavenumbers.empty())
    throw InvalidInput("transfer table needs at least one wavenumber");
  TransferTable t;
  t.wavenumbers.reserve(wavenumbers.size());
  t.g_hat.reserve(wavenumbers.size());
  t.d0_hat.reserve(wavenumbers.size());
  t.h_hat.reserve(wavenumbers.size());
  for (double k : wavenumbers) {
    if (!(k >= 0.0) || !std::isfinite(k))
      throw InvalidInput("wavenumbers must be finite and >= 0");
    t.wavenumbers.push_back(k);
    t.g_hat.push_back(filter_multiplier(p, k));
    t.d0_hat.push_back(d0_multiplier(p, k));
    t.h_hat.push_back(hn_multiplier(p, k));
  }
  return t;
}

double consistency_error_estimate(const FilterParams& p, double k) {
  p.validate();
  if (!(k > 0.0))
    throw InvalidInput("consistency error estimate requires k > 0");
  return fluctuation_multiplier(p, k);
}

}  // namespace trelax
