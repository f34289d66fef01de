#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "doctest.h"

#include "core/common.hpp"
#include "core/field.hpp"
#include "core/grid.hpp"

using namespace trelax;

namespace {

std::vector<double> random_samples(std::size_t count, unsigned seed) {
  std::mt19937 eng(seed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  std::vector<double> out(count);
  for (auto& v : out) v = dist(eng);
  return out;
}

std::size_t flat_of(const GridSpec& g, int m0, int m1, int m2 = 0) {
  auto wrap = [&](int m) { return static_cast<std::size_t>((m + g.n()) % g.n()); };
  if (g.dim() == 2) return wrap(m0) * g.n() + wrap(m1);
  return (wrap(m0) * g.n() + wrap(m1)) * g.n() + wrap(m2);
}

}  // namespace

TEST_CASE("grid constructor rejects bad shapes") {
  CHECK_THROWS_AS(GridSpec(1, 8, 1.0), InvalidInput);
  CHECK_THROWS_AS(GridSpec(4, 8, 1.0), InvalidInput);
  CHECK_THROWS_AS(GridSpec(2, 7, 1.0), InvalidInput);
  CHECK_THROWS_AS(GridSpec(2, 2, 1.0), InvalidInput);
  CHECK_THROWS_AS(GridSpec(2, 0, 1.0), InvalidInput);
  CHECK_THROWS_AS(GridSpec(2, 8, 0.0), InvalidInput);
  CHECK_THROWS_AS(GridSpec(2, 8, -1.0), InvalidInput);
  CHECK_THROWS_AS(GridSpec(2, 8, std::nan("")), InvalidInput);
  CHECK_NOTHROW(GridSpec(2, 4, 1.0));
  CHECK_NOTHROW(GridSpec(3, 4, 2.5));
}

TEST_CASE("mode layout: last axis fastest, signed range [-n/2, n/2)") {
  GridSpec g(2, 4, 2 * pi);
  CHECK(g.lattice_size() == 16);

  // axis frequency order for n = 4 is 0, 1, -2, -1
  CHECK(g.mode(0) == std::array<int, 3>{0, 0, 0});
  CHECK(g.mode(1) == std::array<int, 3>{0, 1, 0});
  CHECK(g.mode(2) == std::array<int, 3>{0, -2, 0});
  CHECK(g.mode(3) == std::array<int, 3>{0, -1, 0});
  CHECK(g.mode(4) == std::array<int, 3>{1, 0, 0});
  CHECK(g.mode(8) == std::array<int, 3>{-2, 0, 0});
  CHECK(g.mode(12) == std::array<int, 3>{-1, 0, 0});
  CHECK(g.mode(15) == std::array<int, 3>{-1, -1, 0});

  GridSpec g3(3, 4, 2 * pi);
  CHECK(g3.lattice_size() == 64);
  CHECK(g3.mode(1) == std::array<int, 3>{0, 0, 1});
  CHECK(g3.mode(4) == std::array<int, 3>{0, 1, 0});
  CHECK(g3.mode(16) == std::array<int, 3>{1, 0, 0});
  CHECK(g3.mode(63) == std::array<int, 3>{-1, -1, -1});
}

TEST_CASE("wavevector and norms scale with 2*pi/L") {
  GridSpec g(2, 8, 4.0);  // k0 = pi/2
  CHECK(g.wavenumber_unit() == doctest::Approx(pi / 2).epsilon(1e-15));
  CHECK(g.grid_spacing() == doctest::Approx(0.5).epsilon(1e-15));

  std::size_t f = flat_of(g, 1, -2);
  auto k = g.wavevector(f);
  CHECK(k[0] == doctest::Approx(pi / 2).epsilon(1e-15));
  CHECK(k[1] == doctest::Approx(-pi).epsilon(1e-15));
  CHECK(g.mode_norm2(f) == 5);
  CHECK(g.k_norm(f) == doctest::Approx(std::sqrt(5.0) * pi / 2).epsilon(1e-14));
  CHECK(g.k_inf_norm(f) == doctest::Approx(pi).epsilon(1e-15));
  CHECK(g.mode_length_scale(f) == doctest::Approx(2.0).epsilon(1e-14));
  CHECK_THROWS_AS(g.mode_length_scale(0), InvalidInput);
}

TEST_CASE("conjugate index pairs m with -m") {
  for (int dim : {2, 3}) {
    GridSpec g(dim, 8, 2 * pi);
    for (std::size_t f = 0; f < g.lattice_size(); ++f) {
      std::size_t c = g.conjugate(f);
      auto m = g.mode(f);
      auto mc = g.mode(c);
      for (int d = 0; d < 3; ++d) {
        int expect = -m[d];
        if (expect == -(-g.n() / 2)) expect = -g.n() / 2;  // -(-n/2) wraps home
        CHECK(mc[d] == expect);
      }
      CHECK(g.conjugate(c) == f);
    }
    CHECK(g.conjugate(0) == 0);
  }
  // a pure Nyquist mode is its own partner
  GridSpec g(2, 4, 2 * pi);
  CHECK(g.conjugate(flat_of(g, -2, 0)) == flat_of(g, -2, 0));
  CHECK(g.conjugate(flat_of(g, -2, -2)) == flat_of(g, -2, -2));
}

TEST_CASE("max_shell covers the lattice corner") {
  GridSpec g2(2, 8, 2 * pi);
  CHECK(g2.max_shell() == std::lround(std::sqrt(2.0) * 4));
  GridSpec g3(3, 8, 2 * pi);
  CHECK(g3.max_shell() == std::lround(std::sqrt(3.0) * 4));
}

TEST_CASE("forward transform of cos and sin lands on the textbook modes") {
  GridSpec g(2, 8, 2 * pi);
  std::size_t nn = g.lattice_size();
  std::vector<double> cosx(nn), sinx(nn);
  for (std::size_t f = 0; f < nn; ++f) {
    auto m = g.mode(f);
    (void)m;
    // sample coordinates from the flat index: x = 2*pi*i/n on each axis
    std::size_t i0 = f / g.n();
    double x = 2 * pi * static_cast<double>(i0) / g.n();
    cosx[f] = std::cos(x);
    sinx[f] = std::sin(x);
  }
  auto uc = SpectralField::from_physical(g, 1, cosx);
  auto us = SpectralField::from_physical(g, 1, sinx);

  std::size_t plus = flat_of(g, 1, 0), minus = flat_of(g, -1, 0);
  CHECK(std::abs(uc.at(0, plus) - std::complex<double>(0.5, 0.0)) < 1e-14);
  CHECK(std::abs(uc.at(0, minus) - std::complex<double>(0.5, 0.0)) < 1e-14);
  CHECK(std::abs(us.at(0, plus) - std::complex<double>(0.0, -0.5)) < 1e-14);
  CHECK(std::abs(us.at(0, minus) - std::complex<double>(0.0, 0.5)) < 1e-14);
  for (std::size_t f = 0; f < nn; ++f) {
    if (f == plus || f == minus) continue;
    CHECK(std::abs(uc.at(0, f)) < 1e-14);
    CHECK(std::abs(us.at(0, f)) < 1e-14);
  }
}

TEST_CASE("round trip physical -> spectral -> physical") {
  for (int dim : {2, 3}) {
    GridSpec g(dim, 8, 3.0);
    int comps = dim;
    auto samples = random_samples(comps * g.lattice_size(), 42 + dim);
    auto field = SpectralField::from_physical(g, comps, samples);
    CHECK(field.symmetry_defect() < 1e-13);
    auto back = field.to_physical();
    REQUIRE(back.size() == samples.size());
    double worst = 0.0;
    for (std::size_t i = 0; i < samples.size(); ++i)
      worst = std::max(worst, std::abs(back[i] - samples[i]));
    CHECK(worst < 1e-12);
  }
}

TEST_CASE("Parseval equals the quadrature energy") {
  GridSpec g(3, 8, 2.0);
  auto samples = random_samples(3 * g.lattice_size(), 7);
  auto field = SpectralField::from_physical(g, 3, samples);
  double quad = 0.0;  // (1/L^d) integral u^2/2 = mean of samples^2/2
  for (double s : samples) quad += 0.5 * s * s;
  quad /= static_cast<double>(g.lattice_size());
  CHECK(parseval_energy(field) == doctest::Approx(quad).epsilon(1e-12));
  CHECK(norm2(field) == doctest::Approx(2 * quad).epsilon(1e-12));
}

TEST_CASE("inner product matches an analytic integral") {
  GridSpec g(2, 16, 2 * pi);
  std::size_t nn = g.lattice_size();
  std::vector<double> a(nn), b(nn);
  for (std::size_t f = 0; f < nn; ++f) {
    std::size_t i0 = f / g.n(), i1 = f % g.n();
    double x = 2 * pi * static_cast<double>(i0) / g.n();
    double y = 2 * pi * static_cast<double>(i1) / g.n();
    a[f] = std::cos(x) + std::sin(2 * y);
    b[f] = 3.0 * std::cos(x);
  }
  auto fa = SpectralField::from_physical(g, 1, a);
  auto fb = SpectralField::from_physical(g, 1, b);
  // (1/L^2) integral a.b = 3/2 from the cos^2 term; the rest integrates away
  CHECK(inner_product(fa, fb) == doctest::Approx(1.5).epsilon(1e-13));
  CHECK(inner_product(fa, fa) == doctest::Approx(norm2(fa)).epsilon(1e-13));
}

TEST_CASE("symmetry enforcement and detection") {
  GridSpec g(2, 8, 2 * pi);
  SpectralField f(g, 1);
  f.at(0, flat_of(g, 1, 2)) = {0.3, 0.7};  // deliberately no partner
  CHECK(f.symmetry_defect() > 0.5);
  CHECK(inverse_imag_residual(f) > 1e-3);
  CHECK_THROWS_AS(f.to_physical(), InvalidInput);
  CHECK_NOTHROW(f.to_physical_unchecked());

  f.symmetrize();
  CHECK(f.symmetry_defect() < 1e-15);
  CHECK(inverse_imag_residual(f) < 1e-14);
  // pair averaging: each partner ends up at half the original amplitude
  CHECK(std::abs(f.at(0, flat_of(g, 1, 2)) - std::complex<double>(0.15, 0.35)) <
        1e-15);
  CHECK(std::abs(f.at(0, flat_of(g, -1, -2)) - std::complex<double>(0.15, -0.35)) <
        1e-15);

  // self-conjugate modes must come out real
  SpectralField h(g, 1);
  h.at(0, flat_of(g, -4, 0)) = {1.0, 2.0};
  h.symmetrize();
  CHECK(h.at(0, flat_of(g, -4, 0)).imag() == 0.0);
}

TEST_CASE("zero_mean clears only the mean") {
  GridSpec g(2, 4, 1.0);
  SpectralField f(g, 2);
  f.at(0, 0) = {2.0, 0.0};
  f.at(1, 3) = {0.0, 1.0};
  f.zero_mean();
  CHECK(f.at(0, 0) == std::complex<double>(0.0, 0.0));
  CHECK(f.at(1, 0) == std::complex<double>(0.0, 0.0));
  CHECK(f.at(1, 3) == std::complex<double>(0.0, 1.0));
}

TEST_CASE("Leray projection produces and preserves solenoidal fields") {
  for (int dim : {2, 3}) {
    GridSpec g(dim, 8, 2 * pi);
    auto samples = random_samples(dim * g.lattice_size(), 11 * dim);
    auto u = SpectralField::from_physical(g, dim, samples);
    u.zero_mean();
    double e_before = parseval_energy(u);
    CHECK(max_divergence(u) > 1e-2);  // generic data is not solenoidal

    leray_project(u);
    CHECK(max_divergence(u) < 1e-13);
    CHECK(parseval_energy(u) <= e_before + 1e-15);

    // idempotent
    SpectralField v = u;
    leray_project(v);
    v -= u;
    CHECK(v.max_abs() < 1e-15);
  }
}

TEST_CASE("isotropic_table evaluates the symbol at |k|") {
  GridSpec g(2, 8, 4.0);
  auto table = isotropic_table(g, [](double k) { return 1.0 / (1.0 + k * k); });
  REQUIRE(table.size() == g.lattice_size());
  for (std::size_t f = 0; f < g.lattice_size(); ++f) {
    double k = g.k_norm(f);
    CHECK(table[f] == doctest::Approx(1.0 / (1.0 + k * k)).epsilon(1e-15));
  }
}

TEST_CASE("scale_modes applies a diagonal multiplier") {
  GridSpec g(2, 4, 2 * pi);
  auto samples = random_samples(g.lattice_size(), 3);
  auto f = SpectralField::from_physical(g, 1, samples);
  std::vector<double> halve(g.lattice_size(), 0.5);
  auto before = f;
  f.scale_modes(halve);
  for (std::size_t i = 0; i < g.lattice_size(); ++i)
    CHECK(std::abs(f.at(0, i) - 0.5 * before.at(0, i)) < 1e-15);

  std::vector<double> bad(3, 1.0);
  CHECK_THROWS_AS(f.scale_modes(bad), InvalidInput);
}

TEST_CASE("shape validation on construction and arithmetic") {
  GridSpec g(2, 4, 1.0);
  CHECK_THROWS_AS(SpectralField(g, 3), InvalidInput);  // 2D: 1 or 2 only
  CHECK_THROWS_AS(SpectralField(g, 0), InvalidInput);
  std::vector<double> tiny(5, 0.0);
  CHECK_THROWS_AS(SpectralField::from_physical(g, 1, tiny), InvalidInput);

  SpectralField a(g, 1), b(g, 2);
  CHECK_THROWS_AS(a += b, InvalidInput);
  GridSpec g2(2, 8, 1.0);
  SpectralField c(g2, 1);
  CHECK_THROWS_AS(a -= c, InvalidInput);
  CHECK_THROWS_AS(max_divergence(a), InvalidInput);  // scalar has no divergence
}

TEST_CASE("axpy and scalar multiply") {
  GridSpec g(2, 4, 1.0);
  auto s1 = random_samples(g.lattice_size(), 1);
  auto s2 = random_samples(g.lattice_size(), 2);
  auto a = SpectralField::from_physical(g, 1, s1);
  auto b = SpectralField::from_physical(g, 1, s2);
  auto c = a;
  c.axpy(2.5, b);
  c *= 2.0;
  for (std::size_t i = 0; i < g.lattice_size(); ++i) {
    auto expect = 2.0 * (a.at(0, i) + 2.5 * b.at(0, i));
    CHECK(std::abs(c.at(0, i) - expect) < 1e-14);
  }
}
