#include <algorithm>
#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "doctest.h"

#include "core/common.hpp"
#include "core/field.hpp"
#include "core/filter.hpp"

using namespace trelax;

namespace {

SpectralField random_real_field(const GridSpec& g, int comps, unsigned seed) {
  std::mt19937 eng(seed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  std::vector<double> s(comps * g.lattice_size());
  for (auto& v : s) v = dist(eng);
  return SpectralField::from_physical(g, comps, s);
}

}  // namespace

TEST_CASE("parameter validation") {
  CHECK_NOTHROW(FilterParams{0.0, 1.0, 0}.validate());
  CHECK_NOTHROW(FilterParams{0.5, 0.0, 3}.validate());
  CHECK_THROWS_AS((FilterParams{-0.1, 0.5, 0}.validate()), InvalidInput);
  CHECK_THROWS_AS((FilterParams{0.5, -0.1, 0}.validate()), InvalidInput);
  CHECK_THROWS_AS((FilterParams{0.5, 1.1, 0}.validate()), InvalidInput);
  CHECK_THROWS_AS((FilterParams{0.5, 0.5, -1}.validate()), InvalidInput);
  CHECK_THROWS_AS((FilterParams{std::nan(""), 0.5, 0}.validate()), InvalidInput);
}

TEST_CASE("multiplier values at a hand-checked point") {
  FilterParams p{1.0, 0.5, 0};
  CHECK(filter_multiplier(p, 1.0) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(inverse_filter_multiplier(p, 1.0) == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(d0_multiplier(p, 1.0) == doctest::Approx(4.0 / 3.0).epsilon(1e-15));
  CHECK(hn_multiplier(p, 1.0) == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
  CHECK(fluctuation_multiplier(p, 1.0) == doctest::Approx(1.0 / 3.0).epsilon(1e-15));

  // one fixed-point correction: d_1 = d_0 (1 + (1 - g d_0)) evaluates to 16/9
  FilterParams p1{1.0, 0.5, 1};
  CHECK(deconv_multiplier(p1, 1.0) == doctest::Approx(16.0 / 9.0).epsilon(1e-14));
  CHECK(hn_multiplier(p1, 1.0) == doctest::Approx(8.0 / 9.0).epsilon(1e-14));
}

TEST_CASE("algebraic identities of the multiplier family") {
  std::vector<FilterParams> params = {
      {0.7, 0.3, 0}, {0.7, 0.3, 2}, {2.0, 1.0, 5}, {0.1, 0.01, 1}, {3.0, 0.9, 10}};
  std::vector<double> ks = {0.0, 0.25, 1.0, 3.0, 17.0};
  for (const auto& p : params) {
    for (double k : ks) {
      double g = filter_multiplier(p, k);
      double d0 = d0_multiplier(p, k);
      double z2 = p.alpha * p.delta * p.delta * k * k;
      // D0 G = 1/(1 + alpha delta^2 k^2): the regularized near-inverse
      CHECK(d0 * g == doctest::Approx(1.0 / (1.0 + z2)).epsilon(1e-14));
      double h = hn_multiplier(p, k);
      CHECK(h == doctest::Approx(deconv_multiplier(p, k) * g).epsilon(1e-13));
      CHECK(h >= 0.0);
      CHECK(h <= 1.0);
      CHECK(fluctuation_multiplier(p, k) == doctest::Approx(1.0 - h).epsilon(1e-13));
      if (k > 0.0) {
        CHECK(consistency_error_estimate(p, k) ==
              doctest::Approx(std::pow(z2 / (1.0 + z2), p.order + 1))
                  .epsilon(1e-13));
      }
    }
    // k = 0 passes through every operator untouched
    CHECK(filter_multiplier(p, 0.0) == 1.0);
    CHECK(d0_multiplier(p, 0.0) == 1.0);
    CHECK(hn_multiplier(p, 0.0) == 1.0);
    CHECK(fluctuation_multiplier(p, 0.0) == 0.0);
  }
}

TEST_CASE("h_N increases with N and decreases with k") {
  FilterParams p{1.5, 0.6, 0};
  for (double k : {0.5, 1.0, 4.0}) {
    double prev = -1.0;
    for (int n = 0; n <= 20; ++n) {
      FilterParams q = p;
      q.order = n;
      double h = hn_multiplier(q, k);
      CHECK(h > prev);
      prev = h;
    }
  }
  FilterParams q{1.5, 0.6, 3};
  double prev = 2.0;
  for (double k = 0.0; k <= 8.0; k += 0.5) {
    double h = hn_multiplier(q, k);
    CHECK(h <= prev + 1e-15);
    prev = h;
  }
}

TEST_CASE("degenerate parameters") {
  // delta = 0: every operator is the identity
  FilterParams p0{0.0, 0.5, 4};
  for (double k : {0.0, 1.0, 10.0}) {
    CHECK(filter_multiplier(p0, k) == 1.0);
    CHECK(d0_multiplier(p0, k) == 1.0);
    CHECK(hn_multiplier(p0, k) == 1.0);
    CHECK(fluctuation_multiplier(p0, k) == 0.0);
  }
  GridSpec g(2, 8, 2 * pi);
  auto u = random_real_field(g, 1, 5);
  auto v = deconvolve(apply_filter(u, p0), p0);
  v -= u;
  CHECK(v.max_abs() < 1e-15);

  // alpha = 1: D0 is the identity, h_N = g^{N+1} shape
  FilterParams p1{2.0, 1.0, 0};
  CHECK(d0_multiplier(p1, 3.0) == doctest::Approx(1.0).epsilon(1e-15));

  // alpha = 0: exact inversion, h_N = 1 at every order
  FilterParams pz{2.0, 0.0, 0};
  CHECK(d0_multiplier(pz, 3.0) ==
        doctest::Approx(inverse_filter_multiplier(pz, 3.0)).epsilon(1e-15));
  CHECK(hn_multiplier(pz, 3.0) == doctest::Approx(1.0).epsilon(1e-14));
  FilterParams pz5{2.0, 0.0, 5};
  CHECK(hn_multiplier(pz5, 3.0) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("alpha = 0 application emits an advisory") {
  std::vector<std::string> captured;
  set_warning_handler([&](const std::string& m) { captured.push_back(m); });
  GridSpec g(2, 8, 2 * pi);
  auto u = random_real_field(g, 1, 9);
  FilterParams p{1.0, 0.0, 0};
  (void)apply_d0(u, p);
  set_warning_handler({});
  REQUIRE(!captured.empty());
  CHECK(captured.front().find("alpha") != std::string::npos);
}

TEST_CASE("iterative deconvolution matches the closed-form multiplier") {
  for (int dim : {2, 3}) {
    GridSpec g(dim, 8, 2 * pi);
    auto u = random_real_field(g, dim, 21 + dim);
    for (int order : {0, 1, 2, 5, 17}) {
      FilterParams p{0.8, 0.4, order};
      auto recovered = deconvolve(apply_filter(u, p), p);

      auto closed = u;
      closed.scale_modes(
          isotropic_table(g, [&](double k) { return hn_multiplier(p, k); }));
      recovered -= closed;
      CHECK(recovered.max_abs() < 1e-12 * (1.0 + u.max_abs()));
    }
  }
}

TEST_CASE("apply_hn agrees with deconvolve after filtering") {
  GridSpec g(2, 16, 2 * pi);
  auto u = random_real_field(g, 2, 33);
  FilterParams p{0.5, 0.25, 3};
  auto a = apply_hn(u, p);
  auto b = deconvolve(apply_filter(u, p), p);
  b -= a;
  CHECK(b.max_abs() < 1e-12);
}

TEST_CASE("filter and inverse filter cancel") {
  GridSpec g(3, 8, 1.0);
  auto u = random_real_field(g, 3, 44);
  FilterParams p{0.2, 0.5, 0};
  auto v = apply_inverse_filter(apply_filter(u, p), p);
  v -= u;
  CHECK(v.max_abs() < 1e-12);
}

TEST_CASE("resolved projection is non-expansive and non-negative") {
  GridSpec g(2, 16, 2 * pi);
  for (unsigned seed = 0; seed < 8; ++seed) {
    auto u = random_real_field(g, 2, 100 + seed);
    FilterParams p{1.0, 0.5, static_cast<int>(seed % 4)};
    auto hu = apply_hn(u, p);
    CHECK(inner_product(hu, u) >= 0.0);
    auto fluct = u;
    fluct -= hu;
    CHECK(inner_product(fluct, u) >= 0.0);
    CHECK(parseval_energy(hu) <= parseval_energy(u) * (1.0 + 1e-14));
  }
}

TEST_CASE("transfer table columns and CSV shape") {
  FilterParams p{1.0, 0.5, 1};
  std::vector<double> ks = {0.0, 1.0, 2.0, 5.5};
  auto table = transfer_table(p, ks);
  REQUIRE(table.wavenumbers.size() == ks.size());
  for (std::size_t i = 0; i < ks.size(); ++i) {
    CHECK(table.g_hat[i] == doctest::Approx(filter_multiplier(p, ks[i])));
    CHECK(table.d0_hat[i] == doctest::Approx(d0_multiplier(p, ks[i])));
    CHECK(table.h_hat[i] == doctest::Approx(hn_multiplier(p, ks[i])));
  }
  auto csv = table.to_csv();
  CHECK(csv.rfind("k,g_hat,d0_hat,h_hat\n", 0) == 0);
  CHECK(csv.find("\n0,1,1,1\n") != std::string::npos);
  // one header plus one line per wavenumber
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 1 + std::ptrdiff_t(ks.size()));
}

TEST_CASE("transfer table input validation") {
  FilterParams p{1.0, 0.5, 0};
  CHECK_THROWS_AS(transfer_table(p, std::vector<double>{}), InvalidInput);
  CHECK_THROWS_AS(transfer_table(p, std::vector<double>{1.0, -2.0}), InvalidInput);
  CHECK_THROWS_AS(transfer_table(p, std::vector<double>{std::nan("")}),
                  InvalidInput);
  CHECK_THROWS_AS(consistency_error_estimate(p, 0.0), InvalidInput);
  CHECK_THROWS_AS(consistency_error_estimate(p, -1.0), InvalidInput);
}
