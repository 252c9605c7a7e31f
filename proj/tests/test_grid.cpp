#include <doctest.h>

#include "hs/exponents.hpp"
#include "hs/fft.hpp"
#include "hs/field_io.hpp"
#include "hs/grid.hpp"
#include "hs/norms.hpp"

#include "oracles.hpp"

#include <cmath>
#include <cstdio>

using namespace hs;

TEST_CASE("make_grid basic invariants and rejects") {
  const GridSpec g = make_grid(3, 8, 4.0);
  CHECK(g.spacing() == doctest::Approx(1.0));
  CHECK(g.total_points() == 512);
  CHECK(g.spacing() * g.points_per_axis == doctest::Approx(2.0 * g.half_length));

  CHECK_THROWS_AS(make_grid(3, 7, 4.0), std::invalid_argument);
  CHECK_THROWS_AS(make_grid(3, 8, -1.0), std::invalid_argument);
  CHECK_THROWS_AS(make_grid(4, 8, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(make_grid(3, 4, 1.0), std::invalid_argument);
}

TEST_CASE("wavenumbers follow the standard layout") {
  const GridSpec g = make_grid(1, 8, M_PI);
  // k_j = j for L = pi; stored as 0,1,2,3,-4,-3,-2,-1.
  const double expect[8] = {0, 1, 2, 3, -4, -3, -2, -1};
  for (int j = 0; j < 8; ++j) CHECK(g.wavenumber(j) == doctest::Approx(expect[j]));
  CHECK(g.is_nyquist(4));
}

TEST_CASE("forward/inverse transforms invert each other and Parseval holds") {
  const GridSpec g = make_grid(2, 16, 3.0);
  Field f = Field::zero(g);
  for (std::size_t i = 0; i < f.values.size(); ++i)
    f.values[i] = cplx{std::sin(0.1 * i), std::cos(0.2 * i)};

  auto hat = fft::forward_copy(g, f.values);
  auto back = fft::inverse_copy(g, hat);
  double err = 0.0;
  for (std::size_t i = 0; i < back.size(); ++i) err = std::max(err, std::abs(back[i] - f.values[i]));
  CHECK(err < 1e-12);

  double phys = 0.0, spec = 0.0;
  for (const cplx& v : f.values) phys += std::norm(v);
  for (const cplx& v : hat) spec += std::norm(v);
  phys *= g.cell_volume();
  spec *= g.cell_volume() / static_cast<double>(g.total_points());
  CHECK(phys == doctest::Approx(spec).epsilon(1e-12));
}

TEST_CASE("spectral gradient: constants, lattice waves, Gaussian oracle") {
  const GridSpec g = make_grid(3, 16, 4.0);

  SUBCASE("constant field has zero gradient") {
    Field f = Field::zero(g);
    for (cplx& v : f.values) v = cplx{2.5, -1.0};
    for (const Field& comp : spectral_gradient(f))
      for (const cplx& v : comp.values) CHECK(std::abs(v) < 1e-12);
  }

  SUBCASE("on-lattice plane wave is an eigenfunction") {
    Field f = Field::zero(g);
    const double k0 = g.wavenumber(2);  // 2 pi / L n with n = 1 -> pi/2
    int ix[3];
    for (std::size_t i = 0; i < g.total_points(); ++i) {
      g.decode(i, ix);
      const double phase = k0 * g.coordinate(ix[0]);
      f.values[i] = cplx{std::cos(phase), std::sin(phase)};
    }
    const auto grad = spectral_gradient(f);
    double err = 0.0;
    for (std::size_t i = 0; i < g.total_points(); ++i)
      err = std::max(err, std::abs(grad[0].values[i] - cplx{0.0, k0} * f.values[i]));
    CHECK(err < 1e-10);
    for (const cplx& v : grad[1].values) CHECK(std::abs(v) < 1e-10);
  }

  SUBCASE("matches the analytic gradient of a resolved Gaussian") {
    // Contained and band-limited: boundary and spectral tails both < 1e-10.
    const GridSpec gg = make_grid(3, 40, 8.0);
    Field f = Field::zero(gg);
    int ix[3];
    for (std::size_t i = 0; i < gg.total_points(); ++i) {
      gg.decode(i, ix);
      double r2 = 0.0;
      for (int a = 0; a < 3; ++a) {
        const double x = gg.coordinate(ix[a]);
        r2 += x * x;
      }
      f.values[i] = std::exp(-r2 / 2.0);
    }
    const auto grad = spectral_gradient(f);
    double err = 0.0, scale = 0.0;
    for (std::size_t i = 0; i < gg.total_points(); ++i) {
      gg.decode(i, ix);
      const double x0 = gg.coordinate(ix[0]);
      const double analytic = -x0 * f.values[i].real();
      err = std::max(err, std::abs(grad[0].values[i].real() - analytic));
      scale = std::max(scale, std::abs(analytic));
    }
    CHECK(err / scale < 1e-8);
  }

  SUBCASE("gradient of a real field stays real") {
    Field f = Field::zero(g);
    int ix[3];
    for (std::size_t i = 0; i < g.total_points(); ++i) {
      g.decode(i, ix);
      f.values[i] = std::cos(0.7 * g.coordinate(ix[0])) * std::exp(-0.1 * (i % 7));
    }
    double imag_max = 0.0, scale = 0.0;
    for (const Field& comp : spectral_gradient(f))
      for (const cplx& v : comp.values) {
        imag_max = std::max(imag_max, std::abs(v.imag()));
        scale = std::max(scale, std::abs(v));
      }
    CHECK(imag_max <= 1e-12 * std::max(scale, 1.0));
  }
}

TEST_CASE("lp norms: constants, Gaussians, and rejects") {
  const GridSpec g = make_grid(3, 32, 8.0);

  SUBCASE("zero field") {
    const Field f = Field::zero(g);
    CHECK(lp_norm(f, 2.0) == 0.0);
    CHECK(lp_norm(f, kInfinity) == 0.0);
    CHECK(h1_norm(f) == 0.0);
  }

  SUBCASE("constant modulus") {
    Field f = Field::zero(g);
    for (cplx& v : f.values) v = cplx{0.6, 0.8};  // |v| = 1
    const double box = 2.0 * g.half_length;
    for (double r : {1.0, 2.0, 4.0})
      CHECK(lp_norm(f, r) == doctest::Approx(std::pow(box, 3.0 / r)).epsilon(1e-12));
    CHECK(lp_norm(f, kInfinity) == doctest::Approx(1.0));
  }

  SUBCASE("Gaussian squared-L2 equals the closed form") {
    Field f = Field::zero(g);
    int ix[3];
    for (std::size_t i = 0; i < g.total_points(); ++i) {
      g.decode(i, ix);
      double r2 = 0.0;
      for (int a = 0; a < 3; ++a) {
        const double x = g.coordinate(ix[a]);
        r2 += x * x;
      }
      f.values[i] = std::exp(-r2 / 2.0);
    }
    const double l2 = lp_norm(f, 2.0);
    CHECK(l2 * l2 == doctest::Approx(std::pow(M_PI, 1.5)).epsilon(1e-6));
  }

  SUBCASE("rejects r < 1") {
    const Field f = Field::zero(g);
    CHECK_THROWS_AS(lp_norm(f, 0.5), std::invalid_argument);
  }
}

TEST_CASE("cube norms") {
  const GridSpec g = make_grid(3, 16, 4.0);

  SUBCASE("zero field") { CHECK(cube_norm(Field::zero(g), 2.0, 2.0, 1.0) == 0.0); }

  SUBCASE("misaligned edge rejected") {
    CHECK_THROWS_AS(cube_norm(Field::zero(g), 2.0, 2.0, 0.7), std::invalid_argument);
  }

  SUBCASE("m = r collapses to the plain norm") {
    Field f = Field::zero(g);
    for (std::size_t i = 0; i < f.values.size(); ++i) f.values[i] = std::sin(0.3 * i) + 0.1;
    for (double r : {1.0, 2.0, 3.0})
      CHECK(cube_norm(f, r, r, 1.0) == doctest::Approx(lp_norm(f, r)).epsilon(1e-12));
  }

  SUBCASE("single-cube support: every m gives the local norm") {
    Field f = Field::zero(g);
    // Support within one 1.0-edge cube anchored at the box corner.
    f.values[0] = 1.0;
    f.values[1] = 2.0;
    const double local = lp_norm(f, 2.0);
    for (double m : {1.0, 2.0, 6.0, kInfinity})
      CHECK(cube_norm(f, m, 2.0, 1.0) == doctest::Approx(local).epsilon(1e-12));
  }

  SUBCASE("two disjoint bumps aggregate in the l^m sense") {
    Field f = Field::zero(g);
    // Two opposite corners of the box; cubes of edge 2.0.
    f.values[0] = 3.0 / std::sqrt(g.cell_volume());
    f.values[f.values.size() - 1] = 4.0 / std::sqrt(g.cell_volume());
    CHECK(cube_norm(f, 2.0, 2.0, 2.0) == doctest::Approx(5.0).epsilon(1e-12));
    CHECK(cube_norm(f, 1.0, 2.0, 2.0) == doctest::Approx(7.0).epsilon(1e-12));
    CHECK(cube_norm(f, kInfinity, 2.0, 2.0) == doctest::Approx(4.0).epsilon(1e-12));
  }
}

TEST_CASE("exponent bookkeeping") {
  CHECK(delta_exponent(3, 2.0) == doctest::Approx(0.0));
  CHECK(delta_exponent(3, 3.0) == doctest::Approx(0.5));  // r0 = 2n/(n-1) for n = 3
  CHECK(two_star(3) == doctest::Approx(6.0));
  CHECK(delta_exponent(3, two_star(3)) == doctest::Approx(1.0));
  CHECK_THROWS_AS(two_star(2), std::invalid_argument);

  // Conjugates are involutive: conj(conj(r)) = r.
  for (double r : {2.0, 3.0, 4.0, 6.0, 1.5}) {
    const double rb = conjugate_exponent(r);
    CHECK(1.0 / r + 1.0 / rb == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(conjugate_exponent(rb) == doctest::Approx(r).epsilon(1e-12));
  }
  CHECK(conjugate_exponent(kInfinity) == doctest::Approx(1.0));

  // delta is nondecreasing in r.
  double prev = -1.0;
  for (double r : {2.0, 2.5, 3.0, 4.0, 6.0, 12.0}) {
    const double d = delta_exponent(3, r);
    CHECK(d >= prev);
    prev = d;
  }

  CHECK(admissible_pair(3, 4.0, 3.0));        // 2/q = 1/2 = delta(3)
  CHECK(admissible_pair(3, kInfinity, 2.0));  // delta(2) = 0
  CHECK_FALSE(admissible_pair(3, 2.0, 6.0));  // delta = 1 excluded
  CHECK_FALSE(admissible_pair(3, 4.0, 4.0));
}

TEST_CASE("field files round-trip bit-exactly") {
  const GridSpec g = make_grid(2, 12, 2.5);
  Field f = Field::zero(g, 1.75);
  for (std::size_t i = 0; i < f.values.size(); ++i)
    f.values[i] = cplx{std::sin(0.3 * i), std::cos(0.11 * i)};

  const char* path = "roundtrip_test.hsf";
  write_field(f, path);
  const Field r = read_field(path);
  std::remove(path);

  CHECK(r.grid == g);
  CHECK(r.time == f.time);
  bool identical = true;
  for (std::size_t i = 0; i < f.values.size(); ++i)
    if (f.values[i] != r.values[i]) identical = false;
  CHECK(identical);
}
