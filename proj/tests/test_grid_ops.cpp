#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "kslab/grid_ops.hpp"

#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <random>

using namespace kslab;

namespace {

constexpr double kPi = std::numbers::pi;

Field field_from(GridPtr g, const std::function<double(double, double)>& f) {
  Field out = make_field(g);
  if (g->is_one_dimensional()) {
    for (int i = 0; i < g->num_cells(); ++i) {
      out.values[i] = f(g->cell_center(0, i), 0.0);
    }
  } else {
    for (int j = 0; j < g->cells(1); ++j) {
      for (int i = 0; i < g->cells(0); ++i) {
        out.values[g->index(i, j)] = f(g->cell_center(0, i), g->cell_center(1, j));
      }
    }
  }
  return out;
}

Field random_nonneg_field(GridPtr g, unsigned seed, double scale = 1.0) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> dist(0.0, scale);
  Field f = make_field(g);
  for (int i = 0; i < g->num_cells(); ++i) f.values[i] = dist(rng);
  return f;
}

std::vector<GridPtr> all_kinds() {
  return {make_interval_grid(24, 1.0), make_rect_grid(12, 10, 1.0, 0.8),
          make_radial_grid(20, 1.0, 3)};
}

} // namespace

TEST_CASE("grid invariants: positive weights summing to the measure") {
  for (const auto& g : {make_interval_grid(17, 2.5), make_rect_grid(8, 5, 1.5, 0.5),
                        make_radial_grid(33, 2.0, 1), make_radial_grid(33, 2.0, 2),
                        make_radial_grid(33, 2.0, 3), make_radial_grid(33, 2.0, 5)}) {
    CHECK((g->quad_weights() > 0.0).all());
    CHECK(g->quad_weights().sum() ==
          doctest::Approx(g->measure()).epsilon(1e-12));
  }
  // unit ball measures: 2R, pi R^2, 4/3 pi R^3
  CHECK(make_radial_grid(8, 1.0, 1)->measure() == doctest::Approx(2.0));
  CHECK(make_radial_grid(8, 1.0, 2)->measure() == doctest::Approx(kPi));
  CHECK(make_radial_grid(8, 1.0, 3)->measure() == doctest::Approx(4.0 * kPi / 3.0));
  CHECK_THROWS_AS(Grid::interval(3, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(Grid::radial(8, 1.0, 0), std::invalid_argument);
}

TEST_CASE("integrate") {
  auto g1 = make_interval_grid(16, 1.0);
  CHECK(integrate(make_field(g1, 1.0), *g1) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(integrate(make_field(g1, 0.0), *g1) == 0.0);
  auto gb = make_radial_grid(32, 1.0, 3);
  CHECK(integrate(make_field(gb, 2.0), *gb) ==
        doctest::Approx(8.0 * kPi / 3.0).epsilon(1e-12));
}

TEST_CASE("lp norms") {
  auto g = make_interval_grid(32, 1.0);
  const double inf = std::numeric_limits<double>::infinity();
  for (double p : {1.0, 2.0, 3.5, inf}) {
    CHECK(lp_norm(make_field(g, 0.75), p, *g) == doctest::Approx(0.75).epsilon(1e-12));
  }
  Field spike = make_field(g);
  spike.values[7] = 5.0;
  CHECK(lp_norm(spike, inf, *g) == 5.0);
  // f(x) = x on [0,1]: ||f||_2 = 1/sqrt(3), midpoint quadrature is O(h^2)
  Field lin = field_from(g, [](double x, double) { return x; });
  CHECK(lp_norm(lin, 2.0, *g) ==
        doctest::Approx(1.0 / std::sqrt(3.0)).epsilon(1e-3));
  CHECK_THROWS_AS(lp_norm(lin, 0.5, *g), std::invalid_argument);
}

TEST_CASE("laplacian of constants vanishes") {
  for (const auto& g : all_kinds()) {
    Field c = make_field(g, 3.25);
    CHECK(laplacian_neumann(c, *g).values.abs().maxCoeff() <= 1e-13);
  }
}

TEST_CASE("radial laplacian of r^2 equals 2N") {
  for (int dim : {1, 2, 3, 5}) {
    auto g = make_radial_grid(24, 1.0, dim);
    Field f = field_from(g, [](double r, double) { return r * r; });
    const Vector lap = laplacian_neumann(f, *g).values;
    // interior cells (away from the zero-flux outer boundary)
    for (int i = 0; i < g->num_cells() - 1; ++i) {
      CHECK(lap[i] == doctest::Approx(2.0 * dim).epsilon(1e-10));
    }
  }
}

TEST_CASE("1D laplacian of cos(pi x) and discrete compatibility") {
  auto g = make_interval_grid(64, 1.0);
  Field f = field_from(g, [](double x, double) { return std::cos(kPi * x); });
  const Field lap = laplacian_neumann(f, *g);
  for (int i = 0; i < g->num_cells(); ++i) {
    const double exact = -kPi * kPi * std::cos(kPi * g->cell_center(0, i));
    CHECK(lap.values[i] == doctest::Approx(exact).epsilon(3e-3));  // O(h^2)
  }
  CHECK(std::abs(integrate(lap, *g)) <= 1e-12);
}

TEST_CASE("laplacian quad-sums to zero on every kind") {
  for (const auto& g : all_kinds()) {
    Field f = random_nonneg_field(g, 17u, 2.0);
    const Field lap = laplacian_neumann(f, *g);
    const double scale = (g->quad_weights() * lap.values.abs()).sum();
    CHECK(std::abs(integrate(lap, *g)) <= 1e-12 * std::max(1.0, scale));
  }
}

TEST_CASE("laplacian refinement order >= 1.8") {
  // smooth zero-flux-compatible test functions per kind
  const auto run = [](GridPtr g, const std::function<double(double, double)>& f,
                      const std::function<double(double, double)>& lap_exact) {
    Field ff = field_from(g, f);
    const Vector lap = laplacian_neumann(ff, *g).values;
    double err = 0.0;
    for (int j = 0; j < (g->is_one_dimensional() ? 1 : g->cells(1)); ++j) {
      for (int i = 0; i < g->cells(0); ++i) {
        const int idx = g->is_one_dimensional() ? i : g->index(i, j);
        const double y = g->is_one_dimensional() ? 0.0 : g->cell_center(1, j);
        err = std::max(err, std::abs(lap[idx] - lap_exact(g->cell_center(0, i), y)));
      }
    }
    return err;
  };

  SUBCASE("interval") {
    const auto f = [](double x, double) { return std::cos(kPi * x); };
    const auto lap = [](double x, double) { return -kPi * kPi * std::cos(kPi * x); };
    const double e1 = run(make_interval_grid(32, 1.0), f, lap);
    const double e2 = run(make_interval_grid(64, 1.0), f, lap);
    CHECK(std::log2(e1 / e2) >= 1.8);
  }
  SUBCASE("rect") {
    const auto f = [](double x, double y) { return std::cos(kPi * x) * std::cos(2.0 * kPi * y); };
    const auto lap = [](double x, double y) {
      return -(kPi * kPi + 4.0 * kPi * kPi) * std::cos(kPi * x) * std::cos(2.0 * kPi * y);
    };
    const double e1 = run(make_rect_grid(16, 16, 1.0, 1.0), f, lap);
    const double e2 = run(make_rect_grid(32, 32, 1.0, 1.0), f, lap);
    CHECK(std::log2(e1 / e2) >= 1.8);
  }
  SUBCASE("radial") {
    // f(r) = cos(pi r): lap = -pi^2 cos(pi r) - (N-1)/r pi sin(pi r)
    const int dim = 3;
    const auto f = [](double r, double) { return std::cos(kPi * r); };
    const auto lap = [dim](double r, double) {
      return -kPi * kPi * std::cos(kPi * r) - (dim - 1) / r * kPi * std::sin(kPi * r);
    };
    const double e1 = run(make_radial_grid(32, 1.0, dim), f, lap);
    const double e2 = run(make_radial_grid(64, 1.0, dim), f, lap);
    CHECK(std::log2(e1 / e2) >= 1.8);
  }
}

TEST_CASE("face gradients") {
  auto g = make_interval_grid(16, 1.0);
  CHECK(face_gradient(make_field(g, 4.0), *g).x.abs().maxCoeff() == 0.0);

  Field lin = field_from(g, [](double x, double) { return x; });
  const FaceField grad = face_gradient(lin, *g);
  CHECK(grad.x[0] == 0.0);
  CHECK(grad.x[16] == 0.0);
  for (int k = 1; k < 16; ++k) CHECK(grad.x[k] == doctest::Approx(1.0).epsilon(1e-13));

  // x^2: difference quotient of squares gives x_i + x_{i+1} exactly
  Field sq = field_from(g, [](double x, double) { return x * x; });
  const FaceField gsq = face_gradient(sq, *g);
  for (int k = 1; k < 16; ++k) {
    const double expect = g->cell_center(0, k - 1) + g->cell_center(0, k);
    CHECK(gsq.x[k] == doctest::Approx(expect).epsilon(1e-13));
  }
}

TEST_CASE("chemotactic divergence: trivial zero cases") {
  for (const auto& g : all_kinds()) {
    Field u = random_nonneg_field(g, 3u);
    Field vconst = make_field(g, 2.0);
    CHECK(chemotactic_divergence(u, vconst, 1.5, 0.1, *g).values.abs().maxCoeff() == 0.0);
    Field uzero = make_field(g, 0.0);
    Field v = random_nonneg_field(g, 4u);
    CHECK(chemotactic_divergence(uzero, v, 1.5, 0.1, *g).values.abs().maxCoeff() == 0.0);
  }
}

TEST_CASE("chemotactic divergence: hand-computed 8-cell ramp") {
  // u == 1, v a linear ramp, eps = 0, chi = 1 on [0,1] with 8 cells:
  // all interior faces carry flux 1, boundary faces 0, so only the two
  // boundary-adjacent cells see a net divergence of +-1/h = +-8.
  auto g = make_interval_grid(8, 1.0);
  Field u = make_field(g, 1.0);
  Field v = field_from(g, [](double x, double) { return x; });
  const Field div = chemotactic_divergence(u, v, 1.0, 0.0, *g);
  CHECK(div.values[0] == doctest::Approx(8.0).epsilon(1e-13));
  CHECK(div.values[7] == doctest::Approx(-8.0).epsilon(1e-13));
  for (int i = 1; i < 7; ++i) CHECK(div.values[i] == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(std::abs(integrate(div, *g)) <= 1e-14);
}

TEST_CASE("discrete divergence theorem on random data") {
  for (const auto& g : all_kinds()) {
    for (unsigned seed : {11u, 12u, 13u}) {
      Field u = random_nonneg_field(g, seed, 3.0);
      Field v = random_nonneg_field(g, seed + 100u, 2.0);
      const Field div = chemotactic_divergence(u, v, 2.5, 0.2, *g);
      const double flux_l1 = (g->quad_weights() * div.values.abs()).sum();
      CHECK(std::abs(integrate(div, *g)) <= 1e-12 * std::max(1.0, flux_l1));
    }
  }
}

TEST_CASE("upwind donor selection on monotone v") {
  auto g = make_interval_grid(12, 1.0);
  Field u = random_nonneg_field(g, 21u, 4.0);
  Field v = field_from(g, [](double x, double) { return x * (2.0 - x); });  // increasing on [0,1]
  const double chi = 1.7, eps = 0.3;
  const FaceField flux = chemotactic_face_flux(u, v, chi, eps, *g);
  const FaceField grad = face_gradient(v, *g);
  for (int k = 1; k < 12; ++k) {
    REQUIRE(grad.x[k] >= 0.0);
    const double expect = chi * flux_coefficient(u.values[k - 1], eps) * grad.x[k];
    CHECK(flux.x[k] == doctest::Approx(expect).epsilon(1e-14));
  }
}

TEST_CASE("grid/field mismatch and negative u are rejected") {
  auto g = make_interval_grid(8, 1.0);
  auto other = make_interval_grid(8, 1.0);
  Field f = make_field(g, 1.0);
  CHECK_THROWS_AS(laplacian_neumann(f, *other), std::invalid_argument);
  CHECK_THROWS_AS(integrate(f, *other), std::invalid_argument);

  Field bad = make_field(g, 1.0);
  bad.values[3] = -0.5;
  Field v = make_field(g, 1.0);
  CHECK_THROWS_AS(chemotactic_divergence(bad, v, 1.0, 0.0, *g), std::invalid_argument);
}

TEST_CASE("grad squared integral") {
  auto g = make_interval_grid(64, 1.0);
  CHECK(grad_squared_integral(make_field(g, 5.0), *g) == 0.0);
  // f = cos(pi x): int |f'|^2 = pi^2/2
  Field f = field_from(g, [](double x, double) { return std::cos(kPi * x); });
  CHECK(grad_squared_integral(f, *g) ==
        doctest::Approx(kPi * kPi / 2.0).epsilon(2e-3));
}
