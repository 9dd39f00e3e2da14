#include "liou/burgers.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace liou;

TEST_CASE("burgers matrix rows") {
  auto b = burgers_coeffs_paper(0.0, 1.0);
  CHECK(b.b_minus == doctest::Approx(1.0));
  CHECK(b.b_zero == doctest::Approx(-2.0));
  CHECK(b.b_plus == doctest::Approx(1.0));

  b = burgers_coeffs_paper(4.0, 0.0);
  CHECK(b.b_minus == doctest::Approx(-1.0));
  CHECK(b.b_zero == doctest::Approx(-1.0));
  CHECK(b.b_plus == doctest::Approx(1.0));

  b = burgers_coeffs_paper(2.0, 0.5);
  CHECK(b.b_minus == doctest::Approx(0.0));
  CHECK(b.b_zero == doctest::Approx(-1.5));
  CHECK(b.b_plus == doctest::Approx(1.0));
}

TEST_CASE("rhs on uniform states: the two schemes split") {
  SpatialGrid grid{8, true};
  const double c = 3.0;
  Eigen::VectorXd u = Eigen::VectorXd::Constant(8, c);

  auto central = rhs(u, {Scheme::consistent_central, 0.7}, grid);
  CHECK(central.cwiseAbs().maxCoeff() == doctest::Approx(0.0));

  auto paper = rhs(u, {Scheme::paper_matrix, 0.7}, grid);
  for (int j = 0; j < 8; ++j)
    CHECK(paper[j] == doctest::Approx(-c * c / 4.0));
}

TEST_CASE("rhs spike state, direct substitution") {
  SpatialGrid grid{3, true};
  Eigen::VectorXd u(3);
  u << 0.0, 1.0, 0.0;
  auto f = rhs(u, {Scheme::consistent_central, 0.0}, grid);
  CHECK(f[0] == doctest::Approx(0.0));
  CHECK(f[1] == doctest::Approx(0.0));  // u_{j+1} - u_{j-1} = 0 on the 3-ring
  CHECK(f[2] == doctest::Approx(0.0));
}

TEST_CASE("rhs validation") {
  SpatialGrid grid{4, true};
  Eigen::VectorXd u(3);
  CHECK_THROWS_AS(rhs(u, {Scheme::consistent_central, 0.1}, grid),
                  std::invalid_argument);
  Eigen::VectorXd ok = Eigen::VectorXd::Zero(4);
  CHECK_THROWS_AS(rhs(ok, {Scheme::consistent_central, -0.1}, grid),
                  std::invalid_argument);
}

TEST_CASE("non-periodic ends use zero-gradient ghosts") {
  SpatialGrid grid{4, false};
  Eigen::VectorXd u(4);
  u << 1.0, 1.0, 1.0, 2.0;
  auto f = rhs(u, {Scheme::consistent_central, 0.0}, grid);
  // left end: ghost equals u_0, so the central difference sees (1,1,1)
  CHECK(f[0] == doctest::Approx(0.0));
  // right end: ghost equals u_3 -> -2*(2-1)/2
  CHECK(f[3] == doctest::Approx(-1.0));
}

TEST_CASE("rk4 fixed point and failure propagation") {
  SpatialGrid grid{6, true};
  DynamicsSpec spec{Scheme::consistent_central, 0.3};
  Eigen::VectorXd u = Eigen::VectorXd::Constant(6, 1.25);
  auto next = step_rk4(u, spec, grid, 0.1);
  CHECK((next - u).cwiseAbs().maxCoeff() == doctest::Approx(0.0));

  Eigen::VectorXd bad = Eigen::VectorXd::Constant(6, 1e154);
  CHECK_THROWS_WITH_AS(step_rk4(bad, {Scheme::paper_matrix, 0.0}, grid, 1.0),
                       doctest::Contains("site 0"), std::runtime_error);
}

TEST_CASE("diffusion conserves the site sum under periodic BC") {
  SpatialGrid grid{16, true};
  DynamicsSpec spec{Scheme::consistent_central, 1.0};
  Eigen::VectorXd u = Eigen::VectorXd::Zero(16);
  u[7] = 1e-3;
  const double sum0 = u.sum();
  for (int s = 0; s < 200; ++s) u = step_rk4(u, spec, grid, 0.05);
  CHECK(std::abs(u.sum() - sum0) <= 1e-12);
}

TEST_CASE("consistent_central conserves sum(u) over 1000 rk4 steps") {
  SpatialGrid grid{32, true};
  DynamicsSpec spec{Scheme::consistent_central, 0.05};
  Eigen::VectorXd u(32);
  for (int j = 0; j < 32; ++j)
    u[j] = std::sin(2.0 * std::numbers::pi * j / 32.0);
  const double sum0 = u.sum();
  for (int s = 0; s < 1000; ++s) u = step_rk4(u, spec, grid, 0.01);
  CHECK(std::abs(u.sum() - sum0) <= 1e-12);
}

TEST_CASE("schemes agree for u = 0, nu > 0") {
  SpatialGrid grid{10, true};
  Eigen::VectorXd u = Eigen::VectorXd::Zero(10);
  u[4] = 0.5;  // nonzero somewhere, but check the u_j = 0 sites
  auto a = rhs(u, {Scheme::paper_matrix, 0.4}, grid);
  auto b = rhs(u, {Scheme::consistent_central, 0.4}, grid);
  for (int j = 0; j < 10; ++j)
    if (u[j] == 0.0) CHECK(a[j] == doctest::Approx(b[j]));
}

TEST_CASE("rk4 self-convergence against dt/10 reference") {
  const int N = 64;
  SpatialGrid grid{N, true};
  DynamicsSpec spec{Scheme::consistent_central, 0.05};
  Eigen::VectorXd u0(N);
  for (int j = 0; j < N; ++j)
    u0[j] = std::sin(2.0 * std::numbers::pi * j / N);

  const double T = 0.5;
  const double dt = 0.01;
  Eigen::VectorXd coarse = u0;
  for (int s = 0; s < int(T / dt + 0.5); ++s)
    coarse = step_rk4(coarse, spec, grid, dt);
  Eigen::VectorXd fine = u0;
  for (int s = 0; s < int(T / (dt / 10) + 0.5); ++s)
    fine = step_rk4(fine, spec, grid, dt / 10);

  CHECK((coarse - fine).cwiseAbs().maxCoeff() <= 1e-6);
}

TEST_CASE("central scheme is second order in dx against the continuum RHS") {
  // smooth profile u(x) = sin(2 pi x) on [0,1); exact RHS = -u u_x + nu u_xx
  const double nu = 0.2;
  auto err_at = [&](int n) {
    const double dx = 1.0 / n;
    Eigen::VectorXd u(n), exact(n);
    for (int j = 0; j < n; ++j) {
      const double x = j * dx;
      const double s = std::sin(2.0 * std::numbers::pi * x);
      const double sx = 2.0 * std::numbers::pi * std::cos(2.0 * std::numbers::pi * x);
      const double sxx = -4.0 * std::numbers::pi * std::numbers::pi * s;
      u[j] = s;
      exact[j] = -s * sx + nu * sxx;
    }
    return (rhs_central_dx(u, nu, dx) - exact).cwiseAbs().maxCoeff();
  };
  const double e1 = err_at(32);
  const double e2 = err_at(64);
  const double rate = std::log2(e1 / e2);
  CHECK(rate > 1.8);
  CHECK(rate < 2.2);
}
