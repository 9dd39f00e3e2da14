#include "liou/ensemble.hpp"

#include <doctest.h>

#include <cmath>

using namespace liou;

static InitialEnsembleSpec make_spec(int N, int R, double sigma,
                                     std::uint64_t seed) {
  InitialEnsembleSpec spec;
  spec.base_profile = Eigen::VectorXd::Zero(N);
  spec.perturbation = {Perturbation::Kind::gaussian, sigma};
  spec.count = R;
  spec.seed = seed;
  return spec;
}

TEST_CASE("degenerate perturbations rejected") {
  SpatialGrid grid{3, true};
  auto spec = make_spec(3, 10, 1e-300, 1);
  CHECK_THROWS_WITH_AS(sample_initial_conditions(spec, grid),
                       doctest::Contains("degenerate"), std::invalid_argument);
  spec.perturbation = {Perturbation::Kind::uniform, 0.0};
  CHECK_THROWS_AS(sample_initial_conditions(spec, grid), std::invalid_argument);
}

TEST_CASE("sampling is bit-exact reproducible") {
  SpatialGrid grid{5, true};
  InitialEnsembleSpec spec;
  spec.base_profile = Eigen::VectorXd::LinSpaced(5, -1.0, 1.0);
  spec.perturbation = {Perturbation::Kind::uniform, 0.5};
  spec.count = 200;
  spec.seed = 42;
  auto a = sample_initial_conditions(spec, grid);
  auto b = sample_initial_conditions(spec, grid);
  CHECK((a - b).cwiseAbs().maxCoeff() == 0.0);
  spec.seed = 43;
  auto c = sample_initial_conditions(spec, grid);
  CHECK((a - c).cwiseAbs().maxCoeff() > 0.0);
}

TEST_CASE("gaussian sample mean within the central-limit bound") {
  SpatialGrid grid{3, true};
  const int R = 100000;
  const double sigma = 0.1;
  auto spec = make_spec(3, R, sigma, 7);
  spec.base_profile << 0.5, -0.2, -0.3;
  auto ic = sample_initial_conditions(spec, grid);
  const double bound = 4.0 * sigma / std::sqrt(double(R));
  for (int j = 0; j < 3; ++j)
    CHECK(std::abs(ic.col(j).mean() - spec.base_profile[j]) <= bound);
}

TEST_CASE("run_ensemble: fixed point and determinism") {
  SpatialGrid grid{4, true};
  DynamicsSpec dyn{Scheme::consistent_central, 0.2};
  Eigen::MatrixXd init(2, 4);
  init.row(0) = Eigen::VectorXd::Constant(4, 0.8);
  init.row(1) = Eigen::VectorXd::Constant(4, 0.8);
  auto bundle = run_ensemble(init, dyn, grid, 0.05, 20);
  CHECK(bundle.slices() == 21);
  // uniform state is a fixed point
  CHECK((bundle.states[0].row(20) - init.row(0)).cwiseAbs().maxCoeff() <=
        1e-14);
  // identical rows give identical trajectories
  CHECK((bundle.states[0] - bundle.states[1]).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("run_ensemble validation and failure index") {
  SpatialGrid grid{3, true};
  DynamicsSpec dyn{Scheme::paper_matrix, 0.0};
  Eigen::MatrixXd init(1, 3);
  init.setZero();
  CHECK_THROWS_AS(run_ensemble(init, dyn, grid, 0.0, 5), std::invalid_argument);
  CHECK_THROWS_AS(run_ensemble(init, dyn, grid, 0.1, 0), std::invalid_argument);

  Eigen::MatrixXd blowup(2, 3);
  blowup.row(0).setZero();
  blowup.row(1) = Eigen::VectorXd::Constant(3, 1e154);
  CHECK_THROWS_WITH_AS(run_ensemble(blowup, dyn, grid, 1.0, 2),
                       doctest::Contains("realization 1"), std::runtime_error);
}

TEST_CASE("empirical_pdf: delta trajectories") {
  SpatialGrid grid{2, true};
  DynamicsSpec dyn{Scheme::consistent_central, 0.0};
  Eigen::MatrixXd init = Eigen::MatrixXd::Constant(3, 2, 0.55);
  auto bundle = run_ensemble(init, dyn, grid, 0.1, 10);

  auto phase = build_phase_grid(2, 10, 0.0, 1.0);
  const int axes[2] = {0, 1};
  auto snap = empirical_pdf(bundle, phase, axes, {HistogramMode::Kind::snapshot, 5});
  CHECK(total_mass(snap.field) == doctest::Approx(1.0));
  CHECK(snap.field.values.maxCoeff() == doctest::Approx(1.0));
  CHECK(snap.out_of_range_fraction == 0.0);

  auto occ = empirical_pdf(bundle, phase, axes,
                           {HistogramMode::Kind::time_occupation, 0});
  CHECK((occ.field.values - snap.field.values).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("snapshot t=0 variance matches sigma^2 for a big ensemble") {
  SpatialGrid grid{3, true};
  const double sigma = 0.25;
  auto spec = make_spec(3, 100000, sigma, 11);
  auto ic = sample_initial_conditions(spec, grid);
  auto bundle = run_ensemble(ic, {Scheme::consistent_central, 0.1}, grid, 0.01, 1);

  auto phase = build_phase_grid(1, 128, -2.0, 2.0);
  const int axes[1] = {1};
  auto pdf = empirical_pdf(bundle, phase, axes, {HistogramMode::Kind::snapshot, 0});
  const double var =
      average(pdf.field, {ObservableSpec::Kind::axis_moment, 0, 2, true});
  CHECK(var == doctest::Approx(sigma * sigma).epsilon(0.05));
}

TEST_CASE("histogram mass plus out-of-range fraction is one") {
  SpatialGrid grid{2, true};
  InitialEnsembleSpec spec;
  spec.base_profile = Eigen::VectorXd::Zero(2);
  spec.perturbation = {Perturbation::Kind::gaussian, 1.0};
  spec.count = 20000;
  spec.seed = 5;
  auto ic = sample_initial_conditions(spec, grid);
  auto bundle = run_ensemble(ic, {Scheme::consistent_central, 0.0}, grid, 0.01, 1);

  // deliberately narrow range so a fraction lands outside
  auto phase = build_phase_grid(2, 16, -1.0, 1.0);
  const int axes[2] = {0, 1};
  auto pdf = empirical_pdf(bundle, phase, axes, {HistogramMode::Kind::snapshot, 0});
  CHECK(pdf.out_of_range_fraction > 0.0);
  CHECK(total_mass(pdf.field) + pdf.out_of_range_fraction ==
        doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("factorized initial perturbations: joint ~ product of marginals") {
  SpatialGrid grid{2, true};
  const int R = 200000;
  InitialEnsembleSpec spec;
  spec.base_profile = Eigen::VectorXd::Zero(2);
  spec.perturbation = {Perturbation::Kind::uniform, 0.9};
  spec.count = R;
  spec.seed = 99;
  auto ic = sample_initial_conditions(spec, grid);
  auto bundle = run_ensemble(ic, {Scheme::consistent_central, 0.0}, grid, 0.01, 1);

  auto phase = build_phase_grid(2, 8, -1.0, 1.0);
  const int axes[2] = {0, 1};
  auto joint =
      empirical_pdf(bundle, phase, axes, {HistogramMode::Kind::snapshot, 0});
  const int k0[1] = {0}, k1[1] = {1};
  auto m0 = marginalize(joint.field, k0);
  auto m1 = marginalize(joint.field, k1);
  // max cell deviation bound ~ a few binomial standard deviations; cell
  // probability ~ (1/8)^2 under the product law
  const double cell_p = 1.0 / 64.0;
  const double bound = 5.0 * std::sqrt(cell_p * (1 - cell_p) / R);
  for (int i = 0; i < 8; ++i)
    for (int j = 0; j < 8; ++j)
      CHECK(std::abs(joint.field.values[i * 8 + j] -
                     m0.values[i] * m1.values[j]) <= bound);
}
