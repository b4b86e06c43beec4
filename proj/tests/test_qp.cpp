#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstring>

#include "bipnav/qp.hpp"
#include "bipnav/rng.hpp"
#include "oracles.hpp"

using namespace bipnav;
using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {

qp::QpProblem scalar_bound_problem() {
  // min z^2  s.t. z >= 1
  qp::QpProblem p;
  p.Q = MatrixXd::Constant(1, 1, 2.0);
  p.c = VectorXd::Zero(1);
  p.A_in = MatrixXd::Constant(1, 1, -1.0);
  p.b_in = VectorXd::Constant(1, -1.0);
  p.A_eq.resize(0, 1);
  p.b_eq.resize(0);
  return p;
}

}  // namespace

TEST_CASE("analytic KKT: min z^2 s.t. z >= 1") {
  const auto p = scalar_bound_problem();
  const auto s = qp::solve(p);
  REQUIRE(s.status == qp::QpStatus::kOptimal);
  CHECK(s.z(0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(s.lambda(0) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(qp::check_kkt(p, s) <= 1e-12);
}

TEST_CASE("unconstrained minimum is -Q^{-1} c") {
  Rng rng(11);
  qp::QpProblem p;
  const int n = 5;
  MatrixXd M(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) M(i, j) = rng.normal();
  p.Q = M.transpose() * M + MatrixXd::Identity(n, n);
  p.c.resize(n);
  for (int i = 0; i < n; ++i) p.c(i) = rng.normal();
  p.A_in.resize(0, n);
  p.b_in.resize(0);
  p.A_eq.resize(0, n);
  p.b_eq.resize(0);
  const auto s = qp::solve(p);
  REQUIRE(s.status == qp::QpStatus::kOptimal);
  const VectorXd expect = p.Q.llt().solve(-p.c);
  CHECK((s.z - expect).cwiseAbs().maxCoeff() <= 1e-10);
}

TEST_CASE("random strictly convex QPs match the first-order dual oracle") {
  Rng rng(2024);
  int solved = 0;
  for (int trial = 0; trial < 60; ++trial) {
    const auto p = oracle::random_qp(rng, 12, 20);
    const auto s = qp::solve(p);
    REQUIRE(s.status == qp::QpStatus::kOptimal);  // generator guarantees feasibility
    CHECK(s.kkt_residual <= 1e-6);
    const auto ref = oracle::qp_dual_gradient_objective(p, 200000, 1e-10);
    if (!ref) continue;  // oracle may stall on ill-conditioned draws
    CHECK(std::abs(s.objective - *ref) <= 1e-6 * (1.0 + std::abs(*ref)));
    ++solved;
  }
  CHECK(solved >= 50);
}

TEST_CASE("active-set enumeration equality for small m") {
  Rng rng(77);
  for (int trial = 0; trial < 40; ++trial) {
    const auto p = oracle::random_qp(rng, 8, 10, false);
    const auto s = qp::solve(p);
    REQUIRE(s.status == qp::QpStatus::kOptimal);
    const auto ref = oracle::qp_enumeration_objective(p);
    REQUIRE(ref.has_value());
    CHECK(std::abs(s.objective - *ref) <= 1e-7 * (1.0 + std::abs(*ref)));
  }
}

TEST_CASE("equality constraints are honored") {
  Rng rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    const auto p = oracle::random_qp(rng, 10, 8, true);
    const auto s = qp::solve(p);
    REQUIRE(s.status == qp::QpStatus::kOptimal);
    if (p.p() > 0) CHECK((p.A_eq * s.z - p.b_eq).cwiseAbs().maxCoeff() <= 1e-8);
    CHECK(s.kkt_residual <= 1e-6);
  }
}

TEST_CASE("optimality witness: no feasible point beats the reported objective") {
  Rng rng(99);
  for (int trial = 0; trial < 20; ++trial) {
    const auto p = oracle::random_qp(rng, 10, 16, false);
    const auto s = qp::solve(p);
    REQUIRE(s.status == qp::QpStatus::kOptimal);
    for (int k = 0; k < 200; ++k) {
      VectorXd z(p.n());
      for (int i = 0; i < p.n(); ++i) z(i) = 3.0 * rng.normal();
      if (p.m() > 0 && (p.A_in * z - p.b_in).maxCoeff() > 0) continue;
      const double obj = 0.5 * z.dot(p.Q * z) + p.c.dot(z);
      CHECK(s.objective <= obj + 1e-9 * (1.0 + std::abs(obj)));
    }
  }
}

TEST_CASE("infeasible problem is certified") {
  // z <= 0 and z >= 1 cannot both hold
  qp::QpProblem p;
  p.Q = MatrixXd::Constant(1, 1, 2.0);
  p.c = VectorXd::Zero(1);
  p.A_in.resize(2, 1);
  p.A_in << 1.0, -1.0;
  p.b_in.resize(2);
  p.b_in << 0.0, -1.0;
  p.A_eq.resize(0, 1);
  p.b_eq.resize(0);
  const auto s = qp::solve(p);
  CHECK(s.status == qp::QpStatus::kInfeasible);
}

TEST_CASE("zero-row constraints: trivially infeasible vs vacuous") {
  qp::QpProblem p;
  p.Q = MatrixXd::Identity(2, 2);
  p.c = VectorXd::Zero(2);
  p.A_in = MatrixXd::Zero(1, 2);
  p.b_in = VectorXd::Constant(1, -1.0);  // 0 <= -1
  p.A_eq.resize(0, 2);
  p.b_eq.resize(0);
  CHECK(qp::solve(p).status == qp::QpStatus::kInfeasible);
  p.b_in(0) = 1.0;  // 0 <= 1, vacuous
  CHECK(qp::solve(p).status == qp::QpStatus::kOptimal);
}

TEST_CASE("PSD-singular Q gets regularized") {
  qp::QpProblem p;
  p.Q = MatrixXd::Zero(2, 2);
  p.Q(0, 0) = 1.0;
  p.c.resize(2);
  p.c << 1.0, 0.0;
  p.A_in.resize(2, 2);
  p.A_in << 0.0, 1.0, 0.0, -1.0;
  p.b_in.resize(2);
  p.b_in << 1.0, 1.0;  // |z2| <= 1
  p.A_eq.resize(0, 2);
  p.b_eq.resize(0);
  const auto s = qp::solve(p);
  REQUIRE(s.status == qp::QpStatus::kOptimal);
  CHECK(s.regularized);
  CHECK(s.z(0) == doctest::Approx(-1.0).epsilon(1e-6));
  CHECK(std::abs(s.z(1)) <= 1e-6);  // min-norm tie-break via regularizer
}

TEST_CASE("determinism: identical problem bits give identical solution bits") {
  Rng rng(4242);
  const auto p = oracle::random_qp(rng, 14, 24);
  const auto s1 = qp::solve(p);
  const auto s2 = qp::solve(p);
  REQUIRE(s1.z.size() == s2.z.size());
  CHECK(std::memcmp(s1.z.data(), s2.z.data(), sizeof(double) * s1.z.size()) == 0);
  CHECK(std::memcmp(s1.lambda.data(), s2.lambda.data(), sizeof(double) * s1.lambda.size()) == 0);
  CHECK(s1.objective == s2.objective);
}

TEST_CASE("check_kkt flags perturbed and infeasible points") {
  const auto p = scalar_bound_problem();
  auto s = qp::solve(p);
  REQUIRE(s.status == qp::QpStatus::kOptimal);
  CHECK(qp::check_kkt(p, s) <= 1e-12);

  auto perturbed = s;
  perturbed.z(0) += 1e-3;
  CHECK(qp::check_kkt(p, perturbed) >= 1e-4);

  auto infeasible = s;
  infeasible.z(0) = 0.9;  // violates z >= 1
  CHECK(qp::check_kkt(p, infeasible) >= 0.1 - 1e-12);
}

TEST_CASE("max-iterations status is reported when the budget is too small") {
  Rng rng(8);
  const auto p = oracle::random_qp(rng, 12, 20, false);
  const auto s = qp::solve(p, 2);
  CHECK(s.status != qp::QpStatus::kOptimal);
}
