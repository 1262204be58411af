#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>

#include "hdts/rng.hpp"
#include "hdts/spectral.hpp"
#include "oracles.hpp"

using hdts::Error;
using hdts::ErrorKind;
using hdts::Rng;

namespace {

Eigen::MatrixXd random_symmetric(Eigen::Index n, Rng& rng) {
  const Eigen::MatrixXd m = oracle::random_matrix(n, n, rng);
  return 0.5 * (m + m.transpose());
}

}  // namespace

TEST_CASE("sym_eigen on diagonal and identity matrices") {
  Eigen::MatrixXd d = Eigen::Vector2d(3.0, 1.0).asDiagonal();
  const auto eig = hdts::sym_eigen(d);
  CHECK(eig.eigenvalues(0) == doctest::Approx(3.0));
  CHECK(eig.eigenvalues(1) == doctest::Approx(1.0));
  CHECK((eig.eigenvectors - Eigen::MatrixXd::Identity(2, 2)).cwiseAbs().maxCoeff() <
        1e-14);

  const auto id = hdts::sym_eigen(Eigen::MatrixXd::Identity(5, 5));
  CHECK((id.eigenvalues.array() == 1.0).all());
}

TEST_CASE("sym_eigen reconstruction, orthonormality and sign convention") {
  Rng rng(101);
  const Eigen::MatrixXd a = random_symmetric(8, rng);
  const auto eig = hdts::sym_eigen(a);

  const Eigen::MatrixXd vtv = eig.eigenvectors.transpose() * eig.eigenvectors;
  CHECK((vtv - Eigen::MatrixXd::Identity(8, 8)).cwiseAbs().maxCoeff() < 1e-10);

  const Eigen::MatrixXd recon = eig.eigenvectors *
                                eig.eigenvalues.asDiagonal() *
                                eig.eigenvectors.transpose();
  CHECK((recon - a).cwiseAbs().maxCoeff() < 1e-9);

  const double norm = a.cwiseAbs().maxCoeff() + 1.0;
  for (int j = 0; j < 8; ++j) {
    const Eigen::VectorXd residual =
        a * eig.eigenvectors.col(j) - eig.eigenvalues(j) * eig.eigenvectors.col(j);
    CHECK(residual.norm() <= 1e-8 * norm);
    Eigen::Index imax;
    eig.eigenvectors.col(j).cwiseAbs().maxCoeff(&imax);
    CHECK(eig.eigenvectors(imax, j) >= 0.0);
  }
}

TEST_CASE("sym_eigen determinism") {
  Rng rng(103);
  const Eigen::MatrixXd a = random_symmetric(6, rng);
  const auto first = hdts::sym_eigen(a);
  const auto second = hdts::sym_eigen(a);
  CHECK((first.eigenvectors - second.eigenvectors).cwiseAbs().maxCoeff() == 0.0);
  CHECK((first.eigenvalues - second.eigenvalues).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("sym_eigen rejects bad input") {
  CHECK_THROWS_AS(hdts::sym_eigen(Eigen::MatrixXd::Zero(2, 3)), Error);
  Eigen::MatrixXd skew(2, 2);
  skew << 0.0, 1.0, -1.0, 0.0;
  try {
    hdts::sym_eigen(skew);
    FAIL("expected NotSymmetric");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NotSymmetric);
  }
}

TEST_CASE("ratio_order direct evaluations") {
  Eigen::VectorXd lam(5);
  lam << 10.0, 9.0, 8.0, 0.1, 0.05;
  CHECK(hdts::ratio_order(lam, 0.75) == 3);

  Eigen::VectorXd flat = Eigen::VectorXd::Constant(4, 5.0);
  CHECK(hdts::ratio_order(flat, 0.75) == 1);

  Eigen::VectorXd zeros = Eigen::VectorXd::Zero(4);
  CHECK_THROWS_AS(hdts::ratio_order(zeros, 0.75), Error);
}

TEST_CASE("ratio_order handles exact zeros beyond the signal") {
  Eigen::VectorXd lam(6);
  lam << 4.0, 2.0, 0.0, 0.0, 0.0, 0.0;
  CHECK(hdts::ratio_order(lam, 0.75) == 2);
}

TEST_CASE("ratio_order is scale invariant") {
  Rng rng(107);
  for (int rep = 0; rep < 500; ++rep) {
    const int len = 3 + int(rng.uniform() * 10);
    Eigen::VectorXd lam(len);
    for (int i = 0; i < len; ++i) lam(i) = std::exp(rng.uniform(-4.0, 4.0));
    std::sort(lam.data(), lam.data() + len, std::greater<>());
    const double c = std::exp(rng.uniform(-6.0, 6.0));
    CHECK(hdts::ratio_order(lam, 0.75) ==
          hdts::ratio_order((c * lam).eval(), 0.75));
  }
}

TEST_CASE("pseudo inverse basics and Penrose identities") {
  const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(3, 3);
  CHECK((hdts::pseudo_inverse(id) - id).cwiseAbs().maxCoeff() < 1e-14);

  Eigen::MatrixXd d = Eigen::Vector2d(2.0, 0.0).asDiagonal();
  const Eigen::MatrixXd dinv = hdts::pseudo_inverse(d);
  CHECK(dinv(0, 0) == doctest::Approx(0.5));
  CHECK(dinv(1, 1) == doctest::Approx(0.0));

  Rng rng(109);
  const Eigen::MatrixXd m = oracle::random_matrix(6, 3, rng);
  const Eigen::MatrixXd mp = hdts::pseudo_inverse(m);
  CHECK((mp * m - Eigen::MatrixXd::Identity(3, 3)).cwiseAbs().maxCoeff() < 1e-9);

  for (int rep = 0; rep < 200; ++rep) {
    const int rows = 2 + int(rng.uniform() * 9);
    const int cols = 2 + int(rng.uniform() * 9);
    const Eigen::MatrixXd a = oracle::random_matrix(rows, cols, rng);
    const Eigen::MatrixXd ap = hdts::pseudo_inverse(a);
    CHECK((a * ap * a - a).cwiseAbs().maxCoeff() < 1e-8);
    CHECK((ap * a * ap - ap).cwiseAbs().maxCoeff() < 1e-8);
    CHECK((a * ap - (a * ap).transpose()).cwiseAbs().maxCoeff() < 1e-8);
    CHECK((ap * a - (ap * a).transpose()).cwiseAbs().maxCoeff() < 1e-8);
  }
}

TEST_CASE("pseudo inverse with forced rank") {
  Eigen::MatrixXd d = Eigen::Vector3d(4.0, 2.0, 1.0).asDiagonal();
  const Eigen::MatrixXd trunc = hdts::pseudo_inverse(d, 2);
  CHECK(trunc(0, 0) == doctest::Approx(0.25));
  CHECK(trunc(1, 1) == doctest::Approx(0.5));
  CHECK(trunc(2, 2) == doctest::Approx(0.0));
}

TEST_CASE("inverse square root of PSD matrices") {
  const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(4, 4);
  CHECK((hdts::inv_sqrt_psd(id, 0.0) - id).cwiseAbs().maxCoeff() < 1e-12);

  Eigen::MatrixXd d = Eigen::Vector2d(4.0, 9.0).asDiagonal();
  const Eigen::MatrixXd r = hdts::inv_sqrt_psd(d, 0.0);
  CHECK(r(0, 0) == doctest::Approx(0.5));
  CHECK(r(1, 1) == doctest::Approx(1.0 / 3.0));

  Rng rng(113);
  const Eigen::MatrixXd half = oracle::random_matrix(6, 6, rng);
  const Eigen::MatrixXd spd =
      half * half.transpose() + Eigen::MatrixXd::Identity(6, 6);
  const Eigen::MatrixXd inv_sqrt = hdts::inv_sqrt_psd(spd, 0.0);
  const Eigen::MatrixXd sandwich = inv_sqrt * spd * inv_sqrt;
  CHECK((sandwich - Eigen::MatrixXd::Identity(6, 6)).cwiseAbs().maxCoeff() < 1e-8);

  Eigen::MatrixXd singular = Eigen::Vector2d(1.0, 0.0).asDiagonal();
  CHECK_THROWS_AS(hdts::inv_sqrt_psd(singular, 0.0), Error);
  CHECK_NOTHROW(hdts::inv_sqrt_psd(singular, 1e-6));
  CHECK_NOTHROW(hdts::inv_sqrt_psd(singular, std::nullopt));
}

TEST_CASE("generalized eigen trivial pencils") {
  const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(2, 2);
  const auto both_id = hdts::generalized_eigen(id, id, 2);
  CHECK(both_id.eigenvalues(0).real() == doctest::Approx(1.0));
  CHECK(both_id.eigenvalues(1).real() == doctest::Approx(1.0));
  CHECK((both_id.basis.transpose() * both_id.basis - id).cwiseAbs().maxCoeff() <
        1e-10);

  Eigen::MatrixXd a = Eigen::Vector2d(3.0, 1.0).asDiagonal();
  const auto standard = hdts::generalized_eigen(a, id, 2);
  CHECK(standard.eigenvalues(0).real() == doctest::Approx(3.0));
  CHECK(standard.eigenvalues(1).real() == doctest::Approx(1.0));
  CHECK((standard.basis - id).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("generalized eigen residuals on full-rank pencils") {
  Rng rng(127);
  for (int rep = 0; rep < 50; ++rep) {
    const Eigen::MatrixXd a = oracle::random_matrix(5, 5, rng);
    const Eigen::MatrixXd half = oracle::random_matrix(5, 5, rng);
    const Eigen::MatrixXd b =
        half * half.transpose() + 0.5 * Eigen::MatrixXd::Identity(5, 5);
    const auto pencil = hdts::generalized_eigen(a, b, 5);
    const double tol = 1e-7 * (a.norm() + b.norm());
    const Eigen::MatrixXcd ac = a.cast<std::complex<double>>();
    const Eigen::MatrixXcd bc = b.cast<std::complex<double>>();
    for (int j = 0; j < 5; ++j) {
      const Eigen::VectorXcd v = pencil.eigenvectors.col(j);
      const Eigen::VectorXcd residual = ac * v - pencil.eigenvalues(j) * (bc * v);
      CHECK(residual.norm() <= tol);
    }
  }
}

TEST_CASE("generalized eigen rejects rank-deficient B") {
  Eigen::MatrixXd b = Eigen::Vector3d(1.0, 1.0, 0.0).asDiagonal();
  Eigen::MatrixXd a = Eigen::MatrixXd::Identity(3, 3);
  try {
    hdts::generalized_eigen(a, b, 3);
    FAIL("expected RankDeficientPencil");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::RankDeficientPencil);
  }
  CHECK_NOTHROW(hdts::generalized_eigen(a, b, 2));
}

TEST_CASE("generalized eigen real basis spans the complex pair") {
  // Rotation-like pencil with a guaranteed complex pair.
  Eigen::MatrixXd a(2, 2);
  a << 1.0, -2.0, 2.0, 1.0;
  const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(2, 2);
  const auto pencil = hdts::generalized_eigen(a, id, 2);
  CHECK(std::abs(pencil.eigenvalues(0).imag()) > 0.5);
  CHECK(pencil.eigenvalues(0).imag() > 0.0);  // +Im first
  const Eigen::MatrixXd gram = pencil.basis.transpose() * pencil.basis;
  CHECK((gram - id).cwiseAbs().maxCoeff() < 1e-10);
}
