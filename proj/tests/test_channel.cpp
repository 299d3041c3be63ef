// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 the cfran authors

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "cfran/channel.hpp"

using namespace cfran;

namespace {
const NetworkArea kArea{200.0, 200.0, true};
}

TEST_CASE("subspace index selection") {
  // RU at the origin, UE straight along +x: center angle 0.
  const Point ru{0.0, 0.0};
  const Point ue{10.0, 0.0};

  SUBCASE("narrow spread keeps only the aligned column") {
    const auto basis = build_subspace(ru, ue, 10, std::numbers::pi / 8.0, kArea);
    CHECK(basis.indices == std::vector<int>{0});
  }

  SUBCASE("wider spread picks the neighbors") {
    const auto basis = build_subspace(ru, ue, 10, std::numbers::pi / 2.0, kArea);
    CHECK(basis.indices == std::vector<int>{0, 1, 9});
  }

  SUBCASE("empty set falls back to the nearest index") {
    // Center angle between DFT angles 0 and 2*pi/10, slightly closer to m=1.
    const double angle = 0.55 * 2.0 * std::numbers::pi / 10.0;
    const Point far_ue{10.0 * std::cos(angle), 10.0 * std::sin(angle)};
    const auto basis = build_subspace(ru, far_ue, 10, 0.05, kArea);
    REQUIRE(basis.indices.size() == 1);
    CHECK(basis.indices[0] == 1);
  }

  SUBCASE("columns are orthonormal") {
    const auto basis = build_subspace(ru, ue, 16, 1.9, kArea);
    REQUIRE(basis.dim() >= 2);
    const Eigen::MatrixXcd gram = basis.columns.adjoint() * basis.columns;
    const Eigen::MatrixXcd eye =
        Eigen::MatrixXcd::Identity(basis.dim(), basis.dim());
    CHECK((gram - eye).cwiseAbs().maxCoeff() < 1e-10);
  }

  SUBCASE("angle uses the shortest wrap displacement") {
    // UE just across the wrap boundary sits to the -x side of the RU.
    const auto basis = build_subspace({1.0, 0.0}, {199.0, 0.0}, 8,
                                      std::numbers::pi / 4.0, kArea);
    CHECK(basis.center_angle == doctest::Approx(std::numbers::pi));
  }
}

TEST_CASE("channel draws") {
  const Point ru{0.0, 0.0};
  const Point ue{15.0, 7.0};
  const int antennas = 10;
  const double beta = 0.37;

  SUBCASE("projection residual vanishes by construction") {
    const auto basis = build_subspace(ru, ue, antennas, std::numbers::pi / 2.0, kArea);
    Rng rng(11);
    const Eigen::VectorXcd h = draw_channel(beta, basis, antennas, rng);
    const Eigen::VectorXcd residual =
        h - basis.columns * (basis.columns.adjoint() * h);
    CHECK(residual.norm() < 1e-10);
  }

  SUBCASE("second moment matches beta * M") {
    const auto basis = build_subspace(ru, ue, antennas, std::numbers::pi / 2.0, kArea);
    Rng rng(12);
    const int draws = 100000;
    double acc = 0.0;
    for (int i = 0; i < draws; ++i) {
      acc += draw_channel(beta, basis, antennas, rng).squaredNorm();
    }
    CHECK(acc / draws == doctest::Approx(beta * antennas).epsilon(0.02));
  }

  SUBCASE("sample covariance converges entrywise") {
    const auto basis = build_subspace(ru, ue, 6, 2.5, kArea);
    const Eigen::MatrixXcd sigma = (beta * 6.0 / basis.dim()) *
                                   (basis.columns * basis.columns.adjoint());
    Rng rng(13);
    const int draws = 100000;
    Eigen::MatrixXcd mean_outer = Eigen::MatrixXcd::Zero(6, 6);
    Eigen::MatrixXd mean_sq = Eigen::MatrixXd::Zero(6, 6);
    for (int i = 0; i < draws; ++i) {
      const Eigen::VectorXcd h = draw_channel(beta, basis, 6, rng);
      const Eigen::MatrixXcd outer = h * h.adjoint();
      mean_outer += outer;
      mean_sq += outer.cwiseAbs2();
    }
    mean_outer /= draws;
    mean_sq /= draws;
    // Entrywise: |sample - truth| within 3 empirical standard errors.
    for (int a = 0; a < 6; ++a) {
      for (int b = 0; b < 6; ++b) {
        const double var =
            mean_sq(a, b) - std::norm(mean_outer(a, b));
        const double se = std::sqrt(std::max(var, 1e-30) / draws);
        const double err = std::abs(mean_outer(a, b) - sigma(a, b));
        CHECK(err <= 3.0 * std::max(se, 1e-12) + 1e-9);
      }
    }
    // tr(Sigma)/M equals beta exactly for the constructed covariance.
    CHECK(sigma.trace().real() / 6.0 == doctest::Approx(beta).epsilon(1e-12));
  }

  SUBCASE("full support gives covariance beta * I") {
    const auto basis = build_subspace(ru, ue, 4, 6.2, kArea);
    REQUIRE(basis.dim() == 4);
    Rng rng(14);
    const int draws = 60000;
    Eigen::MatrixXcd mean_outer = Eigen::MatrixXcd::Zero(4, 4);
    for (int i = 0; i < draws; ++i) {
      const Eigen::VectorXcd h = draw_channel(beta, basis, 4, rng);
      mean_outer += h * h.adjoint();
    }
    mean_outer /= draws;
    CHECK((mean_outer - beta * Eigen::MatrixXcd::Identity(4, 4))
              .cwiseAbs()
              .maxCoeff() < 0.03 * beta * 4);
  }
}

TEST_CASE("network-wide draws are order-independent and reproducible") {
  NetworkLayout layout;
  layout.area = kArea;
  layout.antennas_per_ru = 4;
  layout.ru = place_rus_grid(4, 2, 2, kArea);
  layout.ue = place_ues_uniform(6, kArea, 5);
  const auto bases = build_all_subspaces(layout, std::numbers::pi / 8.0);
  const Eigen::MatrixXd beta = lsfc_matrix(layout, {});

  const auto real_a = draw_all_channels(beta, bases, 4, 99);
  const auto real_b = draw_all_channels(beta, bases, 4, 99);
  const auto real_c = draw_all_channels(beta, bases, 4, 100);
  CHECK((real_a.h - real_b.h).cwiseAbs().maxCoeff() == 0.0);
  CHECK((real_a.h - real_c.h).cwiseAbs().maxCoeff() > 0.0);
  CHECK(real_a.link(2, 3) == real_a.ru_block(2).col(3));
}
