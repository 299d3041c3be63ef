// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 the cfran authors

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>

#include "cfran/clustering.hpp"

using namespace cfran;

namespace {

const NetworkArea kArea{200.0, 200.0, true};

SnrCalibration unit_cal(int antennas) {
  SnrCalibration cal;
  cal.beta_bar = 1.0;
  cal.snr = 1.0 / antennas;  // threshold eta/(M*snr) = eta
  cal.d_ref = 1.0;
  return cal;
}

}  // namespace

TEST_CASE("cluster formation") {
  const int antennas = 4;
  const auto cal = unit_cal(antennas);

  SUBCASE("sort and threshold with a cap") {
    Eigen::MatrixXd beta(4, 1);
    beta << 4.0, 3.0, 2.0, 1.0;  // all above threshold eta = 1 except none
    const auto graph = form_clusters(beta, cal, 1.0, antennas, 2);
    CHECK(graph.serving(0) == std::vector<int>{0, 1});
    CHECK(graph.served(0) == std::vector<int>{0});
    CHECK(graph.served(2).empty());
  }

  SUBCASE("all below threshold leaves the UE unserved") {
    Eigen::MatrixXd beta(3, 2);
    beta << 0.5, 2.0, 0.4, 3.0, 0.3, 4.0;
    const auto graph = form_clusters(beta, cal, 1.0, antennas, 3);
    CHECK(graph.serving(0).empty());
    CHECK(graph.num_unserved() == 1);
    CHECK(graph.serving(1).size() == 3);
    CHECK(graph.mean_cluster_size() == doctest::Approx(1.5));
  }

  SUBCASE("ties break toward the lower RU index") {
    Eigen::MatrixXd beta(3, 1);
    beta << 2.0, 2.0, 2.0;
    const auto graph = form_clusters(beta, cal, 1.0, antennas, 2);
    CHECK(graph.serving(0) == std::vector<int>{0, 1});
  }

  SUBCASE("bipartite consistency after pruning-style edits") {
    Eigen::MatrixXd beta(3, 3);
    beta.setConstant(2.0);
    auto graph = form_clusters(beta, cal, 1.0, antennas, 3);
    graph.remove_edge(1, 1);
    graph.remove_edge(2, 0);
    for (int l = 0; l < 3; ++l) {
      for (int k = 0; k < 3; ++k) {
        const bool in_serving =
            std::find(graph.serving(k).begin(), graph.serving(k).end(), l) !=
            graph.serving(k).end();
        const bool in_served =
            std::find(graph.served(l).begin(), graph.served(l).end(), k) !=
            graph.served(l).end();
        CHECK(in_serving == graph.edge(l, k));
        CHECK(in_served == graph.edge(l, k));
        if (graph.edge(l, k)) {
          CHECK(graph.served(l)[graph.served_index(l, k)] == k);
        }
      }
    }
  }
}

TEST_CASE("pilot assignment") {
  const int antennas = 10;
  const auto cal = unit_cal(antennas);

  SUBCASE("enough pilots for everyone means distinct pilots") {
    NetworkLayout layout;
    layout.area = kArea;
    layout.antennas_per_ru = antennas;
    layout.ru = place_rus_grid(4, 2, 2, kArea);
    layout.ue = place_ues_uniform(5, kArea, 3);
    const auto bases = build_all_subspaces(layout, std::numbers::pi / 8.0);
    Eigen::MatrixXd beta = lsfc_matrix(layout, {});
    beta *= 1.0 / beta.maxCoeff();  // keep everything above threshold
    const auto graph = form_clusters(beta, cal, 1e-12, antennas, 4);
    const auto pilots = assign_pilots(graph, bases, 8, beta);
    std::set<int> used(pilots.pilot.begin(), pilots.pilot.end());
    CHECK(used.size() == 5);
  }

  SUBCASE("co-located UEs forced onto one pilot have overlap 1") {
    NetworkLayout layout;
    layout.area = kArea;
    layout.antennas_per_ru = antennas;
    layout.ru = {{100.0, 100.0}};
    layout.ue = {{110.0, 100.0}, {110.0, 100.0}};
    const auto bases = build_all_subspaces(layout, std::numbers::pi / 8.0);
    CHECK(subspace_overlap(bases.at(0, 0), bases.at(0, 1)) ==
          doctest::Approx(1.0));
    Eigen::MatrixXd beta(1, 2);
    beta << 1.0, 1.0;
    const auto graph = form_clusters(beta, cal, 0.5, antennas, 1);
    const auto pilots = assign_pilots(graph, bases, 1, beta);
    CHECK(pilots.pilot[0] == 0);
    CHECK(pilots.pilot[1] == 0);
  }

  SUBCASE("disjoint subspaces make co-pilot assignment cost-free") {
    // Two UEs on opposite sides of the RU: DFT indices do not intersect.
    NetworkLayout layout;
    layout.area = kArea;
    layout.antennas_per_ru = antennas;
    layout.ru = {{100.0, 100.0}};
    layout.ue = {{110.0, 100.0}, {90.0, 100.0}};
    const auto bases = build_all_subspaces(layout, std::numbers::pi / 8.0);
    CHECK(subspace_overlap(bases.at(0, 0), bases.at(0, 1)) ==
          doctest::Approx(0.0));
  }

  SUBCASE("never uses more than tau_p pilots") {
    NetworkLayout layout;
    layout.area = kArea;
    layout.antennas_per_ru = antennas;
    layout.ru = place_rus_grid(4, 2, 2, kArea);
    layout.ue = place_ues_uniform(40, kArea, 9);
    const auto bases = build_all_subspaces(layout, std::numbers::pi / 8.0);
    const Eigen::MatrixXd beta = lsfc_matrix(layout, {});
    const auto cal2 = calibrate_snr(kArea, 4, antennas, {});
    const auto graph = form_clusters(beta, cal2, 1.0, antennas, 3);
    const auto pilots = assign_pilots(graph, bases, 6, beta);
    for (int p : pilots.pilot) {
      CHECK(p >= 0);
      CHECK(p < 6);
    }
  }
}

TEST_CASE("channel estimation") {
  const int antennas = 8;
  NetworkLayout layout;
  layout.area = kArea;
  layout.antennas_per_ru = antennas;
  layout.ru = {{50.0, 50.0}, {150.0, 50.0}};
  layout.ue = {{60.0, 50.0}, {140.0, 50.0}, {60.0, 60.0}};
  const auto bases = build_all_subspaces(layout, std::numbers::pi / 4.0);
  Eigen::MatrixXd beta(2, 3);
  beta << 1.0, 0.1, 1.0, 0.1, 1.0, 0.1;
  SnrCalibration cal;
  cal.snr = 4.0;

  ClusterGraph graph(2, 3);
  graph.add_edge(0, 0);
  graph.add_edge(1, 1);
  graph.add_edge(0, 2);

  SUBCASE("no contamination and vanishing noise recovers h exactly") {
    PilotAssignment pilots{{0, 1, 2}, 4};
    SnrCalibration huge;
    huge.snr = 1e18;
    const auto real = draw_all_channels(beta, bases, antennas, 21);
    const auto est =
        estimate_channels(real, pilots, graph, bases, huge, 4, 22);
    CHECK((est.link(graph, 0, 0) - real.link(0, 0)).norm() < 1e-7);
    CHECK((est.link(graph, 1, 1) - real.link(1, 1)).norm() < 1e-7);
  }

  SUBCASE("projected noise energy matches |S|/(tau_p snr)") {
    PilotAssignment pilots{{0, 1, 2}, 4};
    const auto real = draw_all_channels(beta, bases, antennas, 23);
    const int tau_p = 4;
    const double expect =
        bases.at(0, 0).dim() / (tau_p * cal.snr);
    double acc = 0.0;
    const int draws = 10000;
    for (int i = 0; i < draws; ++i) {
      const auto est = estimate_channels(real, pilots, graph, bases, cal, tau_p,
                                         1000 + i);
      acc += (est.link(graph, 0, 0) - real.link(0, 0)).squaredNorm();
    }
    CHECK(acc / draws == doctest::Approx(expect).epsilon(0.03));
  }

  SUBCASE("estimation is unbiased without contamination") {
    PilotAssignment pilots{{0, 1, 2}, 4};
    const auto real = draw_all_channels(beta, bases, antennas, 29);
    Eigen::VectorXcd mean_err = Eigen::VectorXcd::Zero(antennas);
    const int draws = 20000;
    for (int i = 0; i < draws; ++i) {
      const auto est = estimate_channels(real, pilots, graph, bases, cal, 4,
                                         5000 + i);
      mean_err += est.link(graph, 0, 0) - real.link(0, 0);
    }
    CHECK((mean_err / draws).norm() < 0.01);
  }

  SUBCASE("orthogonal co-pilot users leave the estimate clean") {
    // UEs 0 and 2 share RU 0. Place UE 2 so its subspace is disjoint from
    // UE 0's, then force both onto pilot 0.
    NetworkLayout layout2 = layout;
    layout2.ue[2] = {40.0, 50.0};  // opposite side of RU 0
    const auto bases2 = build_all_subspaces(layout2, std::numbers::pi / 4.0);
    REQUIRE(subspace_overlap(bases2.at(0, 0), bases2.at(0, 2)) ==
            doctest::Approx(0.0));
    PilotAssignment pilots{{0, 1, 0}, 4};
    const auto real = draw_all_channels(beta, bases2, antennas, 31);
    SnrCalibration huge;
    huge.snr = 1e18;
    const auto est =
        estimate_channels(real, pilots, graph, bases2, huge, 4, 32);
    CHECK((est.link(graph, 0, 0) - real.link(0, 0)).norm() < 1e-7);
  }

  SUBCASE("co-pilot contamination enters through the projector") {
    PilotAssignment pilots{{0, 1, 0}, 4};  // UEs 0 and 2 overlap in angle
    SnrCalibration huge;
    huge.snr = 1e18;
    const auto real = draw_all_channels(beta, bases, antennas, 33);
    const auto est =
        estimate_channels(real, pilots, graph, bases, huge, 4, 34);
    const auto& f = bases.at(0, 0).columns;
    const Eigen::VectorXcd want =
        real.link(0, 0) + f * (f.adjoint() * real.link(0, 2));
    CHECK((est.link(graph, 0, 0) - want).norm() < 1e-7);
  }
}
