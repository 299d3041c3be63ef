// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 the cfran authors

#include "cfran/fronthaul_graph.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <stdexcept>

#include <json.hpp>

namespace cfran {

std::vector<int> FronthaulGraph::routers_of_ru(int l) const {
  std::vector<int> out;
  for (const auto& [rl, q] : ru_router) {
    if (rl == l) out.push_back(q);
  }
  return out;
}

std::vector<int> FronthaulGraph::routers_of_du(int n) const {
  std::vector<int> out;
  for (const auto& [q, dn] : router_du) {
    if (dn == n) out.push_back(q);
  }
  return out;
}

std::vector<int> FronthaulGraph::router_neighbors(int q) const {
  std::vector<int> out;
  for (const auto& [a, b] : router_router) {
    if (a == q) out.push_back(b);
    if (b == q) out.push_back(a);
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<int> FronthaulGraph::dus_of_router(int q) const {
  std::vector<int> out;
  for (const auto& [rq, n] : router_du) {
    if (rq == q) out.push_back(n);
  }
  return out;
}

void FronthaulGraph::validate() const {
  auto in_range = [](int v, int hi) { return v >= 0 && v < hi; };
  for (const auto& [l, q] : ru_router) {
    if (!in_range(l, num_rus) || !in_range(q, num_routers)) {
      throw std::invalid_argument("fronthaul graph: RU-router edge out of range");
    }
  }
  for (const auto& [a, b] : router_router) {
    if (!in_range(a, num_routers) || !in_range(b, num_routers) || a == b) {
      throw std::invalid_argument("fronthaul graph: router-router edge invalid");
    }
  }
  for (const auto& [q, n] : router_du) {
    if (!in_range(q, num_routers) || !in_range(n, num_dus)) {
      throw std::invalid_argument("fronthaul graph: router-DU edge out of range");
    }
  }
  for (int l = 0; l < num_rus; ++l) {
    if (routers_of_ru(l).empty()) {
      throw std::invalid_argument("fronthaul graph: RU " + std::to_string(l) +
                                  " has no router link");
    }
  }
  for (int n = 0; n < num_dus; ++n) {
    if (routers_of_du(n).empty()) {
      throw std::invalid_argument("fronthaul graph: DU " + std::to_string(n) +
                                  " has no router link");
    }
  }

  // Router connectivity reached from RU side must cover every DU.
  std::vector<char> router_seen(static_cast<std::size_t>(num_routers), 0);
  std::queue<int> frontier;
  for (const auto& [l, q] : ru_router) {
    if (!router_seen[q]) {
      router_seen[q] = 1;
      frontier.push(q);
    }
  }
  while (!frontier.empty()) {
    const int q = frontier.front();
    frontier.pop();
    for (int nb : router_neighbors(q)) {
      if (!router_seen[nb]) {
        router_seen[nb] = 1;
        frontier.push(nb);
      }
    }
  }
  for (int n = 0; n < num_dus; ++n) {
    bool reachable = false;
    for (int q : routers_of_du(n)) reachable = reachable || router_seen[q];
    if (!reachable) {
      throw std::invalid_argument("fronthaul graph: DU " + std::to_string(n) +
                                  " unreachable from the RUs");
    }
  }
}

FronthaulGraph default_topology(const NetworkLayout& layout, int num_routers,
                                int num_dus) {
  if (num_routers < 1 || num_dus < 1) {
    throw std::invalid_argument("default_topology: counts must be positive");
  }
  FronthaulGraph g;
  g.num_rus = layout.num_rus();
  g.num_routers = num_routers;
  g.num_dus = num_dus;

  // Routers at the cell centers of a near-square grid, row-major, first Q.
  const int rows = std::max(1, static_cast<int>(std::floor(std::sqrt(
                                    static_cast<double>(num_routers)))));
  const int cols = (num_routers + rows - 1) / rows;
  std::vector<Point> router_pos;
  for (int j = 0; j < rows && static_cast<int>(router_pos.size()) < num_routers; ++j) {
    for (int i = 0; i < cols && static_cast<int>(router_pos.size()) < num_routers; ++i) {
      router_pos.push_back({(i + 0.5) * layout.area.width / cols,
                            (j + 0.5) * layout.area.height / rows});
    }
  }

  // Each RU to its two nearest routers; ties resolved by router index.
  const int fan = std::min(2, num_routers);
  for (int l = 0; l < g.num_rus; ++l) {
    std::vector<std::pair<double, int>> dist;
    for (int q = 0; q < num_routers; ++q) {
      dist.emplace_back(torus_distance(layout.ru[l], router_pos[q], layout.area), q);
    }
    std::stable_sort(dist.begin(), dist.end());
    for (int f = 0; f < fan; ++f) g.ru_router.emplace_back(l, dist[f].second);
  }

  // Router ring.
  if (num_routers == 2) {
    g.router_router.emplace_back(0, 1);
  } else if (num_routers > 2) {
    for (int q = 0; q < num_routers; ++q) {
      const int next = (q + 1) % num_routers;
      g.router_router.emplace_back(std::min(q, next), std::max(q, next));
    }
    std::sort(g.router_router.begin(), g.router_router.end());
    g.router_router.erase(
        std::unique(g.router_router.begin(), g.router_router.end()),
        g.router_router.end());
  }

  // DUs on two distinct routers, round-robin over the router indices.
  for (int n = 0; n < num_dus; ++n) {
    const int q0 = (2 * n) % num_routers;
    int q1 = (2 * n + 1) % num_routers;
    if (q1 == q0) q1 = (q0 + 1) % num_routers;  // single-router corner case
    g.router_du.emplace_back(q0, n);
    if (q1 != q0) g.router_du.emplace_back(q1, n);
  }
  std::sort(g.ru_router.begin(), g.ru_router.end());
  std::sort(g.router_du.begin(), g.router_du.end());
  g.validate();
  return g;
}

FronthaulGraph topology_from_json(const std::string& text) {
  const auto j = nlohmann::json::parse(text);
  FronthaulGraph g;
  g.num_rus = j.at("num_rus").get<int>();
  g.num_routers = j.at("num_routers").get<int>();
  g.num_dus = j.at("num_dus").get<int>();
  for (const auto& e : j.at("ru_router")) {
    g.ru_router.emplace_back(e.at(0).get<int>(), e.at(1).get<int>());
  }
  for (const auto& e : j.at("router_router")) {
    const int a = e.at(0).get<int>();
    const int b = e.at(1).get<int>();
    g.router_router.emplace_back(std::min(a, b), std::max(a, b));
  }
  for (const auto& e : j.at("router_du")) {
    g.router_du.emplace_back(e.at(0).get<int>(), e.at(1).get<int>());
  }
  std::sort(g.ru_router.begin(), g.ru_router.end());
  std::sort(g.router_router.begin(), g.router_router.end());
  g.router_router.erase(
      std::unique(g.router_router.begin(), g.router_router.end()),
      g.router_router.end());
  std::sort(g.router_du.begin(), g.router_du.end());
  g.validate();
  return g;
}

std::string topology_to_json(const FronthaulGraph& graph) {
  nlohmann::json j;
  j["num_rus"] = graph.num_rus;
  j["num_routers"] = graph.num_routers;
  j["num_dus"] = graph.num_dus;
  j["ru_router"] = graph.ru_router;
  j["router_router"] = graph.router_router;
  j["router_du"] = graph.router_du;
  return j.dump(2) + "\n";
}

}  // namespace cfran
