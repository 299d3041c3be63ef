// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 the cfran authors

#pragma once

#include <string>
#include <utility>
#include <vector>

#include "cfran/geometry.hpp"

namespace cfran {

// Routed fronthaul: RU-router access links, router-router transit links
// (undirected, stored once, flows allowed both ways) and router-DU links.
struct FronthaulGraph {
  int num_rus = 0;
  int num_routers = 0;
  int num_dus = 0;
  std::vector<std::pair<int, int>> ru_router;      // (l, q)
  std::vector<std::pair<int, int>> router_router;  // (q, q'), q < q'
  std::vector<std::pair<int, int>> router_du;      // (q, n)

  std::vector<int> routers_of_ru(int l) const;
  std::vector<int> routers_of_du(int n) const;
  std::vector<int> router_neighbors(int q) const;
  std::vector<int> dus_of_router(int q) const;

  // Throws std::invalid_argument when an invariant fails: every RU and DU
  // attached, all indices in range, and every RU connected to every DU.
  void validate() const;
};

// Shipped default: routers on a uniform grid over the area, each RU attached
// to its two nearest routers (torus distance), routers in a ring, each DU on
// two distinct routers assigned round-robin.
FronthaulGraph default_topology(const NetworkLayout& layout, int num_routers,
                                int num_dus);

FronthaulGraph topology_from_json(const std::string& text);
std::string topology_to_json(const FronthaulGraph& graph);

}  // namespace cfran
