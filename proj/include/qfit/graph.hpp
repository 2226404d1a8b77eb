// Copyright 2026 The qfit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <algorithm>
#include <queue>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace qfit {

// Undirected simple graph on vertices 0..n-1. Edges are stored with u < v.
struct Graph {
  int n_vertices = 0;
  std::vector<std::pair<int, int>> edges;

  Graph() = default;
  Graph(int n, const std::vector<std::pair<int, int>>& e) : n_vertices(n) {
    std::set<std::pair<int, int>> seen;
    for (auto [u, v] : e) {
      if (u == v) throw std::invalid_argument("Graph: self-loop");
      if (u < 0 || v < 0 || u >= n || v >= n) throw std::invalid_argument("Graph: vertex out of range");
      if (u > v) std::swap(u, v);
      if (seen.insert({u, v}).second) edges.push_back({u, v});
    }
  }

  std::vector<int> degrees() const {
    std::vector<int> d(n_vertices, 0);
    for (auto [u, v] : edges) {
      ++d[u];
      ++d[v];
    }
    return d;
  }
  int max_degree() const {
    auto d = degrees();
    return d.empty() ? 0 : *std::max_element(d.begin(), d.end());
  }
  bool connected() const {
    if (n_vertices <= 1) return true;
    std::vector<std::vector<int>> adj(n_vertices);
    for (auto [u, v] : edges) {
      adj[u].push_back(v);
      adj[v].push_back(u);
    }
    std::vector<bool> seen(n_vertices, false);
    std::queue<int> q;
    q.push(0);
    seen[0] = true;
    int count = 1;
    while (!q.empty()) {
      int u = q.front();
      q.pop();
      for (int w : adj[u])
        if (!seen[w]) {
          seen[w] = true;
          ++count;
          q.push(w);
        }
    }
    return count == n_vertices;
  }

  static Graph path(int n) {
    std::vector<std::pair<int, int>> e;
    for (int i = 0; i + 1 < n; ++i) e.push_back({i, i + 1});
    return Graph(n, e);
  }
  static Graph cycle(int n) {
    Graph g = path(n);
    if (n > 2) g = Graph(n, [&] { auto e = g.edges; e.push_back({0, n - 1}); return e; }());
    return g;
  }
  static Graph complete(int n) {
    std::vector<std::pair<int, int>> e;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) e.push_back({i, j});
    return Graph(n, e);
  }
};

}  // namespace qfit
