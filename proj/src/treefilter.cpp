// Copyright (c) 2026, the boxls authors. All rights reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "boxls/treefilter.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace boxls {

GridGraph build_grid_graph(const Grid& guidance) {
  guidance.check_finite("guidance features");
  const int h = guidance.height(), w = guidance.width(), ch = guidance.channels();
  GridGraph g;
  g.height = h;
  g.width = w;
  g.edges.reserve(static_cast<size_t>(2) * h * w);

  auto dist = [&](int ay, int ax, int by, int bx) {
    double d2 = 0.0;
    for (int c = 0; c < ch; ++c) {
      const double d = guidance.at(c, ay, ax) - guidance.at(c, by, bx);
      d2 += d * d;
    }
    return std::sqrt(d2);
  };

  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      const int i = y * w + x;
      if (x + 1 < w) g.edges.push_back({i, i + 1, dist(y, x, y, x + 1)});
      if (y + 1 < h) g.edges.push_back({i, i + w, dist(y, x, y + 1, x)});
    }
  return g;
}

namespace {

struct DisjointSet {
  std::vector<int> parent;
  explicit DisjointSet(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int a) {
    while (parent[a] != a) {
      parent[a] = parent[parent[a]];
      a = parent[a];
    }
    return a;
  }
  bool unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    parent[b] = a;
    return true;
  }
};

}  // namespace

SpanningTree mst(const GridGraph& graph) {
  const int n = graph.height * graph.width;
  if (n < 1) throw Error("mst: empty graph");

  // stable sort keeps enumeration order among equal weights
  std::vector<int> order(graph.edges.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return graph.edges[a].weight < graph.edges[b].weight;
  });

  std::vector<std::vector<std::pair<int, double>>> adj(n);
  DisjointSet ds(n);
  double total = 0.0;
  int used = 0;
  for (int ei : order) {
    const auto& e = graph.edges[ei];
    if (!ds.unite(e.a, e.b)) continue;
    adj[e.a].push_back({e.b, e.weight});
    adj[e.b].push_back({e.a, e.weight});
    total += e.weight;
    if (++used == n - 1) break;
  }
  if (used != n - 1) throw Error("mst: grid graph is not connected");

  SpanningTree t;
  t.height = graph.height;
  t.width = graph.width;
  t.parent.assign(n, -1);
  t.parent_weight.assign(n, 0.0);
  t.bfs_order.reserve(n);
  t.total_weight = total;

  std::vector<char> seen(n, 0);
  t.bfs_order.push_back(0);
  seen[0] = 1;
  for (size_t qi = 0; qi < t.bfs_order.size(); ++qi) {
    const int u = t.bfs_order[qi];
    for (const auto& [v, wgt] : adj[u]) {
      if (seen[v]) continue;
      seen[v] = 1;
      t.parent[v] = u;
      t.parent_weight[v] = wgt;
      t.bfs_order.push_back(v);
    }
  }
  return t;
}

Grid tree_filter(const Grid& values, const SpanningTree& tree, double sigma_tf) {
  if (values.height() != tree.height || values.width() != tree.width)
    throw Error("tree_filter: values not aligned with the tree");
  if (!(sigma_tf > 0.0)) throw Error("tree_filter: sigma_tf must be > 0");
  const int n = tree.height * tree.width;

  // decay factor toward the parent
  std::vector<double> s(n, 0.0);
  for (int i = 0; i < n; ++i)
    if (tree.parent[i] >= 0) s[i] = std::exp(-tree.parent_weight[i] / sigma_tf);

  Grid out(values.height(), values.width(), values.channels());
  std::vector<double> agg(n), tot(n), agg_n(n), tot_n(n);

  for (int c = 0; c < values.channels(); ++c) {
    auto x = values.channel(c);

    // leaf-to-root: subtree aggregates
    for (int i = 0; i < n; ++i) {
      agg[i] = x[i];
      agg_n[i] = 1.0;
    }
    for (int qi = n - 1; qi >= 1; --qi) {
      const int u = tree.bfs_order[qi];
      const int p = tree.parent[u];
      agg[p] += s[u] * agg[u];
      agg_n[p] += s[u] * agg_n[u];
    }

    // root-to-leaf: fold in everything outside the subtree
    tot[tree.bfs_order[0]] = agg[tree.bfs_order[0]];
    tot_n[tree.bfs_order[0]] = agg_n[tree.bfs_order[0]];
    for (int qi = 1; qi < n; ++qi) {
      const int u = tree.bfs_order[qi];
      const int p = tree.parent[u];
      tot[u] = agg[u] + s[u] * (tot[p] - s[u] * agg[u]);
      tot_n[u] = agg_n[u] + s[u] * (tot_n[p] - s[u] * agg_n[u]);
    }

    auto y = out.channel(c);
    for (int i = 0; i < n; ++i) y[i] = tot[i] / tot_n[i];
  }
  return out;
}

Grid structural_features(const Grid& image, const Grid* raw_features, double sigma_tf) {
  if (raw_features && !raw_features->same_plane(image))
    throw Error("structural_features: features not aligned with the image");

  Grid guidance = image;
  if (raw_features) {
    Grid cat(image.height(), image.width(), image.channels() + raw_features->channels());
    for (int c = 0; c < image.channels(); ++c) {
      auto src = image.channel(c);
      std::copy(src.begin(), src.end(), cat.channel(c).begin());
    }
    for (int c = 0; c < raw_features->channels(); ++c) {
      auto src = raw_features->channel(c);
      std::copy(src.begin(), src.end(), cat.channel(image.channels() + c).begin());
    }
    guidance = std::move(cat);
  }

  const SpanningTree tree = mst(build_grid_graph(guidance));
  const Grid filtered = tree_filter(raw_features ? *raw_features : image, tree, sigma_tf);
  return normalize(filtered);
}

}  // namespace boxls
