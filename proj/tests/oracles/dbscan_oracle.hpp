#pragma once

// Brute-force DBSCAN: all-pairs distances, union-find over core points,
// border points attached to the component with the smallest core index,
// labels renumbered by first member in row order. -1 marks noise.

#include <cmath>
#include <map>
#include <numeric>
#include <vector>

namespace oracle {

inline std::vector<int> dbscan(const std::vector<std::vector<double>>& pts, double eps, std::size_t min_pts) {
  const std::size_t n = pts.size();
  auto dist = [&](std::size_t a, std::size_t b) {
    double s = 0;
    for (std::size_t k = 0; k < pts[a].size(); ++k) s += (pts[a][k] - pts[b][k]) * (pts[a][k] - pts[b][k]);
    return std::sqrt(s);
  };
  std::vector<std::vector<bool>> near(n, std::vector<bool>(n, false));
  std::vector<bool> core(n, false);
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t count = 0;
    for (std::size_t j = 0; j < n; ++j) {
      near[i][j] = dist(i, j) <= eps;
      count += near[i][j] ? 1 : 0;
    }
    core[i] = count >= min_pts;
  }

  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (core[i] && core[j] && near[i][j]) {
        const std::size_t a = find(i), b = find(j);
        parent[std::max(a, b)] = std::min(a, b);  // root = smallest core index
      }
    }
  }

  std::vector<long> root(n, -1);
  for (std::size_t i = 0; i < n; ++i) {
    if (core[i]) {
      root[i] = static_cast<long>(find(i));
      continue;
    }
    long best = -1;
    for (std::size_t j = 0; j < n; ++j) {
      if (core[j] && near[i][j]) {
        const long r = static_cast<long>(find(j));
        if (best < 0 || r < best) best = r;
      }
    }
    root[i] = best;
  }

  std::map<long, int> ids;
  std::vector<int> labels(n, -1);
  for (std::size_t i = 0; i < n; ++i) {
    if (root[i] < 0) continue;
    auto it = ids.find(root[i]);
    if (it == ids.end()) it = ids.emplace(root[i], static_cast<int>(ids.size())).first;
    labels[i] = it->second;
  }
  return labels;
}

}  // namespace oracle
