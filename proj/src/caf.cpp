#include "tspcut/caf.hpp"

#include <algorithm>
#include <numeric>

namespace tspcut {

int default_k(int n) { return (n + 1) / 2; }

Instance caf_filter(const Instance& instance, const CafConfig& cfg) {
  const int n = instance.n();
  if (cfg.k < 1 || cfg.k > n - 1)
    throw BadK("k must lie in [1, n-1], got " + std::to_string(cfg.k));
  if (instance.num_arcs() != n * (n - 1))
    throw BadK("caf_filter expects the complete arc set");

  std::vector<Arc> kept;
  kept.reserve(static_cast<size_t>(2) * n * cfg.k);
  std::vector<int> order(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) {
    order.clear();
    for (int j = 0; j < n; ++j)
      if (j != i) order.push_back(j);
    // Nondecreasing cost, ties to the smaller index.
    std::sort(order.begin(), order.end(), [&](int a, int b) {
      const double ca = instance.cost(i, a), cb = instance.cost(i, b);
      return ca < cb || (ca == cb && a < b);
    });
    for (int t = 0; t < cfg.k; ++t) {
      kept.push_back({i, order[static_cast<size_t>(t)]});
      kept.push_back({order[static_cast<size_t>(t)], i});
    }
  }
  return Instance(n, instance.cost_matrix(), std::move(kept));
}

Instance caf_filter(const Instance& instance) {
  return caf_filter(instance, CafConfig{default_k(instance.n())});
}

bool hamiltonicity_certificate(const Instance& reduced) {
  const int n = reduced.n();
  std::vector<int> degree(static_cast<size_t>(n), 0);
  for (const Arc& a : reduced.arcs()) {
    if (!reduced.has_arc(a.to, a.from))
      throw AsymmetricArcSet("arc set is not symmetric");
    if (a.from < a.to) {  // count each undirected edge once
      ++degree[static_cast<size_t>(a.from)];
      ++degree[static_cast<size_t>(a.to)];
    }
  }
  return std::all_of(degree.begin(), degree.end(),
                     [n](int d) { return 2 * d >= n; });
}

}  // namespace tspcut
