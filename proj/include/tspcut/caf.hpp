#ifndef TSPCUT_CAF_HPP
#define TSPCUT_CAF_HPP

#include "tspcut/model.hpp"

namespace tspcut {

struct CafConfig {
  int k = 0;               // neighbors kept per vertex
  bool symmetrize = true;  // fixed true; kept for the record
};

/// Smallest k for which the Dirac certificate applies: ceil(n/2).
int default_k(int n);

/// Cost-based arc filtering: for each vertex keep the k cheapest neighbors
/// (ties to the smaller index), then symmetrize the kept pairs. Requires the
/// complete arc set; costs are unchanged.
Instance caf_filter(const Instance& instance, const CafConfig& cfg);

Instance caf_filter(const Instance& instance);  // k = default_k(n)

/// Dirac minimum-degree check on the undirected support: true proves a
/// Hamiltonian cycle exists; false is inconclusive. Requires a symmetric
/// arc set.
bool hamiltonicity_certificate(const Instance& reduced);

}  // namespace tspcut

#endif  // TSPCUT_CAF_HPP
