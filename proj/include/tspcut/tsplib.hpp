#ifndef TSPCUT_TSPLIB_HPP
#define TSPCUT_TSPLIB_HPP

#include <istream>
#include <string>
#include <vector>

#include "tspcut/model.hpp"

namespace tspcut {

struct NodeCoord {
  int id = 0;  // 1-based, consecutive in file order
  double x = 0.0;
  double y = 0.0;
};

struct RawInstance {
  std::string name;
  int dimension = 0;
  std::vector<NodeCoord> coords;
};

/// Parses the EUC_2D subset of the TSPLIB grammar: NAME, DIMENSION,
/// EDGE_WEIGHT_TYPE, NODE_COORD_SECTION, EOF. Keys may carry an optional
/// colon; whitespace is ignored. Anything but EUC_2D is rejected.
RawInstance parse_tsplib(const std::string& text);
RawInstance parse_tsplib_file(const std::string& path);
RawInstance parse_tsplib_stream(std::istream& in);

/// First n nodes in file order, ids renumbered 1..n. 3 <= n <= dimension.
RawInstance truncate(const RawInstance& raw, int n);

/// Complete instance with exact (unrounded) Euclidean costs.
Instance build_costs(const RawInstance& raw);

}  // namespace tspcut

#endif  // TSPCUT_TSPLIB_HPP
