#include "tspcut/tsplib.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>

namespace tspcut {

namespace {

std::string trim(const std::string& s) {
  size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::string upper(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return std::toupper(c); });
  return s;
}

// Splits "KEY : value" / "KEY: value" / "KEY value"; key returned uppercased.
bool split_keyword(const std::string& line, std::string& key, std::string& value) {
  size_t colon = line.find(':');
  if (colon != std::string::npos) {
    key = upper(trim(line.substr(0, colon)));
    value = trim(line.substr(colon + 1));
    return !key.empty();
  }
  std::istringstream ss(line);
  std::string first;
  ss >> first;
  key = upper(first);
  std::getline(ss, value);
  value = trim(value);
  return !key.empty();
}

}  // namespace

RawInstance parse_tsplib(const std::string& text) {
  std::istringstream in(text);
  return parse_tsplib_stream(in);
}

RawInstance parse_tsplib_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open instance file: " + path);
  return parse_tsplib_stream(in);
}

RawInstance parse_tsplib_stream(std::istream& in) {
  RawInstance raw;
  bool saw_dimension = false;
  bool saw_weight_type = false;
  bool in_coords = false;
  bool saw_eof = false;
  int lineno = 0;

  std::string line;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty()) continue;

    if (!in_coords) {
      std::string key, value;
      if (!split_keyword(t, key, value))
        throw ParseError(lineno, "unparseable header line");
      if (key == "NAME") {
        raw.name = value;
      } else if (key == "DIMENSION") {
        try {
          raw.dimension = std::stoi(value);
        } catch (const std::exception&) {
          throw ParseError(lineno, "DIMENSION is not an integer");
        }
        saw_dimension = true;
      } else if (key == "EDGE_WEIGHT_TYPE") {
        if (upper(value) != "EUC_2D")
          throw UnsupportedEdgeWeightType("unsupported EDGE_WEIGHT_TYPE: " + value);
        saw_weight_type = true;
      } else if (key == "NODE_COORD_SECTION") {
        if (!saw_dimension)
          throw ParseError(lineno, "NODE_COORD_SECTION before DIMENSION");
        if (!saw_weight_type)
          throw UnsupportedEdgeWeightType("EDGE_WEIGHT_TYPE missing (EUC_2D required)");
        in_coords = true;
      } else {
        // TYPE, COMMENT and other headers are accepted and ignored.
      }
      continue;
    }

    if (upper(t) == "EOF") {
      saw_eof = true;
      break;
    }

    std::istringstream row(t);
    NodeCoord c;
    if (!(row >> c.id >> c.x >> c.y))
      throw ParseError(lineno, "expected 'id x y' coordinate triple");
    std::string extra;
    if (row >> extra) throw ParseError(lineno, "trailing tokens after coordinate");
    if (!std::isfinite(c.x) || !std::isfinite(c.y))
      throw ParseError(lineno, "non-finite coordinate");
    if (c.id != static_cast<int>(raw.coords.size()) + 1)
      throw ParseError(lineno, "node ids must be consecutive 1..N in file order");
    raw.coords.push_back(c);
  }

  if (!in_coords) throw Error("NODE_COORD_SECTION missing");
  if (!saw_eof) throw Error("EOF keyword missing");
  if (static_cast<int>(raw.coords.size()) != raw.dimension)
    throw DimensionMismatch("DIMENSION is " + std::to_string(raw.dimension) +
                            " but " + std::to_string(raw.coords.size()) +
                            " coordinate rows were read");
  if (raw.dimension < 3) throw Error("instance needs at least 3 nodes");
  return raw;
}

RawInstance truncate(const RawInstance& raw, int n) {
  if (n < 3 || n > raw.dimension)
    throw OutOfRange("truncation size must lie in [3, dimension]");
  RawInstance out;
  out.name = raw.name;
  out.dimension = n;
  out.coords.assign(raw.coords.begin(), raw.coords.begin() + n);
  for (int i = 0; i < n; ++i) out.coords[static_cast<size_t>(i)].id = i + 1;
  return out;
}

Instance build_costs(const RawInstance& raw) {
  const int n = raw.dimension;
  std::vector<double> costs(static_cast<size_t>(n) * n, 0.0);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const double dx = raw.coords[i].x - raw.coords[j].x;
      const double dy = raw.coords[i].y - raw.coords[j].y;
      const double d = std::hypot(dx, dy);
      costs[static_cast<size_t>(i) * n + j] = d;
      costs[static_cast<size_t>(j) * n + i] = d;
    }
  }
  return Instance::complete(n, std::move(costs));
}

}  // namespace tspcut
