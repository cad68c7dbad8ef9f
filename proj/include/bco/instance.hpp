#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "bco/errors.hpp"
#include "bco/matrix.hpp"
#include "bco/rng.hpp"

namespace bco {

struct Point {
  double x = 0.0;
  double y = 0.0;
};

/// Euclidean TSP instance on the unit square.
class TspInstance {
 public:
  TspInstance(int n, std::vector<Point> coords) : n_(n), coords_(std::move(coords)) {
    if (n_ < 3) throw InvalidArgument("instance needs at least 3 nodes");
    if (static_cast<int>(coords_.size()) != n_) throw InvalidArgument("coordinate count does not match n");
    for (const Point& p : coords_) {
      if (!(p.x >= 0.0 && p.x <= 1.0 && p.y >= 0.0 && p.y <= 1.0))
        throw InvalidArgument("coordinates must lie in the unit square");
    }
  }

  int n() const { return n_; }
  const std::vector<Point>& coords() const { return coords_; }
  const Point& coord(int i) const { return coords_[static_cast<std::size_t>(i)]; }

  double distance(int i, int j) const {
    const double dx = coords_[i].x - coords_[j].x;
    const double dy = coords_[i].y - coords_[j].y;
    return std::sqrt(dx * dx + dy * dy);
  }

  /// Full pairwise distance table; worth building once for local search.
  SquareMatrix distance_matrix() const {
    SquareMatrix d(n_);
    for (int i = 0; i < n_; ++i)
      for (int j = i + 1; j < n_; ++j) d.set_sym(i, j, distance(i, j));
    return d;
  }

 private:
  int n_;
  std::vector<Point> coords_;
};

/// Hamiltonian cycle as a node ordering; the edge (order.back(), order.front())
/// closes the cycle.
struct Tour {
  std::vector<int> order;
};

inline TspInstance generate_random(int n, std::uint64_t seed) {
  if (n < 3) throw InvalidArgument("instance needs at least 3 nodes");
  Rng rng(seed);
  std::vector<Point> coords(static_cast<std::size_t>(n));
  for (Point& p : coords) {
    p.x = rng.uniform();
    p.y = rng.uniform();
  }
  return TspInstance(n, std::move(coords));
}

inline void validate_tour(const TspInstance& instance, const Tour& tour) {
  const int n = instance.n();
  if (static_cast<int>(tour.order.size()) != n) throw InvalidTour("tour size does not match instance");
  std::vector<char> seen(static_cast<std::size_t>(n), 0);
  for (int v : tour.order) {
    if (v < 0 || v >= n || seen[v]) throw InvalidTour("tour is not a permutation of the nodes");
    seen[v] = 1;
  }
}

inline double tour_length(const TspInstance& instance, const Tour& tour) {
  validate_tour(instance, tour);
  const int n = instance.n();
  double total = 0.0;
  for (int k = 0; k < n; ++k) total += instance.distance(tour.order[k], tour.order[(k + 1) % n]);
  return total;
}

inline EdgeMatrix tour_to_edge_matrix(const Tour& tour) {
  const int n = static_cast<int>(tour.order.size());
  if (n < 3) throw InvalidTour("tour needs at least 3 nodes");
  std::vector<char> seen(static_cast<std::size_t>(n), 0);
  for (int v : tour.order) {
    if (v < 0 || v >= n || seen[v]) throw InvalidTour("tour is not a permutation of the nodes");
    seen[v] = 1;
  }
  EdgeMatrix m(n);
  for (int k = 0; k < n; ++k) m.set_sym(tour.order[k], tour.order[(k + 1) % n], true);
  return m;
}

/// Percentage excess over a reference length. Negative values are meaningful
/// when the reference is itself a heuristic solution.
inline double optimality_gap(double length, double opt_length) {
  if (!(opt_length > 0.0)) throw InvalidArgument("reference length must be positive");
  return 100.0 * (length / opt_length - 1.0);
}

// ---------------------------------------------------------------------------
// Text formats.
//
// Instance file: line 1 is the node count, lines 2..n+1 are "x y" pairs with
// '.' decimal separators. Tour file: one line of space-separated node indices.
// ---------------------------------------------------------------------------

inline void write_instance(const TspInstance& instance, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open for writing: " + path);
  out << instance.n() << "\n";
  char buf[64];
  for (const Point& p : instance.coords()) {
    std::snprintf(buf, sizeof(buf), "%.17g %.17g", p.x, p.y);
    out << buf << "\n";
  }
  if (!out) throw IoError("write failed: " + path);
}

inline TspInstance read_instance(std::istream& in) {
  std::string line;
  int line_no = 1;
  if (!std::getline(in, line)) throw ParseError("missing header", line_no);
  int n = 0;
  {
    std::istringstream hs(line);
    std::string extra;
    if (!(hs >> n) || (hs >> extra)) throw ParseError("header must be a single integer node count", line_no);
  }
  if (n < 3) throw ParseError("node count must be at least 3", line_no);
  std::vector<Point> coords;
  coords.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    ++line_no;
    if (!std::getline(in, line)) throw ParseError("expected coordinate line", line_no);
    std::istringstream cs(line);
    Point p;
    std::string extra;
    if (!(cs >> p.x >> p.y) || (cs >> extra)) throw ParseError("expected two reals \"x y\"", line_no);
    if (!(p.x >= 0.0 && p.x <= 1.0 && p.y >= 0.0 && p.y <= 1.0))
      throw ParseError("coordinate outside [0,1]", line_no);
    coords.push_back(p);
  }
  ++line_no;
  while (std::getline(in, line)) {
    if (!line.empty()) throw ParseError("unexpected trailing content", line_no);
    ++line_no;
  }
  return TspInstance(n, std::move(coords));
}

inline TspInstance read_instance(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open: " + path);
  return read_instance(in);
}

inline void write_tour(const Tour& tour, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open for writing: " + path);
  for (std::size_t k = 0; k < tour.order.size(); ++k) {
    if (k > 0) out << ' ';
    out << tour.order[k];
  }
  out << "\n";
  if (!out) throw IoError("write failed: " + path);
}

inline Tour read_tour(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open: " + path);
  std::string line;
  if (!std::getline(in, line)) throw ParseError("empty tour file", 1);
  Tour tour;
  std::istringstream ts(line);
  int v;
  while (ts >> v) tour.order.push_back(v);
  if (!ts.eof()) throw ParseError("tour line must hold integers only", 1);
  if (tour.order.size() < 3) throw ParseError("tour needs at least 3 nodes", 1);
  return tour;
}

}  // namespace bco
