#pragma once

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "bco/errors.hpp"
#include "bco/matrix.hpp"

namespace bco {

/// Heatmap CSV: a single "n" header line, then n rows of n comma-separated
/// probabilities with 6 decimal places.
inline void write_heatmap_csv(const ProbHeatmap& heatmap, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open for writing: " + path);
  out << heatmap.n() << "\n";
  char buf[32];
  for (int i = 0; i < heatmap.n(); ++i) {
    for (int j = 0; j < heatmap.n(); ++j) {
      std::snprintf(buf, sizeof(buf), "%.6f", heatmap(i, j));
      out << (j ? "," : "") << buf;
    }
    out << "\n";
  }
  if (!out) throw IoError("write failed: " + path);
}

inline ProbHeatmap read_heatmap_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open: " + path);
  std::string line;
  if (!std::getline(in, line)) throw ParseError("missing header", 1);
  int n = 0;
  try {
    n = std::stoi(line);
  } catch (const std::exception&) {
    throw ParseError("header must be the matrix dimension", 1);
  }
  if (n < 1) throw ParseError("dimension must be positive", 1);
  ProbHeatmap heatmap(n);
  for (int i = 0; i < n; ++i) {
    if (!std::getline(in, line)) throw ParseError("missing row", i + 2);
    std::istringstream row(line);
    std::string cell;
    for (int j = 0; j < n; ++j) {
      if (!std::getline(row, cell, ',')) throw ParseError("missing column", i + 2);
      heatmap(i, j) = std::stod(cell);
    }
  }
  return heatmap;
}

/// Plain (ASCII) portable graymap, one pixel per matrix entry, active = 255.
inline void write_pgm(const EdgeMatrix& frame, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open for writing: " + path);
  out << "P2\n" << frame.n() << " " << frame.n() << "\n255\n";
  for (int i = 0; i < frame.n(); ++i) {
    for (int j = 0; j < frame.n(); ++j) out << (j ? " " : "") << (frame(i, j) ? 255 : 0);
    out << "\n";
  }
  if (!out) throw IoError("write failed: " + path);
}

}  // namespace bco
