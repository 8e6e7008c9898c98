#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include "toph/distributions.hpp"

namespace toph {

/// Largest vocabulary exact_ecmm will enumerate (2^20 subsets).
inline constexpr std::size_t kMaxEnumerationSize = 20;

/// Masses closer than this are treated as ties by the exact solver.
inline constexpr double kMassTieTolerance = 1e-12;

/// One entropy-constrained mass maximization problem:
/// maximize the mass of S subject to H(p restricted to S) <= alpha H(p).
struct EcmmInstance {
  std::string id;
  ProbabilityDistribution p;
  double alpha = 0.4;
};

struct EcmmSolution {
  /// Ascending token ids.
  std::vector<std::size_t> subset;
  double gamma = 0.0;
  double entropy = 0.0;
  double budget = 0.0;
};

/// Exhaustive search over all non-empty subsets. Among feasible subsets
/// (entropy <= budget + slack) returns the largest mass; ties go to the
/// smaller subset, then to the lexicographically smaller id list.
EcmmSolution exact_ecmm(const EcmmInstance& instance, double entropy_slack = 0.0);

struct GapRow {
  std::string instance_id;
  std::size_t n = 0;
  double alpha = 0.0;
  double gamma_greedy = 0.0;
  double gamma_optimal = 0.0;
  double ratio = 0.0;
};

struct GapReport {
  std::vector<GapRow> rows;
  double mean = 0.0;
  /// Population variance of the ratios.
  double variance = 0.0;
  double min = 0.0;
  /// Instances with ratio < 1 - 1e-12.
  std::size_t count_suboptimal = 0;

  std::vector<double> ratios() const;
};

/// Runs top-H and exact_ecmm on each instance and aggregates
/// gamma_greedy / gamma_optimal. Row order follows instance order.
GapReport optimality_gap(const std::vector<EcmmInstance>& instances, double entropy_slack = 0.0);

/// CSV with header instance_id,n,alpha,gamma_greedy,gamma_optimal,ratio.
void write_gap_csv(std::ostream& out, const GapReport& report);

}  // namespace toph
