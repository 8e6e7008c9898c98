#include "toph/ecmm_oracle.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <ostream>

#include "toph/errors.hpp"
#include "toph/text.hpp"
#include "toph/truncation.hpp"

namespace toph {

namespace {

// For equal-size masks: true when a's ascending id list sorts before b's.
bool lexicographically_less(std::uint32_t a, std::uint32_t b) {
  const std::uint32_t diff = a ^ b;
  if (diff == 0) {
    return false;
  }
  return (a >> std::countr_zero(diff)) & 1U;
}

}  // namespace

EcmmSolution exact_ecmm(const EcmmInstance& instance, double entropy_slack) {
  const ProbabilityDistribution& p = instance.p;
  const std::size_t n = p.size();
  if (n > kMaxEnumerationSize) {
    throw Error(Errc::vocabulary_too_large, "exact ECMM enumerates at most " +
                                                std::to_string(kMaxEnumerationSize) + " tokens, got " +
                                                std::to_string(n));
  }
  if (!(instance.alpha > 0.0 && instance.alpha < 1.0)) {
    throw Error(Errc::alpha_out_of_range, "alpha must lie strictly inside (0, 1)");
  }
  const double budget = instance.alpha * normalized_entropy(p.probs());
  const double limit = budget + entropy_slack;

  // mass[mask] and plogp[mask] are built by adding the highest id last, so
  // every subset sums its terms in ascending id order.
  const std::uint32_t count = std::uint32_t{1} << n;
  std::vector<double> mass(count, 0.0);
  std::vector<double> plogp(count, 0.0);
  std::vector<double> term(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    term[i] = p[i] > 0.0 ? p[i] * std::log(p[i]) : 0.0;
  }

  std::uint32_t best = 0;
  double best_mass = -1.0;
  for (std::uint32_t mask = 1; mask < count; ++mask) {
    const int top = std::bit_width(mask) - 1;
    const std::uint32_t rest = mask & ~(std::uint32_t{1} << top);
    mass[mask] = mass[rest] + p[static_cast<std::size_t>(top)];
    plogp[mask] = plogp[rest] + term[static_cast<std::size_t>(top)];

    const double gamma = mass[mask];
    if (!(gamma > 0.0)) {
      continue;
    }
    const double h = std::popcount(mask) < 2 ? 0.0 : std::log(gamma) - plogp[mask] / gamma;
    if (h > limit) {
      continue;
    }
    bool better = gamma > best_mass + kMassTieTolerance;
    if (!better && std::abs(gamma - best_mass) <= kMassTieTolerance) {
      const int size = std::popcount(mask);
      const int best_size = std::popcount(best);
      better = size < best_size || (size == best_size && lexicographically_less(mask, best));
    }
    if (better) {
      best = mask;
      best_mass = gamma;
    }
  }

  // Every singleton with positive mass has entropy 0 <= limit, so best != 0.
  EcmmSolution solution;
  for (std::size_t i = 0; i < n; ++i) {
    if ((best >> i) & 1U) {
      solution.subset.push_back(i);
    }
  }
  const SubsetDistribution sub = renormalize(p, solution.subset);
  solution.gamma = sub.gamma;
  solution.entropy = sub.entropy();
  solution.budget = budget;
  return solution;
}

std::vector<double> GapReport::ratios() const {
  std::vector<double> out;
  out.reserve(rows.size());
  for (const GapRow& row : rows) {
    out.push_back(row.ratio);
  }
  return out;
}

GapReport optimality_gap(const std::vector<EcmmInstance>& instances, double entropy_slack) {
  GapReport report;
  report.rows.reserve(instances.size());
  for (const EcmmInstance& inst : instances) {
    TruncationConfig config;
    config.method = Method::top_h;
    config.alpha = inst.alpha;
    config.entropy_slack = entropy_slack;
    const TruncationResult greedy = top_h_truncate(inst.p, config);
    const EcmmSolution optimal = exact_ecmm(inst, entropy_slack);

    GapRow row;
    row.instance_id = inst.id;
    row.n = inst.p.size();
    row.alpha = inst.alpha;
    row.gamma_greedy = greedy.gamma();
    row.gamma_optimal = optimal.gamma;
    row.ratio = row.gamma_greedy / row.gamma_optimal;
    report.rows.push_back(std::move(row));
  }
  if (report.rows.empty()) {
    return report;
  }

  double sum = 0.0;
  double max = report.rows.front().ratio;
  report.min = max;
  for (const GapRow& row : report.rows) {
    sum += row.ratio;
    report.min = std::min(report.min, row.ratio);
    max = std::max(max, row.ratio);
    if (row.ratio < 1.0 - 1e-12) {
      ++report.count_suboptimal;
    }
  }
  const double count = static_cast<double>(report.rows.size());
  // Rounding in the sum can push the mean just outside [min, max].
  report.mean = std::clamp(sum / count, report.min, max);
  double squares = 0.0;
  for (const GapRow& row : report.rows) {
    squares += (row.ratio - report.mean) * (row.ratio - report.mean);
  }
  report.variance = squares / count;
  return report;
}

void write_gap_csv(std::ostream& out, const GapReport& report) {
  out << "instance_id,n,alpha,gamma_greedy,gamma_optimal,ratio\n";
  for (const GapRow& row : report.rows) {
    out << row.instance_id << ',' << row.n << ',' << format_double(row.alpha) << ','
        << format_double(row.gamma_greedy) << ',' << format_double(row.gamma_optimal) << ','
        << format_double(row.ratio) << '\n';
  }
}

}  // namespace toph
