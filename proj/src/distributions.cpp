#include "toph/distributions.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>
#include <unordered_set>

#include "toph/errors.hpp"

namespace toph {

namespace {

double sum_of(std::span<const double> values) {
  // Kahan summation; vocabularies can reach 10^5 entries.
  double sum = 0.0;
  double carry = 0.0;
  for (double v : values) {
    const double y = v - carry;
    const double t = sum + y;
    carry = (t - sum) - y;
    sum = t;
  }
  return sum;
}

}  // namespace

ProbabilityDistribution ProbabilityDistribution::from_probs(std::span<const double> values) {
  if (values.empty()) {
    throw Error(Errc::empty_input, "probability vector is empty");
  }
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!std::isfinite(values[i])) {
      throw Error(Errc::non_finite_input, "probability at index " + std::to_string(i) + " is not finite");
    }
    if (values[i] < 0.0) {
      throw Error(Errc::negative_probability, "probability at index " + std::to_string(i) + " is negative");
    }
  }
  const double total = sum_of(values);
  if (std::abs(total - 1.0) > kInputNormalizationTolerance) {
    throw Error(Errc::normalization_out_of_tolerance,
                "probabilities sum to " + std::to_string(total) + ", outside 1 +/- 1e-6");
  }
  std::vector<double> probs(values.begin(), values.end());
  for (double& v : probs) {
    v /= total;
  }
  return ProbabilityDistribution(std::move(probs));
}

ProbabilityDistribution ProbabilityDistribution::from_logits(std::span<const double> logits, double temperature) {
  if (logits.empty()) {
    throw Error(Errc::empty_input, "logit vector is empty");
  }
  if (!(temperature > 0.0) || !std::isfinite(temperature)) {
    throw Error(Errc::non_positive_temperature, "temperature must be a positive finite number");
  }
  double max_logit = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < logits.size(); ++i) {
    if (std::isnan(logits[i]) || logits[i] == std::numeric_limits<double>::infinity()) {
      throw Error(Errc::non_finite_input, "logit at index " + std::to_string(i) + " is NaN or +inf");
    }
    max_logit = std::max(max_logit, logits[i]);
  }
  if (max_logit == -std::numeric_limits<double>::infinity()) {
    throw Error(Errc::non_finite_input, "every logit is -inf");
  }
  std::vector<double> probs(logits.size());
  for (std::size_t i = 0; i < logits.size(); ++i) {
    probs[i] = std::exp((logits[i] - max_logit) / temperature);
  }
  const double total = sum_of(probs);
  for (double& v : probs) {
    v /= total;
  }
  return ProbabilityDistribution(std::move(probs));
}

ProbabilityDistribution ProbabilityDistribution::uniform(std::size_t n) {
  if (n == 0) {
    throw Error(Errc::empty_input, "uniform distribution needs n >= 1");
  }
  return ProbabilityDistribution(std::vector<double>(n, 1.0 / static_cast<double>(n)));
}

ProbabilityDistribution make_distribution(std::span<const double> values, InputMode mode, double temperature) {
  if (mode == InputMode::logits) {
    return ProbabilityDistribution::from_logits(values, temperature);
  }
  return ProbabilityDistribution::from_probs(values);
}

double normalized_entropy(std::span<const double> weights) {
  const double total = sum_of(weights);
  if (!(total > 0.0)) {
    return 0.0;
  }
  std::size_t positive = 0;
  double h = 0.0;
  for (double w : weights) {
    if (w > 0.0) {
      const double r = w / total;
      h -= r * std::log(r);
      ++positive;
    }
  }
  if (positive < 2) {
    return 0.0;
  }
  return std::max(h, 0.0);
}

double entropy(const ProbabilityDistribution& p) {
  double h = 0.0;
  for (double v : p.probs()) {
    if (v > 0.0) {
      h -= v * std::log(v);
    }
  }
  return std::max(h, 0.0);
}

SubsetDistribution renormalize(const ProbabilityDistribution& p, std::span<const std::size_t> indices) {
  if (indices.empty()) {
    throw Error(Errc::empty_subset, "subset is empty");
  }
  std::unordered_set<std::size_t> seen;
  seen.reserve(indices.size());
  SubsetDistribution out;
  out.parent_indices.assign(indices.begin(), indices.end());
  out.q.reserve(indices.size());
  for (std::size_t idx : indices) {
    if (idx >= p.size()) {
      throw Error(Errc::index_out_of_range,
                  "index " + std::to_string(idx) + " outside vocabulary of size " + std::to_string(p.size()));
    }
    if (!seen.insert(idx).second) {
      throw Error(Errc::index_out_of_range, "index " + std::to_string(idx) + " appears twice");
    }
    out.q.push_back(p[idx]);
  }
  out.gamma = sum_of(out.q);
  if (!(out.gamma > 0.0)) {
    throw Error(Errc::zero_mass_subset, "subset has zero probability mass");
  }
  for (double& v : out.q) {
    v /= out.gamma;
  }
  return out;
}

double jsd_direct(const ProbabilityDistribution& p, const SubsetDistribution& q) {
  if (q.parent_indices.size() != q.q.size()) {
    throw Error(Errc::dimension_mismatch, "subset index and probability lists differ in length");
  }
  std::vector<double> dense_q(p.size(), 0.0);
  for (std::size_t k = 0; k < q.parent_indices.size(); ++k) {
    if (q.parent_indices[k] >= p.size()) {
      throw Error(Errc::dimension_mismatch, "subset refers to token " + std::to_string(q.parent_indices[k]) +
                                                " outside vocabulary of size " + std::to_string(p.size()));
    }
    dense_q[q.parent_indices[k]] = q.q[k];
  }
  double kl_p = 0.0;
  double kl_q = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double pi = p[i];
    const double qi = dense_q[i];
    const double mi = 0.5 * (pi + qi);
    if (pi > 0.0) {
      assert(mi > 0.0);
      kl_p += pi * std::log(pi / mi);
    }
    if (qi > 0.0) {
      kl_q += qi * std::log(qi / mi);
    }
  }
  return 0.5 * kl_p + 0.5 * kl_q;
}

double jsd_closed_form(double gamma) {
  if (!(gamma > 0.0 && gamma <= 1.0)) {
    throw Error(Errc::gamma_out_of_range, "gamma must lie in (0, 1], got " + std::to_string(gamma));
  }
  return std::log(2.0) + 0.5 * (gamma * std::log(gamma) - (1.0 + gamma) * std::log1p(gamma));
}

void EntropyAccumulator::push(double p_j) {
  if (!(p_j > 0.0)) {
    throw Error(Errc::non_positive_probability, "accumulated probability must be > 0");
  }
  if (gamma_ + p_j > 1.0 + 1e-9) {
    throw Error(Errc::mass_overflow, "accumulated mass would exceed 1");
  }
  gamma_ += p_j;
  h_ += p_j * std::log(p_j);
  ++count_;
}

void EntropyAccumulator::pop(double p_j) {
  assert(count_ > 0);
  gamma_ -= p_j;
  h_ -= p_j * std::log(p_j);
  --count_;
  if (count_ == 0) {
    gamma_ = 0.0;
    h_ = 0.0;
  }
}

double EntropyAccumulator::entropy() const {
  if (count_ < 2) {
    return 0.0;
  }
  return std::log(gamma_) - h_ / gamma_;
}

}  // namespace toph
