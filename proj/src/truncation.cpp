#include "toph/truncation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "toph/errors.hpp"
#include "toph/rng.hpp"

namespace toph {

namespace {

// Candidates after applying the cap: ids in descending order and their
// probabilities renormalized over the capped set.
struct Candidates {
  std::vector<std::size_t> ids;
  std::vector<double> probs;
  double entropy = 0.0;
};

Candidates capped_candidates(const ProbabilityDistribution& p, std::size_t cap) {
  Candidates c;
  c.ids = descending_order(p);
  if (c.ids.size() > cap) {
    c.ids.resize(cap);
  }
  c.probs.reserve(c.ids.size());
  double mass = 0.0;
  for (std::size_t id : c.ids) {
    c.probs.push_back(p[id]);
    mass += p[id];
  }
  for (double& v : c.probs) {
    v /= mass;
  }
  c.entropy = normalized_entropy(c.probs);
  return c;
}

TruncationResult finish(const ProbabilityDistribution& p, Method method, std::vector<std::size_t> selected,
                        double h_p) {
  TruncationResult result;
  result.method = method;
  result.subset = renormalize(p, selected);
  result.selected = std::move(selected);
  result.h_p = h_p;
  result.h_q = result.subset.entropy();
  return result;
}

// The per-method entry points validate as their own method, whatever
// config.method says.
void require_method(TruncationConfig config, Method method) {
  config.method = method;
  validate(config);
}

}  // namespace

std::string_view method_name(Method method) noexcept {
  switch (method) {
    case Method::top_h: return "top-h";
    case Method::top_k: return "top-k";
    case Method::top_p: return "top-p";
    case Method::min_p: return "min-p";
    case Method::eta: return "eta";
  }
  return "unknown";
}

std::optional<Method> parse_method(std::string_view name) noexcept {
  for (Method m : {Method::top_h, Method::top_k, Method::top_p, Method::min_p, Method::eta}) {
    if (method_name(m) == name) {
      return m;
    }
  }
  return std::nullopt;
}

void validate(const TruncationConfig& config) {
  if (config.candidate_cap == 0) {
    throw Error(Errc::invalid_candidate_cap, "candidate cap must be >= 1");
  }
  if (!(config.entropy_slack >= 0.0)) {
    throw Error(Errc::invalid_parameters, "entropy slack must be >= 0");
  }
  switch (config.method) {
    case Method::top_h:
      if (!(config.alpha > 0.0 && config.alpha < 1.0)) {
        throw Error(Errc::alpha_out_of_range,
                    "alpha must lie strictly inside (0, 1), got " + std::to_string(config.alpha));
      }
      break;
    case Method::top_k:
      if (config.k == 0) {
        throw Error(Errc::zero_k, "k must be >= 1");
      }
      break;
    case Method::top_p:
      if (!(config.p_nucleus > 0.0 && config.p_nucleus <= 1.0)) {
        throw Error(Errc::nucleus_out_of_range,
                    "p_nucleus must lie in (0, 1], got " + std::to_string(config.p_nucleus));
      }
      break;
    case Method::min_p:
      if (!(config.p_base > 0.0 && config.p_base < 1.0)) {
        throw Error(Errc::p_base_out_of_range, "p_base must lie in (0, 1), got " + std::to_string(config.p_base));
      }
      break;
    case Method::eta:
      if (!(config.eta > 0.0 && config.eta < 1.0)) {
        throw Error(Errc::eta_out_of_range, "eta must lie in (0, 1), got " + std::to_string(config.eta));
      }
      break;
  }
}

std::vector<std::size_t> descending_order(const ProbabilityDistribution& p) {
  std::vector<std::size_t> order;
  order.reserve(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] > 0.0) {
      order.push_back(i);
    }
  }
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return p[a] > p[b]; });
  return order;
}

TruncationResult top_h_truncate(const ProbabilityDistribution& p, const TruncationConfig& config) {
  require_method(config, Method::top_h);
  const Candidates c = capped_candidates(p, config.candidate_cap);
  const double threshold = config.alpha * c.entropy;

  std::vector<std::size_t> selected;
  std::vector<TraceStep> trace;
  EntropyAccumulator acc;
  for (std::size_t k = 0; k < c.ids.size(); ++k) {
    const double pk = c.probs[k];
    acc.push(pk);
    const double h = config.entropy_update == EntropyUpdate::incremental
                         ? acc.entropy()
                         : normalized_entropy(std::span<const double>(c.probs).first(k + 1));
    const bool over = h > threshold + config.entropy_slack;
    if (config.record_trace) {
      trace.push_back({c.ids[k], pk, acc.gamma(), h, !over});
    }
    if (over) {
      acc.pop(pk);
      break;
    }
    selected.push_back(c.ids[k]);
  }

  TruncationResult result = finish(p, Method::top_h, std::move(selected), c.entropy);
  result.threshold = threshold;
  result.trace = std::move(trace);
  return result;
}

TruncationResult top_k_truncate(const ProbabilityDistribution& p, const TruncationConfig& config) {
  require_method(config, Method::top_k);
  Candidates c = capped_candidates(p, config.candidate_cap);
  if (c.ids.size() > config.k) {
    c.ids.resize(config.k);
  }
  return finish(p, Method::top_k, std::move(c.ids), c.entropy);
}

TruncationResult top_p_truncate(const ProbabilityDistribution& p, const TruncationConfig& config) {
  require_method(config, Method::top_p);
  const Candidates c = capped_candidates(p, config.candidate_cap);
  // Inclusive test; the 1e-12 absorbs summation-order noise at exact hits.
  std::vector<std::size_t> selected;
  double cumulative = 0.0;
  for (std::size_t k = 0; k < c.ids.size(); ++k) {
    selected.push_back(c.ids[k]);
    cumulative += c.probs[k];
    if (cumulative >= config.p_nucleus - 1e-12) {
      break;
    }
  }
  return finish(p, Method::top_p, std::move(selected), c.entropy);
}

TruncationResult min_p_truncate(const ProbabilityDistribution& p, const TruncationConfig& config) {
  require_method(config, Method::min_p);
  const Candidates c = capped_candidates(p, config.candidate_cap);
  const double cutoff = config.p_base * p[c.ids.front()];
  std::vector<std::size_t> selected{c.ids.front()};
  for (std::size_t k = 1; k < c.ids.size() && p[c.ids[k]] >= cutoff; ++k) {
    selected.push_back(c.ids[k]);
  }
  return finish(p, Method::min_p, std::move(selected), c.entropy);
}

TruncationResult eta_truncate(const ProbabilityDistribution& p, const TruncationConfig& config) {
  require_method(config, Method::eta);
  const Candidates c = capped_candidates(p, config.candidate_cap);
  const double epsilon = std::min(config.eta, std::sqrt(config.eta) * std::exp(-c.entropy));
  std::vector<std::size_t> selected{c.ids.front()};
  for (std::size_t k = 1; k < c.ids.size() && c.probs[k] >= epsilon; ++k) {
    selected.push_back(c.ids[k]);
  }
  return finish(p, Method::eta, std::move(selected), c.entropy);
}

TruncationResult truncate(const ProbabilityDistribution& p, const TruncationConfig& config) {
  switch (config.method) {
    case Method::top_h: return top_h_truncate(p, config);
    case Method::top_k: return top_k_truncate(p, config);
    case Method::top_p: return top_p_truncate(p, config);
    case Method::min_p: return min_p_truncate(p, config);
    case Method::eta: return eta_truncate(p, config);
  }
  throw Error(Errc::invalid_parameters, "unknown truncation method");
}

std::size_t sample_token(const TruncationResult& result, std::uint64_t seed, std::uint64_t draw_index) {
  const double u = CounterRng::to_unit(CounterRng::at(seed, 0, draw_index));
  double cumulative = 0.0;
  for (std::size_t k = 0; k < result.subset.q.size(); ++k) {
    cumulative += result.subset.q[k];
    if (u < cumulative) {
      return result.selected[k];
    }
  }
  return result.selected.back();
}

}  // namespace toph
