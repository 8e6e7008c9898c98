#include "toph/hardness.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <string>
#include <unordered_set>

#include "toph/errors.hpp"

namespace toph::hardness {

namespace {

namespace mp = boost::multiprecision;

HighFloat to_float(const Rational& r) {
  return HighFloat(mp::numerator(r)) / HighFloat(mp::denominator(r));
}

HighFloat ln(const HighFloat& x) { return mp::log(x); }

HighFloat ln_of(std::size_t k) { return mp::log(HighFloat(static_cast<unsigned long long>(k))); }

// -x ln x for an exact x in (0, 1].
HighFloat neg_x_ln_x(const Rational& x) {
  const HighFloat f = to_float(x);
  return -f * ln(f);
}

BigInt sum_of(const std::vector<BigInt>& values) {
  return std::accumulate(values.begin(), values.end(), BigInt(0));
}

void check_indices(const EcmeInstance& instance, std::span<const std::size_t> heavy) {
  std::unordered_set<std::size_t> seen;
  for (std::size_t i : heavy) {
    if (i >= instance.heavy_count()) {
      throw Error(Errc::index_out_of_range, "heavy index " + std::to_string(i) + " out of range");
    }
    if (!seen.insert(i).second) {
      throw Error(Errc::index_out_of_range, "heavy index " + std::to_string(i) + " repeated");
    }
  }
}

// Exact integer kernels, run on int64 when every quantity fits and on
// BigInt otherwise.
constexpr long long kSmallLimit = 1LL << 50;

bool fits_small(const EcmeInstance& instance) {
  if (instance.heavy_count() > 24 || instance.tau >= kSmallLimit) {
    return false;
  }
  if (instance.booster_count >= BigInt(1) << 62) {
    return false;
  }
  return std::all_of(instance.heavy_weights.begin(), instance.heavy_weights.end(),
                     [](const BigInt& w) { return w < kSmallLimit; });
}

template <class Int>
std::vector<Int> weights_as(const EcmeInstance& instance) {
  std::vector<Int> out;
  out.reserve(instance.heavy_count());
  for (const BigInt& w : instance.heavy_weights) {
    out.push_back(static_cast<Int>(w));
  }
  return out;
}

std::vector<std::size_t> mask_to_indices(std::uint32_t mask) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; mask != 0; ++i, mask >>= 1) {
    if (mask & 1U) {
      out.push_back(i);
    }
  }
  return out;
}

// Double-precision entropy screens out subsets far from the budget; only
// those within kScreenMargin get the exact evaluation.
constexpr double kScreenMargin = 1e-6;

bool within_budget(const EcmeInstance& instance, std::span<const std::size_t> heavy, const BigInt& boosters) {
  const double booster_weight = to_float(instance.constants.w_b).convert_to<double>();
  const double b = boosters.convert_to<double>();
  double total = b * booster_weight;
  for (std::size_t i : heavy) {
    total += instance.heavy_weights[i].convert_to<double>();
  }
  double h = 0.0;
  for (std::size_t i : heavy) {
    const double q = instance.heavy_weights[i].convert_to<double>() / total;
    h -= q * std::log(q);
  }
  if (b > 0.0) {
    const double q = booster_weight / total;
    h -= b * q * std::log(q);
  }
  const double budget = instance.budget.convert_to<double>();
  if (h > budget + kScreenMargin) {
    return false;
  }
  if (h < budget - kScreenMargin) {
    return true;
  }
  return subset_entropy(instance, heavy, boosters) <= instance.budget;
}

template <class Int>
Decision decide_small_kernel(const EcmeInstance& instance) {
  const std::vector<Int> w = weights_as<Int>(instance);
  const Int tau = static_cast<Int>(instance.tau);
  const std::size_t m = w.size();
  const std::size_t K = instance.K;
  Decision decision;
  if (K > m) {
    return decision;
  }
  std::vector<std::size_t> pick(K);
  std::iota(pick.begin(), pick.end(), std::size_t{0});
  for (;;) {
    Int sum = 0;
    for (std::size_t i : pick) {
      sum += w[i];
    }
    ++decision.subsets_examined;
    if (sum == tau && within_budget(instance, pick, 0)) {
      decision.yes = true;
      decision.witness = pick;
      return decision;
    }
    // Advance to the next K-combination in lexicographic order.
    std::size_t pos = K;
    while (pos > 0 && pick[pos - 1] == m - K + pos - 1) {
      --pos;
    }
    if (pos == 0) {
      return decision;
    }
    ++pick[pos - 1];
    for (std::size_t j = pos; j < K; ++j) {
      pick[j] = pick[j - 1] + 1;
    }
  }
}

// Visits every subset of the m heavy items in Gray-code order with its
// exact weight: visit(mask, sum).
template <class Int, class Visit>
void for_each_heavy_subset(const std::vector<Int>& w, Visit&& visit) {
  const std::size_t m = w.size();
  const std::uint64_t count = std::uint64_t{1} << m;
  std::uint32_t mask = 0;
  Int sum = 0;
  for (std::uint64_t step = 1; step < count; ++step) {
    const int bit = std::countr_zero(step);
    mask ^= std::uint32_t{1} << bit;
    if ((mask >> bit) & 1U) {
      sum += w[static_cast<std::size_t>(bit)];
    } else {
      sum -= w[static_cast<std::size_t>(bit)];
    }
    visit(mask, sum);
  }
}

// Canonical witness order for the full search: fewer boosters first, then
// fewer heavy items, then the lexicographically smaller heavy list.
bool witness_less(const BigInt& boosters_a, const std::vector<std::size_t>& a, const BigInt& boosters_b,
                  const std::vector<std::size_t>& b) {
  if (boosters_a != boosters_b) {
    return boosters_a < boosters_b;
  }
  if (a.size() != b.size()) {
    return a.size() < b.size();
  }
  return a < b;
}

template <class Int, class Wide>
Decision decide_full_kernel(const EcmeInstance& instance) {
  const std::vector<Int> w = weights_as<Int>(instance);
  const Int tau = static_cast<Int>(instance.tau);
  const Wide two_b = static_cast<Wide>(static_cast<Int>(instance.booster_count)) * 2;
  const Wide b_max = static_cast<Wide>(static_cast<Int>(instance.booster_count));
  Decision decision;
  for_each_heavy_subset(w, [&](std::uint32_t mask, const Int& sum) {
    ++decision.subsets_examined;
    if (sum > tau) {
      return;
    }
    // Boosters needed: (tau - sum) / w_b = 2B (tau - sum) / tau, if integral.
    const Wide scaled = two_b * static_cast<Wide>(tau - sum);
    if (scaled % static_cast<Wide>(tau) != 0) {
      return;
    }
    const Wide boosters = scaled / static_cast<Wide>(tau);
    if (boosters > b_max) {
      return;
    }
    const BigInt b(static_cast<Int>(boosters));
    std::vector<std::size_t> heavy = mask_to_indices(mask);
    if (decision.yes && !witness_less(b, heavy, decision.witness_boosters, decision.witness)) {
      return;
    }
    if (within_budget(instance, heavy, b)) {
      decision.yes = true;
      decision.witness = std::move(heavy);
      decision.witness_boosters = b;
    }
  });
  return decision;
}

template <class Int>
CardinalityLockCheck cardinality_lock_kernel(const EcmeInstance& instance) {
  const std::vector<Int> w = weights_as<Int>(instance);
  const Int tau = static_cast<Int>(instance.tau);
  CardinalityLockCheck check;
  for_each_heavy_subset(w, [&](std::uint32_t mask, const Int& sum) {
    if (sum != tau) {
      return;
    }
    ++check.exact_mass_subsets;
    if (static_cast<std::size_t>(std::popcount(mask)) != instance.K && check.holds) {
      check.holds = false;
      check.counterexample = mask_to_indices(mask);
    }
  });
  return check;
}

void require_heavy_limit(const EcmeInstance& instance, std::size_t limit, const char* what) {
  if (instance.heavy_count() > limit) {
    throw Error(Errc::too_many_heavy_items, std::string(what) + " supports at most " + std::to_string(limit) +
                                                " heavy items, instance has " +
                                                std::to_string(instance.heavy_count()));
  }
}

}  // namespace

void CcssInstance::validate() const {
  if (weights.empty()) {
    throw Error(Errc::invalid_instance, "CCSS instance has no weights");
  }
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (weights[i] < 1) {
      throw Error(Errc::invalid_instance, "weight " + std::to_string(i) + " must be a positive integer");
    }
  }
  if (tau < 1) {
    throw Error(Errc::invalid_instance, "target tau must be a positive integer");
  }
  if (K < 3 || K > weights.size()) {
    throw Error(Errc::invalid_instance,
                "cardinality K must satisfy 3 <= K <= m (K = " + std::to_string(K) +
                    ", m = " + std::to_string(weights.size()) + ")");
  }
}

bool satisfies_narrow_range(const CcssInstance& instance) {
  const BigInt k(static_cast<unsigned long long>(instance.K));
  return std::all_of(instance.weights.begin(), instance.weights.end(), [&](const BigInt& w) {
    return w * (k + 1) > instance.tau && w * (k - 1) < instance.tau;
  });
}

CcssInstance pad_to_narrow_range(const CcssInstance& instance) {
  instance.validate();
  const BigInt k(static_cast<unsigned long long>(instance.K));
  const BigInt w_max = *std::max_element(instance.weights.begin(), instance.weights.end());
  const BigInt offset = (k + 1) * std::max(instance.tau, w_max);
  CcssInstance padded;
  padded.K = instance.K;
  padded.tau = instance.tau + k * offset;
  padded.weights.reserve(instance.size());
  for (const BigInt& w : instance.weights) {
    padded.weights.push_back(w + offset);
  }
  return padded;
}

Duplication duplicate_to_k20(const CcssInstance& instance) {
  instance.validate();
  if (instance.K >= kMinReductionK) {
    return {1, instance};
  }
  const std::size_t d = (kMinReductionK + instance.K - 1) / instance.K;
  Duplication out;
  out.factor = d;
  out.instance.K = d * instance.K;
  out.instance.tau = instance.tau * static_cast<unsigned long long>(d);
  out.instance.weights.reserve(d * instance.size());
  for (std::size_t copy = 0; copy < d; ++copy) {
    out.instance.weights.insert(out.instance.weights.end(), instance.weights.begin(), instance.weights.end());
  }
  return out;
}

CcssInstance scale_to_k20(const CcssInstance& instance) {
  instance.validate();
  if (instance.K >= kMinReductionK) {
    return instance;
  }
  return pad_to_narrow_range(duplicate_to_k20(instance).instance);
}

CcssInstance prepare(const CcssInstance& instance) { return scale_to_k20(pad_to_narrow_range(instance)); }

Rational EcmeInstance::total_mass() const {
  Rational total = booster_prob * Rational(booster_count);
  for (const Rational& p : heavy_probs) {
    total += p;
  }
  return total;
}

EcmeInstance reduce_to_ecme(const CcssInstance& instance) {
  instance.validate();
  if (instance.K < kMinReductionK) {
    throw Error(Errc::k_too_small, "reduction needs K >= 20, got " + std::to_string(instance.K) +
                                       "; apply scale_to_k20 first");
  }
  if (!satisfies_narrow_range(instance)) {
    throw Error(Errc::narrow_range_violated, "weights must satisfy tau/(K+1) < w_i < tau/(K-1)");
  }

  const std::size_t m = instance.size();
  const std::size_t K = instance.K;
  const BigInt heavy_total = sum_of(instance.weights);
  const HighFloat ln_k = ln_of(K);

  // theta_K: how far the heavy block's own entropy falls below ln m.
  HighFloat heavy_block_entropy = 0;
  for (const BigInt& w : instance.weights) {
    heavy_block_entropy += neg_x_ln_x(Rational(w, heavy_total));
  }
  HighFloat theta = ln_of(m) - heavy_block_entropy;
  if (mp::abs(theta) < kMarginResolution) {
    theta = 0;
  }
  const HighFloat theta_cap = HighFloat(1) / (2 * HighFloat(static_cast<unsigned long long>(K * K)));
  if (theta < 0 || theta >= theta_cap) {
    throw Error(Errc::theta_out_of_bounds,
                "theta_K = " + theta.str(12) + " outside [0, 1/(2K^2)) = [0, " + theta_cap.str(12) + ")");
  }

  ReductionConstants c;
  c.gamma_K = Rational(1, 16 * static_cast<long long>(K * K));
  c.theta_K = theta;
  c.delta_K = 5 * theta / (2 * ln_k);
  c.epsilon_K = (to_float(Rational(384, 10000)) + to_float(c.gamma_K)) / ln_k;
  const HighFloat lambda_real = (to_float(Rational(7333, 10000)) - c.epsilon_K + c.delta_K) /
                                to_float(Rational(133, 1000));
  c.lambda_K = mp::ceil(lambda_real).convert_to<std::int64_t>();
  if (c.lambda_K < 1) {
    throw Error(Errc::theta_out_of_bounds, "lambda_K must be positive");
  }
  // K^lambda is an integer already, so the ceiling is the identity.
  c.B = mp::pow(BigInt(static_cast<unsigned long long>(K)), static_cast<unsigned>(c.lambda_K));
  c.w_b = Rational(instance.tau, 2 * c.B);
  c.W = Rational(heavy_total) + Rational(instance.tau, 2);

  EcmeInstance out;
  out.heavy_weights = instance.weights;
  out.tau = instance.tau;
  out.K = K;
  out.heavy_probs.reserve(m);
  out.heavy_entropy = 0;
  for (const BigInt& w : instance.weights) {
    out.heavy_probs.push_back(Rational(w) / c.W);
    out.heavy_entropy += neg_x_ln_x(out.heavy_probs.back());
  }
  out.booster_count = c.B;
  out.booster_prob = c.w_b / c.W;
  out.beta = Rational(instance.tau) / c.W;
  out.booster_entropy = HighFloat(c.B) * neg_x_ln_x(out.booster_prob);
  out.entropy = out.heavy_entropy + out.booster_entropy;
  out.budget = to_float(Rational(2, 5)) * out.entropy;
  out.constants = std::move(c);
  return out;
}

WindowCheck verify_budget_window(const EcmeInstance& instance) {
  WindowCheck check;
  check.lower_bound = ln_of(instance.K) - to_float(instance.constants.gamma_K);
  check.upper_bound = ln_of(instance.K + 1);
  check.lower_margin = instance.budget - check.lower_bound;
  check.upper_margin = check.upper_bound - instance.budget;
  if (mp::abs(check.lower_margin) < kMarginResolution || mp::abs(check.upper_margin) < kMarginResolution) {
    throw Error(Errc::precision_insufficient, "budget window margin below 1e-60");
  }
  check.holds = check.lower_margin > 0 && check.upper_margin > 0;
  return check;
}

Rational subset_mass(const EcmeInstance& instance, std::span<const std::size_t> heavy, const BigInt& boosters) {
  check_indices(instance, heavy);
  Rational mass = instance.booster_prob * Rational(boosters);
  for (std::size_t i : heavy) {
    mass += instance.heavy_probs[i];
  }
  return mass;
}

HighFloat subset_entropy(const EcmeInstance& instance, std::span<const std::size_t> heavy, const BigInt& boosters) {
  check_indices(instance, heavy);
  if (boosters < 0 || boosters > instance.booster_count) {
    throw Error(Errc::invalid_parameters, "booster count outside [0, B]");
  }
  const Rational booster_weight = instance.constants.w_b;
  Rational total = booster_weight * Rational(boosters);
  for (std::size_t i : heavy) {
    total += Rational(instance.heavy_weights[i]);
  }
  if (total == 0) {
    throw Error(Errc::zero_mass_subset, "subset is empty");
  }
  HighFloat h = 0;
  for (std::size_t i : heavy) {
    h += neg_x_ln_x(Rational(instance.heavy_weights[i]) / total);
  }
  if (boosters > 0) {
    h += HighFloat(boosters) * neg_x_ln_x(booster_weight / total);
  }
  return h;
}

GapCheck verify_entropy_gap(const EcmeInstance& instance, std::span<const std::size_t> heavy_subset) {
  check_indices(instance, heavy_subset);
  if (heavy_subset.size() != instance.K) {
    throw Error(Errc::wrong_cardinality, "subset has " + std::to_string(heavy_subset.size()) +
                                             " items, expected K = " + std::to_string(instance.K));
  }
  BigInt weight = 0;
  for (std::size_t i : heavy_subset) {
    weight += instance.heavy_weights[i];
  }
  if (weight != instance.tau) {
    throw Error(Errc::wrong_mass, "subset weight " + weight.str() + " differs from tau = " + instance.tau.str());
  }
  GapCheck check;
  check.entropy = subset_entropy(instance, heavy_subset);
  check.bound = ln_of(instance.K) - to_float(instance.constants.gamma_K);
  check.holds = check.entropy <= check.bound;
  return check;
}

BoosterCheck verify_booster_blowup(const EcmeInstance& instance, std::span<const std::size_t> heavy_subset,
                                   const BigInt& boosters) {
  if (boosters < 1) {
    throw Error(Errc::invalid_parameters, "booster check needs at least one booster");
  }
  BoosterCheck check;
  check.entropy = subset_entropy(instance, heavy_subset, boosters);
  check.budget = instance.budget;
  check.holds = check.entropy > check.budget;
  return check;
}

CardinalityLockCheck verify_cardinality_lock(const EcmeInstance& instance) {
  require_heavy_limit(instance, kMaxDecideHeavyItems, "cardinality-lock enumeration");
  if (fits_small(instance)) {
    return cardinality_lock_kernel<long long>(instance);
  }
  return cardinality_lock_kernel<BigInt>(instance);
}

Decision decide_ecme_small(const EcmeInstance& instance) {
  require_heavy_limit(instance, kMaxDecideHeavyItems, "decide_ecme_small");
  if (fits_small(instance)) {
    return decide_small_kernel<long long>(instance);
  }
  return decide_small_kernel<BigInt>(instance);
}

Decision decide_ecme_full(const EcmeInstance& instance) {
  require_heavy_limit(instance, kMaxFullDecideHeavyItems, "decide_ecme_full");
  if (fits_small(instance)) {
    return decide_full_kernel<long long, __int128>(instance);
  }
  return decide_full_kernel<BigInt, BigInt>(instance);
}

}  // namespace toph::hardness
