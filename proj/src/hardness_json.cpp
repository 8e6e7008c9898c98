#include "toph/hardness_json.hpp"

#include <limits>
#include <string>

#include "toph/errors.hpp"

namespace toph::hardness {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

[[noreturn]] void bad(const std::string& what) { throw Error(Errc::invalid_instance, what); }

const json& field(const json& object, const char* name) {
  if (!object.is_object() || !object.contains(name)) {
    bad(std::string("missing field \"") + name + "\"");
  }
  return object.at(name);
}

// Integers may be written as decimal strings (any size) or plain JSON integers.
BigInt parse_integer(const json& value, const char* name) {
  if (value.is_number_integer()) {
    return BigInt(value.get<long long>());
  }
  if (!value.is_string()) {
    bad(std::string("\"") + name + "\" must be an integer or a decimal string");
  }
  const std::string text = value.get<std::string>();
  const std::size_t digits_from = (!text.empty() && text[0] == '-') ? 1 : 0;
  if (text.size() == digits_from || text.find_first_not_of("0123456789", digits_from) != std::string::npos) {
    bad(std::string("\"") + name + "\" is not a decimal integer: " + text);
  }
  return BigInt(text);
}

std::size_t parse_count(const json& value, const char* name) {
  if (!value.is_number_unsigned()) {
    bad(std::string("\"") + name + "\" must be a non-negative integer");
  }
  return value.get<std::size_t>();
}

ordered_json rational_json(const Rational& r) {
  return {{"num", boost::multiprecision::numerator(r).str()}, {"den", boost::multiprecision::denominator(r).str()}};
}

Rational parse_rational(const json& value, const char* name) {
  const BigInt num = parse_integer(field(value, "num"), name);
  const BigInt den = parse_integer(field(value, "den"), name);
  if (den == 0) {
    bad(std::string("\"") + name + "\" has a zero denominator");
  }
  return Rational(num, den);
}

HighFloat parse_real(const json& value, const char* name) {
  if (value.is_number()) {
    return HighFloat(value.get<double>());
  }
  if (!value.is_string()) {
    bad(std::string("\"") + name + "\" must be a decimal string");
  }
  try {
    return HighFloat(value.get<std::string>());
  } catch (const std::exception&) {
    bad(std::string("\"") + name + "\" is not a decimal number");
  }
}

std::vector<BigInt> parse_integers(const json& value, const char* name) {
  if (!value.is_array()) {
    bad(std::string("\"") + name + "\" must be an array");
  }
  std::vector<BigInt> out;
  out.reserve(value.size());
  for (const json& v : value) {
    out.push_back(parse_integer(v, name));
  }
  return out;
}

void check_header(const json& value, const char* kind) {
  if (!value.is_object()) {
    bad("instance must be a JSON object");
  }
  const json& version = field(value, "schema_version");
  if (!version.is_number_integer() || version.get<long long>() != kHardnessSchemaVersion) {
    bad("unsupported schema_version");
  }
  if (instance_kind(value) != kind) {
    bad(std::string("expected kind \"") + kind + "\"");
  }
}

}  // namespace

std::string to_string(const HighFloat& value) {
  return value.str(std::numeric_limits<HighFloat>::max_digits10, std::ios_base::scientific);
}

ordered_json to_json(const CcssInstance& instance) {
  ordered_json weights = ordered_json::array();
  for (const BigInt& w : instance.weights) {
    weights.push_back(w.str());
  }
  return {{"schema_version", kHardnessSchemaVersion},
          {"kind", "ccss"},
          {"weights", std::move(weights)},
          {"tau", instance.tau.str()},
          {"K", instance.K}};
}

ordered_json to_json(const EcmeInstance& instance) {
  ordered_json weights = ordered_json::array();
  for (const BigInt& w : instance.heavy_weights) {
    weights.push_back(w.str());
  }
  ordered_json probs = ordered_json::array();
  for (const Rational& p : instance.heavy_probs) {
    probs.push_back(rational_json(p));
  }
  const ReductionConstants& c = instance.constants;
  ordered_json constants = {{"gamma_K", rational_json(c.gamma_K)},
                            {"theta_K", to_string(c.theta_K)},
                            {"delta_K", to_string(c.delta_K)},
                            {"epsilon_K", to_string(c.epsilon_K)},
                            {"lambda_K", c.lambda_K},
                            {"B", c.B.str()},
                            {"w_b", rational_json(c.w_b)},
                            {"W", rational_json(c.W)}};
  return {{"schema_version", kHardnessSchemaVersion},
          {"kind", "ecme"},
          {"K", instance.K},
          {"tau", instance.tau.str()},
          {"heavy_weights", std::move(weights)},
          {"heavy_probs", std::move(probs)},
          {"booster_count", instance.booster_count.str()},
          {"booster_prob", rational_json(instance.booster_prob)},
          {"beta", rational_json(instance.beta)},
          {"heavy_entropy", to_string(instance.heavy_entropy)},
          {"booster_entropy", to_string(instance.booster_entropy)},
          {"entropy", to_string(instance.entropy)},
          {"budget", to_string(instance.budget)},
          {"constants", std::move(constants)}};
}

std::string instance_kind(const json& value) {
  const json& kind = field(value, "kind");
  if (!kind.is_string() || (kind != "ccss" && kind != "ecme")) {
    bad("\"kind\" must be \"ccss\" or \"ecme\"");
  }
  return kind.get<std::string>();
}

CcssInstance ccss_from_json(const json& value) {
  check_header(value, "ccss");
  CcssInstance out;
  out.weights = parse_integers(field(value, "weights"), "weights");
  out.tau = parse_integer(field(value, "tau"), "tau");
  out.K = parse_count(field(value, "K"), "K");
  out.validate();
  return out;
}

EcmeInstance ecme_from_json(const json& value) {
  check_header(value, "ecme");
  EcmeInstance out;
  out.K = parse_count(field(value, "K"), "K");
  out.tau = parse_integer(field(value, "tau"), "tau");
  out.heavy_weights = parse_integers(field(value, "heavy_weights"), "heavy_weights");
  const json& probs = field(value, "heavy_probs");
  if (!probs.is_array() || probs.size() != out.heavy_weights.size()) {
    bad("\"heavy_probs\" must be an array as long as \"heavy_weights\"");
  }
  for (const json& p : probs) {
    out.heavy_probs.push_back(parse_rational(p, "heavy_probs"));
  }
  out.booster_count = parse_integer(field(value, "booster_count"), "booster_count");
  out.booster_prob = parse_rational(field(value, "booster_prob"), "booster_prob");
  out.beta = parse_rational(field(value, "beta"), "beta");
  out.heavy_entropy = parse_real(field(value, "heavy_entropy"), "heavy_entropy");
  out.booster_entropy = parse_real(field(value, "booster_entropy"), "booster_entropy");
  out.entropy = parse_real(field(value, "entropy"), "entropy");
  out.budget = parse_real(field(value, "budget"), "budget");

  const json& c = field(value, "constants");
  ReductionConstants& k = out.constants;
  k.gamma_K = parse_rational(field(c, "gamma_K"), "gamma_K");
  k.theta_K = parse_real(field(c, "theta_K"), "theta_K");
  k.delta_K = parse_real(field(c, "delta_K"), "delta_K");
  k.epsilon_K = parse_real(field(c, "epsilon_K"), "epsilon_K");
  const json& lambda = field(c, "lambda_K");
  if (!lambda.is_number_integer()) {
    bad("\"lambda_K\" must be an integer");
  }
  k.lambda_K = lambda.get<std::int64_t>();
  k.B = parse_integer(field(c, "B"), "B");
  k.w_b = parse_rational(field(c, "w_b"), "w_b");
  k.W = parse_rational(field(c, "W"), "W");

  if (out.K == 0 || out.K > out.heavy_weights.size() || out.tau < 1 || out.booster_count < 0) {
    bad("ECME instance fields out of range");
  }
  return out;
}

}  // namespace toph::hardness
