#include "toph/synthgen.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"

#include "toph/errors.hpp"
#include "toph/rng.hpp"
#include "toph/text.hpp"

namespace toph {

namespace {

using nlohmann::json;

std::vector<double> normalized(std::vector<double> weights) {
  double total = 0.0;
  for (double w : weights) {
    total += w;
  }
  for (double& w : weights) {
    w /= total;
  }
  return weights;
}

std::vector<double> dirichlet_draw(CounterRng& rng, std::size_t n, double concentration) {
  std::vector<double> draws(n);
  double total = 0.0;
  for (double& d : draws) {
    d = rng.next_gamma(concentration);
    total += d;
  }
  if (!(total > 0.0)) {
    // Every gamma variate underflowed (tiny concentration); the limit is a point mass.
    std::fill(draws.begin(), draws.end(), 0.0);
    draws[rng.next_below(n)] = 1.0;
    return draws;
  }
  return normalized(std::move(draws));
}

[[noreturn]] void malformed(std::size_t line, const std::string& what) {
  throw Error(Errc::malformed_record, "line " + std::to_string(line) + ": " + what);
}

std::vector<double> number_array(const json& value, std::size_t line, const char* field) {
  if (!value.is_array() || value.empty()) {
    malformed(line, std::string("\"") + field + "\" must be a non-empty array of numbers");
  }
  std::vector<double> out;
  out.reserve(value.size());
  for (const json& v : value) {
    if (!v.is_number()) {
      malformed(line, std::string("\"") + field + "\" contains a non-numeric entry");
    }
    out.push_back(v.get<double>());
  }
  return out;
}

}  // namespace

std::string_view family_name(Family family) noexcept {
  switch (family) {
    case Family::zipf: return "zipf";
    case Family::dirichlet: return "dirichlet";
    case Family::gaussian_logits: return "gaussian";
    case Family::one_hot_mix: return "one-hot-mix";
    case Family::uniform: return "uniform";
  }
  return "unknown";
}

std::optional<Family> parse_family(std::string_view name) noexcept {
  for (Family f : {Family::zipf, Family::dirichlet, Family::gaussian_logits, Family::one_hot_mix, Family::uniform}) {
    if (family_name(f) == name) {
      return f;
    }
  }
  return std::nullopt;
}

void validate(const GeneratorSpec& spec) {
  auto fail = [](const std::string& what) { throw Error(Errc::invalid_parameters, what); };
  if (spec.n == 0) {
    fail("vocabulary size n must be >= 1");
  }
  switch (spec.family) {
    case Family::zipf:
      if (!(spec.zipf_exponent > 0.0) || !std::isfinite(spec.zipf_exponent)) fail("zipf exponent s must be > 0");
      break;
    case Family::dirichlet:
      if (!(spec.concentration > 0.0) || !std::isfinite(spec.concentration)) fail("dirichlet concentration must be > 0");
      break;
    case Family::gaussian_logits:
      if (!(spec.sigma > 0.0) || !std::isfinite(spec.sigma)) fail("gaussian sigma must be > 0");
      if (!(spec.temperature > 0.0) || !std::isfinite(spec.temperature)) fail("temperature must be > 0");
      break;
    case Family::one_hot_mix:
      if (!(spec.peak_mass > 0.0 && spec.peak_mass <= 1.0)) fail("peak mass must lie in (0, 1]");
      break;
    case Family::uniform:
      break;
  }
}

ProbabilityDistribution generate_one(const GeneratorSpec& spec, std::uint64_t index) {
  validate(spec);
  CounterRng rng(spec.seed, index);
  const std::size_t n = spec.n;
  switch (spec.family) {
    case Family::zipf: {
      std::vector<double> w(n);
      for (std::size_t i = 0; i < n; ++i) {
        w[i] = std::pow(static_cast<double>(i + 1), -spec.zipf_exponent);
      }
      if (spec.shuffle) {
        for (std::size_t i = n; i > 1; --i) {
          std::swap(w[i - 1], w[rng.next_below(i)]);
        }
      }
      return ProbabilityDistribution::from_probs(normalized(std::move(w)));
    }
    case Family::dirichlet:
      return ProbabilityDistribution::from_probs(dirichlet_draw(rng, n, spec.concentration));
    case Family::gaussian_logits: {
      std::vector<double> logits(n);
      for (double& l : logits) {
        l = spec.sigma * rng.next_normal();
      }
      return ProbabilityDistribution::from_logits(logits, spec.temperature);
    }
    case Family::one_hot_mix: {
      const std::size_t peak = rng.next_below(n);
      if (spec.peak_mass == 1.0) {
        std::vector<double> w(n, 0.0);
        w[peak] = 1.0;
        return ProbabilityDistribution::from_probs(w);
      }
      std::vector<double> w = dirichlet_draw(rng, n, 1.0);
      for (double& v : w) {
        v *= 1.0 - spec.peak_mass;
      }
      w[peak] += spec.peak_mass;
      return ProbabilityDistribution::from_probs(w);
    }
    case Family::uniform:
      return ProbabilityDistribution::uniform(n);
  }
  throw Error(Errc::invalid_parameters, "unknown family");
}

std::vector<ProbabilityDistribution> generate(const GeneratorSpec& spec, std::size_t count) {
  validate(spec);
  std::vector<ProbabilityDistribution> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    out.push_back(generate_one(spec, i));
  }
  return out;
}

std::vector<DatasetRecord> read_dataset(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw Error(Errc::io_failure, "cannot open dataset " + path.string());
  }
  enum class Kind { unknown, probs, logits };
  Kind file_kind = Kind::unknown;
  std::vector<DatasetRecord> records;
  std::string text;
  std::size_t line = 0;
  while (std::getline(in, text)) {
    ++line;
    if (text.find_first_not_of(" \t\r") == std::string::npos) {
      continue;
    }
    json record;
    try {
      record = json::parse(text);
    } catch (const json::parse_error& e) {
      malformed(line, std::string("invalid JSON (") + e.what() + ")");
    }
    if (!record.is_object()) {
      malformed(line, "record must be a JSON object");
    }
    if (!record.contains("id") || !record["id"].is_string()) {
      malformed(line, "missing string field \"id\"");
    }
    const bool has_probs = record.contains("probs");
    const bool has_logits = record.contains("logits");
    if (has_probs == has_logits) {
      malformed(line, "record needs exactly one of \"probs\" or \"logits\"");
    }
    const Kind kind = has_probs ? Kind::probs : Kind::logits;
    if (file_kind == Kind::unknown) {
      file_kind = kind;
    } else if (kind != file_kind) {
      throw Error(Errc::mixed_schema, "line " + std::to_string(line) + ": " +
                                          (has_probs ? "probs" : "logits") +
                                          " record in a file that started with the other schema");
    }
    try {
      if (has_probs) {
        records.push_back({record["id"].get<std::string>(),
                           ProbabilityDistribution::from_probs(number_array(record["probs"], line, "probs"))});
      } else {
        double temperature = 1.0;
        if (record.contains("temperature")) {
          if (!record["temperature"].is_number()) {
            malformed(line, "\"temperature\" must be a number");
          }
          temperature = record["temperature"].get<double>();
        }
        records.push_back(
            {record["id"].get<std::string>(),
             ProbabilityDistribution::from_logits(number_array(record["logits"], line, "logits"), temperature)});
      }
    } catch (const Error& e) {
      if (e.code() == Errc::malformed_record) {
        throw;
      }
      malformed(line, e.what());
    }
  }
  return records;
}

void write_dataset(const std::filesystem::path& path, const std::vector<DatasetRecord>& records) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw Error(Errc::io_failure, "cannot write dataset " + path.string());
  }
  for (const DatasetRecord& r : records) {
    out << "{\"schema_version\":1,\"id\":" << json(r.id).dump() << ",\"probs\":[";
    const auto probs = r.dist.probs();
    for (std::size_t i = 0; i < probs.size(); ++i) {
      if (i != 0) {
        out << ',';
      }
      out << format_double(probs[i]);
    }
    out << "]}\n";
  }
  if (!out) {
    throw Error(Errc::io_failure, "write failed for " + path.string());
  }
}

}  // namespace toph
