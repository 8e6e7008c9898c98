#include "toph/cli.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "toph/ecmm_oracle.hpp"
#include "toph/hardness.hpp"
#include "toph/hardness_json.hpp"
#include "toph/synthgen.hpp"
#include "toph/text.hpp"
#include "toph/truncation.hpp"

namespace toph::cli {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

// Raised for flag combinations CLI11 cannot express; maps to exit 1.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Options {
  std::string method = "top-h";
  TruncationConfig truncation;
  std::string input;
  std::string output;
  std::uint64_t seed = 0;
  std::size_t num_samples = 1;

  std::string family = "zipf";
  GeneratorSpec generator;
  std::size_t trials = 1000;
  std::string alphas = "0.1,0.2,0.3,0.4,0.5,0.6,0.7,0.8,0.9";

  std::string weights;
  std::string tau;
  std::size_t K = 0;
  std::string mode = "small";

  std::string manifest;
};

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw Error(Errc::io_failure, "cannot write " + path);
  }
  out << content;
  if (!out) {
    throw Error(Errc::io_failure, "write failed for " + path);
  }
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(Errc::io_failure, "cannot open " + path);
  }
  std::ostringstream text;
  text << in.rdbuf();
  return text.str();
}

// Writes to `path`, or to `out` when no path was given.
void emit(const std::string& path, const std::string& content, std::ostream& out) {
  if (path.empty()) {
    out << content;
  } else {
    write_file(path, content);
  }
}

void require_input(const Options& o) {
  if (o.input.empty()) {
    throw UsageError("--input is required");
  }
}

void require_output(const Options& o) {
  if (o.output.empty()) {
    throw UsageError("--output is required");
  }
}

TruncationConfig truncation_config(const Options& o) {
  TruncationConfig config = o.truncation;
  config.method = *parse_method(o.method);
  validate(config);
  return config;
}

GeneratorSpec generator_spec(const Options& o) {
  GeneratorSpec spec = o.generator;
  spec.family = *parse_family(o.family);
  spec.seed = o.seed;
  validate(spec);
  return spec;
}

std::vector<DatasetRecord> generated_records(const GeneratorSpec& spec, std::size_t count) {
  std::vector<DatasetRecord> records;
  records.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    records.push_back({std::string(family_name(spec.family)) + "-" + std::to_string(i), generate_one(spec, i)});
  }
  return records;
}

// Dataset from --input, or generated from the family flags.
std::vector<DatasetRecord> load_or_generate(const Options& o) {
  if (!o.input.empty()) {
    return read_dataset(o.input);
  }
  return generated_records(generator_spec(o), o.trials);
}

ordered_json indices_json(const std::vector<std::size_t>& indices) {
  ordered_json out = ordered_json::array();
  for (std::size_t i : indices) {
    out.push_back(i);
  }
  return out;
}

int cmd_truncate(const Options& o, std::ostream& out, bool with_trace) {
  TruncationConfig config = truncation_config(o);
  config.record_trace = with_trace;
  require_input(o);
  std::string text;
  for (const DatasetRecord& record : read_dataset(o.input)) {
    const TruncationResult r = truncate(record.dist, config);
    ordered_json line = {{"schema_version", kSchemaVersion},
                         {"id", record.id},
                         {"method", method_name(r.method)},
                         {"selected", indices_json(r.selected)},
                         {"gamma", r.gamma()},
                         {"h_p", r.h_p},
                         {"h_q", r.h_q},
                         {"threshold", r.threshold ? ordered_json(*r.threshold) : ordered_json(nullptr)}};
    if (with_trace) {
      ordered_json steps = ordered_json::array();
      for (const TraceStep& s : r.trace) {
        steps.push_back({{"index", s.index},
                         {"p", s.p},
                         {"gamma", s.gamma},
                         {"entropy", s.entropy},
                         {"accepted", s.accepted}});
      }
      line["trace"] = std::move(steps);
    }
    text += line.dump() + "\n";
  }
  emit(o.output, text, out);
  return exit_ok;
}

int cmd_sample(const Options& o, std::ostream& out) {
  const TruncationConfig config = truncation_config(o);
  require_input(o);
  if (o.num_samples == 0) {
    throw UsageError("--num-samples must be >= 1");
  }
  std::string text;
  const std::vector<DatasetRecord> records = read_dataset(o.input);
  for (std::size_t r = 0; r < records.size(); ++r) {
    const TruncationResult result = truncate(records[r].dist, config);
    ordered_json tokens = ordered_json::array();
    for (std::size_t j = 0; j < o.num_samples; ++j) {
      tokens.push_back(sample_token(result, o.seed, r * o.num_samples + j));
    }
    ordered_json line = {{"schema_version", kSchemaVersion},
                         {"id", records[r].id},
                         {"method", method_name(result.method)},
                         {"seed", o.seed},
                         {"tokens", std::move(tokens)}};
    text += line.dump() + "\n";
  }
  emit(o.output, text, out);
  return exit_ok;
}

int cmd_gap(const Options& o, std::ostream& out) {
  require_output(o);
  TruncationConfig check = o.truncation;
  check.method = Method::top_h;
  validate(check);
  if (o.input.empty() && o.generator.n > kMaxEnumerationSize) {
    throw UsageError("gap enumerates all 2^n subsets, so --n must be <= " + std::to_string(kMaxEnumerationSize) +
                     " (got " + std::to_string(o.generator.n) + ")");
  }
  std::vector<EcmmInstance> instances;
  for (DatasetRecord& record : load_or_generate(o)) {
    instances.push_back({std::move(record.id), std::move(record.dist), o.truncation.alpha});
  }
  const GapReport report = optimality_gap(instances, o.truncation.entropy_slack);

  std::ostringstream csv;
  write_gap_csv(csv, report);
  write_file(o.output, csv.str());

  ordered_json summary = {{"schema_version", kSchemaVersion},
                          {"count", report.rows.size()},
                          {"mean", report.mean},
                          {"variance", report.variance},
                          {"min", report.min},
                          {"count_suboptimal", report.count_suboptimal}};
  write_file(o.output + ".summary.json", summary.dump(2) + "\n");
  out << "count=" << report.rows.size() << " mean=" << format_double(report.mean)
      << " variance=" << format_double(report.variance) << " min=" << format_double(report.min)
      << " count_suboptimal=" << report.count_suboptimal << "\n";
  return exit_ok;
}

std::vector<double> parse_alpha_grid(const std::string& text) {
  std::vector<double> grid;
  std::stringstream items(text);
  std::string item;
  while (std::getline(items, item, ',')) {
    try {
      std::size_t used = 0;
      grid.push_back(std::stod(item, &used));
      if (item.find_first_not_of(" \t", used) != std::string::npos) {
        throw std::invalid_argument(item);
      }
    } catch (const std::exception&) {
      throw UsageError("--alphas: '" + item + "' is not a number");
    }
  }
  if (grid.empty()) {
    throw UsageError("--alphas must list at least one value");
  }
  return grid;
}

int cmd_sweep(const Options& o, std::ostream& out) {
  require_output(o);
  const std::vector<double> grid = parse_alpha_grid(o.alphas);
  TruncationConfig config = o.truncation;
  config.method = Method::top_h;
  for (double alpha : grid) {
    config.alpha = alpha;
    validate(config);
  }
  const std::vector<DatasetRecord> records = load_or_generate(o);

  std::string csv = "alpha,count,mean_selected,mean_gamma,mean_entropy_ratio\n";
  for (double alpha : grid) {
    config.alpha = alpha;
    double selected = 0.0;
    double gamma = 0.0;
    double ratio = 0.0;
    std::size_t ratio_count = 0;
    for (const DatasetRecord& record : records) {
      const TruncationResult r = top_h_truncate(record.dist, config);
      selected += static_cast<double>(r.selected.size());
      gamma += r.gamma();
      // H(q)/H(p) is undefined for zero-entropy inputs; they are left out.
      if (r.h_p > 0.0) {
        ratio += r.h_q / r.h_p;
        ++ratio_count;
      }
    }
    const double count = static_cast<double>(records.size());
    csv += format_double(alpha) + "," + std::to_string(records.size()) + "," +
           format_double(records.empty() ? 0.0 : selected / count) + "," +
           format_double(records.empty() ? 0.0 : gamma / count) + "," +
           format_double(ratio_count == 0 ? 0.0 : ratio / static_cast<double>(ratio_count)) + "\n";
  }
  write_file(o.output, csv);
  out << "wrote " << grid.size() << " rows over " << records.size() << " distributions to " << o.output << "\n";
  return exit_ok;
}

int cmd_generate(const Options& o, std::ostream& out) {
  require_output(o);
  const std::vector<DatasetRecord> records = generated_records(generator_spec(o), o.trials);
  write_dataset(o.output, records);
  out << "wrote " << records.size() << " distributions to " << o.output << "\n";
  return exit_ok;
}

std::vector<hardness::BigInt> parse_weight_list(const std::string& text) {
  std::vector<hardness::BigInt> out;
  std::stringstream items(text);
  std::string item;
  while (std::getline(items, item, ',')) {
    if (item.empty() || item.find_first_not_of("0123456789") != std::string::npos) {
      throw UsageError("--weights: '" + item + "' is not a non-negative integer");
    }
    out.emplace_back(item);
  }
  return out;
}

json parse_instance_file(const std::string& path) {
  const std::string text = read_file(path);
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(Errc::invalid_instance, path + ": invalid JSON (" + e.what() + ")");
  }
}

// CCSS from --input or from --weights/--tau/--K.
hardness::CcssInstance load_ccss(const Options& o) {
  if (!o.input.empty()) {
    return hardness::ccss_from_json(parse_instance_file(o.input));
  }
  if (o.weights.empty() || o.tau.empty() || o.K == 0) {
    throw UsageError("give --input or all of --weights, --tau and --K");
  }
  hardness::CcssInstance instance;
  instance.weights = parse_weight_list(o.weights);
  if (o.tau.find_first_not_of("0123456789") != std::string::npos) {
    throw UsageError("--tau must be a non-negative integer");
  }
  instance.tau = hardness::BigInt(o.tau);
  instance.K = o.K;
  instance.validate();
  return instance;
}

// ECME instance from a CCSS source (run through the full pipeline) or from a
// stored ECME file.
hardness::EcmeInstance load_ecme(const Options& o) {
  if (!o.input.empty()) {
    const json value = parse_instance_file(o.input);
    if (hardness::instance_kind(value) == "ecme") {
      return hardness::ecme_from_json(value);
    }
    return hardness::reduce_to_ecme(hardness::prepare(hardness::ccss_from_json(value)));
  }
  return hardness::reduce_to_ecme(hardness::prepare(load_ccss(o)));
}

int cmd_reduce(const Options& o, std::ostream& out) {
  const hardness::CcssInstance source = load_ccss(o);
  const hardness::EcmeInstance ecme = hardness::reduce_to_ecme(hardness::prepare(source));
  ordered_json doc = hardness::to_json(ecme);
  doc["source"] = hardness::to_json(source);
  emit(o.output, doc.dump(2) + "\n", out);
  if (!o.output.empty()) {
    out << "K=" << ecme.K << " m=" << ecme.heavy_count() << " lambda_K=" << ecme.constants.lambda_K
        << " B=" << ecme.booster_count.str() << " budget=" << hardness::to_string(ecme.budget) << "\n";
  }
  return exit_ok;
}

ordered_json decision_json(const hardness::Decision& d) {
  return {{"yes", d.yes},
          {"witness", indices_json(d.witness)},
          {"witness_boosters", d.witness_boosters.str()},
          {"subsets_examined", d.subsets_examined}};
}

int cmd_verify(const Options& o, std::ostream& out) {
  const hardness::EcmeInstance ecme = load_ecme(o);
  const hardness::CcssInstance heavy{ecme.heavy_weights, ecme.tau, ecme.K};

  const bool mass_conserved = ecme.total_mass() == 1;
  const bool narrow = hardness::satisfies_narrow_range(heavy);
  const hardness::WindowCheck window = hardness::verify_budget_window(ecme);

  ordered_json report = {{"schema_version", kSchemaVersion},
                         {"mass_conserved", mass_conserved},
                         {"narrow_range", narrow},
                         {"window",
                          {{"holds", window.holds},
                           {"lower_bound", hardness::to_string(window.lower_bound)},
                           {"upper_bound", hardness::to_string(window.upper_bound)},
                           {"budget", hardness::to_string(ecme.budget)},
                           {"lower_margin", hardness::to_string(window.lower_margin)},
                           {"upper_margin", hardness::to_string(window.upper_margin)}}}};
  out << "mass_conserved: " << (mass_conserved ? "true" : "false") << "\n";
  out << "narrow_range: " << (narrow ? "true" : "false") << "\n";
  out << "window holds: " << (window.holds ? "true" : "false")
      << " lower_margin=" << window.lower_margin.str(12) << " upper_margin=" << window.upper_margin.str(12)
      << "\n";

  // Booster spot check: K-1 heavy items plus ceil(2B/K) boosters.
  if (ecme.K >= 2 && ecme.booster_count >= 1) {
    std::vector<std::size_t> heavy_part(ecme.K - 1);
    std::iota(heavy_part.begin(), heavy_part.end(), std::size_t{0});
    const hardness::BigInt k(static_cast<unsigned long long>(ecme.K));
    hardness::BigInt boosters = (2 * ecme.booster_count + k - 1) / k;
    boosters = std::min(boosters, ecme.booster_count);
    const hardness::BoosterCheck booster = hardness::verify_booster_blowup(ecme, heavy_part, boosters);
    report["booster_spot_check"] = {{"holds", booster.holds},
                                    {"boosters", boosters.str()},
                                    {"entropy", hardness::to_string(booster.entropy)}};
    out << "booster spot check (" << boosters.str() << " boosters): " << (booster.holds ? "true" : "false")
        << "\n";
  }

  if (ecme.heavy_count() <= hardness::kMaxDecideHeavyItems) {
    const hardness::CardinalityLockCheck lock = hardness::verify_cardinality_lock(ecme);
    report["cardinality_lock"] = {{"holds", lock.holds},
                                  {"exact_mass_subsets", lock.exact_mass_subsets},
                                  {"counterexample", indices_json(lock.counterexample)}};
    out << "cardinality lock: " << (lock.holds ? "true" : "false") << " (" << lock.exact_mass_subsets
        << " booster-free subsets of mass beta)\n";

    const hardness::Decision decision = hardness::decide_ecme_small(ecme);
    if (decision.yes) {
      const hardness::GapCheck gap = hardness::verify_entropy_gap(ecme, decision.witness);
      report["entropy_gap"] = {{"holds", gap.holds},
                               {"witness", indices_json(decision.witness)},
                               {"entropy", hardness::to_string(gap.entropy)},
                               {"bound", hardness::to_string(gap.bound)}};
      out << "entropy gap on witness: " << (gap.holds ? "true" : "false") << "\n";
    }
  } else {
    out << "cardinality lock and entropy gap skipped: m = " << ecme.heavy_count() << " > "
        << hardness::kMaxDecideHeavyItems << "\n";
  }
  if (!o.output.empty()) {
    write_file(o.output, report.dump(2) + "\n");
  }
  return exit_ok;
}

int cmd_decide(const Options& o, std::ostream& out) {
  const hardness::EcmeInstance ecme = load_ecme(o);
  const hardness::Decision decision =
      o.mode == "full" ? hardness::decide_ecme_full(ecme) : hardness::decide_ecme_small(ecme);
  if (decision.yes) {
    out << "YES witness=[";
    for (std::size_t i = 0; i < decision.witness.size(); ++i) {
      out << (i == 0 ? "" : ",") << decision.witness[i];
    }
    out << "] boosters=" << decision.witness_boosters.str() << "\n";
  } else {
    out << "NO\n";
  }
  if (!o.output.empty()) {
    ordered_json doc = {{"schema_version", kSchemaVersion}, {"mode", o.mode}};
    doc.update(decision_json(decision));
    write_file(o.output, doc.dump(2) + "\n");
  }
  return exit_ok;
}

ordered_json resolved_config(const CLI::App& command) {
  ordered_json config = ordered_json::object();
  for (const CLI::Option* opt : command.get_options()) {
    const std::string name = opt->get_single_name();
    if (name == "help" || name.empty()) {
      continue;
    }
    if (opt->count() > 0) {
      const std::vector<std::string>& results = opt->results();
      config[name] = results.size() == 1 ? ordered_json(results.front()) : ordered_json(results);
    } else {
      config[name] = opt->get_default_str();
    }
  }
  return config;
}

void write_manifest(const std::vector<std::string>& args, const CLI::App& command, const Options& o,
                    double seconds) {
  ordered_json manifest = {{"schema_version", kSchemaVersion},
                           {"tool_version", kToolVersion},
                           {"command", command.get_name()},
                           {"argv", args},
                           {"config", resolved_config(command)},
                           {"seed", o.seed},
                           {"input", o.input},
                           {"output", o.output},
                           {"duration_seconds", seconds}};
  write_file(o.output + ".manifest.json", manifest.dump(2) + "\n");
}

std::vector<std::string> replay_args(const Options& o) {
  if (o.manifest.empty()) {
    throw UsageError("--manifest is required");
  }
  json manifest;
  try {
    manifest = json::parse(read_file(o.manifest));
  } catch (const json::exception& e) {
    throw Error(Errc::malformed_record, o.manifest + ": " + e.what());
  }
  if (!manifest.contains("argv") || !manifest["argv"].is_array()) {
    throw Error(Errc::malformed_record, o.manifest + ": missing \"argv\" array");
  }
  std::vector<std::string> args;
  try {
    args = manifest["argv"].get<std::vector<std::string>>();
  } catch (const json::exception& e) {
    throw Error(Errc::malformed_record, o.manifest + ": \"argv\" must hold strings");
  }
  if (args.empty() || args.front() == "replay") {
    throw Error(Errc::malformed_record, o.manifest + ": argv does not name a replayable command");
  }
  if (!o.output.empty()) {
    bool replaced = false;
    for (std::size_t i = 0; i < args.size(); ++i) {
      if (args[i] == "--output" && i + 1 < args.size()) {
        args[i + 1] = o.output;
        replaced = true;
      } else if (args[i].rfind("--output=", 0) == 0) {
        args[i] = "--output=" + o.output;
        replaced = true;
      }
    }
    if (!replaced) {
      args.push_back("--output");
      args.push_back(o.output);
    }
  }
  return args;
}

void add_io(CLI::App* cmd, Options& o) {
  cmd->add_option("--input", o.input, "Input file");
  cmd->add_option("--output", o.output, "Output file");
}

void add_truncation(CLI::App* cmd, Options& o) {
  cmd->add_option("--method", o.method, "Truncation method")
      ->check(CLI::IsMember({"top-h", "top-k", "top-p", "min-p", "eta"}));
  cmd->add_option("--alpha", o.truncation.alpha, "top-H entropy coefficient in (0, 1)");
  cmd->add_option("--k", o.truncation.k, "top-k count");
  cmd->add_option("--p-nucleus", o.truncation.p_nucleus, "top-p cumulative mass in (0, 1]");
  cmd->add_option("--p-base", o.truncation.p_base, "min-p base in (0, 1)");
  cmd->add_option("--eta", o.truncation.eta, "eta-sampling parameter in (0, 1)");
  cmd->add_option("--candidate-cap", o.truncation.candidate_cap, "Tokens kept before truncation");
  cmd->add_option("--entropy-slack", o.truncation.entropy_slack, "Tolerance added to the top-H threshold");
}

void add_generator(CLI::App* cmd, Options& o) {
  cmd->add_option("--family", o.family, "Distribution family")
      ->check(CLI::IsMember({"zipf", "dirichlet", "gaussian", "one-hot-mix", "uniform"}));
  cmd->add_option("--n", o.generator.n, "Vocabulary size");
  cmd->add_option("--s", o.generator.zipf_exponent, "Zipf exponent");
  cmd->add_flag("--shuffle", o.generator.shuffle, "Permute Zipf ranks");
  cmd->add_option("--concentration", o.generator.concentration, "Dirichlet concentration");
  cmd->add_option("--sigma", o.generator.sigma, "Gaussian logit scale");
  cmd->add_option("--temperature", o.generator.temperature, "Softmax temperature for gaussian logits");
  cmd->add_option("--peak-mass", o.generator.peak_mass, "one-hot-mix peak mass in (0, 1]");
  cmd->add_option("--trials", o.trials, "Number of distributions");
  cmd->add_option("--seed", o.seed, "Generator seed");
}

void add_ccss(CLI::App* cmd, Options& o) {
  cmd->add_option("--weights", o.weights, "Comma-separated CCSS weights");
  cmd->add_option("--tau", o.tau, "CCSS target");
  cmd->add_option("--K", o.K, "CCSS cardinality");
}

}  // namespace

int exit_code_for(Errc code) noexcept {
  switch (code) {
    case Errc::alpha_out_of_range:
    case Errc::zero_k:
    case Errc::nucleus_out_of_range:
    case Errc::p_base_out_of_range:
    case Errc::eta_out_of_range:
    case Errc::invalid_candidate_cap:
    case Errc::invalid_parameters:
    case Errc::non_positive_temperature:
      return exit_usage;
    case Errc::vocabulary_too_large:
    case Errc::narrow_range_violated:
    case Errc::theta_out_of_bounds:
    case Errc::k_too_small:
    case Errc::precision_insufficient:
    case Errc::wrong_cardinality:
    case Errc::wrong_mass:
    case Errc::too_many_heavy_items:
      return exit_precondition;
    default:
      return exit_bad_input;
  }
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app("Entropy-constrained truncation sampling toolkit", "toph");
  app.option_defaults()->always_capture_default();
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kToolVersion));

  CLI::App* truncate_cmd = app.add_subcommand("truncate", "Truncate every distribution in a dataset");
  add_io(truncate_cmd, o);
  add_truncation(truncate_cmd, o);
  bool trace = false;
  truncate_cmd->add_flag("--trace", trace, "Include per-step top-H records");

  CLI::App* sample_cmd = app.add_subcommand("sample", "Sample tokens from truncated distributions");
  add_io(sample_cmd, o);
  add_truncation(sample_cmd, o);
  sample_cmd->add_option("--seed", o.seed, "Sampling seed");
  sample_cmd->add_option("--num-samples", o.num_samples, "Tokens drawn per distribution");

  CLI::App* gap_cmd = app.add_subcommand("gap", "Greedy versus exact optimality gap");
  add_io(gap_cmd, o);
  add_generator(gap_cmd, o);
  gap_cmd->add_option("--alpha", o.truncation.alpha, "Entropy coefficient in (0, 1)");
  gap_cmd->add_option("--entropy-slack", o.truncation.entropy_slack, "Feasibility tolerance");

  CLI::App* sweep_cmd = app.add_subcommand("sweep", "top-H statistics over a grid of alpha values");
  add_io(sweep_cmd, o);
  add_generator(sweep_cmd, o);
  sweep_cmd->add_option("--alphas", o.alphas, "Comma-separated alpha grid");
  sweep_cmd->add_option("--candidate-cap", o.truncation.candidate_cap, "Tokens kept before truncation");
  sweep_cmd->add_option("--entropy-slack", o.truncation.entropy_slack, "Tolerance added to the threshold");

  CLI::App* generate_cmd = app.add_subcommand("generate", "Write a synthetic dataset");
  generate_cmd->add_option("--output", o.output, "Output .jsonl file");
  add_generator(generate_cmd, o);

  CLI::App* reduce_cmd = app.add_subcommand("reduce", "Pad, scale and reduce a CCSS instance to ECME");
  add_io(reduce_cmd, o);
  add_ccss(reduce_cmd, o);

  CLI::App* verify_cmd = app.add_subcommand("verify", "Check the structural properties of a reduced instance");
  add_io(verify_cmd, o);
  add_ccss(verify_cmd, o);

  CLI::App* decide_cmd = app.add_subcommand("decide", "Decide a reduced instance by enumeration");
  add_io(decide_cmd, o);
  add_ccss(decide_cmd, o);
  decide_cmd->add_option("--mode", o.mode, "small: K-subsets only; full: every heavy subset with boosters")
      ->check(CLI::IsMember({"small", "full"}));

  CLI::App* replay_cmd = app.add_subcommand("replay", "Rerun the command recorded in a manifest");
  replay_cmd->add_option("--manifest", o.manifest, "Manifest written next to an output");
  replay_cmd->add_option("--output", o.output, "Write to this path instead of the recorded one");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? exit_ok : exit_usage;
  }

  const auto started = std::chrono::steady_clock::now();
  CLI::App* command = app.get_subcommands().front();
  try {
    int code = exit_ok;
    if (command == truncate_cmd) {
      code = cmd_truncate(o, out, trace);
    } else if (command == sample_cmd) {
      code = cmd_sample(o, out);
    } else if (command == gap_cmd) {
      code = cmd_gap(o, out);
    } else if (command == sweep_cmd) {
      code = cmd_sweep(o, out);
    } else if (command == generate_cmd) {
      code = cmd_generate(o, out);
    } else if (command == reduce_cmd) {
      code = cmd_reduce(o, out);
    } else if (command == verify_cmd) {
      code = cmd_verify(o, out);
    } else if (command == decide_cmd) {
      code = cmd_decide(o, out);
    } else if (command == replay_cmd) {
      return run(replay_args(o), out, err);
    }
    if (code == exit_ok && !o.output.empty()) {
      const double seconds =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
      write_manifest(args, *command, o, seconds);
    }
    return code;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return exit_usage;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return exit_code_for(e.code());
  }
}

}  // namespace toph::cli
