#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "uidobf/lexicon.hpp"
#include "uidobf/obfuscate.hpp"
#include "uidobf/select.hpp"
#include "uidobf/uid.hpp"

namespace uidobf {

struct RunConfig {
  std::filesystem::path corpus_path;
  std::filesystem::path synonyms_path;
  std::size_t per_label_count = 50;
  std::optional<std::uint64_t> sample_seed;  ///< defaults to seed
  std::vector<std::string> labels;           ///< empty: every corpus label

  Method method = Method::uws;
  std::size_t k = 10;
  Thresholds thresholds;
  std::vector<UidMetric> metrics{UidMetric::variance, UidMetric::diff_squared};

  /// "reference" or an adapter endpoint (stdio:... / http://...).
  std::string scorer = "reference";
  std::string predictor = "reference";
  std::string paraphraser = "reference";
  /// "[name=]stub[:tau]" or "[name=]<adapter endpoint>".
  std::vector<std::string> detectors{"stub"};

  std::filesystem::path out_dir = "out";
  std::uint64_t seed = 0;
  int jobs = 1;

  double diversity_penalty = 1.0;
  std::size_t up_min_chars = 8;
  std::optional<double> max_length_ratio;
  bool underscores_to_spaces = false;
  EligibilityCriteria criteria;

  std::optional<double> stub_tau;  ///< none: median mean surprisal of the articles
  double stub_scale = 0.25;
  int retry_attempts = 3;
  int retry_delay_ms = 200;

  double threshold() const noexcept { return thresholds.for_method(method); }
};

/// Applies one "key=value" setting. Throws ConfigError on unknown keys or
/// unparsable values.
void apply_setting(RunConfig& config, std::string_view key, std::string_view value);

/// Flat key=value file; blank lines and '#' comments are ignored.
void apply_config_file(RunConfig& config, const std::filesystem::path& path);
void apply_config_stream(RunConfig& config, std::istream& in);

/// Throws ConfigError when thresholds are outside (0, 1], k < 1, and so on.
void validate(const RunConfig& config);

/// Process exit codes.
enum ExitCode : int {
  kExitOk = 0,
  kExitInternal = 1,
  kExitConfig = 2,
  kExitCorpus = 3,
  kExitUnavailable = 4,
};

/// Maps the active exception to an exit code.
int exit_code_for(const std::exception& e) noexcept;

namespace stage {

// Each stage reads only the files earlier stages left in config.out_dir.
void ingest(const RunConfig& config);
void obfuscate(const RunConfig& config);
void score(const RunConfig& config);
void select(const RunConfig& config);
void classify(const RunConfig& config);
void evaluate(const RunConfig& config);
void report(const RunConfig& config);

}  // namespace stage

/// All stages in order.
void run(const RunConfig& config);

/// File names inside the output directory.
namespace files {
inline constexpr std::string_view articles = "articles.jsonl";
inline constexpr std::string_view variants = "variants.jsonl";
inline constexpr std::string_view scores = "scores.csv";
inline constexpr std::string_view similarity = "similarity.csv";
inline constexpr std::string_view selections = "selections.jsonl";
inline constexpr std::string_view attributions = "attributions.jsonl";
inline constexpr std::string_view report = "report.json";
inline constexpr std::string_view metrics = "metrics.csv";
inline constexpr std::string_view confusion = "confusion.csv";
inline constexpr std::string_view label_shift = "label_shift.csv";
inline constexpr std::string_view manifest = "manifest.json";
inline constexpr std::string_view plots = "plots";
inline constexpr std::string_view charts = "charts";
}  // namespace files

}  // namespace uidobf
