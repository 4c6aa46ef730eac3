#pragma once

// Shared fixtures and independent oracles for the unit and acceptance tests.

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "uidobf/corpus.hpp"
#include "uidobf/obfuscate.hpp"
#include "uidobf/scorer.hpp"
#include "uidobf/select.hpp"

namespace testing {

namespace fs = std::filesystem;

fs::path data_path(const std::string& name);
std::string read_file(const fs::path& path);

/// Relative path -> file contents for every regular file under root.
std::map<std::string, std::string> read_tree(const fs::path& root);

/// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag);
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const fs::path& path() const noexcept { return path_; }
  fs::path operator/(const std::string& name) const { return path_ / name; }

 private:
  fs::path path_;
};

/// All articles of a fixture corpus in file order.
std::vector<uidobf::Article> fixture_articles(const std::string& name);
std::vector<std::string> texts_of(const std::vector<uidobf::Article>& articles);

/// Exit status of a shell command.
int run_command(const std::string& command);

/// Causal scorer with a fixed word ranking: word_logprob returns the listed
/// value (default -20) regardless of prefix; surprisals are delegated.
class RankedScorer final : public uidobf::CausalScorer {
 public:
  RankedScorer(const uidobf::CausalScorer& base, std::map<std::string, double> logprobs)
      : base_(&base), logprobs_(std::move(logprobs)) {}

  uidobf::SurprisalSequence surprisals(std::string_view text) const override {
    return base_->surprisals(text);
  }
  double word_logprob(std::string_view, std::string_view word) const override;
  bool concurrent() const noexcept override { return true; }

 private:
  const uidobf::CausalScorer* base_;
  std::map<std::string, double> logprobs_;
};

/// Random scored AlternateSet with k variants. Similarities and UID scores
/// are drawn from small grids so that ties and threshold hits are common.
uidobf::AlternateSet random_alternate_set(std::mt19937_64& rng, std::size_t k);

/// Exhaustive selection: keep variants at or above threshold, maximize
/// |delta|, lowest index on ties.
std::optional<std::size_t> oracle_select(const uidobf::AlternateSet& set, uidobf::UidMetric metric,
                                         double threshold);

/// The news excerpt fixture and its synonym file.
std::string excerpt_text();

}  // namespace testing
