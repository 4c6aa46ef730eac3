#include "unit/support.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <sys/wait.h>
#include <unistd.h>

#include "uidobf/uid.hpp"

namespace testing {

fs::path data_path(const std::string& name) { return fs::path(UIDOBF_TEST_DATA) / name; }

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

std::map<std::string, std::string> read_tree(const fs::path& root) {
  std::map<std::string, std::string> out;
  for (const auto& e : fs::recursive_directory_iterator(root)) {
    if (e.is_regular_file()) out[fs::relative(e.path(), root).generic_string()] = read_file(e.path());
  }
  return out;
}

TempDir::TempDir(const std::string& tag) {
  static int counter = 0;
  path_ = fs::temp_directory_path() /
          ("uidobf-" + tag + "-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
  fs::remove_all(path_);
  fs::create_directories(path_);
}

TempDir::~TempDir() {
  std::error_code ec;
  fs::remove_all(path_, ec);
}

std::vector<uidobf::Article> fixture_articles(const std::string& name) {
  return uidobf::read_corpus(data_path(name)).articles;
}

std::vector<std::string> texts_of(const std::vector<uidobf::Article>& articles) {
  std::vector<std::string> out;
  for (const auto& a : articles) out.push_back(a.text);
  return out;
}

int run_command(const std::string& command) {
  const int status = std::system(command.c_str());
  if (status == -1) return -1;
  return WIFEXITED(status) ? WEXITSTATUS(status) : 128 + WTERMSIG(status);
}

double RankedScorer::word_logprob(std::string_view, std::string_view word) const {
  const auto it = logprobs_.find(std::string(word));
  return it == logprobs_.end() ? -20.0 : it->second;
}

uidobf::AlternateSet random_alternate_set(std::mt19937_64& rng, std::size_t k) {
  std::uniform_int_distribution<int> sim_step(0, 20);
  std::uniform_int_distribution<int> uid_step(0, 40);
  uidobf::AlternateSet set;
  set.original = {"a" + std::to_string(rng() % 1000), uidobf::AuthorLabel::human(), "original"};
  set.original_uid = {uid_step(rng) * 0.25, uid_step(rng) * 0.25, 10};
  for (std::size_t i = 0; i < k; ++i) {
    set.variants.push_back({set.original.id, set.original.label, "variant " + std::to_string(i)});
    // Similarities on a 0.005 grid in [0.9, 1.0].
    set.similarity.push_back(0.9 + 0.005 * sim_step(rng));
    set.uid.push_back({uid_step(rng) * 0.25, uid_step(rng) * 0.25, 10});
  }
  return set;
}

std::optional<std::size_t> oracle_select(const uidobf::AlternateSet& set, uidobf::UidMetric metric,
                                         double threshold) {
  std::optional<std::size_t> best;
  double best_delta = -1.0;
  const double base = uidobf::metric_value(set.original_uid, metric);
  for (std::size_t i = 0; i < set.k(); ++i) {
    if (!(set.similarity[i] >= threshold)) continue;
    const double delta = std::abs(uidobf::metric_value(set.uid[i], metric) - base);
    if (delta > best_delta) {
      best_delta = delta;
      best = i;
    }
  }
  return best;
}

std::string excerpt_text() { return read_file(data_path("excerpt.txt")); }

}  // namespace testing
