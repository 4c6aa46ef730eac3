// uidobf: command-line driver for the obfuscation and attribution pipeline.

#include <CLI11.hpp>

#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "uidobf/error.hpp"
#include "uidobf/pipeline.hpp"

namespace {

struct Overrides {
  std::string config;
  std::vector<std::string> settings;  // key=value, applied last
  std::optional<std::string> corpus, synonyms, method, scorer, predictor, paraphraser, out, labels;
  std::optional<std::size_t> per_label, k;
  std::optional<std::uint64_t> seed;
  std::optional<double> threshold;
  std::optional<int> jobs;
  std::vector<std::string> metrics, detectors;
  bool underscores = false;
};

uidobf::RunConfig build_config(const Overrides& o) {
  using uidobf::apply_setting;
  uidobf::RunConfig c;
  if (!o.config.empty()) uidobf::apply_config_file(c, o.config);

  auto set = [&](const char* key, const auto& value) {
    if (value) apply_setting(c, key, *value);
  };
  auto set_num = [&](const char* key, const auto& value) {
    if (value) apply_setting(c, key, std::to_string(*value));
  };
  set("corpus", o.corpus);
  set("synonyms", o.synonyms);
  set("labels", o.labels);
  set("method", o.method);
  set("scorer", o.scorer);
  set("predictor", o.predictor);
  set("paraphraser", o.paraphraser);
  set("out", o.out);
  set_num("per_label_count", o.per_label);
  set_num("k", o.k);
  set_num("seed", o.seed);
  set_num("jobs", o.jobs);
  if (o.underscores) apply_setting(c, "underscores_to_spaces", "true");

  if (!o.metrics.empty()) {
    std::string joined;
    for (const auto& m : o.metrics) {
      if (m == "both") joined += "variance,diff_squared,";
      else joined += m + ",";
    }
    apply_setting(c, "metrics", joined);
  }
  if (!o.detectors.empty()) {
    std::string joined;
    for (const auto& d : o.detectors) joined += d + ";";
    apply_setting(c, "detectors", joined);
  }

  for (const auto& kv : o.settings) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw uidobf::ConfigError("--set expects key=value, got '" + kv + "'");
    apply_setting(c, kv.substr(0, eq), kv.substr(eq + 1));
  }
  // The threshold flag applies to whichever method is active once all
  // other settings are in.
  if (o.threshold) {
    (c.method == uidobf::Method::up ? c.thresholds.up : c.thresholds.uws) = *o.threshold;
  }
  uidobf::validate(c);
  return c;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"UID-guided authorship obfuscation and detector evaluation"};
  app.require_subcommand(1);
  app.fallthrough();

  Overrides o;
  app.add_option("--config", o.config, "key=value config file")->check(CLI::ExistingFile);
  app.add_option("--corpus", o.corpus, "JSONL corpus {id,label,text}");
  app.add_option("--synonyms", o.synonyms, "synonym DB (lemma<TAB>syn,syn,...)");
  app.add_option("--labels", o.labels, "comma-separated labels to sample");
  app.add_option("--per-label", o.per_label, "articles sampled per label");
  app.add_option("--method", o.method, "synonym-swap | uws | up");
  app.add_option("--metric", o.metrics, "variance | diff_squared | both (repeatable)");
  app.add_option("--threshold", o.threshold, "similarity threshold for the active method");
  app.add_option("--k", o.k, "variants per article");
  app.add_option("--seed", o.seed, "global seed");
  app.add_option("--scorer", o.scorer, "causal scorer: reference | stdio:CMD | http://HOST:PORT");
  app.add_option("--predictor", o.predictor, "masked predictor: reference | adapter endpoint");
  app.add_option("--paraphraser", o.paraphraser, "paraphraser: reference | adapter endpoint");
  app.add_option("--detector", o.detectors, "[name=]stub[:tau] | [name=]ENDPOINT (repeatable)");
  app.add_option("--out", o.out, "output directory");
  app.add_option("--jobs", o.jobs, "article-level parallelism (0: all cores)");
  app.add_flag("--underscores-to-spaces", o.underscores, "write multi-word synonyms with spaces");
  app.add_option("--set", o.settings, "extra key=value setting (repeatable)");

  const std::map<std::string, std::function<void(const uidobf::RunConfig&)>> stages{
      {"ingest", uidobf::stage::ingest},     {"obfuscate", uidobf::stage::obfuscate},
      {"score", uidobf::stage::score},       {"select", uidobf::stage::select},
      {"classify", uidobf::stage::classify}, {"evaluate", uidobf::stage::evaluate},
      {"report", uidobf::stage::report},     {"run", uidobf::run},
  };
  const std::map<std::string, std::string> help{
      {"ingest", "sample the corpus into the output directory"},
      {"obfuscate", "generate variants (or the single Synonym Swap output)"},
      {"score", "UID scores of originals and variants"},
      {"select", "pick one variant per article and metric"},
      {"classify", "run detectors on originals and selections"},
      {"evaluate", "confusion matrices, metrics, label shift, plot data"},
      {"report", "render SVG charts from evaluation output"},
      {"run", "all stages in order"},
  };
  for (const auto& [name, _] : stages) app.add_subcommand(name, help.at(name));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? uidobf::kExitOk : uidobf::kExitConfig;
  }

  try {
    const auto config = build_config(o);
    for (const auto* sub : app.get_subcommands()) stages.at(sub->get_name())(config);
  } catch (const std::exception& e) {
    std::cerr << "uidobf: " << e.what() << "\n";
    return uidobf::exit_code_for(e);
  }
  return uidobf::kExitOk;
}
