#include "uidobf/pipeline.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <set>

#include "uidobf/adapter.hpp"
#include "uidobf/attribute.hpp"
#include "uidobf/error.hpp"
#include "uidobf/evaluate.hpp"
#include "uidobf/io.hpp"
#include "uidobf/kernels.hpp"
#include "uidobf/report.hpp"
#include "uidobf/similarity.hpp"
#include "uidobf/text.hpp"

namespace uidobf {
namespace {

using nlohmann::json;
namespace fs = std::filesystem;

// ---------------------------------------------------------------------------
// Settings

template <class T>
T parse_number(std::string_view key, std::string_view value) {
  T out{};
  const auto v = trim(value);
  const auto res = std::from_chars(v.data(), v.data() + v.size(), out);
  if (res.ec != std::errc{} || res.ptr != v.data() + v.size()) {
    throw ConfigError("invalid value '" + std::string(value) + "' for " + std::string(key));
  }
  return out;
}

bool parse_bool(std::string_view key, std::string_view value) {
  const auto v = trim(value);
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw ConfigError("invalid boolean '" + std::string(value) + "' for " + std::string(key));
}

std::vector<std::string> parse_list(std::string_view value, char delim) {
  std::vector<std::string> out;
  for (const auto& f : split(value, delim)) {
    const auto t = trim(f);
    if (!t.empty()) out.emplace_back(t);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Manifest: one terminal entry per ingested article.

struct ManifestEntry {
  std::string stage;
  std::string status = "ok";
  std::string error;
};

class Manifest {
 public:
  explicit Manifest(fs::path path) : path_(std::move(path)) {}

  static Manifest load(const fs::path& out_dir) {
    Manifest m(out_dir / files::manifest);
    for (const auto& e : io::read_json(m.path_)) {
      ManifestEntry entry{e.at("stage").get<std::string>(), e.at("status").get<std::string>(),
                          e.value("error", std::string())};
      m.entries_[e.at("article_id").get<std::string>()] = std::move(entry);
    }
    return m;
  }

  void add(const std::string& id, std::string_view stage) { entries_[id] = {std::string(stage), "ok", {}}; }

  bool ok(const std::string& id) const {
    const auto it = entries_.find(id);
    return it != entries_.end() && it->second.status == "ok";
  }

  void mark_ok(const std::string& id, std::string_view stage) {
    auto& e = entries_.at(id);
    if (e.status == "ok") e.stage = stage;
  }

  void mark_failed(const std::string& id, std::string_view stage, std::string error) {
    auto& e = entries_.at(id);
    if (e.status != "ok") return;  // keep the first failure
    e.stage = stage;
    e.status = "failed";
    e.error = std::move(error);
  }

  std::size_t failures() const {
    return static_cast<std::size_t>(std::count_if(entries_.begin(), entries_.end(),
                                                  [](const auto& kv) { return kv.second.status != "ok"; }));
  }
  std::size_t size() const noexcept { return entries_.size(); }

  void save() const {
    json arr = json::array();
    for (const auto& [id, e] : entries_) {
      json rec = {{"article_id", id}, {"stage", e.stage}, {"status", e.status}};
      if (!e.error.empty()) rec["error"] = e.error;
      arr.push_back(std::move(rec));
    }
    io::write_json(path_, arr);
  }

 private:
  fs::path path_;
  std::map<std::string, ManifestEntry> entries_;
};

void summarize(const Manifest& m, std::string_view stage) {
  if (const auto n = m.failures(); n > 0) {
    std::cerr << "uidobf " << stage << ": " << n << " of " << m.size()
              << " articles failed (see " << files::manifest << ")\n";
  }
}

// ---------------------------------------------------------------------------
// Stage files

fs::path out_file(const RunConfig& c, std::string_view name) { return c.out_dir / name; }

std::vector<Article> read_articles(const RunConfig& c) {
  std::vector<Article> out;
  for (const auto& r : io::read_jsonl(out_file(c, files::articles))) {
    out.push_back({r.at("id").get<std::string>(), AuthorLabel::parse(r.at("label").get<std::string>()),
                   r.at("text").get<std::string>()});
  }
  return out;
}

/// article id -> variant texts in index order
std::map<std::string, std::vector<std::string>> read_variants(const RunConfig& c) {
  std::map<std::string, std::vector<std::string>> out;
  for (const auto& r : io::read_jsonl(out_file(c, files::variants))) {
    auto& list = out[r.at("article_id").get<std::string>()];
    const auto idx = r.at("variant_index").get<std::size_t>();
    if (idx != list.size()) throw Error("variants file out of order for " + r.at("article_id").get<std::string>());
    list.push_back(r.at("text").get<std::string>());
  }
  return out;
}

struct ScoreRows {
  UIDScores original;
  std::vector<UIDScores> variants;
};

std::map<std::string, ScoreRows> read_scores(const RunConfig& c) {
  std::map<std::string, ScoreRows> out;
  const auto rows = io::read_csv(out_file(c, files::scores));
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto& r = rows[i];
    if (r.size() != 5) throw LoadError("scores.csv: expected 5 columns", i + 1);
    const UIDScores s{parse_number<double>("variance", r[2]), parse_number<double>("diff_squared", r[3]),
                      parse_number<std::size_t>("token_count", r[4])};
    auto& entry = out[r[0]];
    if (r[1] == "-1") entry.original = s;
    else entry.variants.push_back(s);
  }
  return out;
}

std::map<std::string, std::vector<double>> read_similarity(const RunConfig& c) {
  std::map<std::string, std::vector<double>> out;
  const auto rows = io::read_csv(out_file(c, files::similarity));
  for (std::size_t i = 1; i < rows.size(); ++i) {
    if (rows[i].size() != 3) throw LoadError("similarity.csv: expected 3 columns", i + 1);
    out[rows[i][0]].push_back(parse_number<double>("similarity", rows[i][2]));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Models

bool is_reference(std::string_view spec) { return spec.empty() || spec == "reference"; }

struct DetectorSpec {
  std::string name;
  std::string endpoint;
};

DetectorSpec parse_detector_spec(std::string_view spec) {
  const auto eq = spec.find('=');
  const auto colon = spec.find(':');
  const auto space = spec.find(' ');
  if (eq != std::string_view::npos && (colon == std::string_view::npos || eq < colon) &&
      (space == std::string_view::npos || eq < space)) {
    return {std::string(trim(spec.substr(0, eq))), std::string(trim(spec.substr(eq + 1)))};
  }
  const std::string endpoint(trim(spec));
  if (endpoint == "stub" || endpoint.starts_with("stub:")) return {"stub", endpoint};
  return {endpoint, endpoint};
}

class Models {
 public:
  Models(const RunConfig& config, const std::vector<Article>& articles) : config_(config) {
    for (const auto& a : articles) texts_.push_back(a.text);
  }

  const SynonymDB& synonyms() {
    if (!synonyms_loaded_ && !config_.synonyms_path.empty()) {
      synonyms_ = load_synonyms(config_.synonyms_path);
      std::cerr << "uidobf: " << synonyms_.size() << " synonym entries from " << config_.synonyms_path.string()
                << "\n";
    }
    synonyms_loaded_ = true;
    return synonyms_;
  }

  const BigramScorer& reference_scorer() {
    if (!bigram_) bigram_ = std::make_unique<BigramScorer>(BigramScorer::fit(texts_));
    return *bigram_;
  }

  const CausalScorer& scorer() {
    if (is_reference(config_.scorer)) return reference_scorer();
    if (!scorer_) {
      scorer_ = std::make_unique<adapter::AdapterCausalScorer>(adapter::make_transport(config_.scorer));
      causal_surprisals("probe", *scorer_);
    }
    return *scorer_;
  }

  const MaskedPredictor& predictor() {
    if (is_reference(config_.predictor)) {
      if (!slot_) slot_ = std::make_unique<SlotFrequencyPredictor>(SlotFrequencyPredictor::fit(texts_));
      return *slot_;
    }
    if (!predictor_) {
      predictor_ = std::make_unique<adapter::AdapterMaskedPredictor>(adapter::make_transport(config_.predictor));
      const std::vector<std::string> probe{"probe"};
      masked_top_k(probe, 0, 1, *predictor_);
    }
    return *predictor_;
  }

  const Paraphraser& paraphraser() {
    if (is_reference(config_.paraphraser)) {
      if (!stub_) stub_ = std::make_unique<StubParaphraser>(synonyms());
      return *stub_;
    }
    if (!paraphraser_) {
      paraphraser_ = std::make_unique<adapter::AdapterParaphraser>(adapter::make_transport(config_.paraphraser));
      diverse_paraphrases("probe", 1, 0.0, *paraphraser_);
    }
    return *paraphraser_;
  }

  std::vector<std::unique_ptr<DetectorClient>> detectors() {
    std::vector<std::unique_ptr<DetectorClient>> out;
    std::set<std::string> names;
    for (const auto& raw : config_.detectors) {
      const auto spec = parse_detector_spec(raw);
      if (!names.insert(spec.name).second) throw ConfigError("duplicate detector name '" + spec.name + "'");
      if (spec.endpoint == "stub" || spec.endpoint.starts_with("stub:")) {
        const std::string arg = spec.endpoint == "stub" ? "" : spec.endpoint.substr(5);
        double tau = 0.0;
        if (!arg.empty() && arg != "auto") {
          tau = parse_number<double>("stub tau", arg);
        } else if (arg.empty() && config_.stub_tau) {
          tau = *config_.stub_tau;
        } else {
          if (!auto_tau_) auto_tau_ = median_mean_surprisal(texts_, reference_scorer());
          tau = *auto_tau_;
        }
        out.push_back(std::make_unique<StubDetector>(reference_scorer(), tau, config_.stub_scale, spec.name));
      } else {
        auto d = std::make_unique<adapter::AdapterDetector>(spec.name, adapter::make_transport(spec.endpoint));
        d->detect("probe");
        out.push_back(std::move(d));
      }
    }
    return out;
  }

 private:
  const RunConfig& config_;
  std::vector<std::string> texts_;
  SynonymDB synonyms_;
  bool synonyms_loaded_ = false;
  std::optional<double> auto_tau_;
  std::unique_ptr<BigramScorer> bigram_;
  std::unique_ptr<SlotFrequencyPredictor> slot_;
  std::unique_ptr<StubParaphraser> stub_;
  std::unique_ptr<CausalScorer> scorer_;
  std::unique_ptr<MaskedPredictor> predictor_;
  std::unique_ptr<Paraphraser> paraphraser_;
};

kernels::Exec exec_for(bool concurrent) {
  return concurrent ? kernels::Exec::parallel : kernels::Exec::serial;
}

std::string failure_message(const kernels::Failure& f) { return f.message; }

json number_or_null(const Ratio& r) { return r.undefined ? json(nullptr) : json(r.value); }

json metrics_json(const ConfusionMatrix& m) {
  json out = {{"confusion", {{"tp", m.tp}, {"fn", m.fn}, {"fp", m.fp}, {"tn", m.tn}}}, {"count", m.total()}};
  if (m.total() == 0) {
    out["metrics"] = nullptr;
    return out;
  }
  const auto mt = compute_metrics(m);
  auto cls = [](const ClassMetrics& c) {
    return json{{"precision", number_or_null(c.precision)},
                {"recall", number_or_null(c.recall)},
                {"f1", number_or_null(c.f1)}};
  };
  out["metrics"] = {{"accuracy", mt.accuracy},
                    {"machine", cls(mt.machine)},
                    {"human", cls(mt.human)},
                    {"macro_f1", mt.macro_f1}};
  return out;
}

std::string safe_name(std::string_view id) {
  std::string out;
  for (const char c : id) {
    const bool keep = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
                      c == '-' || c == '_' || c == '.';
    out += keep ? c : '_';
  }
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------
// Config

void apply_setting(RunConfig& c, std::string_view key_in, std::string_view value) {
  const std::string key(trim(key_in));
  const std::string v(trim(value));
  if (key == "corpus") c.corpus_path = v;
  else if (key == "synonyms") c.synonyms_path = v;
  else if (key == "per_label_count") c.per_label_count = parse_number<std::size_t>(key, v);
  else if (key == "sample_seed") c.sample_seed = parse_number<std::uint64_t>(key, v);
  else if (key == "labels") c.labels = parse_list(v, ',');
  else if (key == "method") c.method = parse_method(v);
  else if (key == "k") c.k = parse_number<std::size_t>(key, v);
  else if (key == "threshold_uws") c.thresholds.uws = parse_number<double>(key, v);
  else if (key == "threshold_up") c.thresholds.up = parse_number<double>(key, v);
  else if (key == "metrics") {
    c.metrics.clear();
    for (const auto& m : parse_list(v, ',')) {
      try {
        c.metrics.push_back(parse_metric(m));
      } catch (const ArgumentError& e) {
        throw ConfigError(e.what());
      }
    }
  } else if (key == "scorer") c.scorer = v;
  else if (key == "predictor") c.predictor = v;
  else if (key == "paraphraser") c.paraphraser = v;
  else if (key == "detectors") c.detectors = parse_list(v, ';');
  else if (key == "out") c.out_dir = v;
  else if (key == "seed") c.seed = parse_number<std::uint64_t>(key, v);
  else if (key == "jobs") c.jobs = parse_number<int>(key, v);
  else if (key == "diversity_penalty") c.diversity_penalty = parse_number<double>(key, v);
  else if (key == "up_min_chars") c.up_min_chars = parse_number<std::size_t>(key, v);
  else if (key == "max_length_ratio") {
    if (v.empty() || v == "off") c.max_length_ratio.reset();
    else c.max_length_ratio = parse_number<double>(key, v);
  } else if (key == "underscores_to_spaces") c.underscores_to_spaces = parse_bool(key, v);
  else if (key == "min_chars") c.criteria.min_chars = parse_number<std::size_t>(key, v);
  else if (key == "min_sentence_words") c.criteria.min_sentence_words = parse_number<std::size_t>(key, v);
  else if (key == "require_synonym") c.criteria.require_synonym = parse_bool(key, v);
  else if (key == "stub_tau") c.stub_tau = v == "auto" ? std::nullopt : std::optional(parse_number<double>(key, v));
  else if (key == "stub_scale") c.stub_scale = parse_number<double>(key, v);
  else if (key == "retry_attempts") c.retry_attempts = parse_number<int>(key, v);
  else if (key == "retry_delay_ms") c.retry_delay_ms = parse_number<int>(key, v);
  else throw ConfigError("unknown config key '" + key + "'");
}

void apply_config_stream(RunConfig& config, std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    const auto eq = t.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("config line " + std::to_string(line_no) + ": expected key=value");
    }
    apply_setting(config, t.substr(0, eq), t.substr(eq + 1));
  }
}

void apply_config_file(RunConfig& config, const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  apply_config_stream(config, in);
}

void validate(const RunConfig& c) {
  for (const double t : {c.thresholds.uws, c.thresholds.up}) {
    if (!(t > 0.0 && t <= 1.0)) throw ConfigError("thresholds must lie in (0, 1]");
  }
  if (c.k < 1) throw ConfigError("k must be at least 1");
  if (c.jobs < 0) throw ConfigError("jobs must be non-negative");
  if (c.metrics.empty()) throw ConfigError("at least one UID metric is required");
  if (c.detectors.empty()) throw ConfigError("at least one detector is required");
  if (c.diversity_penalty < 0.0) throw ConfigError("diversity_penalty must be non-negative");
  if (c.max_length_ratio && !(*c.max_length_ratio > 0.0)) throw ConfigError("max_length_ratio must be positive");
  if (c.retry_attempts < 1) throw ConfigError("retry_attempts must be at least 1");
  if (c.out_dir.empty()) throw ConfigError("output directory is required");
}

int exit_code_for(const std::exception& e) noexcept {
  if (dynamic_cast<const ConfigError*>(&e)) return kExitConfig;
  if (dynamic_cast<const CorpusError*>(&e) || dynamic_cast<const LabelError*>(&e) ||
      dynamic_cast<const SamplingError*>(&e) || dynamic_cast<const LoadError*>(&e)) {
    return kExitCorpus;
  }
  if (dynamic_cast<const ScorerError*>(&e)) return kExitUnavailable;
  return kExitInternal;
}

// ---------------------------------------------------------------------------
// Stages

namespace stage {

void ingest(const RunConfig& c) {
  validate(c);
  if (c.corpus_path.empty()) throw ConfigError("corpus path is required");
  const auto articles =
      load_corpus(c.corpus_path, SampleSpec{c.per_label_count, c.sample_seed.value_or(c.seed), c.labels});
  fs::create_directories(c.out_dir);
  std::vector<json> recs;
  Manifest manifest(out_file(c, files::manifest));
  for (const auto& a : articles) {
    recs.push_back({{"id", a.id}, {"label", a.label.str()}, {"text", a.text}});
    manifest.add(a.id, "ingest");
  }
  io::write_jsonl(out_file(c, files::articles), recs);
  manifest.save();
}

void obfuscate(const RunConfig& c) {
  validate(c);
  const auto articles = read_articles(c);
  auto manifest = Manifest::load(c.out_dir);
  Models models(c, articles);

  ObfuscateOptions opts;
  opts.criteria = c.criteria;
  opts.underscores_to_spaces = c.underscores_to_spaces;

  bool concurrent = true;
  const CausalScorer* scorer = nullptr;
  const MaskedPredictor* predictor = nullptr;
  const Paraphraser* paraphraser = nullptr;
  switch (c.method) {
    case Method::synonym_swap: scorer = &models.scorer(); concurrent = scorer->concurrent(); break;
    case Method::uws: predictor = &models.predictor(); concurrent = predictor->concurrent(); break;
    case Method::up: paraphraser = &models.paraphraser(); concurrent = paraphraser->concurrent(); break;
  }
  const auto& synonyms = models.synonyms();

  auto outcomes = kernels::map_indexed<std::vector<std::string>>(
      articles.size(),
      [&](std::size_t i) -> std::vector<std::string> {
        if (!manifest.ok(articles[i].id)) return {};
        const auto seg = segment(articles[i]);
        switch (c.method) {
          case Method::synonym_swap:
            return {synonym_swap(seg, synonyms, *scorer, opts).article.text};
          case Method::uws: {
            auto set = uws_alternates(seg, *predictor, synonyms, c.k, opts);
            std::vector<std::string> texts;
            for (auto& v : set.variants) texts.push_back(std::move(v.text));
            return texts;
          }
          case Method::up: {
            ParaphraseOptions po;
            po.n = c.k;
            po.min_chars = c.up_min_chars;
            po.diversity_penalty = c.diversity_penalty;
            po.seed = c.seed;
            po.max_length_ratio = c.max_length_ratio;
            auto set = up_alternates(seg, *paraphraser, po);
            std::vector<std::string> texts;
            for (auto& v : set.variants) texts.push_back(std::move(v.text));
            return texts;
          }
        }
        return {};
      },
      exec_for(concurrent), c.jobs);

  std::vector<json> recs;
  for (std::size_t i = 0; i < articles.size(); ++i) {
    const auto& id = articles[i].id;
    if (!manifest.ok(id)) continue;
    if (const auto* f = std::get_if<kernels::Failure>(&outcomes[i])) {
      manifest.mark_failed(id, "obfuscate", failure_message(*f));
      continue;
    }
    const auto& texts = std::get<std::vector<std::string>>(outcomes[i]);
    for (std::size_t v = 0; v < texts.size(); ++v) {
      recs.push_back({{"article_id", id}, {"method", to_string(c.method)}, {"variant_index", v}, {"text", texts[v]}});
    }
    manifest.mark_ok(id, "obfuscate");
  }
  io::write_jsonl(out_file(c, files::variants), recs);
  manifest.save();
  summarize(manifest, "obfuscate");
}

void score(const RunConfig& c) {
  validate(c);
  const auto articles = read_articles(c);
  const auto variants = read_variants(c);
  auto manifest = Manifest::load(c.out_dir);
  Models models(c, articles);
  const CausalScorer& scorer = models.scorer();

  auto outcomes = kernels::map_indexed<ScoreRows>(
      articles.size(),
      [&](std::size_t i) -> ScoreRows {
        ScoreRows rows;
        if (!manifest.ok(articles[i].id)) return rows;
        rows.original = uid_scores(articles[i].text, scorer);
        if (const auto it = variants.find(articles[i].id); it != variants.end()) {
          for (const auto& t : it->second) rows.variants.push_back(uid_scores(t, scorer));
        }
        return rows;
      },
      exec_for(scorer.concurrent()), c.jobs);

  std::string csv = io::csv_row({"article_id", "variant_index", "variance", "diff_squared", "token_count"});
  auto row = [](const std::string& id, long idx, const UIDScores& s) {
    return io::csv_row({id, std::to_string(idx), format_double(s.variance), format_double(s.diff_squared),
                        std::to_string(s.token_count)});
  };
  for (std::size_t i = 0; i < articles.size(); ++i) {
    const auto& id = articles[i].id;
    if (!manifest.ok(id)) continue;
    if (const auto* f = std::get_if<kernels::Failure>(&outcomes[i])) {
      manifest.mark_failed(id, "score", failure_message(*f));
      continue;
    }
    const auto& rows = std::get<ScoreRows>(outcomes[i]);
    csv += row(id, -1, rows.original);
    for (std::size_t v = 0; v < rows.variants.size(); ++v) csv += row(id, static_cast<long>(v), rows.variants[v]);
    manifest.mark_ok(id, "score");
  }
  io::write_text(out_file(c, files::scores), csv);
  manifest.save();
  summarize(manifest, "score");
}

void select(const RunConfig& c) {
  validate(c);
  if (c.method == Method::synonym_swap) {
    std::cerr << "uidobf select: synonym-swap has no selection stage; nothing to do\n";
    return;
  }
  const auto articles = read_articles(c);
  const auto variants = read_variants(c);
  const auto scores = read_scores(c);
  auto manifest = Manifest::load(c.out_dir);

  std::string sim_csv = io::csv_row({"article_id", "variant_index", "similarity"});
  std::vector<json> recs;
  for (const auto& a : articles) {
    if (!manifest.ok(a.id)) continue;
    const auto v = variants.find(a.id);
    const auto s = scores.find(a.id);
    if (v == variants.end() || s == scores.end() || s->second.variants.size() != v->second.size()) {
      manifest.mark_failed(a.id, "select", "missing variants or scores");
      continue;
    }
    AlternateSet set;
    set.original = a;
    for (const auto& t : v->second) set.variants.push_back({a.id, a.label, t});
    set.original_uid = s->second.original;
    set.uid = s->second.variants;
    set.similarity = kernels::similarity_batch(a.text, v->second, kernels::Exec::parallel, c.jobs);
    for (std::size_t i = 0; i < set.k(); ++i) {
      sim_csv += io::csv_row({a.id, std::to_string(i), format_double(set.similarity[i])});
    }
    for (const auto metric : c.metrics) {
      const auto r = select_candidate(set, metric, c.threshold());
      recs.push_back({{"article_id", r.article_id},
                      {"metric", to_string(r.metric)},
                      {"chosen_variant_index", r.chosen_variant_index ? json(*r.chosen_variant_index) : json(nullptr)},
                      {"chosen_similarity", r.chosen_similarity},
                      {"chosen_uid_delta", r.chosen_uid_delta},
                      {"fallback", r.fallback},
                      {"threshold", c.threshold()},
                      {"text", selected_text(set, r)}});
    }
    manifest.mark_ok(a.id, "select");
  }
  io::write_text(out_file(c, files::similarity), sim_csv);
  io::write_jsonl(out_file(c, files::selections), recs);
  manifest.save();
  summarize(manifest, "select");
}

void classify(const RunConfig& c) {
  validate(c);
  const auto articles = read_articles(c);
  auto manifest = Manifest::load(c.out_dir);
  Models models(c, articles);

  std::vector<ClassifyItem> items;
  if (c.method == Method::synonym_swap) {
    const auto variants = read_variants(c);
    for (const auto& a : articles) {
      if (!manifest.ok(a.id)) continue;
      const auto it = variants.find(a.id);
      if (it == variants.end() || it->second.empty()) {
        manifest.mark_failed(a.id, "classify", "no obfuscated text");
        continue;
      }
      items.push_back({a.id, VariantKind::original, a.text});
      items.push_back({a.id, VariantKind::obfuscated, it->second.front()});
    }
  } else {
    std::map<std::string, std::vector<json>> selections;
    for (auto& r : io::read_jsonl(out_file(c, files::selections))) {
      selections[r.at("article_id").get<std::string>()].push_back(std::move(r));
    }
    for (const auto& a : articles) {
      if (!manifest.ok(a.id)) continue;
      items.push_back({a.id, VariantKind::original, a.text});
      for (const auto& s : selections[a.id]) {
        const auto metric = parse_metric(s.at("metric").get<std::string>());
        items.push_back({a.id,
                         metric == UidMetric::variance ? VariantKind::selected_variance : VariantKind::selected_diff2,
                         s.at("text").get<std::string>()});
      }
    }
  }

  const RetryPolicy retry{c.retry_attempts, std::chrono::milliseconds(c.retry_delay_ms)};
  std::vector<json> recs;
  for (const auto& detector : models.detectors()) {
    const auto batch = classify_batch(items, *detector, retry, {}, c.jobs);
    for (const auto& r : batch.results) {
      recs.push_back({{"article_id", r.article_id},
                      {"variant", to_string(r.variant)},
                      {"detector", r.detector},
                      {"machine_probability", r.machine_probability},
                      {"binary_label", to_string(r.binary_label)},
                      {"five_way", r.five_way ? json(to_string(*r.five_way)) : json(nullptr)}});
    }
    for (const auto& f : batch.failures) {
      manifest.mark_failed(f.article_id, "classify",
                           f.detector + " on " + std::string(to_string(f.variant)) + ": " + f.error);
    }
  }
  for (const auto& item : items) manifest.mark_ok(item.article_id, "classify");
  io::write_jsonl(out_file(c, files::attributions), recs);
  manifest.save();
  summarize(manifest, "classify");
}

void evaluate(const RunConfig& c) {
  validate(c);
  const auto articles = read_articles(c);
  TruthMap truths;
  for (const auto& a : articles) truths.emplace(a.id, a.label);
  auto manifest = Manifest::load(c.out_dir);

  // detector -> variant kind -> results
  std::map<std::string, std::map<VariantKind, std::vector<AttributionResult>>> by_detector;
  for (const auto& r : io::read_jsonl(out_file(c, files::attributions))) {
    AttributionResult a;
    a.article_id = r.at("article_id").get<std::string>();
    a.variant = parse_variant_kind(r.at("variant").get<std::string>());
    a.detector = r.at("detector").get<std::string>();
    a.machine_probability = r.at("machine_probability").get<double>();
    a.binary_label = parse_binary_label(r.at("binary_label").get<std::string>());
    if (!r.at("five_way").is_null()) a.five_way = parse_five_way(r.at("five_way").get<std::string>());
    by_detector[a.detector][a.variant].push_back(std::move(a));
  }

  json report = {{"method", to_string(c.method)}, {"articles", articles.size()},
                 {"failed_articles", manifest.failures()}};
  std::string metrics_csv = io::csv_row({"detector", "subset", "count", "accuracy", "precision_machine",
                                         "recall_machine", "f1_machine", "f1_human", "macro_f1"});
  std::string confusion_csv = io::csv_row({"detector", "subset", "tp", "fn", "fp", "tn"});
  std::string shift_csv = io::csv_row({"detector", "subset", "truth", "label", "before", "after"});

  auto ratio_text = [](const Ratio& r) { return r.undefined ? std::string() : format_double(r.value); };

  json detectors = json::object();
  for (auto& [name, kinds] : by_detector) {
    std::vector<std::pair<std::string, std::vector<AttributionResult>>> subsets;
    subsets.emplace_back("original", kinds[VariantKind::original]);
    if (c.method == Method::synonym_swap) {
      subsets.emplace_back("obfuscated", kinds[VariantKind::obfuscated]);
    } else {
      auto combined = kinds[VariantKind::selected_variance];
      const auto& d2 = kinds[VariantKind::selected_diff2];
      combined.insert(combined.end(), d2.begin(), d2.end());
      subsets.emplace_back("selected", std::move(combined));
      subsets.emplace_back("selected_variance", kinds[VariantKind::selected_variance]);
      subsets.emplace_back("selected_diff2", kinds[VariantKind::selected_diff2]);
    }

    json det = json::object();
    for (const auto& [subset, results] : subsets) {
      const auto m = confusion(results, truths);
      det[subset] = metrics_json(m);
      confusion_csv += io::csv_row({name, subset, std::to_string(m.tp), std::to_string(m.fn),
                                    std::to_string(m.fp), std::to_string(m.tn)});
      if (m.total() > 0) {
        const auto mt = compute_metrics(m);
        metrics_csv += io::csv_row({name, subset, std::to_string(m.total()), format_double(mt.accuracy),
                                    ratio_text(mt.machine.precision), ratio_text(mt.machine.recall),
                                    ratio_text(mt.machine.f1), ratio_text(mt.human.f1),
                                    format_double(mt.macro_f1)});
      }
    }

    // Five-way label shift of each obfuscated subset against the originals.
    const auto& before = kinds[VariantKind::original];
    const bool five_way = !before.empty() && std::all_of(before.begin(), before.end(),
                                                         [](const auto& r) { return r.five_way.has_value(); });
    json shifts = json::object();
    if (five_way) {
      for (const auto kind : {VariantKind::obfuscated, VariantKind::selected_variance, VariantKind::selected_diff2}) {
        const auto& after = kinds[kind];
        if (after.empty()) continue;
        // Only articles present on both sides.
        std::set<std::string> after_ids;
        for (const auto& r : after) after_ids.insert(r.article_id);
        std::vector<AttributionResult> b;
        std::set<std::string> before_ids;
        for (const auto& r : before) {
          if (after_ids.contains(r.article_id)) {
            b.push_back(r);
            before_ids.insert(r.article_id);
          }
        }
        std::vector<AttributionResult> a;
        for (const auto& r : after) {
          if (before_ids.contains(r.article_id)) a.push_back(r);
        }
        json per_truth = json::object();
        for (const auto& [truth, shift] : label_shift(b, a, truths)) {
          per_truth[truth] = {{"before", shift.before}, {"after", shift.after}};
          for (std::size_t l = 0; l < kFiveWayCount; ++l) {
            shift_csv += io::csv_row({name, std::string(to_string(kind)), truth,
                                      std::string(to_string(static_cast<FiveWay>(l))),
                                      std::to_string(shift.before[l]), std::to_string(shift.after[l])});
          }
        }
        shifts[std::string(to_string(kind))] = std::move(per_truth);
      }
    }
    det["label_shift"] = std::move(shifts);
    detectors[name] = std::move(det);
  }
  report["detectors"] = std::move(detectors);

  // Scatter plot data and selection summary.
  if (c.method != Method::synonym_swap) {
    const auto scores = read_scores(c);
    const auto sims = read_similarity(c);
    std::map<std::pair<std::string, UidMetric>, SelectionResult> selections;
    json summary = json::object();
    for (const auto& r : io::read_jsonl(out_file(c, files::selections))) {
      SelectionResult s;
      s.article_id = r.at("article_id").get<std::string>();
      s.metric = parse_metric(r.at("metric").get<std::string>());
      if (!r.at("chosen_variant_index").is_null()) s.chosen_variant_index = r.at("chosen_variant_index").get<std::size_t>();
      s.chosen_similarity = r.at("chosen_similarity").get<double>();
      s.chosen_uid_delta = r.at("chosen_uid_delta").get<double>();
      s.fallback = r.at("fallback").get<bool>();
      auto& m = summary[std::string(to_string(s.metric))];
      if (!m.contains("selected")) m = {{"selected", 0}, {"fallback", 0}};
      m[s.fallback ? "fallback" : "selected"] = m[s.fallback ? "fallback" : "selected"].get<int>() + 1;
      selections[{s.article_id, s.metric}] = s;
    }
    report["selection"] = std::move(summary);
    report["threshold"] = c.threshold();

    const fs::path plot_dir = out_file(c, files::plots);
    fs::remove_all(plot_dir);
    for (const auto& a : articles) {
      const auto s = scores.find(a.id);
      const auto sim = sims.find(a.id);
      if (s == scores.end() || sim == sims.end()) continue;
      AlternateSet set;
      set.original = a;
      set.variants.assign(s->second.variants.size(), a);
      set.original_uid = s->second.original;
      set.uid = s->second.variants;
      set.similarity = sim->second;
      for (const auto metric : c.metrics) {
        const auto sel = selections.find({a.id, metric});
        if (sel == selections.end()) continue;
        std::string csv = io::csv_row({"x", "y", "flag", "variant_index"});
        for (const auto& p : scatter_dataset(set, metric, sel->second)) {
          csv += io::csv_row({format_double(p.similarity), format_double(p.uid), std::string(to_string(p.flag)),
                              p.variant_index ? std::to_string(*p.variant_index) : std::string()});
        }
        io::write_text(plot_dir / ("scatter_" + safe_name(a.id) + "_" + std::string(to_string(metric)) + ".csv"), csv);
      }
    }
  }

  io::write_json(out_file(c, files::report), report);
  io::write_text(out_file(c, files::metrics), metrics_csv);
  io::write_text(out_file(c, files::confusion), confusion_csv);
  io::write_text(out_file(c, files::label_shift), shift_csv);
  for (const auto& a : articles) manifest.mark_ok(a.id, "evaluate");
  manifest.save();
}

void report(const RunConfig& c) {
  render_charts(c.out_dir / files::plots, c.out_dir / files::label_shift, c.out_dir / files::charts);
}

}  // namespace stage

void run(const RunConfig& config) {
  validate(config);
  stage::ingest(config);
  stage::obfuscate(config);
  stage::score(config);
  stage::select(config);
  stage::classify(config);
  stage::evaluate(config);
  stage::report(config);
}

}  // namespace uidobf
