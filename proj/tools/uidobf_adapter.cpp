// Serves the reference models over the adapter protocol, on stdio by
// default or over HTTP with --port. Useful as a template for wrapping real
// models and for checking that adapter-backed runs match in-process runs.

#include <CLI11.hpp>
#include <httplib.h>

#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "uidobf/adapter.hpp"
#include "uidobf/attribute.hpp"
#include "uidobf/io.hpp"
#include "uidobf/lexicon.hpp"
#include "uidobf/scorer.hpp"

int main(int argc, char** argv) {
  CLI::App app{"uidobf reference-model adapter"};
  std::string articles_path;
  std::string synonyms_path;
  std::optional<double> stub_tau;
  double stub_scale = 0.25;
  int port = 0;
  std::string host = "127.0.0.1";
  app.add_option("--articles", articles_path, "JSONL file whose \"text\" fields train the models")
      ->required()
      ->check(CLI::ExistingFile);
  app.add_option("--synonyms", synonyms_path, "synonym DB for the stub paraphraser")->check(CLI::ExistingFile);
  app.add_option("--stub-tau", stub_tau, "stub detector midpoint in nats (default: median over the articles)");
  app.add_option("--stub-scale", stub_scale, "stub detector logistic scale");
  app.add_option("--port", port, "serve HTTP on this port instead of stdio");
  app.add_option("--host", host, "HTTP bind address");
  CLI11_PARSE(app, argc, argv);

  try {
    std::vector<std::string> texts;
    for (const auto& r : uidobf::io::read_jsonl(articles_path)) {
      if (r.contains("text")) texts.push_back(r.at("text").get<std::string>());
    }
    const auto scorer = uidobf::BigramScorer::fit(texts);
    const auto predictor = uidobf::SlotFrequencyPredictor::fit(texts);
    const auto synonyms = synonyms_path.empty() ? uidobf::SynonymDB{} : uidobf::load_synonyms(synonyms_path);
    const uidobf::StubParaphraser paraphraser(synonyms);
    const uidobf::StubDetector detector(
        scorer, stub_tau ? *stub_tau : uidobf::median_mean_surprisal(texts, scorer), stub_scale);
    const uidobf::adapter::Dispatcher dispatcher(&scorer, &predictor, &paraphraser, &detector);

    if (port == 0) {
      std::ios::sync_with_stdio(false);
      uidobf::adapter::serve_stdio(dispatcher, std::cin, std::cout);
      return 0;
    }

    httplib::Server server;
    server.Post(R"(/(\w+))", [&](const httplib::Request& req, httplib::Response& res) {
      auto request = nlohmann::json::parse(req.body, nullptr, false);
      if (request.is_discarded() || !request.is_object()) {
        res.set_content(R"({"v":1,"error":"malformed JSON"})", "application/json");
        return;
      }
      request["op"] = req.matches[1].str();
      res.set_content(dispatcher.handle(request).dump(), "application/json");
    });
    std::cerr << "uidobf-adapter listening on " << host << ":" << port << "\n";
    if (!server.listen(host, port)) {
      std::cerr << "uidobf-adapter: cannot bind " << host << ":" << port << "\n";
      return 1;
    }
  } catch (const std::exception& e) {
    std::cerr << "uidobf-adapter: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
