#pragma once

// Line-delimited JSON protocol (version 1) for attaching external models.
// See docs/protocol.md for the message shapes.

#include <iosfwd>
#include <memory>
#include <mutex>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "uidobf/attribute.hpp"
#include "uidobf/scorer.hpp"

namespace uidobf::adapter {

inline constexpr int kProtocolVersion = 1;

/// Sends one request object and returns the raw response object. Throws
/// ScorerError(transport) when the peer cannot be reached.
class Transport {
 public:
  virtual ~Transport() = default;
  virtual nlohmann::json round_trip(const nlohmann::json& request) = 0;
  virtual std::string describe() const = 0;
};

/// Child process speaking one JSON object per line on stdin/stdout. Requests
/// on one transport are serialized. A dead child is respawned on the next
/// request.
class StdioTransport final : public Transport {
 public:
  explicit StdioTransport(std::vector<std::string> argv);
  ~StdioTransport() override;
  StdioTransport(const StdioTransport&) = delete;
  StdioTransport& operator=(const StdioTransport&) = delete;

  nlohmann::json round_trip(const nlohmann::json& request) override;
  std::string describe() const override;

 private:
  void spawn();
  void shutdown() noexcept;
  std::string read_line();

  std::vector<std::string> argv_;
  std::mutex mutex_;
  int pid_ = -1;
  int to_child_ = -1;
  int from_child_ = -1;
  std::string buffer_;
};

/// HTTP POST of the request body to <base>/<op>.
class HttpTransport final : public Transport {
 public:
  explicit HttpTransport(std::string base_url);

  nlohmann::json round_trip(const nlohmann::json& request) override;
  std::string describe() const override { return base_url_; }

 private:
  std::string base_url_;
  std::string host_;
  int port_ = 80;
  std::string path_prefix_;
  std::mutex mutex_;
};

/// "stdio:<program> [args...]" (whitespace-separated, no quoting) or
/// "http://host:port[/prefix]".
std::shared_ptr<Transport> make_transport(std::string_view spec);

/// Stamps the version, sends, and checks the reply: an "error" field or a
/// version mismatch becomes ScorerError(protocol).
nlohmann::json call(Transport& transport, nlohmann::json request);

class AdapterCausalScorer final : public CausalScorer {
 public:
  explicit AdapterCausalScorer(std::shared_ptr<Transport> t) : transport_(std::move(t)) {}
  SurprisalSequence surprisals(std::string_view text) const override;
  double word_logprob(std::string_view prefix, std::string_view word) const override;
  bool concurrent() const noexcept override { return false; }

 private:
  std::shared_ptr<Transport> transport_;
};

class AdapterMaskedPredictor final : public MaskedPredictor {
 public:
  explicit AdapterMaskedPredictor(std::shared_ptr<Transport> t) : transport_(std::move(t)) {}
  std::vector<FillCandidate> fills(std::span<const std::string> tokens, std::size_t mask_index,
                                   std::size_t k) const override;
  bool concurrent() const noexcept override { return false; }

 private:
  std::shared_ptr<Transport> transport_;
};

class AdapterParaphraser final : public Paraphraser {
 public:
  explicit AdapterParaphraser(std::shared_ptr<Transport> t) : transport_(std::move(t)) {}
  std::vector<std::string> paraphrase(std::string_view sentence, std::size_t n,
                                      double diversity_penalty, std::uint64_t seed) const override;
  bool concurrent() const noexcept override { return false; }

 private:
  std::shared_ptr<Transport> transport_;
};

class AdapterDetector final : public DetectorClient {
 public:
  AdapterDetector(std::string name, std::shared_ptr<Transport> t, bool five_way = false)
      : name_(std::move(name)), transport_(std::move(t)), five_way_(five_way) {}
  const std::string& name() const noexcept override { return name_; }
  Verdict detect(std::string_view text) const override;
  bool concurrent() const noexcept override { return false; }
  bool reports_five_way() const noexcept override { return five_way_; }

 private:
  std::string name_;
  std::shared_ptr<Transport> transport_;
  bool five_way_;
};

/// Server side: answers protocol requests from in-process models. Any model
/// may be null, in which case its ops answer with an error.
class Dispatcher {
 public:
  Dispatcher(const CausalScorer* scorer, const MaskedPredictor* predictor,
             const Paraphraser* paraphraser, const DetectorClient* detector)
      : scorer_(scorer), predictor_(predictor), paraphraser_(paraphraser), detector_(detector) {}

  /// Never throws; failures come back as {"v":1,"error":...}.
  nlohmann::json handle(const nlohmann::json& request) const noexcept;
  /// Parses one line and returns the serialized response line.
  std::string handle_line(std::string_view line) const noexcept;

 private:
  nlohmann::json dispatch(const nlohmann::json& request) const;

  const CausalScorer* scorer_;
  const MaskedPredictor* predictor_;
  const Paraphraser* paraphraser_;
  const DetectorClient* detector_;
};

/// Reads requests line by line until EOF, writing one response per line.
void serve_stdio(const Dispatcher& dispatcher, std::istream& in, std::ostream& out);

}  // namespace uidobf::adapter
