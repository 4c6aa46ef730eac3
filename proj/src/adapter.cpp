#include "uidobf/adapter.hpp"

#include <cerrno>
#include <csignal>
#include <cstring>
#include <istream>
#include <ostream>
#include <sstream>

#include <fcntl.h>
#include <sys/wait.h>
#include <unistd.h>

#include <httplib.h>

#include "uidobf/error.hpp"
#include "uidobf/text.hpp"

namespace uidobf::adapter {
namespace {

using nlohmann::json;

[[noreturn]] void transport_error(const std::string& what) {
  throw ScorerError(ScorerError::Kind::transport, what);
}

[[noreturn]] void protocol_error(const std::string& what) {
  throw ScorerError(ScorerError::Kind::protocol, what);
}

template <class T>
T field(const json& obj, const char* name) {
  const auto it = obj.find(name);
  if (it == obj.end()) protocol_error(std::string("missing field '") + name + "'");
  try {
    return it->get<T>();
  } catch (const json::exception&) {
    protocol_error(std::string("field '") + name + "' has the wrong type");
  }
}

}  // namespace

// ---------------------------------------------------------------------------
// StdioTransport

StdioTransport::StdioTransport(std::vector<std::string> argv) : argv_(std::move(argv)) {
  if (argv_.empty()) throw ConfigError("stdio adapter needs a program");
  std::signal(SIGPIPE, SIG_IGN);
}

StdioTransport::~StdioTransport() { shutdown(); }

std::string StdioTransport::describe() const {
  std::string s = "stdio:";
  for (std::size_t i = 0; i < argv_.size(); ++i) s += (i ? " " : "") + argv_[i];
  return s;
}

void StdioTransport::spawn() {
  int in_pipe[2];
  int out_pipe[2];
  if (pipe(in_pipe) != 0) transport_error("pipe: " + std::string(std::strerror(errno)));
  if (pipe(out_pipe) != 0) {
    close(in_pipe[0]);
    close(in_pipe[1]);
    transport_error("pipe: " + std::string(std::strerror(errno)));
  }
  // Exec failure is reported through a close-on-exec pipe.
  int status_pipe[2];
  if (pipe2(status_pipe, O_CLOEXEC) != 0) transport_error("pipe: " + std::string(std::strerror(errno)));

  const pid_t pid = fork();
  if (pid < 0) transport_error("fork: " + std::string(std::strerror(errno)));
  if (pid == 0) {
    dup2(in_pipe[0], STDIN_FILENO);
    dup2(out_pipe[1], STDOUT_FILENO);
    close(in_pipe[0]);
    close(in_pipe[1]);
    close(out_pipe[0]);
    close(out_pipe[1]);
    close(status_pipe[0]);
    std::vector<char*> args;
    for (auto& a : argv_) args.push_back(a.data());
    args.push_back(nullptr);
    execvp(args[0], args.data());
    const int err = errno;
    (void)!write(status_pipe[1], &err, sizeof err);
    _exit(127);
  }
  close(in_pipe[0]);
  close(out_pipe[1]);
  close(status_pipe[1]);
  int child_errno = 0;
  const auto n = read(status_pipe[0], &child_errno, sizeof child_errno);
  close(status_pipe[0]);
  to_child_ = in_pipe[1];
  from_child_ = out_pipe[0];
  pid_ = pid;
  buffer_.clear();
  if (n > 0) {
    shutdown();
    transport_error("cannot start '" + argv_[0] + "': " + std::strerror(child_errno));
  }
}

void StdioTransport::shutdown() noexcept {
  if (to_child_ >= 0) close(to_child_);
  if (from_child_ >= 0) close(from_child_);
  to_child_ = from_child_ = -1;
  if (pid_ > 0) {
    int status = 0;
    waitpid(pid_, &status, 0);
  }
  pid_ = -1;
}

std::string StdioTransport::read_line() {
  while (true) {
    const auto nl = buffer_.find('\n');
    if (nl != std::string::npos) {
      std::string line = buffer_.substr(0, nl);
      buffer_.erase(0, nl + 1);
      return line;
    }
    char chunk[4096];
    const auto n = read(from_child_, chunk, sizeof chunk);
    if (n < 0 && errno == EINTR) continue;
    if (n <= 0) transport_error(describe() + ": adapter closed its output");
    buffer_.append(chunk, static_cast<std::size_t>(n));
  }
}

nlohmann::json StdioTransport::round_trip(const nlohmann::json& request) {
  std::lock_guard lock(mutex_);
  if (pid_ < 0) spawn();
  try {
    const std::string line = request.dump() + "\n";
    std::size_t off = 0;
    while (off < line.size()) {
      const auto n = write(to_child_, line.data() + off, line.size() - off);
      if (n < 0 && errno == EINTR) continue;
      if (n <= 0) transport_error(describe() + ": write failed: " + std::strerror(errno));
      off += static_cast<std::size_t>(n);
    }
    const std::string reply = read_line();
    try {
      return json::parse(reply);
    } catch (const json::parse_error&) {
      protocol_error(describe() + ": reply is not JSON");
    }
  } catch (const ScorerError& e) {
    if (e.is_transport()) shutdown();
    throw;
  }
}

// ---------------------------------------------------------------------------
// HttpTransport

HttpTransport::HttpTransport(std::string base_url) : base_url_(std::move(base_url)) {
  constexpr std::string_view scheme = "http://";
  std::string_view rest(base_url_);
  if (!rest.starts_with(scheme)) throw ConfigError("adapter URL must start with http://");
  rest.remove_prefix(scheme.size());
  const auto slash = rest.find('/');
  std::string_view hostport = rest.substr(0, slash);
  if (slash != std::string_view::npos) path_prefix_ = std::string(rest.substr(slash));
  while (!path_prefix_.empty() && path_prefix_.back() == '/') path_prefix_.pop_back();
  const auto colon = hostport.rfind(':');
  if (colon == std::string_view::npos) {
    host_ = std::string(hostport);
  } else {
    host_ = std::string(hostport.substr(0, colon));
    try {
      port_ = std::stoi(std::string(hostport.substr(colon + 1)));
    } catch (const std::exception&) {
      throw ConfigError("bad port in adapter URL " + base_url_);
    }
  }
  if (host_.empty()) throw ConfigError("missing host in adapter URL " + base_url_);
}

nlohmann::json HttpTransport::round_trip(const nlohmann::json& request) {
  std::lock_guard lock(mutex_);
  httplib::Client client(host_, port_);
  client.set_connection_timeout(5);
  client.set_read_timeout(300);
  const std::string op = request.value("op", "");
  const auto res = client.Post(path_prefix_ + "/" + op, request.dump(), "application/json");
  if (!res) transport_error(base_url_ + ": " + httplib::to_string(res.error()));
  if (res->status >= 500) transport_error(base_url_ + ": HTTP " + std::to_string(res->status));
  try {
    return json::parse(res->body);
  } catch (const json::parse_error&) {
    protocol_error(base_url_ + ": HTTP " + std::to_string(res->status) + " reply is not JSON");
  }
}

std::shared_ptr<Transport> make_transport(std::string_view spec) {
  if (spec.starts_with("stdio:")) {
    std::vector<std::string> argv;
    std::istringstream words{std::string(spec.substr(6))};
    for (std::string w; words >> w;) argv.push_back(w);
    return std::make_shared<StdioTransport>(std::move(argv));
  }
  if (spec.starts_with("http://")) return std::make_shared<HttpTransport>(std::string(spec));
  throw ConfigError("unrecognized adapter endpoint '" + std::string(spec) + "'");
}

nlohmann::json call(Transport& transport, nlohmann::json request) {
  request["v"] = kProtocolVersion;
  auto reply = transport.round_trip(request);
  if (!reply.is_object()) protocol_error(transport.describe() + ": reply is not an object");
  if (const auto it = reply.find("error"); it != reply.end()) {
    protocol_error(transport.describe() + ": " + (it->is_string() ? it->get<std::string>() : it->dump()));
  }
  if (reply.value("v", 0) != kProtocolVersion) {
    protocol_error(transport.describe() + ": unsupported protocol version");
  }
  return reply;
}

// ---------------------------------------------------------------------------
// Clients

SurprisalSequence AdapterCausalScorer::surprisals(std::string_view text) const {
  const auto reply = call(*transport_, {{"op", "surprisals"}, {"text", text}});
  const auto tokens = field<std::vector<std::string>>(reply, "tokens");
  const auto values = field<std::vector<double>>(reply, "surprisals");
  if (tokens.size() != values.size()) protocol_error("tokens and surprisals differ in length");
  SurprisalSequence out;
  out.reserve(tokens.size());
  for (std::size_t i = 0; i < tokens.size(); ++i) out.push_back({tokens[i], values[i]});
  return out;
}

double AdapterCausalScorer::word_logprob(std::string_view prefix, std::string_view word) const {
  const auto reply = call(*transport_, {{"op", "logprob"}, {"prefix", prefix}, {"word", word}});
  return field<double>(reply, "logprob");
}

std::vector<FillCandidate> AdapterMaskedPredictor::fills(std::span<const std::string> tokens,
                                                         std::size_t mask_index,
                                                         std::size_t k) const {
  const auto reply = call(*transport_, {{"op", "fills"},
                                        {"tokens", std::vector<std::string>(tokens.begin(), tokens.end())},
                                        {"mask_index", mask_index},
                                        {"k", k}});
  const auto cands = field<json>(reply, "candidates");
  if (!cands.is_array()) protocol_error("'candidates' is not an array");
  std::vector<FillCandidate> out;
  for (const auto& c : cands) out.push_back({field<std::string>(c, "word"), field<double>(c, "score")});
  return out;
}

std::vector<std::string> AdapterParaphraser::paraphrase(std::string_view sentence, std::size_t n,
                                                        double diversity_penalty,
                                                        std::uint64_t seed) const {
  const auto reply = call(*transport_, {{"op", "paraphrases"},
                                        {"sentence", sentence},
                                        {"n", n},
                                        {"diversity_penalty", diversity_penalty},
                                        {"seed", seed}});
  return field<std::vector<std::string>>(reply, "paraphrases");
}

Verdict AdapterDetector::detect(std::string_view text) const {
  const auto reply = call(*transport_, {{"op", "classify"}, {"text", text}});
  return Verdict{field<double>(reply, "probability")};
}

// ---------------------------------------------------------------------------
// Server side

nlohmann::json Dispatcher::dispatch(const json& req) const {
  if (!req.is_object()) throw ArgumentError("request is not an object");
  if (req.value("v", 0) != kProtocolVersion) throw ArgumentError("unsupported protocol version");
  const auto op = field<std::string>(req, "op");
  json reply = {{"v", kProtocolVersion}};
  if (op == "surprisals") {
    if (!scorer_) throw ArgumentError("no causal scorer configured");
    const auto seq = scorer_->surprisals(field<std::string>(req, "text"));
    json tokens = json::array();
    json values = json::array();
    for (const auto& t : seq) {
      tokens.push_back(t.token);
      values.push_back(t.surprisal);
    }
    reply["tokens"] = std::move(tokens);
    reply["surprisals"] = std::move(values);
  } else if (op == "logprob") {
    if (!scorer_) throw ArgumentError("no causal scorer configured");
    reply["logprob"] = scorer_->word_logprob(field<std::string>(req, "prefix"), field<std::string>(req, "word"));
  } else if (op == "fills") {
    if (!predictor_) throw ArgumentError("no masked predictor configured");
    const auto tokens = field<std::vector<std::string>>(req, "tokens");
    json cands = json::array();
    for (const auto& c : predictor_->fills(tokens, field<std::size_t>(req, "mask_index"), field<std::size_t>(req, "k"))) {
      cands.push_back({{"word", c.word}, {"score", c.score}});
    }
    reply["candidates"] = std::move(cands);
  } else if (op == "paraphrases") {
    if (!paraphraser_) throw ArgumentError("no paraphraser configured");
    reply["paraphrases"] = paraphraser_->paraphrase(field<std::string>(req, "sentence"), field<std::size_t>(req, "n"),
                                                    req.value("diversity_penalty", 1.0), req.value("seed", std::uint64_t{0}));
  } else if (op == "classify") {
    if (!detector_) throw ArgumentError("no detector configured");
    const auto v = detector_->detect(field<std::string>(req, "text"));
    reply["probability"] = v.machine_probability;
    reply["label"] = std::string(to_string(binary_label(v.machine_probability)));
  } else {
    throw ArgumentError("unknown op '" + op + "'");
  }
  return reply;
}

nlohmann::json Dispatcher::handle(const json& request) const noexcept {
  try {
    return dispatch(request);
  } catch (const std::exception& e) {
    return {{"v", kProtocolVersion}, {"error", e.what()}};
  }
}

std::string Dispatcher::handle_line(std::string_view line) const noexcept {
  try {
    return handle(json::parse(line)).dump();
  } catch (const std::exception& e) {
    return json{{"v", kProtocolVersion}, {"error", std::string("bad request: ") + e.what()}}.dump();
  }
}

void serve_stdio(const Dispatcher& dispatcher, std::istream& in, std::ostream& out) {
  std::string line;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    out << dispatcher.handle_line(line) << '\n' << std::flush;
  }
}

}  // namespace uidobf::adapter
