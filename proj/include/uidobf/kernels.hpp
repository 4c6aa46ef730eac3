#pragma once

// Article-level batch kernels. Every kernel has a serial path (the reference
// used by tests) and an OpenMP path; items are independent and each result is
// written to its own slot, so both paths produce identical output.

#include <cstddef>
#include <exception>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "uidobf/error.hpp"
#include "uidobf/scorer.hpp"
#include "uidobf/uid.hpp"

namespace uidobf::kernels {

enum class Exec { serial, parallel };

enum class FailureKind { argument, transport, protocol, other };

struct Failure {
  std::string message;
  FailureKind kind = FailureKind::other;
};

template <class T>
using Outcome = std::variant<T, Failure>;

inline Failure capture_failure(std::exception_ptr ep) {
  try {
    std::rethrow_exception(ep);
  } catch (const ScorerError& e) {
    return {e.what(), e.is_transport() ? FailureKind::transport : FailureKind::protocol};
  } catch (const ArgumentError& e) {
    return {e.what(), FailureKind::argument};
  } catch (const std::exception& e) {
    return {e.what(), FailureKind::other};
  } catch (...) {
    return {"unknown error", FailureKind::other};
  }
}

/// Runs fn(i) for i in [0, n). Exceptions are captured per item.
template <class T, class Fn>
std::vector<Outcome<T>> map_indexed(std::size_t n, Fn&& fn, Exec exec, int jobs = 0) {
  std::vector<Outcome<T>> out(n, Failure{"not run", FailureKind::other});
  auto body = [&](std::size_t i) {
    try {
      out[i] = fn(i);
    } catch (...) {
      out[i] = capture_failure(std::current_exception());
    }
  };
  if (exec == Exec::serial || jobs == 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return out;
  }
  const auto count = static_cast<std::ptrdiff_t>(n);
  if (jobs > 1) {
#pragma omp parallel for schedule(dynamic) num_threads(jobs)
    for (std::ptrdiff_t i = 0; i < count; ++i) body(static_cast<std::size_t>(i));
  } else {
#pragma omp parallel for schedule(dynamic)
    for (std::ptrdiff_t i = 0; i < count; ++i) body(static_cast<std::size_t>(i));
  }
  return out;
}

/// UID scores of each text. Falls back to serial when the scorer does not
/// allow concurrent calls.
std::vector<Outcome<UIDScores>> uid_scores_batch(std::span<const std::string> texts,
                                                 const CausalScorer& scorer, Exec exec,
                                                 int jobs = 0);

/// Cosine similarity of each variant against one original.
std::vector<double> similarity_batch(std::string_view original,
                                     std::span<const std::string> variants, Exec exec,
                                     int jobs = 0);

}  // namespace uidobf::kernels
