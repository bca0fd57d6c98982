#pragma once

#include <chrono>
#include <functional>
#include <thread>
#include <utility>

#include "reframe/providers/provider.hpp"

namespace reframe::providers {

struct RetryPolicy {
  int max_attempts = 3;
  std::chrono::milliseconds base_delay{500};
  double factor = 2.0;
  /// Replaceable so tests do not sleep.
  std::function<void(std::chrono::milliseconds)> sleep = [](std::chrono::milliseconds d) {
    std::this_thread::sleep_for(d);
  };

  /// Delay before attempt `attempt + 1`, given `attempt` failures so far (1-based).
  [[nodiscard]] std::chrono::milliseconds delay_after(int attempt) const;

  static RetryPolicy no_sleep();
};

/// Runs `fn` until it succeeds or max_attempts ProviderErrors were thrown;
/// the final error is rethrown with the total attempt count.
template <typename Fn>
auto with_retries(const RetryPolicy& policy, Fn&& fn) -> decltype(fn())
{
  for (int attempt = 1;; ++attempt) {
    try {
      return fn();
    }
    catch (const ProviderError& e) {
      if (attempt >= policy.max_attempts) throw ProviderError(e.code(), e.detail(), attempt);
      const auto delay = policy.delay_after(attempt);
      if (policy.sleep) policy.sleep(delay);
    }
  }
}

}  // namespace reframe::providers
