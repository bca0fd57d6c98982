#include "reframe/providers/retry.hpp"

#include <cmath>
#include <thread>

namespace reframe::providers {

std::chrono::milliseconds RetryPolicy::delay_after(int attempt) const
{
  const double scale = std::pow(factor, attempt - 1);
  return std::chrono::milliseconds(static_cast<long long>(static_cast<double>(base_delay.count()) * scale));
}

RetryPolicy RetryPolicy::no_sleep()
{
  RetryPolicy p;
  p.sleep = nullptr;
  return p;
}

}  // namespace reframe::providers
