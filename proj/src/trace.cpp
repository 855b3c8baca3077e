#include "automala/trace.hpp"

#include <limits>

namespace automala {

namespace {

template <typename F>
double adjusted_mean(const ChainTrace& trace, F value) {
  double sum = 0.0;
  std::size_t n = 0;
  for (std::size_t t = 0; t < trace.size(); ++t) {
    if (trace.unadjusted[t]) continue;
    sum += value(t);
    ++n;
  }
  return n == 0 ? std::numeric_limits<double>::quiet_NaN() : sum / static_cast<double>(n);
}

}  // namespace

double ChainTrace::mean_acceptance_probability() const {
  return adjusted_mean(*this, [this](std::size_t t) { return reversibility_ok[t] ? alpha[t] : 0.0; });
}

double ChainTrace::reversibility_failure_rate() const {
  return adjusted_mean(*this, [this](std::size_t t) { return reversibility_ok[t] ? 0.0 : 1.0; });
}

double ChainTrace::accepted_fraction() const {
  return adjusted_mean(*this, [this](std::size_t t) { return accepted[t] ? 1.0 : 0.0; });
}

}  // namespace automala
