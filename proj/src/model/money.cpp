#include "evflex/model/money.hpp"

#include <cstdio>
#include <cstdlib>

namespace evflex {

std::string Money::to_string() const {
  const bool negative = micros_ < 0;
  // Magnitude via unsigned arithmetic so INT64_MIN does not overflow.
  const auto mag = negative ? 0ULL - static_cast<unsigned long long>(micros_) : static_cast<unsigned long long>(micros_);
  char buf[40];
  std::snprintf(buf, sizeof buf, "%s%llu.%06llu", negative ? "-" : "", mag / 1000000ULL, mag % 1000000ULL);
  return buf;
}

}  // namespace evflex
