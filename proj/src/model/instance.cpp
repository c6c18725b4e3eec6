#include "evflex/model/instance.hpp"

#include <algorithm>
#include <stdexcept>

namespace evflex {

double acceptable_energy(const SessionSpec& session) { return session.gamma * session.required_energy_kwh; }

double min_price(const SessionSpec& session) {
  if (session.price_eur_per_kwh.empty()) throw std::invalid_argument("session " + session.id + " has no prices");
  return *std::min_element(session.price_eur_per_kwh.begin(), session.price_eur_per_kwh.end());
}

double Schedule::grid_energy(int n, double delta_t_hours) const {
  double sum = 0.0;
  for (int t = 0; t < slots_; ++t) sum += at(n, t);
  return delta_t_hours * sum;
}

double Schedule::slot_power(int t) const {
  double sum = 0.0;
  for (int n = 0; n < sessions_; ++n) sum += at(n, t);
  return sum;
}

}  // namespace evflex
