// Writes the synthetic seed corpus: weekday office-parking sessions from
// June to December 2021, drawn from a fixed t copula (nu = 6) over
// (arrival hour, duration, energy) with these marginals:
//   arrival  = 6 + 6 u^1.5        [h]
//   duration = 2 + 9 u            [h]
//   energy   = 3 + 57 u^2.65      [kWh]
// and correlations arrival/duration -0.3, duration/energy 0.5,
// arrival/energy 0.1.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <Eigen/Cholesky>

#include "evflex/datagen/copula.hpp"
#include "evflex/datagen/rng.hpp"
#include "evflex/datagen/student_t.hpp"

using namespace evflex;
using namespace evflex::datagen;

int main(int argc, char** argv) {
  const std::string out_path = argc > 1 ? argv[1] : "seed_corpus.csv";
  const int count = argc > 2 ? std::atoi(argv[2]) : 1760;
  constexpr std::uint64_t kSeed = 20210601;
  constexpr int kNu = 6;

  Eigen::Matrix3d r;
  r << 1.0, -0.3, 0.1,  //
      -0.3, 1.0, 0.5,   //
      0.1, 0.5, 1.0;
  const Eigen::Matrix3d l = r.llt().matrixL();

  using namespace std::chrono;
  const sys_days first = year{2021} / June / 1;
  const sys_days last = year{2021} / December / 31;
  std::vector<sys_days> weekdays;
  for (sys_days d = first; d <= last; d += days{1}) {
    const weekday w{d};
    if (w != Saturday && w != Sunday) weekdays.push_back(d);
  }

  std::vector<SessionRecord> records;
  records.reserve(count);
  for (int i = 0; i < count; ++i) {
    CounterRng rng(kSeed, stream_id("corpus", i));
    const auto day = weekdays[static_cast<std::size_t>(rng.uniform() * weekdays.size())];
    Eigen::Vector3d g(rng.normal(), rng.normal(), rng.normal());
    const double w = std::sqrt(rng.chi_square(kNu) / kNu);
    const Eigen::Vector3d z = l * g / w;
    double u[3];
    for (int j = 0; j < 3; ++j) u[j] = student_t_cdf(z[j], kNu);

    const double arrival_h = 6.0 + 6.0 * std::pow(u[0], 1.5);
    const double duration_h = 2.0 + 9.0 * u[1];
    const double energy = 3.0 + 57.0 * std::pow(u[2], 2.65);

    // whole minutes, like a charge point log
    const auto arrival = sys_seconds(day) + minutes(std::lround(arrival_h * 60.0));
    const auto departure = arrival + minutes(std::lround(duration_h * 60.0));
    records.push_back({arrival, departure, std::round(energy * 1000.0) / 1000.0});
  }

  std::stable_sort(records.begin(), records.end(),
                   [](const SessionRecord& a, const SessionRecord& b) { return a.arrival < b.arrival; });

  std::ofstream out(out_path);
  if (!out) {
    std::cerr << "cannot write " << out_path << '\n';
    return 1;
  }
  write_records_csv(records, out);
  std::cerr << "wrote " << records.size() << " records to " << out_path << '\n';
  return 0;
}
