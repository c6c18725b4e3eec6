#include "evflex/datagen/copula.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <istream>
#include <numbers>
#include <numeric>
#include <ostream>
#include <sstream>

#include "evflex/datagen/rng.hpp"
#include "evflex/datagen/student_t.hpp"

namespace evflex::datagen {

namespace {

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream s(line);
  while (std::getline(s, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

std::string trim(std::string s) {
  const auto b = s.find_first_not_of(" \t\r");
  const auto e = s.find_last_not_of(" \t\r");
  return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
}

}  // namespace

std::vector<SessionRecord> read_records_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("records: empty input");
  const auto header = split_csv(trim(line));
  if (header.size() != 3 || trim(header[0]) != "arrival_iso8601" || trim(header[1]) != "departure_iso8601" ||
      trim(header[2]) != "energy_kwh")
    throw std::runtime_error("records: header must be arrival_iso8601,departure_iso8601,energy_kwh");
  std::vector<SessionRecord> out;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    line = trim(line);
    if (line.empty()) continue;
    const auto cells = split_csv(line);
    if (cells.size() != 3) throw std::runtime_error("records line " + std::to_string(lineno) + ": expected 3 fields");
    try {
      SessionRecord r;
      r.arrival = parse_timestamp(trim(cells[0]));
      r.departure = parse_timestamp(trim(cells[1]));
      std::size_t used = 0;
      const auto e = trim(cells[2]);
      r.energy_kwh = std::stod(e, &used);
      if (used != e.size()) throw std::invalid_argument("energy");
      out.push_back(r);
    } catch (const std::exception& ex) {
      throw std::runtime_error("records line " + std::to_string(lineno) + ": " + ex.what());
    }
  }
  return out;
}

void write_records_csv(const std::vector<SessionRecord>& records, std::ostream& out) {
  out << "arrival_iso8601,departure_iso8601,energy_kwh\n";
  char buf[32];
  for (const auto& r : records) {
    std::snprintf(buf, sizeof buf, "%.3f", r.energy_kwh);
    out << format_timestamp(r.arrival) << ',' << format_timestamp(r.departure) << ',' << buf << '\n';
  }
}

EcdfMarginal::EcdfMarginal(std::vector<double> sample) : sorted_(std::move(sample)) {
  std::sort(sorted_.begin(), sorted_.end());
  if (sorted_.size() < 2 || sorted_.front() == sorted_.back())
    throw std::invalid_argument("marginal needs at least two distinct values");
}

double EcdfMarginal::inverse(double u) const {
  const double pos = std::clamp(u, 0.0, 1.0) * static_cast<double>(sorted_.size() - 1);
  const auto i = static_cast<std::size_t>(std::floor(pos));
  if (i + 1 >= sorted_.size()) return sorted_.back();
  const double f = pos - static_cast<double>(i);
  return sorted_[i] + f * (sorted_[i + 1] - sorted_[i]);
}

double EcdfMarginal::cdf(double x) const {
  if (x < sorted_.front()) return 0.0;
  if (x >= sorted_.back()) return 1.0;
  // Last order statistic <= x; within a run of ties the distribution jumps.
  const auto it = std::upper_bound(sorted_.begin(), sorted_.end(), x);
  const auto i = static_cast<std::size_t>(it - sorted_.begin()) - 1;
  const double n1 = static_cast<double>(sorted_.size() - 1);
  const double f = (x - sorted_[i]) / (sorted_[i + 1] - sorted_[i]);
  return (static_cast<double>(i) + f) / n1;
}

double hour_of_day(Timestamp t) {
  const auto day = std::chrono::floor<std::chrono::days>(t);
  return std::chrono::duration<double, std::ratio<3600>>(t - day).count();
}

double kendall_tau(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size()) throw std::invalid_argument("kendall tau needs equal lengths");
  const std::size_t n = x.size();
  long long concordant = 0, discordant = 0, tie_x = 0, tie_y = 0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double dx = x[i] - x[j];
      const double dy = y[i] - y[j];
      if (dx == 0.0 && dy == 0.0) continue;
      if (dx == 0.0) {
        ++tie_x;
      } else if (dy == 0.0) {
        ++tie_y;
      } else if ((dx > 0) == (dy > 0)) {
        ++concordant;
      } else {
        ++discordant;
      }
    }
  }
  const double denom = std::sqrt(static_cast<double>(concordant + discordant + tie_x) *
                                 static_cast<double>(concordant + discordant + tie_y));
  return denom > 0.0 ? static_cast<double>(concordant - discordant) / denom : 0.0;
}

double ks_statistic(std::vector<double> sample, const std::function<double(double)>& cdf) {
  std::sort(sample.begin(), sample.end());
  const double n = static_cast<double>(sample.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sample.size(); ++i) {
    const double f = cdf(sample[i]);
    d = std::max({d, static_cast<double>(i + 1) / n - f, f - static_cast<double>(i) / n});
  }
  return d;
}

bool project_to_correlation(Eigen::Matrix3d& r, double min_eigenvalue) {
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(r);
  Eigen::Vector3d ev = es.eigenvalues();
  if (ev.minCoeff() >= min_eigenvalue) return false;
  ev = ev.cwiseMax(min_eigenvalue);
  Eigen::Matrix3d fixed = es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().transpose();
  const Eigen::Vector3d s = fixed.diagonal().cwiseSqrt().cwiseInverse();
  r = s.asDiagonal() * fixed * s.asDiagonal();
  r.diagonal().setOnes();
  return true;
}

namespace {

// Pseudo-observations rank/(n+1); equal values are ranked by position.
std::vector<double> pseudo_observations(const std::vector<double>& v) {
  const std::size_t n = v.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
  std::vector<double> u(n);
  for (std::size_t r = 0; r < n; ++r) u[order[r]] = static_cast<double>(r + 1) / static_cast<double>(n + 1);
  return u;
}

double copula_log_likelihood(const std::array<std::vector<double>, kCopulaDim>& u, const Eigen::Matrix3d& r, int nu) {
  const double v = nu;
  const double d = kCopulaDim;
  Eigen::LLT<Eigen::Matrix3d> llt(r);
  const double log_det = 2.0 * llt.matrixL().toDenseMatrix().diagonal().array().log().sum();
  const double log_norm = std::lgamma(0.5 * (v + d)) - std::lgamma(0.5 * v) - 0.5 * d * std::log(v * std::numbers::pi) -
                          0.5 * log_det;
  const std::size_t n = u[0].size();
  // Every column holds the values k/(n+1), k = 1..n, so one quantile
  // table serves all three.
  std::vector<double> q(n);
  for (std::size_t i = 0; i < n; ++i) q[i] = student_t_quantile(static_cast<double>(i + 1) / (n + 1), v);
  auto quantile_of = [&](double uu) {
    const auto rank = static_cast<std::size_t>(std::llround(uu * static_cast<double>(n + 1))) - 1;
    return q[rank];
  };
  double total = 0.0;
  Eigen::Vector3d z;
  for (std::size_t i = 0; i < n; ++i) {
    double marg = 0.0;
    for (int j = 0; j < kCopulaDim; ++j) {
      z[j] = quantile_of(u[j][i]);
      marg += student_t_log_pdf(z[j], v);
    }
    const double m = z.dot(llt.solve(z));
    total += log_norm - 0.5 * (v + d) * std::log1p(m / v) - marg;
  }
  return total;
}

}  // namespace

CopulaModel fit_copula(const std::vector<SessionRecord>& records) {
  if (static_cast<int>(records.size()) < kMinFitRecords)
    throw FitError("copula fit needs at least " + std::to_string(kMinFitRecords) + " records, got " +
                   std::to_string(records.size()));
  std::array<std::vector<double>, kCopulaDim> cols;
  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto& r = records[i];
    if (r.departure <= r.arrival) throw FitError("record " + std::to_string(i) + ": departure not after arrival");
    if (!(r.energy_kwh > 0.0) || !std::isfinite(r.energy_kwh))
      throw FitError("record " + std::to_string(i) + ": energy must be positive");
    cols[0].push_back(hour_of_day(r.arrival));
    cols[1].push_back(std::chrono::duration<double, std::ratio<3600>>(r.departure - r.arrival).count());
    cols[2].push_back(r.energy_kwh);
  }
  for (int j = 0; j < kCopulaDim; ++j) {
    const auto [lo, hi] = std::minmax_element(cols[j].begin(), cols[j].end());
    if (*lo == *hi) throw FitError(std::string("column ") + kCopulaColumns[j] + " is constant");
  }

  CopulaModel model;
  for (int a = 0; a < kCopulaDim; ++a) {
    for (int b = a + 1; b < kCopulaDim; ++b) {
      const double tau = kendall_tau(cols[a], cols[b]);
      model.kendall_tau(a, b) = model.kendall_tau(b, a) = tau;
      model.correlation(a, b) = model.correlation(b, a) = std::sin(0.5 * std::numbers::pi * tau);
    }
  }
  model.projected = project_to_correlation(model.correlation);

  std::array<std::vector<double>, kCopulaDim> u;
  for (int j = 0; j < kCopulaDim; ++j) u[j] = pseudo_observations(cols[j]);
  double best = -std::numeric_limits<double>::infinity();
  for (int nu = kNuMin; nu <= kNuMax; ++nu) {
    const double ll = copula_log_likelihood(u, model.correlation, nu);
    if (ll > best) {
      best = ll;
      model.nu = nu;
    }
  }
  for (int j = 0; j < kCopulaDim; ++j) model.marginals[j] = EcdfMarginal(std::move(cols[j]));
  return model;
}

CopulaDraw sample_copula_at(const CopulaModel& model, std::uint64_t seed, std::uint64_t index) {
  CounterRng rng(seed, stream_id("copula", index));
  const Eigen::Matrix3d l = model.correlation.llt().matrixL();
  Eigen::Vector3d g;
  for (int j = 0; j < kCopulaDim; ++j) g[j] = rng.normal();
  const double w = rng.chi_square(model.nu);
  const Eigen::Vector3d z = l * g / std::sqrt(w / model.nu);
  std::array<double, kCopulaDim> v{};
  for (int j = 0; j < kCopulaDim; ++j) v[j] = model.marginals[j].inverse(student_t_cdf(z[j], model.nu));
  return {v[0], v[0] + v[1], v[2]};
}

std::vector<CopulaDraw> sample_copula(const CopulaModel& model, int count, std::uint64_t seed) {
  std::vector<CopulaDraw> out;
  out.reserve(std::max(count, 0));
  for (int i = 0; i < count; ++i) out.push_back(sample_copula_at(model, seed, static_cast<std::uint64_t>(i)));
  return out;
}

}  // namespace evflex::datagen
