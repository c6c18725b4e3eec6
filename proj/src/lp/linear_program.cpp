#include "evflex/lp/linear_program.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <unordered_set>

namespace evflex::lp {

int LinearProgram::add_column(std::string name, double lower, double upper, double objective) {
  columns_.push_back({std::move(name), lower, upper, objective});
  return num_columns() - 1;
}

int LinearProgram::add_row(std::string name, std::vector<Term> terms, double lower, double upper) {
  rows_.push_back({std::move(name), std::move(terms), lower, upper});
  return num_rows() - 1;
}

void LinearProgram::set_column_bounds(int column, double lower, double upper) {
  auto& c = columns_.at(column);
  c.lower = lower;
  c.upper = upper;
}

void LinearProgram::set_objective(int column, double coefficient) { columns_.at(column).objective = coefficient; }

double LinearProgram::objective_value(const std::vector<double>& x) const {
  double sum = 0.0;
  for (int j = 0; j < num_columns(); ++j) sum += columns_[j].objective * x.at(j);
  return sum;
}

double LinearProgram::row_activity(int i, const std::vector<double>& x) const {
  double sum = 0.0;
  for (const auto& t : rows_.at(i).terms) sum += t.coefficient * x.at(t.column);
  return sum;
}

double LinearProgram::max_primal_violation(const std::vector<double>& x) const {
  auto scaled = [](double excess, double bound) { return excess / std::max(1.0, std::abs(bound)); };
  double worst = 0.0;
  for (int j = 0; j < num_columns(); ++j) {
    const auto& c = columns_[j];
    worst = std::max(worst, scaled(c.lower - x.at(j), c.lower));
    worst = std::max(worst, scaled(x.at(j) - c.upper, c.upper));
  }
  for (int i = 0; i < num_rows(); ++i) {
    const double a = row_activity(i, x);
    const auto& r = rows_[i];
    if (std::isfinite(r.lower)) worst = std::max(worst, scaled(r.lower - a, r.lower));
    if (std::isfinite(r.upper)) worst = std::max(worst, scaled(a - r.upper, r.upper));
  }
  return worst;
}

void LinearProgram::check_well_formed() const {
  for (const auto& c : columns_) {
    if (!std::isfinite(c.lower) || !std::isfinite(c.upper))
      throw std::invalid_argument("column " + c.name + " has an infinite bound");
    if (c.lower > c.upper) throw std::invalid_argument("column " + c.name + " has crossed bounds");
    if (!std::isfinite(c.objective)) throw std::invalid_argument("column " + c.name + " has a non-finite cost");
  }
  std::unordered_set<int> seen;
  for (const auto& r : rows_) {
    if (std::isnan(r.lower) || std::isnan(r.upper) || r.lower > r.upper)
      throw std::invalid_argument("row " + r.name + " has invalid bounds");
    if (!std::isfinite(r.lower) && !std::isfinite(r.upper))
      throw std::invalid_argument("row " + r.name + " is free");
    seen.clear();
    for (const auto& t : r.terms) {
      if (t.column < 0 || t.column >= num_columns())
        throw std::invalid_argument("row " + r.name + " references a missing column");
      if (!seen.insert(t.column).second)
        throw std::invalid_argument("row " + r.name + " repeats column " + columns_[t.column].name);
      if (!std::isfinite(t.coefficient)) throw std::invalid_argument("row " + r.name + " has a non-finite coefficient");
    }
  }
}

namespace {

std::string mps_name(const std::string& prefix, int index) {
  std::ostringstream s;
  s << prefix << index;
  return s.str();
}

std::string mps_number(double v) {
  std::ostringstream s;
  s << std::setprecision(12) << v;
  return s.str();
}

void mps_field(std::ostream& out, const std::string& col, const std::string& row, double v) {
  out << "    " << std::left << std::setw(8) << col << "  " << std::setw(8) << row << "  " << std::right
      << std::setw(12) << mps_number(v) << '\n';
}

}  // namespace

// Fixed-format names are limited to 8 characters, so rows are emitted as
// R<index> and columns as C<index>; a comment block maps them back.
void write_fixed_mps(const LinearProgram& lp, std::ostream& out, const std::string& name) {
  out << "* columns:\n";
  for (int j = 0; j < lp.num_columns(); ++j) out << "*   C" << j << " " << lp.column(j).name << '\n';
  out << "* rows:\n";
  for (int i = 0; i < lp.num_rows(); ++i) out << "*   R" << i << " " << lp.row(i).name << '\n';
  out << "NAME          " << name << '\n';
  out << "ROWS\n N  COST\n";
  for (int i = 0; i < lp.num_rows(); ++i) {
    const auto& r = lp.row(i);
    const char* type = r.lower == r.upper ? "E" : (std::isfinite(r.lower) ? "G" : "L");
    out << " " << type << "  " << mps_name("R", i) << '\n';
  }
  std::vector<std::vector<std::pair<int, double>>> by_column(lp.num_columns());
  for (int i = 0; i < lp.num_rows(); ++i)
    for (const auto& t : lp.row(i).terms) by_column[t.column].emplace_back(i, t.coefficient);
  out << "COLUMNS\n";
  for (int j = 0; j < lp.num_columns(); ++j) {
    const auto col = mps_name("C", j);
    if (lp.column(j).objective != 0.0) mps_field(out, col, "COST", -lp.column(j).objective);
    for (const auto& [i, v] : by_column[j]) mps_field(out, col, mps_name("R", i), v);
  }
  out << "RHS\n";
  for (int i = 0; i < lp.num_rows(); ++i) {
    const auto& r = lp.row(i);
    const double rhs = std::isfinite(r.lower) ? r.lower : r.upper;
    if (rhs != 0.0) mps_field(out, "RHS", mps_name("R", i), rhs);
  }
  out << "RANGES\n";
  for (int i = 0; i < lp.num_rows(); ++i) {
    const auto& r = lp.row(i);
    if (r.lower != r.upper && std::isfinite(r.lower) && std::isfinite(r.upper))
      mps_field(out, "RNG", mps_name("R", i), r.upper - r.lower);
  }
  out << "BOUNDS\n";
  for (int j = 0; j < lp.num_columns(); ++j) {
    const auto& c = lp.column(j);
    const auto col = mps_name("C", j);
    if (c.lower == c.upper) {
      out << " FX BND       " << std::left << std::setw(8) << col << "  " << std::right << std::setw(12)
          << mps_number(c.lower) << '\n';
      continue;
    }
    if (c.lower != 0.0)
      out << " LO BND       " << std::left << std::setw(8) << col << "  " << std::right << std::setw(12)
          << mps_number(c.lower) << '\n';
    out << " UP BND       " << std::left << std::setw(8) << col << "  " << std::right << std::setw(12)
        << mps_number(c.upper) << '\n';
  }
  out << "ENDATA\n";
}

}  // namespace evflex::lp
