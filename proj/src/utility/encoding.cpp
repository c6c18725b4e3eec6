#include "evflex/utility/encoding.hpp"

#include <stdexcept>

namespace evflex {

namespace {

std::string indexed(const std::string& base, const std::string& tag, int k) {
  return base + "[" + tag + "," + std::to_string(k) + "]";
}

std::string tagged(const std::string& base, const std::string& tag) { return base + "[" + tag + "]"; }

}  // namespace

EncodedUtility encode(const UtilityCurve& curve) {
  if (curve.empty()) throw CurveError("cannot encode an empty utility curve");
  using Var = EncodedUtility::Var;
  EncodedUtility e;
  const int kappa = curve.segments();
  e.kappa = kappa;

  for (int k = 0; k <= kappa; ++k) e.columns.push_back({{Var::LambdaLow, k}, "lam_lo", 0.0, 1.0, false});
  for (int k = 0; k < kappa; ++k) e.columns.push_back({{Var::LambdaUp, k}, "lam_up", 0.0, 1.0, false});
  for (int k = 1; k <= kappa; ++k) e.columns.push_back({{Var::Segment, k}, "y", 0.0, 1.0, true});

  EncodedUtility::Row z_link{"z_link", {{{Var::Compensation, 0}, 1.0}}, 0.0, 0.0};
  EncodedUtility::Row phi_link{"phi_link", {{{Var::Phi, 0}, 1.0}}, 0.0, 0.0};
  EncodedUtility::Row convexity{"convexity", {}, 1.0, 1.0};
  for (int k = 0; k <= kappa; ++k) {
    if (curve.lower(k) != 0.0) z_link.terms.push_back({{Var::LambdaLow, k}, -curve.lower(k)});
    if (curve.breakpoint(k) != 0.0) phi_link.terms.push_back({{Var::LambdaLow, k}, -curve.breakpoint(k)});
    convexity.terms.push_back({{Var::LambdaLow, k}, 1.0});
    if (k == kappa) continue;
    if (curve.upper(k) != 0.0) z_link.terms.push_back({{Var::LambdaUp, k}, -curve.upper(k)});
    if (curve.breakpoint(k) != 0.0) phi_link.terms.push_back({{Var::LambdaUp, k}, -curve.breakpoint(k)});
    convexity.terms.push_back({{Var::LambdaUp, k}, 1.0});
  }
  e.rows.push_back(std::move(z_link));
  e.rows.push_back(std::move(phi_link));
  e.rows.push_back(std::move(convexity));

  for (int k = 0; k < kappa; ++k) {
    e.rows.push_back({"link_" + std::to_string(k + 1),
                      {{{Var::LambdaUp, k}, 1.0}, {{Var::LambdaLow, k + 1}, 1.0}, {{Var::Segment, k + 1}, -1.0}},
                      0.0,
                      0.0});
  }

  EncodedUtility::Row one_segment{"one_segment", {}, -lp::kInfinity, 1.0};
  for (int k = 1; k <= kappa; ++k) one_segment.terms.push_back({{Var::Segment, k}, 1.0});
  e.rows.push_back(std::move(one_segment));
  return e;
}

EncodedUtility::Installed EncodedUtility::install(lp::LinearProgram& lp, int phi_column, int compensation_column,
                                                  const std::string& tag) const {
  Installed out;
  out.lambda_low.assign(kappa + 1, -1);
  out.lambda_up.assign(kappa, -1);
  out.segment.assign(kappa, -1);
  for (const auto& c : columns) {
    const int j = lp.add_column(indexed(c.name, tag, c.ref.k), c.lower, c.upper, 0.0);
    switch (c.ref.var) {
      case Var::LambdaLow: out.lambda_low[c.ref.k] = j; break;
      case Var::LambdaUp: out.lambda_up[c.ref.k] = j; break;
      case Var::Segment: out.segment[c.ref.k - 1] = j; break;
      default: throw std::logic_error("unexpected encoding column");
    }
  }
  auto resolve = [&](const Ref& r) {
    switch (r.var) {
      case Var::Phi: return phi_column;
      case Var::Compensation: return compensation_column;
      case Var::LambdaLow: return out.lambda_low[r.k];
      case Var::LambdaUp: return out.lambda_up[r.k];
      case Var::Segment: return out.segment[r.k - 1];
    }
    throw std::logic_error("unresolved encoding reference");
  };
  for (const auto& r : rows) {
    std::vector<lp::Term> terms;
    terms.reserve(r.terms.size());
    for (const auto& t : r.terms) terms.push_back({resolve(t.ref), t.coefficient});
    out.rows.push_back(lp.add_row(tagged(r.name, tag), std::move(terms), r.lower, r.upper));
  }
  return out;
}

}  // namespace evflex
