#pragma once

namespace evflex::datagen {

/// Regularized incomplete beta I_x(a, b), continued fraction (modified Lentz).
double incomplete_beta(double a, double b, double x);

/// Student-t CDF with nu > 0 degrees of freedom.
double student_t_cdf(double x, double nu);
/// Inverse CDF for p in (0, 1); safeguarded Newton.
double student_t_quantile(double p, double nu);
double student_t_log_pdf(double x, double nu);

}  // namespace evflex::datagen
