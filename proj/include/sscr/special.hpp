#pragma once

namespace sscr {

double norm_pdf(double x);
double norm_cdf(double x);
double norm_quantile(double p);

// regularized incomplete gamma functions
double gamma_p(double a, double x);
double gamma_q(double a, double x);

// upper tail P[X > x] for X ~ chi squared with df degrees of freedom
double chisq_upper(double x, double df);

// principal branch of the Lambert W function, x >= -1/e
double lambert_w0(double x);

double digamma(double x);
double trigamma(double x);

} // namespace sscr
