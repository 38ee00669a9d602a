#pragma once

namespace stable_stein {

// Gamma function for x > 0. The double overload uses a Lanczos approximation
// (g = 7, 9 terms); the long double overload uses a shifted Stirling series and
// serves as the extended-precision path.
double gamma_fn(double x);
long double gamma_fn(long double x);

double log_gamma_fn(double x);
long double log_gamma_fn(long double x);

double beta_fn(double x, double y);
long double beta_fn(long double x, long double y);

// d_alpha = alpha 2^(alpha-1) Gamma((1+alpha)/2) / (sqrt(pi) Gamma(1-alpha/2)), alpha in (0,2).
double d_alpha(double alpha);
long double d_alpha(long double alpha);

// Reciprocal of the integral of (1 - cos y)/|y|^(1+alpha) over the real line,
// evaluated by series on [0,1], whole-period quadrature beyond, and an
// asymptotic tail. Independent of the Gamma-function closed form.
double d_alpha_by_quadrature(double alpha);

// D_alpha = (4/pi) sqrt((2 alpha+1)/alpha) B((alpha-1)/alpha, 2/alpha), alpha in (1,2).
double D_alpha(double alpha);
long double D_alpha(long double alpha);

// D_{alpha,gamma}, alpha in (1,2), gamma in (0,1).
double D_alpha_gamma(double alpha, double gamma);
long double D_alpha_gamma(long double alpha, long double gamma);

// Tail constant of the unit symmetric stable law: P(X > x) ~ c_alpha x^-alpha.
double stable_tail_constant(double alpha);

struct SteinConstants {
    double alpha;
    double d_alpha;
    double D_alpha;

    static SteinConstants for_alpha(double alpha);
    double D_gamma(double gamma) const;
};

}  // namespace stable_stein
