#pragma once

namespace fracbpx {

// Lanczos approximation (g = 7, 9 terms), reflection for x < 1/2.
double gamma_fn(double x);
double log_gamma_fn(double x);

// C(d,s) = 2^{2s} s Gamma(s + d/2) / (pi^{d/2} Gamma(1 - s)).
double constant_Cds(int d, double s);

}  // namespace fracbpx
