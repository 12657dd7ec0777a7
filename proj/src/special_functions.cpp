#include "fracbpx/special_functions.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace fracbpx {

namespace {

constexpr double kLanczosG = 7.0;
constexpr std::array<double, 9> kLanczosCoef = {
    0.99999999999980993,     676.5203681218851,     -1259.1392167224028,
    771.32342877765313,      -176.61502916214059,   12.507343278686905,
    -0.13857109526572012,    9.9843695780195716e-6, 1.5056327351493116e-7};

double lanczos_series(double z) {
  double a = kLanczosCoef[0];
  for (std::size_t k = 1; k < kLanczosCoef.size(); ++k) a += kLanczosCoef[k] / (z + static_cast<double>(k));
  return a;
}

}  // namespace

double gamma_fn(double x) {
  constexpr double pi = std::numbers::pi;
  if (x < 0.5) {
    return pi / (std::sin(pi * x) * gamma_fn(1.0 - x));
  }
  const double z = x - 1.0;
  const double t = z + kLanczosG + 0.5;
  return std::sqrt(2.0 * pi) * std::pow(t, z + 0.5) * std::exp(-t) * lanczos_series(z);
}

double log_gamma_fn(double x) {
  constexpr double pi = std::numbers::pi;
  if (x <= 0.0) throw std::domain_error("log_gamma_fn: argument must be positive");
  if (x < 0.5) return std::log(pi / std::sin(pi * x)) - log_gamma_fn(1.0 - x);
  const double z = x - 1.0;
  const double t = z + kLanczosG + 0.5;
  return 0.5 * std::log(2.0 * pi) + (z + 0.5) * std::log(t) - t + std::log(lanczos_series(z));
}

double constant_Cds(int d, double s) {
  if (!(s > 0.0 && s < 1.0)) throw std::domain_error("constant_Cds: s must lie in (0,1)");
  if (d < 1 || d > 3) throw std::domain_error("constant_Cds: d must be 1, 2 or 3");
  const double half_d = 0.5 * d;
  return std::pow(2.0, 2.0 * s) * s * gamma_fn(s + half_d) /
         (std::pow(std::numbers::pi, half_d) * gamma_fn(1.0 - s));
}

}  // namespace fracbpx
