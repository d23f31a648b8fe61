#include "pcs/screenstats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "pcs/error.hpp"

namespace pcs {

namespace {

// Continued fraction for I_x(a, b), valid for x < (a + 1) / (a + b + 2).
double beta_continued_fraction(double x, double a, double b) {
  constexpr int kMaxIter = 500;
  constexpr double kEps = 1e-16;
  constexpr double kTiny = 1e-300;

  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::fabs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIter; ++m) {
    const double m2 = 2.0 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < kEps) return h;
  }
  return h;
}

}  // namespace

void validate(const ScreenParams& params) {
  if (params.n < 3) {
    throw Error(ErrorCode::InvalidArgument, "n must be at least 3, got " + std::to_string(params.n));
  }
  if (params.p < 1 || params.q < 1) {
    throw Error(ErrorCode::InvalidArgument, "p and q must be positive");
  }
  if (params.delta < 1 || params.delta > params.q) {
    throw Error(ErrorCode::DegreeOutOfRange, "delta=" + std::to_string(params.delta) +
                                                 " must lie in [1, q=" + std::to_string(params.q) + "]");
  }
  if (!(params.rho >= 0.0 && params.rho <= 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "rho must lie in [0, 1]");
  }
}

double sphere_area(Index n) {
  if (n < 3) throw Error(ErrorCode::InvalidArgument, "sphere_area needs n >= 3");
  const double h = 0.5 * static_cast<double>(n - 1);
  return 2.0 * std::exp(h * std::log(std::numbers::pi) - std::lgamma(h));
}

double incomplete_beta(double x, double a, double b) {
  if (!(a > 0.0 && b > 0.0)) throw Error(ErrorCode::InvalidArgument, "incomplete_beta needs a, b > 0");
  if (!(x >= 0.0 && x <= 1.0)) throw Error(ErrorCode::InvalidArgument, "incomplete_beta needs x in [0, 1]");
  if (x == 0.0) return 0.0;
  if (x == 1.0) return 1.0;
  const double log_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) + a * std::log(x) +
                           b * std::log1p(-x);
  const double front = std::exp(log_front);
  if (x < (a + 1.0) / (a + b + 2.0)) {
    return front * beta_continued_fraction(x, a, b) / a;
  }
  return 1.0 - front * beta_continued_fraction(1.0 - x, b, a) / b;
}

double p0(Index n, double rho) {
  if (n < 3) throw Error(ErrorCode::InvalidArgument, "p0 needs n >= 3");
  if (!(rho >= 0.0 && rho <= 1.0)) throw Error(ErrorCode::InvalidArgument, "p0 needs rho in [0, 1]");
  // 1 - rho^2 without cancellation near rho = 1.
  const double x = (1.0 - rho) * (1.0 + rho);
  return incomplete_beta(x, 0.5 * static_cast<double>(n - 2), 0.5);
}

double binomial_coefficient(Index n, Index k) {
  if (k < 0 || k > n) return 0.0;
  k = std::min(k, n - k);
  double out = 1.0;
  for (Index i = 1; i <= k; ++i) {
    out = out * static_cast<double>(n - k + i) / static_cast<double>(i);
  }
  return std::round(out);
}

double xi(const ScreenParams& params) {
  validate(params);
  return static_cast<double>(params.p) * binomial_coefficient(params.q, params.delta) *
         std::pow(p0(params.n, params.rho), static_cast<double>(params.delta));
}

double kappa(Index n, Index delta, double e_limit) {
  if (n < 3 || delta < 1) throw Error(ErrorCode::InvalidArgument, "kappa needs n >= 3 and delta >= 1");
  const double base = e_limit * sphere_area(n) / static_cast<double>(n - 2);
  return std::exp(static_cast<double>(delta) * std::log(base) - std::lgamma(static_cast<double>(delta) + 1.0));
}

double pvalue(double xi_value) {
  if (!(xi_value >= 0.0)) throw Error(ErrorCode::InvalidArgument, "xi must be nonnegative");
  const double pv = -std::expm1(-xi_value);
  return std::clamp(pv, 0.0, 1.0);
}

double default_critical_constant(Index n, Index delta) {
  return sphere_area(n) * static_cast<double>(delta);
}

double critical_threshold(Index p, Index n, Index delta, std::optional<double> c) {
  if (p < 1 || n < 3 || delta < 1) {
    throw Error(ErrorCode::InvalidArgument, "critical_threshold needs p >= 1, n >= 3, delta >= 1");
  }
  const Index denom = delta * (n - 2) - 2;
  if (denom <= 0) {
    throw Error(ErrorCode::DegenerateExponent, "delta*(n-2)-2 = " + std::to_string(denom) +
                                                   " must be positive (n=" + std::to_string(n) +
                                                   ", delta=" + std::to_string(delta) + ")");
  }
  const double constant = c.value_or(default_critical_constant(n, delta));
  if (!(constant > 0.0)) throw Error(ErrorCode::InvalidArgument, "critical constant must be positive");
  const double exponent = -2.0 * static_cast<double>(delta) / static_cast<double>(denom);
  const double inner = std::pow(constant * static_cast<double>(p), exponent);
  if (!(inner <= 1.0)) {
    throw Error(ErrorCode::OutOfRange, "(c p)^exponent = " + std::to_string(inner) + " exceeds 1");
  }
  return std::sqrt(1.0 - inner);
}

double rho_for_xi(Index p, Index q, Index n, Index delta, double target) {
  ScreenParams params{p, q, n, delta, 0.0};
  validate(params);
  auto at = [&](double rho) {
    params.rho = rho;
    return xi(params);
  };
  if (target >= at(0.0)) return 0.0;
  if (target <= 0.0) return 1.0;
  double lo = 0.0;
  double hi = 1.0;
  for (int iter = 0; iter < 200 && hi - lo > 4.0 * std::numeric_limits<double>::epsilon(); ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (at(mid) > target) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace pcs
