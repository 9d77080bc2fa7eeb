#include "ptffool/ftmol.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <numbers>

#include <Eigen/Dense>
#include <boost/math/special_functions/bessel.hpp>

#include "ptffool/common.hpp"
#include "ptffool/quadrature.hpp"

namespace ptffool {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kRadialLimit = 400.0;  // b-hat integrals run to |t| = kRadialLimit
constexpr double kSeriesCutoff = 1e-2;

void check_dim(unsigned d, unsigned max_d, const char* what) {
  require(d >= 1 && d <= max_d, ErrorKind::invalid_argument,
          std::string(what) + " supports 1 <= d <= " + std::to_string(max_d));
}

// J_mu(z) / z^mu, with its power series for small z.
double bessel_ratio(double mu, double z) {
  if (std::abs(z) < 1e-3) {
    double s = 0.0;
    double term = 1.0 / std::tgamma(mu + 1.0);
    for (int m = 0; m < 6; ++m) {
      s += term;
      term *= -(z * z / 4.0) / ((m + 1) * (m + 1 + mu));
    }
    return s / std::pow(2.0, mu);
  }
  return boost::math::cyl_bessel_j(mu, z) / std::pow(z, mu);
}

// Mass of B beyond radius L, from the asymptotic B(rho) ~ (8 C_d / pi)
// cos^2(.) rho^-(d+3) averaged over a period.
double radial_tail(unsigned d, double L) {
  return sphere_area(d) * 4.0 * bump_constant(d) / (3.0 * kPi * L * L * L);
}

double radial_mass(unsigned d, double r0, double r1) {
  const double area = sphere_area(d);
  return area * integrate_panels(
                    [&](double rho) { return big_b(d, rho) * std::pow(rho, static_cast<int>(d) - 1); },
                    r0, r1, 0.5);
}

double factorial(unsigned n) { return std::tgamma(n + 1.0); }

double binomial(unsigned n, unsigned k) { return factorial(n) / (factorial(k) * factorial(n - k)); }

double multi_factorial(const MultiIndex& a) {
  double f = 1.0;
  for (unsigned v : a) f *= factorial(v);
  return f;
}

unsigned order(const MultiIndex& a) {
  unsigned s = 0;
  for (unsigned v : a) s += v;
  return s;
}

// Real factor turning the transform of x^alpha b into d^alpha bhat:
// (-i)^|alpha| for the cosine part (|alpha| even) and (-i)^(|alpha|+1) for
// the sine part (|alpha| odd).
double derivative_sign(unsigned total) {
  const unsigned e = total % 2 == 0 ? total : total + 1;
  return (e / 2) % 2 == 0 ? 1.0 : -1.0;
}

}  // namespace

double bump_constant(unsigned d) {
  check_dim(d, 64, "bump_constant");
  const double dd = d;
  return std::tgamma(dd / 2.0) * dd * (dd + 2.0) * (dd + 4.0) / (16.0 * std::pow(kPi, dd / 2.0));
}

double sphere_area(unsigned d) {
  const double dd = d;
  return 2.0 * std::pow(kPi, dd / 2.0) / std::tgamma(dd / 2.0);
}

double bump_value(unsigned d, std::span<const double> x) {
  require(x.size() == d, ErrorKind::invalid_argument, "point dimension mismatch");
  double r2 = 0.0;
  for (double v : x) r2 += v * v;
  if (r2 >= 1.0) return 0.0;
  return std::sqrt(bump_constant(d)) * (1.0 - r2);
}

double bump_norm_squared_quadrature(unsigned d) {
  const double cd = bump_constant(d);
  return sphere_area(d) * cd *
         integrate([&](double r) { return (1 - r * r) * (1 - r * r) * std::pow(r, static_cast<int>(d) - 1); },
                   0.0, 1.0, 16);
}

double bhat_closed(unsigned d, double rho) {
  check_dim(d, 4, "bhat");
  rho = std::abs(rho);
  const double cd = bump_constant(d);
  if (d == 1) {
    const double front = std::sqrt(cd / (2.0 * kPi)) * 4.0;
    if (rho < kSeriesCutoff) {
      // (sin t - t cos t) / t^3 = sum_{k>=1} (-1)^(k+1) 2k t^(2k-2) / (2k+1)!
      double s = 0.0;
      double t2k = 1.0;
      for (int k = 1; k <= 6; ++k) {
        s += (k % 2 == 1 ? 1.0 : -1.0) * 2.0 * k * t2k / factorial(2 * k + 1);
        t2k *= rho * rho;
      }
      return front * s;
    }
    return front * (std::sin(rho) - rho * std::cos(rho)) / (rho * rho * rho);
  }
  return 2.0 * std::sqrt(cd) * bessel_ratio(d / 2.0 + 1.0, rho);
}

double bhat_quadrature(unsigned d, double rho) {
  check_dim(d, 4, "bhat");
  rho = std::abs(rho);
  const double cd = bump_constant(d);
  const double width = std::min(1.0, 3.0 / std::max(rho, 1e-300));
  if (d == 1) {
    const double s = integrate_panels([&](double x) { return (1 - x * x) * std::cos(x * rho); }, 0.0,
                                      1.0, width, 20);
    return std::sqrt(cd) * 2.0 * s / std::sqrt(2.0 * kPi);
  }
  const double nu = d / 2.0 - 1.0;
  const double s = integrate_panels(
      [&](double r) {
        return (1 - r * r) * std::pow(r, static_cast<int>(d) - 1) * bessel_ratio(nu, r * rho);
      },
      0.0, 1.0, width, 20);
  return std::sqrt(cd) * s;
}

double bhat_value(unsigned d, std::span<const double> t) {
  require(t.size() == d, ErrorKind::invalid_argument, "point dimension mismatch");
  double r2 = 0.0;
  for (double v : t) r2 += v * v;
  return d == 1 ? bhat_closed(1, std::sqrt(r2)) : bhat_quadrature(d, std::sqrt(r2));
}

double big_b(unsigned d, double rho) {
  const double v = bhat_closed(d, rho);
  return v * v;
}

double big_b_c(unsigned d, double c, std::span<const double> x) {
  require(x.size() == d, ErrorKind::invalid_argument, "point dimension mismatch");
  double r2 = 0.0;
  for (double v : x) r2 += v * v;
  return std::pow(c, static_cast<int>(d)) * big_b(d, c * std::sqrt(r2));
}

UnitIntegralReport check_unit_integral(unsigned d, double c) {
  check_dim(d, 3, "unit integral");
  require(c > 0, ErrorKind::invalid_argument, "scale c must be positive");
  UnitIntegralReport r;
  r.d = d;
  r.c = c;
  const double area = sphere_area(d);
  const double cd = std::pow(c, static_cast<int>(d));
  const double body = area * integrate_panels(
                                 [&](double x) {
                                   return cd * big_b(d, c * x) * std::pow(x, static_cast<int>(d) - 1);
                                 },
                                 0.0, kRadialLimit / c, 0.5 / c);
  r.truncation = radial_tail(d, kRadialLimit);
  r.integral = body + r.truncation;
  r.error = std::abs(r.integral - 1.0);
  r.passed = r.error <= tolerances().unit_integral_tol;
  return r;
}

double bhat_derivative(unsigned d, const MultiIndex& alpha, std::span<const double> t) {
  check_dim(d, 2, "bhat_derivative");
  require(alpha.size() == d && t.size() == d, ErrorKind::invalid_argument, "dimension mismatch");
  const double cd = bump_constant(d);
  const unsigned total = order(alpha);
  const double sign = derivative_sign(total);
  double tn = 0.0;
  for (double v : t) tn += std::abs(v);
  const double width = std::min(0.5, 3.0 / std::max(tn, 1e-300));
  auto trig = [&](double phase) { return total % 2 == 0 ? std::cos(phase) : std::sin(phase); };
  if (d == 1) {
    const double s = integrate_panels(
        [&](double x) { return std::pow(x, static_cast<int>(alpha[0])) * (1 - x * x) * trig(x * t[0]); },
        -1.0, 1.0, width, 20);
    return sign * std::sqrt(cd) * s / std::sqrt(2.0 * kPi);
  }
  // Disk via x1 = sin(th), x2 = s cos(th); dx = cos^2(th) dth ds and
  // 1 - |x|^2 = cos^2(th) (1 - s^2).
  const double s = integrate_panels(
      [&](double th) {
        const double st = std::sin(th);
        const double ct = std::cos(th);
        const double inner = integrate_panels(
            [&](double u) {
              return std::pow(u, static_cast<int>(alpha[1])) * (1 - u * u) *
                     trig(t[0] * st + t[1] * u * ct);
            },
            -1.0, 1.0, width, 20);
        return std::pow(st, static_cast<int>(alpha[0])) * std::pow(ct, static_cast<int>(alpha[1]) + 4) * inner;
      },
      -kPi / 2, kPi / 2, width, 20);
  return sign * std::sqrt(cd) * s / (2.0 * kPi);
}

namespace {

// Tabulated d^alpha bhat on a 1-d grid for alpha = 0..amax.
std::vector<std::vector<double>> derivative_table_1d(unsigned amax, const std::vector<double>& ts) {
  const double cd = bump_constant(1);
  double tmax = 0.0;
  for (double t : ts) tmax = std::max(tmax, t);
  std::vector<double> xs;
  std::vector<double> ws;
  composite_rule(0.0, 1.0, std::min(0.5, 4.0 / std::max(tmax, 1.0)), 16, xs, ws);
  std::vector<std::vector<double>> table(amax + 1, std::vector<double>(ts.size()));
  const std::size_t blocks = std::min<std::size_t>(ts.size(), 64);
  parallel_blocks(blocks, [&](std::size_t b) {
    for (std::size_t i = ts.size() * b / blocks; i < ts.size() * (b + 1) / blocks; ++i) {
      std::vector<double> cs(amax + 1, 0.0);
      for (std::size_t j = 0; j < xs.size(); ++j) {
        const double x = xs[j];
        const double base = ws[j] * (1 - x * x);
        const double c = std::cos(x * ts[i]);
        const double s = std::sin(x * ts[i]);
        double xp = 1.0;
        for (unsigned a = 0; a <= amax; ++a) {
          cs[a] += base * xp * (a % 2 == 0 ? c : s);
          xp *= x;
        }
      }
      // Integrand parity makes the integral over [-1, 1] twice that over [0, 1].
      for (unsigned a = 0; a <= amax; ++a)
        table[a][i] = derivative_sign(a) * std::sqrt(cd) * 2.0 * cs[a] / std::sqrt(2.0 * kPi);
    }
  });
  return table;
}

double l1_norm_1d(unsigned beta, double& tail) {
  const double L = 200.0;
  std::vector<double> ts;
  std::vector<double> wt;
  composite_rule(0.0, L, 0.5, 16, ts, wt);
  const auto table = derivative_table_1d(beta, ts);
  DoubleDouble total;
  DoubleDouble outer;
  for (std::size_t i = 0; i < ts.size(); ++i) {
    double v = 0.0;
    for (unsigned a = 0; a <= beta; ++a) v += binomial(beta, a) * table[a][i] * table[beta - a][i];
    const double contrib = 2.0 * wt[i] * std::abs(v);
    total.add(contrib);
    if (ts[i] >= L / 2) outer.add(contrib);
  }
  // |d^beta B| decays like t^-4: mass beyond L is 1/7 of the mass on [L/2, L].
  tail = outer.value() / 7.0;
  return total.value() + tail;
}

double l1_norm_2d(const MultiIndex& beta, double& tail) {
  const double L = 32.0;
  const double cd = bump_constant(2);
  std::vector<double> ts;
  std::vector<double> wt;
  composite_rule(0.0, L, 1.0, 12, ts, wt);
  std::vector<double> th;
  std::vector<double> wth;
  composite_rule(-kPi / 2, kPi / 2, 6.0 / L, 16, th, wth);
  std::vector<double> ss;
  std::vector<double> ws;
  composite_rule(0.0, 1.0, 6.0 / L, 16, ss, ws);
  const std::size_t nt = ts.size();
  const std::size_t nth = th.size();
  using Mat = Eigen::MatrixXcd;

  // phase1(i, a) = exp(-i t1_i sin th_a)
  Mat phase1(nt, nth);
  for (std::size_t i = 0; i < nt; ++i)
    for (std::size_t a = 0; a < nth; ++a) phase1(i, a) = std::polar(1.0, -ts[i] * std::sin(th[a]));

  // h_a2(u) = int_{-1}^{1} s^a2 (1 - s^2) exp(-i u s) ds at u = t2 cos(th).
  std::vector<Mat> h(beta[1] + 1, Mat(nth, nt));
  parallel_blocks(nth, [&](std::size_t a) {
    const double ct = std::cos(th[a]);
    for (std::size_t j = 0; j < nt; ++j) {
      const double u = ts[j] * ct;
      std::vector<double> acc(beta[1] + 1, 0.0);
      for (std::size_t q = 0; q < ss.size(); ++q) {
        const double base = ws[q] * (1 - ss[q] * ss[q]);
        const double c = std::cos(u * ss[q]);
        const double s = std::sin(u * ss[q]);
        double sp = 1.0;
        for (unsigned a2 = 0; a2 <= beta[1]; ++a2) {
          acc[a2] += base * sp * (a2 % 2 == 0 ? c : s);
          sp *= ss[q];
        }
      }
      for (unsigned a2 = 0; a2 <= beta[1]; ++a2) {
        h[a2](static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(j)) =
            a2 % 2 == 0 ? std::complex<double>(2.0 * acc[a2], 0.0)
                        : std::complex<double>(0.0, -2.0 * acc[a2]);
      }
    }
  });

  // D[a1][a2](i, j) = d^(a1,a2) bhat at (t1_i, t2_j).
  std::vector<std::vector<Eigen::MatrixXd>> D(beta[0] + 1, std::vector<Eigen::MatrixXd>(beta[1] + 1));
  for (unsigned a1 = 0; a1 <= beta[0]; ++a1) {
    for (unsigned a2 = 0; a2 <= beta[1]; ++a2) {
      Mat left = phase1;
      for (std::size_t a = 0; a < nth; ++a) {
        const double f = wth[a] * std::pow(std::sin(th[a]), static_cast<int>(a1)) *
                         std::pow(std::cos(th[a]), static_cast<int>(a2) + 4);
        left.col(static_cast<Eigen::Index>(a)) *= f;
      }
      const Mat e = left * h[a2];
      std::complex<double> factor(1.0, 0.0);
      for (unsigned k = 0; k < a1 + a2; ++k) factor *= std::complex<double>(0.0, -1.0);
      factor *= std::sqrt(cd) / (2.0 * kPi);
      D[a1][a2] = (e * factor).real();
    }
  }

  DoubleDouble total;
  DoubleDouble outer;
  for (std::size_t i = 0; i < nt; ++i) {
    for (std::size_t j = 0; j < nt; ++j) {
      double v = 0.0;
      for (unsigned a1 = 0; a1 <= beta[0]; ++a1)
        for (unsigned a2 = 0; a2 <= beta[1]; ++a2)
          v += binomial(beta[0], a1) * binomial(beta[1], a2) *
               D[a1][a2](static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) *
               D[beta[0] - a1][beta[1] - a2](static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
      const double contrib = 4.0 * wt[i] * wt[j] * std::abs(v);
      total.add(contrib);
      if (std::max(ts[i], ts[j]) >= L / 2) outer.add(contrib);
    }
  }
  tail = outer.value() / 7.0;
  return total.value() + tail;
}

void for_each_sub_index(const MultiIndex& beta, MultiIndex& cur, std::size_t pos,
                        const std::function<void(const MultiIndex&)>& fn) {
  if (pos == beta.size()) {
    fn(cur);
    return;
  }
  for (unsigned v = 0; v <= beta[pos]; ++v) {
    cur[pos] = v;
    for_each_sub_index(beta, cur, pos + 1, fn);
  }
}

}  // namespace

DerivNormReport deriv_l1_norm(unsigned d, const MultiIndex& beta) {
  check_dim(d, 2, "deriv_l1_norm");
  require(beta.size() == d, ErrorKind::invalid_argument, "multi-index dimension mismatch");
  DerivNormReport r;
  r.d = d;
  r.beta = beta;
  const unsigned total = order(beta);
  require(total <= 3, ErrorKind::invalid_argument, "derivative order must be <= 3");
  r.bound_basic = std::ldexp(1.0, static_cast<int>(total));
  r.shape = total == 0 ? 1.0 : std::sqrt(multi_factorial(beta) * std::pow(total, -static_cast<double>(total)));
  MultiIndex cur(d, 0);
  for_each_sub_index(beta, cur, 0, [&](const MultiIndex& alpha) {
    double coef = 1.0;
    MultiIndex rest(d);
    for (unsigned i = 0; i < d; ++i) {
      coef *= binomial(beta[i], alpha[i]);
      rest[i] = beta[i] - alpha[i];
    }
    r.bound_improved += coef * xalpha_b_norm_exact(d, alpha) * xalpha_b_norm_exact(d, rest);
  });
  r.value = d == 1 ? l1_norm_1d(beta[0], r.tail_estimate) : l1_norm_2d(beta, r.tail_estimate);
  r.inconclusive = r.tail_estimate > tolerances().inconclusive_tail_fraction * r.bound_basic;
  r.passed = !r.inconclusive && r.value <= r.bound_basic * (1.0 + tolerances().unit_integral_tol);
  return r;
}

TailMassReport tail_mass(unsigned d, double z) {
  check_dim(d, 2, "tail_mass");
  require(z > 0, ErrorKind::invalid_argument, "z must be positive");
  TailMassReport r;
  r.d = d;
  r.z = z;
  const double r0 = d * z;
  const double L = std::max(kRadialLimit, 4.0 * r0);
  r.tail = radial_mass(d, r0, L) + radial_tail(d, L);
  r.inner = radial_mass(d, 0.0, r0);
  r.scaled = r.tail * z * z;
  return r;
}

TailFitReport tail_fit(unsigned d) {
  check_dim(d, 2, "tail_fit");
  static constexpr double kGolden[2] = {6.845837e-01, 1.369510e-01};
  TailFitReport r;
  r.d = d;
  r.golden = kGolden[d - 1];
  double prev = 1.0;
  for (double z : kTailFitGrid) {
    const auto t = tail_mass(d, z);
    r.monotone = r.monotone && t.tail <= prev;
    prev = t.tail;
    r.constant = std::max(r.constant, t.scaled);
  }
  r.passed = r.monotone && r.constant <= 2.0 * r.golden && r.constant >= 0.5 * r.golden;
  return r;
}

double ball_monomial_integral(unsigned d, const MultiIndex& alpha) {
  require(alpha.size() == d, ErrorKind::invalid_argument, "multi-index dimension mismatch");
  double log_num = std::log(2.0);
  unsigned total = 0;
  for (unsigned a : alpha) {
    if (a % 2 == 1) return 0.0;
    log_num += std::lgamma((a + 1.0) / 2.0);
    total += a;
  }
  return std::exp(log_num - std::lgamma((total + d) / 2.0)) / (total + d);
}

double xalpha_b_norm_exact(unsigned d, const MultiIndex& alpha) {
  require(alpha.size() == d, ErrorKind::invalid_argument, "multi-index dimension mismatch");
  // (1 - |x|^2)^2 = 1 - 2 sum x_i^2 + sum x_i^4 + 2 sum_{i<j} x_i^2 x_j^2,
  // integrated against x^(2 alpha) term by term.
  MultiIndex base(d);
  for (unsigned i = 0; i < d; ++i) base[i] = 2 * alpha[i];
  double s = ball_monomial_integral(d, base);
  for (unsigned i = 0; i < d; ++i) {
    MultiIndex e = base;
    e[i] += 2;
    s -= 2.0 * ball_monomial_integral(d, e);
    e[i] += 2;
    s += ball_monomial_integral(d, e);
    for (unsigned j = i + 1; j < d; ++j) {
      MultiIndex f = base;
      f[i] += 2;
      f[j] += 2;
      s += 2.0 * ball_monomial_integral(d, f);
    }
  }
  return std::sqrt(bump_constant(d) * s);
}

double xalpha_b_norm_quadrature(unsigned d, const MultiIndex& alpha) {
  check_dim(d, 3, "x^alpha b quadrature");
  require(alpha.size() == d, ErrorKind::invalid_argument, "multi-index dimension mismatch");
  const double cd = bump_constant(d);
  const unsigned nodes = 24 + 2 * order(alpha);
  auto radial = [&](double r) { return cd * (1 - r * r) * (1 - r * r); };
  double s = 0.0;
  if (d == 1) {
    s = integrate([&](double x) { return std::pow(x, 2 * static_cast<int>(alpha[0])) * radial(std::abs(x)); },
                  -1.0, 1.0, nodes);
  } else if (d == 2) {
    s = integrate(
        [&](double r) {
          return r * radial(r) * integrate(
                                     [&](double phi) {
                                       const double x1 = r * std::cos(phi);
                                       const double x2 = r * std::sin(phi);
                                       return std::pow(x1, 2 * static_cast<int>(alpha[0])) *
                                              std::pow(x2, 2 * static_cast<int>(alpha[1]));
                                     },
                                     0.0, 2 * kPi, 2 * nodes);
        },
        0.0, 1.0, nodes);
  } else {
    s = integrate(
        [&](double r) {
          return r * r * radial(r) *
                 integrate(
                     [&](double polar) {
                       return std::sin(polar) *
                              integrate(
                                  [&](double phi) {
                                    const double x1 = r * std::sin(polar) * std::cos(phi);
                                    const double x2 = r * std::sin(polar) * std::sin(phi);
                                    const double x3 = r * std::cos(polar);
                                    return std::pow(x1, 2 * static_cast<int>(alpha[0])) *
                                           std::pow(x2, 2 * static_cast<int>(alpha[1])) *
                                           std::pow(x3, 2 * static_cast<int>(alpha[2]));
                                  },
                                  0.0, 2 * kPi, 2 * nodes);
                     },
                     0.0, kPi, nodes);
        },
        0.0, 1.0, nodes);
  }
  return std::sqrt(s);
}

XAlphaReport xalpha_b_norm(unsigned d, const MultiIndex& alpha) {
  XAlphaReport r;
  r.d = d;
  r.alpha = alpha;
  r.ball_integral = ball_monomial_integral(d, alpha);
  r.exact = xalpha_b_norm_exact(d, alpha);
  r.quadrature = xalpha_b_norm_quadrature(d, alpha);
  r.rel_error = std::abs(r.quadrature - r.exact) / r.exact;
  const unsigned total = order(alpha);
  r.bound_shape = std::sqrt(multi_factorial(alpha) * std::pow(total + d, -static_cast<double>(total)));
  r.passed = r.rel_error <= tolerances().xalpha_rel_tol;
  return r;
}

Region Region::halfline(unsigned d, double theta, int direction) {
  check_dim(d, 2, "region");
  Region r;
  r.d = d;
  Halfspace h;
  h.normal.assign(d, 0.0);
  h.normal[0] = direction >= 0 ? 1.0 : -1.0;
  h.offset = direction >= 0 ? theta : -theta;
  r.sides.push_back(h);
  return r;
}

Region Region::box(std::span<const double> lo, std::span<const double> hi) {
  require(lo.size() == hi.size(), ErrorKind::invalid_argument, "box corner dimension mismatch");
  const auto d = static_cast<unsigned>(lo.size());
  check_dim(d, 2, "region");
  Region r;
  r.d = d;
  for (unsigned i = 0; i < d; ++i) {
    require(lo[i] <= hi[i], ErrorKind::invalid_argument, "box needs lo <= hi");
    Halfspace a;
    a.normal.assign(d, 0.0);
    a.normal[i] = 1.0;
    a.offset = lo[i];
    Halfspace b;
    b.normal.assign(d, 0.0);
    b.normal[i] = -1.0;
    b.offset = -hi[i];
    r.sides.push_back(a);
    r.sides.push_back(b);
  }
  return r;
}

Region Region::quadrant(std::span<const double> corner) {
  const auto d = static_cast<unsigned>(corner.size());
  check_dim(d, 2, "region");
  Region r;
  r.d = d;
  for (unsigned i = 0; i < d; ++i) {
    Halfspace a;
    a.normal.assign(d, 0.0);
    a.normal[i] = 1.0;
    a.offset = corner[i];
    r.sides.push_back(a);
  }
  return r;
}

Region Region::scaled(double c) const {
  Region r = *this;
  for (auto& s : r.sides) s.offset *= c;
  return r;
}

namespace {

double side_value(const Region::Halfspace& h, std::span<const double> x) {
  double v = -h.offset;
  for (std::size_t i = 0; i < x.size(); ++i) v += h.normal[i] * x[i];
  return v;
}

}  // namespace

bool Region::contains(std::span<const double> x) const {
  return std::all_of(sides.begin(), sides.end(), [&](const Halfspace& h) { return side_value(h, x) >= 0; });
}

double Region::boundary_distance(std::span<const double> x) const {
  require(x.size() == d, ErrorKind::invalid_argument, "point dimension mismatch");
  if (contains(x)) {
    double m = std::numeric_limits<double>::infinity();
    for (const auto& h : sides) m = std::min(m, side_value(h, x));
    return m;
  }
  // Nearest point of a convex polygon lies on a side or at a vertex.
  std::vector<std::vector<double>> candidates;
  for (const auto& h : sides) {
    const double v = side_value(h, x);
    std::vector<double> p(x.begin(), x.end());
    for (unsigned i = 0; i < d; ++i) p[i] -= v * h.normal[i];
    candidates.push_back(p);
  }
  if (d == 2) {
    for (std::size_t a = 0; a < sides.size(); ++a) {
      for (std::size_t b = a + 1; b < sides.size(); ++b) {
        const auto& n1 = sides[a].normal;
        const auto& n2 = sides[b].normal;
        const double det = n1[0] * n2[1] - n1[1] * n2[0];
        if (std::abs(det) < 1e-14) continue;
        candidates.push_back({(sides[a].offset * n2[1] - sides[b].offset * n1[1]) / det,
                              (n1[0] * sides[b].offset - n2[0] * sides[a].offset) / det});
      }
    }
  }
  double best = std::numeric_limits<double>::infinity();
  for (const auto& p : candidates) {
    bool inside = true;
    for (const auto& h : sides) inside = inside && side_value(h, p) >= -1e-12;
    if (!inside) continue;
    double dist = 0.0;
    for (unsigned i = 0; i < d; ++i) dist += (p[i] - x[i]) * (p[i] - x[i]);
    best = std::min(best, std::sqrt(dist));
  }
  return best;
}

namespace {

// int_0^u B for d = 1 (u >= 0).
double half_cdf_1d(double u) {
  if (u <= kRadialLimit) return integrate_panels([](double t) { return big_b(1, t); }, 0.0, u, 0.5);
  return 0.5 - 0.5 * radial_tail(1, u);
}

double signed_half_cdf(double u) { return u >= 0 ? half_cdf_1d(u) : -half_cdf_1d(-u); }

// Fraction of the circle |y - x| = r lying in the region.
double arc_fraction(const Region& region, std::span<const double> x, double r) {
  struct Arc {
    double center;
    double kappa;
  };
  std::vector<Arc> arcs;
  std::vector<double> cuts;
  for (const auto& h : region.sides) {
    const double kappa = -side_value(h, x) / r;
    if (kappa <= -1.0) continue;
    if (kappa > 1.0) return 0.0;
    const double c = std::atan2(h.normal[1], h.normal[0]);
    const double half = std::acos(kappa);
    arcs.push_back({c, kappa});
    cuts.push_back(std::remainder(c - half, 2 * kPi));
    cuts.push_back(std::remainder(c + half, 2 * kPi));
  }
  if (arcs.empty()) return 1.0;
  std::sort(cuts.begin(), cuts.end());
  double measure = 0.0;
  for (std::size_t i = 0; i < cuts.size(); ++i) {
    const double a = cuts[i];
    const double b = i + 1 < cuts.size() ? cuts[i + 1] : cuts[0] + 2 * kPi;
    if (b - a <= 0) continue;
    const double mid = 0.5 * (a + b);
    bool inside = true;
    for (const auto& arc : arcs) inside = inside && std::cos(mid - arc.center) >= arc.kappa;
    if (inside) measure += b - a;
  }
  return measure / (2 * kPi);
}

}  // namespace

MollifyResult mollify_eval(const Region& region, double c, std::span<const double> x) {
  check_dim(region.d, 2, "mollify_eval");
  require(x.size() == region.d, ErrorKind::invalid_argument, "point dimension mismatch");
  require(c > 0, ErrorKind::invalid_argument, "scale c must be positive");
  MollifyResult out;
  if (region.d == 1) {
    double lo = -std::numeric_limits<double>::infinity();
    double hi = std::numeric_limits<double>::infinity();
    for (const auto& h : region.sides) {
      if (h.normal[0] > 0) {
        lo = std::max(lo, h.offset / h.normal[0]);
      } else {
        hi = std::min(hi, h.offset / h.normal[0]);
      }
    }
    if (lo > hi) return out;
    const double upper = std::isinf(lo) ? 0.5 : signed_half_cdf(c * (x[0] - lo));
    const double lower = std::isinf(hi) ? -0.5 : signed_half_cdf(c * (x[0] - hi));
    out.value = upper - lower;
    out.truncation = radial_tail(1, kRadialLimit);
    out.inconclusive = out.truncation > tolerances().boundary_half_tol;
    return out;
  }
  // Radial breakpoints: distances to each side line and to each vertex.
  std::vector<double> breaks{0.0, kRadialLimit};
  for (const auto& h : region.sides) breaks.push_back(c * std::abs(side_value(h, x)));
  for (std::size_t a = 0; a < region.sides.size(); ++a) {
    for (std::size_t b = a + 1; b < region.sides.size(); ++b) {
      const auto& n1 = region.sides[a].normal;
      const auto& n2 = region.sides[b].normal;
      const double det = n1[0] * n2[1] - n1[1] * n2[0];
      if (std::abs(det) < 1e-14) continue;
      const double v0 = (region.sides[a].offset * n2[1] - region.sides[b].offset * n1[1]) / det;
      const double v1 = (n1[0] * region.sides[b].offset - n2[0] * region.sides[a].offset) / det;
      breaks.push_back(c * std::hypot(v0 - x[0], v1 - x[1]));
    }
  }
  std::sort(breaks.begin(), breaks.end());
  breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());
  double value = 0.0;
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    const double a = breaks[i];
    const double b = std::min(breaks[i + 1], kRadialLimit);
    if (a >= kRadialLimit) break;
    value += integrate_panels(
        [&](double rho) { return 2 * kPi * rho * big_b(2, rho) * arc_fraction(region, x, rho / c); }, a, b,
        0.5);
  }
  out.truncation = radial_tail(2, kRadialLimit);
  out.value = value + out.truncation * arc_fraction(region, x, 1e12);
  out.inconclusive = out.truncation > tolerances().boundary_half_tol;
  return out;
}

}  // namespace ptffool
