#include "imspekit/imspe.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace imspekit {

namespace {

constexpr int kDigitRungs[] = {0, 50, 100, 160};

int effective_digits(int rung) { return rung == 0 ? 16 : rung; }

// Digits of headroom demanded between the condition number and the working
// precision. Twin-point ladders have tail differences ~9 orders below the
// trace scale, so the rung must leave the solve error well under that.
constexpr int kHeadroomDigits = 10;

template <class F>
auto with_scalar(int digits, F&& f) {
  switch (digits) {
    case 0:
      return f(double{});
    case 50:
      return f(Float50{});
    case 100:
      return f(Float100{});
    case 160:
      return f(Float160{});
    default:
      throw DomainError("unsupported precision rung " + std::to_string(digits) +
                        " (expected 0, 50, 100, or 160)");
  }
}

void check_domain_membership(const Design& d, const Domain& dom) {
  if (!std::holds_alternative<DiskSpec>(dom)) return;
  for (std::size_t i = 0; i < d.size(); ++i) {
    const double r2 = d[i].x1 * d[i].x1 + d[i].x2 * d[i].x2;
    if (r2 > 1.0 + 1e-12) {
      throw OutOfDomainError("design point " + std::to_string(i) +
                             " lies outside the closed unit disk");
    }
  }
}

template <class T>
double imspe_in(const Design& d, const Hyperparameters& h, const Domain& dom) {
  auto V = build_cov<T>(d, h);
  auto L = build_bordered(V);
  SquareMatrix<T> R = std::holds_alternative<RectDomain>(dom)
                          ? build_r_rect<T>(d, h, std::get<RectDomain>(dom))
                          : build_r_disk<T>(d, h, std::get<DiskSpec>(dom));
  const T tr = trace_of_solve(L, R);
  return static_cast<double>(T(1) - tr);
}

// IMSPE is bounded by (0, 2): the predictor's pointwise error variance
// cannot exceed that of the uniform-weight unbiased predictor. Values
// outside can only come from quadrature or conditioning failure. Values in
// [1, 2) are legal (eccentric sparse designs) and are flagged, not fatal.
void check_range(double value, const Domain& dom) {
  if (!(value > 0.0) || !(value < 2.0)) {
    throw ImspeRangeError(
        "computed IMSPE " + std::to_string(value) +
        " fell outside (0, 2); quadrature or conditioning failure" +
        (std::holds_alternative<DiskSpec>(dom) ? " (disk strip sum)" : " (rect)"));
  }
}

// Walk the precision ladder until the condition number leaves enough
// headroom. Returns {digits, cond at that rung}.
std::pair<int, double> pick_digits(const Design& d, const Hyperparameters& h) {
  double cond = 0.0;
  for (int rung : kDigitRungs) {
    cond = cov_condition(d, h, rung);
    if (std::isfinite(cond) &&
        cond < std::pow(10.0, effective_digits(rung) - kHeadroomDigits)) {
      return {rung, cond};
    }
  }
  if (!std::isfinite(cond)) {
    throw SingularMatrixError(
        "covariance matrix is singular even at 160 decimal digits "
        "(coincident or near-coincident design points)",
        cond);
  }
  return {160, cond};
}

// Absolute level of linear-solve roundoff in a single IMSPE evaluation: the
// trace is O(1), so the noise is cond * 10^-digits with a safety margin.
double solve_noise_floor(double cond, int digits) {
  return 10.0 * cond * std::pow(10.0, -effective_digits(digits));
}

}  // namespace

double imspe_noise_floor(const Design& d, const Hyperparameters& h,
                         int forced_digits) {
  int digits = forced_digits;
  double cond;
  if (digits < 0) {
    std::tie(digits, cond) = pick_digits(d, h);
  } else {
    cond = cov_condition(d, h, digits);
  }
  return solve_noise_floor(cond, digits);
}

int required_digits(double cond) {
  if (!std::isfinite(cond) || cond < 0.0) return 160;
  for (int rung : kDigitRungs) {
    if (cond < std::pow(10.0, effective_digits(rung) - kHeadroomDigits)) {
      return rung;
    }
  }
  return 160;
}

double cov_condition(const Design& d, const Hyperparameters& h, int digits) {
  return with_scalar(digits, [&]<class T>(T) {
    return condition_1norm(build_cov<T>(d, h));
  });
}

ImspeValue imspe(const Design& d, const Hyperparameters& h, const Domain& dom,
                 int forced_digits) {
  h.validate();
  if (d.empty()) throw DomainError("design must contain at least one point");
  check_domain_membership(d, dom);

  int digits;
  double cond;
  if (forced_digits >= 0) {
    digits = forced_digits;
    cond = cov_condition(d, h, digits);
  } else {
    std::tie(digits, cond) = pick_digits(d, h);
  }

  ImspeValue out;
  out.value = with_scalar(digits, [&]<class T>(T) { return imspe_in<T>(d, h, dom); });
  out.n_int_used =
      std::holds_alternative<DiskSpec>(dom) ? std::get<DiskSpec>(dom).n_int : 0;
  out.method_used = std::holds_alternative<DiskSpec>(dom)
                        ? std::get<DiskSpec>(dom).method
                        : Method::C;
  out.cond_estimate = cond;
  out.digits_used = digits;
  check_range(out.value, dom);
  out.within_unit_interval = out.value < 1.0;
  return out;
}

ConvergenceSeries imspe_series(const Design& d, const Hyperparameters& h,
                               Method method, const LadderSpec& ladder,
                               int forced_digits) {
  ConvergenceSeries series;
  for (int n : ladder.rungs()) {
    const auto v = imspe(d, h, DiskSpec{n, method}, forced_digits);
    series.samples.emplace_back(n, v.value);
  }
  return series;
}

ImspeValue imspe_converged(const Design& d, const Hyperparameters& h,
                           Method method, const LadderSpec& ladder,
                           int forced_digits) {
  int digits = forced_digits;
  double cond;
  if (digits < 0) {
    std::tie(digits, cond) = pick_digits(d, h);
  } else {
    cond = cov_condition(d, h, digits);
  }
  const auto series = imspe_series(d, h, method, ladder, digits);
  const auto est = extrapolate(series, solve_noise_floor(cond, digits));
  ImspeValue out;
  out.value = est.limit;
  out.n_int_used = ladder.stop;
  out.method_used = method;
  out.cond_estimate = cond;
  out.digits_used = digits;
  out.within_unit_interval = est.limit < 1.0;
  return out;
}

ImspeValue imspe_best(const Design& d, const Hyperparameters& h,
                      const Domain& dom, const LadderSpec& ladder,
                      int forced_digits) {
  if (std::holds_alternative<RectDomain>(dom)) {
    return imspe(d, h, dom, forced_digits);
  }
  const auto& spec = std::get<DiskSpec>(dom);
  check_domain_membership(d, dom);
  LadderSpec lad = ladder;
  lad.stop = std::max(lad.stop, spec.n_int);
  return imspe_converged(d, h, spec.method, lad, forced_digits);
}

double imspe_n1_closed(const DesignPoint& p, const Hyperparameters& h,
                       const DiskSpec& spec) {
  const Design d{p};
  check_domain_membership(d, DiskSpec{spec});
  const auto R = build_r_disk<double>(d, h, spec);
  return 2.0 - 2.0 * R(0, 1);
}

double imspe_n2_symmetric(double x11, const Hyperparameters& h,
                          const DiskSpec& spec) {
  if (x11 == 0.0) {
    throw DomainError(
        "x11 = 0 is the coalesced singular configuration; use the twin-limit "
        "API instead");
  }
  if (std::abs(x11) > 1.0) {
    throw OutOfDomainError("symmetric pair lies outside the unit disk");
  }
  const Design d{{x11, 0.0}, {-x11, 0.0}};
  const auto R = build_r_disk<double>(d, h, spec);
  const double A = std::exp(-4.0 * h.theta1 * x11 * x11);
  return 1.5 + A / 2.0 - 2.0 * R(0, 1) - (R(1, 1) - R(1, 2)) / (1.0 - A);
}

namespace {

// Polynomial in delta^2 through the last (up to three) samples, evaluated
// at delta = 0 (Neville's scheme).
double even_power_limit(const std::vector<double>& deltas,
                        const std::vector<double>& values) {
  const std::size_t m = std::min<std::size_t>(3, deltas.size());
  const std::size_t off = deltas.size() - m;
  std::vector<double> x(m), p(m);
  for (std::size_t i = 0; i < m; ++i) {
    x[i] = deltas[off + i] * deltas[off + i];
    p[i] = values[off + i];
  }
  for (std::size_t lvl = 1; lvl < m; ++lvl) {
    for (std::size_t i = 0; i + lvl < m; ++i) {
      p[i] = (x[i + lvl] * p[i] - x[i] * p[i + 1]) / (x[i + lvl] - x[i]);
    }
  }
  return p[0];
}

}  // namespace

TwinLimitResult twin_limit(const std::function<Design(double)>& family,
                           const Hyperparameters& h, const Domain& dom,
                           const std::vector<double>& deltas,
                           const LadderSpec& ladder) {
  if (deltas.empty()) throw DomainError("twin_limit needs a delta sequence");
  for (std::size_t i = 0; i < deltas.size(); ++i) {
    if (!(deltas[i] > 0.0) || (i > 0 && !(deltas[i] < deltas[i - 1]))) {
      throw DomainError("deltas must be strictly decreasing and positive");
    }
  }

  TwinLimitResult out;
  for (double delta : deltas) {
    const Design d = family(delta);
    const ImspeValue v = imspe_best(d, h, dom, ladder);
    out.deltas.push_back(delta);
    out.values.push_back(v);
    out.precision_digits_used = std::max(out.precision_digits_used, v.digits_used);
  }

  std::vector<double> vals;
  for (const auto& v : out.values) vals.push_back(v.value);

  // Tail differences must shrink once they are above the roundoff floor.
  const double scale = std::max(1.0, std::abs(vals.back()));
  const double floor = 1e-13 * scale;
  double prev = std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i < vals.size(); ++i) {
    const double diff = std::abs(vals[i] - vals[i - 1]);
    if (diff > floor && diff > prev && prev > floor) {
      throw NonConvergenceError(
          "twin-limit tail differences fail to decrease monotonically");
    }
    prev = diff;
  }

  out.limit = even_power_limit(out.deltas, vals);
  if (vals.size() >= 3) {
    const double e1 = std::abs(vals[vals.size() - 2] - vals[vals.size() - 3]);
    const double e2 = std::abs(vals[vals.size() - 1] - vals[vals.size() - 2]);
    if (e2 > 0.0 && e1 > e2) {
      out.error_estimate = e2 * e2 / (e1 - e2);
    } else {
      out.error_estimate = e2;
    }
  } else if (vals.size() == 2) {
    out.error_estimate = std::abs(vals[1] - vals[0]);
  }
  return out;
}

}  // namespace imspekit
