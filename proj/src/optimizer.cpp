#include "imspekit/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace imspekit {

std::string family_name(FamilyKind kind) {
  switch (kind) {
    case FamilyKind::singleton: return "singleton";
    case FamilyKind::inversion_pair: return "inversion_pair";
    case FamilyKind::four_in_line_ordinate: return "four_in_line_ordinate";
    case FamilyKind::four_in_line_abscissa: return "four_in_line_abscissa";
    case FamilyKind::rectangle_centered: return "rectangle_centered";
    case FamilyKind::rhomboid: return "rhomboid";
  }
  throw DomainError("unknown family kind");
}

FamilyKind family_from_name(const std::string& name) {
  for (FamilyKind k :
       {FamilyKind::singleton, FamilyKind::inversion_pair,
        FamilyKind::four_in_line_ordinate, FamilyKind::four_in_line_abscissa,
        FamilyKind::rectangle_centered, FamilyKind::rhomboid}) {
    if (family_name(k) == name) return k;
  }
  throw ConfigError("unknown design family '" + name + "'");
}

std::vector<std::string> family_param_names(FamilyKind kind) {
  switch (kind) {
    case FamilyKind::singleton: return {"x11", "x12"};
    case FamilyKind::inversion_pair: return {"x11"};
    case FamilyKind::four_in_line_ordinate: return {"x32", "offset"};
    case FamilyKind::four_in_line_abscissa: return {"x11", "offset"};
    case FamilyKind::rectangle_centered: return {"x11", "x32"};
    case FamilyKind::rhomboid: return {"x11", "x32"};
  }
  throw DomainError("unknown family kind");
}

namespace {

double param(const DesignFamily& f, const std::string& name, double fallback,
             bool required = true) {
  auto it = f.params.find(name);
  if (it != f.params.end()) return it->second;
  if (required) {
    throw DomainError("family " + family_name(f.kind) + " needs parameter '" +
                      name + "'");
  }
  return fallback;
}

void check_distinct(const Design& d, const DesignFamily& f) {
  for (std::size_t i = 0; i < d.size(); ++i) {
    for (std::size_t j = i + 1; j < d.size(); ++j) {
      if (d[i] == d[j]) {
        throw DuplicatePointError(
            "family " + family_name(f.kind) +
            " produced coincident points; twin configurations must carry an "
            "explicit delta > 0");
      }
    }
  }
}

}  // namespace

Design realize(const DesignFamily& f) {
  Design d;
  switch (f.kind) {
    case FamilyKind::singleton:
      d = {{param(f, "x11", 0), param(f, "x12", 0)}};
      break;
    case FamilyKind::inversion_pair: {
      const double x = param(f, "x11", 0);
      d = {{x, 0.0}, {-x, 0.0}};
      break;
    }
    case FamilyKind::four_in_line_ordinate: {
      const double a = param(f, "x32", 0);
      const double b = param(f, "offset", 0.7, false);
      d = {{0.0, a}, {0.0, -a}, {0.0, b}, {0.0, -b}};
      break;
    }
    case FamilyKind::four_in_line_abscissa: {
      const double a = param(f, "x11", 0);
      const double b = param(f, "offset", 0.7, false);
      d = {{a, 0.0}, {-a, 0.0}, {b, 0.0}, {-b, 0.0}};
      break;
    }
    case FamilyKind::rectangle_centered: {
      const double a = param(f, "x11", 0);
      const double b = param(f, "x32", 0);
      d = {{a, b}, {-a, b}, {a, -b}, {-a, -b}};
      break;
    }
    case FamilyKind::rhomboid: {
      const double a = param(f, "x11", 0);
      const double b = param(f, "x32", 0);
      d = {{a, 0.0}, {-a, 0.0}, {0.0, b}, {0.0, -b}};
      break;
    }
  }
  check_distinct(d, f);
  return d;
}

Design realize(const DesignFamily& f, const Domain& dom) {
  Design d = realize(f);
  if (std::holds_alternative<DiskSpec>(dom)) {
    for (const auto& p : d) {
      if (p.x1 * p.x1 + p.x2 * p.x2 > 1.0 + 1e-12) {
        throw OutOfDomainError("family " + family_name(f.kind) +
                               " produced a point outside the unit disk");
      }
    }
  } else {
    const auto& r = std::get<RectDomain>(dom);
    for (const auto& p : d) {
      if (std::abs(p.x1) > r.half_width + 1e-12 ||
          std::abs(p.x2 - r.center2) > r.half_height + 1e-12) {
        throw OutOfDomainError("family " + family_name(f.kind) +
                               " produced a point outside the rectangle");
      }
    }
  }
  return d;
}

ScalarMinResult minimize_scalar(const std::function<double(double)>& f,
                                double lo, double hi, double tol) {
  if (!(lo < hi) || !(tol > 0.0)) {
    throw DomainError("minimize_scalar needs lo < hi and tol > 0");
  }
  constexpr int kGrid = 17;
  ScalarMinResult res;
  std::vector<double> xs(kGrid), fs(kGrid);
  for (int i = 0; i < kGrid; ++i) {
    xs[i] = lo + (hi - lo) * i / (kGrid - 1);
    fs[i] = f(xs[i]);
    ++res.evaluations;
  }
  int best = int(std::min_element(fs.begin(), fs.end()) - fs.begin());
  const double interior_min =
      *std::min_element(fs.begin() + 1, fs.end() - 1);
  if (fs.front() < interior_min && fs.back() < interior_min) {
    throw BracketError(
        "both interval ends beat every interior probe; the minimum appears "
        "to sit on the boundary of [" +
        std::to_string(lo) + ", " + std::to_string(hi) + "]");
  }
  if (best == 0 || best == kGrid - 1) {
    res.x = xs[best];
    res.f = fs[best];
    res.at_lower = (best == 0);
    res.at_upper = (best == kGrid - 1);
    return res;
  }

  // golden-section inside the bracketing neighbours
  const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = xs[best - 1], b = xs[best + 1];
  double bx = xs[best], bf = fs[best];
  double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
  double f1 = f(x1), f2 = f(x2);
  res.evaluations += 2;
  auto note = [&](double x, double fx) {
    if (fx < bf) { bf = fx; bx = x; }
  };
  note(x1, f1);
  note(x2, f2);
  while (b - a > tol) {
    if (f1 <= f2) {
      b = x2; x2 = x1; f2 = f1;
      x1 = b - gr * (b - a);
      f1 = f(x1);
      note(x1, f1);
    } else {
      a = x1; x1 = x2; f1 = f2;
      x2 = a + gr * (b - a);
      f2 = f(x2);
      note(x2, f2);
    }
    ++res.evaluations;
  }
  res.x = bx;
  res.f = bf;
  return res;
}

OptimizationResult minimize_family(
    FamilyKind kind, const std::map<std::string, std::pair<double, double>>& bounds,
    const Hyperparameters& h, const Domain& dom, double tol,
    const OptimizationOptions& options) {
  if (bounds.empty()) throw DomainError("minimize_family needs parameter bounds");
  if (!(tol > 0.0)) throw DomainError("minimize_family needs tol > 0");
  const auto names = family_param_names(kind);

  std::vector<std::string> free_names;
  for (const auto& n : names) {
    if (bounds.count(n)) free_names.push_back(n);
  }
  if (free_names.empty()) {
    throw DomainError("bounds name no parameter of family " + family_name(kind));
  }

  OptimizationResult res;
  res.kind = kind;
  for (const auto& [k, v] : bounds) res.bracket[k] = v;
  res.tolerance_achieved = tol;

  std::map<std::string, double> cur;
  for (const auto& n : free_names) {
    const auto [lo, hi] = bounds.at(n);
    if (!(lo < hi)) throw DomainError("empty bound box for '" + n + "'");
    auto it = options.start.find(n);
    cur[n] = (it != options.start.end()) ? std::clamp(it->second, lo, hi)
                                         : 0.5 * (lo + hi);
  }

  // search-fidelity domain
  Domain probe_dom = dom;
  if (std::holds_alternative<DiskSpec>(probe_dom)) {
    std::get<DiskSpec>(probe_dom).n_int = options.probe_n_int;
  }

  const double invalid = 2.0;  // IMSPE is always < 1
  auto eval_at = [&](const Domain& in_dom, const std::map<std::string, double>& p,
                     bool converged) -> double {
    ++res.evaluations;
    try {
      const Design d = realize(DesignFamily{kind, p}, dom);
      if (converged) {
        return imspe_best(d, h, in_dom, options.final_ladder).value;
      }
      return imspe(d, h, in_dom).value;
    } catch (const DuplicatePointError&) {
      return invalid;
    } catch (const OutOfDomainError&) {
      return invalid;
    }
  };

  auto sweep = [&](const Domain& in_dom, bool converged, double coord_tol) {
    double moved = 0.0;
    for (const auto& n : free_names) {
      const auto [lo, hi] = bounds.at(n);
      auto f1 = [&](double x) {
        auto p = cur;
        p[n] = x;
        return eval_at(in_dom, p, converged);
      };
      const auto m = minimize_scalar(f1, lo, hi, coord_tol);
      moved = std::max(moved, std::abs(m.x - cur[n]));
      cur[n] = m.x;
      if (m.at_lower || m.at_upper) {
        const std::string note = "parameter '" + n + "' at " +
                                 (m.at_lower ? "lower" : "upper") + " bound";
        if (std::find(res.diagnostics.begin(), res.diagnostics.end(), note) ==
            res.diagnostics.end()) {
          res.diagnostics.push_back(note);
        }
      }
    }
    return moved;
  };

  // coarse coordinate descent at probe fidelity
  for (int s = 0; s < options.max_sweeps; ++s) {
    if (sweep(probe_dom, false, tol) < tol) break;
  }
  const auto probe_params = cur;

  // full-fidelity golden refinement of non-boundary coordinates
  for (const auto& n : free_names) {
    const auto [lo, hi] = bounds.at(n);
    if (cur[n] <= lo || cur[n] >= hi) continue;
    const double half = std::max(16.0 * tol, 0.02 * (hi - lo));
    const double a = std::max(lo, cur[n] - half);
    const double b = std::min(hi, cur[n] + half);
    auto f1 = [&](double x) {
      auto p = cur;
      p[n] = x;
      return eval_at(dom, p, true);
    };
    try {
      const auto m = minimize_scalar(f1, a, b, tol);
      cur[n] = m.x;
    } catch (const BracketError&) {
      res.diagnostics.push_back("refinement bracket for '" + n +
                                "' degenerate; keeping coarse value");
    }
  }

  res.best_params = cur;
  res.best_value = eval_at(dom, cur, true);
  {
    const Design d = realize(DesignFamily{kind, cur}, dom);
    res.digits_used = imspe_best(d, h, dom, options.final_ladder).digits_used;
  }
  double shift = 0.0;
  for (const auto& n : free_names) {
    shift = std::max(shift, std::abs(cur.at(n) - probe_params.at(n)));
  }
  if (shift > 10.0 * tol) {
    res.diagnostics.push_back(
        "full-fidelity refinement moved the minimizer by more than 10x tol; "
        "the search fidelity may be too coarse");
  }

  // twin parameters: coordinates pinned at a small lower bound go to the
  // delta -> 0 limit
  for (const auto& n : free_names) {
    const auto [lo, hi] = bounds.at(n);
    if (cur[n] <= lo && lo <= options.twin_threshold && !options.twin_deltas.empty()) {
      auto fam = [&](double delta) {
        auto p = cur;
        p[n] = delta;
        return realize(DesignFamily{kind, p}, dom);
      };
      res.twin = twin_limit(fam, h, dom, options.twin_deltas, options.final_ladder);
      res.best_value = res.twin->limit;
      res.digits_used = std::max(res.digits_used, res.twin->precision_digits_used);
      res.diagnostics.push_back("parameter '" + n +
                                "' treated as a twin separation; value is the "
                                "delta -> 0 limit");
      break;
    }
  }
  return res;
}

ScanResult scan_family(FamilyKind kind, const std::map<std::string, double>& fixed,
                       const std::string& scan_param,
                       const std::vector<double>& grid, const Hyperparameters& h,
                       const Domain& dom, const ScanOptions& options) {
  if (grid.empty()) throw ConfigError("scan grid is empty");
  for (std::size_t i = 1; i < grid.size(); ++i) {
    if (!(grid[i] > grid[i - 1])) {
      throw ConfigError("scan grid must be strictly increasing");
    }
  }
  ScanResult out;
  out.kind = kind;
  out.fixed = fixed;
  out.scan_param = scan_param;
  out.n_int = options.ladder.stop;
  for (double x : grid) {
    out.abscissa.push_back(x);
    try {
      auto params = fixed;
      params[scan_param] = x;
      const Design d = realize(DesignFamily{kind, params}, dom);
      out.values.push_back(imspe_best(d, h, dom, options.ladder).value);
      out.flags.push_back("ok");
    } catch (const Error& e) {
      out.values.push_back(std::numeric_limits<double>::quiet_NaN());
      out.flags.push_back(e.what());
    }
  }
  return out;
}

}  // namespace imspekit
