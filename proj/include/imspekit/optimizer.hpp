#pragma once

// Symmetry-reduced design families, derivative-free minimization over their
// (at most two) parameters, and grid scans of converged IMSPE values.

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "imspekit/imspe.hpp"

namespace imspekit {

enum class FamilyKind {
  singleton,
  inversion_pair,
  four_in_line_ordinate,
  four_in_line_abscissa,
  rectangle_centered,
  rhomboid,
};

std::string family_name(FamilyKind kind);
FamilyKind family_from_name(const std::string& name);

/// Canonical parameter order for a family kind. The four-in-line kinds have
/// a fixed second offset parameter defaulting to 0.7 when absent.
std::vector<std::string> family_param_names(FamilyKind kind);

struct DesignFamily {
  FamilyKind kind = FamilyKind::singleton;
  std::map<std::string, double> params;
};

/// Concrete inversion-symmetric design for the parameters.
Design realize(const DesignFamily& family);

/// As above, and additionally checks containment in the target domain.
Design realize(const DesignFamily& family, const Domain& dom);

struct ScalarMinResult {
  double x = 0.0;
  double f = 0.0;
  int evaluations = 0;
  bool at_lower = false;
  bool at_upper = false;
};

/// Golden-section minimization after an initial bracketing grid.
/// Best-found semantics when f is not unimodal. Throws BracketError when
/// both interval ends beat every interior grid probe.
ScalarMinResult minimize_scalar(const std::function<double(double)>& f,
                                double lo, double hi, double tol);

struct OptimizationOptions {
  int probe_n_int = 64;              // search fidelity (disk)
  LadderSpec final_ladder{64, 1024}; // full fidelity for refinement
  double twin_threshold = 5e-3;      // lower-bound landing treated as a twin
  std::vector<double> twin_deltas = {1e-2, 3e-3, 1e-3, 3e-4, 1e-4};
  int max_sweeps = 12;
  std::map<std::string, double> start;  // optional start point
};

struct OptimizationResult {
  FamilyKind kind = FamilyKind::singleton;
  std::map<std::string, double> best_params;
  double best_value = 0.0;  // converged IMSPE at best_params
  int evaluations = 0;
  std::map<std::string, std::pair<double, double>> bracket;
  double tolerance_achieved = 0.0;
  std::vector<std::string> diagnostics;
  std::optional<TwinLimitResult> twin;  // set when a twin parameter -> 0
  int digits_used = 0;
};

/// Coordinate descent with golden-section inner solves; probes at search
/// fidelity, refines and re-evaluates at full fidelity, and finishes twin
/// parameters (those pinned at a small lower bound) via twin_limit.
OptimizationResult minimize_family(
    FamilyKind kind, const std::map<std::string, std::pair<double, double>>& bounds,
    const Hyperparameters& h, const Domain& dom, double tol,
    const OptimizationOptions& options = {});

struct ScanOptions {
  LadderSpec ladder{64, 512};
};

struct ScanResult {
  FamilyKind kind = FamilyKind::singleton;
  std::map<std::string, double> fixed;
  std::string scan_param;
  std::vector<double> abscissa;
  std::vector<double> values;       // NaN where flagged
  std::vector<std::string> flags;   // "ok" or the error text
  int n_int = 0;
};

/// Converged IMSPE along a strictly increasing parameter grid. Failed
/// points are flagged and the scan continues.
ScanResult scan_family(FamilyKind kind, const std::map<std::string, double>& fixed,
                       const std::string& scan_param,
                       const std::vector<double>& grid, const Hyperparameters& h,
                       const Domain& dom, const ScanOptions& options = {});

}  // namespace imspekit
