#pragma once

#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "qell/targets.hpp"

namespace qell {

struct SweepSpec {
  Target target = Target::phi_big;
  std::string axis = "x";
  Complex from, to;
  long steps = 2;
  /// Fixed parameters; the axis entry is overwritten per row.
  TargetArgs fixed;
};

struct SweepRow {
  Complex param;
  EvalResult result;
};

/// Throws std::invalid_argument for steps < 2, an unknown axis or
/// non-finite endpoints.
void validate(const SweepSpec& spec);

/// The equally spaced axis values, endpoints included.
std::vector<Complex> sweep_points(const SweepSpec& spec);

/// Rows in axis order. The parallel form spreads rows over OpenMP threads,
/// each at the caller's working precision; evaluation inside a row stays
/// serial.
std::vector<SweepRow> run_sweep(const SweepSpec& spec, bool parallel = true);

/// CSV with header `param,re,im,err,method,status`. A real axis prints the
/// parameter as a number, a complex one as a `re+imi` literal.
void write_csv(std::ostream& os, const std::vector<SweepRow>& rows);

/// Named presets: fig1 (Phi, q = 0.9), fig2 (Phi, q = 0.9+0.04i), fig3 and
/// fig3c (eli_{1;0} rest between 1/q_r and 1/q_r^2 for the two q values).
std::optional<SweepSpec> figure_preset(const std::string& name);
std::vector<std::string> figure_names();

}  // namespace qell
