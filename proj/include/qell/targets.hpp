#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qell/complex.hpp"
#include "qell/result.hpp"

namespace qell {

/// Parses `re`, `re+imi`, `re-imi`, `imi` or `i` (e.g. "0.9+0.04i") at the
/// working precision. Throws std::invalid_argument.
Complex parse_complex(std::string_view text);

/// Shortest round-trip text of a double with 17 significant digits, always
/// with a '.' decimal point.
std::string format_double(double v);

enum class Target { phi_big, eli00, eli, eli10, eli20, eli11, eli_rest_10, e_function, e2hat, ek_F };

/// Accepts the CLI spellings ("phi-big", "eli-rest10", ...) and the
/// underscore forms.
std::optional<Target> parse_target(std::string_view name);
std::string_view to_string(Target t);
std::vector<std::string_view> target_names();

struct TargetArgs {
  Complex x, y, q, xi, alpha, tau;
  int n = 1, m = 0;
  Side eps = Side::none;
  double tol = 1e-10;
  /// Guard for |1 - x q^k| in the Phi-based targets; 0 keeps the library
  /// default of 10 tol.
  double pole_guard = 0.0;
  bool parallel = true;

  /// Sets a parameter by name (x, y, q, xi, alpha, tau). False if unknown.
  bool set(std::string_view name, const Complex& v);
};

/// Evaluates one target. eli_rest_10 returns eli_{1;0}, the rest divided by
/// x y q / (1 - yq).
EvalResult evaluate_target(Target t, const TargetArgs& a);

}  // namespace qell
