#include "qell/targets.hpp"

#include <array>
#include <charconv>
#include <stdexcept>
#include <utility>

#include "qell/eli.hpp"
#include "qell/foundation.hpp"
#include "qell/phi.hpp"

namespace qell {

namespace {

std::string trimmed(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return std::string(s);
}

Real real_part(const std::string& s) {
  if (s.empty()) throw std::invalid_argument("empty number");
  return Real(s);
}

// Coefficient of i: "", "+" and "-" stand for 1 and -1.
Real imag_part(std::string s) {
  if (s.empty() || s == "+") return Real(1);
  if (s == "-") return Real(-1);
  if (s.front() == '+') s.erase(0, 1);
  return Real(s);
}

constexpr std::array<std::pair<std::string_view, Target>, 10> kNames{{
    {"phi-big", Target::phi_big},
    {"eli00", Target::eli00},
    {"eli", Target::eli},
    {"eli10", Target::eli10},
    {"eli20", Target::eli20},
    {"eli11", Target::eli11},
    {"eli-rest10", Target::eli_rest_10},
    {"efunc", Target::e_function},
    {"e2hat", Target::e2hat},
    {"ek-f", Target::ek_F},
}};

EvalResult eli_target(int n, int m, const TargetArgs& a) {
  EliRequest r;
  r.n = n;
  r.m = m;
  r.x = a.x;
  r.y = a.y;
  r.q = a.q;
  r.eps_side = a.eps;
  r.tol = a.tol;
  r.parallel = a.parallel;
  return n == 1 && m == 1 ? eli11(r) : eli_nm(r);
}

EvalResult rest_target(const TargetArgs& a) {
  if (a.x.is_zero() || a.y.is_zero()) return make_error(Status::domain_error, Method::quadrature, "needs x, y != 0");
  Complex pre = a.x * a.y * a.q / (1 - a.y * a.q);
  EliRequest r;
  r.n = 1;
  r.m = 0;
  r.x = a.x;
  r.y = a.y;
  r.q = a.q;
  r.eps_side = a.eps;
  r.tol = a.tol;
  r.parallel = a.parallel;
  bool real_q = a.q.is_real() && a.q.real() > Real(0) && a.q.real() < Real(1);
  if (real_q && a.x.is_real()) {
    Real xq2 = a.x.real() * a.q.real() * a.q.real();
    Decomposition d;
    if (a.x.real() > Real(0) && xq2 < Real(1)) {
      d = eli10_decomposed(r);
    } else if (xq2 > Real(1) && xq2 * a.q.real() < Real(1)) {
      d = eli10_decomposed_2(r);
    } else {
      return make_error(Status::domain_error, Method::quadrature, "x outside the two decomposition regions");
    }
    return finalize(scaled(d.rest, 1 / pre), a.tol);
  }
  // Complex q: the rest is the total minus the principal-branch cut.
  EvalResult total = eli_nm(r);
  if (total.status == Status::domain_error) return total;
  total.value += a.y * log1m(a.x * a.q, a.eps);
  return finalize(scaled(total, 1 / pre), a.tol);
}

}  // namespace

Complex parse_complex(std::string_view text) {
  std::string s = trimmed(text);
  if (s.empty()) throw std::invalid_argument("empty complex literal");
  if (s.back() != 'i') return Complex(real_part(s));
  s.pop_back();
  // Split at the last sign that is not an exponent sign or the leading one.
  std::size_t split = std::string::npos;
  for (std::size_t k = s.size(); k-- > 1;) {
    if ((s[k] == '+' || s[k] == '-') && s[k - 1] != 'e' && s[k - 1] != 'E') {
      split = k;
      break;
    }
  }
  if (split == std::string::npos) return Complex(Real(0), imag_part(s));
  return Complex(real_part(s.substr(0, split)), imag_part(s.substr(split)));
}

std::string format_double(double v) {
  std::array<char, 64> buf{};
  auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v, std::chars_format::general, 17);
  return std::string(buf.data(), res.ptr);
}

std::optional<Target> parse_target(std::string_view name) {
  std::string key(name);
  for (auto& c : key) {
    if (c == '_') c = '-';
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  }
  if (key == "eli-rest-10") key = "eli-rest10";
  if (key == "e-function") key = "efunc";
  for (const auto& [n, t] : kNames) {
    if (n == key) return t;
  }
  return std::nullopt;
}

std::string_view to_string(Target t) {
  for (const auto& [n, v] : kNames) {
    if (v == t) return n;
  }
  return "?";
}

std::vector<std::string_view> target_names() {
  std::vector<std::string_view> out;
  for (const auto& entry : kNames) out.push_back(entry.first);
  return out;
}

bool TargetArgs::set(std::string_view name, const Complex& v) {
  if (name == "x") x = v;
  else if (name == "y") y = v;
  else if (name == "q") q = v;
  else if (name == "xi") xi = v;
  else if (name == "alpha") alpha = v;
  else if (name == "tau") tau = v;
  else return false;
  return true;
}

EvalResult evaluate_target(Target t, const TargetArgs& a) {
  PhiOptions opt;
  opt.pole_guard = a.pole_guard;
  try {
    switch (t) {
      case Target::phi_big: {
        EvalResult r = phi_big(a.x, a.y, a.q, a.tol, opt);
        // The Phi poles sit at x = q^-k, k >= 1.
        double guard = pole_guard(opt, a.tol);
        if (r.status == Status::ok && magnitude(a.q) < 1.0 && pole_distance(a.x, a.q, 1) < guard) {
          r.status = Status::near_pole;
          r.diagnostic = "x within the pole guard of q^-k";
        }
        return r;
      }
      case Target::eli00:
        return eli00(a.x, a.y, a.q, a.tol, opt);
      case Target::eli:
        return eli_target(a.n, a.m, a);
      case Target::eli10:
        return eli_target(1, 0, a);
      case Target::eli20:
        return eli_target(2, 0, a);
      case Target::eli11:
        return eli_target(1, 1, a);
      case Target::eli_rest_10:
        return rest_target(a);
      case Target::e_function:
        return e_function(a.x, a.y, a.q, a.tol);
      case Target::e2hat:
        return e2hat(a.x, a.q, a.tol, a.eps);
      case Target::ek_F:
        return ek_F(a.xi, a.alpha, a.tau, a.tol);
    }
  } catch (const std::exception& e) {
    return make_error(Status::domain_error, Method::series, e.what());
  }
  return make_error(Status::domain_error, Method::series, "unknown target");
}

}  // namespace qell
