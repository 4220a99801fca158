#include <chrono>
#include <functional>
#include <iomanip>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "qell/eli.hpp"
#include "qell/sweep.hpp"

#ifdef QELL_HAVE_OPENMP
#include <omp.h>
#endif

using namespace qell;

namespace {

struct Case {
  std::string name;
  // Runs the workload serially or in parallel and returns its values.
  std::function<std::vector<Complex>(bool)> run;
};

double seconds(const std::function<void()>& f) {
  auto t0 = std::chrono::steady_clock::now();
  f();
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::vector<Complex> eli_point(int n, const Complex& x, const Complex& q, bool parallel) {
  EliRequest r;
  r.n = n;
  r.x = x;
  r.y = Complex(0.1);
  r.q = q;
  r.eps_side = Side::above;
  r.parallel = parallel;
  return {eli_nm(r).value};
}

std::vector<Complex> sweep_values(const std::string& figure, long steps, bool parallel) {
  SweepSpec s = *figure_preset(figure);
  if (steps > 0) s.steps = steps;
  std::vector<Complex> out;
  for (const auto& row : run_sweep(s, parallel)) out.push_back(row.result.value);
  return out;
}

std::vector<Complex> depth2(bool parallel) {
  Depth2Request r;
  r.x1 = Complex(0.3);
  r.x2 = Complex(-0.2, 0.1);
  r.y1 = Complex(0.4);
  r.y2 = Complex(0.25);
  r.q = Complex(0.5);
  r.sigma = 2;
  r.parallel = parallel;
  return {eli_depth2(r).value};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"serial against OpenMP timings of the parallel kernels"};
  int repeat = 1;
  long steps = 200;
  int threads = 0;
  app.add_option("--repeat", repeat, "runs per timing (the best is kept)")->check(CLI::PositiveNumber);
  app.add_option("--steps", steps, "rows in the sweep cases")->check(CLI::Range(2L, 100000L));
  app.add_option("--threads", threads, "OpenMP thread count (default: runtime choice)");
  CLI11_PARSE(app, argc, argv);

#ifdef QELL_HAVE_OPENMP
  if (threads > 0) omp_set_num_threads(threads);
  int used = omp_get_max_threads();
#else
  int used = 1;
#endif

  std::vector<Case> cases{
      {"kernel eli10 x=1.3 on the cut", [](bool p) { return eli_point(1, Complex(1.3), Complex(0.9), p); }},
      {"kernel eli20 x=2+i q=0.8", [](bool p) { return eli_point(2, Complex(2, 1), Complex(0.8), p); }},
      {"depth-2 sigma=2", depth2},
      {"sweep fig1", [steps](bool p) { return sweep_values("fig1", steps, p); }},
      {"sweep fig3c", [steps](bool p) { return sweep_values("fig3c", steps / 4, p); }},
  };

  std::cout << "threads: " << used << "\n";
  std::cout << std::left << std::setw(34) << "case" << std::setw(12) << "serial_s" << std::setw(12) << "parallel_s"
            << std::setw(10) << "speedup" << "max_abs_diff\n";
  for (const auto& c : cases) {
    std::vector<Complex> vs, vp;
    double ts = 1e300, tp = 1e300;
    for (int k = 0; k < repeat; ++k) {
      ts = std::min(ts, seconds([&] { vs = c.run(false); }));
      tp = std::min(tp, seconds([&] { vp = c.run(true); }));
    }
    double diff = 0.0;
    for (std::size_t i = 0; i < vs.size() && i < vp.size(); ++i) diff = std::max(diff, magnitude(vs[i] - vp[i]));
    std::cout << std::left << std::setw(34) << c.name << std::setw(12) << std::fixed << std::setprecision(3) << ts
              << std::setw(12) << tp << std::setw(10) << std::setprecision(2) << ts / tp << std::scientific
              << std::setprecision(1) << diff << std::defaultfloat << "\n";
  }
  return 0;
}
