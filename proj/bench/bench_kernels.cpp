#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <vector>

#include "squeeze/geometry.hpp"
#include "squeeze/linalg.hpp"
#include "squeeze/parallel.hpp"
#include "squeeze/quadrature.hpp"
#include "squeeze/reference_kernels.hpp"
#include "squeeze/spectral.hpp"
#include "squeeze/thin_domain.hpp"

namespace {

double time_best(int reps, const std::function<void()>& fn) {
  double best = 1e300;
  for (int i = 0; i < reps; ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    fn();
    const double s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    best = std::min(best, s);
  }
  return best;
}

void report(const char* name, double serial_s, double parallel_s, bool match) {
  std::printf("%-24s %10.3f ms %10.3f ms %8.2fx   %s\n", name, serial_s * 1e3,
              parallel_s * 1e3, serial_s / parallel_s, match ? "match" : "MISMATCH");
}

bool same_dense(const squeeze::Matrix& a, const squeeze::Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
  for (std::size_t i = 0; i < a.data().size(); ++i)
    if (a.data()[i] != b.data()[i]) return false;
  return true;
}

bool same_sparse(const squeeze::SparseMatrix& a, const squeeze::SparseMatrix& b) {
  return a.n == b.n && a.row_ptr == b.row_ptr && a.cols == b.cols && a.vals == b.vals;
}

}  // namespace

int main() {
  using namespace squeeze;

  std::printf("workers: %d\n", worker_count());
  std::printf("%-24s %13s %13s %9s   %s\n", "kernel", "serial", "parallel",
              "speedup", "check");

  const SphereGeometry geom{2, 1.0};
  const ThicknessProfile prof(
      FourierSeries::from_interleaved({-0.1, 0.0, 0.02}),
      FourierSeries::from_interleaved({0.1, 0.03, 0.0}));

  {
    const int n = 1200;
    Matrix a(n, n);
    std::vector<double> x(n);
    for (int i = 0; i < n; ++i) {
      x[i] = std::sin(0.37 * i);
      for (int j = 0; j < n; ++j) a(i, j) = std::cos(0.11 * i + 0.07 * j);
    }
    std::vector<double> ys, yp;
    const double ts = time_best(10, [&] { ys = reference::matvec(a, x); });
    const double tp = time_best(10, [&] { yp = matvec(a, x); });
    report("matvec 1200", ts, tp, ys == yp);
  }

  {
    const int n = 4096;
    WeightedOperator os, op;
    const double ts =
        time_best(5, [&] { os = reference::assemble_circle_operator(prof, geom, n); });
    const double tp = time_best(5, [&] { op = assemble_circle_operator(prof, geom, n); });
    report("circle assembly 4096", ts, tp,
           same_dense(os.k, op.k) && same_dense(os.m, op.m));
  }

  {
    ThinDomainOperator os, op;
    const double ts = time_best(5, [&] {
      os = reference::assemble_thin_operator(prof, geom, 0.1, 384, 8);
    });
    const double tp =
        time_best(5, [&] { op = assemble_thin_operator(prof, geom, 0.1, 384, 8); });
    report("thin assembly 384x8", ts, tp,
           same_sparse(os.stiffness, op.stiffness) && same_sparse(os.mass, op.mass));
  }

  {
    const AmbientFunction g = [](const Vec& x) {
      return std::exp(x[0]) + x[1] * x[1];
    };
    double vs = 0.0, vp = 0.0;
    const double ts = time_best(3, [&] {
      vs = reference::shell_weighted_integral(geom, prof, g, 2048, 32);
    });
    const double tp =
        time_best(3, [&] { vp = shell_weighted_integral(geom, prof, g, 2048, 32); });
    report("shell integral 2048x32", ts, tp,
           std::abs(vs - vp) <= 1e-12 * std::abs(vs));
  }

  return 0;
}
