// Benchmark comparing the serial reference kernels, the OpenMP kernels
// pinned to one thread, and the OpenMP kernels at full width. Also times
// the joint-state evaluator against the tensor contraction and a
// persistency sweep in both execution modes.

#include <chrono>
#include <cstdio>
#include <cstring>
#include <functional>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "nlocal/persistency.hpp"
#include "nlocal/sampling.hpp"

using namespace nlocal;

namespace {

double seconds(const std::function<void()>& fn) {
  const auto t0 = std::chrono::steady_clock::now();
  fn();
  const auto t1 = std::chrono::steady_clock::now();
  return std::chrono::duration<double>(t1 - t0).count();
}

void set_threads(int n) {
#ifdef _OPENMP
  omp_set_num_threads(n);
#else
  (void)n;
#endif
}

int max_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

void row(const char* name, double t_ref, double t_omp1, double t_omp,
         double err) {
  std::printf("%-26s %10.4fs %10.4fs %10.4fs %8.2fx   max|d|=%.3g\n", name,
              t_ref, t_omp1, t_omp, t_omp > 0 ? t_ref / t_omp : 0.0, err);
}

}  // namespace

int main(int argc, char** argv) {
  bool smoke = false;
  for (int i = 1; i < argc; ++i)
    if (std::strcmp(argv[i], "--smoke") == 0) smoke = true;

  const int threads = max_threads();
  std::printf("threads: %d%s\n\n", threads, smoke ? " (smoke sizes)" : "");
  std::printf("%-26s %11s %11s %11s %9s\n", "kernel", "serial-ref", "omp(1)",
              "omp(max)", "speedup");

  Rng rng(7);
  const std::size_t dim = smoke ? 128 : 1024;

  // kron
  {
    const CMat a = random_density(rng, dim / 16);
    const CMat b = random_density(rng, 16);
    CMat r1, r2, r3;
    const double t_ref = seconds([&] { r1 = ref::kron(a, b); });
    set_threads(1);
    const double t1 = seconds([&] { r2 = kron(a, b, Exec::Parallel); });
    set_threads(threads);
    const double tn = seconds([&] { r3 = kron(a, b, Exec::Parallel); });
    const double err =
        std::max(max_abs_diff(r1, r2), max_abs_diff(r2, r3));
    row("kron", t_ref, t1, tn, err);
  }

  // trace of a product
  {
    const CMat a = random_density(rng, dim);
    const CMat b = random_density(rng, dim);
    cplx r1, r2, r3;
    double t_ref = 0, t1 = 0, tn = 0;
    const int reps = smoke ? 4 : 16;
    t_ref = seconds([&] {
      for (int i = 0; i < reps; ++i) r1 = ref::trace_product(a, b);
    });
    set_threads(1);
    t1 = seconds([&] {
      for (int i = 0; i < reps; ++i) r2 = trace_product(a, b, Exec::Parallel);
    });
    set_threads(threads);
    tn = seconds([&] {
      for (int i = 0; i < reps; ++i) r3 = trace_product(a, b, Exec::Parallel);
    });
    const double err = std::max(std::abs(r1 - r2), std::abs(r2 - r3));
    row("trace_product", t_ref, t1, tn, err);
  }

  // full joint-state evaluation vs contraction
  {
    SpecSampler sampler;
    const NetworkSpec spec = sampler.draw(rng, smoke ? 4 : 6);
    IJ full_serial, full_par, fact;
    const double t_ref =
        seconds([&] { full_serial = compute_IJ_full(spec, Exec::Serial); });
    set_threads(threads);
    const double tn =
        seconds([&] { full_par = compute_IJ_full(spec, Exec::Parallel); });
    const double t_fact =
        seconds([&] { fact = compute_IJ_factorized(spec); });
    const double err = std::max(std::abs(full_serial.I - full_par.I),
                                std::abs(full_serial.J - full_par.J));
    row("compute_IJ_full", t_ref, 0.0, tn, err);
    std::printf("%-26s %10.4fs   (|full-fact| = %.3g)\n", "  factorized path",
                t_fact,
                std::max(std::abs(full_par.I - fact.I),
                         std::abs(full_par.J - fact.J)));
  }

  // persistency sweep
  {
    PersistencyQuery base;
    base.scenario = Scenario::CombinedPh;
    std::vector<SweepAxis> axes{{"alpha", 0.85, 1.0, smoke ? 0.05 : 0.005},
                                {"delta", 0.85, 1.0, smoke ? 0.05 : 0.005}};
    std::vector<SweepRow> rows_serial, rows_par;
    const double t_ref =
        seconds([&] { rows_serial = sweep(base, axes, Exec::Serial); });
    set_threads(threads);
    const double tn =
        seconds([&] { rows_par = sweep(base, axes, Exec::Parallel); });
    long mismatches = 0;
    for (std::size_t i = 0; i < rows_serial.size(); ++i)
      if (rows_serial[i].result.P != rows_par[i].result.P) ++mismatches;
    row("persistency sweep", t_ref, 0.0, tn,
        static_cast<double>(mismatches));
  }

  std::printf("\ndone\n");
  return 0;
}
