// Parallel vs serial timings for sampling, per-point evaluation and the
// randomized suites. Results of both paths are compared bit for bit.

#include <omp.h>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

#include "lkgeo/catalog.hpp"
#include "lkgeo/props.hpp"
#include "lkgeo/verification.hpp"

using namespace lkgeo;

namespace {

template <class F>
double best_of(int reps, F&& f) {
  double best = 1e300;
  for (int r = 0; r < reps; ++r) {
    const auto t0 = std::chrono::steady_clock::now();
    f();
    best = std::min(best, std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
  }
  return best;
}

bool same(const std::vector<PointEvaluation>& a, const std::vector<PointEvaluation>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i].lk_psi != b[i].lk_psi || a[i].lk_N != b[i].lk_N) return false;
  return true;
}

}  // namespace

int main(int argc, char** argv) {
  const int count = argc > 1 ? std::atoi(argv[1]) : 20000;
  const int reps = 3;
  std::printf("threads %d, %d points, best of %d\n\n", omp_get_max_threads(), count, reps);
  std::printf("%-44s %10s %10s %8s %s\n", "kernel", "serial s", "omp s", "speedup", "match");

  for (const std::string id : {"umbilical:c=-1,aa=-1,tau=0.5,n=6", "product:c=1,d1=1,rho=1,r=0.8,m=2,n=6",
                               "quadric:c=-1,R=N2,d=1,n=6"}) {
    const HypersurfaceExample ex = example_from_id(id);
    std::vector<Vector> xs_s, xs_p;
    const double ts = best_of(reps, [&] { xs_s = ex.sample_serial(count, 42); });
    const double tp = best_of(reps, [&] { xs_p = ex.sample(count, 42); });
    std::printf("%-44s %10.4f %10.4f %8.2f %s\n", ("sample " + id).c_str(), ts, tp, ts / tp,
                xs_s == xs_p ? "yes" : "NO");

    const int k = ex.n() / 2;
    std::vector<PointEvaluation> es, ep;
    const double es_t = best_of(reps, [&] { es = evaluate_samples_serial(ex, xs_s, k); });
    const double ep_t = best_of(reps, [&] { ep = evaluate_samples(ex, xs_s, k); });
    std::printf("%-44s %10.4f %10.4f %8.2f %s\n", ("evaluate k=" + std::to_string(k)).c_str(), es_t,
                ep_t, es_t / ep_t, same(es, ep) ? "yes" : "NO");
  }

  for (const std::string suite : {"lemma1", "canonical"}) {
    PropsSummary a, b;
    const int trials = 400;
    omp_set_num_threads(1);
    const double t1 = best_of(reps, [&] { a = run_props(suite, trials, 7); });
    omp_set_num_threads(omp_get_num_procs());
    const double tn = best_of(reps, [&] { b = run_props(suite, trials, 7); });
    bool eq = a.outcomes.size() == b.outcomes.size();
    for (std::size_t i = 0; eq && i < a.outcomes.size(); ++i)
      eq = a.outcomes[i].max_deviation == b.outcomes[i].max_deviation;
    std::printf("%-44s %10.4f %10.4f %8.2f %s\n", ("props " + suite).c_str(), t1, tn, t1 / tn,
                eq ? "yes" : "NO");
  }
  return 0;
}
