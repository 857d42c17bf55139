// Solve f1 g1 + f2 g2 = 1 for f1 = b_i b_3i and f2 = b_2i and evaluate the
// solution off the grid.

#include "corona/pipeline.hpp"

#include <cstdio>

int main() {
  using namespace corona;
  Blaschke f1({cplx(0, 1), cplx(0, 3)}), f2({cplx(0, 2)});
  PipelineParams prm;
  prm.epsilon = 0.1;
  PipelineResult r = run_pipeline(f1, f2, prm);
  std::printf("%s, residual %.2e, %.3g <= |g1| <= %.3g\n", r.report.status.c_str(), r.report.solution.residual,
              r.report.solution.inf_g1, r.report.solution.sup_g1);
  if (r.status != Status::success) return exit_code(r.status);
  for (cplx z : {cplx(0.5, 0.5), cplx(-1.0, 2.0), cplx(0.0, 2.0)}) {
    cplx g1 = r.solution.g1(z), g2 = r.solution.g2(z);
    std::printf("z = %+.2f%+.2fi  g1 = %+.6f%+.6fi  g2 = %+.6f%+.6fi  |f1 g1 + f2 g2 - 1| = %.1e\n", z.real(), z.imag(),
                g1.real(), g1.imag(), g2.real(), g2.imag(), std::abs(f1(z) * g1 + f2(z) * g2 - 1.0));
  }
  return 0;
}
