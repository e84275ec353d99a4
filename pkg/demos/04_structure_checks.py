"""Numerically verify the structure theory behind the engine.

Four independent checks tie the symbolic and numeric layers together:

  * ode_residual     -- columns of the period matrix solve y' = A(t) y
                        (finite-difference derivative vs A times the values);
  * stokes_residual  -- periods of twisted differentials vanish, i.e. the
                        pairing only sees cohomology classes;
  * duality_det      -- the cycle/form pairing matrix is nondegenerate,
                        with |det| bounded away from zero and full SVD rank;
  * monodromy_match  -- transporting cycles around a singular point agrees
                        with ODE continuation of the period matrix.

`run_all` executes the full battery; everything is deterministic given the
seed, so failures are reproducible bug reports.
"""

import time

from expperiods import FiberType, ProblemSpec, parse_laurent, run_all

FIXTURES = [
    ProblemSpec(FiberType.AFFINE_LINE, parse_laurent("u^3/3 - t*u"), "airy"),
    ProblemSpec(FiberType.PUNCTURED_LINE, parse_laurent("(t/2)*(u - u^-1)"), "bessel"),
    ProblemSpec(FiberType.AFFINE_LINE, parse_laurent("-t*u^2"), "gaussian"),
    ProblemSpec(FiberType.AFFINE_LINE, parse_laurent("t*u"), "linear"),
]

for spec in FIXTURES:
    started = time.perf_counter()
    report = run_all(spec, n_stokes=5)
    elapsed = time.perf_counter() - started
    verdict = "all checks pass" if report.passed else "FAILURES PRESENT"
    print(f"=== {spec.label} ({elapsed:.2f} s): {verdict} ===")
    for rec in report.records:
        mark = "ok  " if rec.passed else "FAIL"
        note = rec.details.get("note", "")
        print(f"  {mark} {rec.name:18s} residual {rec.residual:10.3e} "
              f"(threshold {rec.threshold:.0e})" + (f"  {note}" if note else ""))
    print()
