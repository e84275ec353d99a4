"""Certified singular parameters: where the derived system breaks down.

Three exact criteria locate the bad parameter values t:

  * LeadingCoeffVanishes     -- the top (or, on the punctured line, bottom)
                                coefficient of g degenerates, collapsing the
                                decay directions at infinity or zero;
  * CriticalPointDegeneration-- discriminant-type condition: two critical
                                points of u -> g(u, t) collide;
  * ConnectionPole           -- a denominator of the connection matrix.

Each criterion is a polynomial in t computed exactly; its roots are then
isolated into balls certified by a Newton convergence test (alpha-theory),
so every printed radius is a proven enclosure, not a float guess.
"""

from expperiods import (
    DegenerateFamily,
    FiberType,
    ProblemSpec,
    parse_laurent,
    singular_set,
)

FIXTURES = [
    ProblemSpec(FiberType.AFFINE_LINE, parse_laurent("u^3/3 - t*u"), "airy"),
    ProblemSpec(FiberType.PUNCTURED_LINE, parse_laurent("(t/2)*(u - u^-1)"), "bessel"),
    ProblemSpec(FiberType.AFFINE_LINE, parse_laurent("-t*u^2"), "gaussian"),
    ProblemSpec(FiberType.AFFINE_LINE, parse_laurent("t*u"), "linear"),
    ProblemSpec(
        FiberType.AFFINE_LINE,
        parse_laurent("u^4/4 - t*u^2/2 + u"),
        "quartic with moving saddles",
    ),
]

for spec in FIXTURES:
    sigma = singular_set(spec)
    print(f"=== {spec.label}:  g = {spec.g.to_str()} ===")
    for poly, provenance in sigma.defining:
        print(f"  criterion {provenance:28s} {poly.to_str()} = 0")
    if not sigma.balls:
        print("  no singular parameters: the system is regular on all of C")
    for ball in sigma.balls:
        hard = {"LeadingCoeffVanishes", "ConnectionPole"} & set(ball.provenance)
        kind = "hard (blocks evaluation)" if hard else "soft (turning point only)"
        print(f"  ball center {ball.center:+.12g}  radius {ball.radius:.2e}  "
              f"multiplicity {ball.multiplicity}  [{', '.join(ball.provenance)}] {kind}")
    print()

# A family whose critical points are degenerate for EVERY t cannot be
# handled -- the engine refuses rather than silently producing nonsense:
always_bad = ProblemSpec(
    FiberType.AFFINE_LINE, parse_laurent("t*(u^3/3 - u^2 + u)"), "cusp for all t"
)
try:
    singular_set(always_bad)
except DegenerateFamily as exc:
    print(f"rejected degenerate family: {exc}")
