"""Explicit complex-geodesic families on the normalized variety of (a, b, 1).

Two constructions through the origin are provided.  The first attaches to a
tangent direction (gamma, 1) the disc

    lam -> (lam m_{g1}(omega lam), lam m_{g2}(eta lam), lam)

where the unimodular pair (omega, eta) solves the linear equation

    a omega (1-|g1|^2) + b eta (1-|g2|^2) + a g2 + b g1 + g1 g2 = 0,

a two-link inverse-kinematics problem with exactly two solutions for tangent
parameters inside the lens.  The second fixes gamma and lets omega run over
an open arc of the circle: the first component stays lam m_gamma(omega lam),
the third stays lam, and the middle component is completed from the defining
equation; it equals lam times a degree-two Blaschke factor q/r whose
denominator r is certified zero-free on the closed disc by the Schur
criterion.  The arc endpoints are precisely the two inverse-kinematics
solutions, where the factor drops to degree one.

Balanced pairs in the bidisc get their unique geodesic by a Mobius change of
coordinates.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

from .discgeom import BOUNDARY_TOL, MobiusMap, Quadratic, rho, schur_roots_outside
from .errors import (
    BranchCollision,
    DegenerateDirection,
    DomainError,
    EmptyLens,
    Infeasible,
    Tangent,
)

RESIDUAL_TOL = 1e-10
UNIMODULAR_TOL = 1e-12

PLUS = "plus"
MINUS = "minus"


@dataclass(frozen=True)
class Lens:
    """Tangent-parameter region: |g1| < 1 and |a g1 + 1| < b on the line
    a g1 + b g2 + 1 = 0; an intersection of two discs."""

    a: float
    b: float

    def __post_init__(self):
        if not (self.a > 0 and self.b > 0):
            raise DomainError("lens parameters must be positive")

    @property
    def nonempty(self) -> bool:
        return abs(self.a - self.b) < 1.0 < self.a + self.b

    def gamma2(self, gamma1: complex) -> complex:
        return -(self.a * gamma1 + 1.0) / self.b

    def contains(self, gamma1: complex, tol: float = 0.0) -> bool:
        return abs(gamma1) < 1.0 - tol and abs(self.a * gamma1 + 1.0) < self.b - tol

    def corners(self) -> tuple[complex, complex]:
        """Intersection points of |g1| = 1 and |a g1 + 1| = b (law of cosines)."""
        x = (self.b**2 - self.a**2 - 1.0) / (2.0 * self.a)
        y2 = 1.0 - x * x
        if y2 < 0.0:
            raise EmptyLens(f"lens of ({self.a}, {self.b}) has no corners")
        y = math.sqrt(y2)
        return (complex(x, y), complex(x, -y))

    def interior_points(self, count: int, seed: int = 1, margin: float = 0.02) -> list[complex]:
        """Deterministic rejection sample of the lens interior."""
        if not self.nonempty:
            raise EmptyLens(f"lens of ({self.a}, {self.b}) is empty")
        return list(_lens_grid(self.a, self.b, count, seed, margin))

    def boundary_points(self, count: int) -> list[tuple[str, complex]]:
        """Polyline of the two boundary arcs, corner to corner.

        In the triangle-inequality regime the unit-circle arc passes through
        -1 and the pair-circle arc through its point closest to the origin.
        """
        c_up, c_dn = self.corners()
        out: list[tuple[str, complex]] = [("corner", c_up)]
        th = cmath.phase(c_up)  # in (0, pi); c_dn is the conjugate
        for k in range(1, count):
            t = th + (2.0 * math.pi - 2.0 * th) * k / count
            out.append(("unit-circle", cmath.exp(1j * t)))
        out.append(("corner", c_dn))
        ctr, rad = -1.0 / self.a, self.b / self.a
        ph = cmath.phase(c_dn - ctr)  # in (-pi, 0); arc through phase 0
        for k in range(1, count):
            t = ph - 2.0 * ph * k / count
            out.append(("pair-circle", ctr + rad * cmath.exp(1j * t)))
        return out


from functools import lru_cache


@lru_cache(maxsize=256)
def _lens_grid(a: float, b: float, count: int, seed: int, margin: float) -> tuple[complex, ...]:
    from .oracle import rng_for

    lens = Lens(a, b)
    while True:
        rng = rng_for(seed, 0)
        pts: list[complex] = []
        for _ in range(200000):
            if len(pts) >= count:
                return tuple(pts)
            g = complex(rng.uniform(-1, 1), rng.uniform(-1, 1))
            if lens.contains(g, tol=margin):
                pts.append(g)
        if margin < 1e-9:
            raise EmptyLens("lens sampling exhausted")
        margin *= 0.25  # thin lens: relax the interior margin and retry


def lens_contains(L: Lens, gamma1: complex, tol: float = 0.0) -> bool:
    return L.contains(gamma1, tol=tol)


def lens_corners(L: Lens) -> tuple[complex, complex]:
    return L.corners()


@dataclass(frozen=True)
class OmegaEta:
    omega: complex
    eta: complex
    branch: str  # PLUS | MINUS


def _ik_data(L: Lens, gamma1: complex):
    g2 = L.gamma2(gamma1)
    r1 = L.a * (1.0 - abs(gamma1) ** 2)
    r2 = L.b * (1.0 - abs(g2) ** 2)
    q = L.a * g2 + L.b * gamma1 + gamma1 * g2
    return g2, r1, r2, q


def solvability_gaps(L: Lens, gamma1: complex) -> tuple[float, float]:
    """Margins of the two-sided inequality |r1-r2| < |q| < r1+r2.

    Returns (|q| - |r1-r2|, r1+r2 - |q|); both positive inside the lens, the
    right margin tending to zero at the boundary.
    """
    _, r1, r2, q = _ik_data(L, gamma1)
    return (abs(q) - abs(r1 - r2), r1 + r2 - abs(q))


def solve_omega_eta(L: Lens, gamma1: complex, tol: float = BOUNDARY_TOL) -> tuple[OmegaEta, OmegaEta]:
    """Both unimodular solutions of r1*omega + r2*eta = -q, closed form.

    The two branches are the two triangle configurations; `plus` carries the
    positive oriented angle from -q to r1*omega.  Raises Tangent when |q|
    meets r1+r2 or |r1-r2| within `tol`, Infeasible when it leaves the
    interval by more than `tol`.
    """
    _, r1, r2, q = _ik_data(L, gamma1)
    aq = abs(q)
    lo, hi = abs(r1 - r2), r1 + r2
    if aq > hi + tol or aq < lo - tol:
        raise Infeasible(
            f"|q| = {aq:.6g} outside ({lo:.6g}, {hi:.6g}); parameter not in the lens"
        )
    if aq >= hi - tol or aq <= lo + tol:
        raise Tangent(f"|q| = {aq:.6g} within tolerance of the interval ends")
    u = -q / aq
    ct = (r1 * r1 + aq * aq - r2 * r2) / (2.0 * r1 * aq)
    ct = min(1.0, max(-1.0, ct))
    st = math.sqrt(1.0 - ct * ct)
    out = []
    for sign, name in ((+1.0, PLUS), (-1.0, MINUS)):
        w = u * complex(ct, sign * st)
        e = (-q - r1 * w) / r2
        out.append(OmegaEta(omega=w, eta=e, branch=name))
    return tuple(out)


@dataclass(frozen=True)
class RationalMap:
    """Quotient of polynomials; coefficients descending in the argument."""

    num: tuple[complex, ...]
    den: tuple[complex, ...]

    def __call__(self, lam: complex) -> complex:
        return _horner(self.num, lam) / _horner(self.den, lam)

    def derivative(self, lam: complex) -> complex:
        n, d = _horner(self.num, lam), _horner(self.den, lam)
        dn, dd = _horner(_dcoeffs(self.num), lam), _horner(_dcoeffs(self.den), lam)
        return (dn * d - n * dd) / (d * d)

    def normalized(self) -> "RationalMap":
        """Scale so the leading nonzero denominator coefficient equals 1."""
        lead = next((c for c in self.den if abs(c) > 1e-14), None)
        if lead is None:
            raise DomainError("zero denominator polynomial")
        return RationalMap(
            num=tuple(c / lead for c in self.num),
            den=tuple(c / lead for c in self.den),
        )

    def to_json(self) -> dict:
        return {
            "num": [[c.real, c.imag] for c in self.num],
            "den": [[c.real, c.imag] for c in self.den],
        }

    @classmethod
    def from_json(cls, obj: dict) -> "RationalMap":
        return cls(
            num=tuple(complex(re, im) for re, im in obj["num"]),
            den=tuple(complex(re, im) for re, im in obj["den"]),
        )


def _horner(cs, lam):
    acc = 0.0 + 0.0j
    for c in cs:
        acc = acc * lam + c
    return acc


def _dcoeffs(cs):
    n = len(cs) - 1
    return tuple(c * (n - i) for i, c in enumerate(cs[:-1])) or (0.0 + 0.0j,)


IDENTITY_MAP = RationalMap(num=(0.0j, 1.0 + 0.0j, 0.0j), den=(0.0j, 0.0j, 1.0 + 0.0j))


@dataclass(frozen=True)
class AnalyticDisc:
    """Disc -> polydisc map with rational components; serializable and exact."""

    components: tuple[RationalMap, ...]
    tag: str  # PhiGamma | BlaschkeFamily | Balanced | Flat
    params: dict = field(default_factory=dict)

    def __call__(self, lam: complex) -> tuple[complex, ...]:
        return tuple(c(lam) for c in self.components)

    def derivative(self, lam: complex) -> tuple[complex, ...]:
        return tuple(c.derivative(lam) for c in self.components)

    def normalized(self) -> "AnalyticDisc":
        return AnalyticDisc(
            components=tuple(c.normalized() for c in self.components),
            tag=self.tag,
            params=self.params,
        )

    def to_json(self) -> dict:
        return {
            "components": [c.to_json() for c in self.components],
            "tag": self.tag,
            "params": self.params,
        }

    @classmethod
    def from_json(cls, obj: dict) -> "AnalyticDisc":
        return cls(
            components=tuple(RationalMap.from_json(c) for c in obj["components"]),
            tag=obj["tag"],
            params=dict(obj.get("params", {})),
        )


def _certify_disc(disc: AnalyticDisc, a: float, b: float, tol: float = RESIDUAL_TOL, n: int = 32):
    """Residual check on the (a, b, 1) variety plus Schur check of denominators."""
    from .varieties import Alpha, membership_residual

    alpha = Alpha(complex(a), complex(b), 1.0 + 0.0j)
    for comp in disc.components:
        dcs = comp.den[-3:] if len(comp.den) >= 3 else (0.0j,) * (3 - len(comp.den)) + comp.den
        if len(comp.den) > 3 and any(abs(c) > 1e-14 for c in comp.den[:-3]):
            raise DomainError("denominator degree exceeds two")
        if not schur_roots_outside(Quadratic(*dcs)):
            raise DomainError("component denominator has a root in the closed disc")
    worst = 0.0
    for k in range(n):
        lam = 0.97 * cmath.exp(2j * math.pi * k / n) * (0.15 + 0.85 * ((k * 23) % n) / n)
        worst = max(worst, abs(membership_residual(alpha, disc(lam))))
    if worst > tol:
        raise DomainError(f"constructed disc misses the variety by {worst:.3e}")
    return disc


def _mobius_factor_map(nu: complex, rot: complex) -> RationalMap:
    """lam -> lam * m_nu(rot*lam) as a quadratic-over-quadratic pair."""
    return RationalMap(
        num=(-rot, nu, 0.0j),
        den=(0.0j, -nu.conjugate() * rot, 1.0 + 0.0j),
    )


def phi_gamma(L: Lens, gamma1: complex, branch: str = PLUS, tol: float = BOUNDARY_TOL) -> AnalyticDisc:
    """Geodesic through the origin tangent to (gamma1, gamma2, 1)."""
    if branch not in (PLUS, MINUS):
        raise DomainError(f"unknown branch {branch!r}")
    sols = solve_omega_eta(L, gamma1, tol=tol)
    sol = sols[0] if branch == PLUS else sols[1]
    g2 = L.gamma2(gamma1)
    disc = AnalyticDisc(
        components=(
            _mobius_factor_map(gamma1, sol.omega),
            _mobius_factor_map(g2, sol.eta),
            IDENTITY_MAP,
        ),
        tag="PhiGamma",
        params={
            "a": L.a,
            "b": L.b,
            "gamma1": [gamma1.real, gamma1.imag],
            "branch": sol.branch,
            "omega": [sol.omega.real, sol.omega.imag],
            "eta": [sol.eta.real, sol.eta.imag],
        },
    )
    return _certify_disc(disc, L.a, L.b)


def _torus_dist(p: OmegaEta, q: OmegaEta) -> float:
    dw = abs(cmath.phase(p.omega * q.omega.conjugate()))
    de = abs(cmath.phase(p.eta * q.eta.conjugate()))
    return max(dw, de)


def branch_track(L: Lens, path, collision_tol: float = 1e-6) -> list[OmegaEta]:
    """Continuous selection of (omega, eta) along a path of lens points.

    At each step the solution pair nearest in torus arc distance to the
    previous selection is kept.  Raises BranchCollision when the two
    candidate pairs come within `collision_tol` of each other, or when the
    nearest choice is ambiguous against the step jump.
    """
    out: list[OmegaEta] = []
    prev: OmegaEta | None = None
    for g in path:
        pair = solve_omega_eta(L, g)
        if _torus_dist(pair[0], pair[1]) < collision_tol:
            raise BranchCollision(f"solutions coalesce at {g!r}")
        if prev is None:
            chosen = pair[0]
        else:
            d0, d1 = _torus_dist(pair[0], prev), _torus_dist(pair[1], prev)
            chosen = pair[0] if d0 <= d1 else pair[1]
            if min(d0, d1) > 0.5 * _torus_dist(pair[0], pair[1]):
                raise BranchCollision(f"step jump too large at {g!r}; refine the path")
        out.append(chosen)
        prev = chosen
    return out


def admissibility_margin(L: Lens, gamma: complex, omega: complex) -> float:
    """Slack of the arc inequality; positive exactly on the admissible arc.

    The inequality is the Schur condition for the quadratic denominator of
    the completed middle component: with T = 1-|gamma|^2,

        b^2 - |a gamma + 1|^2 > |-a b T + omega (a conj(g)^2
                                   + (a^2 - b^2 + 1) conj(g) + a)|.
    """
    a, b = L.a, L.b
    T = 1.0 - abs(gamma) ** 2
    S = a * gamma.conjugate() ** 2 + (a * a - b * b + 1.0) * gamma.conjugate() + a
    R = b * b - abs(a * gamma + 1.0) ** 2
    return R - abs(-a * b * T + omega * S)


def _family_qr(L: Lens, gamma: complex, omega: complex):
    a, b = L.a, L.b
    g = gamma
    q = Quadratic(
        -b * omega,
        b * g + (a + g.conjugate()) * omega,
        -(a * g + 1.0),
    )
    r = Quadratic(
        (1.0 + a * g.conjugate()) * omega,
        -(b * g.conjugate() * omega + g + a),
        b,
    )
    return q, r


def blaschke_family(L: Lens, gamma: complex, omega: complex, tol: float = RESIDUAL_TOL):
    """Disc through the origin with prescribed first-factor parameter gamma.

    For omega on the admissible arc, returns
    (lam m_gamma(omega lam), lam q(lam)/r(lam), lam) whose middle component
    is lam times the degree-two Blaschke factor q/r; the denominator r is
    certified zero-free on the closed disc via the Schur criterion.  Returns
    None (inadmissible) when the arc inequality fails.
    """
    if abs(gamma) >= 1.0:
        raise DomainError("gamma must lie in the open unit disc")
    if abs(abs(omega) - 1.0) > BOUNDARY_TOL:
        raise DomainError("omega must be unimodular")
    if admissibility_margin(L, gamma, omega) <= 0.0:
        return None
    q, r = _family_qr(L, gamma, omega)
    if not schur_roots_outside(r):
        return None  # inequality marginally true but certificate fails
    middle = RationalMap(num=q.coeffs() + (0.0j,), den=r.coeffs())
    disc = AnalyticDisc(
        components=(
            _mobius_factor_map(gamma, omega),
            middle,
            IDENTITY_MAP,
        ),
        tag="BlaschkeFamily",
        params={
            "a": L.a,
            "b": L.b,
            "gamma": [gamma.real, gamma.imag],
            "omega": [omega.real, omega.imag],
        },
    )
    return _certify_disc(disc, L.a, L.b, tol=max(tol, RESIDUAL_TOL))


def blaschke_factor(L: Lens, gamma: complex, omega: complex) -> tuple[Quadratic, Quadratic]:
    """The quadratic pair (q, r) of the middle-component factor q/r."""
    return _family_qr(L, gamma, omega)


def admissible_arc(L: Lens, gamma: complex) -> list[tuple[float, float]]:
    """Open angle intervals of admissible omega = exp(i theta), closed form.

    The inequality |omega v + w| < R with v, w fixed defines an arc; its
    endpoints come from the circle-line geometry, accurate to the floating
    solve of one arccos.
    """
    a, b = L.a, L.b
    T = 1.0 - abs(gamma) ** 2
    v = a * gamma.conjugate() ** 2 + (a * a - b * b + 1.0) * gamma.conjugate() + a
    w = -a * b * T
    R = b * b - abs(a * gamma + 1.0) ** 2
    if R <= 0.0:
        return []
    av, aw = abs(v), abs(w)
    if av < 1e-15:
        return [(0.0, 2.0 * math.pi)] if aw < R else []
    if aw < 1e-15:
        return [(0.0, 2.0 * math.pi)] if av < R else []
    c0 = (R * R - av * av - aw * aw) / (2.0 * av * aw)
    if c0 >= 1.0:
        return [(0.0, 2.0 * math.pi)]
    if c0 <= -1.0:
        return []
    alpha = math.acos(c0)
    phi0 = cmath.phase(v * w.conjugate())
    lo = alpha - phi0
    hi = 2.0 * math.pi - alpha - phi0
    lo %= 2.0 * math.pi
    hi %= 2.0 * math.pi
    if lo < hi:
        return [(lo, hi)]
    return [(0.0, hi), (lo, 2.0 * math.pi)]


def arc_contains(arcs: list[tuple[float, float]], theta: float) -> bool:
    theta %= 2.0 * math.pi
    return any(lo < theta < hi for lo, hi in arcs)


def balanced_pair(z: tuple[complex, complex], w: tuple[complex, complex], tol: float = 1e-9):
    """Unique bidisc geodesic through a balanced pair, or None if unbalanced.

    Conjugates by the Mobius pair sending z to the origin, reads the
    direction from the image of w, and returns the two-component disc
    hitting z and w exactly.
    """
    z1, z2 = complex(z[0]), complex(z[1])
    w1, w2 = complex(w[0]), complex(w[1])
    if z1 == w1 and z2 == w2:
        raise DegenerateDirection("the two points coincide")
    d1, d2 = rho(z1, w1), rho(z2, w2)
    if abs(d1 - d2) > tol:
        return None
    m1, m2 = MobiusMap(z1), MobiusMap(z2)
    w1p, w2p = m1(w1), m2(w2)
    if abs(w1p) < 1e-15:
        raise DegenerateDirection("normalized direction vanishes")
    omega = w2p / w1p
    disc = AnalyticDisc(
        components=(
            RationalMap(num=(0.0j, -1.0 + 0.0j, z1), den=(0.0j, -z1.conjugate(), 1.0 + 0.0j)),
            RationalMap(num=(0.0j, -omega, z2), den=(0.0j, -z2.conjugate() * omega, 1.0 + 0.0j)),
        ),
        tag="Balanced",
        params={
            "z": [[z1.real, z1.imag], [z2.real, z2.imag]],
            "w": [[w1.real, w1.imag], [w2.real, w2.imag]],
            "omega": [omega.real, omega.imag],
            "param_at_w": [w1p.real, w1p.imag],
        },
    )
    return disc


def flat_disc(slot: int, n: int = 3) -> AnalyticDisc:
    """Coordinate embedding lam -> (0, .., lam, .., 0)."""
    zero = RationalMap(num=(0.0j, 0.0j, 0.0j), den=(0.0j, 0.0j, 1.0 + 0.0j))
    comps = tuple(IDENTITY_MAP if j == slot else zero for j in range(n))
    return AnalyticDisc(components=comps, tag="Flat", params={"slot": slot})
