"""Independent brute-force cross-checks used by the test suites.

The code here deliberately shares no evaluation paths with the primary
implementations it is used to check: roots come from the explicit quadratic
formula, distances from direct definitions, derivatives from central
differences.  Randomness is counter-based (Philox) keyed by (seed, index) so
sampling is reproducible regardless of worker count or call order.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .errors import EvaluationOutOfDisc, NotThrough, ZeroPolynomial
from .discgeom import Quadratic


def rng_for(seed: int, index: int) -> np.random.Generator:
    """Deterministic generator for sample `index` of stream `seed`."""
    mask = (1 << 64) - 1
    return np.random.Generator(np.random.Philox(key=[seed & mask, index & mask]))


def quadratic_roots(q: Quadratic) -> tuple[complex, ...]:
    """All roots of q via the sign-matched quadratic formula.

    Returns 2, 1 or 0 roots for degree 2, 1, 0.  The discriminant branch is
    chosen so the larger-magnitude root is formed without cancellation; the
    other root comes from the product identity a0/a2 = r1*r2.
    """
    A, B, C = q.coeffs()
    if A == 0 and B == 0:
        if C == 0:
            raise ZeroPolynomial("quadratic_roots: zero polynomial")
        return ()
    if A == 0:
        return (-C / B,)
    disc = cmath.sqrt(B * B - 4.0 * A * C)
    if (B.conjugate() * disc).real < 0.0:
        disc = -disc
    t = -0.5 * (B + disc)
    r1 = t / A
    r2 = C / t if t != 0 else -B / A - r1
    return (r1, r2)


def _rho(u: complex, v: complex) -> float:
    return math.atanh(abs((u - v) / (1.0 - v.conjugate() * u)))


def caratheodory_lower_bound(
    family: Sequence[Callable[..., complex]],
    z,
    w,
    check_samples: Sequence = (),
) -> float:
    """max over the family of rho(F(z), F(w)): a certified lower bound for c.

    Every member is first evaluated on `check_samples` (plus z and w); a
    value of modulus >= 1 disqualifies the family.
    """
    best = 0.0
    probes = list(check_samples) + [z, w]
    for F in family:
        for p in probes:
            v = F(p)
            if abs(v) >= 1.0:
                raise EvaluationOutOfDisc(f"family member left the disc at {p!r}")
        best = max(best, _rho(F(z), F(w)))
    return best


def lempert_upper_bound(disc, z, w, lam_z=None, lam_w=None, tol: float = 1e-9) -> float:
    """rho of the parameters at which an analytic disc hits z and w.

    Parameters may be given; otherwise they are recovered by inverting a
    degree-one component of the disc, with a dense-sampling fallback.  The
    disc must pass through both points within `tol` (sup-norm over
    components), else NotThrough is raised.
    """
    lam_z = _param_for(disc, z) if lam_z is None else lam_z
    lam_w = _param_for(disc, w) if lam_w is None else lam_w
    for lam, pt in ((lam_z, z), (lam_w, w)):
        val = disc(lam)
        err = max(abs(a - b) for a, b in zip(val, pt))
        if err > tol:
            raise NotThrough(f"disc misses {pt!r} by {err:.3e}")
    return _rho(lam_z, lam_w)


def _param_for(disc, pt) -> complex:
    # try degree-one components first: Mobius inversion is exact
    for comp, target in zip(disc.components, pt):
        if len(comp.num) <= 2 and len(comp.den) <= 2:
            lam = _invert_mobius_coeffs(comp.num, comp.den, target)
            if lam is not None and abs(lam) < 1.0:
                return lam
    # dense sampling fallback over the disc
    best_lam, best_err = 0.0 + 0.0j, float("inf")
    for k in range(64):
        for j in range(32):
            lam = (j + 0.5) / 32 * cmath.exp(2j * math.pi * k / 64)
            val = disc(lam)
            err = max(abs(a - b) for a, b in zip(val, pt))
            if err < best_err:
                best_lam, best_err = lam, err
    # local refinement by shrinking grid
    step = 0.1
    while step > 1e-13:
        improved = False
        for dre in (-step, 0.0, step):
            for dim in (-step, 0.0, step):
                lam = best_lam + complex(dre, dim)
                if abs(lam) >= 1.0:
                    continue
                val = disc(lam)
                err = max(abs(a - b) for a, b in zip(val, pt))
                if err < best_err:
                    best_lam, best_err, improved = lam, err, True
        if not improved:
            step *= 0.5
    return best_lam


def _invert_mobius_coeffs(num, den, target):
    # solve (n1*lam + n0)/(d1*lam + d0) = target for lam
    n1, n0 = (num[0], num[1]) if len(num) == 2 else (0.0j, num[0])
    d1, d0 = (den[0], den[1]) if len(den) == 2 else (0.0j, den[0])
    a = n1 - target * d1
    b = n0 - target * d0
    if abs(a) < 1e-15 * max(abs(b), 1.0):
        return None
    return -b / a


def finite_diff_derivative(f, z, direction, h: float = 1e-6) -> complex:
    """Central difference (f(z + h e) - f(z - h e)) / (2h) along `direction`."""
    if h <= 0:
        raise ValueError("h must be positive")
    if isinstance(z, (tuple, list)):
        zp = tuple(a + h * e for a, e in zip(z, direction))
        zm = tuple(a - h * e for a, e in zip(z, direction))
    else:
        zp = z + h * direction
        zm = z - h * direction
    return (f(zp) - f(zm)) / (2.0 * h)


@dataclass(frozen=True)
class SampleGrid:
    """Deterministic sample stream over a named region."""

    seed: int
    count: int
    region: str  # lens | polydisc | ball | circle

    def points(self, **kw):
        gen = {
            "lens": _sample_lens,
            "polydisc": _sample_polydisc,
            "ball": _sample_ball,
            "circle": _sample_circle,
        }[self.region]
        return [gen(self.seed, i, **kw) for i in range(self.count)]


def _sample_lens(seed, i, a=0.8, b=0.8, margin=0.0):
    """Rejection sampling of gamma1 in the bounding box of the lens."""
    rng = rng_for(seed, i)
    for _ in range(10000):
        g = complex(rng.uniform(-1, 1), rng.uniform(-1, 1))
        if abs(g) < 1.0 - margin and abs(a * g + 1.0) < b * (1.0 - margin):
            return g
    raise RuntimeError("lens sampling failed; lens empty or margin too large")


def _sample_polydisc(seed, i, n=3, radius=1.0):
    rng = rng_for(seed, i)
    out = []
    while len(out) < n:
        z = complex(rng.uniform(-1, 1), rng.uniform(-1, 1))
        if abs(z) < radius:
            out.append(z)
    return tuple(out)


def _sample_ball(seed, i, n=2, radius=1.0):
    rng = rng_for(seed, i)
    v = rng.normal(size=n) + 1j * rng.normal(size=n)
    r = radius * rng.uniform() ** (1.0 / (2 * n))
    return tuple(v * (r / np.linalg.norm(v)))


def _sample_circle(seed, i):
    rng = rng_for(seed, i)
    return cmath.exp(2j * math.pi * rng.uniform())
