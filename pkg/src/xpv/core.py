"""Shared numeric plumbing.

Enclosures, margin verdicts, verification reports, compensated summation,
adaptive quadrature, and the small root-finding and line-search helpers
used across the toolkit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import PrecisionError, UsageError

# Safety factor for inequality verdicts: a margin must clear eta*|scale|
# before it counts as a pass, and must undershoot -eta*|scale| before it
# counts as a fail.  Anything in between is reported as indeterminate so
# that float noise can never flip a verdict.
DEFAULT_ETA = 1e-9


@dataclass(frozen=True)
class Enclosure:
    """A closed interval [lo, hi] certified to contain a real quantity.

    Quadrature and truncation errors are always pushed to the safe side,
    so the true value lies inside by construction of each producer.
    """

    lo: float
    hi: float

    def __post_init__(self):
        if not (self.lo <= self.hi):
            raise PrecisionError(f"empty enclosure: lo={self.lo!r} > hi={self.hi!r}")

    @property
    def width(self) -> float:
        return self.hi - self.lo

    @property
    def mid(self) -> float:
        return 0.5 * (self.lo + self.hi)

    def contains(self, value: float) -> bool:
        return self.lo <= value <= self.hi

    def __contains__(self, value: float) -> bool:
        return self.contains(value)


def classify(margin: float, scale: float, eta: float = DEFAULT_ETA) -> str:
    """Three-way verdict for a signed margin (RHS - LHS at the worst point).

    pass           margin >= eta*|scale|, or margin is exactly 0.0
    fail           margin <= -eta*|scale|
    indeterminate  anything in between

    The exact-zero case is deliberate: when an inequality is attained with
    equality at a stated boundary point, both sides are computed by the
    identical float expression and the margin comes out as a true 0.0.
    That is a structural equality, not rounding noise.
    """
    threshold = eta * abs(scale)
    if margin == 0.0 or margin >= threshold:
        return "pass"
    if margin <= -threshold:
        return "fail"
    return "indeterminate"


def margins_verdict(margins, scales, eta: float = DEFAULT_ETA) -> str:
    """Vectorized verdict over a sweep: fail if any point fails, else
    indeterminate if any point is too close to call, else pass."""
    margins = np.asarray(margins)
    thresholds = eta * np.abs(np.asarray(scales))
    ok = (margins == 0.0) | (margins >= thresholds)
    bad = (margins <= -thresholds) & (margins != 0.0)
    if bad.any():
        return "fail"
    if not ok.all():
        return "indeterminate"
    return "pass"


@dataclass
class VerificationReport:
    """Outcome of sweeping one named inequality over a range.

    worst_margin is RHS - LHS at its minimum over all evaluated points,
    signed, so negative means the inequality failed somewhere.
    """

    check_id: str
    x_lo: float
    x_hi: float
    worst_margin: float
    arg_min: float
    passed: bool
    evaluation_count: int
    verdict: str
    notes: list = field(default_factory=list)

    def as_dict(self) -> dict:
        return {
            "check_id": self.check_id,
            "range": [self.x_lo, self.x_hi],
            "worst_margin": self.worst_margin,
            "arg_min": self.arg_min,
            "pass": self.passed,
            "evaluation_count": self.evaluation_count,
            "verdict": self.verdict,
            "notes": list(self.notes),
        }


def merge_reports(reports) -> VerificationReport:
    """Merge sub-range reports of the same check into one.

    Worst margin is the minimum across parts (ties broken toward the
    smaller arg_min, so partitioned sweeps reproduce the single-threaded
    arg_min).  Evaluation counts add; notes are concatenated without
    duplicates.
    """
    reports = list(reports)
    if not reports:
        raise UsageError("merge_reports needs at least one report")
    ids = {r.check_id for r in reports}
    if len(ids) != 1:
        raise UsageError(f"cannot merge reports of different checks: {sorted(ids)}")
    worst = min(reports, key=lambda r: (r.worst_margin, r.arg_min))
    verdicts = [r.verdict for r in reports]
    if "fail" in verdicts:
        verdict = "fail"
    elif "indeterminate" in verdicts:
        verdict = "indeterminate"
    else:
        verdict = "pass"
    notes = []
    for r in reports:
        for n in r.notes:
            if n not in notes:
                notes.append(n)
    return VerificationReport(
        check_id=worst.check_id,
        x_lo=min(r.x_lo for r in reports),
        x_hi=max(r.x_hi for r in reports),
        worst_margin=worst.worst_margin,
        arg_min=worst.arg_min,
        passed=all(r.passed for r in reports),
        evaluation_count=sum(r.evaluation_count for r in reports),
        verdict=verdict,
        notes=notes,
    )


class KahanSum:
    """Compensated accumulator for long streaming sums.

    Used where a sum is consumed incrementally (prefix sums over primes);
    one-shot sums go through math.fsum instead, which is exactly rounded.
    """

    __slots__ = ("total", "_c")

    def __init__(self, total: float = 0.0):
        self.total = total
        self._c = 0.0

    def add(self, term: float) -> float:
        y = term - self._c
        t = self.total + y
        self._c = (t - self.total) - y
        self.total = t
        return self.total


def adaptive_simpson(f, a: float, b: float, tol: float = 1e-12,
                     max_depth: int = 48):
    """Adaptive Simpson quadrature with a conservative error bound.

    Returns (value, err_bound).  The bound accumulates the standard
    |S_fine - S_coarse|/15 estimate for every accepted panel, inflated by
    a factor of 4 so the reported bound stays on the safe side of the
    usual Richardson model.
    """

    def simpson(x0, x2, f0, f1, f2):
        return (x2 - x0) / 6.0 * (f0 + 4.0 * f1 + f2)

    def recurse(x0, x2, f0, f1, f2, whole, tol_i, depth):
        x1 = 0.5 * (x0 + x2)
        xl = 0.5 * (x0 + x1)
        xr = 0.5 * (x1 + x2)
        fl = f(xl)
        fr = f(xr)
        left = simpson(x0, x1, f0, fl, f1)
        right = simpson(x1, x2, f1, fr, f2)
        delta = left + right - whole
        if depth >= max_depth:
            raise PrecisionError("adaptive_simpson: max depth exceeded")
        if abs(delta) <= 15.0 * tol_i:
            return left + right + delta / 15.0, abs(delta) / 15.0 * 4.0
        lv, le = recurse(x0, x1, f0, fl, f1, left, tol_i / 2.0, depth + 1)
        rv, re_ = recurse(x1, x2, f1, fr, f2, right, tol_i / 2.0, depth + 1)
        return lv + rv, le + re_

    if a == b:
        return 0.0, 0.0
    fa, fm, fb = f(a), f(0.5 * (a + b)), f(b)
    whole = simpson(a, b, fa, fm, fb)
    return recurse(a, b, fa, fm, fb, whole, tol, 0)


def bisect_root(g, lo: float, hi: float, tol: float = 1e-12,
                max_iter: int = 200):
    """Bisection with a sign-change bracket.  Returns the final (lo, hi)."""
    glo = g(lo)
    ghi = g(hi)
    if glo == 0.0:
        return lo, lo
    if ghi == 0.0:
        return hi, hi
    if (glo > 0) == (ghi > 0):
        raise UsageError(f"bisect_root: no sign change on [{lo}, {hi}]")
    for _ in range(max_iter):
        if hi - lo <= tol:
            break
        mid = 0.5 * (lo + hi)
        gm = g(mid)
        if gm == 0.0:
            return mid, mid
        if (gm > 0) == (glo > 0):
            lo, glo = mid, gm
        else:
            hi = mid
    return lo, hi


def golden_max(f, lo: float, hi: float, iters: int = 80):
    """Golden-section maximization on [lo, hi].  Returns (x, f(x))."""
    phi = (math.sqrt(5.0) - 1.0) / 2.0
    a, b = lo, hi
    c = b - phi * (b - a)
    d = a + phi * (b - a)
    fc, fd = f(c), f(d)
    for _ in range(iters):
        if fc < fd:
            a, c, fc = c, d, fd
            d = a + phi * (b - a)
            fd = f(d)
        else:
            b, d, fd = d, c, fc
            c = b - phi * (b - a)
            fc = f(c)
    x = 0.5 * (a + b)
    return x, f(x)


def geometric_grid(lo: float, hi: float, per_octave: int = 128) -> np.ndarray:
    """Absolute geometric grid 2**(j/per_octave) clipped to [lo, hi].

    Anchored to powers of two rather than to the endpoints, so the union
    of grids over a partition of [lo, hi] equals the grid of the whole
    range.  Both endpoints are appended exactly.
    """
    if not (lo < hi):
        return np.array([lo] if lo == hi else [], dtype=float)
    j_lo = math.ceil(per_octave * math.log2(lo) - 1e-12)
    j_hi = math.floor(per_octave * math.log2(hi) + 1e-12)
    pts = np.exp2(np.arange(j_lo, j_hi + 1, dtype=float) / per_octave)
    pts = pts[(pts >= lo) & (pts <= hi)]
    return np.unique(np.concatenate([[lo], pts, [hi]]))
