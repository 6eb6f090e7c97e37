"""Prime generation, prime sums, the logarithmic integral, and the
inequality sweep engine.

The sweep engine is the workhorse: it verifies each registered
prime-counting or prime-sum inequality over a range by evaluating the
margin (RHS - LHS, signed) at every point where the margin can attain an
extremum, and reports the worst margin with a three-way verdict.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .constants import (
    EULER_GAMMA,
    MERTENS_BRACKET_HI,
    MERTENS_BRACKET_LO,
    MERTENS_M,
    MPRIME_COARSE_BOUND,
    PUBLISHED_V1,
)
from .core import (
    DEFAULT_ETA,
    Enclosure,
    KahanSum,
    VerificationReport,
    adaptive_simpson,
    bisect_root,
    geometric_grid,
    margins_verdict,
)
from .errors import (
    DomainError,
    PrecisionError,
    PreconditionError,
    ResourceError,
    UsageError,
)

DEFAULT_SIEVE_CAP = 10 ** 9
_SEGMENT_SIZE = 1 << 22

# Deterministic Miller-Rabin witness set, valid for all n < 3.3e24.
_MR_WITNESSES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


# ---------------------------------------------------------------------------
# sieving and the prime table


def _sieve_flags(limit: int) -> np.ndarray:
    flags = np.ones(limit + 1, dtype=bool)
    flags[:2] = False
    for p in range(2, math.isqrt(limit) + 1):
        if flags[p]:
            flags[p * p :: p] = False
    return flags


class PrimeTable:
    """All primes up to ``limit``, immutable once built, plus the prefix
    sums the sweep engine needs (built lazily, Kahan compensated)."""

    def __init__(self, limit: int, primes: np.ndarray):
        self.limit = int(limit)
        self.primes = primes
        self._recip_prefix = None
        self._log2_prefix = None
        self._float_primes = None

    def __len__(self) -> int:
        return int(self.primes.size)

    def prime_pi(self, x: float) -> int:
        """pi(x) = number of primes <= x."""
        return int(np.searchsorted(self.primes, x, side="right"))

    def float_primes(self) -> np.ndarray:
        if self._float_primes is None:
            self._float_primes = self.primes.astype(np.float64)
        return self._float_primes

    def recip_prefix(self) -> np.ndarray:
        """R[k] = sum of 1/p over the first k primes, R[0] = 0."""
        if self._recip_prefix is None:
            ps = self.float_primes()
            out = np.empty(ps.size + 1)
            out[0] = 0.0
            acc = KahanSum()
            for i in range(ps.size):
                out[i + 1] = acc.add(1.0 / ps[i])
            self._recip_prefix = out
        return self._recip_prefix

    def log2_prefix(self) -> np.ndarray:
        """L[k] = sum of log(p)^2/p over the first k primes, L[0] = 0."""
        if self._log2_prefix is None:
            ps = self.float_primes()
            terms = np.log(ps) ** 2 / ps
            out = np.empty(ps.size + 1)
            out[0] = 0.0
            acc = KahanSum()
            for i in range(ps.size):
                out[i + 1] = acc.add(float(terms[i]))
            self._log2_prefix = out
        return self._log2_prefix


def sieve_primes(limit: int, cap: int | None = None) -> PrimeTable:
    """Sieve all primes up to ``limit`` (segmented above 10**8)."""
    limit = int(limit)
    cap = DEFAULT_SIEVE_CAP if cap is None else int(cap)
    if limit < 2:
        raise DomainError(f"sieve limit must be at least 2, got {limit}")
    if limit > cap:
        raise ResourceError(f"sieve limit {limit} exceeds cap {cap}")
    if limit <= 10 ** 8:
        flags = _sieve_flags(limit)
        return PrimeTable(limit, np.flatnonzero(flags).astype(np.int64))
    base = np.flatnonzero(_sieve_flags(math.isqrt(limit))).astype(np.int64)
    chunks = [base]
    lo = int(base[-1]) + 1
    while lo <= limit:
        hi = min(lo + _SEGMENT_SIZE, limit + 1)
        seg = np.ones(hi - lo, dtype=bool)
        for p in base:
            p = int(p)
            if p * p >= hi:
                break
            start = max(p * p, ((lo + p - 1) // p) * p)
            seg[start - lo :: p] = False
        chunks.append(np.flatnonzero(seg).astype(np.int64) + lo)
        lo = hi
    return PrimeTable(limit, np.concatenate(chunks))


def _is_prime_u64(n: int) -> bool:
    if n < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % p == 0:
            return n == p
    d = n - 1
    r = 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in _MR_WITNESSES:
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def least_prime_3mod4_above(x: float) -> int:
    """Least prime l > x with l congruent to 3 mod 4.

    Also checks (not assumes) the Breusch consequence l <= 2x for x >= 7.
    """
    if x < 1:
        raise DomainError(f"least_prime_3mod4_above needs x >= 1, got {x}")
    if x >= 2 ** 62:
        raise ResourceError("argument exceeds 64-bit primality range")
    n = int(math.floor(x)) + 1
    n += (3 - n) % 4
    while not _is_prime_u64(n):
        n += 4
    if x >= 7:
        assert n <= 2 * x, f"prime 3 mod 4 after {x} exceeded 2x: {n}"
    return n


# ---------------------------------------------------------------------------
# the logarithmic integral


def _li_series_scalar(x: float):
    """li(x) via the exponential-integral series at y = log x.

    Returns (value, half_width): the series value and a conservative
    bound combining the truncation remainder with per-term rounding.
    """
    y = math.log(x)
    terms = [EULER_GAMMA, math.log(y)]
    t = 1.0
    k = 1
    mag = abs(terms[0]) + abs(terms[1])
    while True:
        t *= y / k
        term = t / k
        terms.append(term)
        mag += term
        if k > y and term < 1e-20 * mag:
            break
        if k > 4000:
            raise ResourceError("li series failed to converge")
        k += 1
    # remainder after k: next term times a geometric factor
    nxt = t * y / (k + 1) / (k + 1)
    geo = 1.0 / (1.0 - y / (k + 2)) if y < k + 2 else float("inf")
    trunc = nxt * geo
    value = math.fsum(terms)
    half = trunc + (y + 2.0) * 2.3e-16 * mag + 1e-300
    return value, half


def _li_series_vec(xs: np.ndarray):
    """Vectorized li over an array of x > 1.  Returns (values, half_widths)."""
    ys = np.log(xs)
    ymax = float(ys.max())
    n_terms = max(80, int(5.2 * ymax) + 20)
    acc = EULER_GAMMA + np.log(ys)
    mag = np.abs(acc)
    t = np.ones_like(ys)
    for k in range(1, n_terms + 1):
        t *= ys / k
        acc += t / k
        mag += t / k
    nxt = t * ys / (n_terms + 1) / (n_terms + 1)
    trunc = nxt / (1.0 - ys / (n_terms + 2))
    half = trunc + (ys + 2.0) * 2.3e-16 * mag + 1e-300
    return acc, half


def _graded_simpson(f, a: float, b: float, tol: float):
    """Adaptive Simpson over geometrically doubling panels from a to b.

    Splitting [a, b] at a, 2a, 4a, ... keeps each panel a bounded
    multiple of its distance from zero, so integrands with a pole at the
    origin stay tame on every panel even when a is tiny.
    """
    cuts = [a]
    v = a
    while 2.0 * v < b:
        v *= 2.0
        cuts.append(v)
    cuts.append(b)
    per = tol / len(cuts)
    total = KahanSum()
    err = 0.0
    for lo, hi in zip(cuts, cuts[1:]):
        val, e = adaptive_simpson(f, lo, hi, per)
        total.add(val)
        err += e
    return total.total, err


def _li_quad(x: float, tol: float):
    """li(x) as a principal-value integral, by adaptive quadrature.

    The singularity at t = 1 is removed by folding [1-u, 1+u] onto
    [0, u], where the symmetrized integrand 1/log(1+s) + 1/log(1-s) is
    smooth with limit 1 at s = 0.  The head piece over (0, 1-u] becomes
    the exponential integral of exp(-v)/v under t = exp(-v); the tail
    piece over [1+u, x] becomes exp(v)/v under t = exp(v).  Both
    substitutions move the awkward behavior to a simple 1/v factor
    bounded away from its pole.
    """

    def fold(s):
        if s == 0.0:
            return 1.0
        return 1.0 / math.log1p(s) + 1.0 / math.log1p(-s)

    def head(v):
        return math.exp(-v) / v

    def tail(v):
        return math.exp(v) / v

    u = min(0.5, (x - 1.0) / 2.0)
    v0 = -math.log1p(-u)
    v_top = v0 + 40.0
    v1, e1 = _graded_simpson(head, v0, v_top, tol / 3.0)
    e1 += math.exp(-v_top) / v_top
    v2, e2 = adaptive_simpson(fold, 0.0, u, tol / 3.0)
    v3, e3 = _graded_simpson(tail, math.log1p(u), math.log(x), tol / 3.0)
    return -v1 + v2 + v3, e1 + e2 + e3


def log_integral(x: float) -> Enclosure:
    """Enclosure of li(x) = PV integral of 1/log t from 0 to x.

    The enclosure comes from the exponential-integral series with a
    rigorous truncation remainder; an independent adaptive quadrature of
    the principal-value integral must agree within the combined widths,
    otherwise a PrecisionError is raised.
    """
    if x <= 1.0:
        raise DomainError(f"log_integral needs x > 1, got {x}")
    value, half = _li_series_scalar(x)
    scale = max(1.0, abs(value))
    qtol = max(1e-13, 1e-12 * scale)
    qv, qe = _li_quad(x, qtol)
    if abs(qv - value) > half + qe + 1e-11 * scale:
        raise PrecisionError(
            f"log_integral methods disagree at x={x}: series {value}, quadrature {qv}"
        )
    return Enclosure(value - half, value + half)


# ---------------------------------------------------------------------------
# prime sums


def _require_table(table: PrimeTable | None, x: float, what: str) -> PrimeTable:
    if table is None:
        raise PreconditionError(f"{what} needs a prime table")
    if table.limit < x:
        raise PreconditionError(
            f"{what} needs table.limit >= {x}, got {table.limit}"
        )
    return table


def mertens_sum(x: float, table: PrimeTable) -> float:
    """Sum of 1/p over primes p <= x, exactly-rounded accumulation."""
    if x < 2:
        raise DomainError(f"mertens_sum needs x >= 2, got {x}")
    _require_table(table, x, "mertens_sum")
    ps = table.float_primes()[: table.prime_pi(x)]
    return math.fsum(1.0 / p for p in ps)


def log_square_sum(x: float, table: PrimeTable) -> float:
    """Sum of log(p)^2/p over primes p <= x."""
    if x <= 1:
        raise DomainError(f"log_square_sum needs x > 1, got {x}")
    _require_table(table, x, "log_square_sum")
    ps = table.float_primes()[: table.prime_pi(x)]
    return math.fsum(math.log(p) ** 2 / p for p in ps)


def prime_zeta(k: int, table: PrimeTable) -> Enclosure:
    """Enclosure of P(k) = sum over all primes of p**(-k).

    Finite part over the table, tail bounded by N**(1-k)/(k-1) with
    N = table.limit.
    """
    if not isinstance(k, (int, np.integer)) or k < 2:
        raise DomainError(f"prime_zeta needs integer k >= 2, got {k!r}")
    k = int(k)
    ps = table.float_primes()
    partial = float(np.sum(ps ** (-float(k))))
    tail = float(table.limit) ** (1 - k) / (k - 1)
    pad = 4e-15 * partial + 5e-324 * ps.size
    return Enclosure(partial - pad, partial + tail + pad)


def nu2(table: PrimeTable) -> Enclosure:
    """Enclosure of the constant sum_{k>=2} P(k)/k.

    Truncated at k = 64; the k-tail uses P(k) <= 2**(2-k), which gives a
    geometric bound below 1e-19.  Must bracket gamma - M.
    """
    if table.limit < 10 ** 6:
        raise PreconditionError(
            f"nu2 needs table.limit >= 1e6, got {table.limit}"
        )
    los = []
    his = []
    for k in range(2, 65):
        enc = prime_zeta(k, table)
        los.append(enc.lo / k)
        his.append(enc.hi / k)
    k_tail = (4.0 / 65.0) * 2.0 ** -64 * 2.0
    return Enclosure(math.fsum(los), math.fsum(his) + k_tail)


def tail_power_sum_bound(alpha: float) -> float:
    """The chain bound (1 + alpha) * 1.2551 / e for the prime tail sum
    over p > exp(1/alpha) of p**-(1+alpha), valid for 0 < alpha <= 1."""
    if not (0.0 < alpha <= 1.0):
        raise DomainError(f"tail_power_sum_bound needs 0 < alpha <= 1, got {alpha}")
    return (1.0 + alpha) * 1.2551 / math.e


# ---------------------------------------------------------------------------
# the inequality registry and sweep engine


@dataclass(frozen=True)
class CheckDef:
    check_id: str
    kind: str  # "pi-step", "sum-step", "smooth", "alpha-grid"
    validity: str  # human-readable validity range for error messages
    lo: float
    hi: float
    lo_open: bool = False
    hi_open: bool = False


REGISTRY = {
    c.check_id: c
    for c in [
        CheckDef("pnt-lower", "pi-step", "x >= 59", 59.0, math.inf),
        CheckDef("pnt-upper", "pi-step", "x >= 59", 59.0, math.inf),
        CheckDef("li-lower", "smooth", "x >= 2", 2.0, math.inf),
        CheckDef("li-upper", "smooth", "x >= 1865", 1865.0, math.inf),
        CheckDef("pi-li-1", "pi-step", "x >= 2", 2.0, math.inf),
        CheckDef("pi-li-2", "pi-step", "x >= 2", 2.0, math.inf),
        CheckDef("pi-li-3", "pi-step", "x >= 2", 2.0, math.inf),
        CheckDef("mertens-remainder", "sum-step", "x > 1", 1.0, math.inf, lo_open=True),
        CheckDef("mertens-bracket", "sum-step", "x >= 2", 2.0, math.inf),
        CheckDef("mertens-mprime-coarse", "sum-step", "x >= 2", 2.0, math.inf),
        CheckDef("log2p-plain", "sum-step", "1 < x < 355991", 1.0, 355991.0,
                 lo_open=True, hi_open=True),
        CheckDef("tail-power", "alpha-grid", "0 < alpha <= 1", 0.0, 1.0, lo_open=True),
    ]
}

# Stationary point of the upper-branch margin of mertens-remainder,
# d/dx [1/log^2 x + loglog x] = 0 at log^2 x = 2.
_REMAINDER_STATIONARY_X = math.exp(math.sqrt(2.0))

_GAP_NOTE = (
    "critical points: pi(x) and the prime sums are constant on the open gap "
    "between consecutive primes while the smooth side is monotone there, so "
    "margin extrema land on the inclusive state at x_lo, both one-sided "
    "limits at each prime in (x_lo, x_hi], and x_hi; the left limit at x_lo "
    "itself lies outside the closed range and is excluded"
)

_CHECK_NOTES = {
    "pi-li-1": "on gaps RHS' - li' = -(0.5103 log x + 0.4897)/log^2 x < 0, so the "
               "margin is monotone on each sign branch of li - pi and minima land "
               "on gap endpoints",
    "pi-li-2": "on gaps RHS' - li' = (1.3597(log x - 2) - log^2 x)/log^3 x < 0 "
               "(negative discriminant), so minima land on gap endpoints",
    "pi-li-3": "0.1522 u exp(-sqrt(u/6.455))(1 - 1/(2 sqrt(6.455 u))) peaks at "
               "0.5113 < 1 (u = 25.82), so RHS' < li' everywhere and minima land "
               "on gap endpoints",
    "mertens-remainder": "the upper-branch margin 1/log^2 x + loglog x + M - S has "
                         "one stationary point at x = exp(sqrt 2), evaluated "
                         "explicitly when in range",
    "li-lower": "margin derivative is 2/log^3 x > 0, so the margin increases in x "
                "and the worst point is the left endpoint",
    "li-upper": "margin derivative is (log x - 6)/(2 log^3 x) > 0 for x > e^6, so "
                "on the validity range the worst point is the left endpoint",
}


def _step_states(x_lo: float, x_hi: float, table: PrimeTable):
    """Evaluation states for step-function sweeps.

    Returns (xs, pis): the x of each evaluation and the prime count of
    the state.  For each prime p in (x_lo, x_hi] both the left-limit
    state (pi(p) - 1, evaluated at x = p) and the inclusive state pi(p)
    appear; x_lo and x_hi contribute their inclusive states.
    """
    pr = table.primes
    i_lo = int(np.searchsorted(pr, x_lo, side="right"))
    i_hi = int(np.searchsorted(pr, x_hi, side="right"))
    ps = pr[i_lo:i_hi].astype(np.float64)
    n = ps.size
    xs = np.empty(2 * n + 2)
    pis = np.empty(2 * n + 2)
    xs[0], pis[0] = x_lo, i_lo
    if n:
        ks = np.arange(i_lo + 1, i_hi + 1, dtype=np.float64)
        xs[1 : 2 * n + 1 : 2] = ps
        pis[1 : 2 * n + 1 : 2] = ks - 1.0
        xs[2 : 2 * n + 2 : 2] = ps
        pis[2 : 2 * n + 2 : 2] = ks
    xs[-1], pis[-1] = x_hi, i_hi
    return xs, pis


def _margins_pi_step(check_id: str, xs: np.ndarray, pis: np.ndarray):
    u = np.log(xs)
    if check_id == "pnt-lower":
        rhs = xs / u * (1.0 + 1.0 / (2.0 * u))
        return pis - rhs, rhs
    if check_id == "pnt-upper":
        rhs = xs / u * (1.0 + 3.0 / (2.0 * u))
        return rhs - pis, rhs
    li, li_err = _li_series_vec(xs)
    dev = np.abs(li - pis) + li_err
    if check_id == "pi-li-1":
        rhs = 0.4897 * xs / u
    elif check_id == "pi-li-2":
        rhs = 1.3597 * xs / u ** 2
    else:  # pi-li-3
        rhs = 0.1522 * xs * np.exp(-np.sqrt(u / 6.455))
    return rhs - dev, rhs


def _margins_sum_step(check_id: str, xs: np.ndarray, sums: np.ndarray):
    u = np.log(xs)
    loglog = np.log(u)
    if check_id == "mertens-remainder":
        rhs = 1.0 / u ** 2
        return rhs - np.abs(sums - loglog - MERTENS_M), rhs
    if check_id == "mertens-bracket":
        m_lo = sums - (loglog + MERTENS_BRACKET_LO)
        m_hi = (loglog + MERTENS_BRACKET_HI) - sums
        lower_worse = m_lo <= m_hi
        margin = np.where(lower_worse, m_lo, m_hi)
        scale = np.where(
            lower_worse,
            np.abs(loglog + MERTENS_BRACKET_LO),
            np.abs(loglog + MERTENS_BRACKET_HI),
        )
        return margin, scale
    if check_id == "mertens-mprime-coarse":
        return (
            MPRIME_COARSE_BOUND - np.abs(sums - loglog - MERTENS_M),
            np.full_like(xs, MPRIME_COARSE_BOUND),
        )
    # log2p-plain
    rhs = u ** 2 / 2.0
    return rhs - sums, rhs


def verify_inequality(
    check_id: str,
    x_lo: float,
    x_hi: float,
    table: PrimeTable | None = None,
    eta: float = DEFAULT_ETA,
) -> VerificationReport:
    """Sweep one registered inequality over [x_lo, x_hi].

    Raises UsageError for an unknown check id and PreconditionError when
    the range leaves the check's stated validity interval (the message
    names the valid range).
    """
    if check_id not in REGISTRY:
        raise UsageError(
            f"unknown check id {check_id!r}; known: {', '.join(sorted(REGISTRY))}"
        )
    cd = REGISTRY[check_id]
    if not (x_lo <= x_hi):
        raise UsageError(f"empty range [{x_lo}, {x_hi}]")
    lo_ok = x_lo > cd.lo if cd.lo_open else x_lo >= cd.lo
    hi_ok = x_hi < cd.hi if cd.hi_open else x_hi <= cd.hi
    if not (lo_ok and hi_ok):
        raise PreconditionError(
            f"check {check_id!r} is valid for {cd.validity}; "
            f"requested range [{x_lo}, {x_hi}] lies outside it"
        )

    notes = [_GAP_NOTE] if cd.kind in ("pi-step", "sum-step") else []
    if check_id in _CHECK_NOTES:
        notes.append(_CHECK_NOTES[check_id])

    if cd.kind == "pi-step":
        _require_table(table, x_hi, check_id)
        xs, pis = _step_states(x_lo, x_hi, table)
        margins, scales = _margins_pi_step(check_id, xs, pis)
    elif cd.kind == "sum-step":
        _require_table(table, x_hi, check_id)
        xs, pis = _step_states(x_lo, x_hi, table)
        prefix = (
            table.log2_prefix() if check_id == "log2p-plain" else table.recip_prefix()
        )
        sums = prefix[pis.astype(np.int64)]
        if check_id == "mertens-remainder" and x_lo < _REMAINDER_STATIONARY_X <= x_hi:
            xstat = _REMAINDER_STATIONARY_X
            k = table.prime_pi(xstat)
            xs = np.append(xs, xstat)
            sums = np.append(sums, prefix[k])
        margins, scales = _margins_sum_step(check_id, xs, sums)
    elif cd.kind == "smooth":
        xs = geometric_grid(x_lo, x_hi)
        li, li_err = _li_series_vec(xs)
        u = np.log(xs)
        if check_id == "li-lower":
            rhs = xs / u * (1.0 + 1.0 / u)
            margins = (li - li_err) - rhs
            scales = np.abs(rhs)
        else:  # li-upper
            li2, li2_half = _li_series_scalar(2.0)
            rhs = xs / u * (1.0 + 3.0 / (2.0 * u)) + li2
            margins = rhs - (li + li_err + li2_half)
            scales = np.abs(rhs)
        if margins[0] < 0.0 < margins[-1]:
            a, b = bisect_root(
                lambda t: _li_series_scalar(t)[0]
                - t / math.log(t) * (1.0 + 1.0 / math.log(t)),
                float(xs[0]),
                float(xs[-1]),
                tol=1e-9,
            )
            notes.append(
                f"margin changes sign at x = {0.5 * (a + b):.9f}; the stated "
                f"validity ({cd.validity}) is inconsistent with the computed "
                f"crossover and is reported, not adjusted"
            )
    else:  # alpha-grid
        j_lo = math.ceil(x_lo * 1024.0 - 1e-12)
        j_hi = math.floor(x_hi * 1024.0 + 1e-12)
        grid = np.arange(max(j_lo, 1), j_hi + 1, dtype=np.float64) / 1024.0
        xs = np.unique(np.concatenate([[x_lo], grid, [x_hi]]))
        bound = (1.0 + xs) * 1.2551 / math.e
        margins = PUBLISHED_V1 - bound
        scales = np.full_like(xs, PUBLISHED_V1)
        notes.append(
            "alpha sweep of the chain bound (1+alpha)*1.2551/e against the "
            "published 0.9235; grid step 1/1024 plus endpoints"
        )

    order = np.lexsort((xs, margins))
    worst_i = int(order[0])
    verdict = margins_verdict(margins, scales, eta)
    neg = np.flatnonzero(margins < 0.0)
    if neg.size:
        notes.append(
            f"negative margins at {neg.size} of {margins.size} evaluation "
            f"points; first at x = {xs[neg[0]]:.9g}, last at x = {xs[neg[-1]]:.9g}"
        )
    return VerificationReport(
        check_id=check_id,
        x_lo=float(x_lo),
        x_hi=float(x_hi),
        worst_margin=float(margins[worst_i]),
        arg_min=float(xs[worst_i]),
        passed=(verdict == "pass"),
        evaluation_count=int(margins.size),
        verdict=verdict,
        notes=notes,
    )


def split_range(x_lo: float, x_hi: float, parts: int):
    """Geometric partition of [x_lo, x_hi] into closed subranges that
    cover the range without double-counting interior points."""
    if parts < 1:
        raise UsageError(f"parts must be >= 1, got {parts}")
    if x_lo > x_hi:
        raise UsageError(f"empty range [{x_lo}, {x_hi}]")
    if parts == 1 or x_lo == x_hi:
        return [(x_lo, x_hi)]
    ratio = (x_hi / x_lo) ** (1.0 / parts) if x_lo > 0 else None
    cuts = [x_lo]
    for i in range(1, parts):
        c = x_lo * ratio ** i if ratio else x_lo + (x_hi - x_lo) * i / parts
        cuts.append(c)
    cuts.append(x_hi)
    out = []
    lo = x_lo
    for i in range(1, parts + 1):
        hi = cuts[i]
        if lo > hi:
            continue
        out.append((lo, hi))
        lo = float(np.nextafter(hi, math.inf))
    return out
