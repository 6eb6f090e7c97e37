"""Desk-scale laboratory for completely multiplicative f: Z -> [-1, 1].

Computes the running mean M_f, the logarithmic mean L_f, the prime
deficiency u and its normalized form Lambda, divisor-convolution means,
and quadratic character sums, then exercises the headline mean-value
inequalities on them.
"""

from __future__ import annotations

import hashlib
import math
from dataclasses import dataclass, field

import numpy as np

from .dickman import divisor_mean_lower_bound
from .errors import DomainError, PreconditionError, ResourceError, UsageError
from .primes import PrimeTable, _is_prime_u64, mertens_sum

STATS_X_CAP = 10 ** 8
CHAR_COMPOSITE_CAP = 10 ** 6
CHAR_PRIME_CAP = 10 ** 7

STATS_CSV_HEADER = "x,M,L,u,Lambda,conv_mean"

KINDS = ("quadratic_character", "liouville", "random_pm1", "constant_one", "custom")


def jacobi(a: int, n: int) -> int:
    """Jacobi symbol (a/n) for odd n >= 1 by binary reciprocity."""
    if n <= 0 or n % 2 == 0:
        raise DomainError(f"jacobi needs odd n >= 1, got {n}")
    a %= n
    result = 1
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                result = -result
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a %= n
    return result if n == 1 else 0


def _is_squarefree(q: int) -> bool:
    d = 2
    while d * d <= q:
        if q % (d * d) == 0:
            return False
        while q % d == 0:
            q //= d
        d += 1
    return True


@dataclass(frozen=True)
class MultiplicativeSpec:
    """One completely multiplicative function, defined by its values on
    primes.

    kinds: quadratic_character (Jacobi symbol mod odd squarefree q),
    liouville (-1 at every prime), random_pm1 (a fair sign per prime,
    derived by hashing (seed, p) so the draw is independent of
    evaluation order), constant_one, and custom (explicit prime table;
    primes absent from the table take the value 1, which keeps the
    function total).
    """

    kind: str
    q: int | None = None
    seed: int | None = None
    prime_values: tuple = ()
    description: str = ""

    def __post_init__(self):
        if self.kind not in KINDS:
            raise DomainError(f"unknown kind {self.kind!r}; known: {KINDS}")
        if self.kind == "quadratic_character":
            if self.q is None or self.q < 3 or self.q % 2 == 0:
                raise DomainError(f"quadratic_character needs odd q >= 3, got {self.q}")
            if not _is_squarefree(self.q):
                raise DomainError(f"quadratic_character needs squarefree q, got {self.q}")
        if self.kind == "random_pm1" and self.seed is None:
            raise DomainError("random_pm1 needs a seed")
        if self.kind == "custom":
            for p, v in self.prime_values:
                if not (-1.0 <= v <= 1.0):
                    raise DomainError(f"custom value at prime {p} outside [-1, 1]: {v}")
        if not self.description:
            object.__setattr__(self, "description", self._describe())

    def _describe(self) -> str:
        if self.kind == "quadratic_character":
            return f"quadratic character mod {self.q}"
        if self.kind == "random_pm1":
            return f"random +-1 per prime, seed {self.seed}"
        if self.kind == "custom":
            return f"custom prime table ({len(self.prime_values)} primes)"
        return self.kind.replace("_", " ")

    def prime_value(self, p: int) -> float:
        if self.kind == "constant_one":
            return 1.0
        if self.kind == "liouville":
            return -1.0
        if self.kind == "quadratic_character":
            return float(jacobi(p, self.q))
        if self.kind == "random_pm1":
            digest = hashlib.blake2b(
                f"{self.seed}:{p}".encode(), digest_size=8
            ).digest()
            return 1.0 if digest[0] & 1 == 0 else -1.0
        return dict(self.prime_values).get(p, 1.0)


def quadratic_character(q: int) -> MultiplicativeSpec:
    return MultiplicativeSpec(kind="quadratic_character", q=q)


def liouville() -> MultiplicativeSpec:
    return MultiplicativeSpec(kind="liouville")


def random_pm1(seed: int) -> MultiplicativeSpec:
    return MultiplicativeSpec(kind="random_pm1", seed=int(seed))


def constant_one() -> MultiplicativeSpec:
    return MultiplicativeSpec(kind="constant_one")


def custom(prime_values: dict) -> MultiplicativeSpec:
    items = tuple(sorted((int(p), float(v)) for p, v in prime_values.items()))
    return MultiplicativeSpec(kind="custom", prime_values=items)


def f_value(spec: MultiplicativeSpec, n: int) -> float:
    """f(n) through the prime factorization (trial division)."""
    if n == 0:
        raise DomainError("f_value needs n >= 1, got 0")
    if n < 0:
        raise DomainError(f"f_value needs n >= 1, got {n}")
    if n > 10 ** 12:
        raise ResourceError(f"f_value factors by trial division only up to 1e12, got {n}")
    out = 1.0
    m = n
    d = 2
    while d * d <= m:
        if m % d == 0:
            e = 0
            while m % d == 0:
                m //= d
                e += 1
            out *= spec.prime_value(d) ** e
        d += 1 if d == 2 else 2
    if m > 1:
        out *= spec.prime_value(m)
    return out


@dataclass(frozen=True)
class StatsRow:
    x: float
    M: float
    L: float
    u: float
    Lambda: float
    conv_mean: float

    def __post_init__(self):
        assert abs(self.M) <= 1.0
        assert self.u >= 0.0
        assert 0.0 <= self.Lambda <= 2.0

    def as_dict(self) -> dict:
        return {
            "x": self.x,
            "M": self.M,
            "L": self.L,
            "u": self.u,
            "Lambda": self.Lambda,
            "conv_mean": self.conv_mean,
        }

    def as_csv(self) -> str:
        return ",".join(
            "%.17g" % v
            for v in (self.x, self.M, self.L, self.u, self.Lambda, self.conv_mean)
        )


def _prime_values_vector(spec: MultiplicativeSpec, primes: np.ndarray) -> np.ndarray:
    if spec.kind == "constant_one":
        return np.ones(primes.size)
    if spec.kind == "liouville":
        return -np.ones(primes.size)
    if spec.kind == "quadratic_character":
        period = _chi_period(spec.q)
        return period[np.mod(primes, spec.q)].astype(np.float64)
    return np.array([spec.prime_value(int(p)) for p in primes])


def stats(spec: MultiplicativeSpec, x: float, table: PrimeTable) -> StatsRow:
    """All the row statistics of f up to x in one sieve pass.

    The value array is extended multiplicatively by one in-place scaling
    per prime power, so each f(n) is the exact product of its prime
    contributions; for f taking values in {-1, 0, 1} all downstream sums
    are integer-exact.
    """
    if x < 2:
        raise DomainError(f"stats needs x >= 2, got {x}")
    if x > STATS_X_CAP:
        raise ResourceError(f"stats is O(x) and capped at {STATS_X_CAP:.0e}, got {x}")
    n = int(math.floor(x))
    if table.limit < n:
        raise PreconditionError(f"stats needs table.limit >= {n}, got {table.limit}")
    n_pi = table.prime_pi(n)
    primes = table.primes[:n_pi]
    fp = _prime_values_vector(spec, primes)

    v = np.ones(n + 1)
    v[0] = 0.0
    for p, val in zip(primes, fp):
        p = int(p)
        if val == 1.0:
            continue
        if val == 0.0:
            v[p::p] = 0.0
            continue
        pe = p
        while pe <= n:
            v[pe::pe] *= val
            pe *= p
    values = v[1:]

    m_mean = math.fsum(values) / x
    log_x = math.log(x)
    l_mean = math.fsum(values / np.arange(1, n + 1, dtype=np.float64)) / log_x
    u = math.fsum((1.0 - fv) / float(p) for p, fv in zip(primes, fp))
    recip = mertens_sum(x, table)
    lam = 0.0 if u == 0.0 else u / recip
    if x == float(n):
        counts = n // np.arange(1, n + 1, dtype=np.int64)
    else:
        counts = np.floor(x / np.arange(1, n + 1, dtype=np.float64)).astype(np.int64)
    conv = math.fsum(values * counts) / x
    return StatsRow(x=float(x), M=m_mean, L=l_mean, u=u, Lambda=lam, conv_mean=conv)


# ---------------------------------------------------------------------------
# character sums


_CHI_CACHE = {}


def _chi_period(q: int) -> np.ndarray:
    """chi(n) = jacobi(n, q) for n = 0..q-1, as an int8 array."""
    cached = _CHI_CACHE.get(q)
    if cached is not None:
        return cached
    if _is_prime_u64(q):
        if q > CHAR_PRIME_CAP:
            raise ResourceError(f"character period capped at q <= {CHAR_PRIME_CAP:.0e}")
        chi = np.full(q, -1, dtype=np.int8)
        chi[0] = 0
        half = np.arange(1, (q + 1) // 2, dtype=np.int64)
        chi[np.mod(half * half, q)] = 1
    else:
        if q > CHAR_COMPOSITE_CAP:
            raise ResourceError(
                f"composite character period capped at q <= {CHAR_COMPOSITE_CAP:.0e}"
            )
        chi = np.array([jacobi(a, q) for a in range(q)], dtype=np.int8)
    if len(_CHI_CACHE) > 16:
        _CHI_CACHE.clear()
    _CHI_CACHE[q] = chi
    return chi


def char_sum(q: int, t: int) -> int:
    """Partial character sum: sum of jacobi(n, q) for 1 <= n <= t.

    Exact integer; the full-period sum tiles, so t may exceed q.
    """
    if q < 3 or q % 2 == 0:
        raise DomainError(f"char_sum needs odd q >= 3, got {q}")
    if t < 0:
        raise DomainError(f"char_sum needs t >= 0, got {t}")
    chi = _chi_period(q)
    full = int(chi.sum())
    whole, rest = divmod(int(t), q)
    return whole * full + int(chi[1 : rest + 1].sum())


def pv_ratio(q: int, table: PrimeTable | None = None) -> float:
    """max over 1 <= t <= q of |S_chi(t)| divided by sqrt(q) log q."""
    if q < 3 or q % 2 == 0:
        raise DomainError(f"pv_ratio needs an odd prime q >= 3, got {q}")
    if q > CHAR_PRIME_CAP:
        raise ResourceError(f"pv_ratio capped at q <= {CHAR_PRIME_CAP:.0e}")
    if table is not None and q <= table.limit:
        i = table.prime_pi(q)
        is_prime = i > 0 and int(table.primes[i - 1]) == q
    else:
        is_prime = _is_prime_u64(q)
    if not is_prime:
        raise DomainError(f"pv_ratio needs prime q, got {q}")
    chi = _chi_period(q)
    partial = np.cumsum(chi[1:].astype(np.int64))
    peak = int(np.max(np.abs(partial)))
    return peak / (math.sqrt(q) * math.log(q))


# ---------------------------------------------------------------------------
# the empirical checks


@dataclass
class EmpiricalChecks:
    spec_description: str
    row: StatsRow
    c: float
    checks: dict = field(default_factory=dict)
    notes: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(
            ch["status"] in ("pass", "vacuous-pass") for ch in self.checks.values()
        )


def empirical_checks(
    spec: MultiplicativeSpec, x: float, c: float, ledger, table: PrimeTable
) -> EmpiricalChecks:
    """Exercise the three headline inequalities on one function at one x.

    (i) decay of |M| against final * exp(-K u); (ii) |M| >= c forcing a
    floor under the log-mean (compared in log space; astronomically
    vacuous at desk scale, so the vacuity margin is always reported);
    (iii) the convolution mean against its lower bound.  Asymptotic
    lower-order terms are dropped throughout and stamped below.
    """
    from .meanvalue import delta

    if x < 2:
        raise DomainError(f"empirical_checks needs x >= 2, got {x}")
    row = stats(spec, x, table)
    out = EmpiricalChecks(
        spec_description=spec.description,
        row=row,
        c=c,
        notes=["asymptotic lower-order terms dropped in every bound"],
    )

    rhs = ledger.final * math.exp(-ledger.K * row.u)
    abs_m = abs(row.M)
    out.checks["mean-decay"] = {
        "status": "pass" if abs_m <= rhs else "fail",
        "abs_M": abs_m,
        "bound": rhs,
        "slack": math.inf if abs_m == 0.0 else rhs / abs_m,
    }

    log_delta = delta(c).log
    if abs_m >= c:
        ok = row.L > 0.0 and math.log(row.L) >= log_delta
        out.checks["large-mean-floor"] = {
            "status": "pass" if ok else "fail",
            "abs_M": abs_m,
            "log_L": math.log(row.L) if row.L > 0.0 else -math.inf,
            "log_delta": log_delta,
            "vacuity_margin": 0.0,
        }
    else:
        out.checks["large-mean-floor"] = {
            "status": "vacuous-pass",
            "abs_M": abs_m,
            "log_delta": log_delta,
            "vacuity_margin": c - abs_m,
        }

    bound = divisor_mean_lower_bound(x, row.u)
    out.checks["convolution-lower"] = {
        "status": "pass" if row.conv_mean >= bound else "fail",
        "conv_mean": row.conv_mean,
        "bound": bound,
        "slack": math.inf if bound == 0.0 else row.conv_mean / bound,
    }
    return out
