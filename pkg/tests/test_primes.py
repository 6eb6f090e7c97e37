import math

import numpy as np
import pytest

from xpv.core import merge_reports
from xpv.errors import (
    DomainError,
    PreconditionError,
    ResourceError,
    UsageError,
)
from xpv.primes import (
    REGISTRY,
    least_prime_3mod4_above,
    log_integral,
    log_square_sum,
    mertens_sum,
    nu2,
    prime_zeta,
    sieve_primes,
    split_range,
    tail_power_sum_bound,
    verify_inequality,
)


def _is_prime_trial(n):
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


# ---------------------------------------------------------------------------
# sieve


def test_sieve_small_counts(prime_table):
    assert prime_table.prime_pi(10) == 4
    assert prime_table.prime_pi(100) == 25
    assert prime_table.prime_pi(10 ** 5) == 9592
    assert prime_table.prime_pi(10 ** 6) == 78498


def test_sieve_against_trial_division(prime_table):
    rng = np.random.default_rng(20260816)
    ns = rng.integers(2, 10 ** 6, size=100)
    pset = set(int(p) for p in prime_table.primes[prime_table.primes < 1_000_100])
    for n in ns:
        n = int(n)
        assert (n in pset) == _is_prime_trial(n)


def test_sieve_domain_and_cap():
    with pytest.raises(DomainError):
        sieve_primes(1)
    with pytest.raises(ResourceError):
        sieve_primes(10 ** 7, cap=10 ** 6)


def test_prime_pi_step_semantics(prime_table):
    # pi jumps exactly at primes
    assert prime_table.prime_pi(7) == 4
    assert prime_table.prime_pi(6.999999) == 3
    assert prime_table.prime_pi(2) == 1
    assert prime_table.prime_pi(1.999) == 0


def test_least_prime_3mod4():
    # strictly above the argument
    assert least_prime_3mod4_above(1) == 3
    assert least_prime_3mod4_above(3) == 7
    assert least_prime_3mod4_above(4) == 7
    assert least_prime_3mod4_above(8) == 11
    p = least_prime_3mod4_above(10 ** 12)
    assert p % 4 == 3 and p >= 10 ** 12
    assert p <= 2 * 10 ** 12
    with pytest.raises(DomainError):
        least_prime_3mod4_above(0)


# ---------------------------------------------------------------------------
# logarithmic integral


def test_li_reference_values():
    assert log_integral(2.0).mid == pytest.approx(1.0451637801174927, rel=1e-12)
    assert log_integral(5.0).mid == pytest.approx(3.634588310032651, rel=1e-12)
    assert log_integral(11.0).mid == pytest.approx(6.591009215721215, rel=1e-12)
    assert log_integral(29.0).mid == pytest.approx(12.727151404924387, rel=1e-12)
    assert log_integral(1e6).mid == pytest.approx(78627.549159462, rel=1e-12)


def test_li_domain():
    with pytest.raises(DomainError):
        log_integral(1.0)
    with pytest.raises(DomainError):
        log_integral(0.5)


def test_li_methods_overlap_log_spaced():
    # the constructor cross-checks the series against an independent
    # quadrature and raises when they disagree, so a clean pass over a
    # dense log-spaced set is the agreement statement itself
    xs = np.logspace(1e-3, 9.0, 1000)
    prev = -math.inf
    for x in xs:
        enc = log_integral(float(x))
        assert enc.width < 1e-9 * max(1.0, abs(enc.mid)) + 1e-10
        assert enc.mid > prev
        prev = enc.mid


def test_li_zero_crossing_region():
    # li has one sign change; values straddle it
    assert log_integral(1.4).mid < 0.0
    assert log_integral(1.5).mid > 0.0


# ---------------------------------------------------------------------------
# prime sums


def test_mertens_sum_values(prime_table):
    assert mertens_sum(2.0, prime_table) == 0.5
    assert mertens_sum(10.0, prime_table) == pytest.approx(
        0.5 + 1 / 3 + 0.2 + 1 / 7, rel=1e-15
    )
    assert mertens_sum(1e6, prime_table) == pytest.approx(
        2.887328099567673, rel=1e-14
    )


def test_mertens_sum_preconditions(prime_table):
    with pytest.raises(DomainError):
        mertens_sum(1.5, prime_table)
    with pytest.raises(PreconditionError):
        mertens_sum(10.0, None)
    with pytest.raises(PreconditionError):
        mertens_sum(10 ** 7, prime_table)


def test_log_square_sum_small(prime_table):
    want = math.log(2) ** 2 / 2 + math.log(3) ** 2 / 3
    assert log_square_sum(3.0, prime_table) == pytest.approx(want, rel=1e-15)


def test_prime_zeta_decreasing_and_bounded(prime_table):
    prev = None
    for k in range(2, 20):
        enc = prime_zeta(k, prime_table)
        assert enc.hi <= 2.0 ** (1 - k) * 2.0
        if prev is not None:
            assert enc.hi < prev.lo
        prev = enc
    with pytest.raises(DomainError):
        prime_zeta(1, prime_table)


def test_prime_zeta_p2(prime_table):
    enc = prime_zeta(2, prime_table)
    # prime zeta at 2, literature value
    assert enc.contains(0.4522474200410654)


def test_nu2_brackets_gamma_minus_m(prime_table):
    enc = nu2(prime_table)
    assert enc.contains(0.5772156649015329 - 0.26149721284764278)
    assert enc.hi <= 0.316
    assert enc.width < 1e-6


def test_nu2_needs_big_table():
    t = sieve_primes(10 ** 4)
    with pytest.raises(PreconditionError):
        nu2(t)


def test_tail_power_bound_formula():
    assert tail_power_sum_bound(1.0) == pytest.approx(2.0 * 1.2551 / math.e, rel=1e-15)
    with pytest.raises(DomainError):
        tail_power_sum_bound(0.0)
    with pytest.raises(DomainError):
        tail_power_sum_bound(1.5)


# ---------------------------------------------------------------------------
# the sweep registry: frozen worst margins over the reference ranges


def test_registry_lists_all_checks():
    assert set(REGISTRY) == {
        "pnt-lower", "pnt-upper", "li-lower", "li-upper",
        "pi-li-1", "pi-li-2", "pi-li-3",
        "mertens-remainder", "mertens-bracket", "mertens-mprime-coarse",
        "log2p-plain", "tail-power",
    }


def test_pnt_pair_passes_on_validity(prime_table):
    r = verify_inequality("pnt-lower", 59, 1e6, prime_table)
    assert r.verdict == "pass"
    assert r.worst_margin == pytest.approx(0.17056620124210146, rel=1e-9)
    assert r.arg_min == 67.0
    r = verify_inequality("pnt-upper", 59, 1e6, prime_table)
    assert r.verdict == "pass"
    assert r.worst_margin == pytest.approx(1.4877691457242742, rel=1e-9)
    assert r.arg_min == 113.0


def test_pi_li_1_fails_below_11(prime_table):
    r = verify_inequality("pi-li-1", 2, 1e6, prime_table)
    assert r.verdict == "fail"
    assert r.worst_margin == pytest.approx(-0.3445808328362272, rel=1e-9)
    assert r.arg_min == 11.0
    # the restriction to [11, 1e6] passes
    r2 = verify_inequality("pi-li-1", 11, 1e6, prime_table)
    assert r2.verdict == "pass"


def test_pi_li_2_fails_below_41(prime_table):
    r = verify_inequality("pi-li-2", 2, 1e6, prime_table)
    assert r.verdict == "fail"
    assert r.worst_margin == pytest.approx(-0.24956002711107894, rel=1e-9)
    assert r.arg_min == 29.0
    assert verify_inequality("pi-li-2", 41, 1e6, prime_table).verdict == "pass"


def test_pi_li_3_fails_below_67(prime_table):
    r = verify_inequality("pi-li-3", 2, 1e6, prime_table)
    assert r.verdict == "fail"
    assert r.worst_margin == pytest.approx(-1.6808676449500197, rel=1e-9)
    assert r.arg_min == 11.0
    assert verify_inequality("pi-li-3", 67, 1e6, prime_table).verdict == "pass"


def test_mertens_remainder_passes(prime_table):
    r = verify_inequality("mertens-remainder", 2, 1e6, prime_table)
    assert r.verdict == "pass"
    assert r.worst_margin == pytest.approx(0.0012817268006865973, rel=1e-9)
    assert r.arg_min == 19.0


def test_mertens_bracket_worst_at_two(prime_table):
    r = verify_inequality("mertens-bracket", 2, 1e6, prime_table)
    assert r.verdict == "pass"
    assert r.arg_min == 2.0
    assert 0.0 < r.worst_margin < 5e-4
    assert r.worst_margin == pytest.approx(8.707941833563382e-05, rel=1e-9)


def test_mprime_coarse_passes(prime_table):
    r = verify_inequality("mertens-mprime-coarse", 2, 1e6, prime_table)
    assert r.verdict == "pass"
    assert r.worst_margin == pytest.approx(8.429226597828077e-05, rel=1e-9)


def test_log2p_fails_at_three(prime_table):
    r = verify_inequality("log2p-plain", 2, 355990, prime_table)
    assert r.verdict == "fail"
    assert r.arg_min == 3.0
    assert r.worst_margin == pytest.approx(-0.03906834682367033, rel=1e-9)
    # equality at the left edge of the validity range is a pass
    assert verify_inequality("log2p-plain", 2, 2, prime_table).verdict == "pass"
    assert verify_inequality("log2p-plain", 2, 2, prime_table).worst_margin == 0.0
    # past the single bad prime the sweep is clean
    assert verify_inequality("log2p-plain", 3.2, 355990, prime_table).verdict == "pass"


def test_li_lower_fails_below_crossover(prime_table):
    r = verify_inequality("li-lower", 2, 1e6, prime_table)
    assert r.verdict == "fail"
    assert r.arg_min == 2.0
    assert r.worst_margin == pytest.approx(-6.002964263671649, rel=1e-9)
    assert any("10.397" in n for n in r.notes)
    assert verify_inequality("li-lower", 10.4, 1e6, prime_table).verdict == "pass"


def test_li_upper_passes(prime_table):
    r = verify_inequality("li-upper", 1865, 1e6, prime_table)
    assert r.verdict == "pass"
    assert r.arg_min == 1865.0
    assert r.worst_margin == pytest.approx(1.0452255410702904, rel=1e-9)


def test_tail_power_sweep(prime_table):
    r = verify_inequality("tail-power", 1e-3, 1.0, prime_table)
    assert r.verdict == "pass"
    assert r.arg_min == 1.0
    assert r.worst_margin == pytest.approx(4.902677144539596e-05, rel=1e-9)


def test_verify_input_errors(prime_table):
    with pytest.raises(UsageError):
        verify_inequality("no-such-check", 2, 3, prime_table)
    with pytest.raises(UsageError):
        verify_inequality("pnt-lower", 100, 90, prime_table)
    with pytest.raises(PreconditionError):
        verify_inequality("pnt-lower", 2, 100, prime_table)
    with pytest.raises(PreconditionError):
        verify_inequality("pi-li-1", 2, 100, None)
    with pytest.raises(PreconditionError):
        verify_inequality("log2p-plain", 2, 400000, prime_table)


def test_split_range_covers_and_merges(prime_table):
    parts = split_range(2.0, 1e6, 5)
    assert len(parts) == 5
    assert parts[0][0] == 2.0 and parts[-1][1] == 1e6
    for (a1, b1), (a2, b2) in zip(parts, parts[1:]):
        assert a2 == np.nextafter(b1, math.inf)
    single = verify_inequality("pi-li-1", 2, 1e6, prime_table)
    merged = merge_reports(
        [verify_inequality("pi-li-1", a, b, prime_table) for a, b in parts]
    )
    assert merged.worst_margin == single.worst_margin
    assert merged.arg_min == single.arg_min
    assert merged.verdict == single.verdict


def test_split_range_validation():
    with pytest.raises(UsageError):
        split_range(2.0, 1.0, 3)
    with pytest.raises(UsageError):
        split_range(1.0, 2.0, 0)
