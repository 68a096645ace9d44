import pytest

from supercong.checkers import (
    DEFAULT_CONFIG,
    ORDER,
    CheckConfig,
    RandomSample,
    Status,
    UnknownCheckError,
    list_checks,
    run_all,
    run_check,
)

EXAMPLES = [
    ("E1.1", 5, "1", "1", {}),
    ("E1.1", 3, "8", "8", {}),
    ("T2.2", 5, "12", "12", {"a": 1}),
    ("T2.9", 5, "13", "13", {"a": 1}),
    ("T2.10", 5, "7", "7", {}),
    ("T2.5a", 7, "3", "3", {"A": -2}),
    ("C2.2", 5, "4", "4", {}),
    ("C2.3", 7, "0", "0", {}),
    ("T2.12a", 5, "1", "1", {}),
]


@pytest.mark.parametrize("cid,p,lhs,rhs,witness", EXAMPLES)
def test_examples(cid, p, lhs, rhs, witness):
    o = run_check(cid, p)
    assert (o.status, o.lhs, o.rhs) == (Status.HOLDS, lhs, rhs)
    for k, v in witness.items():
        assert o.witness[k] == v


def test_e11_modulus():
    assert run_check("E1.1", 5).modulus == "p2"


def test_skip_for_divisible_constant():
    o = run_check("CJ2.1", 3)
    assert o.status is Status.SKIPPED and o.reason == "p divides constant 648"


def test_t22_zero_branch():
    o = run_check("T2.2", 7)
    assert o.branch == "4|p-3" and int(o.lhs) % 49 == 0


def test_list_checks():
    rows = list_checks()
    assert len(rows) == 46 == len(set(ORDER))
    assert ("T2.2", "Theorem 2.2", "p2", "all odd p") in rows
    assert ("CJ2.13", "Conjecture 2.13", "p2", "p > 3") in rows
    assert [r[0] for r in rows] == list(ORDER)


def test_unknown_id():
    with pytest.raises(UnknownCheckError):
        run_check("T9.9", 5)


def test_run_all_five():
    out = run_all(5)
    assert [o.check for o in out] == list(ORDER)
    assert not [o for o in out if o.status is Status.FAILS]


def test_run_all_three_skips_p_gt_3():
    gated = {cid for cid, _, _, hyp in list_checks() if hyp.startswith("p > 3")}
    assert gated
    out = {o.check: o for o in run_all(3)}
    for cid in gated:
        assert out[cid].status is Status.SKIPPED, cid


def test_skipped_records_have_reason():
    for o in run_all(3) + run_all(5) + run_all(17):
        assert (o.status is Status.SKIPPED) == (o.reason is not None)
        if o.status is Status.FAILS:
            assert o.lhs != o.rhs


def test_prime_free_check_reports_p0():
    o = run_check("K2.8", 11)
    assert o.p == 0 and o.status is Status.HOLDS and o.modulus == "exact"


def test_l22_skipped_above_p4_limit():
    o = run_check("L2.2", 32771)
    assert o.status is Status.SKIPPED


def test_determinism():
    cfg = CheckConfig(seed=7, sample_count=5, exhaustive_below=10)
    a = [(o.check, o.status, o.lhs, o.rhs, o.witness) for o in run_all(1009, cfg)]
    b = [(o.check, o.status, o.lhs, o.rhs, o.witness) for o in run_all(1009, cfg)]
    assert a == b


def test_explicit_sampling_policy():
    o = run_check("T2.6", 1009, CheckConfig(x_sample=RandomSample(3, seed=1)))
    assert o.status is Status.HOLDS


def test_no_fails_on_small_primes(odd_primes_below):
    for p in odd_primes_below(200):
        bad = [o for o in run_all(p) if o.status is Status.FAILS]
        assert not bad, bad


def test_consistency_web(odd_primes_below):
    for p in odd_primes_below(600):
        if p % 4 != 1:
            continue
        m = p * p
        e11 = int(run_check("E1.1", p).lhs)
        t29 = int(run_check("T2.9", p).lhs)
        t210 = int(run_check("T2.10", p).lhs)
        assert (e11 + t29 - 2 * t210) % m == 0


def test_sample_count_validation():
    with pytest.raises(ValueError):
        RandomSample(0)
    assert DEFAULT_CONFIG.sample_count == 32
