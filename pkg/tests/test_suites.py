import random

from linkwb.modules import module_numerics
from linkwb.suites import (
    DEFAULT_SEED, battery_rings, battery_suite, random_finite_length_module, tor_suite_rings,
    tor_nonvanishing_suite,
)


def test_battery_rings_fixed():
    names = [b.name for b in battery_rings()]
    assert names == ["k[x,y]/(xy)", "k[x,y,z]/(xy,yz)", "five_lines"]
    assert all(b.unmixed_asserted for b in battery_rings())


def test_battery_is_seed_deterministic():
    a = battery_suite(seed=5, min_cases=6)
    b = battery_suite(seed=5, min_cases=6)
    assert [(c.ring, c.I, c.J, c.conditions) for c in a.cases] == \
        [(c.ring, c.I, c.J, c.conditions) for c in b.cases]
    assert a.agreement == 1.0


def test_battery_covers_every_ring():
    res = battery_suite(seed=DEFAULT_SEED, min_cases=9)
    assert {c.ring for c in res.cases} == {b.name for b in battery_rings()}


def test_random_modules_have_finite_length():
    rng = random.Random(1)
    for _, R in tor_suite_rings():
        for _ in range(4):
            M = random_finite_length_module(R, rng)
            assert module_numerics(M).finite_length


def test_tor_suite_small_run_deterministic():
    a = tor_nonvanishing_suite(seed=3, modules_per_ring=2, nmax=2, min_cases=5)
    b = tor_nonvanishing_suite(seed=3, modules_per_ring=2, nmax=2, min_cases=5)
    assert [(c.ring, c.n, c.vacuous, c.holds) for c in a.cases] == \
        [(c.ring, c.n, c.vacuous, c.holds) for c in b.cases]
    assert a.pass_rate == 1.0
