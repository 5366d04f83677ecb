"""Seeded randomized suites: the geometric-linkage battery and Tor non-vanishing."""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from .ideals import GradedRing, IdealHandle, ideal_colon, ideal_intersection
from .linkage import geometric_link_report, lam, syzygy_power, tor_nonvanishing_check
from .modules import FPModule, Matrix, module_numerics
from .poly import monomials_of_degree

DEFAULT_SEED = 20240531

FIVE_LINES = ["x*y", "y*z", "z*t", "x*t+y*t+t^2", "x^2+x*z+x*t"]


@dataclass
class BatteryRing:
    name: str
    ring: GradedRing
    links: list  # generators of each linking ideal c
    primes: list  # minimal primes of R (generators); used to build J
    unmixed_asserted: bool = True


def battery_rings() -> list[BatteryRing]:
    R1 = GradedRing.poly("x,y").quotient(["x*y"])
    R2 = GradedRing.poly("x,y,z").quotient(["x*y", "y*z"])
    R3 = GradedRing.poly("x,y,z,t").quotient(FIVE_LINES)
    return [
        BatteryRing("k[x,y]/(xy)", R1, [[], ["(x+y)^2"]], [["x"], ["y"]]),
        BatteryRing("k[x,y,z]/(xy,yz)", R2, [[]], [["y"], ["x", "z"]]),
        BatteryRing("five_lines", R3, [[]],
                    [["z", "y", "x+t"], ["z", "x", "y+t"], ["x", "z", "t"],
                     ["t", "y", "x"], ["t", "y", "x+z"]]),
    ]


def _random_form(R: GradedRing, d: int, rng: random.Random):
    base = R.base
    f = base.zero()
    if d < 0:
        return f
    for e in monomials_of_degree(base.degrees, d):
        c = rng.randrange(-3, 4)
        if c:
            f = f + base.monomial(e, c)
    return f


def _random_element(R: GradedRing, gens, d: int, rng: random.Random):
    f = R.base.zero()
    for g in gens:
        f = f + g * _random_form(R, d - g.degree(), rng)
    return R.reduce(f)


@dataclass
class BatteryCase:
    ring: str
    c: str
    I: str
    J: str
    conditions: dict
    consistent: bool


@dataclass
class BatteryResult:
    cases: list = field(default_factory=list)
    skipped: int = 0

    @property
    def agreement(self) -> float:
        if not self.cases:
            return 0.0
        return sum(c.consistent for c in self.cases) / len(self.cases)


def battery_suite(seed: int = DEFAULT_SEED, min_cases: int = 20, max_attempts: int = 200,
                  rings: list[BatteryRing] | None = None) -> BatteryResult:
    """Linked pairs ``I = (c : J)``, ``J' = (c : I)`` from random ``J``; checks that the
    computable geometric-linkage conditions agree on each pair (over ``R/c``)."""
    rng = random.Random(seed)
    rings = rings or battery_rings()
    out = BatteryResult()
    slots = [(br, c) for br in rings for c in br.links]
    attempt = 0
    while len(out.cases) < min_cases and attempt < max_attempts:
        br, cgens = slots[attempt % len(slots)]
        attempt += 1
        R = br.ring
        c = R.ideal(cgens) if cgens else R.zero_ideal()
        Rbar = R.quotient(c.generators) if cgens else R
        if cgens:
            # every element of the maximal ideal lies in the only prime of R/c
            pool = [R.maximal_ideal()]
        else:
            k = rng.randrange(1, len(br.primes))
            chosen = rng.sample(br.primes, k)
            pool = [R.ideal(p) for p in chosen]
        inter = pool[0]
        for q in pool[1:]:
            inter = ideal_intersection(inter, q)
        gens = inter.mingens()
        ngen = rng.randrange(1, 3)
        J = IdealHandle(R, [_random_element(R, gens, rng.randrange(1, 3) + max(
            g.degree() for g in gens) - 1, rng) for _ in range(ngen)])
        I = ideal_colon(c, J)
        Jp = ideal_colon(c, I)
        Ib = IdealHandle(Rbar, I.generators)
        Jb = IdealHandle(Rbar, Jp.generators)
        if Ib.is_zero() or Ib.is_unit() or Jb.is_zero() or Jb.is_unit():
            out.skipped += 1
            continue
        rep = geometric_link_report(Ib, Jb, br.unmixed_asserted)
        out.cases.append(BatteryCase(br.name, str(c), str(Ib), str(Jb),
                                     dict(rep.data["conditions"]), rep.consistency))
    return out


# --- Tor non-vanishing suite ---------------------------------------------

def tor_suite_rings() -> list[tuple[str, GradedRing]]:
    return [
        ("k[x]/(x^3)", GradedRing.poly("x").quotient(["x^3"])),
        ("k[x,y]/(x^2,y^2)", GradedRing.poly("x,y").quotient(["x^2", "y^2"])),
        ("k[x,y]/(xy)", GradedRing.poly("x,y").quotient(["x*y"])),
    ]


def random_finite_length_module(R: GradedRing, rng: random.Random, max_gens: int = 2,
                                trunc: int = 3) -> FPModule:
    """Random relations in degrees 1-2 plus ``m^trunc`` times every generator."""
    r = rng.randrange(1, max_gens + 1)
    base = R.base
    cols, degs = [], []
    for _ in range(rng.randrange(0, 3)):
        d = rng.randrange(1, 3)
        col = [R.reduce(_random_form(R, d, rng)) for _ in range(r)]
        if any(col):
            cols.append(col)
            degs.append(d)
    for i in range(r):
        for e in monomials_of_degree(base.degrees, trunc):
            col = [base.zero()] * r
            col[i] = base.monomial(e)
            if R.reduce(col[i]):
                cols.append(col)
                degs.append(trunc)
    return FPModule(R, Matrix(R, cols, [0] * r, degs))


@dataclass
class TorSuiteCase:
    ring: str
    n: int
    module: dict
    vacuous: bool
    holds: bool


@dataclass
class TorSuiteResult:
    cases: list = field(default_factory=list)

    @property
    def nonvacuous(self) -> list:
        return [c for c in self.cases if not c.vacuous]

    @property
    def pass_rate(self) -> float:
        nv = self.nonvacuous
        return sum(c.holds for c in nv) / len(nv) if nv else 0.0


def tor_nonvanishing_suite(seed: int = DEFAULT_SEED, modules_per_ring: int = 5, nmax: int = 3,
                min_cases: int = 50) -> TorSuiteResult:
    """``λΩⁿM != 0`` implies ``Tor_n(M, λΩⁿM) != 0`` on random finite-length modules."""
    rng = random.Random(seed)
    out = TorSuiteResult()
    rounds = 0
    while len(out.nonvacuous) < min_cases or rounds == 0:
        rounds += 1
        if rounds > 10:
            break
        for name, R in tor_suite_rings():
            for _ in range(modules_per_ring):
                M = random_finite_length_module(R, rng)
                if M.is_zero():
                    continue
                assert module_numerics(M).finite_length
                for n in range(nmax + 1):
                    rep = tor_nonvanishing_check(M, n)
                    vac = rep.data["vacuous"]
                    holds = vac or rep.status("tor_n_nonzero") == "true"
                    out.cases.append(TorSuiteCase(name, n, M.to_json(), vac, holds))
    return out


__all__ = ["battery_suite", "tor_nonvanishing_suite", "battery_rings", "tor_suite_rings",
           "random_finite_length_module", "DEFAULT_SEED", "lam", "syzygy_power"]
