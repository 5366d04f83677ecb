"""Linkage operators (transpose, syzygy, λ = Ω∘Tr, cosyzygy) and checkers.

Every checker returns a :class:`LinkageReport`.  Hypotheses are evaluated
first; when one fails the conclusions are reported as ``not-computed`` rather
than evaluated.  Module isomorphisms are certified only through numeric
invariants and labelled ``numeric-consistent``.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Any

from .ideals import INF, GradedRing, IdealHandle, hilbert_data, ideal_colon, ideal_intersection, is_finite
from .modules import (
    FPModule,
    Matrix,
    PreconditionError,
    annihilator,
    change_ring,
    depth_of,
    dual,
    ext,
    gdim_suite,
    grade_of,
    is_cyclic,
    is_gorenstein_ring,
    module_numerics,
    pd_or_infinite,
    ring_depth,
    syzygy_module,
    tensor,
    tor,
    trace_and_stability,
)

TRUE, FALSE = "true", "false"
NOT_COMPUTED = "not-computed"
ASSERTED = "asserted"
VACUOUS = "vacuous"
IMPLIED = "equivalent-by-battery"
NUMERIC = "numeric-consistent"
NUMERIC_FAIL = "numeric-inconsistent"
UNDETERMINED = "undetermined"


def _st(b: bool) -> str:
    return TRUE if b else FALSE


@dataclass
class LinkageReport:
    subject: str
    hypotheses: list = field(default_factory=list)
    verdicts: list = field(default_factory=list)
    consistency: bool = True
    data: dict = field(default_factory=dict)

    def hypothesis(self, name: str, status: str):
        self.hypotheses.append({"name": name, "status": status})
        return status

    def verdict(self, name: str, status: str, witness: Any = None):
        v = {"name": name, "status": status}
        if witness is not None:
            v["witness"] = str(witness)
        self.verdicts.append(v)
        return status

    def status(self, name: str) -> str | None:
        for v in self.verdicts:
            if v["name"] == name:
                return v["status"]
        for h in self.hypotheses:
            if h["name"] == name:
                return h["status"]
        return None

    @property
    def hypotheses_hold(self) -> bool:
        return all(h["status"] in (TRUE, ASSERTED, VACUOUS) for h in self.hypotheses)

    @property
    def failed_hypotheses(self) -> list[str]:
        return [h["name"] for h in self.hypotheses
                if h["status"] not in (TRUE, ASSERTED, VACUOUS)]

    @property
    def all_true(self) -> bool:
        """Hypotheses hold, every verdict is true (or vacuous/implied), and consistent."""
        ok = {TRUE, VACUOUS, IMPLIED, NUMERIC}
        return self.hypotheses_hold and self.consistency and all(
            v["status"] in ok for v in self.verdicts)

    def to_json(self) -> dict:
        return {"subject": self.subject, "hypotheses": list(self.hypotheses),
                "verdicts": list(self.verdicts), "consistency": self.consistency}


class HdimSelector(enum.Enum):
    PD = "pd"
    GDIM = "gdim"


# --- operators ------------------------------------------------------------

def transpose(M: FPModule) -> FPModule:
    """``Tr M = coker(A^T)`` for the minimal presentation ``A`` of ``M``."""
    A = M.minimal().matrix
    return FPModule(M.ring, A.transpose())


def syzygy_power(M: FPModule, n: int) -> FPModule:
    if n < 0:
        raise ValueError("n must be non-negative")
    return syzygy_module(M, n)


def lam(M: FPModule) -> FPModule:
    """``λM = Ω Tr M``."""
    return syzygy_module(transpose(M), 1)


lambda_ = lam


def cosyzygy(M: FPModule) -> FPModule:
    """``Ω⁻¹M = (Ω(M*))*`` for a maximal Cohen-Macaulay module over a Gorenstein ring."""
    R = M.ring
    if not is_gorenstein_ring(R):
        raise PreconditionError("cosyzygy requires a Gorenstein ring")
    if not M.is_zero() and depth_of(M) != R.dim:
        raise PreconditionError("cosyzygy requires a maximal Cohen-Macaulay module")
    return dual(syzygy_module(dual(M), 1)).minimal()


# --- numeric isomorphism certificate --------------------------------------

@dataclass
class NumericCertificate:
    betti: bool
    hilbert: bool
    annihilator: bool
    cyclic: bool

    @property
    def consistent(self) -> bool:
        return self.betti and self.hilbert and self.annihilator and self.cyclic


def _numerator_up_to_shift(M: FPModule) -> tuple:
    num = M.hilbert().numerator
    if not num:
        return ()
    lo = min(num)
    return tuple(sorted((k - lo, v) for k, v in num.items()))


def numeric_compare(M: FPModule, N: FPModule, bound: int = 3) -> NumericCertificate:
    """Twist-insensitive comparison of Betti numbers, Hilbert series, annihilators."""
    bm = M.resolution(bound).betti_numbers(bound)
    bn = N.resolution(bound).betti_numbers(bound)
    return NumericCertificate(
        betti=bm == bn,
        hilbert=_numerator_up_to_shift(M) == _numerator_up_to_shift(N),
        annihilator=annihilator(M) == annihilator(N),
        cyclic=is_cyclic(M) == is_cyclic(N),
    )


# --- linkage checks -------------------------------------------------------

def is_horizontally_linked(M: FPModule, name: str = "M") -> LinkageReport:
    rep = LinkageReport(f"horizontally_linked({name})")
    R = M.ring
    stab = trace_and_stability(M)
    rep.verdict("stable", _st(stab.stable), f"trace={stab.trace}")
    e1 = ext(1, transpose(M), FPModule.free(R, [0]))
    rep.verdict("ext1_tr_vanishes", _st(e1.is_zero()))
    linked = stab.stable and e1.is_zero()
    rep.verdict("horizontally_linked", _st(linked))
    if linked:
        cert = numeric_compare(lam(lam(M)), M)
        rep.verdict("lambda_squared_matches", NUMERIC if cert.consistent else NUMERIC_FAIL)
        rep.consistency = cert.consistent
    rep.data["linked"] = linked
    return rep


def ideals_linked_by(I: IdealHandle, J: IdealHandle, c: IdealHandle) -> LinkageReport:
    rep = LinkageReport(f"linked({I}, {J} | {c})")
    if not c.issubset(I):
        raise PreconditionError("c is not contained in I")
    if not c.issubset(J):
        raise PreconditionError("c is not contained in J")
    rep.hypothesis("c_in_I_cap_J", TRUE)
    cJ = ideal_colon(c, J)
    cI = ideal_colon(c, I)
    a = I == cJ
    b = J == cI
    rep.verdict("I_eq_c_colon_J", _st(a), cJ)
    rep.verdict("J_eq_c_colon_I", _st(b), cI)
    rep.verdict("linked", _st(a and b))
    if a and b:
        # (c : (c : J)) = (c : I) must hold once both equalities do
        rep.consistency = ideal_colon(c, cJ) == cI
    rep.data.update(linked=a and b, colon_J=cJ, colon_I=cI)
    return rep


def geometric_link_report(I: IdealHandle, J: IdealHandle, unmixed: bool = True) -> LinkageReport:
    """The computable conditions of the geometric-linkage criterion, evaluated independently."""
    R = I.ring
    base = ideals_linked_by(I, J, R.zero_ideal())
    if not base.data["linked"]:
        raise PreconditionError("I and J are not linked by (0)")
    rep = LinkageReport(f"geolink({I}, {J})")
    rep.hypothesis("linked_by_zero", TRUE)
    rep.hypothesis("ring_unmixed", ASSERTED if unmixed else FALSE)
    MI, MJ = FPModule.quotient(I), FPModule.quotient(J)
    g = grade_of(I + J)
    conds = {
        "grade_sum_positive": (not is_finite(g)) or g > 0,
        "intersection_zero": ideal_intersection(I, J).is_zero(),
        "tor1_vanishes": tor(1, MI, MJ).is_zero(),
        "ext1_I_vanishes": ext(1, MI, MI).is_zero(),
        "ext1_J_vanishes": ext(1, MJ, MJ).is_zero(),
    }
    rep.verdict("grade_sum_positive", _st(conds["grade_sum_positive"]), f"grade={g}")
    for k in ("intersection_zero", "tor1_vanishes", "ext1_I_vanishes", "ext1_J_vanishes"):
        rep.verdict(k, _st(conds[k]))
    vals = set(conds.values())
    rep.consistency = len(vals) == 1
    rep.verdict("disjoint_associated_primes", IMPLIED if rep.consistency else UNDETERMINED)
    rep.data["conditions"] = conds
    rep.data["geometric"] = rep.consistency and conds["intersection_zero"]
    return rep


@dataclass
class GorensteinResult:
    verdict: bool
    grade: Any
    details: dict


def is_gorenstein_ideal(a: IdealHandle) -> GorensteinResult:
    """Grade ``g``, vanishing of ``Ext^i(R/a, R)`` for ``i != g``, cyclic ``Ext^g``
    with annihilator ``a``, and Cohen-Macaulayness of ``R/a``."""
    R = a.ring
    if a.is_unit():
        raise PreconditionError("unit ideal")
    Q = FPModule.quotient(a)
    Rmod = FPModule.free(R, [0])
    exts = [ext(i, Q, Rmod) for i in range(R.dim + 2)]
    nz = [i for i, E in enumerate(exts) if not E.is_zero()]
    g = nz[0] if nz else INF
    others_vanish = len(nz) == 1
    Eg = exts[g] if nz else None
    cyclic = Eg is not None and is_cyclic(Eg)
    ann_ok = Eg is not None and annihilator(Eg) == a
    dim_q = hilbert_data(a).krull_dim
    cm = depth_of(Q) == dim_q
    verdict = others_vanish and cyclic and ann_ok and cm
    return GorensteinResult(verdict, g, {"ext_nonzero": nz, "cyclic": cyclic,
                                         "annihilator_matches": ann_ok, "cohen_macaulay": cm})


def verify_sum_theorem(M: FPModule, N: FPModule, c: IdealHandle,
                       unmixed: bool = True) -> LinkageReport:
    """Ann(M)+Ann(N) is Gorenstein of grade grade(M)+1 and M⊗N is free over R/A."""
    R = M.ring
    rep = LinkageReport("sum_theorem")
    ok = rep.hypothesis("ring_gorenstein", _st(is_gorenstein_ring(R))) == TRUE
    if ok:
        ok = rep.hypothesis("c_gorenstein", _st(is_gorenstein_ideal(c).verdict)) == TRUE
    annM, annN = annihilator(M), annihilator(N)
    if ok:
        ok = rep.hypothesis("c_annihilates", _st(c.issubset(annM) and c.issubset(annN))) == TRUE
    if ok:
        Rbar = R.quotient(c.generators)
        Mb, Nb = change_ring(M, Rbar), change_ring(N, Rbar)
        hl = is_horizontally_linked(Mb)
        linked = hl.data["linked"] and numeric_compare(lam(Mb), Nb).consistent
        ok = rep.hypothesis("linked_over_R_mod_c", _st(linked)) == TRUE
    if ok:
        Ib = IdealHandle(Rbar, annM.generators)
        Jb = IdealHandle(Rbar, annN.generators)
        try:
            geo = geometric_link_report(Ib, Jb, unmixed)
            good = geo.consistency and geo.data["conditions"]["intersection_zero"]
        except PreconditionError:
            good = False
        rep.hypothesis("ring_unmixed", ASSERTED if unmixed else FALSE)
        ok = rep.hypothesis("geometric_battery", _st(good)) == TRUE
    names = ("A_gorenstein", "grade_A_eq_grade_M_plus_1", "tensor_free_over_R_mod_A")
    if not ok:
        for n in names:
            rep.verdict(n, NOT_COMPUTED)
        return rep
    A = annM + annN
    gor = is_gorenstein_ideal(A)
    gM = grade_of(M)
    rep.verdict("A_gorenstein", _st(gor.verdict), f"A={A}")
    rep.verdict(names[1], _st(is_finite(gM) and gor.grade == gM + 1),
                f"grade(A)={gor.grade}, grade(M)={gM}")
    S = R.quotient(A.generators)
    T = change_ring(tensor(M, N), S).minimal()
    rep.verdict(names[2], _st(T.matrix.ncols == 0), f"rank={T.ngens}")
    rep.data.update(A=A, grade=gor.grade)
    return rep


def _gorenstein_dim_one(R: GradedRing) -> bool:
    return R.dim == 1 and is_gorenstein_ring(R)


def ext_tor_duality_check(M: FPModule, top: int) -> LinkageReport:
    """``length Ext^i(M,M) = length Tor_i(M, λM)`` for ``1 <= i <= top``."""
    R = M.ring
    rep = LinkageReport("ext_tor_duality")
    ok = rep.hypothesis("gorenstein_dim_one", _st(_gorenstein_dim_one(R))) == TRUE
    if ok:
        mcm = M.is_zero() or depth_of(M) == R.dim
        ok = rep.hypothesis("M_mcm", _st(mcm)) == TRUE
    if not ok:
        for i in range(1, top + 1):
            rep.verdict(f"length_eq_{i}", NOT_COMPUTED)
        return rep
    L = lam(M)
    tors = [module_numerics(tor(i, M, L)) for i in range(1, top + 1)]
    fin = all(t.finite_length and t.certified for t in tors)
    rep.hypothesis("tor_finite_length", TRUE if fin else UNDETERMINED)
    if not fin:
        for i in range(1, top + 1):
            rep.verdict(f"length_eq_{i}", NOT_COMPUTED)
        return rep
    lengths = []
    for i, t in enumerate(tors, start=1):
        e = module_numerics(ext(i, M, M))
        lengths.append((e.length, t.length))
        rep.verdict(f"length_eq_{i}", _st(e.length is not None and e.length == t.length),
                    f"ext={e.length}, tor={t.length}")
    rep.data["lengths"] = lengths
    return rep


def tor_shift_check(M: FPModule, n: int) -> LinkageReport:
    R = M.ring
    rep = LinkageReport(f"tor_shift(n={n})")
    ok = rep.hypothesis("gorenstein_dim_one", _st(_gorenstein_dim_one(R))) == TRUE
    if ok:
        L = lam(M)
        if L.is_zero():
            rep.hypothesis("lambda_nonzero", VACUOUS)
            rep.verdict("tor1_shift_vanishes", VACUOUS)
            return rep
        ok = rep.hypothesis("M_horizontally_linked",
                            _st(is_horizontally_linked(M).data["linked"])) == TRUE
    if ok:
        ok = rep.hypothesis("tor1_M_lambdaM_vanishes", _st(tor(1, M, L).is_zero())) == TRUE
    if not ok:
        rep.verdict("tor1_shift_vanishes", NOT_COMPUTED)
        return rep
    W = syzygy_power(M, n)
    LW = lam(W)
    if LW.is_zero():
        rep.verdict("tor1_shift_vanishes", VACUOUS)
    else:
        rep.verdict("tor1_shift_vanishes", _st(tor(1, W, LW).is_zero()))
    return rep


def _hdim(M: FPModule, h: HdimSelector):
    return pd_or_infinite(M) if h is HdimSelector.PD else gdim_suite(M).gdim


@dataclass
class DepthScan:
    inf_n: Any
    per_n: list
    report: LinkageReport


def depth_via_linked_syzygies(M: FPModule, h: HdimSelector | str, nmax: int) -> DepthScan:
    """Least ``n`` with ``H-dim(λΩⁿM) = ∞``, compared with ``depth R``."""
    if isinstance(h, str):
        h = HdimSelector(h.lower())
    R = M.ring
    rep = LinkageReport(f"depth_scan({h.value})")
    num = module_numerics(M)
    ok = rep.hypothesis("M_finite_length", _st(num.finite_length)) == TRUE
    if ok:
        hd = _hdim(M, h)
        ok = rep.hypothesis("hdim_M_infinite", _st(hd is INF)) == TRUE
    if not ok:
        rep.verdict("inf_equals_depth", NOT_COMPUTED)
        return DepthScan(None, [], rep)
    per_n = []
    inf_n = None
    for n in range(nmax + 1):
        X = lam(syzygy_power(M, n))
        if X.is_zero():
            per_n.append({"n": n, "hdim": VACUOUS})
            continue
        v = _hdim(X, h)
        per_n.append({"n": n, "hdim": str(v) if not is_finite(v) else v})
        if v is INF and inf_n is None:
            inf_n = n
            break
    dR = ring_depth(R)
    if inf_n is None:
        rep.verdict("inf_equals_depth", UNDETERMINED, f"not found up to n={nmax}")
    else:
        rep.verdict("inf_equals_depth", _st(inf_n == dR), f"inf={inf_n}, depth={dR}")
    if h is HdimSelector.PD:
        finite_ok = all(e["hdim"] == e["n"] for e in per_n if isinstance(e["hdim"], int))
        rep.verdict("finite_pd_equals_n", _st(finite_ok))
    rep.data.update(inf_n=inf_n, per_n=per_n, depth=dR)
    return DepthScan(inf_n if inf_n is not None else "not-found", per_n, rep)


def tor_nonvanishing_check(M: FPModule, n: int) -> LinkageReport:
    rep = LinkageReport(f"tor_nonvanishing(n={n})")
    X = lam(syzygy_power(M, n))
    if X.is_zero():
        rep.hypothesis("lambda_syzygy_nonzero", VACUOUS)
        rep.verdict("tor_n_nonzero", VACUOUS)
        rep.data["vacuous"] = True
        return rep
    rep.hypothesis("lambda_syzygy_nonzero", TRUE)
    T = tor(n, M, X)
    rep.verdict("tor_n_nonzero", _st(not T.is_zero()))
    rep.data["vacuous"] = False
    return rep
