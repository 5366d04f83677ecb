"""Execute parsed scripts and build deterministic reports."""

from __future__ import annotations

import json
import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Any

from . import __version__, kernels
from . import linkage as lk
from . import modules as md
from .dsl import (
    Call,
    Check,
    IdealDecl,
    IdealLit,
    Int,
    ListLit,
    MatrixLit,
    ModuleDecl,
    Name,
    ParBlock,
    RingDecl,
    Script,
    SetOption,
    Sum,
    print_expr,
)
from .ideals import INF, GradedRing, IdealHandle, ideal_colon, ideal_intersection, is_finite
from .poly import DEFAULT_PRIME, PolyRing, parse_poly

SCHEMA_VERSION = "linkwb-report/1"

EXIT_OK, EXIT_FALSE, EXIT_USAGE, EXIT_ENGINE = 0, 1, 2, 3


@dataclass
class Options:
    prime: int | None = None
    order: str | None = None
    bound: int | None = None
    fail_fast: bool = False
    seed: int | None = None

    def to_json(self) -> dict:
        return {"prime": self.prime, "order": self.order, "bound": self.bound,
                "fail_fast": self.fail_fast, "seed": self.seed}


@dataclass
class CheckResult:
    index: int
    text: str
    check: str
    status: str  # pass | fail | error | skipped
    value: Any = None
    expected: Any = None
    report: dict | None = None
    error: str | None = None
    operation: str | None = None
    seconds: float = 0.0

    def to_json(self) -> dict:
        d = {"index": self.index, "text": self.text, "check": self.check, "status": self.status,
             "value": self.value, "expected": self.expected}
        if self.report is not None:
            d["report"] = self.report
        if self.error is not None:
            d["error"] = self.error
            d["operation"] = self.operation
        return d


@dataclass
class Report:
    script: str
    options: Options
    declarations: dict = field(default_factory=dict)
    checks: list = field(default_factory=list)
    settings: dict = field(default_factory=dict)
    total_seconds: float = 0.0

    @property
    def exit_code(self) -> int:
        st = {c.status for c in self.checks}
        if "error" in st:
            return EXIT_ENGINE
        if "fail" in st:
            return EXIT_FALSE
        return EXIT_OK

    def summary(self) -> dict:
        count = {s: sum(c.status == s for c in self.checks)
                 for s in ("pass", "fail", "error", "skipped")}
        return {"passed": count["pass"], "failed": count["fail"], "errors": count["error"],
                "skipped": count["skipped"], "exit_code": self.exit_code}

    def to_json(self) -> dict:
        return {
            "schema": SCHEMA_VERSION,
            "engine": {"name": "linkwb", "version": __version__},
            "script": self.script,
            "options": self.options.to_json(),
            "settings": dict(sorted(self.settings.items())),
            "declarations": self.declarations,
            "checks": [c.to_json() for c in self.checks],
            "summary": self.summary(),
            "timing": {"total_seconds": round(self.total_seconds, 6),
                       "backend": kernels.BACKEND,
                       "checks": [{"index": c.index, "seconds": round(c.seconds, 6)}
                                  for c in self.checks]},
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2, sort_keys=True, ensure_ascii=False) + "\n"

    def text(self) -> str:
        lines = [f"linkwb {__version__}  script={self.script}"]
        for c in self.checks:
            tag = {"pass": "PASS", "fail": "FAIL", "error": "ERROR", "skipped": "SKIP"}[c.status]
            line = f"[{tag}] {c.text}"
            if c.value is not None:
                line += f"  -> {c.value}"
            if c.expected is not None:
                line += f"  (expected {c.expected})"
            lines.append(line)
            if c.error:
                lines.append(f"       {c.operation}: {c.error}")
            if c.report:
                for h in c.report.get("hypotheses", []):
                    lines.append(f"       hypothesis {h['name']}: {h['status']}")
                for v in c.report.get("verdicts", []):
                    w = f" [{v['witness']}]" if "witness" in v else ""
                    lines.append(f"       {v['name']}: {v['status']}{w}")
        s = self.summary()
        lines.append(f"{s['passed']} passed, {s['failed']} failed, {s['errors']} errors, "
                     f"{s['skipped']} skipped")
        return "\n".join(lines) + "\n"


class EngineError(RuntimeError):
    def __init__(self, operation: str, err: Exception):
        super().__init__(f"{operation}: {err}")
        self.operation = operation
        self.err = err


# --- evaluation -----------------------------------------------------------

def _fmt(v) -> Any:
    if isinstance(v, bool):
        return "true" if v else "false"
    if v is INF:
        return "inf"
    if isinstance(v, tuple):
        return list(v)
    if isinstance(v, IdealHandle):
        return str(v)
    if isinstance(v, md.FPModule):
        M = v.minimal()
        return f"module(gens={M.ngens}, relations={M.matrix.ncols})"
    return v


class _Env:
    def __init__(self, opts: Options):
        self.opts = opts
        self.rings: dict[str, GradedRing] = {}
        self.ring_of: dict[str, str] = {}
        self.ideals: dict[str, IdealHandle] = {}
        self.modules: dict[str, md.FPModule] = {}
        self.settings: dict[str, Any] = {}
        self.current: str | None = None
        self.declarations = {"rings": [], "ideals": [], "modules": []}

    @property
    def bound(self) -> int | None:
        if self.opts.bound is not None:
            return self.opts.bound
        return self.settings.get("bound")

    @property
    def seed(self) -> int:
        from .suites import DEFAULT_SEED
        if self.opts.seed is not None:
            return self.opts.seed
        return int(self.settings.get("seed", DEFAULT_SEED))

    # declarations
    def ring_decl(self, d: RingDecl):
        if d.base is None:
            p = d.p or self.opts.prime or self.settings.get("prime") or DEFAULT_PRIME
            order = d.order or self.opts.order or self.settings.get("order") or "grevlex"
            base = PolyRing(list(d.vars), list(d.degrees) if d.degrees else None, p, order)
            R = GradedRing(base, [parse_poly(t, base) for t in d.relations])
        else:
            B = self.rings[d.base]
            if d.quotient_ideal:
                R = B.quotient(self.ideals[d.quotient_ideal].generators)
            else:
                R = B.quotient([parse_poly(t, B.base) for t in d.relations])
        self.rings[d.name] = R
        self.ring_of[d.name] = d.name
        self.current = d.name
        self.declarations["rings"].append({
            "name": d.name, "vars": list(R.names), "degrees": list(R.degrees), "p": R.p,
            "order": R.base.order.kind, "relations": [str(g) for g in R.gb_of_relations],
            "dim": R.dim})

    def ring_for(self, e, ctx: str | None) -> str | None:
        if isinstance(e, Name):
            return self.ring_of.get(e.id)
        if isinstance(e, Call) and e.fn == "over":
            return e.args[1].id
        if isinstance(e, Call):
            for a in e.args:
                if isinstance(a, (Name, Call)) and not (isinstance(a, Name) and a.id in (
                        "pd", "gdim")):
                    r = self.ring_for(a, None)
                    if r is not None:
                        return r
        if isinstance(e, Sum):
            for t in e.terms:
                r = self.ring_for(t, None)
                if r is not None:
                    return r
        return ctx

    def ideal(self, e, ring: str | None) -> IdealHandle:
        return self._guard(self._ideal, e, ring)

    def module(self, e, ring: str | None) -> md.FPModule:
        return self._guard(self._module, e, ring)

    @staticmethod
    def _guard(fn, e, ring):
        # name the innermost failing call so engine errors point at their origin
        try:
            return fn(e, ring)
        except EngineError:
            raise
        except Exception as err:
            if isinstance(e, Call):
                raise EngineError(e.fn, err) from err
            raise

    def _ideal(self, e, ring: str | None) -> IdealHandle:
        if isinstance(e, Name):
            return self.ideals[e.id]
        if isinstance(e, IdealLit):
            R = self.rings[ring]
            return IdealHandle(R, [parse_poly(t, R.base) for t in e.polys])
        if isinstance(e, Sum):
            parts = [self.ideal(t, ring) for t in e.terms]
            out = parts[0]
            for q in parts[1:]:
                out = out + q
            return out
        if isinstance(e, Call):
            ring = self.ring_for(e, ring)
            f, a = e.fn, e.args
            if f == "colon":
                return ideal_colon(self.ideal(a[0], ring), self.ideal(a[1], ring))
            if f == "intersect":
                return ideal_intersection(self.ideal(a[0], ring), self.ideal(a[1], ring))
            if f == "sum":
                return self.ideal(a[0], ring) + self.ideal(a[1], ring)
            if f == "product":
                return self.ideal(a[0], ring) * self.ideal(a[1], ring)
            if f == "ann":
                return md.annihilator(self.module(a[0], ring))
            if f == "trace":
                return md.trace_and_stability(self.module(a[0], ring)).trace
            if f == "maximal":
                return self.rings[a[0].id if a else ring].maximal_ideal()
        raise TypeError(f"not an ideal expression: {print_expr(e)}")

    def _module(self, e, ring: str | None) -> md.FPModule:
        if isinstance(e, Name):
            return self.modules[e.id]
        if not isinstance(e, Call):
            raise TypeError(f"not a module expression: {print_expr(e)}")
        ring = self.ring_for(e, ring)
        f, a = e.fn, e.args
        if f == "coker":
            R = self.rings[ring]
            m: MatrixLit = a[0]
            rows = [[parse_poly(t, R.base) for t in row] for row in m.rows]
            if not rows or not rows[0]:
                return md.FPModule.free(R, len(rows))
            return md.FPModule.coker(R, rows)
        if f == "quotient":
            return md.FPModule.quotient(self.ideal(a[0], ring))
        if f == "ideal_as_module":
            return md.FPModule.ideal_as_module(self.ideal(a[0], ring))
        if f == "residue_field":
            return md.FPModule.residue_field(self.rings[a[0].id if a else ring])
        if f == "free":
            return md.FPModule.free(self.rings[a[1].id if len(a) > 1 else ring], a[0].value)
        if f == "canonical":
            return md.canonical_module(self.rings[a[0].id if a else ring])
        if f == "lambda":
            return lk.lam(self.module(a[0], ring))
        if f == "syz":
            return lk.syzygy_power(self.module(a[1], ring), a[0].value)
        if f == "tr":
            return lk.transpose(self.module(a[0], ring))
        if f == "dual":
            return md.dual(self.module(a[0], ring))
        if f == "cosyzygy":
            return lk.cosyzygy(self.module(a[0], ring))
        if f == "ext":
            return md.ext(a[0].value, self.module(a[1], ring), self.module(a[2], ring))
        if f == "tor":
            return md.tor(a[0].value, self.module(a[1], ring), self.module(a[2], ring))
        if f == "hom":
            return md.hom_module(self.module(a[0], ring), self.module(a[1], ring))
        if f == "tensor":
            return md.tensor(self.module(a[0], ring), self.module(a[1], ring))
        if f == "direct_sum":
            return md.module_direct_sum(self.module(a[0], ring), self.module(a[1], ring))
        if f == "over":
            return md.change_ring(self.module(a[0], None), self.rings[a[1].id])
        if f == "stable_part":
            return md.split_free_summands(self.module(a[0], ring))[1]
        raise TypeError(f"unknown module function {f!r}")

    # checks
    def run_check(self, chk: Check) -> tuple[Any, dict | None, bool | None]:
        """Return (value, report json, default verdict)."""
        c = chk.call
        f, a = c.fn, c.args
        ring = self.ring_for(c, self.current)
        M = lambda i: self.module(a[i], ring)  # noqa: E731
        I = lambda i: self.ideal(a[i], ring)  # noqa: E731
        if f == "linked":
            rep = lk.ideals_linked_by(I(0), I(1), I(2))
            return rep.data["linked"], rep.to_json(), rep.data["linked"] and rep.consistency
        if f == "horizontally_linked":
            rep = lk.is_horizontally_linked(M(0), print_expr(a[0]))
            return rep.data["linked"], rep.to_json(), rep.data["linked"] and rep.consistency
        if f == "geolink":
            rep = lk.geometric_link_report(I(0), I(1))
            conds = set(rep.data["conditions"].values())
            if not rep.consistency:
                value = "inconsistent"
            else:
                value = conds.pop()
            return value, rep.to_json(), value is True
        if f == "gorenstein":
            g = lk.is_gorenstein_ideal(I(0))
            rep = lk.LinkageReport(f"gorenstein({print_expr(a[0])})")
            extra = []
            for k, v in g.details.items():
                if isinstance(v, bool):
                    rep.verdict(k, _st(v))
                else:
                    extra.append(f"{k}={v}")
            rep.verdict("gorenstein", _st(g.verdict), ", ".join([f"grade={g.grade}"] + extra))
            return g.verdict, rep.to_json(), g.verdict
        if f == "gorenstein_ring":
            v = md.is_gorenstein_ring(self.rings[a[0].id if a else ring])
            return v, None, v
        if f == "sum_theorem":
            rep = lk.verify_sum_theorem(M(0), M(1), I(2))
            return rep.all_true, rep.to_json(), rep.all_true
        if f == "ext_tor_duality":
            rep = lk.ext_tor_duality_check(M(0), a[1].value)
            return rep.all_true, rep.to_json(), rep.all_true
        if f == "tor_shift":
            rep = lk.tor_shift_check(M(0), a[1].value)
            return rep.all_true, rep.to_json(), rep.all_true
        if f == "depth_scan":
            scan = lk.depth_via_linked_syzygies(M(0), a[1].id, a[2].value)
            rep = scan.report
            if not rep.hypotheses_hold:
                value = "hypothesis_failed"
            elif scan.inf_n == "not-found":
                value = "not_found"
            else:
                value = scan.inf_n
            return value, rep.to_json(), rep.all_true
        if f == "tor_nonvanishing":
            rep = lk.tor_nonvanishing_check(M(0), a[1].value)
            return rep.all_true, rep.to_json(), rep.all_true
        if f == "zero":
            v = M(0).is_zero()
            return v, None, v
        if f == "is_free":
            v = M(0).is_free()
            return v, None, v
        if f == "stable":
            v = md.trace_and_stability(M(0)).stable
            return v, None, v
        if f == "cyclic":
            v = md.is_cyclic(M(0))
            return v, None, v
        if f == "totally_reflexive":
            v = md.totally_reflexive(M(0)).totally_reflexive
            return v, None, v
        if f == "equal":
            v = I(0) == I(1)
            return v, None, v
        if f in ("ann", "trace", "colon", "intersect"):
            return self.ideal(c, ring), None, True
        if f == "length":
            num = md.module_numerics(M(0))
            return (num.length if num.finite_length else INF), None, True
        if f == "depth":
            return md.depth_of(M(0)), None, True
        if f == "pd":
            return md.pd_or_infinite(M(0)), None, True
        if f == "gdim":
            return md.gdim_suite(M(0)).gdim, None, True
        if f == "grade":
            return md.grade_of(I(0)), None, True
        if f == "dim":
            return self.rings[a[0].id if a else ring].dim, None, True
        if f == "betti":
            mod = M(0)
            b = a[1].value if len(a) > 1 else (self.bound or mod.ring.dim + 2)
            return mod.betti(b).totals(), None, True
        if f == "hilbert":
            return md.hilbert_function(M(0), a[1].value, a[2].value), None, True
        if f == "gb":
            return [str(g) for g in I(0).gb], None, True
        if f == "battery":
            from .suites import battery_suite
            n = a[0].value if a else 20
            res = battery_suite(seed=self.seed, min_cases=n)
            rep = lk.LinkageReport("battery")
            rep.verdict("enough_cases", _st(len(res.cases) >= n), len(res.cases))
            rep.verdict("agreement", _st(res.agreement == 1.0), f"{res.agreement:.0%}")
            v = res.agreement == 1.0 and len(res.cases) >= n
            return v, rep.to_json(), v
        if f == "tor_suite":
            from .suites import tor_nonvanishing_suite
            n = a[0].value if a else 50
            res = tor_nonvanishing_suite(seed=self.seed, min_cases=n)
            rep = lk.LinkageReport("tor_suite")
            rep.verdict("enough_cases", _st(len(res.nonvacuous) >= n), len(res.nonvacuous))
            v = res.pass_rate == 1.0 and len(res.nonvacuous) >= n
            rep.verdict("all_hold", _st(v))
            return v, rep.to_json(), v
        raise TypeError(f"unknown check {f!r}")

    def compare(self, chk: Check, value) -> bool:
        e = chk.expected
        if isinstance(e, Name) and e.id in ("true", "false"):
            return value is (e.id == "true")
        if isinstance(e, Name) and e.id == "inf":
            return value is INF
        if isinstance(e, Name) and e.id in ("hypothesis_failed", "not_found"):
            return value == e.id
        if isinstance(e, Int):
            return isinstance(value, int) and not isinstance(value, bool) and value == e.value
        if isinstance(e, ListLit):
            want = [int(x) if x.lstrip("-").isdigit() else x for x in e.items]
            return list(value) == want
        ring = self.ring_for(chk.call, self.current)
        expected = self.ideal(e, ring)
        return isinstance(value, IdealHandle) and value == expected


def _st(b: bool) -> str:
    return "true" if b else "false"


def _execute_check(env: _Env, idx: int, chk: Check) -> CheckResult:
    text = print_expr(chk.call) + (f" == {print_expr(chk.expected)}" if chk.expected else "")
    t0 = time.perf_counter()
    try:
        value, rep, default = env.run_check(chk)
        ok = env.compare(chk, value) if chk.expected is not None else bool(default)
        status = "pass" if ok else "fail"
        res = CheckResult(idx, text, chk.call.fn, status, _fmt(value),
                          print_expr(chk.expected) if chk.expected is not None else None, rep)
    except Exception as err:  # surfaced per check; other checks continue
        op = chk.call.fn
        if isinstance(err, EngineError):
            op, err = err.operation, err.err
        res = CheckResult(idx, text, chk.call.fn, "error", error=f"{type(err).__name__}: {err}",
                          operation=op,
                          expected=print_expr(chk.expected) if chk.expected is not None else None)
    res.seconds = time.perf_counter() - t0
    return res


def _threads() -> int:
    try:
        n = int(os.environ.get("LK_THREADS", "0"))
    except ValueError:
        n = 0
    return n if n > 0 else (os.cpu_count() or 1)


def run_script(script: Script, opts: Options | None = None, name: str = "<script>") -> Report:
    opts = opts or Options()
    env = _Env(opts)
    report = Report(name, opts)
    t0 = time.perf_counter()
    idx = 0
    stop = False

    def skipped(chk):
        nonlocal idx
        text = print_expr(chk.call) + (f" == {print_expr(chk.expected)}" if chk.expected else "")
        report.checks.append(CheckResult(idx, text, chk.call.fn, "skipped"))
        idx += 1

    for st in script.statements:
        if isinstance(st, (Check, ParBlock)) and stop:
            for chk in ([st] if isinstance(st, Check) else st.checks):
                skipped(chk)
            continue
        if isinstance(st, SetOption):
            env.settings[st.name] = st.value
            report.settings[st.name] = st.value
        elif isinstance(st, (RingDecl, IdealDecl, ModuleDecl)):
            try:
                _declare(env, st)
            except Exception as err:
                raise EngineError(f"{type(st).__name__} {st.name}", err) from err
        elif isinstance(st, Check):
            r = _execute_check(env, idx, st)
            idx += 1
            report.checks.append(r)
            if opts.fail_fast and r.status in ("fail", "error"):
                stop = True
        elif isinstance(st, ParBlock):
            with ThreadPoolExecutor(max_workers=min(_threads(), max(1, len(st.checks)))) as ex:
                futs = [ex.submit(_execute_check, env, idx + k, c) for k, c in enumerate(st.checks)]
                results = [f.result() for f in futs]
            idx += len(st.checks)
            report.checks.extend(results)
            if opts.fail_fast and any(r.status in ("fail", "error") for r in results):
                stop = True
    report.declarations = env.declarations
    report.total_seconds = time.perf_counter() - t0
    return report


def _ring_name(env: _Env, R: GradedRing, hint: str | None) -> str | None:
    if hint is not None and env.rings.get(hint) == R:
        return hint
    for k, v in env.rings.items():
        if v == R:
            return k
    return hint


def _declare(env: _Env, st):
    if isinstance(st, RingDecl):
        env.ring_decl(st)
    elif isinstance(st, IdealDecl):
        ring = env.ring_for(st.expr, env.current)
        I = env.ideal(st.expr, ring)
        env.ideals[st.name] = I
        env.ring_of[st.name] = _ring_name(env, I.ring, ring)
        env.declarations["ideals"].append({"name": st.name, "ring": env.ring_of[st.name],
                                           "generators": [str(g) for g in I.mingens()]})
    else:
        ring = env.ring_for(st.expr, env.current)
        M = env.module(st.expr, ring)
        env.modules[st.name] = M
        env.ring_of[st.name] = _ring_name(env, M.ring, ring)
        env.declarations["modules"].append({"name": st.name, "ring": env.ring_of[st.name],
                                            **M.minimal().to_json()})
