"""Compare the compiled and pure-Python kernel backends.

Micro benchmarks call the two kernel modules directly in this process.
Macro benchmarks run whole computations in a subprocess per backend, with
``LK_PURE_PYTHON`` selecting the fallback, and time them inside the child.

    python3 benchmarks/bench_kernels.py [--repeat 5] [--json out.json]
"""

from __future__ import annotations

import argparse
import json
import os
import random
import subprocess
import sys
import timeit

from linkwb import kernels

P = 32003

MACRO = {
    "gb_4var": (
        "from linkwb.ideals import GradedRing, buchberger\n"
        "R = GradedRing.poly('x,y,z,t')\n"
        "F = [R.parse(s) for s in ['x*y - z*t', 'x^2*z - y*t^2', 'y^3 - x*z*t', "
        "'x*z^2 + y*t^2', 'x^3 + y^3 + z^3 + t^3']]\n"
        "def work():\n    buchberger(F)\n"
    ),
    "resolution_k": (
        "from linkwb.ideals import GradedRing\n"
        "from linkwb.modules import FPModule\n"
        "R = GradedRing.poly('x,y,z').quotient(['x^2', 'y*z', 'z^3'])\n"
        "def work():\n    FPModule.residue_field(R).resolution(5)\n"
    ),
    "ext_tor_hypersurface": (
        "from linkwb.ideals import GradedRing\n"
        "from linkwb.modules import FPModule, ext, tor, module_length\n"
        "R = GradedRing.poly('x,y').quotient(['x^3 + y^3'])\n"
        "M = FPModule.quotient(R.ideal('x', 'y^2'))\n"
        "def work():\n"
        "    for i in range(1, 4):\n"
        "        module_length(ext(i, M, M)); module_length(tor(i, M, M))\n"
    ),
}

CHILD = (
    "import json, timeit\n{setup}\n"
    "from linkwb import kernels\n"
    "t = min(timeit.repeat(work, number=1, repeat={repeat}))\n"
    "print(json.dumps({{'backend': kernels.BACKEND, 'seconds': t}}))\n"
)


def _vectors(rng, n, length):
    out = []
    for _ in range(n):
        keys = sorted(rng.sample(range(200_000), length), reverse=True)
        out.append([(k, 3 * k + 1, rng.randrange(1, P)) for k in keys])
    return out


def micro(repeat: int) -> dict:
    rng = random.Random(7)
    vecs = _vectors(rng, 40, 300)
    rows = [[rng.randrange(P) for _ in range(120)] for _ in range(100)]
    res = {}
    for name, impl in kernels.available_backends().items():
        def axpy_loop():
            acc = vecs[0]
            for g in vecs[1:]:
                acc = impl.axpy(acc, 0, g, 0, 12345, 5, 15, P)

        def rref_once():
            impl.rref([r[:] for r in rows], 120, P)

        res[name] = {
            "axpy_merge": min(timeit.repeat(axpy_loop, number=20, repeat=repeat)) / 20,
            "rref_100x120": min(timeit.repeat(rref_once, number=1, repeat=repeat)),
        }
    return res


def macro(repeat: int) -> dict:
    res: dict = {}
    for flag, label in (("0", "default"), ("1", "python")):
        env = dict(os.environ, LK_PURE_PYTHON=flag)
        for name, setup in MACRO.items():
            code = CHILD.format(setup=setup, repeat=repeat)
            out = subprocess.run([sys.executable, "-c", code], env=env, check=True,
                                 capture_output=True, text=True).stdout
            data = json.loads(out)
            res.setdefault(data["backend"] if label == "default" else "python", {})[name] = \
                data["seconds"]
    return res


def _table(title: str, res: dict) -> None:
    names = sorted({k for v in res.values() for k in v})
    print(title)
    print(f"  {'workload':24s}" + "".join(f"{b:>12s}" for b in res) + "     speedup")
    for n in names:
        cols = [res[b].get(n) for b in res]
        line = f"  {n:24s}" + "".join(f"{c * 1e3:10.2f}ms" for c in cols)
        if "cython" in res and "python" in res:
            line += f"  {res['python'][n] / res['cython'][n]:8.2f}x"
        print(line)


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--json", metavar="PATH")
    a = ap.parse_args(argv)
    results = {"micro": micro(a.repeat), "macro": macro(a.repeat)}
    if "cython" not in results["micro"]:
        print("compiled backend not built; only the fallback was timed")
    _table("kernel micro benchmarks (best of repeats)", results["micro"])
    _table("end-to-end workloads (best of repeats)", results["macro"])
    if a.json:
        with open(a.json, "w", encoding="utf-8") as fh:
            json.dump(results, fh, indent=2, sort_keys=True)
    return 0


if __name__ == "__main__":
    sys.exit(main())
