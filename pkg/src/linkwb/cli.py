"""``lk`` command-line front end.

Exit codes: 0 all checks passed, 1 some check false, 2 usage or parse error,
3 engine error.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .dsl import ScriptError, parse_script
from .runner import EXIT_ENGINE, EXIT_USAGE, EngineError, Options, run_script


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _global_flags(p: argparse.ArgumentParser):
    p.add_argument("--prime", type=int, help="coefficient field prime (default 32003)")
    p.add_argument("--order", choices=["grevlex", "lex"], help="monomial order")
    p.add_argument("--bound", type=int, help="resolution truncation bound")
    p.add_argument("--fail-fast", action="store_true", help="stop after the first failed check")
    p.add_argument("--seed", type=int, help="seed for randomized suites")
    p.add_argument("--json", metavar="PATH", help="also write the JSON report here ('-' = stdout)")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="lk", description="Linkage workbench: scripted checks over graded rings.")
    sub = p.add_subparsers(dest="cmd", required=True, parser_class=_Parser)

    r = sub.add_parser("run", help="execute a .lk script")
    r.add_argument("script")
    _global_flags(r)

    def one_shot(name, help_, *fields):
        q = sub.add_parser(name, help=help_)
        q.add_argument("--ring", required=True, help='e.g. "poly(vars x,y)/ideal(x*y)"')
        for f, h in fields:
            q.add_argument(f"--{f}", required=h is None or not h.startswith("["), help=h)
        _global_flags(q)
        return q

    one_shot("gb", "reduced Groebner basis of an ideal", ("ideal", "generators, comma separated"))
    one_shot("res", "Betti numbers of a minimal resolution", ("module", "module expression"))
    one_shot("ext", "length/vanishing of Ext^i(M,N)", ("i", "homological degree"),
             ("M", "module expression"), ("N", "module expression"))
    one_shot("tor", "length/vanishing of Tor_i(M,N)", ("i", "homological degree"),
             ("M", "module expression"), ("N", "module expression"))
    one_shot("link", "are I and J linked by c?", ("I", "ideal generators"),
             ("J", "ideal generators"), ("c", "[linking ideal generators, default 0]"))
    one_shot("geolink", "geometric-linkage battery for I, J linked by 0",
             ("I", "ideal generators"), ("J", "ideal generators"))
    one_shot("gorenstein", "is the ideal Gorenstein?", ("ideal", "ideal generators"))
    one_shot("depth-scan", "depth via linked syzygies", ("module", "[module, default k]"),
             ("hdim", "[pd or gdim, default pd]"), ("nmax", "[largest n, default 3]"))
    return p


def _one_shot_script(a) -> str:
    lines = [f"ring R = {a.ring};"]
    cmd = a.cmd
    if cmd == "gb":
        lines += [f"ideal I = ({a.ideal});", "gb(I);"]
    elif cmd == "res":
        b = f", {a.bound}" if a.bound is not None else ""
        lines += [f"module M = {a.module};", f"betti(M{b});"]
    elif cmd in ("ext", "tor"):
        lines += [f"module M = {a.M};", f"module N = {a.N};",
                  f"length({cmd}({a.i}, M, N));"]
    elif cmd == "link":
        c = a.c if a.c else "0"
        lines += [f"ideal I = ({a.I});", f"ideal J = ({a.J});", f"ideal c = ({c});",
                  "linked(I, J, c);"]
    elif cmd == "geolink":
        lines += [f"ideal I = ({a.I});", f"ideal J = ({a.J});", "geolink(I, J);"]
    elif cmd == "gorenstein":
        lines += [f"ideal I = ({a.ideal});", "gorenstein(I);"]
    elif cmd == "depth-scan":
        mod = a.module or "residue_field()"
        lines += [f"module M = {mod};",
                  f"depth_scan(M, {a.hdim or 'pd'}, {a.nmax or 3});"]
    return "\n".join(lines) + "\n"


def main(argv=None) -> int:
    parser = build_parser()
    try:
        a = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code) if isinstance(e.code, int) else EXIT_USAGE
    if a.cmd == "run":
        path = Path(a.script)
        try:
            text = path.read_text(encoding="utf-8")
        except (OSError, UnicodeDecodeError) as e:
            print(f"lk: cannot read {a.script}: {e}", file=sys.stderr)
            return EXIT_USAGE
        name = path.name
    else:
        text = _one_shot_script(a)
        name = f"<{a.cmd}>"
    try:
        script = parse_script(text)
    except ScriptError as e:
        print(f"lk: {name}: {e}", file=sys.stderr)
        return EXIT_USAGE
    opts = Options(prime=a.prime, order=a.order, bound=a.bound, fail_fast=a.fail_fast,
                   seed=a.seed)
    try:
        report = run_script(script, opts, name)
    except EngineError as e:
        print(f"lk: engine error in {e.operation}: {e.err}", file=sys.stderr)
        return EXIT_ENGINE
    except Exception as e:  # declarations failing outside any check
        print(f"lk: engine error: {type(e).__name__}: {e}", file=sys.stderr)
        return EXIT_ENGINE
    sys.stdout.write(report.text())
    if a.json:
        data = report.dumps()
        if a.json == "-":
            sys.stdout.write(data)
        else:
            Path(a.json).write_text(data, encoding="utf-8")
    return report.exit_code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
