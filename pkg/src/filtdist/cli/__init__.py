"""Command-line driver.

Exit codes: 0 success, 1 internal error (or a failing ``verify``),
2 usage or input syntax error, 3 computation refused.
"""

import argparse
import sys

from ..ncpoly import UnverifiedDegreeError
from ..groupmodels import BudgetExceeded, BUDGET
from ..constructions import ConstructionError
from ..envelope import StructureError
from .fileformat import FileSyntaxError, parse, render, same, PresentationFile
from . import commands as C

__all__ = ["main", "parse", "render", "same", "PresentationFile", "FileSyntaxError"]


def build_parser():
    p = argparse.ArgumentParser(prog="filtdist", description="Exact filtrations and distortion tables.")
    p.add_argument("--threads", type=int, default=1, help="accepted for compatibility; work is single-threaded")
    p.add_argument("--out", help="write JSON-lines report here")
    sub = p.add_subparsers(dest="command", required=True)

    def cmd(name, fn, file=True, **kw):
        s = sub.add_parser(name, **kw)
        if file:
            s.add_argument("file")
        s.add_argument("--out", dest="sub_out", help="write JSON-lines report here")
        s.set_defaults(fn=fn)
        return s

    s = cmd("gs", C.cmd_gs, help="Groebner-Shirshov basis up to --max-deg")
    s.add_argument("--max-deg", type=int, required=True)

    s = cmd("normal-form", C.cmd_normal_form, help="reduce a polynomial")
    s.add_argument("--poly", required=True)
    s.add_argument("--max-deg", type=int)

    s = cmd("dims", C.cmd_dims, help="dimensions of a filtration tower")
    s.add_argument("--max-n", type=int, required=True)
    s.add_argument("--max-deg", type=int)
    s.add_argument("--sub")
    s.add_argument("--weights")
    s.add_argument("--mode", choices=("length", "operation"), default="length")

    s = cmd("dist", C.cmd_dist, help="distortion of a subalgebra")
    s.add_argument("--sub", required=True)
    s.add_argument("--max-n", type=int, required=True)
    s.add_argument("--cap", type=int)
    s.add_argument("--window", type=int, default=3)
    s.add_argument("--max-deg", type=int)

    s = cmd("majorate", C.cmd_majorate, help="least t with left_n inside right_tn")
    s.add_argument("--left", required=True)
    s.add_argument("--right", required=True)
    s.add_argument("--t-max", type=int, required=True)
    s.add_argument("--max-n", type=int, default=4)
    s.add_argument("--max-deg", type=int)
    s.add_argument("--mode", choices=("length", "operation"), default="length")

    s = cmd("closure", C.cmd_closure, file=False, help="superadditive closure of f(1..N)")
    s.add_argument("--values", required=True)

    s = cmd("group-dist", C.cmd_group_dist, file=False, help="subgroup distortion by BFS")
    s.add_argument("--model", required=True)
    s.add_argument("--sub", default="whole")
    s.add_argument("--max-n", type=int, required=True)
    s.add_argument("--start-level", type=int, default=1)
    s.add_argument("--budget", type=int, default=BUDGET)
    s.add_argument("--bridge", action="store_true", help="relabel for the group algebras")
    s.add_argument("--check-n", type=int, help="cross-check against a group-algebra tower")

    s = cmd("uea", C.cmd_uea, file=False, help="Lie vs enveloping-algebra distortion")
    s.add_argument("--structure", required=True)
    s.add_argument("--gens", required=True)
    s.add_argument("--sub", required=True)
    s.add_argument("--max-n", type=int, required=True)

    s = cmd("construct", C.cmd_construct, file=False, help="embedding and filtration builders")
    s.add_argument("what", choices=("malcev", "mikhailova", "umirbaev", "lambda", "flambda", "tame-embed"))
    s.add_argument("file", nargs="?")
    s.add_argument("--depth", type=int, default=8)
    s.add_argument("--gens")
    s.add_argument("--enum")
    s.add_argument("--max-n", type=int, default=4)
    s.add_argument("--cap", type=int)
    s.add_argument("--lambda", dest="lam", default="1/2")
    s.add_argument("--count", type=int, default=3)
    s.add_argument("--mode", choices=("length", "operation"), default="operation")
    s.add_argument("--d")
    s.add_argument("--tower", default="standard")

    s = cmd("verify", C.cmd_verify, file=False, help="run the acceptance suite")
    s.add_argument("--only")
    return p


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.threads < 1:
        parser.error("--threads must be >= 1")
    out_path = getattr(args, "sub_out", None) or args.out
    if args.command == "construct" and args.what == "tame-embed":
        args.mode = "length"
    try:
        res = args.fn(args)
    except (UnverifiedDegreeError, BudgetExceeded) as e:
        print(f"filtdist: refused: {e}", file=sys.stderr)
        return 3
    except (FileSyntaxError, C.UsageError, StructureError, ConstructionError, OSError) as e:
        print(f"filtdist: {e}", file=sys.stderr)
        return 2
    except Exception as e:  # noqa: BLE001
        print(f"filtdist: internal error: {type(e).__name__}: {e}", file=sys.stderr)
        return 1
    text, recs = res[0], res[1]
    code = res[2] if len(res) > 2 else 0
    sys.stdout.write(text)
    if out_path:
        C.dump_records(recs, out_path)
    return code
