"""Command-line front end.

Exit status: 0 on success or PASS, 1 on a domain failure (invalid input, a
FAIL report, an oracle mismatch), 2 on a usage error.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path
from typing import Sequence, Union

from .branching import UnknownStateError, _germ_space, pi0
from .flowcat import UnsupportedInputError, oracle_check
from .fuzz import run_fuzz, thread_cap
from .globular import GlobularComplex, InvalidComplexError, globe, realize, require_valid, validate_complex
from .homology import ChainComplexError, branching_homology, merging_homology
from .precubical import CatalogError, FormatError, PrecubicalSet, gen_cube, gen_example, validate
from .subdivision import SubdivisionError, apply_ops, check_invariance, parse_ops

Complex = Union[PrecubicalSet, GlobularComplex]


class UsageError(Exception):
    pass


class DomainError(Exception):
    pass


def load_builtin(name: str) -> Complex:
    parts = name.split(":")
    if parts[0] in ("globe", "cube"):
        if len(parts) != 2 or not parts[1].isdigit():
            raise UsageError(f"builtin:{name}: expected builtin:{parts[0]}:N")
        n = int(parts[1])
        return globe(n) if parts[0] == "globe" else gen_cube(n)
    if len(parts) != 1:
        raise UsageError(f"unknown builtin {name!r}")
    try:
        return gen_example(name)
    except CatalogError as exc:
        raise UsageError(str(exc)) from None


def parse_complex(data) -> Complex:
    if not isinstance(data, dict):
        raise FormatError("input must be a JSON object with a 'format' key")
    fmt = data.get("format")
    if fmt == "precubical":
        return PrecubicalSet.from_json(data)
    if fmt == "globular":
        return GlobularComplex.from_json(data)
    raise FormatError(f"'format' is {fmt!r}, expected 'precubical' or 'globular'")


def load_complex(src: str) -> Complex:
    if src.startswith("builtin:"):
        return load_builtin(src[len("builtin:"):])
    path = Path(src)
    if src == "-":
        text = sys.stdin.read()
    elif not path.is_file():
        raise UsageError(f"cannot read input file {src!r}")
    else:
        text = path.read_text()
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(f"{src}: not valid JSON ({exc})") from None
    return parse_complex(data)


def load_ops(arg: str):
    stripped = arg.lstrip()
    if stripped.startswith("["):
        text = arg
    else:
        path = Path(arg)
        if not path.is_file():
            raise UsageError(f"cannot read ops file {arg!r}")
        text = path.read_text()
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(f"ops: not valid JSON ({exc})") from None
    return parse_ops(data)


def as_globular(X: Complex) -> GlobularComplex:
    if isinstance(X, PrecubicalSet):
        rep = validate(X)
        if not rep.ok:
            raise DomainError("invalid precubical set:\n" + "\n".join(rep.lines()))
        return realize(X)
    return X


def dump(obj) -> str:
    return json.dumps(obj, indent=2)


def homology_table(groups: dict[str, dict]) -> str:
    sides = list(groups)
    degrees = sorted({n for g in groups.values() for n in g})
    header = ["degree"] + sides
    rows = [[str(n)] + [str(groups[s].get(n, "0")) for s in sides] for n in degrees]
    widths = [max(len(r[i]) for r in [header] + rows) for i in range(len(header))]
    fmt = "  ".join("{:<%d}" % w for w in widths)
    return "\n".join(fmt.format(*r).rstrip() for r in [header] + rows)


# -- subcommands ----------------------------------------------------------

def cmd_validate(args, out) -> int:
    X = load_complex(args.input)
    rep = validate(X) if isinstance(X, PrecubicalSet) else validate_complex(X)
    if args.json:
        out.write(dump(rep.to_json()) + "\n")
    elif rep.ok:
        out.write("valid\n")
    else:
        out.write("\n".join(rep.lines()) + "\n")
    return 0 if rep.ok else 1


def cmd_realize(args, out) -> int:
    X = load_complex(args.input)
    if not isinstance(X, PrecubicalSet):
        raise DomainError("realize expects a precubical input")
    G = as_globular(X)
    out.write(dump(G.to_json()) + "\n")
    return 0


def cmd_homology(args, out) -> int:
    X = as_globular(load_complex(args.input))
    require_valid(X)
    sides = []
    if args.branching or not args.merging:
        sides.append(("branching", branching_homology))
    if args.merging or not args.branching:
        sides.append(("merging", merging_homology))
    groups = {name: fn(X) for name, fn in sides}
    if args.json:
        out.write(dump({name: {str(n): g.to_json() for n, g in hs.items()}
                        for name, hs in groups.items()}) + "\n")
    else:
        out.write(homology_table(groups) + "\n")
    return 0


def cmd_subdivide(args, out) -> int:
    X = load_complex(args.input)
    if args.ops is None:
        raise UsageError("subdivide needs --ops")
    ops = load_ops(args.ops)
    if isinstance(X, PrecubicalSet):
        as_globular(X)  # reject invalid input up front
    else:
        require_valid(X)
    Y = apply_ops(X, ops)
    out.write(dump(Y.to_json()) + "\n")
    return 0


def cmd_check_invariance(args, out) -> int:
    X = load_complex(args.input)
    if args.ops is None:
        raise UsageError("check-invariance needs --ops")
    ops = load_ops(args.ops)
    if isinstance(X, PrecubicalSet):
        as_globular(X)
    rep = check_invariance(X, ops)
    if args.json:
        out.write(dump(rep.to_json()) + "\n")
    else:
        groups = {}
        for side in ("branching", "merging"):
            groups[f"{side} before"] = rep.before.get(side, {})
            groups[f"{side} after"] = rep.after.get(side, {})
        out.write(homology_table(groups) + "\n")
        for line in rep.discrepancies:
            out.write(line + "\n")
        out.write(("PASS" if rep.passed else "FAIL") + "\n")
    return 0 if rep.passed else 1


def cmd_oracle(args, out) -> int:
    X = as_globular(load_complex(args.input))
    orep = oracle_check(X)
    if args.json:
        out.write(dump(orep.to_json()) + "\n")
    else:
        for line in orep.lines():
            out.write(line + "\n")
        out.write(f"{'PASS' if orep.passed else 'FAIL'} ({orep.states_checked} states)\n")
    return 0 if orep.passed else 1


def state_graph_dot(X: GlobularComplex) -> str:
    lines = ['digraph "states" {']
    lines += [f'  "{s}";' for s in X.states]
    for c in X.cells:
        if c.dim == 1:
            lines.append(f'  "{c.src}" -> "{c.tgt}" [label="{c.id}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"


def cmd_export_dot(args, out) -> int:
    X = as_globular(load_complex(args.input))
    require_valid(X)
    side = "merge" if args.merging else "branch"
    if args.state is None:
        if args.json:
            raise UsageError("--json on export-dot needs --state")
        text = state_graph_dot(X)
    else:
        C = _germ_space(X, args.state, side)
        if args.json:
            data = C.to_json()
            data["components"] = pi0(C).count
            text = dump(data) + "\n"
        else:
            kind = "merging" if args.merging else "branching"
            text = C.to_dot(f"{kind}_{args.state}")
    if args.dot:
        Path(args.dot).write_text(text)
    else:
        out.write(text)
    return 0


def cmd_fuzz(args, out) -> int:
    seed = args.seed if args.seed is not None else 0
    count = args.count if args.count is not None else 100
    if count < 0 or not 0 <= seed < 2 ** 64:
        raise UsageError("--count must be >= 0 and --seed a u64")
    t0 = time.perf_counter()
    results = run_fuzz(seed, count, threads=thread_cap())
    elapsed = time.perf_counter() - t0
    failed = [r for r in results if not r.passed]
    if args.json:
        out.write(dump({"seed": seed, "count": count, "failed": len(failed),
                        "instances": [r.to_json() for r in results]}) + "\n")
    else:
        for r in failed:
            out.write(f"instance {r.index} census {list(r.census)} ops {json.dumps(r.ops)}\n")
            for f in r.failures:
                out.write(f"  {f}\n")
        out.write(f"{count - len(failed)}/{count} instances passed (seed {seed})\n")
        print(f"elapsed {elapsed:.2f}s", file=sys.stderr)
    return 1 if failed else 0


COMMANDS = {
    "validate": (cmd_validate, "check precubical identities or globular well-formedness"),
    "realize": (cmd_realize, "convert a precubical set to a globular complex"),
    "homology": (cmd_homology, "branching and merging homology"),
    "subdivide": (cmd_subdivide, "apply a sequence of subdivision ops"),
    "check-invariance": (cmd_check_invariance, "compare homology before and after ops"),
    "oracle": (cmd_oracle, "compare germ-side and flow-side branching chains"),
    "export-dot": (cmd_export_dot, "DOT export of the state graph or a branching space"),
    "fuzz": (cmd_fuzz, "randomized invariance and oracle checks"),
}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="digerm", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)
    for name, (_, help_) in COMMANDS.items():
        sp = sub.add_parser(name, help=help_)
        if name != "fuzz":
            sp.add_argument("input", help="JSON file, '-' for stdin, or builtin:NAME")
        sp.add_argument("--json", action="store_true", help="machine-readable output")
        if name == "homology":
            sp.add_argument("--branching", action="store_true")
            sp.add_argument("--merging", action="store_true")
        if name == "export-dot":
            sp.add_argument("--state")
            sp.add_argument("--merging", action="store_true", help="merging space instead")
            sp.add_argument("--dot", metavar="PATH", help="write here instead of stdout")
        if name in ("subdivide", "check-invariance"):
            sp.add_argument("--ops", help="ops JSON file or inline JSON list")
        if name == "fuzz":
            sp.add_argument("--seed", type=int)
            sp.add_argument("--count", type=int)
    return p


def main(argv: Sequence[str] | None = None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code == 0 else 2
    try:
        return COMMANDS[args.command][0](args, out)
    except UsageError as exc:
        print(f"digerm: {exc}", file=sys.stderr)
        return 2
    except InvalidComplexError as exc:
        print(f"digerm: {exc}", file=sys.stderr)
        if exc.report is not None:
            for line in exc.report.lines():
                print(f"  {line}", file=sys.stderr)
        return 1
    except (DomainError, FormatError, SubdivisionError, UnknownStateError,
            UnsupportedInputError, ChainComplexError) as exc:
        print(f"digerm: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
