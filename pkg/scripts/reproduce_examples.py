"""Reproduce the library-level worked examples one at a time.

    python scripts/reproduce_examples.py --list
    python scripts/reproduce_examples.py snf-2x2
    python scripts/reproduce_examples.py --all

Each example prints what was computed next to what was expected and exits
nonzero on a mismatch.  Examples that are whole CLI pipelines are listed in
the README as ``digerm`` invocations instead.
"""

from __future__ import annotations

import argparse
import dataclasses
import sys

from digerm.branching import branching_space, merging_space, pi0
from digerm.flowcat import UnsupportedInputError, cat, flow_branching_chain, oracle_check
from digerm.globular import GlobularComplex, globe, op, realize, validate_complex
from digerm.homology import ChainComplex, branching_homology, homology, merging_homology
from digerm.precubical import PrecubicalSet, gen_cube, gen_example, validate
from digerm.snf import snf
from digerm.subdivision import (SubdivisionError, SubdivisionOp, check_invariance, subdivide_edge,
                                subdivide_lens, subdivide_precubical)


def groups(H):
    return [str(g) for _, g in sorted(H.items())]


def miswired():
    K = gen_example("filled_square")
    faces = dict(K.faces)
    faces["**"] = (("0*", "*1"), faces["**"][1])
    return PrecubicalSet(cubes=K.cubes, faces=faces)


def raises(fn, exc):
    try:
        fn()
    except exc as e:
        return f"{type(e).__name__}: {e}"
    return "no error"


def corrupted_square():
    X = realize(gen_example("filled_square"))
    s = X["**"]
    cells = X.cells[:-1] + (dataclasses.replace(s, branch=((1, "0*"), (1, "*0"))),)
    return GlobularComplex(X.states, cells)


def wrong_source():
    X = realize(gen_example("filled_square"))
    s = X["**"]
    cells = X.cells[:-1] + (dataclasses.replace(s, branch=((1, "0*"), (-1, "1*"))),)
    return GlobularComplex(X.states, cells)


EXAMPLES = {
    # precubical
    "vertex-valid": (lambda: validate(gen_cube(0)).ok, True),
    "miswired-square": (lambda: ("**", 0, 1, 0, 2) in [v.as_tuple() for v in validate(miswired()).violations], True),
    "cube3-valid": (lambda: validate(gen_cube(3)).ok, True),
    "cube0-census": (lambda: gen_cube(0).census(), (1,)),
    "cube2-census": (lambda: gen_cube(2).census(), (4, 4, 1)),
    "cube3-census": (lambda: gen_cube(3).census(), (8, 12, 6, 1)),
    "hollow-square-census": (lambda: (gen_example("hollow_square").census(),
                                      len(gen_example("hollow_square").cubes[2])), ((4, 4), 0)),
    "torus-valid": (lambda: validate(gen_example("torus")).ok, True),
    "wedge-census": (lambda: gen_example("wedge_two_edges").census(), (3, 2)),
    # globular
    "single-edge": (lambda: (realize(gen_cube(1)).census(), realize(gen_cube(1)).cells[0].branch), ((2, 1), ())),
    "filled-square-branch": (lambda: realize(gen_example("filled_square"))["**"].branch, ((1, "0*"), (-1, "*0"))),
    "cube3-realized": (lambda: (realize(gen_cube(3)).census(), validate_complex(realize(gen_cube(3))).ok),
                       ((8, 12, 6, 1), True)),
    "globe0-census": (lambda: globe(0).census(), (2, 1)),
    "globe1-boundary": (lambda: globe(1)["t"].branch, ((1, "e1+"), (-1, "e1-"))),
    "globe2-census": (lambda: globe(2).census(), (2, 2, 2, 1)),
    "op-involution": (lambda: all(op(op(realize(gen_example(n)))) == realize(gen_example(n))
                                  for n in ("filled_square", "torus", "hollow_square")), True),
    "op-edge": (lambda: (op(realize(gen_cube(1))).cells[0].src, op(realize(gen_cube(1))).cells[0].tgt), ("1", "0")),
    "op-filled-square": (lambda: op(realize(gen_example("filled_square")))["**"].branch, ((-1, "1*"), (1, "*1"))),
    "globes-valid": (lambda: all(validate_complex(globe(n)).ok for n in range(5)), True),
    "wrong-source-named": (lambda: validate_complex(wrong_source()).lines(),
                           ["[src] cell '**': branch term '1*' has src '10', expected '00'"]),
    # branching
    "globe2-branching-0": (lambda: (branching_space(globe(2), "0").ranks(),
                                    groups(homology(ChainComplex.from_cw(branching_space(globe(2), "0"))))),
                           ((2, 2, 1), ["Z", "0", "0"])),
    "globe-branching-1-empty": (lambda: all(branching_space(globe(n), "1").is_empty() for n in range(5)), True),
    "filled-square-branching-min": (lambda: branching_space(realize(gen_example("filled_square")), "00").ranks(), (2, 1)),
    "globe2-merging-1": (lambda: merging_space(globe(2), "1").ranks(), (2, 2, 1)),
    "globe2-merging-0-empty": (lambda: merging_space(globe(2), "0").is_empty(), True),
    "hollow-merging-max": (lambda: pi0(merging_space(realize(gen_example("hollow_square")), "11")).count, 2),
    "globe3-branching-connected": (lambda: pi0(branching_space(globe(3), "0")).count, 1),
    # homology
    "snf-zero": (lambda: snf([[0, 0], [0, 0]]).diagonal, [0, 0]),
    "snf-identity": (lambda: snf([[1, 0], [0, 1]]).diagonal, [1, 1]),
    "snf-2x2": (lambda: snf([[2, 4], [6, 8]]).diagonal, [2, 4]),
    "circle-homology": (lambda: groups(homology(ChainComplex((1, 1), {1: ((0,),)}))), ["Z", "Z"]),
    "z-mod-2": (lambda: groups(homology(ChainComplex((1, 1), {1: ((2,),)}))), ["Z/2", "0"]),
    "empty-homology": (lambda: homology(ChainComplex((), {})), {}),
    "globe-homology": (lambda: [groups(branching_homology(globe(n)))[0] for n in range(5)], ["Z"] * 5),
    "hollow-square-homology": (lambda: groups(branching_homology(realize(gen_example("hollow_square")))), ["Z", "Z"]),
    "torus-homology": (lambda: groups(branching_homology(realize(gen_example("torus")))), ["0", "0", "0"]),
    "globe-merging-homology": (lambda: [groups(merging_homology(globe(n)))[0] for n in range(5)], ["Z"] * 5),
    "hollow-square-merging": (lambda: groups(merging_homology(realize(gen_example("hollow_square"))))[1], "Z"),
    "filled-square-merging": (lambda: groups(merging_homology(realize(gen_example("filled_square"))))[1], "0"),
    # flowcat
    "cat-globe1": (lambda: len(cat(globe(1)).cells), 3),
    "cat-two-step": (lambda: [c.id for c in cat(realize(gen_example("two_step_path"))).cells], ["e1", "e2"]),
    "cat-no-flow": (lambda: raises(lambda: cat(GlobularComplex(globe(1).states, tuple(
        dataclasses.replace(c, flow=None) for c in globe(1).cells))), UnsupportedInputError).split(":")[0],
                    "UnsupportedInputError"),
    "flow-chain-globe1": (lambda: (flow_branching_chain(cat(globe(1)), "0").ranks,
                                   flow_branching_chain(cat(globe(1)), "0").boundaries[1]), ((2, 1), ((1,), (-1,)))),
    "flow-chain-two-step": (lambda: flow_branching_chain(cat(realize(gen_example("two_step_path"))), "v0").ranks, (1,)),
    "flow-chain-final": (lambda: flow_branching_chain(cat(globe(2)), "1").ranks, ()),
    "oracle-globes": (lambda: all(oracle_check(globe(n)).passed for n in range(4)), True),
    "oracle-filled-square": (lambda: oracle_check(realize(gen_example("filled_square"))).passed, True),
    "oracle-corrupted": (lambda: [str(m) for m in oracle_check(corrupted_square()).mismatches],
                         ["state '00', degree 1: entry ('*0', '**') is 1 on the germ side, -1 on the flow side"]),
    # subdivision
    "edge-globe0": (lambda: (subdivide_edge(globe(0), "t", 1)[0].census(),
                             groups(branching_homology(subdivide_edge(globe(0), "t", 1)[0]))), ((3, 2), ["Z", "0"])),
    "edge-filled-square": (lambda: check_invariance(gen_example("filled_square"),
                                                    [SubdivisionOp("edge", cell="0*", k=2)]).passed, True),
    "edge-k0": (lambda: raises(lambda: subdivide_edge(globe(0), "t", 0), SubdivisionError),
                "SubdivisionError: edge subdivision: k must be a positive integer, got 0"),
    "lens-globe1": (lambda: (sorted(subdivide_lens(globe(1), "t")[0].states),
                             branching_space(subdivide_lens(globe(1), "t")[0], "0").ranks()),
                    (["0", "1", "t.z"], (3, 2))),
    "lens-filled-square": (lambda: subdivide_lens(realize(gen_example("filled_square")), "**")[0].census(), (5, 6, 2)),
    "lens-on-edge": (lambda: raises(lambda: subdivide_lens(globe(1), "e1+"), SubdivisionError),
                     "SubdivisionError: lens subdivision: cell 'e1+' has dimension 1, expected 2"),
    "grid-2x2": (lambda: subdivide_precubical(gen_example("filled_square"), (2, 2)).census(), (9, 12, 4)),
    "grid-edge-3": (lambda: subdivide_precubical(gen_cube(1), 3).census(), (4, 3)),
    "grid-identity": (lambda: subdivide_precubical(gen_example("filled_square"), (1, 1)) == gen_example("filled_square"), True),
    "invariance-globe1-lens": (lambda: check_invariance(globe(1), [SubdivisionOp("lens", cell="t")]).passed, True),
}


def run(name: str) -> bool:
    fn, expected = EXAMPLES[name]
    got = fn()
    ok = got == expected
    print(f"{'ok  ' if ok else 'FAIL'} {name}: {got!r}" + ("" if ok else f" (expected {expected!r})"))
    return ok


def main(argv=None) -> int:
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("names", nargs="*")
    p.add_argument("--all", action="store_true")
    p.add_argument("--list", action="store_true")
    args = p.parse_args(argv)
    if args.list:
        print("\n".join(EXAMPLES))
        return 0
    names = list(EXAMPLES) if args.all else args.names
    unknown = [n for n in names if n not in EXAMPLES]
    if unknown or not names:
        p.error(f"unknown examples {unknown}" if unknown else "name an example or pass --all")
    results = [run(n) for n in names]
    return 0 if all(results) else 1


if __name__ == "__main__":
    sys.exit(main())
