"""Command-line surface.

Subcommands: generate, validate, solve, oracle, render, lemma-check,
bench.  Each reads and writes the plain-text MCD1 and match formats, so
every pipeline step can be inspected or replayed by hand.
"""

from __future__ import annotations

import argparse
import sys
from fractions import Fraction
from pathlib import Path
from typing import List, Optional

from . import bench as bench_mod
from . import generate, lemmas, mcdio, oracle, render, solver, validate
from .errors import CylmatchError
from .flags import ProperMatching
from .generate import GenConfig
from .render import RenderStyle


def _read_drawing(path: str):
    return mcdio.parse_mcd(Path(path).read_text())


def cmd_generate(args) -> int:
    if args.kind.startswith("archetype:"):
        name = args.kind.split(":", 1)[1]
        for arch_name, d in generate.gen_archetypes():
            if arch_name == name:
                break
        else:
            known = ", ".join(n for n, _ in generate.gen_archetypes())
            raise CylmatchError(f"unknown archetype {name!r} (have: {known})")
    else:
        fns = {
            "flag": generate.gen_flag,
            "mixed": generate.gen_mixed,
            "planefree": generate.gen_planefree,
        }
        if args.kind not in fns:
            raise CylmatchError(f"unknown kind {args.kind!r}")
        if args.n is None:
            raise CylmatchError("--n is required for generated kinds")
        d = fns[args.kind](GenConfig(n=args.n, seed=args.seed))
    Path(args.out).write_text(mcdio.serialize_mcd(d))
    print(f"wrote {args.out}: n={d.n} m={len(d.edges)}")
    return 0


def cmd_validate(args) -> int:
    rep = validate.validate(_read_drawing(args.infile), backend=args.backend)
    print(rep.summary())
    for v in rep.violations:
        print(f"  {v}")
    return 0 if rep.ok else 1


def cmd_solve(args) -> int:
    d = _read_drawing(args.infile)
    params = None
    if args.mode == solver.MODE_PAPER:
        if args.n0 is None:
            raise CylmatchError("paper mode needs --n0 (and optionally --epsilon)")
        params = solver.PaperParams(Fraction(args.epsilon), args.n0)
    out = solver.solve(d, args.mode, params=params, k=args.k, verify=args.verify)
    if args.out:
        m = ProperMatching(tuple(sorted(out)), {})
        Path(args.out).write_text(mcdio.serialize_matching(m))
    print(f"found {len(out)} pairwise disjoint edges")
    for u, v in sorted(out):
        print(f"  {u} {v}")
    return 0


def cmd_oracle(args) -> int:
    d = _read_drawing(args.infile)
    res = oracle.max_disjoint_bruteforce(d, force=args.force)
    print(f"optimum {res.size}")
    for u, v in res.edges:
        print(f"  {u} {v}")
    return 0


def _parse_highlight(spec: str):
    pairs = []
    for tok in spec.split(","):
        if not tok:
            continue
        u, _, v = tok.partition("-")
        pairs.append(tuple(sorted((int(u), int(v)))))
    return frozenset(pairs)


def cmd_render(args) -> int:
    d = _read_drawing(args.infile)
    highlight = frozenset()
    if args.match:
        m = mcdio.parse_matching(Path(args.match).read_text())
        highlight = frozenset(tuple(sorted(p)) for p in m.edges)
    if args.highlight:
        highlight = highlight | _parse_highlight(args.highlight)
    style = RenderStyle(
        width=args.width,
        height=args.height,
        highlight=highlight,
        show_cut=not args.no_cut,
        label_vertices=args.labels,
    )
    Path(args.out).write_text(render.render_svg(d, style))
    print(f"wrote {args.out}")
    return 0


def cmd_lemma_check(args) -> int:
    specs: List[lemmas.CorpusSpec] = []
    if args.flags or args.mixed or args.planefree:
        specs += lemmas.corpus_from_counts(
            flags=args.flags,
            mixed=args.mixed,
            planefree=args.planefree,
            seed0=args.seed,
            nmin=args.nmin,
            nmax=args.nmax,
        )
        specs += [("archetype", n) for n, _ in generate.gen_archetypes()]
    else:
        specs += lemmas.default_corpus()
    for path in args.infile or ():
        specs.append(("file", path))
    rep = lemmas.lemma_check(specs, workers=args.workers)
    print(rep.summary())
    return 0 if rep.ok else 1


def cmd_bench(args) -> int:
    sizes = [int(t) for t in args.sizes.split(",") if t]
    points = bench_mod.bench_solve(sizes=sizes, seed=args.seed, repeats=args.repeats)
    backends = bench_mod.bench_backends(
        n=args.backend_n, seed=args.seed, repeats=args.repeats
    )
    print(bench_mod.format_report(points, backends))
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="cylmatch",
        description="disjoint edge sets in monotone cylindrical drawings",
    )
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("generate", help="emit a drawing as MCD1")
    g.add_argument("--kind", required=True,
                   help="flag | mixed | planefree | archetype:<name>")
    g.add_argument("--n", type=int)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--out", required=True)
    g.set_defaults(fn=cmd_generate)

    v = sub.add_parser("validate", help="check an MCD1 file")
    v.add_argument("--in", dest="infile", required=True)
    v.add_argument("--backend", choices=("numba", "numpy", "python"))
    v.set_defaults(fn=cmd_validate)

    s = sub.add_parser("solve", help="find pairwise disjoint edges")
    s.add_argument("--mode", choices=(solver.MODE_PRACTICAL, solver.MODE_PAPER),
                   default=solver.MODE_PRACTICAL)
    s.add_argument("--k", type=int)
    s.add_argument("--in", dest="infile", required=True)
    s.add_argument("--out")
    s.add_argument("--verify", action="store_true",
                   help="re-check the split separation at every level (slow)")
    s.add_argument("--epsilon", default="1/4",
                   help="paper-mode exponent parameter, a fraction")
    s.add_argument("--n0", type=int, help="paper-mode base-case bound")
    s.set_defaults(fn=cmd_solve)

    o = sub.add_parser("oracle", help="exact optimum by branch and bound")
    o.add_argument("--in", dest="infile", required=True)
    o.add_argument("--force", action="store_true",
                   help="lift the size cap despite exponential cost")
    o.set_defaults(fn=cmd_oracle)

    r = sub.add_parser("render", help="draw the plane representation as SVG")
    r.add_argument("--in", dest="infile", required=True)
    r.add_argument("--out", required=True)
    r.add_argument("--width", type=int, default=900)
    r.add_argument("--height", type=int, default=480)
    r.add_argument("--match", help="match file whose edges get emphasized")
    r.add_argument("--highlight", help="extra edges as u-v,u-v")
    r.add_argument("--no-cut", action="store_true")
    r.add_argument("--labels", action="store_true")
    r.set_defaults(fn=cmd_render)

    l = sub.add_parser("lemma-check", help="replay every property suite")
    l.add_argument("--workers", type=int, default=1)
    l.add_argument("--flags", type=int, default=0)
    l.add_argument("--mixed", type=int, default=0)
    l.add_argument("--planefree", type=int, default=0)
    l.add_argument("--seed", type=int, default=1)
    l.add_argument("--nmin", type=int, default=10)
    l.add_argument("--nmax", type=int, default=40)
    l.add_argument("--in", dest="infile", action="append",
                   help="extra MCD1 file, repeatable")
    l.set_defaults(fn=cmd_lemma_check)

    b = sub.add_parser("bench", help="time the solver and the kernels")
    b.add_argument("--sizes", default="20,40,80,160")
    b.add_argument("--seed", type=int, default=1)
    b.add_argument("--repeats", type=int, default=1)
    b.add_argument("--backend-n", type=int, default=120)
    b.set_defaults(fn=cmd_bench)

    return p


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except CylmatchError as ex:
        print(f"error: {ex}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
