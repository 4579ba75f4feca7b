"""Command-line front end.

Every subcommand writes one JSON report (stdout, or ``--json-out``) and a
short human-readable summary to stderr.  Exit codes: 0 analysis completed
(whatever the verdict), 2 bad input, 3 enumeration budget exceeded,
4 the commensurability scan found a flagged pair.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from fractions import Fraction
from pathlib import Path

from . import groups, numberfields, schreier
from .errors import BudgetExceeded, IsospecError, NoIntertwiner, ParseError
from .lattices import commensurability, enumeration, forms, gram
from .polynomials import parse_polynomial

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_BUDGET = 3
EXIT_FLAGGED = 4


class Report:
    """Accumulates the JSON run report of one subcommand."""

    def __init__(self, subcommand: str, args: argparse.Namespace):
        self.data: dict = {"subcommand": subcommand, "inputs": _echo(args), "verdicts": {}, "caveats": []}
        self.timings: dict[str, float] = {}
        self.lines: list[str] = []
        self._t0 = time.perf_counter()

    def timed(self, label: str):
        report = self

        class _Timer:
            def __enter__(self):
                self.start = time.perf_counter()

            def __exit__(self, *exc):
                report.timings[label] = round(time.perf_counter() - self.start, 4)

        return _Timer()

    def say(self, line: str) -> None:
        self.lines.append(line)

    def emit(self, args: argparse.Namespace) -> None:
        self.timings["total"] = round(time.perf_counter() - self._t0, 4)
        if args.timings:
            self.data["timings"] = self.timings
        text = json.dumps(self.data, indent=2, sort_keys=True) + "\n"
        if args.json_out:
            Path(args.json_out).write_text(text)
        else:
            sys.stdout.write(text)
        for line in self.lines:
            print(line, file=sys.stderr)
        print(f"[{self.data['subcommand']}] done in {self.timings['total']:.2f}s", file=sys.stderr)


def _echo(args: argparse.Namespace) -> dict:
    skip = {"func", "json_out", "timings"}
    out = {}
    for k, v in sorted(vars(args).items()):
        if k in skip:
            continue
        out[k] = v if isinstance(v, (int, float, str, bool, type(None), list)) else str(v)
    return out


def _read(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc.strerror}") from None


# -- groups ---------------------------------------------------------------------


def _load_triple(args) -> tuple[groups.PermGroup, groups.Subgroup, groups.Subgroup]:
    degree, gens = groups.parse_generators(_read(args.group_file))
    if not gens:
        raise ParseError(f"{args.group_file}: no generators")
    G = groups.close_generators(gens, cap=args.cap)
    subs = []
    for path in (args.subgroup1, args.subgroup2):
        try:
            _, sgens = groups.parse_generators(_read(path), degree)
        except ParseError as exc:
            raise ParseError(f"{path}: {exc}") from None
        for g in sgens:
            if g not in G:
                raise groups.NotASubgroup(f"{path}: generator {g} is not in the group")
        subs.append(G.subgroup(sgens))
    return G, subs[0], subs[1]


def cmd_gassmann_check(args) -> int:
    rep = Report("gassmann-check", args)
    with rep.timed("verdict"):
        G, H1, H2 = _load_triple(args)
        verdict = groups.is_gassmann(G, H1, H2)
    rep.data["group"] = {"degree": G.degree, "order": G.order, "classes": len(G.classes)}
    rep.data["subgroups"] = {"H1": {"order": H1.order, "index": H1.index},
                             "H2": {"order": H2.order, "index": H2.index}}
    rep.data["verdicts"] = verdict.to_json(G)
    rep.say(f"|G| = {G.order}, |H1| = {H1.order}, |H2| = {H2.order}")
    rep.say("class  size  rep                |C∩H1| |C∩H2|")
    for k, (a, b) in enumerate(verdict.intersection_table):
        c = G.classes[k]
        rep.say(f"{k:5d} {c.size:5d}  {str(c.representative):18s} {a:6d} {b:6d}")
    rep.say(f"condition (2): {verdict.condition2_holds}; characters equal: {verdict.characters_equal}; "
            f"conjugate: {verdict.subgroups_conjugate}; Gassmann-Sunada system: {verdict.is_gassmann_system}")
    rep.emit(args)
    return EXIT_OK


def cmd_gassmann_search(args) -> int:
    rep = Report("gassmann-search", args)
    _, gens = groups.parse_generators(_read(args.group_file))
    G = groups.close_generators(gens, cap=args.cap)
    with rep.timed("search"):
        triples = groups.search_gassmann_triples(G, args.max_index)
    rep.data["group"] = {"degree": G.degree, "order": G.order}
    rep.data["verdicts"] = {
        "count": len(triples),
        "triples": [{
            "H1": {"order": a.order, "generators": [str(g) for g in a.generators()]},
            "H2": {"order": b.order, "generators": [str(g) for g in b.generators()]},
            "verdict": v.to_json(),
        } for a, b, v in triples],
    }
    rep.say(f"found {len(triples)} Gassmann-Sunada pair(s) in a group of order {G.order}")
    rep.emit(args)
    return EXIT_OK


def cmd_sunada_graphs(args) -> int:
    rep = Report("sunada-graphs", args)
    G, H1, H2 = _load_triple(args)
    multisets = []
    if args.gens:
        _, S = groups.parse_generators(_read(args.gens), G.degree)
        if args.symmetrize:
            S = schreier.symmetrize(G, S)
        multisets.append(S)
    for k in range(args.random):
        multisets.append(schreier.random_symmetric_multiset(G, args.random_size, args.seed + k))
    if not multisets:
        multisets.append(schreier.symmetrize(G, G.generators))
    Q = None
    intertwiner_info: dict = {"requested": args.intertwiner}
    if args.intertwiner:
        with rep.timed("intertwiner"):
            try:
                Q = schreier.equivariant_intertwiner(G, H1, H2, seed=args.seed)
                intertwiner_info.update(found=True, determinant=str(Q.determinant()))
                if args.show_matrix:
                    intertwiner_info["matrix"] = Q.to_json()
            except NoIntertwiner as exc:
                intertwiner_info.update(found=False, error=str(exc))
    results = []
    with rep.timed("graphs"):
        for S in multisets:
            g1 = schreier.schreier_graph(G, H1, S)
            g2 = schreier.schreier_graph(G, H2, S)
            p1, p2 = schreier.char_poly(g1.adjacency), schreier.char_poly(g2.adjacency)
            entry = {
                "generators": [str(s) for s in S],
                "charpoly1": list(p1.coefficients),
                "charpoly2": list(p2.coefficients),
                "isospectral": schreier.isospectral_graphs(g1, g2),
            }
            if args.show_graphs:
                entry["graph1"] = g1.to_json()
                entry["graph2"] = g2.to_json()
            if Q is not None:
                entry["transplant_check"] = schreier.transplant_check(Q, g1, g2)
            results.append(entry)
            rep.say(f"|S| = {len(S)}: isospectral = {entry['isospectral']}"
                    + (f", transplant = {entry['transplant_check']}" if Q is not None else ""))
            rep.say(f"  char poly 1: {p1}")
            rep.say(f"  char poly 2: {p2}")
    rep.data["verdicts"] = {"graphs": results, "intertwiner": intertwiner_info,
                            "all_isospectral": all(r["isospectral"] for r in results)}
    rep.emit(args)
    return EXIT_OK


# -- lattices -------------------------------------------------------------------


def _lattice(spec: str) -> gram.GramMatrix:
    kind, _, value = spec.partition("=")
    if kind == "builtin":
        return gram.builtin_lattice(value)
    return gram.parse_gram(_read(value))


def _lattice_args(args) -> list[tuple[str, gram.GramMatrix]]:
    out = []
    for spec in args.lattice or []:
        label = spec.split("=", 1)[1]
        out.append((label, _lattice(spec)))
    return out


def cmd_theta(args) -> int:
    rep = Report("theta", args)
    lats = _lattice_args(args)
    if len(lats) != 1:
        raise ParseError("theta takes exactly one lattice")
    label, g = lats[0]
    with rep.timed("enumeration"):
        th = enumeration.theta_coefficients(g, Fraction(args.bound), args.budget)
    rep.data["verdicts"] = {"lattice": label, "theta": th.to_json(), "total_vectors": th.total()}
    if args.csv:
        Path(args.csv).write_text(th.to_csv())
    for q, c in sorted(th.counts.items()):
        rep.say(f"{str(q):>10s} {c}")
    rep.emit(args)
    return EXIT_OK


def cmd_torus(args) -> int:
    rep = Report("torus", args)
    lats = _lattice_args(args)
    if not 1 <= len(lats) <= 2:
        raise ParseError("torus takes one or two lattices")
    cutoff = Fraction(args.cutoff)
    spectra = []
    with rep.timed("enumeration"):
        for label, g in lats:
            spectra.append((label, enumeration.torus_spectrum(g, cutoff, args.budget)))
    rep.data["verdicts"] = {"spectra": {label: s.to_json() for label, s in spectra}}
    rep.data["caveats"].append(commensurability.FINITE_CUTOFF_CAVEAT)
    if args.csv and len(spectra) == 1:
        Path(args.csv).write_text(spectra[0][1].to_csv())
    if len(spectra) == 2:
        same = spectra[0][1].multiplicities == spectra[1][1].multiplicities
        rep.data["verdicts"]["isospectral_up_to_cutoff"] = same
        rep.say(f"isospectral up to {cutoff}: {same}")
    for label, s in spectra:
        rep.say(f"{label}: {len(s)} eigenvalues (q = lambda / 4 pi^2) up to {cutoff}")
    rep.emit(args)
    return EXIT_OK


def cmd_commensurable(args) -> int:
    rep = Report("commensurable", args)
    lats = _lattice_args(args)
    if len(lats) != 2:
        raise ParseError("commensurable takes exactly two lattices")
    (l1, g1), (l2, g2) = lats
    with rep.timed("spectral"):
        comm = commensurability.spectrally_commensurable(
            g1, g2, Fraction(args.cutoff), args.max_scalings, args.multiplicities, args.budget)
    with rep.timed("similarity"):
        sim = forms.rationally_similar(g1, g2)
    rep.data["verdicts"] = {"spectrally_commensurable": comm.to_json(), "rationally_similar": sim.to_json()}
    rep.data["caveats"].append(commensurability.FINITE_CUTOFF_CAVEAT)
    rep.say(f"{l1} vs {l2}: spectrally commensurable = {comm.verdict} (scaling {comm.scaling}); "
            f"rationally similar = {sim.similar} (scaling {sim.scaling})")
    rep.emit(args)
    return EXIT_OK


def cmd_kitaoka_scan(args) -> int:
    rep = Report("kitaoka-scan", args)
    if args.dimension > 4:
        raise ParseError("kitaoka-scan is limited to dimension <= 4")
    extra = [(_lattice(a), _lattice(b)) for a, b in (args.inject or [])]
    with rep.timed("scan"):
        res = commensurability.kitaoka_scan(args.dimension, args.entry_bound, args.trials,
                                            Fraction(args.cutoff), args.seed, args.related_fraction,
                                            extra, args.budget)
    rep.data["verdicts"] = res.to_json()
    rep.data["verdicts"]["flagged"] = res.flagged
    rep.data["caveats"].append(commensurability.FINITE_CUTOFF_CAVEAT)
    rep.say("                  similar  not similar")
    t = res.table
    rep.say(f"commensurable     {t['commensurable_similar']:7d}  {t['commensurable_not_similar']:11d}")
    rep.say(f"not commensurable {t['not_commensurable_similar']:7d}  {t['not_commensurable_not_similar']:11d}")
    if res.flagged:
        rep.say(f"!!! {len(res.counterexamples)} pair(s) spectrally commensurable but NOT rationally similar !!!")
    rep.emit(args)
    return EXIT_FLAGGED if res.flagged else EXIT_OK


# -- number fields ----------------------------------------------------------------


def cmd_splitting_census(args) -> int:
    rep = Report("splitting-census", args)
    f = parse_polynomial(_read(args.poly_file))
    with rep.timed("census"):
        census = numberfields.splitting_census(f, args.bound)
    rep.data["verdicts"] = {"polynomial": str(f), "discriminant": numberfields.poly_discriminant(f),
                            "census": census.to_json()}
    if args.csv:
        Path(args.csv).write_text(census.to_csv())
    rep.data["caveats"].append(numberfields.FINITE_BOUND_CAVEAT)
    for part, freq in census.frequencies().items():
        rep.say(f"{str(list(part)):24s} {freq:.4f}")
    rep.emit(args)
    return EXIT_OK


def cmd_arith_equiv(args) -> int:
    rep = Report("arith-equiv", args)
    f1 = parse_polynomial(_read(args.poly_file1))
    f2 = parse_polynomial(_read(args.poly_file2))
    with rep.timed("census"):
        c1 = numberfields.splitting_census(f1, args.bound)
        c2 = numberfields.splitting_census(f2, args.bound)
        cmp = numberfields.compare_censuses(c1, c2) if f1.degree == f2.degree else \
            numberfields.CensusComparison(False, None, 0, args.bound)
    rep.data["verdicts"] = {"polynomials": [str(f1), str(f2)], **cmp.to_json(),
                            "skipped": [list(c1.skipped), list(c2.skipped)]}
    if args.dirichlet:
        n = min(args.dirichlet, args.bound)
        rep.data["verdicts"]["dirichlet"] = [numberfields.dirichlet_coefficients(c1, n),
                                             numberfields.dirichlet_coefficients(c2, n)]
    rep.data["caveats"].append(numberfields.FINITE_BOUND_CAVEAT)
    witness = f", first disagreement at p = {cmp.first_disagreement}" if cmp.first_disagreement else ""
    rep.say(f"equal splitting at {cmp.compared_count} unramified primes <= {args.bound}: {cmp.equal}{witness}")
    rep.emit(args)
    return EXIT_OK


# -- parser -----------------------------------------------------------------------


def _add_lattice_options(p: argparse.ArgumentParser) -> None:
    p.add_argument("--builtin", dest="lattice", action="append", type=lambda s: f"builtin={s}",
                   help=f"built-in lattice ({', '.join(gram.BUILTIN_NAMES)}); repeatable")
    p.add_argument("--gram", dest="lattice", action="append", type=lambda s: f"file={s}",
                   help="Gram file: n, then n rows of rationals; repeatable")


def _global_options(suppress: bool) -> argparse.ArgumentParser:
    # the copy attached to subcommands must not overwrite values given before the subcommand
    def default(value):
        return argparse.SUPPRESS if suppress else value

    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--seed", type=int, default=default(0))
    p.add_argument("--budget", type=int, default=default(enumeration.DEFAULT_BUDGET),
                   help="maximum number of lattice vectors per enumeration")
    p.add_argument("--json-out", metavar="PATH", default=default(None))
    p.add_argument("--timings", action="store_true", default=default(False),
                   help="include wall-clock timings in the JSON")
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _global_options(suppress=True)
    parser = argparse.ArgumentParser(prog="isospec", description=__doc__.splitlines()[0],
                                     parents=[_global_options(suppress=False)])
    sub = parser.add_subparsers(dest="command", required=True)

    def triple(p):
        p.add_argument("group_file")
        p.add_argument("subgroup1")
        p.add_argument("subgroup2")
        p.add_argument("--cap", type=int, default=groups.DEFAULT_ELEMENT_CAP)

    p = sub.add_parser("gassmann-check", parents=[common], help="test a triple (G, H1, H2)")
    triple(p)
    p.set_defaults(func=cmd_gassmann_check)

    p = sub.add_parser("gassmann-search", parents=[common], help="find Gassmann-Sunada pairs in G")
    p.add_argument("group_file")
    p.add_argument("--max-index", type=int)
    p.add_argument("--cap", type=int, default=groups.DEFAULT_ELEMENT_CAP)
    p.set_defaults(func=cmd_gassmann_search)

    p = sub.add_parser("sunada-graphs", parents=[common], help="Schreier graphs of a triple")
    triple(p)
    p.add_argument("--gens", help="generator multiset file (cycle notation, one per line)")
    p.add_argument("--symmetrize", action="store_true", help="append inverses to --gens")
    p.add_argument("--random", type=int, default=0, help="number of extra seeded random multisets")
    p.add_argument("--random-size", type=int, default=2)
    p.add_argument("--intertwiner", action="store_true")
    p.add_argument("--show-matrix", action="store_true")
    p.add_argument("--show-graphs", action="store_true")
    p.set_defaults(func=cmd_sunada_graphs)

    p = sub.add_parser("theta", parents=[common], help="theta series coefficients")
    _add_lattice_options(p)
    p.add_argument("--bound", required=True)
    p.add_argument("--csv", metavar="PATH")
    p.set_defaults(func=cmd_theta)

    p = sub.add_parser("torus", parents=[common], help="flat torus spectra")
    _add_lattice_options(p)
    p.add_argument("--cutoff", required=True)
    p.add_argument("--csv", metavar="PATH")
    p.set_defaults(func=cmd_torus)

    p = sub.add_parser("commensurable", parents=[common], help="spectral commensurability and similarity")
    _add_lattice_options(p)
    p.add_argument("--cutoff", required=True)
    p.add_argument("--max-scalings", type=int, default=16)
    p.add_argument("--multiplicities", action="store_true", help="require equal multiplicities too")
    p.set_defaults(func=cmd_commensurable)

    p = sub.add_parser("kitaoka-scan", parents=[common], help="random commensurability vs similarity scan")
    p.add_argument("--dimension", type=int, default=2)
    p.add_argument("--entry-bound", type=int, default=6)
    p.add_argument("--trials", type=int, default=500)
    p.add_argument("--cutoff", default="50")
    p.add_argument("--related-fraction", type=float, default=0.25)
    p.add_argument("--inject", nargs=2, action="append", metavar=("L1", "L2"),
                   type=lambda s: s if "=" in s else f"file={s}",
                   help="extra pair, each 'builtin=NAME' or a Gram file; repeatable")
    p.set_defaults(func=cmd_kitaoka_scan)

    p = sub.add_parser("splitting-census", parents=[common], help="prime splitting types of a polynomial")
    p.add_argument("poly_file")
    p.add_argument("--bound", type=int, default=1000)
    p.add_argument("--csv", metavar="PATH")
    p.set_defaults(func=cmd_splitting_census)

    p = sub.add_parser("arith-equiv", parents=[common], help="compare splitting censuses of two polynomials")
    p.add_argument("poly_file1")
    p.add_argument("poly_file2")
    p.add_argument("--bound", type=int, default=10_000)
    p.add_argument("--dirichlet", type=int, default=0, help="also dump a_1..a_N")
    p.set_defaults(func=cmd_arith_equiv)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except BudgetExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (IsospecError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
