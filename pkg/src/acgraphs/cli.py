"""Command-line front end: ``acgraphs <command> ...``."""
from __future__ import annotations

import argparse
import json
import os
import sys
from math import gcd
from pathlib import Path

from . import __version__, io, verify
from .abelian import (
    NotAbelianError,
    abelian_component_id,
    dg_component_count,
    dg_representative,
    invariant_factors,
)
from .acgraph import (
    MoveAlphabet,
    NotInNk,
    SearchInconclusive,
    components,
    decode,
    equivalent,
)
from .blackbox import WalkState, sample_elements, uniformity_report
from .config import (
    DEFAULT_BURN_IN,
    DEFAULT_MAX_PLIES,
    DEFAULT_SEED,
    DEFAULT_STATE_BUDGET,
    DEFAULT_STRIDE,
    DEFAULT_STRUCTURE_CAP,
    BudgetExceeded,
)
from .group import GroupValidationError, d_normal
from .structure import HypothesisError, d_normal_formula, semisimple_decompose
from .words import evaluate, parse_word

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_BUDGET = 0, 1, 2, 3


class InputError(ValueError):
    pass


def _emit(args, payload, text: str | None = None) -> None:
    if args.json or text is None:
        print(json.dumps(payload, sort_keys=True))
    else:
        print(text)


def _load(args):
    G = io.parse_group_file(args.group)
    omega = io.parse_autos_file(args.autos, G) if getattr(args, "autos", None) else None
    return G, omega


def _alphabet(args, G, omega) -> MoveAlphabet:
    return MoveAlphabet.for_group(G, getattr(args, "conjugators", "gens"), omega)


def _table(args, G, k, alphabet):
    """Component table, read from or written to ``--cache`` when given."""
    if args.cache:
        path = io.cache_path(args.cache, G, k, alphabet)
        if path.exists():
            return io.load_component_table(path, G, alphabet)
        T = components(G, k, alphabet, args.budget)
        path.parent.mkdir(parents=True, exist_ok=True)
        io.save_component_table(path, T)
        return T
    return components(G, k, alphabet, args.budget)


def parse_tuple(text: str, G, k: int) -> tuple[int, ...]:
    """A tuple code (``17``), entries (``3,5``) or words in the generators (``x*y,y^-1``)."""
    text = text.strip()
    if text.isdigit():
        code = int(text)
        if code >= G.order**k:
            raise InputError(f"tuple code {code} out of range")
        return decode(code, G.order, k)
    parts = [p.strip() for p in text.split(",")]
    if len(parts) != k:
        raise InputError(f"expected {k} entries, got {len(parts)} in {text!r}")
    out = []
    for p in parts:
        if p.isdigit():
            x = int(p)
            if x >= G.order:
                raise InputError(f"element {x} out of range")
            out.append(x)
        else:
            out.append(evaluate(parse_word(p, len(G.generators)), G.generators, G))
    return tuple(out)


# ---------------------------------------------------------------- commands

def cmd_components(args) -> int:
    G, omega = _load(args)
    alphabet = _alphabet(args, G, omega)
    T = _table(args, G, args.k, alphabet)
    if args.dot:
        io.emit_dot(T, G, args.dot, alphabet)
    payload = {"vertex_count": T.vertex_count, "component_count": T.component_count, "reps": T.reps.tolist()}
    _emit(args, payload, f"{T.vertex_count} vertices, {T.component_count} components")
    return EXIT_OK


def cmd_dot(args) -> int:
    G, omega = _load(args)
    alphabet = _alphabet(args, G, omega)
    T = _table(args, G, args.k, alphabet)
    colors = io.emit_dot(T, G, args.output, alphabet)
    _emit(args, {"vertex_count": T.vertex_count, "colors": colors, "path": str(args.output)})
    return EXIT_OK


def cmd_equiv(args) -> int:
    G, omega = _load(args)
    alphabet = _alphabet(args, G, omega)
    U, V = parse_tuple(args.u, G, args.k), parse_tuple(args.v, G, args.k)
    T = _table(args, G, args.k, alphabet) if U != V else None
    cert = equivalent(U, V, alphabet, T, args.max_plies, args.budget)
    payload = {"equivalent": cert is not None, "certificate": cert.to_list() if cert is not None else None,
               "u": list(U), "v": list(V)}
    _emit(args, payload, f"equivalent: {cert is not None}" + (f" ({len(cert)} moves)" if cert else ""))
    return EXIT_OK


def cmd_abelian(args) -> int:
    G, _ = _load(args)
    inv = invariant_factors(G)
    T = _table(args, G, args.k, MoveAlphabet.for_group(G, "none"))
    inv._tables[args.k] = T
    matches = None
    if args.k >= 2 and args.k >= inv.d:
        matches = T.component_count == dg_component_count(inv, args.k)
        if args.k == inv.d:
            m = inv.factors[0]
            lams = [u for u in range(1, m) if gcd(u, m) == 1] or [1]
            seen = {abelian_component_id(inv, dg_representative(inv, lam)) for lam in lams}
            matches = matches and len(seen) == T.component_count
    payload = {"count": T.component_count, "representatives": T.reps.tolist(),
               "matches_formula": matches, "invariants": inv.factors}
    _emit(args, payload, f"{T.component_count} components; formula match: {matches}")
    return EXIT_OK


def cmd_structure(args) -> int:
    G, omega = _load(args)
    dec = semisimple_decompose(G, omega, args.structure_cap)
    try:
        formula = d_normal_formula(G, omega, args.structure_cap)
        applicable = True
    except HypothesisError:
        formula, applicable = None, False
    d = d_normal(G, omega)
    payload = {"W_order": len(dec.W), "quotient_order": dec.quotient.order,
               "factors": [len(F) for F in dec.factors], "d_normal": d, "d_formula_applicable": applicable}
    if applicable:
        payload["d_formula"] = formula
    _emit(args, payload, f"|W| = {len(dec.W)}, factors {payload['factors']}, d_normal = {d}")
    return EXIT_OK


def cmd_sample(args) -> int:
    if args.seed is None:
        if os.environ.get("CI"):
            raise InputError("sample needs an explicit --seed in CI mode")
        args.seed = DEFAULT_SEED
    G, omega = _load(args)
    alphabet = _alphabet(args, G, omega)
    start = parse_tuple(args.start, G, args.k) if args.start else _default_start(G, args.k)
    state = WalkState.start(start, alphabet, args.seed)
    out = sample_elements(state, args.burn_in, args.count, args.stride)
    sys.stdout.write("".join(f"{int(x)}\n" for x in out))
    report = uniformity_report(out, G).to_dict()
    report.update({"seed": args.seed, "start": list(start), "burn_in": args.burn_in, "stride": args.stride})
    text = json.dumps(report, sort_keys=True)
    if args.report:
        Path(args.report).write_text(text + "\n", encoding="utf-8")
    else:
        print(text, file=sys.stderr)
    return EXIT_OK


def _default_start(G, k: int) -> tuple[int, ...]:
    gens = list(G.generators) or [0]
    if len(gens) > k:
        raise InputError(f"{len(gens)} generators do not fit in a {k}-tuple; pass --start")
    return tuple(gens + [0] * (k - len(gens)))


def cmd_ak(args) -> int:
    G, _ = _load(args)
    x = args.x if args.x is not None else G.generators[0]
    y = args.y if args.y is not None else G.generators[1]
    r = verify.ak_test(G, x, y, args.n, args.max_plies)
    _emit(args, r.to_dict(), f"{r.claim} n={args.n}: {r.outcome}")
    return EXIT_OK if r.passed else EXIT_FAIL


def cmd_verify(args) -> int:
    what = args.what
    if what == "all":
        reports = verify.verify_all(args.threads)
    elif what == "rel-conjecture":
        if not args.search:
            raise InputError("rel-conjecture takes --search; it reports findings, not verdicts")
        if args.group:
            G, omega = _load(args)
            reports = [verify.rel_conjecture_search(G, omega, args.conjugators, args.budget)]
        else:
            reports = [verify.rel_conjecture_search(G, om, args.conjugators, args.budget)
                       for _, G, om in verify.rel_search_cases()]
    else:
        if not args.group:
            raise InputError(f"verify {what} needs a group")
        G, omega = _load(args)
        k = args.k
        if what == "lifting":
            r = verify.verify_lifting(G, k or 2, args.conjugators, args.budget)
        elif what == "abelian":
            r = verify.verify_abelian_formula(G, k or max(invariant_factors(G).d, 2), args.budget)
        elif what == "perfect":
            r = verify.verify_perfect(G, omega, k or 2, args.conjugators, args.budget)
        elif what == "kplus1":
            r = verify.verify_k_plus_one(G, omega, k or d_normal(G, omega) + 1, args.conjugators, args.budget)
        elif what == "ak":
            r = verify.ak_test(G, G.generators[0], G.generators[1], args.n, args.max_plies)
        elif what == "free-image":
            r = verify.verify_free_image_connected(G, k or 2, args.budget)
        else:
            r = verify.verify_pullback_normal_generation(G, k or 2, args.budget)
        reports = [r]
    payload = [r.to_dict() for r in reports]
    if args.json:
        print(json.dumps(payload, sort_keys=True))
    else:
        for r in reports:
            print(f"{r.outcome:8s} {r.claim:24s} {r.group['name']:12s} k={r.k}  {r.runtime:.2f}s")
    return EXIT_OK if all(r.passed for r in reports) else EXIT_FAIL


# ---------------------------------------------------------------- parser

def _common() -> argparse.ArgumentParser:
    # defaults are SUPPRESSed so flags may appear before or after the subcommand
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--budget", type=int, default=argparse.SUPPRESS, help="maximum number of tuple codes")
    p.add_argument("--seed", type=int, default=argparse.SUPPRESS)
    p.add_argument("--threads", type=int, default=argparse.SUPPRESS)
    p.add_argument("--json", action="store_true", default=argparse.SUPPRESS)
    p.add_argument("--cache", metavar="DIR", default=argparse.SUPPRESS, help="component table cache directory")
    p.add_argument("--structure-cap", type=int, default=argparse.SUPPRESS)
    return p


def build_parser() -> argparse.ArgumentParser:
    # the top level gets its own copy: set_defaults would otherwise leak into the shared actions
    common = _common()
    parser = argparse.ArgumentParser(prog="acgraphs", parents=[_common()],
                                     description="Andrews-Curtis graphs of finite groups.")
    parser.set_defaults(budget=DEFAULT_STATE_BUDGET, seed=None, threads=1, json=False, cache=None,
                        structure_cap=DEFAULT_STRUCTURE_CAP)
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, fn, help_):
        p = sub.add_parser(name, parents=[common], help=help_)
        p.set_defaults(func=fn)
        return p

    def group_args(p, k=True, autos=True, conj=True):
        p.add_argument("group", help="group JSON file or catalogue name")
        if k:
            p.add_argument("-k", type=int, required=True)
        if autos:
            p.add_argument("--autos", help="automorphism JSON file")
        if conj:
            p.add_argument("--conjugators", choices=("gens", "all"), default="gens")

    p = add("components", cmd_components, "count components of the AC-graph")
    group_args(p)
    p.add_argument("--dot", metavar="FILE")

    p = add("dot", cmd_dot, "write the AC-graph in DOT format")
    group_args(p)
    p.add_argument("-o", "--output", required=True)

    p = add("equiv", cmd_equiv, "decide AC-equivalence of two tuples with a certificate")
    group_args(p)
    p.add_argument("--u", required=True)
    p.add_argument("--v", required=True)
    p.add_argument("--max-plies", type=int, default=DEFAULT_MAX_PLIES)

    p = add("abelian-components", cmd_abelian, "components of an abelian group against the formula")
    group_args(p, autos=False, conj=False)

    p = add("structure", cmd_structure, "N-Frattini subgroup and semisimple decomposition")
    group_args(p, k=False, conj=False)

    p = add("sample", cmd_sample, "product replacement sampler")
    group_args(p)
    p.add_argument("--burn-in", type=int, default=DEFAULT_BURN_IN)
    p.add_argument("--count", type=int, default=1000)
    p.add_argument("--stride", type=int, default=DEFAULT_STRIDE)
    p.add_argument("--start", help="starting tuple (defaults to the generators padded with identities)")
    p.add_argument("--report", help="write the uniformity report here instead of stderr")

    p = add("ak", cmd_ak, "Akbulut-Kirby pair in a finite group")
    group_args(p, k=False, autos=False, conj=False)
    p.add_argument("-n", type=int, required=True)
    p.add_argument("--x", type=int)
    p.add_argument("--y", type=int)
    p.add_argument("--max-plies", type=int, default=DEFAULT_MAX_PLIES)

    p = add("verify", cmd_verify, "run structural checks")
    p.add_argument("what", choices=("all", "lifting", "abelian", "perfect", "kplus1", "ak", "free-image",
                                    "pullback", "rel-conjecture"))
    p.add_argument("group", nargs="?")
    p.add_argument("-k", type=int)
    p.add_argument("-n", type=int, default=2)
    p.add_argument("--autos")
    p.add_argument("--conjugators", choices=("gens", "all"), default="gens")
    p.add_argument("--max-plies", type=int, default=DEFAULT_MAX_PLIES)
    p.add_argument("--search", action="store_true")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_INPUT if e.code not in (0, None) else EXIT_OK
    try:
        return args.func(args)
    except (BudgetExceeded, SearchInconclusive) as e:
        print(f"budget exceeded: {e}", file=sys.stderr)
        return EXIT_BUDGET
    except GroupValidationError as e:
        msg = f"invalid group: {e}"
        if e.triple is not None:
            msg += f" (triple {list(e.triple)})"
        print(msg, file=sys.stderr)
        return EXIT_INPUT
    except (InputError, NotInNk, NotAbelianError, HypothesisError, io.SchemaError,
            io.HashMismatch, FileNotFoundError, KeyError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
