"""Group and automorphism files, component-table persistence, DOT export."""
from __future__ import annotations

import hashlib
import json
from pathlib import Path

import numpy as np

from . import __version__, catalog
from .acgraph import ComponentTable, MoveAlphabet, decode, neighbors
from .config import DEFAULT_EXHAUSTIVE_CHECK_BOUND, DEFAULT_MAX_ORDER, DOT_VERTEX_LIMIT
from .group import (
    Automorphism,
    FiniteGroup,
    GroupValidationError,
    OperatorSet,
    build_abelian,
    build_from_permutations,
    build_from_table,
    validate_group,
)

FORMAT = "acgraphs-components/1"


class SchemaError(ValueError):
    pass


class HashMismatch(ValueError):
    """A stored table was computed for a different group or alphabet."""


def _int_list(x, what: str) -> list[int]:
    if not isinstance(x, list) or not all(isinstance(v, int) and not isinstance(v, bool) for v in x):
        raise SchemaError(f"{what} must be a list of integers")
    return x


def group_from_spec(spec: dict, max_order: int = DEFAULT_MAX_ORDER, name: str = "",
                    exhaustive_bound: int = DEFAULT_EXHAUSTIVE_CHECK_BOUND) -> FiniteGroup:
    if not isinstance(spec, dict) or "type" not in spec:
        raise SchemaError("group spec must be an object with a 'type' field")
    kind = spec["type"]
    name = spec.get("name", name)
    if kind == "permutation":
        degree = spec.get("degree")
        if not isinstance(degree, int) or degree < 1:
            raise SchemaError("'degree' must be a positive integer")
        gens = spec.get("generators", [])
        if not isinstance(gens, list):
            raise SchemaError("'generators' must be a list of permutations")
        gens = [_int_list(g, "each generator") for g in gens]
        G = build_from_permutations(degree, gens, max_order=max_order, name=name)
    elif kind == "table":
        table = spec.get("table")
        if not isinstance(table, list) or not table:
            raise SchemaError("'table' must be a non-empty list of rows")
        rows = [_int_list(r, "each table row") for r in table]
        gens = spec.get("generators")
        if gens is not None:
            gens = _int_list(gens, "'generators'")
        G = build_from_table(rows, gens, max_order=max_order, name=name)
    elif kind == "abelian":
        G = build_abelian(_int_list(spec.get("factors"), "'factors'"), max_order=max_order, name=name)
    else:
        raise SchemaError(f"unknown group type {kind!r}")
    validate_group(G, exhaustive_bound)
    return G


def parse_group_file(path, max_order: int = DEFAULT_MAX_ORDER,
                     exhaustive_bound: int = DEFAULT_EXHAUSTIVE_CHECK_BOUND) -> FiniteGroup:
    """Load and validate a group file; a bare catalogue name such as ``A5`` is also accepted."""
    p = Path(path)
    if not p.exists():
        if str(path) in catalog.names():
            return catalog.get(str(path))
        raise FileNotFoundError(f"no group file or catalogue group named {str(path)!r}")
    try:
        spec = json.loads(p.read_text(encoding="utf-8"))
    except json.JSONDecodeError as e:
        raise SchemaError(f"{p}: invalid JSON ({e})") from None
    return group_from_spec(spec, max_order, p.stem, exhaustive_bound)


def parse_autos_file(path, G: FiniteGroup) -> OperatorSet:
    try:
        spec = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as e:
        raise SchemaError(f"{path}: invalid JSON ({e})") from None
    if not isinstance(spec, dict) or not isinstance(spec.get("autos"), list):
        raise SchemaError("automorphism file must be an object with an 'autos' list")
    autos = []
    for perm in spec["autos"]:
        perm = _int_list(perm, "each automorphism")
        if len(perm) != G.order:
            raise SchemaError(f"automorphism has length {len(perm)}, group has order {G.order}")
        autos.append(Automorphism(G, np.array(perm, dtype=np.int64)))
    return OperatorSet(G, tuple(autos))


def alphabet_key(descriptor: dict) -> str:
    return hashlib.sha256(json.dumps(descriptor, sort_keys=True).encode()).hexdigest()


def save_component_table(path, table: ComponentTable) -> None:
    header = {
        "format": FORMAT,
        "group_hash": table.group_hash,
        "n": table.n,
        "k": table.k,
        "alphabet": table.alphabet,
        "engine_version": __version__,
    }
    with open(path, "wb") as fh:
        np.savez_compressed(fh, header=np.array(json.dumps(header, sort_keys=True)),
                            codes=table.codes.astype(np.int64), ids=table.ids.astype(np.int32),
                            reps=table.reps.astype(np.int64))


def load_component_table(path, G: FiniteGroup | None = None,
                         alphabet: MoveAlphabet | None = None) -> ComponentTable:
    """Read a stored table; refuses one computed for another group or alphabet."""
    with np.load(path, allow_pickle=False) as z:
        header = json.loads(str(z["header"]))
        codes, ids, reps = z["codes"], z["ids"], z["reps"]
    if header.get("format") != FORMAT:
        raise SchemaError(f"{path}: not a component table")
    if G is not None and header["group_hash"] != G.table_hash:
        raise HashMismatch(f"{path}: table belongs to group {header['group_hash'][:12]}, "
                           f"not {G.table_hash[:12]}")
    if alphabet is not None and header["alphabet"] != alphabet.descriptor():
        raise HashMismatch(f"{path}: table was computed with a different move alphabet")
    return ComponentTable(header["n"], header["k"], codes, ids, reps, header["group_hash"], header["alphabet"])


def cache_path(cache_dir, G: FiniteGroup, k: int, alphabet: MoveAlphabet) -> Path:
    key = alphabet_key(alphabet.descriptor())[:16]
    return Path(cache_dir) / f"{G.table_hash[:16]}-k{k}-{key}.npz"


_PALETTE = ("#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
            "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf")


def dot_lines(table: ComponentTable, G: FiniteGroup, alphabet: MoveAlphabet) -> list[str]:
    if table.vertex_count > DOT_VERTEX_LIMIT:
        raise ValueError(f"{table.vertex_count} vertices exceed the DOT limit of {DOT_VERTEX_LIMIT}")
    n, k = table.n, table.k
    lines = [f'graph "AC_{k}({G.name or "G"})" {{', "  node [style=filled];"]
    for code, cid in zip(table.codes.tolist(), table.ids.tolist()):
        label = ", ".join(G.name_of(x) for x in decode(code, n, k))
        lines.append(f'  v{code} [label="({label})", fillcolor="{_PALETTE[cid % len(_PALETTE)]}", component={cid}];')
    seen = set()
    weights = n ** np.arange(k)
    for code in table.codes.tolist():
        for t in neighbors(decode(code, n, k), alphabet):
            other = int(np.dot(t, weights))
            edge = (min(code, other), max(code, other))
            if other != code and edge not in seen:
                seen.add(edge)
                lines.append(f"  v{edge[0]} -- v{edge[1]};")
    lines.append("}")
    return lines


def emit_dot(table: ComponentTable, G: FiniteGroup, path, alphabet: MoveAlphabet | None = None) -> int:
    """Write the graph; returns the number of colours used."""
    alphabet = alphabet or MoveAlphabet.for_group(G)
    if G.table_hash != table.group_hash:
        raise HashMismatch("table and group differ")
    Path(path).write_text("\n".join(dot_lines(table, G, alphabet)) + "\n", encoding="utf-8")
    return int(np.unique(table.ids).size)


__all__ = [
    "GroupValidationError", "HashMismatch", "SchemaError", "cache_path", "dot_lines", "emit_dot",
    "group_from_spec", "load_component_table", "parse_autos_file", "parse_group_file", "save_component_table",
]
