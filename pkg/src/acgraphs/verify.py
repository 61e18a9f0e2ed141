"""Reproducible checks of AC-graph structure claims on concrete finite groups."""
from __future__ import annotations

import time
from math import gcd
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Any, Sequence

import numpy as np

from . import __version__, catalog
from ._pykernels import decode as decode_codes
from .abelian import dg_component_count, dg_representative, invariant_factors
from .acgraph import (
    ComponentTable,
    MoveAlphabet,
    components,
    decode,
    equivalent,
    is_n_generating,
)
from .config import DEFAULT_MAX_PLIES, DEFAULT_STATE_BUDGET
from .group import (
    Automorphism,
    FiniteGroup,
    OperatorSet,
    _closure_mask,
    _operator,
    abelianization,
    build_abelian,
    commutator_subgroup,
    d_normal,
    induced_operator,
)
from .structure import HypothesisError
from .words import abelianized_vector, akbulut_kirby, evaluate


@dataclass
class VerificationReport:
    claim: str
    group: dict
    k: int | None
    outcome: str                     # pass | fail | vacuous | finding
    evidence: dict = field(default_factory=dict)
    counterexample: list | None = None
    alphabet: dict | None = None
    runtime: float = 0.0
    engine_version: str = __version__

    @property
    def passed(self) -> bool:
        return self.outcome in ("pass", "vacuous", "finding")

    def to_dict(self, include_runtime: bool = True) -> dict:
        d = asdict(self)
        if not include_runtime:
            d.pop("runtime")
        return d


def _describe(G: FiniteGroup, omega: OperatorSet | None = None) -> dict:
    d = {"name": G.name, "order": G.order, "hash": G.table_hash}
    if omega is not None and not omega.is_trivial:
        d["autos"] = omega.descriptor()
    return d


def _report(claim, G, k, ok, evidence, start, alphabet=None, counterexample=None, omega=None):
    return VerificationReport(
        claim=claim,
        group=_describe(G, omega),
        k=k,
        outcome="pass" if ok else "fail",
        evidence=evidence,
        counterexample=counterexample,
        alphabet=alphabet.descriptor() if alphabet is not None else None,
        runtime=round(time.perf_counter() - start, 4),
    )


def _is_perfect(G: FiniteGroup) -> bool:
    return len(commutator_subgroup(G)) == G.order


def _partition_mismatch(codes, left, right, n, k):
    """Two tuples separating the partitions ``left`` and ``right`` of ``codes``, or None."""
    for a, b in ((left, right), (right, left)):
        order = np.lexsort((b, a))
        sa, sb = a[order], b[order]
        bad = np.flatnonzero((sa[1:] == sa[:-1]) & (sb[1:] != sb[:-1]))
        if bad.size:
            i = bad[0]
            return [list(decode(int(codes[order[i]]), n, k)), list(decode(int(codes[order[i + 1]]), n, k))]
    return None


def compare_with_quotient(T: ComponentTable, TA: ComponentTable, phi_map: np.ndarray):
    """Project every vertex of T through ``phi_map`` and compare the two partitions."""
    n, k = T.n, T.k
    E = decode_codes(T.codes, n, k)
    weights = TA.n ** np.arange(k, dtype=np.int64)
    acodes = phi_map[E].astype(np.int64) @ weights
    idx = np.searchsorted(TA.codes, acodes)
    idx = np.minimum(idx, max(TA.codes.size - 1, 0))
    inside = TA.codes[idx] == acodes if TA.codes.size else np.zeros(acodes.size, dtype=bool)
    if not inside.all():
        bad = int(np.flatnonzero(~inside)[0])
        return {"image_in_nk": False}, [list(decode(int(T.codes[bad]), n, k))]
    alabels = TA.ids[idx]
    cex = _partition_mismatch(T.codes, T.ids.astype(np.int64), alabels.astype(np.int64), n, k)
    evidence = {
        "image_in_nk": True,
        "vertices": T.vertex_count,
        "components": T.component_count,
        "quotient_vertices": TA.vertex_count,
        "quotient_components": TA.component_count,
        "quotient_components_hit": int(np.unique(alabels).size),
        "reps": T.reps.tolist()[:16],
    }
    return evidence, cex


def verify_lifting(G: FiniteGroup, k: int, policy: str = "gens", budget: int = DEFAULT_STATE_BUDGET,
                   backend: str | None = None) -> VerificationReport:
    """Components of the AC-graph are the preimages of those of the abelianisation."""
    start = time.perf_counter()
    d = d_normal(G)
    if k < max(d, 2):
        raise HypothesisError(f"k={k} is below max(d_G(G)={d}, 2)")
    alphabet = MoveAlphabet.for_group(G, policy)
    T = components(G, k, alphabet, budget, backend)
    A, phi = abelianization(G)
    inv = invariant_factors(A)
    TA = components(A, k, MoveAlphabet.for_group(A, "none"), budget, backend)
    evidence, cex = compare_with_quotient(T, TA, phi.map)
    evidence["abelian_invariants"] = inv.factors
    evidence["d_normal"] = d
    if k >= inv.d:
        evidence["formula_components"] = dg_component_count(inv, k)
    ok = cex is None and evidence.get("image_in_nk", False) \
        and evidence.get("formula_components", TA.component_count) == TA.component_count
    return _report("lifting-from-abelianization", G, k, ok, evidence, start, alphabet, cex)


def verify_abelian_formula(A: FiniteGroup, k: int, budget: int = DEFAULT_STATE_BUDGET,
                 backend: str | None = None) -> VerificationReport:
    """Component count of an abelian AC-graph against the invariant-factor formula."""
    start = time.perf_counter()
    inv = invariant_factors(A)
    alphabet = MoveAlphabet.for_group(A, "none")
    T = components(A, k, alphabet, budget, backend)
    expected = dg_component_count(inv, k)
    evidence = {"invariants": inv.factors, "vertices": T.vertex_count,
                "components": T.component_count, "formula": expected}
    ok = T.component_count == expected
    if k == inv.d and inv.d >= 1:
        m = inv.factors[0]
        transversal = sorted({min(u, m - u) for u in range(1, m) if gcd(u, m) == 1})
        hit = [T.label_of(dg_representative(inv, lam)) for lam in transversal]
        evidence["representative_labels"] = hit
        ok = ok and sorted(hit) == list(range(T.component_count))
    return _report("abelian-component-formula", A, k, ok, evidence, start, alphabet)


def verify_perfect(G: FiniteGroup, omega: OperatorSet | None, k: int, policy: str = "gens",
                   budget: int = DEFAULT_STATE_BUDGET, backend: str | None = None) -> VerificationReport:
    start = time.perf_counter()
    if not _is_perfect(G):
        raise HypothesisError("group is not perfect")
    if k < 2:
        raise HypothesisError("k must be >= 2")
    alphabet = MoveAlphabet.for_group(G, policy, omega)
    T = components(G, k, alphabet, budget, backend)
    cex = None
    if T.component_count != 1:
        cex = [list(decode(int(c), G.order, k)) for c in T.reps[:2]]
    return _report("perfect-connected", G, k, T.component_count == 1,
                   {"vertices": T.vertex_count, "components": T.component_count},
                   start, alphabet, cex, omega)


def verify_k_plus_one(G: FiniteGroup, omega: OperatorSet | None, k: int, policy: str = "gens",
                      budget: int = DEFAULT_STATE_BUDGET, backend: str | None = None) -> VerificationReport:
    start = time.perf_counter()
    d = d_normal(G, omega)
    if k < d + 1:
        raise HypothesisError(f"k={k} is below d+1={d + 1}")
    alphabet = MoveAlphabet.for_group(G, policy, omega)
    T = components(G, k, alphabet, budget, backend)
    cex = None
    if T.component_count != 1:
        cex = [list(decode(int(c), G.order, k)) for c in T.reps[:2]]
    return _report("connected-above-normal-rank", G, k, T.component_count == 1,
                   {"d_normal": d, "vertices": T.vertex_count, "components": T.component_count},
                   start, alphabet, cex, omega)


def ak_test(G: FiniteGroup, x_img: int, y_img: int, n: int, max_plies: int = DEFAULT_MAX_PLIES,
            table: ComponentTable | None = None) -> VerificationReport:
    """Images of the Akbulut-Kirby pair and of the free basis share a component of the 2-tuple graph."""
    start = time.perf_counter()
    V = (int(x_img), int(y_img))
    if not is_n_generating(V, G):
        raise HypothesisError("(x, y) images do not normally generate the group")
    u, v = akbulut_kirby(n)
    U = (evaluate(u, V, G), evaluate(v, V, G))
    alphabet = MoveAlphabet.for_group(G)
    T = table or components(G, 2, alphabet)
    same = T.label_of(U) == T.label_of(V)
    cert = equivalent(U, V, alphabet, T, max_plies) if same else None
    det = int(round(np.linalg.det(np.array([abelianized_vector(u), abelianized_vector(v)]))))
    evidence = {
        "n": n,
        "u_v_images": list(U),
        "x_y_images": list(V),
        "same_component": same,
        "certificate_length": len(cert) if cert is not None else None,
        "certificate": cert.to_list() if cert is not None else None,
        "abelianized_determinant": det,
    }
    ok = same and cert is not None and len(cert) <= max_plies and cert.replay(alphabet) == V and det == -1
    return _report("ak-finite-shadow", G, 2, ok, evidence, start, alphabet, None if ok else [list(U), list(V)])


def _generating_mask(G: FiniteGroup, T: ComponentTable) -> np.ndarray:
    memo: dict[frozenset, bool] = {}
    out = np.zeros(T.vertex_count, dtype=bool)
    for i, c in enumerate(T.codes.tolist()):
        key = frozenset(decode(c, G.order, T.k))
        if key not in memo:
            memo[key] = bool(_closure_mask(G, key).all())
        out[i] = memo[key]
    return out


def verify_free_image_connected(G: FiniteGroup, k: int, budget: int = DEFAULT_STATE_BUDGET) -> VerificationReport:
    """Tuples that generate G as a group (images of free bases) lie in a single component."""
    start = time.perf_counter()
    if k < 2:
        raise HypothesisError("k must be >= 2")
    alphabet = MoveAlphabet.for_group(G)
    T = components(G, k, alphabet, budget)
    gen = _generating_mask(G, T)
    ids = np.unique(T.ids[gen])
    evidence = {"generating_tuples": int(gen.sum()), "components_touched": int(ids.size),
                "components": T.component_count}
    if not gen.any():
        r = _report("free-basis-images-connected", G, k, True, evidence, start, alphabet)
        r.outcome = "vacuous"
        return r
    cex = None
    if ids.size > 1:
        a = T.codes[gen & (T.ids == ids[0])][0]
        b = T.codes[gen & (T.ids == ids[1])][0]
        cex = [list(decode(int(a), G.order, k)), list(decode(int(b), G.order, k))]
    return _report("free-basis-images-connected", G, k, ids.size == 1, evidence, start, alphabet, cex)


def verify_pullback_normal_generation(G: FiniteGroup, k: int,
                                      budget: int = DEFAULT_STATE_BUDGET) -> VerificationReport:
    """Every component of N_k of a perfect group contains a tuple generating G as a group."""
    start = time.perf_counter()
    if not _is_perfect(G):
        raise HypothesisError("group is not perfect")
    alphabet = MoveAlphabet.for_group(G)
    if G.order == 1:
        r = _report("pullback-normal-generation", G, k, True, {"vertices": 1}, start, alphabet)
        r.outcome = "vacuous"
        return r
    T = components(G, k, alphabet, budget)
    gen = _generating_mask(G, T)
    missing = sorted(set(range(T.component_count)) - set(np.unique(T.ids[gen]).tolist()))
    evidence = {"vertices": T.vertex_count, "components": T.component_count,
                "generating_tuples": int(gen.sum()), "components_without_generating_tuple": missing}
    cex = [list(decode(int(T.reps[missing[0]]), G.order, k))] if missing else None
    return _report("pullback-normal-generation", G, k, not missing, evidence, start, alphabet, cex)


def rel_conjecture_search(G: FiniteGroup, omega: OperatorSet | None = None, policy: str = "gens",
                          budget: int = DEFAULT_STATE_BUDGET) -> VerificationReport:
    """Compare the relativised graph at k = d with the pullback from the abelianisation.

    Reports a finding either way; this is a search, not a check.
    """
    start = time.perf_counter()
    omega = _operator(G, omega)
    d = d_normal(G, omega)
    evidence: dict[str, Any] = {"d_normal": d}
    if d < 2:
        evidence["skipped"] = "d < 2"
        r = _report("rel-conjecture-search", G, d, True, evidence, start, omega=omega)
        r.outcome = "finding"
        return r
    alphabet = MoveAlphabet.for_group(G, policy, omega)
    T = components(G, d, alphabet, budget)
    A, phi = abelianization(G)
    aomega = induced_operator(omega, phi)
    TA = components(A, d, MoveAlphabet.for_group(A, policy, aomega), budget)
    ev, cex = compare_with_quotient(T, TA, phi.map)
    evidence.update(ev)
    evidence["consistent"] = cex is None and ev.get("image_in_nk", False)
    r = _report("rel-conjecture-search", G, d, True, evidence, start, alphabet, cex, omega)
    r.outcome = "finding"
    return r


def _scalar_automorphism(G: FiniteGroup, s: int) -> Automorphism:
    return Automorphism(G, np.array([G.power(x, s) for x in range(G.order)]))


def rel_search_cases() -> list[tuple[str, FiniteGroup, OperatorSet]]:
    """Small operator groups with d >= 2 for the relativised search."""
    cases = []
    for factors, s in (([3, 3], 2), ([5, 5], 2), ([5, 5], 4), ([7, 7], 3), ([2, 4], 3)):
        A = build_abelian(factors)
        cases.append((f"{A.name} with x->x^{s}", A, OperatorSet(A, (_scalar_automorphism(A, s),))))
    for name in ("D4", "Q8"):
        G = catalog.get(name)
        cases.append((name, G, G.trivial_operator))
    return cases


# ---------------------------------------------------------------- matrix

def matrix_jobs(lift_k3_limit: int = 2_000_000) -> list[tuple]:
    jobs: list[tuple] = []
    for name in catalog.MATRIX:
        G = catalog.get(name)
        if G.is_abelian:
            d = invariant_factors(G).d
            for k in sorted({max(d, 2), d + 1}):
                if k <= 3:
                    jobs.append(("abelian", name, k))
        else:
            jobs.append(("lifting", name, 2))
            if G.order**3 <= lift_k3_limit:
                jobs.append(("lifting", name, 3))
        jobs.append(("kplus1", name, d_normal(G) + 1))
    for name in catalog.MULTI_COMPONENT:
        jobs.append(("lifting", name, 2))
    jobs += [("perfect", "A5", 2), ("perfect", "SL(2,5)", 2), ("perfect-outer", "A5", 2), ("perfect", "A5", 3)]
    for name in ("S3", "A5"):
        for n in (2, 3, 4):
            jobs.append(("ak", name, n))
    for name in ("Z4", "S3", "A4", "A5"):
        jobs.append(("free-image", name, 2))
    jobs += [("pullback", "A5", 2), ("pullback", "SL(2,5)", 2)]
    return jobs


def run_job(job: tuple) -> VerificationReport:
    kind, name, k = job
    G = catalog.get(name)
    if kind == "abelian":
        return verify_abelian_formula(G, k)
    if kind == "lifting":
        return verify_lifting(G, k)
    if kind == "kplus1":
        return verify_k_plus_one(G, None, k)
    if kind == "perfect":
        return verify_perfect(G, None, k)
    if kind == "perfect-outer":
        return verify_perfect(G, catalog.a5_with_outer(), k)
    if kind == "ak":
        x, y = G.generators[0], G.generators[1]
        return ak_test(G, x, y, k)
    if kind == "free-image":
        return verify_free_image_connected(G, k)
    if kind == "pullback":
        return verify_pullback_normal_generation(G, k)
    raise ValueError(f"unknown job {kind!r}")


def verify_all(threads: int = 1, jobs: Sequence[tuple] | None = None) -> list[VerificationReport]:
    jobs = list(jobs) if jobs is not None else matrix_jobs()
    if threads <= 1:
        return [run_job(j) for j in jobs]
    with ProcessPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(run_job, jobs))
