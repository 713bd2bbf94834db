"""Exhaustive desk-scale enumeration and the worked-example reproduction.

Monobricks are enumerated as cliques of the pairwise-compatibility graph on
bricks (the monobrick condition is a condition on ordered pairs).  Left
Schur / wide / torsion-free subcategories come through two independent
routes that must agree: the bijective route maps each monobrick through
filt_closure, and the oracle route filters every id subset by the direct
predicate.  A disagreement is a hard error carrying the instance.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

import numpy as np

from .algebras import (
    Algebra,
    Bimodule,
    IdempotentSpec,
    Quiver,
    algebra_from_quiver,
    canonical_bimodule_for_triangular,
    find_algebra_isomorphism,
    linear_quiver,
    point_algebra,
    triangular_matrix_algebra,
    validate_bimodule,
)
from .errors import (
    BudgetExceeded,
    InputError,
    SchurrecError,
    UniverseExhausted,
    VerificationFailure,
)
from .modules import IndecUniverse, Thresholds, is_brick
from .recollements import (
    build_recollement,
    glue_left_schur,
    glue_monobrick,
    restrict,
    verify_theorem,
)
from .subcats import (
    BrickSet,
    Subcategory,
    brick_set,
    filt_closure,
    hom_profile,
    is_cofinally_closed,
    is_left_schur,
    is_semibrick,
    is_torsion_free,
    is_wide,
    summand_audit,
)


@dataclass
class CensusEntry:
    ids: tuple[int, ...]
    flags: dict = field(default_factory=dict)


@dataclass
class EnumerationResult:
    kind: str
    entries: list[CensusEntry]
    counts: dict
    oracle_ran: bool = True
    non_representable: list[tuple[int, ...]] = field(default_factory=list)

    def id_sets(self) -> list[tuple[int, ...]]:
        return [e.ids for e in self.entries]


def all_bricks(u: IndecUniverse, thresholds: Thresholds | None = None) -> BrickSet:
    thresholds = thresholds or u.thresholds
    ids = [i for i in u.ids if is_brick(u.module(i), thresholds)]
    return BrickSet(u, tuple(ids))


def all_monobricks(u: IndecUniverse, thresholds: Thresholds | None = None,
                   max_bricks: int = 20) -> EnumerationResult:
    """Every brick subset in which all maps between members are zero or mono."""
    thresholds = thresholds or u.thresholds
    bricks = list(all_bricks(u, thresholds).ids)
    if len(bricks) > max_bricks:
        raise BudgetExceeded("too many bricks for subset enumeration",
                             needed=len(bricks), limit=max_bricks)
    ok: dict[tuple[int, int], bool] = {}
    for i in bricks:
        for j in bricks:
            if i == j:
                continue
            ok[(i, j)] = not hom_profile(u, i, j, thresholds).exists_nonzero_noninjective

    cliques: list[tuple[int, ...]] = []

    def grow(start: int, current: tuple[int, ...]) -> None:
        cliques.append(current)
        for k in range(start, len(bricks)):
            cand = bricks[k]
            if all(ok[(cand, m)] and ok[(m, cand)] for m in current):
                grow(k + 1, current + (cand,))

    grow(0, ())
    ambient = BrickSet(u, tuple(bricks))
    entries = []
    for ids in sorted(cliques, key=lambda t: (len(t), t)):
        s = BrickSet(u, ids)
        entries.append(CensusEntry(s.ids, {
            "semibrick": is_semibrick(s, thresholds),
            "cofinally_closed": is_cofinally_closed(s, ambient, thresholds),
        }))
    counts = {
        "bricks": len(bricks),
        "monobricks": len(entries),
        "semibricks": sum(1 for e in entries if e.flags["semibrick"]),
        "cc_monobricks": sum(1 for e in entries if e.flags["cofinally_closed"]),
    }
    return EnumerationResult("monobricks", entries, counts)


def _oracle_subsets(u: IndecUniverse, thresholds: Thresholds):
    n = len(u)
    if 2 ** n > thresholds.subset_cap:
        return None
    out = []
    for bits in range(2 ** n):
        out.append(tuple(i for i in range(n) if bits >> i & 1))
    return out


def all_left_schur(u: IndecUniverse, thresholds: Thresholds | None = None) -> EnumerationResult:
    """Left Schur subcategories via the bijective route, oracle cross-checked.

    A monobrick whose Filt is not closed under direct summands (the audit
    reports a member without a generator filtration) corresponds to a left
    Schur subcategory that an id set cannot represent; such monobricks are
    listed in non_representable rather than silently merged.  Semibricks and
    cofinally closed monobricks can never land there: wide subcategories are
    closed under kernels of idempotents and torsion-free classes under
    submodules, so both are always summand-closed.
    """
    thresholds = thresholds or u.thresholds
    mono = all_monobricks(u, thresholds)
    closures: dict[tuple[int, ...], tuple[int, ...]] = {}
    non_representable: list[tuple[int, ...]] = []
    for entry in mono.entries:
        c = filt_closure(u, entry.ids, thresholds)
        if not summand_audit(u, c, entry.ids, thresholds)["ok"]:
            if entry.flags["semibrick"] or entry.flags["cofinally_closed"]:
                raise VerificationFailure(
                    f"summand-closure failed for the {'semibrick' if entry.flags['semibrick'] else 'cc monobrick'} "
                    f"{list(entry.ids)}, but wide/torsion-free classes are always "
                    "summand-closed; this flags a bug"
                )
            non_representable.append(entry.ids)
            continue
        if c.ids in closures:
            raise VerificationFailure(
                f"distinct monobricks {list(closures[c.ids])} and {list(entry.ids)} "
                f"close to the same subcategory {list(c.ids)}"
            )
        closures[c.ids] = entry.ids
    route_bijection = sorted(closures.keys(), key=lambda t: (len(t), t))

    subsets = _oracle_subsets(u, thresholds)
    oracle_ran = subsets is not None
    if oracle_ran:
        route_oracle = sorted(
            (ids for ids in subsets if is_left_schur(u, Subcategory(u, ids), thresholds)),
            key=lambda t: (len(t), t),
        )
        if route_oracle != route_bijection:
            only_b = [list(t) for t in route_bijection if t not in route_oracle]
            only_o = [list(t) for t in route_oracle if t not in route_bijection]
            raise VerificationFailure(
                "left Schur routes disagree: bijection-only "
                f"{only_b}, oracle-only {only_o}"
            )
    entries = []
    for ids in route_bijection:
        e = Subcategory(u, ids)
        entries.append(CensusEntry(ids, {
            "wide": is_wide(u, e, thresholds),
            "torsion_free": is_torsion_free(u, e, thresholds),
            "monobrick": closures[ids],
        }))
    counts = {
        "left_schur": len(entries),
        "wide": sum(1 for e in entries if e.flags["wide"]),
        "torsion_free": sum(1 for e in entries if e.flags["torsion_free"]),
        "non_representable_monobricks": len(non_representable),
    }
    return EnumerationResult("left_schur", entries, counts, oracle_ran, non_representable)


def _filtered_census(u: IndecUniverse, flag: str, kind: str, pred,
                     thresholds: Thresholds | None = None) -> EnumerationResult:
    thresholds = thresholds or u.thresholds
    schur = all_left_schur(u, thresholds)
    entries = [e for e in schur.entries if e.flags[flag]]
    subsets = _oracle_subsets(u, thresholds)
    oracle_ran = subsets is not None
    if oracle_ran:
        direct = sorted(
            (ids for ids in subsets if pred(u, Subcategory(u, ids), thresholds)),
            key=lambda t: (len(t), t),
        )
        if direct != [e.ids for e in entries]:
            raise VerificationFailure(f"{kind} routes disagree")
    return EnumerationResult(kind, entries, {kind: len(entries)}, oracle_ran)


def all_wide(u: IndecUniverse, thresholds: Thresholds | None = None) -> EnumerationResult:
    return _filtered_census(u, "wide", "wide", is_wide, thresholds)


def all_torf(u: IndecUniverse, thresholds: Thresholds | None = None) -> EnumerationResult:
    return _filtered_census(u, "torsion_free", "torf", is_torsion_free, thresholds)


# ---------------------------------------------------------------------------
# the worked three-term example: B = kA2, C = k, A = kA3


def example_algebras(p: int):
    """(B, C, A, canonical bimodule) of the linear three-vertex example."""
    b = algebra_from_quiver(linear_quiver(["2", "3"]), None, p)
    c = point_algebra(p, "1")
    a = algebra_from_quiver(linear_quiver(["1", "2", "3"]), None, p)
    bim = canonical_bimodule_for_triangular(b, c, {"1": "2"}, p)
    return b, c, a, bim


def reproduce_table1(p: int = 2, bound: int = 3,
                     thresholds: Thresholds | None = None) -> dict:
    """Glue every (monobrick of mod B) x (monobrick of mod C) pair and classify.

    Builds A both from its quiver and as the triangular matrix algebra (the
    two must be isomorphic), glues through the recollement at the corner
    vertex, and checks the full classification of the resulting left Schur
    subcategories of mod A.
    """
    from .modules import DEFAULT_THRESHOLDS

    thresholds = thresholds or DEFAULT_THRESHOLDS
    b, c, a, bim = example_algebras(p)
    a_tri, tri_data = triangular_matrix_algebra(b, c, bim)
    iso = find_algebra_isomorphism(a_tri, a)
    report: dict = {
        "char": p,
        "bound": bound,
        "triangular_matches_quiver": iso is not None,
        "rows": [],
        "ok": True,
        "failures": [],
    }

    def check(name: str, cond: bool, payload=None):
        if not cond:
            report["ok"] = False
            report["failures"].append({"check": name, "payload": payload})

    check("triangular_matches_quiver", iso is not None)
    e = IdempotentSpec(a, (0,))  # vertex "1", the corner the C-side lives at
    r = build_recollement(a, e, bound=bound, thresholds=thresholds)
    exact, cert = r.is_i_shriek_exact()
    check("i_shriek_exact", exact, cert.as_dict())

    mono_b = all_monobricks(r.u_b, thresholds)
    mono_c = all_monobricks(r.u_c, thresholds)
    check("six_monobricks_in_mod_B", len(mono_b.entries) == 6,
          {"found": len(mono_b.entries)})
    check("two_monobricks_in_mod_C", len(mono_c.entries) == 2,
          {"found": len(mono_c.entries)})

    seen = set()
    for eb in mono_b.entries:
        m_y = brick_set(r.u_b, eb.ids, validate=False)
        filt_y = filt_closure(r.u_b, eb.ids, thresholds)
        for ec in mono_c.entries:
            m_z = brick_set(r.u_c, ec.ids, validate=False)
            filt_z = filt_closure(r.u_c, ec.ids, thresholds)
            glued = glue_monobrick(r, m_y, m_z, variant="general")
            closure = filt_closure(r.u_a, glued.ids, thresholds)
            comprehension = glue_left_schur(r, filt_y, filt_z)
            schur = is_left_schur(r.u_a, closure, thresholds)
            row = {
                "b_monobrick": list(eb.ids),
                "c_monobrick": list(ec.ids),
                "glued_monobrick": list(glued.ids),
                "subcategory": list(closure.ids),
                "left_schur": schur,
                "wide": is_wide(r.u_a, closure, thresholds),
                "torsion_free": is_torsion_free(r.u_a, closure, thresholds),
                "b_semibrick": eb.flags["semibrick"],
                "b_cofinally_closed": eb.flags["cofinally_closed"],
                "c_semibrick": ec.flags["semibrick"],
                "c_cofinally_closed": ec.flags["cofinally_closed"],
            }
            report["rows"].append(row)
            check("row_is_left_schur", schur, row)
            check("row_matches_comprehension", closure.ids == comprehension.ids, row)
            check("row_distinct", closure.ids not in seen, row)
            seen.add(closure.ids)
            back_y, back_z = restrict(r, closure)
            check("row_restricts_back",
                  back_y.ids == filt_y.ids and back_z.ids == filt_z.ids, row)

    check("twelve_rows", len(report["rows"]) == 12, {"found": len(report["rows"])})
    not_torf = [row for row in report["rows"] if not row["torsion_free"]]
    not_wide = [row for row in report["rows"] if not row["wide"]]
    check("two_rows_not_torsion_free", len(not_torf) == 2, {"found": len(not_torf)})
    check("two_rows_not_wide", len(not_wide) == 2, {"found": len(not_wide)})
    check("not_torf_rows_are_non_cc_B_side",
          all(not row["b_cofinally_closed"] for row in not_torf)
          and all(row["torsion_free"] or not row["b_cofinally_closed"]
                  for row in report["rows"]))
    check("not_wide_rows_are_non_semibrick_B_side",
          all(not row["b_semibrick"] for row in not_wide)
          and all(row["wide"] or not row["b_semibrick"] for row in report["rows"]))
    report["universe"] = {
        "mod_A": [list(r.u_a.module(i).dims) for i in r.u_a.ids],
        "mod_B": [list(r.u_b.module(i).dims) for i in r.u_b.ids],
        "mod_C": [list(r.u_c.module(i).dims) for i in r.u_c.ids],
    }
    report["_recollement"] = r  # stripped before serialization
    return report


# ---------------------------------------------------------------------------
# fuzzing: random triangular matrix algebras


_EDGE_FAMILIES = ("point", "two_points", "arrow", "truncated_loop")


def random_edge_algebra(rng: random.Random, p: int, prefix: str) -> Algebra:
    family = rng.choice(_EDGE_FAMILIES)
    if family == "point":
        return point_algebra(p, f"{prefix}1")
    if family == "two_points":
        q = Quiver((f"{prefix}1", f"{prefix}2"), ())
        return algebra_from_quiver(q, None, p)
    if family == "arrow":
        q = Quiver((f"{prefix}1", f"{prefix}2"),
                   ((f"{prefix}a", f"{prefix}1", f"{prefix}2"),))
        return algebra_from_quiver(q, None, p)
    q = Quiver((f"{prefix}1",), ((f"{prefix}x", f"{prefix}1", f"{prefix}1"),))
    return algebra_from_quiver(q, [[(1, [f"{prefix}x", f"{prefix}x"])]], p)


def random_bimodule(rng: random.Random, b: Algebra, c: Algebra,
                    max_dim: int = 2, attempts: int = 60) -> Bimodule:
    p = b.p
    for _ in range(attempts):
        dim = rng.randint(0, max_dim)
        if dim == 0:
            return Bimodule(0)
        slots = [(rng.randrange(c.nv), rng.randrange(b.nv)) for _ in range(dim)]
        left = {k: np.zeros((dim, dim), dtype=np.int64) for k in range(c.dim)}
        right = {k: np.zeros((dim, dim), dtype=np.int64) for k in range(b.dim)}
        for j, (cv, _) in enumerate(slots):
            left[cv][j, j] = 1
        for j, (_, bv) in enumerate(slots):
            right[bv][j, j] = 1
        for g in range(c.nv, c.dim):
            w, w2 = c.src[g], c.tgt[g]
            for j, (cv, bvj) in enumerate(slots):
                if cv != w:
                    continue
                for i, (cv2, bvi) in enumerate(slots):
                    if cv2 == w2 and bvi == bvj:
                        left[g][i, j] = rng.randrange(p)
        for g in range(b.nv, b.dim):
            v, v2 = b.src[g], b.tgt[g]
            for j, (cvj, bv) in enumerate(slots):
                if bv != v:
                    continue
                for i, (cvi, bv2) in enumerate(slots):
                    if bv2 == v2 and cvi == cvj:
                        right[g][i, j] = rng.randrange(p)
        bim = Bimodule(dim, left, right)
        try:
            validate_bimodule(b, c, bim)
        except InputError:
            continue
        return bim
    return Bimodule(0)


def random_triangular_instance(rng: random.Random, p: int = 2):
    b = random_edge_algebra(rng, p, "b")
    c = random_edge_algebra(rng, p, "c")
    bim = random_bimodule(rng, b, c)
    alg, data = triangular_matrix_algebra(b, c, bim)
    return alg, data


def fuzz_exactness_sweep(count: int, seed: int, p: int = 2, bound: int = 3,
                         thresholds: Thresholds | None = None,
                         workers: int = 1) -> dict:
    """Exactness machinery on random triangular algebras, both corner choices.

    For each instance the structural and direct verdicts must agree (the
    implementation raises on disagreement), the canonical corner choice must
    be exact, and when a choice is exact, the objectwise consequences hold.
    """
    from .modules import DEFAULT_THRESHOLDS

    thresholds = thresholds or DEFAULT_THRESHOLDS
    report: dict = {"seed": seed, "count": count, "char": p, "bound": bound,
                    "instances": [], "ok": True, "skipped": 0, "checked": 0}
    jobs = [(seed + k, p, bound) for k in range(count)]
    if workers > 1:
        import concurrent.futures

        with concurrent.futures.ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_exactness_one, jobs))
    else:
        results = [_exactness_one(job) for job in jobs]
    for entry in results:
        report["instances"].append(entry)
        if entry.get("skipped"):
            report["skipped"] += 1
            continue
        report["checked"] += 1
        if not entry["ok"]:
            report["ok"] = False
    return report


def _exactness_one(job: tuple[int, int, int]) -> dict:
    from .modules import DEFAULT_THRESHOLDS

    seed, p, bound = job
    rng = random.Random(seed)
    entry: dict = {"seed": seed, "ok": True}
    try:
        alg, data = random_triangular_instance(rng, p)
        entry["dim"] = alg.dim
        sides = {}
        for name, verts in (("canonical", data.e.vertices),
                            ("complement", data.e.complement)):
            if not verts or len(verts) == alg.nv:
                continue
            r = build_recollement(alg, IdempotentSpec(alg, verts), bound=bound,
                                  thresholds=DEFAULT_THRESHOLDS, self_check=False)
            exact, cert = r.is_i_shriek_exact()
            side: dict = {"exact": exact, "certificate": cert.as_dict()}
            if exact:
                cons = r.exactness_consequences_report()
                side["consequences_ok"] = cons["ok"]
                if not cons["ok"]:
                    entry["ok"] = False
                    side["counterexamples"] = cons["counterexamples"]
            sides[name] = side
        entry["sides"] = sides
        if "canonical" in sides and not sides["canonical"]["exact"]:
            # the corner side of a lower-triangular algebra always has exact i^!
            entry["ok"] = False
            entry["error"] = "canonical corner is not exact"
    except (BudgetExceeded, UniverseExhausted) as exc:
        return {"seed": seed, "skipped": True, "reason": str(exc)}
    except SchurrecError as exc:
        return {"seed": seed, "ok": False, "error": f"{type(exc).__name__}: {exc}"}
    return entry


def fuzz_theorem_sweep(count: int, seed: int, laws=("3.2", "3.3", "3.4", "3.5"),
                       p: int = 2, bound: int = 3,
                       thresholds: Thresholds | None = None,
                       workers: int = 1) -> dict:
    """Gluing-law sweeps on random triangular algebras (canonical corner)."""
    from .modules import DEFAULT_THRESHOLDS

    thresholds = thresholds or DEFAULT_THRESHOLDS
    report: dict = {"seed": seed, "count": count, "laws": list(laws),
                    "instances": [], "ok": True, "skipped": 0, "checked": 0}
    jobs = [(seed + k, p, bound, tuple(laws)) for k in range(count)]
    if workers > 1:
        import concurrent.futures

        with concurrent.futures.ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_theorem_one, jobs))
    else:
        results = [_theorem_one(job) for job in jobs]
    for entry in results:
        report["instances"].append(entry)
        if entry.get("skipped"):
            report["skipped"] += 1
            continue
        report["checked"] += 1
        if not entry["ok"]:
            report["ok"] = False
    return report


def _theorem_one(job) -> dict:
    from .modules import DEFAULT_THRESHOLDS

    seed, p, bound, laws = job
    rng = random.Random(seed)
    entry: dict = {"seed": seed, "ok": True, "laws": {}}
    try:
        alg, data = random_triangular_instance(rng, p)
        entry["dim"] = alg.dim
        if data.e.is_degenerate:
            return {"seed": seed, "skipped": True, "reason": "degenerate idempotent"}
        r = build_recollement(alg, data.e, bound=bound,
                              thresholds=DEFAULT_THRESHOLDS, self_check=False)
        for law in laws:
            res = verify_theorem(r, law)
            entry["laws"][law] = {
                "ok": res["ok"],
                "pairs_checked": res["pairs_checked"],
                "skipped": res.get("skipped", False),
            }
            if not res["ok"]:
                entry["ok"] = False
                entry["laws"][law]["counterexamples"] = res["counterexamples"]
    except (BudgetExceeded, UniverseExhausted) as exc:
        return {"seed": seed, "skipped": True, "reason": str(exc)}
    except SchurrecError as exc:
        return {"seed": seed, "ok": False, "error": f"{type(exc).__name__}: {exc}"}
    return entry
