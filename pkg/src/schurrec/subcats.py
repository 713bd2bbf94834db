"""Brick sets, Filt and sim, and the subcategory predicates.

A Subcategory is the additive, iso-closed, summand-closed hull of a finite
set of indecomposable universe ids; a module belongs to it iff every
indecomposable summand does.  A BrickSet is a set of ids each of which is a
verified brick.

Extension closure is tested over all cocycles of every ordered member pair
(not just basis cocycles: the middle term is not additive in the class), and
the wide test scans every element of each Hom space, because kernels are not
additive in the morphism either.  Per-pair results are cached on the
universe so exhaustive sweeps stay cheap.

Conventions: the empty id set represents the zero subcategory {0}; it is a
semibrick, a monobrick and cofinally closed, and {0} is simultaneously
torsion-free, wide and left Schur.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import fields as ff
from .errors import InputError
from .modules import (
    HomSpace,
    IndecUniverse,
    Module,
    Morphism,
    ShortExactSequence,
    Thresholds,
    decompose,
    is_brick,
    is_injective,
    middle_term,
    quotient_by_rows,
    submodule_from_rows,
    submodule_rows,
)


@dataclass(frozen=True)
class BrickSet:
    universe: IndecUniverse
    ids: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "ids", tuple(sorted(set(self.ids))))


def brick_set(universe: IndecUniverse, ids, *, validate: bool = True,
              thresholds: Thresholds | None = None) -> BrickSet:
    thresholds = thresholds or universe.thresholds
    ids = tuple(sorted(set(int(i) for i in ids)))
    if any(i < 0 or i >= len(universe) for i in ids):
        raise InputError("brick set id outside the universe")
    if validate:
        for i in ids:
            if not is_brick(universe.module(i), thresholds):
                raise InputError(f"universe member {i} is not a brick")
    return BrickSet(universe, ids)


@dataclass(frozen=True)
class Subcategory:
    universe: IndecUniverse
    ids: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "ids", tuple(sorted(set(self.ids))))
        if any(i < 0 or i >= len(self.universe) for i in self.ids):
            raise InputError("subcategory id outside the universe")

    def contains(self, m: Module) -> bool:
        return set(decompose(m, self.universe)) <= set(self.ids)


# ---------------------------------------------------------------------------
# cached per-pair data on the universe


@dataclass(frozen=True)
class HomProfile:
    dim: int
    exists_nonzero: bool
    exists_injective: bool
    exists_nonzero_noninjective: bool
    all_nonzero_injective: bool
    all_nonzero_surjective: bool


def hom_profile(u: IndecUniverse, i: int, j: int,
                thresholds: Thresholds | None = None) -> HomProfile:
    thresholds = thresholds or u.thresholds
    cache = _cache(u)
    key = ("hom_profile", i, j)
    if key not in cache:
        hom = HomSpace(u.module(i), u.module(j))
        exists_inj = False
        exists_noninj = False
        all_inj = True
        all_surj = True
        any_nonzero = hom.dim > 0
        for f in hom.elements(thresholds=thresholds):
            inj = is_injective(f)
            surj = all(ff.rank(mat, f.p) == f.dst.dims[v] for v, mat in enumerate(f.mats))
            exists_inj = exists_inj or inj
            exists_noninj = exists_noninj or not inj
            all_inj = all_inj and inj
            all_surj = all_surj and surj
        cache[key] = HomProfile(hom.dim, any_nonzero, exists_inj, exists_noninj,
                                all_inj, all_surj)
    return cache[key]


def _cache(u: IndecUniverse) -> dict:
    if not hasattr(u, "_subcat_cache"):
        u._subcat_cache = {}
    return u._subcat_cache


def ext_middles(u: IndecUniverse, quot_id: int, sub_id: int,
                thresholds: Thresholds | None = None):
    """All nonzero cocycles of Ext^1(quot, sub) with their middle-term summands."""
    thresholds = thresholds or u.thresholds
    cache = _cache(u)
    key = ("ext_middles", quot_id, sub_id)
    if key not in cache:
        ext = u.ext_space(quot_id, sub_id)
        table = []
        for c in ext.all_cocycles(thresholds=thresholds):
            ses = middle_term(ext, c)
            table.append(decompose(ses.middle, u, thresholds))
        cache[key] = tuple(table)
    return cache[key]


def submodule_decomps(u: IndecUniverse, uid: int,
                      thresholds: Thresholds | None = None):
    """(sub summands, quotient summands) for every proper nonzero submodule."""
    thresholds = thresholds or u.thresholds
    cache = _cache(u)
    key = ("submods", uid)
    if key not in cache:
        m = u.module(uid)
        table = []
        for rows in submodule_rows(m, thresholds):
            total = sum(r.shape[0] for r in rows)
            if total == 0 or total == m.total_dim:
                continue
            sub, _ = submodule_from_rows(m, list(rows))
            quot = quotient_by_rows(m, list(rows)).module
            table.append((decompose(sub, u, thresholds), decompose(quot, u, thresholds)))
        cache[key] = tuple(table)
    return cache[key]


def hom_element_kernels(u: IndecUniverse, i: int, j: int,
                        thresholds: Thresholds | None = None):
    """(kernel summands, cokernel summands) for every nonzero map i -> j."""
    thresholds = thresholds or u.thresholds
    cache = _cache(u)
    key = ("homker", i, j)
    if key not in cache:
        m, n = u.module(i), u.module(j)
        table = []
        for f in HomSpace(m, n).elements(thresholds=thresholds):
            ker_rows = [ff.row_kernel(mat, f.p) for mat in f.mats]
            img_rows = [ff.row_space_basis(mat, f.p) for mat in f.mats]
            ker, _ = submodule_from_rows(m, ker_rows)
            cok = quotient_by_rows(n, img_rows).module
            table.append((decompose(ker, u, thresholds), decompose(cok, u, thresholds)))
        cache[key] = tuple(table)
    return cache[key]


# ---------------------------------------------------------------------------
# brick-set predicates


def is_semibrick(s: BrickSet, thresholds: Thresholds | None = None) -> bool:
    """Hom vanishes between all distinct members."""
    for i in s.ids:
        for j in s.ids:
            if i != j and hom_profile(s.universe, i, j, thresholds).dim:
                return False
    return True


def is_monobrick(s: BrickSet, thresholds: Thresholds | None = None) -> bool:
    """Every map between members (endomorphisms included) is zero or injective."""
    for i in s.ids:
        for j in s.ids:
            prof = hom_profile(s.universe, i, j, thresholds)
            if prof.exists_nonzero_noninjective:
                return False
    return True


def is_cofinally_closed(s: BrickSet, ambient: BrickSet,
                        thresholds: Thresholds | None = None) -> bool:
    """No outside brick embeds into a member without a nonzero non-injection
    into some member."""
    u = s.universe
    inside = set(s.ids)
    for n in ambient.ids:
        if n in inside:
            continue
        embeds = any(hom_profile(u, n, m, thresholds).exists_injective for m in s.ids)
        if not embeds:
            continue
        escapes = any(
            hom_profile(u, n, m2, thresholds).exists_nonzero_noninjective for m2 in s.ids
        )
        if not escapes:
            return False
    return True


# ---------------------------------------------------------------------------
# Filt, sim, and the subcategory predicates


def filt_closure(u: IndecUniverse, ids, thresholds: Thresholds | None = None) -> Subcategory:
    """Least fixpoint adjoining indecomposable summands of all middle terms.

    Closing over indecomposable ordered pairs suffices: once all their middle
    terms decompose into the set, extensions of arbitrary direct sums follow
    by splitting off one summand at a time.
    """
    thresholds = thresholds or u.thresholds
    current = set(int(i) for i in ids)
    changed = True
    while changed:
        changed = False
        for x in sorted(current):
            for z in sorted(current):
                for summands in ext_middles(u, z, x, thresholds):
                    for s in summands:
                        if s not in current:
                            current.add(s)
                            changed = True
    return Subcategory(u, tuple(sorted(current)))


def sim(u: IndecUniverse, e: Subcategory, thresholds: Thresholds | None = None) -> frozenset[int]:
    """Simple objects of an extension-closed subcategory (ids).

    Only indecomposable members can be simple: a decomposable U ⊕ V sits in
    the sequence 0 -> U -> U⊕V -> V -> 0 with both ends in the (summand
    closed) subcategory.  That reduction is covered by a dedicated test.
    """
    thresholds = thresholds or u.thresholds
    members = set(e.ids)
    out = []
    for m in e.ids:
        simple = True
        for sub_ids, quot_ids in submodule_decomps(u, m, thresholds):
            if set(sub_ids) <= members and set(quot_ids) <= members:
                simple = False
                break
        if simple:
            out.append(m)
    return frozenset(out)


def is_left_schurian(u: IndecUniverse, m_id: int, e: Subcategory,
                     thresholds: Thresholds | None = None) -> bool:
    """Every map from the member into the subcategory is zero or injective.

    Indecomposable targets suffice: a map into a direct sum is injective iff
    the component kernels intersect trivially, so a non-injection into a sum
    forces a non-injection into one summand of a smaller sum or exhibits one
    directly; the reduction is property-tested against direct scans.
    """
    for c in e.ids:
        if hom_profile(u, m_id, c, thresholds).exists_nonzero_noninjective:
            return False
    return True


def is_extension_closed(u: IndecUniverse, e: Subcategory,
                        thresholds: Thresholds | None = None) -> bool:
    members = set(e.ids)
    for x in e.ids:
        for z in e.ids:
            for summands in ext_middles(u, z, x, thresholds):
                if not set(summands) <= members:
                    return False
    return True


def is_left_schur(u: IndecUniverse, e: Subcategory,
                  thresholds: Thresholds | None = None) -> bool:
    if not is_extension_closed(u, e, thresholds):
        return False
    simples = sim(u, e, thresholds)
    return all(is_left_schurian(u, m, e, thresholds) for m in simples)


def is_torsion_free(u: IndecUniverse, e: Subcategory,
                    thresholds: Thresholds | None = None) -> bool:
    if not is_extension_closed(u, e, thresholds):
        return False
    members = set(e.ids)
    for m in e.ids:
        for sub_ids, _ in submodule_decomps(u, m, thresholds):
            if not set(sub_ids) <= members:
                return False
    return True


def is_wide(u: IndecUniverse, e: Subcategory,
            thresholds: Thresholds | None = None) -> bool:
    if not is_extension_closed(u, e, thresholds):
        return False
    members = set(e.ids)
    for i in e.ids:
        for j in e.ids:
            for ker_ids, coker_ids in hom_element_kernels(u, i, j, thresholds):
                if not set(ker_ids) <= members or not set(coker_ids) <= members:
                    return False
    return True


# ---------------------------------------------------------------------------
# filtrations


@dataclass
class Filtration:
    """Chain 0 = X_0 ⊂ X_1 ⊂ ... ⊂ X_n = X with recorded subquotient classes.

    chain[k] is the per-vertex row basis of X_k inside the ambient module;
    classes[k] is the universe id of X_{k+1} / X_k.
    """

    universe: IndecUniverse
    ambient: Module
    chain: list[tuple[np.ndarray, ...]]
    classes: tuple[int, ...]

    def validate(self, thresholds: Thresholds | None = None) -> bool:
        thresholds = thresholds or self.universe.thresholds
        u = self.universe
        p = self.ambient.p
        if len(self.chain) != len(self.classes) + 1:
            return False
        if any(r.shape[0] for r in self.chain[0]):
            return False
        top = self.chain[-1]
        if sum(r.shape[0] for r in top) != self.ambient.total_dim:
            return False
        for k in range(len(self.classes)):
            lo, hi = self.chain[k], self.chain[k + 1]
            for a, b in zip(lo, hi):
                if not ff.row_space_contains(b, a, p):
                    return False
            if sum(r.shape[0] for r in hi) <= sum(r.shape[0] for r in lo):
                return False
            sub, _ = submodule_from_rows(self.ambient, list(hi))
            inner = []
            for a, b in zip(lo, hi):
                coords = ff.express_in_rows(a, b, p)
                assert coords is not None
                inner.append(coords)
            quot = quotient_by_rows(sub, inner).module
            from .modules import is_isomorphic

            if not is_isomorphic(quot, u.module(self.classes[k]), thresholds):
                return False
        return True


def _preimage_rows(pi: Morphism, rows: tuple[np.ndarray, ...]) -> tuple[np.ndarray, ...]:
    """Rows of {v : v @ pi lies in the given row space of the target}."""
    p = pi.p
    out = []
    for v in range(pi.src.algebra.nv):
        target_dim = pi.dst.dims[v]
        comp = ff.quotient_basis(rows[v], ff.eye(target_dim), p)
        if comp.shape[0] == 0:
            out.append(ff.eye(pi.src.dims[v]))
            continue
        full = np.concatenate([ff.row_space_basis(rows[v], p), comp])
        inv = ff.solve(full, ff.eye(target_dim), p)
        assert inv is not None
        proj_off = inv[:, full.shape[0] - comp.shape[0]:]
        out.append(ff.row_kernel(ff.mul(pi.mats[v], proj_off, p), p))
    return tuple(out)


def merge_filtrations(ses: ShortExactSequence, fx: Filtration, fz: Filtration) -> Filtration:
    """Concatenate a filtration of the sub with the preimage of one of the quotient.

    The new chain is 0 = X_0 ⊂ ... ⊂ X_m = L ≅ Y_0 ⊂ Y_1 ⊂ ... ⊂ Y_n = M with
    Y_j the preimage of Z_j under the epi; the class list is fx's followed by
    fz's.
    """
    if fx.ambient is not ses.sub:
        raise InputError("first filtration does not filter the sub of the sequence")
    if fz.ambient is not ses.quot:
        raise InputError("second filtration does not filter the quotient of the sequence")
    p = ses.mono.p
    chain: list[tuple[np.ndarray, ...]] = []
    for rows in fx.chain:
        pushed = tuple(
            ff.row_space_basis(ff.mul(r, ses.mono.mats[v], p), p)
            for v, r in enumerate(rows)
        )
        chain.append(pushed)
    for rows in fz.chain[1:]:
        chain.append(_preimage_rows(ses.epi, rows))
    return Filtration(fx.universe, ses.middle, chain, fx.classes + fz.classes)


def trivial_filtration(u: IndecUniverse, m: Module) -> Filtration:
    """The empty filtration of the zero module or a single-step one."""
    zero_rows = tuple(ff.zeros(0, d) for d in m.dims)
    if m.is_zero:
        return Filtration(u, m, [zero_rows], ())
    ids = decompose(m, u)
    if len(ids) != 1:
        raise InputError("trivial filtration needs an indecomposable module")
    full = tuple(ff.eye(d) for d in m.dims)
    return Filtration(u, m, [zero_rows, full], (ids[0],))


def filtration_witness(
    u: IndecUniverse, m: Module, class_ids, thresholds: Thresholds | None = None,
    _memo: dict | None = None,
) -> Filtration | None:
    """Search for an explicit filtration of m with subquotients in class_ids."""
    thresholds = thresholds or u.thresholds
    memo = _memo if _memo is not None else {}
    classes = sorted(set(int(i) for i in class_ids))
    zero_rows = tuple(ff.zeros(0, d) for d in m.dims)
    if m.is_zero:
        return Filtration(u, m, [zero_rows], ())
    key = decompose(m, u, thresholds)
    if memo.get(key) is False:
        return None
    for rows in submodule_rows(m, thresholds):
        total = sum(r.shape[0] for r in rows)
        if total == 0:
            continue
        sub, incl = submodule_from_rows(m, list(rows))
        sub_ids = decompose(sub, u, thresholds)
        if len(sub_ids) != 1 or sub_ids[0] not in classes:
            continue
        parts = quotient_by_rows(m, list(rows))
        rest = filtration_witness(u, parts.module, classes, thresholds, memo)
        if rest is None:
            continue
        chain = [zero_rows, tuple(ff.row_space_basis(r, m.p) for r in rows)]
        for upper in rest.chain[1:]:
            chain.append(_preimage_rows(parts.projection, upper))
        return Filtration(u, m, chain, (sub_ids[0],) + rest.classes)
    memo[key] = False
    return None


def summand_audit(u: IndecUniverse, closure: Subcategory, generators,
                  thresholds: Thresholds | None = None) -> dict:
    """Re-validate that every closure member has an explicit generator filtration.

    A miss means Filt of the generators is not closed under direct summands,
    which the id-set representation cannot express; it is reported, never
    silently patched.
    """
    thresholds = thresholds or u.thresholds
    memo: dict = {}
    report = {"ok": True, "members": {}, "misses": []}
    for uid in closure.ids:
        witness = filtration_witness(u, u.module(uid), generators, thresholds, memo)
        valid = witness is not None and witness.validate(thresholds)
        report["members"][uid] = bool(valid)
        if not valid:
            report["ok"] = False
            report["misses"].append(uid)
    return report


def verify_bijection(u: IndecUniverse, thresholds: Thresholds | None = None) -> dict:
    """Round-trip checks of the monobrick <-> left Schur correspondence.

    sim(filt_closure(M)) = M for every monobrick, filt_closure(sim(E)) = E for
    every left Schur subcategory, and the restrictions pair wide with
    semibricks and torsion-free with cofinally closed monobricks.

    Monobricks whose Filt is not summand-closed cannot be represented as id
    sets; they are reported under non_representable and the counting law is
    stated against the representable ones.  The wide/semibrick and
    torf/cc-monobrick pairings are unaffected (those classes are always
    summand-closed) and are asserted unconditionally.
    """
    from .census import all_left_schur, all_monobricks

    thresholds = thresholds or u.thresholds
    mono = all_monobricks(u, thresholds)
    schur = all_left_schur(u, thresholds)
    skip = set(schur.non_representable)
    report: dict = {"ok": True, "laws": {}, "counterexamples": [],
                    "non_representable": [list(t) for t in schur.non_representable]}

    def law(name: str, ok: bool, payload=None):
        report["laws"][name] = report["laws"].get(name, True) and bool(ok)
        if not ok:
            report["ok"] = False
            report["counterexamples"].append({"law": name, "payload": payload})

    seen_closures = set()
    for entry in mono.entries:
        if entry.ids in skip:
            continue
        closure = filt_closure(u, entry.ids, thresholds)
        simples = sim(u, closure, thresholds)
        if frozenset(entry.ids) != simples:
            law("sim_after_filt", False, {"monobrick": list(entry.ids),
                                          "sim": sorted(simples)})
        seen_closures.add(closure.ids)
        audit = summand_audit(u, closure, entry.ids, thresholds)
        if not audit["ok"]:
            law("summand_audit", False, {"monobrick": list(entry.ids),
                                         "misses": audit["misses"]})
    report["laws"].setdefault("sim_after_filt", True)
    report["laws"].setdefault("summand_audit", True)

    for entry in schur.entries:
        e = Subcategory(u, entry.ids)
        simples = sim(u, e, thresholds)
        closure = filt_closure(u, simples, thresholds)
        if closure.ids != e.ids:
            law("filt_after_sim", False, {"schur": list(entry.ids),
                                          "closure": list(closure.ids)})
    report["laws"].setdefault("filt_after_sim", True)

    law("closure_count", len(seen_closures) == len(mono.entries) - len(skip),
        {"closures": len(seen_closures), "monobricks": len(mono.entries),
         "non_representable": len(skip)})
    n_semi = sum(1 for entry in mono.entries if entry.flags["semibrick"])
    n_cc = sum(1 for entry in mono.entries if entry.flags["cofinally_closed"])
    n_wide = sum(1 for entry in schur.entries if entry.flags["wide"])
    n_torf = sum(1 for entry in schur.entries if entry.flags["torsion_free"])
    law("wide_matches_semibrick", n_wide == n_semi, {"wide": n_wide, "semibrick": n_semi})
    law("torf_matches_cc", n_torf == n_cc, {"torf": n_torf, "cc": n_cc})
    report["counts"] = {
        "monobricks": len(mono.entries),
        "representable_monobricks": len(mono.entries) - len(skip),
        "left_schur": len(schur.entries),
        "semibricks": n_semi,
        "cc_monobricks": n_cc,
        "wide": n_wide,
        "torsion_free": n_torf,
    }
    return report
