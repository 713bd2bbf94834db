"""Idempotent recollements (mod A/AeA, mod A, mod eAe) and the gluing layer.

Right-module convention throughout, matching the triangular matrix picture:
for an idempotent e the quotient functor is j^* T = Te (a module over the
corner C = eAe), the subcategory side is B = A/AeA, and

    i_* X  = X inflated along A ->> B          i^! T = {t : t.(AeA) = 0}
    i^* T  = T / T.(AeA)                       j_! N = N (x)_C eA
    j_* N  = Hom_C(Ae, N)                      j_!* N = Im(j_! N -> j_* N)

The canonical map j_! -> j_* is the adjunction image of the identity,
realized explicitly by theta(n (x) x)(y) = n.(xy).  The build self-checks the
recollement axioms on the universes, so a mis-wired convention fails loudly
rather than silently.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import fields as ff
from .algebras import (
    Algebra,
    IdempotentSpec,
    corner_algebra,
    quotient_by_idempotent_ideal,
)
from .errors import BudgetExceeded, InputError, VerificationFailure
from .modules import (
    IndecUniverse,
    Module,
    Morphism,
    ShortExactSequence,
    Thresholds,
    build_universe,
    decompose,
    hom_basis,
    is_injective,
    is_isomorphic,
    is_split,
    is_surjective,
    projective_presentation,
    regular_module,
    submodule_from_rows,
    submodule_rows,
    quotient_by_rows,
)
from .subcats import (
    BrickSet,
    Subcategory,
    brick_set,
    is_cofinally_closed,
    is_left_schur,
    is_monobrick,
    is_semibrick,
    is_torsion_free,
    is_wide,
)

FUNCTOR_TAGS = (
    "i_star", "i_upper", "i_shriek",
    "j_lower_shriek", "j_upper", "j_star", "j_intermediate",
)


@dataclass
class FunctorImage:
    """A functor value together with the construction data needed to map morphisms."""

    module: Module
    data: dict = field(default_factory=dict)


@dataclass
class ExactnessCertificate:
    exact: bool
    structural: bool
    direct: bool
    witness: str | None = None

    def as_dict(self) -> dict:
        return {
            "exact": self.exact,
            "structural_projectivity_test": self.structural,
            "direct_sequence_test": self.direct,
            "witness": self.witness,
        }


class Recollement:
    """The three categories, the seven functors, and their caches."""

    def __init__(self, a: Algebra, e: IdempotentSpec, bound: int,
                 thresholds: Thresholds, self_check: bool = True):
        if not e.algebra.same_as(a):
            raise InputError("idempotent belongs to a different algebra")
        self.a = a
        self.e = e
        self.bound = bound
        self.thresholds = thresholds
        self.e_set = set(e.vertices)
        self.b_alg, self.b_data = quotient_by_idempotent_ideal(a, e)
        self.c_alg, self.c_data = corner_algebra(a, e)
        self.a_to_b = {old: new for new, old in enumerate(self.b_data.vertex_map)}
        self.a_to_c = {old: new for new, old in enumerate(self.c_data.vertex_map)}
        self.c_old_to_new = {old: new for new, old in enumerate(self.c_data.index_map)}
        self.u_a = build_universe(a, bound, thresholds=thresholds)
        self.u_b = build_universe(self.b_alg, bound, "brute-force", thresholds)
        self.u_c = build_universe(self.c_alg, bound, "brute-force", thresholds)
        self._image_cache: dict[tuple[str, int], FunctorImage] = {}
        self._image_ids: dict[tuple[str, int], tuple[int, ...]] = {}
        self._cert: ExactnessCertificate | None = None
        self._ea = [i for i in range(a.dim) if a.src[i] in self.e_set]
        self._ae = [i for i in range(a.dim) if a.tgt[i] in self.e_set]
        if self_check:
            self._light_self_check()

    # -- plumbing ----------------------------------------------------------

    def universe_of(self, tag: str) -> IndecUniverse:
        return self.u_b if tag in ("i_star",) else (
            self.u_c if tag in ("j_lower_shriek", "j_star", "j_intermediate") else self.u_a
        )

    def target_universe(self, tag: str) -> IndecUniverse:
        if tag in ("i_upper", "i_shriek"):
            return self.u_b
        if tag == "j_upper":
            return self.u_c
        return self.u_a

    def _expect_algebra(self, tag: str, m: Module) -> None:
        want = {
            "i_star": self.b_alg,
            "i_upper": self.a, "i_shriek": self.a, "j_upper": self.a,
            "j_lower_shriek": self.c_alg, "j_star": self.c_alg, "j_intermediate": self.c_alg,
        }[tag]
        if not m.algebra.same_as(want):
            raise InputError(f"{tag}: module lives in the wrong category")

    def apply(self, tag: str, m: Module) -> Module:
        return self.apply_with_data(tag, m).module

    def apply_with_data(self, tag: str, m: Module) -> FunctorImage:
        self._expect_algebra(tag, m)
        builder = {
            "i_star": self._i_star,
            "i_upper": self._i_upper,
            "i_shriek": self._i_shriek,
            "j_upper": self._j_upper,
            "j_lower_shriek": self._j_lower_shriek,
            "j_star": self._j_star,
            "j_intermediate": self._j_intermediate,
        }[tag]
        src_u = self.universe_of(tag)
        for uid, rep in enumerate(src_u.modules):
            if rep is m:
                key = (tag, uid)
                if key not in self._image_cache:
                    self._image_cache[key] = builder(m)
                return self._image_cache[key]
        return builder(m)

    def image_ids(self, tag: str, uid: int) -> tuple[int, ...]:
        key = (tag, uid)
        if key not in self._image_ids:
            module = self.apply(tag, self.universe_of(tag).module(uid))
            self._image_ids[key] = decompose(module, self.target_universe(tag), self.thresholds)
        return self._image_ids[key]

    # -- the seven functors --------------------------------------------------

    def _i_star(self, x: Module) -> FunctorImage:
        a = self.a
        dims = tuple(
            0 if v in self.e_set else x.dims[self.a_to_b[v]] for v in range(a.nv)
        )
        act = {}
        for i in range(a.nv, a.dim):
            s, t = a.src[i], a.tgt[i]
            if s in self.e_set or t in self.e_set:
                act[i] = ff.zeros(dims[s], dims[t])
            else:
                vec_b = self.b_data.projection[i]
                act[i] = x.act_of_vector(vec_b, self.a_to_b[s], self.a_to_b[t])
        return FunctorImage(Module(a, dims, act))

    def _annihilator_rows(self, t: Module) -> list[np.ndarray]:
        a = self.a
        rows = []
        for v in range(a.nv):
            mats = []
            for u in self.b_data.ideal_rows:
                for w in range(a.nv):
                    mat = t.act_of_vector(u, v, w)
                    if mat.shape[1]:
                        mats.append(mat)
            if mats:
                stacked = np.concatenate(mats, axis=1)
                rows.append(ff.row_kernel(stacked, t.p))
            else:
                rows.append(ff.eye(t.dims[v]))
        return rows

    def _to_b_module(self, t: Module, rows: list[np.ndarray]) -> Module:
        """B-module carried by an AeA-killed subquotient given by row bases."""
        b = self.b_alg
        dims = tuple(rows[self.b_data.vertex_map[v]].shape[0] for v in range(b.nv))
        act = {}
        for k in range(b.nv, b.dim):
            rep = self.b_data.rep[k]
            s_old, t_old = self.a.src[rep], self.a.tgt[rep]
            pushed = ff.mul(rows[s_old], t.act_block(rep), t.p)
            coords = ff.express_in_rows(pushed, rows[t_old], t.p)
            if coords is None:
                raise InputError("transport to mod B failed; rows not action-closed")
            act[k] = coords
        return Module(b, dims, act)

    def _i_shriek(self, t: Module) -> FunctorImage:
        rows = self._annihilator_rows(t)
        for v in self.e_set:
            assert rows[v].shape[0] == 0, "annihilator must vanish at corner vertices"
        return FunctorImage(self._to_b_module(t, rows), {"rows": rows, "ambient": t})

    def _i_upper(self, t: Module) -> FunctorImage:
        a = self.a
        p = t.p
        img_rows = []
        for v in range(a.nv):
            mats = [ff.zeros(0, t.dims[v])]
            for u in self.b_data.ideal_rows:
                for w in range(a.nv):
                    mats.append(t.act_of_vector(u, w, v))
            img_rows.append(ff.row_space_basis(np.concatenate(mats), p))
        parts = quotient_by_rows(t, img_rows)
        b = self.b_alg
        dims = tuple(parts.module.dims[self.b_data.vertex_map[v]] for v in range(b.nv))
        act = {}
        for k in range(b.nv, b.dim):
            rep = self.b_data.rep[k]
            s_old, t_old = a.src[rep], a.tgt[rep]
            comp_s = parts.rep_rows[s_old]
            act[k] = ff.mul(ff.mul(comp_s, t.act_block(rep), p), parts.projection.mats[t_old], p)
        return FunctorImage(
            Module(b, dims, act),
            {"rep_rows": parts.rep_rows, "projection": parts.projection, "ambient": t},
        )

    def _j_upper(self, t: Module) -> FunctorImage:
        c = self.c_alg
        dims = tuple(t.dims[self.c_data.vertex_map[v]] for v in range(c.nv))
        act = {}
        for k in range(c.nv, c.dim):
            act[k] = t.act_block(self.c_data.index_map[k])
        return FunctorImage(Module(c, dims, act), {"ambient": t})

    def _jl_slots(self, n: Module) -> list[list[tuple[int, int]]]:
        """Generators (x, r) of N (x) eA at each A-vertex: x in eA with tgt v."""
        slots: list[list[tuple[int, int]]] = [[] for _ in range(self.a.nv)]
        for x in self._ea:
            w_c = self.a_to_c[self.a.src[x]]
            for r in range(n.dims[w_c]):
                slots[self.a.tgt[x]].append((x, r))
        return slots

    def _j_lower_shriek(self, n: Module) -> FunctorImage:
        a, p = self.a, n.p
        c = self.c_alg
        slots = self._jl_slots(n)
        index = [
            {gen: k for k, gen in enumerate(slot)} for slot in slots
        ]
        rel_rows: list[list[np.ndarray]] = [[] for _ in range(a.nv)]
        for gamma in range(c.nv, c.dim):
            g = self.c_data.index_map[gamma]
            w, w2 = a.src[g], a.tgt[g]  # c: w -> w2 inside e
            gmat = n.act_block(gamma)   # N_w -> N_w2
            for x in self._ea:
                if a.src[x] != w2:
                    continue
                v = a.tgt[x]
                prod = a.mult[g, x]  # c.x, components with src w
                for r in range(n.dims[self.a_to_c[w]]):
                    row = np.zeros(len(slots[v]), dtype=np.int64)
                    for r2 in range(n.dims[self.a_to_c[w2]]):
                        if gmat[r, r2]:
                            row[index[v][(x, r2)]] = (row[index[v][(x, r2)]] + gmat[r, r2]) % p
                    for y in np.nonzero(prod)[0]:
                        y = int(y)
                        row[index[v][(y, r)]] = (row[index[v][(y, r)]] - prod[y]) % p
                    if row.any():
                        rel_rows[v].append(row)
        comp, proj, dims = [], [], []
        for v in range(a.nv):
            g_dim = len(slots[v])
            rels = np.array(rel_rows[v]).reshape(-1, g_dim) if rel_rows[v] else ff.zeros(0, g_dim)
            rels = ff.row_space_basis(rels, p)
            comp_v = ff.quotient_basis(rels, ff.eye(g_dim), p)
            full = np.concatenate([rels, comp_v]) if g_dim else ff.zeros(0, 0)
            if g_dim:
                inv = ff.solve(full, ff.eye(g_dim), p)
                assert inv is not None
                proj_v = inv[:, rels.shape[0]:]
            else:
                proj_v = ff.zeros(0, 0)
            comp.append(comp_v)
            proj.append(proj_v)
            dims.append(comp_v.shape[0])
        act = {}
        for q in range(a.nv, a.dim):
            s, t = a.src[q], a.tgt[q]
            big = np.zeros((len(slots[s]), len(slots[t])), dtype=np.int64)
            for x, r in slots[s]:
                prod = a.mult[x, q]
                for y in np.nonzero(prod)[0]:
                    big[index[s][(x, r)], index[t][(int(y), r)]] = prod[y]
            act[q] = ff.mul(ff.mul(comp[s], big, p), proj[t], p)
        module = Module(a, tuple(dims), act)
        return FunctorImage(module, {
            "slots": slots, "index": index, "comp": comp, "proj": proj, "source": n,
        })

    def _js_slots(self, n: Module) -> list[list[tuple[int, int]]]:
        """Coordinates (y, r) of Hom_C(e_v A e, N) at each A-vertex v."""
        slots: list[list[tuple[int, int]]] = [[] for _ in range(self.a.nv)]
        for y in self._ae:
            w_c = self.a_to_c[self.a.tgt[y]]
            for r in range(n.dims[w_c]):
                slots[self.a.src[y]].append((y, r))
        return slots

    def _j_star(self, n: Module) -> FunctorImage:
        a, p = self.a, n.p
        c = self.c_alg
        slots = self._js_slots(n)
        index = [{gen: k for k, gen in enumerate(slot)} for slot in slots]
        sol = []
        for v in range(a.nv):
            h_dim = len(slots[v])
            eqs: list[np.ndarray] = []
            for y in self._ae:
                if a.src[y] != v:
                    continue
                w2 = a.tgt[y]
                for gamma in range(c.nv, c.dim):
                    g = self.c_data.index_map[gamma]
                    if a.src[g] != w2:
                        continue
                    w3 = a.tgt[g]
                    gmat = n.act_block(gamma)  # N_{w2} -> N_{w3}
                    prod = a.mult[y, g]        # y.c, components with tgt w3
                    for r3 in range(n.dims[self.a_to_c[w3]]):
                        eq = np.zeros(h_dim, dtype=np.int64)
                        for yy in np.nonzero(prod)[0]:
                            eq[index[v][(int(yy), r3)]] = (eq[index[v][(int(yy), r3)]] + prod[yy]) % p
                        for r2 in range(n.dims[self.a_to_c[w2]]):
                            if gmat[r2, r3]:
                                eq[index[v][(y, r2)]] = (eq[index[v][(y, r2)]] - gmat[r2, r3]) % p
                        if eq.any():
                            eqs.append(eq)
            cmat = np.array(eqs).reshape(-1, h_dim) if eqs else ff.zeros(0, h_dim)
            sol.append(ff.row_kernel(cmat.T, p) if h_dim else ff.zeros(0, 0))
        act = {}
        for q in range(a.nv, a.dim):
            s, t = a.src[q], a.tgt[q]
            big = np.zeros((len(slots[s]), len(slots[t])), dtype=np.int64)
            for y, r in slots[t]:
                prod = a.mult[q, y]  # q.y, components with src s
                for yy in np.nonzero(prod)[0]:
                    big[index[s][(int(yy), r)], index[t][(y, r)]] = prod[yy]
            pushed = ff.mul(sol[s], big, p)
            coords = ff.express_in_rows(pushed, sol[t], p)
            if coords is None:
                raise InputError("j_* action does not preserve C-linearity")
            act[q] = coords
        dims = tuple(sol[v].shape[0] for v in range(a.nv))
        module = Module(a, dims, act)
        return FunctorImage(module, {"slots": slots, "index": index, "sol": sol, "source": n})

    def _theta(self, n: Module) -> tuple[Morphism, FunctorImage, FunctorImage]:
        """Canonical map j_! N -> j_* N: theta(n (x) x)(y) = n.(xy)."""
        a, p = self.a, n.p
        jl = self.apply_with_data("j_lower_shriek", n)
        js = self.apply_with_data("j_star", n)
        mats = []
        for v in range(a.nv):
            g_slots = jl.data["slots"][v]
            h_slots = js.data["slots"][v]
            h_index = js.data["index"][v]
            big = np.zeros((len(g_slots), len(h_slots)), dtype=np.int64)
            for gi, (x, r) in enumerate(g_slots):
                w = self.a_to_c[a.src[x]]
                for y in self._ae:
                    if a.src[y] != v:
                        continue
                    w2 = self.a_to_c[a.tgt[y]]
                    prod = a.mult[x, y]  # x.y in eAe
                    vec_c = np.zeros(self.c_alg.dim, dtype=np.int64)
                    for k in np.nonzero(prod)[0]:
                        vec_c[self.c_old_to_new[int(k)]] = prod[k]
                    mat = n.act_of_vector(vec_c, w, w2)
                    for r2 in range(n.dims[w2]):
                        if mat[r, r2]:
                            big[gi, h_index[(y, r2)]] = mat[r, r2]
            lifted = ff.mul(jl.data["comp"][v], big, p)
            coords = ff.express_in_rows(lifted, js.data["sol"][v], p)
            if coords is None:
                raise InputError("canonical map j_! -> j_* left the C-linear subspace")
            mats.append(coords)
        theta = Morphism(jl.module, js.module, tuple(mats))
        return theta, jl, js

    def _j_intermediate(self, n: Module) -> FunctorImage:
        theta, jl, js = self._theta(n)
        rows = [ff.row_space_basis(m, theta.p) for m in theta.mats]
        module, incl = submodule_from_rows(js.module, rows)
        return FunctorImage(module, {
            "theta": theta, "rows": rows, "inside": js.module, "inclusion": incl,
        })

    # -- morphism transport ---------------------------------------------------

    def apply_to_morphism(self, tag: str, f: Morphism) -> Morphism:
        self._expect_algebra(tag, f.src)
        p = f.p
        a = self.a
        src_img = self.apply_with_data(tag, f.src)
        dst_img = self.apply_with_data(tag, f.dst)
        if tag == "i_star":
            mats = []
            for v in range(a.nv):
                if v in self.e_set:
                    mats.append(ff.zeros(0, 0))
                else:
                    mats.append(f.mats[self.a_to_b[v]])
            return Morphism(src_img.module, dst_img.module, tuple(mats))
        if tag == "i_shriek":
            rows_s, rows_d = src_img.data["rows"], dst_img.data["rows"]
            mats = []
            for v in range(self.b_alg.nv):
                ov = self.b_data.vertex_map[v]
                pushed = ff.mul(rows_s[ov], f.mats[ov], p)
                coords = ff.express_in_rows(pushed, rows_d[ov], p)
                assert coords is not None
                mats.append(coords)
            return Morphism(src_img.module, dst_img.module, tuple(mats))
        if tag == "i_upper":
            mats = []
            for v in range(self.b_alg.nv):
                ov = self.b_data.vertex_map[v]
                mats.append(
                    ff.mul(ff.mul(src_img.data["rep_rows"][ov], f.mats[ov], p),
                           dst_img.data["projection"].mats[ov], p)
                )
            return Morphism(src_img.module, dst_img.module, tuple(mats))
        if tag == "j_upper":
            mats = [f.mats[self.c_data.vertex_map[v]] for v in range(self.c_alg.nv)]
            return Morphism(src_img.module, dst_img.module, tuple(mats))
        if tag == "j_lower_shriek":
            mats = []
            for v in range(a.nv):
                slots_s = src_img.data["slots"][v]
                slots_d = dst_img.data["slots"][v]
                idx_d = dst_img.data["index"][v]
                big = np.zeros((len(slots_s), len(slots_d)), dtype=np.int64)
                for k, (x, r) in enumerate(slots_s):
                    w = self.a_to_c[a.src[x]]
                    fr = f.mats[w][r]
                    for r2 in np.nonzero(fr)[0]:
                        big[k, idx_d[(x, int(r2))]] = fr[r2]
                mats.append(ff.mul(ff.mul(src_img.data["comp"][v], big, p),
                                   dst_img.data["proj"][v], p))
            return Morphism(src_img.module, dst_img.module, tuple(mats))
        if tag == "j_star":
            return self._j_star_morphism(f, src_img, dst_img)
        if tag == "j_intermediate":
            inner = self._j_star_morphism(
                f,
                self.apply_with_data("j_star", f.src),
                self.apply_with_data("j_star", f.dst),
            )
            mats = []
            for v in range(a.nv):
                pushed = ff.mul(src_img.data["rows"][v], inner.mats[v], p)
                coords = ff.express_in_rows(pushed, dst_img.data["rows"][v], p)
                assert coords is not None
                mats.append(coords)
            return Morphism(src_img.module, dst_img.module, tuple(mats))
        raise InputError(f"unknown functor tag {tag!r}")

    def _j_star_morphism(self, f: Morphism, src_img: FunctorImage,
                         dst_img: FunctorImage) -> Morphism:
        a, p = self.a, f.p
        mats = []
        for v in range(a.nv):
            slots_s = src_img.data["slots"][v]
            slots_d = dst_img.data["slots"][v]
            idx_d = dst_img.data["index"][v]
            big = np.zeros((len(slots_s), len(slots_d)), dtype=np.int64)
            for k, (y, r) in enumerate(slots_s):
                w = self.a_to_c[a.tgt[y]]
                fr = f.mats[w][r]
                for r2 in np.nonzero(fr)[0]:
                    big[k, idx_d[(y, int(r2))]] = fr[r2]
            pushed = ff.mul(src_img.data["sol"][v], big, p)
            coords = ff.express_in_rows(pushed, dst_img.data["sol"][v], p)
            assert coords is not None
            mats.append(coords)
        return Morphism(src_img.module, dst_img.module, tuple(mats))

    # -- canonical maps --------------------------------------------------------

    def counit_into(self, t: Module) -> Morphism:
        """The canonical inclusion i_* i^! T -> T."""
        img = self.apply_with_data("i_shriek", t)
        transported = self._i_star(img.module).module
        mats = []
        for v in range(self.a.nv):
            if v in self.e_set:
                mats.append(ff.zeros(0, t.dims[v]))
            else:
                mats.append(img.data["rows"][v])
        return Morphism(transported, t, tuple(mats))

    def unit_out_of(self, t: Module) -> Morphism:
        """The canonical map T -> j_* j^* T."""
        n = self.apply("j_upper", t)
        js = self.apply_with_data("j_star", n)
        a, p = self.a, t.p
        mats = []
        for v in range(a.nv):
            slots = js.data["slots"][v]
            idx = js.data["index"][v]
            big = np.zeros((t.dims[v], len(slots)), dtype=np.int64)
            for y, r in slots:
                col = t.act_block(y)[:, r] if t.dims[v] else np.zeros(0, dtype=np.int64)
                big[:, idx[(y, r)]] = col
            coords = ff.express_in_rows(big, js.data["sol"][v], p)
            if coords is None:
                raise InputError("unit of (j^*, j_*) left the C-linear subspace")
            mats.append(coords)
        return Morphism(t, js.module, tuple(mats))

    # -- exactness of i^! -------------------------------------------------------

    def is_i_shriek_exact(self) -> tuple[bool, ExactnessCertificate]:
        if self._cert is None:
            self._cert = self._compute_exactness()
        return self._cert.exact, self._cert

    def _exactness_sequences(self):
        b_reg = regular_module(self.b_alg)
        b_as_a = self._i_star(b_reg).module
        yield "projective presentation of A/AeA", projective_presentation(b_as_a)
        for uid in self.u_a.ids:
            m = self.u_a.module(uid)
            for rows in submodule_rows(m, self.thresholds):
                total = sum(r.shape[0] for r in rows)
                if total == 0 or total == m.total_dim:
                    continue
                sub, incl = submodule_from_rows(m, list(rows))
                parts = quotient_by_rows(m, list(rows))
                yield (f"submodule sequence in universe member {uid}",
                       ShortExactSequence(incl, parts.projection))

    def _compute_exactness(self) -> ExactnessCertificate:
        b_reg = regular_module(self.b_alg)
        b_as_a = self._i_star(b_reg).module
        pres = projective_presentation(b_as_a)
        structural = is_split(pres)

        direct = True
        witness = None
        for name, ses in self._exactness_sequences():
            ik = self.apply_to_morphism("i_shriek", ses.mono)
            pk = self.apply_to_morphism("i_shriek", ses.epi)
            left_ok = is_injective(ik)
            middle_ok = all(
                ff.row_spaces_equal(
                    ff.row_space_basis(ik.mats[v], ik.p),
                    ff.row_kernel(pk.mats[v], pk.p),
                    ik.p,
                )
                for v in range(self.b_alg.nv)
            )
            right_ok = is_surjective(pk)
            if not (left_ok and middle_ok and right_ok):
                direct = False
                witness = name
                break
        if structural != direct:
            raise VerificationFailure(
                "i^! exactness verdicts disagree: structural "
                f"{structural} vs direct {direct} (witness: {witness}); "
                "this flags an implementation or convention bug"
            )
        return ExactnessCertificate(structural and direct, structural, direct, witness)

    # -- light build-time self check -------------------------------------------

    def _light_self_check(self) -> None:
        for uid in self.u_b.ids:
            x = self.u_b.module(uid)
            as_a = self._i_star(x).module
            if self.apply("j_upper", as_a).total_dim != 0:
                raise VerificationFailure(
                    f"j^* i_* is nonzero on mod-B universe member {uid}; "
                    "recollement convention mis-wired"
                )
            back = self._i_shriek(as_a).module
            if not is_isomorphic(back, x, self.thresholds):
                raise VerificationFailure(
                    f"i^! i_* is not the identity on mod-B universe member {uid}"
                )

    # -- axiom report (adjunctions, units, Im i_* = Ker j^*) --------------------

    def axiom_report(self) -> dict:
        report: dict = {"ok": True, "laws": {}, "counterexamples": []}

        def law(name, ok, payload=None):
            report["laws"][name] = report["laws"].get(name, True) and bool(ok)
            if not ok:
                report["ok"] = False
                report["counterexamples"].append({"law": name, "payload": payload})

        th = self.thresholds
        for uid in self.u_a.ids:
            m = self.u_a.module(uid)
            i_up = self.apply("i_upper", m)
            i_sh = self.apply("i_shriek", m)
            for xid in self.u_b.ids:
                x = self.u_b.module(xid)
                xa = self.apply("i_star", x)
                law("adjunction_i_upper",
                    len(hom_basis(i_up, x)) == len(hom_basis(m, xa)),
                    {"member": uid, "edge": xid})
                law("adjunction_i_shriek",
                    len(hom_basis(xa, m)) == len(hom_basis(x, i_sh)),
                    {"member": uid, "edge": xid})
            j_up = self.apply("j_upper", m)
            for nid in self.u_c.ids:
                n = self.u_c.module(nid)
                jl = self.apply("j_lower_shriek", n)
                js = self.apply("j_star", n)
                law("adjunction_j_lower",
                    len(hom_basis(jl, m)) == len(hom_basis(n, j_up)),
                    {"member": uid, "edge": nid})
                law("adjunction_j_star",
                    len(hom_basis(j_up, n)) == len(hom_basis(m, js)),
                    {"member": uid, "edge": nid})
            # Im i_* = Ker j^* on the universe: M is killed by j^* iff the
            # canonical inclusion i_* i^! M -> M is all of M
            kernel_side = j_up.total_dim == 0
            image_side = self.counit_into(m).src.total_dim == m.total_dim
            law("im_i_star_equals_ker_j_upper", kernel_side == image_side, {"member": uid})
        for xid in self.u_b.ids:
            x = self.u_b.module(xid)
            xa = self.apply("i_star", x)
            law("i_upper_i_star_id",
                is_isomorphic(self.apply("i_upper", xa), x, th), {"edge": xid})
            law("i_shriek_i_star_id",
                is_isomorphic(self.apply("i_shriek", xa), x, th), {"edge": xid})
        for nid in self.u_c.ids:
            n = self.u_c.module(nid)
            jl = self.apply("j_lower_shriek", n)
            js = self.apply("j_star", n)
            law("j_upper_j_lower_id",
                is_isomorphic(self.apply("j_upper", jl), n, th), {"edge": nid})
            law("j_upper_j_star_id",
                is_isomorphic(self.apply("j_upper", js), n, th), {"edge": nid})
            law("i_upper_j_lower_zero",
                self.apply("i_upper", jl).total_dim == 0, {"edge": nid})
            law("i_shriek_j_star_zero",
                self.apply("i_shriek", js).total_dim == 0, {"edge": nid})
        return report

    def exactness_consequences_report(self) -> dict:
        """Objectwise laws that hold when i^! is exact."""
        exact, cert = self.is_i_shriek_exact()
        report: dict = {"ok": True, "hypothesis_exact": exact,
                        "certificate": cert.as_dict(), "laws": {}, "counterexamples": []}
        if not exact:
            report["skipped"] = True
            return report

        def law(name, ok, payload=None):
            report["laws"][name] = report["laws"].get(name, True) and bool(ok)
            if not ok:
                report["ok"] = False
                report["counterexamples"].append({"law": name, "payload": payload})

        for nid in self.u_c.ids:
            n = self.u_c.module(nid)
            js = self.apply("j_star", n)
            law("i_upper_j_star_zero", self.apply("i_upper", js).total_dim == 0,
                {"edge": nid})
            law("j_intermediate_is_j_star",
                is_isomorphic(self.apply("j_intermediate", n), js, self.thresholds),
                {"edge": nid})
        for uid in self.u_a.ids:
            m = self.u_a.module(uid)
            ses = ShortExactSequence(self.counit_into(m), self.unit_out_of(m))
            law("canonical_sequence_exact", ses.validate(), {"member": uid})
        return report

    def simple_gluing_report(self) -> dict:
        """Every simple A-module is i_* of a simple or j_!* of a simple."""
        report: dict = {"ok": True, "counterexamples": []}
        simples_b = [self.apply("i_star", Module.simple(self.b_alg, v))
                     for v in range(self.b_alg.nv)]
        simples_c = [self.apply("j_intermediate", Module.simple(self.c_alg, v))
                     for v in range(self.c_alg.nv)]
        for v in range(self.a.nv):
            s = Module.simple(self.a, v)
            hit = any(is_isomorphic(s, t, self.thresholds) for t in simples_b + simples_c)
            if not hit:
                report["ok"] = False
                report["counterexamples"].append({"simple_at_vertex": self.a.vertex_labels[v]})
        return report


def build_recollement(a: Algebra, e: IdempotentSpec, *, bound: int,
                      thresholds: Thresholds | None = None,
                      self_check: bool = True) -> Recollement:
    from .modules import DEFAULT_THRESHOLDS

    return Recollement(a, e, bound, thresholds or DEFAULT_THRESHOLDS, self_check)


# ---------------------------------------------------------------------------
# gluing and restriction


def _comprehension(r: Recollement, e_y: Subcategory, e_z: Subcategory) -> Subcategory:
    """{X : j^* X in E_Z and i^! X in E_Y} over the universe of mod A."""
    y_ids, z_ids = set(e_y.ids), set(e_z.ids)
    members = []
    for uid in r.u_a.ids:
        if set(r.image_ids("j_upper", uid)) <= z_ids and \
                set(r.image_ids("i_shriek", uid)) <= y_ids:
            members.append(uid)
    return Subcategory(r.u_a, tuple(members))


def _require_exact(r: Recollement, allow_unverified: bool) -> bool:
    exact, _ = r.is_i_shriek_exact()
    if not exact and not allow_unverified:
        raise InputError(
            "gluing requires the i^! exactness certificate; rerun with the "
            "unverified-hypothesis override to experiment"
        )
    return exact


def glue_left_schur(r: Recollement, e_y: Subcategory, e_z: Subcategory,
                    *, allow_unverified: bool = False) -> Subcategory:
    _require_exact(r, allow_unverified)
    return _comprehension(r, e_y, e_z)


def glue_wide(r: Recollement, w_y: Subcategory, w_z: Subcategory,
              *, allow_unverified: bool = False) -> Subcategory:
    _require_exact(r, allow_unverified)
    return _comprehension(r, w_y, w_z)


def glue_torf(r: Recollement, f_y: Subcategory, f_z: Subcategory) -> Subcategory:
    # no exactness hypothesis for torsion-free gluing
    return _comprehension(r, f_y, f_z)


def _map_brickset(r: Recollement, tag: str, s: BrickSet) -> list[int]:
    out = []
    for uid in s.ids:
        ids = r.image_ids(tag, uid)
        if len(ids) != 1:
            raise VerificationFailure(
                f"{tag} of brick {uid} is not indecomposable: {list(ids)}"
            )
        out.append(ids[0])
    return out


def glue_monobrick(r: Recollement, m_y: BrickSet, m_z: BrickSet,
                   variant: str = "general",
                   *, allow_unverified: bool = False) -> BrickSet:
    """i_*(M_Y) ⊔ j_!*(M_Z); the cc variant uses j_* and demands exactness."""
    th = r.thresholds
    if not is_monobrick(m_y, th) or not is_monobrick(m_z, th):
        raise InputError("glue_monobrick requires monobrick inputs")
    if variant == "cc":
        ambient_y = brick_set(r.u_b, [i for i in r.u_b.ids
                                      if _is_brick_id(r.u_b, i, th)], validate=False)
        ambient_z = brick_set(r.u_c, [i for i in r.u_c.ids
                                      if _is_brick_id(r.u_c, i, th)], validate=False)
        if not is_cofinally_closed(m_y, ambient_y, th) or \
                not is_cofinally_closed(m_z, ambient_z, th):
            raise InputError("cc variant requires cofinally closed inputs")
        _require_exact(r, allow_unverified)
        z_tag = "j_star"
    elif variant == "general":
        z_tag = "j_intermediate"
    else:
        raise InputError(f"unknown variant {variant!r}")
    ids = _map_brickset(r, "i_star", m_y) + _map_brickset(r, z_tag, m_z)
    out = brick_set(r.u_a, ids, thresholds=th)
    if not is_monobrick(out, th):
        raise VerificationFailure(
            f"glued set {list(out.ids)} is not a monobrick (inputs "
            f"{list(m_y.ids)} / {list(m_z.ids)})"
        )
    if variant == "cc":
        ambient = brick_set(r.u_a, [i for i in r.u_a.ids
                                    if _is_brick_id(r.u_a, i, th)], validate=False)
        if not is_cofinally_closed(out, ambient, th):
            raise VerificationFailure(
                f"glued monobrick {list(out.ids)} is not cofinally closed"
            )
    return out


def glue_semibrick(r: Recollement, s_y: BrickSet, s_z: BrickSet) -> BrickSet:
    th = r.thresholds
    if not is_semibrick(s_y, th) or not is_semibrick(s_z, th):
        raise InputError("glue_semibrick requires semibrick inputs")
    ids = _map_brickset(r, "i_star", s_y) + _map_brickset(r, "j_intermediate", s_z)
    out = brick_set(r.u_a, ids, thresholds=th)
    if not is_semibrick(out, th):
        raise VerificationFailure(
            f"glued set {list(out.ids)} is not a semibrick (inputs "
            f"{list(s_y.ids)} / {list(s_z.ids)})"
        )
    return out


def _is_brick_id(u: IndecUniverse, uid: int, th: Thresholds) -> bool:
    from .modules import is_brick

    cache = getattr(u, "_brick_cache", None)
    if cache is None:
        cache = u._brick_cache = {}
    if uid not in cache:
        cache[uid] = is_brick(u.module(uid), th)
    return cache[uid]


def restrict(r: Recollement, e_x: Subcategory) -> tuple[Subcategory, Subcategory]:
    """(decomposed i^! image, decomposed j^* image) of a subcategory of mod A."""
    y_ids: set[int] = set()
    z_ids: set[int] = set()
    for uid in e_x.ids:
        y_ids.update(r.image_ids("i_shriek", uid))
        z_ids.update(r.image_ids("j_upper", uid))
    return Subcategory(r.u_b, tuple(sorted(y_ids))), Subcategory(r.u_c, tuple(sorted(z_ids)))


# ---------------------------------------------------------------------------
# theorem sweeps


LAW_ALIASES = {
    "3.2": "schur", "3.3": "wide", "3.4": "torf", "3.5": "cc-monobrick",
    "schur": "schur", "wide": "wide", "torf": "torf",
    "cc-monobrick": "cc-monobrick",
}


def verify_theorem(r: Recollement, which: str) -> dict:
    """Exhaustive biconditional sweep of one gluing law over all edge pairs.

    For the subcategory laws: over every pair of edge id-subsets, the glued
    comprehension passes the predicate iff both edges do.  For the monobrick
    law: over every pair of edge monobricks, the glued set is a monobrick and
    is cofinally closed iff both inputs are.
    """
    law = LAW_ALIASES.get(which)
    if law is None:
        raise InputError(f"unknown law {which!r}; use 3.2/3.3/3.4/3.5 or an alias")
    th = r.thresholds
    exact, cert = r.is_i_shriek_exact()
    report: dict = {
        "law": law, "ok": True, "hypothesis_exact": exact,
        "certificate": cert.as_dict(),
        "pairs_checked": 0, "counterexamples": [],
    }
    needs_exact = law in ("schur", "wide", "cc-monobrick")
    if needs_exact and not exact:
        report["skipped"] = True
        report["reason"] = "i^! is not exact; the law's hypothesis fails here"
        return report

    def fail(payload):
        report["ok"] = False
        report["counterexamples"].append(payload)

    if law in ("schur", "wide", "torf"):
        pred = {"schur": is_left_schur, "wide": is_wide, "torf": is_torsion_free}[law]
        nb, nc = len(r.u_b), len(r.u_c)
        if 2 ** (nb + nc) > th.subset_cap:
            raise BudgetExceeded("edge subset sweep too large",
                                 needed=2 ** (nb + nc), limit=th.subset_cap)
        for y_bits in range(2 ** nb):
            y_ids = tuple(i for i in range(nb) if y_bits >> i & 1)
            e_y = Subcategory(r.u_b, y_ids)
            y_ok = pred(r.u_b, e_y, th)
            for z_bits in range(2 ** nc):
                z_ids = tuple(i for i in range(nc) if z_bits >> i & 1)
                e_z = Subcategory(r.u_c, z_ids)
                z_ok = pred(r.u_c, e_z, th)
                e_x = _comprehension(r, e_y, e_z)
                x_ok = pred(r.u_a, e_x, th)
                report["pairs_checked"] += 1
                if x_ok != (y_ok and z_ok):
                    fail({"e_y": list(y_ids), "e_z": list(z_ids),
                          "e_x": list(e_x.ids), "edges_pass": y_ok and z_ok,
                          "glued_passes": x_ok})
                elif x_ok:
                    back_y, back_z = restrict(r, e_x)
                    if back_y.ids != e_y.ids or back_z.ids != e_z.ids:
                        fail({"e_y": list(y_ids), "e_z": list(z_ids),
                              "restriction_mismatch": [list(back_y.ids), list(back_z.ids)]})
        return report

    # cc-monobrick law
    from .census import all_monobricks

    mono_b = all_monobricks(r.u_b, th)
    mono_c = all_monobricks(r.u_c, th)
    for eb in mono_b.entries:
        m_y = brick_set(r.u_b, eb.ids, validate=False)
        for ec in mono_c.entries:
            m_z = brick_set(r.u_c, ec.ids, validate=False)
            glued = glue_monobrick(r, m_y, m_z, variant="general")
            report["pairs_checked"] += 1
            ambient = brick_set(r.u_a, [i for i in r.u_a.ids
                                        if _is_brick_id(r.u_a, i, th)], validate=False)
            glued_cc = is_cofinally_closed(glued, ambient, th)
            edges_cc = eb.flags["cofinally_closed"] and ec.flags["cofinally_closed"]
            if glued_cc != edges_cc:
                fail({"m_y": list(eb.ids), "m_z": list(ec.ids),
                      "glued": list(glued.ids), "edges_cc": edges_cc,
                      "glued_cc": glued_cc})
    return report
