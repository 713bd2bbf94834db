"""Right modules over a structure-constant algebra, and their homological calculus.

A module is stored per vertex: a dimension vector plus one action matrix for
every non-vertex basis element of the algebra.  Module elements are ROW
vectors; for x at vertex s and a basis element b: s -> t, the action is
x @ act[b].  A morphism is one matrix per vertex, and f(x) = x @ mats[v];
the intertwining law reads  act_M[b] @ F_t == F_s @ act_N[b].

Everything here is exact arithmetic over F_p and deterministic: scans run in
a fixed order, and the brute-force universe enumeration assigns canonical
representatives by first discovery.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from . import fields as ff
from .algebras import Algebra
from .errors import BudgetExceeded, InputError, UniverseExhausted


@dataclass(frozen=True)
class Thresholds:
    """Search budgets; exceeding any of them raises BudgetExceeded."""

    scan_limit: int = 2**20          # elements of a Hom/End space scanned exhaustively
    submodule_vectors: int = 2**16   # cyclic generators tried per module
    submodule_count: int = 4096      # distinct submodules kept per module
    enumeration_states: int = 2**22  # action tuples tried per universe build
    subset_cap: int = 2**12          # subcategory candidates in oracle enumerations


DEFAULT_THRESHOLDS = Thresholds()


class Module:
    """Finite-dimensional right module over an Algebra."""

    __slots__ = ("algebra", "dims", "act")

    def __init__(
        self,
        algebra: Algebra,
        dims: tuple[int, ...],
        act: dict[int, np.ndarray],
        *,
        check: bool = False,
    ):
        self.algebra = algebra
        self.dims = tuple(int(d) for d in dims)
        if len(self.dims) != algebra.nv or any(d < 0 for d in self.dims):
            raise InputError("dimension vector does not match the algebra")
        self.act = act
        for i in range(algebra.nv, algebra.dim):
            s, t = algebra.src[i], algebra.tgt[i]
            if act[i].shape != (self.dims[s], self.dims[t]):
                raise InputError(f"action block for {algebra.labels[i]} has wrong shape")
        if check and not self.verify():
            raise InputError("action matrices do not satisfy the algebra relations")

    @classmethod
    def from_arrows(
        cls,
        algebra: Algebra,
        dims: tuple[int, ...],
        arrow_mats: dict[int, np.ndarray],
        *,
        check: bool = True,
    ) -> "Module":
        """Build from matrices on the arrow generators; the rest is derived."""
        dims = tuple(int(d) for d in dims)
        if check and not satisfies_relations(algebra, dims, arrow_mats):
            raise InputError("arrow matrices violate the algebra relations")
        act = materialize_action(algebra, dims, arrow_mats)
        return cls(algebra, dims, act)

    @classmethod
    def zero(cls, algebra: Algebra) -> "Module":
        dims = (0,) * algebra.nv
        act = {
            i: ff.zeros(0, 0)
            for i in range(algebra.nv, algebra.dim)
        }
        return cls(algebra, dims, act)

    @classmethod
    def simple(cls, algebra: Algebra, vertex: int) -> "Module":
        dims = tuple(1 if v == vertex else 0 for v in range(algebra.nv))
        act = {}
        for i in range(algebra.nv, algebra.dim):
            act[i] = ff.zeros(dims[algebra.src[i]], dims[algebra.tgt[i]])
        return cls(algebra, dims, act)

    @property
    def p(self) -> int:
        return self.algebra.p

    @property
    def total_dim(self) -> int:
        return sum(self.dims)

    @property
    def is_zero(self) -> bool:
        return self.total_dim == 0

    def act_block(self, i: int) -> np.ndarray:
        """Action of basis element i (vertex idempotents act as identity)."""
        if i < self.algebra.nv:
            return ff.eye(self.dims[i])
        return self.act[i]

    def act_of_vector(self, vec: np.ndarray, s: int, t: int) -> np.ndarray:
        """Action of an algebra element (coefficient vector) on the (s, t) block."""
        out = ff.zeros(self.dims[s], self.dims[t])
        for k in np.nonzero(vec)[0]:
            k = int(k)
            if self.algebra.src[k] == s and self.algebra.tgt[k] == t:
                out = (out + vec[k] * self.act_block(k)) % self.p
        return out

    def verify(self) -> bool:
        """Full structure-constant compatibility check (used by tests)."""
        a = self.algebra
        for i in range(a.dim):
            for j in range(a.dim):
                if a.tgt[i] != a.src[j]:
                    continue
                lhs = ff.mul(self.act_block(i), self.act_block(j), self.p)
                rhs = ff.zeros(self.dims[a.src[i]], self.dims[a.tgt[j]])
                vec = a.mult[i, j]
                for k in np.nonzero(vec)[0]:
                    rhs = (rhs + vec[k] * self.act_block(int(k))) % self.p
                if not np.array_equal(lhs, rhs):
                    return False
        return True

    def __repr__(self) -> str:
        return f"Module(dims={list(self.dims)})"


def materialize_action(
    algebra: Algebra, dims: tuple[int, ...], arrow_mats: dict[int, np.ndarray]
) -> dict[int, np.ndarray]:
    pres = algebra.presentation
    p = algebra.p
    memo: dict[tuple[int, ...], np.ndarray] = {}

    def wmat(w: tuple[int, ...]) -> np.ndarray:
        if w not in memo:
            if len(w) == 1:
                memo[w] = arrow_mats[w[0]] % p
            else:
                memo[w] = ff.mul(wmat(w[:-1]), arrow_mats[w[-1]], p)
        return memo[w]

    act: dict[int, np.ndarray] = {}
    for i in range(algebra.nv, algebra.dim):
        s, t = algebra.src[i], algebra.tgt[i]
        out = ff.zeros(dims[s], dims[t])
        for coeff, wi in pres.expressions[i]:
            out = (out + coeff * wmat(pres.words[wi])) % p
        act[i] = out
    return act


def satisfies_relations(
    algebra: Algebra, dims: tuple[int, ...], arrow_mats: dict[int, np.ndarray]
) -> bool:
    pres = algebra.presentation
    p = algebra.p
    memo: dict[tuple[int, ...], np.ndarray] = {}

    def wmat(w: tuple[int, ...]) -> np.ndarray:
        if w not in memo:
            if len(w) == 1:
                memo[w] = arrow_mats[w[0]] % p
            else:
                memo[w] = ff.mul(wmat(w[:-1]), arrow_mats[w[-1]], p)
        return memo[w]

    for rel in pres.relations:
        acc: np.ndarray | None = None
        for coeff, wi in rel:
            m = wmat(pres.words[wi])
            acc = (coeff * m) % p if acc is None else (acc + coeff * m) % p
        if acc is not None and acc.any():
            return False
    return True


class Morphism:
    """Module map given by one matrix per vertex (row-vector convention)."""

    __slots__ = ("src", "dst", "mats")

    def __init__(self, src: Module, dst: Module, mats, *, check: bool = False):
        self.src = src
        self.dst = dst
        self.mats = tuple(m % src.p for m in mats)
        for v in range(src.algebra.nv):
            if self.mats[v].shape != (src.dims[v], dst.dims[v]):
                raise InputError(f"morphism block at vertex {v} has wrong shape")
        if check and not self.intertwines():
            raise InputError("matrices do not intertwine the actions")

    @property
    def p(self) -> int:
        return self.src.p

    def intertwines(self) -> bool:
        for a in self.src.algebra.arrows:
            s, t = self.src.algebra.src[a], self.src.algebra.tgt[a]
            lhs = ff.mul(self.src.act[a], self.mats[t], self.p)
            rhs = ff.mul(self.mats[s], self.dst.act[a], self.p)
            if not np.array_equal(lhs, rhs):
                return False
        return True

    @classmethod
    def identity(cls, m: Module) -> "Morphism":
        return cls(m, m, tuple(ff.eye(d) for d in m.dims))

    @classmethod
    def zero_map(cls, src: Module, dst: Module) -> "Morphism":
        return cls(src, dst, tuple(ff.zeros(a, b) for a, b in zip(src.dims, dst.dims)))

    def then(self, other: "Morphism") -> "Morphism":
        """Composite self followed by other."""
        return Morphism(
            self.src, other.dst,
            tuple(ff.mul(a, b, self.p) for a, b in zip(self.mats, other.mats)),
        )

    def plus(self, other: "Morphism") -> "Morphism":
        return Morphism(
            self.src, self.dst,
            tuple((a + b) % self.p for a, b in zip(self.mats, other.mats)),
        )

    def scaled(self, c: int) -> "Morphism":
        return Morphism(self.src, self.dst, tuple((c * a) % self.p for a in self.mats))

    @property
    def is_zero(self) -> bool:
        return all(not m.any() for m in self.mats)

    def flat(self) -> np.ndarray:
        parts = [m.ravel() for m in self.mats]
        return np.concatenate(parts) if parts else np.zeros(0, dtype=np.int64)

    def __repr__(self) -> str:
        return f"Morphism({list(self.src.dims)} -> {list(self.dst.dims)})"


def is_injective(f: Morphism) -> bool:
    """True iff every vertex matrix has trivial row kernel."""
    return all(ff.row_kernel(m, f.p).shape[0] == 0 for m in f.mats)


def is_surjective(f: Morphism) -> bool:
    return all(ff.rank(m, f.p) == f.dst.dims[v] for v, m in enumerate(f.mats))


def is_isomorphism(f: Morphism) -> bool:
    return f.src.dims == f.dst.dims and all(ff.is_invertible(m, f.p) for m in f.mats)


# ---------------------------------------------------------------------------
# Hom spaces


def hom_basis(m: Module, n: Module) -> list[Morphism]:
    """Basis of the intertwiner space Hom(m, n).

    Solved as the kernel of the commuting-square constraints over all arrow
    generators; multiplicativity extends the law to the whole algebra.
    """
    if not m.algebra.same_as(n.algebra):
        raise InputError("modules live over different algebras")
    alg = m.algebra
    p = m.p
    nv = alg.nv
    offsets = []
    total = 0
    for v in range(nv):
        offsets.append(total)
        total += m.dims[v] * n.dims[v]
    if total == 0:
        return []
    rows: list[np.ndarray] = []
    for a in alg.arrows:
        s, t = alg.src[a], alg.tgt[a]
        neq = m.dims[s] * n.dims[t]
        if neq == 0:
            continue
        block = np.zeros((neq, total), dtype=np.int64)
        if m.dims[t] and n.dims[t]:
            lhs = ff.kronecker_product(m.act[a], ff.eye(n.dims[t]), p)
            block[:, offsets[t] : offsets[t] + m.dims[t] * n.dims[t]] = lhs
        if m.dims[s] and n.dims[s]:
            rhs = ff.kronecker_product(ff.eye(m.dims[s]), n.act[a].T, p)
            block[:, offsets[s] : offsets[s] + m.dims[s] * n.dims[s]] = (
                block[:, offsets[s] : offsets[s] + m.dims[s] * n.dims[s]] - rhs
            ) % p
        rows.append(block)
    if rows:
        system = np.concatenate(rows)
        sol = ff.kernel_basis(system, p)
    else:
        sol = ff.eye(total)
    out = []
    for k in range(sol.shape[1]):
        vec = sol[:, k]
        mats = []
        for v in range(nv):
            size = m.dims[v] * n.dims[v]
            mats.append(vec[offsets[v] : offsets[v] + size].reshape(m.dims[v], n.dims[v]))
        out.append(Morphism(m, n, tuple(mats)))
    return out


class HomSpace:
    """A Hom space with exhaustive, threshold-guarded element iteration."""

    def __init__(self, m: Module, n: Module, basis: list[Morphism] | None = None):
        self.src = m
        self.dst = n
        self.basis = hom_basis(m, n) if basis is None else basis
        self.p = m.p

    @property
    def dim(self) -> int:
        return len(self.basis)

    def element(self, coeffs) -> Morphism:
        out = Morphism.zero_map(self.src, self.dst)
        for c, f in zip(coeffs, self.basis):
            if c % self.p:
                out = out.plus(f.scaled(c))
        return out

    def elements(self, *, include_zero: bool = False, thresholds: Thresholds = DEFAULT_THRESHOLDS):
        count = self.p ** self.dim
        if count > thresholds.scan_limit:
            raise BudgetExceeded(
                "Hom-space scan too large; raise scan_limit or shrink the instance",
                needed=count, limit=thresholds.scan_limit,
            )
        for coeffs in itertools.product(range(self.p), repeat=self.dim):
            if not include_zero and not any(coeffs):
                continue
            yield self.element(coeffs)

    def coordinates_of(self, f: Morphism) -> np.ndarray | None:
        if not self.basis:
            return np.zeros(0, dtype=np.int64) if f.is_zero else None
        mat = np.array([g.flat() for g in self.basis])
        sol = ff.express_in_rows(f.flat().reshape(1, -1), mat, self.p)
        return None if sol is None else sol[0]


# ---------------------------------------------------------------------------
# kernels, images, cokernels, sums


def kernel(f: Morphism) -> tuple[Module, Morphism]:
    """Vertex-wise kernel with induced action and canonical inclusion."""
    p = f.p
    alg = f.src.algebra
    rows = [ff.row_kernel(f.mats[v], p) for v in range(alg.nv)]
    return submodule_from_rows(f.src, rows)


def image(f: Morphism) -> tuple[Module, Morphism]:
    """Image submodule of the target with canonical inclusion."""
    p = f.p
    rows = [ff.row_space_basis(f.mats[v], p) for v in range(f.src.algebra.nv)]
    return submodule_from_rows(f.dst, rows)


@dataclass
class QuotientParts:
    module: Module
    projection: Morphism
    rep_rows: tuple[np.ndarray, ...]  # class representatives inside the ambient


def cokernel(f: Morphism) -> tuple[Module, Morphism]:
    parts = quotient_by_rows(
        f.dst, [ff.row_space_basis(f.mats[v], f.p) for v in range(f.dst.algebra.nv)]
    )
    return parts.module, parts.projection


def submodule_from_rows(m: Module, rows: list[np.ndarray]) -> tuple[Module, Morphism]:
    """Submodule spanned vertex-wise by the given row spaces (must be action-closed)."""
    p = m.p
    alg = m.algebra
    rows = [ff.row_space_basis(r, p) for r in rows]
    dims = tuple(r.shape[0] for r in rows)
    act = {}
    for a in range(alg.nv, alg.dim):
        s, t = alg.src[a], alg.tgt[a]
        pushed = ff.mul(rows[s], m.act_block(a), p)
        coords = ff.express_in_rows(pushed, rows[t], p)
        if coords is None:
            raise InputError("rows are not closed under the action")
        act[a] = coords
    sub = Module(alg, dims, act)
    incl = Morphism(sub, m, tuple(rows))
    return sub, incl


def quotient_by_rows(m: Module, rows: list[np.ndarray]) -> QuotientParts:
    """Quotient of m by the action-closed submodule spanned by the rows."""
    p = m.p
    alg = m.algebra
    sub_rows = [ff.row_space_basis(r, p) for r in rows]
    comp = [ff.quotient_basis(sub_rows[v], ff.eye(m.dims[v]), p) for v in range(alg.nv)]
    projs = []
    for v in range(alg.nv):
        r = sub_rows[v].shape[0]
        full = np.concatenate([sub_rows[v], comp[v]]) if m.dims[v] else ff.zeros(0, 0)
        if m.dims[v]:
            inv = ff.solve(full, ff.eye(m.dims[v]), p)
            assert inv is not None
            projs.append(inv[:, r:])
        else:
            projs.append(ff.zeros(0, 0))
    dims = tuple(c.shape[0] for c in comp)
    act = {}
    for a in range(alg.nv, alg.dim):
        s, t = alg.src[a], alg.tgt[a]
        act[a] = ff.mul(ff.mul(comp[s], m.act_block(a), p), projs[t], p)
    quot = Module(alg, dims, act)
    proj = Morphism(m, quot, tuple(projs))
    return QuotientParts(quot, proj, tuple(comp))


def direct_sum(ms: list[Module], algebra: Algebra | None = None):
    """Block-diagonal sum with canonical inclusions and projections."""
    if not ms:
        if algebra is None:
            raise InputError("empty direct sum needs an explicit algebra")
        z = Module.zero(algebra)
        return z, [], []
    alg = ms[0].algebra
    p = ms[0].p
    dims = tuple(sum(m.dims[v] for m in ms) for v in range(alg.nv))
    act = {}
    for a in range(alg.nv, alg.dim):
        s, t = alg.src[a], alg.tgt[a]
        block = ff.zeros(dims[s], dims[t])
        ro = co = 0
        for m in ms:
            ds, dt = m.dims[s], m.dims[t]
            block[ro : ro + ds, co : co + dt] = m.act_block(a)
            ro += ds
            co += dt
        act[a] = block
    total = Module(alg, dims, act)
    inclusions = []
    projections = []
    offset = [0] * alg.nv
    for m in ms:
        incl_mats = []
        proj_mats = []
        for v in range(alg.nv):
            inc = ff.zeros(m.dims[v], dims[v])
            prj = ff.zeros(dims[v], m.dims[v])
            inc[:, offset[v] : offset[v] + m.dims[v]] = ff.eye(m.dims[v])
            prj[offset[v] : offset[v] + m.dims[v], :] = ff.eye(m.dims[v])
            incl_mats.append(inc)
            proj_mats.append(prj)
        inclusions.append(Morphism(m, total, tuple(incl_mats)))
        projections.append(Morphism(total, m, tuple(proj_mats)))
        for v in range(alg.nv):
            offset[v] += m.dims[v]
    return total, inclusions, projections


# ---------------------------------------------------------------------------
# endomorphism scans: iso, indecomposability, brick


def _end_space(m: Module) -> HomSpace:
    return HomSpace(m, m)


def is_isomorphic(
    m: Module, n: Module, thresholds: Thresholds = DEFAULT_THRESHOLDS
) -> bool:
    """Exhaustive search for an invertible intertwiner, with cheap pre-filters."""
    if m.is_zero and n.is_zero:
        return True
    if m.dims != n.dims:
        return False
    hom = HomSpace(m, n)
    if hom.dim == 0:
        return False
    if len(hom_basis(n, m)) != hom.dim:
        return False
    for f in hom.elements(thresholds=thresholds):
        if is_isomorphism(f):
            return True
    return False


def _fitting_split(m: Module) -> tuple[list[np.ndarray], list[np.ndarray]] | None:
    """Split m = im(f^N) ⊕ ker(f^N) off a basis endomorphism, if one works.

    Sound but not complete: a hit proves decomposability and returns the two
    row spaces; no hit decides nothing.
    """
    n = m.total_dim
    for f in hom_basis(m, m):
        power = f
        for _ in range(max(n.bit_length(), 1)):
            power = power.then(power)  # f^(2^k) stabilizes once 2^k >= n
        r = sum(ff.rank(mat, m.p) for mat in power.mats)
        if 0 < r < n:
            img = [ff.row_space_basis(mat, m.p) for mat in power.mats]
            ker = [ff.row_kernel(mat, m.p) for mat in power.mats]
            return img, ker
    return None


def is_indecomposable(m: Module, thresholds: Thresholds = DEFAULT_THRESHOLDS) -> bool:
    """True iff End(m) has no idempotent besides 0 and 1 (exhaustive scan).

    A Fitting-lemma pre-check on the End basis catches most decomposables
    without scanning; the scan remains the decision procedure.
    """
    if m.is_zero:
        raise InputError("the zero module is not indecomposable by convention")
    if _fitting_split(m) is not None:
        return False
    end = _end_space(m)
    ident = Morphism.identity(m)
    for f in end.elements(thresholds=thresholds):
        ff_sq = f.then(f)
        if all(np.array_equal(a, b) for a, b in zip(ff_sq.mats, f.mats)):
            if not all(np.array_equal(a, b) for a, b in zip(f.mats, ident.mats)):
                return False
    return True


def is_brick(m: Module, thresholds: Thresholds = DEFAULT_THRESHOLDS) -> bool:
    """True iff every nonzero endomorphism is invertible."""
    if m.is_zero:
        return False
    end = _end_space(m)
    for f in end.elements(thresholds=thresholds):
        if not is_isomorphism(f):
            return False
    return True


def end_dim(m: Module) -> int:
    return len(hom_basis(m, m))


# ---------------------------------------------------------------------------
# short exact sequences and Ext^1


@dataclass
class ShortExactSequence:
    """0 -> L -> M -> N -> 0 given by the mono and the epi."""

    mono: Morphism
    epi: Morphism

    @property
    def sub(self) -> Module:
        return self.mono.src

    @property
    def middle(self) -> Module:
        return self.mono.dst

    @property
    def quot(self) -> Module:
        return self.epi.dst

    def validate(self) -> bool:
        if self.mono.dst is not self.epi.src:
            return False
        if not is_injective(self.mono) or not is_surjective(self.epi):
            return False
        p = self.mono.p
        for v in range(self.middle.algebra.nv):
            if self.sub.dims[v] + self.quot.dims[v] != self.middle.dims[v]:
                return False
            img = ff.row_space_basis(self.mono.mats[v], p)
            ker = ff.row_kernel(self.epi.mats[v], p)
            if not ff.row_spaces_equal(img, ker, p):
                return False
        return True


def is_split(ses: ShortExactSequence) -> bool:
    """Solve for a section of the epi (linear, no scanning)."""
    p = ses.mono.p
    hom = hom_basis(ses.quot, ses.middle)
    if not hom:
        return ses.quot.is_zero
    cols = []
    for g in hom:
        composite = g.then(ses.epi)
        cols.append(composite.flat())
    target = Morphism.identity(ses.quot).flat()
    mat = np.array(cols).T % p
    return ff.solve(mat, target.reshape(-1, 1), p) is not None


def projective_module(algebra: Algebra, v: int) -> Module:
    """The indecomposable projective e_v A (regular right action)."""
    idx = [i for i in range(algebra.dim) if algebra.src[i] == v]
    by_vertex: dict[int, list[int]] = {}
    for i in idx:
        by_vertex.setdefault(algebra.tgt[i], []).append(i)
    dims = tuple(len(by_vertex.get(w, [])) for w in range(algebra.nv))
    pos = {}
    for w, items in by_vertex.items():
        for r, i in enumerate(items):
            pos[i] = (w, r)
    act = {}
    for a in range(algebra.nv, algebra.dim):
        s, t = algebra.src[a], algebra.tgt[a]
        block = ff.zeros(dims[s], dims[t])
        for i in by_vertex.get(s, []):
            r = pos[i][1]
            prod = algebra.mult[i, a]
            for k in np.nonzero(prod)[0]:
                w2, r2 = pos[int(k)]
                assert w2 == t
                block[r, r2] = prod[k]
        act[a] = block
    return Module(algebra, dims, act)


def indecomposable_projectives(
    algebra: Algebra, thresholds: Thresholds = DEFAULT_THRESHOLDS
) -> list[Module]:
    out = []
    for v in range(algebra.nv):
        pv = projective_module(algebra, v)
        if not is_indecomposable(pv, thresholds):
            raise InputError("projective e_v A decomposes; vertex idempotents not primitive")
        out.append(pv)
    return out


def regular_module(algebra: Algebra) -> Module:
    total, _, _ = direct_sum([projective_module(algebra, v) for v in range(algebra.nv)],
                             algebra=algebra)
    return total


@dataclass
class Ext1:
    """Ext^1(quot, sub) computed from a projective presentation of quot."""

    quot: Module
    sub: Module
    presentation: ShortExactSequence       # 0 -> Omega -> P0 -> quot -> 0
    basis: list[Morphism]                  # cocycle representatives Omega -> sub
    omega_hom: list[Morphism]              # basis of Hom(Omega, sub)
    coboundary_rows: np.ndarray            # image of Hom(P0, sub) in those coordinates

    @property
    def dim(self) -> int:
        return len(self.basis)

    def element(self, coeffs) -> Morphism:
        out = Morphism.zero_map(self.presentation.sub, self.sub)
        for c, f in zip(coeffs, self.basis):
            if c % self.sub.p:
                out = out.plus(f.scaled(c))
        return out

    def all_cocycles(self, *, include_zero: bool = False,
                     thresholds: Thresholds = DEFAULT_THRESHOLDS):
        count = self.sub.p ** self.dim
        if count > thresholds.scan_limit:
            raise BudgetExceeded("Ext cocycle scan too large", needed=count,
                                 limit=thresholds.scan_limit)
        for coeffs in itertools.product(range(self.sub.p), repeat=self.dim):
            if not include_zero and not any(coeffs):
                continue
            yield self.element(coeffs)


def projective_presentation(z: Module) -> ShortExactSequence:
    """A surjection from projectives with its kernel: 0 -> Omega -> P0 -> z -> 0."""
    alg = z.algebra
    summands: list[Module] = []
    maps: list[list[np.ndarray]] = []  # per summand, per vertex
    for v in range(alg.nv):
        if z.dims[v] == 0:
            continue
        pv = projective_module(alg, v)
        idx = [i for i in range(alg.dim) if alg.src[i] == v]
        by_vertex: dict[int, list[int]] = {}
        for i in idx:
            by_vertex.setdefault(alg.tgt[i], []).append(i)
        for r in range(z.dims[v]):
            mats = []
            for w in range(alg.nv):
                block = ff.zeros(pv.dims[w], z.dims[w])
                for rr, i in enumerate(by_vertex.get(w, [])):
                    block[rr] = z.act_block(i)[r]
                mats.append(block)
            summands.append(pv)
            maps.append(mats)
    if not summands:
        zero = Module.zero(alg)
        ident = Morphism.identity(zero)
        return ShortExactSequence(Morphism.zero_map(zero, zero), Morphism(zero, z, tuple(
            ff.zeros(0, z.dims[v]) for v in range(alg.nv))))
    p0, _, _ = direct_sum(summands, algebra=alg)
    qmats = []
    for v in range(alg.nv):
        parts = [m[v] for m in maps]
        qmats.append(np.concatenate(parts) if parts else ff.zeros(0, z.dims[v]))
    q = Morphism(p0, z, tuple(qmats))
    if not is_surjective(q):
        raise InputError("projective presentation failed to be surjective")
    omega, incl = kernel(q)
    return ShortExactSequence(incl, q)


def ext1_basis(z: Module, x: Module) -> Ext1:
    """Ext^1(z, x) as coker(Hom(P0, x) -> Hom(Omega, x))."""
    if not z.algebra.same_as(x.algebra):
        raise InputError("modules live over different algebras")
    p = z.p
    pres = projective_presentation(z)
    omega, incl, p0 = pres.sub, pres.mono, pres.middle
    ho = hom_basis(omega, x)
    if not ho:
        return Ext1(z, x, pres, [], [], ff.zeros(0, 0))
    hp = hom_basis(p0, x)
    ho_mat = np.array([g.flat() for g in ho])
    image_rows = []
    for g in hp:
        restricted = incl.then(g)
        coords = ff.express_in_rows(restricted.flat().reshape(1, -1), ho_mat, p)
        assert coords is not None
        image_rows.append(coords[0])
    img = ff.row_space_basis(np.array(image_rows).reshape(-1, len(ho)), p) \
        if image_rows else ff.zeros(0, len(ho))
    comp = ff.quotient_basis(img, ff.eye(len(ho)), p)
    basis = []
    for k in range(comp.shape[0]):
        f = Morphism.zero_map(omega, x)
        for c, g in zip(comp[k], ho):
            if c:
                f = f.plus(g.scaled(int(c)))
        basis.append(f)
    return Ext1(z, x, pres, basis, ho, img)


def middle_term(ext: Ext1, cocycle: Morphism) -> ShortExactSequence:
    """Realize a cocycle Omega -> X as 0 -> X -> E -> Z -> 0 via pushout."""
    x, z = ext.sub, ext.quot
    pres = ext.presentation
    omega, incl, p0 = pres.sub, pres.mono, pres.middle
    p = x.p
    big, (in_x, in_p0), _ = _sum2(x, p0)
    h = Morphism(
        omega, big,
        tuple(
            np.concatenate([cocycle.mats[v], (-incl.mats[v]) % p], axis=1)
            for v in range(x.algebra.nv)
        ),
    )
    parts = quotient_by_rows(big, [ff.row_space_basis(h.mats[v], p) for v in range(x.algebra.nv)])
    e, proj = parts.module, parts.projection
    mono = in_x.then(proj)
    # induced epi E -> Z: push class representatives through (0, q)
    g = _sum2_projection(x, p0, big).then(pres.epi)
    epi_mats = tuple(
        ff.mul(parts.rep_rows[v], g.mats[v], p) for v in range(x.algebra.nv)
    )
    epi = Morphism(e, z, epi_mats)
    ses = ShortExactSequence(mono, epi)
    if not ses.validate():
        raise InputError("pushout failed to produce a short exact sequence")
    return ses


def _sum2(a: Module, b: Module):
    total, incls, projs = direct_sum([a, b])
    return total, incls, projs


def _sum2_projection(a: Module, b: Module, total: Module) -> Morphism:
    """Projection total = a ⊕ b -> b rebuilt from the block layout."""
    alg = a.algebra
    mats = []
    for v in range(alg.nv):
        m = ff.zeros(total.dims[v], b.dims[v])
        m[a.dims[v] :, :] = ff.eye(b.dims[v])
        mats.append(m)
    return Morphism(total, b, tuple(mats))


# ---------------------------------------------------------------------------
# submodule enumeration


def submodule_rows(
    m: Module, thresholds: Thresholds = DEFAULT_THRESHOLDS
) -> list[tuple[np.ndarray, ...]]:
    """All submodules as canonical per-vertex row bases, deterministically ordered.

    Breadth-first closure over single-vector-generated submodules, then join
    closure under pairwise sums.
    """
    alg = m.algebra
    p = m.p
    gen_count = sum(p ** d for d in m.dims)
    if gen_count > thresholds.submodule_vectors:
        raise BudgetExceeded(
            f"submodule generation for dimension vector {list(m.dims)} too large",
            needed=gen_count, limit=thresholds.submodule_vectors,
        )
    out_arrows: dict[int, list[int]] = {v: [] for v in range(alg.nv)}
    for a in range(alg.nv, alg.dim):
        out_arrows[alg.src[a]].append(a)

    def close(rows: list[np.ndarray]) -> tuple[np.ndarray, ...]:
        rows = [ff.row_space_basis(r, p) for r in rows]
        changed = True
        while changed:
            changed = False
            for s in range(alg.nv):
                if rows[s].shape[0] == 0:
                    continue
                for a in out_arrows[s]:
                    t = alg.tgt[a]
                    pushed = ff.mul(rows[s], m.act_block(a), p)
                    grown = ff.subspace_sum(rows[t], pushed, p)
                    if grown.shape[0] > rows[t].shape[0]:
                        rows[t] = grown
                        changed = True
        return tuple(rows)

    zero_rows = tuple(ff.zeros(0, d) for d in m.dims)
    seen: dict[tuple, tuple[np.ndarray, ...]] = {}

    def sig(rows: tuple[np.ndarray, ...]) -> tuple:
        return tuple(ff.signature(r) for r in rows)

    seen[sig(zero_rows)] = zero_rows
    for w in range(alg.nv):
        d = m.dims[w]
        for code in range(1, p ** d):
            vec = np.zeros((1, d), dtype=np.int64)
            c = code
            for i in range(d):
                vec[0, i] = c % p
                c //= p
            rows = [ff.zeros(0, m.dims[v]) for v in range(alg.nv)]
            rows[w] = vec
            closed = close(rows)
            seen.setdefault(sig(closed), closed)
    worklist = list(seen.values())
    while worklist:
        if len(seen) > thresholds.submodule_count:
            raise BudgetExceeded(
                f"too many submodules for dimension vector {list(m.dims)}",
                needed=len(seen), limit=thresholds.submodule_count,
            )
        nxt = []
        for a_rows in worklist:
            for b_rows in list(seen.values()):
                summed = tuple(
                    ff.subspace_sum(x, y, p) for x, y in zip(a_rows, b_rows)
                )
                s = sig(summed)
                if s not in seen:
                    seen[s] = summed
                    nxt.append(summed)
        worklist = nxt
    result = sorted(seen.values(), key=lambda rows: (sum(r.shape[0] for r in rows), sig(rows)))
    return result


def submodules(
    m: Module, thresholds: Thresholds = DEFAULT_THRESHOLDS
) -> list[tuple[Module, Morphism]]:
    """All submodules with canonical inclusions (spec-facing wrapper)."""
    return [submodule_from_rows(m, list(rows)) for rows in submodule_rows(m, thresholds)]


# ---------------------------------------------------------------------------
# universes of indecomposables and Krull-Schmidt decomposition


class IndecUniverse:
    """Canonical representatives of all indecomposables up to a dimension bound."""

    def __init__(self, algebra: Algebra, bound: int, strategy: str,
                 modules: list[Module], thresholds: Thresholds = DEFAULT_THRESHOLDS):
        self.algebra = algebra
        self.bound = bound
        self.strategy = strategy
        self.modules = modules
        self.thresholds = thresholds
        self._hom_dims: np.ndarray | None = None
        self._end_dims: list[int] | None = None
        self._submodule_cache: dict[int, list[tuple[Module, Morphism]]] = {}
        self._ext_cache: dict[tuple[int, int], Ext1] = {}

    def __len__(self) -> int:
        return len(self.modules)

    @property
    def ids(self) -> list[int]:
        return list(range(len(self.modules)))

    def module(self, uid: int) -> Module:
        return self.modules[uid]

    @property
    def hom_dims(self) -> np.ndarray:
        if self._hom_dims is None:
            n = len(self.modules)
            table = np.zeros((n, n), dtype=np.int64)
            for i in range(n):
                for j in range(n):
                    table[i, j] = len(hom_basis(self.modules[i], self.modules[j]))
            self._hom_dims = table
        return self._hom_dims

    @property
    def end_dims(self) -> list[int]:
        if self._end_dims is None:
            self._end_dims = [int(self.hom_dims[i, i]) for i in self.ids]
        return self._end_dims

    def id_of(self, m: Module) -> int | None:
        """Universe id of an indecomposable module, or None."""
        for uid, rep in enumerate(self.modules):
            if rep.dims != m.dims:
                continue
            if is_isomorphic(rep, m, self.thresholds):
                return uid
        return None

    def submodules_of(self, uid: int) -> list[tuple[Module, Morphism]]:
        if uid not in self._submodule_cache:
            self._submodule_cache[uid] = submodules(self.modules[uid], self.thresholds)
        return self._submodule_cache[uid]

    def ext_space(self, quot_id: int, sub_id: int) -> Ext1:
        key = (quot_id, sub_id)
        if key not in self._ext_cache:
            self._ext_cache[key] = ext1_basis(self.modules[quot_id], self.modules[sub_id])
        return self._ext_cache[key]

    def dim_vector(self, uid: int) -> tuple[int, ...]:
        return self.modules[uid].dims

    def describe(self, uid: int) -> str:
        return f"M{uid}<{','.join(str(d) for d in self.modules[uid].dims)}>"


def decompose(
    m: Module, universe: IndecUniverse, thresholds: Thresholds | None = None
) -> tuple[int, ...]:
    """Krull-Schmidt decomposition as a sorted tuple of universe ids."""
    thresholds = thresholds or universe.thresholds
    if m.is_zero:
        return ()
    split = _fitting_split(m)
    if split is not None:
        img_rows, ker_rows = split
        sub_i, _ = submodule_from_rows(m, img_rows)
        sub_k, _ = submodule_from_rows(m, ker_rows)
        return tuple(sorted(
            decompose(sub_i, universe, thresholds) + decompose(sub_k, universe, thresholds)
        ))
    end = _end_space(m)
    ident = Morphism.identity(m)
    for f in end.elements(thresholds=thresholds):
        f2 = f.then(f)
        if all(np.array_equal(a, b) for a, b in zip(f2.mats, f.mats)):
            if all(np.array_equal(a, b) for a, b in zip(f.mats, ident.mats)):
                continue
            img_rows = [ff.row_space_basis(f.mats[v], m.p) for v in range(m.algebra.nv)]
            ker_rows = [ff.row_kernel(f.mats[v], m.p) for v in range(m.algebra.nv)]
            sub_i, _ = submodule_from_rows(m, img_rows)
            sub_k, _ = submodule_from_rows(m, ker_rows)
            return tuple(sorted(
                decompose(sub_i, universe, thresholds) + decompose(sub_k, universe, thresholds)
            ))
    uid = universe.id_of(m)
    if uid is None:
        raise UniverseExhausted(m.dims)
    return (uid,)


def _connected_support(dims: tuple[int, ...], adj: list[set[int]]) -> bool:
    support = [v for v, d in enumerate(dims) if d]
    if len(support) <= 1:
        return True
    seen = {support[0]}
    stack = [support[0]]
    inside = set(support)
    while stack:
        v = stack.pop()
        for w in adj[v]:
            if w in inside and w not in seen:
                seen.add(w)
                stack.append(w)
    return seen == inside


def _dim_vectors(nv: int, bound: int):
    def rec(prefix: list[int], remaining: int, pos: int):
        if pos == nv:
            if sum(prefix):
                yield tuple(prefix)
            return
        for d in range(remaining + 1):
            yield from rec(prefix + [d], remaining - d, pos + 1)

    vecs = [v for total in range(1, bound + 1) for v in rec([], total, 0) if sum(v) == total]
    # rec already caps the total; keep deterministic (total, lex) order
    out = sorted(set(vecs), key=lambda v: (sum(v), v))
    return out


def build_universe(
    algebra: Algebra,
    dim_bound: int,
    strategy: str = "auto",
    thresholds: Thresholds = DEFAULT_THRESHOLDS,
) -> IndecUniverse:
    """Enumerate all indecomposables of total dimension <= dim_bound.

    analytic-typeA builds interval modules directly (requires a relation-free
    linear A_n quiver); brute-force enumerates action tuples and filters.
    The two strategies produce iso-class-bijective universes where both apply.
    """
    if strategy == "auto":
        chain = algebra.quiver.is_linear_An() if algebra.quiver is not None else None
        strategy = "analytic-typeA" if (chain and algebra.relations_monomial
                                        and algebra.dim == _path_count_linear(len(chain))) \
            else "brute-force"
    if strategy == "analytic-typeA":
        mods = _analytic_typeA(algebra, dim_bound)
    elif strategy == "brute-force":
        mods = _brute_force(algebra, dim_bound, thresholds)
    else:
        raise InputError(f"unknown universe strategy {strategy!r}")
    return IndecUniverse(algebra, dim_bound, strategy, mods, thresholds)


def _path_count_linear(n: int) -> int:
    return n * (n + 1) // 2


def _analytic_typeA(algebra: Algebra, bound: int) -> list[Module]:
    chain = algebra.quiver.is_linear_An() if algebra.quiver is not None else None
    if chain is None or not algebra.relations_monomial or algebra.dim != _path_count_linear(len(chain)):
        raise InputError("analytic-typeA requires a relation-free linear A_n quiver")
    order = [list(algebra.vertex_labels).index(v) for v in chain]
    arrows = list(algebra.arrows)
    arrow_at = {}
    for a in arrows:
        arrow_at[algebra.src[a]] = a
    mods = []
    n = len(chain)
    for i in range(n):
        for j in range(i, n):
            if j - i + 1 > bound:
                continue
            dims = [0] * algebra.nv
            for k in range(i, j + 1):
                dims[order[k]] = 1
            arrow_mats = {}
            for a in arrows:
                s, t = algebra.src[a], algebra.tgt[a]
                if dims[s] and dims[t]:
                    arrow_mats[a] = ff.eye(1)
                else:
                    arrow_mats[a] = ff.zeros(dims[s], dims[t])
            mods.append(Module.from_arrows(algebra, tuple(dims), arrow_mats, check=False))
    mods.sort(key=lambda m: (m.total_dim, m.dims))
    return mods


def _brute_force(algebra: Algebra, bound: int, thresholds: Thresholds) -> list[Module]:
    p = algebra.p
    arrows = list(algebra.arrows)
    adj = algebra.underlying_adjacency()
    accepted: list[Module] = []
    accepted_meta: list[tuple[tuple[int, ...], int]] = []  # (dims, end_dim)
    total_states = 0
    for dims in _dim_vectors(algebra.nv, bound):
        if not _connected_support(dims, adj):
            continue
        cells = sum(dims[algebra.src[a]] * dims[algebra.tgt[a]] for a in arrows)
        states = p ** cells
        total_states += states
        if total_states > thresholds.enumeration_states:
            raise BudgetExceeded(
                "brute-force enumeration too large; use analytic-typeA or lower the bound",
                needed=total_states, limit=thresholds.enumeration_states,
            )
        shapes = [(dims[algebra.src[a]], dims[algebra.tgt[a]]) for a in arrows]
        for combo in itertools.product(range(p), repeat=cells):
            arrow_mats = {}
            off = 0
            for a, (r, c) in zip(arrows, shapes):
                arrow_mats[a] = np.array(combo[off : off + r * c], dtype=np.int64).reshape(r, c)
                off += r * c
            if not satisfies_relations(algebra, dims, arrow_mats):
                continue
            cand = Module.from_arrows(algebra, dims, arrow_mats, check=False)
            if not is_indecomposable(cand, thresholds):
                continue
            cand_end = end_dim(cand)
            duplicate = False
            for rep, (rdims, rend) in zip(accepted, accepted_meta):
                if rdims != dims or rend != cand_end:
                    continue
                # hom-dim pre-filter before the invertible-element scan
                if len(hom_basis(cand, rep)) != rend or len(hom_basis(rep, cand)) != rend:
                    continue
                if is_isomorphic(rep, cand, thresholds):
                    duplicate = True
                    break
            if not duplicate:
                accepted.append(cand)
                accepted_meta.append((dims, cand_end))
    return accepted
