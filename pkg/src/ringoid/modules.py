"""Finite right modules over a FinCat: contravariant linear functors to F_p-vector spaces.

A module assigns a dimension to each object and a matrix to each hom-basis
element; contravariance reads ``mat(M(beta . alpha)) = mat(M(alpha)) @ mat(M(beta))``
in the column convention.  Everything a torsion theory needs lives here:
representables, hom spaces (solved as the naturality linear system), the full
submodule lattice, quotients, exhaustive enumeration up to isomorphism with a
simple-plus-extension crawl, traces, ideal action, and annihilators.
"""

from __future__ import annotations

import itertools
import json

from .category import FinCat, Morphism, cat_hash
from .linalg import (
    CapExceeded,
    Mat,
    Subspace,
    complement_data,
    image_basis,
    kernel_basis,
    solve_matrix,
    subspace_sum,
    vector_cap,
)


class FinModule:
    """dims: object -> count; action[(a, b, i)]: M(b) -> M(a) for basis alpha_i of A(a, b)."""

    def __init__(self, cat: FinCat, dims, action, name: str = ""):
        self.cat = cat
        self.dims = {a: int(dims.get(a, 0)) for a in cat.objects}
        self.action = {}
        for a in cat.objects:
            for b in cat.objects:
                for i in range(cat.hom_dim[(a, b)]):
                    m = action.get((a, b, i))
                    if m is None:
                        m = Mat.zero(cat.p, self.dims[a], self.dims[b])
                    if (m.rows, m.cols) != (self.dims[a], self.dims[b]):
                        raise ValueError(f"action shape mismatch at {(a, b, i)}")
                    self.action[(a, b, i)] = m
        self.name = name
        self._fingerprint = None

    @property
    def p(self):
        return self.cat.p

    def total_dim(self) -> int:
        return sum(self.dims.values())

    def act(self, f: Morphism) -> Mat:
        """The matrix of M(f): M(f.tgt) -> M(f.src)."""
        a, b = f.src, f.tgt
        out = Mat.zero(self.cat.p, self.dims[a], self.dims[b])
        for i, c in enumerate(f.coords):
            if c:
                out = out + self.action[(a, b, i)].scale(c)
        return out

    def key(self):
        """Canonical identity of the presented data (basis dependent)."""
        return (
            tuple(self.dims[a] for a in self.cat.objects),
            tuple(self.action[k].entries for k in sorted(self.action)),
        )

    def fingerprint(self):
        """Iso-invariant: dims plus the rank profile of every basis action,
        refined by element-wise rank profiles on small hom spaces."""
        if self._fingerprint is None:
            dims = tuple(self.dims[a] for a in self.cat.objects)
            ranks = []
            for a in self.cat.objects:
                for b in self.cat.objects:
                    d = self.cat.hom_dim[(a, b)]
                    if d == 0:
                        continue
                    if self.cat.p ** d <= 81:
                        prof = tuple(self.act(f).rank() for f in self.cat.elements(a, b))
                    else:
                        prof = tuple(self.action[(a, b, i)].rank() for i in range(d))
                    ranks.append(((a, b), prof))
            self._fingerprint = (dims, tuple(ranks))
        return self._fingerprint

    def __repr__(self):
        label = self.name or "module"
        return f"FinModule({label}, dims={self.dims})"


def zero_module(cat: FinCat) -> FinModule:
    return FinModule(cat, {}, {}, name="0")


def validate_module(m: FinModule) -> list:
    """Identity actions and contravariant functoriality on all basis pairs."""
    cat = m.cat
    report = []
    for a in cat.objects:
        if m.act(cat.identity(a)) != Mat.identity(cat.p, m.dims[a]):
            report.append({"kind": "identity-action", "object": a})
    for a in cat.objects:
        for b in cat.objects:
            for i in range(cat.hom_dim[(a, b)]):
                f = cat.basis(a, b)[i]
                for c in cat.objects:
                    for j in range(cat.hom_dim[(b, c)]):
                        g = cat.basis(b, c)[j]
                        lhs = m.act(cat.compose(g, f))
                        rhs = m.action[(a, b, i)] @ m.action[(b, c, j)]
                        if lhs != rhs:
                            report.append({"kind": "functoriality", "pair": ((a, b, i), (b, c, j))})
    return report


def representable(cat: FinCat, t: str) -> FinModule:
    """H_t = A(-, t): dims are hom dims into t, actions are precomposition."""
    dims = {a: cat.hom_dim[(a, t)] for a in cat.objects}
    action = {}
    for a in cat.objects:
        for b in cat.objects:
            for i, f in enumerate(cat.basis(a, b)):
                action[(a, b, i)] = cat.precompose_matrix(f, t)
    return FinModule(cat, dims, action, name=f"H_{t}")


class ModuleMap:
    """A natural transformation, stored as one matrix per object."""

    def __init__(self, src: FinModule, tgt: FinModule, comps):
        self.src = src
        self.tgt = tgt
        self.comps = {}
        for a in src.cat.objects:
            m = comps.get(a)
            if m is None:
                m = Mat.zero(src.cat.p, tgt.dims[a], src.dims[a])
            if (m.rows, m.cols) != (tgt.dims[a], src.dims[a]):
                raise ValueError(f"component shape mismatch at {a}")
            self.comps[a] = m

    def compose(self, other: "ModuleMap") -> "ModuleMap":
        """self after other."""
        return ModuleMap(other.src, self.tgt,
                         {a: self.comps[a] @ other.comps[a] for a in self.comps})

    def is_zero(self) -> bool:
        return all(m.is_zero() for m in self.comps.values())

    def __eq__(self, other):
        return isinstance(other, ModuleMap) and self.comps == other.comps

    def __repr__(self):
        return f"ModuleMap({ {a: (m.rows, m.cols) for a, m in self.comps.items()} })"


def identity_map(m: FinModule) -> ModuleMap:
    return ModuleMap(m, m, {a: Mat.identity(m.p, m.dims[a]) for a in m.cat.objects})


def check_naturality(phi: ModuleMap) -> bool:
    cat = phi.src.cat
    for a in cat.objects:
        for b in cat.objects:
            for i in range(cat.hom_dim[(a, b)]):
                lhs = phi.comps[a] @ phi.src.action[(a, b, i)]
                rhs = phi.tgt.action[(a, b, i)] @ phi.comps[b]
                if lhs != rhs:
                    return False
    return True


def hom_space(m: FinModule, n: FinModule) -> list:
    """A basis of Hom(M, N), solved from the naturality squares."""
    cat = m.cat
    if cat is not n.cat and cat.objects != n.cat.objects:
        raise ValueError("modules live over different categories")
    p = cat.p
    offs = {}
    total = 0
    for a in cat.objects:
        offs[a] = total
        total += n.dims[a] * m.dims[a]
    rows = []
    for (a, b, i), ma in m.action.items():
        na = n.action[(a, b, i)]
        n_a, m_a = n.dims[a], m.dims[a]
        n_b, m_b = n.dims[b], m.dims[b]
        for r in range(n_a):
            for c in range(m_b):
                row = [0] * total
                for k in range(m_a):
                    coef = ma.entries[k][c]
                    if coef:
                        row[offs[a] + r * m_a + k] = (row[offs[a] + r * m_a + k] + coef) % p
                for k in range(n_b):
                    coef = na.entries[r][k]
                    if coef:
                        idx = offs[b] + k * m_b + c
                        row[idx] = (row[idx] - coef) % p
                if any(row):
                    rows.append(row)
    ker = kernel_basis(Mat(p, len(rows), total, rows))
    out = []
    for v in ker.basis_vectors():
        comps = {}
        for a in cat.objects:
            n_a, m_a = n.dims[a], m.dims[a]
            block = v[offs[a]: offs[a] + n_a * m_a]
            comps[a] = Mat(p, n_a, m_a, tuple(tuple(block[r * m_a: (r + 1) * m_a]) for r in range(n_a)))
        out.append(ModuleMap(m, n, comps))
    return out


def hom_dim(m: FinModule, n: FinModule) -> int:
    return len(hom_space(m, n))


class Submodule:
    """A subspace of M(a) for every a, closed under all actions."""

    def __init__(self, module: FinModule, spaces):
        self.module = module
        self.spaces = {}
        for a in module.cat.objects:
            s = spaces.get(a)
            if s is None:
                s = Subspace.zero(module.p, module.dims[a])
            if s.ambient != module.dims[a]:
                raise ValueError(f"ambient mismatch at {a}")
            self.spaces[a] = s

    def total_dim(self) -> int:
        return sum(s.dim for s in self.spaces.values())

    def key(self):
        return tuple(self.spaces[a].key() for a in self.module.cat.objects)

    def __eq__(self, other):
        return isinstance(other, Submodule) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def is_closed(self) -> bool:
        m = self.module
        for (a, b, i), mat in m.action.items():
            for v in self.spaces[b].basis_vectors():
                if not self.spaces[a].contains(mat.apply(v)):
                    return False
        return True

    def contains(self, other: "Submodule") -> bool:
        return all(self.spaces[a].contains_subspace(other.spaces[a]) for a in self.spaces)

    def sum(self, other: "Submodule") -> "Submodule":
        return Submodule(self.module,
                         {a: subspace_sum(self.spaces[a], other.spaces[a]) for a in self.spaces})

    def intersect(self, other: "Submodule") -> "Submodule":
        from .linalg import subspace_intersect
        return Submodule(self.module,
                         {a: subspace_intersect(self.spaces[a], other.spaces[a]) for a in self.spaces})

    def is_full(self) -> bool:
        return all(s.dim == s.ambient for s in self.spaces.values())

    def is_zero(self) -> bool:
        return all(s.dim == 0 for s in self.spaces.values())

    def __repr__(self):
        return f"Submodule(dims={ {a: s.dim for a, s in self.spaces.items()} })"


def zero_submodule(m: FinModule) -> Submodule:
    return Submodule(m, {})


def full_submodule(m: FinModule) -> Submodule:
    return Submodule(m, {a: Subspace.full(m.p, m.dims[a]) for a in m.cat.objects})


def cyclic_submodule(m: FinModule, a: str, v) -> Submodule:
    """The smallest submodule containing v in M(a): spans of all actions on v."""
    cat = m.cat
    spaces = {}
    for b in cat.objects:
        vecs = []
        for i in range(cat.hom_dim[(b, a)]):
            vecs.append(m.action[(b, a, i)].apply(v))
        spaces[b] = Subspace.from_vectors(m.p, m.dims[b], vecs)
    return Submodule(m, spaces)


def kernel(phi: ModuleMap) -> Submodule:
    return Submodule(phi.src, {a: kernel_basis(phi.comps[a]) for a in phi.comps})


def image(phi: ModuleMap) -> Submodule:
    return Submodule(phi.tgt, {a: image_basis(phi.comps[a]) for a in phi.comps})


def all_submodules(m: FinModule, cap: int | None = None) -> list:
    """Every submodule: close the cyclic submodules under pairwise sum.

    Complete because a submodule is the sum of the cyclic submodules of its
    elements.  Output is deduplicated and sorted by (total dim, canonical key).
    """
    if cap is None:
        cap = vector_cap()
    scan = sum(m.p ** m.dims[a] for a in m.cat.objects)
    if scan > cap:
        raise CapExceeded(
            f"all_submodules: {scan} generator vectors exceed cap {cap}"
            " (raise RINGOID_CAP_VECTORS to override)"
        )
    gens = []
    seen = set()
    for a in m.cat.objects:
        for v in itertools.product(range(m.p), repeat=m.dims[a]):
            if not any(v):
                continue
            s = cyclic_submodule(m, a, v)
            if s.key() not in seen:
                seen.add(s.key())
                gens.append(s)
    subs = {zero_submodule(m).key(): zero_submodule(m)}
    frontier = [zero_submodule(m)]
    while frontier:
        nxt = []
        for s in frontier:
            for g in gens:
                u = s.sum(g)
                k = u.key()
                if k not in subs:
                    subs[k] = u
                    nxt.append(u)
        frontier = nxt
    out = sorted(subs.values(), key=lambda s: (s.total_dim(), s.key()))
    return out


def maximal_proper_submodules(m: FinModule, subs=None) -> list:
    if subs is None:
        subs = all_submodules(m)
    proper = [s for s in subs if not s.is_full()]
    out = []
    for s in proper:
        if not any(t is not s and t.contains(s) and t.key() != s.key() for t in proper):
            out.append(s)
    return out


def submodule_module(s: Submodule):
    """(N, incl) where N carries the submodule in its own basis and incl embeds it."""
    m = s.module
    cat = m.cat
    incl = {}
    for a in cat.objects:
        basis = s.spaces[a].basis_vectors()
        cols = tuple(zip(*basis)) if basis else ((),) * m.dims[a] if m.dims[a] else ()
        incl[a] = Mat(m.p, m.dims[a], len(basis), cols)
    dims = {a: s.spaces[a].dim for a in cat.objects}
    action = {}
    for (a, b, i), mat in m.action.items():
        rhs = mat @ incl[b]
        x = solve_matrix(incl[a], rhs)
        if x is None:
            raise ValueError("submodule is not closed under the action")
        action[(a, b, i)] = x
    n = FinModule(cat, dims, action, name=f"sub({m.name})" if m.name else "")
    return n, ModuleMap(n, m, incl)


def quotient_module(m: FinModule, s: Submodule):
    """(Q, proj) for M/S in the non-pivot coordinates of each S(a)."""
    cat = m.cat
    proj = {}
    lift = {}
    for a in cat.objects:
        pr, lf = complement_data(s.spaces[a])
        proj[a] = pr
        lift[a] = lf
    dims = {a: proj[a].rows for a in cat.objects}
    action = {
        key: proj[key[0]] @ mat @ lift[key[1]]
        for key, mat in m.action.items()
    }
    q = FinModule(cat, dims, action, name=f"{m.name}/sub" if m.name else "")
    return q, ModuleMap(m, q, proj)


def direct_sum(m: FinModule, n: FinModule) -> FinModule:
    cat = m.cat
    dims = {a: m.dims[a] + n.dims[a] for a in cat.objects}
    action = {}
    for key in m.action:
        a, b, _ = key
        ma, na = m.action[key], n.action[key]
        rows = []
        for r in range(ma.rows):
            rows.append(ma.entries[r] + (0,) * na.cols)
        for r in range(na.rows):
            rows.append((0,) * ma.cols + na.entries[r])
        action[key] = Mat(cat.p, dims[a], m.dims[b] + n.dims[b], rows)
    return FinModule(cat, dims, action)


def _invertible(phi: ModuleMap) -> bool:
    for a, mat in phi.comps.items():
        if mat.rows != mat.cols or mat.rank() != mat.rows:
            return False
    return True


def _total_rank(comps) -> int:
    return sum(m.rank() for m in comps.values())


def _search_invertible(maps: list, p: int) -> bool:
    """Find an everywhere-invertible element in the span of the given maps.

    Greedy rank ascent almost always produces an isomorphism certificate in a
    few sweeps; the exhaustive coefficient scan stays as the complete
    fallback for the rare fingerprint-tied non-isomorphic pairs.
    """
    if not maps:
        return False
    src, tgt = maps[0].src, maps[0].tgt
    objs = src.cat.objects
    if any(src.dims[a] != tgt.dims[a] for a in objs):
        return False
    target = sum(src.dims[a] for a in objs)
    n = len(maps)
    cur = {a: Mat.zero(p, tgt.dims[a], src.dims[a]) for a in objs}
    cur_rank = 0
    improved = True
    while improved and cur_rank < target:
        improved = False
        for i in range(n):
            for c in range(1, p):
                cand = {a: cur[a] + maps[i].comps[a].scale(c) for a in objs}
                r = _total_rank(cand)
                if r > cur_rank:
                    cur, cur_rank = cand, r
                    improved = True
                    break
            if cur_rank == target:
                return True
    if cur_rank == target:
        return True
    for coeffs in itertools.product(range(p), repeat=n):
        comps = {}
        ok = True
        for a in objs:
            acc = Mat.zero(p, tgt.dims[a], src.dims[a])
            for i, c in enumerate(coeffs):
                if c:
                    acc = acc + maps[i].comps[a].scale(c)
            if acc.rank() != acc.rows:
                ok = False
                break
            comps[a] = acc
        if ok:
            return True
    return False


def is_iso(m: FinModule, n: FinModule) -> bool:
    """Exhaustive invertible-natural-transformation search behind invariant prefilters."""
    if any(m.dims[a] != n.dims[a] for a in m.cat.objects):
        return False
    if m.key() == n.key():
        return True
    if m.fingerprint() != n.fingerprint():
        return False
    maps = hom_space(m, n)
    if len(maps) != len(hom_space(m, m)):
        return False
    return _search_invertible(maps, m.p)


def simple_modules(cat: FinCat) -> list:
    """Simples, found as the simple quotients of the representables."""
    out = []
    for t in cat.objects:
        h = representable(cat, t)
        if h.total_dim() == 0:
            continue
        for s in maximal_proper_submodules(h):
            q, _ = quotient_module(h, s)
            if q.total_dim() == 0:
                continue
            if not any(is_iso(q, existing) for existing in out):
                out.append(q)
    out.sort(key=lambda m: (m.total_dim(), m.fingerprint()))
    return out


def _extensions(s: FinModule, q: FinModule, cap: int) -> list:
    """All modules with submodule block s and quotient block q.

    The off-diagonal blocks form the solution space of a linear system
    (functoriality and identity constraints); each solution is one candidate.
    """
    cat = s.cat
    p = cat.p
    keys = sorted(s.action)
    offs = {}
    total = 0
    for key in keys:
        a, b, _ = key
        offs[key] = total
        total += s.dims[a] * q.dims[b]
    rows = []

    def add_rows(terms, shape):
        """One block equation sum_t left_t @ c_{key_t} @ right_t = 0.

        terms: list of (key, left or None, right or None, sign); None stands
        for an identity factor of the fitting size.
        """
        ra, cb = shape
        for r in range(ra):
            for c in range(cb):
                row = [0] * total
                for key, left, right, sign in terms:
                    a, b, _ = key
                    sa, qb = s.dims[a], q.dims[b]
                    for u in range(sa):
                        lv = left.entries[r][u] if left is not None else (1 if r == u else 0)
                        if lv == 0:
                            continue
                        for v in range(qb):
                            rv = right.entries[v][c] if right is not None else (1 if v == c else 0)
                            if rv == 0:
                                continue
                            idx = offs[key] + u * qb + v
                            row[idx] = (row[idx] + sign * lv * rv) % p
                if any(row):
                    rows.append(row)

    for a in cat.objects:
        if cat.hom_dim[(a, a)] == 0:
            continue
        terms = [
            ((a, a, i), Mat.identity(p, s.dims[a]).scale(cf), None, 1)
            for i, cf in enumerate(cat.id_coords[a])
            if cf
        ]
        add_rows(terms, (s.dims[a], q.dims[a]))
    for a in cat.objects:
        for b in cat.objects:
            for i in range(cat.hom_dim[(a, b)]):
                for c in cat.objects:
                    for j in range(cat.hom_dim[(b, c)]):
                        comp_vec = cat.compose_basis(a, b, c, i, j)
                        terms = [
                            ((a, c, k), Mat.identity(p, s.dims[a]).scale(cf), None, 1)
                            for k, cf in enumerate(comp_vec)
                            if cf
                        ]
                        terms.append(((b, c, j), s.action[(a, b, i)], None, -1))
                        terms.append(((a, b, i), None, q.action[(b, c, j)], -1))
                        add_rows(terms, (s.dims[a], q.dims[c]))
    sol = kernel_basis(Mat(p, len(rows), total, rows))
    if p ** sol.dim > cap:
        raise CapExceeded(
            f"extension enumeration needs {p ** sol.dim} cocycles, over cap {cap}"
        )
    # a basis change [[I, h], [0, I]] shifts the off-diagonal blocks by a
    # coboundary, so only one representative per coset yields a new module
    cob_vecs = []
    for c_obj in cat.objects:
        for r in range(q.dims[c_obj]):
            for cidx in range(s.dims[c_obj]):
                h = {
                    o: Mat.zero(p, s.dims[o], q.dims[o]) for o in cat.objects
                }
                ent = [[0] * q.dims[c_obj] for _ in range(s.dims[c_obj])]
                ent[cidx][r] = 1
                h[c_obj] = Mat(p, s.dims[c_obj], q.dims[c_obj], ent)
                vec = [0] * total
                for key in keys:
                    a, b, _ = key
                    block = s.action[key] @ h[b] - h[a] @ q.action[key]
                    qb = q.dims[b]
                    for u in range(s.dims[a]):
                        for v in range(qb):
                            vec[offs[key] + u * qb + v] = block.entries[u][v]
                cob_vecs.append(vec)
    cob = Subspace.from_vectors(p, total, cob_vecs)
    reps = sorted({cob.reduce(vec) for vec in sol.vectors()})
    out = []
    for vec in reps:
        action = {}
        for key in keys:
            a, b, _ = key
            sa, qb = s.dims[a], q.dims[b]
            block = vec[offs[key]: offs[key] + sa * qb]
            cmat = tuple(tuple(block[r * qb: (r + 1) * qb]) for r in range(sa))
            top = tuple(
                s.action[key].entries[r] + cmat[r] for r in range(sa)
            )
            bottom = tuple(
                (0,) * s.dims[b] + q.action[key].entries[r] for r in range(q.dims[a])
            )
            action[key] = Mat(p, sa + q.dims[a], s.dims[b] + qb, top + bottom)
        dims = {a: s.dims[a] + q.dims[a] for a in cat.objects}
        out.append(FinModule(cat, dims, action))
    return out


def enumerate_modules(cat: FinCat, total_dim_bound: int, cap: int | None = None) -> list:
    """All modules of total dimension <= bound, one per isomorphism class.

    Crawl: every nonzero module is an extension of a smaller module by a
    simple submodule, so level n is assembled from extensions of level
    (n - dim S) classes by each simple S, then deduplicated up to iso.
    """
    if cap is None:
        cap = vector_cap()
    simples = simple_modules(cat)
    levels = {0: [zero_module(cat)]}
    for n in range(1, total_dim_bound + 1):
        found = []
        found_keys = set()
        for s in simples:
            ds = s.total_dim()
            if ds > n or (n - ds) not in levels:
                continue
            for q in levels[n - ds]:
                for cand in _extensions(s, q, cap):
                    if cand.key() in found_keys:
                        continue
                    if not any(is_iso(cand, seen) for seen in found):
                        found.append(cand)
                        found_keys.add(cand.key())
        found.sort(key=lambda m: (tuple(m.dims[a] for a in cat.objects), m.fingerprint()))
        levels[n] = found
    out = []
    for n in range(total_dim_bound + 1):
        out.extend(levels[n])
    return out


def trace(sources, m: FinModule) -> Submodule:
    """Sum of the images of every map from the given modules into M."""
    t = zero_submodule(m)
    for s in sources:
        for phi in hom_space(s, m):
            t = t.sum(image(phi))
    return t


def module_times_ideal(m: FinModule, ideal) -> Submodule:
    """MI(a) = sum of images of M(alpha) over alpha in I(a, b), all b."""
    cat = m.cat
    spaces = {}
    for a in cat.objects:
        acc = Subspace.zero(m.p, m.dims[a])
        for b in cat.objects:
            sub = ideal.spaces[(a, b)]
            for w in sub.basis_vectors():
                mat = m.act(Morphism(a, b, w))
                acc = subspace_sum(acc, image_basis(mat))
        spaces[a] = acc
    return Submodule(m, spaces)


def annihilator(m: FinModule, ideal) -> Submodule:
    """The largest submodule killed by the ideal: intersection of action kernels."""
    cat = m.cat
    spaces = {}
    for a in cat.objects:
        rows = []
        for b in cat.objects:
            sub = ideal.spaces[(b, a)]
            for w in sub.basis_vectors():
                rows.extend(m.act(Morphism(b, a, w)).entries)
        mat = Mat(m.p, len(rows), m.dims[a], rows)
        spaces[a] = kernel_basis(mat)
    return Submodule(m, spaces)


def gen_witness(generators, m: FinModule):
    """Greedy epi witness for membership in Gen(generators), or None.

    Collects basis maps from the generators until their images sum to all of
    M; returns the witness list when they do.
    """
    t = zero_submodule(m)
    witness = []
    for g in generators:
        for phi in hom_space(g, m):
            u = t.sum(image(phi))
            if u.total_dim() > t.total_dim():
                t = u
                witness.append((g, phi))
            if t.is_full():
                return witness
    return witness if t.is_full() else None


def module_to_json(m: FinModule) -> str:
    doc = {
        "category": cat_hash(m.cat),
        "dims": {a: m.dims[a] for a in m.cat.objects},
        "action": {
            f"{a}|{b}|{i}": [list(r) for r in mat.entries]
            for (a, b, i), mat in sorted(m.action.items())
        },
    }
    return json.dumps(doc, sort_keys=True, separators=(",", ":"))


def module_from_json(cat: FinCat, text: str, verify_hash: bool = True) -> FinModule:
    doc = json.loads(text)
    if verify_hash and doc.get("category") != cat_hash(cat):
        raise ValueError("module document references a different category (hash mismatch)")
    dims = {a: int(d) for a, d in doc["dims"].items()}
    action = {}
    for key, entries in doc.get("action", {}).items():
        a, b, i = key.split("|")
        action[(a, b, int(i))] = Mat(cat.p, dims.get(a, 0), dims.get(b, 0), entries)
    return FinModule(cat, dims, action)
