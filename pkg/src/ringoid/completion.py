"""Additive closure and idempotent completion of a FinCat, with bounded tuples.

The full Cauchy completion is infinite; every operation here takes an
explicit tuple-length bound and is a bounded approximation, which is all the
desk-scale checks ever need.  Objects of the closure are tuples of base
objects (the empty tuple is the zero object); morphisms are matrices of base
morphisms and compose by row-by-column multiplication.
"""

from __future__ import annotations

import itertools

from .category import FinCat, Morphism, list_idempotents
from .linalg import CapExceeded, Mat, Subspace, kernel_basis, solve, vector_cap
from .modules import (
    FinModule,
    ModuleMap,
    cyclic_submodule,
    image,
    kernel,
    representable,
    submodule_module,
    zero_submodule,
)

MAX_CLOSURE_OBJECTS = 130


def tuple_id(components) -> str:
    return "(" + ",".join(components) + ")"


class AdditiveClosure:
    """The bounded additive closure: tuple objects and matrix morphisms."""

    def __init__(self, base: FinCat, bound: int, cap_objects: int = MAX_CLOSURE_OBJECTS):
        if bound < 1:
            raise ValueError("tuple bound must be at least 1")
        self.base = base
        self.bound = bound
        tuples = [()]
        for l in range(1, bound + 1):
            tuples.extend(itertools.product(base.objects, repeat=l))
        if len(tuples) > cap_objects:
            raise CapExceeded(
                f"additive closure would have {len(tuples)} objects, over cap {cap_objects}"
            )
        self.tuples = {tuple_id(t): t for t in tuples}
        objects = [tuple_id(t) for t in tuples]
        self._layout = {}
        hom = {}
        for s_id, s in self.tuples.items():
            for t_id, t in self.tuples.items():
                layout = []
                offs = {}
                total = 0
                for i, si in enumerate(s):
                    for j, tj in enumerate(t):
                        d = base.hom_dim[(si, tj)]
                        offs[(i, j)] = total
                        for k in range(d):
                            layout.append((i, j, k))
                        total += d
                self._layout[(s_id, t_id)] = (layout, offs, total)
                hom[(s_id, t_id)] = total
        comp = {}
        p = base.p
        for s_id, s in self.tuples.items():
            for t_id, t in self.tuples.items():
                d1 = hom[(s_id, t_id)]
                if d1 == 0:
                    continue
                lay1, _, _ = self._layout[(s_id, t_id)]
                for u_id, u in self.tuples.items():
                    d2 = hom[(t_id, u_id)]
                    d3 = hom[(s_id, u_id)]
                    if d2 == 0 or d3 == 0:
                        continue
                    lay2, _, _ = self._layout[(t_id, u_id)]
                    _, offs3, _ = self._layout[(s_id, u_id)]
                    table = []
                    for (i, j, k) in lay1:
                        row = []
                        for (j2, l, k2) in lay2:
                            vec = [0] * d3
                            if j == j2:
                                coeffs = base.compose_basis(s[i], t[j], u[l], k, k2)
                                off = offs3[(i, l)]
                                for k3, cf in enumerate(coeffs):
                                    vec[off + k3] = cf
                            row.append(tuple(vec))
                        table.append(tuple(row))
                    comp[(s_id, t_id, u_id)] = tuple(table)
        ids = {}
        for s_id, s in self.tuples.items():
            _, offs, total = self._layout[(s_id, s_id)]
            v = [0] * total
            for i, si in enumerate(s):
                off = offs[(i, i)]
                for k, cf in enumerate(base.id_coords[si]):
                    v[off + k] = cf
            ids[s_id] = tuple(v)
        self.cat = FinCat(p, objects, hom, comp, ids,
                          name=f"add({base.name},{bound})" if base.name else "additive-closure")

    def embed_object(self, a: str) -> str:
        return tuple_id((a,))

    def embed_morphism(self, f: Morphism) -> Morphism:
        return Morphism(self.embed_object(f.src), self.embed_object(f.tgt), f.coords)

    def block(self, f: Morphism, i: int, j: int) -> Morphism:
        """Component s_i -> t_j of a matrix morphism."""
        s = self.tuples[f.src]
        t = self.tuples[f.tgt]
        _, offs, _ = self._layout[(f.src, f.tgt)]
        d = self.base.hom_dim[(s[i], t[j])]
        off = offs[(i, j)]
        return Morphism(s[i], t[j], f.coords[off: off + d])

    def from_blocks(self, s_tuple, t_tuple, blocks) -> Morphism:
        """Assemble a matrix morphism from components blocks[(i, j)]."""
        s_id, t_id = tuple_id(s_tuple), tuple_id(t_tuple)
        _, offs, total = self._layout[(s_id, t_id)]
        v = [0] * total
        for (i, j), g in blocks.items():
            if (g.src, g.tgt) != (s_tuple[i], t_tuple[j]):
                raise ValueError(f"block ({i},{j}) has wrong endpoints")
            off = offs[(i, j)]
            for k, cf in enumerate(g.coords):
                v[off + k] = cf
        return Morphism(s_id, t_id, v)


def additive_closure(base: FinCat, bound: int, cap_objects: int = MAX_CLOSURE_OBJECTS) -> AdditiveClosure:
    return AdditiveClosure(base, bound, cap_objects)


def induce_module(closure: AdditiveClosure, m: FinModule) -> FinModule:
    """The canonical extension of a base module: block sums on tuples."""
    base = closure.base
    dims = {}
    offs_of = {}
    for t_id, t in closure.tuples.items():
        offs = []
        total = 0
        for comp_obj in t:
            offs.append(total)
            total += m.dims[comp_obj]
        dims[t_id] = total
        offs_of[t_id] = offs
    action = {}
    for (s_id, t_id), (layout, _, total_dim) in closure._layout.items():
        s, t = closure.tuples[s_id], closure.tuples[t_id]
        for idx, (i, j, k) in enumerate(layout):
            rows = [[0] * dims[t_id] for _ in range(dims[s_id])]
            blk = m.action[(s[i], t[j], k)]
            ro, co = offs_of[s_id][i], offs_of[t_id][j]
            for r in range(blk.rows):
                for c in range(blk.cols):
                    rows[ro + r][co + c] = blk.entries[r][c]
            action[(s_id, t_id, idx)] = Mat(base.p, dims[s_id], dims[t_id], rows)
    return FinModule(closure.cat, dims, action, name=f"ind({m.name})" if m.name else "")


def restrict_module(closure: AdditiveClosure, n: FinModule) -> FinModule:
    """Restriction along the singleton embedding."""
    base = closure.base
    dims = {a: n.dims[closure.embed_object(a)] for a in base.objects}
    action = {}
    for a in base.objects:
        for b in base.objects:
            for k in range(base.hom_dim[(a, b)]):
                action[(a, b, k)] = n.action[(closure.embed_object(a), closure.embed_object(b), k)]
    return FinModule(base, dims, action, name=f"res({n.name})" if n.name else "")


def coproduct_of_representables(cat: FinCat, components) -> tuple:
    """(module, offsets): the direct sum of H_c over the given base objects."""
    dims = {}
    offs = []
    total_at = {a: 0 for a in cat.objects}
    for c in components:
        offs.append({a: total_at[a] for a in cat.objects})
        for a in cat.objects:
            total_at[a] += cat.hom_dim[(a, c)]
    for a in cat.objects:
        dims[a] = total_at[a]
    action = {}
    for a in cat.objects:
        for b in cat.objects:
            for i, f in enumerate(cat.basis(a, b)):
                rows = [[0] * dims[b] for _ in range(dims[a])]
                for idx, c in enumerate(components):
                    blk = cat.precompose_matrix(f, c)
                    ro, co = offs[idx][a], offs[idx][b]
                    for r in range(blk.rows):
                        for cc in range(blk.cols):
                            rows[ro + r][co + cc] = blk.entries[r][cc]
                action[(a, b, i)] = Mat(cat.p, dims[a], dims[b], rows)
    return FinModule(cat, dims, action, name="+".join(f"H_{c}" for c in components) or "0"), offs


def blocks_map(cat: FinCat, src_tuple, tgt_tuple, blocks) -> ModuleMap:
    """The module map between coproducts of representables induced by a block
    matrix of base morphisms (blocks[i][j]: src_i -> tgt_j)."""
    msrc, offs_s = coproduct_of_representables(cat, src_tuple)
    mtgt, offs_t = coproduct_of_representables(cat, tgt_tuple)
    comps = {}
    for a in cat.objects:
        rows = [[0] * msrc.dims[a] for _ in range(mtgt.dims[a])]
        for i, si in enumerate(src_tuple):
            for j, tj in enumerate(tgt_tuple):
                blk = cat.postcompose_matrix(blocks[i][j], a)
                ro, co = offs_t[j][a], offs_s[i][a]
                for r in range(blk.rows):
                    for c in range(blk.cols):
                        rows[ro + r][co + c] = (rows[ro + r][co + c] + blk.entries[r][c]) % cat.p
        comps[a] = Mat(cat.p, mtgt.dims[a], msrc.dims[a], rows)
    return ModuleMap(msrc, mtgt, comps)


def pseudo_kernel(cat: FinCat, src_tuple, tgt_tuple, blocks):
    """A pseudo-kernel of a map between coproducts of representables.

    Returns (ker_tuple, psi_blocks): a tuple of base objects and a block
    matrix psi with phi . psi = 0, through which every map from a
    representable into the kernel factors.  Construction: take the module
    kernel, pick generators, and read the corresponding matrix off Yoneda.
    """
    phi = blocks_map(cat, src_tuple, tgt_tuple, blocks)
    k = kernel(phi)
    msrc = phi.src
    gens = []
    acc = zero_submodule(msrc)
    for c in cat.objects:
        for v in k.spaces[c].basis_vectors():
            grown = acc.sum(cyclic_submodule(msrc, c, v))
            if grown.total_dim() > acc.total_dim():
                acc = grown
                gens.append((c, v))
        if acc.total_dim() == k.total_dim():
            break
    ker_tuple = tuple(c for c, _ in gens)
    _, offs_s = coproduct_of_representables(cat, src_tuple)
    psi_blocks = []
    for c, v in gens:
        row = []
        for i, si in enumerate(src_tuple):
            off = offs_s[i][c]
            d = cat.hom_dim[(c, si)]
            row.append(Morphism(c, si, v[off: off + d]))
        psi_blocks.append(row)
    return ker_tuple, psi_blocks


def compose_block_matrices(cat: FinCat, f_blocks, g_blocks):
    """(g . f) for block matrices f: s -> t, g: t -> u of base morphisms."""
    out = []
    for i, frow in enumerate(f_blocks):
        row = []
        for l in range(len(g_blocks[0]) if g_blocks else 0):
            acc = None
            for j, fij in enumerate(frow):
                term = cat.compose(g_blocks[j][l], fij)
                acc = term if acc is None else cat.add(acc, term)
            row.append(acc)
        out.append(row)
    return out


class IdemObject:
    def __init__(self, carrier_id: str, carrier, idem: Morphism):
        self.carrier_id = carrier_id
        self.carrier = carrier
        self.idem = idem


class IdempotentCompletion:
    """The Karoubi envelope of the bounded additive closure.

    Objects are pairs (tuple object, idempotent endomorphism); the hom space
    of (t, r) -> (u, s) is the subspace of closure morphisms fixed by the
    two-sided sandwich with s and r, and the identity of (t, r) is r itself.
    """

    def __init__(self, base: FinCat, bound: int, cap: int | None = None):
        self.base = base
        self.closure = AdditiveClosure(base, bound)
        ccat = self.closure.cat
        if cap is None:
            cap = vector_cap()
        self.objects_meta = {}
        objects = []
        for t_id in ccat.objects:
            d = ccat.hom_dim[(t_id, t_id)]
            if ccat.p ** d > cap:
                raise CapExceeded(
                    f"idempotent scan on closure endo space of {t_id} needs"
                    f" {ccat.p ** d} vectors, over cap {cap}"
                )
            for n, eps in enumerate(list_idempotents(ccat, t_id)):
                obj = f"{t_id}#{n}"
                objects.append(obj)
                self.objects_meta[obj] = IdemObject(t_id, self.closure.tuples[t_id], eps)
        self._lift = {}
        hom = {}
        p = ccat.p
        for o1 in objects:
            m1 = self.objects_meta[o1]
            for o2 in objects:
                m2 = self.objects_meta[o2]
                amb = ccat.hom_dim[(m1.carrier_id, m2.carrier_id)]
                sandwich_cols = []
                for f in ccat.basis(m1.carrier_id, m2.carrier_id):
                    g = ccat.compose(ccat.compose(m2.idem, f), m1.idem)
                    sandwich_cols.append(tuple((x - y) % p for x, y in zip(g.coords, f.coords)))
                mat = Mat(p, amb, amb, tuple(zip(*sandwich_cols)) if sandwich_cols else ())
                sub = kernel_basis(mat)
                basis = sub.basis_vectors()
                cols = tuple(zip(*basis)) if basis else ((),) * amb if amb else ()
                self._lift[(o1, o2)] = Mat(p, amb, len(basis), cols)
                hom[(o1, o2)] = len(basis)
        comp = {}
        for o1 in objects:
            for o2 in objects:
                d1 = hom[(o1, o2)]
                if d1 == 0:
                    continue
                for o3 in objects:
                    d2, d3 = hom[(o2, o3)], hom[(o1, o3)]
                    if d2 == 0 or d3 == 0:
                        continue
                    m1, m2, m3 = (self.objects_meta[o] for o in (o1, o2, o3))
                    table = []
                    for i in range(d1):
                        fi = Morphism(m1.carrier_id, m2.carrier_id, self._lift[(o1, o2)].col(i))
                        row = []
                        for j in range(d2):
                            gj = Morphism(m2.carrier_id, m3.carrier_id, self._lift[(o2, o3)].col(j))
                            comp_c = ccat.compose(gj, fi)
                            coords = solve(self._lift[(o1, o3)], comp_c.coords)
                            if coords is None:
                                raise RuntimeError("composite escaped the sandwich subspace")
                            row.append(coords)
                        table.append(tuple(row))
                    comp[(o1, o2, o3)] = tuple(table)
        ids = {}
        for o in objects:
            m = self.objects_meta[o]
            coords = solve(self._lift[(o, o)], m.idem.coords)
            if coords is None:
                raise RuntimeError("idempotent escaped its own sandwich subspace")
            ids[o] = coords
        self.cat = FinCat(p, objects, hom, comp, ids,
                          name=f"karoubi({base.name},{bound})" if base.name else "karoubi")


def idempotent_completion(base: FinCat, bound: int, cap: int | None = None) -> IdempotentCompletion:
    return IdempotentCompletion(base, bound, cap)


def proj_module_of_idempotent(closure: AdditiveClosure, eps: Morphism):
    """The finitely generated projective base module cut out by an idempotent
    endomorphism of a tuple object: the image of postcomposition with it."""
    ccat = closure.cat
    if ccat.compose(eps, eps) != eps:
        raise ValueError("not an idempotent")
    base = closure.base
    x_id = eps.src
    amb = restrict_h(closure, x_id)
    comps = {a: ccat.postcompose_matrix(eps, closure.embed_object(a)) for a in base.objects}
    phi = ModuleMap(amb, amb, comps)
    p_sub = image(phi)
    mod, incl = submodule_module(p_sub)
    return mod, incl


def restrict_h(closure: AdditiveClosure, t_id: str) -> FinModule:
    """The base module c -> closure(c, t), the coproduct of representables."""
    return restrict_module(closure, representable(closure.cat, t_id))


def objects_isomorphic(cat: FinCat, a: str, b: str) -> bool:
    """Exhaustive mutually-inverse morphism search, behind a hom-dim prefilter."""
    from .linalg import check_vector_cap

    if a == b:
        return True
    if (
        cat.hom_dim[(a, b)] != cat.hom_dim[(b, a)]
        or cat.hom_dim[(a, a)] != cat.hom_dim[(b, b)]
    ):
        return False
    check_vector_cap(cat.p ** cat.hom_dim[(a, b)], f"inverse scan on A({a},{b})")
    ida, idb = cat.identity(a), cat.identity(b)
    for f in cat.elements(a, b):
        gf_candidates = [g for g in cat.elements(b, a) if cat.compose(g, f) == ida]
        if any(cat.compose(f, g) == idb for g in gf_candidates):
            return True
    return False


def morita_invariants(cat: FinCat, census_bound: int = 4) -> dict:
    """The completion-stable fingerprint: center dimension, idempotent counts
    per endo algebra, and the module census profile by total dimension.

    Equality of these invariants never certifies a Morita equivalence; a
    candidate equivalence can be checked explicitly with
    check_equivalence_candidate.
    """
    from .center import compute_center
    from .modules import enumerate_modules

    idem_counts = sorted(len(list_idempotents(cat, a)) for a in cat.objects)
    census = enumerate_modules(cat, census_bound)
    profile = [0] * (census_bound + 1)
    for m in census:
        profile[m.total_dim()] += 1
    return {
        "center_dim": compute_center(cat).dim,
        "idempotent_counts": idem_counts,
        "census_profile": profile,
    }


def check_equivalence_candidate(src: FinCat, tgt: FinCat, object_map, coord_maps) -> dict:
    """Verify a user-supplied functor as an equivalence.

    object_map sends source objects to target objects; coord_maps[(a, b)] is
    the matrix taking coordinates in src(a, b) to coordinates in
    tgt(object_map[a], object_map[b]).  Checks: identities and composition are
    preserved, every hom matrix is invertible (full faithfulness), and every
    target object is isomorphic to an image object (essential surjectivity,
    decided by exhaustive inverse search).
    """
    functorial = True
    for a in src.objects:
        fa = object_map[a]
        mapped = coord_maps[(a, a)].apply(src.id_coords[a])
        if mapped != tgt.id_coords[fa]:
            functorial = False
    for a in src.objects:
        for b in src.objects:
            for f in src.basis(a, b):
                for c in src.objects:
                    for g in src.basis(b, c):
                        lhs = coord_maps[(a, c)].apply(src.compose(g, f).coords)
                        rhs = tgt.compose(
                            Morphism(object_map[b], object_map[c], coord_maps[(b, c)].apply(g.coords)),
                            Morphism(object_map[a], object_map[b], coord_maps[(a, b)].apply(f.coords)),
                        ).coords
                        if lhs != rhs:
                            functorial = False
    fully_faithful = all(
        coord_maps[(a, b)].rows == coord_maps[(a, b)].cols == src.hom_dim[(a, b)]
        and tgt.hom_dim[(object_map[a], object_map[b])] == src.hom_dim[(a, b)]
        and coord_maps[(a, b)].rank() == src.hom_dim[(a, b)]
        for a in src.objects
        for b in src.objects
    )
    hit = set(object_map[a] for a in src.objects)
    essentially_surjective = all(
        any(objects_isomorphic(tgt, t, h) for h in hit) for t in tgt.objects
    )
    return {
        "functorial": functorial,
        "fully_faithful": fully_faithful,
        "essentially_surjective": essentially_surjective,
        "equivalence": functorial and fully_faithful and essentially_surjective,
    }


def find_oplus_generator(base: FinCat, bound: int):
    """A tuple g such that every identity factors through a power of g.

    Factorization through some finite power is a span condition: id_a must lie
    in the span of composites (g -> a) . (a -> g).  Returns the first tuple in
    the deterministic object order, or None within the bound.
    """
    closure = AdditiveClosure(base, bound)
    ccat = closure.cat
    for g_id in ccat.objects:
        ok = True
        for a in base.objects:
            a_id = closure.embed_object(a)
            span = Subspace.zero(base.p, base.hom_dim[(a, a)])
            vecs = []
            for u in ccat.basis(a_id, g_id):
                for v in ccat.basis(g_id, a_id):
                    vecs.append(ccat.compose(v, u).coords)
            span = Subspace.from_vectors(base.p, base.hom_dim[(a, a)], vecs)
            if not span.contains(base.id_coords[a]):
                ok = False
                break
        if ok:
            return closure.tuples[g_id]
    return None
