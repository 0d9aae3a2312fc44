"""Two-sided ideal calculus for a FinCat.

An ideal assigns a subspace of A(a, b) to every ordered pair, closed under
composition with arbitrary morphisms on both sides.  Enumeration rests on the
fact that every ideal is a sum of principal ideals of its elements, so the
sum-closure of the finitely many principal ideals is the whole ideal lattice.
"""

from __future__ import annotations

from .category import FinCat, Morphism
from .linalg import (
    CapExceeded,
    Subspace,
    complement_data,
    subspace_sum,
    vector_cap,
)
from .modules import FinModule, representable, trace


class Ideal:
    """spaces[(a, b)]: a canonical subspace of the coordinates of A(a, b)."""

    def __init__(self, cat: FinCat, spaces):
        self.cat = cat
        self.spaces = {}
        for a in cat.objects:
            for b in cat.objects:
                s = spaces.get((a, b))
                if s is None:
                    s = Subspace.zero(cat.p, cat.hom_dim[(a, b)])
                if s.ambient != cat.hom_dim[(a, b)]:
                    raise ValueError(f"ambient mismatch at {(a, b)}")
                self.spaces[(a, b)] = s

    def key(self):
        return tuple(self.spaces[(a, b)].key() for a in self.cat.objects for b in self.cat.objects)

    def __eq__(self, other):
        return isinstance(other, Ideal) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        dims = {pair: s.dim for pair, s in self.spaces.items() if s.dim}
        return f"Ideal(dims={dims or 0})"

    def total_dim(self) -> int:
        return sum(s.dim for s in self.spaces.values())

    def dim(self, a: str, b: str) -> int:
        return self.spaces[(a, b)].dim

    def contains_morphism(self, f: Morphism) -> bool:
        return self.spaces[(f.src, f.tgt)].contains(f.coords)

    def contains(self, other: "Ideal") -> bool:
        return all(
            self.spaces[pair].contains_subspace(other.spaces[pair]) for pair in self.spaces
        )

    def morphism_basis(self, a: str, b: str):
        return [Morphism(a, b, v) for v in self.spaces[(a, b)].basis_vectors()]

    def is_full(self) -> bool:
        return all(s.dim == s.ambient for s in self.spaces.values())

    def is_zero(self) -> bool:
        return all(s.dim == 0 for s in self.spaces.values())

    def validate(self) -> list:
        """Two-sided closure on basis elements; violations reported, not raised."""
        cat = self.cat
        report = []
        for (a, b), s in self.spaces.items():
            for v in s.basis_vectors():
                f = Morphism(a, b, v)
                for c in cat.objects:
                    for l in cat.basis(b, c):
                        if not self.contains_morphism(cat.compose(l, f)):
                            report.append({"kind": "left", "at": (a, b, c)})
                    for r in cat.basis(c, a):
                        if not self.contains_morphism(cat.compose(f, r)):
                            report.append({"kind": "right", "at": (c, a, b)})
        return report


def zero_ideal(cat: FinCat) -> Ideal:
    return Ideal(cat, {})


def unit_ideal(cat: FinCat) -> Ideal:
    return Ideal(
        cat,
        {(a, b): Subspace.full(cat.p, cat.hom_dim[(a, b)]) for a in cat.objects for b in cat.objects},
    )


def ideal_sum(i: Ideal, j: Ideal) -> Ideal:
    return Ideal(
        i.cat,
        {pair: subspace_sum(i.spaces[pair], j.spaces[pair]) for pair in i.spaces},
    )


def generated_by(cat: FinCat, gens) -> Ideal:
    """Smallest ideal containing the generators.

    A general element is a sum of sandwiches (post) . g . (pre), bilinear in
    the padding morphisms, so the span over basis paddings is already
    two-sidedly closed; no fixpoint is needed.
    """
    gens = list(gens)
    spaces = {}
    for a in cat.objects:
        for b in cat.objects:
            vecs = []
            for g in gens:
                for pre in cat.basis(a, g.src):
                    half = cat.compose(g, pre)
                    for post in cat.basis(g.tgt, b):
                        vecs.append(cat.compose(post, half).coords)
            spaces[(a, b)] = Subspace.from_vectors(cat.p, cat.hom_dim[(a, b)], vecs)
    return Ideal(cat, spaces)


def principal(cat: FinCat, f: Morphism) -> Ideal:
    return generated_by(cat, [f])


def product(i: Ideal, j: Ideal) -> Ideal:
    """(I.J)(a, b): spans of composites through every middle object."""
    cat = i.cat
    spaces = {}
    for a in cat.objects:
        for b in cat.objects:
            vecs = []
            for c in cat.objects:
                for phi in i.morphism_basis(c, b):
                    for psi in j.morphism_basis(a, c):
                        vecs.append(cat.compose(phi, psi).coords)
            spaces[(a, b)] = Subspace.from_vectors(cat.p, cat.hom_dim[(a, b)], vecs)
    return Ideal(cat, spaces)


def is_idempotent(i: Ideal) -> bool:
    return product(i, i) == i


def enumerate_ideals(cat: FinCat, cap: int | None = None) -> list:
    """Every two-sided ideal: sum-closure of the principal ideals."""
    if cap is None:
        cap = vector_cap()
    count = sum(cat.p ** d - 1 for d in cat.hom_dim.values() if d)
    if count > cap:
        raise CapExceeded(
            f"enumerate_ideals: {count} principal generators exceed cap {cap}"
        )
    principals = {}
    for a in cat.objects:
        for b in cat.objects:
            for f in cat.elements(a, b):
                if f.is_zero():
                    continue
                ideal = principal(cat, f)
                principals.setdefault(ideal.key(), ideal)
    gens = [principals[k] for k in sorted(principals)]
    found = {zero_ideal(cat).key(): zero_ideal(cat)}
    frontier = [zero_ideal(cat)]
    while frontier:
        nxt = []
        for i in frontier:
            for g in gens:
                u = ideal_sum(i, g)
                k = u.key()
                if k not in found:
                    found[k] = u
                    nxt.append(u)
        frontier = nxt
    return sorted(found.values(), key=lambda i: (i.total_dim(), i.key()))


def enumerate_idempotent_ideals(cat: FinCat, cap: int | None = None) -> list:
    return [i for i in enumerate_ideals(cat, cap) if is_idempotent(i)]


class QuotientCategory:
    """The quotient category A/I with its projection and a chosen basis lift."""

    def __init__(self, cat: FinCat, ideal: Ideal):
        self.base = cat
        self.ideal = ideal
        proj = {}
        lift = {}
        hom = {}
        for pair, s in ideal.spaces.items():
            pr, lf = complement_data(s)
            proj[pair] = pr
            lift[pair] = lf
            hom[pair] = pr.rows
        comp = {}
        for a in cat.objects:
            for b in cat.objects:
                for c in cat.objects:
                    if hom[(a, b)] == 0 or hom[(b, c)] == 0 or hom[(a, c)] == 0:
                        continue
                    table = []
                    for i in range(hom[(a, b)]):
                        fi = Morphism(a, b, lift[(a, b)].col(i))
                        row = []
                        for j in range(hom[(b, c)]):
                            gj = Morphism(b, c, lift[(b, c)].col(j))
                            row.append(proj[(a, c)].apply(cat.compose(gj, fi).coords))
                        table.append(tuple(row))
                    comp[(a, b, c)] = tuple(table)
        ids = {a: proj[(a, a)].apply(cat.id_coords[a]) for a in cat.objects}
        self.cat = FinCat(cat.p, cat.objects, hom, comp, ids,
                          name=f"{cat.name}/I" if cat.name else "quotient")
        self.proj = proj
        self.lift = lift

    def project_morphism(self, f: Morphism) -> Morphism:
        return Morphism(f.src, f.tgt, self.proj[(f.src, f.tgt)].apply(f.coords))

    def lift_morphism(self, g: Morphism) -> Morphism:
        return Morphism(g.src, g.tgt, self.lift[(g.src, g.tgt)].apply(g.coords))


def quotient_category(cat: FinCat, ideal: Ideal) -> QuotientCategory:
    return QuotientCategory(cat, ideal)


def restrict_along_quotient(qdata: QuotientCategory, n: FinModule) -> FinModule:
    """A module over A/I viewed over A: the action factors through the projection."""
    cat = qdata.base
    dims = {a: n.dims[a] for a in cat.objects}
    action = {}
    for a in cat.objects:
        for b in cat.objects:
            for i, f in enumerate(cat.basis(a, b)):
                action[(a, b, i)] = n.act(qdata.project_morphism(f))
    return FinModule(cat, dims, action, name=n.name)


def extend_to_quotient(qdata: QuotientCategory, m: FinModule) -> FinModule:
    """M / M.I as a module over A/I, with the induced well-defined action."""
    from .modules import module_times_ideal

    cat = qdata.base
    mi = module_times_ideal(m, qdata.ideal)
    proj = {}
    lift = {}
    for a in cat.objects:
        pr, lf = complement_data(mi.spaces[a])
        proj[a] = pr
        lift[a] = lf
    qcat = qdata.cat
    dims = {a: proj[a].rows for a in cat.objects}
    action = {}
    for a in cat.objects:
        for b in cat.objects:
            for j in range(qcat.hom_dim[(a, b)]):
                rep = qdata.lift_morphism(Morphism(a, b, _unit_vec(qcat.hom_dim[(a, b)], j)))
                action[(a, b, j)] = proj[a] @ m.act(rep) @ lift[b]
    return FinModule(qcat, dims, action, name=f"{m.name}/MI" if m.name else "")


def _unit_vec(n: int, j: int):
    v = [0] * n
    v[j] = 1
    return tuple(v)


def trace_ideal(cat: FinCat, modules) -> Ideal:
    """The trace of a family of modules in the regular bimodule:
    I(a, b) = trace of the family in H_b, evaluated at a."""
    modules = list(modules)
    spaces = {}
    for b in cat.objects:
        hb = representable(cat, b)
        t = trace(modules, hb)
        for a in cat.objects:
            spaces[(a, b)] = t.spaces[a]
    return Ideal(cat, spaces)


def idempotent_generated_ideal(cat: FinCat, eps: Morphism) -> Ideal:
    if cat.compose(eps, eps) != eps:
        raise ValueError("generator is not idempotent")
    return generated_by(cat, [eps])


def restrict_closure_ideal(closure, j: "Ideal") -> Ideal:
    """An ideal of the additive closure, restricted to the singleton pairs.

    The singleton hom spaces carry the same coordinates as the base category,
    so the restriction is a plain re-indexing.
    """
    base = closure.base
    spaces = {}
    for a in base.objects:
        for b in base.objects:
            s = j.spaces[(closure.embed_object(a), closure.embed_object(b))]
            spaces[(a, b)] = Subspace(base.p, s.ambient, s.mat)
    return Ideal(base, spaces)


def closure_idempotent_base_ideal(closure, eps: Morphism) -> Ideal:
    """The ideal of the base category induced by a closure idempotent: the
    restriction to singleton pairs of the closure ideal it generates.

    Only the singleton components are ever needed, so the sandwich spans are
    computed on those pairs alone.
    """
    ccat = closure.cat
    base = closure.base
    spaces = {}
    for a in base.objects:
        a_id = closure.embed_object(a)
        for b in base.objects:
            b_id = closure.embed_object(b)
            vecs = []
            for pre in ccat.basis(a_id, eps.src):
                half = ccat.compose(eps, pre)
                for post in ccat.basis(eps.tgt, b_id):
                    vecs.append(ccat.compose(post, half).coords)
            spaces[(a, b)] = Subspace.from_vectors(base.p, base.hom_dim[(a, b)], vecs)
    return Ideal(base, spaces)


def _closure_idempotent_candidates(closure, ideal: Ideal, cap: int):
    """(eps, induced base ideal) for closure idempotents inside the ideal,
    one representative per induced ideal.

    Endo spaces whose element count exceeds the cap are skipped; that is the
    documented bounded-search caveat.
    """
    from .category import list_idempotents

    ccat = closure.cat
    out = []
    seen = set()
    for t_id in ccat.objects:
        d = ccat.hom_dim[(t_id, t_id)]
        if ccat.p ** d > cap:
            continue
        for eps in list_idempotents(ccat, t_id):
            if eps.is_zero():
                continue
            j = closure_idempotent_base_ideal(closure, eps)
            if j.key() in seen:
                continue
            if ideal.contains(j):
                seen.add(j.key())
                out.append((eps, j))
    return out


def is_trace_of_projectives(cat: FinCat, ideal: Ideal, bound: int = 3, cap: int | None = None):
    """A witness set of idempotent endomorphisms in the bounded additive
    closure whose generated ideal is the given one, or None within the bound."""
    from .completion import additive_closure

    if cap is None:
        cap = vector_cap()
    closure = additive_closure(cat, bound)
    candidates = _closure_idempotent_candidates(closure, ideal, cap)
    total = zero_ideal(cat)
    for _, j in candidates:
        total = ideal_sum(total, j)
    if total != ideal:
        return None
    witness = []
    acc = zero_ideal(cat)
    for eps, j in candidates:
        if not acc.contains(j):
            acc = ideal_sum(acc, j)
            witness.append(eps)
        if acc == ideal:
            break
    return witness


def subcategory_from_ideal(cat: FinCat, ideal: Ideal, bound: int = 3, cap: int | None = None):
    """The projective modules cut out by a witness set of idempotents, or None."""
    from .completion import additive_closure, proj_module_of_idempotent

    witness = is_trace_of_projectives(cat, ideal, bound, cap)
    if witness is None:
        return None
    closure = additive_closure(cat, bound)
    return [proj_module_of_idempotent(closure, eps)[0] for eps in witness]


def trace_from_subcategory(cat: FinCat, modules) -> Ideal:
    return trace_ideal(cat, modules)
