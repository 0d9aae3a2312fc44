"""TTF triples from idempotent ideals, split detection, corner categories,
and canonical recollement data.

The bijection with idempotent ideals is exercised exactly: the reverse map
evaluates the torsion vanishing condition on a census that provably contains
the canonical test modules (the quotients of representables by the ideal), so
the finite intersection computes the honest infinite one.
"""

from __future__ import annotations

from .category import FinCat, Morphism
from .center import center_idempotents, compute_center, ideal_of_idempotent
from .completion import AdditiveClosure, additive_closure, induce_module, proj_module_of_idempotent
from .ideals import (
    Ideal,
    enumerate_idempotent_ideals,
    extend_to_quotient,
    is_idempotent,
    is_trace_of_projectives,
    quotient_category,
    restrict_along_quotient,
)
from .linalg import Mat, image_basis, kernel_basis, solve, solve_matrix
from .modules import (
    FinModule,
    ModuleMap,
    all_submodules,
    annihilator,
    enumerate_modules,
    hom_space,
    module_times_ideal,
    quotient_module,
    submodule_module,
)


class TTFTriple:
    """An idempotent ideal with the three classes it cuts out of Mod A."""

    def __init__(self, cat: FinCat, ideal: Ideal):
        if not is_idempotent(ideal):
            raise ValueError("TTF triples require an idempotent ideal")
        self.cat = cat
        self.ideal = ideal

    def in_torsion(self, m: FinModule) -> bool:
        """Every ideal element acts by zero."""
        for (a, b), s in self.ideal.spaces.items():
            for w in s.basis_vectors():
                if not m.act(Morphism(a, b, w)).is_zero():
                    return False
        return True

    def in_closed(self, m: FinModule) -> bool:
        """M . I = M (the left class of the triple)."""
        return module_times_ideal(m, self.ideal).is_full()

    def in_free(self, m: FinModule) -> bool:
        """No nonzero submodule is killed by the ideal."""
        return annihilator(m, self.ideal).is_zero()

    def radicals(self, m: FinModule):
        """(c(M), t(M), M / t(M)): the two radicals and the torsionfree coradical."""
        c = module_times_ideal(m, self.ideal)
        t = annihilator(m, self.ideal)
        coradical, _ = quotient_module(m, t)
        return c, t, coradical

    def census_fingerprint(self, census) -> tuple:
        return tuple(self.in_torsion(m) for m in census)


def ttf_from_ideal(cat: FinCat, ideal: Ideal) -> TTFTriple:
    return TTFTriple(cat, ideal)


def ideal_from_ttf(cat: FinCat, membership, census=None) -> Ideal:
    """The ideal of morphisms killed by every torsion module.

    The test census of all modules with dimension up to the largest
    representable contains the canonical witnesses, which makes the finite
    intersection exact."""
    if census is None:
        bound = max(
            (sum(cat.hom_dim[(a, b)] for a in cat.objects) for b in cat.objects),
            default=0,
        )
        census = enumerate_modules(cat, bound)
    members = [m for m in census if membership(m)]
    spaces = {}
    for a in cat.objects:
        for b in cat.objects:
            d = cat.hom_dim[(a, b)]
            rows = []
            for m in members:
                # M(r) = sum r_i M(alpha_i) must vanish; linear in r
                for row_idx in range(m.dims[a]):
                    for col_idx in range(m.dims[b]):
                        rows.append(
                            [m.action[(a, b, i)].entries[row_idx][col_idx] for i in range(d)]
                        )
            spaces[(a, b)] = kernel_basis(Mat(cat.p, len(rows), d, rows))
    return Ideal(cat, spaces)


def jans_roundtrip(cat: FinCat, census_bound: int = 4) -> dict:
    """Idempotent ideal -> TTF -> ideal is the identity, with pairwise
    distinct torsion fingerprints on the census."""
    ideals = enumerate_idempotent_ideals(cat)
    census = enumerate_modules(cat, census_bound)
    results = []
    fingerprints = []
    for ideal in ideals:
        triple = ttf_from_ideal(cat, ideal)
        back = ideal_from_ttf(cat, triple.in_torsion)
        results.append(back == ideal)
        fingerprints.append(triple.census_fingerprint(census))
    return {
        "idempotent_ideals": len(ideals),
        "roundtrips": results,
        "all_roundtrip": all(results),
        "fingerprints_distinct": len(set(fingerprints)) == len(fingerprints),
        "pass": all(results) and len(set(fingerprints)) == len(fingerprints),
    }


def is_split(cat: FinCat, triple: TTFTriple, census=None, census_bound: int = 4) -> dict:
    """The three split criteria, evaluated independently and compared.

    (1) every census module decomposes as c(M) + t(M);
    (2) some central idempotent induces the ideal (exact, not census-bound);
    (3) the closed and free classes agree on the census.
    """
    if census is None:
        census = enumerate_modules(cat, census_bound)
    z = compute_center(cat)
    central = None
    for coords, eps in center_idempotents(z):
        i_eps, _ = ideal_of_idempotent(cat, eps)
        if i_eps == triple.ideal:
            central = (coords, eps)
            break
    decomposes = True
    for m in census:
        c, t, _ = triple.radicals(m)
        if not (c.sum(t).is_full() and c.intersect(t).is_zero()):
            decomposes = False
            break
    classes_agree = all(triple.in_closed(m) == triple.in_free(m) for m in census)
    verdicts = {
        "decomposition": decomposes,
        "central_idempotent": central is not None,
        "closed_equals_free": classes_agree,
    }
    report = {
        **verdicts,
        "agree": len(set(verdicts.values())) == 1,
        "split": central is not None,
    }
    if central is not None:
        _, eps = central
        report["class_formulas"] = all(
            triple.in_closed(m)
            == all(m.act(eps.components[a]).rank() == m.dims[a] for a in cat.objects)
            and triple.in_torsion(m)
            == all(m.act(eps.components[a]).is_zero() for a in cat.objects)
            for m in census
        )
    return report


def _column_matrix(p, vectors, ambient):
    cols = list(vectors)
    if not cols:
        return Mat(p, ambient, 0, ((),) * ambient if ambient else ())
    return Mat(p, ambient, len(cols), tuple(zip(*cols)))


class CornerCategory:
    """Objects are chosen idempotents; homs are the two-sided sandwiches."""

    def __init__(self, closure: AdditiveClosure, idempotents):
        self.closure = closure
        ccat = closure.cat
        p = ccat.p
        self.idempotents = list(idempotents)
        objects = [f"e{i}" for i in range(len(self.idempotents))]
        self.carrier = {f"e{i}": eps for i, eps in enumerate(self.idempotents)}
        self._lift = {}
        self._restriction_cache = {}
        hom = {}
        for o1, e1 in self.carrier.items():
            for o2, e2 in self.carrier.items():
                amb = ccat.hom_dim[(e1.src, e2.src)]
                sandwiched = [
                    ccat.compose(ccat.compose(e2, f), e1).coords
                    for f in ccat.basis(e1.src, e2.src)
                ]
                img = image_basis(_column_matrix(p, sandwiched, amb))
                self._lift[(o1, o2)] = _column_matrix(p, img.basis_vectors(), amb)
                hom[(o1, o2)] = img.dim
        comp = {}
        for o1 in objects:
            for o2 in objects:
                if hom[(o1, o2)] == 0:
                    continue
                for o3 in objects:
                    if hom[(o2, o3)] == 0 or hom[(o1, o3)] == 0:
                        continue
                    e1, e2, e3 = (self.carrier[o] for o in (o1, o2, o3))
                    table = []
                    for i in range(hom[(o1, o2)]):
                        fi = Morphism(e1.src, e2.src, self._lift[(o1, o2)].col(i))
                        row = []
                        for j in range(hom[(o2, o3)]):
                            gj = Morphism(e2.src, e3.src, self._lift[(o2, o3)].col(j))
                            coords = solve(self._lift[(o1, o3)], ccat.compose(gj, fi).coords)
                            if coords is None:
                                raise RuntimeError("corner composite escaped the sandwich image")
                            row.append(coords)
                        table.append(tuple(row))
                    comp[(o1, o2, o3)] = tuple(table)
        ids = {}
        for o, e in self.carrier.items():
            coords = solve(self._lift[(o, o)], e.coords)
            if coords is None:
                raise RuntimeError("idempotent escaped its own sandwich image")
            ids[o] = coords
        self.cat = FinCat(p, objects, hom, comp, ids, name="corner")

    def restriction_data(self, m: FinModule):
        """(j* module, per-object lift matrices), cached by module identity."""
        key = m.key()
        if key in self._restriction_cache:
            return self._restriction_cache[key]
        closure = self.closure
        mhat = induce_module(closure, m)
        lifts = {}
        dims = {}
        for o, eps in self.carrier.items():
            e_mat = mhat.act(eps)
            img = image_basis(e_mat)
            lifts[o] = _column_matrix(m.p, img.basis_vectors(), e_mat.rows)
            dims[o] = img.dim
        action = {}
        for o1, e1 in self.carrier.items():
            for o2, e2 in self.carrier.items():
                for i in range(self.cat.hom_dim[(o1, o2)]):
                    gamma = Morphism(e1.src, e2.src, self._lift[(o1, o2)].col(i))
                    restricted = solve_matrix(lifts[o1], mhat.act(gamma) @ lifts[o2])
                    if restricted is None:
                        raise RuntimeError("corner action does not preserve the images")
                    action[(o1, o2, i)] = restricted
        mod = FinModule(self.cat, dims, action, name=f"j*({m.name})" if m.name else "")
        self._restriction_cache[key] = (mod, lifts)
        return mod, lifts


def corner_category(closure: AdditiveClosure, idempotents) -> CornerCategory:
    ccat = closure.cat
    for eps in idempotents:
        if ccat.compose(eps, eps) != eps:
            raise ValueError("corner objects must be idempotent endomorphisms")
    return CornerCategory(closure, idempotents)


def corner_restriction(corner: CornerCategory, m: FinModule) -> FinModule:
    return corner.restriction_data(m)[0]


def corner_restriction_map(corner: CornerCategory, phi: ModuleMap) -> ModuleMap:
    """j* on maps: restrict the induced block-diagonal components to the images."""
    src_mod, src_lifts = corner.restriction_data(phi.src)
    tgt_mod, tgt_lifts = corner.restriction_data(phi.tgt)
    comps = {}
    for o, eps in corner.carrier.items():
        phat = _induced_component(corner.closure, phi, eps.src)
        mat = solve_matrix(tgt_lifts[o], phat @ src_lifts[o])
        if mat is None:
            raise RuntimeError("induced map does not preserve idempotent images")
        comps[o] = mat
    return ModuleMap(src_mod, tgt_mod, comps)


def _induced_component(closure: AdditiveClosure, phi: ModuleMap, t_id: str) -> Mat:
    """The block diagonal component of the induced map at a tuple object."""
    t = closure.tuples[t_id]
    p = phi.src.p
    rows_total = sum(phi.tgt.dims[c] for c in t)
    cols_total = sum(phi.src.dims[c] for c in t)
    rows = [[0] * cols_total for _ in range(rows_total)]
    ro = co = 0
    for c in t:
        blk = phi.comps[c]
        for r in range(blk.rows):
            for cc in range(blk.cols):
                rows[ro + r][co + cc] = blk.entries[r][cc]
        ro += blk.rows
        co += blk.cols
    return Mat(p, rows_total, cols_total, rows)


class RecollementData:
    """The canonical recollement datum of a trace-of-projectives ideal: the
    quotient category with restriction and extension of scalars on one side,
    the corner category with the idempotent-image functor on the other."""

    def __init__(self, cat: FinCat, ideal: Ideal, bound: int = 3):
        witness = is_trace_of_projectives(cat, ideal, bound)
        if witness is None:
            raise ValueError(
                "no idempotent witness at this bound: recollement data needs an"
                " ideal that is the trace of finitely generated projectives"
            )
        self.cat = cat
        self.ideal = ideal
        self.bound = bound
        self.witness = witness
        self.quotient = quotient_category(cat, ideal)
        self.closure = additive_closure(cat, bound)
        self.corner = corner_category(self.closure, witness)
        self.triple = ttf_from_ideal(cat, ideal)

    def inclusion(self, n: FinModule) -> FinModule:
        """i_*: a module over A/I viewed over A."""
        return restrict_along_quotient(self.quotient, n)

    def extension(self, m: FinModule) -> FinModule:
        """i^*: M / M.I over A/I."""
        return extend_to_quotient(self.quotient, m)

    def coextension(self, m: FinModule) -> FinModule:
        """i^!: the largest submodule killed by the ideal, over A/I."""
        t = annihilator(m, self.ideal)
        t_mod, _ = submodule_module(t)
        return extend_to_quotient(self.quotient, t_mod)

    def corner_image(self, m: FinModule) -> FinModule:
        """j^*: restriction to the corner category."""
        return corner_restriction(self.corner, m)


def recollement_data(cat: FinCat, ideal: Ideal, bound: int = 3) -> RecollementData:
    return RecollementData(cat, ideal, bound)


def recollement_shadows(data: RecollementData, census_bound: int = 4) -> dict:
    """The finite shadows of the recollement axioms on the module census:
    Ker(j^*) is the torsion class, both adjunction dimension identities hold
    on census pairs, and j^* is exact on census short exact sequences."""
    cat = data.cat
    census = enumerate_modules(cat, census_bound)
    qcensus = enumerate_modules(data.quotient.cat, census_bound)

    kernel_matches = all(
        (data.corner_image(m).total_dim() == 0) == data.triple.in_torsion(m) for m in census
    )

    generator_adjunction = True
    for eps in data.witness:
        p_mod, _ = proj_module_of_idempotent(data.closure, eps)
        o = next(o for o, e in data.corner.carrier.items() if e == eps)
        for m in census:
            if len(hom_space(p_mod, m)) != data.corner_image(m).dims[o]:
                generator_adjunction = False
                break
        if not generator_adjunction:
            break

    left_adjunction = True
    right_adjunction = True
    for m in census:
        em = data.extension(m)
        cm = data.coextension(m)
        for n in qcensus:
            i_n = data.inclusion(n)
            if len(hom_space(em, n)) != len(hom_space(m, i_n)):
                left_adjunction = False
            if len(hom_space(i_n, m)) != len(hom_space(n, cm)):
                right_adjunction = False

    exactness = True
    for m in census:
        for sub in all_submodules(m):
            n, incl = submodule_module(sub)
            q, proj = quotient_module(m, sub)
            j_incl = corner_restriction_map(data.corner, incl)
            j_proj = corner_restriction_map(data.corner, proj)
            for o in data.corner.cat.objects:
                inc_mat = j_incl.comps[o]
                proj_mat = j_proj.comps[o]
                if inc_mat.rank() != j_incl.src.dims[o]:
                    exactness = False
                if proj_mat.rank() != j_proj.tgt.dims[o]:
                    exactness = False
                if image_basis(inc_mat) != kernel_basis(proj_mat):
                    exactness = False
            if not exactness:
                break
        if not exactness:
            break

    report = {
        "kernel_of_corner_is_torsion": kernel_matches,
        "generator_adjunction": generator_adjunction,
        "left_adjunction": left_adjunction,
        "right_adjunction": right_adjunction,
        "corner_exactness": exactness,
    }
    report["pass"] = all(report.values())
    return report
