"""The center of a FinCat: natural transformations of the identity functor.

An element is a family of endomorphisms commuting with every morphism; the
defining equations are linear, so the center is a kernel computation.  Its
idempotents classify the direct-sum decompositions of the regular bimodule,
which is the combinatorial heart of the split-TTF detection.
"""

from __future__ import annotations

import itertools

from .category import FinCat, Morphism
from .ideals import Ideal, enumerate_ideals
from .linalg import Mat, Subspace, check_vector_cap, kernel_basis, solve
from .modules import FinModule, module_times_ideal


class CenterElement:
    """One endomorphism per object, natural against every hom basis element."""

    def __init__(self, cat: FinCat, components):
        self.cat = cat
        self.components = {a: components[a] for a in cat.objects}

    def __eq__(self, other):
        return isinstance(other, CenterElement) and self.components == other.components

    def __hash__(self):
        return hash(tuple(self.components[a] for a in self.cat.objects))

    def component(self, a: str) -> Morphism:
        return self.components[a]

    def is_natural(self) -> bool:
        cat = self.cat
        for a in cat.objects:
            for b in cat.objects:
                for u in cat.basis(a, b):
                    if cat.compose(self.components[b], u) != cat.compose(u, self.components[a]):
                        return False
        return True

    def __repr__(self):
        return f"CenterElement({ {a: m.coords for a, m in self.components.items()} })"


class CenterAlgebra:
    """A basis of the center with its multiplication table and unit coordinates."""

    def __init__(self, cat: FinCat, basis, mult, unit):
        self.cat = cat
        self.basis = list(basis)
        self.mult = mult  # mult[i][j]: coordinates of basis_i * basis_j
        self.unit = tuple(unit)

    @property
    def dim(self) -> int:
        return len(self.basis)

    def element(self, coords) -> CenterElement:
        cat = self.cat
        comps = {}
        for a in cat.objects:
            m = cat.zero(a, a)
            for c, z in zip(coords, self.basis):
                if c:
                    m = cat.add(m, cat.scale(c, z.components[a]))
            comps[a] = m
        return CenterElement(cat, comps)

    def multiply(self, x, y):
        p = self.cat.p
        out = [0] * self.dim
        for i, xi in enumerate(x):
            if not xi:
                continue
            for j, yj in enumerate(y):
                if not yj:
                    continue
                for k, c in enumerate(self.mult[i][j]):
                    out[k] = (out[k] + xi * yj * c) % p
        return tuple(out)


def compute_center(cat: FinCat) -> CenterAlgebra:
    """Solve the naturality system and assemble the multiplication table."""
    p = cat.p
    offs = {}
    total = 0
    for a in cat.objects:
        offs[a] = total
        total += cat.hom_dim[(a, a)]
    rows = []
    for a in cat.objects:
        for b in cat.objects:
            d = cat.hom_dim[(a, b)]
            if d == 0:
                continue
            for u in cat.basis(a, b):
                # z_b . u - u . z_a = 0, one row per coordinate of A(a, b)
                left = [cat.compose(Morphism(b, b, _unit(cat.hom_dim[(b, b)], i)), u).coords
                        for i in range(cat.hom_dim[(b, b)])]
                right = [cat.compose(u, Morphism(a, a, _unit(cat.hom_dim[(a, a)], i))).coords
                         for i in range(cat.hom_dim[(a, a)])]
                for c in range(d):
                    row = [0] * total
                    for i, vec in enumerate(left):
                        row[offs[b] + i] = (row[offs[b] + i] + vec[c]) % p
                    for i, vec in enumerate(right):
                        row[offs[a] + i] = (row[offs[a] + i] - vec[c]) % p
                    if any(row):
                        rows.append(row)
    ker = kernel_basis(Mat(p, len(rows), total, rows))
    basis = []
    for v in ker.basis_vectors():
        comps = {
            a: Morphism(a, a, v[offs[a]: offs[a] + cat.hom_dim[(a, a)]])
            for a in cat.objects
        }
        basis.append(CenterElement(cat, comps))

    def to_coords(elem: CenterElement):
        flat = []
        for a in cat.objects:
            flat.extend(elem.components[a].coords)
        coords = solve(ker.mat.transpose(), tuple(flat))
        if coords is None:
            raise RuntimeError("element is not central")
        return coords

    mult = []
    for zi in basis:
        row = []
        for zj in basis:
            prod = CenterElement(
                cat, {a: cat.compose(zi.components[a], zj.components[a]) for a in cat.objects}
            )
            row.append(to_coords(prod))
        mult.append(row)
    identity = CenterElement(cat, {a: cat.identity(a) for a in cat.objects})
    unit = to_coords(identity)
    return CenterAlgebra(cat, basis, mult, unit)


def _unit(n: int, j: int):
    v = [0] * n
    v[j] = 1
    return tuple(v)


def center_idempotents(z: CenterAlgebra) -> list:
    """All solutions of e * e = e in the center, by exhaustive scan."""
    check_vector_cap(z.cat.p ** z.dim, "center idempotent scan")
    out = []
    for coords in itertools.product(range(z.cat.p), repeat=z.dim):
        if z.multiply(coords, coords) == coords:
            out.append((coords, z.element(coords)))
    return out


def ideal_of_idempotent(cat: FinCat, eps: CenterElement):
    """(I, I'): the ideal of morphisms fixed by the idempotent and its
    complementary ideal of morphisms killed by it."""
    fixed = {}
    killed = {}
    for a in cat.objects:
        for b in cat.objects:
            d = cat.hom_dim[(a, b)]
            cols_fix = []
            cols_kill = []
            for u in cat.basis(a, b):
                eu = cat.compose(eps.components[b], u)
                cols_fix.append(tuple((x - y) % cat.p for x, y in zip(eu.coords, u.coords)))
                cols_kill.append(eu.coords)
            fix_mat = Mat(cat.p, d, d, tuple(zip(*cols_fix)) if cols_fix else ())
            kill_mat = Mat(cat.p, d, d, tuple(zip(*cols_kill)) if cols_kill else ())
            fixed[(a, b)] = kernel_basis(fix_mat)
            killed[(a, b)] = kernel_basis(kill_mat)
    return Ideal(cat, fixed), Ideal(cat, killed)


def summand_bijection_check(cat: FinCat) -> dict:
    """Compare the direct summands of the regular bimodule with the central
    idempotents: counts match, complements are unique, every summand is I_e."""
    ideals = enumerate_ideals(cat)
    z = compute_center(cat)
    idems = center_idempotents(z)
    summands = []
    complements = {}
    for i in ideals:
        comps = [
            j
            for j in ideals
            if all(
                i.spaces[pair].dim + j.spaces[pair].dim == cat.hom_dim[pair]
                and _intersection_dim(i.spaces[pair], j.spaces[pair]) == 0
                for pair in i.spaces
            )
        ]
        if comps:
            summands.append(i)
            complements[i.key()] = comps
    images = {}
    for coords, eps in idems:
        i_eps, i_comp = ideal_of_idempotent(cat, eps)
        images[i_eps.key()] = (coords, i_comp)
    report = {
        "summands": len(summands),
        "central_idempotents": len(idems),
        "counts_match": len(summands) == len(idems),
        "unique_complements": all(len(v) == 1 for v in complements.values()),
        "every_summand_is_image": all(s.key() in images for s in summands),
        "injective": len(images) == len(idems),
    }
    report["pass"] = all(
        report[k] for k in ("counts_match", "unique_complements", "every_summand_is_image", "injective")
    )
    return report


def _intersection_dim(u: Subspace, v: Subspace) -> int:
    from .linalg import subspace_intersect

    return subspace_intersect(u, v).dim


def module_idempotent_action(m: FinModule, cat: FinCat, eps: CenterElement, i_eps: Ideal, i_comp: Ideal) -> dict:
    """How a central idempotent acts on a module, cross-checked against the
    ideal action: full action means every component is an isomorphism, zero
    action means every component vanishes."""
    mats = {a: m.act(eps.components[a]) for a in cat.objects}
    all_iso = all(mat.rank() == m.dims[a] for a, mat in mats.items())
    all_zero = all(mat.is_zero() for mat in mats.values())
    mi = module_times_ideal(m, i_eps)
    mi_comp = module_times_ideal(m, i_comp)
    report = {
        "acts_invertibly": all_iso,
        "acts_by_zero": all_zero,
        "module_times_ideal_full": mi.is_full(),
        "module_times_ideal_zero": mi.is_zero(),
        "consistent": (all_iso == mi.is_full()) and (all_zero == mi.is_zero()),
        "direct_sum_decomposition": (
            mi.sum(mi_comp).is_full()
            and mi.intersect(mi_comp).is_zero()
        ),
    }
    return report
