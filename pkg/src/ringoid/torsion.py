"""Linear Grothendieck topologies and their torsion machinery.

A topology assigns to every object a set of submodules of its representable,
subject to the identity, pullback, and glueing axioms.  The pullback axiom is
checked against every morphism, not just basis vectors, because pulling back
is not linear in the morphism.  Everything downstream of the axioms (the
membership test, the radical, the roundtrip with torsion classes) is a finite
computation at this scale.
"""

from __future__ import annotations

import itertools

from .category import FinCat, Morphism
from .linalg import CapExceeded, Mat, Subspace, preimage, vector_cap
from .modules import (
    FinModule,
    Submodule,
    all_submodules,
    direct_sum,
    enumerate_modules,
    full_submodule,
    is_iso,
    quotient_module,
    representable,
    submodule_module,
    zero_submodule,
)


class Topology:
    """families[a]: the set of covering submodules of H_a, canonically keyed."""

    def __init__(self, cat: FinCat, families):
        self.cat = cat
        self.representables = {a: representable(cat, a) for a in cat.objects}
        self.families = {}
        self._keys = {}
        for a in cat.objects:
            fam = sorted(families.get(a, []), key=lambda s: (s.total_dim(), s.key()))
            self.families[a] = fam
            self._keys[a] = frozenset(s.key() for s in fam)

    def covers(self, a: str, sub: Submodule) -> bool:
        return sub.key() in self._keys[a]

    def key(self):
        return tuple((a, tuple(sorted(self._keys[a]))) for a in self.cat.objects)

    def __eq__(self, other):
        return isinstance(other, Topology) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def size(self) -> int:
        return sum(len(f) for f in self.families.values())

    def __repr__(self):
        return f"Topology({ {a: len(f) for a, f in self.families.items()} })"


def maximal_topology(cat: FinCat) -> Topology:
    return Topology(cat, {a: [full_submodule(representable(cat, a))] for a in cat.objects})


def full_topology(cat: FinCat) -> Topology:
    return Topology(cat, {a: all_submodules(representable(cat, a)) for a in cat.objects})


def pullback_submodule(cat: FinCat, r: Morphism, target: Submodule) -> Submodule:
    """r^{-1}R for R <= H_a and r: a' -> a: componentwise preimage under
    postcomposition with r."""
    h_src = representable(cat, r.src)
    spaces = {}
    for b in cat.objects:
        post = cat.postcompose_matrix(r, b)  # A(b, a') -> A(b, a)
        spaces[b] = preimage(post, target.spaces[b])
    return Submodule(h_src, spaces)


def check_topology(cat: FinCat, topo: Topology, submodule_lists=None) -> list:
    """Violations of the identity, pullback, and glueing axioms.

    Glueing quantifies over every submodule of every representable, so the
    full submodule lists are computed (or supplied by the caller)."""
    report = []
    for a in cat.objects:
        h = topo.representables[a]
        if not topo.covers(a, full_submodule(h)):
            report.append({"axiom": "identity", "object": a})
    for a in cat.objects:
        for rsub in topo.families[a]:
            for a2 in cat.objects:
                for r in cat.elements(a2, a):
                    pb = pullback_submodule(cat, r, rsub)
                    if not topo.covers(a2, pb):
                        report.append(
                            {"axiom": "pullback", "object": a, "along": (a2, r.coords)}
                        )
    if submodule_lists is None:
        submodule_lists = {a: all_submodules(topo.representables[a]) for a in cat.objects}
    for a in cat.objects:
        for rsub in submodule_lists[a]:
            if topo.covers(a, rsub):
                continue
            for ssub in topo.families[a]:
                hypothesis = True
                for a2 in cat.objects:
                    for v in ssub.spaces[a2].vectors():
                        r = Morphism(a2, a, v)
                        if not topo.covers(a2, pullback_submodule(cat, r, rsub)):
                            hypothesis = False
                            break
                    if not hypothesis:
                        break
                if hypothesis:
                    report.append(
                        {"axiom": "glueing", "object": a, "missing_dim": rsub.total_dim()}
                    )
                    break
    return report


def yoneda_kernel(cat: FinCat, m: FinModule, a: str, v) -> Submodule:
    """The kernel of the map H_a -> M classified by v in M(a):
    at b, the morphisms r with M(r) v = 0."""
    h = representable(cat, a)
    spaces = {}
    for b in cat.objects:
        d = cat.hom_dim[(b, a)]
        cols = [m.action[(b, a, i)].apply(v) for i in range(d)]
        mat = Mat(cat.p, m.dims[b], d, tuple(zip(*cols)) if cols else ((),) * m.dims[b] if m.dims[b] else ())
        from .linalg import kernel_basis

        spaces[b] = kernel_basis(mat)
    return Submodule(h, spaces)


def torsion_membership(topo: Topology, m: FinModule) -> bool:
    """Membership in the torsion class: every element of every value space
    classifies a map out of a representable with covering kernel."""
    cat = topo.cat
    for a in cat.objects:
        for v in itertools.product(range(cat.p), repeat=m.dims[a]):
            if not topo.covers(a, yoneda_kernel(cat, m, a, v)):
                return False
    return True


def torsion_radical(topo: Topology, m: FinModule) -> Submodule:
    """The largest torsion submodule: elements whose classifying kernel covers."""
    cat = topo.cat
    spaces = {}
    for a in cat.objects:
        good = [
            v
            for v in itertools.product(range(cat.p), repeat=m.dims[a])
            if topo.covers(a, yoneda_kernel(cat, m, a, v))
        ]
        sub = Subspace.from_vectors(cat.p, m.dims[a], good)
        if cat.p ** sub.dim != len(good):
            raise RuntimeError("radical values do not form a subspace")
        spaces[a] = sub
    t = Submodule(m, spaces)
    if not t.is_closed():
        raise RuntimeError("radical is not a submodule")
    return t


class TorsionOracle:
    """A total membership predicate on modules, tagged with its provenance."""

    def __init__(self, membership, provenance: str):
        self.membership = membership
        self.provenance = provenance

    def __call__(self, m: FinModule) -> bool:
        return self.membership(m)


def oracle_from_topology(topo: Topology) -> TorsionOracle:
    return TorsionOracle(lambda m: torsion_membership(topo, m), "from_topology")


def oracle_from_ideal(ideal) -> TorsionOracle:
    def member(m: FinModule) -> bool:
        for (a, b), s in ideal.spaces.items():
            for w in s.basis_vectors():
                if not m.act(Morphism(a, b, w)).is_zero():
                    return False
        return True

    return TorsionOracle(member, "from_ideal")


def topology_from_class(cat: FinCat, oracle: TorsionOracle) -> Topology:
    """G_a = the submodules of H_a with torsion quotient."""
    families = {}
    for a in cat.objects:
        h = representable(cat, a)
        fam = []
        for sub in all_submodules(h):
            q, _ = quotient_module(h, sub)
            if oracle(q):
                fam.append(sub)
        families[a] = fam
    return Topology(cat, families)


def gabriel_roundtrip(topo: Topology) -> bool:
    """Topology -> torsion membership -> topology is the identity, bit-exactly."""
    back = topology_from_class(topo.cat, oracle_from_topology(topo))
    return back == topo


def _upclosed_intersection_closed_families(subs):
    """All families of submodules containing the full one, closed upward and
    under pairwise intersection; the raw candidates for the axiom filter."""
    full = max(subs, key=lambda s: s.total_dim())
    rest = [s for s in subs if s.key() != full.key()]
    out = []
    for picks in itertools.product([False, True], repeat=len(rest)):
        fam = [full] + [s for s, take in zip(rest, picks) if take]
        keys = {s.key() for s in fam}
        ok = True
        for s in fam:
            for t in rest:
                if t.key() not in keys and t.contains(s):
                    ok = False
                    break
            if not ok:
                break
        if ok:
            for s in fam:
                for t in fam:
                    if s.intersect(t).key() not in keys:
                        ok = False
                        break
                if not ok:
                    break
        if ok:
            out.append(fam)
    return out


def enumerate_topologies(cat: FinCat, cap: int | None = None) -> list:
    """Every Grothendieck topology: filter the up-closed intersection-closed
    candidate families through the pullback and glueing axioms."""
    if cap is None:
        cap = vector_cap()
    submodule_lists = {}
    candidates_per_object = []
    for a in cat.objects:
        subs = all_submodules(representable(cat, a))
        submodule_lists[a] = subs
        if 2 ** max(len(subs) - 1, 0) > cap:
            raise CapExceeded(
                f"enumerate_topologies: {len(subs)} submodules of H_{a} exceed cap {cap}"
            )
        candidates_per_object.append(_upclosed_intersection_closed_families(subs))
    out = []
    for combo in itertools.product(*candidates_per_object):
        topo = Topology(cat, dict(zip(cat.objects, combo)))
        if not check_topology(cat, topo, submodule_lists):
            out.append(topo)
    out.sort(key=lambda t: (t.size(), t.key()))
    return out


def has_fg_basis(topo: Topology) -> bool:
    """Below every covering submodule sits a finitely generated covering one.

    In this finite-dimensional setting every submodule is generated by its
    finitely many elements, so the submodule itself qualifies; the check is
    performed literally all the same."""
    from .modules import cyclic_submodule

    for a in topo.cat.objects:
        h = topo.representables[a]
        for rsub in topo.families[a]:
            found = False
            for cand in topo.families[a]:
                if not rsub.contains(cand):
                    continue
                regen = zero_submodule(h)
                for b in topo.cat.objects:
                    for v in cand.spaces[b].basis_vectors():
                        regen = regen.sum(cyclic_submodule(h, b, v))
                if regen.key() == cand.key():
                    found = True
                    break
            if not found:
                return False
    return True


class ModuleCensus:
    """A census of iso classes over a category, with cached decomposition data.

    Caches the class index of every module it is shown, the submodule and
    quotient class pairs of every census member, and the class of every
    bounded pairwise direct sum; repeated closure computations share the work.
    """

    def __init__(self, cat: FinCat, bound: int, classes=None):
        self.cat = cat
        self.bound = bound
        self.classes = list(classes) if classes is not None else enumerate_modules(cat, bound)
        self._index_memo = {}
        self._sub_quot = None
        self._sums = None
        self.zero_index = next(i for i, c in enumerate(self.classes) if c.total_dim() == 0)

    def class_index(self, m: FinModule):
        k = m.key()
        if k not in self._index_memo:
            self._index_memo[k] = next(
                (i for i, c in enumerate(self.classes) if is_iso(m, c)), None
            )
        return self._index_memo[k]

    def sub_quot_pairs(self):
        """Per census class, the (submodule class, quotient class) pairs."""
        if self._sub_quot is None:
            table = {}
            for i, m in enumerate(self.classes):
                pairs = []
                for sub in all_submodules(m):
                    n, _ = submodule_module(sub)
                    q, _ = quotient_module(m, sub)
                    pairs.append((self.class_index(n), self.class_index(q)))
                table[i] = pairs
            self._sub_quot = table
        return self._sub_quot

    def sum_table(self):
        """Class of the direct sum of census pairs that stay within the bound."""
        if self._sums is None:
            table = {}
            for i, m in enumerate(self.classes):
                for j, n in enumerate(self.classes):
                    if j < i:
                        continue
                    if m.total_dim() + n.total_dim() <= self.bound:
                        table[(i, j)] = self.class_index(direct_sum(m, n))
            self._sums = table
        return self._sums


def hereditary_closure_oracle(cat: FinCat, seeds, bound: int, census=None) -> TorsionOracle:
    """Close the seed iso-classes under submodules, quotients, bounded direct
    sums, and extensions, inside the census of modules of dimension <= bound.

    Sound by construction (every member has a construction tree); complete on
    the census whenever the target class is generated by the seeds, since a
    bounded module built from quotients of seeds assembles through modules of
    no larger dimension.  The membership is total on the census and raises
    beyond it.
    """
    if not isinstance(census, ModuleCensus):
        census = ModuleCensus(cat, bound, census)
    member = set()
    for s in seeds:
        if s.total_dim() <= bound:
            idx = census.class_index(s)
            if idx is None:
                raise RuntimeError("seed not found in census")
            member.add(idx)
    member.add(census.zero_index)

    sub_quot = census.sub_quot_pairs()
    sums = census.sum_table()
    changed = True
    while changed:
        changed = False
        for i in list(member):
            for s_idx, q_idx in sub_quot[i]:
                for j in (s_idx, q_idx):
                    if j not in member:
                        member.add(j)
                        changed = True
        for i in list(member):
            for j in list(member):
                k = sums.get((min(i, j), max(i, j)))
                if k is not None and k not in member:
                    member.add(k)
                    changed = True
        for i in range(len(census.classes)):
            if i in member:
                continue
            if any(s in member and q in member for s, q in sub_quot[i]):
                member.add(i)
                changed = True

    def membership(m: FinModule) -> bool:
        if m.total_dim() > bound:
            raise CapExceeded(
                f"closure oracle is only total up to dimension {bound}"
            )
        return census.class_index(m) in member

    oracle = TorsionOracle(membership, f"closure(bound={bound})")
    oracle.census_fingerprint = frozenset(member)
    oracle.census = census.classes
    return oracle


def hereditary_class_sweep(cat: FinCat, bound: int, census=None):
    """Every hereditary torsion class fingerprint on the census, found without
    the topology axioms: close each subset of the quotients-of-representables
    seed family and collect the distinct results.

    Any hereditary torsion class is generated by the quotients H_a/R it
    contains, so the sweep over all seed subsets reaches every class whose
    generators sit inside the census.  An independent count for the topology
    enumeration.
    """
    import itertools as _it

    if not isinstance(census, ModuleCensus):
        census = ModuleCensus(cat, bound, census)
    seeds = []
    for a in cat.objects:
        h = representable(cat, a)
        for sub in all_submodules(h):
            q, _ = quotient_module(h, sub)
            seeds.append(q)
    fingerprints = set()
    for size in range(len(seeds) + 1):
        for subset in _it.combinations(range(len(seeds)), size):
            oracle = hereditary_closure_oracle(
                cat, [seeds[i] for i in subset], bound, census=census
            )
            fingerprints.add(oracle.census_fingerprint)
    return sorted(fingerprints, key=sorted)
