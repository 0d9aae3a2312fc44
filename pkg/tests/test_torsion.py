import pytest

from ringoid.category import Morphism, catalog
from ringoid.ideals import enumerate_idempotent_ideals
from ringoid.modules import (
    all_submodules,
    direct_sum,
    enumerate_modules,
    quotient_module,
    representable,
    submodule_module,
    zero_module,
    zero_submodule,
)
from ringoid.modules import full_submodule
from ringoid.torsion import (
    Topology,
    check_topology,
    enumerate_topologies,
    full_topology,
    gabriel_roundtrip,
    has_fg_basis,
    hereditary_closure_oracle,
    maximal_topology,
    oracle_from_ideal,
    oracle_from_topology,
    pullback_submodule,
    topology_from_class,
    torsion_membership,
    torsion_radical,
    TorsionOracle,
)


@pytest.mark.parametrize("name", ["pt(2)", "dual(2)", "a2cat(2)", "prod(2)", "mat2(2)"])
def test_extreme_topologies_are_valid(name):
    cat = catalog(name)
    assert check_topology(cat, maximal_topology(cat)) == []
    assert check_topology(cat, full_topology(cat)) == []


def test_dual_missing_zero_violates_glueing():
    # over the dual numbers: {R, (x)} without 0 fails Glue
    cat = catalog("dual(2)")
    h = representable(cat, "x")
    subs = all_submodules(h)
    by_dim = {s.total_dim(): s for s in subs}
    topo = Topology(cat, {"x": [by_dim[2], by_dim[1]]})
    report = check_topology(cat, topo)
    assert any(v["axiom"] == "glueing" for v in report)


def test_pullback_axiom_violation_detected():
    # zero covering at the arrow target without one at the source: pulling
    # the zero submodule back along the arrow escapes the family
    cat = catalog("a2cat(2)")
    h1, h2 = representable(cat, "1"), representable(cat, "2")
    topo = Topology(
        cat,
        {"1": [full_submodule(h1)], "2": all_submodules(h2)},
    )
    report = check_topology(cat, topo)
    assert any(v["axiom"] == "pullback" for v in report)


def test_identity_axiom_violation_detected():
    cat = catalog("pt(2)")
    h = representable(cat, "x")
    topo = Topology(cat, {"x": [zero_submodule(h)]})
    report = check_topology(cat, topo)
    assert any(v["axiom"] == "identity" for v in report)


def test_pullback_along_zero_is_full():
    cat = catalog("a2cat(2)")
    h2 = representable(cat, "2")
    zero_sub = all_submodules(h2)[0]
    pb = pullback_submodule(cat, cat.zero("1", "2"), zero_sub)
    assert pb.is_full()


def test_pullback_of_alpha_span_along_alpha_is_full():
    cat = catalog("a2cat(2)")
    h2 = representable(cat, "2")
    mid = [s for s in all_submodules(h2) if s.total_dim() == 1][0]
    pb = pullback_submodule(cat, Morphism("1", "2", (1,)), mid)
    assert pb.is_full()


def test_zero_module_is_always_torsion():
    for name in ["pt(2)", "dual(2)", "a2cat(2)"]:
        cat = catalog(name)
        for topo in enumerate_topologies(cat):
            assert torsion_membership(topo, zero_module(cat))


def test_maximal_topology_torsion_is_only_zero():
    cat = catalog("pt(2)")
    topo = maximal_topology(cat)
    for m in enumerate_modules(cat, 3):
        assert torsion_membership(topo, m) == (m.total_dim() == 0)


def test_full_topology_makes_everything_torsion():
    cat = catalog("dual(2)")
    topo = full_topology(cat)
    for m in enumerate_modules(cat, 3):
        assert torsion_membership(topo, m)


def test_radical_extremes():
    cat = catalog("dual(2)")
    h = representable(cat, "x")
    assert torsion_radical(full_topology(cat), h).is_full()
    assert torsion_radical(maximal_topology(cat), h).is_zero()


def test_radical_is_idempotent_and_coradical_is_clean():
    cat = catalog("a2cat(2)")
    for topo in enumerate_topologies(cat):
        for m in enumerate_modules(cat, 3):
            t = torsion_radical(topo, m)
            t_mod, _ = submodule_module(t)
            assert torsion_membership(topo, t_mod)
            assert torsion_radical(topo, t_mod).is_full()
            q, _ = quotient_module(m, t)
            assert torsion_radical(topo, q).is_zero()


def test_radical_is_largest():
    cat = catalog("dual(2)")
    for topo in enumerate_topologies(cat):
        for m in enumerate_modules(cat, 3):
            t = torsion_radical(topo, m)
            for sub in all_submodules(m):
                if sub.contains(t) and sub.total_dim() > t.total_dim():
                    sub_mod, _ = submodule_module(sub)
                    assert not torsion_membership(topo, sub_mod)


def test_topology_from_trivial_oracles():
    cat = catalog("pt(3)")
    only_zero = TorsionOracle(lambda m: m.total_dim() == 0, "only-zero")
    assert topology_from_class(cat, only_zero) == maximal_topology(cat)
    everything = TorsionOracle(lambda m: True, "everything")
    assert topology_from_class(cat, everything) == full_topology(cat)


def test_closure_of_simple_over_dual_gives_full_topology():
    cat = catalog("dual(2)")
    h = representable(cat, "x")
    rad = [s for s in all_submodules(h) if s.total_dim() == 1][0]
    simple, _ = quotient_module(h, rad)
    oracle = hereditary_closure_oracle(cat, [simple], 4)
    assert topology_from_class(cat, oracle) == full_topology(cat)


@pytest.mark.parametrize(
    "name,count",
    [("pt(2)", 2), ("pt(3)", 2), ("dual(2)", 2), ("a2cat(2)", 4), ("prod(2)", 4), ("mat2(2)", 2)],
)
def test_topology_counts(name, count):
    assert len(enumerate_topologies(catalog(name))) == count


def test_dual_topologies_are_the_expected_two():
    cat = catalog("dual(2)")
    topos = enumerate_topologies(cat)
    sizes = sorted(t.size() for t in topos)
    assert sizes == [1, 3]  # {R} and {R, (x), 0}


@pytest.mark.parametrize("name", ["pt(2)", "pt(3)", "dual(2)", "a2cat(2)", "prod(2)", "mat2(2)"])
def test_gabriel_roundtrip_exhaustive(name):
    for topo in enumerate_topologies(catalog(name)):
        assert gabriel_roundtrip(topo)


def test_valid_topologies_are_upclosed_and_meet_closed():
    for name in ["dual(2)", "a2cat(2)", "prod(2)"]:
        cat = catalog(name)
        for topo in enumerate_topologies(cat):
            for a in cat.objects:
                subs = all_submodules(topo.representables[a])
                fam = topo.families[a]
                for s in fam:
                    for t in subs:
                        if t.contains(s):
                            assert topo.covers(a, t)
                for s in fam:
                    for t in fam:
                        assert topo.covers(a, s.intersect(t))


def test_membership_respects_torsion_class_laws():
    cat = catalog("a2cat(2)")
    census = enumerate_modules(cat, 4)
    for topo in enumerate_topologies(cat):
        member = {m.key(): torsion_membership(topo, m) for m in census}
        for m in census:
            if not member[m.key()]:
                continue
            for sub in all_submodules(m):
                sub_mod, _ = submodule_module(sub)
                q, _ = quotient_module(m, sub)
                assert torsion_membership(topo, sub_mod)
                assert torsion_membership(topo, q)
        for m in census:
            for n in census:
                if member[m.key()] and member[n.key()] and m.total_dim() + n.total_dim() <= 4:
                    assert torsion_membership(topo, direct_sum(m, n))
        # extension closure on the census
        for m in census:
            if member[m.key()]:
                continue
            for sub in all_submodules(m):
                sub_mod, _ = submodule_module(sub)
                q, _ = quotient_module(m, sub)
                assert not (
                    torsion_membership(topo, sub_mod) and torsion_membership(topo, q)
                ), "extension of torsion by torsion escaped the class"


def test_closure_oracle_trivial_seeds():
    cat = catalog("a2cat(2)")
    oracle = hereditary_closure_oracle(cat, [], 3)
    for m in enumerate_modules(cat, 3):
        assert oracle(m) == (m.total_dim() == 0)
    seeds = [representable(cat, a) for a in cat.objects]
    oracle = hereditary_closure_oracle(cat, seeds, 3)
    for m in enumerate_modules(cat, 3):
        assert oracle(m)


def test_closure_of_s2_excludes_s1():
    cat = catalog("a2cat(2)")
    from ringoid.modules import simple_modules

    s1, s2 = None, None
    for s in simple_modules(cat):
        if s.dims["1"] == 1:
            s1 = s
        if s.dims["2"] == 1:
            s2 = s
    oracle = hereditary_closure_oracle(cat, [s2], 4)
    assert oracle(s2)
    assert oracle(direct_sum(s2, s2))
    assert not oracle(s1)


def test_closure_oracle_matches_topology_membership():
    # seeded with all covering quotients, the bounded closure reproduces the
    # torsion membership on the census
    cat = catalog("a2cat(2)")
    census = enumerate_modules(cat, 4)
    for topo in enumerate_topologies(cat):
        seeds = []
        for a in cat.objects:
            h = representable(cat, a)
            for sub in topo.families[a]:
                q, _ = quotient_module(h, sub)
                seeds.append(q)
        oracle = hereditary_closure_oracle(cat, seeds, 4, census=census)
        for m in census:
            assert oracle(m) == torsion_membership(topo, m)


def test_census_equality_counts():
    from ringoid.torsion import ModuleCensus

    for name, expected in [("pt(2)", 2), ("dual(2)", 2), ("a2cat(2)", 4)]:
        cat = catalog(name)
        census = ModuleCensus(cat, 4)
        fps = set()
        topos = enumerate_topologies(cat)
        for topo in topos:
            seeds = []
            for a in cat.objects:
                h = representable(cat, a)
                for sub in topo.families[a]:
                    q, _ = quotient_module(h, sub)
                    seeds.append(q)
            fps.add(hereditary_closure_oracle(cat, seeds, 4, census=census).census_fingerprint)
        assert len(fps) == len(topos) == expected


@pytest.mark.parametrize(
    "name",
    ["pt(2)", "dual(2)", "a2cat(2)", "prod(2)", "mat2(2)", "pt(3)", "dual(3)", "a2cat(3)"],
)
def test_hereditary_class_sweep_matches_topologies(name):
    # an oracle fully independent of the axiom checker: closures of every
    # subset of the quotient seeds yield exactly one fingerprint per topology
    from ringoid.torsion import ModuleCensus, hereditary_class_sweep

    cat = catalog(name)
    sweep = hereditary_class_sweep(cat, 4, census=ModuleCensus(cat, 4))
    assert len(sweep) == len(enumerate_topologies(cat))


def test_membership_fingerprints_pairwise_distinct():
    for name in ["dual(2)", "a2cat(2)", "prod(2)"]:
        cat = catalog(name)
        census = enumerate_modules(cat, 4)
        fps = []
        for topo in enumerate_topologies(cat):
            fps.append(tuple(torsion_membership(topo, m) for m in census))
        assert len(set(fps)) == len(fps)


@pytest.mark.parametrize("name", ["pt(2)", "dual(2)", "a2cat(2)"])
def test_fg_basis_always_true_here(name):
    for topo in enumerate_topologies(catalog(name)):
        assert has_fg_basis(topo)


def test_ideal_oracle_membership():
    cat = catalog("a2cat(2)")
    for ideal in enumerate_idempotent_ideals(cat):
        oracle = oracle_from_ideal(ideal)
        topo = topology_from_class(cat, oracle)
        assert check_topology(cat, topo) == []


def test_enumeration_deterministic():
    cat = catalog("a2cat(2)")
    a = [t.key() for t in enumerate_topologies(cat)]
    b = [t.key() for t in enumerate_topologies(cat)]
    assert a == b


def test_membership_is_iso_invariant_on_sampled_pairs():
    # swap the summands of a direct sum: an isomorphic presentation must get
    # the same verdict from every membership predicate
    cat = catalog("a2cat(2)")
    census = enumerate_modules(cat, 2)
    for topo in enumerate_topologies(cat):
        for m in census:
            for n in census:
                a = direct_sum(m, n)
                b = direct_sum(n, m)
                assert torsion_membership(topo, a) == torsion_membership(topo, b)


def test_collapsed_category_has_one_topology():
    # quotient by the unit ideal: all hom spaces vanish, the only module is 0
    from ringoid.ideals import quotient_category, unit_ideal

    cat = catalog("dual(2)")
    q = quotient_category(cat, unit_ideal(cat)).cat
    topos = enumerate_topologies(q)
    assert len(topos) == 1
    assert gabriel_roundtrip(topos[0])
    assert [m.key() for m in enumerate_modules(q, 3)] == [
        m.key() for m in enumerate_modules(q, 0)
    ]


def test_oracle_provenance_strings():
    cat = catalog("pt(2)")
    topo = maximal_topology(cat)
    assert oracle_from_topology(topo).provenance == "from_topology"
    oracle = hereditary_closure_oracle(cat, [], 2)
    assert oracle.provenance.startswith("closure")
