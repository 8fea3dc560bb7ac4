import pytest

from segal import corpus
from segal.cobordism import (
    BoundaryCycle,
    ComponentData,
    CycleEntry,
    ObjectSignature,
    OCType,
    compose_types,
    disjoint_union,
    euler_characteristic,
    free_circle,
    is_stable,
    octype_from_json,
    octype_to_json,
    validate_type,
)
from segal.errors import SignatureMismatch


def test_euler_characteristic_basics():
    assert euler_characteristic(corpus.free_disc().components[0]) == 1
    assert euler_characteristic(corpus.cylinder().components[0]) == 0
    assert euler_characteristic(corpus.pants_split().components[0]) == -1
    assert euler_characteristic(corpus.closed_surface(2).components[0]) == -2


@pytest.mark.parametrize(
    "builder",
    [
        corpus.disc_out,
        corpus.disc_in,
        corpus.free_disc,
        corpus.strip,
        corpus.cylinder,
        corpus.pants_split,
        corpus.pants_join,
        corpus.free_annulus,
        lambda: corpus.closed_surface(2),
    ],
)
def test_builders_validate(builder):
    report = validate_type(builder())
    assert report.ok, report.violations


def test_validate_flags_boundary_count_mismatch():
    comp = ComponentData(genus=0, cycles=(free_circle("a"),), boundary_circles=3)
    t = OCType((comp,), ObjectSignature(0, 0), ObjectSignature(0, 0))
    report = validate_type(t)
    assert any("boundary count mismatch" in v for v in report.violations)


def test_validate_flags_dbrane_mismatch():
    # Interval source label disagrees with the preceding free arc.
    comp = ComponentData(
        genus=0,
        cycles=(BoundaryCycle((CycleEntry("out", 0),), ("b",)),),
    )
    t = OCType(
        (comp,),
        ObjectSignature(0, 0),
        ObjectSignature(0, 1, ("a",), ("b",)),
    )
    report = validate_type(t)
    assert any("D-brane" in v for v in report.violations)


def test_validate_flags_lost_and_duplicated_intervals():
    comp = ComponentData(
        genus=0,
        cycles=(
            BoundaryCycle((CycleEntry("out", 0),), ("a",)),
            BoundaryCycle((CycleEntry("out", 0),), ("a",)),
        ),
    )
    t = OCType(
        (comp,),
        ObjectSignature(0, 0),
        ObjectSignature(0, 2, ("a", "a"), ("a", "a")),
    )
    report = validate_type(t)
    assert any("appears in 2 cycles" in v for v in report.violations)
    assert any("interval 1 appears in no cycle" in v for v in report.violations)


def test_validate_flags_duplicate_closed_circle():
    c1 = ComponentData(genus=0, closed_in=frozenset({0}), cycles=(free_circle(),))
    c2 = ComponentData(genus=0, closed_in=frozenset({0}), cycles=(free_circle(),))
    t = OCType((c1, c2), ObjectSignature(1, 0), ObjectSignature(0, 0))
    report = validate_type(t)
    assert any("assigned to two components" in v for v in report.violations)


def test_validate_respects_label_set():
    t = corpus.strip("a", "z")
    assert validate_type(t).ok
    report = validate_type(t, label_set={"a", "b"})
    assert any("outside declared set" in v for v in report.violations)


def test_compose_discs_gives_free_disc():
    out = compose_types(corpus.disc_out("a"), corpus.disc_in("a"))
    assert out == corpus.free_disc("a")
    assert validate_type(out).ok


def test_compose_strips_gives_strip():
    s = corpus.strip("a", "b")
    assert compose_types(s, s) == s


def test_compose_cylinders_gives_cylinder():
    c = corpus.cylinder()
    assert compose_types(c, c) == c


def test_compose_pants_gives_genus_one():
    out = compose_types(corpus.pants_split(), corpus.pants_join())
    assert len(out.components) == 1
    comp = out.components[0]
    assert comp.genus == 1
    assert comp.n == 2
    assert out.total_euler() == -2


def test_compose_pants_other_order_gives_four_holed_sphere():
    out = compose_types(corpus.pants_join(), corpus.pants_split())
    comp = out.components[0]
    assert comp.genus == 0
    assert comp.n == 4


def test_compose_requires_matching_signature():
    with pytest.raises(SignatureMismatch):
        compose_types(corpus.cylinder(), corpus.strip())
    # Same counts but different labels must also be rejected.
    with pytest.raises(SignatureMismatch):
        compose_types(corpus.strip("a", "b"), corpus.strip("b", "a"))


def test_composition_euler_additivity():
    t1, t2 = corpus.pants_split(), corpus.pants_join()
    out = compose_types(t1, t2)
    glued_intervals = t1.out_signature.open_count
    assert out.total_euler() == t1.total_euler() + t2.total_euler() - glued_intervals


def test_equality_ignores_cycle_rotation_and_component_order():
    a = BoundaryCycle(
        (CycleEntry("in", 0), CycleEntry("out", 0)), ("a", "b")
    )
    b = BoundaryCycle(
        (CycleEntry("out", 0), CycleEntry("in", 0)), ("b", "a")
    )
    sig = ObjectSignature(0, 1, ("a",), ("b",))
    t1 = OCType(
        (ComponentData(0, cycles=(a,)), ComponentData(1, cycles=(free_circle(),))),
        sig,
        sig,
    )
    t2 = OCType(
        (ComponentData(1, cycles=(free_circle(),)), ComponentData(0, cycles=(b,))),
        sig,
        sig,
    )
    assert t1 == t2
    assert hash(t1) == hash(t2)


def test_disjoint_union_shifts_identifiers():
    t = disjoint_union(corpus.cylinder(), corpus.pants_join())
    assert validate_type(t).ok
    assert t.in_signature.closed_count == 3
    assert t.out_signature.closed_count == 2
    assert t.total_euler() == corpus.cylinder().total_euler() + corpus.pants_join().total_euler()


def test_disjoint_union_open_shift():
    t = disjoint_union(corpus.strip("a", "b"), corpus.disc_out("c"))
    assert validate_type(t).ok
    assert t.out_signature.source_labels == ("a", "c")
    entries = {
        (e.direction, e.index)
        for comp in t.components
        for cyc in comp.cycles
        for e in cyc.entries
    }
    assert ("out", 1) in entries


def test_stability_classification():
    assert is_stable(corpus.closed_surface(2)).statuses == ("unstable",)
    assert is_stable(corpus.free_disc()).statuses == ("special",)
    assert is_stable(corpus.free_annulus()).statuses == ("special",)
    assert is_stable(corpus.strip()).statuses == ("stable",)
    assert is_stable(corpus.cylinder()).statuses == ("stable",)
    assert is_stable(corpus.disc_out()).statuses == ("stable",)
    both = disjoint_union(corpus.closed_surface(0), corpus.free_disc())
    rep = is_stable(both)
    assert rep.unstable_indices == (0,)
    assert rep.special_indices == (1,)
    assert not rep.all_stable


def test_genus_zero_three_free_circles_not_special():
    comp = ComponentData(0, cycles=(free_circle(), free_circle(), free_circle()))
    t = OCType((comp,), ObjectSignature(0, 0), ObjectSignature(0, 0))
    assert is_stable(t).statuses == ("stable",)


@pytest.mark.parametrize("seed", range(25))
def test_json_roundtrip_random(seed):
    t, u = corpus.random_composable_pair(seed)
    for x in (t, u, compose_types(t, u)):
        assert validate_type(x).ok, validate_type(x).violations
        assert octype_from_json(octype_to_json(x)) == x


def test_json_schema_shape():
    d = octype_to_json(corpus.pants_split())
    assert d["schema"] == "segal.octype/1"
    assert d["in"] == {"C": 1, "O": 0, "s": [], "t": []}
    assert d["out"] == {"C": 2, "O": 0, "s": [], "t": []}
    comp = d["components"][0]
    assert comp["genus"] == 0
    assert comp["closed_in"] == [0]
    assert comp["closed_out"] == [0, 1]
    assert comp["cycles"] == []
    assert comp["free_circles"] == []
