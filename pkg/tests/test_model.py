import pytest
from hypothesis import given

from conftest import load_hub
from oracles import byproducts_brute_force
from rreh.model import (
    Commodity,
    Hyperedge,
    Location,
    ModelError,
    TechGraph,
    Technology,
    TechnologyKind,
    UndeclaredTechnology,
    accepts,
    assemble_hub,
    derive_all,
    expand_hyperedges,
    validate,
)
from strategies import hubs

G, IM, EX, OP = (TechnologyKind.GENERIC, TechnologyKind.IMPORT, TechnologyKind.EXPORT, TechnologyKind.OPPORTUNITY)


def test_greenland_sets():
    d = load_hub("greenland.rreh").derived
    assert set(d.C) == {"electricity", "H2O", "H2", "O2"}
    assert d.E == ("H2",)
    assert d.I == ("H2O",)
    assert d.B == ("O2",)
    assert d.O == ()


def test_greenland_valid_with_one_info():
    rep = validate(load_hub("greenland.rreh"))
    assert rep.valid and not rep.warnings
    assert [f.code for f in rep.infos] == ["I001"]
    assert "never consumed anywhere" in rep.infos[0].message


def test_algeria_ch4_corrected():
    hub = load_hub("algeria_ch4_corrected.rreh")
    d = hub.derived
    assert d.E == ("CH4",)
    assert d.I == ("sea water",)
    assert set(d.B) == {"O2", "heat"}
    assert d.O == ()
    assert validate(hub).valid


def test_algeria_ch4_verbatim_findings():
    rep = validate(load_hub("algeria_ch4_verbatim.rreh"))
    e002 = [f for f in rep.errors if f.code == "E002"]
    assert any(f.subject.startswith("(H2,") and "DAC@l2" in f.message for f in e002)
    w002 = {f.subject: f for f in rep.warnings if f.code == "W002"}
    assert "sea water" in w002["C"].message


def test_algeria_nh3_corrected_byproducts():
    hub = load_hub("algeria_nh3_corrected.rreh")
    assert hub.derived.B == ("Ar", "O2", "heat")
    assert validate(hub).valid


def test_australia_sets():
    d = load_hub("australia_ch3oh.rreh").derived
    assert d.O == ("CH3OH",) and d.E == ("CH3OH",)
    assert d.I == ("sea water",)
    assert d.B == ("O2", "heat")


def test_empty_hub():
    d = load_hub("empty.rreh").derived
    assert all(d.get(n) == () for n in "CEIBO")


def test_phase_tag_and_wildcard():
    c = Commodity.parse("CH4 (l)")
    assert c.id == "CH4(l)" and c.base == "CH4"
    assert accepts({"CH4"}, "CH4(l)") == "CH4"
    assert accepts({"CH4(g)"}, "CH4(l)") is None
    assert accepts({"CH4(l)"}, "CH4(l)") == "CH4(l)"


def test_commodity_id_normalizes_whitespace():
    assert Commodity.parse("  sea   water ").id == "sea water"
    with pytest.raises(ModelError):
        Commodity.parse("   ")


def test_hyperedge_needs_producer():
    with pytest.raises(ModelError):
        Hyperedge("H2", frozenset(), frozenset({"a@l"}))


def test_expansion_is_cartesian_product_in_order():
    techs = (
        Technology("a", "l", G, frozenset(), {"e"}),
        Technology("b", "l", G, frozenset(), {"e"}),
        Technology("c", "l", G, {"e"}, frozenset()),
        Technology("d", "l", G, {"e"}, frozenset()),
    )
    g = TechGraph(techs, (Hyperedge("e", {"b@l", "a@l"}, {"d@l", "c@l"}),))
    pairs = [(s.producer, s.consumer) for s in expand_hyperedges(g)]
    assert pairs == [("a@l", "c@l"), ("a@l", "d@l"), ("b@l", "c@l"), ("b@l", "d@l")]


def test_byproduct_is_per_producer():
    # O2 from x is routed, O2 from y is not: O2 is still a byproduct
    techs = (
        Technology("x", "l", G, frozenset(), {"O2"}),
        Technology("y", "l", G, frozenset(), {"O2"}),
        Technology("z", "l", G, {"O2"}, frozenset()),
    )
    g = TechGraph(techs, (Hyperedge("O2", {"x@l"}, {"z@l"}),))
    assert derive_all(g).B == ("O2",)
    hub = assemble_hub("h", [Location("l", "n", (("wind", "low"),), "low")], g)
    info = validate(hub).infos[0]
    assert info.code == "I001" and "consumed elsewhere" in info.message


def test_undeclared_endpoint_raises_on_derivation():
    g = TechGraph((Technology("a", "l", G, frozenset(), {"e"}),), (Hyperedge("e", {"a@l"}, {"ghost@l"}),))
    with pytest.raises(UndeclaredTechnology):
        derive_all(g)


def _hub(techs, edges, locs=("l",), declared=None):
    locations = [Location(i, i, (("wind", "high"),), "low") for i in locs]
    g = TechGraph(tuple(techs), tuple(edges))
    return assemble_hub("h", locations, g, declared)


@pytest.mark.parametrize(
    "tech, code",
    [
        (Technology("i", "l", IM, {"x"}, {"y"}), "E003"),
        (Technology("e", "l", EX, {"x"}, {"y"}), "E003"),
        (Technology("o", "l", OP, {"x"}, {"y"}), "E003"),
        (Technology("g", "elsewhere", G, {"x"}, {"y"}), "E004"),
    ],
)
def test_kind_and_location_errors(tech, code):
    assert code in validate(_hub([tech], [])).codes()


def test_e001_e002_and_duplicate_edge():
    a = Technology("a", "l", G, frozenset(), {"p"})
    b = Technology("b", "l", G, {"q"}, frozenset())
    e = Hyperedge("r", {"a@l"}, {"b@l"})
    codes = validate(_hub([a, b], [e, e])).codes()
    assert "E001" in codes and "E002" in codes and "E007" in codes


def test_dangling_demand_warning_and_import_suppresses_it():
    a = Technology("a", "l", G, {"H2O"}, {"H2"})
    assert "W001" in validate(_hub([a], [])).codes()
    imp = Technology("import", "l", IM, frozenset(), {"H2O"})
    assert "W001" not in validate(_hub([a, imp], [])).codes()


def test_declared_set_mismatch_warning():
    a = Technology("a", "l", G, frozenset(), {"H2"})
    rep = validate(_hub([a], [], declared={"B": {"O2"}}))
    assert [f.code for f in rep.warnings] == ["W002"]


@given(hubs())
def test_expansion_count_property(hub):
    expected = sum(len(e.producers) * len(e.consumers) for e in hub.edges)
    assert len(expand_hyperedges(hub.graph)) == expected


@given(hubs())
def test_byproduct_oracle_property(hub):
    assert list(hub.derived.B) == byproducts_brute_force(hub.graph)


@given(hubs())
def test_kind_laws(hub):
    d = hub.derived
    assert set(d.E) | set(d.I) | set(d.O) | set(d.B) <= set(d.C)
    for t in hub.technologies:
        if t.kind is IM:
            assert not t.inputs
        if t.kind in (EX, OP):
            assert not t.outputs


@given(hubs())
def test_generated_hubs_have_no_structural_errors(hub):
    codes = set(validate(hub).codes())
    assert not codes & {"E001", "E002", "E003", "E004", "E005", "E006", "E007"}
