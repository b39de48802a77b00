import pytest
from hypothesis import given, strategies as st

from compograph.model import (
    Request,
    RequestError,
    ServiceDescriptor,
    Taxonomy,
    TaxonomyError,
    WorldState,
    concept_satisfies,
    normalize_concept,
    validate_descriptor,
)

from conftest import WS_SERVICES, WS_VOCAB

VOCAB = {f"P{i}" for i in range(1, 10)} | {f"EF{i}" for i in range(1, 6)}


def test_ws1_is_valid():
    d = ServiceDescriptor("WS1", {"a", "b"}, {"c", "d", "f"}, {"P1"}, {"EF1", "EF2"})
    assert validate_descriptor(d, VOCAB) == []


def test_empty_outputs_flagged():
    d = ServiceDescriptor("X", {"a"}, set(), set(), set())
    assert [v.code for v in validate_descriptor(d, VOCAB)] == ["empty-outputs"]


def test_unknown_proposition_flagged():
    d = ServiceDescriptor("X", {"a"}, {"b"}, {"P99"}, set())
    vs = validate_descriptor(d, {"P1"})
    assert [v.code for v in vs] == ["unknown-proposition"]
    assert "P99" in vs[0].detail


def test_empty_name_and_reserved_name():
    assert [v.code for v in validate_descriptor(ServiceDescriptor("  ", (), {"a"}), ())] == ["empty-name"]
    assert [v.code for v in validate_descriptor(ServiceDescriptor("SINK", (), {"a"}), ())] == ["reserved-name"]


def test_validation_collects_every_problem():
    d = ServiceDescriptor("", (), (), {"Q"}, {"R"})
    codes = sorted(v.code for v in validate_descriptor(d, ()))
    assert codes == ["empty-name", "empty-outputs", "unknown-proposition", "unknown-proposition"]


def test_ws_descriptors_all_valid():
    for d in WS_SERVICES:
        assert validate_descriptor(d, WS_VOCAB) == [], d.name


def test_inputs_outputs_may_overlap():
    d = ServiceDescriptor("Echo", {"a"}, {"a"})
    assert validate_descriptor(d, ()) == []


def test_descriptor_normalizes_concepts():
    d = ServiceDescriptor(" Find_Doctor ", {"City_Name"}, {"doctor"})
    assert d.name == "Find_Doctor"
    assert d.inputs == {"CITY_NAME"} and d.outputs == {"DOCTOR"}


def test_bare_string_rejected():
    with pytest.raises(TypeError):
        ServiceDescriptor("X", "abc", {"d"})


def test_descriptor_equality_is_structural():
    a = ServiceDescriptor("X", ["a", "b"], ["c"])
    b = ServiceDescriptor("X", {"B", "A"}, ("C",))
    assert a == b and hash(a) == hash(b)


def test_record_roundtrip_on_ws_services():
    for d in WS_SERVICES:
        assert ServiceDescriptor.from_record(d.to_record()) == d


def test_request_requires_goals():
    with pytest.raises(RequestError):
        Request({"a"}, set())
    assert Request(set(), {"x"}).provided == frozenset()


def test_world_state_grows():
    w = WorldState({"P1"})
    w2 = w.apply({"EF1"})
    assert w.held == {"P1"} and w2.held == {"P1", "EF1"}
    assert w2.holds_all({"P1", "EF1"}) and w2.holds_all(())


TAX = Taxonomy.from_pairs([("CARDIOLOGIST", "DOCTOR")])


@pytest.mark.parametrize(
    "have,need,tax,expected",
    [
        ("CITY", "CITY", Taxonomy(), True),
        ("CARDIOLOGIST", "DOCTOR", TAX, True),
        ("DOCTOR", "CARDIOLOGIST", TAX, False),
        ("city", "CITY", None, True),
    ],
)
def test_concept_satisfies(have, need, tax, expected):
    assert concept_satisfies(have, need, tax) is expected


def test_taxonomy_transitive_and_unrelated_roots():
    tax = Taxonomy.from_pairs([("A", "B"), ("B", "C"), ("X", "Y")])
    assert concept_satisfies("A", "C", tax)
    assert not concept_satisfies("A", "Y", tax)
    assert not concept_satisfies("C", "A", tax)
    assert tax.ancestors("A") == {"A", "B", "C"}
    assert tax.ancestors("unseen") == {"UNSEEN"}


def test_taxonomy_dag_with_two_parents():
    tax = Taxonomy.from_pairs([("A", "B"), ("A", "C"), ("B", "D"), ("C", "D")])
    assert tax.ancestors("A") == {"A", "B", "C", "D"}


@pytest.mark.parametrize("edges", [[("A", "B"), ("B", "A")], [("A", "A")], [("A", "B"), ("B", "C"), ("C", "A")]])
def test_taxonomy_cycles_rejected(edges):
    with pytest.raises(TaxonomyError):
        Taxonomy.from_pairs(edges)


def test_approx_fallback_is_opt_in():
    assert not concept_satisfies("DOCTOR", "DOCTER")
    assert concept_satisfies("DOCTOR", "DOCTER", approx_threshold=0.8)


names = st.sampled_from(list("ABCDEFG"))


@st.composite
def dags(draw):
    # edges only from later letters to earlier ones, so acyclic by construction
    pairs = draw(st.lists(st.tuples(names, names), max_size=12))
    return Taxonomy.from_pairs([(max(a, b), min(a, b)) for a, b in pairs if a != b])


@given(dags(), names)
def test_satisfies_reflexive(tax, c):
    assert concept_satisfies(c, c, tax)


@given(dags(), names, names, names)
def test_satisfies_transitive(tax, a, b, c):
    if concept_satisfies(a, b, tax) and concept_satisfies(b, c, tax):
        assert concept_satisfies(a, c, tax)


@given(st.text(max_size=10))
def test_concept_normalization_idempotent(x):
    assert normalize_concept(normalize_concept(x)) == normalize_concept(x)
