import itertools
import random
from collections import Counter

import numpy as np
import pytest

from coxcess import build_system
from coxcess.conjugacy import (
    all_classes,
    bfs_class,
    centralizer_elements,
    class_of,
    is_cuspidal,
    reverser,
    structure,
)
from coxcess.errors import BudgetExceeded
from coxcess.signedperm import (
    SignedPermutation,
    _graph_automorphism_image,
    coxeter_bicolored,
    from_element,
    signed_cycle_types,
    to_element,
)

from . import oracles

# class counts: partitions (A), bipartitions (B), D with split classes,
# dihedral (m+3)/2 or (m+6)/2, exceptional groups from the classification
CLASS_COUNTS = {
    "A1": 2, "A2": 3, "A3": 5, "A4": 7, "A5": 11, "B2": 5, "B3": 10, "B4": 20, "D4": 13, "D5": 18,
    "F4": 25, "H3": 10, "H4": 34, "E6": 25, "I2(5)": 4, "I2(6)": 6, "I2(7)": 5, "I2(8)": 7,
    "A2xA1": 6, "A2xB2": 15,
}


@pytest.mark.parametrize("name,count", sorted(CLASS_COUNTS.items()))
def test_class_counts(name, count):
    s = build_system(name)
    classes = all_classes(s)
    assert len(classes) == count
    assert sum(c.size for c in classes) == s.group_order
    members = np.concatenate([c.members for c in classes])
    assert len(np.unique(members)) == s.group_order


def test_small_examples():
    a2 = build_system("A2")
    assert [c.size for c in all_classes(a2)] == [1, 2, 3]
    assert sorted(c.size for c in all_classes(a2)) == [1, 2, 3]
    assert class_of(a2.identity()).size == 1
    a5 = build_system("A5")
    w = to_element(SignedPermutation.from_cycles("(1 4 5)(2 3 6)", 6), a5)
    assert class_of(w).size == 40
    assert len(centralizer_elements(w)) == 18
    f4 = build_system("F4")
    cox = coxeter_bicolored(f4).w
    assert class_of(cox).l_min == 4
    assert class_of(cox).size == 96
    assert len(centralizer_elements(cox)) == 12
    assert len(centralizer_elements(f4.identity())) == 1152


def test_classes_sorted_and_reps_minimal():
    cs = structure(build_system("F4"))
    fps = [c.fingerprint for c in cs.classes]
    assert fps == sorted(fps)
    for c in cs.classes:
        assert int(cs.table.lengths[c.rep]) == c.l_min
        assert c.rep == c.members[0]
        assert np.all(cs.table.lengths[c.x_min] == c.l_min)
        assert np.all(cs.table.lengths[c.members] >= c.l_min)


@pytest.mark.parametrize("name", ["A4", "B4", "F4", "H3", "I2(7)", "A2xB2", "H4"])
def test_transporters_and_closure(name):
    s = build_system(name)
    cs = structure(s)
    t = cs.table
    idx = np.arange(len(t))
    reps = np.array([cs.classes[k].rep for k in cs.class_index])
    tr = cs.transporter_index
    # t^-1 rep t = u for every element
    assert np.array_equal(t.mul(t.mul(t.inverse[tr], reps), tr), idx)
    for g in range(s.rank):
        conj = t.conjugation_by_generator(g)
        assert np.array_equal(cs.class_index[conj], cs.class_index)
    rng = random.Random(5)
    for i in rng.sample(range(len(t)), min(20, len(t))):
        c = cs.class_containing(i)
        word = c.transporter(int(i))
        g = s.element(word)
        assert c.representative.conjugate(g) == t.element(i)


@pytest.mark.parametrize("name", ["A4", "B3", "F4", "H3", "H4", "I2(8)", "A2xA1"])
def test_centralizers_and_reversers(name):
    s = build_system(name)
    cs = structure(s)
    t = cs.table
    rng = random.Random(11)
    for i in rng.sample(range(len(t)), min(40, len(t))):
        c = cs.class_containing(i)
        cent = cs.centralizer(i)
        assert cent.size * c.size == len(t)
        w = int(i)
        assert np.all(t.mul(cent, w) == t.mul(w, cent))
        g = cs.reverser(w)
        assert t.mul(t.mul(t.inverse[g], w), g)[0] == t.inverse[w]


def test_every_h4_element_has_a_reverser():
    cs = structure(build_system("H4"))
    t = cs.table
    inv = t.inverse
    for i in range(len(t)):
        g = cs.reverser(i)
        assert t.mul(t.mul(inv[g], i), g)[0] == inv[i]


def test_reverser_examples():
    a2 = build_system("A2")
    r1, r2 = a2.generators()
    g = reverser(r1 * r2)
    assert (r1 * r2).conjugate(g) == (r1 * r2).inverse()
    assert (r1 * r2).conjugate(r1) == (r1 * r2).inverse()


def test_fingerprints_constant_on_classes():
    from coxcess.conjugacy import _charpoly_strings

    s = build_system("B3")
    cs = structure(s)
    for c in cs.classes:
        for w in c.elements:
            assert s.order(w) == c.fingerprint.order
            assert _charpoly_strings(s, w) == c.fingerprint.charpoly


@pytest.mark.parametrize("name", ["A3", "B3", "D4", "F4"])
def test_classes_against_matrix_oracle(name):
    mats = oracles.cartan_reflections(oracles.CARTAN[name])
    elements = oracles.matrix_group(mats)
    ref = oracles.class_partition(list(elements), mats)
    ref_profile = sorted((len(c), min(elements[g] for g in c)) for c in ref)
    ours = sorted((c.size, c.l_min) for c in all_classes(build_system(name)))
    assert ours == ref_profile


@pytest.mark.parametrize("n", [3, 4, 5])
def test_type_a_classes_are_cycle_types(n):
    s = build_system(f"A{n - 1}")
    cs = structure(s)
    for c in cs.classes:
        types = {from_element(w).cycle_type() for w in c.elements}
        assert len(types) == 1
    assert len(cs.classes) == len({oracles.cycle_type(p) for p in itertools.permutations(range(n))})


def test_cuspidal_counts():
    for name, count in [("F4", 9), ("H3", 4), ("H4", 20), ("E6", 5), ("A3", 1), ("B3", 3)]:
        cs = structure(build_system(name))
        assert sum(cs.is_cuspidal(c) for c in cs.classes) == count
    b3 = build_system("B3")
    assert not is_cuspidal(class_of(b3.generator(1)))
    for name in ["A4", "B4", "D5", "F4", "H3", "E6", "I2(7)"]:
        s = build_system(name)
        assert is_cuspidal(class_of(coxeter_bicolored(s).w))
    with pytest.raises(ValueError):
        is_cuspidal(class_of(build_system("A2xA1").identity()))


@pytest.mark.parametrize("name,family,n", [("B3", "B", 3), ("B4", "B", 4), ("D4", "D", 4), ("D5", "D", 5)])
def test_signed_cycle_type_classification(name, family, n):
    s = build_system(name)
    cs = structure(s)
    types = signed_cycle_types(n, family)
    splits = sum(1 for ct in types if family == "D" and ct.splits_in_d)
    assert len(cs.classes) == len(types) + splits
    by_type = Counter()
    for c in cs.classes:
        cts = {from_element(w).cycle_type() for w in c.elements}
        assert len(cts) == 1
        ct = cts.pop()
        by_type[ct] += 1
        # cuspidal iff only negative cycles
        assert cs.is_cuspidal(c) == ct.all_negative
        if family == "D":
            image = _graph_automorphism_image(c.representative)
            split = cs.class_index[cs.table.index(image)] != c.id
            assert split == ct.splits_in_d
    assert all(v == (2 if family == "D" and ct.splits_in_d else 1) for ct, v in by_type.items())


@pytest.mark.parametrize(
    "big,small,embed",
    [
        ("A4", "A3", lambda w: w),
        ("B3", "B2", lambda w: [g + 1 for g in w]),
        ("A4", "A2xA1", lambda w: [g if g <= 2 else 4 for g in w]),
        ("A3", "A1xA1", lambda w: [1 if g == 1 else 3 for g in w]),
    ],
)
def test_parabolic_minimal_lengths(big, small, embed):
    """l_min of a W_J-class equals l_min of the W-class containing it."""
    W, WJ = build_system(big), build_system(small)
    big_cs, small_cs = structure(W), structure(WJ)
    for c in small_cs.classes:
        for w in c.elements:
            image = W.element(embed(w.reduced_word()))
            assert image.length() == w.length()
            assert big_cs.class_containing(image).l_min == c.l_min


def test_bfs_class_matches_table():
    s = build_system("F4")
    cs = structure(s)
    w = s.element("1324")
    members, words = bfs_class(w)
    c = cs.class_containing(w)
    assert {cs.table.index(m) for m in members} == set(int(i) for i in c.members)
    for m in members[:50]:
        assert w.conjugate(s.element(words[m])) == m
    with pytest.raises(BudgetExceeded):
        bfs_class(w, budget=10)


def test_structure_budget():
    with pytest.raises(BudgetExceeded):
        structure(build_system("E7"))
