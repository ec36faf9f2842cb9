import itertools
import random

import numpy as np
import pytest

from coxcess import build_system
from coxcess.conjugacy import structure
from coxcess.errors import ConsistencyError
from coxcess.excess import (
    ExcessCertificate,
    check_certificate,
    excess,
    excess_report,
    j_set,
    reflection_excess,
    reverser_involution_indices,
    reverser_involutions,
    verify_theorem,
    x0_min,
)
from coxcess.signedperm import SignedPermutation, to_element

from . import oracles

SQRT5 = 5**0.5


def _float_matrices(s):
    """Float matrices of every table element, built by products of generator matrices."""
    t = structure(s).table
    gens = [np.array([[float(x.a) + float(x.b) * SQRT5 for x in row] for row in s.matrix_of(g).entries])
            for g in s.generators()]
    mats = np.empty((len(t), s.rank, s.rank))
    mats[0] = np.eye(s.rank)
    idx = np.arange(len(t))
    parent = np.full(len(t), -1)
    gen = np.full(len(t), -1)
    for g in reversed(range(s.rank)):
        v = t.mul_generator(idx, g)
        down = t.lengths[v] < t.lengths
        parent[down], gen[down] = v[down], g
    for i in range(1, len(t)):  # rows are in length order, so parents come first
        mats[i] = mats[parent[i]] @ gens[gen[i]]
    return mats


def _example_w():
    s = build_system("A5")
    return s, to_element(SignedPermutation.from_cycles("(1 4 5)(2 3 6)", 6), s)


def test_float_matrices_match_exact():
    s = build_system("B3")
    t = structure(s).table
    mats = _float_matrices(s)
    for i in range(0, len(t), 7):
        exact = s.matrix_of(t.element(i))
        assert np.allclose(mats[i], [[float(x.a) + float(x.b) * SQRT5 for x in r] for r in exact.entries])


def test_worked_example():
    s, w = _example_w()
    assert w.length() == 10 and w.reflection_length() == 4
    iw = reverser_involutions(w)
    assert len(iw) == 12
    assert np.array_equal(iw.indices, reverser_involution_indices(structure(s), structure(s).table.index(w), "scan"))
    jw = j_set(w)
    assert len(jw) == 9
    assert set(jw) == set(j_set(w, method="reflection_length"))
    rep = excess_report(w)
    assert (rep.e, rep.E) == (0, 2)  # the 10-length pair is not L-additive
    assert not rep.best_plain.reflection_additive
    assert check_certificate(s, w, rep.best_reflective) == []


def test_small_reverser_sets():
    a2 = build_system("A2")
    r1, r2 = a2.generators()
    refls = {r1, r2, r1 * r2 * r1}
    assert set(reverser_involutions(r1 * r2).members) == refls
    t = structure(a2).table
    assert len(reverser_involutions(a2.identity())) == int(t.squares_to_one.sum()) == 4
    assert j_set(a2.identity()) == [a2.identity()]
    f4 = build_system("F4")
    assert len(reverser_involutions(f4.identity())) == int(structure(f4).table.squares_to_one.sum())


@pytest.mark.parametrize("name", ["A3", "B3", "H3", "F4", "I2(7)", "A2xB2"])
def test_coset_equals_scan(name):
    cs = structure(build_system(name))
    rng = random.Random(1)
    for i in rng.sample(range(len(cs.table)), min(60, len(cs.table))):
        assert np.array_equal(reverser_involution_indices(cs, i, "coset"), reverser_involution_indices(cs, i, "scan"))
    with pytest.raises(ValueError):
        reverser_involution_indices(cs, 0, "heuristic")


@pytest.mark.parametrize("name", ["H3", "F4", "B3", "A4"])
def test_three_characterizations_of_j(name):
    """L-additivity, fixed-space containment and trivial (-1)-intersection agree."""
    s = build_system(name)
    cs = structure(s)
    t = cs.table
    L = cs.reflection_lengths
    mats = _float_matrices(s)
    eye = np.eye(s.rank)
    xs_all, ws_all = [], []
    for i in range(len(t)):
        xs = reverser_involution_indices(cs, i, "scan")
        xs_all.append(xs)
        ws_all.append(np.full(xs.size, i))
    xs = np.concatenate(xs_all)
    ws = np.concatenate(ws_all)
    ys = t.mul(xs, ws)
    additive = (L[xs] + L[ys]) == L[ws]

    def rank(m):  # absolute tolerance: relative tolerance misreads near-zero matrices
        return np.linalg.matrix_rank(m, tol=1e-8)

    fw = mats[ws] - eye
    containment = rank(np.concatenate([fw, mats[xs] - eye], axis=1)) == rank(fw)
    minus = rank(np.concatenate([mats[xs] + eye, mats[ys] + eye], axis=1)) == s.rank
    assert np.array_equal(additive, containment)
    assert np.array_equal(additive, minus)
    # every w has an additive factorization
    assert np.all(np.bincount(ws[additive], minlength=len(t)) > 0)


def test_exact_rank_spot_check():
    s, w = _example_w()
    iw = reverser_involutions(w).members
    fixed = s.fixed_space_basis(w)
    for x in iw:
        y = x * w
        additive = x.reflection_length() + y.reflection_length() == w.reflection_length()
        assert additive == s.fixes(x, fixed)
        mx, my = s.matrix_of(x), s.matrix_of(y)
        rows = [[int(v.a) for v in r] for r in (mx.entries + my.entries)]  # kernel of [M(x)+1; M(y)+1]
        eye = [[int(i == j) for j in range(s.rank)] for i in range(s.rank)]
        stacked = [[a + b for a, b in zip(r, eye[k % s.rank])] for k, r in enumerate(rows)]
        assert (oracles.frac_rank(stacked) == s.rank) == additive


@pytest.mark.parametrize("name", ["A3", "B3", "B4", "D4", "F4", "H3", "I2(5)", "I2(8)", "A2xB2"])
def test_excess_invariants_exhaustive(name):
    s = build_system(name)
    cs = structure(s)
    t = cs.table
    for i in range(len(t)):
        w = t.element(i)
        rep = excess_report(w)
        assert rep.E >= rep.e >= 0
        assert rep.e % 2 == 0 and rep.E % 2 == 0
        if s.squares_to_one(w):
            assert rep.e == rep.E == 0
        if i % 17 == 0:
            assert check_certificate(s, w, rep.best_plain) == []
            assert check_certificate(s, w, rep.best_reflective) == []
            assert rep.best_reflective.reflection_additive


@pytest.mark.parametrize("name", ["F4", "H3", "B4", "D4"])
def test_cuspidal_e_equals_E(name):
    s = build_system(name)
    cs = structure(s)
    for c in cs.classes:
        if not cs.is_cuspidal(c):
            continue
        for i in c.members[:: max(1, c.size // 25)]:
            w = cs.table.element(i)
            rep = excess_report(w)
            assert rep.e == rep.E
            assert set(j_set(w)) == set(reverser_involutions(w).members)


@pytest.mark.parametrize("name", ["A2xA1", "A2xB2"])
def test_additivity_over_factors(name):
    s = build_system(name)
    t = structure(s).table
    for i in range(len(t)):
        w = t.element(i)
        parts = [s.project_to_factor(w, k) for k in range(len(s.components))]
        rep = excess_report(w)
        assert rep.length == sum(p.length() for p in parts)
        assert rep.e == sum(excess(p)[0] for p in parts)
        assert rep.E == sum(reflection_excess(p)[0] for p in parts)


@pytest.mark.parametrize("n", [4, 5])
def test_symmetric_group_brute_force(n):
    s = build_system(f"A{n - 1}")
    for p in itertools.permutations(range(n)):
        w = s.element(oracles.perm_word(p))
        assert w.length() == oracles.inversions(p)
        e, E, count, _ = oracles.sym_excess(p)
        rep = excess_report(w)
        assert (rep.e, rep.E) == (e, E)
        assert len(reverser_involutions(w)) == count


@pytest.mark.parametrize("name", ["A4", "B3", "H3", "F4"])
def test_symmetric_choice_same_minimum(name):
    """Taking y in I_w and x = w y gives the same minima."""
    cs = structure(build_system(name))
    t = cs.table
    L = cs.reflection_lengths
    rng = random.Random(9)
    for i in rng.sample(range(len(t)), min(80, len(t))):
        rep = excess_report(t.element(i))
        ys = reverser_involution_indices(cs, i)
        xs = t.mul(i, ys)
        lsum = t.lengths[xs].astype(int) + t.lengths[ys]
        add = L[xs] + L[ys] == L[i]
        assert t.squares_to_one[xs].all()
        assert int(lsum.min()) - int(t.lengths[i]) == rep.e
        assert int(lsum[add].min()) - int(t.lengths[i]) == rep.E


def test_check_certificate_rejects_bad_witnesses():
    s, w = _example_w()
    _, good = reflection_excess(w)
    assert check_certificate(s, w, good) == []
    wrong_defect = ExcessCertificate(good.x_word, good.y_word, good.defect + 2, True)
    assert any("defect" in p for p in check_certificate(s, w, wrong_defect))
    not_involution = ExcessCertificate((1, 2), (1,), 0, True)
    problems = check_certificate(s, w, not_involution)
    assert "x^2 != 1" in problems and "x y != w" in problems


def test_x0_min_examples():
    s = build_system("F4")
    cs = structure(s)
    for c in cs.classes:
        res = x0_min(c)
        assert 1 <= res.count <= res.x_min_count <= c.size
        assert res.count == x0_min(c, threads=3).count
        least = res.least()
        assert least.length() == c.l_min
        assert excess_report(least).e == 0
    assert x0_min(cs.class_containing(0)).count == 1


@pytest.mark.parametrize("name", ["A3", "H3", "I2(7)", "B2", "A2xA1"])
def test_verify_theorem(name):
    s = build_system(name)
    report = verify_theorem(s)
    assert report.passed
    assert len(report.verdicts) == len(structure(s).classes)
    for v in report.verdicts:
        assert check_certificate(s, s.element(v.representative), v.certificate) == []


def test_verify_theorem_out_of_budget():
    report = verify_theorem(build_system("E7"))
    assert not report.complete and not report.passed


def test_consistency_error_is_a_coxcess_error():
    from coxcess.errors import CoxcessError

    assert issubclass(ConsistencyError, CoxcessError)
