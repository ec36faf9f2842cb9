"""Conjugacy classes, transporters, centralizers and reversing elements.

Classes are the orbits of conjugation by the simple reflections on the
enumerated group.  A multi-source BFS from the class representatives
records, for every element ``u``, a transporter ``t_u`` with
``t_u^-1 rep t_u = u`` (the conjugating word read along the BFS tree).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from .coxeter import CoxeterSystem, Element
from .errors import BudgetExceeded, ConsistencyError
from .exact import charpoly
from .group import DEFAULT_BUDGET, GroupTable

__all__ = [
    "ClassFingerprint",
    "ConjugacyClass",
    "ClassStructure",
    "structure",
    "class_of",
    "all_classes",
    "is_cuspidal",
    "centralizer_elements",
    "reverser",
]


@dataclass(frozen=True, order=True)
class ClassFingerprint:
    size: int
    l_min: int
    order: int
    charpoly: tuple[str, ...]


@dataclass(eq=False)
class ConjugacyClass:
    """One conjugacy class of an enumerated group.

    ``members`` and ``x_min`` are sorted index arrays into the table;
    the representative is the canonically least member, so it always has
    minimal length.
    """

    structure: "ClassStructure" = field(repr=False)
    id: int
    rep: int
    members: np.ndarray = field(repr=False)
    l_min: int
    x_min: np.ndarray = field(repr=False)

    @property
    def size(self) -> int:
        return int(self.members.size)

    @property
    def system(self) -> CoxeterSystem:
        return self.structure.system

    @property
    def representative(self) -> Element:
        return self.structure.table.element(self.rep)

    @property
    def elements(self) -> list[Element]:
        t = self.structure.table
        return [t.element(i) for i in self.members]

    @property
    def minimal_elements(self) -> list[Element]:
        t = self.structure.table
        return [t.element(i) for i in self.x_min]

    def __contains__(self, w: Element) -> bool:
        return self.structure.class_index[self.structure.table.index(w)] == self.id

    def transporter(self, w: Element | int) -> list[int]:
        """Word ``t`` (1-based generators) with ``t^-1 rep t = w``."""
        i = w if isinstance(w, (int, np.integer)) else self.structure.table.index(w)
        if self.structure.class_index[i] != self.id:
            raise ValueError("element is not in this class")
        return self.structure.transporter_word(int(i))

    @cached_property
    def fingerprint(self) -> ClassFingerprint:
        s = self.system
        rep = self.representative
        return ClassFingerprint(self.size, self.l_min, s.order(rep), _charpoly_strings(s, rep))

    @property
    def reflection_length(self) -> int:
        return int(self.structure.class_reflection_length[self.id])

    def __repr__(self):
        return f"<class {self.id} of {self.system.descriptor}: size {self.size}, l_min {self.l_min}>"


def _charpoly_strings(system: CoxeterSystem, w: Element) -> tuple[str, ...]:
    if system.has_matrices:
        return tuple(str(c) for c in charpoly(system.matrix_of(w)))
    parts = []
    for ci, c in enumerate(system.components):
        if c.combinatorial:
            parts.append(f"{c.name}:{system.dihedral_tag(w, ci).class_label}")
        else:
            block = system._component_block(w, c)
            parts.append(f"{c.name}:" + ",".join(str(x) for x in charpoly(block)))
    return tuple(parts)


class ClassStructure:
    """Partition of an enumerated group into conjugacy classes."""

    def __init__(self, table: GroupTable, _state: dict | None = None):
        self.table = table
        self.system = table.system
        if _state is None:
            self._compute()
        else:
            self.class_index = _state["class_index"]
            self.parent = _state["parent"]
            self.parent_gen = _state["parent_gen"]
            self.transporter_index = _state["transporter"]
        self._build_classes()

    def _compute(self):
        t = self.table
        size = len(t)
        n = t.n
        conj = [t.conjugation_by_generator(g) for g in range(n)]
        rows = np.concatenate([np.arange(size)] * n)
        cols = np.concatenate(conj)
        graph = coo_matrix((np.ones(rows.size, dtype=np.int8), (rows, cols)), shape=(size, size))
        _, labels = connected_components(graph, directed=False)
        _, first = np.unique(labels, return_index=True)
        reps = np.sort(first)

        parent = np.full(size, -1, dtype=np.int64)
        parent_gen = np.full(size, -1, dtype=np.int8)
        transporter = np.full(size, -1, dtype=np.int64)
        parent[reps] = reps
        transporter[reps] = 0
        frontier = reps
        while frontier.size:
            found = []
            for g in range(n):
                cand = conj[g][frontier]
                fresh = parent[cand] == -1
                cand, src = cand[fresh], frontier[fresh]
                cand, first = np.unique(cand, return_index=True)
                src = src[first]
                parent[cand] = src
                parent_gen[cand] = g
                if cand.size:
                    transporter[cand] = t.mul_generator(transporter[src], g)
                found.append(cand)
            frontier = np.concatenate(found) if found else np.empty(0, dtype=np.int64)
        if np.any(parent < 0):
            raise ConsistencyError("class BFS did not reach every element")
        self.class_index = labels
        self.parent = parent
        self.parent_gen = parent_gen
        self.transporter_index = transporter

    def _build_classes(self):
        t = self.table
        # labels are arbitrary; the rep is the least member of each group
        labels, inverse = np.unique(self.class_index, return_inverse=True)
        order = np.argsort(inverse, kind="stable")
        bounds = np.searchsorted(inverse[order], np.arange(labels.size + 1))
        raw = []
        for k in range(labels.size):
            members = np.sort(order[bounds[k] : bounds[k + 1]])
            lengths = t.lengths[members]
            lmin = int(lengths.min())
            raw.append((int(members[0]), members, lmin, members[lengths == lmin]))
        classes = [ConjugacyClass(self, -1, rep, mem, lmin, xmin) for rep, mem, lmin, xmin in raw]
        classes.sort(key=lambda c: (c.fingerprint, int(t.keys[c.rep])))
        class_index = np.empty(len(t), dtype=np.int64)
        for k, c in enumerate(classes):
            c.id = k
            class_index[c.members] = k
        self.classes = classes
        self.class_index = class_index
        self.class_reflection_length = np.array(
            [self.system.reflection_length(c.representative) for c in classes], dtype=np.int16
        )

    # ------------------------------------------------------------------

    @property
    def reflection_lengths(self) -> np.ndarray:
        """L(w) for every element, read off its class."""
        if not hasattr(self, "_L"):
            self._L = self.class_reflection_length[self.class_index]
        return self._L

    def transporter_word(self, i: int) -> list[int]:
        word = []
        while self.parent[i] != i:
            word.append(int(self.parent_gen[i]) + 1)
            i = int(self.parent[i])
        return word[::-1]

    def class_containing(self, w: Element | int) -> ConjugacyClass:
        i = w if isinstance(w, (int, np.integer)) else self.table.index(w)
        return self.classes[int(self.class_index[i])]

    @cached_property
    def _rep_centralizers(self) -> dict[int, np.ndarray]:
        return {}

    def centralizer_of_rep(self, c: ConjugacyClass) -> np.ndarray:
        cache = self._rep_centralizers
        if c.id not in cache:
            cent = np.nonzero(self.table.centralizer_mask(c.rep))[0]
            if cent.size * c.size != len(self.table):
                raise ConsistencyError(
                    f"|C| * |class| = {cent.size} * {c.size} != |W| = {len(self.table)}"
                )
            cache[c.id] = cent
        return cache[c.id]

    def centralizer(self, i: int) -> np.ndarray:
        """Sorted indices of ``C_W(w_i) = t^-1 C_W(rep) t``."""
        c = self.class_containing(i)
        base = self.centralizer_of_rep(c)
        tr = self.transporter_index[i]
        if tr == 0:
            return base
        t = self.table
        tinv = t.inverse[tr]
        return np.sort(t.mul(t.mul(tinv, base), tr))

    def reverser(self, i: int) -> int:
        """Index of some ``g`` with ``g^-1 w g = w^-1``."""
        t = self.table
        j = int(t.inverse[i])
        if self.class_index[j] != self.class_index[i]:
            raise ConsistencyError("w^-1 is not conjugate to w")
        tr_i = self.transporter_index[i]
        tr_j = self.transporter_index[j]
        return int(t.mul(t.inverse[tr_i], tr_j)[0])

    def is_cuspidal(self, c: ConjugacyClass) -> bool:
        return self.system.fixed_space_dim(c.representative) == 0


_STRUCTURES: dict[tuple[str, int], ClassStructure] = {}


def structure(system: CoxeterSystem, budget: int = DEFAULT_BUDGET, cache_dir=None) -> ClassStructure:
    """Enumerate ``system`` and its classes once per process (cached).

    With ``cache_dir`` the result is also read from / written to disk.
    """
    key = (system.descriptor, system.rank)
    cs = _STRUCTURES.get(key)
    if cs is not None:
        if cache_dir is not None:
            from . import cache

            path = cache.cache_path(cache_dir, system)
            if not path.exists():
                cache.store(cs, path)
        return cs
    if system.group_order > budget:
        raise BudgetExceeded(
            f"|W({system.descriptor})| = {system.group_order} exceeds the element budget {budget}"
        )
    path = None
    if cache_dir is not None:
        from . import cache

        path = cache.cache_path(cache_dir, system)
        if path.exists():
            cs = cache.load(path, system)
    if cs is None:
        cs = ClassStructure(GroupTable(system, budget=budget))
        if path is not None:
            cache.store(cs, path)
    _STRUCTURES[key] = cs
    return cs


def forget_structures() -> None:
    """Drop the in-process structure cache."""
    _STRUCTURES.clear()


def register_structure(cs: ClassStructure) -> None:
    _STRUCTURES[(cs.system.descriptor, cs.system.rank)] = cs


def all_classes(system: CoxeterSystem, budget: int = DEFAULT_BUDGET) -> list[ConjugacyClass]:
    return structure(system, budget).classes


def class_of(w: Element, budget: int = DEFAULT_BUDGET) -> ConjugacyClass:
    return structure(w.system, budget).class_containing(w)


def is_cuspidal(c: ConjugacyClass) -> bool:
    """Trivial fixed space of the representative (irreducible systems)."""
    if not c.system.type.is_irreducible:
        raise ValueError("cuspidality is only exposed for irreducible systems")
    return c.structure.is_cuspidal(c)


def centralizer_elements(w: Element, budget: int = DEFAULT_BUDGET) -> list[Element]:
    cs = structure(w.system, budget)
    return [cs.table.element(i) for i in cs.centralizer(cs.table.index(w))]


def reverser(w: Element, budget: int = DEFAULT_BUDGET) -> Element:
    cs = structure(w.system, budget)
    return cs.table.element(cs.reverser(cs.table.index(w)))


def bfs_class(w: Element, budget: int = 10**7) -> tuple[list[Element], dict[Element, list[int]]]:
    """Class of ``w`` by BFS conjugation without enumerating the group.

    Returns the members (BFS order) and their transporter words.
    """
    s = w.system
    gens = s.generators()
    words = {w: []}
    order = [w]
    pos = 0
    while pos < len(order):
        u = order[pos]
        for i, r in enumerate(gens, start=1):
            v = r * u * r
            if v not in words:
                if len(words) >= budget:
                    raise BudgetExceeded(f"class exceeds the element budget {budget}")
                words[v] = words[u] + [i]
                order.append(v)
        pos += 1
    return order, words
