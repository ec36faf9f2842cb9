"""Finite Coxeter systems, their root systems and group elements.

Composition convention
----------------------
Group elements act on the reflection module ``V`` from the *left* and
products compose as maps: ``(a * b)(v) = a(b(v))``.  A word
``[i1, i2, ..., ik]`` denotes the product ``r_i1 r_i2 ... r_ik`` and
generator labels are 1-based, so the appendix word ``1324`` is
``[1, 3, 2, 4]``.  The right-acting permutation models live in
:mod:`coxcess.signedperm`, which converts between the two conventions.

Element encoding
----------------
An element is stored as the signed permutation it induces on the
positive roots: ``perm[i]`` is the code of ``w . beta_i`` where code
``j < N`` means ``+beta_j`` and code ``j >= N`` means ``-beta_{j-N}``.
Positive roots are ordered with the simple roots first, so the first
``rank`` entries already determine the element.

Generator numbering follows Bourbaki.  H3 and H4 put the 5-bond between
generators 1 and 2.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from .errors import CoxeterTypeError
from .exact import PHI, Matrix, Scalar, kernel_basis, rank

__all__ = [
    "CoxeterType",
    "CoxeterSystem",
    "Element",
    "DihedralTag",
    "parse_type",
    "build_system",
    "DEFAULT_MAX_RANK",
]

DEFAULT_MAX_RANK = 10

FAMILIES = ("A", "B", "D", "I2", "E", "F", "H")

_EXCEPTIONAL_ORDERS = {
    ("E", 6): 51840,
    ("E", 7): 2903040,
    ("E", 8): 696729600,
    ("F", 4): 1152,
    ("H", 3): 120,
    ("H", 4): 14400,
}


@dataclass(frozen=True, order=True)
class CoxeterType:
    """A finite Coxeter type as a tuple of irreducible ``(family, parameter)``.

    ``family`` is one of ``A B D I2 E F H``; the parameter is the rank,
    except for ``I2`` where it is the dihedral parameter ``m``.
    """

    components: tuple[tuple[str, int], ...]

    @property
    def rank(self) -> int:
        return sum(_component_rank(f, p) for f, p in self.components)

    @property
    def is_irreducible(self) -> bool:
        return len(self.components) == 1

    @property
    def descriptor(self) -> str:
        return "x".join(_component_name(f, p) for f, p in self.components)

    def __str__(self):
        return self.descriptor


def _component_rank(family: str, param: int) -> int:
    return 2 if family == "I2" else param


def _component_name(family: str, param: int) -> str:
    return f"I2({param})" if family == "I2" else f"{family}{param}"


_TOKEN = re.compile(r"^\s*(?:(I2)\((\d+)\)|(I)(\d+)\((\d+)\)|([ABDEFH])(\d+))\s*$")


def parse_type(text: str | CoxeterType, max_rank: int = DEFAULT_MAX_RANK) -> CoxeterType:
    """Parse ``"F4"``, ``"I2(7)"``, ``"A2xB2"``, ``"A2*A1"`` and validate it."""
    if isinstance(text, CoxeterType):
        t = text
    else:
        parts = [p for p in re.split(r"[x*×]", text.strip()) if p.strip()]
        if not parts:
            raise CoxeterTypeError(f"empty Coxeter type {text!r}")
        comps = []
        for part in parts:
            m = _TOKEN.match(part)
            if not m:
                raise CoxeterTypeError(f"cannot parse Coxeter type component {part!r}")
            if m.group(1):
                comps.append(("I2", int(m.group(2))))
            elif m.group(3):
                if m.group(4) != "2":
                    raise CoxeterTypeError(f"dihedral types are written I2(m), got {part!r}")
                comps.append(("I2", int(m.group(5))))
            else:
                comps.append((m.group(6), int(m.group(7))))
        t = CoxeterType(tuple(comps))
    for family, p in t.components:
        _validate_component(family, p)
    if t.rank > max_rank:
        raise CoxeterTypeError(f"total rank {t.rank} of {t} exceeds the engine limit {max_rank}")
    return t


def _validate_component(family: str, p: int) -> None:
    ok = {
        "A": p >= 1,
        "B": p >= 2,
        "D": p >= 4,
        "I2": p >= 3,
        "E": p in (6, 7, 8),
        "F": p == 4,
        "H": p in (3, 4),
    }.get(family)
    if not ok:
        raise CoxeterTypeError(f"{_component_name(family, p)} is not a finite irreducible Coxeter type")


def _component_order(family: str, p: int) -> int:
    if family == "A":
        return math.factorial(p + 1)
    if family == "B":
        return 2**p * math.factorial(p)
    if family == "D":
        return 2 ** (p - 1) * math.factorial(p)
    if family == "I2":
        return 2 * p
    return _EXCEPTIONAL_ORDERS[(family, p)]


def _component_edges(family: str, p: int) -> list[tuple[int, int, int]]:
    """Bourbaki Coxeter graph as 0-based (i, j, m) with m >= 3."""
    if family == "A":
        return [(i, i + 1, 3) for i in range(p - 1)]
    if family == "B":
        return [(i, i + 1, 3) for i in range(p - 2)] + [(p - 2, p - 1, 4)]
    if family == "D":
        return [(i, i + 1, 3) for i in range(p - 2)] + [(p - 3, p - 1, 3)]
    if family == "E":
        return [(0, 2, 3), (1, 3, 3)] + [(i, i + 1, 3) for i in range(2, p - 1)]
    if family == "F":
        return [(0, 1, 3), (1, 2, 4), (2, 3, 3)]
    if family == "H":
        return [(0, 1, 5)] + [(i, i + 1, 3) for i in range(1, p - 1)]
    if family == "I2":
        return [(0, 1, p)]
    raise AssertionError(family)


def _squared_lengths(family: str, p: int) -> list[Fraction] | None:
    """Root norms for the realization; None means use unit roots (H, I2(5))."""
    if family in ("A", "D", "E"):
        return [Fraction(2)] * p
    if family == "B":
        return [Fraction(2)] * (p - 1) + [Fraction(1)]
    if family == "F":
        return [Fraction(2), Fraction(2), Fraction(1), Fraction(1)]
    if family == "I2":
        return {3: [Fraction(2)] * 2, 4: [Fraction(2), Fraction(1)], 6: [Fraction(2), Fraction(6)]}.get(p)
    return None


def _gram(family: str, p: int, coxeter: list[list[int]]) -> list[list[Scalar]] | None:
    """Bilinear form on the simple roots, or None for combinatorial dihedrals."""
    n = len(coxeter)
    norms = _squared_lengths(family, p)
    if family == "I2" and p not in (3, 4, 5, 6):
        return None
    g = [[Scalar(0)] * n for _ in range(n)]
    if norms is None:
        # unit roots: <a_r, a_s> = -cos(pi/m), with cos(pi/5) = phi/2
        cos = {2: Scalar(0), 3: Scalar(Fraction(1, 2)), 5: PHI * Fraction(1, 2)}
        for i in range(n):
            for j in range(n):
                g[i][j] = Scalar(1) if i == j else -cos[coxeter[i][j]]
        return g
    for i in range(n):
        g[i][i] = Scalar(norms[i])
    for i in range(n):
        for j in range(n):
            if i == j or coxeter[i][j] == 2:
                continue
            m = coxeter[i][j]
            # -|a_i||a_j|cos(pi/m) squared is norms_i norms_j cos^2; stays rational here
            cos2 = {3: Fraction(1, 4), 4: Fraction(1, 2), 6: Fraction(3, 4)}[m]
            prod = norms[i] * norms[j] * cos2
            root = _rational_sqrt(prod)
            g[i][j] = Scalar(-root)
    return g


def _rational_sqrt(q: Fraction) -> Fraction:
    num, den = q.numerator, q.denominator
    rn, rd = math.isqrt(num), math.isqrt(den)
    if rn * rn != num or rd * rd != den:
        raise AssertionError(f"{q} is not a rational square")
    return Fraction(rn, rd)


@dataclass(frozen=True)
class DihedralTag:
    """Rotation/reflection classification of an element of a dihedral group.

    For a rotation ``index`` is the power ``j`` of the rotation by
    ``2*pi/m``; for a reflection it is the axis index ``j`` (mod ``m``).
    """

    m: int
    kind: str  # "rotation" or "reflection"
    index: int

    @property
    def fixed_dims(self) -> tuple[int, int]:
        """(dim V_1, dim V_-1)."""
        if self.kind == "reflection":
            return (1, 1)
        if self.index == 0:
            return (2, 0)
        if self.m % 2 == 0 and self.index == self.m // 2:
            return (0, 2)
        return (0, 0)

    @property
    def class_label(self) -> str:
        if self.kind == "rotation":
            return f"rotation:{min(self.index, self.m - self.index)}"
        return f"reflection:{self.index % 2 if self.m % 2 == 0 else 0}"


class _Component:
    """One irreducible factor, with its generator and root index ranges."""

    def __init__(self, family, param, gen_offset):
        self.family = family
        self.param = param
        self.rank = _component_rank(family, param)
        self.gen_offset = gen_offset
        self.gens = list(range(gen_offset, gen_offset + self.rank))
        self.coxeter = [[1 if i == j else 2 for j in range(self.rank)] for i in range(self.rank)]
        for i, j, m in _component_edges(family, param):
            self.coxeter[i][j] = self.coxeter[j][i] = m
        self.gram = _gram(family, param, self.coxeter)
        self.combinatorial = self.gram is None
        self.order = _component_order(family, param)
        self.name = _component_name(family, param)

    def local_roots(self):
        """Positive roots (local coordinates or angle indices) and local tables.

        Returns (roots, tables) where tables[r][i] is a local signed code.
        """
        if self.combinatorial:
            return self._dihedral_roots()
        n = self.rank
        g = self.gram
        cartan = [[2 * g[r][s] / g[r][r] for s in range(n)] for r in range(n)]
        simple = [tuple(Scalar(1) if i == j else Scalar(0) for i in range(n)) for j in range(n)]
        roots = list(simple)
        index = {v: i for i, v in enumerate(roots)}
        images: dict[tuple[int, int], object] = {}
        pos = 0
        while pos < len(roots):
            beta = roots[pos]
            for r in range(n):
                if beta == simple[r]:
                    continue
                coeff = Scalar(0)
                for s in range(n):
                    if beta[s]:
                        coeff = coeff + beta[s] * cartan[r][s]
                img = list(beta)
                img[r] = img[r] - coeff
                img = tuple(img)
                if img not in index:
                    index[img] = len(roots)
                    roots.append(img)
            pos += 1
        npos = len(roots)
        tables = []
        for r in range(n):
            row = []
            for i, beta in enumerate(roots):
                if i == r:
                    row.append(r + npos)
                    continue
                coeff = Scalar(0)
                for s in range(n):
                    if beta[s]:
                        coeff = coeff + beta[s] * cartan[r][s]
                img = list(beta)
                img[r] = img[r] - coeff
                row.append(index[tuple(img)])
            tables.append(row)
        return roots, tables

    def _dihedral_roots(self):
        m = self.param
        # positive roots are the unit vectors at angles k*pi/m, k = 0..m-1;
        # alpha_1 is angle 0 and alpha_2 is angle m-1
        order = [0, m - 1] + list(range(1, m - 1))
        local = {a: i for i, a in enumerate(order)}

        def code(angle):
            angle %= 2 * m
            return local[angle] if angle < m else local[angle - m] + m

        tables = [
            [code(m - a) for a in order],
            [code(m - 2 - a) for a in order],
        ]
        return order, tables


class CoxeterSystem:
    """An immutable finite Coxeter system with its positive roots.

    Build with :func:`build_system` (or ``CoxeterSystem("F4")``).
    """

    def __init__(self, t: CoxeterType | str, max_rank: int = DEFAULT_MAX_RANK):
        self.type = parse_type(t, max_rank=max_rank)
        comps = []
        off = 0
        for family, p in self.type.components:
            c = _Component(family, p, off)
            comps.append(c)
            off += c.rank
        self.components = comps
        self.rank = off
        n = self.rank
        self.coxeter_matrix = tuple(
            tuple(self._coxeter_entry(i, j) for j in range(n)) for i in range(n)
        )

        # assemble the global root list: all simple roots first, then the
        # non-simple roots of each component in turn
        local = [c.local_roots() for c in comps]
        nonsimple_counts = [len(r) - c.rank for c, (r, _) in zip(comps, local)]
        npos = n + sum(nonsimple_counts)
        self.npos = npos
        glob_index = []
        nxt = n
        for c, (roots, _) in zip(comps, local):
            idx = []
            for i in range(len(roots)):
                if i < c.rank:
                    idx.append(c.gen_offset + i)
                else:
                    idx.append(nxt)
                    nxt += 1
            glob_index.append(idx)
            c.root_indices = idx

        self.roots: list[tuple[Scalar, ...] | None] = [None] * npos
        self.root_component = [0] * npos
        for ci, (c, (roots, _)) in enumerate(zip(comps, local)):
            for i, r in enumerate(roots):
                g = glob_index[ci][i]
                self.root_component[g] = ci
                if not c.combinatorial:
                    vec = [Scalar(0)] * n
                    for k, x in enumerate(r):
                        vec[c.gen_offset + k] = x
                    self.roots[g] = tuple(vec)

        self.dtype = np.uint8 if 2 * npos <= 256 else np.uint16
        tables = np.empty((n, npos), dtype=np.int64)
        for ci, (c, (roots, ltables)) in enumerate(zip(comps, local)):
            nl = len(roots)
            gidx = glob_index[ci]
            for r in range(c.rank):
                grow = tables[c.gen_offset + r]
                # generators act trivially on other components
                for ck, (c2, (roots2, _)) in enumerate(zip(comps, local)):
                    if ck != ci:
                        for g in glob_index[ck]:
                            grow[g] = g
                for i in range(nl):
                    v = ltables[r][i]
                    grow[gidx[i]] = gidx[v] if v < nl else gidx[v - nl] + npos
        self._tables = tables.astype(self.dtype)
        self._tables.setflags(write=False)
        neg = (np.arange(2 * npos) + npos) % (2 * npos)
        self.neg = neg.astype(self.dtype)
        self.neg.setflags(write=False)
        self.group_order = math.prod(c.order for c in comps)

        # mixed-radix key of the simple-root images; orders elements
        # lexicographically by their signed-permutation arrays
        base = 2 * npos
        self._key_fits = base**n < 2**62
        self._key_weights = (
            np.array([base ** (n - 1 - j) for j in range(n)], dtype=np.int64)
            if self._key_fits
            else None
        )

    def _coxeter_entry(self, i, j):
        for c in self.components:
            if i in c.gens and j in c.gens:
                return c.coxeter[i - c.gen_offset][j - c.gen_offset]
        return 2

    # -- basic data -----------------------------------------------------

    def __repr__(self):
        return f"CoxeterSystem({self.type.descriptor!r})"

    def __eq__(self, other):
        return isinstance(other, CoxeterSystem) and other.type == self.type

    def __hash__(self):
        return hash(self.type)

    @property
    def descriptor(self) -> str:
        return self.type.descriptor

    @property
    def positive_roots(self):
        return self.roots

    @property
    def has_matrices(self) -> bool:
        return not any(c.combinatorial for c in self.components)

    @cached_property
    def bilinear_form(self) -> Matrix | None:
        """Gram matrix on the simple roots (None with a combinatorial dihedral)."""
        if not self.has_matrices:
            return None
        n = self.rank
        g = [[Scalar(0)] * n for _ in range(n)]
        for c in self.components:
            for i in range(c.rank):
                for j in range(c.rank):
                    g[c.gen_offset + i][c.gen_offset + j] = c.gram[i][j]
        return Matrix(g)

    @property
    def reflection_tables(self) -> np.ndarray:
        return self._tables

    # -- elements -----------------------------------------------------------

    def identity(self) -> "Element":
        return Element(self, np.arange(self.npos, dtype=self.dtype))

    def generator(self, i: int) -> "Element":
        """Simple reflection ``r_i`` (1-based)."""
        if not 1 <= i <= self.rank:
            raise IndexError(f"generator {i} out of range 1..{self.rank} for {self.descriptor}")
        return Element(self, self._tables[i - 1])

    def generators(self) -> list["Element"]:
        return [self.generator(i) for i in range(1, self.rank + 1)]

    def element(self, word: Iterable[int] | str) -> "Element":
        """Product of a word of 1-based generator labels."""
        if isinstance(word, str):
            from .report import parse_word

            word = parse_word(word, self.rank)
        perm = np.arange(self.npos, dtype=self.dtype)
        for i in word:
            if not 1 <= i <= self.rank:
                raise IndexError(f"generator {i} out of range 1..{self.rank} for {self.descriptor}")
            # w * r: (w r)(beta) = w(r(beta))
            perm = self.full(perm)[self._tables[i - 1]]
        return Element(self, perm)

    def full(self, perm: np.ndarray) -> np.ndarray:
        """Extend a signed permutation of the positive roots to all of Phi."""
        return np.concatenate([perm, self.neg[perm]], axis=-1)

    def multiply(self, a: "Element", b: "Element") -> "Element":
        self._check(a)
        self._check(b)
        return Element(self, self.full(a.perm)[b.perm])

    def inverse(self, a: "Element") -> "Element":
        self._check(a)
        return Element(self, self.inverse_perm(a.perm))

    def inverse_perm(self, perm: np.ndarray) -> np.ndarray:
        """Inverse of one perm or of a stack of perms (last axis)."""
        npos = self.npos
        p = perm.astype(np.int32)
        tgt = p % npos
        vals = np.arange(npos, dtype=np.int32) + np.where(p >= npos, npos, 0).astype(np.int32)
        out = np.empty_like(p)
        np.put_along_axis(out, tgt, vals, axis=-1)
        return out.astype(self.dtype)

    def _check(self, a: "Element"):
        if a.system is not self and a.system != self:
            raise ValueError(f"element of {a.system.descriptor} used in {self.descriptor}")

    def key(self, perm: np.ndarray):
        """Integer key (int64 array for stacks) ordering elements lexicographically."""
        if self._key_fits:
            return perm[..., : self.rank].astype(np.int64) @ self._key_weights
        base = 2 * self.npos
        return sum(int(x) * base ** (self.rank - 1 - j) for j, x in enumerate(perm[: self.rank]))

    # -- length, words ------------------------------------------------------

    def inversion_set(self, w: "Element") -> frozenset[int]:
        """Indices of positive roots sent to negative roots."""
        return frozenset(int(i) for i in np.nonzero(w.perm >= self.npos)[0])

    def length(self, w: "Element") -> int:
        return int(np.count_nonzero(w.perm >= self.npos))

    def reduced_word(self, w: "Element") -> list[int]:
        """Reduced word, peeling off the lowest-index right descent each time."""
        perm = w.perm
        npos = self.npos
        rev = []
        while True:
            desc = np.nonzero(perm[: self.rank] >= npos)[0]
            if desc.size == 0:
                break
            i = int(desc[0])
            rev.append(i + 1)
            perm = self.full(perm)[self._tables[i]]
        return rev[::-1]

    def is_involution(self, w: "Element") -> bool:
        """True for elements of order exactly 2."""
        return self.squares_to_one(w) and not w.is_identity

    def squares_to_one(self, w: "Element") -> bool:
        """``w^2 = 1`` (identity included)."""
        return bool(np.array_equal(self.full(w.perm)[w.perm], np.arange(self.npos)))

    def order(self, w: "Element") -> int:
        ident = np.arange(self.npos)
        p = w.perm
        full = self.full(w.perm)
        k = 1
        while not np.array_equal(p, ident):
            p = full[p]
            k += 1
        return k

    def longest_element(self) -> "Element":
        """Ascend by simple reflections outside N(w) until N(w) = Phi+."""
        perm = np.arange(self.npos, dtype=self.dtype)
        while True:
            asc = np.nonzero(perm[: self.rank] < self.npos)[0]
            if asc.size == 0:
                return Element(self, perm)
            perm = self.full(perm)[self._tables[int(asc[0])]]

    # -- linear algebra -------------------------------------------------------

    def _signed_root(self, code: int) -> tuple[Scalar, ...]:
        code = int(code)
        if code < self.npos:
            return self.roots[code]
        return tuple(-x for x in self.roots[code - self.npos])

    def matrix_of(self, w: "Element") -> Matrix:
        """Matrix of ``w`` on the basis of simple roots (columns = images)."""
        if not self.has_matrices:
            raise ValueError(
                f"{self.descriptor} contains a dihedral factor without an exact "
                "realization over Q(sqrt5); use dihedral_tag()"
            )
        cols = [self._signed_root(w.perm[j]) for j in range(self.rank)]
        return Matrix.from_columns(cols)

    def _component_block(self, w: "Element", c: _Component) -> Matrix:
        cols = []
        for j in c.gens:
            v = self._signed_root(w.perm[j])
            cols.append([v[g] for g in c.gens])
        return Matrix.from_columns(cols)

    def dihedral_tag(self, w: "Element", component: int = 0) -> DihedralTag:
        """Classification of the projection of ``w`` into a dihedral factor."""
        c = self.components[component]
        if c.family != "I2":
            raise ValueError(f"component {component} of {self.descriptor} is not dihedral")
        sub = self.project_to_factor(w, component)
        m = c.param
        # rho = r1 r2 is the rotation by 2 pi / m; reflections are rho^j r1
        rho = sub.system.generator(1) * sub.system.generator(2)
        kind = "rotation" if sub.length() % 2 == 0 else "reflection"
        target = sub if kind == "rotation" else sub * sub.system.generator(1)
        power = sub.system.identity()
        for j in range(m):
            if power == target:
                return DihedralTag(m, kind, j)
            power = power * rho
        raise AssertionError("dihedral element not found among rotations")

    def eigenspace_dims(self, w: "Element") -> tuple[int, int]:
        """(dim V_1(w), dim V_-1(w))."""
        fixed = minus = 0
        for ci, c in enumerate(self.components):
            if c.combinatorial:
                f, m = self.dihedral_tag(w, ci).fixed_dims
            else:
                block = self._component_block(w, c)
                ident = Matrix.identity(c.rank)
                f = c.rank - rank(block - ident)
                m = c.rank - rank(block + ident)
            fixed += f
            minus += m
        return fixed, minus

    def fixed_space_dim(self, w: "Element") -> int:
        fixed = 0
        for ci, c in enumerate(self.components):
            if c.combinatorial:
                fixed += self.dihedral_tag(w, ci).fixed_dims[0]
            else:
                fixed += c.rank - rank(self._component_block(w, c) - Matrix.identity(c.rank))
        return fixed

    def minus_one_dim(self, w: "Element") -> int:
        return self.eigenspace_dims(w)[1]

    def reflection_length(self, w: "Element") -> int:
        """``L(w) = rank - dim V_1(w)``."""
        return self.rank - self.fixed_space_dim(w)

    def fixed_space_basis(self, w: "Element") -> list[tuple[Scalar, ...]]:
        return kernel_basis(self.matrix_of(w) - Matrix.identity(self.rank))

    def fixes(self, w: "Element", vectors: Sequence[Sequence[Scalar]]) -> bool:
        """Whether ``w`` fixes every vector given in simple-root coordinates."""
        cols = [self._signed_root(w.perm[j]) for j in range(self.rank)]
        for v in vectors:
            for i in range(self.rank):
                acc = Scalar(0)
                for j in range(self.rank):
                    if v[j] and cols[j][i]:
                        acc = acc + v[j] * cols[j][i]
                if acc != v[i]:
                    return False
        return True

    # -- direct factors ---------------------------------------------------------

    @cached_property
    def factors(self) -> list["CoxeterSystem"]:
        if self.type.is_irreducible:
            return [self]
        return [CoxeterSystem(CoxeterType((comp,))) for comp in self.type.components]

    def project_to_factor(self, w: "Element", component: int) -> "Element":
        """The component of ``w`` in the given irreducible factor, as an element there."""
        if not 0 <= component < len(self.components):
            raise IndexError(f"{self.descriptor} has no component {component}")
        self._check(w)
        if self.type.is_irreducible:
            return w
        c = self.components[component]
        sub = self.factors[component]
        glob = c.root_indices  # local index -> global root index
        back = {g: i for i, g in enumerate(glob)}
        nl = len(glob)
        local = np.empty(nl, dtype=sub.dtype)
        for i, g in enumerate(glob):
            v = int(w.perm[g])
            local[i] = back[v] if v < self.npos else back[v - self.npos] + nl
        return Element(sub, local)

    def embed(self, component: int, x: "Element") -> "Element":
        """Inverse of :meth:`project_to_factor` (identity on the other factors)."""
        if self.type.is_irreducible:
            return x
        c = self.components[component]
        glob = c.root_indices
        nl = len(glob)
        perm = np.arange(self.npos, dtype=self.dtype)
        for i, g in enumerate(glob):
            v = int(x.perm[i])
            perm[g] = glob[v] if v < nl else glob[v - nl] + self.npos
        return Element(self, perm)


class Element:
    """A group element of a :class:`CoxeterSystem` (immutable value)."""

    __slots__ = ("system", "perm", "_hash")

    def __init__(self, system: CoxeterSystem, perm):
        arr = np.array(perm, dtype=system.dtype)
        arr.setflags(write=False)
        self.system = system
        self.perm = arr
        self._hash = None

    def __mul__(self, other: "Element") -> "Element":
        return self.system.multiply(self, other)

    def inverse(self) -> "Element":
        return self.system.inverse(self)

    def __pow__(self, k: int) -> "Element":
        if k < 0:
            return self.inverse() ** (-k)
        out = self.system.identity()
        for _ in range(k):
            out = out * self
        return out

    def conjugate(self, g: "Element") -> "Element":
        """``g^-1 w g``."""
        return g.inverse() * self * g

    def length(self) -> int:
        return self.system.length(self)

    def inversion_set(self) -> frozenset[int]:
        return self.system.inversion_set(self)

    def reduced_word(self) -> list[int]:
        return self.system.reduced_word(self)

    def reflection_length(self) -> int:
        return self.system.reflection_length(self)

    @property
    def is_identity(self) -> bool:
        return bool(np.array_equal(self.perm, np.arange(self.system.npos)))

    def __eq__(self, other):
        if not isinstance(other, Element):
            return NotImplemented
        return self.system == other.system and np.array_equal(self.perm, other.perm)

    def __lt__(self, other: "Element") -> bool:
        return tuple(self.perm.tolist()) < tuple(other.perm.tolist())

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self.perm.tobytes())
        return self._hash

    def __repr__(self):
        word = "".join(str(i) if i < 10 else f"[{i}]" for i in self.reduced_word())
        return f"<{self.system.descriptor} element {word or '1'}>"


def build_system(t: CoxeterType | str, max_rank: int = DEFAULT_MAX_RANK) -> CoxeterSystem:
    """Construct (and cache) the Coxeter system of a type."""
    return _build_cached(parse_type(t, max_rank=max_rank), max_rank)


_SYSTEMS: dict[CoxeterType, CoxeterSystem] = {}


def _build_cached(t: CoxeterType, max_rank: int) -> CoxeterSystem:
    sys_ = _SYSTEMS.get(t)
    if sys_ is None:
        sys_ = _SYSTEMS[t] = CoxeterSystem(t, max_rank=max_rank)
    return sys_
