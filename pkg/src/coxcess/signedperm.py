"""Signed-permutation models of types A, B, D and the explicit constructions.

A :class:`SignedPermutation` acts on the *right* of the orthonormal basis:
``e_i . s = sign[i] * e_{image[i]}`` and ``s * t`` means "first ``s``,
then ``t``".  Cycle notation writes a sign in front of each point:
``(-1 +2 -4)`` sends ``e_1 -> -e_2``, ``e_2 -> +e_4``, ``e_4 -> -e_1``.
One-line notation lists ``sign[i]*image[i]`` for ``i = 1..n``.

:func:`to_element` realizes ``s`` as the engine element ``v -> v . s^-1``,
which turns right-action products into the engine's left-action products,
so ``to_element(x * y) == to_element(x) * to_element(y)``.
"""

from __future__ import annotations

import itertools
import math
import re
from dataclasses import dataclass
from typing import Iterable, Sequence

from .coxeter import CoxeterSystem, Element, build_system

__all__ = [
    "SignedPermutation",
    "SignedCycleType",
    "CuspidalPartition",
    "to_element",
    "from_element",
    "cuspidal_min_length",
    "construct_min_cuspidal",
    "coxeter_bicolored",
    "bigxs",
    "symmetric_excess",
    "generator_perm",
    "signed_cycle_types",
]


@dataclass(frozen=True)
class SignedPermutation:
    image: tuple[int, ...]
    sign: tuple[int, ...]

    def __post_init__(self):
        n = len(self.image)
        if sorted(self.image) != list(range(1, n + 1)):
            raise ValueError(f"image {self.image} is not a permutation of 1..{n}")
        if len(self.sign) != n or any(s not in (1, -1) for s in self.sign):
            raise ValueError("signs must be +1/-1, one per point")

    @property
    def n(self) -> int:
        return len(self.image)

    @classmethod
    def identity(cls, n: int) -> "SignedPermutation":
        return cls(tuple(range(1, n + 1)), (1,) * n)

    @classmethod
    def from_cycles(cls, text: str | Sequence[Sequence[int]], n: int) -> "SignedPermutation":
        """Build from signed cycles, e.g. ``"(+1 +2)(-3)"`` or ``[[1, 2], [-3]]``.

        Unsigned points count as ``+``.
        """
        if isinstance(text, str):
            cycles = [
                [int(tok) for tok in body.split()]
                for body in re.findall(r"\(([^)]*)\)", text.replace(",", " "))
            ]
        else:
            cycles = [list(c) for c in text]
        image = list(range(1, n + 1))
        sign = [1] * n
        seen = set()
        for cyc in cycles:
            pts = [abs(p) for p in cyc]
            if any(p < 1 or p > n for p in pts) or seen & set(pts) or len(set(pts)) != len(pts):
                raise ValueError(f"bad cycle {cyc} for degree {n}")
            seen |= set(pts)
            for k, p in enumerate(cyc):
                nxt = abs(cyc[(k + 1) % len(cyc)])
                image[abs(p) - 1] = nxt
                sign[abs(p) - 1] = -1 if p < 0 else 1
        return cls(tuple(image), tuple(sign))

    @classmethod
    def parse(cls, text: str) -> "SignedPermutation":
        """One-line notation ``"±a1 ±a2 ... ±an"`` (cycle notation also accepted)."""
        text = text.strip()
        if text.startswith("("):
            pts = [abs(int(t)) for t in re.findall(r"[-+]?\d+", text)]
            return cls.from_cycles(text, max(pts) if pts else 0)
        vals = [int(t) for t in text.replace(",", " ").split()]
        return cls(tuple(abs(v) for v in vals), tuple(-1 if v < 0 else 1 for v in vals))

    def __mul__(self, other: "SignedPermutation") -> "SignedPermutation":
        if other.n != self.n:
            raise ValueError("degree mismatch")
        image, sign = [], []
        for i in range(self.n):
            j = self.image[i]
            image.append(other.image[j - 1])
            sign.append(self.sign[i] * other.sign[j - 1])
        return SignedPermutation(tuple(image), tuple(sign))

    def inverse(self) -> "SignedPermutation":
        image = [0] * self.n
        sign = [1] * self.n
        for i in range(self.n):
            j = self.image[i]
            image[j - 1] = i + 1
            sign[j - 1] = self.sign[i]
        return SignedPermutation(tuple(image), tuple(sign))

    def __pow__(self, k: int) -> "SignedPermutation":
        base = self if k >= 0 else self.inverse()
        out = SignedPermutation.identity(self.n)
        for _ in range(abs(k)):
            out = out * base
        return out

    def act(self, vector: Sequence[int]) -> tuple[int, ...]:
        """Right action on a coordinate vector ``sum v_i e_i``."""
        out = [0] * self.n
        for i, v in enumerate(vector):
            if v:
                out[self.image[i] - 1] += self.sign[i] * v
        return tuple(out)

    def cycles(self) -> list[list[int]]:
        """Signed cycles, each listed from its least point; singletons kept."""
        seen = set()
        out = []
        for start in range(1, self.n + 1):
            if start in seen:
                continue
            cyc = []
            p = start
            while p not in seen:
                seen.add(p)
                cyc.append(p * self.sign[p - 1])
                p = self.image[p - 1]
            out.append(cyc)
        return out

    def cycle_type(self) -> "SignedCycleType":
        return SignedCycleType.of(
            (len(c), "-" if sum(1 for p in c if p < 0) % 2 else "+") for c in self.cycles()
        )

    @property
    def is_positive(self) -> bool:
        """Even number of minus signs, i.e. an element of W(D_n)."""
        return self.sign.count(-1) % 2 == 0

    @property
    def is_unsigned(self) -> bool:
        return all(s == 1 for s in self.sign)

    def support(self) -> set[int]:
        return {i + 1 for i in range(self.n) if self.image[i] != i + 1 or self.sign[i] == -1}

    def squares_to_one(self) -> bool:
        return self * self == SignedPermutation.identity(self.n)

    def one_line(self) -> str:
        return " ".join(f"{'-' if s < 0 else '+'}{a}" for a, s in zip(self.image, self.sign))

    def cycle_string(self, signed: bool = True) -> str:
        parts = []
        for c in self.cycles():
            shown = len(c) > 1 or c[0] < 0
            if not shown:
                continue
            if signed:
                parts.append("(" + " ".join(f"{'-' if p < 0 else '+'}{abs(p)}" for p in c) + ")")
            else:
                parts.append("(" + " ".join(str(abs(p)) for p in c) + ")")
        return "".join(parts) or "()"

    # Sym(n) statistics for unsigned permutations
    def inversions(self) -> int:
        if not self.is_unsigned:
            raise ValueError("inversion count is only defined here for unsigned permutations")
        im = self.image
        return sum(1 for i in range(self.n) for j in range(i + 1, self.n) if im[i] > im[j])

    def reflection_length_sym(self) -> int:
        return self.n - len(self.cycles())

    def __str__(self):
        return self.cycle_string()


@dataclass(frozen=True)
class SignedCycleType:
    """Multiset of ``(cycle length, '+' or '-')``, sorted descending."""

    cycles: tuple[tuple[int, str], ...]

    @classmethod
    def of(cls, items: Iterable[tuple[int, str]]) -> "SignedCycleType":
        return cls(tuple(sorted(items, key=lambda c: (-c[0], c[1]))))

    @property
    def n(self) -> int:
        return sum(length for length, _ in self.cycles)

    @property
    def all_negative(self) -> bool:
        return all(s == "-" for _, s in self.cycles)

    @property
    def negative_count(self) -> int:
        return sum(1 for _, s in self.cycles if s == "-")

    @property
    def splits_in_d(self) -> bool:
        """All cycles even and positive: two classes in W(D_n)."""
        return all(s == "+" and length % 2 == 0 for length, s in self.cycles)

    def __str__(self):
        return " ".join(f"{length}{s}" for length, s in self.cycles)


def _partitions(n: int, max_part: int | None = None):
    max_part = n if max_part is None else max_part
    if n == 0:
        yield ()
        return
    for k in range(min(n, max_part), 0, -1):
        for rest in _partitions(n - k, k):
            yield (k,) + rest


def signed_cycle_types(n: int, family: str = "B") -> list[SignedCycleType]:
    """All signed cycle types of degree ``n`` (positive ones only for ``D``)."""
    out = []
    for k in range(n + 1):
        for pos in _partitions(k):
            for neg in _partitions(n - k):
                if family == "D" and len(neg) % 2:
                    continue
                out.append(SignedCycleType.of([(p, "+") for p in pos] + [(q, "-") for q in neg]))
    return out


# -- engine conversions --------------------------------------------------------


def _model(system: CoxeterSystem) -> tuple[str, int]:
    if not system.type.is_irreducible:
        raise ValueError("signed-permutation models exist for irreducible A, B, D only")
    family, p = system.type.components[0]
    if family == "A":
        return "A", p + 1
    if family in ("B", "D"):
        return family, p
    raise ValueError(f"{system.descriptor} has no signed-permutation model")


def _simple_e_vectors(family: str, n: int) -> list[tuple[int, ...]]:
    def e(*pairs):
        v = [0] * n
        for i, c in pairs:
            v[i - 1] += c
        return tuple(v)

    vecs = [e((i, 1), (i + 1, -1)) for i in range(1, n)]
    if family == "B":
        vecs.append(e((n, 1)))
    elif family == "D":
        vecs.append(e((n - 1, 1), (n, 1)))
    return vecs


class _RootModel:
    def __init__(self, system: CoxeterSystem):
        self.family, self.n = _model(system)
        simple = _simple_e_vectors(self.family, self.n)
        self.vectors = []
        for coords in system.roots:
            v = [0] * self.n
            for c, s in zip(coords, simple):
                ci = int(c.a)
                assert c.b == 0 and c.a == ci
                for k in range(self.n):
                    v[k] += ci * s[k]
            self.vectors.append(tuple(v))
        self.lookup = {v: i for i, v in enumerate(self.vectors)}
        self.npos = system.npos

    def code(self, v: tuple[int, ...]) -> int:
        if v in self.lookup:
            return self.lookup[v]
        return self.lookup[tuple(-x for x in v)] + self.npos

    def vector(self, code: int) -> tuple[int, ...]:
        if code < self.npos:
            return self.vectors[code]
        return tuple(-x for x in self.vectors[code - self.npos])


_MODELS: dict[str, _RootModel] = {}


def _root_model(system: CoxeterSystem) -> _RootModel:
    m = _MODELS.get(system.descriptor)
    if m is None:
        m = _MODELS[system.descriptor] = _RootModel(system)
    return m


def to_element(sp: SignedPermutation, system: CoxeterSystem) -> Element:
    """Engine element ``v -> v . sp^-1`` of an A/B/D system."""
    model = _root_model(system)
    if sp.n != model.n:
        raise ValueError(f"degree {sp.n} does not match {system.descriptor} (degree {model.n})")
    if model.family == "A" and not sp.is_unsigned:
        raise ValueError("type A elements carry no signs")
    if model.family == "D" and not sp.is_positive:
        raise ValueError("odd number of minus signs: not an element of W(D_n)")
    inv = sp.inverse()
    return Element(system, [model.code(inv.act(v)) for v in model.vectors])


def from_element(w: Element, system: CoxeterSystem | None = None) -> SignedPermutation:
    system = system or w.system
    model = _root_model(system)
    n = model.n
    image = [0] * n
    sign = [1] * n
    full = system.full(w.perm)
    for i in range(1, n + 1):
        # w(e_i) = e_i . sp^-1 = s e_a  <=>  e_a . sp = s e_i
        if model.family == "A":
            j = 1 if i != 1 else 2
            v = [0] * n
            v[i - 1], v[j - 1] = 1, -1
            img = model.vector(int(full[model.code(tuple(v))]))
            a = img.index(1) + 1
            s = 1
        else:
            j = 1 if i != 1 else 2
            if model.family == "B":
                v = [0] * n
                v[i - 1] = 1
                img = model.vector(int(full[model.code(tuple(v))]))
            else:
                u1 = [0] * n
                u2 = [0] * n
                u1[i - 1], u1[j - 1] = 1, -1
                u2[i - 1], u2[j - 1] = 1, 1
                a1 = model.vector(int(full[model.code(tuple(u1))]))
                a2 = model.vector(int(full[model.code(tuple(u2))]))
                img = tuple((x + y) // 2 for x, y in zip(a1, a2))
            a = next(k for k, x in enumerate(img) if x) + 1
            s = img[a - 1]
        image[a - 1] = i
        sign[a - 1] = s
    return SignedPermutation(tuple(image), tuple(sign))


def generator_perm(family: str, n: int, i: int) -> SignedPermutation:
    """Fundamental reflection ``r_i`` in the signed-permutation model."""
    if i < n:
        return SignedPermutation.from_cycles([[i, i + 1]], n)
    if family == "B":
        return SignedPermutation.from_cycles([[-n]], n)
    if family == "D":
        return SignedPermutation.from_cycles([[-(n - 1), -n]], n)
    raise ValueError("bad generator")


def _graph_automorphism_image(w: Element) -> Element:
    """Image of ``w`` under the D_n diagram automorphism swapping r_{n-1}, r_n."""
    family, p = w.system.type.components[0]
    if family != "D" or not w.system.type.is_irreducible:
        raise ValueError("the graph automorphism is only provided for D_n")
    swap = {p - 1: p, p: p - 1}
    return w.system.element([swap.get(i, i) for i in w.reduced_word()])


# -- cuspidal classes of B_n / D_n -------------------------------------------------


@dataclass(frozen=True)
class CuspidalPartition:
    """Non-increasing cycle lengths of a cuspidal class of W(B_n) / W(D_n)."""

    parts: tuple[int, ...]

    def __post_init__(self):
        if not self.parts or any(p < 1 for p in self.parts):
            raise ValueError(f"invalid partition {self.parts}")
        if list(self.parts) != sorted(self.parts, reverse=True):
            raise ValueError(f"partition {self.parts} is not non-increasing")

    @classmethod
    def parse(cls, text: str | Sequence[int]) -> "CuspidalPartition":
        if isinstance(text, str):
            text = [int(t) for t in re.split(r"[,\s]+", text.strip()) if t]
        return cls(tuple(text))

    @property
    def n(self) -> int:
        return sum(self.parts)

    @property
    def k(self) -> int:
        return len(self.parts)

    @property
    def nu(self) -> tuple[int, ...]:
        """Sum of the parts before each part."""
        return tuple(sum(self.parts[:i]) for i in range(self.k))

    @property
    def mu(self) -> tuple[int, ...]:
        """Sum of the parts after each part."""
        return tuple(sum(self.parts[i + 1 :]) for i in range(self.k))


def _check_family(lam: CuspidalPartition, family: str) -> None:
    if family not in ("B", "D"):
        raise ValueError(f"family must be B or D, got {family!r}")
    if family == "D" and lam.k % 2:
        raise ValueError(f"cuspidal classes of D_n need an even number of cycles, got {lam.parts}")
    if family == "D" and lam.n < 4:
        raise ValueError("D_n needs n >= 4")
    if family == "B" and lam.n < 2:
        raise ValueError("B_n needs n >= 2")


def cuspidal_min_length(lam: CuspidalPartition | Sequence[int], family: str) -> int:
    lam = lam if isinstance(lam, CuspidalPartition) else CuspidalPartition(tuple(lam))
    _check_family(lam, family)
    drop = 1 if family == "D" else 0
    return sum(l - drop + 2 * m for l, m in zip(lam.parts, lam.mu))


@dataclass(frozen=True)
class MinCuspidal:
    partition: CuspidalPartition
    family: str
    tau: SignedPermutation
    sigma: SignedPermutation

    @property
    def w(self) -> SignedPermutation:
        return self.tau * self.sigma


def construct_min_cuspidal(lam: CuspidalPartition | Sequence[int], family: str) -> MinCuspidal:
    """Involutions ``tau``, ``sigma`` with ``w = tau sigma`` minimal with zero excess."""
    lam = lam if isinstance(lam, CuspidalPartition) else CuspidalPartition(tuple(lam))
    _check_family(lam, family)
    tau_cycles: list[list[int]] = []
    sigma_cycles: list[list[int]] = []
    for l, v in zip(lam.parts, lam.nu):
        if l % 2:
            tau_cycles += [[v + a, v + a + 1] for a in range(1, l - 1, 2)]
            sigma_cycles += [[v + a, v + a + 1] for a in range(2, l, 2)]
        else:
            tau_cycles += [[v + a, v + a + 1] for a in range(2, l - 1, 2)]
            sigma_cycles += [[v + a, v + a + 1] for a in range(1, l, 2)]
        tau_cycles.append([-(v + l)])
    n = lam.n
    return MinCuspidal(
        lam,
        family,
        SignedPermutation.from_cycles(tau_cycles, n),
        SignedPermutation.from_cycles(sigma_cycles, n),
    )


def predicted_tau_sigma_lengths(lam: CuspidalPartition, family: str) -> tuple[int, int]:
    """Lengths of ``tau`` and ``sigma`` from the closed forms."""
    floor = sum((l - 1) // 2 for l in lam.parts)
    ceil = sum(-(-(l - 1) // 2) for l in lam.parts)
    tau = floor + 2 * sum(lam.mu) + (lam.k if family == "B" else 0)
    return tau, ceil


# -- Coxeter elements from a 2-colouring ---------------------------------------------


@dataclass(frozen=True)
class Bicolored:
    colour_classes: tuple[tuple[int, ...], tuple[int, ...]]
    x: Element
    y: Element

    @property
    def w(self) -> Element:
        return self.x * self.y


def coxeter_bicolored(system: CoxeterSystem) -> Bicolored:
    """``x``, ``y`` = products of the two colour classes of the Coxeter graph.

    Colouring is by BFS from the lowest-index node of each tree.
    """
    n = system.rank
    m = system.coxeter_matrix
    colour = [-1] * n
    for root in range(n):
        if colour[root] >= 0:
            continue
        colour[root] = 0
        queue = [root]
        while queue:
            u = queue.pop(0)
            for v in range(n):
                if v != u and m[u][v] >= 3:
                    if colour[v] < 0:
                        colour[v] = 1 - colour[u]
                        queue.append(v)
                    elif colour[v] == colour[u]:
                        raise AssertionError("Coxeter graph of a finite group is a forest")
    r1 = tuple(i + 1 for i in range(n) if colour[i] == 0)
    r2 = tuple(i + 1 for i in range(n) if colour[i] == 1)
    return Bicolored((r1, r2), system.element(r1), system.element(r2))


# -- zero excess, large reflection excess in Sym(4k) ------------------------------------


@dataclass(frozen=True)
class BigXS:
    k: int
    n: int
    w1: SignedPermutation
    w2: SignedPermutation
    x: SignedPermutation
    y: SignedPermutation
    degenerate: bool

    @property
    def w(self) -> SignedPermutation:
        return self.w1 * self.w2

    @property
    def bound(self) -> int:
        return 4 * (self.k - 1) ** 2


def bigxs(k: int, n: int | None = None) -> BigXS:
    """The pair ``w = w1 w2`` in Sym(n) with ``e(w) = 0``, ``E(w) >= 4(k-1)^2``.

    For ``k = 1`` the displayed ``x`` is not well defined; the degenerate
    pair ``w = (1 3)(2 4)`` with ``x = w``, ``y = 1`` is returned and flagged.
    """
    if k < 1:
        raise ValueError("k must be positive")
    n = 4 * k if n is None else n
    if n < 4 * k:
        raise ValueError("need 4k <= n")
    c1 = [1] + list(range(4, 4 * k - 1, 2)) + [4 * k - 1]
    c2 = [2, 4 * k] + list(range(4 * k - 3, 2, -2))
    w1 = SignedPermutation.from_cycles([c1], n)
    w2 = SignedPermutation.from_cycles([c2], n)
    if k == 1:
        return BigXS(k, n, w1, w2, w1 * w2, SignedPermutation.identity(n), True)
    xc = [[1, 3], [2, 4 * k - 1]] + [[2 * j, 2 * j + 1] for j in range(2, 2 * k - 1)] + [[4 * k - 2, 4 * k]]
    yc = [[2 * j - 1, 2 * j] for j in range(1, 2 * k + 1)]
    return BigXS(k, n, w1, w2, SignedPermutation.from_cycles(xc, n), SignedPermutation.from_cycles(yc, n), False)


def _sym_centralizer(w: SignedPermutation) -> list[SignedPermutation]:
    """All permutations commuting with an unsigned ``w`` (cycle-structure product)."""
    n = w.n
    by_len: dict[int, list[list[int]]] = {}
    for c in w.cycles():
        by_len.setdefault(len(c), []).append([abs(p) for p in c])
    factors = []
    for length, cycs in sorted(by_len.items()):
        options = []
        for perm in itertools.permutations(range(len(cycs))):
            for shifts in itertools.product(range(length), repeat=len(cycs)):
                mapping = {}
                for j, cyc in enumerate(cycs):
                    tgt = cycs[perm[j]]
                    for t, p in enumerate(cyc):
                        mapping[p] = tgt[(t + shifts[j]) % length]
                options.append(mapping)
        factors.append(options)
    out = []
    for combo in itertools.product(*factors):
        image = [0] * n
        for mapping in combo:
            for p, q in mapping.items():
                image[p - 1] = q
        out.append(SignedPermutation(tuple(image), (1,) * n))
    return out


def _sym_reverser(w: SignedPermutation) -> SignedPermutation:
    image = list(range(1, w.n + 1))
    for c in w.cycles():
        c = [abs(p) for p in c]
        for t, p in enumerate(c):
            image[p - 1] = c[-t % len(c)]
    return SignedPermutation(tuple(image), (1,) * w.n)


@dataclass(frozen=True)
class SymExcess:
    e: int
    E: int
    plain: tuple[SignedPermutation, SignedPermutation]
    reflective: tuple[SignedPermutation, SignedPermutation]
    reverser_involutions: int
    centralizer_order: int


def symmetric_excess(w: SignedPermutation, centralizer_budget: int = 10**6) -> SymExcess:
    """Exact ``e`` and ``E`` of a permutation in Sym(n) without enumerating Sym(n).

    ``I_w`` is the coset ``C(w) g`` of the centralizer, ``g`` any reverser.
    """
    if not w.is_unsigned:
        raise ValueError("symmetric_excess takes an unsigned permutation")
    # |C(w)| = prod l^{m_l} m_l!
    counts: dict[int, int] = {}
    for c in w.cycles():
        counts[len(c)] = counts.get(len(c), 0) + 1
    order = math.prod(l**m * math.factorial(m) for l, m in counts.items())
    if order > centralizer_budget:
        from .errors import BudgetExceeded

        raise BudgetExceeded(f"centralizer of order {order} exceeds {centralizer_budget}")
    cent = _sym_centralizer(w)
    assert len(cent) == order
    g = _sym_reverser(w)
    ell = w.inversions()
    L = w.reflection_length_sym()
    ident = SignedPermutation.identity(w.n)
    best = best_r = None
    count = 0
    for c in cent:
        x = c * g
        if x * x != ident:
            continue
        count += 1
        y = x * w
        s = x.inversions() + y.inversions()
        key = (s, x.image)
        if best is None or key < best[0]:
            best = (key, x, y)
        if x.reflection_length_sym() + y.reflection_length_sym() == L:
            if best_r is None or key < best_r[0]:
                best_r = (key, x, y)
    return SymExcess(
        best[0][0] - ell, best_r[0][0] - ell, best[1:], best_r[1:], count, order
    )


def type_a_system(n_points: int) -> CoxeterSystem:
    return build_system(f"A{n_points - 1}")
