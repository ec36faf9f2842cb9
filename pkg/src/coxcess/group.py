"""Full enumeration of a finite Coxeter group into an indexed table.

Elements are numbered in canonical order: by length, then
lexicographically by their signed-permutation arrays.  Index 0 is the
identity.  All bulk operations take and return numpy index arrays.
"""

from __future__ import annotations

import logging

import numpy as np

from .coxeter import CoxeterSystem, Element
from .errors import BudgetExceeded, ConsistencyError

log = logging.getLogger(__name__)

DEFAULT_BUDGET = 10**6
EXTENDED_BUDGET = 4 * 10**6

#: rows per slice for whole-table sweeps (bounds temporary memory)
CHUNK = 1 << 18


class GroupTable:
    """Every element of ``system`` as rows of a ``(|W|, N)`` code array."""

    def __init__(self, system: CoxeterSystem, budget: int = DEFAULT_BUDGET, elems: np.ndarray | None = None):
        if system.group_order > budget:
            raise BudgetExceeded(
                f"|W({system.descriptor})| = {system.group_order} exceeds the element budget {budget}"
            )
        if not system._key_fits:
            raise BudgetExceeded(f"{system.descriptor} is too large to index")
        self.system = system
        self.n = system.rank
        self.npos = system.npos
        self.elems = self._enumerate() if elems is None else elems
        if len(self.elems) != system.group_order:
            raise ConsistencyError(
                f"enumerated {len(self.elems)} elements of {system.descriptor}, expected {system.group_order}"
            )
        self.elems.setflags(write=False)
        self.keys = system.key(self.elems)
        self._order = np.argsort(self.keys, kind="stable")
        self._sorted = self.keys[self._order]
        self.lengths = np.count_nonzero(self.elems >= self.npos, axis=1).astype(np.int16)

    def __len__(self):
        return len(self.elems)

    def _enumerate(self) -> np.ndarray:
        s = self.system
        n, npos = self.n, self.npos
        tables = s.reflection_tables
        layer = np.arange(npos, dtype=s.dtype)[None, :]
        layers = [layer]
        while True:
            full = np.concatenate([layer, s.neg[layer]], axis=1)
            keys, src, gens = [], [], []
            for g in range(n):
                up = np.nonzero(layer[:, g] < npos)[0]
                if up.size == 0:
                    continue
                simple_cols = full[np.ix_(up, tables[g][:n])]
                keys.append(s.key(simple_cols))
                src.append(up)
                gens.append(np.full(up.size, g))
            if not keys:
                break
            keys = np.concatenate(keys)
            src = np.concatenate(src)
            gens = np.concatenate(gens)
            _, first = np.unique(keys, return_index=True)
            nxt = np.empty((first.size, npos), dtype=s.dtype)
            for g in range(n):
                sel = first[gens[first] == g]
                pos = np.nonzero(gens[first] == g)[0]
                if sel.size:
                    nxt[pos] = full[src[sel]][:, tables[g]]
            layer = nxt
            layers.append(layer)
            if sum(len(x) for x in layers) > self.system.group_order:
                raise ConsistencyError("enumeration overshot the group order")
        log.debug("enumerated %s: %d layers", s.descriptor, len(layers))
        return np.concatenate(layers)

    # -- lookups -------------------------------------------------------------

    def index_of_keys(self, keys) -> np.ndarray:
        keys = np.asarray(keys, dtype=np.int64)
        pos = np.searchsorted(self._sorted, keys)
        pos = np.minimum(pos, len(self._sorted) - 1)
        if not np.all(self._sorted[pos] == keys):
            raise ConsistencyError("product fell outside the enumerated group")
        return self._order[pos]

    def index(self, w: Element) -> int:
        return int(self.index_of_keys(self.system.key(w.perm[None, :]))[0])

    def element(self, i: int) -> Element:
        return Element(self.system, self.elems[int(i)])

    # -- bulk arithmetic ---------------------------------------------------------

    def full(self, idx) -> np.ndarray:
        rows = self.elems[idx]
        return np.concatenate([rows, self.system.neg[rows]], axis=-1)

    def mul(self, a, b) -> np.ndarray:
        """Indices of ``a_i * b_i`` (broadcasting scalars)."""
        a = np.atleast_1d(np.asarray(a, dtype=np.int64))
        b = np.atleast_1d(np.asarray(b, dtype=np.int64))
        a, b = np.broadcast_arrays(a, b)
        if a.size == 0:
            return np.empty(0, dtype=np.int64)
        fa = self.full(a)
        cols = self.elems[b][:, : self.n].astype(np.int64)
        simple = np.take_along_axis(fa, cols, axis=1)
        return self.index_of_keys(self.system.key(simple))

    def mul_generator(self, a, g: int) -> np.ndarray:
        """Indices of ``a_i * r_g`` (0-based generator)."""
        a = np.atleast_1d(np.asarray(a, dtype=np.int64))
        fa = self.full(a)
        tab = self.system.reflection_tables[g][: self.n]
        return self.index_of_keys(self.system.key(fa[:, tab]))

    def _sweep(self, fn, dtype) -> np.ndarray:
        out = np.empty(len(self.elems), dtype=dtype)
        for lo in range(0, len(self.elems), CHUNK):
            out[lo : lo + CHUNK] = fn(self.elems[lo : lo + CHUNK])
        return out

    @property
    def inverse(self) -> np.ndarray:
        if not hasattr(self, "_inverse"):
            s = self.system
            self._inverse = self._sweep(lambda rows: self.index_of_keys(s.key(s.inverse_perm(rows))), np.int64)
        return self._inverse

    @property
    def squares_to_one(self) -> np.ndarray:
        """Boolean mask of ``x^2 = 1`` (identity included)."""
        if not hasattr(self, "_sq1"):
            neg, n = self.system.neg, self.n

            def sq1(rows):
                full = np.concatenate([rows, neg[rows]], axis=1)
                sq = np.take_along_axis(full, rows[:, :n].astype(np.intp), axis=1)
                return np.all(sq == np.arange(n), axis=1)

            self._sq1 = self._sweep(sq1, bool)
        return self._sq1

    def conjugation_by_generator(self, g: int) -> np.ndarray:
        """Permutation ``i -> index(r_g w_i r_g)`` of the whole group."""
        s = self.system
        tab = s.reflection_tables[g]
        tab_full = np.concatenate([tab, s.neg[tab]])

        def conj(rows):
            # (r w r)(alpha_j) = r(w(r(alpha_j)))
            full = np.concatenate([rows, s.neg[rows]], axis=1)
            return self.index_of_keys(s.key(tab_full[full[:, tab[: self.n]]]))

        return self._sweep(conj, np.int64)

    def centralizer_mask(self, w: int) -> np.ndarray:
        """Boolean mask of the ``h`` with ``h w = w h``."""
        s = self.system
        rep = self.elems[w]
        rep_full = np.concatenate([rep, s.neg[rep]])
        cols = rep[: self.n].astype(np.intp)
        lo_cols = cols % self.npos
        negate = cols >= self.npos

        def cent(rows):
            hw = rows[:, lo_cols]
            hw = np.where(negate, s.neg[hw], hw)
            wh = rep_full[rows[:, : self.n]]
            return np.all(hw == wh, axis=1)

        return self._sweep(cent, bool)
