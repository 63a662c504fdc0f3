"""Degree-of-freedom bookkeeping: (block key, entry, component) <-> row."""

from __future__ import annotations

import numpy as np


class DofMap:
    """Bijection between (key, entry, component) triples and row indices.

    Blocks are laid out in insertion order; within a block, rows are ordered
    entry-major (all components of entry 0, then entry 1, ...). Keys are
    arbitrary hashables, typically grids in canonical mixed-dim order.
    """

    def __init__(self, blocks):
        """blocks: iterable of (key, n_entries, n_components)."""
        self._offset: dict = {}
        self._shape: dict = {}
        self._order: list = []
        n = 0
        for key, n_entries, n_comp in blocks:
            if key in self._offset:
                raise ValueError(f"duplicate dof block key: {key!r}")
            if n_entries < 0 or n_comp < 1:
                raise ValueError(f"bad block shape ({n_entries}, {n_comp})")
            self._offset[key] = n
            self._shape[key] = (int(n_entries), int(n_comp))
            self._order.append(key)
            n += int(n_entries) * int(n_comp)
        self.n_dofs = n

    def keys(self):
        return list(self._order)

    def block_size(self, key):
        n_entries, n_comp = self._shape[key]
        return n_entries * n_comp

    def dof(self, key, entry, comp=0):
        n_entries, n_comp = self._shape[key]
        if not (0 <= entry < n_entries and 0 <= comp < n_comp):
            raise IndexError(f"dof ({key!r}, {entry}, {comp}) out of range")
        return self._offset[key] + entry * n_comp + comp

    def block(self, key):
        """All rows of a block as a slice."""
        off = self._offset[key]
        return slice(off, off + self.block_size(key))

    def block_array(self, key, vector):
        """View of vector restricted to the block, shaped (entries, comps)."""
        n_entries, n_comp = self._shape[key]
        sub = np.asarray(vector)[self.block(key)]
        return sub.reshape(n_entries, n_comp) if n_comp > 1 else sub

    def locate(self, row):
        """Inverse lookup: row index -> (key, entry, comp)."""
        if not 0 <= row < self.n_dofs:
            raise IndexError(f"row {row} out of range")
        for key in self._order:
            off = self._offset[key]
            n_entries, n_comp = self._shape[key]
            if row < off + n_entries * n_comp:
                local = row - off
                return key, local // n_comp, local % n_comp
        raise IndexError(f"row {row} not covered")  # pragma: no cover

    def __len__(self):
        return self.n_dofs

    def __repr__(self):
        return f"DofMap({len(self._order)} blocks, {self.n_dofs} dofs)"
