"""Compressed-row sparse system with right-hand side and dof map."""

from __future__ import annotations

import numpy as np

from .kernels import csr_matvec


class SparseSystem:
    """Square CSR matrix + rhs. Column indices sorted and unique per row."""

    def __init__(self, indptr, indices, data, rhs, dof_map=None, validate=True):
        self.indptr = np.asarray(indptr, dtype=np.int64)
        self.indices = np.asarray(indices, dtype=np.int64)
        self.data = np.asarray(data, dtype=np.float64)
        self.rhs = np.asarray(rhs, dtype=np.float64)
        self.dof_map = dof_map
        if validate:
            self._validate()

    def _validate(self):
        n = self.n
        if len(self.rhs) != n:
            raise ValueError(f"rhs length {len(self.rhs)} != {n} rows")
        if len(self.indices) != len(self.data) or self.indptr[-1] != len(self.data):
            raise ValueError("inconsistent CSR arrays")
        if len(self.indices) and (
            self.indices.min() < 0 or self.indices.max() >= n
        ):
            raise ValueError("column index out of range (matrix must be square)")
        for i in range(n):
            cols = self.indices[self.indptr[i] : self.indptr[i + 1]]
            if len(cols) > 1 and not (np.diff(cols) > 0).all():
                raise ValueError(f"row {i}: columns not sorted/unique")
        if self.dof_map is not None and self.dof_map.n_dofs != n:
            raise ValueError("dof map size does not match matrix")

    @property
    def n(self):
        return len(self.indptr) - 1

    @property
    def nnz(self):
        return len(self.data)

    @classmethod
    def from_triplets(cls, n, rows, cols, vals, rhs=None, dof_map=None):
        """Build CSR from COO triplets, summing duplicates."""
        rows = np.asarray(rows, dtype=np.int64)
        cols = np.asarray(cols, dtype=np.int64)
        vals = np.asarray(vals, dtype=np.float64)
        order = np.lexsort((cols, rows))
        rows, cols, vals = rows[order], cols[order], vals[order]
        if len(rows):
            new_group = np.empty(len(rows), dtype=bool)
            new_group[0] = True
            new_group[1:] = (np.diff(rows) != 0) | (np.diff(cols) != 0)
            starts = np.flatnonzero(new_group)
            vals = np.add.reduceat(vals, starts)
            rows, cols = rows[starts], cols[starts]
        indptr = np.zeros(n + 1, dtype=np.int64)
        np.add.at(indptr, rows + 1, 1)
        indptr = np.cumsum(indptr)
        rhs = np.zeros(n) if rhs is None else np.asarray(rhs, dtype=np.float64)
        return cls(indptr, cols, vals, rhs, dof_map=dof_map)

    def matvec(self, x):
        out = np.empty(self.n)
        csr_matvec(self.indptr, self.indices, self.data, np.asarray(x, dtype=float), out)
        return out

    def residual(self, x):
        """Relative residual ||Ax - b|| / ||b|| (absolute when b = 0)."""
        r = np.linalg.norm(self.matvec(x) - self.rhs)
        nb = np.linalg.norm(self.rhs)
        return r / nb if nb > 0 else r

    def diagonal(self):
        d = np.zeros(self.n)
        for i in range(self.n):
            sl = slice(self.indptr[i], self.indptr[i + 1])
            hit = np.flatnonzero(self.indices[sl] == i)
            if hit.size:
                d[i] = self.data[sl][hit[0]]
        return d

    def is_symmetric(self, rtol=1e-12):
        at = self.transpose()
        if not (
            np.array_equal(self.indptr, at.indptr)
            and np.array_equal(self.indices, at.indices)
        ):
            return False
        scale = np.abs(self.data).max() if self.nnz else 1.0
        return bool(np.allclose(self.data, at.data, atol=rtol * max(scale, 1e-300), rtol=0))

    def transpose(self):
        rows = np.repeat(np.arange(self.n), np.diff(self.indptr))
        return SparseSystem.from_triplets(
            self.n, self.indices, rows, self.data, rhs=self.rhs
        )

    def toarray(self):
        a = np.zeros((self.n, self.n))
        for i in range(self.n):
            sl = slice(self.indptr[i], self.indptr[i + 1])
            a[i, self.indices[sl]] = self.data[sl]
        return a

    def __repr__(self):
        return f"SparseSystem(n={self.n}, nnz={self.nnz})"
