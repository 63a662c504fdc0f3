"""Hot sparse kernels: CSR matvec and ILU(0) in natural ordering.

All kernels run under numba when enabled (DFMSIM_NUMBA) and as plain numpy
Python otherwise, from the same source.
"""

import numpy as np

from .._accel import maybe_njit


@maybe_njit(cache=True)
def csr_matvec(indptr, indices, data, x, out):
    n = len(indptr) - 1
    for i in range(n):
        s = 0.0
        for pos in range(indptr[i], indptr[i + 1]):
            s += data[pos] * x[indices[pos]]
        out[i] = s
    return out


@maybe_njit(cache=True)
def find_diagonal(indptr, indices, diag):
    """Position of each diagonal entry; returns first row lacking one, or -1."""
    n = len(indptr) - 1
    for i in range(n):
        diag[i] = -1
        lo, hi = indptr[i], indptr[i + 1]
        while lo < hi:
            mid = (lo + hi) // 2
            if indices[mid] < i:
                lo = mid + 1
            elif indices[mid] > i:
                hi = mid
            else:
                diag[i] = mid
                break
        if diag[i] < 0:
            return i
    return -1


@maybe_njit(cache=True)
def ilu0_factor(indptr, indices, data, diag):
    """In-place ILU(0), columns sorted, natural ordering.

    On return data holds L (unit diagonal, strictly lower part) and U
    (including diagonal). Returns the row of a vanishing pivot, or -1.
    """
    n = len(indptr) - 1
    for i in range(n):
        for pos_k in range(indptr[i], indptr[i + 1]):
            k = indices[pos_k]
            if k >= i:
                break
            piv = data[diag[k]]
            if abs(piv) < 1e-300:
                return k
            lik = data[pos_k] / piv
            data[pos_k] = lik
            for pos_j in range(diag[k] + 1, indptr[k + 1]):
                j = indices[pos_j]
                # locate column j in the remainder of row i
                lo, hi = pos_k + 1, indptr[i + 1]
                while lo < hi:
                    mid = (lo + hi) // 2
                    if indices[mid] < j:
                        lo = mid + 1
                    elif indices[mid] > j:
                        hi = mid
                    else:
                        data[mid] -= lik * data[pos_j]
                        break
        if abs(data[diag[i]]) < 1e-300:
            return i
    return -1


@maybe_njit(cache=True)
def ilu0_solve(indptr, indices, data, diag, b, y):
    """y = U^-1 L^-1 b for an ILU(0) factor stored in CSR."""
    n = len(indptr) - 1
    for i in range(n):
        s = b[i]
        for pos in range(indptr[i], diag[i]):
            s -= data[pos] * y[indices[pos]]
        y[i] = s
    for i in range(n - 1, -1, -1):
        s = y[i]
        for pos in range(diag[i] + 1, indptr[i + 1]):
            s -= data[pos] * y[indices[pos]]
        y[i] = s / data[diag[i]]
    return y
