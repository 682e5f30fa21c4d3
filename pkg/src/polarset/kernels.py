"""Hot scans over field-encoded matrices.

Two interchangeable backends share one contract:

* ``numba`` -- ``@njit`` loops with early exit over dense add/mul tables
  (default when numba imports; fields above ``DENSE_MAX`` fall back to numpy).
* ``numpy`` -- chunked vectorised table lookups.

Set ``POLARSET_NUMBA=0`` before import to force the numpy path.  Both backends
are importable directly as :data:`NUMPY_BACKEND` / :data:`NUMBA_BACKEND` for
testing and benchmarking.

Conventions: ``A`` holds rows already multiplied by a Gram matrix, ``C`` holds
the (conjugated) rows of the second argument, so ``A[i] . C[j]`` is the form
value.  Pair scans look at ``i < j`` only; every form here is reflexive.
"""

from __future__ import annotations

import os

import numpy as np

_CHUNK = 1 << 20  # entries per numpy block


def _tables(F):
    return F.p, F.exp, F.log, F.zech, F.qm1


class NumpyBackend:
    name = "numpy"

    @staticmethod
    def matmul(F, A, B):
        A = np.asarray(A, dtype=np.int64)
        B = np.asarray(B, dtype=np.int64)
        out = np.zeros((A.shape[0], B.shape[1]), dtype=np.int64)
        for t in range(A.shape[1]):
            out = F.add(out, F.mul(A[:, t, None], B[None, t, :]))
        return out

    @classmethod
    def _blocks(cls, n_rows, n_cols):
        step = max(1, _CHUNK // max(1, n_cols))
        for start in range(0, n_rows, step):
            yield start, min(n_rows, start + step)

    @classmethod
    def pair_zero_scan(cls, F, A, C):
        n = A.shape[0]
        for lo, hi in cls._blocks(n, n):
            H = cls.matmul(F, A[lo:hi], C.T)
            rows, cols = np.nonzero(H == 0)
            keep = cols > rows + lo
            if np.any(keep):
                r, c = rows[keep], cols[keep]
                first = np.lexsort((c, r))[0]
                return int(r[first] + lo), int(c[first])
        return -1, -1

    @classmethod
    def cover_scan(cls, F, A, C):
        out = np.full(A.shape[0], -1, dtype=np.int64)
        for lo, hi in cls._blocks(A.shape[0], C.shape[0]):
            H = cls.matmul(F, A[lo:hi], C.T) == 0
            has = H.any(axis=1)
            out[lo:hi][has] = H[has].argmax(axis=1)
        return out

    @classmethod
    def _det_zero(cls, F, H, d_rows, d_cols, norm_exp):
        lhs = F.mul(d_rows[:, None], d_cols[None, :])
        return lhs == F.pow(H, norm_exp)

    @classmethod
    def tangent_pair_scan(cls, F, A, C, d, norm_exp):
        n = A.shape[0]
        for lo, hi in cls._blocks(n, n):
            H = cls.matmul(F, A[lo:hi], C.T)
            Z = cls._det_zero(F, H, d[lo:hi], d, norm_exp)
            rows, cols = np.nonzero(Z)
            keep = cols > rows + lo
            if np.any(keep):
                r, c = rows[keep], cols[keep]
                first = np.lexsort((c, r))[0]
                return int(r[first] + lo), int(c[first])
        return -1, -1

    @classmethod
    def tangent_cover_scan(cls, F, A, d_rows, C, d_cols, norm_exp):
        out = np.full(A.shape[0], -1, dtype=np.int64)
        for lo, hi in cls._blocks(A.shape[0], C.shape[0]):
            H = cls.matmul(F, A[lo:hi], C.T)
            Z = cls._det_zero(F, H, d_rows[lo:hi], d_cols, norm_exp)
            has = Z.any(axis=1)
            out[lo:hi][has] = Z[has].argmax(axis=1)
        return out


NUMPY_BACKEND = NumpyBackend()
NUMBA_BACKEND = None

# Fields up to this order get dense q x q addition and multiplication tables in
# the numba kernels (4 MB each at the limit); larger fields use the numpy path.
DENSE_MAX = 1024
_DENSE = {}


def _dense_tables(F):
    key = (F.p, F.k, tuple(F.modulus))
    if key not in _DENSE:
        e = F.elements()
        add = np.ascontiguousarray(F.add(e[:, None], e[None, :]), dtype=np.int32)
        mul = np.ascontiguousarray(F.mul(e[:, None], e[None, :]), dtype=np.int32)
        _DENSE[key] = (add, mul, F.exp, F.log, F.qm1)
    return _DENSE[key]


try:  # pragma: no cover - exercised when numba is present
    import numba as nb

    njit = nb.njit(cache=True, nogil=True)

    @nb.njit(inline="always")
    def _dot(A, i, C, j, add, mul):
        acc = 0
        for t in range(A.shape[1]):
            acc = add[acc, mul[A[i, t], C[j, t]]]
        return acc

    @nb.njit(inline="always")
    def _fpow(a, e, exp, log, qm1):
        if a == 0:
            return 0
        return exp[(log[a] * e) % qm1]

    @njit
    def _nb_matmul(A, B, add, mul):
        n, m = A.shape[0], B.shape[1]
        out = np.zeros((n, m), dtype=np.int64)
        for i in range(n):
            for j in range(m):
                acc = 0
                for t in range(A.shape[1]):
                    acc = add[acc, mul[A[i, t], B[t, j]]]
                out[i, j] = acc
        return out

    @njit
    def _nb_pair_zero_scan(A, C, add, mul):
        n = A.shape[0]
        for i in range(n):
            for j in range(i + 1, n):
                if _dot(A, i, C, j, add, mul) == 0:
                    return i, j
        return -1, -1

    @njit
    def _nb_cover_scan(A, C, add, mul):
        out = np.full(A.shape[0], -1, dtype=np.int64)
        for i in range(A.shape[0]):
            for j in range(C.shape[0]):
                if _dot(A, i, C, j, add, mul) == 0:
                    out[i] = j
                    break
        return out

    @njit
    def _nb_tangent_pair_scan(A, C, d, norm_exp, add, mul, exp, log, qm1):
        n = A.shape[0]
        for i in range(n):
            for j in range(i + 1, n):
                h = _dot(A, i, C, j, add, mul)
                if mul[d[i], d[j]] == _fpow(h, norm_exp, exp, log, qm1):
                    return i, j
        return -1, -1

    @njit
    def _nb_tangent_cover_scan(A, d_rows, C, d_cols, norm_exp, add, mul, exp, log, qm1):
        out = np.full(A.shape[0], -1, dtype=np.int64)
        for i in range(A.shape[0]):
            for j in range(C.shape[0]):
                h = _dot(A, i, C, j, add, mul)
                if mul[d_rows[i], d_cols[j]] == _fpow(h, norm_exp, exp, log, qm1):
                    out[i] = j
                    break
        return out

    def _c(a):
        return np.ascontiguousarray(a, dtype=np.int64)

    class NumbaBackend:
        name = "numba"

        @staticmethod
        def matmul(F, A, B):
            if F.q > DENSE_MAX:
                return NUMPY_BACKEND.matmul(F, A, B)
            add, mul, *_ = _dense_tables(F)
            return _nb_matmul(_c(A), _c(B), add, mul)

        @staticmethod
        def pair_zero_scan(F, A, C):
            if F.q > DENSE_MAX:
                return NUMPY_BACKEND.pair_zero_scan(F, A, C)
            add, mul, *_ = _dense_tables(F)
            i, j = _nb_pair_zero_scan(_c(A), _c(C), add, mul)
            return int(i), int(j)

        @staticmethod
        def cover_scan(F, A, C):
            if F.q > DENSE_MAX:
                return NUMPY_BACKEND.cover_scan(F, A, C)
            add, mul, *_ = _dense_tables(F)
            return _nb_cover_scan(_c(A), _c(C), add, mul)

        @staticmethod
        def tangent_pair_scan(F, A, C, d, norm_exp):
            if F.q > DENSE_MAX:
                return NUMPY_BACKEND.tangent_pair_scan(F, A, C, d, norm_exp)
            i, j = _nb_tangent_pair_scan(_c(A), _c(C), _c(d), int(norm_exp), *_dense_tables(F))
            return int(i), int(j)

        @staticmethod
        def tangent_cover_scan(F, A, d_rows, C, d_cols, norm_exp):
            if F.q > DENSE_MAX:
                return NUMPY_BACKEND.tangent_cover_scan(F, A, d_rows, C, d_cols, norm_exp)
            return _nb_tangent_cover_scan(
                _c(A), _c(d_rows), _c(C), _c(d_cols), int(norm_exp), *_dense_tables(F)
            )

    NUMBA_BACKEND = NumbaBackend()
except ImportError:  # pragma: no cover
    pass


def _select():
    flag = os.environ.get("POLARSET_NUMBA", "1").strip().lower()
    if flag in ("0", "false", "no", "off") or NUMBA_BACKEND is None:
        return NUMPY_BACKEND
    return NUMBA_BACKEND


backend = _select()


def set_threads(n):
    """Thread hint for data-parallel scans; results never depend on it."""
    if n and NUMBA_BACKEND is not None:
        import numba

        numba.set_num_threads(min(int(n), numba.config.NUMBA_NUM_THREADS))


def matmul(F, A, B):
    return backend.matmul(F, A, B)


def pair_zero_scan(F, A, C):
    return backend.pair_zero_scan(F, A, C)


def cover_scan(F, A, C):
    return backend.cover_scan(F, A, C)


def tangent_pair_scan(F, A, C, d, norm_exp):
    return backend.tangent_pair_scan(F, A, C, d, norm_exp)


def tangent_cover_scan(F, A, d_rows, C, d_cols, norm_exp):
    return backend.tangent_cover_scan(F, A, d_rows, C, d_cols, norm_exp)
