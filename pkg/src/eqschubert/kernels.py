"""Inner loops of the dense engine.

Each kernel exists twice: a numba ``@njit`` version and a plain numpy
version.  ``EQSCHUBERT_NUMBA=0`` in the environment (or numba being absent)
selects the numpy versions at import time.  Both operate on int64 arrays and
refuse to run when a coefficient could leave the guarded range, returning
``OVERFLOW`` so the caller can redo the work with Python integers.
"""

from __future__ import annotations

import os

import numpy as np

OK = 0
OVERFLOW = 1
NOT_DIVISIBLE = 2

# every intermediate value stays strictly below this in absolute value
LIMIT = float(2**62)


def _env_wants_numba() -> bool:
    return os.environ.get("EQSCHUBERT_NUMBA", "1").strip().lower() not in ("0", "false", "no", "off")


try:
    import numba

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover
    HAVE_NUMBA = False


# numpy implementations


def np_mul_acc(out, a, b, table, sign, limit):
    """out[table[i, j]] += sign * a[i] * b[j]."""
    bound = np.abs(a.astype(np.float64)).sum() * np.abs(b.astype(np.float64)).max(initial=0.0)
    bound += np.abs(out.astype(np.float64)).max(initial=0.0)
    if bound >= limit:
        return OVERFLOW
    np.add.at(out, table, np.outer(a * sign, b))
    return OK


def np_div_linear(p, q, levels, rem_p, rem_q, limit):
    """Exact quotient of p by (t_a - t_b) into q (length N+1, last slot a
    zero sentinel).  ``levels`` holds (q_idx, p_idx, shift_idx) triples in
    decreasing exponent of t_a."""
    if np.abs(p.astype(np.float64)).sum() >= limit:
        return OVERFLOW
    for qi, pi, si in levels:
        q[qi] = p[pi] + q[si]
    if np.any(p[rem_p] + q[rem_q]):
        return NOT_DIVISIBLE
    return OK


def np_matvec(m, m_absmax, vec, out, limit):
    if m_absmax * np.abs(vec.astype(np.float64)).sum() >= limit:
        return OVERFLOW
    np.matmul(m, vec, out=out)
    return OK


def np_bruhat_matrix(ranks):
    """leq[i, j] = all(ranks[i] >= ranks[j])."""
    n = ranks.shape[0]
    flat = ranks.reshape(n, -1)
    return (flat[:, None, :] >= flat[None, :, :]).all(axis=2)


# numba implementations

if HAVE_NUMBA:

    @numba.njit(cache=True)
    def nb_mul_acc(out, a, b, table, sign, limit):
        s = 0.0
        for i in range(a.size):
            s += abs(float(a[i]))
        mb = 0.0
        for j in range(b.size):
            v = abs(float(b[j]))
            if v > mb:
                mb = v
        mo = 0.0
        for k in range(out.size):
            v = abs(float(out[k]))
            if v > mo:
                mo = v
        if s * mb + mo >= limit:
            return OVERFLOW
        for i in range(a.size):
            ai = a[i]
            if ai == 0:
                continue
            ai = ai * sign
            for j in range(b.size):
                bj = b[j]
                if bj != 0:
                    out[table[i, j]] += ai * bj
        return OK

    @numba.njit(cache=True)
    def nb_div_linear(p, q, q_idx, p_idx, shift, rem_p, rem_q, limit):
        s = 0.0
        for k in range(p.size):
            s += abs(float(p[k]))
        if s >= limit:
            return OVERFLOW
        for k in range(q_idx.size):
            q[q_idx[k]] = p[p_idx[k]] + q[shift[k]]
        for k in range(rem_p.size):
            if p[rem_p[k]] + q[rem_q[k]] != 0:
                return NOT_DIVISIBLE
        return OK

    @numba.njit(cache=True)
    def nb_matvec(m, m_absmax, vec, out, limit):
        s = 0.0
        for k in range(vec.size):
            s += abs(float(vec[k]))
        if m_absmax * s >= limit:
            return OVERFLOW
        for i in range(m.shape[0]):
            acc = 0
            for j in range(m.shape[1]):
                acc += m[i, j] * vec[j]
            out[i] = acc
        return OK

    @numba.njit(cache=True)
    def nb_bruhat_matrix(ranks):
        n, r, c = ranks.shape
        leq = np.ones((n, n), dtype=np.bool_)
        for i in range(n):
            for j in range(n):
                ok = True
                for p in range(r):
                    for q in range(c):
                        if ranks[i, p, q] < ranks[j, p, q]:
                            ok = False
                            break
                    if not ok:
                        break
                leq[i, j] = ok
        return leq


class Backend:
    """Uniform call surface over one kernel family."""

    def __init__(self, name: str):
        if name == "numba" and not HAVE_NUMBA:
            raise RuntimeError("numba is not installed")
        if name not in ("numba", "numpy"):
            raise ValueError(f"unknown backend {name!r}")
        self.name = name

    def mul_acc(self, out, a, b, table, sign=1, limit=LIMIT):
        # numba does not bounds-check
        if table.shape != (a.size, b.size):
            raise ValueError(f"table shape {table.shape} does not match {a.size} x {b.size}")
        if self.name == "numba":
            return nb_mul_acc(out, a, b, table, sign, limit)
        return np_mul_acc(out, a, b, table, sign, limit)

    def div_linear(self, p, q, plan, limit=LIMIT):
        if self.name == "numba":
            return nb_div_linear(
                p, q, plan.q_idx, plan.p_idx, plan.shift, plan.rem_p, plan.rem_q, limit
            )
        return np_div_linear(p, q, plan.levels, plan.rem_p, plan.rem_q, limit)

    def matvec(self, m, m_absmax, vec, out, limit=LIMIT):
        if self.name == "numba":
            return nb_matvec(m, m_absmax, vec, out, limit)
        return np_matvec(m, m_absmax, vec, out, limit)

    def bruhat_matrix(self, ranks):
        if self.name == "numba":
            return nb_bruhat_matrix(ranks)
        return np_bruhat_matrix(ranks)

    def __repr__(self) -> str:
        return f"Backend({self.name!r})"


def default_backend_name() -> str:
    return "numba" if HAVE_NUMBA and _env_wants_numba() else "numpy"


def get_backend(name: str | None = None) -> Backend:
    return Backend(name or default_backend_name())
