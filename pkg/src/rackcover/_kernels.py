"""Hot loops with numba-jitted kernels and pure-numpy fallbacks.

The jitted path is used when numba imports cleanly; setting the
environment variable RACKCOVER_NO_NUMBA=1 forces the numpy path.
Both implementations are kept callable so they can be benchmarked
and cross-checked against each other.
"""

from __future__ import annotations

import os

import numpy as np

OP_MUL = -1
OP_LDIV = -2


def _want_numba() -> bool:
    if os.environ.get("RACKCOVER_NO_NUMBA", "").strip().lower() in ("1", "true", "yes"):
        return False
    try:
        import numba  # noqa: F401
    except ImportError:
        return False
    return True


NUMBA_ENABLED = _want_numba()


def backend() -> str:
    return "numba" if NUMBA_ENABLED else "numpy"


# ---------------------------------------------------------------- numpy path

def ld_violation_py(mul):
    """First (x, y, z) with x*(y*z) != (x*y)*(x*z), encoded x*n*n+y*n+z, else -1."""
    n = mul.shape[0]
    for x in range(n):
        row = mul[x]
        lhs = row[mul]            # lhs[y, z] = x*(y*z)
        rhs = mul[np.ix_(row, row)]  # rhs[y, z] = (x*y)*(x*z)
        if not np.array_equal(lhs, rhs):
            y, z = np.argwhere(lhs != rhs)[0]
            return x * n * n + int(y) * n + int(z)
    return -1


def rack_table_mask_py(perms, nrows):
    """Boolean mask over all perms**nrows row choices picking left distributive tables.

    Combination t encodes rows by base-p digits, row 0 most significant,
    so ascending t enumerates tables in lexicographic order.
    """
    p, n = perms.shape
    total = p ** nrows
    digits = np.empty((total, nrows), dtype=np.int64)
    t = np.arange(total, dtype=np.int64)
    for r in range(nrows - 1, -1, -1):
        digits[:, r] = t % p
        t //= p
    tables = perms[digits]  # (total, n, n)
    mask = np.ones(total, dtype=bool)
    b = np.arange(total)
    for x in range(n):
        for y in range(n):
            xy = tables[:, x, y]
            for z in range(n):
                yz = tables[:, y, z]
                xz = tables[:, x, z]
                lhs = tables[b, x, yz]
                rhs = tables[b, xy, xz]
                mask &= lhs == rhs
    return mask


def _eval_code_vec(mul, ldiv, code, cols):
    stack = []
    for op in code:
        if op >= 0:
            stack.append(cols[op])
        elif op == OP_MUL:
            right = stack.pop()
            left = stack.pop()
            stack.append(mul[left, right])
        else:
            right = stack.pop()
            left = stack.pop()
            stack.append(ldiv[left, right])
    return stack[0]


def identity_counterexample_py(mul, ldiv, lcode, rcode, nvars):
    """Index of the first assignment where the two sides differ, or -1.

    Assignment k maps variable v to the base-n digit of k with variable 0
    most significant, so counterexamples come out in lexicographic order.
    """
    n = mul.shape[0]
    total = n ** nvars
    chunk = 1 << 16
    for start in range(0, total, chunk):
        idx = np.arange(start, min(start + chunk, total), dtype=np.int64)
        cols = [(idx // (n ** (nvars - 1 - v))) % n for v in range(nvars)]
        lhs = _eval_code_vec(mul, ldiv, lcode, cols)
        rhs = _eval_code_vec(mul, ldiv, rcode, cols)
        bad = np.nonzero(lhs != rhs)[0]
        if bad.size:
            return int(idx[bad[0]])
    return -1


def rack_cocycle_ok_py(mul, theta):
    """Check theta[x, y*z] o theta[y, z] == theta[x*y, x*z] o theta[x, z] for all x, y, z."""
    n = mul.shape[0]
    for x in range(n):
        for y in range(n):
            xy = mul[x, y]
            for z in range(n):
                lhs = theta[x, mul[y, z]][theta[y, z]]
                rhs = theta[xy, mul[x, z]][theta[x, z]]
                if not np.array_equal(lhs, rhs):
                    return False
    return True


# ---------------------------------------------------------------- numba path

if NUMBA_ENABLED:
    from numba import njit

    @njit(cache=True)
    def ld_violation_nb(mul):
        n = mul.shape[0]
        for x in range(n):
            for y in range(n):
                xy = mul[x, y]
                for z in range(n):
                    if mul[x, mul[y, z]] != mul[xy, mul[x, z]]:
                        return x * n * n + y * n + z
        return -1

    @njit(cache=True)
    def rack_table_mask_nb(perms, nrows):
        p, n = perms.shape
        total = p ** nrows
        mask = np.zeros(total, dtype=np.bool_)
        mul = np.empty((n, n), dtype=np.int64)
        for t in range(total):
            rem = t
            for r in range(nrows - 1, -1, -1):
                d = rem % p
                rem //= p
                for c in range(n):
                    mul[r, c] = perms[d, c]
            ok = True
            for x in range(n):
                if not ok:
                    break
                for y in range(n):
                    if not ok:
                        break
                    xy = mul[x, y]
                    for z in range(n):
                        if mul[x, mul[y, z]] != mul[xy, mul[x, z]]:
                            ok = False
                            break
            mask[t] = ok
        return mask

    @njit(cache=True)
    def identity_counterexample_nb(mul, ldiv, lcode, rcode, nvars):
        n = mul.shape[0]
        total = n ** nvars
        assign = np.empty(nvars, dtype=np.int64)
        stack = np.empty(64, dtype=np.int64)
        for k in range(total):
            rem = k
            for v in range(nvars - 1, -1, -1):
                assign[v] = rem % n
                rem //= n
            sp = 0
            for op in lcode:
                if op >= 0:
                    stack[sp] = assign[op]
                    sp += 1
                elif op == OP_MUL:
                    stack[sp - 2] = mul[stack[sp - 2], stack[sp - 1]]
                    sp -= 1
                else:
                    stack[sp - 2] = ldiv[stack[sp - 2], stack[sp - 1]]
                    sp -= 1
            lval = stack[0]
            sp = 0
            for op in rcode:
                if op >= 0:
                    stack[sp] = assign[op]
                    sp += 1
                elif op == OP_MUL:
                    stack[sp - 2] = mul[stack[sp - 2], stack[sp - 1]]
                    sp -= 1
                else:
                    stack[sp - 2] = ldiv[stack[sp - 2], stack[sp - 1]]
                    sp -= 1
            if lval != stack[0]:
                return k
        return -1

    @njit(cache=True)
    def rack_cocycle_ok_nb(mul, theta):
        n = mul.shape[0]
        m = theta.shape[2]
        for x in range(n):
            for y in range(n):
                xy = mul[x, y]
                for z in range(n):
                    yz = mul[y, z]
                    xz = mul[x, z]
                    for b in range(m):
                        if theta[x, yz, theta[y, z, b]] != theta[xy, xz, theta[x, z, b]]:
                            return False
        return True

    ld_violation = ld_violation_nb
    rack_table_mask = rack_table_mask_nb
    identity_counterexample = identity_counterexample_nb
    rack_cocycle_ok = rack_cocycle_ok_nb
else:
    ld_violation = ld_violation_py
    rack_table_mask = rack_table_mask_py
    identity_counterexample = identity_counterexample_py
    rack_cocycle_ok = rack_cocycle_ok_py
