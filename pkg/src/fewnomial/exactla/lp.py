"""Exact feasibility for strict homogeneous inequality systems.

Two independent engines are provided: Fourier-Motzkin elimination (used for
at most four unknowns) and a phase-one simplex with Bland's rule.  Both work
on ``Fraction`` data and never round.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd, lcm
from typing import Sequence

from .matrix import RationalMatrix, to_fraction

FM_MAX_VARS = 4


def _normalize(coefs: tuple[Fraction, ...], rhs: Fraction) -> tuple[tuple[Fraction, ...], Fraction]:
    # scale an inequality coefs.y >= rhs by a positive factor so duplicates collapse
    den = lcm(*(c.denominator for c in coefs), rhs.denominator)
    ints = [int(c * den) for c in coefs]
    r = int(rhs * den)
    g = 0
    for x in ints:
        g = gcd(g, x)
    g = gcd(g, r) if g else abs(r) or 1
    if g == 0:
        g = 1
    return tuple(Fraction(x, g) for x in ints), Fraction(r, g)


def fourier_motzkin(rows: Sequence[Sequence], rhs: Sequence) -> tuple[Fraction, ...] | None:
    """Solve ``rows . y >= rhs`` exactly by variable elimination.

    Returns a rational witness or None when the system is infeasible.
    """
    system = [(tuple(to_fraction(c) for c in r), to_fraction(b)) for r, b in zip(rows, rhs)]
    nvars = len(system[0][0]) if system else 0
    stages = []
    cur = list(dict.fromkeys(_normalize(c, b) for c, b in system))
    for j in reversed(range(nvars)):
        stages.append(cur)
        pos, neg, nxt = [], [], []
        for c, b in cur:
            if c[j] > 0:
                pos.append((c, b))
            elif c[j] < 0:
                neg.append((c, b))
            else:
                nxt.append((c, b))
        for cp, bp in pos:
            for cn, bn in neg:
                wp, wn = -cn[j], cp[j]
                c = tuple(wp * x + wn * y for x, y in zip(cp, cn))
                nxt.append(_normalize(c, wp * bp + wn * bn))
        cur = list(dict.fromkeys(nxt))
    # all coefficients are now zero
    if any(b > 0 for _, b in cur):
        return None
    y = [Fraction(0)] * nvars
    for j, stage in zip(range(nvars), reversed(stages)):
        lo, hi = None, None
        for c, b in stage:
            if c[j] == 0:
                continue
            rest = sum((c[i] * y[i] for i in range(j)), Fraction(0))
            bound = (b - rest) / c[j]
            if c[j] > 0:
                lo = bound if lo is None else max(lo, bound)
            else:
                hi = bound if hi is None else min(hi, bound)
        if lo is None and hi is None:
            val = Fraction(0)
        elif lo is None:
            val = min(hi, Fraction(0))
        elif hi is None:
            val = max(lo, Fraction(0))
        else:
            if lo > hi:
                return None
            val = (lo + hi) / 2
        y[j] = val
    return tuple(y)


def phase_one(A: Sequence[Sequence], b: Sequence) -> tuple[Fraction, ...] | None:
    """Find ``x >= 0`` with ``A x = b`` by the phase-one simplex method.

    Bland's smallest-index rule is used for both entering and leaving
    variables, so the method terminates on degenerate problems.
    """
    A = [[to_fraction(x) for x in r] for r in A]
    b = [to_fraction(x) for x in b]
    m = len(A)
    n = len(A[0]) if m else 0
    for i in range(m):
        if b[i] < 0:
            A[i] = [-x for x in A[i]]
            b[i] = -b[i]
    # tableau rows: [A | I_art | b], objective: minimize sum of artificials
    T = [A[i] + [Fraction(1) if k == i else Fraction(0) for k in range(m)] + [b[i]] for i in range(m)]
    basis = [n + i for i in range(m)]
    width = n + m
    # reduced costs of the phase-one objective
    z = [-sum((T[i][j] for i in range(m)), Fraction(0)) for j in range(width + 1)]
    for i in range(m):
        z[n + i] = Fraction(0)
    while True:
        enter = next((j for j in range(width) if z[j] < 0), None)
        if enter is None:
            break
        best = None
        leave = None
        for i in range(m):
            a = T[i][enter]
            if a > 0:
                ratio = T[i][-1] / a
                if best is None or ratio < best or (ratio == best and basis[i] < basis[leave]):
                    best, leave = ratio, i
        if leave is None:
            # unbounded phase-one direction cannot happen (objective >= 0)
            raise ArithmeticError("phase-one simplex became unbounded")
        p = T[leave][enter]
        T[leave] = [x / p for x in T[leave]]
        for i in range(m):
            if i != leave and T[i][enter] != 0:
                f = T[i][enter]
                T[i] = [x - f * y for x, y in zip(T[i], T[leave])]
        f = z[enter]
        z = [x - f * y for x, y in zip(z, T[leave])]
        basis[leave] = enter
    if -z[-1] != 0:
        return None
    x = [Fraction(0)] * n
    for i, var in enumerate(basis):
        if var < n:
            x[var] = T[i][-1]
        elif T[i][-1] != 0:
            return None
    return tuple(x)


def simplex_strict(rows: Sequence[Sequence]) -> tuple[Fraction, ...] | None:
    """Solve ``rows . y >= 1`` with free ``y`` via phase one (y = p - q)."""
    R = [[to_fraction(x) for x in r] for r in rows]
    k = len(R[0])
    A = [r + [-x for x in r] + [Fraction(-1) if j == i else Fraction(0) for j in range(len(R))] for i, r in enumerate(R)]
    sol = phase_one(A, [1] * len(R))
    if sol is None:
        return None
    return tuple(sol[j] - sol[k + j] for j in range(k))


def strict_cone_feasible(rows: RationalMatrix | Sequence[Sequence], method: str = "auto") -> tuple[Fraction, ...] | None:
    """Return ``y`` with ``<row_i, y> > 0`` for every row, or None if none exists.

    ``method`` is ``"auto"`` (Fourier-Motzkin for at most four unknowns,
    simplex otherwise), ``"fm"`` or ``"simplex"``.  A zero row makes the
    system infeasible.
    """
    R = [list(r) for r in (rows.rows if isinstance(rows, RationalMatrix) else rows)]
    R = [[to_fraction(x) for x in r] for r in R]
    if isinstance(rows, RationalMatrix):
        k = rows.ncols
    else:
        k = len(R[0]) if R else 0
    if k < 1:
        raise ValueError("need at least one unknown")
    if not R:
        return tuple([Fraction(0)] * k)
    if any(all(x == 0 for x in r) for r in R):
        return None
    if method == "auto":
        method = "fm" if k <= FM_MAX_VARS else "simplex"
    if method == "fm":
        y = fourier_motzkin(R, [1] * len(R))
    elif method == "simplex":
        y = simplex_strict(R)
    else:
        raise ValueError(f"unknown method {method!r}")
    if y is not None:
        assert all(sum((a * b for a, b in zip(r, y)), Fraction(0)) > 0 for r in R)
    return y


def positive_dependence(vectors: Sequence[Sequence]) -> tuple[Fraction, ...] | None:
    """Coefficients ``mu_i >= 1`` with ``sum mu_i v_i = 0``, or None.

    Equivalent to the origin lying in the open positive cone of ``vectors``.
    """
    V = [[to_fraction(x) for x in v] for v in vectors]
    if not V:
        return None
    k = len(V[0])
    # mu = 1 + w, w >= 0:  sum w_i v_i = -sum v_i
    A = [[V[i][j] for i in range(len(V))] for j in range(k)]
    b = [-sum((V[i][j] for i in range(len(V))), Fraction(0)) for j in range(k)]
    if k == 0:
        return tuple([Fraction(1)] * len(V))
    w = phase_one(A, b)
    if w is None:
        return None
    return tuple(1 + x for x in w)
