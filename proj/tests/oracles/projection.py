"""Exact projection factors lambda* = max{beta : beta z in Z} on small lifted instances.

Independent of the Dinkelbach code: bisection on beta with an LP feasibility
check (scipy HiGHS). beta z in Z iff some p~ >= 0 with sum p~ <= P satisfies
f_d(p~) >= beta z_d g_d(p~) for all d, which is linear in p~ for fixed beta.
"""
import itertools

import numpy as np
from scipy.optimize import linprog


def rows(gains, K, NF):
    """(f coefficients, f const, g coefficients, g const) per lifted coordinate, full layout."""
    half = NF * K * K
    nv = 2 * half
    out_u, out_v = [], []
    for i, m, n in itertools.product(range(NF), range(K), range(K)):
        t = (i * K + m) * K + n
        hm, hn = gains[i][m], gains[i][n]
        fu = np.zeros(nv); fu[t] = hm; fu[half + t] = hm
        gu = np.zeros(nv); gu[half + t] = hm
        fv = np.zeros(nv); fv[half + t] = hn
        gv = np.zeros(nv)
        out_u.append((fu, gu))
        out_v.append((fv, gv))
    return out_u + out_v


def feasible(beta, z, r, P):
    nv = len(r[0][0])
    A, b = [], []
    for (f, g), zd in zip(r, z):
        # 1 + f.p >= beta zd (1 + g.p)  <=>  (beta zd g - f).p <= 1 - beta zd
        A.append(beta * zd * g - f)
        b.append(1 - beta * zd)
    A.append(np.ones(nv)); b.append(P)
    res = linprog(np.zeros(nv), A_ub=np.array(A), b_ub=np.array(b), bounds=[(0, None)] * nv, method="highs")
    return res.status == 0


def lam(gains, K, NF, P, z):
    r = rows(gains, K, NF)
    lo, hi = 0.0, 1.0
    while feasible(hi, z, r, P):
        lo, hi = hi, 2 * hi
    for _ in range(80):
        mid = 0.5 * (lo + hi)
        if feasible(mid, z, r, P):
            lo = mid
        else:
            hi = mid
    return lo


def initial(gains, K, NF, P):
    u = [1 + gains[i][m] * P for i, m, n in itertools.product(range(NF), range(K), range(K))]
    v = [1 + gains[i][n] * P for i, m, n in itertools.product(range(NF), range(K), range(K))]
    return u + v


if __name__ == "__main__":
    print("K1 z=(2,2):", repr(lam([[1.0]], 1, 1, 1.0, [2, 2])))
    print("K1 z=(1,1):", repr(lam([[1.0]], 1, 1, 1.0, [1, 1])))
    g = [[1.0, 3.0]]
    print("K2 NF1 H=(1,3) P=1 initial:", repr(lam(g, 2, 1, 1.0, initial(g, 2, 1, 1.0))))
    g = [[0.5, 2.0], [1.5, 0.8]]
    z = [1.3, 1.7, 2.2, 1.1, 1.9, 1.05, 1.4, 2.5, 1.2, 2.0, 1.6, 1.15, 1.8, 1.3, 1.25, 2.1]
    print("K2 NF2 P=2 fixed z:", repr(lam(g, 2, 2, 2.0, z)))
