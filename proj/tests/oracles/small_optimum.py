"""Global optima of small fixed instances by exhaustive assignment enumeration
and multistart SLSQP over the powers of each assignment.

Each scheduled subcarrier gets one power variable per distinct user; the budget
is sum p <= P. Every reported value is attained by an explicit feasible point.
"""
import itertools
import math

import numpy as np
from scipy.optimize import minimize

INSTANCES = {
    "A": dict(K=2, NF=1, P=1.0, w=[1.0, 1.0], H=[[1.0, 4.0]]),
    "B": dict(K=2, NF=1, P=1.0, w=[1.0, 0.5], H=[[1.0, 4.0]]),
    "C": dict(K=2, NF=2, P=2.0, w=[1.0, 0.6], H=[[1.0, 4.0], [2.0, 0.5]]),
    "D": dict(K=3, NF=2, P=3.0, w=[1.0, 0.7, 0.4], H=[[0.8, 2.5, 6.0], [3.0, 1.2, 0.4]]),
    "E": dict(K=3, NF=3, P=0.5, w=[0.9, 0.5, 1.0], H=[[50.0, 400.0, 1200.0], [900.0, 30.0, 200.0], [10.0, 700.0, 80.0]]),
}


def valid(H, i, m, n):
    return H[i][m] < H[i][n] or (H[i][m] == H[i][n] and m <= n)


def rate(inst, slots, x):
    H, w = inst["H"], inst["w"]
    total, k = 0.0, 0
    for i, m, n in slots:
        if m == n:
            total += w[m] * math.log2(1 + H[i][m] * max(x[k], 0))
            k += 1
        else:
            pm, pn = max(x[k], 0), max(x[k + 1], 0)
            total += w[m] * math.log2(1 + H[i][m] * pm / (H[i][m] * pn + 1)) + w[n] * math.log2(1 + H[i][n] * pn)
            k += 2
    return total


def best_for(inst, slots, rng):
    nv = sum(1 if m == n else 2 for _, m, n in slots)
    if nv == 0:
        return 0.0
    P = inst["P"]
    cons = [{"type": "ineq", "fun": lambda x: P - np.sum(x)}]
    best = -1.0
    starts = [np.full(nv, P / nv)] + [rng.dirichlet(np.ones(nv)) * P for _ in range(30)]
    for j in range(nv):
        e = np.full(nv, 1e-9); e[j] = P - 1e-9 * (nv - 1); starts.append(e)
    for x0 in starts:
        r = minimize(lambda x: -rate(inst, slots, x), x0, method="SLSQP", bounds=[(0, P)] * nv, constraints=cons,
                     options={"ftol": 1e-15, "maxiter": 1000})
        x = np.clip(r.x, 0, None)
        s = x.sum()
        if s > P:
            x *= P / s
        best = max(best, rate(inst, slots, x))
    return best


def optimum(inst, allowed=lambda m, n: True):
    rng = np.random.default_rng(12345)
    K, NF, H = inst["K"], inst["NF"], inst["H"]
    options = [[None] + [(i, m, n) for m in range(K) for n in range(K) if valid(H, i, m, n) and allowed(m, n)]
               for i in range(NF)]
    best = -1.0
    for choice in itertools.product(*options):
        slots = [c for c in choice if c is not None]
        best = max(best, best_for(inst, slots, rng))
    return best


if __name__ == "__main__":
    for name, inst in INSTANCES.items():
        print(name, "optimal", repr(optimum(inst)), "oma", repr(optimum(inst, lambda m, n: m == n)))
    rng = np.random.default_rng(7)
    print("C fixed (0,0,1),(1,1,0):", repr(best_for(INSTANCES["C"], [(0, 0, 1), (1, 1, 0)], rng)))
    print("D fixed (0,0,2),(1,1,0):", repr(best_for(INSTANCES["D"], [(0, 0, 2), (1, 1, 0)], rng)))
    print("E fixed (0,0,2),(1,1,0),(2,2,1):", repr(best_for(INSTANCES["E"], [(0, 0, 2), (1, 1, 0), (2, 2, 1)], rng)))
