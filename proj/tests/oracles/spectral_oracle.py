"""Reference values for the spectral tests, computed without the C++ code.

Markov convexity of the symmetric walk on a 5-path (q = 2, T = 8) by explicit
enumeration of trajectories and fork suffixes in exact rational arithmetic;
walk eigenvalues of K_n and C_n; the bridge conductance of two triangles by
exhausting all cuts.
"""
from fractions import Fraction as F
from itertools import product
import math

import numpy as np


def path_walk(S):
    P = [[F(0)] * S for _ in range(S)]
    for i in range(S):
        if i == 0:
            P[0][1] = F(1)
        elif i == S - 1:
            P[i][i - 1] = F(1)
        else:
            P[i][i - 1] = P[i][i + 1] = F(1, 2)
    return P


def suffixes(P, x, steps):
    """All (probability, endpoint) pairs of walks of the given length from x."""
    out = [(F(1), x)]
    for _ in range(steps):
        nxt = []
        for p, y in out:
            for z, w in enumerate(P[y]):
                if w:
                    nxt.append((p * w, z))
        out = nxt
    return out


def markov_convexity(S=5, T=8, q=2):
    P = path_walk(S)
    trajs = [(F(1, S), (x,)) for x in range(S)]
    for _ in range(T):
        trajs = [(p * w, tr + (z,)) for p, tr in trajs for z, w in enumerate(P[tr[-1]]) if w]
    lhs = F(0)
    rhs = F(0)
    for p, tr in trajs:
        for t in range(1, T + 1):
            rhs += p * abs(tr[t] - tr[t - 1]) ** q
        k = 1
        while 2 ** k <= T:
            for t in range(2 ** k, T + 1):
                s = t - 2 ** k
                for pf, y in suffixes(P, tr[s], 2 ** k):
                    lhs += p * pf * F(1, 2 ** (q * k)) * abs(y - tr[t]) ** q
            k += 1
    return lhs, rhs


def walk_lambda2(adj):
    A = np.array(adj, dtype=float)
    d = A.sum(axis=1)
    S = A / np.sqrt(np.outer(d, d))
    return sorted(np.linalg.eigvalsh(S))[-2]


def two_triangle_conductance():
    edges = [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5), (2, 3)]
    deg = [0] * 6
    for u, v in edges:
        deg[u] += 1
        deg[v] += 1
    total = F(sum(deg))
    best = None
    for mask in range(1, 63):
        inside = [(mask >> i) & 1 for i in range(6)]
        cut = sum(1 for u, v in edges if inside[u] != inside[v])
        vol = sum(F(deg[i]) for i in range(6) if inside[i]) / total
        phi = F(cut) / total / min(vol, 1 - vol)
        best = phi if best is None else min(best, phi)
    return best


if __name__ == "__main__":
    lhs, rhs = markov_convexity()
    print("markov 5-path q=2 T=8 lhs_q =", lhs, float(lhs), " rhs_q =", rhs, float(rhs))
    for n in (4, 7):
        adj = [[int(i != j) for j in range(n)] for i in range(n)]
        print("K_%d lambda2 = %.17g (expect %.17g)" % (n, walk_lambda2(adj), -1 / (n - 1)))
    for n in (4, 9):
        adj = [[int(abs(i - j) in (1, n - 1)) for j in range(n)] for i in range(n)]
        print("C_%d lambda2 = %.17g (expect %.17g)" % (n, walk_lambda2(adj), math.cos(2 * math.pi / n)))
    print("two triangles min conductance =", two_triangle_conductance())
