#!/usr/bin/env python3
"""Brute-force reference for the Aalen/FIC quantities, written from first
principles and independent of the C++ library. Emits a JSON fixture with
small datasets and every intermediate quantity; the acceptance suite compares
the library against it."""
import itertools, json, sys
import numpy as np

COND_LIMIT = 1e8  # skip ill-conditioned draws; the fixture stays far from singularity


def analyze(T, d, X, x, t):
    n, r = X.shape
    grid = sorted(set(T[(d == 1) & (T <= t)].tolist()))
    Gn, dA, dJ, dQfull = [], [], [], []
    for u in grid:
        G = np.zeros((r, r)); dN = np.zeros(r); S3 = np.zeros((r, r, r))
        for i in range(n):
            if T[i] >= u:
                G += np.outer(X[i], X[i]) / n
                S3 += np.einsum('a,b,c->abc', X[i], X[i], X[i]) / n
            if T[i] == u and d[i] == 1:
                dN += X[i] / n
        if np.linalg.cond(G) > COND_LIMIT:
            return None
        Gi = np.linalg.inv(G)
        a = Gi @ dN
        J = np.einsum('abc,c->ab', S3, a)
        Gn.append(G); dA.append(a); dJ.append(J); dQfull.append(Gi @ J @ Gi)
    doc = {"grid": grid,
           "Gn": [g.tolist() for g in Gn],
           "dA": [a.tolist() for a in dA],
           "dJ": [j.tolist() for j in dJ],
           "candidates": []}
    for I in (list(c) for k in range(1, r + 1) for c in itertools.combinations(range(r), k)):
        II = [j for j in range(r) if j not in I]
        dAsub, s1, s2, v = [], 0.0, 0.0, 0.0
        for k, u in enumerate(grid):
            G00 = Gn[k][np.ix_(I, I)]
            if np.linalg.cond(G00) > COND_LIMIT:
                return None
            dNs = sum((X[i][I] if (T[i] == u and d[i] == 1) else np.zeros(len(I))) for i in range(n)) / n
            dAsub.append(np.linalg.solve(G00, dNs))
            b = Gn[k][np.ix_(II, I)] @ np.linalg.solve(G00, x[I]) - x[II]
            s1 += b @ dA[k][II]
            s2 += b @ dQfull[k][np.ix_(II, II)] @ b
            w = np.linalg.solve(G00, x[I])
            v += w @ dJ[k][np.ix_(I, I)] @ w
        sqb = n * s1 * s1 - s2
        doc["candidates"].append({"I": [i + 1 for i in I],
                                  "dA_sub": [q.tolist() for q in dAsub],
                                  "dQ": [dQfull[k][np.ix_(II, II)].tolist() for k in range(len(grid))],
                                  "sqb": sqb, "var": v, "fic": max(sqb, 0.0) + v})
    return doc


def pack(T, d, X, x, t):
    doc = analyze(np.asarray(T, float), np.asarray(d, int), np.asarray(X, float),
                  np.asarray(x, float), float(t))
    if doc is None:
        return None
    doc["data"] = {"time": list(map(float, T)), "status": list(map(int, d)),
                   "x": [list(map(float, row)) for row in X]}
    doc["focal_x"] = list(map(float, x))
    doc["t"] = float(t)
    return doc


def main(out_path):
    docs = []
    # fixed 4-record fixture used in the unit tests
    docs.append(pack([1, 2, 3, 4], [1, 1, 1, 0],
                     [[1, 1], [1, 3], [1, 2], [1, 1]], [1, 2], 3))
    assert docs[0] is not None
    rng = np.random.default_rng(20260810)
    want = itertools.cycle([1, 2, 3])
    r = next(want)
    while len(docs) < 21:
        n = int(rng.integers(r + 2, 7))
        T = np.round(rng.uniform(0.5, 5.0, n), 1)  # one decimal, so ties do occur
        d = (rng.random(n) < 0.75).astype(int)
        # keep only event times with > r individuals still at risk, so blocks stay regular
        ok = [u for u in T[d == 1] if np.sum(T >= u) > r]
        if not ok:
            continue
        X = np.round(rng.uniform(0.2, 2.0, (n, r)), 2)
        x = np.round(rng.uniform(0.2, 2.0, r), 2)
        doc = pack(T, d, X, x, max(ok))
        if doc is not None:
            docs.append(doc)
            r = next(want)
    with open(out_path, "w") as f:
        json.dump(docs, f, indent=1)
    print(f"wrote {len(docs)} fixtures to {out_path}")


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else "bruteforce_expected.json")
