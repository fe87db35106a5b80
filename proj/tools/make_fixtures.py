#!/usr/bin/env python3
"""Writes the instance library under fixtures/."""

import itertools
import json
import pathlib
import sys

OUT = pathlib.Path(sys.argv[1] if len(sys.argv) > 1 else "fixtures")


def cyclic(n):
    return [[(i + j) % n for j in range(n)] for i in range(n)]


def s3():
    perms = list(itertools.permutations(range(3)))
    index = {p: i for i, p in enumerate(perms)}
    table = [[index[tuple(p[q[k]] for k in range(3))] for q in perms] for p in perms]
    labels = ["".join(map(str, p)) for p in perms]
    return labels, table


def sign(labels):
    out = []
    for lab in labels:
        p = list(map(int, lab))
        inv = sum(1 for i in range(3) for j in range(i + 1, 3) if p[i] > p[j])
        out.append(inv % 2)
    return out


def free(k):
    return {"free": k}


def chain(n):
    return {"chain": n}


def diamond():
    # top, a, b, bottom
    lab = ["1", "a", "b", "0"]
    meet = {("1", x): x for x in lab}
    meet.update({(x, "1"): x for x in lab})
    for x in lab:
        meet[(x, x)] = x
        meet[(x, "0")] = meet[("0", x)] = "0"
    meet[("a", "b")] = meet[("b", "a")] = "0"
    return {"elements": lab, "table": [[lab.index(meet[(x, y)]) for y in lab] for x in lab]}


def shape_labels(shape):
    if "free" in shape:
        k = shape["free"]
        subs = []
        for mask in range(1, 1 << k):
            subs.append("{" + ",".join(str(j + 1) for j in range(k) if mask >> j & 1) + "}")
        return subs, lambda x, y: (subs.index(x) + 1) | (subs.index(y) + 1) == subs.index(x) + 1
    if "chain" in shape:
        labs = [f"c{i}" for i in range(shape["chain"])]
        return labs, lambda f, e: labs.index(f) >= labs.index(e)
    labs = shape["elements"]
    t = shape["table"]
    return labs, lambda f, e: t[labs.index(f)][labs.index(e)] == labs.index(f)


def covers(shape):
    labs, leq = shape_labels(shape)
    pairs = []
    for f in labs:
        for e in labs:
            if f == e or not leq(f, e):
                continue
            if any(g not in (f, e) and leq(f, g) and leq(g, e) for g in labs):
                continue
            pairs.append((f, e))
    return labs, pairs


def group_algebra(table, labels=None):
    n = len(table)
    sc = [[i, j, table[i][j], "1"] for i in range(n) for j in range(n)]
    ident = next(i for i in range(n) if all(table[i][j] == j for j in range(n)))
    unit = ["1" if i == ident else "0" for i in range(n)]
    alg = {"dim": n, "structure_constants": sc, "unit": unit}
    if labels:
        alg["basis"] = labels
    return alg


QQ = {"dim": 1, "basis": ["1"], "structure_constants": [[0, 0, 0, "1"]], "unit": ["1"]}


def constant(name, shape, alg, note):
    labs, pairs = covers(shape)
    ident = [["1" if i == j else "0" for j in range(alg["dim"])] for i in range(alg["dim"])]
    return name, {
        "kind": "semilattice-diagram",
        "name": name,
        "source": note,
        "semilattice": shape,
        "algebras": {l: alg for l in labs},
        "transitions": {f"{f}<{e}": ident for f, e in pairs},
    }


def clifford(name, shape, groups, homs, note):
    labs, pairs = covers(shape)
    return name, {
        "kind": "clifford",
        "name": name,
        "source": note,
        "semilattice": shape,
        "groups": {l: groups[l] for l in labs},
        "homs": {f"{f}<{e}": homs(f, e) for f, e in pairs},
    }


def rect_band(p, q):
    elems = [(i, j) for i in range(p) for j in range(q)]
    return {
        "elements": [f"r{i}{j}" for i, j in elems],
        "table": [[elems.index((a[0], b[1])) for b in elems] for a in elems],
    }


def normal_band6():
    # Strong semilattice over the 2-chain: a 1x2 rectangular band above a
    # 2x2 one, the transition (0, j) -> (0, j).
    top = [(0, j) for j in range(2)]
    bottom = [(i, j) for i in range(2) for j in range(2)]
    elems = [("t",) + x for x in top] + [("b",) + x for x in bottom]

    def down(x):
        return ("b",) + x[1:]

    def mult(x, y):
        if x[0] == "t" and y[0] == "t":
            return ("t", x[1], y[2])
        x, y = (down(x) if x[0] == "t" else x), (down(y) if y[0] == "t" else y)
        return ("b", x[1], y[2])

    return {
        "elements": [f"{x[0]}{x[1]}{x[2]}" for x in elems],
        "table": [[elems.index(mult(x, y)) for y in elems] for x in elems],
    }


def main():
    OUT.mkdir(parents=True, exist_ok=True)
    z2, z3, one = cyclic(2), cyclic(3), [[0]]
    s3l, s3t = s3()
    fixtures = []

    for k in (1, 2, 3):
        fixtures.append(constant(f"free{k}-Q", free(k), QQ, "constant Q over a free semilattice"))
    fixtures.append(constant("chain2-Q", chain(2), QQ, "constant Q over the 2-chain"))
    fixtures.append(constant("chain3-Q", chain(3), QQ, "constant Q over the 3-chain"))
    fixtures.append(constant("chain5-Q", chain(5), QQ, "constant Q over the 5-chain"))
    fixtures.append(constant("diamond-Q", diamond(), QQ, "constant Q over the diamond"))
    fixtures.append(constant("free2-QZ2", free(2), group_algebra(z2), "constant Q[Z2] over free(2)"))
    fixtures.append(constant("chain2-QZ3", chain(2), group_algebra(z3), "constant Q[Z3] over the 2-chain"))
    fixtures.append(constant("single-QS3", chain(1), group_algebra(s3t, s3l), "Q[S3] on one point"))

    unit = {
        "kind": "semilattice-diagram",
        "name": "unitisation-QZ2",
        "source": "forced unitisation of Q[Z2]: Q on top, Q[Z2] below, unit embedding",
        "semilattice": chain(2),
        "algebras": {"c0": QQ, "c1": group_algebra(z2, ["g0", "g1"])},
        "transitions": {"c1<c0": [["1"], ["0"]]},
    }
    fixtures.append(("unitisation-QZ2", unit))

    fixtures.append(clifford("cliff-trivial", chain(1), {"c0": one}, None, "the trivial group"))
    fixtures.append(clifford("cliff-chain2-Z2", chain(2), {"c0": z2, "c1": z2},
                             lambda f, e: [0, 1], "Z2 over the 2-chain, identity transition"))
    fixtures.append(clifford("cliff-chain2-Z2-to-1", chain(2), {"c0": z2, "c1": one},
                             lambda f, e: [0, 0], "Z2 above the trivial group"))
    fixtures.append(clifford("cliff-chain3-Z3", chain(3), {"c0": z3, "c1": z3, "c2": one},
                             lambda f, e: [0, 1, 2] if f == "c1" else [0, 0, 0],
                             "Z3, Z3, 1 down the 3-chain"))
    fixtures.append(clifford("cliff-single-S3", chain(1), {"c0": {"elements": s3l, "table": s3t}},
                             None, "S3 alone"))
    fixtures.append(clifford("cliff-chain2-S3-sign", chain(2),
                             {"c0": {"elements": s3l, "table": s3t}, "c1": z2},
                             lambda f, e: sign(s3l), "S3 over Z2 through the sign"))
    fixtures.append(clifford("cliff-free2-Z2", free(2), {"{1}": z2, "{2}": z2, "{1,2}": z2},
                             lambda f, e: [0, 1], "Z2 over free(2)"))
    fixtures.append(clifford("cliff-diamond-Z2", diamond(), {"1": z2, "a": z2, "b": one, "0": one},
                             lambda f, e: [0, 1] if (f, e) == ("a", "1") else [0] * (2 if e in ("1", "a") else 1),
                             "Z2 on top and a, trivial below"))
    fixtures.append(clifford("cliff-free3-Z2", free(3),
                             {l: z2 for l in shape_labels(free(3))[0]},
                             lambda f, e: [0, 1], "Z2 over free(3)"))

    for p, q in [(1, 1), (1, 2), (2, 1), (2, 2), (1, 3), (3, 1), (2, 3), (3, 2), (3, 3)]:
        name = f"rect{p}x{q}"
        fixtures.append((name, {"kind": "band", "name": name, "source": f"{p}x{q} rectangular band",
                                **rect_band(p, q)}))
    fixtures.append(("normal-band6", {"kind": "band", "name": "normal-band6",
                                      "source": "1x2 over 2x2 rectangular bands on the 2-chain",
                                      **normal_band6()}))
    fixtures.append(("semigroup-one", {"kind": "semigroup", "name": "semigroup-one",
                                       "source": "one idempotent", "elements": ["e"], "table": [[0]]}))

    for name, doc in fixtures:
        doc = {k: v for k, v in doc.items() if v is not None}
        if doc.get("homs") is None and "homs" in doc:
            del doc["homs"]
        (OUT / f"{name}.json").write_text(json.dumps(doc, indent=1, sort_keys=True) + "\n")
    print(f"wrote {len(fixtures)} fixtures to {OUT}")


if __name__ == "__main__":
    main()
