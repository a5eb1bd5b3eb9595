"""Regenerate the frozen golden systems in src/nscurves/golden/.

The tables below were transcribed by hand from the closed-form inversion
systems for the trigonal, tetragonal, pentagonal and hyperelliptic families,
then audited against the worked low-genus examples.  The script does not
import the package: it rebuilds each JSON payload from the printed patterns
alone, so the frozen files stay an independent check on the derivation
engine.  Run it only when the payload schema itself changes, and re-audit
the output before committing.

Usage: python3 tools/make_golden.py [--diff]
  --diff   compare against the files currently on disk instead of writing
"""

import argparse
import json
import sys
from fractions import Fraction as F
from pathlib import Path

GOLDEN_DIR = Path(__file__).resolve().parent.parent / "src" / "nscurves" / "golden"

# A lambda-polynomial is a list of (key, Fraction) chunks, where key is a
# tuple of (subscript, exponent) pairs sorted by subscript.


def C(q):
    return [((), F(q))]


def L(k, q):
    return [(((k, 1),), F(q))]


def L2(k, q):
    return [(((k, 2),), F(q))]


def LL(k1, k2, q):
    return [(((k1, 1), (k2, 1)), F(q))]


ONE = C(1)

# Coefficient tables A_l: the inversion function of level l reads
#   R = Mtilde_l - sum_w A_{l,w} M_{-w},
# with A_{l,w} a combination of wp symbols obtained from the base index
# tuples below by appending the gap w.  Entries: (base indices, chunks).

A1 = [((1,), ONE)]
A2 = [((2,), ONE), ((1, 1), C(-1))]
A2_HYP = [((1, 1), C(-1))]


def A3(c3=None):
    rows = [((3,), ONE), ((1, 2), C(F(-3, 2)))]
    if c3:
        rows.append(((1, 1), c3))
    rows.append(((1, 1, 1), C(F(1, 2))))
    return rows


def A4(a=None, b=None, d=None):
    rows = [((4,), ONE), ((2, 2), C(F(-1, 2))), ((1, 3), C(F(-4, 3)))]
    if a:
        rows.append(((1, 2), a))
    if b:
        rows.append(((1, 1), b))
    rows.append(((1, 1, 2), ONE))
    if d:
        rows.append(((1, 1, 1), d))
    rows.append(((1, 1, 1, 1), C(F(-1, 6))))
    return rows


def family(n, s, m, first_kind, numerators, tables, extended=False):
    """Payload description: first_kind maps gap -> (j, i); numerators is a
    list (one per level) of [(j, i, chunks)]; tables the A_l list."""
    genus = (n - 1) * (s - 1) // 2
    return {
        "n": n,
        "s": s,
        "m": m,
        "genus": genus,
        "extended": extended,
        "first_kind": first_kind,
        "numerators": numerators,
        "tables": tables,
    }


def trigonal_3m1(m):
    # (3, 3m+1): gaps 3i-2 (i<=m) on y x^(m-i), gaps 3i-1 (i<=2m) on x^(2m-i)
    first = {}
    for i in range(1, m + 1):
        first[3 * i - 2] = (1, m - i)
    for i in range(1, 2 * m + 1):
        first[3 * i - 1] = (0, 2 * m - i)
    numerators = [
        [(0, 2 * m, ONE)],
        [(1, m, C(2))],
    ]
    return family(3, 3 * m + 1, m, first, numerators, [A1, A2])


def trigonal_3m2(m):
    first = {}
    for i in range(1, m + 1):
        first[3 * i - 1] = (1, m - i)
    for i in range(1, 2 * m + 2):
        first[3 * i - 2] = (0, 2 * m + 1 - i)
    numerators = [
        [(1, m, ONE)],
        [(0, 2 * m + 1, C(2)), (1, m, L(1, 1))],
    ]
    return family(3, 3 * m + 2, m, first, numerators, [A1, A2])


def trigonal_34_extended():
    base = trigonal_3m1(1)
    base["extended"] = True
    base["numerators"] = [
        [(0, 2, ONE)],
        [(1, 1, C(2)), (0, 2, L(1, -1))],
    ]
    return base


def tetragonal_4m1(m):
    first = {}
    for i in range(1, m + 1):
        first[4 * i - 3] = (2, m - i)
    for i in range(1, 2 * m + 1):
        first[4 * i - 2] = (1, 2 * m - i)
    for i in range(1, 3 * m + 1):
        first[4 * i - 1] = (0, 3 * m - i)
    numerators = [
        [(0, 3 * m, ONE)],
        [(1, 2 * m, C(2))],
        [(2, m, C(3)), (0, 3 * m, L(2, -1))],
    ]
    return family(4, 4 * m + 1, m, first, numerators, [A1, A2, A3()])


def tetragonal_4m3(m):
    first = {}
    for i in range(1, m + 1):
        first[4 * i - 1] = (2, m - i)
    for i in range(1, 2 * m + 2):
        first[4 * i - 2] = (1, 2 * m + 1 - i)
    for i in range(1, 3 * m + 3):
        first[4 * i - 3] = (0, 3 * m + 2 - i)
    numerators = [
        [(2, m, ONE)],
        [(1, 2 * m + 1, C(2)), (2, m, L(1, 1))],
        [(0, 3 * m + 2, C(3)), (1, 2 * m + 1, L(1, 2)), (2, m, L(2, 1))],
    ]
    return family(4, 4 * m + 3, m, first, numerators, [A1, A2, A3(L(1, F(1, 2)))])


def pentagonal_5m1(m):
    first = {}
    for i in range(1, m + 1):
        first[5 * i - 4] = (3, m - i)
    for i in range(1, 2 * m + 1):
        first[5 * i - 3] = (2, 2 * m - i)
    for i in range(1, 3 * m + 1):
        first[5 * i - 2] = (1, 3 * m - i)
    for i in range(1, 4 * m + 1):
        first[5 * i - 1] = (0, 4 * m - i)
    numerators = [
        [(0, 4 * m, ONE)],
        [(1, 3 * m, C(2))],
        [(2, 2 * m, C(3)), (0, 4 * m, L(2, -1))],
        [(3, m, C(4)), (1, 3 * m, L(2, -2)), (0, 4 * m, L(3, -1))],
    ]
    tables = [A1, A2, A3(), A4(b=L(2, F(-1, 3)))]
    return family(5, 5 * m + 1, m, first, numerators, tables)


def pentagonal_5m2(m):
    first = {}
    for i in range(1, m + 1):
        first[5 * i - 3] = (3, m - i)
    for i in range(1, 2 * m + 1):
        first[5 * i - 1] = (2, 2 * m - i)
    for i in range(1, 3 * m + 2):
        first[5 * i - 4] = (1, 3 * m + 1 - i)
    for i in range(1, 4 * m + 2):
        first[5 * i - 2] = (0, 4 * m + 1 - i)
    numerators = [
        [(2, 2 * m, ONE)],
        [(0, 4 * m + 1, C(2)), (2, 2 * m, L(1, 1))],
        [(3, m, C(3)), (0, 4 * m + 1, L(1, -1))],
        [(1, 3 * m + 1, C(4)), (3, m, L(1, 2)), (2, 2 * m, L(3, 2))],
    ]
    tables = [
        A1,
        A2,
        A3(L(1, F(1, 2))),
        A4(a=L(1, F(-2, 3)), b=L2(1, F(1, 6))),
    ]
    return family(5, 5 * m + 2, m, first, numerators, tables)


def pentagonal_5m3(m):
    first = {}
    for i in range(1, m + 1):
        first[5 * i - 2] = (3, m - i)
    for i in range(1, 2 * m + 2):
        first[5 * i - 4] = (2, 2 * m + 1 - i)
    for i in range(1, 3 * m + 2):
        first[5 * i - 1] = (1, 3 * m + 1 - i)
    for i in range(1, 4 * m + 3):
        first[5 * i - 3] = (0, 4 * m + 2 - i)
    numerators = [
        [(1, 3 * m + 1, ONE)],
        [(3, m, C(2)), (1, 3 * m + 1, L(1, -1))],
        [(0, 4 * m + 2, C(3)), (3, m, L(1, 1)), (1, 3 * m + 1, L(2, 2))],
        [
            (2, 2 * m + 1, C(4)),
            (0, 4 * m + 2, L(1, -2)),
            (3, m, L(2, 2)),
            (1, 3 * m + 1, LL(1, 2, -1)),
        ],
    ]
    tables = [
        A1,
        A2,
        A3(L(1, F(-1, 2))),
        A4(a=L(1, F(2, 3)), b=L2(1, F(1, 6)) + L(2, F(-1, 3))),
    ]
    return family(5, 5 * m + 3, m, first, numerators, tables)


def pentagonal_5m4(m):
    first = {}
    for i in range(1, m + 1):
        first[5 * i - 1] = (3, m - i)
    for i in range(1, 2 * m + 2):
        first[5 * i - 2] = (2, 2 * m + 1 - i)
    for i in range(1, 3 * m + 3):
        first[5 * i - 3] = (1, 3 * m + 2 - i)
    for i in range(1, 4 * m + 4):
        first[5 * i - 4] = (0, 4 * m + 3 - i)
    numerators = [
        [(3, m, ONE)],
        [(2, 2 * m + 1, C(2)), (3, m, L(1, 1))],
        [(1, 3 * m + 2, C(3)), (2, 2 * m + 1, L(1, 2)), (3, m, L(2, 1))],
        [
            (0, 4 * m + 3, C(4)),
            (1, 3 * m + 2, L(1, 3)),
            (2, 2 * m + 1, L(2, 2)),
            (3, m, L(3, 1)),
        ],
    ]
    tables = [
        A1,
        A2,
        A3(L(1, F(1, 2))),
        A4(
            a=L(1, F(5, 6)),
            b=L(2, F(1, 3)) + L2(1, F(-1, 3)),
            d=L(1, F(-1, 2)),
        ),
    ]
    return family(5, 5 * m + 4, m, first, numerators, tables)


def hyperelliptic(g):
    # (2, 2g+1): gaps are the odd numbers, M_{-(2i-1)} = x^(g-i)
    first = {}
    for i in range(1, g + 1):
        first[2 * i - 1] = (0, g - i)
    numerators = [
        [(0, g, ONE)],
        [(1, 0, C(2))],
    ]
    return family(2, 2 * g + 1, g, first, numerators, [A1, A2_HYP])


# -- payload assembly --------------------------------------------------------


def gap_sequence(n, s, genus):
    reachable = {0}
    for w in range(1, 2 * genus + 1):
        if (w - n) in reachable or (w - s) in reachable:
            reachable.add(w)
    return [w for w in range(1, 2 * genus) if w not in reachable]


def lambda_payload(key):
    return {str(k): e for k, e in key}


def chunk_weight(key):
    return sum(k * e for k, e in key)


def coefficient_payload(const_chunks, sym_entries):
    """Match the canonical emission: optional pure-rational constant, then
    const-kind lambda chunks, then wp entries sorted by rank and indices."""
    payload = {}
    const_rat = F(0)
    lam_chunks = []
    for key, q in const_chunks:
        if key == ():
            const_rat += q
        else:
            lam_chunks.append((key, q))
    if const_rat:
        payload["constant"] = str(const_rat)
    symbols = []
    for key, q in sorted(lam_chunks):
        symbols.append(
            {
                "kind": "const",
                "indices": [],
                "lambda": lambda_payload(key),
                "rational": str(q),
            }
        )
    grouped = {}
    for indices, key, q in sym_entries:
        grouped.setdefault(indices, []).append((key, q))
    for indices in sorted(grouped, key=lambda t: (len(t), t)):
        for key, q in sorted(grouped[indices]):
            symbols.append(
                {
                    "kind": f"wp{len(indices)}",
                    "indices": list(indices),
                    "lambda": lambda_payload(key),
                    "rational": str(q),
                }
            )
    payload["symbols"] = symbols
    return payload


def build_payload(desc):
    n, s, m, genus = desc["n"], desc["s"], desc["m"], desc["genus"]
    gaps = gap_sequence(n, s, genus)
    first = desc["first_kind"]
    assert sorted(first) == gaps, (n, s, sorted(first), gaps)
    for w, (j, i) in first.items():
        assert n * i + s * j == 2 * genus - 1 - w, (n, s, w, j, i)

    functions = []
    for idx, (numerator, table) in enumerate(
        zip(desc["numerators"], desc["tables"])
    ):
        level = idx + 1
        weight = 2 * genus - 1 + level
        terms = []
        for j, i, chunks in numerator:
            mono_weight = n * i + s * j
            for key, q in chunks:
                assert chunk_weight(key) + mono_weight == weight, (n, s, level)
            terms.append(
                (mono_weight, (j, i), coefficient_payload(chunks, []))
            )
        for w in gaps:
            j, i = first[w]
            entries = []
            for base, chunks in table:
                indices = tuple(sorted(base + (w,)))
                for key, q in chunks:
                    assert chunk_weight(key) + sum(base) == level, (n, s, level)
                    entries.append((indices, key, -q))
            mono_weight = 2 * genus - 1 - w
            terms.append(
                (mono_weight, (j, i), coefficient_payload([], entries))
            )
        terms.sort(key=lambda t: -t[0])
        functions.append(
            {
                "weight": weight,
                "terms": [
                    {"monomial": {"j": j, "i": i}, "coefficient": coeff}
                    for _, (j, i), coeff in terms
                ],
            }
        )
    return {
        "n": n,
        "s": s,
        "m": m,
        "genus": genus,
        "extended": desc["extended"],
        "gaps": gaps,
        "functions": functions,
    }


TARGETS = {
    "system_2_5.json": hyperelliptic(2),
    "system_2_7.json": hyperelliptic(3),
    "system_2_9.json": hyperelliptic(4),
    "system_3_4.json": trigonal_3m1(1),
    "system_3_7.json": trigonal_3m1(2),
    "system_3_5.json": trigonal_3m2(1),
    "system_3_8.json": trigonal_3m2(2),
    "system_3_4_extended.json": trigonal_34_extended(),
    "system_4_5.json": tetragonal_4m1(1),
    "system_4_7.json": tetragonal_4m3(1),
    "system_5_6.json": pentagonal_5m1(1),
    "system_5_7.json": pentagonal_5m2(1),
    "system_5_8.json": pentagonal_5m3(1),
    "system_5_9.json": pentagonal_5m4(1),
}


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--diff", action="store_true")
    args = parser.parse_args()

    GOLDEN_DIR.mkdir(parents=True, exist_ok=True)
    stale = []
    for name, desc in sorted(TARGETS.items()):
        text = json.dumps(build_payload(desc), indent=1) + "\n"
        path = GOLDEN_DIR / name
        if args.diff:
            current = path.read_text() if path.exists() else None
            if current != text:
                stale.append(name)
                print(f"DIFFERS {name}")
            else:
                print(f"ok      {name}")
        else:
            path.write_text(text)
            print(f"wrote   {path}")
    if args.diff and stale:
        sys.exit(1)


if __name__ == "__main__":
    main()
