"""JSON and CSV serialization.

Exact scalars round-trip bit for bit: rationals as "p/q" strings, algebraic
numbers as coordinate vectors over their field with the minimal polynomial
and the isolating interval of the designated root.
"""

from __future__ import annotations

import json
from fractions import Fraction

from .iet import IetSpec, SignedPermutation
from .numfield import AlgebraicNumber, NumberField, RootEmbedding
from .polys import IntPolynomial


def fraction_to_str(q) -> str:
    q = Fraction(q)
    return f"{q.numerator}/{q.denominator}" if q.denominator != 1 else str(q.numerator)


def fraction_from_str(s) -> Fraction:
    return Fraction(s)


def algebraic_to_json(a: AlgebraicNumber) -> dict:
    return {
        "minpoly": list(a.field.minpoly.coeffs),
        "coords": [fraction_to_str(c) for c in a.coords],
        "embedding": [fraction_to_str(a.embedding.lo), fraction_to_str(a.embedding.hi)],
    }


def algebraic_from_json(obj, _cache=None) -> AlgebraicNumber:
    key = (tuple(obj["minpoly"]), tuple(obj["embedding"]))
    if _cache is not None and key in _cache:
        field, emb = _cache[key]
    else:
        field = NumberField(IntPolynomial(tuple(obj["minpoly"])))
        lo, hi = (fraction_from_str(s) for s in obj["embedding"])
        emb = RootEmbedding(field.minpoly, lo, hi)
        if _cache is not None:
            _cache[key] = (field, emb)
    coords = tuple(fraction_from_str(s) for s in obj["coords"])
    return field.element(coords, emb)


def iet_to_json(E: IetSpec) -> dict:
    lengths = []
    for v in E.lengths:
        if isinstance(v, AlgebraicNumber):
            lengths.append(algebraic_to_json(v))
        elif isinstance(v, float):
            lengths.append(v)
        else:
            lengths.append(fraction_to_str(v))
    origin = (float(E.origin) if E.float_mode
              else fraction_to_str(E.origin) if not isinstance(E.origin, AlgebraicNumber)
              else algebraic_to_json(E.origin))
    return {"lengths": lengths, "signed_permutation": list(E.sp.entries),
            "origin": origin}


def iet_from_json(obj) -> IetSpec:
    cache = {}
    lengths = []
    for v in obj["lengths"]:
        if isinstance(v, dict):
            lengths.append(algebraic_from_json(v, cache))
        elif isinstance(v, float):
            lengths.append(v)
        else:
            lengths.append(fraction_from_str(v))
    o = obj.get("origin", "0")
    if isinstance(o, dict):
        origin = algebraic_from_json(o, cache)
    elif isinstance(o, float):
        origin = o
    else:
        origin = fraction_from_str(o)
    return IetSpec(lengths, SignedPermutation(obj["signed_permutation"]), origin)


def load_iet(path) -> IetSpec:
    with open(path, "r", encoding="utf-8") as fh:
        return iet_from_json(json.load(fh))


def save_iet(E: IetSpec, path):
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(iet_to_json(E), fh, indent=2, sort_keys=True)
        fh.write("\n")


# ---------------------------------------------------------------------------
# CSV renderings (byte-comparable)

def induction_trace_csv(steps) -> str:
    """Rows k,p,t: the signed permutation before step k and the step type;
    the final row carries the closing permutation with an empty type."""
    lines = ["k,p,t"]
    for k, st in enumerate(steps):
        p = " ".join(str(e) for e in st.before)
        lines.append(f"{k},{p},{st.type_bit}")
    if steps:
        p = " ".join(str(e) for e in steps[-1].after)
        lines.append(f"{len(steps)},{p},")
    return "\n".join(lines) + "\n"


def return_words_csv(itineraries) -> str:
    """Rows i,N,I for the first-return words."""
    lines = ["i,N,I"]
    for i, (w, n) in enumerate(zip(itineraries.words, itineraries.exponents),
                               start=1):
        lines.append(f"{i},{n}," + " ".join(str(s) for s in w))
    return "\n".join(lines) + "\n"


def gaps_csv(gs) -> str:
    """Rows n,symbol,orbit_point,gap_length,position."""
    lines = ["n,symbol,orbit_point,gap_length,position"]
    for k, n in enumerate(range(-gs.half_width, gs.half_width + 1)):
        lines.append(f"{n},{int(gs.symbols[k])},{float(gs.orbit_points[k])!r},"
                     f"{float(gs.gap_lengths[k])!r},{float(gs.positions[k])!r}")
    return "\n".join(lines) + "\n"
