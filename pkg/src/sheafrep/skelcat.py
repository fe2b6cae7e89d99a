"""Skeletal categories FI and OI: morphism enumeration, factorization, Ore check.

Objects are [n] = {1, ..., n}; morphisms are injections (FI) or strictly
increasing injections (OI), stored as 1-based image tuples.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from itertools import combinations, permutations
from typing import Callable, Sequence


class CatKind(str, Enum):
    FI = "FI"
    OI = "OI"


@dataclass(frozen=True)
class Injection:
    """Injection [m] -> [n]; values[k-1] = image of k."""

    m: int
    n: int
    values: tuple[int, ...]

    def __post_init__(self):
        if len(self.values) != self.m:
            raise ValueError("wrong arity")
        if len(set(self.values)) != self.m:
            raise ValueError("not injective")
        if any(not 1 <= v <= self.n for v in self.values):
            raise ValueError("value out of range")

    def is_order_preserving(self) -> bool:
        return all(a < b for a, b in zip(self.values, self.values[1:]))

    def __call__(self, k: int) -> int:
        return self.values[k - 1]

    def to_json(self) -> dict:
        return {"m": self.m, "n": self.n, "values": list(self.values)}

    @staticmethod
    def from_json(d: dict) -> "Injection":
        return Injection(d["m"], d["n"], tuple(d["values"]))


def identity_injection(n: int) -> Injection:
    return Injection(n, n, tuple(range(1, n + 1)))


def standard_inclusion(m: int, n: int) -> Injection:
    if m > n:
        raise ValueError("no inclusion [m] -> [n] with m > n")
    return Injection(m, n, tuple(range(1, m + 1)))


def coface(n: int, i: int) -> Injection:
    """The OI morphism [n] -> [n+1] whose image misses i."""
    if not 1 <= i <= n + 1:
        raise ValueError("coface index out of range")
    return Injection(n, n + 1, tuple(k if k < i else k + 1 for k in range(1, n + 1)))


def hom_set(kind: CatKind, m: int, n: int) -> list[Injection]:
    """All morphisms [m] -> [n], lexicographic by value tuple."""
    if m < 0 or n < 0:
        raise ValueError("sizes must be nonnegative")
    if m > n:
        return []
    if kind == CatKind.OI:
        return [Injection(m, n, c) for c in combinations(range(1, n + 1), m)]
    values = sorted(permutations(range(1, n + 1), m))
    return [Injection(m, n, tuple(v)) for v in values]


def compose(g: Injection, f: Injection) -> Injection:
    """g after f."""
    if f.n != g.m:
        raise ValueError("domain/codomain mismatch")
    return Injection(f.m, g.n, tuple(g.values[v - 1] for v in f.values))


def canonical_factorization(kind: CatKind, f: Injection):
    """Factor f through the standard inclusion.

    FI: returns (sigma, n - m) with sigma a permutation of [f.n] such that
    sigma o standard_inclusion = f and sigma maps m+1..n to the complement
    of im(f) in increasing order.

    OI: returns (chain, n - m) where chain is the list of cofaces removing
    the missing values in decreasing order, composing (left to right,
    outermost first) to f.
    """
    m, n = f.m, f.n
    missing = sorted(set(range(1, n + 1)) - set(f.values))
    if kind == CatKind.FI:
        sigma = Injection(n, n, tuple(f.values) + tuple(missing))
        return sigma, n - m
    if not f.is_order_preserving():
        raise ValueError("OI morphism must be order preserving")
    # Insert the missing values from smallest to largest; since earlier
    # insertions only touch smaller values, each coface index is the missing
    # value itself.
    chain = []
    k = m
    for d in sorted(missing):
        chain.append(coface(k, d))
        k += 1
    # chain[0] has the smallest codomain; f = chain[-1] o ... o chain[0].
    return list(reversed(chain)), n - m


def compose_chain(chain: Sequence[Injection], base: Injection) -> Injection:
    out = base
    for c in reversed(chain):
        out = compose(c, out)
    return out


# -- finite category description and Ore check -----------------------------------


@dataclass
class FiniteCategory:
    """Explicit finite category: named objects and morphisms plus composition."""

    objects: list[str]
    morphisms: list[str]
    source: dict[str, str]
    target: dict[str, str]
    compose_table: dict[tuple[str, str], str]  # (g, f) -> g o f
    identities: dict[str, str] = field(default_factory=dict)

    def compose(self, g: str, f: str) -> str:
        return self.compose_table[(g, f)]


def kronecker_quiver_category() -> FiniteCategory:
    """Free category on two parallel arrows alpha, beta: x -> y."""
    comp = {}
    for m in ["id_x", "alpha", "beta"]:
        comp[(m, "id_x")] = m
    for m in ["id_y"]:
        comp[("id_y", m)] = m
    comp[("id_y", "alpha")] = "alpha"
    comp[("id_y", "beta")] = "beta"
    comp[("id_y", "id_y")] = "id_y"
    comp[("id_x", "id_x")] = "id_x"
    comp[("alpha", "id_x")] = "alpha"
    comp[("beta", "id_x")] = "beta"
    return FiniteCategory(
        objects=["x", "y"],
        morphisms=["id_x", "id_y", "alpha", "beta"],
        source={"id_x": "x", "id_y": "y", "alpha": "x", "beta": "x"},
        target={"id_x": "x", "id_y": "y", "alpha": "y", "beta": "y"},
        compose_table=comp,
        identities={"x": "id_x", "y": "id_y"},
    )


@dataclass(frozen=True)
class OreWitness:
    f: object
    f_prime: object
    g: object
    g_prime: object


@dataclass(frozen=True)
class OreFailure:
    f: object
    f_prime: object


def _ore_complete_skeletal(kind: CatKind, f: Injection, fp: Injection) -> OreWitness:
    """Constructive completion g o f = g' o f' with codomain [|y| + |y'|]."""
    x, y, yp = f.m, f.n, fp.n
    z = y + yp
    # Common targets: in the OI case t_k = f(k) + f'(k) is strictly
    # increasing and lands in [z]; in the FI case any distinct values do.
    if kind == CatKind.OI:
        t = [f.values[k] + fp.values[k] for k in range(x)]
    else:
        t = list(range(1, x + 1))

    def extend(base: Injection, targets: list[int]) -> Injection:
        # g: [base.n] -> [z] with g(base(k)) = targets[k], remaining values
        # placed into the leftover slots in increasing order (keeps OI
        # morphisms order preserving because each gap is wide enough).
        assigned = {base.values[k]: targets[k] for k in range(x)}
        free_sources = [s for s in range(1, base.n + 1) if s not in assigned]
        used = set(targets)
        g_vals = [0] * base.n
        for s, tv in assigned.items():
            g_vals[s - 1] = tv
        if kind == CatKind.OI:
            # Fill each source monotonically into free targets between its
            # neighbours' images.
            for s in free_sources:
                lo = max((g_vals[j] for j in range(s - 1) if g_vals[j]), default=0)
                cand = lo + 1
                while cand in used:
                    cand += 1
                hi_list = [g_vals[j] for j in range(s, base.n) if g_vals[j]]
                hi = min(hi_list) if hi_list else z + 1
                if cand >= hi:
                    raise AssertionError("no room for order-preserving completion")
                g_vals[s - 1] = cand
                used.add(cand)
        else:
            free_targets = iter(v for v in range(1, z + 1) if v not in used)
            for s in free_sources:
                g_vals[s - 1] = next(free_targets)
        return Injection(base.n, z, tuple(g_vals))

    g = extend(f, t)
    gp = extend(fp, t)
    if compose(g, f) != compose(gp, fp):
        raise AssertionError("completion failed to commute")
    return OreWitness(f, fp, g, gp)


def left_ore_check(cat, bound: int):
    """Certify the left Ore condition for every cospan-to-be within bound.

    For FI / OI (pass a CatKind): all pairs f: x -> y, f': x -> y' with
    |x|, |y|, |y'| <= bound receive a constructive, verified completion.
    For a FiniteCategory: exhaustive search; returns the first OreFailure
    if some pair cannot be completed.

    Returns a list of OreWitness on success, or an OreFailure.
    """
    witnesses: list[OreWitness] = []
    if isinstance(cat, CatKind):
        for x in range(bound + 1):
            for y in range(x, bound + 1):
                for yp in range(x, bound + 1):
                    for f in hom_set(cat, x, y):
                        for fp in hom_set(cat, x, yp):
                            witnesses.append(_ore_complete_skeletal(cat, f, fp))
        return witnesses
    if isinstance(cat, FiniteCategory):
        morphs = cat.morphisms
        for f in morphs:
            for fp in morphs:
                if cat.source[f] != cat.source[fp]:
                    continue
                found = None
                for g in morphs:
                    if cat.source[g] != cat.target[f]:
                        continue
                    for gp in morphs:
                        if cat.source[gp] != cat.target[fp]:
                            continue
                        if cat.target[g] != cat.target[gp]:
                            continue
                        if cat.compose(g, f) == cat.compose(gp, fp):
                            found = OreWitness(f, fp, g, gp)
                            break
                    if found:
                        break
                if not found:
                    return OreFailure(f, fp)
                witnesses.append(found)
        return witnesses
    raise TypeError(f"unsupported category description: {cat!r}")
