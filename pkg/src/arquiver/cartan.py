"""Exact root-system arithmetic for the finite crystallographic types.

Cartan data are built from an explicit table of symmetric bilinear forms,
one per family, normalized so that the arrow colors -(alpha_i, alpha_j)
of the quiver construction come out as drawn in the standard references:
simply laced types have all roots of squared length 2, B has short roots
of squared length 1, C has short 2 / long 4, F4 has long 2 / short 1, and
G2 has long 6 / short 2 (node 1 long).  Everything is exact: integers
throughout, except the single half-integer form entry (alpha_3, alpha_4)
of F4, which is kept as a Fraction.

Nodes are numbered as in Bourbaki's plates: A/B/C are paths 1..n with the
short/long root at node n, D forks at node n-2 (so node 2 is the center
of D4), E hangs node 2 off node 4 of the path 1-3-4-5-6(-7-8).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .errors import InvalidTypeError

Root = tuple[int, ...]

RANK_RANGES: dict[str, tuple[int, int | None]] = {
    "A": (1, None),
    "B": (2, None),
    "C": (2, None),
    "D": (4, None),
    "E": (6, 8),
    "F": (4, 4),
    "G": (2, 2),
}


def _exact(x: Fraction) -> int | Fraction:
    return int(x) if x.denominator == 1 else x


@dataclass(frozen=True)
class CartanDatum:
    """A finite type: Cartan matrix, bilinear form and diagram tree."""

    family: str
    rank: int
    cartan: tuple[tuple[int, ...], ...]
    form: tuple[tuple[int | Fraction, ...], ...]
    edges: frozenset[tuple[int, int]]

    @property
    def indices(self) -> range:
        """The vertex set I = {1, .., n} of the diagram."""
        return range(1, self.rank + 1)

    def neighbors(self, i: int) -> tuple[int, ...]:
        """Diagram neighbors of i, increasing."""
        return tuple(sorted(j for j in self.indices
                            if (min(i, j), max(i, j)) in self.edges and j != i))

    def a(self, i: int, j: int) -> int:
        """Cartan entry <h_i, alpha_j>."""
        return self.cartan[i - 1][j - 1]

    def simple_root(self, i: int) -> Root:
        return tuple(1 if j == i else 0 for j in self.indices)

    def type_name(self) -> str:
        return f"{self.family}{self.rank}"

    def __repr__(self) -> str:
        return f"CartanDatum({self.type_name()})"


def parse_type(name: str) -> tuple[str, int]:
    """Parse a type string like "A5" or "g2" into (family, rank)."""
    name = name.strip().upper()
    if len(name) < 2 or name[0] not in RANK_RANGES or not name[1:].isdigit():
        raise InvalidTypeError(f"cannot parse type {name!r}")
    return name[0], int(name[1:])


def _diagram_edges(family: str, rank: int) -> list[tuple[int, int]]:
    if family in "ABCFG":
        return [(i, i + 1) for i in range(1, rank)]
    if family == "D":
        return [(i, i + 1) for i in range(1, rank - 1)] + [(rank - 2, rank)]
    # E: path 1-3-4-..-n with node 2 attached to node 4
    path = [(1, 3)] + [(i, i + 1) for i in range(3, rank)]
    return path + [(2, 4)]


def _form_table(family: str, rank: int,
                edges: list[tuple[int, int]]) -> list[list[Fraction]]:
    g = [[Fraction(0)] * rank for _ in range(rank)]
    diag = [Fraction(2)] * rank
    if family == "B":
        diag[rank - 1] = Fraction(1)
    elif family == "C":
        diag[rank - 1] = Fraction(4)
    elif family == "F":
        diag = [Fraction(2), Fraction(2), Fraction(1), Fraction(1)]
    elif family == "G":
        diag = [Fraction(6), Fraction(2)]
    for i in range(rank):
        g[i][i] = diag[i]
    for i, j in edges:
        off = Fraction(-1)
        if family == "C" and (i, j) == (rank - 1, rank):
            off = Fraction(-2)
        elif family == "F" and (i, j) == (3, 4):
            off = Fraction(-1, 2)
        elif family == "G":
            off = Fraction(-3)
        g[i - 1][j - 1] = g[j - 1][i - 1] = off
    return g


@lru_cache(maxsize=None)
def build_cartan(family: str, rank: int) -> CartanDatum:
    """Build the Cartan datum of a finite type, e.g. build_cartan("C", 3)."""
    family = family.upper()
    if family not in RANK_RANGES:
        raise InvalidTypeError(f"unknown family {family!r}")
    lo, hi = RANK_RANGES[family]
    if rank < lo or (hi is not None and rank > hi):
        raise InvalidTypeError(f"{family}{rank} is not a supported finite type")
    edges = _diagram_edges(family, rank)
    form = _form_table(family, rank, edges)
    cartan = []
    for i in range(rank):
        row = []
        for j in range(rank):
            aij = 2 * form[i][j] / form[i][i]
            assert aij.denominator == 1
            row.append(int(aij))
        cartan.append(tuple(row))
    return CartanDatum(
        family=family,
        rank=rank,
        cartan=tuple(cartan),
        form=tuple(tuple(_exact(x) for x in row) for row in form),
        edges=frozenset(edges),
    )


def datum_from_name(name: str) -> CartanDatum:
    return build_cartan(*parse_type(name))


def pairing(datum: CartanDatum, r1: Root, r2: Root) -> int | Fraction:
    """Bilinear form (r1, r2), extended from the simple-root table."""
    total = Fraction(0)
    form = datum.form
    for i, ci in enumerate(r1):
        if not ci:
            continue
        for j, cj in enumerate(r2):
            if cj:
                total += ci * cj * form[i][j]
    return _exact(Fraction(total))


def coroot_pairing(datum: CartanDatum, i: int, r: Root) -> int:
    """<h_i, r> = sum_j c_j a_ij."""
    row = datum.cartan[i - 1]
    return sum(c * row[j] for j, c in enumerate(r) if c)


def reflect(datum: CartanDatum, i: int, r: Root) -> Root:
    """Simple reflection s_i(r) = r - <h_i, r> alpha_i."""
    c = coroot_pairing(datum, i, r)
    if not c:
        return r
    out = list(r)
    out[i - 1] -= c
    return tuple(out)


def is_positive(r: Root) -> bool:
    return any(c > 0 for c in r) and all(c >= 0 for c in r)


def is_negative(r: Root) -> bool:
    return any(c < 0 for c in r) and all(c <= 0 for c in r)


def height(r: Root) -> int:
    return sum(r)


@lru_cache(maxsize=None)
def positive_roots(datum: CartanDatum) -> tuple[Root, ...]:
    """All positive roots, ordered by (height, coefficient vector)."""
    found = {datum.simple_root(i) for i in datum.indices}
    frontier = list(found)
    while frontier:
        nxt = []
        for r in frontier:
            for i in datum.indices:
                image = reflect(datum, i, r)
                if is_positive(image) and image not in found:
                    found.add(image)
                    nxt.append(image)
        frontier = nxt
    return tuple(sorted(found, key=lambda r: (height(r), r)))


def num_positive_roots(datum: CartanDatum) -> int:
    return len(positive_roots(datum))


@lru_cache(maxsize=None)
def _distance_table(datum: CartanDatum) -> dict[tuple[int, int], int]:
    table = {}
    for src in datum.indices:
        dist = {src: 0}
        queue = [src]
        while queue:
            nxt = []
            for u in queue:
                for v in datum.neighbors(u):
                    if v not in dist:
                        dist[v] = dist[u] + 1
                        nxt.append(v)
            queue = nxt
        for tgt, d in dist.items():
            table[src, tgt] = d
    return table


def diagram_distance(datum: CartanDatum, i: int, j: int) -> int:
    """Number of edges on the tree path between nodes i and j."""
    return _distance_table(datum)[i, j]


def diagram_path(datum: CartanDatum, i: int, j: int) -> tuple[int, ...]:
    """The unique tree path from i to j, endpoints included."""
    table = _distance_table(datum)
    path = [i]
    cur = i
    while cur != j:
        cur = next(v for v in datum.neighbors(cur)
                   if table[v, j] == table[cur, j] - 1)
        path.append(cur)
    return tuple(path)


def _epsilon_rows(datum: CartanDatum) -> list[tuple[int, ...]]:
    """Each simple root in the orthonormal basis (classical types only)."""
    n = datum.rank
    fam = datum.family
    if fam == "A":
        m = n + 1
        rows = [[0] * m for _ in range(n)]
        for i in range(n):
            rows[i][i] = 1
            rows[i][i + 1] = -1
    elif fam in "BCD":
        m = n
        rows = [[0] * m for _ in range(n)]
        for i in range(n - 1):
            rows[i][i] = 1
            rows[i][i + 1] = -1
        if fam == "B":
            rows[n - 1][n - 1] = 1
        elif fam == "C":
            rows[n - 1][n - 1] = 2
        else:
            rows[n - 1][n - 2] = 1
            rows[n - 1][n - 1] = 1
    else:
        raise InvalidTypeError(
            f"epsilon coordinates are defined for classical types, not {fam}")
    return [tuple(r) for r in rows]


def epsilon_coordinates(datum: CartanDatum, r: Root) -> tuple[int, ...]:
    """Coordinates of r over the orthonormal basis (types A, B, C, D)."""
    rows = _epsilon_rows(datum)
    m = len(rows[0])
    out = [0] * m
    for c, row in zip(r, rows):
        if c:
            for k, e in enumerate(row):
                out[k] += c * e
    return tuple(out)


def format_root(r: Root) -> str:
    """Render a root as a sum of simple roots, e.g. "a1+2a2+a3"."""
    parts = []
    for i, c in enumerate(r, start=1):
        if not c:
            continue
        sign = "-" if c < 0 else ("+" if parts else "")
        mag = abs(c)
        parts.append(f"{sign}{'' if mag == 1 else mag}a{i}")
    return "".join(parts) if parts else "0"


def format_epsilon(coords: tuple[int, ...]) -> str:
    parts = []
    for i, c in enumerate(coords, start=1):
        if not c:
            continue
        sign = "-" if c < 0 else ("+" if parts else "")
        mag = abs(c)
        parts.append(f"{sign}{'' if mag == 1 else mag}e{i}")
    return "".join(parts) if parts else "0"


def format_interval(datum: CartanDatum, r: Root) -> str:
    """Type A interval notation: [i,j] for alpha_i + .. + alpha_j."""
    support = [i for i, c in enumerate(r, start=1) if c]
    if (datum.family != "A" or not support
            or any(r[i - 1] != 1 for i in support)
            or support != list(range(support[0], support[-1] + 1))):
        raise InvalidTypeError(f"{format_root(r)} is not a type A interval root")
    i, j = support[0], support[-1]
    return f"[{i}]" if i == j else f"[{i},{j}]"


def interval_root(datum: CartanDatum, i: int, j: int) -> Root:
    """The type A root alpha_i + .. + alpha_j."""
    if not 1 <= i <= j <= datum.rank:
        raise InvalidTypeError(f"[{i},{j}] is not a root interval in {datum.type_name()}")
    return tuple(1 if i <= k <= j else 0 for k in datum.indices)
