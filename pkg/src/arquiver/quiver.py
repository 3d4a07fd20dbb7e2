"""Combinatorial AR quivers and the convex order they visualize.

``build_upsilon`` runs the three-step construction on a reduced word:

  (Q1) one vertex per inversion root beta_k, carrying position k and
       residue i_k;
  (Q2) an arrow beta_k -> beta_j whenever k > j, the residues i_k, i_j are
       adjacent in the diagram, and no letter strictly between j and k is
       equal to i_j or i_k;
  (Q3) the arrow color is -(alpha_{i_j}, alpha_{i_k}).

The resulting quiver is a class invariant: words related by commutation
moves produce identical quivers, and equality of quivers (with vertices
keyed by their root labels) characterizes commutation equivalence.  Paths
realize the convex partial order, topological readings recover the whole
commutation class, and for simply laced orientations the quiver of an
adapted word coincides with the classical AR quiver built from the
repetition-quiver coordinates.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from fractions import Fraction

from .cartan import (
    CartanDatum,
    Root,
    build_cartan,
    diagram_distance,
    num_positive_roots,
    pairing,
)
from .errors import (
    BudgetExceededError,
    InvalidTypeError,
    NotReducedError,
    RootNotFoundError,
)
from .words import Word, inversion_roots, is_reduced

Vertex = tuple[int, int, Root]  # (position, residue, root)
Arrow = tuple[int, int, int | Fraction]  # (src position, dst position, color)


class ARQuiver:
    """The combinatorial AR quiver of a commutation class.

    Vertices are indexed by word position; arrows run from larger to
    smaller position.  Instances are immutable after construction and all
    query methods are read-only.
    """

    __slots__ = ("datum", "vertices", "arrows", "_pos_of_root", "_out", "_in",
                 "_key", "_levels")

    def __init__(self, datum: CartanDatum, vertices: tuple[Vertex, ...],
                 arrows: tuple[Arrow, ...]):
        self.datum = datum
        self.vertices = vertices
        self.arrows = arrows
        self._pos_of_root = {root: k for k, _, root in vertices}
        out: dict[int, list[int]] = {k: [] for k, _, _ in vertices}
        inc: dict[int, list[int]] = {k: [] for k, _, _ in vertices}
        for src, dst, _ in arrows:
            out[src].append(dst)
            inc[dst].append(src)
        self._out = {k: tuple(sorted(v)) for k, v in out.items()}
        self._in = {k: tuple(sorted(v)) for k, v in inc.items()}
        self._key = None
        self._levels = None

    # -- basic queries ----------------------------------------------------

    def __len__(self) -> int:
        return len(self.vertices)

    def word(self) -> Word:
        """The residue word the positions came from."""
        return tuple(res for _, res, _ in self.vertices)

    def root_of(self, position: int) -> Root:
        return self.vertices[position - 1][2]

    def residue_of_position(self, position: int) -> int:
        return self.vertices[position - 1][1]

    def position_of(self, root: Root) -> int:
        try:
            return self._pos_of_root[root]
        except KeyError:
            raise RootNotFoundError(
                f"root {root} does not label a vertex") from None

    def has_root(self, root: Root) -> bool:
        return root in self._pos_of_root

    def roots(self) -> tuple[Root, ...]:
        return tuple(root for _, _, root in self.vertices)

    def residue_of(self, root: Root) -> int:
        return self.vertices[self.position_of(root) - 1][1]

    def out_neighbors(self, position: int) -> tuple[int, ...]:
        return self._out[position]

    def in_neighbors(self, position: int) -> tuple[int, ...]:
        return self._in[position]

    def sink_positions(self) -> tuple[int, ...]:
        """Vertices with no outgoing arrow (first readable)."""
        return tuple(k for k, _, _ in self.vertices if not self._out[k])

    def source_positions(self) -> tuple[int, ...]:
        """Vertices with no incoming arrow (last readable)."""
        return tuple(k for k, _, _ in self.vertices if not self._in[k])

    def arrow_color(self, src: int, dst: int) -> int | Fraction:
        for s, d, c in self.arrows:
            if (s, d) == (src, dst):
                return c
        raise KeyError((src, dst))

    # -- canonical form ---------------------------------------------------

    def canonical_key(self):
        """Position-free canonical form; equal keys = commutation equivalent."""
        if self._key is None:
            verts = tuple(sorted((root, res) for _, res, root in self.vertices))
            arrows = tuple(sorted(
                (self.root_of(s), self.root_of(d), c) for s, d, c in self.arrows))
            self._key = (self.datum.family, self.datum.rank, verts, arrows)
        return self._key

    # -- reachability and levels -------------------------------------------

    def reachable_from(self, position: int) -> frozenset[int]:
        seen = {position}
        stack = [position]
        while stack:
            for v in self._out[stack.pop()]:
                if v not in seen:
                    seen.add(v)
                    stack.append(v)
        return frozenset(seen)

    def path_distance(self, a: int, b: int) -> int | None:
        """Min arrow count over directed paths a->..->b, either direction."""
        best = None
        for src, dst in ((a, b), (b, a)):
            dist = {src: 0}
            queue = [src]
            while queue:
                nxt = []
                for u in queue:
                    for v in self._out[u]:
                        if v not in dist:
                            dist[v] = dist[u] + 1
                            nxt.append(v)
                queue = nxt
            if dst in dist and (best is None or dist[dst] < best):
                best = dist[dst]
        return best

    def levels(self) -> dict[int, int]:
        """Longest-path level: sinks at 1, else 1 + max over out-neighbors."""
        if self._levels is None:
            lev: dict[int, int] = {}
            for k in sorted(self._out):  # positions sorted; arrows decrease
                outs = self._out[k]
                lev[k] = 1 if not outs else 1 + max(lev[v] for v in outs)
            self._levels = lev
        return self._levels


def build_upsilon(datum: CartanDatum, word: Word) -> ARQuiver:
    """Construct the combinatorial AR quiver of a reduced word."""
    roots = inversion_roots(datum, word)  # raises NotReducedError
    l = len(word)
    vertices = tuple((k + 1, word[k], roots[k]) for k in range(l))
    arrows = []
    for k in range(1, l):  # 0-based source index
        ik = word[k]
        for j in range(k - 1, -1, -1):
            ij = word[j]
            if diagram_distance(datum, ik, ij) != 1:
                continue
            if any(word[t] in (ij, ik) for t in range(j + 1, k)):
                continue
            alpha_j = datum.simple_root(ij)
            alpha_k = datum.simple_root(ik)
            color = -pairing(datum, alpha_j, alpha_k)
            arrows.append((k + 1, j + 1, color))
    arrows.sort()
    return ARQuiver(datum, vertices, tuple(arrows))


def quivers_equal(q1: ARQuiver, q2: ARQuiver) -> bool:
    """Equality after keying vertices by root labels.

    Positions are construction artifacts; roots are distinct within one
    quiver, so this is a true canonical comparison and coincides with
    commutation equivalence of the source words.
    """
    return q1.canonical_key() == q2.canonical_key()


def convex_leq(q: ARQuiver, a: Root, b: Root) -> bool:
    """a precedes b in the convex order iff a path runs from b down to a."""
    pa, pb = q.position_of(a), q.position_of(b)
    return pa in q.reachable_from(pb)


def convex_comparable(q: ARQuiver, a: Root, b: Root) -> bool:
    return convex_leq(q, a, b) or convex_leq(q, b, a)


def level_function(q: ARQuiver) -> dict[Root, int]:
    """The level of each vertex root (longest-path recursion from sinks)."""
    lev = q.levels()
    return {root: lev[k] for k, _, root in q.vertices}


def compatible_readings(q: ARQuiver, cap: int = 10 ** 6) -> tuple[Word, ...]:
    """All residue words read sinks-first; equals the commutation class.

    Whenever an arrow u -> v exists, v's residue is read before u's, so the
    readings are the topological orders of the precedence DAG.  Raises
    BudgetExceededError past ``cap`` readings.
    """
    remaining_out = {k: len(q.out_neighbors(k)) for k, _, _ in q.vertices}
    ready = sorted(k for k, c in remaining_out.items() if c == 0)
    result: list[Word] = []
    prefix: list[int] = []

    def emit(k: int):
        prefix.append(k)
        removed = []
        for u in q.in_neighbors(k):
            remaining_out[u] -= 1
            if remaining_out[u] == 0:
                removed.append(u)
        return removed

    def retract(k: int, added: list[int]):
        prefix.pop()
        for u in q.in_neighbors(k):
            remaining_out[u] += 1
        return added

    def rec(ready_now: list[int]):
        if len(prefix) == len(q):
            if len(result) >= cap:
                raise BudgetExceededError(
                    f"more than {cap} compatible readings")
            result.append(tuple(q.residue_of_position(k) for k in prefix))
            return
        for idx, k in enumerate(ready_now):
            newly = emit(k)
            rec(sorted(ready_now[:idx] + ready_now[idx + 1:] + newly))
            retract(k, newly)

    rec(ready)
    return tuple(sorted(result))


def count_compatible_readings(q: ARQuiver, cap: int = 10 ** 6) -> int:
    return len(compatible_readings(q, cap=cap))


def reading_starting_at(q: ARQuiver, position: int) -> tuple[int, ...]:
    """One compatible reading (as positions) beginning at a sink vertex."""
    if q.out_neighbors(position):
        raise ValueError(f"vertex {position} is not a sink of the quiver")
    return _greedy_reading(q, first=position, last=None)


def reading_ending_at(q: ARQuiver, position: int) -> tuple[int, ...]:
    """One compatible reading (as positions) ending at a source vertex."""
    if q.in_neighbors(position):
        raise ValueError(f"vertex {position} is not a source of the quiver")
    return _greedy_reading(q, first=None, last=position)


def _greedy_reading(q: ARQuiver, first: int | None,
                    last: int | None) -> tuple[int, ...]:
    remaining_out = {k: len(q.out_neighbors(k)) for k, _, _ in q.vertices}
    order = []
    ready = {k for k, c in remaining_out.items() if c == 0}
    while ready:
        if first is not None and not order and first in ready:
            k = first
        else:
            choices = ready - {last} if last is not None else ready
            if not choices:
                choices = ready
            k = min(choices)
        ready.discard(k)
        order.append(k)
        for u in q.in_neighbors(k):
            remaining_out[u] -= 1
            if remaining_out[u] == 0:
                ready.add(u)
    assert len(order) == len(q)
    return tuple(order)


def canonical_reading(q: ARQuiver) -> Word:
    """The lexicographically least member of the commutation class.

    Greedy: among readable vertices always emit the smallest residue.  Two
    vertices of equal residue are never simultaneously readable (they are
    path-connected), so the choice is unique and the greedy word is the
    lexicographic minimum over all compatible readings.
    """
    remaining_out = {k: len(q.out_neighbors(k)) for k, _, _ in q.vertices}
    ready = {k for k, c in remaining_out.items() if c == 0}
    word = []
    while ready:
        k = min(ready, key=lambda v: (q.residue_of_position(v), v))
        ready.discard(k)
        word.append(q.residue_of_position(k))
        for u in q.in_neighbors(k):
            remaining_out[u] -= 1
            if remaining_out[u] == 0:
                ready.add(u)
    return tuple(word)


# -- sectional paths -------------------------------------------------------


def is_sectional(q: ARQuiver, path: tuple[int, ...]) -> bool:
    """A directed path is sectional iff quiver distance equals diagram
    distance of residues for every pair of its vertices."""
    for u, v in zip(path, path[1:]):
        if v not in q.out_neighbors(u):
            raise ValueError(f"{path} is not a directed path")
    for a, b in itertools.combinations(path, 2):
        d = q.path_distance(a, b)
        if d is None or d != diagram_distance(
                q.datum, q.residue_of_position(a), q.residue_of_position(b)):
            return False
    return True


def sectional_paths(q: ARQuiver) -> tuple[tuple[int, ...], ...]:
    """All maximal sectional paths, as position tuples."""
    results = set()

    def extensions(path: tuple[int, ...]) -> list[int]:
        return [v for v in q.out_neighbors(path[-1])
                if is_sectional(q, path + (v,))]

    def can_prepend(path: tuple[int, ...]) -> bool:
        return any(is_sectional(q, (u,) + path)
                   for u in q.in_neighbors(path[0]))

    def grow(path: tuple[int, ...]):
        exts = extensions(path)
        if not exts:
            results.add(path)
            return
        for v in exts:
            grow(path + (v,))

    for k, _, _ in q.vertices:
        if not can_prepend((k,)):
            grow((k,))
    # drop paths contained in a longer collected path
    maximal = []
    for p in sorted(results, key=len, reverse=True):
        sp = set(p)
        if not any(sp < set(m) and _is_subpath(p, m) for m in maximal):
            maximal.append(p)
    return tuple(sorted(maximal))


def _is_subpath(p: tuple[int, ...], m: tuple[int, ...]) -> bool:
    for start in range(len(m) - len(p) + 1):
        if m[start:start + len(p)] == p:
            return True
    return False


def common_sectional_path(q: ARQuiver, a: Root, b: Root) -> tuple[int, ...] | None:
    """A maximal sectional path containing both roots, if one exists."""
    pa, pb = q.position_of(a), q.position_of(b)
    for path in sectional_paths(q):
        if pa in path and pb in path:
            return path
    return None


def sectional_pairing(q: ARQuiver, a: Root, b: Root) -> int | Fraction:
    """Pairing of two co-sectional roots via the product of arrow colors.

    Along the connecting sectional path the product of colors equals
    (a, b), with an extra factor 2 for every interior vertex of residue 3
    in F4 (short interior residues have squared length 1 instead of 2).
    """
    path = common_sectional_path(q, a, b)
    if path is None:
        raise ValueError("roots do not lie on a common sectional path")
    pa, pb = q.position_of(a), q.position_of(b)
    ia, ib = path.index(pa), path.index(pb)
    if ia > ib:
        ia, ib = ib, ia
    segment = path[ia:ib + 1]
    value: int | Fraction = 1
    for u, v in zip(segment, segment[1:]):
        value *= q.arrow_color(u, v)
    if q.datum.family == "F":
        for t in segment[1:-1]:
            if q.residue_of_position(t) == 3:
                value *= 2
    if isinstance(value, Fraction) and value.denominator == 1:
        value = int(value)
    return value


# -- Dynkin orientations and adaptedness ------------------------------------


@dataclass(frozen=True)
class DynkinOrientation:
    """An orientation of the Dynkin diagram (a Dynkin quiver)."""

    datum: CartanDatum
    arrows: frozenset[tuple[int, int]]  # (tail, head)

    def __post_init__(self):
        undirected = {tuple(sorted(e)) for e in self.arrows}
        if undirected != set(self.datum.edges):
            raise InvalidTypeError("orientation does not cover the diagram")

    def is_sink(self, i: int) -> bool:
        return all(t != i for t, _ in self.arrows)

    def is_source(self, i: int) -> bool:
        return all(h != i for _, h in self.arrows)

    def sinks(self) -> tuple[int, ...]:
        return tuple(i for i in self.datum.indices if self.is_sink(i))

    def sources(self) -> tuple[int, ...]:
        return tuple(i for i in self.datum.indices if self.is_source(i))

    def reflect(self, i: int) -> "DynkinOrientation":
        """s_i(Q): reverse every arrow at i when i is a sink or source."""
        if not (self.is_sink(i) or self.is_source(i)):
            return self
        flipped = frozenset(
            (h, t) if i in (t, h) else (t, h) for t, h in self.arrows)
        return DynkinOrientation(self.datum, flipped)

    def format(self) -> str:
        return " ".join(f"{t}>{h}" for t, h in sorted(self.arrows))

    def __repr__(self) -> str:
        return f"DynkinOrientation({self.datum.type_name()}: {self.format()})"


def all_orientations(datum: CartanDatum) -> tuple[DynkinOrientation, ...]:
    """Every orientation of the diagram, in a deterministic order."""
    edges = sorted(datum.edges)
    out = []
    for mask in range(1 << len(edges)):
        arrows = frozenset(
            (e[0], e[1]) if not (mask >> b) & 1 else (e[1], e[0])
            for b, e in enumerate(edges))
        out.append(DynkinOrientation(datum, arrows))
    return tuple(out)


def adapted_word(orientation: DynkinOrientation) -> Word:
    """A reduced word of w_0 adapted to the orientation (sink peeling).

    Repeatedly reads off the sinks of the running orientation, reflecting
    each in turn, until |Phi+| letters are emitted.
    """
    datum = orientation.datum
    n_letters = num_positive_roots(datum)
    word: list[int] = []
    q = orientation
    while len(word) < n_letters:
        for i in q.sinks():
            if len(word) == n_letters:
                break
            word.append(i)
            q = q.reflect(i)
    result = tuple(word)
    assert is_reduced(datum, result)
    return result


def word_is_adapted(orientation: DynkinOrientation, word: Word) -> bool:
    """Definition check: each letter is a sink of the running orientation."""
    q = orientation
    for i in word:
        if not q.is_sink(i):
            return False
        q = q.reflect(i)
    return True


def is_adapted(datum: CartanDatum,
               q: ARQuiver) -> DynkinOrientation | None:
    """The orientation some compatible reading is adapted to, if any.

    For classes of w_0 the orientation is unique when it exists.  For
    shorter words the search still follows the definition; if several
    orientations admit adapted readings the least one (by arrow set) is
    returned.
    """
    if len(q) == num_positive_roots(datum):
        target = q.canonical_key()
        for orientation in all_orientations(datum):
            word = adapted_word(orientation)
            if build_upsilon(datum, word).canonical_key() == target:
                return orientation
        return None
    for orientation in all_orientations(datum):
        if _has_adapted_reading(q, orientation):
            return orientation
    return None


def _has_adapted_reading(q: ARQuiver, orientation: DynkinOrientation) -> bool:
    """Backtracking over compatible readings, pruned by sink adaptedness."""
    remaining_out = {k: len(q.out_neighbors(k)) for k, _, _ in q.vertices}
    ready = {k for k, c in remaining_out.items() if c == 0}

    def rec(emitted: int, quiv: DynkinOrientation) -> bool:
        if emitted == len(q):
            return True
        for k in sorted(ready):
            res = q.residue_of_position(k)
            if not quiv.is_sink(res):
                continue
            ready.discard(k)
            newly = []
            for u in q.in_neighbors(k):
                remaining_out[u] -= 1
                if remaining_out[u] == 0:
                    newly.append(u)
                    ready.add(u)
            if rec(emitted + 1, quiv.reflect(res)):
                return True
            for u in newly:
                ready.discard(u)
            for u in q.in_neighbors(k):
                remaining_out[u] += 1
            ready.add(k)
        return False

    return rec(0, orientation)


# -- the adapted model: repetition-quiver coordinates ------------------------


def coxeter_number(datum: CartanDatum) -> int:
    """h = 2|Phi+| / n."""
    return 2 * num_positive_roots(datum) // datum.rank


def height_function(orientation: DynkinOrientation) -> dict[int, int]:
    """Heights with xi(head) = xi(tail) + 1 along arrows, max normalized to 0."""
    datum = orientation.datum
    xi = {1: 0}
    pending = set(datum.indices) - {1}
    while pending:
        for t, h in orientation.arrows:
            if t in xi and h not in xi:
                xi[h] = xi[t] + 1
                pending.discard(h)
            elif h in xi and t not in xi:
                xi[t] = xi[h] - 1
                pending.discard(t)
    shift = max(xi.values())
    return {i: v - shift for i, v in xi.items()}


@dataclass(frozen=True)
class GammaQuiver:
    """The AR quiver of an adapted class with its two coordinate systems."""

    orientation: DynkinOrientation
    quiver: ARQuiver
    coxeter: int
    counts: tuple[int, ...]  # r_i, vertices per residue row
    heights: dict[int, int]
    a_coords: dict[Root, tuple[int, int]]  # (i, m), 1 <= m <= r_i
    b_coords: dict[Root, tuple[int, int]]  # (i, xi_i - 2(m-1))


def gamma_q(datum: CartanDatum, orientation: DynkinOrientation) -> GammaQuiver:
    """Build the adapted-case AR quiver with grid coordinates (ADE only).

    The vertex counts are r_i = (h + a_i - b_i)/2 where a_i (resp. b_i)
    counts arrows directed toward i (resp. i*) on the diagram path from i
    to i*.  Labels come from any adapted word: (i, m) is the m-th letter
    of residue i.  The arrow set of the abstract grid is checked against
    the word-built quiver.
    """
    from .cartan import diagram_path
    from .words import star_involution

    if datum.family not in "ADE":
        raise InvalidTypeError(
            f"grid coordinates require a simply laced type, not {datum.type_name()}")
    star = star_involution(datum)
    h = coxeter_number(datum)
    counts = []
    for i in datum.indices:
        path = diagram_path(datum, i, star[i])
        a_i = b_i = 0
        for u, v in zip(path, path[1:]):  # step v is one edge closer to i*
            if (v, u) in orientation.arrows:
                a_i += 1  # arrow points back toward i
            else:
                assert (u, v) in orientation.arrows
                b_i += 1
        assert (h + a_i - b_i) % 2 == 0
        counts.append((h + a_i - b_i) // 2)
    word = adapted_word(orientation)
    quiver = build_upsilon(datum, word)
    seen: dict[int, int] = {i: 0 for i in datum.indices}
    a_coords: dict[Root, tuple[int, int]] = {}
    for k, res, root in quiver.vertices:
        seen[res] += 1
        a_coords[root] = (res, seen[res])
    assert all(seen[i] == counts[i - 1] for i in datum.indices)
    xi = height_function(orientation)
    b_coords = {root: (i, xi[i] - 2 * (m - 1))
                for root, (i, m) in a_coords.items()}
    _check_grid_arrows(orientation, quiver, counts, a_coords)
    return GammaQuiver(
        orientation=orientation,
        quiver=quiver,
        coxeter=h,
        counts=tuple(counts),
        heights=xi,
        a_coords=a_coords,
        b_coords=b_coords,
    )


def _check_grid_arrows(orientation: DynkinOrientation, quiver: ARQuiver,
                       counts: list[int], a_coords: dict[Root, tuple[int, int]]):
    """The grid arrows {(i,m)->(j,m), (j,m)->(i,m-1) | i->j} must equal the
    word-built arrow set under the coordinate bijection."""
    grid = set()
    r = {i + 1: c for i, c in enumerate(counts)}
    for t, h in orientation.arrows:
        for m in range(1, min(r[t], r[h]) + 1):
            grid.add(((t, m), (h, m)))
        for m in range(2, r[h] + 1):
            if m - 1 <= r[t]:
                grid.add(((h, m), (t, m - 1)))
    actual = {(a_coords[quiver.root_of(s)], a_coords[quiver.root_of(d)])
              for s, d, _ in quiver.arrows}
    assert grid == actual, "grid arrows disagree with the word-built quiver"


# -- JSON surface -----------------------------------------------------------


def _color_json(c: int | Fraction):
    return int(c) if isinstance(c, int) or c.denominator == 1 else float(c)


def quiver_to_json(q: ARQuiver) -> str:
    """Stable JSON: vertices ordered by position, arrows by (src, dst)."""
    payload = {
        "type": q.datum.type_name(),
        "word": list(q.word()),
        "vertices": [{"k": k, "residue": res, "root": list(root)}
                     for k, res, root in q.vertices],
        "arrows": [{"src": s, "dst": d, "color": _color_json(c)}
                   for s, d, c in q.arrows],
    }
    return json.dumps(payload, separators=(", ", ": "))


def quiver_from_json(text: str) -> ARQuiver:
    payload = json.loads(text)
    datum = build_cartan(payload["type"][0], int(payload["type"][1:]))
    vertices = tuple((v["k"], v["residue"], tuple(v["root"]))
                     for v in payload["vertices"])
    arrows = tuple(
        (a["src"], a["dst"],
         a["color"] if isinstance(a["color"], int) else Fraction(a["color"]))
        for a in payload["arrows"])
    return ARQuiver(datum, vertices, arrows)
