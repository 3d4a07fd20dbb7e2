"""Reduced expressions and Weyl-group element arithmetic.

A word is a tuple of simple-reflection indices (i_1, .., i_l), read as the
product s_{i_1} .. s_{i_l} acting on the root lattice.  The workhorse is
the inversion sequence beta_k = s_{i_1} .. s_{i_{k-1}}(alpha_{i_k}): a word
is reduced exactly when all beta_k are positive and pairwise distinct, and
for reduced words the beta_k enumerate the inversion set of the element in
the total order the word induces.

Enumeration of all reduced words of an element closes a seed word under
commutation moves s_i s_j = s_j s_i (non-adjacent nodes) and braid moves of
length m(i,j) in {3, 4, 6}; this is the brute-force oracle the quiver-level
operations are tested against.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .cartan import (
    CartanDatum,
    Root,
    coroot_pairing,
    is_negative,
    is_positive,
    num_positive_roots,
    positive_roots,
    reflect,
)
from .errors import BudgetExceededError, NotReducedError

Word = tuple[int, ...]


@dataclass(frozen=True)
class WeylElement:
    """A Weyl group element, stored as the images of the simple roots."""

    datum: CartanDatum
    images: tuple[Root, ...]

    def apply(self, r: Root) -> Root:
        """Image of an arbitrary root-lattice vector."""
        n = self.datum.rank
        out = [0] * n
        for c, image in zip(r, self.images):
            if c:
                for k in range(n):
                    out[k] += c * image[k]
        return tuple(out)

    def __call__(self, r: Root) -> Root:
        return self.apply(r)

    def compose(self, other: "WeylElement") -> "WeylElement":
        """self o other (apply other first)."""
        return WeylElement(self.datum,
                           tuple(self.apply(img) for img in other.images))

    def is_identity(self) -> bool:
        return all(img == self.datum.simple_root(i)
                   for i, img in zip(self.datum.indices, self.images))

    def is_longest(self) -> bool:
        """True iff every simple root is sent to a negative root."""
        return all(is_negative(img) for img in self.images)

    def inverse(self) -> "WeylElement":
        n = self.datum.rank
        mat = [[0] * n for _ in range(n)]  # column j = image of alpha_j
        for j, img in enumerate(self.images):
            for k in range(n):
                mat[k][j] = img[k]
        # invert the integer matrix by solving w(x) = alpha_j for each j
        inv_images = []
        for j in range(n):
            target = [1 if k == j else 0 for k in range(n)]
            inv_images.append(_solve_int(mat, target))
        return WeylElement(self.datum, tuple(tuple(v) for v in inv_images))


def _solve_int(mat: list[list[int]], rhs: list[int]) -> list[int]:
    """Solve an integer system with integer solution (Weyl matrices are unimodular)."""
    from fractions import Fraction

    n = len(rhs)
    a = [[Fraction(mat[r][c]) for c in range(n)] + [Fraction(rhs[r])]
         for r in range(n)]
    for col in range(n):
        piv = next(r for r in range(col, n) if a[r][col])
        a[col], a[piv] = a[piv], a[col]
        pv = a[col][col]
        a[col] = [x / pv for x in a[col]]
        for r in range(n):
            if r != col and a[r][col]:
                f = a[r][col]
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
    out = [a[r][n] for r in range(n)]
    assert all(x.denominator == 1 for x in out)
    return [int(x) for x in out]


def identity(datum: CartanDatum) -> WeylElement:
    return WeylElement(datum, tuple(datum.simple_root(i) for i in datum.indices))


def evaluate(datum: CartanDatum, word: Word) -> WeylElement:
    """The element s_{i_1} .. s_{i_l} acting on roots."""
    for i in word:
        if not 1 <= i <= datum.rank:
            raise IndexError(f"letter {i} out of range for {datum.type_name()}")
    images = [datum.simple_root(j) for j in datum.indices]
    # build right-to-left: s_{i_l} first, then prepend earlier letters
    for i in reversed(word):
        images = [reflect(datum, i, img) for img in images]
    return WeylElement(datum, tuple(images))


def beta_sequence(datum: CartanDatum, word: Word) -> tuple[Root, ...]:
    """beta_k = s_{i_1} .. s_{i_{k-1}}(alpha_{i_k}), k = 1..len(word).

    Defined for any word; for non-reduced words some beta_k repeat or go
    negative, which is exactly the reducedness test.
    """
    n = datum.rank
    images = [datum.simple_root(j) for j in datum.indices]  # running prefix
    betas = []
    for i in word:
        if not 1 <= i <= n:
            raise IndexError(f"letter {i} out of range for {datum.type_name()}")
        betas.append(images[i - 1])
        # images <- images o s_i : alpha_j -> prefix(alpha_j - a_{i j} alpha_i)
        base = images[i - 1]
        row = datum.cartan[i - 1]
        images = [
            tuple(img[k] - row[j] * base[k] for k in range(n))
            for j, img in enumerate(images)
        ]
    return tuple(betas)


def is_reduced(datum: CartanDatum, word: Word) -> bool:
    """Exchange-condition test: all inversion roots positive and distinct."""
    if len(word) > num_positive_roots(datum):
        return False
    betas = beta_sequence(datum, word)
    return all(is_positive(b) for b in betas) and len(set(betas)) == len(betas)


def inversion_roots(datum: CartanDatum, word: Word) -> tuple[Root, ...]:
    """The inversion sequence of a reduced word, in word order."""
    betas = beta_sequence(datum, word)
    if not all(is_positive(b) for b in betas) or len(set(betas)) != len(betas):
        raise NotReducedError(f"word {word} is not reduced")
    return betas


def inversion_set(datum: CartanDatum, w: WeylElement) -> frozenset[Root]:
    """{alpha in Phi+ | w^{-1}(alpha) in Phi-}, independent of any word."""
    winv = w.inverse()
    return frozenset(a for a in positive_roots(datum)
                     if is_negative(winv.apply(a)))


def longest_element(datum: CartanDatum) -> tuple[WeylElement, Word]:
    """The longest element with a witnessing reduced word (greedy descent)."""
    word = []
    w = identity(datum)
    while True:
        for i in datum.indices:
            if is_positive(w.images[i - 1]):
                word.append(i)
                w = _extend(datum, w, i)
                break
        else:
            break
    assert len(word) == num_positive_roots(datum)
    return w, tuple(word)


def _extend(datum: CartanDatum, w: WeylElement, i: int) -> WeylElement:
    """w * s_i, computed by updating the simple-root images."""
    n = datum.rank
    base = w.images[i - 1]
    row = datum.cartan[i - 1]
    images = tuple(
        tuple(img[k] - row[j] * base[k] for k in range(n))
        for j, img in enumerate(w.images))
    return WeylElement(datum, images)


@lru_cache(maxsize=None)
def star_involution(datum: CartanDatum) -> dict[int, int]:
    """The involution i -> i* with w_0(alpha_i) = -alpha_{i*}."""
    w0, _ = longest_element(datum)
    star = {}
    for i in datum.indices:
        img = w0.images[i - 1]
        neg = tuple(-c for c in img)
        support = [j for j, c in enumerate(neg, start=1) if c]
        assert len(support) == 1 and neg[support[0] - 1] == 1
        star[i] = support[0]
    return star


def braid_order(datum: CartanDatum, i: int, j: int) -> int:
    """Order m(i,j) of s_i s_j, from a_ij * a_ji in {0,1,2,3}."""
    prod = datum.a(i, j) * datum.a(j, i)
    return {0: 2, 1: 3, 2: 4, 3: 6}[prod]


def word_moves(datum: CartanDatum, word: Word,
               commutations_only: bool = False):
    """Yield every word one commutation or braid move away from ``word``."""
    l = len(word)
    for p in range(l - 1):
        i, j = word[p], word[p + 1]
        if i == j:
            continue
        m = braid_order(datum, i, j)
        if m == 2:
            yield word[:p] + (j, i) + word[p + 2:]
        elif not commutations_only and p + m <= l:
            segment = word[p:p + m]
            if segment == tuple(i if t % 2 == 0 else j for t in range(m)):
                flipped = tuple(j if t % 2 == 0 else i for t in range(m))
                yield word[:p] + flipped + word[p + m:]


def _closure(datum: CartanDatum, word: Word, commutations_only: bool,
             cap: int | None) -> tuple[Word, ...]:
    seen = {word}
    frontier = [word]
    while frontier:
        nxt = []
        for w in frontier:
            for w2 in word_moves(datum, w, commutations_only):
                if w2 not in seen:
                    if cap is not None and len(seen) >= cap:
                        raise BudgetExceededError(
                            f"word closure exceeded cap {cap}")
                    seen.add(w2)
                    nxt.append(w2)
        frontier = nxt
    return tuple(sorted(seen))


def all_reduced_words(datum: CartanDatum, word: Word,
                      cap: int | None = None) -> tuple[Word, ...]:
    """Every reduced word of the element given by ``word``, lexicographic.

    Closure under all commutation and braid moves; by Matsumoto's theorem
    this reaches every reduced word of the element.
    """
    if not is_reduced(datum, word):
        raise NotReducedError(f"word {word} is not reduced")
    return _closure(datum, word, commutations_only=False, cap=cap)


def commutation_class(datum: CartanDatum, word: Word,
                      cap: int | None = None) -> tuple[Word, ...]:
    """The commutation class of a reduced word, lexicographic."""
    if not is_reduced(datum, word):
        raise NotReducedError(f"word {word} is not reduced")
    return _closure(datum, word, commutations_only=True, cap=cap)


def random_reduced_word(datum: CartanDatum, rng,
                        length: int | None = None) -> Word:
    """A random reduced word, grown by uniform choices among ascents.

    With ``length=None`` a random target length in [1, |Phi+|] is drawn;
    passing ``length=num_positive_roots(datum)`` always ends at w_0.
    """
    npos = num_positive_roots(datum)
    target = rng.randint(1, npos) if length is None else length
    w = identity(datum)
    word: list[int] = []
    while len(word) < target:
        ascents = [i for i in datum.indices if is_positive(w.images[i - 1])]
        if not ascents:
            break
        i = rng.choice(ascents)
        word.append(i)
        w = _extend(datum, w, i)
    return tuple(word)


def parse_word(text: str) -> Word:
    """Parse "1213214321" (ranks <= 9) or "1,2,13,2" into a word."""
    text = text.strip()
    if "," in text:
        return tuple(int(part) for part in text.split(","))
    if not text.isdigit():
        raise ValueError(f"cannot parse word literal {text!r}")
    return tuple(int(ch) for ch in text)


def format_word(word: Word) -> str:
    """Inverse of parse_word, digit string when every letter is < 10."""
    if all(i < 10 for i in word):
        return "".join(str(i) for i in word)
    return ",".join(str(i) for i in word)
