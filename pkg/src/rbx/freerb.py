"""Rota-Baxter words, the free (nonunital, weight-zero) Rota-Baxter algebra on a
base algebra, its involution, and the relations of the enveloping Rota-Baxter
algebra of a dendriform algebra.

A word is a tuple of letters.  A generator letter is a tuple of symbols (a
tensor word of length >= 1 over V when the base is T(V), a single basis name
when the base is given by structure constants); a bracketed letter is a
:class:`Bracket` around a word.  Letters of a valid word alternate between
the two kinds.  Elements are finite ``{word: Fraction}`` maps with no zero
coefficients.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping

import numpy as np

from .linalg import matrix_from_columns, rational, solve

DEFAULT_DEPTH_CAP = 4


@dataclass(frozen=True)
class Bracket:
    word: tuple

    def __repr__(self) -> str:
        return f"[{format_word(self.word)}]"


class DepthCapExceeded(RuntimeError):
    def __init__(self, left, right, depth: int, cap: int):
        self.left, self.right, self.depth, self.cap = left, right, depth, cap
        super().__init__(
            f"product {format_word(left)} . {format_word(right)} reaches depth {depth} > cap {cap}"
        )


class WordError(ValueError):
    pass


def is_generator(letter) -> bool:
    return isinstance(letter, tuple)


def validate_word(word) -> None:
    if not isinstance(word, tuple) or not word:
        raise WordError("a Rota-Baxter word is a nonempty tuple of letters")
    for k, letter in enumerate(word):
        if isinstance(letter, Bracket):
            validate_word(letter.word)
        elif not (is_generator(letter) and letter and all(isinstance(s, str) for s in letter)):
            raise WordError(f"letter {k} is neither a generator nor a bracket: {letter!r}")
        if k and is_generator(letter) == is_generator(word[k - 1]):
            kind = "generators" if is_generator(letter) else "brackets"
            raise WordError(f"adjacent {kind} at letters {k - 1} and {k}")


def depth(word) -> int:
    return max((1 + depth(l.word) for l in word if isinstance(l, Bracket)), default=0)


def word_stats(word) -> tuple[int, int, int, int]:
    """(breadth, head, tail, depth); head/tail are 0 for a generator letter, 1 for a bracket."""
    validate_word(word)
    return (
        len(word),
        0 if is_generator(word[0]) else 1,
        0 if is_generator(word[-1]) else 1,
        depth(word),
    )


def format_word(word) -> str:
    out = []
    for letter in word:
        if isinstance(letter, Bracket):
            out.append(f"[{format_word(letter.word)}]")
        else:
            out.append(" ".join(letter))
    return "".join(out)


def _accumulate(acc: dict, word, coeff) -> None:
    v = acc.get(word, 0) + coeff
    if v:
        acc[word] = v
    else:
        acc.pop(word, None)


class FreeRBElement(Mapping):
    """A finite rational combination of Rota-Baxter words."""

    __slots__ = ("_terms",)

    def __init__(self, terms: Mapping | Iterable = ()):
        acc: dict = {}
        items = terms.items() if isinstance(terms, Mapping) else terms
        for w, c in items:
            _accumulate(acc, w, rational(c))
        self._terms = acc

    @classmethod
    def word(cls, *letters) -> "FreeRBElement":
        w = tuple(letters)
        validate_word(w)
        return cls({w: 1})

    def __getitem__(self, w):
        return self._terms[w]

    def __iter__(self):
        return iter(self._terms)

    def __len__(self):
        return len(self._terms)

    def __hash__(self):
        return hash(frozenset(self._terms.items()))

    def __eq__(self, other):
        if isinstance(other, FreeRBElement):
            return self._terms == other._terms
        if other == 0:
            return not self._terms
        return NotImplemented

    def __add__(self, other):
        acc = dict(self._terms)
        for w, c in other.items():
            _accumulate(acc, w, c)
        return FreeRBElement(acc)

    def __neg__(self):
        return FreeRBElement({w: -c for w, c in self._terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __rmul__(self, scalar):
        scalar = rational(scalar)
        return FreeRBElement({w: scalar * c for w, c in self._terms.items()})

    def sorted_terms(self) -> list:
        return sorted(self._terms.items(), key=lambda wc: format_word(wc[0]))

    def max_depth(self) -> int:
        return max((depth(w) for w in self._terms), default=0)

    def __str__(self) -> str:
        return format_element(self)

    def __repr__(self) -> str:
        return f"FreeRBElement({format_element(self)!r})"


def format_coefficient(c: Fraction) -> str:
    c = abs(c)
    if c == 1:
        return ""
    return f"{c.numerator}*" if c.denominator == 1 else f"{c.numerator}/{c.denominator}*"


def format_element(x: FreeRBElement) -> str:
    if not x:
        return "0"
    parts = []
    for k, (w, c) in enumerate(x.sorted_terms()):
        body = format_coefficient(c) + format_word(w)
        if k == 0:
            parts.append(("-" if c < 0 else "") + body)
        else:
            parts.append((" - " if c < 0 else " + ") + body)
    return "".join(parts)


class TensorAlgebra:
    """T(V) = sum_{n>=1} V^n on named symbols, product = concatenation.

    ``involution`` maps a symbol to ``{symbol: coefficient}``; absent symbols
    are fixed.  (v_1 ... v_n)* = v_n* ... v_1*.
    """

    merges_adjacent = True

    def __init__(self, involution: Mapping[str, Mapping[str, Fraction]] | None = None):
        self.involution = {s: {t: rational(c) for t, c in m.items()} for s, m in (involution or {}).items()}

    def check_generator(self, g: tuple) -> None:
        pass

    def multiply(self, g: tuple, h: tuple) -> dict:
        return {g + h: Fraction(1)}

    def star(self, g: tuple) -> dict:
        choices = [self.involution.get(s, {s: Fraction(1)}).items() for s in reversed(g)]
        out: dict = {}
        for combo in itertools.product(*choices):
            word = tuple(s for s, _ in combo)
            coeff = Fraction(1)
            for _, c in combo:
                coeff *= c
            _accumulate(out, word, coeff)
        return out


class StructureAlgebra:
    """A finite-dimensional (nonunital) algebra B given by basis names and structure constants."""

    merges_adjacent = False

    def __init__(self, names, mul, inv=None):
        self.names = tuple(names)
        self.index = {n: i for i, n in enumerate(self.names)}
        self.mul = np.asarray(mul, dtype=object)
        self.inv = None if inv is None else np.asarray(inv, dtype=object)

    @classmethod
    def from_algebra(cls, alg) -> "StructureAlgebra":
        return cls(alg.names, alg.mul, alg.inv)

    def _idx(self, g: tuple) -> int:
        if len(g) != 1 or g[0] not in self.index:
            raise WordError(f"unknown generator {' '.join(g)!r}; basis is {self.names}")
        return self.index[g[0]]

    def check_generator(self, g: tuple) -> None:
        self._idx(g)

    def multiply(self, g: tuple, h: tuple) -> dict:
        i, j = self._idx(g), self._idx(h)
        return {(self.names[k],): rational(c) for k, c in enumerate(self.mul[i, j]) if c != 0}

    def star(self, g: tuple) -> dict:
        i = self._idx(g)
        if self.inv is None:
            raise WordError("base algebra has no involution")
        return {(self.names[k],): rational(c) for k, c in enumerate(self.inv[:, i]) if c != 0}


class FreeRotaBaxter:
    """The free Rota-Baxter algebra on ``base`` with product, R and involution.

    All results are checked against ``depth_cap``; exceeding it raises
    :class:`DepthCapExceeded` instead of silently truncating.
    """

    def __init__(self, base=None, depth_cap: int = DEFAULT_DEPTH_CAP):
        self.base = TensorAlgebra() if base is None else base
        self.depth_cap = depth_cap
        self._cache: dict = {}

    def _letter_product(self, x, y) -> dict:
        if is_generator(x):
            return {(g,): c for g, c in self.base.multiply(x, y).items()}
        out: dict = {}
        for w, c in self._word_product((x,), y.word).items():
            _accumulate(out, (Bracket(w),), c)
        for w, c in self._word_product(x.word, (y,)).items():
            _accumulate(out, (Bracket(w),), c)
        return out

    def _word_product(self, x: tuple, y: tuple) -> dict:
        if is_generator(x[-1]) != is_generator(y[0]):
            return {x + y: Fraction(1)}
        key = (x, y)
        hit = self._cache.get(key)
        if hit is not None:
            return hit
        out: dict = {}
        for w, c in self._letter_product(x[-1], y[0]).items():
            _accumulate(out, x[:-1] + w + y[1:], c)
        self._cache[key] = out
        return out

    def product(self, x: FreeRBElement, y: FreeRBElement) -> FreeRBElement:
        acc: dict = {}
        for wx, cx in x.items():
            for wy, cy in y.items():
                terms = self._word_product(wx, wy)
                for w, c in terms.items():
                    d = depth(w)
                    if d > self.depth_cap:
                        raise DepthCapExceeded(wx, wy, d, self.depth_cap)
                    _accumulate(acc, w, cx * cy * c)
        return FreeRBElement(acc)

    def rb(self, x: FreeRBElement) -> FreeRBElement:
        out = FreeRBElement({(Bracket(w),): c for w, c in x.items()})
        d = out.max_depth()
        if d > self.depth_cap:
            w = next(iter(x))
            raise DepthCapExceeded(w, (), d, self.depth_cap)
        return out

    def _word_star(self, word: tuple) -> dict:
        choices = []
        for letter in reversed(word):
            if isinstance(letter, Bracket):
                choices.append([((Bracket(w),), c) for w, c in self._word_star(letter.word).items()])
            else:
                choices.append([((g,), c) for g, c in self.base.star(letter).items()])
        out: dict = {}
        for combo in itertools.product(*choices):
            w = tuple(itertools.chain.from_iterable(part for part, _ in combo))
            c = Fraction(1)
            for _, k in combo:
                c *= k
            _accumulate(out, w, c)
        return out

    def star(self, x: FreeRBElement) -> FreeRBElement:
        acc: dict = {}
        for w, c in x.items():
            for w2, c2 in self._word_star(w).items():
                _accumulate(acc, w2, c * c2)
        return FreeRBElement(acc)

    def parse(self, text: str) -> FreeRBElement:
        from .wordparse import parse_expression

        return parse_expression(text, self)


def word_product(x: FreeRBElement, y: FreeRBElement, depth_cap: int = DEFAULT_DEPTH_CAP, base=None) -> FreeRBElement:
    return FreeRotaBaxter(base, depth_cap).product(x, y)


def rb_apply(x: FreeRBElement, depth_cap: int = DEFAULT_DEPTH_CAP) -> FreeRBElement:
    return FreeRotaBaxter(None, depth_cap).rb(x)


def word_involution(x: FreeRBElement, base=None) -> FreeRBElement:
    return FreeRotaBaxter(base).star(x)


def enumerate_words(symbols, max_depth: int, max_breadth: int) -> list[tuple]:
    """All valid words over single-symbol generators with every breadth <= max_breadth."""
    gens = [(s,) for s in symbols]
    by_depth = [list(map(lambda g: (g,), gens))]
    words = list(by_depth[0])
    for _ in range(max_depth):
        brackets = [Bracket(w) for w in words]
        new = []
        for b in range(1, max_breadth + 1):
            for start_gen in (True, False):
                kinds = [(k % 2 == 0) == start_gen for k in range(b)]
                for combo in itertools.product(*[gens if g else brackets for g in kinds]):
                    new.append(tuple(combo))
        words = new
    return sorted(set(words), key=lambda w: (depth(w), len(w), format_word(w)))


@dataclass
class EnvelopingRelations:
    labels: list[str]
    generators: list[FreeRBElement]
    involution_images: list[FreeRBElement]
    # coefficients expressing each involution image in the generators (None if not stable)
    certificates: list[dict | None]

    @property
    def stable(self) -> bool:
        return all(c is not None for c in self.certificates)


def enveloping_relations(d, fr: FreeRotaBaxter | None = None) -> EnvelopingRelations:
    """Generators x<y - x[y] and x>y - [x]y of J_R over basis pairs of D, in T(D).

    When D has an involution, each generator's image under * is expressed as
    an exact rational combination of the generators.
    """
    names = list(d.names)
    if fr is None:
        inv = None
        if d.inv is not None:
            inv = {
                names[i]: {names[k]: d.inv[k, i] for k in range(d.dim) if d.inv[k, i] != 0}
                for i in range(d.dim)
            }
        fr = FreeRotaBaxter(TensorAlgebra(inv))
    labels, gens = [], []
    for i, j in itertools.product(range(d.dim), repeat=2):
        x, y = (names[i],), (names[j],)
        lt = FreeRBElement({((names[k],),): c for k, c in enumerate(d.prec[i, j]) if c != 0})
        gt = FreeRBElement({((names[k],),): c for k, c in enumerate(d.succ[i, j]) if c != 0})
        gens.append(lt - FreeRBElement({(x, Bracket((y,))): 1}))
        labels.append(f"{names[i]}<{names[j]} - {names[i]}[{names[j]}]")
        gens.append(gt - FreeRBElement({(Bracket((x,)), y): 1}))
        labels.append(f"{names[i]}>{names[j]} - [{names[i]}]{names[j]}")
    images, certs = [], []
    if d.inv is not None:
        images = [fr.star(g) for g in gens]
        words = sorted({w for e in gens + images for w in e}, key=format_word)
        pos = {w: k for k, w in enumerate(words)}

        def column(e):
            v = np.array([Fraction(0)] * len(words), dtype=object)
            for w, c in e.items():
                v[pos[w]] = c
            return v

        mat = matrix_from_columns([column(g) for g in gens], len(words))
        for img in images:
            sol = solve(mat, column(img))
            certs.append(None if sol is None else {k: c for k, c in enumerate(sol) if c != 0})
    return EnvelopingRelations(labels, gens, images, certs)


def evaluate_in(fr: FreeRotaBaxter, x: FreeRBElement, algebra, R, assignment: Mapping[str, np.ndarray]) -> np.ndarray:
    """Image of ``x`` under the Rota-Baxter morphism extending ``assignment`` (V -> algebra).

    Tensor words map to products of images, brackets to R of the image of the
    inner word.  Used to spot-check the freeness property at bounded depth.
    """
    R = np.asarray(R, dtype=object)

    def word_value(word):
        val = None
        for letter in word:
            if isinstance(letter, Bracket):
                v = R.dot(word_value(letter.word))
            else:
                v = None
                for s in letter:
                    a = np.asarray(assignment[s], dtype=object)
                    v = a if v is None else algebra.product(v, a)
            val = v if val is None else algebra.product(val, v)
        return val

    out = np.array([Fraction(0)] * algebra.dim, dtype=object)
    for w, c in x.items():
        out = out + c * word_value(w)
    return out


__all__ = [
    "Bracket",
    "DepthCapExceeded",
    "WordError",
    "FreeRBElement",
    "FreeRotaBaxter",
    "TensorAlgebra",
    "StructureAlgebra",
    "EnvelopingRelations",
    "word_stats",
    "word_product",
    "rb_apply",
    "word_involution",
    "enveloping_relations",
    "enumerate_words",
    "evaluate_in",
    "format_element",
    "format_word",
    "validate_word",
    "depth",
]
