"""Arithmetic, tropical and arctic matrix weights for words and cycles.

Infinite elements are ``math.inf`` (tropical zero) and ``-math.inf`` (arctic
zero).  With that choice the order of every semiring is plain numeric
comparison, so only addition and multiplication depend on the tag.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from functools import reduce

INF = math.inf
NEG_INF = -math.inf

TAGS = ("tropical", "arctic", "arithmetic")

Matrix = tuple  # tuple[tuple[value, ...], ...]


class Decrease(enum.IntEnum):
    NONE = 0
    WEAK = 1
    STRICT = 2


@dataclass(frozen=True)
class Semiring:
    tag: str
    zero: float
    one: int

    def check(self, x) -> None:
        if isinstance(x, bool) or not isinstance(x, (int, float)):
            raise ValueError(f"{x!r} is not a {self.tag} value")
        if x == self.zero or (isinstance(x, int) and x >= 0):
            return
        if isinstance(x, float) and x.is_integer() and x >= 0:
            return
        raise ValueError(f"{x!r} is not a {self.tag} value")

    def add(self, x, y):
        self.check(x)
        self.check(y)
        if self.tag == "tropical":
            return min(x, y)
        if self.tag == "arctic":
            return max(x, y)
        return x + y

    def mul(self, x, y):
        self.check(x)
        self.check(y)
        if self.tag == "arithmetic":
            return x * y
        return x + y

    def le(self, x, y) -> bool:
        return x <= y

    def lt(self, x, y) -> bool:
        return x < y

    def sum(self, xs):
        return reduce(self.add, xs, self.zero)


SEMIRINGS = {
    "arithmetic": Semiring("arithmetic", 0, 1),
    "tropical": Semiring("tropical", INF, 0),
    "arctic": Semiring("arctic", NEG_INF, 0),
}


def semiring(tag: str) -> Semiring:
    try:
        return SEMIRINGS[tag]
    except KeyError:
        raise ValueError(f"unknown semiring {tag!r}") from None


def identity(tag: str, d: int) -> Matrix:
    sr = semiring(tag)
    return tuple(tuple(sr.one if i == j else sr.zero for j in range(d)) for i in range(d))


def mat_mul(tag: str, a: Matrix, b: Matrix) -> Matrix:
    d = len(a)
    if len(b) != d or any(len(row) != d for row in a) or any(len(row) != d for row in b):
        raise ValueError("dimension mismatch")
    cols = list(zip(*b))
    if tag == "arithmetic":
        return tuple(tuple(sum(x * y for x, y in zip(row, col)) for col in cols) for row in a)
    if tag == "tropical":
        return tuple(tuple(min(x + y for x, y in zip(row, col)) for col in cols) for row in a)
    if tag == "arctic":
        return tuple(tuple(max(x + y for x, y in zip(row, col)) for col in cols) for row in a)
    raise ValueError(f"unknown semiring {tag!r}")


def trace(tag: str, m: Matrix):
    diag = [m[i][i] for i in range(len(m))]
    if tag == "arithmetic":
        return sum(diag)
    if tag == "tropical":
        return min(diag)
    return max(diag)


def compare(left: Matrix, right: Matrix) -> Decrease:
    """Entrywise comparison of ``left`` against ``right``."""
    strict = True
    for lrow, rrow in zip(left, right):
        for x, y in zip(lrow, rrow):
            if x < y:
                return Decrease.NONE
            if not x > y:
                strict = False
    return Decrease.STRICT if strict else Decrease.WEAK


def admissible(tag: str, m: Matrix) -> bool:
    """Letter matrices must be finite naturals; arithmetic ones also need a
    nonzero entry in every row and every column."""
    if any(not isinstance(x, int) or isinstance(x, bool) or x < 0 for row in m for x in row):
        return False
    if tag == "arithmetic":
        if any(not any(row) for row in m) or any(not any(col) for col in zip(*m)):
            return False
    return True


@dataclass(frozen=True)
class Interpretation:
    """Trace interpretation: one square matrix per symbol id."""

    tag: str
    dim: int
    letters: dict  # symbol id -> Matrix

    def word_matrix(self, w) -> Matrix:
        m = identity(self.tag, self.dim)
        for s in w:
            try:
                m = mat_mul(self.tag, m, self.letters[s])
            except KeyError:
                raise KeyError(f"no matrix for symbol {s}") from None
        return m

    def cycle_weight(self, c):
        if not c:
            raise ValueError("empty cycle has no weight")
        return trace(self.tag, self.word_matrix(c))

    def rule_decrease(self, rule) -> Decrease:
        return compare(self.word_matrix(rule.lhs), self.word_matrix(rule.rhs))


def word_matrix(interp: Interpretation, w) -> Matrix:
    return interp.word_matrix(w)


def cycle_weight(interp: Interpretation, c):
    return interp.cycle_weight(c)


def rule_decrease(interp: Interpretation, rule) -> Decrease:
    return interp.rule_decrease(rule)


# ---------------------------------------------------------------- affine (string mode)

@dataclass(frozen=True)
class AffineInterpretation:
    """Per-letter maps ``x -> A x + b`` over naturals; a word denotes the
    composition of its letters' maps, leftmost letter outermost."""

    dim: int
    letters: dict  # symbol id -> (Matrix, vector)

    def word_map(self, w) -> tuple[Matrix, tuple]:
        d = self.dim
        mat = identity("arithmetic", d)
        vec = (0,) * d
        # f_w = f_{w0} o f_{w1} o ...; build from the right
        for s in reversed(w):
            a, b = self.letters[s]
            vec = tuple(sum(a[i][k] * vec[k] for k in range(d)) + b[i] for i in range(d))
            mat = mat_mul("arithmetic", a, mat)
        return mat, vec

    def value(self, w) -> int:
        """First component of the word's map applied to the zero vector."""
        return self.word_map(w)[1][0]

    def rule_decrease(self, rule) -> Decrease:
        al, bl = self.word_map(rule.lhs)
        ar, br = self.word_map(rule.rhs)
        weak = compare(al, ar) != Decrease.NONE and all(x >= y for x, y in zip(bl, br))
        if not weak:
            return Decrease.NONE
        return Decrease.STRICT if bl[0] >= br[0] + 1 else Decrease.WEAK


def affine_admissible(a: Matrix, b) -> bool:
    vals = [x for row in a for x in row] + list(b)
    if any(not isinstance(x, int) or isinstance(x, bool) or x < 0 for x in vals):
        return False
    return a[0][0] >= 1


def affine_rule_decrease(interp: AffineInterpretation, rule) -> Decrease:
    return interp.rule_decrease(rule)
