"""Words, cycles, rules and one-step rewriting for string and cycle mode.

Words are tuples of symbol ids.  Symbol ids are dense and assigned in order
of first appearance in the input, and that order is also the order used to
pick the canonical rotation of a cycle.
"""

from __future__ import annotations

import hashlib
import re
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence

Word = tuple  # tuple[int, ...]

MODES = ("string", "cycle")
ARROW = "->"


class ParseError(ValueError):
    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        self.message = message
        self.line = line
        self.column = column
        where = f"line {line}, column {column}: " if line is not None else ""
        super().__init__(where + message)


@dataclass(frozen=True)
class Rule:
    lhs: Word
    rhs: Word
    index: int

    def __post_init__(self):
        if len(self.lhs) == 0:
            raise ValueError("empty left-hand side")


@dataclass(frozen=True)
class RewriteSystem:
    alphabet: tuple  # tuple[str, ...], position = symbol id
    rules: tuple  # tuple[Rule, ...]
    mode: str = "string"
    _ids: dict = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        if self.mode not in MODES:
            raise ValueError(f"unknown mode {self.mode!r}")
        if len(set(self.alphabet)) != len(self.alphabet):
            raise ValueError("duplicate symbol names")
        object.__setattr__(self, "_ids", {name: i for i, name in enumerate(self.alphabet)})
        for k, rule in enumerate(self.rules):
            if rule.index != k:
                raise ValueError("rule indices must be dense and ordered")
            for s in rule.lhs + rule.rhs:
                if not 0 <= s < len(self.alphabet):
                    raise ValueError(f"rule {k} uses a symbol outside the alphabet")

    @classmethod
    def from_pairs(cls, pairs: Iterable[tuple[str, str]], mode: str = "string") -> "RewriteSystem":
        """Build a system from ``("a b", "b a")`` style token strings."""
        alphabet: list[str] = []
        ids: dict[str, int] = {}

        def intern(tokens: str) -> Word:
            out = []
            for tok in tokens.split():
                if tok not in ids:
                    ids[tok] = len(alphabet)
                    alphabet.append(tok)
                out.append(ids[tok])
            return tuple(out)

        rules = []
        for k, (lhs, rhs) in enumerate(pairs):
            rules.append(Rule(intern(lhs), intern(rhs), k))
        return cls(tuple(alphabet), tuple(rules), mode)

    def with_mode(self, mode: str) -> "RewriteSystem":
        return RewriteSystem(self.alphabet, self.rules, mode)

    def symbol_id(self, name: str) -> int:
        return self._ids[name]

    def word(self, tokens: str | Sequence[str]) -> Word:
        if isinstance(tokens, str):
            tokens = tokens.split()
        return tuple(self._ids[t] for t in tokens)

    def tokens(self, w: Word) -> list[str]:
        return [self.alphabet[s] for s in w]

    def show(self, w: Word) -> str:
        return " ".join(self.tokens(w)) if w else "ε"

    @property
    def max_lhs_length(self) -> int:
        return max((len(r.lhs) for r in self.rules), default=0)

    def serialize(self) -> str:
        """Canonical text form; parsing it back yields an equal system."""
        lines = [f"@mode {self.mode}"]
        for r in self.rules:
            lhs = " ".join(self.tokens(r.lhs))
            rhs = " ".join(self.tokens(r.rhs))
            lines.append(f"{lhs} -> {rhs}".rstrip())
        return "\n".join(lines) + "\n"

    def digest(self) -> str:
        return hashlib.sha256(self.serialize().encode("utf-8")).hexdigest()


# ---------------------------------------------------------------- parsing

_TOKEN = re.compile(r"\S+")


class _Interner:
    def __init__(self):
        self.names: list[str] = []
        self.ids: dict[str, int] = {}
        self.rules: list[Rule] = []

    def word(self, tokens: list[str]) -> Word:
        out = []
        for tok in tokens:
            if tok not in self.ids:
                self.ids[tok] = len(self.names)
                self.names.append(tok)
            out.append(self.ids[tok])
        return tuple(out)

    def add_rule(self, text: str, line: int, col: int) -> None:
        """``text`` is one rule; ``col`` is the 1-based column where it starts."""
        if text.count(ARROW) != 1:
            what = "missing '->'" if ARROW not in text else "more than one '->'"
            raise ParseError(what, line, col)
        at = text.index(ARROW)
        lhs_tokens = text[:at].split()
        rhs_tokens = text[at + len(ARROW):].split()
        if not lhs_tokens:
            raise ParseError("empty left-hand side", line, col)
        for m in _TOKEN.finditer(text):
            tok = m.group()
            if tok != ARROW and (ARROW in tok or any(c in tok for c in "(),")):
                raise ParseError(f"bad token {tok!r}", line, col + m.start())
        lhs = self.word(lhs_tokens)
        rhs = self.word(rhs_tokens)
        self.rules.append(Rule(lhs, rhs, len(self.rules)))


def parse_system(text: str, mode_override: str | None = None) -> RewriteSystem:
    """Parse the native line format or the TPDB ``(RULES ...)`` subset."""
    if mode_override is not None and mode_override not in MODES:
        raise ValueError(f"unknown mode {mode_override!r}")
    body = _strip_hash_comments(text)
    if body.lstrip().startswith("("):
        interner, mode = _parse_tpdb(text), "string"
    else:
        interner, mode = _parse_native(text)
    return RewriteSystem(tuple(interner.names), tuple(interner.rules), mode_override or mode)


def _strip_hash_comments(text: str) -> str:
    return "\n".join(line.split("#", 1)[0] for line in text.splitlines())


def _parse_native(text: str) -> tuple[_Interner, str]:
    interner = _Interner()
    mode = "string"
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        stripped = line.strip()
        if not stripped:
            continue
        col = len(line) - len(line.lstrip()) + 1
        if stripped.startswith("@"):
            parts = stripped.split()
            if parts[0] != "@mode":
                raise ParseError(f"unknown directive {parts[0]!r}", lineno, col)
            if len(parts) != 2 or parts[1] not in MODES:
                raise ParseError("expected '@mode string' or '@mode cycle'", lineno, col)
            mode = parts[1]
            continue
        interner.add_rule(line[col - 1:], lineno, col)
    return interner, mode


def _parse_tpdb(text: str) -> _Interner:
    interner = _Interner()
    pos_to_linecol = _position_index(text)
    i, n = 0, len(text)
    found_rules = False
    while i < n:
        c = text[i]
        if c.isspace():
            i += 1
            continue
        if c == "#":
            while i < n and text[i] != "\n":
                i += 1
            continue
        if c != "(":
            raise ParseError("expected '('", *pos_to_linecol(i))
        end = _matching_paren(text, i, pos_to_linecol)
        inner = text[i + 1:end]
        head = inner.split(None, 1)
        if head and head[0] == "RULES":
            found_rules = True
            start = i + 1 + inner.index("RULES") + len("RULES")
            _parse_tpdb_rules(text, start, end, interner, pos_to_linecol)
        i = end + 1
    if not found_rules:
        raise ParseError("no (RULES ...) section")
    return interner


def _parse_tpdb_rules(text, start, end, interner, pos_to_linecol):
    # rules are separated by commas or newlines
    chunk_start = start
    for k in range(start, end + 1):
        if k == end or text[k] in ",\n":
            chunk = text[chunk_start:k]
            if chunk.strip():
                if "(" in chunk or ")" in chunk:
                    raise ParseError("unexpected parenthesis in RULES", *pos_to_linecol(chunk_start))
                if "->=" in chunk:
                    raise ParseError("relative rules '->=' are not supported", *pos_to_linecol(chunk_start))
                lead = len(chunk) - len(chunk.lstrip())
                line, col = pos_to_linecol(chunk_start + lead)
                interner.add_rule(chunk.strip(), line, col)
            chunk_start = k + 1


def _matching_paren(text, i, pos_to_linecol) -> int:
    depth = 0
    for k in range(i, len(text)):
        if text[k] == "(":
            depth += 1
        elif text[k] == ")":
            depth -= 1
            if depth == 0:
                return k
    raise ParseError("unbalanced '('", *pos_to_linecol(i))


def _position_index(text):
    starts = [0]
    for k, c in enumerate(text):
        if c == "\n":
            starts.append(k + 1)

    def lookup(pos: int) -> tuple[int, int]:
        lo, hi = 0, len(starts) - 1
        while lo < hi:
            mid = (lo + hi + 1) // 2
            if starts[mid] <= pos:
                lo = mid
            else:
                hi = mid - 1
        return lo + 1, pos - starts[lo] + 1

    return lookup


# ---------------------------------------------------------------- words and cycles

def rotate(w: Word, k: int) -> Word:
    if not w:
        return w
    k %= len(w)
    return w[k:] + w[:k]


def canonical_rotation(w: Word) -> Word:
    """Lexicographically least rotation (Booth's algorithm)."""
    w = tuple(w)
    n = len(w)
    if n == 0:
        return w
    s = w + w
    fail = [-1] * (2 * n)
    k = 0
    for j in range(1, 2 * n):
        sj = s[j]
        i = fail[j - k - 1]
        while i != -1 and sj != s[k + i + 1]:
            if sj < s[k + i + 1]:
                k = j - i - 1
            i = fail[i]
        if sj != s[k + i + 1]:
            if sj < s[k]:
                k = j
            fail[j - k] = -1
        else:
            fail[j - k] = i + 1
    return s[k:k + n]


def contains_factor(w: Word, f: Word) -> bool:
    m = len(f)
    return any(w[i:i + m] == f for i in range(len(w) - m + 1))


def cyclic_contains_factor(w: Word, f: Word) -> bool:
    if not f:
        raise ValueError("factor must be nonempty")
    if len(f) > len(w):
        return False
    return contains_factor(w + w[:len(f) - 1], f)


def string_steps(w: Word, system: RewriteSystem) -> Iterator[tuple[int, int, Word]]:
    """Yield ``(rule, position, result)`` in rule order, then position order."""
    for rule in system.rules:
        m = len(rule.lhs)
        for p in range(len(w) - m + 1):
            if w[p:p + m] == rule.lhs:
                yield rule.index, p, w[:p] + rule.rhs + w[p + m:]


def string_successors(w: Word, system: RewriteSystem) -> set[tuple[int, int, Word]]:
    return set(string_steps(tuple(w), system))


def cycle_steps(c: Word, system: RewriteSystem) -> Iterator[tuple[int, int, Word]]:
    """Yield ``(rule, rotation offset, canonical result)``.

    A step at offset ``k`` rewrites the prefix of ``rotate(c, k)``.  Redexes
    must fit in one turn, and the empty cycle has no redexes.
    """
    n = len(c)
    for rule in system.rules:
        m = len(rule.lhs)
        if m > n:
            continue
        for k in range(n):
            r = rotate(c, k)
            if r[:m] == rule.lhs:
                yield rule.index, k, canonical_rotation(rule.rhs + r[m:])


def cycle_successors(c: Word, system: RewriteSystem) -> set[tuple[int, Word]]:
    return {(i, res) for i, _, res in cycle_steps(tuple(c), system)}
