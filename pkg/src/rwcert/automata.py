"""Finite automata as non-termination certificates, and their exact checker.

A certificate is an NFA whose language is nonempty and such that every
accepted word contains a redex (coverage) and, for every rule, each state
pair joined by a path reading the lhs is also joined by a path reading the
rhs (splice).  Rewriting an accepted word at a covered redex then yields an
accepted word again, so an infinite derivation exists.

In cycle mode a nonempty word is accepted when some state has a closed run
reading it.  Coverage is checked on the periodic word: if the product of the
automaton with the redex-avoiding DFA has no cycle, every closed run's
repetition hits a match, and forbidding closed walks shorter than the
longest lhs makes that match fit in one turn of the cycle.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

from .common import VALID, CheckResult, invalid
from .rewriting import RewriteSystem

CONDITIONS = ("nonempty", "splice", "coverage", "min-cycle-length")


@dataclass(frozen=True)
class NfaCert:
    n: int
    transitions: frozenset  # of (p, symbol id, q)
    initial: frozenset = frozenset()
    final: frozenset = frozenset()
    mode: str = "string"

    def __post_init__(self):
        object.__setattr__(self, "transitions", frozenset(self.transitions))
        object.__setattr__(self, "initial", frozenset(self.initial))
        object.__setattr__(self, "final", frozenset(self.final))
        states = range(self.n)
        for p, _, q in self.transitions:
            if p not in states or q not in states:
                raise ValueError(f"transition ({p}, {q}) outside 0..{self.n - 1}")
        if not (self.initial | self.final) <= set(states):
            raise ValueError("initial/final state out of range")

    def successors(self, p: int, a: int) -> set[int]:
        return {q for (x, s, q) in self.transitions if x == p and s == a}

    def edges(self) -> set[tuple[int, int]]:
        return {(p, q) for p, _, q in self.transitions}

    def accepts(self, w) -> bool:
        """String acceptance, or cyclic acceptance in cycle mode."""
        rel = word_relation(self, w)
        if self.mode == "cycle":
            return bool(w) and any((p, p) in rel for p in range(self.n))
        return any((p, q) in rel for p in self.initial for q in self.final)


@dataclass(frozen=True)
class AvoidDfa:
    """Aho-Corasick automaton over the lhs patterns.

    ``states[i]`` is the live state's string (a proper prefix of some pattern
    containing no pattern).  ``delta[i][a]`` is a live state index or
    :attr:`sink`.  State 0 is the empty prefix.
    """

    states: tuple
    delta: tuple
    alphabet_size: int

    @property
    def start(self) -> int:
        return 0

    @property
    def sink(self) -> int:
        return len(self.states)

    def run(self, w, state: int = 0) -> int:
        for a in w:
            if state == self.sink:
                return state
            state = self.delta[state][a]
        return state


def build_avoid_dfa(patterns, alphabet_size: int) -> AvoidDfa:
    patterns = [tuple(p) for p in patterns]
    if any(len(p) == 0 for p in patterns):
        raise ValueError("empty pattern")
    pats = set(patterns)
    prefixes = {()} | {p[:k] for p in patterns for k in range(len(p))}
    # proper prefixes containing no pattern; shorter ones first
    live = sorted((s for s in prefixes if not _has_factor_in(s, pats)), key=lambda s: (len(s), s))
    live_set = set(live)
    index = {s: i for i, s in enumerate(live)}
    sink = len(live)
    delta = []
    for s in live:
        row = []
        for a in range(alphabet_size):
            u = s + (a,)
            if _has_suffix_in(u, pats):
                row.append(sink)
            else:
                # the longest suffix of u that is a live prefix (failure-link closure)
                row.append(index[next(u[i:] for i in range(len(u) + 1) if u[i:] in live_set)])
        delta.append(tuple(row))
    return AvoidDfa(tuple(live), tuple(delta), alphabet_size)


def _has_suffix_in(s, pats) -> bool:
    return any(s[i:] in pats for i in range(len(s)))


def _has_factor_in(s, pats) -> bool:
    return any(_has_suffix_in(s[:j], pats) for j in range(1, len(s) + 1))


def avoid_dfa_for(system: RewriteSystem) -> AvoidDfa:
    return build_avoid_dfa({r.lhs for r in system.rules}, len(system.alphabet))


def word_relation(cert: NfaCert, w) -> set[tuple[int, int]]:
    rel = {(p, p) for p in range(cert.n)}
    step = {}
    for p, a, q in cert.transitions:
        step.setdefault((p, a), set()).add(q)
    for a in w:
        rel = {(p, q) for (p, s) in rel for q in step.get((s, a), ())}
    return rel


def check_nonempty(cert: NfaCert) -> bool:
    if cert.mode == "cycle":
        return _has_cycle(range(cert.n), {p: {q for x, q in cert.edges() if x == p} for p in range(cert.n)})
    seen = set(cert.initial)
    queue = deque(seen)
    while queue:
        p = queue.popleft()
        if p in cert.final:
            return True
        for x, _, q in cert.transitions:
            if x == p and q not in seen:
                seen.add(q)
                queue.append(q)
    return False


def splice_failure(cert: NfaCert, system: RewriteSystem):
    """First ``(rule index, (p, q))`` violating splice, or ``None``.

    In cycle mode an empty-rhs rule must additionally never close a run:
    rewriting a whole cycle to the empty cycle leaves the language.
    """
    for rule in system.rules:
        lrel = word_relation(cert, rule.lhs)
        rrel = word_relation(cert, rule.rhs)
        for pair in sorted(lrel - rrel):
            return rule.index, pair
        if cert.mode == "cycle" and not rule.rhs:
            for p, q in sorted(lrel):
                if p == q:
                    return rule.index, (p, q)
    return None


def check_splice(cert: NfaCert, system: RewriteSystem) -> bool:
    return splice_failure(cert, system) is None


def coverage_witness_string(cert: NfaCert, dfa: AvoidDfa):
    """An accepted redex-free word, or ``None`` if there is none."""
    start = [(p, dfa.start) for p in sorted(cert.initial)]
    parent = {node: None for node in start}
    queue = deque(start)
    trans = sorted(cert.transitions)
    while queue:
        node = queue.popleft()
        p, d = node
        if p in cert.final:
            word = []
            while parent[node] is not None:
                node, a = parent[node]
                word.append(a)
            return tuple(reversed(word))
        for x, a, q in trans:
            if x != p:
                continue
            e = dfa.delta[d][a]
            if e == dfa.sink:
                continue
            nxt = (q, e)
            if nxt not in parent:
                parent[nxt] = (node, a)
                queue.append(nxt)
    return None


def check_redex_coverage_string(cert: NfaCert, dfa: AvoidDfa) -> bool:
    return coverage_witness_string(cert, dfa) is None


def shortest_closed_walk(cert: NfaCert, limit: int):
    """``(length, state)`` of a closed walk shorter than ``limit``, else ``None``."""
    adj = [[False] * cert.n for _ in range(cert.n)]
    for p, q in cert.edges():
        adj[p][q] = True
    power = [row[:] for row in adj]
    for k in range(1, limit):
        for p in range(cert.n):
            if power[p][p]:
                return k, p
        power = [[any(power[i][s] and adj[s][j] for s in range(cert.n)) for j in range(cert.n)]
                 for i in range(cert.n)]
    return None


def product_cycle_word(cert: NfaCert, dfa: AvoidDfa):
    """Letters along a cycle of the live product graph, or ``None``."""
    nodes = [(p, d) for p in range(cert.n) for d in range(len(dfa.states))]
    succ = {v: [] for v in nodes}
    for p, a, q in sorted(cert.transitions):
        for d in range(len(dfa.states)):
            e = dfa.delta[d][a]
            if e != dfa.sink:
                succ[(p, d)].append(((q, e), a))
    color = {v: 0 for v in nodes}
    for root in nodes:
        if color[root]:
            continue
        stack = [(root, iter(succ[root]))]
        path = [(root, None)]
        color[root] = 1
        while stack:
            v, it = stack[-1]
            for w, a in it:
                if color[w] == 1:
                    k = next(i for i, (u, _) in enumerate(path) if u == w)
                    return tuple(x for _, x in path[k + 1:]) + (a,)
                if color[w] == 0:
                    color[w] = 1
                    stack.append((w, iter(succ[w])))
                    path.append((w, a))
                    break
            else:
                color[v] = 2
                stack.pop()
                path.pop()
    return None


def check_redex_coverage_cycle(cert: NfaCert, dfa: AvoidDfa, max_lhs: int) -> bool:
    return product_cycle_word(cert, dfa) is None and shortest_closed_walk(cert, max_lhs) is None


def _has_cycle(nodes, succ) -> bool:
    indeg = {v: 0 for v in nodes}
    for v in nodes:
        for w in succ[v]:
            indeg[w] += 1
    queue = deque(v for v in nodes if indeg[v] == 0)
    removed = 0
    while queue:
        v = queue.popleft()
        removed += 1
        for w in succ[v]:
            indeg[w] -= 1
            if indeg[w] == 0:
                queue.append(w)
    return removed < len(indeg)


@dataclass(frozen=True)
class CheckReport:
    valid: bool
    condition: str | None = None
    witness: object = field(default=None)

    def __bool__(self):
        return self.valid

    def __str__(self):
        return "VALID" if self.valid else f"INVALID({self.condition})"

    def as_result(self) -> CheckResult:
        return VALID if self.valid else invalid(self.condition, self.witness)


def check_certificate(system: RewriteSystem, cert: NfaCert) -> CheckReport:
    if cert.mode != system.mode:
        raise ValueError(f"certificate is for {cert.mode} mode, system is {system.mode}")
    if not check_nonempty(cert):
        return CheckReport(False, "nonempty")
    bad = splice_failure(cert, system)
    if bad is not None:
        return CheckReport(False, "splice", bad)
    dfa = avoid_dfa_for(system)
    if cert.mode == "string":
        w = coverage_witness_string(cert, dfa)
        if w is not None:
            return CheckReport(False, "coverage", w)
    else:
        walk = shortest_closed_walk(cert, system.max_lhs_length)
        if walk is not None:
            return CheckReport(False, "min-cycle-length", walk)
        w = product_cycle_word(cert, dfa)
        if w is not None:
            return CheckReport(False, "coverage", w)
    return CheckReport(True)
