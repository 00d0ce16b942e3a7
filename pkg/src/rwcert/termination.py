"""Rule removal by matrix interpretations, and its independent checker.

Each round finds an interpretation under which every remaining rule weakly
decreases and at least one strictly decreases; the strict ones are dropped.
Weights are naturals, weak steps never increase them and strict steps lower
them, so in any infinite derivation strict rules fire only finitely often and
the tail is an infinite derivation of the remaining rules.  When no rules
remain the system terminates.

Trace weights are invariant under rotation, so they weigh cycles; since every
string step is also a cycle step, a trace round is valid in string mode too.
Affine rounds are only valid in string mode.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .common import VALID, Budget, CheckResult, Exhausted, invalid
from .rewriting import RewriteSystem
from .semiring import (
    TAGS,
    AffineInterpretation,
    Decrease,
    Interpretation,
    admissible,
    affine_admissible,
)


@dataclass(frozen=True)
class SearchParams:
    tags: tuple = TAGS
    dims: tuple = (1, 2)
    bound: int = 2
    affine: bool = True  # string mode only


@dataclass(frozen=True)
class Round:
    interpretation: Interpretation | AffineInterpretation
    removed: frozenset

    @property
    def kind(self) -> str:
        return "affine" if isinstance(self.interpretation, AffineInterpretation) else "trace"


@dataclass(frozen=True)
class RemovalProof:
    rounds: tuple = field(default_factory=tuple)


def _matrices(d: int, bound: int):
    for entries in itertools.product(range(bound + 1), repeat=d * d):
        yield tuple(tuple(entries[i * d:(i + 1) * d]) for i in range(d))


def trace_candidates(tag: str, d: int, bound: int) -> list:
    return [m for m in _matrices(d, bound) if admissible(tag, m)]


def affine_candidates(d: int, bound: int) -> list:
    out = []
    for a in _matrices(d, bound):
        if a[0][0] < 1:
            continue
        for b in itertools.product(range(bound + 1), repeat=d):
            out.append((a, tuple(b)))
    return out


def _search_kind(system, alive, make, candidates, budget):
    """Depth-first assignment of letters in alphabet order.

    A rule is checked as soon as all of its letters are assigned; any rule
    that fails to weakly decrease prunes the branch.
    """
    rules = [system.rules[i] for i in sorted(alive)]
    used = sorted({s for r in rules for s in r.lhs + r.rhs})
    idle = [s for s in range(len(system.alphabet)) if s not in used]
    letters = {s: candidates[0] for s in idle}
    order = {s: k for k, s in enumerate(used)}
    due = [[] for _ in used]
    for r in rules:
        due[max(order[s] for s in r.lhs + r.rhs)].append(r)

    def dfs(k, strict):
        if budget is not None and budget.expired():
            raise Exhausted
        if k == len(used):
            return (make(dict(letters)), frozenset(strict)) if strict else None
        s = used[k]
        for cand in candidates:
            letters[s] = cand
            interp = make(letters)
            now = list(strict)
            for r in due[k]:
                dec = interp.rule_decrease(r)
                if dec == Decrease.NONE:
                    break
                if dec == Decrease.STRICT:
                    now.append(r.index)
            else:
                found = dfs(k + 1, now)
                if found is not None:
                    return found
        del letters[s]
        return None

    return dfs(0, [])


def search_interpretation(system: RewriteSystem, alive, params: SearchParams = SearchParams(),
                          budget: Budget | None = None):
    """Return ``(interpretation, strict rule indices)`` or ``None``.

    Order: dimension, then trace semirings in ``params.tags`` order, then
    (string mode) affine.  Raises :class:`Exhausted` if the budget runs out.
    """
    alive = frozenset(alive)
    if not alive:
        return None
    for d in params.dims:
        for tag in params.tags:
            found = _search_kind(system, alive, lambda ls, tag=tag, d=d: Interpretation(tag, d, ls),
                                 trace_candidates(tag, d, params.bound), budget)
            if found is not None:
                return found
        if params.affine and system.mode == "string":
            found = _search_kind(system, alive, lambda ls, d=d: AffineInterpretation(d, ls),
                                 affine_candidates(d, params.bound), budget)
            if found is not None:
                return found
    return None


def prove_termination(system: RewriteSystem, params: SearchParams = SearchParams(),
                      budget: Budget | None = None) -> RemovalProof | None:
    alive = frozenset(r.index for r in system.rules)
    rounds = []
    try:
        while alive:
            found = search_interpretation(system, alive, params, budget)
            if found is None:
                return None
            interp, strict = found
            rounds.append(Round(interp, strict))
            alive -= strict
    except Exhausted:
        return None
    return RemovalProof(tuple(rounds))


def check_removal_proof(system: RewriteSystem, proof: RemovalProof) -> CheckResult:
    """Recompute every round; no search."""
    alive = set(r.index for r in system.rules)
    symbols = range(len(system.alphabet))
    for k, rnd in enumerate(proof.rounds):
        interp = rnd.interpretation
        where = f"round {k}"
        if not rnd.removed:
            return invalid(f"{where}: removes no rules")
        if not set(rnd.removed) <= alive:
            return invalid(f"{where}: removes a rule that is not alive")
        if any(s not in interp.letters for s in symbols):
            return invalid(f"{where}: missing letter matrix")
        d = interp.dim
        if isinstance(interp, AffineInterpretation):
            if system.mode != "string":
                return invalid(f"{where}: affine interpretation in cycle mode")
            for s in symbols:
                a, b = interp.letters[s]
                if not _square(a, d) or len(b) != d or not affine_admissible(a, b):
                    return invalid(f"{where}: inadmissible letter matrix", system.alphabet[s])
        else:
            if interp.tag not in TAGS:
                return invalid(f"{where}: unknown semiring {interp.tag!r}")
            for s in symbols:
                m = interp.letters[s]
                if not _square(m, d) or not admissible(interp.tag, m):
                    return invalid(f"{where}: inadmissible letter matrix", system.alphabet[s])
        for i in sorted(alive):
            dec = interp.rule_decrease(system.rules[i])
            if i in rnd.removed and dec != Decrease.STRICT:
                return invalid(f"{where}: rule {i} not strict")
            if dec == Decrease.NONE:
                return invalid(f"{where}: rule {i} not weak")
        alive -= set(rnd.removed)
    if alive:
        return invalid(f"rules remain: {sorted(alive)}")
    return VALID


def _square(m, d) -> bool:
    return d >= 1 and len(m) == d and all(len(row) == d for row in m)
