"""Loop detection by bounded breadth-first search, and the loop checker.

A string loop ``s ->+ u s v`` gives an infinite derivation by replaying it
inside its own result.  String steps are also cycle steps, so string loops
serve cycle mode as well.  The only cycle-specific loop accepted is an exact
return ``[s] ->+ [s]``: derivations that use the wrap-around do not carry
over to longer cycles.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

from .common import VALID, Budget, CheckResult, invalid
from .rewriting import RewriteSystem, canonical_rotation, contains_factor, cycle_steps, rotate, string_steps


@dataclass(frozen=True)
class LoopCert:
    kind: str  # "string" | "cycle"
    seed: tuple
    # (rule index, position or rotation offset, resulting word or canonical cycle)
    steps: tuple


@dataclass(frozen=True)
class LoopParams:
    depth: int = 25
    length_cap: int = 40
    max_nodes: int = 20000  # per seed and search kind


def _bfs(seed, successors, closes, params, budget):
    parent = {seed: None}
    frontier = [seed]
    explored = 0
    for _ in range(params.depth):
        if budget is not None and budget.expired():
            return None
        nxt = []
        for word in frontier:
            explored += 1
            if explored % 256 == 0 and budget is not None and budget.expired():
                return None
            for rule, pos, res in successors(word):
                if len(res) > params.length_cap:
                    continue
                if closes(res):
                    steps = [(rule, pos, res)]
                    node = word
                    while parent[node] is not None:
                        prev, step = parent[node]
                        steps.append(step)
                        node = prev
                    return tuple(reversed(steps))
                if res not in parent:
                    if len(parent) >= params.max_nodes:
                        return None
                    parent[res] = (word, (rule, pos, res))
                    nxt.append(res)
        if not nxt:
            return None
        frontier = nxt
    return None


def find_loop(system: RewriteSystem, params: LoopParams = LoopParams(),
              budget: Budget | None = None) -> LoopCert | None:
    seeds = list(dict.fromkeys(r.lhs for r in system.rules))
    for seed in seeds:
        steps = _bfs(seed, lambda w: string_steps(w, system),
                     lambda w, s=seed: contains_factor(w, s), params, budget)
        if steps:
            return LoopCert("string", seed, steps)
        if system.mode == "cycle":
            start = canonical_rotation(seed)
            steps = _bfs(start, lambda c: cycle_steps(c, system),
                         lambda c, s=start: c == s, params, budget)
            if steps:
                return LoopCert("cycle", start, steps)
        if budget is not None and budget.expired():
            return None
    return None


def _string_step_ok(system, word, rule, pos, result) -> bool:
    if not 0 <= rule < len(system.rules):
        return False
    r = system.rules[rule]
    m = len(r.lhs)
    return (0 <= pos <= len(word) - m and word[pos:pos + m] == r.lhs
            and tuple(result) == word[:pos] + r.rhs + word[pos + m:])


def _cycle_step_ok(system, cycle, rule, offset, result) -> bool:
    if not 0 <= rule < len(system.rules) or not cycle:
        return False
    r = system.rules[rule]
    m = len(r.lhs)
    if m > len(cycle) or not 0 <= offset < len(cycle):
        return False
    rot = rotate(cycle, offset)
    return rot[:m] == r.lhs and tuple(result) == canonical_rotation(r.rhs + rot[m:])


def check_loop(system: RewriteSystem, cert: LoopCert) -> CheckResult:
    """Replay every step and check the closing condition."""
    if not cert.steps:
        return invalid("empty trace")
    if not cert.seed:
        return invalid("empty seed")
    if cert.kind == "string":
        current = tuple(cert.seed)
        ok = _string_step_ok
    elif cert.kind == "cycle":
        if system.mode != "cycle":
            return invalid("cycle loop in string mode")
        current = canonical_rotation(cert.seed)
        ok = _cycle_step_ok
    else:
        return invalid(f"unknown loop kind {cert.kind!r}")
    for k, (rule, pos, result) in enumerate(cert.steps, start=1):
        if not ok(system, current, rule, pos, result):
            return invalid(f"step {k} not a rewrite")
        current = tuple(result)
    if cert.kind == "string" and not contains_factor(current, tuple(cert.seed)):
        return invalid("not closing")
    if cert.kind == "cycle" and current != canonical_rotation(cert.seed):
        return invalid("not closing")
    return VALID


def unroll(system: RewriteSystem, cert: LoopCert, rounds: int):
    """Replay a string loop inside its own result ``rounds`` more times.

    Yields ``(word, rule, position, result)`` for every step of the
    continuation; used to demonstrate that the loop really is infinite.
    """
    seed = tuple(cert.seed)
    word = tuple(cert.steps[-1][2])
    for _ in range(rounds):
        at = next(i for i in range(len(word) - len(seed) + 1) if word[i:i + len(seed)] == seed)
        prefix, suffix = word[:at], word[at + len(seed):]
        for rule, pos, result in cert.steps:
            res = prefix + tuple(result) + suffix
            yield word, rule, len(prefix) + pos, res
            word = res
