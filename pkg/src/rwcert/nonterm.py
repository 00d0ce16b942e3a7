"""SAT search for automaton certificates of non-termination.

Every decoded automaton goes through :func:`check_certificate` before it
is returned; the encoding only has to be good enough to find candidates.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

from .automata import NfaCert, avoid_dfa_for, check_certificate
from .common import Budget
from .rewriting import RewriteSystem
from .sat import Cnf, solve

log = logging.getLogger(__name__)


@dataclass
class VarMap:
    n: int
    mode: str
    t: dict = field(default_factory=dict)  # (p, a, q) -> var
    i: dict = field(default_factory=dict)  # p -> var (string mode)
    f: dict = field(default_factory=dict)  # p -> var (string mode)


class _Encoder:
    def __init__(self, system: RewriteSystem, n: int, witness_len: int):
        self.system = system
        self.n = n
        self.k = len(system.alphabet)
        self.cnf = Cnf()
        self.vm = VarMap(n, system.mode)
        # The internal solver branches on the lowest variable first; deciding
        # the witness run first lets propagation fix most transitions early.
        self.length = witness_len
        self.letter = [[self.cnf.new_var() for _ in range(self.k)] for _ in range(witness_len)]
        self.state = [[self.cnf.new_var() for _ in range(n)] for _ in range(witness_len + 1)]
        for p in range(n):
            for a in range(self.k):
                for q in range(n):
                    self.vm.t[p, a, q] = self.cnf.new_var()
        if system.mode == "string":
            for p in range(n):
                self.vm.i[p] = self.cnf.new_var()
            for p in range(n):
                self.vm.f[p] = self.cnf.new_var()
        self.true = self.cnf.true()
        self._rel: dict = {}

    def relation(self, w) -> dict:
        """``(p, q) -> literal`` that holds iff a path from p to q reads w."""
        w = tuple(w)
        if w in self._rel:
            return self._rel[w]
        n, T, t = self.n, self.true, self.vm.t
        if not w:
            rel = {(p, q): T if p == q else -T for p in range(n) for q in range(n)}
        else:
            prev = self.relation(w[:-1])
            a = w[-1]
            rel = {}
            for p in range(n):
                for q in range(n):
                    ways = []
                    for s in range(n):
                        x = prev[p, s]
                        if x == -T:
                            continue
                        ways.append(t[s, a, q] if x == T else self.cnf.and_of([x, t[s, a, q]]))
                    rel[p, q] = self.cnf.or_of(ways) if ways else -T
        self._rel[w] = rel
        return rel

    def splice(self) -> None:
        T = self.true
        for rule in self.system.rules:
            left, right = self.relation(rule.lhs), self.relation(rule.rhs)
            for (p, q), x in left.items():
                y = right[p, q]
                if y == T:
                    continue
                self.cnf.add_clause([-x] if y == -T else [-x, y])
            if self.system.mode == "cycle" and not rule.rhs:
                for p in range(self.n):
                    self.cnf.add_clause([-left[p, p]])

    def coverage_string(self, dfa) -> None:
        cnf, vm = self.cnf, self.vm
        live = range(len(dfa.states))
        inv = {(p, d): cnf.new_var() for p in range(self.n) for d in live}
        for p in range(self.n):
            cnf.add_clause([-vm.i[p], inv[p, dfa.start]])
            for d in live:
                cnf.add_clause([-inv[p, d], -vm.f[p]])
        for (p, a, q), x in vm.t.items():
            for d in live:
                e = dfa.delta[d][a]
                if e != dfa.sink:
                    cnf.add_clause([-inv[p, d], -x, inv[q, e]])

    def coverage_cycle(self, dfa) -> None:
        """Live product graph acyclic (unary levels) and no short closed walks."""
        cnf, vm = self.cnf, self.vm
        nodes = [(p, d) for p in range(self.n) for d in range(len(dfa.states))]
        top = len(nodes) - 1  # levels 0..top
        level = {v: [None] + [cnf.new_var() for _ in range(top)] for v in nodes}
        for v in nodes:
            for j in range(1, top):
                cnf.add_clause([-level[v][j + 1], level[v][j]])
        for (p, a, q), x in vm.t.items():
            for d in range(len(dfa.states)):
                e = dfa.delta[d][a]
                if e == dfa.sink:
                    continue
                src, dst = level[p, d], level[q, e]
                if top == 0:
                    cnf.add_clause([-x])
                    continue
                cnf.add_clause([-x, src[1]])
                for j in range(1, top):
                    cnf.add_clause([-x, -dst[j], src[j + 1]])
                cnf.add_clause([-x, -dst[top]])

        m = self.system.max_lhs_length
        if m < 2:
            return
        n = self.n
        edge = {(p, q): cnf.new_var() for p in range(n) for q in range(n)}
        for (p, _, q), x in vm.t.items():
            cnf.add_clause([-x, edge[p, q]])
        walk = dict(edge)
        for k in range(1, m):
            for p in range(n):
                cnf.add_clause([-walk[p, p]])
            if k + 1 == m:
                break
            nxt = {(p, q): cnf.new_var() for p in range(n) for q in range(n)}
            for p in range(n):
                for s in range(n):
                    for q in range(n):
                        cnf.add_clause([-walk[p, s], -edge[s, q], nxt[p, q]])
            walk = nxt

    def witness(self) -> None:
        cnf, vm, n = self.cnf, self.vm, self.n
        length, letter, state = self.length, self.letter, self.state
        for row in letter + state:
            cnf.exactly_one(row)
        for pos in range(length):
            for p in range(n):
                for a in range(self.k):
                    for q in range(n):
                        cnf.add_clause([-state[pos][p], -letter[pos][a], -state[pos + 1][q], vm.t[p, a, q]])
        if self.system.mode == "string":
            for p in range(n):
                cnf.add_clause([-state[0][p], vm.i[p]])
                cnf.add_clause([-state[length][p], vm.f[p]])
        else:
            cnf.add_clause([state[0][0]])
            cnf.add_clause([state[length][0]])


def encode_search(system: RewriteSystem, n: int, witness_len: int) -> tuple[Cnf, VarMap]:
    if n < 1 or witness_len < 1:
        raise ValueError("need n >= 1 and witness_len >= 1")
    enc = _Encoder(system, n, witness_len)
    enc.witness()
    enc.splice()
    dfa = avoid_dfa_for(system)
    if system.mode == "string":
        enc.coverage_string(dfa)
    else:
        enc.coverage_cycle(dfa)
    return enc.cnf, enc.vm


def decode_model(model: dict, vm: VarMap) -> NfaCert:
    needed = list(vm.t.values()) + list(vm.i.values()) + list(vm.f.values())
    missing = [v for v in needed if v not in model]
    if missing:
        raise ValueError(f"model lacks variables {missing[:5]}")
    trans = {key for key, v in vm.t.items() if model[v]}
    if vm.mode == "string":
        init = {p for p, v in vm.i.items() if model[v]}
        final = {p for p, v in vm.f.items() if model[v]}
        return NfaCert(vm.n, trans, init, final, "string")
    return NfaCert(vm.n, trans, mode="cycle")


def default_witness_lengths(system: RewriteSystem, n: int) -> range:
    m = max(1, system.max_lhs_length)
    return range(m, max(m, 2 * n) + 1)


def find_certificate(system: RewriteSystem, n_max: int = 3, witness_lengths=None,
                     budget: Budget | None = None, solver: str | None = None) -> NfaCert | None:
    for n in range(1, n_max + 1):
        lengths = witness_lengths if witness_lengths is not None else default_witness_lengths(system, n)
        for length in lengths:
            if budget is not None and budget.expired():
                return None
            cnf, vm = encode_search(system, n, length)
            res = solve(cnf, budget, solver)
            if res.status == "UNKNOWN":
                if budget is not None and budget.expired():
                    return None
                log.info("solver gave up on n=%d, length=%d: %s", n, length, res.reason)
                continue
            if not res.sat:
                continue
            cert = decode_model(res.model, vm)
            report = check_certificate(system, cert)
            if report.valid:
                return cert
            log.error("decoded automaton rejected by checker (%s); encoding bug?", report)
    return None
