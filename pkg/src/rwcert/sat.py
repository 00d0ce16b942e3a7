"""CNF construction, DIMACS interchange and SAT solving.

The internal solver is a plain DPLL with unit propagation over two watched
literals and chronological backtracking.  It always branches on the lowest
unassigned variable, trying ``True`` first, so runs are reproducible.  An
external DIMACS solver can be used instead; its answers are never trusted
without checking the model.
"""

from __future__ import annotations

import logging
import os
import shlex
import subprocess
import tempfile
from dataclasses import dataclass, field

from .common import Budget

log = logging.getLogger(__name__)

SOLVER_ENV = "RWCERT_SAT_SOLVER"


class Cnf:
    def __init__(self, num_vars: int = 0):
        self.num_vars = num_vars
        self.clauses: list[tuple[int, ...]] = []
        self._true = None

    def new_var(self) -> int:
        self.num_vars += 1
        return self.num_vars

    def _check(self, lit: int) -> None:
        if not isinstance(lit, int) or lit == 0 or abs(lit) > self.num_vars:
            raise ValueError(f"unknown variable in literal {lit!r}")

    def add_clause(self, lits) -> None:
        lits = tuple(lits)
        for lit in lits:
            self._check(lit)
        self.clauses.append(lits)

    def true(self) -> int:
        """A variable fixed to true, created on first use."""
        if self._true is None:
            self._true = self.new_var()
            self.add_clause([self._true])
        return self._true

    def define_and(self, y: int, xs) -> int:
        """Clauses for ``y <-> x1 & ... & xk``."""
        xs = list(xs)
        for lit in [y, *xs]:
            self._check(lit)
        for x in xs:
            self.add_clause([-y, x])
        self.add_clause([y] + [-x for x in xs])
        return y

    def define_or(self, y: int, xs) -> int:
        """Clauses for ``y <-> x1 | ... | xk``."""
        xs = list(xs)
        for lit in [y, *xs]:
            self._check(lit)
        for x in xs:
            self.add_clause([y, -x])
        self.add_clause([-y] + xs)
        return y

    def and_of(self, xs) -> int:
        return self.define_and(self.new_var(), xs)

    def or_of(self, xs) -> int:
        return self.define_or(self.new_var(), xs)

    def exactly_one(self, xs) -> None:
        xs = list(xs)
        self.add_clause(xs)
        for i in range(len(xs)):
            for j in range(i + 1, len(xs)):
                self.add_clause([-xs[i], -xs[j]])

    def satisfied_by(self, model) -> bool:
        """``model`` maps variable -> bool (missing variables count as false)."""
        return all(any(model.get(abs(l), False) == (l > 0) for l in c) for c in self.clauses)

    def __eq__(self, other):
        return isinstance(other, Cnf) and (self.num_vars, self.clauses) == (other.num_vars, other.clauses)

    def __repr__(self):
        return f"Cnf(vars={self.num_vars}, clauses={len(self.clauses)})"


@dataclass(frozen=True)
class SolveResult:
    status: str  # "SAT" | "UNSAT" | "UNKNOWN"
    model: dict = field(default=None, repr=False)
    reason: str | None = None

    @property
    def sat(self) -> bool:
        return self.status == "SAT"


UNSAT = SolveResult("UNSAT")


def unknown(reason: str) -> SolveResult:
    return SolveResult("UNKNOWN", None, reason)


# ---------------------------------------------------------------- DIMACS

def write_dimacs(cnf: Cnf) -> bytes:
    lines = [f"p cnf {cnf.num_vars} {len(cnf.clauses)}"]
    lines += [" ".join(map(str, c + (0,))) for c in cnf.clauses]
    return ("\n".join(lines) + "\n").encode("ascii")


def parse_dimacs(data: bytes | str) -> Cnf:
    if isinstance(data, bytes):
        data = data.decode("ascii")
    cnf = None
    expected = None
    current: list[int] = []
    for lineno, line in enumerate(data.splitlines(), start=1):
        parts = line.split()
        if not parts or parts[0] == "c":
            continue
        if parts[0] == "p":
            if cnf is not None or len(parts) != 4 or parts[1] != "cnf":
                raise ValueError(f"line {lineno}: bad header")
            cnf = Cnf(int(parts[2]))
            expected = int(parts[3])
            continue
        if cnf is None:
            raise ValueError(f"line {lineno}: clause before header")
        try:
            lits = [int(p) for p in parts]
        except ValueError:
            raise ValueError(f"line {lineno}: not a literal") from None
        for lit in lits:
            if lit == 0:
                cnf.add_clause(current)
                current = []
            else:
                current.append(lit)
    if cnf is None:
        raise ValueError("missing header")
    if current:
        raise ValueError("unterminated clause")
    if len(cnf.clauses) != expected:
        raise ValueError(f"header announces {expected} clauses, found {len(cnf.clauses)}")
    return cnf


def parse_model(text: str) -> dict:
    """Read ``v`` lines into ``{var: bool}``."""
    model = {}
    for line in text.splitlines():
        parts = line.split()
        if not parts or parts[0] != "v":
            continue
        for p in parts[1:]:
            lit = int(p)
            if lit == 0:
                return model
            model[abs(lit)] = lit > 0
    return model


# ---------------------------------------------------------------- internal DPLL

def solve_internal(cnf: Cnf, budget: Budget | None = None) -> SolveResult:
    n = cnf.num_vars
    val = [0] * (n + 1)  # 1 true, -1 false, 0 unassigned
    clauses: list[list[int]] = []
    units: list[int] = []
    for c in cnf.clauses:
        c = list(dict.fromkeys(c))
        if not c:
            return UNSAT
        if any(-l in c for l in c):
            continue  # tautology
        if len(c) == 1:
            units.append(c[0])
        else:
            clauses.append(c)
    watches: dict[int, list[int]] = {}
    for v in range(1, n + 1):
        watches[v] = []
        watches[-v] = []
    for ci, c in enumerate(clauses):
        watches[c[0]].append(ci)
        watches[c[1]].append(ci)

    trail: list[int] = []
    # decision stack: (trail length before decision, decision literal, already flipped)
    decisions: list[tuple[int, int, bool]] = []
    qhead = 0

    def value(lit):
        v = val[lit if lit > 0 else -lit]
        return v if lit > 0 else -v

    def assign(lit):
        val[lit if lit > 0 else -lit] = 1 if lit > 0 else -1
        trail.append(lit)

    def propagate() -> bool:
        nonlocal qhead
        while qhead < len(trail):
            false_lit = -trail[qhead]
            qhead += 1
            ws = watches[false_lit]
            keep = []
            conflict = False
            for idx, ci in enumerate(ws):
                if conflict:
                    keep.append(ci)
                    continue
                c = clauses[ci]
                if c[0] == false_lit:
                    c[0], c[1] = c[1], c[0]
                first = c[0]
                if value(first) == 1:
                    keep.append(ci)
                    continue
                for k in range(2, len(c)):
                    if value(c[k]) != -1:
                        c[1], c[k] = c[k], c[1]
                        watches[c[1]].append(ci)
                        break
                else:
                    keep.append(ci)
                    if value(first) == -1:
                        conflict = True
                    else:
                        assign(first)
            watches[false_lit] = keep
            if conflict:
                return False
        return True

    for lit in units:
        if value(lit) == -1:
            return UNSAT
        if value(lit) == 0:
            assign(lit)

    def backtrack() -> bool:
        """Undo to the latest unflipped decision and flip it; False if none."""
        nonlocal qhead
        while decisions:
            mark, lit, flipped = decisions.pop()
            for undone in trail[mark:]:
                val[abs(undone)] = 0
            del trail[mark:]
            qhead = mark
            if not flipped:
                decisions.append((mark, -lit, True))
                assign(-lit)
                return True
        return False

    steps = 0
    next_var = 1
    while True:
        steps += 1
        if budget is not None and steps % 256 == 0 and budget.expired():
            return unknown("timeout")
        if not propagate():
            if not backtrack():
                return UNSAT
            next_var = 1
            continue
        while next_var <= n and val[next_var] != 0:
            next_var += 1
        if next_var > n:
            break
        decisions.append((len(trail), next_var, False))
        assign(next_var)

    model = {v: val[v] == 1 for v in range(1, n + 1)}
    if not cnf.satisfied_by(model):
        raise AssertionError("internal solver produced a non-model")
    return SolveResult("SAT", model)


# ---------------------------------------------------------------- external solver

def solver_from_env() -> str | None:
    return os.environ.get(SOLVER_ENV) or None


def solve_external(cnf: Cnf, command: str, budget: Budget | None = None,
                   timeout: float | None = None) -> SolveResult:
    """Run a DIMACS solver on a temporary file.

    Timeouts, cancellation, crashes and unparseable output all give UNKNOWN.
    """
    if budget is None:
        budget = Budget(timeout)
    elif timeout is not None:
        budget = budget.child(timeout)
    if budget.expired():
        return unknown("timeout")
    fd, path = tempfile.mkstemp(suffix=".cnf", prefix="rwcert-")
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(write_dimacs(cnf))
        try:
            proc = subprocess.Popen(shlex.split(command) + [path], stdout=subprocess.PIPE,
                                    stderr=subprocess.DEVNULL, text=True)
        except OSError as e:
            return unknown(f"solver-error: {e}")
        out = None
        while out is None:
            if budget.expired():
                proc.kill()
                proc.communicate()
                return unknown("timeout")
            wait = budget.remaining()
            try:
                out, _ = proc.communicate(timeout=0.05 if wait is None else min(0.05, max(wait, 0.001)))
            except subprocess.TimeoutExpired:
                continue
        return _interpret_output(cnf, out)
    finally:
        try:
            os.unlink(path)
        except OSError:
            pass


def _interpret_output(cnf: Cnf, out: str) -> SolveResult:
    status = None
    for line in out.splitlines():
        parts = line.split()
        if parts[:1] == ["s"]:
            status = " ".join(parts[1:])
    if status == "UNSATISFIABLE":
        return UNSAT
    if status != "SATISFIABLE":
        return unknown("solver-error: no status line")
    try:
        model = parse_model(out)
    except ValueError:
        return unknown("solver-error: bad model")
    full = {v: model.get(v, False) for v in range(1, cnf.num_vars + 1)}
    if not cnf.satisfied_by(full):
        log.warning("external solver returned a model that does not satisfy the formula")
        return unknown("solver-error: model does not satisfy formula")
    return SolveResult("SAT", full)


def solve(cnf: Cnf, budget: Budget | None = None, command: str | None = None) -> SolveResult:
    """External solver if one is configured, else the internal one."""
    command = command or solver_from_env()
    if command:
        return solve_external(cnf, command, budget)
    return solve_internal(cnf, budget)
