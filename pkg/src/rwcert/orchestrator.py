"""Engine racing, verdicts, benchmarking and the random test corpus."""

from __future__ import annotations

import csv
import logging
import random
import threading
import time
from concurrent.futures import FIRST_COMPLETED, ThreadPoolExecutor, wait
from dataclasses import dataclass, field
from pathlib import Path

from .certificates import make_certificate, verify
from .common import Budget
from .loops import LoopParams, find_loop
from .nonterm import find_certificate
from .rewriting import ParseError, RewriteSystem, parse_system
from .termination import SearchParams, prove_termination

log = logging.getLogger(__name__)

ENGINES = ("loop", "matrix", "automata")  # also the tie-break priority

TERMINATING = "TERMINATING"
NONTERMINATING = "NONTERMINATING"
MAYBE = "MAYBE"


@dataclass(frozen=True)
class Verdict:
    status: str
    engine: str | None = None
    proof: object = field(default=None, repr=False)
    certificate: dict | None = field(default=None, repr=False)
    reason: str | None = None

    @property
    def definitive(self) -> bool:
        return self.status != MAYBE


@dataclass(frozen=True)
class ProveConfig:
    mode: str | None = None
    engines: tuple = ENGINES
    timeout: float = 60.0
    search: SearchParams = SearchParams()
    loop: LoopParams = LoopParams()
    automata_states: int = 4
    witness_lengths: tuple | None = None
    solver: str | None = None


def parse_engines(text: str) -> tuple:
    names = [s.strip() for s in text.split(",") if s.strip()]
    if not names or "auto" in names:
        if names not in (["auto"], []):
            raise ValueError("'auto' cannot be combined with other engines")
        return ENGINES
    for name in names:
        if name not in ENGINES:
            raise ValueError(f"unknown engine {name!r}")
    return tuple(e for e in ENGINES if e in names)


def _run_engine(name: str, system: RewriteSystem, config: ProveConfig, budget: Budget):
    if name == "loop":
        return find_loop(system, config.loop, budget)
    if name == "matrix":
        return prove_termination(system, config.search, budget)
    if name == "automata":
        return find_certificate(system, config.automata_states, config.witness_lengths, budget, config.solver)
    raise ValueError(f"unknown engine {name!r}")


def run_prove(system: RewriteSystem, config: ProveConfig = ProveConfig()) -> Verdict:
    """Race the configured engines; the first checked result wins.

    Results arriving in the same poll are ranked loop > matrix > automata.
    Every certificate is re-verified by the independent checker before it
    is accepted.
    """
    if config.mode is not None:
        system = system.with_mode(config.mode)
    engines = [e for e in ENGINES if e in config.engines]
    if not engines:
        return Verdict(MAYBE, reason="no engines selected")
    cancel = threading.Event()
    budget = Budget(config.timeout, cancel)
    failures = []
    pool = ThreadPoolExecutor(max_workers=len(engines), thread_name_prefix="rwcert")
    try:
        futures = {pool.submit(_run_engine, e, system, config, budget): e for e in engines}
        pending = set(futures)
        while pending:
            done, pending = wait(pending, timeout=budget.remaining(), return_when=FIRST_COMPLETED)
            if not done:
                break
            for fut in sorted(done, key=lambda f: ENGINES.index(futures[f])):
                name = futures[fut]
                try:
                    proof = fut.result()
                except Exception as e:  # an engine crash must not decide anything
                    log.exception("engine %s failed", name)
                    failures.append(f"{name}: {e}")
                    continue
                if proof is None:
                    continue
                cert = make_certificate(system, proof)
                check = verify(system, cert)
                if not check:
                    log.error("engine %s produced a certificate that fails checking: %s", name, check)
                    failures.append(f"{name}: rejected certificate")
                    continue
                return Verdict(cert["claim"], name, proof, cert)
        reason = "timeout" if budget.expired() else "all engines exhausted"
        if failures:
            reason += "; " + "; ".join(failures)
        return Verdict(MAYBE, reason=reason)
    finally:
        cancel.set()
        pool.shutdown(wait=True)


def prove_file(path, config: ProveConfig = ProveConfig()) -> Verdict:
    text = Path(path).read_text(encoding="utf-8")
    return run_prove(parse_system(text, config.mode), config)


def run_check(cert: dict, system_text: str):
    """Verify a certificate object against a system file's contents."""
    mode = cert.get("mode") if isinstance(cert, dict) else None
    system = parse_system(system_text, mode if mode in ("string", "cycle") else None)
    return verify(system, cert)


BENCH_COLUMNS = ["name", "mode", "verdict", "engine", "seconds"]


def run_bench(directory, report_path=None, config: ProveConfig = ProveConfig()) -> list[dict]:
    rows = []
    for path in sorted(p for p in Path(directory).iterdir() if p.is_file()):
        start = time.monotonic()
        try:
            system = parse_system(path.read_text(encoding="utf-8"), config.mode)
        except (OSError, UnicodeDecodeError, ParseError) as e:
            log.warning("%s: %s", path.name, e)
            rows.append({"name": path.name, "mode": config.mode or "", "verdict": "ERROR",
                         "engine": "", "seconds": f"{time.monotonic() - start:.3f}"})
            continue
        verdict = run_prove(system, config)
        rows.append({"name": path.name, "mode": system.mode, "verdict": verdict.status,
                     "engine": verdict.engine or "", "seconds": f"{time.monotonic() - start:.3f}"})
    if report_path is not None:
        with open(report_path, "w", newline="", encoding="utf-8") as fh:
            writer = csv.DictWriter(fh, fieldnames=BENCH_COLUMNS)
            writer.writeheader()
            writer.writerows(rows)
    return rows


@dataclass(frozen=True)
class RandomParams:
    max_alphabet: int = 3
    max_rules: int = 3
    max_side: int = 4
    mode: str = "string"


def generate_random_system(seed: int, params: RandomParams = RandomParams()) -> RewriteSystem:
    """Deterministic small random system; built through the parser."""
    rng = random.Random(seed)
    letters = "abcdefghijklmnopqrstuvwxyz"[:max(1, params.max_alphabet)]
    k = rng.randint(1, len(letters))
    n_rules = rng.randint(1, params.max_rules) if params.max_rules > 0 else 0
    lines = [f"@mode {params.mode}"]
    for _ in range(n_rules):
        lhs = [rng.choice(letters[:k]) for _ in range(rng.randint(1, params.max_side))]
        rhs = [rng.choice(letters[:k]) for _ in range(rng.randint(0, params.max_side))]
        lines.append(" ".join(lhs) + " -> " + " ".join(rhs))
    return parse_system("\n".join(lines) + "\n")
