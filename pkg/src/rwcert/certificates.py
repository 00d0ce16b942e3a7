"""JSON certificate files and their verification.

A certificate names the system it speaks about by a SHA-256 digest of the
system's canonical text, so checking it against an edited file fails
before any proof is looked at.
"""

from __future__ import annotations

import json
from typing import Any

from . import __version__
from .automata import NfaCert, check_certificate
from .common import CheckResult, invalid
from .loops import LoopCert, check_loop
from .rewriting import RewriteSystem
from .semiring import AffineInterpretation, Interpretation
from .termination import RemovalProof, Round, check_removal_proof

TOOL = "rwcert"


class MalformedCertificate(ValueError):
    pass


# ---------------------------------------------------------------- encoding

def proof_to_json(system: RewriteSystem, proof) -> dict:
    if isinstance(proof, RemovalProof):
        return {"type": "removal", "rounds": [_round_to_json(system, r) for r in proof.rounds]}
    if isinstance(proof, NfaCert):
        out = {
            "type": "automaton",
            "mode": proof.mode,
            "states": proof.n,
            "transitions": [[p, system.alphabet[a], q] for p, a, q in sorted(proof.transitions)],
        }
        if proof.mode == "string":
            out["initial"] = sorted(proof.initial)
            out["final"] = sorted(proof.final)
        return out
    if isinstance(proof, LoopCert):
        return {
            "type": "loop",
            "kind": proof.kind,
            "seed": system.tokens(proof.seed),
            "steps": [{"rule": r, "position": p, "result": system.tokens(res)} for r, p, res in proof.steps],
        }
    raise TypeError(f"not a proof object: {proof!r}")


def _round_to_json(system, rnd: Round) -> dict:
    interp = rnd.interpretation
    removed = sorted(rnd.removed)
    if isinstance(interp, AffineInterpretation):
        letters = {system.alphabet[s]: {"matrix": [list(r) for r in a], "vector": list(b)}
                   for s, (a, b) in sorted(interp.letters.items())}
        return {"kind": "affine", "dim": interp.dim, "letters": letters, "removed": removed}
    letters = {system.alphabet[s]: [list(r) for r in m] for s, m in sorted(interp.letters.items())}
    return {"kind": "trace", "tag": interp.tag, "dim": interp.dim, "letters": letters, "removed": removed}


def claim_of(proof) -> str:
    return "TERMINATING" if isinstance(proof, RemovalProof) else "NONTERMINATING"


def make_certificate(system: RewriteSystem, proof) -> dict:
    return {
        "tool": TOOL,
        "version": __version__,
        "system_digest": system.digest(),
        "mode": system.mode,
        "claim": claim_of(proof),
        "proof": proof_to_json(system, proof),
    }


def dumps(cert: dict) -> str:
    return json.dumps(cert, indent=2, ensure_ascii=False) + "\n"


# ---------------------------------------------------------------- decoding

def _expect(cond, message):
    if not cond:
        raise MalformedCertificate(message)


def _symbol(system, token):
    _expect(isinstance(token, str) and token in system.alphabet, f"unknown symbol {token!r}")
    return system.symbol_id(token)


def _word(system, tokens):
    _expect(isinstance(tokens, list), "word must be a list of tokens")
    return tuple(_symbol(system, t) for t in tokens)


def _int(x, what):
    _expect(isinstance(x, int) and not isinstance(x, bool), f"{what} must be an integer")
    return x


def _matrix(rows, what):
    _expect(isinstance(rows, list) and all(isinstance(r, list) for r in rows), f"{what} must be a list of rows")
    return tuple(tuple(_int(x, what) for x in r) for r in rows)


def proof_from_json(system: RewriteSystem, data: Any):
    _expect(isinstance(data, dict), "proof must be an object")
    kind = data.get("type")
    if kind == "removal":
        rounds = data.get("rounds")
        _expect(isinstance(rounds, list), "rounds must be a list")
        return RemovalProof(tuple(_round_from_json(system, r) for r in rounds))
    if kind == "automaton":
        n = _int(data.get("states"), "states")
        _expect(n >= 0, "states must be nonnegative")
        trans = set()
        for t in data.get("transitions", []):
            _expect(isinstance(t, list) and len(t) == 3, "transition must be [p, symbol, q]")
            trans.add((_int(t[0], "state"), _symbol(system, t[1]), _int(t[2], "state")))
        mode = data.get("mode")
        _expect(mode in ("string", "cycle"), "bad automaton mode")
        init = [_int(p, "state") for p in data.get("initial", [])]
        final = [_int(p, "state") for p in data.get("final", [])]
        try:
            return NfaCert(n, trans, init, final, mode)
        except ValueError as e:
            raise MalformedCertificate(str(e)) from None
    if kind == "loop":
        steps = data.get("steps")
        _expect(isinstance(steps, list), "steps must be a list")
        parsed = []
        for s in steps:
            _expect(isinstance(s, dict), "step must be an object")
            parsed.append((_int(s.get("rule"), "rule"), _int(s.get("position"), "position"),
                           _word(system, s.get("result"))))
        return LoopCert(data.get("kind"), _word(system, data.get("seed")), tuple(parsed))
    raise MalformedCertificate(f"unknown proof type {kind!r}")


def _round_from_json(system, data):
    _expect(isinstance(data, dict), "round must be an object")
    dim = _int(data.get("dim"), "dim")
    letters = data.get("letters")
    _expect(isinstance(letters, dict), "letters must be an object")
    removed = frozenset(_int(i, "rule index") for i in data.get("removed", []))
    if data.get("kind") == "affine":
        table = {}
        for tok, entry in letters.items():
            _expect(isinstance(entry, dict), "affine letter must have matrix and vector")
            vec = entry.get("vector")
            _expect(isinstance(vec, list), "vector must be a list")
            table[_symbol(system, tok)] = (_matrix(entry.get("matrix"), "matrix"),
                                           tuple(_int(x, "vector") for x in vec))
        return Round(AffineInterpretation(dim, table), removed)
    _expect(data.get("kind") == "trace", "round kind must be trace or affine")
    table = {_symbol(system, tok): _matrix(m, "matrix") for tok, m in letters.items()}
    return Round(Interpretation(data.get("tag"), dim, table), removed)


def check_proof(system: RewriteSystem, proof) -> CheckResult:
    if isinstance(proof, RemovalProof):
        return check_removal_proof(system, proof)
    if isinstance(proof, NfaCert):
        if proof.mode != system.mode:
            return invalid("automaton mode does not match system mode")
        return check_certificate(system, proof).as_result()
    if isinstance(proof, LoopCert):
        return check_loop(system, proof)
    return invalid("unknown proof object")


def verify(system: RewriteSystem, cert: Any) -> CheckResult:
    """Digest check, then the independent checker for the proof type."""
    if not isinstance(cert, dict):
        return invalid("malformed certificate: not an object")
    if cert.get("system_digest") != system.digest():
        return invalid("wrong system")
    if cert.get("mode") != system.mode:
        return invalid("wrong mode")
    try:
        proof = proof_from_json(system, cert.get("proof"))
    except MalformedCertificate as e:
        return invalid(f"malformed certificate: {e}")
    if cert.get("claim") != claim_of(proof):
        return invalid("claim does not match proof type")
    return check_proof(system, proof)
