import itertools

import pytest

from rwcert.automata import NfaCert, check_certificate, word_relation
from rwcert.common import Budget
from rwcert.nonterm import decode_model, default_witness_lengths, encode_search, find_certificate
from rwcert.rewriting import RewriteSystem
from rwcert.sat import solve_internal


def system(*pairs, mode="string"):
    return RewriteSystem.from_pairs(pairs, mode)


def test_a_to_ab_small_instance_is_sat():
    r = system(("a", "a b"))
    cnf, vm = encode_search(r, 2, 1)
    res = solve_internal(cnf)
    assert res.sat
    assert check_certificate(r, decode_model(res.model, vm)).valid


def test_transition_variable_count():
    _, vm = encode_search(system(("a", "a b")), 2, 1)
    assert len(vm.t) == 8 and len(vm.i) == 2 and len(vm.f) == 2
    _, vm = encode_search(system(("a", "a b"), mode="cycle"), 2, 1)
    assert len(vm.t) == 8 and not vm.i and not vm.f


@pytest.mark.parametrize("n", [1, 2, 3])
def test_empty_system_unsat(n):
    # with no rules every accepted word is a normal form
    r = RewriteSystem(("a",), (), "string")
    for length in (1, 2):
        assert not solve_internal(encode_search(r, n, length)[0]).sat


def test_bad_arguments():
    r = system(("a", "a"))
    with pytest.raises(ValueError):
        encode_search(r, 0, 1)
    with pytest.raises(ValueError):
        encode_search(r, 1, 0)


def test_all_false_model_rejected_by_checker():
    r = system(("a", "a b"))
    cnf, vm = encode_search(r, 2, 1)
    model = {v: False for v in range(1, cnf.num_vars + 1)}
    assert not cnf.satisfied_by(model)
    assert not check_certificate(r, decode_model(model, vm)).valid


def test_decode_requires_all_variables():
    _, vm = encode_search(system(("a", "a b")), 2, 1)
    with pytest.raises(ValueError):
        decode_model({}, vm)


def _has_witness(cert, length):
    """Independent witness test: an accepted word (string) or a closed walk at 0 (cycle) of this length."""
    k = 1 + max((a for _, a, _ in cert.transitions), default=0)
    for w in itertools.product(range(k), repeat=length):
        rel = word_relation(cert, w)
        if cert.mode == "string":
            if any((p, q) in rel for p in cert.initial for q in cert.final):
                return True
        elif (0, 0) in rel:
            return True
    return False


def _all_nfas(n, k, mode):
    triples = [(p, a, q) for p in range(n) for a in range(k) for q in range(n)]
    for bits in itertools.product((False, True), repeat=len(triples)):
        trans = {t for t, b in zip(triples, bits) if b}
        if mode == "cycle":
            yield NfaCert(n, trans, mode="cycle")
            continue
        for ib in itertools.product((False, True), repeat=n):
            for fb in itertools.product((False, True), repeat=n):
                yield NfaCert(n, trans, {p for p in range(n) if ib[p]}, {p for p in range(n) if fb[p]})


ORACLE_CASES = [
    (("a", "a b"), "string"),
    (("a a", "a b"), "string"),
    (("a", "a"), "string"),
    (("a b", "b a"), "string"),
    (("a b", "b a"), "cycle"),
    (("a", "a a"), "cycle"),
    (("a", ""), "cycle"),
    (("a a", "a a a"), "cycle"),
]


@pytest.mark.parametrize("pair,mode", ORACLE_CASES)
def test_encoding_against_exhaustive_enumeration(pair, mode):
    """SAT iff some VALID automaton with a witness of that length exists (n <= 2)."""
    r = system(pair, mode=mode)
    k = len(r.alphabet)
    for n in (1, 2):
        valid = [c for c in _all_nfas(n, k, mode) if check_certificate(r, c).valid]
        for length in (1, 2, 3):
            expected = any(_has_witness(c, length) for c in valid)
            cnf, vm = encode_search(r, n, length)
            res = solve_internal(cnf)
            assert res.sat == expected, (pair, mode, n, length)
            if res.sat:
                assert check_certificate(r, decode_model(res.model, vm)).valid


def test_default_witness_lengths():
    assert list(default_witness_lengths(system(("a", "a b")), 2)) == [1, 2, 3, 4]
    assert list(default_witness_lengths(system(("a a b b a", "a")), 2)) == [5]


class TestFindCertificate:
    def test_a_to_ab(self):
        r = system(("a", "a b"))
        cert = find_certificate(r, 2)
        assert cert is not None and cert.n <= 2
        assert check_certificate(r, cert).valid

    @pytest.mark.parametrize("mode", ["string", "cycle"])
    def test_aa_to_ab_has_none(self, mode):
        assert find_certificate(system(("a a", "a b"), mode=mode), 3) is None

    def test_a_to_a(self):
        cert = find_certificate(system(("a", "a")), 2)
        assert cert is not None and cert.n <= 2
        cert = find_certificate(system(("a", "a"), mode="cycle"), 1)
        assert cert is not None and cert.n == 1

    def test_ab_to_ba_cycle(self):
        r = system(("a b", "b a"), mode="cycle")
        cert = find_certificate(r, 2)
        assert cert is None or check_certificate(r, cert).valid

    def test_expired_budget(self):
        budget = Budget(0.0)
        assert find_certificate(system(("a", "a b")), 2, budget=budget) is None
