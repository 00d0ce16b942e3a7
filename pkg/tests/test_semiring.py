import math
import random
from functools import reduce

import pytest

from rwcert.rewriting import RewriteSystem, Rule, rotate
from rwcert.semiring import (
    INF,
    NEG_INF,
    AffineInterpretation,
    Decrease,
    Interpretation,
    compare,
    cycle_weight,
    identity,
    mat_mul,
    rule_decrease,
    semiring,
    word_matrix,
)
from rwcert.termination import affine_candidates, trace_candidates

TAGS = ["tropical", "arctic", "arithmetic"]


def naive_product(tag, a, b):
    sr = semiring(tag)
    d = len(a)
    return tuple(
        tuple(reduce(sr.add, [sr.mul(a[i][k], b[k][j]) for k in range(d)], sr.zero) for j in range(d))
        for i in range(d)
    )


def random_matrix(rng, tag, d, bound=3):
    while True:
        m = tuple(tuple(rng.randint(0, bound) for _ in range(d)) for _ in range(d))
        if tag != "arithmetic" or (all(any(r) for r in m) and all(any(c) for c in zip(*m))):
            return m


def random_interp(rng, tag, d, k):
    return Interpretation(tag, d, {s: random_matrix(rng, tag, d) for s in range(k)})


class TestSemiringOps:
    def test_examples(self):
        assert semiring("tropical").add(3, 5) == 3
        assert semiring("tropical").mul(3, 5) == 8
        assert semiring("arctic").add(NEG_INF, 4) == 4
        assert semiring("arithmetic").mul(0, 7) == 0

    def test_order(self):
        trop, arc = semiring("tropical"), semiring("arctic")
        assert trop.lt(5, INF) and not trop.lt(INF, INF) and trop.le(INF, INF)
        assert arc.lt(NEG_INF, 0) and not arc.lt(NEG_INF, NEG_INF)

    @pytest.mark.parametrize("tag,bad", [("arithmetic", INF), ("tropical", NEG_INF),
                                         ("arctic", INF), ("tropical", -1), ("arctic", 1.5)])
    def test_invalid_values(self, tag, bad):
        with pytest.raises(ValueError):
            semiring(tag).add(bad, 0)


class TestMatMul:
    def test_tropical_example_against_definition(self):
        a, b = ((1, 2), (3, 0)), ((0, 1), (2, 2))
        expected = naive_product("tropical", a, b)
        assert expected == ((1, 2), (2, 2))
        assert mat_mul("tropical", a, b) == expected

    @pytest.mark.parametrize("tag", TAGS)
    def test_identity_laws(self, tag):
        rng = random.Random(tag)
        for d in (1, 2, 3):
            ident = identity(tag, d)
            for _ in range(20):
                b = random_matrix(rng, tag, d)
                assert mat_mul(tag, ident, b) == b == mat_mul(tag, b, ident)

    @pytest.mark.parametrize("tag", TAGS)
    def test_associativity_and_definition(self, tag):
        rng = random.Random(7)
        for _ in range(200):
            d = rng.randint(1, 3)
            a, b, c = (random_matrix(rng, tag, d) for _ in range(3))
            assert mat_mul(tag, mat_mul(tag, a, b), c) == mat_mul(tag, a, mat_mul(tag, b, c))
            assert mat_mul(tag, a, b) == naive_product(tag, a, b)

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError):
            mat_mul("arithmetic", ((1,),), ((1, 0), (0, 1)))


class TestWeights:
    def test_word_matrix_examples(self):
        trop = Interpretation("tropical", 1, {0: ((1,),), 1: ((0,),)})
        assert word_matrix(trop, ()) == ((0,),)
        assert word_matrix(trop, (0, 0, 1)) == ((2,),)
        arith = Interpretation("arithmetic", 1, {0: ((2,),), 1: ((3,),)})
        assert word_matrix(arith, (0, 1)) == ((6,),)
        assert word_matrix(Interpretation("tropical", 2, {}), ()) == ((0, INF), (INF, 0))

    def test_missing_letter(self):
        with pytest.raises(KeyError):
            word_matrix(Interpretation("tropical", 1, {}), (0,))

    def test_cycle_weight_examples(self):
        assert cycle_weight(Interpretation("tropical", 1, {0: ((1,),)}), (0, 0)) == 2
        assert cycle_weight(Interpretation("arithmetic", 1, {0: ((2,),), 1: ((3,),)}), (0, 1)) == 6
        diag = ((5, 0), (0, 5))
        expected = {"arithmetic": 10, "tropical": 5, "arctic": 5}
        for tag in TAGS:
            assert cycle_weight(Interpretation(tag, 2, {0: diag}), (0,)) == expected[tag]
        with pytest.raises(ValueError):
            cycle_weight(Interpretation("tropical", 1, {}), ())

    @pytest.mark.parametrize("tag", TAGS)
    def test_rotation_invariance(self, tag):
        rng = random.Random(11)
        for _ in range(1000):
            d = rng.randint(1, 3)
            interp = random_interp(rng, tag, d, 3)
            c = tuple(rng.randrange(3) for _ in range(rng.randint(1, 8)))
            w = cycle_weight(interp, c)
            assert all(cycle_weight(interp, rotate(c, k)) == w for k in range(len(c)))


class TestRuleDecrease:
    def test_examples(self):
        trop = Interpretation("tropical", 1, {0: ((1,),), 1: ((0,),)})
        assert rule_decrease(trop, Rule((0, 0), (0, 1), 0)) == Decrease.STRICT
        for tag in TAGS:
            interp = random_interp(random.Random(0), tag, 2, 2)
            assert rule_decrease(interp, Rule((0, 1), (0, 1), 0)) == Decrease.WEAK
        # empty rhs: off-diagonal infinity of the tropical identity defeats weak decrease
        trop2 = Interpretation("tropical", 2, {0: ((2, 2), (2, 2))})
        assert rule_decrease(trop2, Rule((0,), (), 0)) == Decrease.NONE
        assert rule_decrease(Interpretation("tropical", 1, {0: ((1,),)}), Rule((0,), (), 0)) == Decrease.STRICT

    def test_affine_examples(self):
        one = ((1,),)
        ai = AffineInterpretation(1, {0: (one, (1,)), 1: (one, (0,))})
        assert ai.rule_decrease(Rule((0, 0), (0, 1), 0)) == Decrease.STRICT
        assert ai.rule_decrease(Rule((0, 1), (0, 1), 0)) == Decrease.WEAK
        ai = AffineInterpretation(1, {0: (one, (0,))})
        assert ai.rule_decrease(Rule((0, 0), (0,), 0)) == Decrease.WEAK

    def test_affine_composition_by_hand(self):
        # a: x -> 2x + 0, b: x -> x + 1; ab = a(b(x)) = 2x + 2, ba = b(a(x)) = 2x + 1
        ai = AffineInterpretation(1, {0: (((2,),), (0,)), 1: (((1,),), (1,))})
        assert ai.word_map((0, 1)) == (((2,),), (2,))
        assert ai.word_map((1, 0)) == (((2,),), (1,))
        assert ai.rule_decrease(Rule((0, 1), (1, 0), 0)) == Decrease.STRICT

    def test_compare(self):
        assert compare(((2,),), ((1,),)) == Decrease.STRICT
        assert compare(((3, INF),), ((2, INF),)) == Decrease.WEAK
        assert compare(((3, 5),), ((2, NEG_INF),)) == Decrease.STRICT


def _sample_decreasing(rng, tag, d):
    """Random (interp, rule, decrease) with decrease at least weak."""
    while True:
        interp = random_interp(rng, tag, d, 2)
        lhs = tuple(rng.randrange(2) for _ in range(rng.randint(1, 3)))
        rhs = tuple(rng.randrange(2) for _ in range(rng.randint(0, 3)))
        rule = Rule(lhs, rhs, 0)
        dec = rule_decrease(interp, rule)
        if dec != Decrease.NONE:
            return interp, rule, dec


@pytest.mark.parametrize("tag", TAGS)
def test_cycle_context_soundness(tag):
    rng = random.Random(f"ctx-{tag}")
    violations = 0
    strict_seen = 0
    for _ in range(1000):
        interp, rule, dec = _sample_decreasing(rng, tag, rng.randint(1, 2))
        u = tuple(rng.randrange(2) for _ in range(rng.randint(0, 4)))
        v = tuple(rng.randrange(2) for _ in range(rng.randint(0, 4)))
        after = u + rule.rhs + v
        if not after:
            continue  # empty cycle is a normal form
        wl = cycle_weight(interp, u + rule.lhs + v)
        wr = cycle_weight(interp, after)
        assert not math.isinf(wl) and not math.isinf(wr)
        if dec == Decrease.STRICT:
            strict_seen += 1
            violations += not wl > wr
        else:
            violations += not wl >= wr
    assert violations == 0
    assert strict_seen > 50


def test_affine_context_soundness():
    rng = random.Random(5)
    cands = {d: affine_candidates(d, 3) for d in (1, 2)}
    checked = 0
    while checked < 1000:
        d = rng.randint(1, 2)
        ai = AffineInterpretation(d, {s: rng.choice(cands[d]) for s in range(2)})
        rule = Rule(tuple(rng.randrange(2) for _ in range(rng.randint(1, 3))),
                    tuple(rng.randrange(2) for _ in range(rng.randint(0, 3))), 0)
        dec = ai.rule_decrease(rule)
        if dec == Decrease.NONE:
            continue
        checked += 1
        u = tuple(rng.randrange(2) for _ in range(rng.randint(0, 4)))
        v = tuple(rng.randrange(2) for _ in range(rng.randint(0, 4)))
        left, right = ai.value(u + rule.lhs + v), ai.value(u + rule.rhs + v)
        if dec == Decrease.STRICT:
            assert left >= right + 1
        else:
            assert left >= right


def test_candidates_respect_admissibility():
    assert len(trace_candidates("tropical", 2, 2)) == 81
    arith = trace_candidates("arithmetic", 2, 2)
    assert all(all(any(r) for r in m) and all(any(c) for c in zip(*m)) for m in arith)
    assert all(a[0][0] >= 1 for a, _ in affine_candidates(2, 2))


def test_system_example_weights():
    r = RewriteSystem.from_pairs([("a b", "a")], "cycle")
    trop = Interpretation("tropical", 1, {0: ((1,),), 1: ((1,),)})
    assert rule_decrease(trop, r.rules[0]) == Decrease.STRICT
