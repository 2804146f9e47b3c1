import random

import pytest

from cliffordt.prover import (L2R, R2L, Budget, CertificateError, Derivation, Lemma, Prover, Status, Step,
                              apply_step, bfs_prove, check, prove_benchmarks, reverse_steps)
from cliffordt.rs import clifford_t_obligations
from cliffordt.semantics import interp_x
from cliffordt.word import CLIFFORD_GENS, parse, relations_S

from conftest import random_x_word

RULES = {r.id: (r.lhs, r.rhs) for r in relations_S()}


def W(text):
    return parse(text, "X")


# ---- checker

def test_empty_derivation():
    assert check(Derivation(W("H0 T1"), W("H0 T1")))


def test_single_step():
    d = Derivation(W("T0 T0"), W("S0"), (Step("C14[i=0]", L2R, 0),))
    assert check(d)
    assert check(Derivation(W("S0"), W("T0 T0"), (Step("C14[i=0]", R2L, 0),)))


def test_misplaced_step_reports_index():
    d = Derivation(W("H1 T0 T0"), W("H1 S0"), (Step("C14[i=0]", L2R, 0),))
    res = check(d)
    assert not res and res.step == 0 and res.lemma is None


def test_wrong_end_word():
    res = check(Derivation(W("T0 T0"), W("S1"), (Step("C14[i=0]", L2R, 0),)))
    assert not res and res.step is None


def test_unknown_rule_and_axiom_subset():
    d = Derivation(W("T0 T0"), W("S0"), (Step("C99", L2R, 0),))
    assert not check(d)
    ok = Derivation(W("T0 T0"), W("S0"), (Step("C14[i=0]", L2R, 0),))
    assert not check(ok, [r for r in relations_S() if r.id != "C14[i=0]"])


def test_lemmas_are_checked_and_ordered():
    lem = Lemma("sq", W("T0 T0 T0 T0"), W("S0 S0"), (Step("C14[i=0]", L2R, 0), Step("C14[i=0]", L2R, 1)))
    use = Derivation(W("H0 T0^4"), W("H0 S0^2"), (Step("sq", L2R, 1),), (lem,))
    assert check(use)
    broken = Lemma("sq", lem.lhs, lem.rhs, lem.steps[:1])
    res = check(Derivation(use.start, use.end, use.steps, (broken,)))
    assert not res and res.lemma == "sq"
    # a lemma may not cite itself or later lemmas
    loop = Lemma("loop", W("T0"), W("T0"), (Step("loop", L2R, 0),))
    assert not check(Derivation(W("T0"), W("T0"), (), (loop,)))
    shadow = Lemma("C3", W("T0 T0"), W("S0"), (Step("C14[i=0]", L2R, 0),))
    assert not check(Derivation(W("T0"), W("T0"), (), (shadow,)))


def test_empty_side_rules_insert_anywhere():
    word = apply_step(W("H0 H1"), Step("C4[i=0]", R2L, 1), RULES)
    assert word == W("H0 H0 H0 H1")
    with pytest.raises(ValueError):
        apply_step(W("H0"), Step("C4[i=0]", R2L, 5), RULES)


def test_text_roundtrip_is_exact():
    lem = Lemma("sq", W("T0^4"), W("S0^2"), (Step("C14[i=0]", L2R, 0), Step("C14[i=0]", L2R, 1)))
    d = Derivation(W("H0 T0^4"), W("H0 S0^2"), (Step("sq", L2R, 1),), (lem,))
    text = d.to_text()
    assert Derivation.from_text(text) == d
    assert Derivation.from_text(text).to_text() == text


@pytest.mark.parametrize("text", [
    "end: eps\n",
    "start: T0\nend: T0\nC14 X2Y @0\n",
    "start: T0\nend: T0\nC14 L2R 0\n",
    "start: T0\nend: Q5\n",
    "start: T0\nend: T0\nlemma a\nstart: T0\nend: T0\n",
    "start: T0\nend: T0\nqed\n",
])
def test_malformed_certificates(text):
    with pytest.raises(CertificateError):
        Derivation.from_text(text)


# ---- search and tactics

def test_bfs_finds_short_derivations():
    steps, _ = bfs_prove(W("T0^8"), (), RULES, Budget())
    assert check(Derivation(W("T0^8"), (), tuple(steps)))
    assert bfs_prove(W("H0"), W("S0"), RULES, Budget(depth=3, nodes=2000))[0] is None


def test_prove_examples(prover):
    res = prover.prove(W("H0 S1"), W("S1 H0"))
    assert res.status is Status.PROVED and len(res.derivation.steps) == 1
    assert prover.prove(W("H0"), W("S0")).status is Status.NOT_EQUAL
    res = prover.prove(W("T0^8"), ())
    assert res and check(res.derivation)


def test_clifford_normal_form_tactic(prover):
    rng = random.Random(7)
    for _ in range(10):
        u = random_x_word(rng, 20, CLIFFORD_GENS)
        v = prover._engines()[0].word(prover._engines()[0].index_of(u))
        res = prover.prove(u, v)
        assert res and check(res.derivation)


def test_rotation_tactic_on_condition_a(prover):
    for ob in clifford_t_obligations():
        if ob.kind == "condA":
            res = prover.prove(ob.lhs, ob.rhs)
            assert res.status is Status.PROVED
            assert check(Derivation.from_text(res.derivation.to_text()))


def _perturb(rng, word, steps):
    directed = [(rid, l, r, L2R) for rid, (l, r) in RULES.items()] + \
               [(rid, r, l, R2L) for rid, (l, r) in RULES.items()]
    for _ in range(steps):
        moves = []
        for rid, src, dst, d in directed:
            if len(word) + len(dst) - len(src) > 24:
                continue
            for pos in range(len(word) - len(src) + 1):
                if word[pos:pos + len(src)] == src:
                    moves.append(Step(rid, d, pos))
        if not moves:
            break
        word = apply_step(word, rng.choice(moves), RULES)
    return word


@pytest.mark.parametrize("seed", range(3))
def test_soundness_fuzz(prover, seed):
    rng = random.Random(seed)
    for _ in range(15):
        u = random_x_word(rng, 8)
        v = _perturb(rng, u, rng.randint(1, 6))
        res = prover.prove(u, v, Budget(depth=8, nodes=5000))
        assert res.status is not Status.NOT_EQUAL
        if res:
            assert check(res.derivation)
            assert res.derivation.start == u and res.derivation.end == v


def test_unequal_random_pairs_are_never_proved(prover):
    rng = random.Random(11)
    for _ in range(20):
        u, v = random_x_word(rng, 6), random_x_word(rng, 6)
        res = prover.prove(u, v, Budget(depth=6, nodes=2000))
        assert (res.status is Status.NOT_EQUAL) == (interp_x(u) != interp_x(v))


def test_budget_exhaustion_returns_no_certificate(prover):
    ob = next(o for o in clifford_t_obligations() if o.id.startswith("G19"))
    res = prover.prove(ob.lhs, ob.rhs, Budget(depth=4, nodes=500))
    assert res.status is Status.EXHAUSTED and res.derivation is None


def test_tampered_certificate_fails(prover):
    res = prover.prove(W("T0 CZ"), W("CZ T0"))
    d = res.derivation
    lem = d.lemmas[len(d.lemmas) // 2]
    bad_step = Step(lem.steps[0].rule, lem.steps[0].direction, lem.steps[0].pos + 1)
    tampered = Lemma(lem.name, lem.lhs, lem.rhs, (bad_step,) + lem.steps[1:])
    lemmas = tuple(tampered if x is lem else x for x in d.lemmas)
    out = check(Derivation(d.start, d.end, d.steps, lemmas))
    assert not out and out.lemma == lem.name


def test_reverse_steps_undo():
    d = Derivation(W("T0 T0 T0"), W("S0 T0"), (Step("C14[i=0]", L2R, 0),))
    assert check(Derivation(d.end, d.start, tuple(reverse_steps(d.steps))))


def test_benchmarks_core_items():
    report = prove_benchmarks(include_condb=False)
    names = [item.name for item in report]
    assert "C8 from C14+C16" in names and "upside-down C16" in names
    assert sum(n.startswith("condA") for n in names) == 8
    assert sum(n.startswith("order") for n in names) == 8
    assert all(item.ok for item in report), [i.line() for i in report if not i.ok]


def test_c8_uses_only_its_two_axioms():
    from cliffordt.prover import benchmark_goals
    name, lhs, rhs, axioms = benchmark_goals(False)[0]
    assert {r.id for r in axioms} == {"C14[i=0]", "C14[i=1]", "C16"}
    res = Prover(axioms).prove(lhs, rhs)
    assert res and {s.rule for s in res.derivation.steps} <= {r.id for r in axioms}
