"""Equational derivations over the Clifford+T axioms.

A derivation rewrites a start word into an end word one step at a time;
each step replaces an occurrence of one side of an axiom (or of an
earlier lemma) by the other side.  ``check`` replays a derivation using
nothing but the literal relation list.  ``Prover`` searches for
derivations and never returns one that has not been replayed.

Proof search has three layers:

* bounded bidirectional breadth-first search over single rule applications;
* a certified normalizer for Clifford words.  Every edge ``word(i) g -> word(j)``
  of the Cayley graph of the Clifford group becomes a lemma, deduced
  coset-enumeration style from a relation scan in which it is the only
  edge not yet proved;
* a rotation tactic for Clifford+T words that rewrites both sides into
  standardized Pauli-rotation form, with every rotation written as a
  Clifford conjugate of T1.
"""

from __future__ import annotations

import logging
import time
from dataclasses import dataclass
from enum import Enum
from typing import Callable, Iterable, Mapping, Sequence

import numpy as np

from .word import CLIFFORD_GENS, ParseError, Relation, XGen, format_word, parse, relations_S

log = logging.getLogger(__name__)

L2R = "L2R"
R2L = "R2L"


class CertificateError(ValueError):
    def __init__(self, message: str, line: int | None = None):
        super().__init__(message if line is None else f"line {line}: {message}")
        self.line = line


class ProofBug(AssertionError):
    """An internal tactic produced a step that does not apply."""


@dataclass(frozen=True)
class Step:
    rule: str
    direction: str
    pos: int

    def __post_init__(self):
        if self.direction not in (L2R, R2L):
            raise ValueError(f"bad direction {self.direction!r}")
        if self.pos < 0:
            raise ValueError("negative position")

    def __str__(self):
        return f"{self.rule} {self.direction} @{self.pos}"

    def flipped(self) -> "Step":
        return Step(self.rule, R2L if self.direction == L2R else L2R, self.pos)

    def shifted(self, offset: int) -> "Step":
        return Step(self.rule, self.direction, self.pos + offset) if offset else self


def reverse_steps(steps: Sequence[Step]) -> list[Step]:
    """Steps taking the end word back to the start word."""
    return [s.flipped() for s in reversed(steps)]


@dataclass(frozen=True)
class Lemma:
    name: str
    lhs: tuple
    rhs: tuple
    steps: tuple


@dataclass(frozen=True)
class Derivation:
    start: tuple
    end: tuple
    steps: tuple = ()
    lemmas: tuple = ()

    def to_text(self) -> str:
        out = [f"start: {format_word(self.start)}", f"end: {format_word(self.end)}"]
        for lem in self.lemmas:
            out.append(f"lemma {lem.name}")
            out.append(f"start: {format_word(lem.lhs)}")
            out.append(f"end: {format_word(lem.rhs)}")
            out.extend(str(s) for s in lem.steps)
            out.append("qed")
        out.extend(str(s) for s in self.steps)
        return "\n".join(out) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "Derivation":
        lines = [(n, ln.strip()) for n, ln in enumerate(text.splitlines(), 1)]
        lines = [(n, ln) for n, ln in lines if ln and not ln.startswith("#")]
        it = iter(lines)

        def header(key):
            try:
                n, ln = next(it)
            except StopIteration:
                raise CertificateError(f"missing '{key}:' header") from None
            if not ln.startswith(key + ":"):
                raise CertificateError(f"expected '{key}:'", n)
            try:
                return parse(ln[len(key) + 1:].strip(), "X")
            except ParseError as err:
                raise CertificateError(f"bad word: {err}", n) from None

        start, end = header("start"), header("end")
        steps: list[Step] = []
        lemmas: list[Lemma] = []
        current: list | None = None
        for n, ln in it:
            if ln.startswith("lemma "):
                if current is not None:
                    raise CertificateError("nested lemma", n)
                name = ln[6:].strip()
                if not name or " " in name:
                    raise CertificateError("bad lemma name", n)
                current = [name, header("start"), header("end"), []]
            elif ln == "qed":
                if current is None:
                    raise CertificateError("'qed' outside a lemma", n)
                lemmas.append(Lemma(current[0], current[1], current[2], tuple(current[3])))
                current = None
            else:
                step = _parse_step(ln, n)
                (current[3] if current is not None else steps).append(step)
        if current is not None:
            raise CertificateError(f"lemma {current[0]} has no 'qed'")
        return cls(start, end, tuple(steps), tuple(lemmas))

    def step_count(self) -> int:
        return len(self.steps) + sum(len(lem.steps) for lem in self.lemmas)


def _parse_step(line: str, n: int) -> Step:
    parts = line.split()
    if len(parts) != 3 or parts[1] not in (L2R, R2L) or not parts[2].startswith("@"):
        raise CertificateError(f"bad step {line!r}", n)
    try:
        return Step(parts[0], parts[1], int(parts[2][1:]))
    except ValueError:
        raise CertificateError(f"bad position in {line!r}", n) from None


# ---------------------------------------------------------------- checking

@dataclass(frozen=True)
class CheckResult:
    ok: bool
    step: int | None = None
    lemma: str | None = None
    message: str = ""

    def __bool__(self):
        return self.ok

    def __str__(self):
        if self.ok:
            return "ok"
        where = f"lemma {self.lemma}, " if self.lemma else ""
        at = f"step {self.step}" if self.step is not None else "end"
        return f"{where}{at}: {self.message}"


def apply_step(word: tuple, step: Step, rules: Mapping[str, tuple]) -> tuple:
    """One rewrite; raises ValueError if it does not apply."""
    if step.rule not in rules:
        raise ValueError(f"unknown rule {step.rule}")
    lhs, rhs = rules[step.rule]
    src, dst = (lhs, rhs) if step.direction == L2R else (rhs, lhs)
    end = step.pos + len(src)
    if end > len(word) or word[step.pos:end] != src:
        raise ValueError(f"{step.rule} {step.direction} does not match at {step.pos}")
    return word[:step.pos] + dst + word[end:]


def _replay(start: tuple, end: tuple, steps: Sequence[Step], rules) -> tuple[int | None, str]:
    word = start
    for i, step in enumerate(steps):
        try:
            word = apply_step(word, step, rules)
        except ValueError as err:
            return i, str(err)
    if word != end:
        return None, f"replay ends in {format_word(word)}, not {format_word(end)}"
    return -1, ""


def check(d: Derivation, axioms: Sequence[Relation] | None = None) -> CheckResult:
    """Replay a derivation syntactically.

    Lemmas are checked in order and may only cite axioms and earlier
    lemmas, so the lemma graph is acyclic by construction.
    """
    rules: dict[str, tuple] = {r.id: (r.lhs, r.rhs) for r in (relations_S() if axioms is None else axioms)}
    for lem in d.lemmas:
        if lem.name in rules:
            return CheckResult(False, None, lem.name, "lemma name already in use")
        idx, msg = _replay(lem.lhs, lem.rhs, lem.steps, rules)
        if idx != -1:
            return CheckResult(False, idx, lem.name, msg)
        rules[lem.name] = (lem.lhs, lem.rhs)
    idx, msg = _replay(d.start, d.end, d.steps, rules)
    if idx != -1:
        return CheckResult(False, idx, None, msg)
    return CheckResult(True)


# ---------------------------------------------------------------- building proofs

class LemmaStore:
    """Lemmas proved so far, in creation (hence dependency) order."""

    def __init__(self, axioms: Sequence[Relation]):
        self.rules: dict[str, tuple] = {r.id: (r.lhs, r.rhs) for r in axioms}
        self.axiom_ids = frozenset(self.rules)
        self.lemmas: dict[str, Lemma] = {}
        self.rank: dict[str, int] = {}

    def __contains__(self, name: str) -> bool:
        return name in self.lemmas

    def add(self, name: str, lhs: tuple, rhs: tuple, steps: Sequence[Step]) -> str:
        if name in self.rules:
            raise ProofBug(f"duplicate rule name {name}")
        idx, msg = _replay(lhs, rhs, steps, self.rules)
        if idx != -1:
            raise ProofBug(f"lemma {name} fails at step {idx}: {msg}")
        self.lemmas[name] = Lemma(name, tuple(lhs), tuple(rhs), tuple(steps))
        self.rank[name] = len(self.rank)
        self.rules[name] = (tuple(lhs), tuple(rhs))
        return name

    def closure(self, steps: Iterable[Step]) -> tuple:
        needed: set[str] = set()
        stack = [s.rule for s in steps if s.rule in self.lemmas]
        while stack:
            name = stack.pop()
            if name in needed:
                continue
            needed.add(name)
            stack.extend(s.rule for s in self.lemmas[name].steps
                         if s.rule in self.lemmas and s.rule not in needed)
        return tuple(self.lemmas[n] for n in sorted(needed, key=self.rank.__getitem__))

    def derivation(self, start, end, steps) -> Derivation:
        steps = tuple(steps)
        return Derivation(tuple(start), tuple(end), steps, self.closure(steps))


class Builder:
    """A word being rewritten, with the steps taken so far."""

    def __init__(self, word: Sequence, rules: Mapping[str, tuple]):
        self.word = list(word)
        self.rules = rules
        self.steps: list[Step] = []

    def apply(self, rule: str, direction: str, pos: int) -> None:
        lhs, rhs = self.rules[rule]
        src, dst = (lhs, rhs) if direction == L2R else (rhs, lhs)
        if tuple(self.word[pos:pos + len(src)]) != src:
            raise ProofBug(f"{rule} {direction} does not match at {pos} in {format_word(self.word)}")
        self.word[pos:pos + len(src)] = dst
        self.steps.append(Step(rule, direction, pos))

    def run(self, steps: Iterable[Step], offset: int = 0) -> None:
        for s in steps:
            self.apply(s.rule, s.direction, s.pos + offset)

    @property
    def current(self) -> tuple:
        return tuple(self.word)


# ---------------------------------------------------------------- Clifford normalizer

GEN_INDEX = {g: a for a, g in enumerate(CLIFFORD_GENS)}


def _order_axioms(rels: Sequence[Relation]) -> dict[XGen, tuple[str, int]]:
    out = {}
    for r in rels:
        if r.rhs == () and r.lhs and len(set(r.lhs)) == 1 and r.lhs[0] in GEN_INDEX:
            out.setdefault(r.lhs[0], (r.id, len(r.lhs)))
    return out


class CliffordEngine:
    """Certified rewriting of Clifford words to their table words."""

    def __init__(self, table, axioms: Sequence[Relation], store: LemmaStore):
        self.table = table
        self.store = store
        self.rels = [r for r in axioms
                     if all(g in GEN_INDEX for g in r.lhs) and all(g in GEN_INDEX for g in r.rhs)]
        self.order = _order_axioms(self.rels)
        self.nxt = table.neighbors()
        n = table.order
        self.tree = np.zeros((n, len(CLIFFORD_GENS)), dtype=bool)
        parent = table.parent.astype(np.int64)
        gens = np.array([GEN_INDEX[XGen(int(g))] for g in table.gen[1:]])
        self.tree[parent[1:], gens] = True
        self._inverse: np.ndarray | None = None
        self.complete = False
        if len(self.order) == len(CLIFFORD_GENS):
            self._deduce()

    @property
    def available(self) -> bool:
        return self.complete

    def word(self, i: int) -> tuple:
        return self.table.word(int(i))

    def index_of(self, word: Iterable[XGen]) -> int:
        i = 0
        for g in word:
            i = int(self.nxt[i, GEN_INDEX[g]])
        return i

    def inverse(self, i: int) -> int:
        if self._inverse is None:
            # i * g = j  =>  inverse(j) ... computed once from the adjoint matrices
            inv = np.empty(self.table.order, dtype=np.int64)
            from .clifford import batch_keys
            from .linalg import conj_num
            nums = self.table.all_matrices()
            adj = np.swapaxes(conj_num(nums), -1, -2)
            for j, key in enumerate(batch_keys(adj, self.table.ks.astype(np.int64))):
                inv[j] = self.table.index[key]
            self._inverse = inv
        return int(self._inverse[i])

    def _paths(self, word: Sequence[XGen]) -> np.ndarray:
        n = self.table.order
        out = np.empty((n, len(word)), dtype=np.int64)
        cur = np.arange(n)
        for t, g in enumerate(word):
            out[:, t] = cur
            cur = self.nxt[cur, GEN_INDEX[g]]
        return out

    def _deduce(self) -> None:
        """Mark edges proved, one relation scan at a time, until nothing changes."""
        n = self.table.order
        proved = self.tree.copy()
        self.reason = np.full((n, len(CLIFFORD_GENS), 4), -1, dtype=np.int64)
        letters = [np.array([GEN_INDEX[g] for g in r.lhs + r.rhs], dtype=np.int64) for r in self.rels]
        changed = True
        while changed:
            changed = False
            for ri, rel in enumerate(self.rels):
                cos = np.concatenate([self._paths(rel.lhs), self._paths(rel.rhs)], axis=1)
                lets = letters[ri]
                if not len(lets):
                    continue
                unknown = ~proved[cos, lets[None, :]]
                rows = np.nonzero(unknown.sum(axis=1) == 1)[0]
                if not len(rows):
                    continue
                cols = unknown[rows].argmax(axis=1)
                xs, gs = cos[rows, cols], lets[cols]
                _, first = np.unique(xs * len(CLIFFORD_GENS) + gs, return_index=True)
                first = first[~proved[xs[first], gs[first]]]
                if not len(first):
                    continue
                changed = True
                proved[xs[first], gs[first]] = True
                nl = len(rel.lhs)
                side = (cols[first] >= nl).astype(np.int64)
                self.reason[xs[first], gs[first]] = np.stack(
                    [np.full(len(first), ri), side, rows[first], cols[first] - side * nl], axis=1)
        self.complete = bool(proved.all())
        if not self.complete:
            log.warning("Clifford edge deduction stalled with %d unproved edges", int((~proved).sum()))

    def edge(self, x: int, a: int) -> str | None:
        """Name of the lemma word(x) g = word(x g); None for spanning-tree edges."""
        if self.tree[x, a]:
            return None
        name = f"E{x}.{CLIFFORD_GENS[a].name}"
        if name not in self.store:
            self._build_edge(x, a)
        return name

    def _build_edge(self, x0: int, a0: int) -> None:
        # iterative post-order so deep dependency chains cannot hit the recursion limit
        stack = [(x0, a0)]
        while stack:
            x, a = stack[-1]
            if f"E{x}.{CLIFFORD_GENS[a].name}" in self.store:
                stack.pop()
                continue
            missing = [(y, b) for y, b in self._dependencies(x, a)
                       if not self.tree[y, b] and f"E{y}.{CLIFFORD_GENS[b].name}" not in self.store]
            if missing:
                stack.extend(missing)
                continue
            stack.pop()
            self._prove_edge(x, a)

    def _scan(self, x: int, a: int):
        ri, side, c, t = (int(v) for v in self.reason[x, a])
        if ri < 0:
            raise ProofBug(f"edge ({x}, {a}) has no deduction")
        rel = self.rels[ri]
        l, r = (rel.lhs, rel.rhs) if side == 0 else (rel.rhs, rel.lhs)
        direction = L2R if side == 0 else R2L
        cl = [c]
        for g in l:
            cl.append(int(self.nxt[cl[-1], GEN_INDEX[g]]))
        cr = [c]
        for g in r:
            cr.append(int(self.nxt[cr[-1], GEN_INDEX[g]]))
        return rel, l, r, direction, cl, cr, t

    def _dependencies(self, x: int, a: int):
        rel, l, r, _, cl, cr, t = self._scan(x, a)
        deps = [(cl[s], GEN_INDEX[l[s]]) for s in range(len(l)) if s != t]
        deps += [(cr[s], GEN_INDEX[r[s]]) for s in range(len(r))]
        return deps

    def _edge_name(self, x: int, g: XGen) -> str | None:
        a = GEN_INDEX[g]
        return None if self.tree[x, a] else f"E{x}.{g.name}"

    def _prove_edge(self, x: int, a: int) -> None:
        rel, l, r, direction, cl, cr, t = self._scan(x, a)
        g = CLIFFORD_GENS[a]
        assert cl[t] == x and l[t] == g
        y = cl[t + 1]
        m = len(l)
        b = Builder(self.word(x) + (g,), self.store.rules)
        base = len(self.word(x)) + 1
        # word(x) g  ->  word(x) g l[t+1..] l[t+1..]^-1
        for s in range(t + 1, m):
            oid, _ = self.order[l[s]]
            b.apply(oid, R2L, base + (s - t - 1))
        # word(x)  ->  word(c) l[0..t-1]
        for s in range(t - 1, -1, -1):
            e = self._edge_name(cl[s], l[s])
            if e:
                b.apply(e, R2L, 0)
        b.apply(rel.id, direction, len(self.word(cl[0])))
        for s in range(len(r)):
            e = self._edge_name(cr[s], r[s])
            if e:
                b.apply(e, L2R, 0)
        for s in range(m - 1, t, -1):
            e = self._edge_name(cl[s], l[s])
            if e:
                b.apply(e, R2L, 0)
        wy = len(self.word(y))
        for s in range(m - 1, t, -1):
            oid, _ = self.order[l[s]]
            b.apply(oid, L2R, wy + (s - t - 1))
        if b.current != self.word(y):
            raise ProofBug(f"edge proof for ({x}, {g.name}) ends in the wrong word")
        self.store.add(f"E{x}.{g.name}", self.word(x) + (g,), self.word(y), b.steps)

    def normalize(self, word: Sequence[XGen]) -> tuple[list[Step], int]:
        """Steps from ``word`` to its table word, and the element index."""
        steps = []
        i = 0
        for g in word:
            a = GEN_INDEX[g]
            e = self.edge(i, a)
            if e:
                steps.append(Step(e, L2R, 0))
            i = int(self.nxt[i, a])
        return steps, i

    def rewrite(self, u: Sequence[XGen], v: Sequence[XGen]) -> list[Step]:
        su, iu = self.normalize(u)
        sv, iv = self.normalize(v)
        if iu != iv:
            raise ProofBug(f"{format_word(u)} and {format_word(v)} are different Cliffords")
        return su + reverse_steps(sv)


# ---------------------------------------------------------------- rotation tactic

A_WORD = parse("H0 CZ H0 H1 CZ H1", "X")       # A T1 = T0 A is the axiom C17
A_INV = parse("H1 CZ H1 H0 CZ H0", "X")
X1_WORD = parse("H1 S1^2 H1", "X")
STAB_GENS = (XGen.W, XGen.H0, XGen.S0, XGen.S1, XGen.CZ)   # generate the stabilizer of I(x)Z

# how T1 moves left past each stabilizer generator: letter T1 -> T1 letter
_COMMUTE_T1 = {
    XGen.W: ("C1[A=T1]", L2R),
    XGen.H0: ("C2[A=H,B=T]", L2R),
    XGen.S0: ("C2[A=S,B=T]", L2R),
    XGen.S1: ("S1T1", L2R),
    XGen.CZ: ("C16", R2L),
}
_NEEDED = ("C1[A=T1]", "C2[A=H,B=T]", "C2[A=S,B=T]", "C2[A=T,B=T]", "C14[i=0]", "C14[i=1]",
           "C15[i=1]", "C16", "C17", "C4[i=1]", "C5[i=0]", "C5[i=1]")


class RotationEngine:
    """Rewrites Clifford+T words into standardized rotation form, with proofs.

    The rotation about a positive Pauli P is spelled Q(P) = C_P T1 C_P^-1,
    where C_P is the first table element taking I(x)Z to P.
    """

    def __init__(self, cliff: CliffordEngine):
        from .clifford import Z0, Z1, pauli_images
        self.cliff = cliff
        self.store = cliff.store
        self.available = cliff.available and all(r in self.store.rules for r in _NEEDED)
        if not self.available:
            return
        table = cliff.table
        self.img0 = pauli_images(table, Z0)
        self.img1 = pauli_images(table, Z1)
        self.z1 = Z1
        self.transporter: dict = {}
        self.frames: dict = {}
        for i, (p, q) in enumerate(zip(self.img0, self.img1)):
            if q.sign > 0:
                self.transporter.setdefault(q, i)
                if p.sign > 0:
                    self.frames.setdefault((p, q), i)
        self.stab = self._stabilizer_words()
        self._absorbed: dict = {}
        self._fixed_lemmas()

    def _stabilizer_words(self) -> dict[int, tuple]:
        words = {0: ()}
        frontier = [0]
        while frontier:
            nxt = []
            for i in frontier:
                for g in STAB_GENS:
                    j = int(self.cliff.nxt[i, GEN_INDEX[g]])
                    if j not in words:
                        words[j] = words[i] + (g,)
                        nxt.append(j)
            frontier = nxt
        return words

    # words -------------------------------------------------------------

    def c_word(self, p) -> tuple:
        return self.cliff.word(self.transporter[p])

    def c_inv_word(self, p) -> tuple:
        return self.cliff.word(self.cliff.inverse(self.transporter[p]))

    def q_word(self, p) -> tuple:
        return self.c_word(p) + (XGen.T1,) + self.c_inv_word(p)

    # fixed lemmas ------------------------------------------------------

    def _fixed_lemmas(self) -> None:
        st = self.store
        T0, T1, S0, S1, W = XGen.T0, XGen.T1, XGen.S0, XGen.S1, XGen.W
        if "S1T1" not in st:
            b = Builder((S1, T1), st.rules)
            b.apply("C14[i=1]", R2L, 0)
            b.apply("C14[i=1]", L2R, 1)
            st.add("S1T1", (S1, T1), (T1, S1), b.steps)
        for i, (t, s) in enumerate(((T0, S0), (T1, S1))):
            name = f"T{i}^8"
            if name not in st:
                b = Builder((t,) * 8, st.rules)
                for k in range(4):
                    b.apply(f"C14[i={i}]", L2R, k)
                b.apply(f"C5[i={i}]", L2R, 0)
                st.add(name, (t,) * 8, (), b.steps)
        if "T0A" not in st:
            b = Builder((T0,), st.rules)
            b.run(reverse_steps(self.cliff.rewrite(A_WORD + A_INV, ())), 1)
            b.apply("C17", R2L, 0)
            st.add("T0A", (T0,), A_WORD + (T1,) + A_INV, b.steps)
        if "X1T1" not in st:
            # X T X = T S^3 W, from T X T X = W
            lhs = X1_WORD + (T1,)
            b = Builder(lhs, st.rules)
            b.apply("T1^8", R2L, 0)
            b.run(reverse_steps(self.cliff.rewrite(X1_WORD + X1_WORD, ())), 8 + len(lhs))
            b.apply("C15[i=1]", L2R, 7)
            for k in range(1, 4):
                b.apply("C14[i=1]", L2R, k)
            st.add("X1T1", lhs, (T1, S1, S1, S1, W) + X1_WORD, b.steps)

    # absorbing one T gate ---------------------------------------------

    def absorb(self, d: int, i: int):
        """Lemma word(d) T_i = Q(P) word(d'); returns (name, P, d')."""
        key = (d, i)
        if key in self._absorbed:
            return self._absorbed[key]
        cl = self.cliff
        wd = cl.word(d)
        lhs = wd + ((XGen.T0, XGen.T1)[i],)
        b = Builder(lhs, self.store.rules)
        if i == 0:
            # the trailing A^-1 rides along and is folded into the tail at the end
            b.apply("T0A", L2R, len(wd))
            steps, d = cl.normalize(wd + A_WORD)
            b.run(steps)
            wd = cl.word(d)
        img = self.img1[d]
        p = img.positive()
        cp, cip = self.c_word(p), self.c_inv_word(p)
        k = cl.index_of(cip + wd)
        x1: tuple = ()
        if img.sign < 0:
            x1 = X1_WORD
            k = cl.index_of(X1_WORD + cl.word(k))
        kword = self.stab[k]
        b.run(cl.rewrite(wd, cp + x1 + kword))
        base = len(cp) + len(x1)
        for j in range(len(kword) - 1, -1, -1):
            rule, direction = _COMMUTE_T1[kword[j]]
            b.apply(rule, direction, base + j)
        if x1:
            b.apply("X1T1", L2R, len(cp))
        b.run(reverse_steps(cl.normalize(cip + cp)[0]), len(cp) + 1)
        qlen = len(cp) + 1 + len(cip)
        steps, d2 = cl.normalize(b.current[qlen:])
        b.run(steps, qlen)
        name = f"A{key[0]}.{i}" if b.steps else None
        if name:
            self.store.add(name, lhs, b.current, b.steps)
        self._absorbed[key] = (name, p, d2)
        return self._absorbed[key]

    def rotation_pass(self, word: Sequence[XGen]):
        """Steps from word to Q(P1) ... Q(Pn) word(d); returns (steps, [P...], d)."""
        b = Builder(word, self.store.rules)
        out, d, ps = 0, 0, []
        while out + len(self.cliff.word(d)) < len(b.word):
            g = b.word[out + len(self.cliff.word(d))]
            if g in (XGen.T0, XGen.T1):
                name, p, d = self.absorb(d, 0 if g is XGen.T0 else 1)
                if name:
                    b.apply(name, L2R, out)
                out += len(self.q_word(p))
                ps.append(p)
            else:
                a = GEN_INDEX[g]
                e = self.cliff.edge(d, a)
                if e:
                    b.apply(e, L2R, out)
                d = int(self.cliff.nxt[d, a])
        return b.steps, ps, d

    # swapping and squaring rotations --------------------------------------

    def _to_frame(self, p, i: int, e_idx: int) -> list[Step]:
        """Steps from Q(P) to e T_i e^-1, where e maps Z on qubit i to P."""
        cl = self.cliff
        e, ei = cl.word(e_idx), cl.word(cl.inverse(e_idx))
        pre, prei = (A_WORD, A_INV) if i == 0 else ((), ())
        cp, cip = self.c_word(p), self.c_inv_word(p)
        k = cl.index_of(prei + ei + cp)
        if self.img1[k] != self.z1:
            raise ProofBug("frame does not stabilize I(x)Z")
        sk, ski = self.stab[k], self.stab[cl.inverse(k)]
        b = Builder(cp + (XGen.T1,) + cip, self.store.rules)
        b.run(cl.rewrite(cip, ski + prei + ei), len(cp) + 1)
        b.run(cl.rewrite(cp, e + pre + sk))
        base = len(e) + len(pre)
        for j in range(len(sk) - 1, -1, -1):
            rule, direction = _COMMUTE_T1[sk[j]]
            b.apply(rule, direction, base + j)
        b.run(cl.rewrite(sk + ski, ()), base + 1)
        if i == 0:
            b.apply("T0A", R2L, len(e))
        return b.steps

    def swap(self, p, q) -> str:
        """Lemma Q(P) Q(R) = Q(R) Q(P) for distinct commuting P, R."""
        name = f"X{p}{q}"
        if name in self.store:
            return name
        cl = self.cliff
        e_idx = self.frames[(p, q)]
        e, ei = cl.word(e_idx), cl.word(cl.inverse(e_idx))
        mid = len(e) + 1 + len(ei)

        def to_pair(first, i_first, second, i_second):
            b = Builder(self.q_word(first) + self.q_word(second), self.store.rules)
            b.run(self._to_frame(first, i_first, e_idx))
            b.run(self._to_frame(second, i_second, e_idx), mid)
            b.run(cl.rewrite(ei + e, ()), len(e) + 1)
            return b

        left = to_pair(p, 0, q, 1)
        left.apply("C2[A=T,B=T]", L2R, len(e))
        right = to_pair(q, 1, p, 0)
        if left.current != right.current:
            raise ProofBug("swap frames disagree")
        steps = left.steps + reverse_steps(right.steps)
        return self.store.add(name, self.q_word(p) + self.q_word(q), self.q_word(q) + self.q_word(p), steps)

    def square(self, p) -> str:
        """Lemma Q(P) Q(P) = C_P S1 C_P^-1."""
        name = f"Q2{p}"
        if name in self.store:
            return name
        cp, cip = self.c_word(p), self.c_inv_word(p)
        b = Builder(self.q_word(p) * 2, self.store.rules)
        b.run(self.cliff.rewrite(cip + cp, ()), len(cp) + 1)
        b.apply("C14[i=1]", L2R, len(cp))
        return self.store.add(name, self.q_word(p) * 2, cp + (XGen.S1,) + cip, b.steps)

    # standardization ---------------------------------------------------------

    def standardize(self, word: Sequence[XGen]):
        """Steps from word to its standardized rotation form; returns (steps, [P...], d)."""
        from .pauli import _lex_least
        b = Builder(word, self.store.rules)
        while True:
            steps, ps, d = self.rotation_pass(b.current)
            b.run(steps)
            cur = list(ps)

            def offset(k):
                return sum(len(self.q_word(p)) for p in cur[:k])

            def bubble(j, k):
                while j > k:
                    b.apply(self.swap(cur[j - 1], cur[j]), L2R, offset(j - 1))
                    cur[j - 1], cur[j] = cur[j], cur[j - 1]
                    j -= 1

            for k, p in enumerate(_lex_least(cur)):
                bubble(cur.index(p, k), k)
            pair = None
            for i, p in enumerate(cur):
                for j in range(i + 1, len(cur)):
                    if cur[j] == p:
                        pair = (i, j)
                        break
                    if not p.commutes(cur[j]):
                        break
                if pair:
                    break
            if pair is None:
                return b.steps, cur, d
            i, j = pair
            bubble(j, i + 1)
            b.apply(self.square(cur[i]), L2R, offset(i))


# ---------------------------------------------------------------- search

@dataclass(frozen=True)
class Budget:
    depth: int = 30
    nodes: int = 1_000_000
    slack: int = 2


class Status(Enum):
    PROVED = "proved"
    NOT_EQUAL = "not-equal"
    EXHAUSTED = "exhausted"


@dataclass
class ProofResult:
    status: Status
    derivation: Derivation | None = None
    tactic: str = ""
    nodes: int = 0

    def __bool__(self):
        return self.status is Status.PROVED


def _moves(rules: Sequence[tuple], word: tuple, max_len: int):
    n = len(word)
    for rid, src, dst, direction in rules:
        grow = len(dst) - len(src)
        if n + grow > max_len:
            continue
        if not src:
            for pos in range(n + 1):
                yield word[:pos] + dst + word[pos:], Step(rid, direction, pos)
            continue
        first = src[0]
        for pos in range(n - len(src) + 1):
            if word[pos] == first and word[pos:pos + len(src)] == src:
                yield word[:pos] + dst + word[pos + len(src):], Step(rid, direction, pos)


def bfs_prove(lhs: tuple, rhs: tuple, rules: Mapping[str, tuple], budget: Budget,
              node_cap: int | None = None):
    """Bidirectional breadth-first search; returns (steps or None, nodes used)."""
    cap = budget.nodes if node_cap is None else min(node_cap, budget.nodes)
    if lhs == rhs:
        return [], 1
    directed = []
    for rid, (l, r) in rules.items():
        directed.append((rid, l, r, L2R))
        directed.append((rid, r, l, R2L))
    max_len = max(len(lhs), len(rhs)) + budget.slack
    seen = [{lhs: None}, {rhs: None}]
    frontier = [[lhs], [rhs]]
    depth = [0, 0]
    nodes = 2
    while frontier[0] and frontier[1] and depth[0] + depth[1] < budget.depth:
        side = 0 if len(frontier[0]) <= len(frontier[1]) else 1
        nxt = []
        for w in frontier[side]:
            for w2, step in _moves(directed, w, max_len):
                if w2 in seen[side]:
                    continue
                seen[side][w2] = (w, step)
                nodes += 1
                if w2 in seen[1 - side]:
                    return _join(seen, w2), nodes
                if nodes >= cap:
                    return None, nodes
                nxt.append(w2)
        frontier[side] = nxt
        depth[side] += 1
    return None, nodes


def _join(seen, meet):
    def chain(side):
        out = []
        w = meet
        while seen[side][w] is not None:
            prev, step = seen[side][w]
            out.append(step)
            w = prev
        return out[::-1]

    return chain(0) + reverse_steps(chain(1))


class Prover:
    """Proof search over a fixed axiom list, with a shared lemma store."""

    def __init__(self, axioms: Sequence[Relation] | None = None, table=None):
        from .clifford import get_table
        self.axioms = list(relations_S() if axioms is None else axioms)
        self.store = LemmaStore(self.axioms)
        self._table = table
        self._get_table = get_table
        self._cliff: CliffordEngine | None = None
        self._rot: RotationEngine | None = None
        self._clifford_ready = False

    def _engines(self):
        if not self._clifford_ready:
            self._clifford_ready = True
            table = self._table or self._get_table()
            self._cliff = CliffordEngine(table, self.axioms, self.store)
            if self._cliff.available:
                self._rot = RotationEngine(self._cliff)
        return self._cliff, self._rot

    def axiom_rules(self) -> dict[str, tuple]:
        return {r.id: (r.lhs, r.rhs) for r in self.axioms}

    def prove(self, lhs: Sequence[XGen], rhs: Sequence[XGen], budget: Budget = Budget()) -> ProofResult:
        from .semantics import interp_x
        lhs, rhs = tuple(lhs), tuple(rhs)
        if interp_x(lhs) != interp_x(rhs):
            return ProofResult(Status.NOT_EQUAL)
        if lhs == rhs:
            return ProofResult(Status.PROVED, Derivation(lhs, rhs), "trivial")
        rules = self.axiom_rules()
        used = 0
        short = len(lhs) + len(rhs) <= 24
        if short:
            steps, used = bfs_prove(lhs, rhs, rules, budget, node_cap=20_000)
            if steps is not None:
                return self._done(lhs, rhs, steps, "search", used)
        cliff, rot = self._engines()
        both_clifford = all(g in GEN_INDEX for g in lhs + rhs)
        try:
            if both_clifford and cliff.available:
                return self._done(lhs, rhs, cliff.rewrite(lhs, rhs), "clifford-normal-form", used)
            if rot is not None and rot.available:
                sl, pl, dl = rot.standardize(lhs)
                sr, pr, dr = rot.standardize(rhs)
                if pl == pr and dl == dr:
                    return self._done(lhs, rhs, sl + reverse_steps(sr), "rotation-form", used)
        except KeyError as err:   # a tactic table lacks an entry for these words
            log.debug("tactic skipped: %s", err)
        if short and used < budget.nodes:
            steps, more = bfs_prove(lhs, rhs, rules, Budget(budget.depth, budget.nodes - used, budget.slack))
            used += more
            if steps is not None:
                return self._done(lhs, rhs, steps, "search", used)
        return ProofResult(Status.EXHAUSTED, nodes=used)

    def _done(self, lhs, rhs, steps, tactic, nodes) -> ProofResult:
        d = self.store.derivation(lhs, rhs, steps)
        verdict = check(d, self.axioms)
        if not verdict:
            raise ProofBug(f"tactic {tactic} produced a bad certificate: {verdict}")
        return ProofResult(Status.PROVED, d, tactic, nodes)


def prove(lhs: Sequence[XGen], rhs: Sequence[XGen], budget: Budget = Budget(),
          axioms: Sequence[Relation] | None = None) -> ProofResult:
    return Prover(axioms).prove(lhs, rhs, budget)


# ---------------------------------------------------------------- benchmarks

@dataclass
class BenchmarkItem:
    name: str
    ok: bool
    steps: int = 0
    lemmas: int = 0
    seconds: float = 0.0
    tactic: str = ""
    message: str = ""

    def line(self) -> str:
        mark = "PASS" if self.ok else "FAIL"
        return (f"{mark}  {self.name}: {self.tactic or '-'}, {self.steps} steps, "
                f"{self.lemmas} lemmas, {self.seconds:.2f}s {self.message}").rstrip()


def _axioms_named(ids: Iterable[str]) -> list[Relation]:
    wanted = set(ids)
    return [r for r in relations_S() if r.id in wanted]


def benchmark_goals(include_condb: bool = True):
    """(name, lhs, rhs, axiom subset or None) for the curated benchmark list."""
    from .rs import clifford_t_obligations
    rels = {r.id: r for r in relations_S()}
    goals = [("C8 from C14+C16", rels["C8"].lhs, rels["C8"].rhs,
              _axioms_named(["C14[i=0]", "C14[i=1]", "C16"])),
             ("upside-down C16", (XGen.T0, XGen.CZ), (XGen.CZ, XGen.T0), None)]
    orders = {XGen.W: 8, XGen.H0: 2, XGen.H1: 2, XGen.S0: 4, XGen.S1: 4, XGen.T0: 8, XGen.T1: 8, XGen.CZ: 2}
    for g, n in orders.items():
        goals.append((f"order {g.name}^{n}", (g,) * n, (), None))
    for ob in clifford_t_obligations():
        if ob.kind == "condA":
            goals.append((f"condA {ob.id}", ob.lhs, ob.rhs, None))
        elif include_condb and all(g in GEN_INDEX for g in ob.lhs + ob.rhs):
            goals.append((f"condB {ob.id} {ob.coset}", ob.lhs, ob.rhs, None))
    return goals


def prove_benchmarks(budget: Budget = Budget(), include_condb: bool = True,
                     progress: Callable[[BenchmarkItem], None] | None = None) -> list[BenchmarkItem]:
    """Prove and independently check every benchmark goal; failures are reported, not raised."""
    provers: dict = {}
    report = []
    for name, lhs, rhs, axioms in benchmark_goals(include_condb):
        key = None if axioms is None else tuple(r.id for r in axioms)
        if key not in provers:
            provers[key] = Prover(axioms)
        prover = provers[key]
        t0 = time.perf_counter()
        try:
            res = prover.prove(lhs, rhs, budget)
        except ProofBug as err:
            item = BenchmarkItem(name, False, message=f"internal error: {err}")
        else:
            if res.status is Status.PROVED:
                d = res.derivation
                text = d.to_text()
                roundtrip = Derivation.from_text(text)
                verdict = check(roundtrip, prover.axioms)
                ok = bool(verdict) and roundtrip == d and roundtrip.to_text() == text
                item = BenchmarkItem(name, ok, d.step_count(), len(d.lemmas), tactic=res.tactic,
                                     message="" if ok else f"checker: {verdict}")
            else:
                item = BenchmarkItem(name, False, message=res.status.value)
        item.seconds = time.perf_counter() - t0
        report.append(item)
        if progress:
            progress(item)
    return report
