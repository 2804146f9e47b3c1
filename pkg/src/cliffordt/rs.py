"""Reidemeister-Schreier for monoids, generic engine plus the Clifford+T instance.

An instance is a finite state set ``C`` with a distinguished state, a
translation ``f: X -> Y*`` and a coset function ``h: C x Y -> (X*, C)``.
From a presentation ``(Y, R)`` of the big group it produces the relations
over ``X`` that must hold for ``(X, S)`` to present the subgroup.
"""

from __future__ import annotations

import itertools
import json
import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Hashable, Iterable, Mapping, Sequence

import numpy as np

from .clifford import POSITIVE_PAULIS, CliffordTable, batch_keys, default_cache_dir, get_table
from .linalg import I4, Mat4, cyclo_matmul, reduce_denominator
from .pauli import RotationForm, from_rotation_form, rotation_inverse
from .semantics import F_TABLE, det_omega_exponent, interp_x, interp_x_batch, y_image
from .word import Relation, XGen, YGen, Y_GENERATORS, format_word, parse, relations_R

log = logging.getLogger(__name__)

COSET_CACHE_VERSION = "coset-table-v1"


class RSError(Exception):
    pass


class NotSpecialError(RSError):
    """g was applied to a word whose h-threading does not return to the start state."""

    def __init__(self, state):
        super().__init__(f"word is not special: h** ends in state {state!r}")
        self.state = state


class SearchExhausted(RSError):
    pass


@dataclass
class RSInstance:
    states: tuple
    initial: Hashable
    f: Mapping
    h: Mapping  # (state, y) -> (x-word, state)

    def f_star(self, word: Sequence) -> tuple:
        return tuple(g for x in word for g in self.f[x])

    def h_star_star(self, c0, word: Sequence):
        out = []
        c = c0
        for y in word:
            v, c = self.h[(c, y)]
            out.extend(v)
        return tuple(out), c

    def g_translate(self, word: Sequence) -> tuple:
        v, c = self.h_star_star(self.initial, word)
        if c != self.initial:
            raise NotSpecialError(c)
        return v


@dataclass(frozen=True)
class Obligation:
    kind: str          # "condA" or "condB"
    id: str
    coset: Hashable
    lhs: tuple
    rhs: tuple
    consistent: bool = True

    def dump(self) -> str:
        return f"{self.kind} {self.id} {self.coset}: {format_word(self.lhs)} = {format_word(self.rhs)}"


def generate_obligations(inst: RSInstance, relations: Iterable[Relation],
                         x_alphabet: Iterable) -> list[Obligation]:
    """Conditions (a) and (b).  Raises on a coset-consistency failure."""
    out = []
    for x in x_alphabet:
        v, c = inst.h_star_star(inst.initial, inst.f[x])
        if c != inst.initial:
            raise RSError(f"condition (a) for {x}: h** ends in {c!r}, not the initial state")
        out.append(Obligation("condA", str(x), inst.initial, v, (x,)))
    for rel in relations:
        for c in inst.states:
            v1, c1 = inst.h_star_star(c, rel.lhs)
            v2, c2 = inst.h_star_star(c, rel.rhs)
            if c1 != c2:
                raise RSError(f"condition (b) for {rel.id} at {c!r}: states {c1!r} and {c2!r} differ")
            out.append(Obligation("condB", rel.id, c, v1, v2))
    return out


def derive_h(states: Mapping, y_alphabet: Iterable, y_image: Callable, mul: Callable,
             inverse: Callable, state_of: Callable, find_word: Callable) -> dict:
    """Fill h(c, y) = (v, c') with [[v]] = rep(c) [[y]] rep(c')^-1.

    ``states`` maps each state to its representative, ``state_of`` names the
    state whose coset contains an element, ``find_word`` writes a subgroup
    element as an X-word.
    """
    table = {}
    for c, rep in states.items():
        for y in y_alphabet:
            target = mul(rep, y_image(y))
            c2 = state_of(target)
            v = find_word(mul(target, inverse(states[c2])))
            if v is None:
                raise SearchExhausted(f"no word found for h({c}, {y})")
            table[(c, y)] = (tuple(v), c2)
    return table


# ------------------------------------------------------------ the concrete instance

C0 = "c0"
C1 = "c1"
COSET_REPS: dict[str, Mat4] = {C0: I4, C1: y_image(YGen.omega(0))}


def coset_state(m: Mat4) -> str:
    return C0 if det_omega_exponent(m) % 2 == 0 else C1


def f_star(word: Sequence[XGen]) -> tuple:
    return tuple(g for x in word for g in F_TABLE[x])


def find_clifford_t_word(target: Mat4, max_t_count: int = 4,
                         table: CliffordTable | None = None) -> tuple | None:
    """A word for ``target``, least T-count first, then least rotation sequence.

    Writes target = R_P1 ... R_Pn C over positive non-identity P and checks
    each R_Pn^-1 ... R_P1^-1 target against the Clifford table.
    """
    table = table or get_table()
    direct = table.word_of(target)
    if direct is not None:
        return direct
    inv = [rotation_inverse(p) for p in POSITIVE_PAULIS]
    inv_num = np.stack([m.num for m in inv])
    inv_k = np.array([m.k for m in inv])
    layer = target.num[None].astype(np.int64)
    layer_k = np.array([target.k])
    for n in range(1, max_t_count + 1):
        prod = cyclo_matmul(inv_num[None], layer[:, None])
        if prod.dtype == object:
            return None
        ks = layer_k[:, None] + inv_k[None]
        layer, layer_k = reduce_denominator(prod.reshape((-1, 4, 4, 4)), ks.reshape(-1))
        for idx, key in enumerate(batch_keys(layer, layer_k)):
            if key is not None and key in table.index:
                seq = []
                rest = idx
                for _ in range(n):
                    rest, r = divmod(rest, len(POSITIVE_PAULIS))
                    seq.append(POSITIVE_PAULIS[r])
                form = RotationForm(tuple(reversed(seq)), table.word(table.index[key]))
                return from_rotation_form(form, table)
    return None


def _coset_cache_path(cache_dir) -> Path:
    return Path(cache_dir or default_cache_dir()) / "coset_table.json"


def _verify_cell(c: str, y: YGen, v: Sequence[XGen], c2: str) -> bool:
    return interp_x(v) @ COSET_REPS[c2] == COSET_REPS[c] @ y_image(y)


def derive_coset_table(cache_dir=None, *, use_cache: bool = True, max_t_count: int = 4) -> RSInstance:
    """The Clifford+T instance: two cosets, f from the fixed table, h by search."""
    path = _coset_cache_path(cache_dir)
    h = None
    if use_cache and path.exists():
        try:
            h = _load_cells(path)
        except (ValueError, KeyError, OSError) as err:
            log.warning("ignoring coset cache: %s", err)
            h = None
    if h is None:
        table = get_table(cache_dir, use_cache=use_cache)
        h = derive_h(COSET_REPS, Y_GENERATORS, y_image, lambda a, b: a @ b, lambda a: a.adjoint(),
                     coset_state, lambda m: find_clifford_t_word(m, max_t_count, table))
        try:
            _save_cells(path, h)
        except OSError as err:
            log.warning("could not write coset cache: %s", err)
    return RSInstance(states=(C0, C1), initial=C0, f=F_TABLE, h=h)


def _save_cells(path: Path, h: Mapping) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    cells = [[c, str(y), format_word(v), c2] for (c, y), (v, c2) in h.items()]
    path.write_text(json.dumps({"version": COSET_CACHE_VERSION, "cells": cells}, indent=1))


def _load_cells(path: Path) -> dict:
    data = json.loads(path.read_text())
    if data.get("version") != COSET_CACHE_VERSION:
        raise ValueError(f"coset cache version {data.get('version')!r}")
    h = {}
    for c, y_text, v_text, c2 in data["cells"]:
        (y,) = parse(y_text, "Y")
        v = parse(v_text, "X")
        if not _verify_cell(c, y, v, c2):
            raise ValueError(f"cached cell h({c}, {y_text}) fails verification")
        h[(c, y)] = (v, c2)
    if len(h) != 2 * len(Y_GENERATORS):
        raise ValueError("coset cache is incomplete")
    return h


def verify_coset_table(inst: RSInstance) -> list[tuple[str, YGen, bool]]:
    return [(c, y, _verify_cell(c, y, v, c2)) for (c, y), (v, c2) in inst.h.items()]


_DEFAULT: RSInstance | None = None


def default_instance() -> RSInstance:
    global _DEFAULT
    if _DEFAULT is None:
        _DEFAULT = derive_coset_table()
    return _DEFAULT


def h_star_star(c0: str, word: Sequence[YGen], inst: RSInstance | None = None):
    return (inst or default_instance()).h_star_star(c0, word)


def g_translate(word: Sequence[YGen], inst: RSInstance | None = None) -> tuple:
    return (inst or default_instance()).g_translate(word)


def clifford_t_obligations(inst: RSInstance | None = None) -> list[Obligation]:
    return generate_obligations(inst or default_instance(), relations_R(), list(XGen))


def validate_obligations(obligations: Sequence[Obligation]) -> list[bool]:
    """Exact semantic check of every obligation."""
    lhs = interp_x_batch([o.lhs for o in obligations])
    rhs = interp_x_batch([o.rhs for o in obligations])
    return [a == b for a, b in zip(lhs, rhs)]


# ------------------------------------------------------------ a toy instance
#
# S3 = <a, b | aa, bb, aba = bab> with A3 = <r>, r = ab, as index-2 submonoid.

Perm = tuple


def _compose(p: Perm, q: Perm) -> Perm:
    # apply p then q, matching left-to-right word order
    return tuple(q[p[i]] for i in range(len(p)))


def _perm_inverse(p: Perm) -> Perm:
    out = [0] * len(p)
    for i, j in enumerate(p):
        out[j] = i
    return tuple(out)


def _parity(p: Perm) -> int:
    return sum(1 for i, j in itertools.combinations(range(len(p)), 2) if p[i] > p[j]) % 2


@dataclass
class ToyInstance:
    instance: RSInstance
    relations: list
    x_image: dict
    y_image: dict

    def eval_x(self, word) -> Perm:
        p = (0, 1, 2)
        for g in word:
            p = _compose(p, self.x_image[g])
        return p

    def eval_y(self, word) -> Perm:
        p = (0, 1, 2)
        for g in word:
            p = _compose(p, self.y_image[g])
        return p

    def monoid_elements(self) -> dict:
        """Brute-force enumeration of the X-monoid: element -> shortest word."""
        seen = {(0, 1, 2): ()}
        frontier = [()]
        while frontier:
            nxt = []
            for w in frontier:
                for g in sorted(self.x_image):
                    w2 = w + (g,)
                    p = self.eval_x(w2)
                    if p not in seen:
                        seen[p] = w2
                        nxt.append(w2)
            frontier = nxt
        return seen


def toy_instance() -> ToyInstance:
    y_img = {"a": (1, 0, 2), "b": (0, 2, 1)}
    x_img = {"r": _compose(y_img["a"], y_img["b"])}
    toy = ToyInstance(None, [Relation("T1", ("a", "a"), ()), Relation("T2", ("b", "b"), ()),
                             Relation("T3", ("a", "b", "a"), ("b", "a", "b"))], x_img, y_img)
    elements = toy.monoid_elements()
    reps = {"e": (0, 1, 2), "a": y_img["a"]}
    h = derive_h(reps, sorted(y_img), y_img.__getitem__, _compose, _perm_inverse,
                 lambda p: "e" if _parity(p) == 0 else "a", elements.get)
    toy.instance = RSInstance(states=("e", "a"), initial="e", f={"r": ("a", "b")}, h=h)
    return toy


def toy_obligations(toy: ToyInstance | None = None):
    toy = toy or toy_instance()
    obls = generate_obligations(toy.instance, toy.relations, sorted(toy.x_image))
    return toy, obls
