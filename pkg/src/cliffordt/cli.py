"""Command-line interface.

Exit codes: 0 ok, 1 not equal, 2 parse error, 3 internal error,
4 search budget exhausted, 5 bad certificate.  In batch mode (word
arguments omitted or given as ``-``) one item is read per stdin line
and the exit code is the largest one seen.
"""

from __future__ import annotations

import argparse
import logging
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable

from .word import ParseError, format_word, parse

EXIT_OK, EXIT_UNEQUAL, EXIT_PARSE, EXIT_INTERNAL, EXIT_BUDGET, EXIT_BADCERT = range(6)

log = logging.getLogger("cliffordt")


@dataclass
class Config:
    cache_dir: Path | None = None
    use_cache: bool = True
    depth: int = 30
    nodes: int = 1_000_000
    jobs: int = 1
    fmt: str = "human"

    def budget(self):
        from .prover import Budget
        return Budget(depth=self.depth, nodes=self.nodes)


class Output:
    def __init__(self, fmt: str, stream=None):
        self.fmt = fmt
        self.stream = stream or sys.stdout

    def record(self, human: str, *fields) -> None:
        line = "\t".join(str(f) for f in fields) if self.fmt == "tsv" else human
        print(line, file=self.stream)


def _warm_caches(cfg: Config) -> None:
    """Honour --cache-dir / --no-cache before anything asks for a table."""
    if cfg.cache_dir is not None:
        from .clifford import CACHE_ENV
        os.environ[CACHE_ENV] = str(cfg.cache_dir)
    if not cfg.use_cache:
        from . import rs
        from .clifford import get_table
        get_table(cfg.cache_dir, use_cache=False)
        rs._DEFAULT = rs.derive_coset_table(cfg.cache_dir, use_cache=False)


def _items(args: list[str]) -> Iterable[str]:
    if not args or args == ["-"]:
        for line in sys.stdin:
            if line.strip() and not line.lstrip().startswith("#"):
                yield line.strip()
    else:
        yield from args


def _parse_or_report(text: str, alphabet: str) -> tuple | None:
    try:
        return parse(text, alphabet)
    except ParseError as err:
        print(f"parse error: {err}", file=sys.stderr)
        return None


# ------------------------------------------------------------------ commands

def cmd_eval(args, cfg: Config, out: Output) -> int:
    from .semantics import interp
    code = EXIT_OK
    for text in _items(args.words):
        w = _parse_or_report(text, args.alphabet)
        if w is None:
            code = max(code, EXIT_PARSE)
            continue
        m = interp(w)
        if cfg.fmt == "tsv":
            out.record("", text, m.k, " ".join(map(str, m.num.reshape(4, -1).T.reshape(-1).tolist())))
        else:
            out.record(f"{text}\n{m.pretty()}")
    return code


def _split_pair(line: str) -> tuple[str, str]:
    if "=" not in line:
        raise ParseError("expected 'word = word'", 0)
    a, b = line.split("=", 1)
    return a.strip(), b.strip()


def _pairs(args) -> Iterable[tuple[str, str] | None]:
    if args.word1 not in (None, "-"):
        if args.word2 is None:
            print("error: two words are required", file=sys.stderr)
            yield None
            return
        yield args.word1, args.word2
        return
    for line in _items([]):
        try:
            yield _split_pair(line)
        except ParseError as err:
            print(f"parse error: {err}", file=sys.stderr)
            yield None


def cmd_eq(args, cfg: Config, out: Output) -> int:
    from .semantics import interp
    code = EXIT_OK
    for pair in _pairs(args):
        if pair is None:
            code = max(code, EXIT_PARSE)
            continue
        u, v = (_parse_or_report(t, args.alphabet) for t in pair)
        if u is None or v is None:
            code = max(code, EXIT_PARSE)
            continue
        equal = interp(u) == interp(v)
        verdict = "EQUAL" if equal else "NOT-EQUAL"
        out.record(verdict, pair[0], pair[1], verdict)
        code = max(code, EXIT_OK if equal else EXIT_UNEQUAL)
    return code


def _verify_items(which: str) -> list[tuple[str, bool]]:
    from .semantics import controlled_t_checks, relation_valid
    from .word import relations_R, relations_S
    if which == "S":
        return [(r.id, relation_valid(r)) for r in relations_S()]
    if which == "R":
        return [(r.id, relation_valid(r)) for r in relations_R()]
    if which == "CT":
        return controlled_t_checks()
    if which == "rotations":
        from .pauli import nonobvious_rotation_checks
        return nonobvious_rotation_checks()
    if which == "obligations":
        from .rs import clifford_t_obligations, default_instance, validate_obligations, verify_coset_table
        inst = default_instance()
        cells = [(f"h({c}, {y})", ok) for c, y, ok in verify_coset_table(inst)]
        obls = clifford_t_obligations(inst)
        return cells + [(f"{o.kind} {o.id} {o.coset}", ok)
                        for o, ok in zip(obls, validate_obligations(obls))]
    raise ValueError(which)


def cmd_verify(args, cfg: Config, out: Output) -> int:
    items = _verify_items(args.set)
    for name, ok in items:
        mark = "PASS" if ok else "FAIL"
        out.record(f"{mark}  {name}", args.set, name, mark)
    passed = sum(ok for _, ok in items)
    summary = f"{args.set}: {passed}/{len(items)} pass"
    print(summary, file=sys.stderr if cfg.fmt == "tsv" else out.stream)
    return EXIT_OK if passed == len(items) else EXIT_UNEQUAL


def cmd_normalize(args, cfg: Config, out: Output) -> int:
    from .pauli import standardize, to_rotation_form
    from .semantics import interp_x
    code = EXIT_OK
    for text in _items(args.words):
        w = _parse_or_report(text, "X")
        if w is None:
            code = max(code, EXIT_PARSE)
            continue
        form = standardize(to_rotation_form(w))
        if form.matrix() != interp_x(w):
            print(f"internal error: standardized form of {text!r} changes the matrix", file=sys.stderr)
            code = max(code, EXIT_INTERNAL)
            continue
        out.record(str(form), text, " ".join(map(str, form.rotations)), format_word(form.tail))
    return code


_WORKER = None


def _worker_init():
    global _WORKER
    from .prover import Prover
    _WORKER = Prover()


def _worker_prove(job):
    u, v, budget = job
    return _WORKER.prove(u, v, budget)


def _status_code(res) -> int:
    from .prover import Status
    return {Status.PROVED: EXIT_OK, Status.NOT_EQUAL: EXIT_UNEQUAL, Status.EXHAUSTED: EXIT_BUDGET}[res.status]


def cmd_prove(args, cfg: Config, out: Output) -> int:
    from .prover import Prover, prove_benchmarks
    if args.benchmarks:
        report = prove_benchmarks(cfg.budget(), progress=lambda item: out.record(
            item.line(), item.name, "PASS" if item.ok else "FAIL", item.tactic, item.steps, item.lemmas,
            f"{item.seconds:.3f}"))
        return EXIT_OK if all(i.ok for i in report) else EXIT_INTERNAL
    jobs = []
    code = EXIT_OK
    for pair in _pairs(args):
        u = v = None
        if pair is not None:
            u, v = (_parse_or_report(t, "X") for t in pair)
        if u is None or v is None:
            code = max(code, EXIT_PARSE)
            continue
        jobs.append((u, v, cfg.budget()))
    if cfg.jobs > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(cfg.jobs, initializer=_worker_init) as pool:
            results = list(pool.map(_worker_prove, jobs))
    else:
        prover = Prover()
        results = [prover.prove(u, v, b) for u, v, b in jobs]
    single = len(jobs) == 1 and args.word1 not in (None, "-")
    for (u, v, _), res in zip(jobs, results):
        code = max(code, _status_code(res))
        status = res.status.value
        if res.derivation is not None and single:
            text = res.derivation.to_text()
            if args.output:
                Path(args.output).write_text(text)
            else:
                sys.stdout.write(text)
            print(f"{status}: {res.tactic}, {res.derivation.step_count()} steps", file=sys.stderr)
        elif single:
            print(status, file=sys.stderr)
        else:
            steps = res.derivation.step_count() if res.derivation else 0
            out.record(f"{status}  {format_word(u)} = {format_word(v)}  ({res.tactic or '-'}, {steps} steps)",
                       format_word(u), format_word(v), status, res.tactic, steps)
    return code


def cmd_check(args, cfg: Config, out: Output) -> int:
    from .prover import CertificateError, Derivation, check
    try:
        text = sys.stdin.read() if args.certificate == "-" else Path(args.certificate).read_text()
        d = Derivation.from_text(text)
    except (OSError, CertificateError) as err:
        print(f"bad certificate: {err}", file=sys.stderr)
        return EXIT_BADCERT
    verdict = check(d)
    if verdict:
        out.record(f"OK  {format_word(d.start)} = {format_word(d.end)}  ({d.step_count()} steps)",
                   args.certificate, "OK", d.step_count())
        return EXIT_OK
    out.record(f"BAD  {verdict}", args.certificate, "BAD", verdict.lemma or "", verdict.step)
    return EXIT_BADCERT


# ------------------------------------------------------------------ parser

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--cache-dir", type=Path, default=None,
                        help="table cache directory (default: $CLIFFORDT_CACHE_DIR or ~/.cache/cliffordt)")
    common.add_argument("--no-cache", action="store_true", help="rebuild cached tables")
    common.add_argument("--format", choices=("human", "tsv"), default="human")
    common.add_argument("--jobs", type=int, default=1, help="worker processes for batch proving")
    common.add_argument("--budget-depth", type=int, default=30)
    common.add_argument("--budget-nodes", type=int, default=1_000_000)
    common.add_argument("-v", "--verbose", action="store_true")

    p = argparse.ArgumentParser(prog="cliffordt", description="Exact two-qubit Clifford+T toolkit.")
    sub = p.add_subparsers(dest="command", required=True)

    def alphabet(sp):
        g = sp.add_mutually_exclusive_group()
        g.add_argument("--x", dest="alphabet", action="store_const", const="X", help="X alphabet (default)")
        g.add_argument("--y", dest="alphabet", action="store_const", const="Y", help="Y alphabet")
        sp.set_defaults(alphabet="X")

    sp = sub.add_parser("eval", parents=[common], help="print the exact matrix of a word")
    alphabet(sp)
    sp.add_argument("words", nargs="*")
    sp.set_defaults(func=cmd_eval)

    sp = sub.add_parser("eq", parents=[common], help="decide semantic equality")
    alphabet(sp)
    sp.add_argument("word1", nargs="?")
    sp.add_argument("word2", nargs="?")
    sp.set_defaults(func=cmd_eq)

    sp = sub.add_parser("verify", parents=[common], help="check a relation set exactly")
    sp.add_argument("set", choices=("S", "R", "CT", "rotations", "obligations"))
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("normalize", parents=[common], help="standardized rotation form")
    sp.add_argument("words", nargs="*")
    sp.set_defaults(func=cmd_normalize)

    sp = sub.add_parser("prove", parents=[common], help="find a checked derivation")
    sp.add_argument("word1", nargs="?")
    sp.add_argument("word2", nargs="?")
    sp.add_argument("-o", "--output", help="certificate file (default: stdout)")
    sp.add_argument("--benchmarks", action="store_true", help="run the benchmark list")
    sp.set_defaults(func=cmd_prove)

    sp = sub.add_parser("check", parents=[common], help="replay a certificate")
    sp.add_argument("certificate", help="file, or - for stdin")
    sp.set_defaults(func=cmd_check)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:   # argparse usage errors count as parse errors
        return EXIT_OK if exc.code == 0 else EXIT_PARSE
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    cfg = Config(args.cache_dir, not args.no_cache, args.budget_depth, args.budget_nodes,
                 max(1, args.jobs), args.format)
    try:
        _warm_caches(cfg)
        return args.func(args, cfg, Output(cfg.fmt))
    except KeyboardInterrupt:
        return EXIT_INTERNAL
    except Exception as err:  # bug trap: report, do not print a traceback at users
        log.debug("internal error", exc_info=True)
        print(f"internal error: {type(err).__name__}: {err}", file=sys.stderr)
        return EXIT_INTERNAL


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
