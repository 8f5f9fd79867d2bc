"""Command-line front end.

Exit codes: 0 success/equal, 1 usage or parse error, 2 validation error,
3 inconclusive verification, 4 verification mismatch.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .constructions import compile_theorem1, compile_universal, size_report, theorem2_bounds, with_code
from .engine import DerivationError, EnumerationBounds, enumerate_language, replay_trace
from .grammar import format_configuration
from .machines import Verdict, accepts, enumerate_accepted
from .registers import RegisterMachine, attach_universal_front_end, run_register, translate_to_counter
from .textformat import (
    ParseError,
    ValidationError,
    emit_grammar,
    parse_counter_machine,
    parse_grammar,
    parse_machine,
    parse_register_machine,
)
from .verify import check_equivalence

EXIT_OK, EXIT_USAGE, EXIT_INVALID, EXIT_INCONCLUSIVE, EXIT_MISMATCH = range(5)


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def show_word(w) -> str:
    if not w:
        return "<eps>"
    return "".join(w) if all(len(s) == 1 for s in w) else " ".join(w)


def read_word(text: str, alphabet) -> tuple[str, ...]:
    text = text.strip()
    if text in ("", "<eps>", "eps"):
        return ()
    if " " in text or any(len(s) > 1 for s in alphabet):
        return tuple(text.split())
    return tuple(text)


def _read(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as e:
        raise ParseError(f"cannot read {path}: {e.strerror}") from e


def _parse_ints(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise ParseError(f"expected comma-separated integers, got {text!r}") from None


def cmd_pcgs_enum(args) -> int:
    system = parse_grammar(_read(args.file))
    bounds = EnumerationBounds(
        max_depth=args.max_depth, max_configurations=args.max_configs, max_word_length=args.max_len
    )
    res = enumerate_language(system, bounds, workers=args.workers, reduce=not args.no_reduce)
    for w in res.words:
        print(show_word(w))
    s = res.stats
    print(
        f"# words={len(res.words)} visited={s.visited} final={s.final} blocked={s.blocked} "
        f"depth={s.max_depth_reached} exhausted={str(res.exhausted).lower()}"
    )
    return EXIT_OK


def cmd_pcgs_trace(args) -> int:
    system = parse_grammar(_read(args.file))
    try:
        trace = replay_trace(system, _parse_ints(args.choices))
    except DerivationError as e:
        for c in getattr(e, "trace", ()):
            print(format_configuration(system, c))
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INVALID
    for c in trace:
        print(format_configuration(system, c))
    return EXIT_OK


def cmd_machine_run(args) -> int:
    m = parse_machine(_read(args.file))
    if isinstance(m, RegisterMachine):
        if args.input is None:
            raise ParseError("register machines need --input")
        y = run_register(m, args.input, args.input_reg, args.output_reg, args.steps)
        print("no halt within step bound" if y is None else y)
        return EXIT_OK
    if args.word is None:
        raise ParseError("counter machines need --word")
    v = accepts(m, read_word(args.word, m.alphabet), args.steps, _parse_ints(args.counters) or None)
    print({Verdict.ACCEPTED: "Accepted", Verdict.REJECTED: "Rejected", Verdict.BOUND_HIT: "BoundHit"}[v])
    return EXIT_OK


def cmd_machine_enum(args) -> int:
    m = parse_counter_machine(_read(args.file))
    words, exact = enumerate_accepted(m, args.max_len, args.steps, _parse_ints(args.counters) or None)
    for w in words:
        print(show_word(w))
    print(f"# words={len(words)} exact={str(exact).lower()}")
    return EXIT_OK


def _write(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def cmd_compile_thm1(args) -> int:
    cm = parse_counter_machine(_read(args.file))
    try:
        g = compile_theorem1(cm)
    except ValueError as e:
        raise ValidationError(str(e)) from e
    _write(emit_grammar(g), args.output)
    return EXIT_OK


def universal_pipeline(rm: RegisterMachine, code: int, code_reg=2, input_reg=3, output_reg=1):
    """translate, attach the front end, compile, and load ``code`` into the code counter."""
    cm = attach_universal_front_end(translate_to_counter(rm, input_reg, output_reg), code_reg, input_reg, output_reg)
    return cm, with_code(compile_universal(cm, code_counter=code_reg), code)


def cmd_compile_universal(args) -> int:
    rm = parse_register_machine(_read(args.file))
    try:
        _, g = universal_pipeline(rm, args.code, args.code_reg, args.input_reg, args.output_reg)
    except ValueError as e:
        raise ValidationError(str(e)) from e
    _write(emit_grammar(g), args.output)
    return EXIT_OK


def cmd_size(args) -> int:
    g = parse_grammar(_read(args.file))
    r = size_report(g)
    print(f"components: {r.component_count}")
    print(f"rules: {r.rule_count}")
    print(f"nonterminals: {r.nonterminal_count}")
    print(f"queries: {r.query_count}")
    if g.meta.get("construction") == "universal" and "transitions" in g.meta:
        m = int(g.meta["transitions"])
        b = theorem2_bounds(m)
        # the fixed component count assumes eight registers; in general it is counters + 4
        want = int(g.meta.get("counters", 8)) + 4
        print(f"transitions m: {m}")
        checks = [
            ("components", r.component_count, "==", want, r.component_count == want),
            ("rules", r.rule_count, "<=", b["rules"], r.rule_count <= b["rules"]),
            ("nonterminals", r.nonterminal_count, "<=", b["nonterminals"], r.nonterminal_count <= b["nonterminals"]),
        ]
        for name, got, op, bound, ok in checks:
            print(f"bound {name}: {got} {op} {bound} {'PASS' if ok else 'FAIL'}")
    return EXIT_OK


def cmd_verify(args) -> int:
    g = parse_grammar(_read(args.grammar))
    cm = parse_counter_machine(_read(args.machine))
    counters = _parse_ints(args.counters) or None
    if counters is None and "code" in g.meta and "code_component" in g.meta:
        counters = [0] * cm.counters
        counters[int(g.meta["code_component"]) - 3] = int(g.meta["code"])
    bounds = EnumerationBounds(max_configurations=args.max_configs, max_word_length=args.max_len)
    try:
        rep = check_equivalence(g, cm, args.max_len, bounds, args.steps, counters, workers=args.workers)
    except ValueError as e:
        raise ValidationError(str(e)) from e
    print(f"agreed: {' '.join(map(show_word, rep.agreed_words)) or '-'}")
    print(f"only in grammar: {' '.join(map(show_word, rep.words_only_in_grammar)) or '-'}")
    print(f"only in machine: {' '.join(map(show_word, rep.words_only_in_machine)) or '-'}")
    print(f"grammar exhausted: {str(rep.grammar_exhausted).lower()}")
    print(f"machine exact: {str(rep.machine_exact).lower()}")
    print(f"conclusive: {str(rep.conclusive).lower()}")
    if rep.mismatch:
        print("result: MISMATCH")
        return EXIT_MISMATCH
    if not rep.conclusive:
        print("result: INCONCLUSIVE")
        return EXIT_INCONCLUSIVE
    print("result: EQUAL")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="pcgtool", description="PC grammar systems, counter machines and their compilers")
    sub = p.add_subparsers(dest="group", required=True, parser_class=_Parser)

    pg = sub.add_parser("pcgs", help="grammar-system commands").add_subparsers(dest="cmd", required=True)
    e = pg.add_parser("enum", help="enumerate the generated language")
    e.add_argument("file")
    e.add_argument("--max-len", type=int)
    e.add_argument("--max-depth", type=int)
    e.add_argument("--max-configs", type=int)
    e.add_argument("--workers", type=int, default=1)
    e.add_argument("--no-reduce", action="store_true", help="search the literal derivation relation")
    e.set_defaults(func=cmd_pcgs_enum)
    t = pg.add_parser("trace", help="replay a derivation by successor indices")
    t.add_argument("file")
    t.add_argument("--choices", default="")
    t.set_defaults(func=cmd_pcgs_trace)

    pm = sub.add_parser("machine", help="counter/register machine commands").add_subparsers(dest="cmd", required=True)
    r = pm.add_parser("run", help="run a machine on one input")
    r.add_argument("file")
    r.add_argument("--word")
    r.add_argument("--input", type=int, help="register machines: value of the input register")
    r.add_argument("--input-reg", type=int, default=1)
    r.add_argument("--output-reg", type=int, default=1)
    r.add_argument("--counters", default="", help="initial counter values, comma-separated")
    r.add_argument("--steps", type=int, default=10_000)
    r.set_defaults(func=cmd_machine_run)
    me = pm.add_parser("enum", help="enumerate accepted words")
    me.add_argument("file")
    me.add_argument("--max-len", type=int, required=True)
    me.add_argument("--steps", type=int, default=10_000)
    me.add_argument("--counters", default="")
    me.set_defaults(func=cmd_machine_enum)

    pc = sub.add_parser("compile", help="compile machines into grammar systems").add_subparsers(
        dest="cmd", required=True
    )
    c1 = pc.add_parser("thm1", help="six-component system for a counter machine")
    c1.add_argument("file")
    c1.add_argument("-o", "--output")
    c1.set_defaults(func=cmd_compile_thm1)
    cu = pc.add_parser("universal", help="universal-shape system for a register machine")
    cu.add_argument("file")
    cu.add_argument("--code", type=int, required=True)
    cu.add_argument("--code-reg", type=int, default=2)
    cu.add_argument("--input-reg", type=int, default=3)
    cu.add_argument("--output-reg", type=int, default=1)
    cu.add_argument("-o", "--output")
    cu.set_defaults(func=cmd_compile_universal)

    s = sub.add_parser("size", help="size report")
    s.add_argument("file")
    s.set_defaults(func=cmd_size)

    v = sub.add_parser("verify", help="bounded language equivalence")
    v.add_argument("grammar")
    v.add_argument("machine")
    v.add_argument("--max-len", type=int, required=True)
    v.add_argument("--max-configs", type=int, default=10**7)
    v.add_argument("--steps", type=int)
    v.add_argument("--counters", default="")
    v.add_argument("--workers", type=int, default=1)
    v.set_defaults(func=cmd_verify)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ParseError as e:
        print(f"parse error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except ValidationError as e:
        print(f"validation error: {e}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
