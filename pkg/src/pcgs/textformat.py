"""Line-oriented text formats for grammar systems, counter machines and register machines.

Grammar system::

    pcgs nonreturning master=2 construction=theorem1
    nonterminals: S A t1 ...
    terminals: a b
    component 1:
      axiom: S
      S -> t1
      M1 -> <eps>

Counter machine::

    counters 2
    alphabet: a b
    states: q0 q1 qF
    start: q0
    final: qF
    (q0, a, Z, Z) -> (q0, +1, 0)

Register machine::

    registers 2
    labels: l0 l1 l2 lh
    start: l0
    halt: lh
    l0: CHECKSUB r1 -> l1, lh
    l1: ADD r2 -> l2
    lh: HALT

``#`` starts a comment everywhere.
"""

from __future__ import annotations

import re

from .grammar import MODES, Component, PCGSystem, Production, SymbolTable, validate
from .machines import CounterMachine, CounterRule
from .registers import Add, Check, CheckSub, Halt, RegisterMachine

EPS = "<eps>"
NAME_RE = re.compile(r"^[A-Za-z][A-Za-z0-9_'\[\]]*$")


class ParseError(ValueError):
    def __init__(self, message: str, line: int | None = None):
        self.message = message
        self.line = line
        super().__init__(f"line {line}: {message}" if line else message)


class ValidationError(ValueError):
    pass


def _lines(text: str):
    for no, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield no, line


def _names(rest: str, no: int) -> list[str]:
    out = rest.split()
    for s in out:
        if not NAME_RE.match(s):
            raise ParseError(f"bad symbol name {s!r}", no)
    return out


def _keyword(line: str, key: str) -> str | None:
    if line.startswith(key + ":"):
        return line[len(key) + 1 :]
    return None


# -- grammar systems ---------------------------------------------------------


def parse_grammar(text: str) -> PCGSystem:
    lines = list(_lines(text))
    if not lines:
        raise ParseError("empty file")
    no, head = lines[0]
    parts = head.split()
    if len(parts) < 2 or parts[0] != "pcgs" or parts[1] not in MODES:
        raise ParseError("expected header 'pcgs <returning|nonreturning> master=<i>'", no)
    meta, master = {}, None
    for kv in parts[2:]:
        key, eq, val = kv.partition("=")
        if not eq:
            raise ParseError(f"bad header field {kv!r}", no)
        if key == "master":
            if not val.isdigit():
                raise ParseError("master must be an integer", no)
            master = int(val)
        else:
            meta[key] = val
    if master is None:
        raise ParseError("header lacks master=<i>", no)

    nonterminals: list[str] | None = None
    terminals: list[str] | None = None
    comps: list[dict] = []
    rule_lines: dict[tuple[int, Production], int] = {}
    for no, line in lines[1:]:
        if (rest := _keyword(line, "nonterminals")) is not None:
            nonterminals = _names(rest, no)
        elif (rest := _keyword(line, "terminals")) is not None:
            terminals = _names(rest, no)
        elif m := re.match(r"^component\s+(\d+)\s*:$", line):
            if int(m.group(1)) != len(comps) + 1:
                raise ParseError(f"expected component {len(comps) + 1}", no)
            comps.append({"axiom": None, "rules": [], "line": no})
        elif (rest := _keyword(line, "axiom")) is not None:
            if not comps:
                raise ParseError("axiom outside a component block", no)
            comps[-1]["axiom"] = tuple(_names(rest, no))
        elif "->" in line:
            if not comps:
                raise ParseError("production outside a component block", no)
            lhs, _, rhs = line.partition("->")
            lhs_names = _names(lhs, no)
            if len(lhs_names) != 1:
                raise ParseError("a production needs exactly one left-hand symbol", no)
            toks = rhs.split()
            if toks == [EPS]:
                toks = []
            else:
                _names(" ".join(toks), no)
            p = Production(lhs_names[0], tuple(toks))
            comps[-1]["rules"].append(p)
            rule_lines.setdefault((len(comps), p), no)
        else:
            raise ParseError(f"cannot parse {line!r}", no)
    if nonterminals is None or terminals is None:
        raise ParseError("missing 'nonterminals:' or 'terminals:' line")
    if not comps:
        raise ParseError("no components")
    for c in comps:
        if c["axiom"] is None:
            raise ParseError("component without axiom", c["line"])
    table = SymbolTable.for_components(nonterminals, terminals, len(comps))
    system = PCGSystem(
        table, tuple(Component(tuple(c["rules"]), c["axiom"]) for c in comps), master, parts[1], meta
    )
    problems = validate(system)
    if problems:
        msgs = []
        for v in problems:
            line = rule_lines.get((v.component, v.rule)) if v.rule is not None else None
            msgs.append(f"line {line}: {v}" if line else str(v))
        raise ValidationError("; ".join(msgs))
    return system


def emit_grammar(system: PCGSystem) -> str:
    head = ["pcgs", system.mode, f"master={system.master}"]
    head += [f"{k}={v}" for k, v in system.meta.items()]
    out = [" ".join(head)]
    out.append("nonterminals: " + " ".join(system.symbols.nonterminals))
    out.append(("terminals: " + " ".join(system.symbols.terminals)).rstrip())
    for i, comp in enumerate(system.components, 1):
        out.append(f"component {i}:")
        out.append("  axiom: " + " ".join(comp.axiom))
        out += [f"  {p}" for p in comp.productions]
    return "\n".join(out) + "\n"


# -- counter machines --------------------------------------------------------

_RULE_RE = re.compile(r"^\(\s*([^)]*)\)\s*->\s*\(\s*([^)]*)\)$")


def _parse_action(tok: str, no: int) -> int:
    if tok not in ("+1", "1", "0", "-1", "-0", "+0"):
        raise ParseError(f"bad counter action {tok!r}", no)
    return int(tok)


def parse_counter_machine(text: str) -> CounterMachine:
    lines = list(_lines(text))
    if not lines:
        raise ParseError("empty file")
    no, head = lines[0]
    m = re.match(r"^counters\s+(\d+)$", head)
    if not m:
        raise ParseError("expected 'counters <n>'", no)
    n = int(m.group(1))
    fields: dict[str, list[str]] = {}
    rules: list[CounterRule] = []
    for no, line in lines[1:]:
        if rm := _RULE_RE.match(line):
            left = [t.strip() for t in rm.group(1).split(",")]
            right = [t.strip() for t in rm.group(2).split(",")]
            if len(left) != n + 2 or len(right) != n + 1:
                raise ParseError(f"rule must have {n} guards and {n} actions", no)
            read = None if left[1] in ("eps", "<eps>", "λ") else left[1]
            guards = tuple(left[2:])
            for g in guards:
                if g not in ("Z", "B"):
                    raise ParseError(f"guard must be Z or B, got {g!r}", no)
            actions = tuple(_parse_action(t, no) for t in right[1:])
            rule = CounterRule(left[0], read, guards, right[0], actions)
            for g, e in zip(guards, actions):
                if g == "Z" and e == -1:
                    raise ValidationError(f"line {no}: an empty counter (guard Z) cannot be decremented")
            rules.append(rule)
            continue
        key, colon, rest = line.partition(":")
        if not colon or key not in ("alphabet", "states", "start", "final"):
            raise ParseError(f"cannot parse {line!r}", no)
        fields[key] = _names(rest, no)
    for key in ("alphabet", "states", "start", "final"):
        if key not in fields:
            raise ParseError(f"missing '{key}:' line")
    for key in ("start", "final"):
        if len(fields[key]) != 1:
            raise ParseError(f"'{key}:' takes exactly one state")
    cm = CounterMachine(
        tuple(fields["alphabet"]), tuple(fields["states"]), fields["start"][0], fields["final"][0], n, tuple(rules)
    )
    problems = cm.problems()
    if problems:
        raise ValidationError("; ".join(problems))
    return cm


def emit_counter_machine(cm: CounterMachine) -> str:
    out = [
        f"counters {cm.counters}",
        "alphabet: " + " ".join(cm.alphabet),
        "states: " + " ".join(cm.states),
        f"start: {cm.start}",
        f"final: {cm.final}",
    ]
    out += [str(r) for r in cm.rules]
    return "\n".join(out) + "\n"


# -- register machines -------------------------------------------------------

_INS_RE = re.compile(r"^(\w+)\s*:\s*(ADD|CHECKSUB|CHECK|HALT)\b\s*(.*)$")


def _reg(tok: str, no: int) -> int:
    if not re.match(r"^r\d+$", tok):
        raise ParseError(f"expected register like r1, got {tok!r}", no)
    return int(tok[1:])


def parse_register_machine(text: str) -> RegisterMachine:
    lines = list(_lines(text))
    if not lines:
        raise ParseError("empty file")
    no, head = lines[0]
    m = re.match(r"^registers\s+(\d+)$", head)
    if not m:
        raise ParseError("expected 'registers <m>'", no)
    fields: dict[str, list[str]] = {}
    ins: dict[str, object] = {}
    for no, line in lines[1:]:
        key, colon, rest = line.partition(":")
        if key in ("labels", "start", "halt") and colon:
            fields[key] = _names(rest, no)
            continue
        im = _INS_RE.match(line)
        if not im:
            raise ParseError(f"cannot parse {line!r}", no)
        label, op, args = im.groups()
        if label in ins:
            raise ParseError(f"label {label} labels more than one instruction", no)
        if op == "HALT":
            if args.strip():
                raise ParseError("HALT takes no operands", no)
            ins[label] = Halt()
            continue
        reg, arrow, dest = args.partition("->")
        if not arrow:
            raise ParseError("expected '-> <label>'", no)
        r = _reg(reg.strip(), no)
        dests = [d.strip() for d in dest.split(",")]
        if op == "ADD":
            if len(dests) != 1:
                raise ParseError("ADD takes one target label", no)
            ins[label] = Add(r, dests[0])
        else:
            if len(dests) != 2:
                raise ParseError(f"{op} takes two target labels", no)
            ins[label] = Check(r, *dests) if op == "CHECK" else CheckSub(r, *dests)
    for key in ("labels", "start", "halt"):
        if key not in fields:
            raise ParseError(f"missing '{key}:' line")
    rm = RegisterMachine(int(m.group(1)), tuple(fields["labels"]), fields["start"][0], fields["halt"][0], ins)
    problems = rm.problems()
    if problems:
        raise ValidationError("; ".join(problems))
    return rm


def emit_register_machine(rm: RegisterMachine) -> str:
    out = [
        f"registers {rm.registers}",
        "labels: " + " ".join(rm.labels),
        f"start: {rm.start}",
        f"halt: {rm.halt}",
    ]
    for lab in rm.labels:
        i = rm.instructions[lab]
        if isinstance(i, Add):
            out.append(f"{lab}: ADD r{i.register} -> {i.next}")
        elif isinstance(i, Check):
            out.append(f"{lab}: CHECK r{i.register} -> {i.if_zero}, {i.if_positive}")
        elif isinstance(i, CheckSub):
            out.append(f"{lab}: CHECKSUB r{i.register} -> {i.if_positive}, {i.if_zero}")
        else:
            out.append(f"{lab}: HALT")
    return "\n".join(out) + "\n"


def parse_machine(text: str) -> CounterMachine | RegisterMachine:
    for _, line in _lines(text):
        if line.startswith("registers"):
            return parse_register_machine(text)
        return parse_counter_machine(text)
    raise ParseError("empty file")
