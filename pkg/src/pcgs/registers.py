"""Register machines and their translation into counter machines."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

from .machines import BLANK, ZERO, CounterMachine, CounterRule, all_guards


@dataclass(frozen=True)
class Add:
    register: int
    next: str


@dataclass(frozen=True)
class Check:
    register: int
    if_zero: str
    if_positive: str


@dataclass(frozen=True)
class CheckSub:
    """Decrement if positive and go to ``if_positive``, else go to ``if_zero``."""

    register: int
    if_positive: str
    if_zero: str


@dataclass(frozen=True)
class Halt:
    pass


Instruction = Union[Add, Check, CheckSub, Halt]


def targets(ins: Instruction) -> tuple[str, ...]:
    if isinstance(ins, Add):
        return (ins.next,)
    if isinstance(ins, Check):
        return (ins.if_zero, ins.if_positive)
    if isinstance(ins, CheckSub):
        return (ins.if_positive, ins.if_zero)
    return ()


@dataclass(frozen=True)
class RegisterMachine:
    registers: int
    labels: tuple[str, ...]
    start: str
    halt: str
    instructions: dict  # label -> Instruction

    def problems(self) -> list[str]:
        out = []
        labels = set(self.labels)
        if len(labels) != len(self.labels):
            out.append("duplicate labels")
        if set(self.instructions) != labels:
            out.append("each label must label exactly one instruction")
        if self.start not in labels or self.halt not in labels:
            out.append("start and halt labels must be declared")
        elif not isinstance(self.instructions.get(self.halt), Halt):
            out.append(f"halt label {self.halt} must carry HALT")
        for lab, ins in self.instructions.items():
            if not isinstance(ins, Halt) and not 1 <= ins.register <= self.registers:
                out.append(f"{lab}: invalid register reference r{ins.register}")
            for t in targets(ins):
                if t not in labels:
                    out.append(f"{lab}: jump to undeclared label {t}")
        return out

    def counts(self) -> dict[str, int]:
        c = {"ADD": 0, "CHECK": 0, "CHECKSUB": 0, "HALT": 0}
        for ins in self.instructions.values():
            c[{Add: "ADD", Check: "CHECK", CheckSub: "CHECKSUB", Halt: "HALT"}[type(ins)]] += 1
        return c


def run_register(
    machine: RegisterMachine, x: int, input_reg: int, output_reg: int, step_bound: int
) -> int | None:
    """Run deterministically from the start label; None if no HALT within the bound."""
    regs = [0] * (machine.registers + 1)
    regs[input_reg] = x
    label = machine.start
    for _ in range(step_bound + 1):
        ins = machine.instructions[label]
        if isinstance(ins, Halt):
            return regs[output_reg]
        if isinstance(ins, Add):
            regs[ins.register] += 1
            label = ins.next
        elif isinstance(ins, Check):
            label = ins.if_zero if regs[ins.register] == 0 else ins.if_positive
        elif regs[ins.register] > 0:
            regs[ins.register] -= 1
            label = ins.if_positive
        else:
            label = ins.if_zero
    return None


def translate_to_counter(machine: RegisterMachine, input_reg: int = 1, output_reg: int = 1) -> CounterMachine:
    """One counter per register, one state per label, every rule reads lambda.

    Each ADD/CHECK/CHECKSUB yields one rule per guard combination.  The halting
    label becomes the final state; ``input_reg``/``output_reg`` are only checked.
    """
    problems = machine.problems()
    for r in (input_reg, output_reg):
        if not 1 <= r <= machine.registers:
            problems.append(f"invalid register reference r{r}")
    if problems:
        raise ValueError("; ".join(problems))
    n = machine.registers
    rules = []
    for lab in machine.labels:
        ins = machine.instructions[lab]
        if isinstance(ins, Halt):
            continue
        r = ins.register - 1
        for g in all_guards(n):
            acts = [0] * n
            if isinstance(ins, Add):
                acts[r] = 1
                nxt = ins.next
            elif isinstance(ins, Check):
                nxt = ins.if_zero if g[r] == ZERO else ins.if_positive
            else:
                if g[r] == BLANK:
                    acts[r] = -1
                    nxt = ins.if_positive
                else:
                    nxt = ins.if_zero
            rules.append(CounterRule(lab, None, g, nxt, tuple(acts)))
    return CounterMachine(("a",), tuple(machine.labels), machine.start, machine.halt, n, tuple(rules))


def _fresh(name: str, taken: set[str]) -> str:
    while name in taken:
        name += "_"
    taken.add(name)
    return name


def attach_universal_front_end(
    cm: CounterMachine, code_counter: int = 2, input_counter: int = 3, output_counter: int = 1
) -> CounterMachine:
    """Add input filling, output comparison and counter erasure around ``cm``.

    Counter indices are 1-based.  ``cm.final`` is taken as the halting state.  The
    result starts in a fresh state that nondeterministically fills the input
    counter (it expects the code counter to be nonzero), compares the output
    counter with the unary input at the halting state, then drains every counter
    in a fresh state before entering a fresh final state with empty counters.
    """
    if tuple(cm.alphabet) != ("a",):
        raise ValueError("the universal front-end needs the unary input alphabet {a}")
    n = cm.counters
    for c in (code_counter, input_counter, output_counter):
        if not 1 <= c <= n:
            raise ValueError(f"counter {c} out of range 1..{n}")
    code, inp, out = code_counter - 1, input_counter - 1, output_counter - 1
    taken = set(cm.states)
    q0 = _fresh("q0", taken)
    erase = _fresh("qE", taken)
    qf = _fresh("qF", taken)
    halt = cm.final

    def guards(input_guard: str) -> tuple[str, ...]:
        g = [ZERO] * n
        g[code] = BLANK
        g[inp] = input_guard
        return tuple(g)

    fill = [0] * n
    fill[inp] = 1
    new = [
        CounterRule(q0, None, guards(ZERO), q0, tuple(fill)),
        CounterRule(q0, None, guards(BLANK), q0, tuple(fill)),
        CounterRule(q0, None, guards(BLANK), cm.start, (0,) * n),
    ]
    dec_out = tuple(-1 if i == out else 0 for i in range(n))
    for g in all_guards(n):
        if g[out] == BLANK:
            new.append(CounterRule(halt, "a", g, halt, dec_out))
        else:
            new.append(CounterRule(halt, None, g, erase, (0,) * n))
    for g in all_guards(n):
        if all(c == ZERO for c in g):
            new.append(CounterRule(erase, None, g, qf, (0,) * n))
        else:
            new.append(CounterRule(erase, None, g, erase, tuple(-1 if c == BLANK else 0 for c in g)))
    return CounterMachine(
        cm.alphabet, (*cm.states, q0, erase, qf), q0, qf, n, tuple(cm.rules) + tuple(new)
    )


def korec_standin() -> RegisterMachine:
    """Structural stand-in with the instruction profile of Korec's small universal machine.

    8 registers, 8 ADD, 1 CHECK, 12 CHECKSUB and a HALT.  The control flow is
    arbitrary; it is NOT a universal machine and only serves size accounting.
    """
    labels = [f"l{i}" for i in range(21)] + ["lh"]
    kinds = ["CHECKSUB", "ADD"] * 8 + ["CHECKSUB"] * 4 + ["CHECK"]
    ins = {}
    for i, kind in enumerate(kinds):
        r = i % 8 + 1
        nxt, other = labels[i + 1], labels[(i * 7 + 3) % 21]
        if kind == "ADD":
            ins[labels[i]] = Add(r, nxt)
        elif kind == "CHECK":
            ins[labels[i]] = Check(r, "lh", labels[0])
        else:
            ins[labels[i]] = CheckSub(r, other, nxt)
    ins["lh"] = Halt()
    return RegisterMachine(8, tuple(labels), "l0", "lh", ins)
