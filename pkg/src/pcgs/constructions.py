"""Compilers from counter machines to non-returning PC grammar systems.

``compile_theorem1`` transcribes the six-component construction for two-counter
machines rule family by rule family.  ``compile_universal`` is the n-counter
variant whose size stays linear in the number of transitions; see its docstring
for how it differs.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .grammar import NON_RETURNING, Component, PCGSystem, Production, SymbolTable, is_query_name, query_name
from .machines import BLANK, ZERO, CounterMachine, CounterRule

FIXED_NONTERMINALS = ("S", "A", "Z", "F", "F'", "F''", "F'''", "C1", "C2", "M0", "M1", "M2")

_SIGMA = {(1, BLANK): 2, (0, BLANK): 1, (-1, BLANK): 0, (1, ZERO): 1, (0, ZERO): 0}


def sigma(action: int, store: str) -> tuple[str, ...]:
    """Number of A's written back into a counter string after one simulated step."""
    try:
        return ("A",) * _SIGMA[(action, store)]
    except KeyError:
        raise ValueError(f"partial mapping undefined for ({action:+d}, {store})") from None


@dataclass(frozen=True)
class TransitionSymbol:
    """A counter rule wrapped as one nonterminal."""

    name: str
    rule: CounterRule

    @property
    def state(self) -> str:
        return self.rule.from_state

    @property
    def read(self) -> str | None:
        return self.rule.read

    @property
    def next_state(self) -> str:
        return self.rule.to_state

    def store(self, i: int) -> str:
        return self.rule.guards[i - 1]

    def action(self, i: int) -> int:
        return self.rule.actions[i - 1]

    def emitted(self) -> tuple[str, ...]:
        # a blank read consumes no input letter
        return () if self.read is None or self.read == BLANK else (self.read,)


def transition_symbols(cm: CounterMachine) -> list[TransitionSymbol]:
    return [TransitionSymbol(f"t{i}", r) for i, r in enumerate(cm.rules, 1)]


def validate_final_normal_form(cm: CounterMachine) -> bool:
    """True iff every rule entering the final state has empty-counter guards and no action."""
    return all(
        all(g == ZERO for g in r.guards) and not any(r.actions) for r in cm.rules if r.to_state == cm.final
    )


def _check_machine(cm: CounterMachine, counters: int | None = None) -> None:
    problems = cm.problems()
    if problems:
        raise ValueError("invalid counter machine: " + "; ".join(problems))
    if counters is not None and cm.counters != counters:
        raise ValueError(f"expected a {counters}-counter machine, got {cm.counters} counters")
    if not validate_final_normal_form(cm):
        raise ValueError("machine must enter its final state with empty counters and no counter action")


def _p(lhs: str, *rhs: str) -> Production:
    return Production(lhs, tuple(rhs))


def _terminals(cm: CounterMachine, nonterminals: Sequence[str]) -> tuple[str, ...]:
    clash = set(cm.alphabet) & set(nonterminals)
    if clash:
        raise ValueError(f"input symbols clash with nonterminal names: {sorted(clash)}")
    return tuple(cm.alphabet)


def _used_nonterminals(comps, alphabet, first: Sequence[str]) -> list[str]:
    """``first`` followed by every other non-query, non-input symbol the productions mention."""
    out = dict.fromkeys(first)
    for comp in comps:
        for p in comp.productions:
            for s in (p.lhs, *p.rhs):
                if not is_query_name(s) and s not in alphabet:
                    out.setdefault(s, None)
    return list(out)


def compile_theorem1(cm: CounterMachine) -> PCGSystem:
    """Six-component system (sel, gen, c1, c2, ch1, ch2) generating the language of ``cm``.

    The master is gen.  Transition ``i`` becomes nonterminal ``t<i>`` and the indexed
    families become ``D1[t<i>]``, ``E2[t<i>]`` and so on.
    """
    _check_machine(cm, 2)
    I = transition_symbols(cm)
    Qsel, Qgen, Qc1, Qc2, Qch1, Qch2 = (query_name(i) for i in range(1, 7))
    Qc = {1: Qc1, 2: Qc2}

    def fam(prefix: str, a: TransitionSymbol) -> str:
        return f"{prefix}[{a.name}]"

    sel = [_p("S", a.name) for a in I if a.state == cm.start]
    for a in I:
        sel += [_p(a.name, fam("D1", a)), _p(fam("D1", a), fam("D2", a))]
    for a in I:
        sel += [_p(fam("D2", a), b.name) for b in I if a.next_state == b.state]
    sel += [_p(fam("D2", a), "F") for a in I if a.next_state == cm.final]
    sel.append(_p("F", "F"))

    gen = [_p("S", Qsel), _p("C1", "C2"), _p("C2", Qsel), _p("F", "F'"), _p("F'", Qch1, Qc1, Qc2)]
    gen += [_p(a.name, *a.emitted(), "C1") for a in I]
    gen += [_p(fam("H2", a)) for a in I]
    gen += [_p("M1"), _p("Z"), _p("F''"), _p("F'''")]

    counters = []
    for i in (1, 2):
        c = [_p("S", Qsel, "Z"), _p("A", Qch2), _p("F", "F''"), _p("F''", "F''")]
        for a in I:
            if a.store(i) == BLANK:
                y = sigma(a.action(i), BLANK)
                c += [_p(a.name, Qsel), _p(fam("D2", a), Qsel, *y)]
        for a in I:
            if a.store(i) == ZERO:
                y = sigma(a.action(i), ZERO)
                c += [_p(a.name, fam("H1", a)), _p(fam("H1", a), fam("H2", a)), _p(fam("H2", a), Qsel, *y)]
        counters.append(c)

    ch1 = [_p("S", Qsel)]
    ch1 += [_p(a.name, fam("E1", a)) for a in I]
    ch1 += [_p(fam("E2", a), Qsel) for a in I]
    for a in I:
        checks = [Qc[i] for i in (1, 2) if a.store(i) == ZERO]
        ch1.append(_p(fam("E1", a), fam("E2", a), *checks))
    ch1 += [_p("F", "F'''"), _p("F'''", "F'''")]

    ch2 = [_p("S", "M0"), _p("M0", "M1"), _p("M1", "M2"), _p("M2", "M0")]

    comps = tuple(Component(tuple(rules)) for rules in (sel, gen, *counters, ch1, ch2))
    nts = _used_nonterminals(comps, cm.alphabet, [a.name for a in I] + list(FIXED_NONTERMINALS))
    table = SymbolTable.for_components(nts, _terminals(cm, nts), 6)
    return PCGSystem(table, comps, master=2, mode=NON_RETURNING, meta={"construction": "theorem1"})


def compile_universal(cm: CounterMachine, code_counter: int | None = 2) -> PCGSystem:
    """(n+4)-component system (sel, gen, c1..cn, ch1, ch2) for an n-counter machine.

    Same division of labour as :func:`compile_theorem1`, but every simulated step
    takes four rewriting steps and only transition symbols are indexed by
    transition; everything else is indexed by state or by a bounded value, which
    keeps rules and nonterminals linear in the number of transitions:

    * sel: ``t -> X1[q']``, ``X1[q] -> X2[q] -> X3[q]``, ``X3[q] -> t'`` for each
      transition leaving q, ``X3[qF] -> F``.
    * counter i, guard B: ``A -> Q_ch2`` first (receives M1), then
      ``t -> Q_sel y`` (receives ``X2[q']``), ``X2[q] -> W``, ``W -> Q_sel``.
    * counter i, guard Z: ``t -> H1[k]``, ``H1[k] -> H2[k]``, ``H2[k] -> W A^k``,
      ``W -> Q_sel``; k is the number of A's written back.
    * ch1: ``t -> E1[J]`` with J the zero-guarded counters, ``E1[J] -> E2 Q_cj..``
      (snapshot of those counters, which must hold no A), ``E2 -> V``, ``V -> Q_sel``.
    * ch2 cycles M0 -> M1 -> M2 -> M3 -> M0; gen erases only M1, Z, H2[k], F'', F'''.
    """
    _check_machine(cm)
    n = cm.counters
    I = transition_symbols(cm)
    Qsel = query_name(1)
    Qc = {i: query_name(2 + i) for i in range(1, n + 1)}
    Qch1, Qch2 = query_name(n + 3), query_name(n + 4)

    def zset(a: TransitionSymbol) -> tuple[int, ...]:
        return tuple(i for i in range(1, n + 1) if a.store(i) == ZERO)

    def ename(js: tuple[int, ...]) -> str:
        return "E1[" + "_".join(map(str, js)) + "]"

    next_states = sorted({a.next_state for a in I}, key=cm.states.index)

    sel = [_p("S", a.name) for a in I if a.state == cm.start]
    sel += [_p(a.name, f"X1[{a.next_state}]") for a in I]
    for q in next_states:
        sel += [_p(f"X1[{q}]", f"X2[{q}]"), _p(f"X2[{q}]", f"X3[{q}]")]
    sel += [_p(f"X3[{b.state}]", b.name) for b in I if b.state in next_states]
    if cm.final in next_states:
        sel.append(_p(f"X3[{cm.final}]", "F"))
    sel.append(_p("F", "F"))

    ks = sorted({len(sigma(a.action(i), ZERO)) for a in I for i in range(1, n + 1) if a.store(i) == ZERO})
    gen = [_p("S", Qsel), _p("C1", "C2"), _p("C2", "C3"), _p("C3", Qsel), _p("F", "F'")]
    gen.append(_p("F'", Qch1, *Qc.values()))
    gen += [_p(a.name, *a.emitted(), "C1") for a in I]
    gen += [_p(f"H2[{k}]") for k in ks]
    gen += [_p("M1"), _p("Z"), _p("F''"), _p("F'''")]

    counters = []
    for i in range(1, n + 1):
        c = [_p("S", Qsel, "Z"), _p("A", Qch2), _p("F", "F''"), _p("F''", "F''"), _p("W", Qsel)]
        c += [_p(f"X2[{q}]", "W") for q in next_states]
        for k in ks:
            c += [_p(f"H1[{k}]", f"H2[{k}]"), _p(f"H2[{k}]", "W", *("A",) * k)]
        for a in I:
            y = sigma(a.action(i), a.store(i))
            if a.store(i) == BLANK:
                c.append(_p(a.name, Qsel, *y))
            else:
                c.append(_p(a.name, f"H1[{len(y)}]"))
        counters.append(c)

    ch1 = [_p("S", Qsel), _p("E2", "V"), _p("V", Qsel), _p("F", "F'''"), _p("F'''", "F'''")]
    ch1 += [_p(a.name, ename(zset(a))) for a in I]
    for js in sorted({zset(a) for a in I}):
        ch1.append(_p(ename(js), "E2", *(Qc[j] for j in js)))

    ch2 = [_p("S", "M0"), _p("M0", "M1"), _p("M1", "M2"), _p("M2", "M3"), _p("M3", "M0")]

    comps = tuple(Component(tuple(rules)) for rules in (sel, gen, *counters, ch1, ch2))
    nts = _used_nonterminals(comps, cm.alphabet, ["A"])
    table = SymbolTable.for_components(nts, _terminals(cm, nts), n + 4)
    meta = {"construction": "universal", "transitions": str(len(I)), "counters": str(n)}
    if code_counter is not None:
        meta["code_component"] = str(2 + code_counter)
    return PCGSystem(table, comps, master=2, mode=NON_RETURNING, meta=meta)


def build_universal_axiom(code: int) -> tuple[str, ...]:
    if code < 0:
        raise ValueError("code must be nonnegative")
    return ("A",) * code + ("S",)


def with_code(system: PCGSystem, code: int) -> PCGSystem:
    """Start the code-counter component of a universal system from ``A^code S``."""
    idx = int(system.meta["code_component"])
    out = system.with_axiom(idx, build_universal_axiom(code))
    out.meta["code"] = str(code)
    return out


@dataclass(frozen=True)
class SizeReport:
    component_count: int
    rule_count: int
    nonterminal_count: int
    query_count: int


def size_report(system: PCGSystem) -> SizeReport:
    return SizeReport(
        component_count=system.n,
        rule_count=sum(len(set(c.productions)) for c in system.components),
        nonterminal_count=len(set(system.symbols.nonterminals)),
        query_count=len(system.symbols.queries),
    )


def theorem2_bounds(transitions: int) -> dict[str, int]:
    return {"components": 12, "rules": 48 * transitions + 51, "nonterminals": 4 * transitions + 12}


KOREC_TRANSITIONS = 23 * 2**8 + 3
