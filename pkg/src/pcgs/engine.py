"""Direct derivation relation, bounded language enumeration and trace replay.

Configurations are tuples of strings, each string a tuple of interned symbol ids
(see :meth:`pcgs.grammar.SymbolTable.intern`).
"""

from __future__ import annotations

import enum
import random
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from itertools import product
from typing import Iterable, Sequence

from .grammar import RETURNING, PCGSystem, initial_configuration, validate

Config = tuple[tuple[int, ...], ...]


class StepKind(enum.Enum):
    REWRITING = "rewriting"
    COMMUNICATION = "communication"
    FINAL = "final"
    BLOCKED = "blocked"


BLOCKED = StepKind.BLOCKED


class DerivationError(Exception):
    pass


class _Kernel:
    """Integer-level view of a system, built once per system."""

    def __init__(self, system: PCGSystem):
        problems = validate(system)
        if problems:
            raise DerivationError("invalid system: " + "; ".join(map(str, problems)))
        st = system.symbols
        ids = st.intern
        size = len(ids)
        self.n = system.n
        self.master = system.master - 1
        self.returning = system.mode == RETURNING
        self.terminal = frozenset(ids[t] for t in st.terminals)
        self.query_target = [-1] * size
        for i, q in enumerate(st.queries):
            self.query_target[ids[q]] = i
        self.queries = frozenset(ids[q] for q in st.queries)
        self.axioms = initial_configuration(system)
        self.rules: list[dict[int, list[tuple[int, ...]]]] = []
        for comp in system.components:
            table: dict[int, list[tuple[int, ...]]] = {}
            for p in comp.productions:
                rhs = tuple(ids[s] for s in p.rhs)
                alts = table.setdefault(ids[p.lhs], [])
                if rhs not in alts:
                    alts.append(rhs)
            self.rules.append(table)

        mq = self.query_target
        self.master_quiet = not any(
            mq[s] == self.master for table in self.rules for alts in table.values() for rhs in alts for s in rhs
        )
        # master terminal count only grows and master nonterminals only vanish by its own rules
        self.master_monotone = not self.returning or self.master_quiet
        mrules = self.rules[self.master]
        nts = {ids[x] for x in st.nonterminals}
        productive: set[int] = set()
        changed = True
        while changed:
            changed = False
            for x, alts in mrules.items():
                if x in productive:
                    continue
                if any(all(s in self.terminal or s in self.queries or s in productive for s in rhs) for rhs in alts):
                    productive.add(x)
                    changed = True
        self.master_productive = frozenset(productive)
        bad = {x for x, alts in mrules.items() if any(s in self.queries for rhs in alts for s in rhs)}
        changed = True
        while changed:
            changed = False
            for x, alts in mrules.items():
                if x not in bad and any(s in bad for rhs in alts for s in rhs):
                    bad.add(x)
                    changed = True
        self.master_query_free = frozenset(nts - bad)
        self.poison = [] if self.returning else self._poison(nts)

    def _poison(self, nts: set[int]) -> list[tuple[frozenset, frozenset]]:
        """Per component j: (symbols stuck in j that the master cannot erase,
        master nonterminals whose elimination needs a query to j).

        A stuck symbol stays in j for good (non-returning), so once the master must
        still query j it would receive it and could never become terminal.
        """
        qt = self.query_target
        reach = [set(ax) for ax in self.axioms]
        changed = True
        while changed:
            changed = False
            for i, table in enumerate(self.rules):
                add = set()
                for x in reach[i]:
                    for rhs in table.get(x, ()):
                        add.update(rhs)
                    if qt[x] >= 0:
                        add |= reach[qt[x]]
                if not add <= reach[i]:
                    reach[i] |= add
                    changed = True
        can_clear = [
            any(all(s in self.terminal or s in self.queries for s in rhs) for alts in table.values() for rhs in alts)
            for table in self.rules
        ]
        mrules = self.rules[self.master]
        out = []
        for j in range(self.n):
            if j == self.master:
                out.append((frozenset(), frozenset()))
                continue
            stuck = frozenset(
                y for y in reach[j] if y in nts and y not in self.rules[j] and y not in self.master_productive
            )
            avoid: set[int] = set()

            def ok(s: int) -> bool:
                if s in self.terminal or s in avoid:
                    return True
                t = qt[s]
                if t < 0 or t == j:
                    return False
                return can_clear[t] or any(y in avoid for y in reach[t])

            changed = True
            while changed:
                changed = False
                for x, alts in mrules.items():
                    if x not in avoid and any(all(ok(s) for s in rhs) for rhs in alts):
                        avoid.add(x)
                        changed = True
            out.append((stuck, frozenset(nts - avoid)))
        return out

    def has_query(self, x: Sequence[int]) -> bool:
        q = self.queries
        return any(s in q for s in x)

    def is_terminal(self, x: Sequence[int]) -> bool:
        t = self.terminal
        return all(s in t for s in x)

    def rewrites(self, i: int, x: tuple[int, ...], leftmost: bool = False) -> list[tuple[int, ...]] | None:
        """One-step rewrites of ``x`` in component ``i``; None if ``x`` is stuck."""
        if self.is_terminal(x):
            return [x]
        table = self.rules[i]
        out: dict[tuple[int, ...], None] = {}
        term = self.terminal
        for pos, sym in enumerate(x):
            if leftmost and sym in term:
                continue
            alts = table.get(sym)
            if alts:
                pre, post = x[:pos], x[pos + 1 :]
                for rhs in alts:
                    out.setdefault(pre + rhs + post, None)
            if leftmost:
                break
        return list(out) if out else None


def kernel(system: PCGSystem) -> _Kernel:
    k = system.__dict__.get("_kernel")
    if k is None:
        k = _Kernel(system)
        system.__dict__["_kernel"] = k
    return k


def _check_shape(k: _Kernel, config: Config) -> None:
    if len(config) != k.n:
        raise DerivationError(f"configuration has {len(config)} strings, system has {k.n} components")


def classify(system: PCGSystem, config: Config) -> StepKind:
    k = kernel(system)
    _check_shape(k, config)
    if all(k.is_terminal(x) for x in config):
        return StepKind.FINAL
    if any(k.has_query(x) for x in config):
        return StepKind.COMMUNICATION
    return StepKind.REWRITING


def _communicate(k: _Kernel, config: Config) -> Config | StepKind:
    new = list(config)
    delivered: set[int] = set()
    qt = k.query_target
    for i, x in enumerate(config):
        targets = [qt[s] for s in x if qt[s] >= 0]
        if not targets or any(k.has_query(config[t]) for t in targets):
            continue
        y: list[int] = []
        for s in x:
            t = qt[s]
            if t >= 0:
                y.extend(config[t])
                delivered.add(t)
            else:
                y.append(s)
        new[i] = tuple(y)
    if k.returning:
        for t in delivered:
            new[t] = k.axioms[t]
    result = tuple(new)
    return BLOCKED if result == config else result


def communication_step(system: PCGSystem, config: Config) -> Config | StepKind:
    """Resolve queries simultaneously; returns BLOCKED on a fixpoint."""
    if classify(system, config) is not StepKind.COMMUNICATION:
        raise DerivationError("communication step requires a query symbol and a non-final configuration")
    return _communicate(kernel(system), config)


def _rewrite_product(k: _Kernel, config: Config, leftmost_master: bool = False) -> list[Config] | StepKind:
    options = []
    for i, x in enumerate(config):
        opts = k.rewrites(i, x, leftmost_master and i == k.master)
        if opts is None:
            return BLOCKED
        options.append(opts)
    return list(dict.fromkeys(product(*options)))


def rewriting_successors(system: PCGSystem, config: Config) -> list[Config] | StepKind:
    """All one-step rewrites, in canonical order (component options by occurrence, then rule)."""
    if classify(system, config) is not StepKind.REWRITING:
        raise DerivationError("rewriting step requires a query-free, non-final configuration")
    return _rewrite_product(kernel(system), config)


def successors(system: PCGSystem, config: Config) -> list[Config] | StepKind:
    kind = classify(system, config)
    if kind is StepKind.FINAL:
        return []
    k = kernel(system)
    if kind is StepKind.COMMUNICATION:
        r = _communicate(k, config)
        return r if r is BLOCKED else [r]
    return _rewrite_product(k, config)


@dataclass
class EnumerationBounds:
    """Search budgets; ``None`` means unbounded.

    ``max_word_length`` is not a budget: configurations whose master already holds
    more terminals are discarded only when that is exact (non-returning mode or a
    master nobody queries), so the result stays complete for shorter words.
    """

    max_depth: int | None = None
    max_configurations: int | None = None
    max_string_length: int | None = None
    max_word_length: int | None = None

    def __post_init__(self):
        for name in ("max_depth", "max_configurations", "max_string_length", "max_word_length"):
            v = getattr(self, name)
            if v is not None and v < 0:
                raise ValueError(f"{name} must be nonnegative")


@dataclass
class EnumerationStats:
    visited: int = 0
    expanded: int = 0
    final: int = 0
    blocked: int = 0
    pruned_depth: int = 0
    pruned_length: int = 0
    pruned_word_length: int = 0
    dead_master: int = 0
    master_done: int = 0
    budget_hit: bool = False
    max_depth_reached: int = 0


@dataclass
class EnumerationResult:
    words: list[tuple[str, ...]]
    exhausted: bool
    stats: EnumerationStats = field(default_factory=EnumerationStats)


def word_key(w: Sequence[str]):
    return (len(w), tuple(w))


def _expand(k: _Kernel, config: Config, bounds: EnumerationBounds, reduce: bool):
    """Pure per-configuration work: (master word or None, outcome tag, successors)."""
    m = config[k.master]
    word = m if k.is_terminal(m) else None
    if bounds.max_string_length is not None and any(len(x) > bounds.max_string_length for x in config):
        return word, "pruned_length", ()
    if k.master_monotone:
        if bounds.max_word_length is not None:
            t = k.terminal
            if sum(1 for s in m if s in t) > bounds.max_word_length:
                return None, "pruned_word_length", ()
        if reduce:
            if word is not None:
                # a terminal master string can no longer change
                return word, "master_done", ()
            mp, t, q = k.master_productive, k.terminal, k.queries
            if any(s not in t and s not in q and s not in mp for s in m):
                return word, "dead_master", ()
            for j, (stuck, needs) in enumerate(k.poison):
                if stuck and any(s in stuck for s in config[j]) and any(s in needs for s in m):
                    return word, "dead_master", ()
    if all(k.is_terminal(x) for x in config):
        return word, "final", ()
    if any(k.has_query(x) for x in config):
        r = _communicate(k, config)
        return (word, "blocked", ()) if r is BLOCKED else (word, "expanded", (r,))
    leftmost = reduce and k.master_quiet and all(s in k.terminal or s in k.master_query_free for s in m)
    r = _rewrite_product(k, config, leftmost)
    if r is BLOCKED:
        return word, "blocked", ()
    return word, "expanded", r


def enumerate_language(
    system: PCGSystem,
    bounds: EnumerationBounds | None = None,
    *,
    workers: int = 1,
    shuffle_seed: int | None = None,
    reduce: bool = True,
) -> EnumerationResult:
    """Breadth-first search over deduplicated configurations collecting master words.

    With ``reduce`` the search stops below configurations whose master string is
    already terminal or holds a nonterminal the master can never eliminate, and
    rewrites the master leftmost-only
    while nobody can observe it and it can no longer issue queries.  Both leave the
    word set unchanged; pass ``reduce=False`` for the literal relation.
    """
    bounds = bounds or EnumerationBounds()
    k = kernel(system)
    rng = random.Random(shuffle_seed) if shuffle_seed is not None else None
    stats = EnumerationStats()
    start = initial_configuration(system)
    visited = {start}
    frontier = [start]
    words: set[tuple[int, ...]] = set()
    truncated = False
    depth = 0
    pool = ThreadPoolExecutor(workers) if workers > 1 else None
    try:
        while frontier:
            stats.max_depth_reached = depth
            if rng is not None:
                rng.shuffle(frontier)
            if pool is not None:
                chunk = max(1, len(frontier) // (workers * 4))
                results: Iterable = pool.map(lambda c: _expand(k, c, bounds, reduce), frontier, chunksize=chunk)
            else:
                results = (_expand(k, c, bounds, reduce) for c in frontier)
            at_limit = bounds.max_depth is not None and depth >= bounds.max_depth
            nxt: list[Config] = []
            for word, tag, succ in results:
                stats.visited += 1
                if word is not None and (bounds.max_word_length is None or len(word) <= bounds.max_word_length):
                    words.add(word)
                if tag != "expanded":
                    setattr(stats, tag, getattr(stats, tag) + 1)
                    if tag == "pruned_length":
                        truncated = True
                    continue
                stats.expanded += 1
                fresh = [c for c in succ if c not in visited]
                if at_limit:
                    if fresh:
                        stats.pruned_depth += 1
                        truncated = True
                    continue
                for c in fresh:
                    if c in visited:
                        continue
                    if bounds.max_configurations is not None and len(visited) >= bounds.max_configurations:
                        stats.budget_hit = True
                        truncated = True
                        break
                    visited.add(c)
                    nxt.append(c)
            frontier = nxt
            depth += 1
    finally:
        if pool is not None:
            pool.shutdown()
    names = system.symbols.names
    out = sorted((tuple(names[s] for s in w) for w in words), key=word_key)
    return EnumerationResult(out, not truncated, stats)


def replay_trace(system: PCGSystem, choices: Sequence[int]) -> list[Config]:
    """Follow one successor per step (index into the canonical ordering)."""
    config = initial_configuration(system)
    trace = [config]
    for step, choice in enumerate(choices, 1):
        succ = successors(system, config)
        if succ is BLOCKED:
            raise DerivationError(f"step {step}: derivation is blocked")
        if not 0 <= choice < len(succ):
            raise DerivationError(f"step {step}: no such successor {choice} (have {len(succ)})")
        config = succ[choice]
        trace.append(config)
    return trace
