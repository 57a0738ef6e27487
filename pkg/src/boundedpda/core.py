"""Core data model: grammars, pushdown machines, finite automata, size measures.

All values are immutable after construction and safe to share across tasks.
Machine state names and all symbol names are tokens matching [A-Za-z0-9_]+ so
that every value round-trips through the text formats in `formats`.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field, replace
from functools import cached_property
from typing import Iterable, Optional, Sequence, Union

TOKEN_RE = re.compile(r"[A-Za-z0-9_]+\Z")

# Stack actions of a normal-form PDA transition.
STAY = "stay"
POP = "pop"
PUSH = "push"


class ToolError(Exception):
    """Base class for all errors raised by this package."""


class FormatError(ToolError):
    """Malformed input document; carries a 1-based line number when known."""

    def __init__(self, message: str, line: Optional[int] = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class InvalidValueError(ToolError):
    """A constructed value violates a structural invariant."""


class EmptyLanguageError(ToolError):
    """The start symbol derives no terminal string."""


class NotBoundedError(ToolError):
    """The language is not contained in the required bounded set."""

    def __init__(self, message: str, witness: Sequence[str]):
        super().__init__(message)
        self.witness = tuple(witness)


class BorderConflictError(ToolError):
    """A self-embedding context mixes distinct letters; grammar not letter-bounded."""


class BudgetError(ToolError):
    """An enumeration or construction exceeded its configured budget."""


class InconclusiveError(ToolError):
    """A bounded search hit its caps without settling the question."""


def check_token(name: str, what: str) -> None:
    if not TOKEN_RE.match(name):
        raise InvalidValueError(f"{what} {name!r} is not an alphanumeric/underscore token")


@dataclass(frozen=True)
class Production:
    """A rule head -> body; bodies are never empty."""

    head: str
    body: tuple[str, ...]

    def __post_init__(self):
        if len(self.body) < 1:
            raise InvalidValueError(f"empty production body for {self.head}")

    def __str__(self) -> str:
        return f"{self.head} -> {' '.join(self.body)}"


@dataclass(frozen=True)
class Grammar:
    """A context-free grammar over disjoint variable and terminal alphabets.

    `eps_stripped` records that the empty word was removed from the language
    during some earlier cleanup; the grammar itself never carries epsilon
    bodies.
    """

    variables: tuple[str, ...]
    terminals: tuple[str, ...]
    start: str
    productions: tuple[Production, ...]
    eps_stripped: bool = False

    def __post_init__(self):
        vset, tset = set(self.variables), set(self.terminals)
        if len(vset) != len(self.variables) or len(tset) != len(self.terminals):
            raise InvalidValueError("duplicate symbol declarations")
        if vset & tset:
            raise InvalidValueError(f"variables and terminals overlap: {sorted(vset & tset)}")
        for s in list(self.variables) + list(self.terminals):
            check_token(s, "symbol")
        if self.start not in vset:
            raise InvalidValueError(f"start symbol {self.start!r} is not a declared variable")
        for p in self.productions:
            if p.head not in vset:
                raise InvalidValueError(f"production head {p.head!r} is not a variable")
            for s in p.body:
                if s not in vset and s not in tset:
                    raise InvalidValueError(f"undeclared symbol {s!r} in {p}")

    @cached_property
    def by_head(self) -> dict[str, tuple[Production, ...]]:
        index: dict[str, list[Production]] = {v: [] for v in self.variables}
        for p in self.productions:
            index[p.head].append(p)
        return {v: tuple(ps) for v, ps in index.items()}

    def is_binary(self) -> bool:
        return all(len(p.body) <= 2 for p in self.productions)

    def is_cnf(self) -> bool:
        vset = set(self.variables)
        for p in self.productions:
            if len(p.body) == 1 and p.body[0] not in vset:
                continue
            if len(p.body) == 2 and p.body[0] in vset and p.body[1] in vset:
                continue
            return False
        return True


@dataclass(frozen=True)
class PdaTransition:
    """One move of a normal-form PDA.

    `read` is an input symbol or None for an epsilon move; reading moves never
    touch the stack, so read != None forces op == STAY.  `push` names the
    single pushed symbol iff op == PUSH.
    """

    src: str
    read: Optional[str]
    top: str
    dst: str
    op: str
    push: Optional[str] = None

    def __post_init__(self):
        if self.op not in (STAY, POP, PUSH):
            raise InvalidValueError(f"unknown stack action {self.op!r}")
        if self.read is not None and self.op != STAY:
            raise InvalidValueError("a reading move may not touch the stack")
        if (self.op == PUSH) != (self.push is not None):
            raise InvalidValueError("push symbol must be given exactly for push actions")


@dataclass(frozen=True)
class PdaMachine:
    """A pushdown automaton in normal form.

    The bottom symbol sits alone on the stack initially, is never pushed or
    popped, and acceptance means: accepting state, all input consumed, and the
    stack holding exactly the bottom symbol.
    """

    states: tuple[str, ...]
    input_alphabet: tuple[str, ...]
    stack_alphabet: tuple[str, ...]
    bottom: str
    start: str
    accepting: tuple[str, ...]
    transitions: tuple[PdaTransition, ...]
    turn_bound: Optional[int] = None

    def __post_init__(self):
        sset = set(self.states)
        iset, gset = set(self.input_alphabet), set(self.stack_alphabet)
        for s in self.states:
            check_token(s, "state")
        for s in list(self.input_alphabet) + list(self.stack_alphabet):
            check_token(s, "symbol")
        if self.bottom not in gset:
            raise InvalidValueError("bottom symbol not in stack alphabet")
        if self.start not in sset:
            raise InvalidValueError("start state undeclared")
        if not set(self.accepting) <= sset:
            raise InvalidValueError("accepting state undeclared")
        if self.turn_bound is not None and self.turn_bound < 0:
            raise InvalidValueError("turn bound must be nonnegative")
        for t in self.transitions:
            if t.src not in sset or t.dst not in sset:
                raise InvalidValueError(f"transition uses undeclared state: {t}")
            if t.read is not None and t.read not in iset:
                raise InvalidValueError(f"transition reads undeclared symbol: {t}")
            if t.top not in gset:
                raise InvalidValueError(f"transition on undeclared stack symbol: {t}")
            if t.op == POP and t.top == self.bottom:
                raise InvalidValueError(f"transition pops the bottom symbol: {t}")
            if t.op == PUSH and t.push == self.bottom:
                raise InvalidValueError(f"transition pushes the bottom symbol: {t}")
            if t.op == PUSH and t.push not in gset:
                raise InvalidValueError(f"transition pushes undeclared symbol: {t}")

    @cached_property
    def by_src_top(self) -> dict[tuple[str, str], tuple[PdaTransition, ...]]:
        index: dict[tuple[str, str], list[PdaTransition]] = {}
        for t in self.transitions:
            index.setdefault((t.src, t.top), []).append(t)
        return {k: tuple(v) for k, v in index.items()}

    def is_unary(self) -> bool:
        return len(self.input_alphabet) == 1


@dataclass(frozen=True)
class NfaMachine:
    """A nondeterministic finite automaton with epsilon moves."""

    states: tuple[str, ...]
    alphabet: tuple[str, ...]
    start: str
    accepting: tuple[str, ...]
    transitions: tuple[tuple[str, Optional[str], str], ...]

    def __post_init__(self):
        sset = set(self.states)
        aset = set(self.alphabet)
        for s in self.states:
            check_token(s, "state")
        if self.start not in sset:
            raise InvalidValueError("start state undeclared")
        if not set(self.accepting) <= sset:
            raise InvalidValueError("accepting state undeclared")
        for src, sym, dst in self.transitions:
            if src not in sset or dst not in sset:
                raise InvalidValueError(f"transition endpoint undeclared: {(src, sym, dst)}")
            if sym is not None and sym not in aset:
                raise InvalidValueError(f"transition on undeclared symbol: {(src, sym, dst)}")

    @cached_property
    def by_src(self) -> dict[str, tuple[tuple[Optional[str], str], ...]]:
        index: dict[str, list[tuple[Optional[str], str]]] = {}
        for src, sym, dst in self.transitions:
            index.setdefault(src, []).append((sym, dst))
        return {k: tuple(v) for k, v in index.items()}


@dataclass(frozen=True)
class SizeReport:
    """Size measures of a grammar or machine.

    `pda_size` follows the convention that the bottom symbol does not count as
    a stack symbol; `pda_size_with_bottom` exposes the other reading so either
    arithmetic can be checked.
    """

    var_count: Optional[int] = None
    symb_count: Optional[int] = None
    pda_state_count: Optional[int] = None
    pda_size: Optional[int] = None
    pda_size_with_bottom: Optional[int] = None
    nfa_size: Optional[int] = None
    turn_bound: Optional[int] = None

    def as_dict(self) -> dict[str, int]:
        out = {}
        for key in (
            "var_count",
            "symb_count",
            "pda_state_count",
            "pda_size",
            "pda_size_with_bottom",
            "nfa_size",
            "turn_bound",
        ):
            value = getattr(self, key)
            if value is not None:
                out[key] = value
        return out


def measure(subject: Union[Grammar, PdaMachine, NfaMachine]) -> SizeReport:
    """Size measures: Var/Symb for grammars, states x stack symbols for PDAs,
    state count for NFAs."""
    if isinstance(subject, Grammar):
        symb = sum(2 + len(p.body) for p in subject.productions)
        return SizeReport(var_count=len(subject.variables), symb_count=symb)
    if isinstance(subject, PdaMachine):
        non_bottom = len(subject.stack_alphabet) - 1
        return SizeReport(
            pda_state_count=len(subject.states),
            pda_size=len(subject.states) * non_bottom,
            pda_size_with_bottom=len(subject.states) * len(subject.stack_alphabet),
            turn_bound=subject.turn_bound,
        )
    if isinstance(subject, NfaMachine):
        return SizeReport(nfa_size=len(subject.states))
    raise TypeError(f"cannot measure {type(subject).__name__}")


def _dot_escape(s: str) -> str:
    return s.replace("\\", "\\\\").replace('"', '\\"')


def export_dot(subject: Union[Grammar, PdaMachine, NfaMachine]) -> str:
    """Deterministic DOT rendering; the same value always serializes to the
    same bytes."""
    lines = ["digraph G {"]
    if isinstance(subject, Grammar):
        vset = set(subject.variables)
        for v in subject.variables:
            lines.append(f'  "{_dot_escape(v)}";')
        for p in subject.productions:
            for s in p.body:
                if s in vset:
                    lines.append(f'  "{_dot_escape(p.head)}" -> "{_dot_escape(s)}";')
    elif isinstance(subject, PdaMachine):
        for q in subject.states:
            shape = "doublecircle" if q in set(subject.accepting) else "circle"
            lines.append(f'  "{_dot_escape(q)}" [shape={shape}];')
        for t in subject.transitions:
            read = t.read if t.read is not None else "eps"
            action = t.op if t.op != PUSH else f"push {t.push}"
            label = f"{read},{t.top},{action}"
            lines.append(f'  "{_dot_escape(t.src)}" -> "{_dot_escape(t.dst)}" [label="{_dot_escape(label)}"];')
    elif isinstance(subject, NfaMachine):
        for q in subject.states:
            shape = "doublecircle" if q in set(subject.accepting) else "circle"
            lines.append(f'  "{_dot_escape(q)}" [shape={shape}];')
        for src, sym, dst in subject.transitions:
            label = sym if sym is not None else "eps"
            lines.append(f'  "{_dot_escape(src)}" -> "{_dot_escape(dst)}" [label="{_dot_escape(label)}"];')
    else:
        raise TypeError(f"cannot render {type(subject).__name__}")
    lines.append("}")
    return "\n".join(lines) + "\n"


def fresh_names(taken: Iterable[str], base: str):
    """Yield token names starting from `base` that avoid the taken set."""
    used = set(taken)
    i = 0
    while True:
        name = base if i == 0 else f"{base}{i}"
        i += 1
        if name not in used:
            used.add(name)
            yield name


__all__ = [
    "STAY",
    "POP",
    "PUSH",
    "ToolError",
    "FormatError",
    "InvalidValueError",
    "EmptyLanguageError",
    "NotBoundedError",
    "BorderConflictError",
    "BudgetError",
    "InconclusiveError",
    "Production",
    "Grammar",
    "PdaTransition",
    "PdaMachine",
    "NfaMachine",
    "SizeReport",
    "measure",
    "export_dot",
    "fresh_names",
    "check_token",
    "replace",
]
