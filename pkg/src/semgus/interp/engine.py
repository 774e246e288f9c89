"""Top-down execution of deterministic CHC semantics.

Each rule is compiled once into a schedule: guards run as soon as their
variables are known, ``var = expr`` conjuncts bind variables, and premises run
once their inputs are available.  Executing a term tries every rule of its
production; exactly one must succeed.
"""

from __future__ import annotations

import sys
from dataclasses import dataclass
from typing import Any, Callable, Mapping, Sequence

from ..core.formula import App, Formula, Var, conjuncts, eq
from ..core.grammar import Term
from ..core.rules import RelationSig, SemanticRule
from .compile import compile_formula

DEFAULT_FUEL = 100_000
RECURSION_LIMIT = 12_000


class InterpreterError(Exception):
    pass


class NondeterministicRules(InterpreterError):
    def __init__(self, pid: int):
        super().__init__(f"more than one rule of production {pid} applies")
        self.pid = pid


class StuckNoRule(InterpreterError):
    def __init__(self, pid: int):
        super().__init__(f"no rule of production {pid} applies")
        self.pid = pid


class NotExecutable(InterpreterError):
    """A rule whose variables cannot be computed from its inputs."""


class OutOfFuel(Exception):
    pass


class _Outcome:
    def __init__(self, name: str):
        self.name = name

    def __repr__(self) -> str:
        return self.name

    def __reduce__(self):
        return self.name


DIVERGED = _Outcome("DIVERGED")
UNDEFINED = _Outcome("UNDEFINED")


class Fuel:
    __slots__ = ("left",)

    def __init__(self, amount: int):
        self.left = amount

    def tick(self) -> None:
        self.left -= 1
        if self.left < 0:
            raise OutOfFuel()


@dataclass
class _Step:
    kind: str  # guard | bind | call
    fn: Callable | None = None
    name: str = ""
    term: str = ""
    inputs: tuple = ()
    outputs: tuple = ()  # (is_bind, name_or_fn)


class _Plan:
    def __init__(self, rule: SemanticRule):
        self.rule = rule
        self.head_inputs: list[tuple[bool, Any]] = []
        term_vars = {rule.head.term, *rule.children}
        known = set(term_vars)
        guards: list[Formula] = [c for c in conjuncts(rule.constraint)]
        for i, f in enumerate(rule.head.inputs):
            if isinstance(f, Var) and f.name not in known:
                self.head_inputs.append((True, f.name))
                known.add(f.name)
            else:
                tmp = f"__in{i}"
                self.head_inputs.append((True, tmp))
                known.add(tmp)
                guards.append(eq(f, Var(tmp, f.sort)))
        pending_c = list(guards)
        pending_b = list(rule.body)
        self.steps: list[_Step] = []
        while pending_c or pending_b:
            progressed = False
            for c in list(pending_c):
                if c.free_vars() <= known:
                    self.steps.append(_Step("guard", compile_formula(c)))
                    pending_c.remove(c)
                    progressed = True
            if progressed:
                continue
            for c in list(pending_c):
                bound = _binding(c, known)
                if bound is not None:
                    name, expr = bound
                    self.steps.append(_Step("bind", compile_formula(expr), name))
                    known.add(name)
                    pending_c.remove(c)
                    progressed = True
                    break
            if progressed:
                continue
            for atom in pending_b:
                needed = set().union(*(f.free_vars() for f in atom.inputs)) if atom.inputs else set()
                if needed <= known:
                    outs = []
                    for o in atom.outputs:
                        if isinstance(o, Var) and o.name not in known:
                            outs.append((True, o.name))
                            known.add(o.name)
                        else:
                            outs.append((False, None))
                    checks = [(o, ok) for o, ok in zip(atom.outputs, outs)]
                    final = []
                    for o, (is_bind, name) in checks:
                        if is_bind:
                            final.append((True, name))
                        else:
                            if not o.free_vars() <= known:
                                raise NotExecutable(f"rule {rule.name} of {rule.production}: output {o} unbound")
                            final.append((False, compile_formula(o)))
                    self.steps.append(_Step("call", term=atom.term,
                                            inputs=tuple(compile_formula(f) for f in atom.inputs),
                                            outputs=tuple(final)))
                    pending_b.remove(atom)
                    progressed = True
                    break
            if not progressed:
                raise NotExecutable(f"rule {rule.name!r} of production {rule.production} cannot be scheduled")
        for f in rule.head.outputs:
            if not f.free_vars() <= known:
                raise NotExecutable(f"rule {rule.name!r} of production {rule.production}: head output {f} unbound")
        self.head_outputs = tuple(compile_formula(f) for f in rule.head.outputs)
        self.children = rule.children

    def run(self, interp: "Interpreter", term: Term, inputs: Sequence[Any], fuel: Fuel):
        env: dict[str, Any] = {self.rule.head.term: term}
        for name, child in zip(self.children, term.children):
            env[name] = child
        for (_, name), v in zip(self.head_inputs, inputs):
            env[name] = v
        for step in self.steps:
            kind = step.kind
            if kind == "guard":
                if not step.fn(env):
                    return None
            elif kind == "bind":
                env[step.name] = step.fn(env)
            else:
                outs = interp.apply(env[step.term], tuple(f(env) for f in step.inputs), fuel)
                for (is_bind, x), v in zip(step.outputs, outs):
                    if is_bind:
                        env[x] = v
                    elif x(env) != v:
                        return None
        return tuple(f(env) for f in self.head_outputs)


def _binding(c: Formula, known: set[str]):
    if isinstance(c, App) and c.op == "=" and len(c.args) == 2:
        a, b = c.args
        if isinstance(a, Var) and a.name not in known and b.free_vars() <= known:
            return a.name, b
        if isinstance(b, Var) and b.name not in known and a.free_vars() <= known:
            return b.name, a
    return None


class Interpreter:
    """Executes ``sem_N`` on concrete terms for a deterministic rule set."""

    def __init__(self, semantics: Mapping[int, Sequence[SemanticRule]], signatures: Mapping[str, RelationSig] | None = None,
                 check_determinism: bool = True):
        self.plans = {pid: [_Plan(r) for r in rules] for pid, rules in semantics.items()}
        self.signatures = signatures
        self.check_determinism = check_determinism

    def apply(self, term: Term, inputs: tuple, fuel: Fuel) -> tuple:
        plans = self.plans.get(term.prod)
        if not plans:
            raise StuckNoRule(term.prod)
        found = None
        for plan in plans:
            fuel.tick()
            out = plan.run(self, term, inputs, fuel)
            if out is not None:
                if found is not None:
                    raise NondeterministicRules(term.prod)
                found = out
                if not self.check_determinism:
                    break
        if found is None:
            raise StuckNoRule(term.prod)
        return found

    def run(self, term: Term, inputs: Sequence[Any], fuel: int = DEFAULT_FUEL):
        """Outputs of the term's relation, or DIVERGED when fuel or stack runs out."""
        old = sys.getrecursionlimit()
        if old < RECURSION_LIMIT:
            sys.setrecursionlimit(RECURSION_LIMIT)
        try:
            return self.apply(term, tuple(inputs), Fuel(fuel))
        except (OutOfFuel, RecursionError):
            return DIVERGED
