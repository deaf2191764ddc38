"""Finite interval algebras and the truth-table decision procedure.

Equality of terms in a canonical cube category is decided by evaluating both
sides on every assignment over a small finite algebra: the two-element
boolean algebra for every language below the full one, the three-element
Kleene chain for the full language.  The diamond decides de Morgan algebras.
"""

from __future__ import annotations

import enum
import itertools
import json
from dataclasses import dataclass, field
from functools import lru_cache
from pathlib import Path
from typing import Mapping, Sequence

import numpy as np

from .terms import (
    CARTESIAN,
    FULL_SIGNATURE,
    ONE,
    ZERO,
    Join,
    Language,
    Meet,
    One,
    Rev,
    Signature,
    StructuralRules,
    Term,
    TermError,
    Var,
    Zero,
    check_discipline,
    format_term,
    parse_term,
    validate_term,
)

MAX_ASSIGNMENTS = 10**7


class AlgebraError(ValueError):
    pass


class Theory(enum.Enum):
    CANONICAL = "canonical"
    DEMORGAN = "demorgan"
    BOOLEAN = "boolean"

    @classmethod
    def parse(cls, text: str) -> "Theory":
        aliases = {"kleene": "canonical", "dm": "demorgan", "ba": "boolean"}
        text = aliases.get(text.lower(), text.lower())
        try:
            return cls(text)
        except ValueError:
            raise AlgebraError(f"unknown theory {text!r}") from None


@dataclass(frozen=True)
class FiniteAlgebra:
    """Operation tables over the carrier ``range(len(elements))``."""

    name: str
    elements: tuple[str, ...]
    zero: int
    one: int
    join: tuple[tuple[int, ...], ...] | None = None
    meet: tuple[tuple[int, ...], ...] | None = None
    rev: tuple[int, ...] | None = None
    _np: dict = field(default_factory=dict, compare=False, repr=False, hash=False)

    def __post_init__(self):
        k = len(self.elements)
        if len(set(self.elements)) != k:
            raise AlgebraError("duplicate element names")
        if not (0 <= self.zero < k and 0 <= self.one < k) or self.zero == self.one:
            raise AlgebraError("zero and one must be distinct carrier elements")
        for name in ("join", "meet"):
            table = getattr(self, name)
            if table is None:
                continue
            if len(table) != k or any(len(row) != k for row in table):
                raise AlgebraError(f"{name} table is not total on the carrier")
            if any(not 0 <= v < k for row in table for v in row):
                raise AlgebraError(f"{name} table leaves the carrier")
            self._np[name] = np.array(table, dtype=np.int64)
        if self.rev is not None:
            if len(self.rev) != k or any(not 0 <= v < k for v in self.rev):
                raise AlgebraError("rev table is not total on the carrier")
            self._np["rev"] = np.array(self.rev, dtype=np.int64)

    @property
    def size(self) -> int:
        return len(self.elements)

    def element(self, name: str) -> int:
        try:
            return self.elements.index(name)
        except ValueError:
            raise AlgebraError(f"no element {name!r} in {self.name}") from None

    def supports(self, sig: Signature) -> bool:
        return (
            (not sig.has_join or self.join is not None)
            and (not sig.has_meet or self.meet is not None)
            and (not sig.has_reversal or self.rev is not None)
        )

    def table(self, op: str) -> np.ndarray:
        try:
            return self._np[op]
        except KeyError:
            raise AlgebraError(f"{self.name} has no {op} table") from None

    def to_dict(self) -> dict:
        d = {"name": self.name, "carrier": list(self.elements),
             "zero": self.elements[self.zero], "one": self.elements[self.one]}
        for op in ("join", "meet"):
            tab = getattr(self, op)
            if tab is not None:
                d[op] = [[self.elements[v] for v in row] for row in tab]
        if self.rev is not None:
            d["rev"] = [self.elements[v] for v in self.rev]
        return d

    @classmethod
    def from_dict(cls, d: Mapping) -> "FiniteAlgebra":
        try:
            carrier = tuple(str(e) for e in d["carrier"])
            idx = {e: i for i, e in enumerate(carrier)}

            def lookup(e):
                if str(e) not in idx:
                    raise AlgebraError(f"table entry {e!r} is not in the carrier")
                return idx[str(e)]

            tables = {}
            for op in ("join", "meet"):
                if op in d:
                    tables[op] = tuple(tuple(lookup(v) for v in row) for row in d[op])
            if "rev" in d:
                tables["rev"] = tuple(lookup(v) for v in d["rev"])
            return cls(d.get("name", "custom"), carrier, lookup(d["zero"]), lookup(d["one"]), **tables)
        except KeyError as exc:
            raise AlgebraError(f"algebra file is missing {exc.args[0]!r}") from None


def load_algebra(path: str | Path) -> FiniteAlgebra:
    with open(path, encoding="utf-8") as fh:
        return FiniteAlgebra.from_dict(json.load(fh))


def _chain_algebra(name, elements):
    k = len(elements)
    return FiniteAlgebra(
        name, tuple(elements), 0, k - 1,
        join=tuple(tuple(max(a, b) for b in range(k)) for a in range(k)),
        meet=tuple(tuple(min(a, b) for b in range(k)) for a in range(k)),
        rev=tuple(k - 1 - a for a in range(k)),
    )


TWO = _chain_algebra("2", ["0", "1"])
THREE = _chain_algebra("3", ["0", "u", "1"])


def _diamond():
    # 0 < u, v < 1 with u, v incomparable and fixed by reversal
    below = {0: {0}, 1: {0, 1}, 2: {0, 2}, 3: {0, 1, 2, 3}}
    elems = range(4)

    def meet(a, b):
        common = below[a] & below[b]
        return next(c for c in elems if below[c] == common)

    def join(a, b):
        ups = [c for c in elems if a in below[c] and b in below[c]]
        return min(ups, key=lambda c: len(below[c]))

    return FiniteAlgebra(
        "D", ("0", "u", "v", "1"), 0, 3,
        join=tuple(tuple(join(a, b) for b in elems) for a in elems),
        meet=tuple(tuple(meet(a, b) for b in elems) for a in elems),
        rev=(3, 1, 2, 0),
    )


DIAMOND = _diamond()


def decision_algebra(lang: Language, theory: Theory = Theory.CANONICAL) -> FiniteAlgebra:
    if theory is not Theory.CANONICAL and not lang.is_full:
        raise AlgebraError(f"{theory.value} theory needs the full language, not {lang}")
    if theory is Theory.DEMORGAN:
        return DIAMOND
    if theory is Theory.BOOLEAN:
        return TWO
    return THREE if needs_three(lang) else TWO


def needs_three(lang: Language) -> bool:
    """Whether the canonical theory of ``lang`` differs from the two-element one.

    Without reversal a cut of [0,1] separates any two points, and without
    contraction every term is monotone or antitone in each variable, so the
    two-element set suffices.  Contraction with reversal and a connection
    lets ``x ∧ x′`` be written, which is 0 over {0,1} but not over [0,1];
    that happens in the full language and also without weakening.
    """
    sig = lang.signature
    return lang.rules.contraction and sig.has_reversal and sig.has_connection


# --- evaluation --------------------------------------------------------------


def eval_term(t: Term, alg: FiniteAlgebra, env: Mapping[int, int] | Sequence[int] = ()) -> int:
    """Value of ``t`` under ``env`` (1-based positions to carrier ids)."""
    if isinstance(t, Var):
        try:
            return env[t.index] if isinstance(env, Mapping) else env[t.index - 1]
        except (KeyError, IndexError):
            raise AlgebraError(f"assignment does not cover x{t.index}") from None
    if isinstance(t, Zero):
        return alg.zero
    if isinstance(t, One):
        return alg.one
    if isinstance(t, Rev):
        return int(alg.table("rev")[eval_term(t.arg, alg, env)])
    op = "join" if isinstance(t, Join) else "meet"
    return int(alg.table(op)[eval_term(t.left, alg, env), eval_term(t.right, alg, env)])


def _check_budget(size: int, arity: int) -> None:
    if size ** arity > MAX_ASSIGNMENTS:
        raise AlgebraError(f"{size}^{arity} assignments exceed the cap of {MAX_ASSIGNMENTS}")


@lru_cache(maxsize=None)
def _coordinates(size: int, arity: int) -> tuple[np.ndarray, ...]:
    # row-major enumeration, x1 most significant: matches itertools.product
    _check_budget(size, arity)
    if arity == 0:
        return ()
    grid = np.indices((size,) * arity).reshape(arity, -1)
    for row in grid:
        row.setflags(write=False)
    return tuple(grid)


def function_table(t: Term, alg: FiniteAlgebra, arity: int) -> np.ndarray:
    """Vector of values of ``t`` over all ``alg.size ** arity`` assignments."""
    coords = _coordinates(alg.size, arity)
    n = alg.size ** arity

    def go(u):
        if isinstance(u, Var):
            if not 1 <= u.index <= arity:
                raise TermError(f"variable x{u.index} out of range for arity {arity}")
            return coords[u.index - 1]
        if isinstance(u, Zero):
            return np.full(n, alg.zero, dtype=np.int64)
        if isinstance(u, One):
            return np.full(n, alg.one, dtype=np.int64)
        if isinstance(u, Rev):
            return alg.table("rev")[go(u.arg)]
        op = "join" if isinstance(u, Join) else "meet"
        return alg.table(op)[go(u.left), go(u.right)]

    return go(t)


def table_key(t: Term, alg: FiniteAlgebra, arity: int) -> tuple[int, ...]:
    return tuple(function_table(t, alg, arity).tolist())


def assignments(alg: FiniteAlgebra, arity: int):
    _check_budget(alg.size, arity)
    return itertools.product(range(alg.size), repeat=arity)


def counterexample(s: Term, t: Term, arity: int, alg: FiniteAlgebra) -> tuple[int, ...] | None:
    """First assignment on which ``s`` and ``t`` differ, or None."""
    a, b = function_table(s, alg, arity), function_table(t, alg, arity)
    diff = np.flatnonzero(a != b)
    if diff.size == 0:
        return None
    return tuple(int(c[diff[0]]) for c in _coordinates(alg.size, arity))


def format_assignment(env: Sequence[int], alg: FiniteAlgebra) -> str:
    if not env:
        return "(empty assignment)"
    return ", ".join(f"x{i}↦{alg.elements[v]}" for i, v in enumerate(env, 1))


def _check_in_language(terms, arity, lang):
    for t in terms:
        validate_term(t, arity, lang.signature)


def terms_equal(s: Term, t: Term, arity: int, lang: Language, theory: Theory = Theory.CANONICAL) -> bool:
    _check_in_language((s, t), arity, lang)
    return counterexample(s, t, arity, decision_algebra(lang, theory)) is None


# --- free algebras -------------------------------------------------------------


@dataclass(frozen=True)
class FreeAlgebra:
    """Function tables generated by the projections, each with a witness term."""

    algebra: FiniteAlgebra
    signature: Signature
    generators: int
    elements: dict[tuple[int, ...], Term]

    def __len__(self):
        return len(self.elements)

    def __contains__(self, key):
        return key in self.elements

    def sorted_items(self):
        return sorted(self.elements.items())


def closure(
    seeds: Mapping[tuple[int, ...], Term],
    alg: FiniteAlgebra,
    sig: Signature,
    limit: int = 200_000,
) -> dict[tuple[int, ...], Term]:
    """Close a set of function tables under the operations of ``sig``.

    Runs to a fixed point in rounds, so witnesses are of minimal depth
    relative to the seeds.
    """
    found: dict[tuple[int, ...], Term] = dict(seeds)
    arrays = {k: np.array(k, dtype=np.int64) for k in found}
    frontier = list(found)
    ops = []
    if sig.has_join:
        ops.append((Join, alg.table("join")))
    if sig.has_meet:
        ops.append((Meet, alg.table("meet")))
    while frontier:
        new: list[tuple[int, ...]] = []

        def add(arr, term):
            key = tuple(arr.tolist())
            if key not in found:
                found[key] = term
                arrays[key] = arr
                new.append(key)
                if len(found) > limit:
                    raise AlgebraError(f"closure exceeds {limit} elements")

        if sig.has_reversal:
            rev = alg.table("rev")
            for k in frontier:
                add(rev[arrays[k]], Rev(found[k]))
        fresh = set(frontier)
        current = list(arrays)
        for ctor, tab in ops:
            for a in current:
                for b in current:
                    if a in fresh or b in fresh:
                        add(tab[arrays[a], arrays[b]], ctor(found[a], found[b]))
        frontier = new
    return found


def free_algebra(lang: Language, theory: Theory, m: int, limit: int = 200_000) -> FreeAlgebra:
    """Sub-algebra of ``carrier^m -> carrier`` generated by the projections and constants."""
    if not lang.is_cartesian:
        raise AlgebraError(f"free algebra enumeration needs a cartesian language, not {lang}")
    alg = decision_algebra(lang, theory)
    seeds: dict[tuple[int, ...], Term] = {}
    for term in [ZERO, ONE] + [Var(i) for i in range(1, m + 1)]:
        seeds.setdefault(table_key(term, alg, m), term)
    return FreeAlgebra(alg, lang.signature, m, closure(seeds, alg, lang.signature, limit))


# --- axiom soundness -----------------------------------------------------------


@dataclass(frozen=True)
class Axiom:
    name: str
    rules: str
    signature: str
    arity: int
    equations: tuple[tuple[str, str], ...]

    def applies_to(self, lang: Language) -> bool:
        return (
            StructuralRules.parse(self.rules) <= lang.rules
            and Signature.parse(self.signature) <= lang.signature
        )


# x, y, z are x1, x2, x3; "≤" laws are stated in their equational form
CUBICAL_AXIOMS = (
    Axiom("∨-associativity", "", "j", 3, (("x1 ∨ (x2 ∨ x3)", "(x1 ∨ x2) ∨ x3"),)),
    Axiom("∨-unit", "", "j", 1, (("0 ∨ x1", "x1"), ("x1", "x1 ∨ 0"))),
    Axiom("∨-absorption", "w", "j", 1, (("1 ∨ x1", "1"), ("1", "x1 ∨ 1"))),
    Axiom("∨-symmetry", "e", "j", 2, (("x1 ∨ x2", "x2 ∨ x1"),)),
    Axiom("∨-idempotence", "ec", "j", 1, (("x1 ∨ x1", "x1"),)),
    Axiom("∧-associativity", "", "m", 3, (("x1 ∧ (x2 ∧ x3)", "(x1 ∧ x2) ∧ x3"),)),
    Axiom("∧-unit", "", "m", 1, (("1 ∧ x1", "x1"), ("x1", "x1 ∧ 1"))),
    Axiom("∧-absorption", "w", "m", 1, (("0 ∧ x1", "0"), ("0", "x1 ∧ 0"))),
    Axiom("∧-symmetry", "e", "m", 2, (("x1 ∧ x2", "x2 ∧ x1"),)),
    Axiom("∧-idempotence", "ec", "m", 1, (("x1 ∧ x1", "x1"),)),
    Axiom("′-involution", "", "r", 1, (("x1′′", "x1"),)),
    Axiom("′-computation", "", "r", 0, (("0′", "1"),)),
    Axiom("distributive law 1", "ec", "jm", 3, (("x1 ∧ (x2 ∨ x3)", "(x1 ∧ x2) ∨ (x1 ∧ x3)"),)),
    Axiom("distributive law 2", "ec", "jm", 3, (("x1 ∨ (x2 ∧ x3)", "(x1 ∨ x2) ∧ (x1 ∨ x3)"),)),
    Axiom("lattice-absorption", "wec", "jm", 2, (("x1", "x1 ∨ (x1 ∧ x2)"), ("x1", "x1 ∧ (x1 ∨ x2)"))),
    Axiom("de Morgan's law", "", "jmr", 2, (("(x1 ∨ x2)′", "x1′ ∧ x2′"),)),
    Axiom("Kleene's law", "wec", "jmr", 2, (("(x1 ∧ x1′) ∧ (x2 ∨ x2′)", "x1 ∧ x1′"),)),
)

HOPF_LAWS = (
    Axiom("Hopf law ∨", "wec", "jmr", 1, (("x1 ∨ x1′", "1"),)),
    Axiom("Hopf law ∧", "wec", "jmr", 1, (("x1 ∧ x1′", "0"),)),
)


@dataclass(frozen=True)
class AxiomCheck:
    name: str
    lhs: str
    rhs: str
    holds: bool
    witness: str | None = None


@dataclass(frozen=True)
class AxiomReport:
    language: Language
    theory: Theory
    algebra: str
    checks: tuple[AxiomCheck, ...]

    @property
    def failures(self) -> tuple[AxiomCheck, ...]:
        return tuple(c for c in self.checks if not c.holds)

    @property
    def ok(self) -> bool:
        return not self.failures


def check_axiom(axiom: Axiom, lang: Language, theory: Theory) -> list[AxiomCheck]:
    alg = decision_algebra(lang, theory)
    out = []
    for lhs_text, rhs_text in axiom.equations:
        lhs = parse_term(lhs_text, axiom.arity, lang.signature)
        rhs = parse_term(rhs_text, axiom.arity, lang.signature)
        for side in (lhs, rhs):
            if not check_discipline([side], axiom.arity, lang.rules):
                raise TermError(f"{axiom.name}: {format_term(side)} is not a term of {lang}")
        cex = counterexample(lhs, rhs, axiom.arity, alg)
        witness = None if cex is None else format_assignment(cex, alg)
        out.append(AxiomCheck(axiom.name, format_term(lhs), format_term(rhs), cex is None, witness))
    return out


def axiom_soundness(lang: Language, theory: Theory = Theory.CANONICAL, extra=()) -> AxiomReport:
    """Check every cubical axiom whose language requirement ``lang`` meets."""
    checks: list[AxiomCheck] = []
    for axiom in tuple(CUBICAL_AXIOMS) + tuple(extra):
        if axiom.applies_to(lang):
            checks.extend(check_axiom(axiom, lang, theory))
    return AxiomReport(lang, theory, decision_algebra(lang, theory).name, tuple(checks))


FULL_LANGUAGE = Language(CARTESIAN, FULL_SIGNATURE)
