"""Monoidal interval languages, term syntax and occurrence disciplines.

A language pairs a set of structural rules (weakening ``w``, exchange ``e``,
contraction ``c``) with a signature drawn from the connections ``∨``, ``∧``
and the reversal ``′``.  The constants 0 and 1 are always present.

Variables are positional: ``Var(3)`` is the third variable of the context and
prints as ``x3``.
"""

from __future__ import annotations

import random
import re
from dataclasses import dataclass
from typing import Iterable, Sequence, Union

JOIN, MEET, REV = "∨", "∧", "′"


class TermError(ValueError):
    """Raised for malformed terms, unparsable text or unlicensed symbols."""


@dataclass(frozen=True)
class StructuralRules:
    weakening: bool = False
    exchange: bool = False
    contraction: bool = False

    def __post_init__(self):
        if self.contraction and not self.exchange:
            raise TermError("contraction requires exchange")

    @classmethod
    def parse(cls, text: str) -> "StructuralRules":
        text = text.strip()
        if text in ("", "∅", "0", "none", "-"):
            return cls()
        bad = set(text) - set("wec")
        if bad or len(set(text)) != len(text):
            raise TermError(f"bad structural rules {text!r}")
        return cls("w" in text, "e" in text, "c" in text)

    @property
    def code(self) -> str:
        s = "w" * self.weakening + "e" * self.exchange + "c" * self.contraction
        return s or "∅"

    def __le__(self, other):
        return all(a <= b for a, b in zip(self._flags(), other._flags()))

    def _flags(self):
        return (self.weakening, self.exchange, self.contraction)

    def __str__(self):
        return self.code


@dataclass(frozen=True)
class Signature:
    has_join: bool = False
    has_meet: bool = False
    has_reversal: bool = False

    def __post_init__(self):
        if self.has_reversal and self.has_join != self.has_meet:
            raise TermError("reversal combines only with both connections or none")

    @classmethod
    def parse(cls, text: str) -> "Signature":
        """Accepts ``jmr`` letters or the symbols themselves; ``∅`` is empty."""
        text = text.strip()
        if text in ("", "∅", "0", "none", "-"):
            return cls()
        aliases = {"j": "j", "∨": "j", "m": "m", "∧": "m", "r": "r", "′": "r", "'": "r"}
        letters = []
        for ch in text:
            if ch not in aliases:
                raise TermError(f"bad signature {text!r}")
            letters.append(aliases[ch])
        if len(set(letters)) != len(letters):
            raise TermError(f"bad signature {text!r}")
        return cls("j" in letters, "m" in letters, "r" in letters)

    @property
    def code(self) -> str:
        s = "j" * self.has_join + "m" * self.has_meet + "r" * self.has_reversal
        return s or "∅"

    @property
    def symbols(self) -> str:
        s = JOIN * self.has_join + MEET * self.has_meet + REV * self.has_reversal
        return s or "∅"

    @property
    def has_connection(self) -> bool:
        return self.has_join or self.has_meet

    def __le__(self, other):
        return all(a <= b for a, b in zip(self._flags(), other._flags()))

    def _flags(self):
        return (self.has_join, self.has_meet, self.has_reversal)

    def __str__(self):
        return self.symbols


ALL_RULES = tuple(
    StructuralRules.parse(code) for code in ("", "e", "ec", "w", "we", "wec")
)
ALL_SIGNATURES = tuple(Signature.parse(code) for code in ("", "r", "j", "m", "jm", "jmr"))
CARTESIAN = StructuralRules(True, True, True)
FULL_SIGNATURE = Signature(True, True, True)


@dataclass(frozen=True)
class Language:
    rules: StructuralRules
    signature: Signature

    @classmethod
    def parse(cls, rules: str, signature: str) -> "Language":
        return cls(StructuralRules.parse(rules), Signature.parse(signature))

    @property
    def is_full(self) -> bool:
        return self.rules == CARTESIAN and self.signature == FULL_SIGNATURE

    @property
    def is_cartesian(self) -> bool:
        return self.rules == CARTESIAN

    def __str__(self):
        return f"L({self.rules.code},{self.signature.symbols})"


ALL_LANGUAGES = tuple(Language(r, s) for r in ALL_RULES for s in ALL_SIGNATURES)


# --- term syntax -----------------------------------------------------------


@dataclass(frozen=True)
class Var:
    index: int


@dataclass(frozen=True)
class Zero:
    pass


@dataclass(frozen=True)
class One:
    pass


@dataclass(frozen=True)
class Join:
    left: "Term"
    right: "Term"


@dataclass(frozen=True)
class Meet:
    left: "Term"
    right: "Term"


@dataclass(frozen=True)
class Rev:
    arg: "Term"


Term = Union[Var, Zero, One, Join, Meet, Rev]
ZERO, ONE = Zero(), One()


def variable_listing(terms: Iterable[Term]) -> tuple[int, ...]:
    """Left-to-right variable occurrences of the terms, concatenated."""
    out: list[int] = []

    def walk(t):
        if isinstance(t, Var):
            out.append(t.index)
        elif isinstance(t, (Join, Meet)):
            walk(t.left)
            walk(t.right)
        elif isinstance(t, Rev):
            walk(t.arg)

    for t in terms:
        walk(t)
    return tuple(out)


def listing_ok(listing: Sequence[int], arity: int, rules: StructuralRules) -> bool:
    if not rules.weakening and set(listing) != set(range(1, arity + 1)):
        return False
    if not rules.exchange:
        return all(a < b for a, b in zip(listing, listing[1:]))
    if not rules.contraction:
        return len(set(listing)) == len(listing)
    return True


def check_discipline(terms: Sequence[Term], arity: int, rules: StructuralRules) -> bool:
    """Whether the joint listing of ``terms`` obeys the occurrence discipline.

    Without weakening every variable ``1..arity`` must occur; without exchange
    occurrences must be strictly increasing; without contraction no variable
    may repeat.
    """
    return listing_ok(variable_listing(terms), arity, rules)


def signature_of(t: Term) -> Signature:
    """Smallest flag set covering the symbols used by ``t`` (may be unlicensed)."""
    j = m = r = False
    stack = [t]
    while stack:
        u = stack.pop()
        if isinstance(u, Join):
            j = True
            stack += [u.left, u.right]
        elif isinstance(u, Meet):
            m = True
            stack += [u.left, u.right]
        elif isinstance(u, Rev):
            r = True
            stack.append(u.arg)
    return _raw_signature(j, m, r)


def _raw_signature(j, m, r):
    sig = object.__new__(Signature)
    object.__setattr__(sig, "has_join", j)
    object.__setattr__(sig, "has_meet", m)
    object.__setattr__(sig, "has_reversal", r)
    return sig


def validate_term(t: Term, arity: int, sig: Signature | None = None) -> None:
    """Raise :class:`TermError` if ``t`` is out of range or uses unlicensed symbols."""
    for i in variable_listing([t]):
        if not 1 <= i <= arity:
            raise TermError(f"variable x{i} out of range for arity {arity}")
    if sig is not None and not signature_of(t) <= sig:
        raise TermError(f"term {format_term(t)} uses symbols outside {sig.symbols}")


def is_well_formed(t: Term, arity: int, sig: Signature) -> bool:
    try:
        validate_term(t, arity, sig)
    except TermError:
        return False
    return True


def substitute(t: Term, replacements: Sequence[Term]) -> Term:
    """Replace ``Var(j)`` with ``replacements[j-1]``."""
    if isinstance(t, Var):
        return replacements[t.index - 1]
    if isinstance(t, Join):
        return Join(substitute(t.left, replacements), substitute(t.right, replacements))
    if isinstance(t, Meet):
        return Meet(substitute(t.left, replacements), substitute(t.right, replacements))
    if isinstance(t, Rev):
        return Rev(substitute(t.arg, replacements))
    return t


def rename(t: Term, mapping: Sequence[int]) -> Term:
    """Send ``Var(j)`` to ``Var(mapping[j-1])``."""
    return substitute(t, [Var(k) for k in mapping])


def shift(t: Term, offset: int) -> Term:
    if offset == 0:
        return t
    return rename(t, range(1 + offset, 1 + offset + max(variable_listing([t]), default=0)))


def depth(t: Term) -> int:
    if isinstance(t, (Join, Meet)):
        return 1 + max(depth(t.left), depth(t.right))
    if isinstance(t, Rev):
        return 1 + depth(t.arg)
    return 0


# --- printing ----------------------------------------------------------------


def format_term(t: Term) -> str:
    """Canonical text; parenthesised except for left-associated chains."""
    if isinstance(t, Var):
        return f"x{t.index}"
    if isinstance(t, Zero):
        return "0"
    if isinstance(t, One):
        return "1"
    if isinstance(t, Rev):
        inner = format_term(t.arg)
        if isinstance(t.arg, (Join, Meet)):
            inner = f"({inner})"
        return inner + REV
    op = JOIN if isinstance(t, Join) else MEET
    left = format_term(t.left)
    if isinstance(t.left, (Join, Meet)) and type(t.left) is not type(t):
        left = f"({left})"
    right = format_term(t.right)
    if isinstance(t.right, (Join, Meet)):
        right = f"({right})"
    return f"{left} {op} {right}"


# --- parsing -----------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(x\d+)|([01])|(\\/|∨)|(/\\|∧)|('|′)|(\()|(\)))")


def _tokenize(text: str) -> list[tuple[str, str]]:
    tokens = []
    pos = 0
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise TermError(f"unexpected character {text[pos:].strip()[:1]!r} at {pos}")
        kinds = ("var", "const", "join", "meet", "rev", "lpar", "rpar")
        kind = next(k for k, g in zip(kinds, m.groups()) if g is not None)
        tokens.append((kind, m.group(m.lastindex)))
        pos = m.end()
    return tokens


class _Parser:
    def __init__(self, tokens, arity, sig):
        self.tokens = tokens
        self.i = 0
        self.arity = arity
        self.sig = sig

    def peek(self):
        return self.tokens[self.i][0] if self.i < len(self.tokens) else None

    def take(self, kind):
        if self.peek() != kind:
            got = self.tokens[self.i][1] if self.i < len(self.tokens) else "end of input"
            raise TermError(f"expected {kind}, got {got!r}")
        tok = self.tokens[self.i]
        self.i += 1
        return tok[1]

    def join(self):
        t = self.meet()
        while self.peek() == "join":
            self.take("join")
            if not self.sig.has_join:
                raise TermError("∨ is not in the signature")
            t = Join(t, self.meet())
        return t

    def meet(self):
        t = self.postfix()
        while self.peek() == "meet":
            self.take("meet")
            if not self.sig.has_meet:
                raise TermError("∧ is not in the signature")
            t = Meet(t, self.postfix())
        return t

    def postfix(self):
        t = self.atom()
        while self.peek() == "rev":
            self.take("rev")
            if not self.sig.has_reversal:
                raise TermError("′ is not in the signature")
            t = Rev(t)
        return t

    def atom(self):
        kind = self.peek()
        if kind == "var":
            idx = int(self.take("var")[1:])
            if not 1 <= idx <= self.arity:
                raise TermError(f"variable x{idx} out of range for arity {self.arity}")
            return Var(idx)
        if kind == "const":
            return ZERO if self.take("const") == "0" else ONE
        if kind == "lpar":
            self.take("lpar")
            t = self.join()
            self.take("rpar")
            return t
        got = self.tokens[self.i][1] if self.i < len(self.tokens) else "end of input"
        raise TermError(f"unexpected {got!r}")


def parse_term(text: str, arity: int, sig: Signature = FULL_SIGNATURE) -> Term:
    """Parse infix term text over ``x1..x{arity}``.

    ``∧`` binds tighter than ``∨``, both associate to the left, ``′`` is
    postfix.  ASCII ``\\/``, ``/\\`` and ``'`` are accepted.

    >>> format_term(parse_term("x1 \\\\/ (x2 /\\\\ x3')", 3))
    'x1 ∨ (x2 ∧ x3′)'
    """
    parser = _Parser(_tokenize(text), arity, sig)
    t = parser.join()
    if parser.i != len(parser.tokens):
        raise TermError(f"trailing input {parser.tokens[parser.i][1]!r}")
    return t


# --- random generation ---------------------------------------------------------


def random_listing(rng: random.Random, arity: int, length: int, rules: StructuralRules):
    """A variable sequence of the given length obeying ``rules``, or None."""
    n = arity
    if not rules.contraction and length > n:
        return None
    if not rules.weakening and length < n:
        return None
    if length == 0:
        return ()
    if n == 0:
        return None
    if not rules.exchange:
        return tuple(sorted(rng.sample(range(1, n + 1), length)))
    if not rules.contraction:
        return tuple(rng.sample(range(1, n + 1), length))
    seq = [rng.randint(1, n) for _ in range(length)]
    if not rules.weakening:
        # force coverage of every variable
        slots = rng.sample(range(length), n)
        for v, s in zip(range(1, n + 1), slots):
            seq[s] = v
    return tuple(seq)


def random_term(rng: random.Random, lang: Language, arity: int, max_depth: int) -> Term:
    """A random term valid in ``lang`` over the context of size ``arity``."""
    sig = lang.signature
    binary = [c for c, ok in ((Join, sig.has_join), (Meet, sig.has_meet)) if ok]
    for _ in range(1000):
        shape = _random_shape(rng, binary, sig.has_reversal, max_depth)
        holes = _count_holes(shape)
        lengths = list(range(holes + 1))
        rng.shuffle(lengths)
        for k in lengths:
            listing = random_listing(rng, arity, k, lang.rules)
            if listing is None:
                continue
            positions = sorted(rng.sample(range(holes), k))
            fill: list[Term] = []
            it = iter(listing)
            for h in range(holes):
                fill.append(Var(next(it)) if h in positions else rng.choice((ZERO, ONE)))
            return _fill(shape, iter(fill))
    raise TermError(f"could not generate a term for {lang} at arity {arity}")


_HOLE = Var(0)


def _random_shape(rng, binary, has_rev, d):
    choices = ["leaf"]
    if d > 0:
        choices += ["bin"] * (2 if binary else 0) + ["rev"] * has_rev
    kind = rng.choice(choices)
    if kind == "bin":
        op = rng.choice(binary)
        return op(_random_shape(rng, binary, has_rev, d - 1), _random_shape(rng, binary, has_rev, d - 1))
    if kind == "rev":
        return Rev(_random_shape(rng, binary, has_rev, d - 1))
    return _HOLE


def _count_holes(shape):
    return len(variable_listing([shape]))


def _fill(shape, it):
    if isinstance(shape, Var):
        return next(it)
    if isinstance(shape, Join):
        left = _fill(shape.left, it)
        return Join(left, _fill(shape.right, it))
    if isinstance(shape, Meet):
        left = _fill(shape.left, it)
        return Meet(left, _fill(shape.right, it))
    return Rev(_fill(shape.arg, it))
