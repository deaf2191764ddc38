"""Cube categories: morphisms as term tuples, identified by their function tables.

A morphism ``[m] -> [n]`` is an ``n``-tuple of terms over the context
``x1..xm`` whose joint variable listing obeys the language's discipline.  Two
morphisms are equal iff their tuples of function tables over the decision
algebra agree; that tuple is the morphism's *semantic key*.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np

from .algebras import (
    AlgebraError,
    FiniteAlgebra,
    Theory,
    closure,
    decision_algebra,
    free_algebra,
    table_key,
    _coordinates,
)
from .terms import (
    ONE,
    ZERO,
    Join,
    Language,
    Meet,
    Rev,
    Signature,
    StructuralRules,
    Term,
    TermError,
    Var,
    check_discipline,
    format_term,
    is_well_formed,
    parse_term,
    rename,
    shift,
    substitute,
)

Key = tuple[tuple[int, ...], ...]


class HomBoundError(ValueError):
    """Raised when a hom-set request exceeds the configured bounds."""


class FactorizationError(ValueError):
    pass


@dataclass(frozen=True)
class CubeCategory:
    language: Language
    theory: Theory = Theory.CANONICAL
    max_arity: int = 4
    max_hom_size: int = 500_000

    def __post_init__(self):
        decision_algebra(self.language, self.theory)

    @classmethod
    def parse(cls, rules: str, signature: str, theory: str = "canonical", **kw) -> "CubeCategory":
        return cls(Language.parse(rules, signature), Theory.parse(theory), **kw)

    @property
    def rules(self) -> StructuralRules:
        return self.language.rules

    @property
    def signature(self) -> Signature:
        return self.language.signature

    @property
    def algebra(self) -> FiniteAlgebra:
        return decision_algebra(self.language, self.theory)

    @property
    def name(self) -> str:
        if self.theory is Theory.DEMORGAN:
            return "C_dM"
        if self.theory is Theory.BOOLEAN:
            return "C_BA"
        return f"C({self.rules.code},{self.signature.symbols})"

    def __str__(self):
        return self.name


@dataclass(frozen=True)
class Morphism:
    source: int
    target: int
    components: tuple[Term, ...]

    def __post_init__(self):
        if len(self.components) != self.target:
            raise TermError(f"{self.target} components expected, got {len(self.components)}")

    def __str__(self):
        comps = ", ".join(format_term(c) for c in self.components)
        return f"({comps}): [{self.source}]→[{self.target}]"

    def to_dict(self) -> dict:
        return {"source": self.source, "target": self.target,
                "components": [format_term(c) for c in self.components]}

    @classmethod
    def from_dict(cls, d, cat: CubeCategory | None = None) -> "Morphism":
        return morphism(d["source"], d["components"], cat)


def morphism(source: int, components: Sequence[Term | str], cat: CubeCategory | None = None) -> Morphism:
    """Build a morphism from terms or term text; validated when ``cat`` is given."""
    sig = cat.signature if cat is not None else Signature(True, True, True)
    terms = tuple(parse_term(c, source, sig) if isinstance(c, str) else c for c in components)
    f = Morphism(source, len(terms), terms)
    if cat is not None and not is_morphism(source, f.target, terms, cat):
        raise TermError(f"{f} is not a morphism of {cat}")
    return f


def is_morphism(m: int, n: int, components: Sequence[Term], cat: CubeCategory) -> bool:
    if len(components) != n:
        return False
    if not all(is_well_formed(c, m, cat.signature) for c in components):
        return False
    return check_discipline(components, m, cat.rules)


def identity(n: int) -> Morphism:
    return Morphism(n, n, tuple(Var(i) for i in range(1, n + 1)))


def tensor(f: Morphism, g: Morphism) -> Morphism:
    """Monoidal product: juxtapose contexts and component tuples."""
    shifted = tuple(shift(c, f.source) for c in g.components)
    return Morphism(f.source + g.source, f.target + g.target, f.components + shifted)


def compose(f: Morphism, g: Morphism, cat: CubeCategory | None = None) -> Morphism:
    """``f`` then ``g``: substitute the components of ``f`` into ``g``."""
    if f.target != g.source:
        raise TermError(f"cannot compose {f} with {g}: arity mismatch")
    out = Morphism(f.source, g.target, tuple(substitute(c, f.components) for c in g.components))
    if cat is not None and not is_morphism(out.source, out.target, out.components, cat):
        raise TermError(f"composite {out} violates the discipline of {cat}")
    return out


@lru_cache(maxsize=200_000)
def semantic_key(f: Morphism, cat: CubeCategory) -> Key:
    alg = cat.algebra
    return tuple(table_key(c, alg, f.source) for c in f.components)


def morphisms_equal(f: Morphism, g: Morphism, cat: CubeCategory) -> bool:
    if (f.source, f.target) != (g.source, g.target):
        raise TermError(f"cannot compare {f} with {g}: arity mismatch")
    return semantic_key(f, cat) == semantic_key(g, cat)


def compose_keys(fkey: Key, gkey: Key, m: int, alg: FiniteAlgebra) -> Key:
    """Semantic key of ``f`` then ``g`` computed directly on function tables."""
    size = alg.size ** m
    if not gkey:
        return ()
    if not fkey:
        # f : [m] -> [0]; g's tables are constant functions of the empty tuple
        return tuple((row[0],) * size for row in gkey)
    fa = np.array(fkey, dtype=np.int64)
    weights = alg.size ** np.arange(len(fkey) - 1, -1, -1, dtype=np.int64)
    idx = weights @ fa
    ga = np.array(gkey, dtype=np.int64)
    return tuple(map(tuple, ga[:, idx].tolist()))


# --- hom-set enumeration ---------------------------------------------------------


def _embed_index(subset: Sequence[int], k: int, size: int) -> np.ndarray:
    """Index map sending a ``k``-assignment to the restricted ``len(subset)``-assignment."""
    coords = _coordinates(size, k)
    idx = np.zeros(size ** k, dtype=np.int64)
    for v in subset:
        idx = idx * size + coords[v - 1]
    return idx


def _splits(k: int, rules: StructuralRules):
    """Variable sets (A, B) of the two arguments of a binary operation."""
    full = range(1, k + 1)
    if not rules.exchange:
        for j in range(k + 1):
            yield tuple(range(1, j + 1)), tuple(range(j + 1, k + 1))
    elif not rules.contraction:
        for sides in itertools.product((0, 1), repeat=k):
            yield (tuple(v for v, s in zip(full, sides) if s == 0),
                   tuple(v for v, s in zip(full, sides) if s == 1))
    else:
        for sides in itertools.product((0, 1, 2), repeat=k):
            yield (tuple(v for v, s in zip(full, sides) if s != 1),
                   tuple(v for v, s in zip(full, sides) if s != 0))


@lru_cache(maxsize=None)
def exact_tables(cat: CubeCategory, k: int) -> dict[tuple[int, ...], Term]:
    """Tables of terms over ``x1..xk`` using every variable, per the exchange/contraction rules.

    Computed as a semantic fixed point, each table with one witness term.
    """
    alg, sig, rules = cat.algebra, cat.signature, cat.rules
    if k == 0:
        seeds = {table_key(t, alg, 0): t for t in (ONE, ZERO)}
        return closure(seeds, alg, sig)
    size = alg.size
    found: dict[tuple[int, ...], Term] = {}
    if k == 1:
        found[table_key(Var(1), alg, 1)] = Var(1)
    ops = [(ctor, alg.table(name)) for ctor, name, ok in
           ((Join, "join", sig.has_join), (Meet, "meet", sig.has_meet)) if ok]
    splits = list(_splits(k, rules)) if ops else []

    def lifted(subset):
        if len(subset) == k:
            items = list(found.items())
        else:
            items = list(exact_tables(cat, len(subset)).items())
        if not items:
            return np.zeros((0, size ** k), dtype=np.int64), []
        idx = _embed_index(subset, k, size)
        arr = np.array([key for key, _ in items], dtype=np.int64)[:, idx]
        return arr, [rename(t, subset) if subset else t for _, t in items]

    changed = True
    while changed:
        changed = False
        if sig.has_reversal:
            rev = alg.table("rev")
            for key, term in list(found.items()):
                new = tuple(rev[np.array(key)].tolist())
                if new not in found:
                    found[new] = Rev(term)
                    changed = True
        for a_set, b_set in splits:
            ga, gt = lifted(a_set)
            hb, ht = lifted(b_set)
            if not gt or not ht:
                continue
            for ctor, tab in ops:
                res = tab[ga[:, None, :], hb[None, :, :]]
                flat = res.reshape(-1, res.shape[-1])
                uniq, first = np.unique(flat, axis=0, return_index=True)
                for row, pos in zip(uniq.tolist(), first.tolist()):
                    key = tuple(row)
                    if key not in found:
                        i, j = divmod(pos, len(ht))
                        found[key] = ctor(gt[i], ht[j])
                        changed = True
                        if len(found) > cat.max_hom_size:
                            raise HomBoundError(f"term closure for {cat} exceeds {cat.max_hom_size}")
    return found


def _allocations(m: int, n: int, rules: StructuralRules):
    """Variable sets per target component allowed by the joint discipline."""
    if rules.contraction:
        choices = [c for c in itertools.product((0, 1), repeat=n) if rules.weakening or any(c)]
        for per_var in itertools.product(choices, repeat=m):
            yield tuple(tuple(v for v in range(1, m + 1) if per_var[v - 1][i]) for i in range(n))
        return
    owners = range(n) if not rules.weakening else range(-1, n)
    for assign in itertools.product(owners, repeat=m):
        if not rules.exchange:
            used = [a for a in assign if a >= 0]
            if any(x > y for x, y in zip(used, used[1:])):
                continue
        yield tuple(tuple(v for v in range(1, m + 1) if assign[v - 1] == i) for i in range(n))


def _component_options(cat: CubeCategory, subset: tuple[int, ...], m: int):
    size = cat.algebra.size
    table = exact_tables(cat, len(subset))
    if not subset:
        return [((key[0],) * size ** m, term) for key, term in table.items()]
    idx = _embed_index(subset, m, size)
    return [(tuple(np.array(key)[idx].tolist()), rename(term, subset)) for key, term in table.items()]


def hom_by_allocation(m: int, n: int, cat: CubeCategory) -> dict[Key, Morphism]:
    """Hom-set built from variable allocations and per-component term closure."""
    found: dict[Key, Morphism] = {}
    options_cache: dict[tuple[int, ...], list] = {}
    for alloc in _allocations(m, n, cat.rules):
        per_comp = []
        for subset in alloc:
            if subset not in options_cache:
                options_cache[subset] = _component_options(cat, subset, m)
            per_comp.append(options_cache[subset])
        for combo in itertools.product(*per_comp):
            key = tuple(k for k, _ in combo)
            if key not in found:
                found[key] = Morphism(m, n, tuple(t for _, t in combo))
                if len(found) > cat.max_hom_size:
                    raise HomBoundError(f"hom([{m}],[{n}]) in {cat} exceeds {cat.max_hom_size}")
    return found


def _hom_cartesian(m: int, n: int, cat: CubeCategory) -> dict[Key, Morphism]:
    try:
        free = free_algebra(cat.language, cat.theory, m, limit=cat.max_hom_size)
    except AlgebraError as exc:
        raise HomBoundError(str(exc)) from None
    size = len(free) ** n
    if size > cat.max_hom_size:
        raise HomBoundError(f"hom([{m}],[{n}]) in {cat} has {size} elements")
    items = free.sorted_items()
    return {
        tuple(k for k, _ in combo): Morphism(m, n, tuple(t for _, t in combo))
        for combo in itertools.product(items, repeat=n)
    }


@lru_cache(maxsize=None)
def _hom(m: int, n: int, cat: CubeCategory) -> tuple[tuple[Key, Morphism], ...]:
    if not (0 <= m <= cat.max_arity and 0 <= n <= cat.max_arity):
        raise HomBoundError(f"arities must lie in 0..{cat.max_arity}")
    found = _hom_cartesian(m, n, cat) if cat.language.is_cartesian else hom_by_allocation(m, n, cat)
    return tuple(sorted(found.items()))


def enumerate_hom(m: int, n: int, cat: CubeCategory) -> list[Morphism]:
    """All morphisms ``[m] -> [n]``, one representative per semantic key, sorted by key."""
    return [f for _, f in _hom(m, n, cat)]


def hom_with_keys(m: int, n: int, cat: CubeCategory) -> tuple[tuple[Key, Morphism], ...]:
    return _hom(m, n, cat)


def clear_caches() -> None:
    """Forget memoized hom-sets, tables and keys (for cold timings)."""
    from .algebras import _coordinates

    for fn in (_hom, exact_tables, semantic_key, _coordinates):
        fn.cache_clear()


def separated_interval(cat: CubeCategory) -> bool:
    """Whether the endpoints ``(0), (1): [0] -> [1]`` are distinct morphisms."""
    d0, d1 = Morphism(0, 1, (ZERO,)), Morphism(0, 1, (ONE,))
    return semantic_key(d0, cat) != semantic_key(d1, cat)


# --- factorization ---------------------------------------------------------------


def _check_factorizable(cat: CubeCategory):
    if cat.signature.has_connection or cat.rules.code not in ("w", "we"):
        raise FactorizationError(f"factorization is only provided for C(w|we, ∅|′), not {cat}")


@dataclass(frozen=True)
class Factorization:
    """Degeneracies, then a symmetry, then reversals, then face maps.

    ``dropped`` lists the source variables removed by degeneracies; the
    ``r`` survivors become slots ``1..r`` in order.  ``permutation[i]`` is the
    slot feeding slot ``i + 1`` after the symmetry, ``reversals[i]`` flags a
    reversal on slot ``i + 1``, and ``face[j]`` is the slot landing in target
    position ``j + 1`` or a constant ``"0"``/``"1"``.
    """

    source: int
    target: int
    dropped: tuple[int, ...]
    permutation: tuple[int, ...]
    reversals: tuple[bool, ...]
    face: tuple[int | str, ...]

    @property
    def rank(self) -> int:
        return self.source - len(self.dropped)

    def degeneracy(self) -> Morphism:
        kept = [v for v in range(1, self.source + 1) if v not in self.dropped]
        return Morphism(self.source, self.rank, tuple(Var(v) for v in kept))

    def symmetry(self) -> Morphism:
        return Morphism(self.rank, self.rank, tuple(Var(p) for p in self.permutation))

    def reversal(self) -> Morphism:
        return Morphism(self.rank, self.rank, tuple(
            Rev(Var(i)) if flip else Var(i) for i, flip in enumerate(self.reversals, 1)))

    def face_map(self) -> Morphism:
        return Morphism(self.rank, self.target, tuple(
            Var(c) if isinstance(c, int) else (ZERO if c == "0" else ONE) for c in self.face))

    def recompose(self) -> Morphism:
        f = compose(self.degeneracy(), self.symmetry())
        return compose(compose(f, self.reversal()), self.face_map())

    @property
    def is_trivial_outside_isos(self) -> bool:
        return not self.dropped and all(isinstance(c, int) for c in self.face)


def _literal_tables(m: int, alg: FiniteAlgebra):
    """Map function tables of constants and literals to (var, reversed) or constant."""
    out = {table_key(ZERO, alg, m): "0", table_key(ONE, alg, m): "1"}
    for v in range(1, m + 1):
        out[table_key(Var(v), alg, m)] = (v, False)
        if alg.rev is not None:
            out.setdefault(table_key(Rev(Var(v)), alg, m), (v, True))
    return out


def factorize(f: Morphism, cat: CubeCategory) -> Factorization:
    _check_factorizable(cat)
    if not is_morphism(f.source, f.target, f.components, cat):
        raise FactorizationError(f"{f} is not a morphism of {cat}")
    lits = _literal_tables(f.source, cat.algebra)
    entries = []
    for key in semantic_key(f, cat):
        if key not in lits:
            raise FactorizationError(f"component table {key} is not a literal")
        entries.append(lits[key])
    used = [e for e in entries if isinstance(e, tuple)]
    survivors = sorted(v for v, _ in used)
    rank = {v: i for i, v in enumerate(survivors, 1)}
    dropped = tuple(v for v in range(1, f.source + 1) if v not in rank)
    permutation = tuple(rank[v] for v, _ in used)
    reversals = tuple(flip for _, flip in used)
    face: list[int | str] = []
    slot = 0
    for e in entries:
        if isinstance(e, tuple):
            slot += 1
            face.append(slot)
        else:
            face.append(e)
    return Factorization(f.source, f.target, dropped, permutation, reversals, tuple(face))


def canonical_factorizations(m: int, n: int, cat: CubeCategory) -> Iterable[Factorization]:
    """Every block combination of canonical shape with source ``m`` and target ``n``."""
    _check_factorizable(cat)
    for r in range(min(m, n) + 1):
        for kept in itertools.combinations(range(1, m + 1), r):
            dropped = tuple(v for v in range(1, m + 1) if v not in kept)
            perms = itertools.permutations(range(1, r + 1)) if cat.rules.exchange else [tuple(range(1, r + 1))]
            for perm in perms:
                masks = itertools.product((False, True), repeat=r) if cat.signature.has_reversal else [(False,) * r]
                for mask in masks:
                    for slots in itertools.combinations(range(n), r):
                        consts = [j for j in range(n) if j not in slots]
                        for values in itertools.product("01", repeat=len(consts)):
                            face: list[int | str] = [0] * n
                            for i, j in enumerate(slots, 1):
                                face[j] = i
                            for j, c in zip(consts, values):
                                face[j] = c
                            yield Factorization(m, n, dropped, tuple(perm), tuple(mask), tuple(face))


def is_iso(f: Morphism, cat: CubeCategory) -> bool:
    """Isomorphisms are exactly composites of reversals and symmetries."""
    return factorize(f, cat).is_trivial_outside_isos
