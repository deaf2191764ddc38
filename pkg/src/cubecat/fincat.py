"""Finite categories, comma categories, nerves and their homology.

Arrows are named by strings.  Composition is written diagrammatically:
``compose(f, g)`` is ``f`` followed by ``g``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any, Iterable, Mapping, Sequence

from .homology import ChainComplex, HomologyResult, homology as chain_homology


class FinCatError(ValueError):
    pass


def identity_name(obj: str) -> str:
    return f"id[{obj}]"


@dataclass
class FinCat:
    objects: tuple[str, ...]
    arrows: dict[str, tuple[str, str]]
    composition: dict[tuple[str, str], str]
    identities: dict[str, str]
    dims: dict[str, int] = field(default_factory=dict)
    data: dict[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        self._hom: dict[tuple[str, str], list[str]] = {}
        for name, (a, b) in self.arrows.items():
            self._hom.setdefault((a, b), []).append(name)
        self._ids = set(self.identities.values())

    # -- basic queries --

    def source(self, f: str) -> str:
        return self.arrows[f][0]

    def target(self, f: str) -> str:
        return self.arrows[f][1]

    def hom(self, a: str, b: str) -> list[str]:
        return self._hom.get((a, b), [])

    def is_identity(self, f: str) -> bool:
        return f in self._ids

    def compose(self, f: str, g: str) -> str:
        if self.target(f) != self.source(g):
            raise FinCatError(f"{f} and {g} are not composable")
        if self.is_identity(f):
            return g
        if self.is_identity(g):
            return f
        return self.composition[(f, g)]

    def non_identity_arrows(self) -> list[str]:
        return [f for f in self.arrows if not self.is_identity(f)]

    @property
    def is_poset(self) -> bool:
        return all(len(v) <= 1 for v in self._hom.values())

    def leq(self, a: str, b: str) -> bool:
        return bool(self.hom(a, b))

    def dim(self, obj: str) -> int:
        return self.dims.get(obj, 0)

    def __len__(self):
        return len(self.objects)

    # -- validation --

    def validate(self, directed: bool = True) -> None:
        objs = set(self.objects)
        if len(objs) != len(self.objects):
            raise FinCatError("duplicate objects")
        for f, (a, b) in self.arrows.items():
            if a not in objs or b not in objs:
                raise FinCatError(f"arrow {f} has an unknown endpoint")
        for x in self.objects:
            i = self.identities.get(x)
            if i is None or self.arrows.get(i) != (x, x):
                raise FinCatError(f"object {x} lacks an identity")
        arrows = self.non_identity_arrows()
        for f in arrows:
            for g in self._outgoing(self.target(f)):
                h = self.composition.get((f, g))
                if h is None:
                    raise FinCatError(f"composite of {f} and {g} is missing")
                if self.arrows.get(h) != (self.source(f), self.target(g)):
                    raise FinCatError(f"composite of {f} and {g} has the wrong type")
        for f in arrows:
            for g in self._outgoing(self.target(f)):
                for h in self._outgoing(self.target(g)):
                    if self.compose(self.compose(f, g), h) != self.compose(f, self.compose(g, h)):
                        raise FinCatError(f"composition is not associative at {f}, {g}, {h}")
        if directed:
            self._check_directed()

    def _outgoing(self, x: str) -> list[str]:
        return [g for g in self.non_identity_arrows() if self.source(g) == x]

    def _check_directed(self) -> None:
        # no non-identity endomorphisms and no cycles through distinct objects
        succ: dict[str, set[str]] = {x: set() for x in self.objects}
        for f in self.non_identity_arrows():
            a, b = self.arrows[f]
            if a == b:
                raise FinCatError(f"non-identity endomorphism {f} on {a}")
            succ[a].add(b)
        state: dict[str, int] = {}
        for root in self.objects:
            if root in state:
                continue
            stack = [(root, iter(sorted(succ[root])))]
            state[root] = 1
            while stack:
                node, it = stack[-1]
                nxt = next(it, None)
                if nxt is None:
                    state[node] = 2
                    stack.pop()
                elif state.get(nxt) == 1:
                    raise FinCatError(f"non-identity isomorphism or cycle through {nxt}")
                elif nxt not in state:
                    state[nxt] = 1
                    stack.append((nxt, iter(sorted(succ[nxt]))))

    # -- serialization --

    def to_dict(self) -> dict:
        return {
            "objects": [{"name": x, "dim": self.dim(x)} for x in self.objects],
            "arrows": [{"name": f, "source": a, "target": b}
                       for f, (a, b) in self.arrows.items() if not self.is_identity(f)],
            "composition": [[f, g, h] for (f, g), h in sorted(self.composition.items())],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, ensure_ascii=False)

    @classmethod
    def from_dict(cls, d: Mapping, directed: bool = True) -> "FinCat":
        objects = [o["name"] for o in d["objects"]]
        dims = {o["name"]: o.get("dim", 0) for o in d["objects"]}
        homs = {a["name"]: (a["source"], a["target"]) for a in d.get("arrows", [])}
        comp = {(f, g): h for f, g, h in d.get("composition", [])}
        return build_fincat(objects, homs, comp, dims=dims, directed=directed)

    def to_dot(self, name: str = "A", hasse: bool = True) -> str:
        """Graphviz text; objects of equal dimension share a rank."""
        lines = [f'digraph "{name}" {{', "  rankdir=BT;"]
        for dim in sorted(set(self.dim(x) for x in self.objects)):
            members = " ".join(f'"{x}";' for x in self.objects if self.dim(x) == dim)
            lines.append(f"  {{ rank=same; {members} }}")
        edges = self.non_identity_arrows()
        if hasse and self.is_poset:
            edges = [f for f in edges if not self._factors(f)]
        for f in edges:
            a, b = self.arrows[f]
            lines.append(f'  "{a}" -> "{b}";')
        lines.append("}")
        return "\n".join(lines) + "\n"

    def _factors(self, f: str) -> bool:
        a, b = self.arrows[f]
        return any(
            self.hom(a, c) and self.hom(c, b) for c in self.objects if c not in (a, b)
        )


def build_fincat(
    objects: Sequence[str],
    homs: Mapping[str, tuple[str, str]],
    composition: Mapping[tuple[str, str], str],
    dims: Mapping[str, int] | None = None,
    directed: bool = True,
    validate: bool = True,
    data: Mapping[str, Any] | None = None,
) -> FinCat:
    """Assemble a category from its non-identity arrows and their composites.

    Identities are added automatically and named ``id[x]``; composites may
    name them.
    """
    arrows = {identity_name(x): (x, x) for x in objects}
    for f, ends in homs.items():
        if f in arrows:
            raise FinCatError(f"arrow name {f} clashes with an identity")
        arrows[f] = tuple(ends)
    cat = FinCat(
        tuple(objects),
        arrows,
        dict(composition),
        {x: identity_name(x) for x in objects},
        dict(dims or {}),
        dict(data or {}),
    )
    if validate:
        cat.validate(directed=directed)
    return cat


def poset(
    elements: Sequence[str],
    relations: Iterable[tuple[str, str]],
    dims: Mapping[str, int] | None = None,
    data: Mapping[str, Any] | None = None,
) -> FinCat:
    """Poset category from generating relations ``a ≤ b`` (closed transitively)."""
    elements = list(elements)
    succ: dict[str, set[str]] = {x: set() for x in elements}
    for a, b in relations:
        if a != b:
            succ[a].add(b)
    up: dict[str, set[str]] = {}
    for a in elements:
        seen: set[str] = set()
        stack = list(succ[a])
        while stack:
            b = stack.pop()
            if b not in seen:
                seen.add(b)
                stack.extend(succ[b])
        if a in seen:
            raise FinCatError(f"relations are not antisymmetric at {a}")
        up[a] = seen
    homs = {f"{a}<{b}": (a, b) for a in elements for b in elements if b in up[a]}
    comp = {
        (f"{a}<{b}", f"{b}<{c}"): f"{a}<{c}"
        for a in elements for b in up[a] for c in up[b]
    }
    return build_fincat(elements, homs, comp, dims=dims, validate=False, data=data)


# --- universal objects -------------------------------------------------------------


def has_terminal(c: FinCat) -> str | None:
    for t in c.objects:
        if all(len(c.hom(x, t)) == 1 for x in c.objects):
            return t
    return None


def has_initial(c: FinCat) -> str | None:
    for t in c.objects:
        if all(len(c.hom(t, x)) == 1 for x in c.objects):
            return t
    return None


# --- comma categories ----------------------------------------------------------------


def _comma(c: FinCat, objs: list[str], under: bool) -> FinCat:
    # under=False: slice (arrows into x); under=True: coslice (arrows out of x)
    end = c.target if under else c.source
    homs, witness = {}, {}
    for f in objs:
        for f2 in objs:
            for g in c.hom(end(f), end(f2)):
                ok = c.compose(f, g) == f2 if under else c.compose(g, f2) == f
                if ok and not (f == f2 and c.is_identity(g)):
                    name = f"{f}|{g}" if under else f"{g}|{f}"
                    homs[name] = (f, f2)
                    witness[name] = g
    lookup = {(homs[u][0], homs[u][1], witness[u]): u for u in homs}
    comp = {}
    for u, (f, f2) in homs.items():
        for v, (f2b, f3) in homs.items():
            if f2b == f2:
                g = c.compose(witness[u], witness[v])
                comp[(u, v)] = identity_name(f) if c.is_identity(g) and f == f3 else lookup[(f, f3, g)]
    dims = {f: c.dim(end(f)) for f in objs}
    return build_fincat(objs, homs, comp, dims=dims, directed=False,
                        data={"projection": {f: end(f) for f in objs}, "arrow_of": witness})


def slice_category(c: FinCat, x: str, strict: bool = False) -> FinCat:
    """Objects are arrows ``f: a -> x``; a map ``f -> f'`` is ``g`` with ``g ; f' = f``."""
    objs = [f for a in c.objects for f in c.hom(a, x)]
    if strict:
        objs = [f for f in objs if not c.is_identity(f)]
    return _comma(c, objs, under=False)


def coslice_category(c: FinCat, x: str, strict: bool = False) -> FinCat:
    """Objects are arrows ``f: x -> a``; a map ``f -> f'`` is ``g`` with ``f ; g = f'``.

    ``strict`` drops the identity of ``x`` (the coslice's initial object).
    """
    objs = [f for a in c.objects for f in c.hom(x, a)]
    if strict:
        objs = [f for f in objs if not c.is_identity(f)]
    return _comma(c, objs, under=True)


def full_subcategory(c: FinCat, keep: Sequence[str]) -> FinCat:
    keep_set = set(keep)
    homs = {f: ends for f, ends in c.arrows.items()
            if not c.is_identity(f) and ends[0] in keep_set and ends[1] in keep_set}
    comp = {(f, g): h for (f, g), h in c.composition.items() if f in homs and g in homs}
    return build_fincat(list(keep), homs, comp, dims={x: c.dim(x) for x in keep},
                        directed=False, validate=False, data=c.data)


# --- nerve and homology --------------------------------------------------------------------


@dataclass(frozen=True)
class NerveComplex:
    """Nondegenerate simplices of the nerve: chains of non-identity arrows.

    ``simplices[0]`` holds objects as 1-tuples; ``simplices[k]`` holds chains
    ``(f1, ..., fk)`` of composable non-identity arrows.
    """

    simplices: tuple[tuple[tuple[str, ...], ...], ...]
    complete: bool
    category: FinCat = field(repr=False, compare=False)

    @property
    def f_vector(self) -> tuple[int, ...]:
        return tuple(len(s) for s in self.simplices)

    @property
    def max_dim(self) -> int:
        return len(self.simplices) - 1

    def faces(self, k: int, simplex: tuple[str, ...]) -> list[tuple[str, ...]]:
        """Faces ``d_0 .. d_k`` of a ``k``-simplex."""
        c = self.category
        if k == 1:
            f = simplex[0]
            return [(c.target(f),), (c.source(f),)]
        out = [simplex[1:]]
        for i in range(1, k):
            out.append(simplex[: i - 1] + (c.compose(simplex[i - 1], simplex[i]),) + simplex[i + 1:])
        out.append(simplex[:-1])
        return out

    def chain_complex(self) -> ChainComplex:
        index = [{s: i for i, s in enumerate(level)} for level in self.simplices]
        ranks = tuple(len(level) for level in self.simplices)
        mats = [[]]
        for k in range(1, len(self.simplices)):
            mat = [[0] * ranks[k] for _ in range(ranks[k - 1])]
            for j, s in enumerate(self.simplices[k]):
                for i, face in enumerate(self.faces(k, s)):
                    mat[index[k - 1][face]][j] += (-1) ** i
            mats.append(mat)
        return ChainComplex(ranks, tuple(mats))


def longest_chain(c: FinCat) -> int:
    memo: dict[str, int] = {}
    out: dict[str, list[str]] = {x: [] for x in c.objects}
    for f in c.non_identity_arrows():
        out[c.source(f)].append(c.target(f))

    def height(x):
        if x not in memo:
            memo[x] = max((1 + height(y) for y in out[x]), default=0)
        return memo[x]

    return max((height(x) for x in c.objects), default=0)


def nerve(c: FinCat, max_dim: int | None = None) -> NerveComplex:
    """Chains of composable non-identity arrows up to ``max_dim``.

    For a poset these are the strict chains ``x0 < ... < xk``.  The default
    dimension is the longest chain length, which loses nothing.
    """
    c._check_directed()
    if max_dim is None:
        max_dim = longest_chain(c)
    out: dict[str, list[str]] = {x: [] for x in c.objects}
    for f in c.non_identity_arrows():
        out[c.source(f)].append(f)
    levels: list[list[tuple[str, ...]]] = [[(x,) for x in c.objects]]
    if max_dim >= 1:
        levels.append([(f,) for f in c.non_identity_arrows()])
    for _ in range(2, max_dim + 1):
        levels.append([s + (g,) for s in levels[-1] for g in out[c.target(s[-1])]])
    complete = max_dim >= longest_chain(c)
    return NerveComplex(tuple(tuple(level) for level in levels), complete, c)


def homology(n: NerveComplex) -> HomologyResult:
    """Integer homology of the nerve; the top degree is exact only for complete nerves."""
    exact = n.max_dim if n.complete else n.max_dim - 1
    return chain_homology(n.chain_complex(), exact_through=exact)


def fincat_homology(c: FinCat, max_dim: int | None = None) -> HomologyResult:
    if max_dim is None:
        return homology(nerve(c))
    return homology(nerve(c, max_dim + 1))


def is_acyclic(c: FinCat, max_dim: int = 3) -> bool:
    """Reduced homology vanishes through ``max_dim``.

    False certifies that ``c`` is not aspheric; True alone does not prove it is.
    """
    return fincat_homology(c, max_dim).reduced_trivial(max_dim)


NON_ASPHERIC = "non-aspheric (homology witness)"
CONTRACTIBLE = "contractible (terminal/initial object)"
INCONCLUSIVE = "inconclusive (acyclic but no contractibility certificate)"


def asphericity(c: FinCat, max_dim: int = 3) -> str:
    if has_terminal(c) is not None or has_initial(c) is not None:
        return CONTRACTIBLE
    if not is_acyclic(c, max_dim):
        return NON_ASPHERIC
    return INCONCLUSIVE
