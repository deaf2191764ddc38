"""Obstruction posets over the square and the test-category classification table.

An object of the slice over ``□¹×□¹`` is a dimension ``n`` with two terms
``s, t`` over ``x1..xn``, each a morphism ``[n] -> [1]`` on its own.  A map
``(n', s', t') -> (n, s, t)`` is a morphism ``g: [n'] -> [n]`` with
``g ; s = s'`` and ``g ; t = t'``.  Everything below is generated from hom-set
enumeration and composition; nothing about the posets is transcribed.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass, field
from typing import Sequence

from .algebras import (
    FULL_LANGUAGE,
    THREE,
    TWO,
    Theory,
    counterexample,
    decision_algebra,
    format_assignment,
    table_key,
)
from .category import (
    CubeCategory,
    Key,
    Morphism,
    compose_keys,
    hom_with_keys,
    identity,
    semantic_key,
    separated_interval,
    _literal_tables,
)
from .fincat import (
    FinCat,
    build_fincat,
    fincat_homology,
    has_initial,
    has_terminal,
    identity_name,
    nerve,
    poset,
)
from .homology import HomologyResult
from .terms import (
    ALL_SIGNATURES,
    CARTESIAN,
    FULL_SIGNATURE,
    ONE,
    ZERO,
    Language,
    Rev,
    Term,
    TermError,
    Var,
    format_term,
    parse_term,
    random_term,
)

MAX_SLICE_DIM = 3


class ExperimentError(ValueError):
    pass


@dataclass(frozen=True)
class SliceObject:
    dim: int
    s: Term
    t: Term

    @property
    def label(self) -> str:
        ctx = "".join(f"x{i}" for i in range(1, self.dim + 1)) or "·"
        return f"({ctx},({format_term(self.s)},{format_term(self.t)}))"

    def keys(self, cat: CubeCategory) -> tuple[Key, Key]:
        return (semantic_key(Morphism(self.dim, 1, (self.s,)), cat),
                semantic_key(Morphism(self.dim, 1, (self.t,)), cat))


def slice_objects(cat: CubeCategory, max_dim: int) -> list[SliceObject]:
    """All slice objects up to ``max_dim``, one per pair of semantic keys."""
    if max_dim > MAX_SLICE_DIM:
        raise ExperimentError(f"slice dimension is bounded by {MAX_SLICE_DIM}")
    out = []
    for n in range(max_dim + 1):
        maps = [f.components[0] for _, f in hom_with_keys(n, 1, cat)]
        out.extend(SliceObject(n, s, t) for s in maps for t in maps)
    return out


def slice_morphisms(cat: CubeCategory, src: SliceObject, dst: SliceObject) -> list[tuple[Key, Morphism]]:
    """Morphisms ``g: [src.dim] -> [dst.dim]`` carrying ``dst`` back to ``src``."""
    alg = cat.algebra
    want_s, want_t = src.keys(cat)
    dst_s, dst_t = dst.keys(cat)
    out = []
    for key, g in hom_with_keys(src.dim, dst.dim, cat):
        if (compose_keys(key, dst_s, src.dim, alg) == want_s
                and compose_keys(key, dst_t, src.dim, alg) == want_t):
            out.append((key, g))
    return out


def build_slice_fragment(
    cat: CubeCategory,
    max_dim: int,
    objects: Sequence[SliceObject] | None = None,
    names: Sequence[str] | None = None,
) -> FinCat:
    """Slice objects of dimension at most ``max_dim`` (or the given ones) with every map between them."""
    if objects is None:
        objects = slice_objects(cat, max_dim)
    elif any(o.dim > MAX_SLICE_DIM for o in objects):
        raise ExperimentError(f"slice dimension is bounded by {MAX_SLICE_DIM}")
    names = list(names) if names is not None else [o.label for o in objects]
    by_name = dict(zip(names, objects))
    alg = cat.algebra
    homs: dict[str, tuple[str, str]] = {}
    morph: dict[str, Morphism] = {}
    arrow_key: dict[str, Key] = {}
    lookup: dict[tuple[str, str, Key], str] = {}
    for a in names:
        id_key = semantic_key(identity(by_name[a].dim), cat)
        lookup[(a, a, id_key)] = identity_name(a)
        morph[identity_name(a)] = identity(by_name[a].dim)
        arrow_key[identity_name(a)] = id_key
        for b in names:
            for key, g in slice_morphisms(cat, by_name[a], by_name[b]):
                if a == b and key == id_key:
                    continue
                name = f"{a}→{b}:{','.join(format_term(c) for c in g.components)}"
                homs[name] = (a, b)
                morph[name] = g
                arrow_key[name] = key
                lookup[(a, b, key)] = name
    comp = {}
    for f, (a, b) in homs.items():
        for g, (b2, c) in homs.items():
            if b2 == b:
                key = compose_keys(arrow_key[f], arrow_key[g], by_name[a].dim, alg)
                comp[(f, g)] = lookup[(a, c, key)]
    dims = {x: by_name[x].dim for x in names}
    return build_fincat(names, homs, comp, dims=dims, directed=False, validate=len(homs) < 400,
                        data={"object": by_name, "morphism": morph, "key": arrow_key, "category": cat})


# --- the obstruction posets ------------------------------------------------------------

VERTEX, SIDE, DIAGONAL, ANTI_DIAGONAL, NORTH, SOUTH = (
    "vertex", "side", "diagonal", "anti-diagonal", "north", "south")


def a_objects(cat: CubeCategory) -> dict[str, tuple[str, SliceObject]]:
    """Named objects spanning the obstruction poset: label -> (kind, slice object)."""
    if cat.signature.has_connection:
        raise ExperimentError(f"the obstruction poset needs a signature without connections, not {cat}")
    x, y = Var(1), Var(2)
    consts = (("0", ZERO), ("1", ONE))
    objs: dict[str, tuple[str, SliceObject]] = {}
    for i, ci in consts:
        for j, cj in consts:
            objs[f"({i},{j})"] = (VERTEX, SliceObject(0, ci, cj))
    for i, ci in consts:
        objs[f"({i},x)"] = (SIDE, SliceObject(1, ci, x))
    for i, ci in consts:
        objs[f"(x,{i})"] = (SIDE, SliceObject(1, x, ci))
    objs["(x,x)"] = (DIAGONAL, SliceObject(1, x, x))
    if cat.signature.has_reversal:
        objs["(x,x′)"] = (ANTI_DIAGONAL, SliceObject(1, x, Rev(x)))
    objs["(x,y)"] = (NORTH, SliceObject(2, x, y))
    if not cat.rules.exchange:
        objs["(y,x)"] = (SOUTH, SliceObject(2, y, x))
    return objs


def build_A(cat: CubeCategory) -> FinCat:
    """Full subcategory of the slice over the square on the named objects, maps computed."""
    objs = a_objects(cat)
    frag = build_slice_fragment(cat, 2, [o for _, o in objs.values()], list(objs))
    frag.data["kind"] = {name: kind for name, (kind, _) in objs.items()}
    return frag


EXPECTED_A_BETTI = {
    ("w", False): (1, 1, 1),
    ("w", True): (1, 2, 1),
    ("we", False): (1, 1, 0),
    ("we", True): (1, 2, 0),
}
WEDGE_NAMES = {
    ("w", False): "S²∨S¹",
    ("w", True): "S²∨S¹∨S¹",
    ("we", False): "S¹",
    ("we", True): "S¹∨S¹",
}


def obstruction_case(cat: CubeCategory) -> tuple[str, bool]:
    if cat.theory is not Theory.CANONICAL or cat.signature.has_connection or cat.rules.code not in ("w", "we"):
        raise ExperimentError(f"{cat} is not one of C(w|we, ∅|′)")
    return cat.rules.code, cat.signature.has_reversal


@dataclass(frozen=True)
class HomotopyCheck:
    category: str
    homology: HomologyResult
    expected_betti: tuple[int, ...]
    expected_space: str
    f_vector: tuple[int, ...]
    is_poset: bool

    @property
    def passed(self) -> bool:
        return (self.is_poset and self.homology.betti == self.expected_betti
                and not any(self.homology.torsion))


def verify_A_homotopy(cat: CubeCategory) -> HomotopyCheck:
    case = obstruction_case(cat)
    a = build_A(cat)
    n = nerve(a)
    h = fincat_homology(a)
    return HomotopyCheck(cat.name, h, EXPECTED_A_BETTI[case], WEDGE_NAMES[case], n.f_vector, a.is_poset)


def incidences(a: FinCat) -> dict[str, list[str]]:
    """For each object, the objects strictly below it."""
    return {x: sorted(y for y in a.objects if y != x and a.hom(y, x)) for x in a.objects}


def fig2_discrepancies(a: FinCat) -> list[str]:
    """Compare the generated strict incidences of A with the expected picture of the square."""
    kind = a.data["kind"]
    below = incidences(a)
    vertices = [x for x in a.objects if kind[x] == VERTEX]
    sides = [x for x in a.objects if kind[x] == SIDE]
    expected: dict[str, set[str]] = {v: set() for v in vertices}
    for x in sides:
        i = x[1] if x[1] in "01" else None
        j = x[3] if x[3] in "01" else None
        expected[x] = {f"({i},{e})" for e in "01"} if i else {f"({e},{j})" for e in "01"}
    if "(x,x)" in kind:
        expected["(x,x)"] = {"(0,0)", "(1,1)"}
    if "(x,x′)" in kind:
        expected["(x,x′)"] = {"(0,1)", "(1,0)"}
    for x in a.objects:
        if kind[x] in (NORTH, SOUTH):
            expected[x] = set(vertices) | set(sides)
    out = []
    for x in a.objects:
        got = set(below[x])
        if got != expected[x]:
            out.append(f"{x}: below {sorted(got)}, expected {sorted(expected[x])}")
    if not a.is_poset:
        out.append("some hom-set has more than one element")
    return out


@dataclass(frozen=True)
class CollapseCheck:
    category: str
    terminal: str | None
    terminal_kind: str | None
    reduced_trivial: bool
    homology: HomologyResult

    @property
    def passed(self) -> bool:
        return self.terminal_kind == NORTH and self.reduced_trivial


def contraction_collapse(cat: CubeCategory) -> CollapseCheck:
    """With contraction the diagonal lands in the northern hemisphere, which becomes terminal."""
    a = build_A(cat)
    term = has_terminal(a)
    h = fincat_homology(a, max_dim=3)
    kind = a.data["kind"].get(term) if term else None
    return CollapseCheck(cat.name, term, kind, h.reduced_trivial(3), h)


# --- coslice case analysis ------------------------------------------------------------


def expected_initial(cat: CubeCategory, obj: SliceObject) -> str:
    """Label of the object of A that the case analysis predicts is initial under ``obj``."""
    lits = _literal_tables(obj.dim, cat.algebra)
    s_key, t_key = (k[0] for k in obj.keys(cat))
    s, t = lits[s_key], lits[t_key]
    if isinstance(s, str) and isinstance(t, str):
        return f"({s},{t})"
    if isinstance(s, str):
        return f"({s},x)"
    if isinstance(t, str):
        return f"(x,{t})"
    (vs, rs), (vt, rt) = s, t
    if vs == vt:
        return "(x,x)" if rs == rt else "(x,x′)"
    if cat.rules.exchange or vs < vt:
        return "(x,y)"
    return "(y,x)"


@dataclass(frozen=True)
class CosliceCase:
    slice_object: str
    dim: int
    expected: str
    initial: str | None
    size: int

    @property
    def passed(self) -> bool:
        return self.initial == self.expected


@dataclass(frozen=True)
class CosliceReport:
    category: str
    max_dim: int
    cases: tuple[CosliceCase, ...]
    seconds: float

    @property
    def failures(self) -> tuple[CosliceCase, ...]:
        return tuple(c for c in self.cases if not c.passed)

    @property
    def passed(self) -> bool:
        return bool(self.cases) and not self.failures


def coslice_under(cat: CubeCategory, a: FinCat, obj: SliceObject) -> FinCat:
    """The coslice of the inclusion of A at ``obj``: maps from ``obj`` into A."""
    alg = cat.algebra
    objects = a.data["object"]
    elems, keys, proj = [], {}, {}
    for name in a.objects:
        for i, (key, _) in enumerate(slice_morphisms(cat, obj, objects[name])):
            label = f"{name}@{i}"
            elems.append(label)
            keys[label] = key
            proj[label] = name
    rel = []
    for p in elems:
        for q in elems:
            if p == q:
                continue
            for u in a.hom(proj[p], proj[q]):
                if compose_keys(keys[p], a.data["key"][u], obj.dim, alg) == keys[q]:
                    rel.append((p, q))
    dims = {e: a.dim(proj[e]) for e in elems}
    return poset(elems, rel, dims=dims, data={"projection": proj})


def coslice_initial_check(cat: CubeCategory, max_dim: int = 3) -> CosliceReport:
    obstruction_case(cat)
    start = time.perf_counter()
    a = build_A(cat)
    cases = []
    for obj in slice_objects(cat, max_dim):
        b = coslice_under(cat, a, obj)
        init = has_initial(b)
        cases.append(CosliceCase(
            obj.label, obj.dim, expected_initial(cat, obj),
            b.data["projection"][init] if init else None, len(b)))
    return CosliceReport(cat.name, max_dim, tuple(cases), time.perf_counter() - start)


# --- the classification table ------------------------------------------------------------

RULE_ROWS = ("w", "we", "wec")
SIG_COLUMNS = ("", "r", "j", "m", "jm", "jmr")
SIG_SYMBOLS = {"": "∅", "r": "′", "j": "∨", "m": "∧", "jm": "∨∧", "jmr": "∨∧′"}

PUBLISHED_TABLE = {
    ("w", ""): "t", ("w", "r"): "t", ("w", "j"): "st", ("w", "m"): "st", ("w", "jm"): "st", ("w", "jmr"): "st",
    ("we", ""): "t", ("we", "r"): "t", ("we", "j"): "st", ("we", "m"): "st", ("we", "jm"): "st", ("we", "jmr"): "st",
    ("wec", ""): "st", ("wec", "r"): "st", ("wec", "j"): "st", ("wec", "m"): "st", ("wec", "jm"): "st",
}
PUBLISHED_CORNER = {"demorgan": "st", "canonical": "st", "boolean": "st"}

TEST_RULE = "test: separated aspheric interval and a test functor into Cat with final objects"
CARTESIAN_RULE = "strict: finite products (totally aspheric) with a separated representable interval"
CONNECTION_RULE = "strict: a connection is present"
OBSTRUCTION_RULE = "not strict: the slice over □¹×□¹ contains a non-aspheric poset A of the same homotopy type"


@dataclass
class Table2Row:
    rules: str
    signature: str
    theory: str
    verdict: str
    rule_basis: tuple[str, ...]
    published: str
    evidence: dict = field(default_factory=dict)

    @property
    def matches(self) -> bool:
        return self.verdict == self.published

    @property
    def evidence_ok(self) -> bool:
        return all(v.get("passed", True) for v in self.evidence.values() if isinstance(v, dict))

    @property
    def cell(self) -> str:
        th = "" if self.theory == "canonical" else f" [{self.theory}]"
        return f"({self.rules},{SIG_SYMBOLS[self.signature]}){th}"

    def to_dict(self) -> dict:
        return {
            "rules": self.rules, "signature": self.signature, "theory": self.theory,
            "verdict": self.verdict, "published": self.published, "matches": self.matches,
            "rule_basis": list(self.rule_basis), "evidence": self.evidence,
            "evidence_ok": self.evidence_ok,
        }


def classify(cat: CubeCategory) -> tuple[str, tuple[str, ...]]:
    """Verdict (``t`` or ``st``) and the rules it rests on."""
    if not cat.rules.weakening:
        raise ExperimentError("the classification covers languages with weakening only")
    if cat.rules.contraction:
        return "st", (TEST_RULE, CARTESIAN_RULE)
    if cat.signature.has_connection:
        return "st", (TEST_RULE, CONNECTION_RULE)
    return "t", (TEST_RULE, OBSTRUCTION_RULE)


def _evidence(cat: CubeCategory, coslice_dim: int | None) -> dict:
    ev: dict = {"separated_interval": {"passed": separated_interval(cat)}}
    if cat.signature.has_connection:
        return ev
    if cat.rules.contraction:
        col = contraction_collapse(cat)
        ev["contraction_collapse"] = {
            "terminal": col.terminal, "kind": col.terminal_kind,
            "homology": col.homology.profile(), "passed": col.passed,
        }
        return ev
    chk = verify_A_homotopy(cat)
    ev["obstruction_homology"] = {
        "f_vector": list(chk.f_vector), "homology": chk.homology.profile(),
        "betti": list(chk.homology.betti), "expected": chk.expected_space,
        "non_aspheric": chk.homology.reduced_betti != (0,) * len(chk.homology.betti),
        "passed": chk.passed,
    }
    if coslice_dim is not None:
        rep = coslice_initial_check(cat, coslice_dim)
        ev["coslice_initial"] = {
            "cases": len(rep.cases), "failures": len(rep.failures),
            "max_dim": coslice_dim, "passed": rep.passed,
        }
    return ev


def table2_report(coslice_dim: int | None = 3) -> list[Table2Row]:
    """All weakening cells plus the three cartesian full-signature theories."""
    rows = []
    for r in RULE_ROWS:
        for s in SIG_COLUMNS:
            theories = ("demorgan", "canonical", "boolean") if (r, s) == ("wec", "jmr") else ("canonical",)
            for th in theories:
                cat = CubeCategory.parse(r, s, th)
                verdict, basis = classify(cat)
                published = PUBLISHED_CORNER[th] if (r, s) == ("wec", "jmr") else PUBLISHED_TABLE[(r, s)]
                rows.append(Table2Row(r, s, th, verdict, basis, published, _evidence(cat, coslice_dim)))
    return rows


def render_table2(rows: Sequence[Table2Row]) -> str:
    heads = [SIG_SYMBOLS[s] for s in SIG_COLUMNS]
    cells: dict[tuple[str, str], list[str]] = {}
    for row in rows:
        cells.setdefault((row.rules, row.signature), []).append(row.verdict)
    lines = ["a\\b   " + "".join(f"{h:>10}" for h in heads)]
    for r in RULE_ROWS:
        line = f"{r:<6}" + "".join(f"{'/'.join(cells[(r, s)]):>10}" for s in SIG_COLUMNS)
        lines.append(line)
    lines.append("")
    lines.append("corner (wec,∨∧′) lists de Morgan / Kleene / boolean")
    for row in rows:
        status = "PASS" if row.matches and row.evidence_ok else "FAIL"
        notes = []
        for name, ev in row.evidence.items():
            if name == "obstruction_homology":
                notes.append(f"A: H={ev['homology']} ~ {ev['expected']}")
            elif name == "contraction_collapse":
                notes.append(f"A: terminal {ev['terminal']}, H={ev['homology']}")
            elif name == "coslice_initial":
                notes.append(f"coslices n≤{ev['max_dim']}: {ev['cases'] - ev['failures']}/{ev['cases']} initial")
            elif name == "separated_interval":
                notes.append("separated" if ev["passed"] else "NOT separated")
        lines.append(f"{status} {row.cell}: {row.verdict} "
                     f"(published {row.published}); " + "; ".join(notes))
    return "\n".join(lines)


# --- two-element versus three-element equality ------------------------------------------


@dataclass(frozen=True)
class AgreementReport:
    seed: int
    languages: tuple[str, ...]
    pairs: int
    equal_pairs: int
    violations: tuple[str, ...]
    separation: str | None

    @property
    def passed(self) -> bool:
        return not self.violations and self.separation is not None

    def to_dict(self) -> dict:
        return {"seed": self.seed, "languages": list(self.languages), "pairs": self.pairs,
                "equal_pairs": self.equal_pairs, "violations": list(self.violations),
                "separation": self.separation, "passed": self.passed}


def sub_maximal_languages() -> list[Language]:
    """Cartesian languages whose signature is not the full one."""
    return [Language(CARTESIAN, s) for s in ALL_SIGNATURES if s != FULL_SIGNATURE]


def two_three_agreement(
    seed: int = 0,
    pairs: int = 1000,
    languages: Sequence[Language] | None = None,
    max_arity: int = 2,
    max_depth: int = 3,
) -> AgreementReport:
    """Random term pairs on which equality over TWO and over THREE must agree.

    Half of each batch is drawn from a common TWO-class so that equal pairs
    actually occur.
    """
    rng = random.Random(seed)
    langs = list(languages) if languages is not None else sub_maximal_languages()
    violations: list[str] = []
    n_equal = total = 0
    for lang in langs:
        for i in range(pairs):
            s = None
            while s is None:
                arity = rng.randint(0, max_arity)
                try:
                    s = random_term(rng, lang, arity, max_depth)
                except TermError:
                    # without weakening a single term cannot use a large context
                    pass
            t = random_term(rng, lang, arity, max_depth)
            if i % 2:
                want = table_key(s, TWO, arity)
                for _ in range(200):
                    if table_key(t, TWO, arity) == want:
                        break
                    t = random_term(rng, lang, arity, max_depth)
            two = counterexample(s, t, arity, TWO) is None
            three = counterexample(s, t, arity, THREE) is None
            n_equal += two
            total += 1
            if two != three:
                violations.append(f"{lang}: {format_term(s)} vs {format_term(t)} (arity {arity})")
    full = FULL_LANGUAGE
    lhs, rhs = parse_term("x1 ∧ x1′", 1), ZERO
    sep = None
    if counterexample(lhs, rhs, 1, TWO) is None:
        cex = counterexample(lhs, rhs, 1, decision_algebra(full))
        if cex is not None:
            sep = f"x1 ∧ x1′ ≠ 0 in {full}: {format_assignment(cex, THREE)}"
    return AgreementReport(seed, tuple(str(lang) for lang in langs), total, n_equal, tuple(violations), sep)
