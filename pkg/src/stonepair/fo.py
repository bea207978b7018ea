"""First-order logic over finite relational structures.

Signatures are finite lists of relation symbols with arities; structures
interpret each relation as a set of tuples over a finite universe.  Formulas
are immutable ASTs with equality as a built-in logical symbol.  Evaluation is
Tarskian (``satisfies``); counting of satisfying assignments is exact and
enumerates the full assignment space as a dense boolean tensor, one cell per
assignment, with no symmetry reduction.

Grammar (precedence low to high: ``->``, ``|``, ``&``, ``!``; quantifiers
scope maximally to the right):

    formula  := or ('->' formula)?
    or       := and ('|' and)*
    and      := unary ('&' unary)*
    unary    := '!' unary | 'forall' v '.' formula | 'exists' v '.' formula | atom
    atom     := '(' formula ')' | 'true' | 'false' | name '(' v, ... ')' | v '=' w
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import DomainError, ParseError


@dataclass(frozen=True)
class Signature:
    """Relation symbols with arities; names unique, arities at least 1."""

    relations: tuple[tuple[str, int], ...]

    def __post_init__(self) -> None:
        names = [name for name, _ in self.relations]
        if len(set(names)) != len(names):
            raise DomainError("relation names must be unique")
        for name, arity in self.relations:
            if arity < 1:
                raise DomainError(f"relation {name} must have arity >= 1")

    def arity(self, name: str) -> int:
        for rel, arity in self.relations:
            if rel == name:
                return arity
        raise DomainError(f"unknown relation {name!r}")

    def has(self, name: str) -> bool:
        return any(rel == name for rel, _ in self.relations)


@dataclass(frozen=True)
class FiniteStructure:
    """A finite relational structure: universe {0..size-1} plus relations."""

    signature: Signature
    size: int
    relations: dict[str, frozenset[tuple[int, ...]]]

    def __post_init__(self) -> None:
        if self.size < 1:
            raise DomainError("universe must be nonempty")
        interp = dict(self.relations)
        for name, arity in self.signature.relations:
            tuples = frozenset(tuple(t) for t in interp.get(name, frozenset()))
            for t in tuples:
                if len(t) != arity:
                    raise DomainError(f"tuple {t} has wrong arity for {name}/{arity}")
                if not all(0 <= v < self.size for v in t):
                    raise DomainError(f"tuple {t} out of range for universe {self.size}")
            interp[name] = tuples
        extra = set(interp) - {name for name, _ in self.signature.relations}
        if extra:
            raise DomainError(f"relations not in signature: {sorted(extra)}")
        object.__setattr__(self, "relations", interp)


# -- formulas -------------------------------------------------------------------


class Formula:
    """Base class for formula AST nodes."""

    def __str__(self) -> str:
        return format_formula(self)


@dataclass(frozen=True)
class Const(Formula):
    value: bool


TRUE = Const(True)
FALSE = Const(False)


@dataclass(frozen=True)
class Atom(Formula):
    rel: str
    args: tuple[str, ...]


@dataclass(frozen=True)
class Eq(Formula):
    left: str
    right: str


@dataclass(frozen=True)
class Not(Formula):
    body: Formula


@dataclass(frozen=True)
class And(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Or(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Implies(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Exists(Formula):
    var: str
    body: Formula


@dataclass(frozen=True)
class Forall(Formula):
    var: str
    body: Formula


def desugar(phi: Formula) -> Formula:
    """Expand implication into negation and disjunction."""
    match phi:
        case Implies(left, right):
            return Or(Not(desugar(left)), desugar(right))
        case Not(body):
            return Not(desugar(body))
        case And(left, right):
            return And(desugar(left), desugar(right))
        case Or(left, right):
            return Or(desugar(left), desugar(right))
        case Exists(var, body):
            return Exists(var, desugar(body))
        case Forall(var, body):
            return Forall(var, desugar(body))
        case _:
            return phi


def free_vars(phi: Formula) -> tuple[str, ...]:
    """Free variables in first-occurrence order."""
    out: list[str] = []

    def walk(node: Formula, bound: frozenset[str]) -> None:
        match node:
            case Atom(_, args):
                for v in args:
                    if v not in bound and v not in out:
                        out.append(v)
            case Eq(left, right):
                for v in (left, right):
                    if v not in bound and v not in out:
                        out.append(v)
            case Not(body):
                walk(body, bound)
            case And(l, r) | Or(l, r) | Implies(l, r):
                walk(l, bound)
                walk(r, bound)
            case Exists(var, body) | Forall(var, body):
                walk(body, bound | {var})
            case Const(_):
                pass

    walk(phi, frozenset())
    return tuple(out)


def all_vars(phi: Formula) -> frozenset[str]:
    match phi:
        case Atom(_, args):
            return frozenset(args)
        case Eq(left, right):
            return frozenset((left, right))
        case Not(body):
            return all_vars(body)
        case And(l, r) | Or(l, r) | Implies(l, r):
            return all_vars(l) | all_vars(r)
        case Exists(var, body) | Forall(var, body):
            return all_vars(body) | {var}
        case _:
            return frozenset()


def _rename_free(phi: Formula, old: str, new: str) -> Formula:
    """Rename free occurrences of ``old`` to ``new`` (capture not checked;
    callers pass a fresh name)."""
    match phi:
        case Atom(rel, args):
            return Atom(rel, tuple(new if v == old else v for v in args))
        case Eq(left, right):
            return Eq(new if left == old else left, new if right == old else right)
        case Not(body):
            return Not(_rename_free(body, old, new))
        case And(l, r):
            return And(_rename_free(l, old, new), _rename_free(r, old, new))
        case Or(l, r):
            return Or(_rename_free(l, old, new), _rename_free(r, old, new))
        case Implies(l, r):
            return Implies(_rename_free(l, old, new), _rename_free(r, old, new))
        case Exists(var, body):
            if var == old:
                return phi
            return Exists(var, _rename_free(body, old, new))
        case Forall(var, body):
            if var == old:
                return phi
            return Forall(var, _rename_free(body, old, new))
        case _:
            return phi


def alpha_normal(phi: Formula) -> Formula:
    """Rename bound variables to a canonical sequence, for syntactic
    comparison up to alpha-equivalence."""
    counter = itertools.count()

    def walk(node: Formula) -> Formula:
        match node:
            case Exists(var, body) | Forall(var, body):
                fresh = f"_b{next(counter)}"
                renamed = walk(_rename_free(body, var, fresh))
                ctor = Exists if isinstance(node, Exists) else Forall
                return ctor(fresh, renamed)
            case Not(body):
                return Not(walk(body))
            case And(l, r):
                return And(walk(l), walk(r))
            case Or(l, r):
                return Or(walk(l), walk(r))
            case Implies(l, r):
                return Implies(walk(l), walk(r))
            case _:
                return node

    return walk(phi)


def format_formula(phi: Formula) -> str:
    match phi:
        case Const(value):
            return "true" if value else "false"
        case Atom(rel, args):
            return f"{rel}({', '.join(args)})"
        case Eq(left, right):
            return f"{left} = {right}"
        case Not(body):
            return f"!({format_formula(body)})"
        case And(l, r):
            return f"({format_formula(l)} & {format_formula(r)})"
        case Or(l, r):
            return f"({format_formula(l)} | {format_formula(r)})"
        case Implies(l, r):
            return f"({format_formula(l)} -> {format_formula(r)})"
        case Exists(var, body):
            # parenthesised so the maximal-right scope survives re-parsing
            return f"(exists {var}. {format_formula(body)})"
        case Forall(var, body):
            return f"(forall {var}. {format_formula(body)})"
    raise DomainError(f"not a formula node: {phi!r}")


# -- parsing --------------------------------------------------------------------

_TOKEN_RE = re.compile(
    r"\s*(?:(?P<arrow>->)|(?P<leq><=)|(?P<punct>[()!,&|=.])|(?P<ident>[A-Za-z_][A-Za-z0-9_]*))"
)
_KEYWORDS = {"forall", "exists", "true", "false"}


@dataclass(frozen=True)
class _Token:
    kind: str
    text: str
    line: int
    column: int


def _tokenize(text: str) -> list[_Token]:
    tokens: list[_Token] = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None or m.end() == pos:
            stripped = text[pos:].lstrip()
            if not stripped:
                break
            bad_at = len(text) - len(stripped)
            line = text.count("\n", 0, bad_at) + 1
            column = bad_at - (text.rfind("\n", 0, bad_at) + 1) + 1
            raise ParseError(f"unexpected character {stripped[0]!r}", line, column)
        start = m.start(m.lastgroup)
        line = text.count("\n", 0, start) + 1
        column = start - (text.rfind("\n", 0, start) + 1) + 1
        value = m.group(m.lastgroup)
        kind = m.lastgroup
        if kind == "ident" and value in _KEYWORDS:
            kind = value
        tokens.append(_Token(kind, value, line, column))
        pos = m.end()
    tokens.append(_Token("end", "", text.count("\n") + 1, len(text) + 1))
    return tokens


class _FormulaParser:
    def __init__(self, text: str, signature: Signature):
        self.tokens = _tokenize(text)
        self.signature = signature
        self.pos = 0

    def peek(self) -> _Token:
        return self.tokens[self.pos]

    def advance(self) -> _Token:
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expect(self, kind: str, what: str) -> _Token:
        tok = self.peek()
        if tok.kind != kind:
            raise ParseError(
                f"expected {what}, found {tok.text!r}" if tok.text else f"expected {what}",
                tok.line,
                tok.column,
            )
        return self.advance()

    def parse(self) -> Formula:
        phi = self.implies()
        tok = self.peek()
        if tok.kind != "end":
            raise ParseError(f"unexpected {tok.text!r}", tok.line, tok.column)
        return phi

    def implies(self) -> Formula:
        left = self.disjunction()
        if self.peek().kind == "arrow":
            self.advance()
            return Implies(left, self.implies())
        return left

    def disjunction(self) -> Formula:
        left = self.conjunction()
        while self.peek().kind == "punct" and self.peek().text == "|":
            self.advance()
            left = Or(left, self.conjunction())
        return left

    def conjunction(self) -> Formula:
        left = self.unary()
        while self.peek().kind == "punct" and self.peek().text == "&":
            self.advance()
            left = And(left, self.unary())
        return left

    def unary(self) -> Formula:
        tok = self.peek()
        if tok.kind == "punct" and tok.text == "!":
            self.advance()
            return Not(self.unary())
        if tok.kind in ("forall", "exists"):
            self.advance()
            var = self.expect("ident", "a variable name")
            dot = self.peek()
            if dot.kind != "punct" or dot.text != ".":
                raise ParseError("expected '.' after quantified variable", dot.line, dot.column)
            self.advance()
            body = self.implies()  # maximal right scope
            ctor = Forall if tok.kind == "forall" else Exists
            return ctor(var.text, body)
        return self.atom()

    def atom(self) -> Formula:
        tok = self.peek()
        if tok.kind == "punct" and tok.text == "(":
            self.advance()
            phi = self.implies()
            closing = self.peek()
            if closing.kind != "punct" or closing.text != ")":
                raise ParseError("expected ')'", closing.line, closing.column)
            self.advance()
            return phi
        if tok.kind == "true":
            self.advance()
            return TRUE
        if tok.kind == "false":
            self.advance()
            return FALSE
        if tok.kind == "ident":
            name = self.advance()
            nxt = self.peek()
            if nxt.kind == "punct" and nxt.text == "(":
                self.advance()
                args = [self.expect("ident", "a variable name").text]
                while self.peek().kind == "punct" and self.peek().text == ",":
                    self.advance()
                    args.append(self.expect("ident", "a variable name").text)
                closing = self.peek()
                if closing.kind != "punct" or closing.text != ")":
                    raise ParseError("expected ')'", closing.line, closing.column)
                self.advance()
                if not self.signature.has(name.text):
                    raise ParseError(f"unknown relation {name.text!r}", name.line, name.column)
                arity = self.signature.arity(name.text)
                if len(args) != arity:
                    raise ParseError(
                        f"relation {name.text} expects {arity} arguments, got {len(args)}",
                        name.line,
                        name.column,
                    )
                return Atom(name.text, tuple(args))
            if nxt.kind == "punct" and nxt.text == "=":
                self.advance()
                rhs = self.expect("ident", "a variable name")
                return Eq(name.text, rhs.text)
            raise ParseError(
                f"expected '(' or '=' after {name.text!r}", nxt.line, nxt.column
            )
        raise ParseError(
            f"expected a formula, found {tok.text!r}" if tok.text else "expected a formula",
            tok.line,
            tok.column,
        )


def parse_formula(text: str, signature: Signature) -> Formula:
    return _FormulaParser(text, signature).parse()


# -- evaluation -----------------------------------------------------------------


def satisfies(A: FiniteStructure, alpha: Mapping[str, int], phi: Formula) -> bool:
    """Tarskian satisfaction; quantifiers range over the universe."""
    missing = [v for v in free_vars(phi) if v not in alpha]
    if missing:
        raise DomainError(f"assignment does not cover {missing}")
    return _sat_at(A, dict(alpha), desugar(phi))


def _sat_at(A: FiniteStructure, alpha: dict[str, int], phi: Formula) -> bool:
    match phi:
        case Const(value):
            return value
        case Atom(rel, args):
            return tuple(alpha[v] for v in args) in A.relations[rel]
        case Eq(left, right):
            return alpha[left] == alpha[right]
        case Not(body):
            return not _sat_at(A, alpha, body)
        case And(l, r):
            return _sat_at(A, alpha, l) and _sat_at(A, alpha, r)
        case Or(l, r):
            return _sat_at(A, alpha, l) or _sat_at(A, alpha, r)
        case Exists(var, body):
            return any(_sat_at(A, {**alpha, var: c}, body) for c in range(A.size))
        case Forall(var, body):
            return all(_sat_at(A, {**alpha, var: c}, body) for c in range(A.size))
    raise DomainError(f"not an evaluable node: {phi!r}")


def _fresh_name(taken: Iterable[str]) -> str:
    taken = set(taken)
    for i in itertools.count():
        name = f"_q{i}"
        if name not in taken:
            return name


def _sat_tensor(A: FiniteStructure, phi: Formula, ctx: tuple[str, ...]) -> np.ndarray:
    """Boolean tensor over the full assignment space of ``ctx``.

    Cell (c_0, ..., c_{n-1}) is True iff the assignment ctx_i -> c_i
    satisfies ``phi``.  Shape is (size,) * len(ctx); a sentence yields a
    0-dimensional tensor.
    """
    N = A.size
    shape = (N,) * len(ctx)
    match phi:
        case Const(value):
            return np.full(shape, value, dtype=bool)
        case Atom(rel, args):
            arity = len(args)
            base = np.zeros((N,) * arity, dtype=bool)
            for t in A.relations[rel]:
                base[t] = True
            grids = np.indices(shape)
            return base[tuple(grids[ctx.index(v)] for v in args)]
        case Eq(left, right):
            grids = np.indices(shape)
            return grids[ctx.index(left)] == grids[ctx.index(right)]
        case Not(body):
            return ~_sat_tensor(A, body, ctx)
        case And(l, r):
            return _sat_tensor(A, l, ctx) & _sat_tensor(A, r, ctx)
        case Or(l, r):
            return _sat_tensor(A, l, ctx) | _sat_tensor(A, r, ctx)
        case Exists(var, body) | Forall(var, body):
            if var in ctx:
                fresh = _fresh_name(set(ctx) | all_vars(body))
                body = _rename_free(body, var, fresh)
                var = fresh
            inner = _sat_tensor(A, body, ctx + (var,))
            if isinstance(phi, Exists):
                return inner.any(axis=-1)
            return inner.all(axis=-1)
    raise DomainError(f"not an evaluable node: {phi!r}")


def _check_context(phi: Formula, context: Sequence[str]) -> tuple[str, ...]:
    ctx = tuple(context)
    if len(set(ctx)) != len(ctx):
        raise DomainError("context variables must be distinct")
    missing = [v for v in free_vars(phi) if v not in ctx]
    if missing:
        raise DomainError(f"context misses free variables {missing}")
    return ctx


def count_satisfying(A: FiniteStructure, phi: Formula, context: Sequence[str]) -> int:
    """Number of assignments of ``context`` into A satisfying ``phi``.

    The total assignment space has size ``A.size ** len(context)``; the count
    is independent of the ordering of the context.
    """
    ctx = _check_context(phi, context)
    return int(_sat_tensor(A, desugar(phi), ctx).sum())


def satisfying_set(
    A: FiniteStructure, phi: Formula, context: Sequence[str]
) -> frozenset[tuple[int, ...]]:
    """The set of satisfying assignments, as tuples aligned with ``context``."""
    ctx = _check_context(phi, context)
    tensor = _sat_tensor(A, desugar(phi), ctx)
    if tensor.ndim == 0:
        return frozenset([()] if bool(tensor) else [])
    return frozenset(tuple(int(v) for v in row) for row in np.argwhere(tensor))


# -- the running family of example posets -----------------------------------------

POSET_SIGNATURE = Signature((("lt", 2),))


def gen_example_structure(n: int) -> FiniteStructure:
    """The n-th structure of the alternating chain family.

    Odd n = 2k-1 gives a (k+1)-element chain; even n = 2k gives a
    (k+1)-element chain plus one isolated point.  The relation ``lt`` is the
    strict order: transitive and irreflexive, holding for every comparable
    pair, not just covers.
    """
    if n < 1:
        raise DomainError("family index starts at 1")
    k = (n + 1) // 2
    chain_len = k + 1
    size = chain_len + (1 if n % 2 == 0 else 0)
    tuples = frozenset(
        (i, j) for i in range(chain_len) for j in range(i + 1, chain_len)
    )
    return FiniteStructure(POSET_SIGNATURE, size, {"lt": tuples})


def maximal_not_maximum() -> Formula:
    """The running example formula over one free variable x: x is maximal in
    the strict order but not its maximum."""
    return And(
        Forall("y", Not(Atom("lt", ("x", "y")))),
        Exists("z", And(Not(Atom("lt", ("z", "x"))), Not(Eq("z", "x")))),
    )


# -- structure text format ---------------------------------------------------------

_STRUCT_TUPLE_RE = re.compile(r"\(\s*(\d+(?:\s*,\s*\d+)*)\s*\)")


def parse_structure(text: str) -> FiniteStructure:
    """Parse the structure file format:

        signature: lt/2
        universe: 4
        lt = {(0,1),(0,2),(1,2)}

    Comments start with '#'.  Relations omitted from the body are empty.
    """
    signature: Signature | None = None
    size: int | None = None
    bodies: dict[str, frozenset[tuple[int, ...]]] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("signature:"):
            if signature is not None:
                raise ParseError("duplicate signature line", line=lineno, column=1)
            rels = []
            for tok in line[len("signature:"):].split(","):
                tok = tok.strip()
                if not tok:
                    continue
                m = re.fullmatch(r"([A-Za-z_][A-Za-z0-9_]*)\s*/\s*(\d+)", tok)
                if m is None:
                    raise ParseError(
                        f"expected 'name/arity' in signature, got {tok!r}",
                        line=lineno,
                        column=1,
                    )
                rels.append((m.group(1), int(m.group(2))))
            try:
                signature = Signature(tuple(rels))
            except DomainError as exc:
                raise ParseError(str(exc), line=lineno, column=1) from exc
        elif line.startswith("universe:"):
            if size is not None:
                raise ParseError("duplicate universe line", line=lineno, column=1)
            body = line[len("universe:"):].strip()
            if not body.isdigit():
                raise ParseError("universe must be a nonnegative integer", line=lineno, column=1)
            size = int(body)
        elif "=" in line:
            name, body = (part.strip() for part in line.split("=", 1))
            if not re.fullmatch(r"[A-Za-z_][A-Za-z0-9_]*", name):
                raise ParseError(f"bad relation name {name!r}", line=lineno, column=1)
            if name in bodies:
                raise ParseError(f"duplicate relation body for {name}", line=lineno, column=1)
            if not (body.startswith("{") and body.endswith("}")):
                raise ParseError("relation body must be {...}", line=lineno, column=1)
            inner = body[1:-1].strip()
            tuples = set()
            if inner:
                consumed = 0
                for m in _STRUCT_TUPLE_RE.finditer(inner):
                    tuples.add(tuple(int(v) for v in m.group(1).split(",")))
                    consumed = m.end()
                leftover = inner[consumed:].strip().strip(",").strip()
                if not tuples or leftover:
                    raise ParseError("malformed tuple set", line=lineno, column=1)
            bodies[name] = frozenset(tuples)
        else:
            raise ParseError(f"unrecognised line {line!r}", line=lineno, column=1)
    if signature is None:
        raise ParseError("missing signature line", line=1, column=1)
    if size is None:
        raise ParseError("missing universe line", line=1, column=1)
    try:
        return FiniteStructure(signature, size, bodies)
    except DomainError as exc:
        raise ParseError(str(exc), line=1, column=1) from exc


def format_structure(A: FiniteStructure) -> str:
    lines = [
        "signature: " + ", ".join(f"{name}/{arity}" for name, arity in A.signature.relations),
        f"universe: {A.size}",
    ]
    for name, _ in A.signature.relations:
        body = ",".join(
            "(" + ",".join(map(str, t)) + ")" for t in sorted(A.relations[name])
        )
        lines.append(f"{name} = {{{body}}}")
    return "\n".join(lines) + "\n"
