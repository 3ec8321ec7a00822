"""
Construction expressions: the small language catalog files and the CLI use to name groups.

Grammar:

    expr    := 'C' INT | 'D' INT | 'Q' INT | 'S' INT | 'A' INT | 'E' INT INT
             | 'X' '(' expr ',' expr ')'
             | 'SD' '(' expr ',' expr ';' action ')'
    action  := <empty> | block ('|' block)*
    block   := <empty> | mapping (',' mapping)*
    mapping := GEN '->' word
    word    := '1' | factor ('*' factor)*
    factor  := GEN ['^' ['-'] INT]
    GEN     := 'a' INT            (generators of the normal factor, 0-based)

`D n` has order 2n and `Q n` order 4n. Each action block describes one
generator of the acting factor; normal generators it does not mention are
fixed. An empty action means the acting factor has no generators.
"""
import re
from dataclasses import dataclass
from typing import List, Tuple, Union

from sympy import isprime

from group_constructors import (
    GeneratorWord, InvalidActionError, alternating, cyclic, dicyclic, dihedral,
    direct_product, elementary_abelian, semidirect_product, symmetric,
)
from perm_group import DEFAULT_CAP, Group


class ExpressionSyntaxError(ValueError):
    """Raised for malformed construction expressions; column is 1-based."""

    def __init__(self, message: str, column: int):
        super().__init__(f"{message} (column {column})")
        self.message = message
        self.column = column


@dataclass(frozen=True)
class Cyclic:
    n: int


@dataclass(frozen=True)
class Dihedral:
    n: int


@dataclass(frozen=True)
class Dicyclic:
    n: int


@dataclass(frozen=True)
class Sym:
    n: int


@dataclass(frozen=True)
class Alt:
    n: int


@dataclass(frozen=True)
class ElemAbelian:
    p: int
    k: int


@dataclass(frozen=True)
class DirectProduct:
    left: 'ConstructionExpr'
    right: 'ConstructionExpr'


ActionBlock = Tuple[Tuple[int, GeneratorWord], ...]


@dataclass(frozen=True)
class Semidirect:
    normal: 'ConstructionExpr'
    acting: 'ConstructionExpr'
    action: Tuple[ActionBlock, ...]


ConstructionExpr = Union[Cyclic, Dihedral, Dicyclic, Sym, Alt, ElemAbelian, DirectProduct, Semidirect]

_TOKEN_RE = re.compile(r'\s*(?:(?P<gen>a\d+)|(?P<kw>SD|[CDQSAEX])|(?P<int>\d+)|(?P<arrow>->)|(?P<punct>[(),;|*^-]))')

_UNARY = {'C': (Cyclic, 1), 'D': (Dihedral, 2), 'Q': (Dicyclic, 2), 'S': (Sym, 1), 'A': (Alt, 1)}


@dataclass(frozen=True)
class _Token:
    kind: str
    text: str
    column: int


def _tokenize(text: str) -> List[_Token]:
    tokens = []
    position = 0
    while position < len(text):
        if text[position:].strip() == '':
            break
        match = _TOKEN_RE.match(text, position)
        if not match:
            column = position + len(text[position:]) - len(text[position:].lstrip()) + 1
            raise ExpressionSyntaxError(f"Unexpected character {text[column - 1]!r}", column)
        kind = match.lastgroup
        tokens.append(_Token(kind, match.group(kind), match.start(kind) + 1))
        position = match.end()
    tokens.append(_Token('end', '', len(text) + 1))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.tokens = _tokenize(text)
        self.position = 0

    @property
    def current(self) -> _Token:
        return self.tokens[self.position]

    def advance(self) -> _Token:
        token = self.current
        self.position += 1
        return token

    def at(self, text: str) -> bool:
        return self.current.kind in ('punct', 'arrow') and self.current.text == text

    def expect(self, text: str) -> _Token:
        if not self.at(text):
            found = self.current.text or 'end of input'
            raise ExpressionSyntaxError(f"Expected {text!r}, found {found!r}", self.current.column)
        return self.advance()

    def integer(self, what: str) -> Tuple[int, int]:
        token = self.current
        if token.kind != 'int':
            found = token.text or 'end of input'
            raise ExpressionSyntaxError(f"Expected {what}, found {found!r}", token.column)
        self.advance()
        return int(token.text), token.column

    def parse(self) -> ConstructionExpr:
        expr = self.expr()
        if self.current.kind != 'end':
            raise ExpressionSyntaxError(f"Unexpected trailing {self.current.text!r}", self.current.column)
        return expr

    def expr(self) -> ConstructionExpr:
        token = self.current
        if token.kind != 'kw':
            found = token.text or 'end of input'
            raise ExpressionSyntaxError(f"Expected a group constructor, found {found!r}", token.column)
        self.advance()

        if token.text in _UNARY:
            node, minimum = _UNARY[token.text]
            n, column = self.integer("a size parameter")
            if n < minimum:
                raise ExpressionSyntaxError(f"'{token.text}' needs a parameter of at least {minimum}", column)
            return node(n)
        if token.text == 'E':
            p, column = self.integer("a prime")
            if not isprime(p):
                raise ExpressionSyntaxError(f"'E' needs a prime, got {p}", column)
            k, column = self.integer("a rank")
            if k < 1:
                raise ExpressionSyntaxError("'E' needs a rank of at least 1", column)
            return ElemAbelian(p, k)

        self.expect('(')
        left = self.expr()
        self.expect(',')
        right = self.expr()
        if token.text == 'X':
            self.expect(')')
            return DirectProduct(left, right)
        self.expect(';')
        action = self.action()
        self.expect(')')
        return Semidirect(left, right, action)

    def action(self) -> Tuple[ActionBlock, ...]:
        if self.at(')'):
            return ()
        blocks = [self.block()]
        while self.at('|'):
            self.advance()
            blocks.append(self.block())
        return tuple(blocks)

    def block(self) -> ActionBlock:
        if self.at('|') or self.at(')'):
            return ()
        mappings = [self.mapping()]
        while self.at(','):
            self.advance()
            mappings.append(self.mapping())
        seen = set()
        for index, _ in mappings:
            if index in seen:
                raise ExpressionSyntaxError(f"Generator a{index} mapped twice", self.current.column)
            seen.add(index)
        return tuple(mappings)

    def generator(self) -> int:
        token = self.current
        if token.kind != 'gen':
            found = token.text or 'end of input'
            raise ExpressionSyntaxError(f"Expected a generator like a0, found {found!r}", token.column)
        self.advance()
        return int(token.text[1:])

    def mapping(self) -> Tuple[int, GeneratorWord]:
        index = self.generator()
        self.expect('->')
        return index, self.word()

    def word(self) -> GeneratorWord:
        if self.current.kind == 'int':
            value, column = self.integer("1")
            if value != 1:
                raise ExpressionSyntaxError("Only 1 may stand for the identity word", column)
            return ()
        factors = [self.factor()]
        while self.at('*'):
            self.advance()
            factors.append(self.factor())
        return tuple(factors)

    def factor(self) -> Tuple[int, int]:
        index = self.generator()
        if not self.at('^'):
            return index, 1
        self.advance()
        sign = 1
        if self.at('-'):
            self.advance()
            sign = -1
        exponent, _ = self.integer("an exponent")
        return index, sign * exponent


def parse_expr(text: str) -> ConstructionExpr:
    """
    Parse a construction expression.

    Raises:
        ExpressionSyntaxError: With the 1-based column of the offending token
    """
    return _Parser(text).parse()


def format_word(word: GeneratorWord) -> str:
    if not word:
        return '1'
    return '*'.join(f"a{index}" if exponent == 1 else f"a{index}^{exponent}" for index, exponent in word)


def format_expr(expr: ConstructionExpr) -> str:
    """Canonical text for an expression; parse_expr(format_expr(e)) == e."""
    if isinstance(expr, Cyclic):
        return f"C {expr.n}"
    if isinstance(expr, Dihedral):
        return f"D {expr.n}"
    if isinstance(expr, Dicyclic):
        return f"Q {expr.n}"
    if isinstance(expr, Sym):
        return f"S {expr.n}"
    if isinstance(expr, Alt):
        return f"A {expr.n}"
    if isinstance(expr, ElemAbelian):
        return f"E {expr.p} {expr.k}"
    if isinstance(expr, DirectProduct):
        return f"X({format_expr(expr.left)}, {format_expr(expr.right)})"
    if isinstance(expr, Semidirect):
        blocks = " | ".join(
            ", ".join(f"a{index}->{format_word(word)}" for index, word in block)
            for block in expr.action)
        return f"SD({format_expr(expr.normal)}, {format_expr(expr.acting)}; {blocks})"
    raise TypeError(f"Not a construction expression: {expr!r}")


def _dense_action(block: ActionBlock, generator_count: int) -> List[GeneratorWord]:
    images: List[GeneratorWord] = [((i, 1),) for i in range(generator_count)]
    for index, word in block:
        if index >= generator_count:
            raise InvalidActionError(
                f"Action maps a{index} but the normal factor has {generator_count} generators")
        images[index] = word
    return images


def build(expr: ConstructionExpr, cap: int = DEFAULT_CAP) -> Group:
    """
    Build the group an expression names.

    Raises:
        InvalidActionError: If a semidirect action is invalid
        GroupSizeError: If any intermediate group exceeds cap
    """
    if isinstance(expr, Cyclic):
        return cyclic(expr.n, cap)
    if isinstance(expr, Dihedral):
        return dihedral(expr.n, cap)
    if isinstance(expr, Dicyclic):
        return dicyclic(expr.n, cap)
    if isinstance(expr, Sym):
        return symmetric(expr.n, cap)
    if isinstance(expr, Alt):
        return alternating(expr.n, cap)
    if isinstance(expr, ElemAbelian):
        return elementary_abelian(expr.p, expr.k, cap)
    if isinstance(expr, DirectProduct):
        return direct_product(build(expr.left, cap), build(expr.right, cap), cap)
    if isinstance(expr, Semidirect):
        normal = build(expr.normal, cap)
        acting = build(expr.acting, cap)
        action = [_dense_action(block, len(normal.generators)) for block in expr.action]
        return semidirect_product(normal, acting, action, cap)
    raise TypeError(f"Not a construction expression: {expr!r}")


def build_group(text: str, cap: int = DEFAULT_CAP) -> Group:
    return build(parse_expr(text), cap)

