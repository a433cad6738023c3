"""
Text formats: the term grammar and the line-oriented `.thy` theory format.

Terms are written in prefix form `op(arg,...)` (the canonical form produced by
`utils.term.render`); infix binary operators, prefix unary `-t` and parentheses
are accepted as well. Rational parameters are written `op@{num/den}`.

A theory file looks like::

    theory Monoid {
      op * : 2;
      const 1;
      eq unitL: *(1,x) = x;
      eq unitR: *(x,1) = x;
      eq assoc: *(*(x,y),z) = *(x,*(y,z));
      oracle builtin UA;
    }
"""
# Standard Library
import re
import json
from dataclasses import dataclass
from typing import Optional, get_args

# My Library
from .errors import ParseError, MalformedTermError
from .annotation import MetaProperty, OutputFormat
from .term import (Term, Var, App, Equation, Signature, OperationSymbol,
                   parse_param, render, format_param)


VOCABULARY: tuple[str, ...] = get_args(MetaProperty)

SYMBOL_CHARS = "*+∨∧⊤⊥-−·&|~"

TIGHT = {"*", "∧", "·", "&"}

_TOKEN = re.compile(r"""
    (?P<space>\s+)
  | (?P<box>\[)
  | (?P<punct>[(),])
  | (?P<name>[A-Za-z0-9_]+'*)
  | (?P<sym>[""" + re.escape(SYMBOL_CHARS) + r"""]'*)
""", re.VERBOSE)


@dataclass(frozen=True)
class TheoryPresentation:
    name: str
    signature: Signature
    equations: tuple[Equation, ...]
    asserts: tuple[str, ...] = ()
    backend: str = "generic"
    exclude_ops: tuple[str, ...] = ()

    def equation(self, name: str) -> Equation:
        for eq in self.equations:
            if eq.name == name:
                return eq
        raise KeyError(name)


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    offset: int
    param: object = None


def _position(source: str, offset: int) -> tuple[int, int]:
    line = source.count("\n", 0, offset) + 1
    column = offset - (source.rfind("\n", 0, offset) + 1) + 1
    return line, column


def _tokenize(text: str, base: int, source: str) -> list[Token]:
    tokens: list[Token] = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", *_position(source, base + pos))
        kind = m.lastgroup
        if kind == "space":
            pos = m.end()
            continue
        if kind == "box":
            depth, end = 0, pos
            while end < len(text):
                depth += {"[": 1, "]": -1}.get(text[end], 0)
                end += 1
                if depth == 0:
                    break
            if depth != 0:
                raise ParseError("unbalanced '['", *_position(source, base + pos))
            tokens.append(Token("box", text[pos:end], base + pos))
            pos = end
            continue
        token = Token(kind, m.group(), base + pos)
        pos = m.end()
        if kind in ("name", "sym") and text.startswith("@{", pos):
            close = text.find("}", pos)
            if close < 0:
                raise ParseError("unterminated parameter", *_position(source, base + pos))
            try:
                param = parse_param(text[pos + 2:close])
            except MalformedTermError as e:
                raise ParseError(str(e), *_position(source, base + pos)) from e
            token = Token("op", token.text, token.offset, param)
            pos = close + 1
        tokens.append(token)
    return tokens


class _TermParser:
    def __init__(self, sig: Signature, tokens: list[Token], source: str) -> None:
        self.sig = sig
        self.tokens = tokens
        self.source = source
        self.pos = 0

    def error(self, message: str, token: Optional[Token] = None) -> ParseError:
        if token is None:
            token = self.tokens[self.pos] if self.pos < len(self.tokens) else (
                self.tokens[-1] if self.tokens else Token("eof", "", 0))
        return ParseError(message, *_position(self.source, token.offset))

    def peek(self, ahead: int = 0) -> Optional[Token]:
        index = self.pos + ahead
        return self.tokens[index] if index < len(self.tokens) else None

    def take(self) -> Token:
        token = self.peek()
        if token is None:
            raise self.error("unexpected end of term")
        self.pos += 1
        return token

    def expect(self, text: str) -> None:
        token = self.take()
        if token.kind != "punct" or token.text != text:
            raise self.error(f"expected {text!r}", token)

    def arity_of(self, token: Token) -> Optional[int]:
        if token.kind == "op":
            return self.sig.family_arity(token.text)
        return self.sig.arity(token.text)

    def symbol(self, token: Token, arity: int) -> OperationSymbol:
        declared = self.arity_of(token)
        label = token.text if token.kind != "op" else f"{token.text}@{{{format_param(token.param)}}}"
        if declared is None:
            raise self.error(f"unknown symbol {label!r}", token)
        if declared != arity:
            raise self.error(f"arity mismatch: {label} declared {declared}, used with {arity}", token)
        return OperationSymbol(token.text, arity, token.param if token.kind == "op" else None)

    def is_infix(self, token: Optional[Token]) -> bool:
        if token is None or token.kind not in ("sym", "op"):
            return False
        return self.arity_of(token) == 2

    @staticmethod
    def precedence(token: Token) -> int:
        return 2 if token.text.rstrip("'") in TIGHT else 1

    def parse(self) -> Term:
        term = self.expression(1)
        if self.peek() is not None:
            raise self.error(f"unexpected token {self.peek().text!r}")
        return term

    def expression(self, min_prec: int) -> Term:
        left = self.unary()
        while self.is_infix(self.peek()) and self.precedence(self.peek()) >= min_prec:
            token = self.take()
            right = self.expression(self.precedence(token) + 1)
            left = App(self.symbol(token, 2), (left, right))
        return left

    def unary(self) -> Term:
        token = self.peek()
        nxt = self.peek(1)
        if token is not None and token.kind == "sym" and self.arity_of(token) == 1 and not (nxt is not None and nxt.text == "(" and nxt.kind == "punct"):
            self.take()
            return App(self.symbol(token, 1), (self.unary(),))
        return self.primary()

    def primary(self) -> Term:
        token = self.take()
        if token.kind == "box":
            return Var(token.text)
        if token.kind == "punct":
            if token.text != "(":
                raise self.error(f"unexpected {token.text!r}", token)
            term = self.expression(1)
            self.expect(")")
            return term
        nxt = self.peek()
        if nxt is not None and nxt.kind == "punct" and nxt.text == "(":
            self.take()
            args: list[Term] = []
            if not (self.peek() is not None and self.peek().text == ")"):
                args.append(self.expression(1))
                while self.peek() is not None and self.peek().text == ",":
                    self.take()
                    args.append(self.expression(1))
            self.expect(")")
            return App(self.symbol(token, len(args)), tuple(args))
        declared = self.arity_of(token)
        if declared == 0:
            return App(self.symbol(token, 0))
        if declared is not None or token.kind != "name":
            raise self.error(f"symbol {token.text!r} used without arguments", token)
        return Var(token.text)


def parse_term(text: str, sig: Signature, *, source: Optional[str] = None, offset: int = 0) -> Term:
    """
    parse a term over `sig`; identifiers declared 0-ary are constants, other identifiers are variables

    Raises:
        ParseError: on lexical errors, unknown symbols and arity mismatches
    """
    source = text if source is None else source
    tokens = _tokenize(text, offset, source)
    if not tokens:
        raise ParseError("empty term", *_position(source, offset))
    return _TermParser(sig, tokens, source).parse()


def parse_symbol_label(label: str) -> tuple[str, object]:
    label = label.strip()
    if "@{" in label and label.endswith("}"):
        name, param = label[:-1].split("@{", 1)
        return name, parse_param(param)
    return label, None


# ---------------------------------------------------------------- theories

_HEADER = re.compile(r"\s*theory\s+(\S+)\s+\{")


def _strip_comments(text: str) -> str:
    return "\n".join(line.split("#", 1)[0].ljust(len(line)) for line in text.split("\n"))


def parse_theory(text: str) -> TheoryPresentation:
    """
    parse a `.thy` presentation

    Raises:
        ParseError: lexical error, arity mismatch, duplicate names, unknown annotation or keyword

    Returns:
        TheoryPresentation: the parsed presentation, equations checked against the declared signature
    """
    source = _strip_comments(text)
    header = _HEADER.match(source)
    if header is None:
        raise ParseError("expected 'theory NAME {'", 1, 1)
    name = header.group(1)
    close = source.rfind("}")
    if close < header.end() or source[close + 1:].strip():
        raise ParseError("expected closing '}'", *_position(source, len(source.rstrip())))

    statements: list[tuple[int, str]] = []
    start = header.end()
    for i in range(header.end(), close):
        if source[i] == ";":
            statements.append((start, source[start:i]))
            start = i + 1
    if source[start:close].strip():
        raise ParseError("missing ';'", *_position(source, start + len(source[start:close]) - len(source[start:close].lstrip())))

    ops: dict[str, int] = {}
    families: dict[str, int] = {}
    pending_eqs: list[tuple[int, str]] = []
    asserts: list[str] = []
    excludes: list[str] = []
    backend = "generic"

    for offset, raw in statements:
        body = raw.strip()
        if not body:
            continue
        offset += len(raw) - len(raw.lstrip())
        keyword, _, rest = body.partition(" ")
        rest = rest.strip()
        where = _position(source, offset)
        if keyword == "op":
            m = re.fullmatch(r"(\S+?)\s*:\s*(\d+)", rest)
            if m is None:
                raise ParseError("expected 'op NAME : ARITY'", *where)
            op_name, arity = m.group(1), int(m.group(2))
            table = families if op_name.endswith("@") else ops
            op_name = op_name.rstrip("@")
            if op_name in ops or op_name in families:
                raise ParseError(f"duplicate symbol {op_name!r}", *where)
            table[op_name] = arity
        elif keyword == "const":
            if not re.fullmatch(r"\S+", rest):
                raise ParseError("expected 'const NAME'", *where)
            if rest in ops or rest in families:
                raise ParseError(f"duplicate symbol {rest!r}", *where)
            ops[rest] = 0
        elif keyword == "eq":
            pending_eqs.append((offset, rest))
        elif keyword == "oracle":
            parts = rest.split()
            if parts == ["generic"]:
                backend = "generic"
            elif len(parts) == 2 and parts[0] == "builtin":
                backend = parts[1]
            else:
                raise ParseError("expected 'oracle builtin ID' or 'oracle generic'", *where)
        elif keyword == "assert":
            if rest not in VOCABULARY:
                raise ParseError(f"unknown annotation {rest!r}", *where)
            if rest not in asserts:
                asserts.append(rest)
        elif keyword == "exclude_ops":
            excludes.extend(label.strip() for label in rest.split(",") if label.strip())
        else:
            raise ParseError(f"unknown statement {keyword!r}", *where)

    sig = Signature(tuple(ops.items()), tuple(families.items()))
    equations: list[Equation] = []
    for offset, rest in pending_eqs:
        head, sep, sides = rest.partition(":")
        if not sep or "=" not in sides:
            raise ParseError("expected 'eq NAME: TERM = TERM'", *_position(source, offset))
        eq_name = head.strip()
        if any(eq.name == eq_name for eq in equations):
            raise ParseError(f"duplicate equation {eq_name!r}", *_position(source, offset))
        lhs_text, rhs_text = sides.split("=", 1)
        body_offset = offset + len("eq ") + (len(rest) - len(rest.lstrip())) + len(head) + 1
        lhs = parse_term(lhs_text, sig, source=source, offset=body_offset)
        rhs = parse_term(rhs_text, sig, source=source, offset=body_offset + len(lhs_text) + 1)
        equations.append(Equation(eq_name, lhs, rhs))

    for label in excludes:
        op_name, _ = parse_symbol_label(label)
        if op_name not in ops and op_name not in families:
            raise ParseError(f"exclude_ops names unknown symbol {label!r}", 1, 1)

    return TheoryPresentation(name, sig, tuple(equations), tuple(asserts), backend, tuple(excludes))


def render_theory(th: TheoryPresentation, format: OutputFormat = "text") -> str:
    if format == "json":
        return json.dumps({
            "name": th.name,
            "ops": [{"name": name, "arity": arity} for name, arity in th.signature.ops],
            "families": [{"name": name, "arity": arity} for name, arity in th.signature.families],
            "eqs": [{"name": eq.name, "lhs": render(eq.lhs), "rhs": render(eq.rhs)} for eq in th.equations],
            "asserts": list(th.asserts),
            "oracle": th.backend,
            "exclude_ops": list(th.exclude_ops),
        }, ensure_ascii=False, indent=2)
    elif format == "text":
        lines = [f"theory {th.name} {{"]
        for name, arity in th.signature.ops:
            lines.append(f"  const {name};" if arity == 0 else f"  op {name} : {arity};")
        for name, arity in th.signature.families:
            lines.append(f"  op {name}@ : {arity};")
        for eq in th.equations:
            lines.append(f"  eq {eq.name}: {render(eq.lhs)} = {render(eq.rhs)};")
        lines.append("  oracle generic;" if th.backend == "generic" else f"  oracle builtin {th.backend};")
        for prop in th.asserts:
            lines.append(f"  assert {prop};")
        if th.exclude_ops:
            lines.append(f"  exclude_ops {','.join(th.exclude_ops)};")
        lines.append("}")
        return "\n".join(lines) + "\n"
    else:
        raise NotImplementedError(f"{format} format is not supported")
