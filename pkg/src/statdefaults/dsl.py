"""Line-oriented KB text format: parser and canonical serializer.

Grammar, one declaration per line, `#` starts a comment:

    domain 8
    pred Bird Fly Penguin
    const a
    config delta 3/20
    config epsilon_star 1
    axiom Penguin -> Bird
    stat Fly | Bird in [0.85, 0.95]
    fact Bird(a)
    fact not Fly(a)
    default Bird : Fly, not Penguin / Fly

Formulas use `not`, `and`, `or`, `->`, `<->` and parentheses; `~`, `!` and
`&` are accepted as input aliases. The bar in a `stat` line separates the
target formula from the reference class, so `|` is never a connective.
Rationals may be written as fractions (`17/20`) or decimals (`0.85`); both
are read exactly. Symbols must be declared before use.

serialize_kb emits a canonical form: parsing it back yields a structurally
equal document, and re-serialising is byte-stable.
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import List, Optional, Tuple

from .errors import ParseError, UndeclaredSymbolError
from .formulas import (
    And,
    Atom,
    ConstantSym,
    Iff,
    Implies,
    MonadicFormula,
    Not,
    Or,
    PredicateSym,
    fmt,
)
from .kb import (
    DefaultRule,
    GroundLiteral,
    KBDocument,
    KnowledgeBase,
    StatStatement,
    ThresholdConfig,
    name_rules,
)

_KEYWORDS = {
    "domain", "pred", "const", "axiom", "stat", "fact", "default", "config",
    "not", "and", "or", "in",
}

_TOKEN_RE = re.compile(
    r"[ \t]*(?:"
    r"(?P<num>\d+(?:\.\d+)?)"
    r"|(?P<name>[A-Za-z_]\w*)"
    r"|(?P<op><->|->|[()\[\],:/|])"
    r"|(?P<alias>[~!&])"
    r"|(?P<bad>\S)"
    r")"
)

_ALIASES = {"~": "not", "!": "not", "&": "and"}


class _Token:
    __slots__ = ("kind", "text", "line", "column")

    def __init__(self, kind: str, text: str, line: int, column: int):
        self.kind = kind  # "num" | "name" | "op"
        self.text = text
        self.line = line
        self.column = column


def _tokenize_line(text: str, line_no: int) -> List[_Token]:
    tokens: List[_Token] = []
    pos = 0
    while pos < len(text):
        match = _TOKEN_RE.match(text, pos)
        if match is None:
            break  # trailing whitespace
        column = match.start(match.lastgroup) + 1
        value = match.group(match.lastgroup)
        if match.lastgroup == "bad":
            raise ParseError(f"unexpected character {value!r}", line_no, column)
        if match.lastgroup == "alias":
            tokens.append(_Token("op", _ALIASES[value], line_no, column))
        else:
            tokens.append(_Token(match.lastgroup, value, line_no, column))
        pos = match.end()
    return tokens


class _LineParser:
    """Recursive-descent parser over one line's tokens."""

    def __init__(self, tokens: List[_Token], line_no: int, kb_symbols):
        self.tokens = tokens
        self.pos = 0
        self.line_no = line_no
        self.symbols = kb_symbols  # name -> PredicateSym

    def peek(self) -> Optional[_Token]:
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def next(self) -> _Token:
        tok = self.peek()
        if tok is None:
            last = self.tokens[-1] if self.tokens else None
            column = last.column + len(last.text) if last else 1
            raise ParseError("unexpected end of line", self.line_no, column)
        self.pos += 1
        return tok

    def expect(self, text: str) -> _Token:
        tok = self.next()
        if tok.text != text:
            raise ParseError(f"expected {text!r}, found {tok.text!r}", tok.line, tok.column)
        return tok

    def at_end(self) -> bool:
        return self.pos >= len(self.tokens)

    def require_end(self) -> None:
        tok = self.peek()
        if tok is not None:
            raise ParseError(f"trailing input {tok.text!r}", tok.line, tok.column)

    # Formula grammar, loosest binding first.

    def formula(self) -> MonadicFormula:
        return self._iff()

    def _iff(self) -> MonadicFormula:
        left = self._implies()
        while (tok := self.peek()) is not None and tok.text == "<->":
            self.next()
            left = Iff(left, self._implies())
        return left

    def _implies(self) -> MonadicFormula:
        left = self._or()
        if (tok := self.peek()) is not None and tok.text == "->":
            self.next()
            return Implies(left, self._implies())
        return left

    def _or(self) -> MonadicFormula:
        left = self._and()
        while (tok := self.peek()) is not None and tok.text == "or":
            self.next()
            left = Or(left, self._and())
        return left

    def _and(self) -> MonadicFormula:
        left = self._unary()
        while (tok := self.peek()) is not None and tok.text == "and":
            self.next()
            left = And(left, self._unary())
        return left

    def _unary(self) -> MonadicFormula:
        tok = self.peek()
        if tok is not None and tok.text == "not":
            self.next()
            return Not(self._unary())
        return self._atom()

    def _atom(self) -> MonadicFormula:
        tok = self.next()
        if tok.text == "(":
            inner = self.formula()
            self.expect(")")
            return inner
        if tok.kind == "name" and tok.text not in _KEYWORDS:
            pred = self.symbols.get(tok.text)
            if pred is None:
                raise UndeclaredSymbolError(
                    f"undeclared predicate {tok.text!r}", tok.line, tok.column
                )
            return Atom(pred)
        raise ParseError(f"expected a formula, found {tok.text!r}", tok.line, tok.column)

    def rational(self) -> Fraction:
        tok = self.next()
        if tok.kind != "num":
            raise ParseError(f"expected a number, found {tok.text!r}", tok.line, tok.column)
        value = Fraction(tok.text)  # exact for both "17" and "0.85"
        nxt = self.peek()
        if nxt is not None and nxt.text == "/":
            self.next()
            den_tok = self.next()
            if den_tok.kind != "num" or "." in den_tok.text:
                raise ParseError(
                    f"expected an integer denominator, found {den_tok.text!r}",
                    den_tok.line,
                    den_tok.column,
                )
            den = int(den_tok.text)
            if den == 0:
                raise ParseError("zero denominator", den_tok.line, den_tok.column)
            if "." in tok.text:
                raise ParseError(
                    "mixed decimal/fraction notation", tok.line, tok.column
                )
            value = Fraction(int(tok.text), den)
        return value

    def identifier(self) -> _Token:
        tok = self.next()
        if tok.kind != "name" or tok.text in _KEYWORDS:
            raise ParseError(
                f"expected an identifier, found {tok.text!r}", tok.line, tok.column
            )
        return tok


def parse_kb(text: str) -> KBDocument:
    """Parse KB text into a document. Raises ParseError with position info."""
    predicates: List[PredicateSym] = []
    constants: List[ConstantSym] = []
    pred_by_name = {}
    const_by_name = {}
    domain_size: Optional[int] = None
    axioms: List[MonadicFormula] = []
    stats: List[StatStatement] = []
    evidence: List[GroundLiteral] = []
    rules: List[DefaultRule] = []
    delta: Optional[Fraction] = None
    epsilon_star: Optional[Fraction] = None
    vacuous = True

    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        tokens = _tokenize_line(line, line_no)
        if not tokens:
            continue
        head = tokens[0]
        parser = _LineParser(tokens[1:], line_no, pred_by_name)

        if head.text == "domain":
            if domain_size is not None:
                raise ParseError("duplicate domain declaration", head.line, head.column)
            tok = parser.next()
            if tok.kind != "num" or "." in tok.text or int(tok.text) < 1:
                raise ParseError(
                    f"domain size must be a positive integer, found {tok.text!r}",
                    tok.line, tok.column,
                )
            domain_size = int(tok.text)
            parser.require_end()

        elif head.text == "pred":
            while not parser.at_end():
                tok = parser.identifier()
                if tok.text in pred_by_name:
                    raise ParseError(f"duplicate predicate {tok.text!r}", tok.line, tok.column)
                sym = PredicateSym(tok.text, len(predicates))
                predicates.append(sym)
                pred_by_name[tok.text] = sym
            if not predicates:
                raise ParseError("pred line declares nothing", head.line, head.column)

        elif head.text == "const":
            while not parser.at_end():
                tok = parser.identifier()
                if tok.text in const_by_name:
                    raise ParseError(f"duplicate constant {tok.text!r}", tok.line, tok.column)
                sym = ConstantSym(tok.text, len(constants))
                constants.append(sym)
                const_by_name[tok.text] = sym

        elif head.text == "axiom":
            axioms.append(parser.formula())
            parser.require_end()

        elif head.text == "stat":
            target = parser.formula()
            parser.expect("|")
            reference = parser.formula()
            parser.expect("in")
            parser.expect("[")
            lower = parser.rational()
            parser.expect(",")
            upper = parser.rational()
            parser.expect("]")
            parser.require_end()
            if not (0 <= lower <= upper <= 1):
                raise ParseError(
                    f"interval [{lower}, {upper}] must satisfy 0 <= lower <= upper <= 1",
                    head.line, head.column,
                )
            stats.append(StatStatement(target, reference, lower, upper))

        elif head.text == "fact":
            positive = True
            if parser.peek() is not None and parser.peek().text == "not":
                parser.next()
                positive = False
            name_tok = parser.identifier()
            pred = pred_by_name.get(name_tok.text)
            if pred is None:
                raise UndeclaredSymbolError(
                    f"undeclared predicate {name_tok.text!r}", name_tok.line, name_tok.column
                )
            parser.expect("(")
            const_tok = parser.identifier()
            const = const_by_name.get(const_tok.text)
            if const is None:
                raise UndeclaredSymbolError(
                    f"undeclared constant {const_tok.text!r}", const_tok.line, const_tok.column
                )
            parser.expect(")")
            parser.require_end()
            evidence.append(GroundLiteral(positive, pred, const))

        elif head.text == "default":
            # A leading "name:" is optional; the prerequisite always ends
            # at a ":", so a named rule shows two colons before the "/".
            rule_name = ""
            rest = parser.tokens[parser.pos:]
            if (
                len(rest) >= 2
                and rest[0].kind == "name"
                and rest[1].text == ":"
                and any(t.text == ":" for t in rest[2:])
            ):
                rule_name = parser.next().text
                parser.next()
            prereq = parser.formula()
            parser.expect(":")
            justs = [parser.formula()]
            while parser.peek() is not None and parser.peek().text == ",":
                parser.next()
                justs.append(parser.formula())
            parser.expect("/")
            consequent = parser.formula()
            parser.require_end()
            rules.append(
                DefaultRule(prereq, tuple(justs), consequent, name=rule_name)
            )

        elif head.text == "config":
            key = parser.identifier().text
            if key == "delta":
                delta = parser.rational()
            elif key == "epsilon_star":
                epsilon_star = parser.rational()
            elif key == "vacuous_reference":
                tok = parser.identifier()
                if tok.text == "satisfied":
                    vacuous = True
                elif tok.text == "violated":
                    vacuous = False
                else:
                    raise ParseError(
                        "vacuous_reference must be 'satisfied' or 'violated'",
                        tok.line, tok.column,
                    )
            else:
                raise ParseError(f"unknown config key {key!r}", head.line, head.column)
            parser.require_end()

        else:
            raise ParseError(f"unknown declaration {head.text!r}", head.line, head.column)

    if domain_size is None:
        raise ParseError("missing domain declaration", 1, 1)

    try:
        kb = KnowledgeBase(
            predicates=tuple(predicates),
            constants=tuple(constants),
            domain_size=domain_size,
            axioms=tuple(axioms),
            stats=tuple(stats),
            vacuous_reference_satisfied=vacuous,
        )
        config = ThresholdConfig(
            delta=delta if delta is not None else Fraction(1, 20),
            epsilon_star=epsilon_star if epsilon_star is not None else Fraction(1),
        )
    except ValueError as exc:
        raise ParseError(str(exc), 1, 1) from exc

    return KBDocument(
        kb=kb,
        evidence=tuple(evidence),
        rules=name_rules(rules),
        config=config,
    )


def parse_formula(text: str, kb) -> MonadicFormula:
    """Parse one formula against a KB's declared predicates.

    Used for ad-hoc goals (e.g. a --target flag); errors carry positions
    within `text` as line 1.
    """
    tokens = _tokenize_line(text, 1)
    parser = _LineParser(tokens, 1, {p.name: p for p in kb.predicates})
    formula = parser.formula()
    parser.require_end()
    return formula


def _frac(value: Fraction) -> str:
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def serialize_kb(doc: KBDocument) -> str:
    """Canonical text for a document. parse_kb(serialize_kb(d)) == d."""
    kb = doc.kb
    lines = [f"domain {kb.domain_size}"]
    if kb.predicates:
        lines.append("pred " + " ".join(p.name for p in kb.predicates))
    if kb.constants:
        lines.append("const " + " ".join(c.name for c in kb.constants))
    lines.append(f"config delta {_frac(doc.config.delta)}")
    lines.append(f"config epsilon_star {_frac(doc.config.epsilon_star)}")
    if not kb.vacuous_reference_satisfied:
        lines.append("config vacuous_reference violated")
    for axiom in kb.axioms:
        lines.append(f"axiom {fmt(axiom)}")
    for stat in kb.stats:
        lines.append(
            f"stat {fmt(stat.target)} | {fmt(stat.reference)} "
            f"in [{_frac(stat.lower)}, {_frac(stat.upper)}]"
        )
    for lit in doc.evidence:
        sign = "" if lit.positive else "not "
        lines.append(f"fact {sign}{lit.pred.name}({lit.constant.name})")
    for rule in doc.rules:
        justs = ", ".join(fmt(j) for j in rule.justifications)
        prefix = f"{rule.name}: " if rule.name else ""
        lines.append(
            f"default {prefix}{fmt(rule.prerequisite)} : {justs} "
            f"/ {fmt(rule.consequent)}"
        )
    return "\n".join(lines) + "\n"
