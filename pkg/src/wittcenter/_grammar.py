"""Tokenizer/parser for the shared term grammar ``c*V1^e1*V2^e2 + ...``."""

from __future__ import annotations

import re

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z][A-Za-z]*\d*)|(\^|\*|\+|-))")


class ParseError(ValueError):
    def __init__(self, message: str, text: str, pos: int):
        super().__init__(f"{message} at position {pos} in {text!r}")
        self.pos = pos
        self.text = text


def _tokenize(text: str):
    pos = 0
    tokens = []
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if not m:
            raise ParseError("unexpected character", text, pos)
        start = m.start(m.lastindex)
        if m.group(1) is not None:
            tokens.append(("int", int(m.group(1)), start))
        elif m.group(2) is not None:
            tokens.append(("name", m.group(2), start))
        else:
            tokens.append(("op", m.group(3), start))
        pos = m.end()
    return tokens


def parse_terms(text: str, names: set[str] | None = None) -> list[tuple[int, list[tuple[str, int]]]]:
    """Parse a sum of terms into ``(coefficient, [(name, exponent), ...])`` pairs.

    Factors are returned in the order written; ``-`` between terms is sugar
    for ``+ -1*``.
    """
    tokens = _tokenize(text)
    if not tokens:
        raise ParseError("empty expression", text, 0)
    terms = []
    i = 0
    n = len(tokens)

    def peek(kind=None, value=None):
        if i >= n:
            return False
        t = tokens[i]
        return (kind is None or t[0] == kind) and (value is None or t[1] == value)

    def pos():
        return tokens[i][2] if i < n else len(text)

    while True:
        sign = 1
        while peek("op", "-") or peek("op", "+"):
            if tokens[i][1] == "-":
                sign = -sign
            i += 1
        coef = sign
        factors: list[tuple[str, int]] = []
        expect_factor = True
        while expect_factor:
            if peek("int"):
                coef *= tokens[i][1]
                i += 1
            elif peek("name"):
                name, at = tokens[i][1], tokens[i][2]
                if names is not None and name not in names:
                    raise ParseError(f"unknown variable {name!r}", text, at)
                i += 1
                e = 1
                if peek("op", "^"):
                    i += 1
                    if not peek("int"):
                        raise ParseError("expected exponent", text, pos())
                    e = tokens[i][1]
                    i += 1
                factors.append((name, e))
            else:
                raise ParseError("expected coefficient or variable", text, pos())
            if peek("op", "*"):
                i += 1
            else:
                expect_factor = False
        terms.append((coef, factors))
        if i >= n:
            break
        if peek("op", "+") or peek("op", "-"):
            if tokens[i][1] == "+":
                i += 1
            continue
        raise ParseError("expected '+'", text, pos())
    return terms


def format_terms(terms: list[tuple[int, list[tuple[str, int]]]]) -> str:
    """Format ``(coefficient, [(name, exponent), ...])`` pairs, already ordered."""
    if not terms:
        return "0"
    out = []
    for c, factors in terms:
        parts = [n if e == 1 else f"{n}^{e}" for n, e in factors if e]
        if not parts:
            out.append(str(c))
        elif c == 1:
            out.append("*".join(parts))
        else:
            out.append(f"{c}*" + "*".join(parts))
    return " + ".join(out)


def variable_names(text: str) -> list[str]:
    """Variable names in order of first appearance (no validation)."""
    seen = []
    for kind, value, _ in _tokenize(text):
        if kind == "name" and value not in seen:
            seen.append(value)
    return seen
