"""Recursive-descent parser for weight types, group elements and bundle sums.

    weight  := '(' INT (',' INT)* ')'
    lelt    := term (('+' | '-') term)*
    term    := ['-'] [INT '*'] atom | INT          atoms: x1 x2 x3 c w d xb1 xb2 xb3
    bundle  := [INT '*'] ( 'O(' lelt ')' | 'E<' lelt '>' ['(' lelt ')'] | 'A(' lelt ')' | 'E(' lelt ')' )
    sum     := bundle (('+' | '⊕') bundle)*
    expr    := (weight | sum | lelt) ['@' weight]
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Optional

from .catalog import BundleSum, CatalogError, ExtensionBundle, LineBundle
from .lattice import LElement, WeightType, constants


class ParseError(ValueError):
    def __init__(self, msg: str, pos: int, text: str = ""):
        super().__init__(f"{msg} at position {pos}" + (f": {text!r}" if text else ""))
        self.pos = pos


_TOKEN = re.compile(r"\s*(?:(\d+)|(xb[123]|x[123]|[cwdOEA])|(⊕|[-+*()<>,@]))")


@dataclass
class Tok:
    kind: str  # int, name, sym, end
    text: str
    pos: int


def tokenize(text: str) -> list[Tok]:
    out = []
    pos = 0
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if not m:
            raise ParseError("unexpected character", pos, text)
        start = m.start(m.lastindex)
        if m.group(1):
            out.append(Tok("int", m.group(1), start))
        elif m.group(2):
            out.append(Tok("name", m.group(2), start))
        else:
            out.append(Tok("sym", m.group(3), start))
        pos = m.end()
    out.append(Tok("end", "", len(text)))
    return out


class Parser:
    def __init__(self, text: str, wt: Optional[WeightType] = None):
        self.text = text
        self.toks = tokenize(text)
        self.i = 0
        self.wt = wt

    # helpers

    @property
    def cur(self) -> Tok:
        return self.toks[self.i]

    def peek(self, k: int = 1) -> Tok:
        return self.toks[min(self.i + k, len(self.toks) - 1)]

    def take(self, kind: str, text: Optional[str] = None) -> Tok:
        t = self.cur
        if t.kind != kind or (text is not None and t.text != text):
            want = text or kind
            raise ParseError(f"expected {want!r}, found {t.text or 'end of input'!r}", t.pos, self.text)
        self.i += 1
        return t

    def at(self, kind: str, text: Optional[str] = None) -> bool:
        t = self.cur
        return t.kind == kind and (text is None or t.text == text)

    # grammar

    def weight(self) -> WeightType:
        start = self.cur.pos
        self.take("sym", "(")
        vals = [int(self.take("int").text)]
        while self.at("sym", ","):
            self.i += 1
            vals.append(int(self.take("int").text))
        self.take("sym", ")")
        try:
            return WeightType(tuple(vals))
        except ValueError as exc:
            raise ParseError(str(exc), start, self.text) from None

    def _need_wt(self) -> WeightType:
        if self.wt is None:
            raise ParseError("weight type unknown; append '@ (p1,p2,p3)'", self.cur.pos, self.text)
        return self.wt

    def atom(self, name: str, pos: int) -> LElement:
        wt = self._need_wt()
        if name in ("x1", "x2", "x3"):
            i = int(name[1])
            if i > wt.t:
                raise ParseError(f"{name} does not exist for {wt}", pos, self.text)
            return wt.x(i)
        consts = constants(wt)
        if name not in consts:
            raise ParseError(f"{name!r} is not defined for {wt}", pos, self.text)
        return consts[name]

    def term(self) -> LElement:
        sign = 1
        if self.at("sym", "-"):
            self.i += 1
            sign = -1
        t = self.cur
        if t.kind == "int":
            self.i += 1
            n = int(t.text)
            if self.at("sym", "*"):
                self.i += 1
                a = self.take("name")
                return self.atom(a.text, a.pos) * (sign * n)
            if n != 0:
                raise ParseError("bare integer; write INT*c for multiples of c", t.pos, self.text)
            return self._need_wt().zero()
        if t.kind == "name" and t.text not in ("O", "E", "A"):
            self.i += 1
            return self.atom(t.text, t.pos) * sign
        raise ParseError(f"expected a term, found {t.text or 'end of input'!r}", t.pos, self.text)

    def lelt(self) -> LElement:
        acc = self.term()
        while self.at("sym", "+") or self.at("sym", "-"):
            # a '+' followed by a bundle head ends the element
            if self.at("sym", "+") and self._bundle_ahead(1):
                break
            sign = self.take("sym").text
            t = self.term()
            acc = acc + t if sign == "+" else acc - t
        return acc

    def _bundle_ahead(self, k: int) -> bool:
        t = self.peek(k)
        if t.kind == "int" and self.peek(k + 1).text == "*":
            t = self.peek(k + 2)
        return t.kind == "name" and t.text in ("O", "E", "A")

    def bundle(self) -> list:
        mult = 1
        if self.at("int") and self.peek().text == "*":
            mult = int(self.take("int").text)
            self.take("sym", "*")
        head = self.take("name")
        try:
            if head.text == "O":
                self.take("sym", "(")
                y = self.lelt()
                self.take("sym", ")")
                obj = LineBundle(y)
            elif head.text == "A":
                self.take("sym", "(")
                y = self.lelt()
                self.take("sym", ")")
                obj = ExtensionBundle.auslander(y)
            elif head.text == "E" and self.at("sym", "("):
                self.i += 1
                y = self.lelt()
                self.take("sym", ")")
                obj = ExtensionBundle.auslander(y)
            elif head.text == "E":
                self.take("sym", "<")
                x = self.lelt()
                self.take("sym", ">")
                y = self._need_wt().zero()
                if self.at("sym", "("):
                    self.i += 1
                    y = self.lelt()
                    self.take("sym", ")")
                obj = ExtensionBundle(x, y)
            else:
                raise ParseError(f"unknown bundle head {head.text!r}", head.pos, self.text)
        except CatalogError as exc:
            raise ParseError(str(exc), head.pos, self.text) from None
        return [obj] * mult

    def bundle_sum(self) -> BundleSum:
        items = self.bundle()
        while self.at("sym", "+") or self.at("sym", "⊕"):
            self.i += 1
            items += self.bundle()
        return BundleSum.of(self._need_wt(), items)


def _split_weight(text: str):
    """Pull a trailing '@ (..)' off the text."""
    if "@" not in text:
        return text, None
    body, _, tail = text.rpartition("@")
    p = Parser(tail)
    wt = p.weight()
    p.take("end")
    return body, wt


def parse_weight(text: str) -> WeightType:
    p = Parser(text.strip())
    wt = p.weight()
    p.take("end")
    return wt


def parse_expression(text: str, wt: Optional[WeightType] = None):
    """Parse a weight type, a bundle sum or a group element."""
    body, suffix = _split_weight(text)
    if suffix is not None:
        if wt is not None and wt != suffix:
            raise ParseError(f"conflicting weight types {wt} and {suffix}", text.index("@"), text)
        wt = suffix
    stripped = body.strip()
    if stripped.startswith("(") and wt is None or re.fullmatch(r"\(\s*\d+(\s*,\s*\d+)*\s*\)", stripped):
        return parse_weight(stripped)
    p = Parser(body, wt)
    if p._bundle_ahead(0):
        out = p.bundle_sum()
    else:
        out = p.lelt()
    p.take("end")
    return out


def parse_bundles(text: str, wt: Optional[WeightType] = None) -> BundleSum:
    out = parse_expression(text, wt)
    if not isinstance(out, BundleSum):
        raise ParseError("expected a bundle expression", 0, text)
    return out


def parse_lelt(text: str, wt: Optional[WeightType] = None) -> LElement:
    out = parse_expression(text, wt)
    if not isinstance(out, LElement):
        raise ParseError("expected a group element", 0, text)
    return out
