"""Text syntax for formulas, and a printer that round-trips through it.

Grammar, loosest to tightest binding::

    iff     := imp ('<->' imp)*
    imp     := or ('->' imp)?                 right associative
    or      := and ('|' and)*
    and     := unary ('&' unary)*
    unary   := '~' unary
             | 'B' ['{' agent '}'] unary       belief (agent defaults to a)
             | 'D' ['{' agent '}'] unary       possibility
             | 'C' '{' agent (',' agent)* '}' unary
             | '[' 'ann' iff ']' unary
             | '[' 'act' FILE ['#' point] ']' unary
             | primary
    primary := 'true' | 'false' | ATOM | '(' iff ')'

``//`` starts a comment running to the end of the line.
"""

from __future__ import annotations

import os
import re
from typing import Mapping

from .errors import FormulaSyntaxError, UnknownActionFile
from .formula import (
    BOT,
    TOP,
    ActionBox,
    And,
    Announce,
    Atom,
    Bottom,
    Box,
    CommonBelief,
    Diamond,
    Formula,
    Iff,
    Implies,
    Not,
    Or,
    Top,
)

DEFAULT_AGENT = "a"
KEYWORDS = {"true", "false", "ann", "act"}
MODAL_LETTERS = {"B", "D", "C"}

_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_']*")
_SYMBOLS = ("<->", "->", "&", "|", "~", "(", ")", "[", "]", "{", "}", ",", "#")


class _Parser:
    def __init__(self, text: str, actions, base_dir):
        self.text = text
        self.pos = 0
        self.actions = actions or {}
        self.base_dir = base_dir

    # -- scanning --

    def error(self, message, pos=None):
        pos = self.pos if pos is None else pos
        line = self.text.count("\n", 0, pos) + 1
        col = pos - (self.text.rfind("\n", 0, pos) + 1) + 1
        raise FormulaSyntaxError(message, line, col)

    def skip(self):
        while self.pos < len(self.text):
            ch = self.text[self.pos]
            if ch.isspace():
                self.pos += 1
            elif self.text.startswith("//", self.pos):
                nl = self.text.find("\n", self.pos)
                self.pos = len(self.text) if nl < 0 else nl + 1
            else:
                break

    def peek(self):
        """Next token as (kind, value) without consuming it."""
        self.skip()
        if self.pos >= len(self.text):
            return ("eof", None)
        for sym in _SYMBOLS:
            if self.text.startswith(sym, self.pos):
                return ("sym", sym)
        m = _IDENT.match(self.text, self.pos)
        if m:
            return ("ident", m.group())
        return ("bad", self.text[self.pos])

    def take(self):
        kind, value = self.peek()
        if kind == "eof":
            self.error("unexpected end of input")
        if kind == "bad":
            self.error(f"unexpected character {value!r}")
        self.pos += len(value)
        return kind, value

    def expect(self, sym):
        kind, value = self.peek()
        if kind != "sym" or value != sym:
            self.error(f"expected {sym!r}" + ("" if kind == "eof" else f", found {value!r}"))
        self.pos += len(sym)

    def at(self, sym):
        kind, value = self.peek()
        return kind == "sym" and value == sym

    def ident(self, what):
        kind, value = self.peek()
        if kind != "ident" or value in KEYWORDS:
            self.error(f"expected {what}")
        self.pos += len(value)
        return value

    # -- grammar --

    def formula(self):
        left = self.imp()
        while self.at("<->"):
            self.take()
            left = Iff(left, self.imp())
        return left

    def imp(self):
        left = self.disj()
        if self.at("->"):
            self.take()
            return Implies(left, self.imp())
        return left

    def disj(self):
        left = self.conj()
        while self.at("|"):
            self.take()
            left = Or(left, self.conj())
        return left

    def conj(self):
        left = self.unary()
        while self.at("&"):
            self.take()
            left = And(left, self.unary())
        return left

    def agent_spec(self):
        if self.at("{"):
            self.take()
            agent = self.ident("agent name")
            self.expect("}")
            return agent
        return DEFAULT_AGENT

    def unary(self):
        kind, value = self.peek()
        if kind == "sym" and value == "~":
            self.take()
            return Not(self.unary())
        if kind == "ident" and value in MODAL_LETTERS:
            self.take()
            if value == "B":
                return Box(self.agent_spec(), self.unary())
            if value == "D":
                return Diamond(self.agent_spec(), self.unary())
            self.expect("{")
            group = [self.ident("agent name")]
            while self.at(","):
                self.take()
                group.append(self.ident("agent name"))
            self.expect("}")
            return CommonBelief(tuple(group), self.unary())
        if kind == "sym" and value == "[":
            self.take()
            start = self.pos
            kind, word = self.peek()
            if kind == "ident" and word in ("ann", "act"):
                self.pos += len(word)
            if word == "ann":
                ann = self.formula()
                self.expect("]")
                return Announce(ann, self.unary())
            if word == "act":
                action = self.action_ref()
                return ActionBox(action, self.unary())
            self.error("expected 'ann' or 'act' after '['", start)
        return self.primary()

    def action_ref(self):
        self.skip()
        start = self.pos
        m = re.compile(r"[^#\]]*").match(self.text, self.pos)
        name = m.group().strip()
        if not name:
            self.error("expected an action file name", start)
        self.pos = m.end()
        point = None
        if self.at("#"):
            self.take()
            point = self.ident("action point")
        self.expect("]")
        return self._resolve_action(name, point, start)

    def _resolve_action(self, name, point, pos):
        from .actionmodel import PointedActionModel, load_action_model

        if name in self.actions:
            pam = self.actions[name]
        else:
            path = name
            if self.base_dir is not None and not os.path.isabs(path):
                path = os.path.join(self.base_dir, path)
            if not os.path.exists(path):
                raise UnknownActionFile(f"unknown action file {name!r}")
            pam = load_action_model(path, name=name)
        if not isinstance(pam, PointedActionModel):
            pam = PointedActionModel(pam, point)
        if point is not None:
            pam = PointedActionModel(pam.model, point)
        if pam.point is None:
            self.error(f"action model {name!r} has no designated point", pos)
        return pam

    def primary(self):
        kind, value = self.peek()
        if kind == "sym" and value == "(":
            self.take()
            f = self.formula()
            self.expect(")")
            return f
        if kind == "ident":
            if value == "true":
                self.take()
                return TOP
            if value == "false":
                self.take()
                return BOT
            if value in KEYWORDS:
                self.error(f"unexpected keyword {value!r}")
            self.take()
            return Atom(value)
        if kind == "eof":
            self.error("unexpected end of input")
        self.error(f"unexpected {value!r}")


def parse_formula(
    text: str,
    actions: Mapping[str, object] | None = None,
    base_dir: str | None = None,
) -> Formula:
    """Parse ``text``; ``actions`` maps names used in ``[act NAME]`` to action models."""
    p = _Parser(text, actions, base_dir)
    f = p.formula()
    kind, value = p.peek()
    if kind != "eof":
        p.error(f"unexpected {value!r} after complete formula")
    return f


# -- printing ------------------------------------------------------------------

PREC_IFF, PREC_IMP, PREC_OR, PREC_AND, PREC_UNARY, PREC_ATOM = range(1, 7)


def _view(f):
    """Recognise derived connectives: returns (tag, parts)."""
    if isinstance(f, And):
        l, r = f.left, f.right
        if (
            isinstance(l, Not) and isinstance(l.sub, And) and isinstance(l.sub.right, Not)
            and isinstance(r, Not) and isinstance(r.sub, And) and isinstance(r.sub.right, Not)
            and l.sub.left == r.sub.right.sub and l.sub.right.sub == r.sub.left
        ):
            return "iff", (l.sub.left, l.sub.right.sub)
        return "and", (l, r)
    if isinstance(f, Not):
        g = f.sub
        if isinstance(g, And) and isinstance(g.left, Not) and isinstance(g.right, Not):
            a = g.left.sub
            # ~(x & ~y) on the left reads better as a nested implication
            if not (isinstance(a, And) and isinstance(a.right, Not)):
                return "or", (a, g.right.sub)
        if isinstance(g, And) and isinstance(g.right, Not):
            return "imp", (g.left, g.right.sub)
        if isinstance(g, Box) and isinstance(g.sub, Not):
            return "dia", (g.agent, g.sub.sub)
        return "not", (g,)
    return None, ()


def _prec(f):
    tag, _ = _view(f)
    return {
        "iff": PREC_IFF, "imp": PREC_IMP, "or": PREC_OR, "and": PREC_AND,
    }.get(tag, PREC_ATOM if isinstance(f, (Atom, Top, Bottom)) else PREC_UNARY)


def _wrap(f, need):
    s = print_formula(f)
    return f"({s})" if need else s


def _action_label(action):
    name = getattr(action.model, "name", None) or "action"
    return f"[act {name} # {action.point}]"


def print_formula(f: Formula) -> str:
    if isinstance(f, Atom):
        return f.name
    if isinstance(f, Top):
        return "true"
    if isinstance(f, Bottom):
        return "false"
    tag, parts = _view(f)
    if tag in ("iff", "or", "and"):
        op = {"iff": "<->", "or": "|", "and": "&"}[tag]
        p = _prec(f)
        a, b = parts
        return f"{_wrap(a, _prec(a) < p)} {op} {_wrap(b, _prec(b) <= p)}"
    if tag == "imp":
        a, b = parts
        return f"{_wrap(a, _prec(a) <= PREC_IMP)} -> {_wrap(b, _prec(b) < PREC_IMP)}"
    if tag == "dia":
        agent, g = parts
        return f"D{{{agent}}} {_wrap(g, _prec(g) < PREC_UNARY)}"
    if tag == "not":
        (g,) = parts
        return f"~{_wrap(g, _prec(g) < PREC_UNARY)}"
    if isinstance(f, Box):
        return f"B{{{f.agent}}} {_wrap(f.sub, _prec(f.sub) < PREC_UNARY)}"
    if isinstance(f, CommonBelief):
        return f"C{{{','.join(f.agents)}}} {_wrap(f.sub, _prec(f.sub) < PREC_UNARY)}"
    if isinstance(f, Announce):
        return f"[ann {print_formula(f.ann)}] {_wrap(f.body, _prec(f.body) < PREC_UNARY)}"
    if isinstance(f, ActionBox):
        return f"{_action_label(f.action)} {_wrap(f.sub, _prec(f.sub) < PREC_UNARY)}"
    raise TypeError(f"not a formula: {f!r}")
