"""A small language for machines given by wreath recursion.

::

    degree 3
    gamma = (gamma, e, alpha)
    alpha = (e, alpha, e) (1 2)
    y = gamma alpha          # alias: a group word, not a new state

Expressions: juxtaposition is the product, ``g^n`` a power, ``g^h`` the
conjugate ``h^-1 g h``, ``[g, h]`` the commutator ``g^-1 h^-1 g h``, ``e`` the
identity, and ``(g_1, ..., g_m) cycles`` an anonymous automorphism.  ``^``
binds tighter than juxtaposition.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterator, Sequence

from .automata import MealyMachine, StateSystem, TreeAutomorphism, invert_word, normalize
from .perm import Perm

# ---------------------------------------------------------------------------
# diagnostics


@dataclass(frozen=True)
class Diagnostic:
    severity: str
    line: int
    start: int  # 1-based column of the first character
    end: int    # 1-based column one past the last character
    message: str
    hint: str = ""
    replacement: str | None = None  # text that fixes the span, when known

    def __str__(self):
        out = f"{self.line}:{self.start}-{self.end}: {self.severity}: {self.message}"
        return out + (f" (hint: {self.hint})" if self.hint else "")


class DslError(ValueError):
    def __init__(self, diagnostics: Sequence[Diagnostic]):
        self.diagnostics = list(diagnostics)
        super().__init__("\n".join(str(d) for d in self.diagnostics))


# ---------------------------------------------------------------------------
# tokens

_TOKEN = re.compile(r"\s*(?:(?P<name>[A-Za-z_][A-Za-z0-9_']*)|(?P<int>\d+)|(?P<sym>[()\[\],^=\-{}]))")


@dataclass(frozen=True)
class Token:
    kind: str  # name | int | sym | end
    text: str
    line: int
    col: int

    @property
    def end(self) -> int:
        return self.col + len(self.text)


def tokenize(text: str, line: int = 1) -> list[Token]:
    out, pos = [], 0
    text = text.split("#", 1)[0]
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            col = pos + len(text[pos:]) - len(text[pos:].lstrip()) + 1
            raise DslError([Diagnostic("error", line, col, col + 1,
                                       f"unexpected character {text[col - 1]!r}", "remove it", "")])
        kind = m.lastgroup
        out.append(Token(kind, m.group(kind), line, m.start(kind) + 1))
        pos = m.end()
    out.append(Token("end", "", line, len(text.rstrip()) + 1))
    return out


# ---------------------------------------------------------------------------
# syntax tree


@dataclass(frozen=True)
class Node:
    line: int
    start: int
    end: int


@dataclass(frozen=True)
class Name(Node):
    name: str


@dataclass(frozen=True)
class Ident(Node):
    pass


@dataclass(frozen=True)
class Product(Node):
    items: tuple


@dataclass(frozen=True)
class Power(Node):
    base: Node
    n: int


@dataclass(frozen=True)
class Conj(Node):
    base: Node
    by: Node


@dataclass(frozen=True)
class Comm(Node):
    left: Node
    right: Node


@dataclass(frozen=True)
class Tuple(Node):
    items: tuple
    cycles: str  # "" when absent
    cycles_span: tuple = (0, 0)


def to_text(node: Node) -> str:
    """Canonical source text of an expression."""
    if isinstance(node, Name):
        return node.name
    if isinstance(node, Ident):
        return "e"
    if isinstance(node, Product):
        return " ".join(_atomic(i) if isinstance(i, Product) else to_text(i) for i in node.items)
    if isinstance(node, Power):
        return f"{_atomic(node.base)}^{node.n}"
    if isinstance(node, Conj):
        by = node.by
        return f"{_atomic(node.base)}^{_atomic(by)}"
    if isinstance(node, Comm):
        return f"[{to_text(node.left)}, {to_text(node.right)}]"
    if isinstance(node, Tuple):
        body = "(" + ", ".join(to_text(i) for i in node.items) + ")"
        return body + (f" {node.cycles}" if node.cycles and node.cycles not in ("id", "()") else "")
    raise TypeError(node)


def _atomic(node: Node) -> str:
    if isinstance(node, (Name, Ident, Comm, Tuple)):
        return to_text(node)
    return f"({to_text(node)})"


# ---------------------------------------------------------------------------
# parser


class _Parser:
    def __init__(self, tokens: list[Token]):
        self.toks, self.i = tokens, 0

    @property
    def tok(self) -> Token:
        return self.toks[self.i]

    def take(self) -> Token:
        t = self.toks[self.i]
        self.i += 1
        return t

    def error(self, msg: str, tok: Token | None = None, hint: str = "", replacement=None):
        tok = tok or self.tok
        raise DslError([Diagnostic("error", tok.line, tok.col, tok.end, msg, hint, replacement)])

    def expect(self, text: str) -> Token:
        if self.tok.text != text:
            self.error(f"expected {text!r}, found {self.tok.text or 'end of line'!r}",
                       hint=f"insert {text!r}")
        return self.take()

    def starts_term(self) -> bool:
        t = self.tok
        return t.kind == "name" or (t.kind == "sym" and t.text in "([{" and not self._cycle_ahead())

    def _cycle_ahead(self) -> bool:
        t = self.tok
        nxt = self.toks[self.i + 1] if self.i + 1 < len(self.toks) else None
        return t.text == "(" and nxt is not None and (nxt.kind == "int" or nxt.text == ")")

    def expr(self) -> Node:
        first = self.tok
        items = [self.term()]
        while self.starts_term():
            items.append(self.term())
        if len(items) == 1:
            return items[0]
        return Product(first.line, first.col, items[-1].end, tuple(items))

    def term(self) -> Node:
        node = self.factor()
        while self.tok.text == "^":
            caret = self.take()
            t = self.tok
            if t.kind == "int" or t.text == "-":
                n = self.integer()
                node = Power(node.line, node.start, self.toks[self.i - 1].end, node, n)
            elif t.text in ("(", "{") and self._int_group():
                self.take()
                n = self.integer()
                close = self.expect(")" if t.text == "(" else "}")
                node = Power(node.line, node.start, close.end, node, n)
            elif t.kind == "end" or t.text in (")", ",", "]", "}", "="):
                self.error("expected an exponent after '^'", caret,
                           hint="remove the '^' or write ^2, ^-1 or ^name", replacement="")
            else:
                by = self.factor()
                node = Conj(node.line, node.start, self.toks[self.i - 1].end, node, by)
        return node

    def _int_group(self) -> bool:
        j = self.i + 1
        if self.toks[j].text == "-":
            j += 1
        return self.toks[j].kind == "int" and self.toks[j + 1].text in (")", "}")

    def integer(self) -> int:
        sign = 1
        if self.tok.text == "-":
            self.take()
            sign = -1
        if self.tok.kind != "int":
            self.error("expected an integer exponent", hint="write ^2 or ^-1", replacement="1")
        return sign * int(self.take().text)

    def factor(self) -> Node:
        t = self.tok
        if t.kind == "name":
            self.take()
            if t.text == "e":
                return Ident(t.line, t.col, t.end)
            return Name(t.line, t.col, t.end, t.text)
        if t.text == "[":
            self.take()
            left = self.expr()
            self.expect(",")
            right = self.expr()
            close = self.expect("]")
            return Comm(t.line, t.col, close.end, left, right)
        if t.text == "{":
            self.take()
            inner = self.expr()
            self.expect("}")
            return inner
        if t.text == "(":
            self.take()
            items = [self.expr()]
            while self.tok.text == ",":
                self.take()
                items.append(self.expr())
            close = self.expect(")")
            if len(items) == 1:
                return items[0]
            cycles, span = self.cycles()
            end = span[1] if cycles else close.end
            return Tuple(t.line, t.col, end, tuple(items), cycles, span)
        if t.kind == "end":
            self.error("expected an expression, found end of line", hint="write e for the identity",
                       replacement="e")
        self.error(f"expected an expression, found {t.text!r}", hint="write e for the identity",
                   replacement="e")

    def cycles(self) -> tuple[str, tuple[int, int]]:
        """Optional cycle notation after a tuple: ``(1 2)(3 4)``, ``()`` or ``id``."""
        if self.tok.kind == "name" and self.tok.text == "id":
            t = self.take()
            return "id", (t.col, t.end)
        parts, start, end = [], None, None
        while self._cycle_ahead():
            open_ = self.take()
            start = open_.col if start is None else start
            pts = []
            while self.tok.kind == "int":
                pts.append(self.take().text)
            close = self.tok
            if close.text != ")":
                raise DslError([Diagnostic("error", close.line, start, close.end,
                                           f"malformed cycle notation near {close.text or 'end of line'!r}",
                                           "cycles are written like (1 2)(3 4)", "id")])
            self.take()
            end = close.end
            parts.append("(" + " ".join(pts) + ")")
        if not parts:
            return "", (0, 0)
        return "".join(parts), (start, end)


def parse_expr(text: str, line: int = 1) -> Node:
    p = _Parser(tokenize(text, line))
    node = p.expr()
    if p.tok.kind != "end":
        p.error(f"unexpected {p.tok.text!r} after expression", hint="remove it", replacement="")
    return node


# ---------------------------------------------------------------------------
# programs


@dataclass(frozen=True)
class Definition:
    name: str
    body: Node  # a Tuple for states, anything else for aliases
    line: int
    name_span: tuple

    @property
    def is_state(self) -> bool:
        return isinstance(self.body, Tuple)


@dataclass
class DslProgram:
    degree: int
    definitions: list
    source: str = ""
    system: "DslSystem" = field(init=False, repr=False)

    def __post_init__(self):
        self.system = DslSystem(self)

    @property
    def names(self) -> list[str]:
        return [d.name for d in self.definitions]

    def definition(self, name: str) -> Definition:
        for d in self.definitions:
            if d.name == name:
                return d
        raise KeyError(name)

    def element(self, name: str) -> TreeAutomorphism:
        return elaborate(self, name)

    def generators(self) -> dict[str, TreeAutomorphism]:
        return {d.name: self.element(d.name) for d in self.definitions}

    def to_text(self) -> str:
        lines = [f"degree {self.degree}"]
        lines += [f"{d.name} = {to_text(d.body)}" for d in self.definitions]
        return "\n".join(lines) + "\n"


def parse(source: str) -> DslProgram:
    """Parse a program; raises ``DslError`` carrying every diagnostic found."""
    diags: list[Diagnostic] = []
    degree, degree_line, degree_tried = None, None, False
    defs: list[Definition] = []
    seen: dict[str, int] = {}
    lines = source.splitlines()
    for n, raw in enumerate(lines, 1):
        try:
            toks = tokenize(raw, n)
        except DslError as exc:
            diags += exc.diagnostics
            continue
        if toks[0].kind == "end":
            continue
        p = _Parser(toks)
        try:
            if toks[0].text == "degree":
                degree_tried = True
                p.take()
                t = p.tok
                if t.kind != "int":
                    p.error("degree must be an integer", hint="write degree 2", replacement="2")
                value = int(p.take().text)
                if value < 2:
                    p.error("degree must be at least 2", t, "use 2 or more", "2")
                if degree is not None:
                    p.error("degree declared twice", toks[0], "remove the second declaration")
                degree, degree_line = value, n
            else:
                name = p.take()
                if name.kind != "name" or name.text in ("e", "id", "degree"):
                    p.error(f"expected a definition name, found {name.text!r}", name,
                            "definitions look like name = (..)")
                p.expect("=")
                body = p.expr()
                if p.tok.kind != "end":
                    p.error(f"unexpected {p.tok.text!r} after definition", hint="remove it",
                            replacement="")
                if name.text in seen:
                    diags.append(Diagnostic("error", n, name.col, name.end,
                                            f"{name.text!r} already defined on line {seen[name.text]}",
                                            "rename it"))
                    continue
                seen[name.text] = n
                defs.append(Definition(name.text, body, n, (name.col, name.end)))
        except DslError as exc:
            diags += exc.diagnostics
    if degree is None and not degree_tried:
        guess = next((len(d.body.items) for d in defs if isinstance(d.body, Tuple)), 2)
        diags.insert(0, Diagnostic("error", 1, 1, 1, "missing degree declaration",
                                   f"start with 'degree {guess}'", f"degree {guess}\n"))
    elif degree is not None:
        if degree_line and any(d.line < degree_line for d in defs):
            diags.append(Diagnostic("error", degree_line, 1, 7, "degree must come before definitions",
                                    "move it to the top"))
        diags += _check(defs, degree)
    if diags:
        raise DslError(sorted(diags, key=lambda d: (d.line, d.start)))
    return DslProgram(degree, defs, source)


def _walk(node: Node) -> Iterator[Node]:
    yield node
    if isinstance(node, Product):
        for i in node.items:
            yield from _walk(i)
    elif isinstance(node, Tuple):
        for i in node.items:
            yield from _walk(i)
    elif isinstance(node, Power):
        yield from _walk(node.base)
    elif isinstance(node, Conj):
        yield from _walk(node.base)
        yield from _walk(node.by)
    elif isinstance(node, Comm):
        yield from _walk(node.left)
        yield from _walk(node.right)


def _check_node(node: Node, degree: int, known: set[str]) -> list[Diagnostic]:
    out = []
    for sub in _walk(node):
        if isinstance(sub, Name) and sub.name not in known:
            out.append(Diagnostic("error", sub.line, sub.start, sub.end, f"unknown name {sub.name!r}",
                                  "define it or use e", "e"))
        elif isinstance(sub, Tuple):
            if len(sub.items) != degree:
                out.append(Diagnostic("error", sub.line, sub.start, sub.end,
                                      f"arity mismatch: {len(sub.items)} sections for degree {degree}",
                                      f"give exactly {degree} sections",
                                      "(" + ", ".join(["e"] * degree) + ")"))
            elif sub.cycles:
                try:
                    Perm.from_cycles(sub.cycles, degree)
                except ValueError as exc:
                    a, b = sub.cycles_span
                    out.append(Diagnostic("error", sub.line, a, b, f"malformed cycles: {exc}",
                                          "cycles are written like (1 2)(3 4)", "id"))
    return out


def _check(defs: list[Definition], degree: int) -> list[Diagnostic]:
    known = {d.name for d in defs}
    out: list[Diagnostic] = []
    for d in defs:
        out += _check_node(d.body, degree, known)
    aliases = {d.name: d for d in defs if not d.is_state}
    for d in aliases.values():
        if _alias_cycle(d.name, aliases, set()):
            out.append(Diagnostic("error", d.line, *d.name_span, f"alias {d.name!r} refers to itself",
                                  "make it a state with a tuple body"))
    return out


def _alias_cycle(name: str, aliases: dict, stack: set) -> bool:
    if name in stack:
        return True
    d = aliases.get(name)
    if d is None:
        return False
    stack = stack | {name}
    return any(isinstance(n, Name) and _alias_cycle(n.name, aliases, stack) for n in _walk(d.body)
               if not isinstance(n, Tuple) or n is d.body)


# ---------------------------------------------------------------------------
# semantics


class DslSystem(StateSystem):
    """States are definition names and anonymous tuples (``int`` keys)."""

    def __init__(self, program: DslProgram):
        self.program = program
        self.degree = program.degree
        self._states: dict = {}
        self._words: dict = {}
        self._anon: list = []
        for d in program.definitions:
            if d.is_state:
                self._states[d.name] = d.body

    def anonymous(self, node: Tuple) -> int:
        key = len(self._anon)
        self._anon.append(node)
        self._states[key] = node
        return key

    def activity(self, state) -> Perm:
        cyc = self._states[state].cycles
        return Perm.from_cycles(cyc, self.degree) if cyc else Perm.identity(self.degree)

    def section(self, state, letter0: int):
        key = (state, letter0)
        w = self._words.get(key)
        if w is None:
            w = self._words.setdefault(key, self.word(self._states[state].items[letter0]))
        return w

    def state_name(self, state) -> str:
        if isinstance(state, str):
            return state
        return to_text(self._states[state])

    def word(self, node: Node, env: dict | None = None) -> tuple:
        if isinstance(node, Ident):
            return ()
        if isinstance(node, Name):
            if env and node.name in env:
                return env[node.name]
            if node.name in self._states:
                return ((node.name, 1),)
            try:
                d = self.program.definition(node.name)
            except KeyError:
                raise DslError([Diagnostic("error", node.line, node.start, node.end,
                                           f"unknown name {node.name!r}", "define it or use e", "e")])
            return self.word(d.body, env)
        if isinstance(node, Product):
            out: tuple = ()
            for i in node.items:
                out += self.word(i, env)
            return normalize(self, out)
        if isinstance(node, Power):
            w = self.word(node.base, env)
            return normalize(self, (w if node.n >= 0 else invert_word(w)) * abs(node.n))
        if isinstance(node, Conj):
            w, h = self.word(node.base, env), self.word(node.by, env)
            return normalize(self, invert_word(h) + w + h)
        if isinstance(node, Comm):
            g, h = self.word(node.left, env), self.word(node.right, env)
            return normalize(self, invert_word(g) + invert_word(h) + g + h)
        if isinstance(node, Tuple):
            if len(node.items) != self.degree:
                raise DslError(_check_node(node, self.degree, set(self.program.names) | set(env or ())))
            return ((self.anonymous(node), 1),)
        raise TypeError(node)


def elaborate(prog: DslProgram, expr: str | Node) -> TreeAutomorphism:
    """Evaluate a group word over the program's names."""
    node = parse_expr(expr) if isinstance(expr, str) else expr
    if isinstance(expr, str):
        errs = _check_node(node, prog.degree, set(prog.names))
        if errs:
            raise DslError(errs)
    return TreeAutomorphism(prog.system, prog.system.word(node))


def program_from_machine(mach: MealyMachine) -> DslProgram:
    """Definitions for every state of an explicit machine; trivial states become ``e``."""
    trivial = {i for i in range(len(mach.outputs)) if mach.is_identity(i)}
    names = list(mach.names)
    reserved = {"e", "id", "degree"}
    for i, nm in enumerate(names):
        if i not in trivial and nm in reserved:
            names[i] = nm + "_"
    lines = [f"degree {mach.degree}"]
    for i, (out, kids) in enumerate(zip(mach.outputs, mach.children)):
        if i in trivial:
            continue
        body = ", ".join("e" if k in trivial else names[k] for k in kids)
        cyc = out.to_cycles()
        lines.append(f"{names[i]} = ({body})" + ("" if cyc == "id" else f" {cyc}"))
    return parse("\n".join(lines) + "\n")
