"""Arithmetic in Cohn and Leavitt path algebras.

Elements are K-linear combinations of monomials alpha.beta* where alpha and
beta are finite paths with a common target.  Multiplication uses only the
ghost-kills-real relation, so elements live in the Cohn algebra of the
graph; normal_form additionally rewrites with the summation relation at
regular vertices and lands in the canonical Leavitt basis.
"""

import re

from .digraph import Path, path_sort_key
from .errors import ParseError, PreconditionError


class Element:
    """A linear combination of monomials (alpha, beta) meaning alpha.beta*."""

    __slots__ = ("graph", "field", "terms")

    def __init__(self, graph, field, terms=None):
        self.graph = graph
        self.field = field
        self.terms = {}
        if terms:
            for mono, coeff in terms.items():
                self._check_mono(mono)
                if coeff:
                    self.terms[mono] = coeff

    def _check_mono(self, mono):
        alpha, beta = mono
        if alpha.target != beta.target:
            raise PreconditionError(
                f"monomial parts {alpha} and {beta} do not share a target"
            )

    # -- constructors --------------------------------------------------

    @staticmethod
    def zero(graph, field):
        return Element(graph, field)

    @staticmethod
    def vertex(graph, field, v):
        p = Path.vertex(v)
        return Element(graph, field, {(p, p): field.one})

    @staticmethod
    def real(graph, field, path):
        return Element(graph, field, {(path, Path.vertex(path.target)): field.one})

    @staticmethod
    def ghost(graph, field, path):
        return Element(graph, field, {(Path.vertex(path.target), path): field.one})

    @staticmethod
    def monomial(graph, field, alpha, beta, coeff=None):
        if coeff is None:
            coeff = field.one
        return Element(graph, field, {(alpha, beta): coeff})

    @staticmethod
    def unit(graph, field):
        """The sum of all vertex idempotents."""
        out = Element.zero(graph, field)
        for v in graph.vertices:
            out = out + Element.vertex(graph, field, v)
        return out

    # -- linear structure ----------------------------------------------

    def _compatible(self, other):
        if self.graph is not other.graph or self.field != other.field:
            raise PreconditionError("elements live over different graphs or fields")

    def __add__(self, other):
        self._compatible(other)
        terms = dict(self.terms)
        for mono, coeff in other.terms.items():
            acc = terms.get(mono, self.field.zero) + coeff
            if acc:
                terms[mono] = acc
            else:
                terms.pop(mono, None)
        return Element(self.graph, self.field, terms)

    def __neg__(self):
        return Element(
            self.graph, self.field, {m: -c for m, c in self.terms.items()}
        )

    def __sub__(self, other):
        return self + (-other)

    def scale(self, scalar):
        scalar = self.field.of(scalar)
        if not scalar:
            return Element.zero(self.graph, self.field)
        return Element(
            self.graph, self.field, {m: c * scalar for m, c in self.terms.items()}
        )

    def __eq__(self, other):
        if not isinstance(other, Element):
            return NotImplemented
        return (
            self.graph is other.graph
            and self.field == other.field
            and self.terms == other.terms
        )

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    @property
    def is_zero(self):
        return not self.terms

    # -- multiplication -------------------------------------------------

    def __mul__(self, other):
        self._compatible(other)
        terms = {}
        for (a1, b1), c1 in self.terms.items():
            for (a2, b2), c2 in other.terms.items():
                mono = _mono_product(a1, b1, a2, b2)
                if mono is None:
                    continue
                coeff = c1 * c2
                acc = terms.get(mono, self.field.zero) + coeff
                if acc:
                    terms[mono] = acc
                else:
                    terms.pop(mono, None)
        return Element(self.graph, self.field, terms)

    def involution(self):
        """The K-linear anti-automorphism swapping real and ghost parts."""
        return Element(
            self.graph, self.field, {(b, a): c for (a, b), c in self.terms.items()}
        )

    # -- grading ----------------------------------------------------------

    def degree_components(self):
        """Split into homogeneous parts by len(alpha) - len(beta)."""
        parts = {}
        for (a, b), c in self.terms.items():
            d = len(a) - len(b)
            parts.setdefault(d, {})[(a, b)] = c
        return {
            d: Element(self.graph, self.field, terms) for d, terms in parts.items()
        }

    # -- printing ----------------------------------------------------------

    def __str__(self):
        if not self.terms:
            return "0"
        keyed = sorted(self.terms.items(), key=lambda item: _mono_sort_key(item[0]))
        pieces = []
        for i, (mono, coeff) in enumerate(keyed):
            text = _format_term(mono, coeff, lead=(i == 0))
            pieces.append(text)
        return " ".join(pieces)

    def __repr__(self):
        return f"Element({self})"


def _mono_product(a1, b1, a2, b2):
    """(a1.b1*)(a2.b2*) under ghost-kills-real, or None when it vanishes."""
    rest = a2.strip_prefix(b1)
    if rest is not None:
        # b1* absorbs an initial segment of a2.
        return (a1.concat(rest), b2)
    rest = b1.strip_prefix(a2)
    if rest is not None:
        return (a1, b2.concat(rest))
    return None


def _mono_sort_key(mono):
    alpha, beta = mono
    return (
        len(alpha) + len(beta),
        len(alpha),
        path_sort_key(alpha),
        path_sort_key(beta),
    )


def mono_str(mono):
    alpha, beta = mono
    pieces = [str(a) for a in alpha.arrows]
    pieces += [f"{a}*" for a in reversed(beta.arrows)]
    if not pieces:
        return alpha.source
    return ".".join(pieces)


def _format_term(mono, coeff, lead):
    sign = ""
    body = str(coeff)
    if body.startswith("-"):
        sign, body = "-", body[1:]
    word = mono_str(mono)
    if body == "1":
        text = word
    else:
        text = f"{body} {word}"
    if lead:
        return f"-{text}" if sign else text
    return f"- {text}" if sign else f"+ {text}"


# -- the Leavitt normal form ------------------------------------------------


def _redex_arrow(graph, alpha, beta):
    """The shared special last arrow making (alpha, beta) reducible, if any."""
    if not alpha.arrows or not beta.arrows:
        return None
    g = alpha.arrows[-1]
    if beta.arrows[-1] != g:
        return None
    if graph.classify_vertex(g.source) != "regular":
        return None
    if graph.special_arrow(g.source) != g:
        return None
    return g


def normal_form(element):
    """Rewrite into the canonical Leavitt basis.

    A monomial reduces exactly when both of its sides end in the special
    arrow of a common regular vertex; the summation relation at that vertex
    trades it for one shorter monomial plus monomials ending in the other
    arrows, none of which is reducible at that spot.
    """
    graph, field = element.graph, element.field
    out = {}
    work = list(element.terms.items())
    while work:
        (alpha, beta), coeff = work.pop()
        g = _redex_arrow(graph, alpha, beta)
        if g is None:
            acc = out.get((alpha, beta), field.zero) + coeff
            if acc:
                out[(alpha, beta)] = acc
            else:
                out.pop((alpha, beta), None)
            continue
        v = g.source
        a0, b0 = alpha.drop_last(), beta.drop_last()
        work.append(((a0, b0), coeff))
        for e in graph.out_arrows(v):
            if e == g:
                continue
            work.append(((a0.concat(e), b0.concat(e)), -coeff))
    return Element(graph, field, out)


def is_normal_form(element):
    return all(
        _redex_arrow(element.graph, a, b) is None for (a, b) in element.terms
    )


def equals_leavitt(x, y):
    """Equality in the Leavitt path algebra."""
    return normal_form(x - y).is_zero


def equals_cohn(x, y):
    """Equality in the Cohn algebra: no summation relation applied."""
    return x == y


# -- element expressions -----------------------------------------------------

_TOKEN = re.compile(
    r"\s*(?:(?P<num>\d+(?:/\d+)?)|(?P<id>[A-Za-z_][A-Za-z_0-9]*)"
    r"|(?P<op>[\[\]\.\*\+\-]))"
)


def _tokenize(text):
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            if text[pos:].strip():
                raise ParseError(f"bad character in expression at {text[pos:]!r}")
            break
        pos = m.end()
        if m.group("num"):
            tokens.append(("num", m.group("num")))
        elif m.group("id"):
            tokens.append(("id", m.group("id")))
        else:
            tokens.append(("op", m.group("op")))
    return tokens


class _ExprParser:
    """Sums of optionally signed, optionally weighted generator words.

    Grammar:  expr   := term (('+' | '-') term)*
              term   := coeff | coeff word | word
              word   := factor ('.' factor)*
              factor := id | id '[' num ']' | factor '*'
    A bare coefficient means that multiple of the identity, the sum of all
    vertex idempotents.  Words multiply in the Cohn algebra, so mixed real
    and ghost letters simplify as they are read.
    """

    def __init__(self, graph, field, tokens):
        self.graph = graph
        self.field = field
        self.tokens = tokens
        self.pos = 0

    def peek(self):
        return self.tokens[self.pos] if self.pos < len(self.tokens) else (None, None)

    def take(self):
        tok = self.peek()
        self.pos += 1
        return tok

    def parse(self):
        total = Element.zero(self.graph, self.field)
        sign = 1
        kind, _ = self.peek()
        if kind == "op" and self.tokens[self.pos][1] in "+-":
            sign = -1 if self.take()[1] == "-" else 1
        total = total + self.term().scale(self.field.of(sign))
        while self.pos < len(self.tokens):
            kind, val = self.take()
            if kind != "op" or val not in "+-":
                raise ParseError(f"expected + or - before {val!r}")
            total = total + self.term().scale(self.field.of(-1 if val == "-" else 1))
        return total

    def term(self):
        kind, val = self.peek()
        coeff = self.field.one
        if kind == "num":
            self.take()
            coeff = self.field.parse(val)
            kind, val = self.peek()
            if kind != "id":
                return Element.unit(self.graph, self.field).scale(coeff)
        if kind != "id":
            raise ParseError(f"expected a generator name, found {val!r}")
        return self.word().scale(coeff)

    def word(self):
        out = self.factor()
        while self.peek() == ("op", "."):
            self.take()
            out = out * self.factor()
        return out

    def factor(self):
        kind, name = self.take()
        if kind != "id":
            raise ParseError(f"expected a generator name, found {name!r}")
        index = None
        if self.peek() == ("op", "["):
            self.take()
            k, num = self.take()
            if k != "num" or "/" in num:
                raise ParseError("family index must be a plain integer")
            index = int(num)
            if self.take() != ("op", "]"):
                raise ParseError("unclosed family index")
        starred = False
        while self.peek() == ("op", "*"):
            self.take()
            starred = not starred
        if index is None and self.graph.has_vertex(name):
            # Vertex idempotents are fixed by the involution, so the star
            # is accepted and ignored.
            return Element.vertex(self.graph, self.field, name)
        try:
            arrow = self.graph.arrow(name, index)
        except PreconditionError as exc:
            raise ParseError(str(exc)) from exc
        path = Path.of_arrows((arrow,))
        if starred:
            return Element.ghost(self.graph, self.field, path)
        return Element.real(self.graph, self.field, path)


def parse_element(graph, field, text):
    """Evaluate an element expression in the Cohn algebra of the graph."""
    tokens = _tokenize(text)
    if not tokens:
        raise ParseError("empty element expression")
    return _ExprParser(graph, field, tokens).parse()
