"""Sparse multivariate polynomials with exact integer coefficients.

Variables come from three alphabets: ``X`` (x_i), ``T`` (t_i) and ``A``
(alpha_i).  A monomial is a tuple of ``(VariableRef, exponent)`` pairs sorted
by variable, and a polynomial is a map monomial -> nonzero int.  Values are
treated as immutable once built.
"""

from __future__ import annotations

from typing import Iterable, Mapping, NamedTuple, Union

ALPHABETS = ("X", "T", "A")
_ALPHA_RANK = {a: r for r, a in enumerate(ALPHABETS)}
_PRETTY = {"X": "x", "T": "t", "A": "a"}


class NotDivisible(ArithmeticError):
    """An exact division left a nonzero remainder."""


class VariableRef(NamedTuple):
    alphabet: str
    index: int

    def key(self) -> tuple[int, int]:
        return (_ALPHA_RANK[self.alphabet], self.index)

    def __str__(self) -> str:
        return f"{_PRETTY[self.alphabet]}_{self.index}"


def X(i: int) -> VariableRef:
    return VariableRef("X", i)


def T(i: int) -> VariableRef:
    return VariableRef("T", i)


def A(i: int) -> VariableRef:
    return VariableRef("A", i)


Monomial = tuple  # tuple[tuple[VariableRef, int], ...]
ONE_MONO: Monomial = ()


def _var_key(item):
    return item[0].key()


def make_monomial(exps: Mapping[VariableRef, int]) -> Monomial:
    return tuple(sorted(((v, e) for v, e in exps.items() if e), key=_var_key))


def mono_mul(m1: Monomial, m2: Monomial) -> Monomial:
    if not m1:
        return m2
    if not m2:
        return m1
    d = dict(m1)
    for v, e in m2:
        d[v] = d.get(v, 0) + e
    return tuple(sorted(d.items(), key=_var_key))


def mono_degree(m: Monomial) -> int:
    return sum(e for _, e in m)


def mono_order_key(m: Monomial):
    """Canonical term order: graded, then lexicographic in the variable order
    (X before T before A, then by index); larger monomials sort first."""
    return (-mono_degree(m), tuple((v.key(), -e) for v, e in m))


Coercible = Union["Polynomial", int]


class Polynomial:
    """Exact sparse polynomial; ``terms`` never stores a zero coefficient."""

    __slots__ = ("terms", "_hash")

    def __init__(self, terms: Mapping[Monomial, int] | None = None):
        if terms:
            self.terms = {m: c for m, c in terms.items() if c}
        else:
            self.terms = {}
        self._hash = None

    @classmethod
    def _raw(cls, terms: dict) -> "Polynomial":
        p = cls.__new__(cls)
        p.terms = terms
        p._hash = None
        return p

    @classmethod
    def const(cls, c: int) -> "Polynomial":
        return cls._raw({ONE_MONO: c} if c else {})

    @classmethod
    def var(cls, v: VariableRef, exp: int = 1) -> "Polynomial":
        return cls._raw({((v, exp),): 1} if exp else {ONE_MONO: 1})

    @staticmethod
    def coerce(other: Coercible) -> "Polynomial":
        if isinstance(other, Polynomial):
            return other
        if isinstance(other, int):
            return Polynomial.const(other)
        return NotImplemented

    # ring operations

    def __add__(self, other: Coercible) -> "Polynomial":
        other = Polynomial.coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if len(self.terms) < len(other.terms):
            small, big = self.terms, other.terms
        else:
            small, big = other.terms, self.terms
        out = dict(big)
        for m, c in small.items():
            s = out.get(m, 0) + c
            if s:
                out[m] = s
            else:
                del out[m]
        return Polynomial._raw(out)

    __radd__ = __add__

    def __neg__(self) -> "Polynomial":
        return Polynomial._raw({m: -c for m, c in self.terms.items()})

    def __sub__(self, other: Coercible) -> "Polynomial":
        other = Polynomial.coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other: Coercible) -> "Polynomial":
        return (-self) + other

    def __mul__(self, other: Coercible) -> "Polynomial":
        if isinstance(other, int):
            if not other:
                return Polynomial()
            return Polynomial._raw({m: c * other for m, c in self.terms.items()})
        if not isinstance(other, Polynomial):
            return NotImplemented
        out: dict = {}
        get = out.get
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = mono_mul(m1, m2)
                out[m] = get(m, 0) + c1 * c2
        return Polynomial(out)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "Polynomial":
        if k < 0:
            raise ValueError("negative power")
        result = Polynomial.const(1)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    # comparison

    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            other = Polynomial.const(other)
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self.terms.items()))
        return self._hash

    def __bool__(self) -> bool:
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    # inspection

    def total_degree(self) -> int | None:
        if not self.terms:
            return None
        return max(mono_degree(m) for m in self.terms)

    def is_homogeneous(self, d: int) -> bool:
        return all(mono_degree(m) == d for m in self.terms)

    def variables(self) -> set[VariableRef]:
        return {v for m in self.terms for v, _ in m}

    def coefficient(self, mono: Monomial) -> int:
        return self.terms.get(mono, 0)

    def constant_term(self) -> int:
        return self.terms.get(ONE_MONO, 0)

    def sorted_terms(self) -> list[tuple[Monomial, int]]:
        return sorted(self.terms.items(), key=lambda mc: mono_order_key(mc[0]))

    def __repr__(self) -> str:
        return f"Polynomial({self})"

    def __str__(self) -> str:
        return to_pretty(self)

    # substitution and division

    def substitute(self, assignment: Mapping[VariableRef, Coercible]) -> "Polynomial":
        return substitute(self, assignment)

    def divide_linear(self, a: VariableRef, b: VariableRef) -> "Polynomial":
        return exact_divide_linear(self, a, b)


def const(c: int) -> Polynomial:
    return Polynomial.const(c)


def x(i: int) -> Polynomial:
    return Polynomial.var(X(i))


def t(i: int) -> Polynomial:
    return Polynomial.var(T(i))


def alpha(i: int) -> Polynomial:
    return Polynomial.var(A(i))


def add(p: Polynomial, q: Polynomial) -> Polynomial:
    return p + q


def mul(p: Polynomial, q: Polynomial) -> Polynomial:
    return p * q


def negate(p: Polynomial) -> Polynomial:
    return -p


def product(factors: Iterable[Coercible]) -> Polynomial:
    out = Polynomial.const(1)
    for f in factors:
        out = out * f
    return out


def total_degree(p: Polynomial) -> int | None:
    return p.total_degree()


def is_homogeneous(p: Polynomial, d: int) -> bool:
    return p.is_homogeneous(d)


def substitute(p: Polynomial, assignment: Mapping[VariableRef, Coercible]) -> Polynomial:
    """Simultaneous substitution; variables absent from ``assignment`` are
    left alone."""
    if not assignment or not p.terms:
        return p
    images = {v: Polynomial.coerce(q) for v, q in assignment.items()}

    # pure renaming (every image a bare variable) only relabels monomials
    renames = {}
    for v, q in images.items():
        if len(q.terms) == 1:
            (m, c), = q.terms.items()
            if c == 1 and len(m) == 1 and m[0][1] == 1:
                renames[v] = m[0][0]
                continue
        renames = None
        break
    if renames is not None:
        out: dict = {}
        for m, c in p.terms.items():
            exps: dict = {}
            for v, e in m:
                w = renames.get(v, v)
                exps[w] = exps.get(w, 0) + e
            nm = make_monomial(exps)
            out[nm] = out.get(nm, 0) + c
        return Polynomial(out)

    powers: dict = {}

    def power(v, e):
        key = (v, e)
        if key not in powers:
            powers[key] = images[v] ** e
        return powers[key]

    result: dict = {}
    for m, c in p.terms.items():
        kept = []
        term = Polynomial.const(c)
        for v, e in m:
            if v in images:
                term = term * power(v, e)
                if not term.terms:
                    break
            else:
                kept.append((v, e))
        if not term.terms:
            continue
        km = tuple(kept)
        for tm, tc in term.terms.items():
            nm = mono_mul(km, tm)
            result[nm] = result.get(nm, 0) + tc
    return Polynomial(result)


def _split_by_exponent(p: Polynomial, a: VariableRef) -> dict[int, dict]:
    """p = sum_k P_k a^k with P_k free of a; returns {k: terms of P_k}."""
    parts: dict[int, dict] = {}
    for m, c in p.terms.items():
        k = 0
        rest = m
        for pos, (v, e) in enumerate(m):
            if v == a:
                k = e
                rest = m[:pos] + m[pos + 1:]
                break
        parts.setdefault(k, {})[rest] = c
    return parts


def exact_divide_linear(p: Polynomial, a: VariableRef, b: VariableRef) -> Polynomial:
    """Quotient of p by (a - b), raising NotDivisible on a nonzero remainder.

    Synthetic division in the variable ``a``: writing p = sum P_k a^k and
    q = sum Q_k a^k, the identity P_k = Q_{k-1} - b Q_k gives
    Q_{k-1} = P_k + b Q_k from the top degree down, and P_0 + b Q_0 must
    vanish.
    """
    if a == b:
        raise ValueError("cannot divide by a - a")
    if not p.terms:
        return Polynomial()
    parts = _split_by_exponent(p, a)
    top = max(parts)
    bmono = ((b, 1),)
    carry: dict = {}  # Q_k, starting with Q_top = 0
    quotient: dict = {}
    for k in range(top, 0, -1):
        # Q_{k-1} = P_k + b * Q_k
        nxt = dict(parts.get(k, {}))
        for m, c in carry.items():
            nm = mono_mul(m, bmono)
            s = nxt.get(nm, 0) + c
            if s:
                nxt[nm] = s
            else:
                nxt.pop(nm, None)
        carry = nxt
        amono = ((a, k - 1),) if k > 1 else ONE_MONO
        for m, c in carry.items():
            quotient[mono_mul(m, amono)] = c
    remainder = dict(parts.get(0, {}))
    for m, c in carry.items():
        nm = mono_mul(m, bmono)
        s = remainder.get(nm, 0) + c
        if s:
            remainder[nm] = s
        else:
            remainder.pop(nm, None)
    if remainder:
        raise NotDivisible(f"{p} is not divisible by {a} - {b}")
    return Polynomial(quotient)


# serialization


def to_json(p: Polynomial) -> list[dict]:
    return [
        {"m": [[v.alphabet, v.index, e] for v, e in m], "c": str(c)}
        for m, c in p.sorted_terms()
    ]


def from_json(data: list[dict]) -> Polynomial:
    terms: dict = {}
    for term in data:
        exps: dict = {}
        for alph, idx, e in term["m"]:
            if alph not in _ALPHA_RANK:
                raise ValueError(f"unknown alphabet {alph!r}")
            exps[VariableRef(alph, int(idx))] = int(e)
        m = make_monomial(exps)
        terms[m] = terms.get(m, 0) + int(term["c"])
    return Polynomial(terms)


def _mono_str(m: Monomial) -> str:
    parts = []
    for v, e in m:
        parts.append(str(v) if e == 1 else f"{v}^{e}")
    return "*".join(parts)


def to_pretty(p: Polynomial) -> str:
    if not p.terms:
        return "0"
    out = []
    for i, (m, c) in enumerate(p.sorted_terms()):
        sgn = "-" if c < 0 else "+"
        mag = abs(c)
        if not m:
            body = str(mag)
        elif mag == 1:
            body = _mono_str(m)
        else:
            body = f"{mag}*{_mono_str(m)}"
        if i == 0:
            out.append(body if sgn == "+" else f"-{body}")
        else:
            out.append(f" {sgn} {body}")
    return "".join(out)


# parsing of the pretty form, e.g. "(x_1 - t_1)*(x_2 - t_1)" or "a_1^2 + 3*a_2"

_VAR_PREFIX = {"x": "X", "t": "T", "a": "A", "alpha": "A"}


def _tokenize(text: str) -> list[str]:
    import re

    tokens = re.findall(r"\s*(alpha_\d+|[xta]_\d+|\d+|[-+*^()])", text)
    if "".join(tokens).replace(" ", "") != text.replace(" ", ""):
        raise ValueError(f"cannot parse polynomial {text!r}")
    return tokens


def parse(text: str) -> Polynomial:
    tokens = _tokenize(text)
    pos = 0

    def peek():
        return tokens[pos] if pos < len(tokens) else None

    def take():
        nonlocal pos
        tok = peek()
        if tok is None:
            raise ValueError(f"unexpected end of {text!r}")
        pos += 1
        return tok

    def expr():
        out = term()
        while peek() in ("+", "-"):
            op = take()
            rhs = term()
            out = out + rhs if op == "+" else out - rhs
        return out

    def term():
        out = factor()
        while peek() == "*":
            take()
            out = out * factor()
        return out

    def factor():
        if peek() == "-":
            take()
            return -factor()
        base = atom()
        if peek() == "^":
            take()
            return base ** int(take())
        return base

    def atom():
        tok = take()
        if tok == "(":
            out = expr()
            if take() != ")":
                raise ValueError(f"unbalanced parentheses in {text!r}")
            return out
        if tok.isdigit():
            return Polynomial.const(int(tok))
        prefix, _, idx = tok.partition("_")
        if prefix in _VAR_PREFIX and idx.isdigit():
            return Polynomial.var(VariableRef(_VAR_PREFIX[prefix], int(idx)))
        raise ValueError(f"unexpected token {tok!r} in {text!r}")

    out = expr()
    if pos != len(tokens):
        raise ValueError(f"trailing input in {text!r}")
    return out
