"""Exact sparse polynomials with Laurent-in-epsilon rational coefficients.

Coefficients are kept as Python ``int`` whenever possible and as
``fractions.Fraction`` otherwise; ``rat`` normalizes between the two.  A
polynomial is a flat mapping ``(monomial, eps_exponent) -> coefficient``,
which makes epsilon slicing and truncated substitution cheap.
"""
from __future__ import annotations

import ast
import json
import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Dict, Iterable, Iterator, List, Mapping, NamedTuple, Optional, Sequence, Tuple, Union

from .errors import BudgetExceeded, InputError, ZeroPolynomial

Rat = Union[int, Fraction]

FAMILIES = ("x", "y", "z", "lam", "xi", "w", "u", "v", "aux")


def rat(value) -> Rat:
    """Coerce ``value`` to a canonical rational (``int`` when integral)."""
    if isinstance(value, bool):
        raise InputError("booleans are not rationals")
    if isinstance(value, int):
        return value
    if isinstance(value, Fraction):
        return value.numerator if value.denominator == 1 else value
    if isinstance(value, str):
        try:
            value = Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise InputError(f"not a rational: {value!r}") from exc
        return value.numerator if value.denominator == 1 else value
    if hasattr(value, "numerator") and hasattr(value, "denominator"):
        return rat(Fraction(int(value.numerator), int(value.denominator)))
    raise InputError(f"not a rational: {value!r}")


def rat_str(value: Rat) -> str:
    value = Fraction(value)
    return f"{value.numerator}/{value.denominator}"


def _norm(c: Rat) -> Rat:
    if type(c) is Fraction and c.denominator == 1:
        return c.numerator
    return c


# ---------------------------------------------------------------- variables


class VarId(NamedTuple):
    family: str
    indices: Tuple[int, ...] = ()

    def __str__(self) -> str:
        if not self.indices:
            return self.family
        return f"{self.family}[{','.join(str(i) for i in self.indices)}]"


_VAR_RE = re.compile(r"^\s*([A-Za-z_]+)\s*(?:\[\s*(-?\d+(?:\s*,\s*-?\d+)*)?\s*\])?\s*$")


def parse_var(text: str) -> VarId:
    m = _VAR_RE.match(text)
    if not m:
        raise InputError(f"bad variable name: {text!r}")
    family, idx = m.group(1), m.group(2)
    if family not in FAMILIES:
        raise InputError(f"unknown variable family {family!r}")
    indices = tuple(int(t) for t in idx.split(",")) if idx else ()
    return VarId(family, indices)


def x(i: int, j: int) -> VarId:
    return VarId("x", (i, j))


Monomial = Tuple[Tuple[VarId, int], ...]
ONE: Monomial = ()


@lru_cache(maxsize=1 << 18)
def mono_mul(a: Monomial, b: Monomial) -> Monomial:
    if not a:
        return b
    if not b:
        return a
    d = dict(a)
    for v, e in b:
        d[v] = d.get(v, 0) + e
    return tuple(sorted(d.items()))


def mono_degree(m: Monomial, among: Optional[Callable[[VarId], bool]] = None) -> int:
    if among is None:
        return sum(e for _, e in m)
    return sum(e for v, e in m if among(v))


def mono_split(m: Monomial, active: Callable[[VarId], bool]) -> Tuple[Monomial, Monomial]:
    """Split into (active part, rest)."""
    a = tuple((v, e) for v, e in m if active(v))
    b = tuple((v, e) for v, e in m if not active(v))
    return a, b


def mono_str(m: Monomial) -> str:
    if not m:
        return "1"
    return "*".join(str(v) if e == 1 else f"{v}^{e}" for v, e in m)


# ---------------------------------------------------------------- EpsScalar


class EpsScalar:
    """A Laurent polynomial in epsilon with rational coefficients."""

    __slots__ = ("terms",)

    def __init__(self, terms: Optional[Mapping[int, Rat]] = None):
        self.terms: Dict[int, Rat] = {}
        if terms:
            for k, c in terms.items():
                c = rat(c)
                if c:
                    self.terms[int(k)] = c

    @classmethod
    def const(cls, c) -> "EpsScalar":
        return cls({0: c})

    @classmethod
    def eps(cls, k: int = 1, c=1) -> "EpsScalar":
        return cls({k: c})

    @classmethod
    def coerce(cls, value) -> "EpsScalar":
        if isinstance(value, EpsScalar):
            return value
        if isinstance(value, Poly):
            return value.as_scalar()
        return cls.const(value)

    def is_zero(self) -> bool:
        return not self.terms

    def order(self) -> int:
        if not self.terms:
            raise ZeroPolynomial("eps order of zero")
        return min(self.terms)

    def top(self) -> int:
        if not self.terms:
            raise ZeroPolynomial("eps degree of zero")
        return max(self.terms)

    def coeff(self, k: int) -> Rat:
        return self.terms.get(k, 0)

    def __add__(self, other) -> "EpsScalar":
        other = EpsScalar.coerce(other)
        out = dict(self.terms)
        for k, c in other.terms.items():
            s = out.get(k, 0) + c
            if s:
                out[k] = _norm(s)
            else:
                out.pop(k, None)
        return _raw_scalar(out)

    __radd__ = __add__

    def __neg__(self) -> "EpsScalar":
        return _raw_scalar({k: -c for k, c in self.terms.items()})

    def __sub__(self, other) -> "EpsScalar":
        return self + (-EpsScalar.coerce(other))

    def __rsub__(self, other) -> "EpsScalar":
        return EpsScalar.coerce(other) - self

    def __mul__(self, other) -> "EpsScalar":
        other = EpsScalar.coerce(other)
        out: Dict[int, Rat] = {}
        for k1, c1 in self.terms.items():
            for k2, c2 in other.terms.items():
                k = k1 + k2
                out[k] = out.get(k, 0) + c1 * c2
        return _raw_scalar({k: _norm(c) for k, c in out.items() if c})

    __rmul__ = __mul__

    def __pow__(self, e: int) -> "EpsScalar":
        if e < 0:
            raise InputError("negative power of an EpsScalar")
        out = EpsScalar.const(1)
        base = self
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = EpsScalar.const(other)
        if not isinstance(other, EpsScalar):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self) -> int:
        return hash(frozenset(self.terms.items()))

    def is_monomial(self) -> bool:
        return len(self.terms) == 1

    def exact_div(self, other: "EpsScalar") -> "EpsScalar":
        """Divide exactly; raises ``ArithmeticError`` when a remainder is left."""
        other = EpsScalar.coerce(other)
        if other.is_zero():
            raise ZeroDivisionError("division by zero EpsScalar")
        if self.is_zero():
            return EpsScalar()
        rem = dict(self.terms)
        lead_k = other.top()
        lead_c = other.terms[lead_k]
        low_k = other.order()
        quot: Dict[int, Rat] = {}
        stop = self.order() - low_k
        while rem:
            top = max(rem)
            qk = top - lead_k
            if qk < stop:
                raise ArithmeticError("inexact EpsScalar division")
            qc = _norm(Fraction(rem[top]) / lead_c)
            quot[qk] = qc
            for k, c in other.terms.items():
                kk = k + qk
                s = rem.get(kk, 0) - qc * c
                if s:
                    rem[kk] = _norm(s)
                else:
                    rem.pop(kk, None)
        return _raw_scalar(quot)

    def evaluate(self, eps_value) -> Rat:
        e = Fraction(rat(eps_value))
        total = Fraction(0)
        for k, c in self.terms.items():
            total += c * e ** k
        return _norm(total)

    def to_json(self) -> Dict[str, str]:
        return {str(k): rat_str(c) for k, c in sorted(self.terms.items())}

    @classmethod
    def from_json(cls, data) -> "EpsScalar":
        if isinstance(data, (int, str)):
            return cls.const(rat(data))
        if not isinstance(data, dict):
            raise InputError(f"bad coefficient: {data!r}")
        try:
            return cls({int(k): rat(v) for k, v in data.items()})
        except ValueError as exc:
            raise InputError(f"bad coefficient: {data!r}") from exc

    def __repr__(self) -> str:
        return f"EpsScalar({self})"

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for k, c in sorted(self.terms.items()):
            if k == 0:
                parts.append(str(c))
            elif k == 1:
                parts.append(f"{c}*eps")
            else:
                parts.append(f"{c}*eps^{k}")
        return " + ".join(parts)


def _raw_scalar(terms: Dict[int, Rat]) -> EpsScalar:
    s = EpsScalar.__new__(EpsScalar)
    s.terms = terms
    return s


# ---------------------------------------------------------------- Poly

Key = Tuple[Monomial, int]


def _mul_terms(a: Dict[Key, Rat], b: Dict[Key, Rat], cutoff: Optional[int] = None) -> Dict[Key, Rat]:
    out: Dict[Key, Rat] = {}
    get = out.get
    if cutoff is None:
        for (ma, ea), ca in a.items():
            for (mb, eb), cb in b.items():
                k = (mono_mul(ma, mb), ea + eb)
                out[k] = get(k, 0) + ca * cb
    else:
        for (ma, ea), ca in a.items():
            lim = cutoff - ea
            for (mb, eb), cb in b.items():
                if eb > lim:
                    continue
                k = (mono_mul(ma, mb), ea + eb)
                out[k] = get(k, 0) + ca * cb
    return {k: _norm(c) for k, c in out.items() if c}


class Poly:
    """Sparse polynomial over ``VarId`` with Laurent-epsilon coefficients."""

    __slots__ = ("_t",)

    def __init__(self, terms: Optional[Mapping[Key, Rat]] = None):
        self._t: Dict[Key, Rat] = {}
        if terms:
            for (m, e), c in terms.items():
                c = rat(c)
                if c:
                    m = tuple(sorted((v, k) for v, k in m if k))
                    key = (m, int(e))
                    s = self._t.get(key, 0) + c
                    if s:
                        self._t[key] = _norm(s)
                    else:
                        self._t.pop(key, None)

    # constructors
    @classmethod
    def _raw(cls, t: Dict[Key, Rat]) -> "Poly":
        p = cls.__new__(cls)
        p._t = t
        return p

    @classmethod
    def zero(cls) -> "Poly":
        return cls._raw({})

    @classmethod
    def const(cls, c, eps: int = 0) -> "Poly":
        c = rat(c)
        return cls._raw({(ONE, eps): c} if c else {})

    @classmethod
    def var(cls, v: VarId, power: int = 1) -> "Poly":
        return cls._raw({(((v, power),) if power else ONE, 0): 1})

    @classmethod
    def eps(cls, k: int = 1) -> "Poly":
        return cls._raw({(ONE, k): 1})

    @classmethod
    def from_scalar(cls, s) -> "Poly":
        s = EpsScalar.coerce(s)
        return cls._raw({(ONE, k): c for k, c in s.terms.items()})

    @classmethod
    def monomial(cls, m: Monomial, coef=1, eps: int = 0) -> "Poly":
        return cls({(m, eps): coef})

    @classmethod
    def coerce(cls, value) -> "Poly":
        if isinstance(value, Poly):
            return value
        if isinstance(value, EpsScalar):
            return cls.from_scalar(value)
        if isinstance(value, VarId):
            return cls.var(value)
        return cls.const(value)

    @classmethod
    def from_monomial_coeffs(cls, data: Mapping[Monomial, EpsScalar]) -> "Poly":
        t: Dict[Key, Rat] = {}
        for m, s in data.items():
            for k, c in EpsScalar.coerce(s).terms.items():
                t[(m, k)] = c
        return cls._raw(t)

    # inspection
    def items(self) -> Iterator[Tuple[Key, Rat]]:
        return iter(self._t.items())

    def __len__(self) -> int:
        return len(self._t)

    def is_zero(self) -> bool:
        return not self._t

    def __bool__(self) -> bool:
        return bool(self._t)

    def by_monomial(self) -> Dict[Monomial, EpsScalar]:
        out: Dict[Monomial, Dict[int, Rat]] = {}
        for (m, e), c in self._t.items():
            out.setdefault(m, {})[e] = c
        return {m: _raw_scalar(d) for m, d in out.items()}

    def monomials(self) -> List[Monomial]:
        return sorted({m for m, _ in self._t}, key=mono_sort_key)

    def coeff(self, m: Monomial) -> EpsScalar:
        return _raw_scalar({e: c for (mm, e), c in self._t.items() if mm == m})

    def variables(self) -> List[VarId]:
        vs = {v for (m, _) in self._t for v, _ in m}
        return sorted(vs)

    def degree(self, among: Optional[Callable[[VarId], bool]] = None) -> int:
        if not self._t:
            return -1
        return max(mono_degree(m, among) for m, _ in self._t)

    def degree_in(self, v: VarId) -> int:
        best = 0
        for m, _ in self._t:
            for w, e in m:
                if w == v and e > best:
                    best = e
        return best

    def is_homogeneous(self, among: Optional[Callable[[VarId], bool]] = None) -> bool:
        degs = {mono_degree(m, among) for m, _ in self._t}
        return len(degs) <= 1

    def has_eps(self) -> bool:
        return any(e for _, e in self._t)

    def eps_order(self) -> int:
        if not self._t:
            raise ZeroPolynomial("eps order of the zero polynomial")
        return min(e for _, e in self._t)

    def eps_top(self) -> int:
        if not self._t:
            raise ZeroPolynomial("eps degree of the zero polynomial")
        return max(e for _, e in self._t)

    def eps_slice(self, k: int) -> "Poly":
        """Coefficient of eps^k, an epsilon-free polynomial."""
        return Poly._raw({(m, 0): c for (m, e), c in self._t.items() if e == k})

    def eps_truncate(self, cutoff: int) -> "Poly":
        return Poly._raw({k: c for k, c in self._t.items() if k[1] <= cutoff})

    def is_constant(self) -> bool:
        return all(not m for m, _ in self._t)

    def as_scalar(self) -> EpsScalar:
        if not self.is_constant():
            raise InputError("polynomial is not a constant")
        return _raw_scalar({e: c for (_, e), c in self._t.items()})

    def as_rat(self) -> Rat:
        s = self.as_scalar()
        if any(k for k in s.terms):
            raise InputError("constant depends on eps")
        return s.coeff(0)

    # arithmetic
    def __add__(self, other) -> "Poly":
        other = Poly.coerce(other)
        if len(other._t) > len(self._t):
            big, small = other._t, self._t
        else:
            big, small = self._t, other._t
        out = dict(big)
        for k, c in small.items():
            s = out.get(k, 0) + c
            if s:
                out[k] = _norm(s)
            else:
                out.pop(k, None)
        return Poly._raw(out)

    __radd__ = __add__

    def __neg__(self) -> "Poly":
        return Poly._raw({k: -c for k, c in self._t.items()})

    def __sub__(self, other) -> "Poly":
        return self + (-Poly.coerce(other))

    def __rsub__(self, other) -> "Poly":
        return Poly.coerce(other) - self

    def __mul__(self, other) -> "Poly":
        if isinstance(other, (int, Fraction)):
            other = rat(other)
            if not other:
                return Poly.zero()
            return Poly._raw({k: _norm(c * other) for k, c in self._t.items()})
        other = Poly.coerce(other)
        return Poly._raw(_mul_terms(self._t, other._t))

    __rmul__ = __mul__

    def mul_truncated(self, other, cutoff: int) -> "Poly":
        """Product with every term of eps exponent above ``cutoff`` dropped."""
        return Poly._raw(_mul_terms(self._t, Poly.coerce(other)._t, cutoff))

    def __truediv__(self, other) -> "Poly":
        """Division by a rational or by a single-term EpsScalar."""
        if isinstance(other, (int, Fraction)):
            inv = Fraction(1) / Fraction(other)
            return self * _norm(inv)
        s = EpsScalar.coerce(other)
        if not s.is_monomial():
            raise InputError("can only divide by a monomial in eps")
        (k, c), = s.terms.items()
        inv = Fraction(1) / Fraction(c)
        return Poly._raw({(m, e - k): _norm(cc * inv) for (m, e), cc in self._t.items()})

    def __pow__(self, e: int) -> "Poly":
        if e < 0:
            raise InputError("negative power of a polynomial")
        out = Poly.const(1)
        base = self
        while e:
            if e & 1:
                out = out * base
            e >>= 1
            if e:
                base = base * base
        return out

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction, EpsScalar, VarId)):
            other = Poly.coerce(other)
        if not isinstance(other, Poly):
            return NotImplemented
        return self._t == other._t

    def __hash__(self) -> int:
        return hash(frozenset(self._t.items()))

    def shift_eps(self, k: int) -> "Poly":
        return Poly._raw({(m, e + k): c for (m, e), c in self._t.items()})

    def eps_power_map(self, n: int) -> "Poly":
        """Substitute eps -> eps^n."""
        if n < 1:
            raise InputError("eps power map needs a positive exponent")
        return Poly._raw({(m, e * n): c for (m, e), c in self._t.items()})

    def map_vars(self, fn: Callable[[VarId], VarId]) -> "Poly":
        out: Dict[Key, Rat] = {}
        for (m, e), c in self._t.items():
            d: Dict[VarId, int] = {}
            for v, k in m:
                w = fn(v)
                d[w] = d.get(w, 0) + k
            key = (tuple(sorted(d.items())), e)
            s = out.get(key, 0) + c
            if s:
                out[key] = _norm(s)
            else:
                out.pop(key, None)
        return Poly._raw(out)

    def coefficients(self, active: Callable[[VarId], bool]) -> Dict[Monomial, "Poly"]:
        """Group by the monomial in the ``active`` variables."""
        out: Dict[Monomial, Dict[Key, Rat]] = {}
        for (m, e), c in self._t.items():
            a, b = mono_split(m, active)
            out.setdefault(a, {})[(b, e)] = c
        return {a: Poly._raw(t) for a, t in out.items()}

    def substitute(
        self,
        assignment: Mapping[VarId, object],
        eps_cutoff: Optional[int] = None,
        budget: Optional[int] = None,
    ) -> "Poly":
        """Replace variables by polynomials.

        With ``eps_cutoff`` set, every term whose eps exponent exceeds the
        cutoff is dropped, and partial products that cannot come back under
        the cutoff are pruned early.  The result is then exact up to that
        exponent.
        """
        assign = {v: Poly.coerce(p) for v, p in assignment.items()}
        out: Dict[Key, Rat] = {}
        work = 0
        for (m, e), c in self._t.items():
            factors: List[Poly] = []
            keep: List[Tuple[VarId, int]] = []
            dead = False
            for v, k in m:
                p = assign.get(v)
                if p is None:
                    keep.append((v, k))
                elif not p._t:
                    dead = True
                    break
                else:
                    factors.extend([p] * k)
            if dead:
                continue
            partial: Dict[Key, Rat] = {(tuple(keep), e): c}
            if eps_cutoff is None:
                for p in factors:
                    partial = _mul_terms(partial, p._t)
                    work += len(partial)
                    if budget is not None and work > budget:
                        raise BudgetExceeded(f"substitution exceeded {budget} terms")
            else:
                factors.sort(key=lambda p: -len(p._t))
                suffix = [0] * (len(factors) + 1)
                for i in range(len(factors) - 1, -1, -1):
                    suffix[i] = suffix[i + 1] + factors[i].eps_order()
                if e + suffix[0] > eps_cutoff:
                    continue
                for i, p in enumerate(factors):
                    partial = _mul_terms(partial, p._t, eps_cutoff - suffix[i + 1])
                    work += len(partial)
                    if budget is not None and work > budget:
                        raise BudgetExceeded(f"substitution exceeded {budget} terms")
                    if not partial:
                        break
            for key, cc in partial.items():
                s = out.get(key, 0) + cc
                if s:
                    out[key] = _norm(s)
                else:
                    out.pop(key, None)
        return Poly._raw(out)

    def evaluate(self, point: Mapping[VarId, object], eps=None) -> Union[Rat, EpsScalar, "Poly"]:
        """Evaluate at rational values; returns a rational when fully numeric."""
        res = self.substitute({v: Poly.const(rat(c)) for v, c in point.items()})
        if eps is not None:
            if not res.is_constant():
                return res
            return res.as_scalar().evaluate(eps)
        if res.is_constant():
            s = res.as_scalar()
            if all(k == 0 for k in s.terms):
                return s.coeff(0)
            return s
        return res

    # serialization
    def to_json(self) -> Dict[str, list]:
        terms = []
        for m, s in sorted(self.by_monomial().items(), key=lambda kv: mono_sort_key(kv[0])):
            terms.append({"coef": s.to_json(), "mono": {str(v): e for v, e in m}})
        return {"terms": terms}

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)

    @classmethod
    def from_json(cls, data) -> "Poly":
        if isinstance(data, str):
            try:
                data = json.loads(data)
            except json.JSONDecodeError as exc:
                raise InputError(f"bad polynomial JSON: {exc}") from exc
        if not isinstance(data, dict) or "terms" not in data:
            raise InputError("polynomial JSON needs a 'terms' list")
        t: Dict[Key, Rat] = {}
        for term in data["terms"]:
            try:
                coef = EpsScalar.from_json(term["coef"])
                mono_d = {}
                for name, e in term.get("mono", {}).items():
                    if not isinstance(e, int) or e < 0:
                        raise InputError(f"bad exponent {e!r}")
                    v = parse_var(name)
                    mono_d[v] = mono_d.get(v, 0) + e
            except (KeyError, TypeError, AttributeError) as exc:
                raise InputError(f"bad term {term!r}") from exc
            m = tuple(sorted((v, e) for v, e in mono_d.items() if e))
            for k, c in coef.terms.items():
                s = t.get((m, k), 0) + c
                if s:
                    t[(m, k)] = _norm(s)
                else:
                    t.pop((m, k), None)
        return cls._raw(t)

    def __repr__(self) -> str:
        return f"Poly({self})"

    def __str__(self) -> str:
        if not self._t:
            return "0"
        parts = []
        for m, s in sorted(self.by_monomial().items(), key=lambda kv: mono_sort_key(kv[0])):
            cs = str(s)
            if len(s.terms) > 1 or "eps" in cs:
                cs = f"({cs})"
            parts.append(cs if not m else (mono_str(m) if cs == "1" else f"{cs}*{mono_str(m)}"))
        return " + ".join(parts)


def mono_sort_key(m: Monomial):
    return (-mono_degree(m), tuple((v.family, v.indices, -e) for v, e in m))


def var(name_or_id) -> Poly:
    if isinstance(name_or_id, VarId):
        return Poly.var(name_or_id)
    return Poly.var(parse_var(name_or_id))


def const(c) -> Poly:
    return Poly.const(c)


def add(a, b) -> Poly:
    return Poly.coerce(a) + Poly.coerce(b)


def mul(a, b) -> Poly:
    return Poly.coerce(a) * Poly.coerce(b)


def substitute(p: Poly, assignment: Mapping[VarId, object], eps_cutoff: Optional[int] = None) -> Poly:
    return p.substitute(assignment, eps_cutoff=eps_cutoff)


def eps_slice(p: Poly, k: int) -> Poly:
    return p.eps_slice(k)


def eps_order(p: Poly) -> int:
    return p.eps_order()


def poly_sum(items: Iterable[Poly]) -> Poly:
    acc: Dict[Key, Rat] = {}
    for p in items:
        for k, c in p._t.items():
            s = acc.get(k, 0) + c
            if s:
                acc[k] = s
            else:
                acc.pop(k, None)
    return Poly._raw({k: _norm(c) for k, c in acc.items() if c})


# ---------------------------------------------------------------- orders


@dataclass
class MonomialOrder:
    """Lex or weight order over a list of variables.

    ``variables`` is the lex priority list (first is biggest).  A weight
    order compares weight vectors first, in sequence, and breaks ties by
    lex on ``variables``.
    """

    variables: List[VarId]
    weights: List[Dict[VarId, int]] = field(default_factory=list)

    @classmethod
    def lex(cls, variables: Sequence[VarId]) -> "MonomialOrder":
        return cls(list(variables))

    @classmethod
    def weighted(cls, weights: Sequence[Mapping[VarId, int]], tiebreak: Sequence[VarId]) -> "MonomialOrder":
        return cls(list(tiebreak), [dict(w) for w in weights])

    def __post_init__(self):
        if len(set(self.variables)) != len(self.variables):
            raise InputError("repeated variable in monomial order")

    def active(self, v: VarId) -> bool:
        return v in self._vset

    @property
    def _vset(self):
        return set(self.variables) | {v for w in self.weights for v in w}

    def key(self, m: Monomial) -> Tuple[int, ...]:
        d = dict(m)
        head = tuple(sum(w.get(v, 0) * e for v, e in m) for w in self.weights)
        return head + tuple(d.get(v, 0) for v in self.variables)


def leading(p: Poly, order: MonomialOrder) -> Tuple[Monomial, Poly]:
    """Leading monomial in the order's variables and its coefficient.

    Variables not mentioned by the order are treated as coefficients, so
    the coefficient returned is a polynomial in them (with eps).
    """
    if p.is_zero():
        raise ZeroPolynomial("leading term of the zero polynomial")
    vs = order._vset
    groups = p.coefficients(lambda v: v in vs)
    lm = max(groups, key=order.key)
    return lm, groups[lm]


def leading_term(p: Poly, order: MonomialOrder) -> Poly:
    lm, lc = leading(p, order)
    return lc * Poly.monomial(lm)


def parse_poly(text: str) -> Poly:
    """Parse ``2*x[1,1]*x[2,2] - x[1,2]**2 + eps*x[1,1]/3`` or the JSON form."""
    text = text.strip()
    if text.startswith("{"):
        return Poly.from_json(text)
    try:
        tree = ast.parse(text, mode="eval")
    except SyntaxError as exc:
        raise InputError(f"cannot parse polynomial: {exc.msg}") from exc

    def walk(node) -> Poly:
        if isinstance(node, ast.Expression):
            return walk(node.body)
        if isinstance(node, ast.Constant) and isinstance(node.value, int) and not isinstance(node.value, bool):
            return Poly.const(node.value)
        if isinstance(node, ast.Name):
            if node.id == "eps":
                return Poly.eps(1)
            return Poly.var(parse_var(node.id))
        if isinstance(node, ast.Subscript) and isinstance(node.value, ast.Name):
            return Poly.var(parse_var(ast.unparse(node)))
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
            inner = walk(node.operand)
            return -inner if isinstance(node.op, ast.USub) else inner
        if isinstance(node, ast.BinOp):
            left = walk(node.left)
            if isinstance(node.op, ast.Pow):
                try:
                    e = ast.literal_eval(node.right)
                except ValueError:
                    e = None
                if not isinstance(e, int) or isinstance(e, bool):
                    raise InputError("exponents must be integer literals")
                if e < 0:
                    s = left.as_scalar() if left.is_constant() else None
                    if s is not None and s.is_monomial():
                        (k, c), = s.terms.items()
                        return Poly.const(Fraction(1) / Fraction(c) ** -e, eps=k * e)
                    raise InputError("negative powers are only allowed for eps")
                return left ** e
            right = walk(node.right)
            if isinstance(node.op, ast.Add):
                return left + right
            if isinstance(node.op, ast.Sub):
                return left - right
            if isinstance(node.op, ast.Mult):
                return left * right
            if isinstance(node.op, ast.Div):
                if not right.is_constant():
                    raise InputError("can only divide by a constant or a power of eps")
                return left / right.as_scalar()
        raise InputError(f"unsupported syntax: {ast.unparse(node)}")

    return walk(tree)
