"""Sparse multivariate polynomials with exact rational coefficients.

A polynomial is a map from exponent tuples to nonzero ``Fraction``
coefficients over a fixed, ordered tuple of variable names.  Terms are
ordered graded-lexicographically (total degree first, then lex with the
first variable largest).

The gcd works over the integers: both inputs are scaled to primitive
integer polynomials and common monomial factors are split off.  The rest
first goes through the evaluate-and-interpolate heuristic gcd, whose
candidate is accepted only if it divides both inputs exactly; when the
heuristic gives up, a recursive primitive PRS in which the coefficients
of the main variable are polynomials in the remaining variables decides.
"""
from __future__ import annotations

from fractions import Fraction
from functools import reduce
from math import gcd, isqrt, lcm
from typing import Iterable, Mapping, Sequence, Union

from ..errors import ChartMismatch, DivisionByZero, UnknownVariable

Monomial = tuple[int, ...]
Scalar = Union[int, Fraction]


def grlex_key(m: Monomial) -> tuple[int, Monomial]:
    return (sum(m), m)


def _as_fraction(c: object) -> Fraction:
    if isinstance(c, Fraction):
        return c
    if isinstance(c, int) and not isinstance(c, bool):
        return Fraction(c)
    raise TypeError(f"exact rational coefficient expected, got {type(c).__name__}")


class Polynomial:
    __slots__ = ("variables", "_terms", "_hash")

    def __init__(self, variables: Sequence[str], terms: Mapping[Monomial, Scalar] | None = None):
        self.variables = tuple(variables)
        n = len(self.variables)
        clean: dict[Monomial, Fraction] = {}
        for m, c in (terms or {}).items():
            m = tuple(m)
            if len(m) != n or any(e < 0 for e in m):
                raise ValueError(f"bad exponent tuple {m} for variables {self.variables}")
            c = _as_fraction(c)
            if c:
                clean[m] = clean.get(m, Fraction(0)) + c
                if not clean[m]:
                    del clean[m]
        self._terms = clean
        self._hash = None

    @classmethod
    def _make(cls, variables: tuple[str, ...], terms: dict[Monomial, Fraction]) -> "Polynomial":
        # trusted constructor: terms already clean
        p = cls.__new__(cls)
        p.variables = variables
        p._terms = terms
        p._hash = None
        return p

    @classmethod
    def constant(cls, variables: Sequence[str], c: Scalar) -> "Polynomial":
        variables = tuple(variables)
        c = _as_fraction(c)
        return cls._make(variables, {(0,) * len(variables): c} if c else {})

    @classmethod
    def variable(cls, variables: Sequence[str], name: str) -> "Polynomial":
        variables = tuple(variables)
        if name not in variables:
            raise UnknownVariable(f"unknown variable {name!r}; chart has {variables}")
        m = tuple(1 if v == name else 0 for v in variables)
        return cls._make(variables, {m: Fraction(1)})

    # -- inspection -------------------------------------------------------

    @property
    def terms(self) -> dict[Monomial, Fraction]:
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def __len__(self) -> int:
        return len(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def is_constant(self) -> bool:
        if not self._terms:
            return True
        if len(self._terms) > 1:
            return False
        (m,) = self._terms
        return not any(m)

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise ValueError("polynomial is not constant")
        return next(iter(self._terms.values()), Fraction(0))

    def leading_monomial(self) -> Monomial:
        if not self._terms:
            raise ValueError("zero polynomial has no leading term")
        return max(self._terms, key=grlex_key)

    def leading_coefficient(self) -> Fraction:
        return self._terms[self.leading_monomial()]

    def total_degree(self) -> int:
        return max((sum(m) for m in self._terms), default=0)

    def degree(self, var: str) -> int:
        i = self._index(var)
        return max((m[i] for m in self._terms), default=0)

    def sorted_terms(self) -> list[tuple[Monomial, Fraction]]:
        return sorted(self._terms.items(), key=lambda t: grlex_key(t[0]), reverse=True)

    def _index(self, var: str) -> int:
        try:
            return self.variables.index(var)
        except ValueError:
            raise UnknownVariable(f"unknown variable {var!r}; chart has {self.variables}") from None

    # -- arithmetic -------------------------------------------------------

    def _coerce(self, other: object) -> "Polynomial":
        if isinstance(other, Polynomial):
            if other.variables != self.variables:
                raise ChartMismatch(f"variables {self.variables} vs {other.variables}")
            return other
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return Polynomial.constant(self.variables, other)
        return NotImplemented

    def __add__(self, other: object) -> "Polynomial":
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if len(other._terms) > len(self._terms):
            big, small = other._terms, self._terms
        else:
            big, small = self._terms, other._terms
        out = dict(big)
        for m, c in small.items():
            v = out.get(m)
            if v is None:
                out[m] = c
            else:
                v += c
                if v:
                    out[m] = v
                else:
                    del out[m]
        return Polynomial._make(self.variables, out)

    __radd__ = __add__

    def __neg__(self) -> "Polynomial":
        return Polynomial._make(self.variables, {m: -c for m, c in self._terms.items()})

    def __sub__(self, other: object) -> "Polynomial":
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other: object) -> "Polynomial":
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def scale(self, c: Scalar) -> "Polynomial":
        c = _as_fraction(c)
        if not c:
            return Polynomial._make(self.variables, {})
        if c == 1:
            return self
        return Polynomial._make(self.variables, {m: v * c for m, v in self._terms.items()})

    def __mul__(self, other: object) -> "Polynomial":
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return self.scale(other)
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        a, b = self._terms, other._terms
        if not a or not b:
            return Polynomial._make(self.variables, {})
        if len(a) == 1 and not any(next(iter(a))):
            return other.scale(next(iter(a.values())))
        if len(b) == 1 and not any(next(iter(b))):
            return self.scale(next(iter(b.values())))
        out: dict[Monomial, Fraction] = {}
        for ma, ca in a.items():
            for mb, cb in b.items():
                m = tuple(x + y for x, y in zip(ma, mb))
                out[m] = out.get(m, 0) + ca * cb
        return Polynomial._make(self.variables, {m: c for m, c in out.items() if c})

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "Polynomial":
        if not isinstance(k, int) or k < 0:
            raise ValueError("exponent must be a non-negative integer")
        result = Polynomial.constant(self.variables, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def diff(self, var: str) -> "Polynomial":
        i = self._index(var)
        out = {}
        for m, c in self._terms.items():
            e = m[i]
            if e:
                out[m[:i] + (e - 1,) + m[i + 1:]] = c * e
        return Polynomial._make(self.variables, out)

    def evaluate(self, values: Sequence[Fraction]) -> Fraction:
        total = Fraction(0)
        for m, c in self._terms.items():
            t = c
            for v, e in zip(values, m):
                if e:
                    t *= v ** e
            total += t
        return total

    # -- comparison / printing -------------------------------------------

    def __eq__(self, other: object) -> bool:
        if isinstance(other, Polynomial):
            return self.variables == other.variables and self._terms == other._terms
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return self.is_constant() and self.constant_value() == other
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.variables, frozenset(self._terms.items())))
        return self._hash

    def __repr__(self) -> str:
        return f"Polynomial({self.variables!r}, {str(self)!r})"

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        pieces = []
        for m, c in self.sorted_terms():
            mono = "*".join(
                v if e == 1 else f"{v}^{e}" for v, e in zip(self.variables, m) if e
            )
            sign = "-" if c < 0 else "+"
            a = abs(c)
            if not mono:
                body = str(a)
            elif a == 1:
                body = mono
            else:
                body = f"{a}*{mono}"
            pieces.append((sign, body))
        first_sign, first = pieces[0]
        out = ("-" if first_sign == "-" else "") + first
        for sign, body in pieces[1:]:
            out += f" {sign} {body}"
        return out

    def monic(self) -> "Polynomial":
        """Scale so the grlex leading coefficient is 1 (zero stays zero)."""
        if not self._terms:
            return self
        return self.scale(1 / self.leading_coefficient())


# ---------------------------------------------------------------------------
# Integer-coefficient kernels.  Polynomials here are plain dicts
# {exponent tuple: int}; all of them share one variable count.

IntPoly = dict  # dict[Monomial, int]


def _to_primitive_int(p: Polynomial) -> tuple[Fraction, IntPoly]:
    """Write p = c * q with q primitive in Z[x] and positive leading coefficient."""
    den = reduce(lcm, (c.denominator for c in p._terms.values()), 1)
    ints = {m: int(c * den) for m, c in p._terms.items()}
    cont = reduce(gcd, ints.values(), 0)
    if ints[max(ints, key=grlex_key)] < 0:
        cont = -cont
    return Fraction(cont, den), {m: v // cont for m, v in ints.items()}


def _int_mul(a: IntPoly, b: IntPoly) -> IntPoly:
    out: dict = {}
    for ma, ca in a.items():
        for mb, cb in b.items():
            m = tuple(x + y for x, y in zip(ma, mb))
            out[m] = out.get(m, 0) + ca * cb
    return {m: c for m, c in out.items() if c}


def _int_sub(a: IntPoly, b: IntPoly) -> IntPoly:
    out = dict(a)
    for m, c in b.items():
        v = out.get(m, 0) - c
        if v:
            out[m] = v
        else:
            out.pop(m, None)
    return out


def _int_divexact(a: IntPoly, b: IntPoly) -> IntPoly | None:
    """Quotient a/b in Z[x], or None if b does not divide a over Z."""
    if not a:
        return {}
    lm_b = max(b)
    lc_b = b[lm_b]
    rem = dict(a)
    q: dict = {}
    while rem:
        lm_r = max(rem)
        shift = tuple(x - y for x, y in zip(lm_r, lm_b))
        if any(s < 0 for s in shift):
            return None
        c, r = divmod(rem[lm_r], lc_b)
        if r:
            return None
        q[shift] = c
        for m, cb in b.items():
            key = tuple(x + y for x, y in zip(m, shift))
            v = rem.get(key, 0) - c * cb
            if v:
                rem[key] = v
            else:
                rem.pop(key, None)
    return q


def _split_main(f: IntPoly) -> dict[int, IntPoly]:
    out: dict[int, IntPoly] = {}
    for m, c in f.items():
        out.setdefault(m[0], {})[m[1:]] = c
    return out


def _join_main(u: dict[int, IntPoly]) -> IntPoly:
    return {(d,) + m: c for d, coeff in u.items() for m, c in coeff.items()}


def _int_normalize_sign(f: IntPoly) -> IntPoly:
    if f and f[max(f, key=grlex_key)] < 0:
        return {m: -c for m, c in f.items()}
    return f


def _int_gcd(f: IntPoly, g: IntPoly, n: int) -> IntPoly:
    """gcd of two nonzero polynomials in Z[x_0..x_{n-1}], positive leading coefficient."""
    if n == 0:
        return {(): gcd(f[()], g[()])}
    if len(f) == 1 and len(g) == 1:
        (mf, cf), = f.items()
        (mg, cg), = g.items()
        return {tuple(map(min, mf, mg)): gcd(cf, cg)}
    h = _heuristic_gcd(f, g, n)
    if h is not None:
        return _int_normalize_sign(h)
    return _prs_gcd(f, g, n)


def _int_content(f: IntPoly) -> int:
    return reduce(gcd, f.values())


def _evaluate_main(f: IntPoly, x: int) -> IntPoly:
    out: IntPoly = {}
    for m, c in f.items():
        key = m[1:]
        v = out.get(key, 0) + c * x ** m[0]
        if v:
            out[key] = v
        else:
            out.pop(key, None)
    return out


def _interpolate_main(h: IntPoly, x: int) -> IntPoly:
    """Read each coefficient as symmetric base-x digits of the main variable."""
    half = x // 2
    out: IntPoly = {}
    for m, c in h.items():
        power = 0
        while c:
            digit = c % x
            if digit > half:
                digit -= x
            if digit:
                out[(power,) + m] = digit
            c = (c - digit) // x
            power += 1
    return out


def _heuristic_gcd(f: IntPoly, g: IntPoly, n: int) -> IntPoly | None:
    """Evaluate the main variable at a large integer, recurse, interpolate back.

    Returns None when no evaluation point produced a candidate dividing both.
    """
    cf, cg = _int_content(f), _int_content(g)
    common = gcd(cf, cg)
    f = {m: c // cf for m, c in f.items()}
    g = {m: c // cg for m, c in g.items()}
    norm_f = max(abs(c) for c in f.values())
    norm_g = max(abs(c) for c in g.values())
    lc_f = abs(f[max(f)])
    lc_g = abs(g[max(g)])
    bound = 2 * min(norm_f, norm_g) + 29
    x = max(min(bound, 99 * isqrt(bound)), 2 * min(norm_f // lc_f, norm_g // lc_g) + 2)
    for _ in range(6):
        ff, gg = _evaluate_main(f, x), _evaluate_main(g, x)
        if ff and gg:
            h = _interpolate_main(_int_gcd(ff, gg, n - 1), x)
            if h:
                content = _int_content(h)
                h = {m: c // content for m, c in h.items()}
                if _int_divexact(f, h) is not None and _int_divexact(g, h) is not None:
                    return {m: c * common for m, c in h.items()}
        x = x * 73794 * isqrt(isqrt(x)) // 27011
    return None


def _prs_gcd(f: IntPoly, g: IntPoly, n: int) -> IntPoly:
    uf, ug = _split_main(f), _split_main(g)
    cf = _content(uf, n - 1)
    cg = _content(ug, n - 1)
    c = _int_gcd(cf, cg, n - 1)
    F = _prim(uf, cf)
    G = _prim(ug, cg)
    if max(F) < max(G):
        F, G = G, F
    while max(G) > 0:
        R = _prem(F, G)
        if not R:
            break
        F, G = G, _prim(R, _content(R, n - 1))
    if max(G) == 0:
        h: IntPoly = {(0,) * n: 1}
    else:
        h = _join_main(G)
    shifted_c = {(0,) + m: v for m, v in c.items()}
    return _int_normalize_sign(_int_mul(shifted_c, h))


def _content(u: dict[int, IntPoly], n: int) -> IntPoly:
    coeffs = sorted(u.values(), key=len)
    cont = coeffs[0]
    for coeff in coeffs[1:]:
        if len(cont) == 1 and abs(next(iter(cont.values()))) == 1 and not any(next(iter(cont))):
            break
        cont = _int_gcd(cont, coeff, n)
    return _int_normalize_sign(cont)


def _prim(u: dict[int, IntPoly], cont: IntPoly) -> dict[int, IntPoly]:
    out = {}
    for d, coeff in u.items():
        q = _int_divexact(coeff, cont)
        assert q is not None, "content must divide every coefficient"
        out[d] = q
    return out


def _prem(F: dict[int, IntPoly], G: dict[int, IntPoly]) -> dict[int, IntPoly]:
    """Pseudo-remainder of F by G in the main variable."""
    dg = max(G)
    lc_g = G[dg]
    R = {d: dict(c) for d, c in F.items()}
    while R and max(R) >= dg:
        dr = max(R)
        lc_r = R[dr]
        shift = dr - dg
        out: dict[int, IntPoly] = {}
        for d, c in R.items():
            out[d] = _int_mul(c, lc_g)
        for d, c in G.items():
            key = d + shift
            out[key] = _int_sub(out.get(key, {}), _int_mul(c, lc_r))
        R = {d: c for d, c in out.items() if c}
    return R


def _monomial_content(terms: Iterable[Monomial], n: int) -> Monomial:
    it = iter(terms)
    low = list(next(it))
    for m in it:
        for i in range(n):
            if m[i] < low[i]:
                low[i] = m[i]
    return tuple(low)


def poly_gcd(a: Polynomial, b: Polynomial) -> Polynomial:
    """Greatest common divisor, scaled to grlex leading coefficient 1.

    gcd(0, 0) is 0 by convention.
    """
    if a.variables != b.variables:
        raise ChartMismatch(f"variables {a.variables} vs {b.variables}")
    variables = a.variables
    n = len(variables)
    if a.is_zero():
        return b.monic()
    if b.is_zero():
        return a.monic()
    one = Polynomial.constant(variables, 1)
    if a.is_constant() or b.is_constant():
        return one
    ma = _monomial_content(a._terms, n)
    mb = _monomial_content(b._terms, n)
    mono = tuple(map(min, ma, mb))
    a_rest = {tuple(x - y for x, y in zip(m, ma)): c for m, c in a._terms.items()}
    b_rest = {tuple(x - y for x, y in zip(m, mb)): c for m, c in b._terms.items()}
    # keep only variables still present in both cofactors
    used = [
        i for i in range(n)
        if any(m[i] for m in a_rest) and any(m[i] for m in b_rest)
    ]
    result: dict[Monomial, Fraction]
    if not used:
        result = {mono: Fraction(1)}
    else:
        pa = Polynomial._make(variables, a_rest)
        pb = Polynomial._make(variables, b_rest)
        _, ia = _to_primitive_int(pa)
        _, ib = _to_primitive_int(pb)
        # order the used variables by ascending degree so the main variable is cheapest
        used.sort(key=lambda i: max(max(m[i] for m in ia), max(m[i] for m in ib)))
        others = [i for i in range(n) if i not in used]

        def compress(p: IntPoly) -> IntPoly:
            # variables outside `used` belong to the content; fold them in by
            # treating the polynomial as one in the used variables with
            # coefficients in Z[others], via recursion on the full ordering
            return {tuple(m[i] for i in used + others): c for m, c in p.items()}

        k = len(used) + len(others)
        h = _int_gcd(compress(ia), compress(ib), k)
        order = used + others
        result = {}
        for m, c in h.items():
            full = [0] * n
            for pos, i in enumerate(order):
                full[i] = m[pos]
            result[tuple(x + y for x, y in zip(full, mono))] = Fraction(c)
    return Polynomial._make(variables, result).monic()


def divide_exact(a: Polynomial, b: Polynomial) -> Polynomial:
    """a / b when b divides a exactly; raises ArithmeticError otherwise."""
    if a.variables != b.variables:
        raise ChartMismatch(f"variables {a.variables} vs {b.variables}")
    if b.is_zero():
        raise DivisionByZero("division by the zero polynomial")
    if b.is_constant():
        return a.scale(1 / b.constant_value())
    if a.is_zero():
        return a
    ca, ia = _to_primitive_int(a)
    cb, ib = _to_primitive_int(b)
    q = _int_divexact(ia, ib)
    if q is None:
        raise ArithmeticError("polynomial division is not exact")
    scale = ca / cb
    return Polynomial._make(a.variables, {m: scale * c for m, c in q.items()})
