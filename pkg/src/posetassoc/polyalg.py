"""Exact integer polynomials in x (IntPoly) and in (t, x) (BiPoly), plus the
polynomial families used throughout the package.

All arithmetic is over Python ints. Anywhere a division shows up in a formula
it is done with ``exact_div`` which raises if the remainder is nonzero.
"""

from __future__ import annotations

import re
from functools import lru_cache
from math import comb, factorial, prod
from typing import Callable, Iterable, Iterator, Sequence


class IntPoly:
    """Univariate polynomial with integer coefficients, ``coeffs[i]`` is the
    coefficient of ``x**i``. Trailing zeros are stripped; zero is ``()``."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable[int] = ()):
        cs = [int(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        object.__setattr__(self, "coeffs", tuple(cs))

    def __setattr__(self, name, value):
        raise AttributeError("IntPoly is immutable")

    @classmethod
    def const(cls, c: int) -> IntPoly:
        return cls([c])

    @classmethod
    def monomial(cls, deg: int, c: int = 1) -> IntPoly:
        return cls([0] * deg + [c])

    @classmethod
    def promote(cls, other) -> IntPoly:
        if isinstance(other, IntPoly):
            return other
        if isinstance(other, int):
            return cls([other])
        return NotImplemented

    @property
    def degree(self) -> int:
        """Degree; -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    def __len__(self):
        return len(self.coeffs)

    def __getitem__(self, i: int) -> int:
        if 0 <= i < len(self.coeffs):
            return self.coeffs[i]
        return 0

    def __iter__(self) -> Iterator[int]:
        return iter(self.coeffs)

    def __bool__(self):
        return bool(self.coeffs)

    def __eq__(self, other):
        other = IntPoly.promote(other)
        if other is NotImplemented:
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(("IntPoly", self.coeffs))

    def __add__(self, other):
        other = IntPoly.promote(other)
        if other is NotImplemented:
            return NotImplemented
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        cs = list(a)
        for i, c in enumerate(b):
            cs[i] += c
        return IntPoly(cs)

    __radd__ = __add__

    def __neg__(self):
        return IntPoly(-c for c in self.coeffs)

    def __sub__(self, other):
        other = IntPoly.promote(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, int):
            return IntPoly(c * other for c in self.coeffs)
        if not isinstance(other, IntPoly):
            return NotImplemented
        if not self.coeffs or not other.coeffs:
            return IntPoly()
        cs = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    cs[i + j] += a * b
        return IntPoly(cs)

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if e < 0:
            raise ValueError("negative exponent")
        result = IntPoly.const(1)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def exact_div(self, d: int) -> IntPoly:
        """Divide every coefficient by the integer ``d``; raise on a remainder."""
        if d == 0:
            raise ZeroDivisionError("division by zero")
        out = []
        for c in self.coeffs:
            q, r = divmod(c, d)
            if r:
                raise ArithmeticError(f"{self} is not divisible by {d}")
            out.append(q)
        return IntPoly(out)

    def __call__(self, x):
        """Evaluate at an int, or compose with another IntPoly (Horner)."""
        acc = IntPoly() if isinstance(x, IntPoly) else 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def shift(self, c: int) -> IntPoly:
        """Return p(x + c)."""
        return self(IntPoly([c, 1]))

    def reverse(self, n: int) -> IntPoly:
        """``x**(n-1) * p(1/x)``: the coefficient list reversed within length n."""
        if self.degree > n - 1:
            raise ValueError(f"degree {self.degree} exceeds n-1 = {n - 1}")
        cs = list(self.coeffs) + [0] * (n - len(self.coeffs))
        return IntPoly(reversed(cs))

    def is_palindromic(self, d: int | None = None) -> bool:
        if d is None:
            d = self.degree
        cs = [self[i] for i in range(d + 1)]
        return self.degree <= d and cs == cs[::-1]

    def render(self, var: str = "x") -> str:
        return render_poly(self.coeffs, var)

    def __str__(self):
        return self.render()

    def __repr__(self):
        return f"IntPoly({list(self.coeffs)})"


X = IntPoly([0, 1])
ONE = IntPoly([1])


def render_poly(coeffs: Sequence[int], var: str = "x") -> str:
    """Ascending-power rendering, e.g. ``1 + 3x + x^2``; zero renders as ``0``."""
    out = ""
    for i, c in enumerate(coeffs):
        if c == 0:
            continue
        mag = abs(c)
        if i == 0:
            body = str(mag)
        else:
            mono = var if i == 1 else f"{var}^{i}"
            body = mono if mag == 1 else f"{mag}{mono}"
        if not out:
            out = ("-" if c < 0 else "") + body
        else:
            out += (" - " if c < 0 else " + ") + body
    return out or "0"


_TERM = re.compile(r"^(\d*)\s*(?:\*?\s*([A-Za-z])(?:\s*\^\s*(\d+))?)?$")


def parse_poly(text: str, var: str = "x") -> IntPoly:
    """Parse the ascending-power grammar produced by ``render_poly``.

    Any term order is accepted, as are ``*`` between coefficient and variable
    and repeated powers (which are summed).
    """
    s = text.strip()
    if not s:
        raise ValueError("empty polynomial")
    # split on top-level signs, keeping them
    pieces = re.findall(r"[+-]?[^+-]+", s.replace(" ", ""))
    if "".join(pieces) != s.replace(" ", ""):
        raise ValueError(f"cannot parse polynomial {text!r}")
    cs: dict[int, int] = {}
    for piece in pieces:
        sign = -1 if piece.startswith("-") else 1
        body = piece.lstrip("+-")
        m = _TERM.match(body)
        if not m or not body:
            raise ValueError(f"bad term {piece!r} in {text!r}")
        coef, v, exp = m.groups()
        if v is None:
            if not coef:
                raise ValueError(f"bad term {piece!r}")
            deg = 0
        else:
            if v != var:
                raise ValueError(f"unexpected variable {v!r} (expected {var!r})")
            deg = int(exp) if exp else 1
        c = int(coef) if coef else 1
        cs[deg] = cs.get(deg, 0) + sign * c
    top = max(cs) if cs else -1
    return IntPoly(cs.get(i, 0) for i in range(top + 1))


class BiPoly:
    """Polynomial in t whose coefficients are IntPolys in x.

    ``coeffs[l]`` is the x-polynomial multiplying ``t**l``.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable[IntPoly | int] = ()):
        cs = [IntPoly.promote(c) for c in coeffs]
        while cs and not cs[-1]:
            cs.pop()
        object.__setattr__(self, "coeffs", tuple(cs))

    def __setattr__(self, name, value):
        raise AttributeError("BiPoly is immutable")

    @classmethod
    def t_power(cls, l: int, c: IntPoly | int = 1) -> BiPoly:
        return cls([IntPoly()] * l + [IntPoly.promote(c)])

    @property
    def t_degree(self) -> int:
        return len(self.coeffs) - 1

    def __getitem__(self, l: int) -> IntPoly:
        if 0 <= l < len(self.coeffs):
            return self.coeffs[l]
        return IntPoly()

    def coefficient(self, l: int, k: int) -> int:
        """Coefficient of ``t**l * x**k``."""
        return self[l][k]

    def terms(self) -> Iterator[tuple[int, int, int]]:
        """Yield ``(l, k, c)`` for every nonzero coefficient."""
        for l, p in enumerate(self.coeffs):
            for k, c in enumerate(p.coeffs):
                if c:
                    yield l, k, c

    def __eq__(self, other):
        if not isinstance(other, BiPoly):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(("BiPoly", self.coeffs))

    def __add__(self, other):
        if not isinstance(other, BiPoly):
            return NotImplemented
        n = max(len(self.coeffs), len(other.coeffs))
        return BiPoly(self[i] + other[i] for i in range(n))

    def __sub__(self, other):
        if not isinstance(other, BiPoly):
            return NotImplemented
        n = max(len(self.coeffs), len(other.coeffs))
        return BiPoly(self[i] - other[i] for i in range(n))

    def __mul__(self, other):
        if isinstance(other, (int, IntPoly)):
            return BiPoly(c * other for c in self.coeffs)
        if not isinstance(other, BiPoly):
            return NotImplemented
        if not self.coeffs or not other.coeffs:
            return BiPoly()
        cs = [IntPoly()] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            for j, b in enumerate(other.coeffs):
                cs[i + j] = cs[i + j] + a * b
        return BiPoly(cs)

    __rmul__ = __mul__

    def exact_div(self, d: int) -> BiPoly:
        return BiPoly(c.exact_div(d) for c in self.coeffs)

    def render(self) -> str:
        """Single-line form: ``t^l(<poly in x>)`` terms joined by `` + ``."""
        parts = []
        for l, p in enumerate(self.coeffs):
            if not p:
                continue
            tpart = "" if l == 0 else ("t" if l == 1 else f"t^{l}")
            if tpart and p == ONE:
                parts.append(tpart)
            else:
                parts.append(f"{tpart}({p.render()})")
        return " + ".join(parts) or "0"

    def render_lines(self) -> str:
        """One ``t^l: <poly>`` line per nonzero t-coefficient."""
        lines = [f"t^{l}: {p.render()}" for l, p in enumerate(self.coeffs) if p]
        return "\n".join(lines) or "0"

    def __str__(self):
        return self.render()

    def __repr__(self):
        return f"BiPoly({[list(p.coeffs) for p in self.coeffs]})"


_BI_TERM = re.compile(r"^(?:t(?:\^(\d+))?)?(?:\((.*)\))?$")


def parse_bipoly(text: str) -> BiPoly:
    """Parse either ``BiPoly.render`` or ``BiPoly.render_lines`` output."""
    s = text.strip()
    if s == "0":
        return BiPoly()
    cs: dict[int, IntPoly] = {}
    if ":" in s:
        for line in s.splitlines():
            line = line.strip()
            if not line:
                continue
            head, _, body = line.partition(":")
            head = head.strip()
            if not head.startswith("t^"):
                raise ValueError(f"bad line {line!r}")
            l = int(head[2:])
            cs[l] = cs.get(l, IntPoly()) + parse_poly(body)
    else:
        depth, start, terms = 0, 0, []
        for i, ch in enumerate(s):
            if ch == "(":
                depth += 1
            elif ch == ")":
                depth -= 1
            elif ch == "+" and depth == 0:
                terms.append(s[start:i])
                start = i + 1
        terms.append(s[start:])
        for term in terms:
            term = term.replace(" ", "")
            m = _BI_TERM.match(term)
            if not m or not term:
                raise ValueError(f"bad term {term!r}")
            exp, body = m.groups()
            l = int(exp) if exp else (1 if term.startswith("t") else 0)
            p = parse_poly(body) if body is not None else ONE
            cs[l] = cs.get(l, IntPoly()) + p
    top = max(cs) if cs else -1
    return BiPoly(cs.get(l, IntPoly()) for l in range(top + 1))


# --- named families -------------------------------------------------------

@lru_cache(maxsize=None)
def narayana_a(n: int) -> IntPoly:
    """Type A Narayana polynomial N_n."""
    if n < 1:
        raise ValueError("narayana_a needs n >= 1")
    cs = []
    for k in range(n):
        num = comb(n, k) * comb(n, k + 1)
        q, r = divmod(num, n)
        assert r == 0, (n, k)
        cs.append(q)
    return IntPoly(cs)


@lru_cache(maxsize=None)
def narayana_b(n: int) -> IntPoly:
    """Type B Narayana polynomial B_n."""
    if n < 1:
        raise ValueError("narayana_b needs n >= 1")
    return IntPoly(comb(n - 1, k) ** 2 for k in range(n))


@lru_cache(maxsize=None)
def f_assoc(n: int) -> IntPoly:
    """F_n(x) = N_n(x + 1), with F_0 = 1."""
    if n < 0:
        raise ValueError("f_assoc needs n >= 0")
    if n == 0:
        return ONE
    return narayana_a(n).shift(1)


@lru_cache(maxsize=None)
def g_typeb(n: int) -> IntPoly:
    """G_n(x) = B_n(x + 1), with G_0 = 1."""
    if n < 0:
        raise ValueError("g_typeb needs n >= 0")
    if n == 0:
        return ONE
    return narayana_b(n).shift(1)


@lru_cache(maxsize=None)
def f_tilde(n: int) -> IntPoly:
    """F~_n(x) = n F_{n-1}(x)."""
    if n < 1:
        raise ValueError("f_tilde needs n >= 1")
    return f_assoc(n - 1) * n


def reverse(p: IntPoly, n: int) -> IntPoly:
    """The palindromic companion ``x**(n-1) p(1/x)`` of the n-th family member."""
    return p.reverse(n)


def reversed_family(family: Callable[[int], IntPoly]) -> Callable[[int], IntPoly]:
    """n -> reverse(family(n), n)."""
    def rev(n: int) -> IntPoly:
        return family(n).reverse(n)
    rev.__name__ = f"{getattr(family, '__name__', 'family')}_rev"
    return rev


FAMILIES: dict[str, Callable[[int], IntPoly]] = {
    "N": narayana_a,
    "B": narayana_b,
    "F": f_assoc,
    "G": g_typeb,
    "Ftilde": f_tilde,
}


def partition_product(family: Callable[[int], IntPoly] | str, lam: Sequence[int]) -> IntPoly:
    """P_lambda = P_{lambda_1} * ... * P_{lambda_l}."""
    if isinstance(family, str):
        family = FAMILIES[family]
    if not lam or any(p <= 0 for p in lam):
        raise ValueError(f"not a partition of a positive integer: {lam!r}")
    out = ONE
    for part in lam:
        out = out * family(part)
    return out


# --- partitions and Stirling numbers ------------------------------------

def partitions(n: int, largest: int | None = None) -> Iterator[tuple[int, ...]]:
    """Partitions of n as weakly decreasing tuples, in reverse-lex order."""
    if largest is None:
        largest = n
    if n == 0:
        yield ()
        return
    for first in range(min(n, largest), 0, -1):
        for rest in partitions(n - first, first):
            yield (first,) + rest


def class_size(lam: Sequence[int]) -> int:
    """Number of permutations of cycle type lam: n! / (prod lam_i * prod c_i!)."""
    n = sum(lam)
    mult: dict[int, int] = {}
    for p in lam:
        mult[p] = mult.get(p, 0) + 1
    denom = prod(lam) * prod(factorial(c) for c in mult.values())
    q, r = divmod(factorial(n), denom)
    assert r == 0
    return q


@lru_cache(maxsize=None)
def stirling_first(n: int, k: int) -> int:
    """Unsigned Stirling number of the first kind s_{n,k}."""
    if n < 0 or k < 0:
        raise ValueError("negative argument")
    if n == 0:
        return 1 if k == 0 else 0
    if k == 0 or k > n:
        return 0
    return stirling_first(n - 1, k - 1) + (n - 1) * stirling_first(n - 1, k)


# --- f/h/gamma conversions ---------------------------------------------

def f_to_h(f: IntPoly) -> IntPoly:
    """h(t) = f(t - 1)."""
    return f.shift(-1)


def h_to_f(h: IntPoly) -> IntPoly:
    """f(t) = h(t + 1)."""
    return h.shift(1)


def gamma_polynomial(h: IntPoly, d: int) -> IntPoly:
    """Unique gamma with h(t) = sum_i gamma_i t^i (1+t)^(d-2i).

    The lowest remaining coefficient of h at t^i can only come from the
    i-th basis element, so peel them off in increasing i.
    """
    if d < 0:
        raise ValueError("negative dimension")
    if not h.is_palindromic(d) or h.degree > d:
        raise ValueError(f"{h} is not palindromic of degree {d}")
    rest = h
    gamma = []
    for i in range(d // 2 + 1):
        g = rest[i]
        gamma.append(g)
        if g:
            rest = rest - IntPoly.monomial(i, g) * IntPoly([1, 1]) ** (d - 2 * i)
    if rest:
        raise ArithmeticError(f"gamma expansion of {h} left remainder {rest}")
    return IntPoly(gamma)


# --- bivariate identity sides ---------------------------------------------

def rising_factorial_t(l: int, mode: str = "x-steps") -> BiPoly:
    """t(t+x)...(t+(l-1)x) for ``x-steps``; t(t+1)...(t+l-1) for ``unit-steps``."""
    if l < 1:
        raise ValueError("rising_factorial_t needs l >= 1")
    if mode not in ("x-steps", "unit-steps"):
        raise ValueError(f"unknown mode {mode!r}")
    out = BiPoly.t_power(1)
    for j in range(1, l):
        step = IntPoly.monomial(1, j) if mode == "x-steps" else IntPoly.const(j)
        out = out * BiPoly([step, ONE])
    return out


def sum_over_sn(n: int, term: Callable[[tuple[int, ...]], BiPoly | IntPoly]):
    """Sum ``term(cycle_type(w))`` over all w in S_n, grouped by cycle type."""
    total = None
    for lam in partitions(n):
        contrib = term(lam) * class_size(lam)
        total = contrib if total is None else total + contrib
    return total


def eq2_lhs(n: int) -> BiPoly:
    """sum_{w in S_n} t^{l_w} G_w(x)."""
    return sum_over_sn(n, lambda lam: BiPoly.t_power(len(lam), partition_product(g_typeb, lam)))


def eq2_rhs(n: int) -> BiPoly:
    """sum_{w in S_n} t(t+x)...(t+(l_w-1)x) F~_w(x)."""
    return sum_over_sn(
        n, lambda lam: rising_factorial_t(len(lam), "x-steps") * partition_product(f_tilde, lam)
    )


def eq3_lhs(n: int) -> BiPoly:
    """sum_{w in S_n} t^{l_w} G^rev_w(x)."""
    g_rev = reversed_family(g_typeb)
    return sum_over_sn(n, lambda lam: BiPoly.t_power(len(lam), partition_product(g_rev, lam)))


def eq3_rhs(n: int) -> BiPoly:
    """sum_{w in S_n} t(t+1)...(t+l_w-1) F~^rev_w(x)."""
    ft_rev = reversed_family(f_tilde)
    return sum_over_sn(
        n, lambda lam: rising_factorial_t(len(lam), "unit-steps") * partition_product(ft_rev, lam)
    )


def eq2_to_eq3(p: BiPoly, n: int) -> BiPoly:
    """Divide by x^n, then send t/x -> t and x -> 1/x.

    A term t^a x^b becomes t^a x^(n-a-b); requires a + b <= n for every term.
    """
    cs: dict[int, dict[int, int]] = {}
    for a, b, c in p.terms():
        e = n - a - b
        if e < 0:
            raise ValueError(f"term t^{a}x^{b} has total degree above {n}")
        cs.setdefault(a, {})[e] = c
    top = max(cs) if cs else -1
    return BiPoly(
        IntPoly(cs.get(a, {}).get(e, 0) for e in range(n + 1)) for a in range(top + 1)
    )
