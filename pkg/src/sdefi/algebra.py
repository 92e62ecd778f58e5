"""Exact sparse Laurent polynomials over the complex rationals.

A polynomial in ``n`` variables is a mapping from exponent vectors to
coefficients.  An exponent vector is a tuple of ``n`` ints and may contain
negative entries (Laurent terms such as ``x1^-2``); a coefficient is a
:class:`CRational`, a complex number with exact ``fractions.Fraction`` real
and imaginary parts.  The zero polynomial has no terms; zero coefficients
are pruned on construction, so representations are canonical and equality
is structural.

Values are immutable after construction and safe to share.  Term order
everywhere is graded lexicographic: sort key ``(total_degree, exponents)``,
ascending for storage and bases, descending for display.

Floats are deliberately rejected as coefficients — everything in this
module is exact.  Floating point appears only in :meth:`LaurentPoly.evaluate`.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Mapping, Sequence, Union


class DimensionMismatch(ValueError):
    """Operands live in different variable spaces."""


class PoleError(ArithmeticError):
    """Evaluation hit a zero coordinate raised to a negative power."""


RationalLike = Union[int, str, Fraction]


def _as_fraction(x: RationalLike) -> Fraction:
    if isinstance(x, float):
        raise TypeError("exact arithmetic only: pass int, str or Fraction, not float")
    return Fraction(x)


class CRational:
    """Complex number with exact rational real and imaginary parts."""

    __slots__ = ("re", "im")

    def __init__(self, re: RationalLike = 0, im: RationalLike = 0):
        object.__setattr__(self, "re", _as_fraction(re))
        object.__setattr__(self, "im", _as_fraction(im))

    def __setattr__(self, name, value):
        raise AttributeError("CRational is immutable")

    # -- classification ------------------------------------------------
    def is_zero(self) -> bool:
        return not self.re and not self.im

    def is_real(self) -> bool:
        return not self.im

    def __bool__(self) -> bool:
        return not self.is_zero()

    # -- arithmetic ----------------------------------------------------
    @staticmethod
    def _coerce(x) -> "CRational":
        if isinstance(x, CRational):
            return x
        if isinstance(x, (int, Fraction)):
            return CRational(x)
        return NotImplemented  # type: ignore[return-value]

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return CRational(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __neg__(self):
        return CRational(-self.re, -self.im)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return CRational(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return o - self

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return CRational(self.re * o.re - self.im * o.im,
                         self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        d = o.re * o.re + o.im * o.im
        if not d:
            raise ZeroDivisionError("division by zero CRational")
        return CRational((self.re * o.re + self.im * o.im) / d,
                         (self.im * o.re - self.re * o.im) / d)

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return o / self

    def __pow__(self, k: int):
        if not isinstance(k, int):
            raise TypeError("integer powers only")
        if k < 0:
            return (CRational(1) / self) ** (-k)
        out, base = CRational(1), self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def conjugate(self) -> "CRational":
        return CRational(self.re, -self.im)

    def abs2(self) -> Fraction:
        """|z|^2, exactly."""
        return self.re * self.re + self.im * self.im

    # -- conversions / comparisons --------------------------------------
    def __complex__(self) -> complex:
        return complex(float(self.re), float(self.im))

    def __eq__(self, other) -> bool:
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self.re == o.re and self.im == o.im

    def __hash__(self) -> int:
        return hash((self.re, self.im))

    def __repr__(self) -> str:
        return f"CRational({str(self.re)!r}, {str(self.im)!r})"

    def __str__(self) -> str:
        if not self.im:
            return str(self.re)
        if not self.re:
            return f"{self.im}i"
        sign = "+" if self.im > 0 else "-"
        return f"({self.re}{sign}{abs(self.im)}i)"


CoeffLike = Union[int, Fraction, CRational]


def _as_crational(c: CoeffLike) -> CRational:
    if isinstance(c, CRational):
        return c
    return CRational(c)


ExpVec = tuple  # tuple[int, ...]; negative entries allowed


def grlex_key(e: Sequence[int]) -> tuple:
    """Graded-lex sort key: total degree first, then the exponent tuple."""
    return (sum(e), tuple(e))


class LaurentPoly:
    """Sparse Laurent polynomial; immutable after construction."""

    __slots__ = ("dim", "_terms")

    def __init__(self, dim: int,
                 terms: Mapping[ExpVec, CoeffLike] | Iterable[tuple[ExpVec, CoeffLike]] = ()):
        if dim < 1:
            raise ValueError("dim must be >= 1")
        items = terms.items() if isinstance(terms, Mapping) else terms
        acc: dict[tuple, CRational] = {}
        for e, c in items:
            e = tuple(e)
            if len(e) != dim or not all(isinstance(k, int) for k in e):
                raise DimensionMismatch(f"exponent vector {e} does not fit dim {dim}")
            c = _as_crational(c)
            prev = acc.get(e)
            c = c if prev is None else prev + c
            if c.is_zero():
                acc.pop(e, None)
            else:
                acc[e] = c
        object.__setattr__(self, "dim", dim)
        object.__setattr__(self, "_terms", acc)

    def __setattr__(self, name, value):
        raise AttributeError("LaurentPoly is immutable")

    # -- constructors ----------------------------------------------------
    @classmethod
    def zero(cls, dim: int) -> "LaurentPoly":
        return cls(dim)

    @classmethod
    def const(cls, dim: int, c: CoeffLike) -> "LaurentPoly":
        return cls(dim, {(0,) * dim: c})

    @classmethod
    def variable(cls, dim: int, axis: int) -> "LaurentPoly":
        if not 0 <= axis < dim:
            raise DimensionMismatch(f"axis {axis} out of range for dim {dim}")
        e = [0] * dim
        e[axis] = 1
        return cls(dim, {tuple(e): 1})

    @classmethod
    def monomial(cls, dim: int, exps: Sequence[int], coeff: CoeffLike = 1) -> "LaurentPoly":
        return cls(dim, {tuple(exps): coeff})

    # -- inspection -------------------------------------------------------
    def terms(self) -> list[tuple[tuple, CRational]]:
        """Terms sorted ascending graded-lex."""
        return sorted(self._terms.items(), key=lambda t: grlex_key(t[0]))

    def coeff(self, exps: Sequence[int]) -> CRational:
        return self._terms.get(tuple(exps), CRational(0))

    def support(self) -> frozenset:
        return frozenset(self._terms)

    @property
    def is_zero(self) -> bool:
        return not self._terms

    @property
    def is_constant(self) -> bool:
        return all(all(k == 0 for k in e) for e in self._terms)

    def constant_term(self) -> CRational:
        return self._terms.get((0,) * self.dim, CRational(0))

    def has_negative_exponents(self) -> bool:
        return any(min(e) < 0 for e in self._terms)

    def min_total_degree(self) -> int | None:
        return min((sum(e) for e in self._terms), default=None)

    def max_total_degree(self) -> int | None:
        return max((sum(e) for e in self._terms), default=None)

    def leading_term(self) -> tuple[tuple, CRational]:
        """Graded-lex greatest term; raises on the zero polynomial."""
        if not self._terms:
            raise ValueError("zero polynomial has no leading term")
        e = max(self._terms, key=grlex_key)
        return e, self._terms[e]

    def __len__(self) -> int:
        return len(self._terms)

    def __iter__(self) -> Iterator[tuple[tuple, CRational]]:
        return iter(self.terms())

    # -- ring operations ----------------------------------------------------
    def _check_dim(self, other: "LaurentPoly"):
        if self.dim != other.dim:
            raise DimensionMismatch(f"dim {self.dim} vs {other.dim}")

    def __add__(self, other):
        if isinstance(other, (int, Fraction, CRational)):
            other = LaurentPoly.const(self.dim, other)
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        self._check_dim(other)
        out = dict(self._terms)
        for e, c in other._terms.items():
            s = out.get(e, CRational(0)) + c
            if s.is_zero():
                out.pop(e, None)
            else:
                out[e] = s
        return LaurentPoly(self.dim, out)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPoly(self.dim, {e: -c for e, c in self._terms.items()})

    def __sub__(self, other):
        return self + (-other if isinstance(other, LaurentPoly) else -_as_crational(other))

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c: CoeffLike) -> "LaurentPoly":
        c = _as_crational(c)
        if c.is_zero():
            return LaurentPoly.zero(self.dim)
        return LaurentPoly(self.dim, {e: k * c for e, k in self._terms.items()})

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, CRational)):
            return self.scale(other)
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        self._check_dim(other)
        out: dict[tuple, CRational] = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in other._terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                s = out.get(e, CRational(0)) + c1 * c2
                if s.is_zero():
                    out.pop(e, None)
                else:
                    out[e] = s
        return LaurentPoly(self.dim, out)

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction, CRational)):
            return self.scale(other)
        return NotImplemented

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            raise ValueError("nonnegative integer powers only")
        out = LaurentPoly.const(self.dim, 1)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction, CRational)):
            other = LaurentPoly.const(self.dim, other)
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self.dim == other.dim and self._terms == other._terms

    def __hash__(self) -> int:
        return hash((self.dim, frozenset(self._terms.items())))

    # -- calculus -------------------------------------------------------------
    def differentiate(self, axis: int) -> "LaurentPoly":
        """Exact partial derivative along 0-based ``axis`` (power rule, negative exponents included)."""
        if not 0 <= axis < self.dim:
            raise DimensionMismatch(f"axis {axis} out of range for dim {self.dim}")
        out: dict[tuple, CRational] = {}
        for e, c in self._terms.items():
            k = e[axis]
            if k == 0:
                continue
            e2 = list(e)
            e2[axis] = k - 1
            out[tuple(e2)] = c * k
        return LaurentPoly(self.dim, out)

    # -- evaluation -------------------------------------------------------------
    def evaluate(self, point: Sequence[complex]) -> complex:
        """Floating evaluation; raises :class:`PoleError` on 0**negative."""
        if len(point) != self.dim:
            raise DimensionMismatch(f"point has {len(point)} coords, poly dim {self.dim}")
        z = [complex(p) for p in point]
        total = 0j
        for e, c in self._terms.items():
            v = complex(c)
            for x, k in zip(z, e):
                if k == 0:
                    continue
                if x == 0 and k < 0:
                    raise PoleError(f"0**{k} while evaluating Laurent term {e}")
                v *= x ** k
            total += v
        return total

    def evaluate_exact(self, point: Sequence[CoeffLike]) -> CRational:
        """Exact evaluation at a complex-rational point."""
        if len(point) != self.dim:
            raise DimensionMismatch(f"point has {len(point)} coords, poly dim {self.dim}")
        z = [_as_crational(p) for p in point]
        total = CRational(0)
        for e, c in self._terms.items():
            v = c
            for x, k in zip(z, e):
                if k == 0:
                    continue
                if x.is_zero() and k < 0:
                    raise PoleError(f"0**{k} while evaluating Laurent term {e}")
                v = v * x ** k
            total += v
        return total

    def __repr__(self) -> str:
        return f"LaurentPoly({self.dim}, {{{', '.join(f'{e}: {c}' for e, c in self.terms())}}})"

    def __str__(self) -> str:
        return to_text(self)


# -- vector fields ------------------------------------------------------------

@dataclass(frozen=True)
class VField:
    """Vector field: one LaurentPoly per coordinate, all of the same dim."""

    components: tuple[LaurentPoly, ...]

    def __post_init__(self):
        if not self.components:
            raise ValueError("empty vector field")
        object.__setattr__(self, "components", tuple(self.components))
        d = self.components[0].dim
        if any(p.dim != d for p in self.components):
            raise DimensionMismatch("vector field components disagree on dim")

    @property
    def dim(self) -> int:
        return self.components[0].dim

    def __len__(self) -> int:
        return len(self.components)

    def __getitem__(self, i: int) -> LaurentPoly:
        return self.components[i]

    def __iter__(self):
        return iter(self.components)

    def __sub__(self, other: "VField") -> "VField":
        if len(other) != len(self):
            raise DimensionMismatch("vector fields of different length")
        return VField(tuple(a - b for a, b in zip(self, other)))

    def __add__(self, other: "VField") -> "VField":
        if len(other) != len(self):
            raise DimensionMismatch("vector fields of different length")
        return VField(tuple(a + b for a, b in zip(self, other)))

    def scale(self, c: CoeffLike) -> "VField":
        return VField(tuple(p.scale(c) for p in self.components))

    def evaluate(self, point: Sequence[complex]) -> list[complex]:
        return [p.evaluate(point) for p in self.components]

    @classmethod
    def zero(cls, dim: int, n_components: int | None = None) -> "VField":
        n = dim if n_components is None else n_components
        return cls(tuple(LaurentPoly.zero(dim) for _ in range(n)))


def gradient(p: LaurentPoly) -> VField:
    """(d p/d x_1, ..., d p/d x_n)."""
    return VField(tuple(p.differentiate(i) for i in range(p.dim)))


def hessian(p: LaurentPoly) -> list[list[LaurentPoly]]:
    """Matrix of second partials; entries [i][j] and [j][i] are computed independently."""
    firsts = [p.differentiate(i) for i in range(p.dim)]
    return [[firsts[i].differentiate(j) for j in range(p.dim)] for i in range(p.dim)]


def jacobian(v: VField) -> list[list[LaurentPoly]]:
    """Row i = gradient of component i."""
    return [[v[i].differentiate(j) for j in range(v.dim)] for i in range(len(v))]


def dot(u: VField, v: VField) -> LaurentPoly:
    """Pointwise inner product of two vector fields (no conjugation)."""
    if len(u) != len(v):
        raise DimensionMismatch("vector fields of different length")
    out = LaurentPoly.zero(u.dim)
    for a, b in zip(u, v):
        out = out + a * b
    return out


def mat_vec_apply(mat: Sequence[Sequence[LaurentPoly]], v: VField) -> VField:
    """Apply a polynomial matrix to a vector field: (mat . v)_i = sum_j mat[i][j] v_j."""
    comps = []
    for row in mat:
        acc = LaurentPoly.zero(v.dim)
        for m, c in zip(row, v):
            acc = acc + m * c
        comps.append(acc)
    return VField(tuple(comps))


# -- canonical text form -------------------------------------------------------
#
# Polynomials print as a sum of `coeff * x1^e1 x2^e2 ...` with rational
# coefficients `p/q`, an optional imaginary unit `i`, and `^1` omitted.
# Parsing is lenient (optional `*`, optional unit coefficient); printing is
# canonical, so parse(to_text(p)) == p.

_RAT = r"[+-]?\d+(?:/\d+)?"
_COEFF_RE = re.compile(
    rf"^(?:(?P<cplx>\((?P<re>{_RAT})\s*(?P<sgn>[+-])\s*(?P<im>\d+(?:/\d+)?)i\))"
    rf"|(?P<imag>{_RAT})i"
    rf"|(?P<real>{_RAT})"
    rf"|(?P<unit_i>[+-]?i))$"
)
_FACTOR_RE = re.compile(r"^(?P<name>[A-Za-z_][A-Za-z_0-9]*?)(?:\^(?P<exp>-?\d+))?$")


def default_var_names(dim: int) -> tuple[str, ...]:
    return tuple(f"x{i + 1}" for i in range(dim))


def _format_coeff(c: CRational) -> str:
    def frac(q: Fraction) -> str:
        return str(q)

    if c.is_real():
        return frac(c.re)
    if not c.re:
        if c.im == 1:
            return "i"
        if c.im == -1:
            return "-i"
        return f"{frac(c.im)}i"
    sign = "+" if c.im > 0 else "-"
    return f"({frac(c.re)}{sign}{frac(abs(c.im))}i)"


def to_text(p: LaurentPoly, var_names: Sequence[str] | None = None) -> str:
    """Canonical text form, graded-lex descending."""
    names = tuple(var_names) if var_names is not None else default_var_names(p.dim)
    if len(names) != p.dim:
        raise DimensionMismatch("var_names length != dim")
    if p.is_zero:
        return "0"
    chunks: list[str] = []
    for e, c in sorted(p.terms(), key=lambda t: grlex_key(t[0]), reverse=True):
        factors = []
        for name, k in zip(names, e):
            if k == 0:
                continue
            factors.append(name if k == 1 else f"{name}^{k}")
        coeff_txt = _format_coeff(c)
        neg = coeff_txt.startswith("-")
        if neg:
            coeff_txt = coeff_txt[1:]
        if not factors:
            body = coeff_txt
        elif coeff_txt == "1":
            body = " ".join(factors)
        else:
            body = f"{coeff_txt} * {' '.join(factors)}"
        if not chunks:
            chunks.append(f"-{body}" if neg else body)
        else:
            chunks.append(f"- {body}" if neg else f"+ {body}")
    return " ".join(chunks)


def _split_top_level_terms(text: str) -> list[tuple[int, str]]:
    """Split on +/- outside parentheses; returns (sign, chunk) pairs."""
    out: list[tuple[int, str]] = []
    depth, sign, buf = 0, 1, []
    started = False
    for ch in text:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
            if depth < 0:
                raise ValueError("unbalanced parentheses")
        if ch in "+-" and depth == 0 and not started:
            # sign prefix of the upcoming term
            if ch == "-":
                sign = -sign
            continue
        if ch in "+-" and depth == 0 and started and (buf and buf[-1] in " \t"):
            out.append((sign, "".join(buf).strip()))
            buf, sign, started = [], 1 if ch == "+" else -1, False
            continue
        buf.append(ch)
        if ch not in " \t":
            started = True
    tail = "".join(buf).strip()
    if tail:
        out.append((sign, tail))
    return out


def _parse_coeff(tok: str) -> CRational:
    m = _COEFF_RE.match(tok)
    if not m:
        raise ValueError(f"bad coefficient {tok!r}")
    if m.group("cplx"):
        im = Fraction(m.group("im"))
        if m.group("sgn") == "-":
            im = -im
        return CRational(Fraction(m.group("re")), im)
    if m.group("imag") is not None:
        return CRational(0, Fraction(m.group("imag")))
    if m.group("real") is not None:
        return CRational(Fraction(m.group("real")))
    return CRational(0, -1 if m.group("unit_i").startswith("-") else 1)


def parse_poly_text(text: str, var_names: Sequence[str]) -> LaurentPoly:
    """Parse the canonical text form back into a polynomial.

    ``var_names`` fixes both the dimension and the admissible variable
    names (so e.g. a 4-dim system with names r, phi, v, w parses "r^2 w").
    """
    names = list(var_names)
    dim = len(names)
    index = {n: i for i, n in enumerate(names)}
    text = text.strip()
    if not text:
        raise ValueError("empty polynomial text")
    if text == "0":
        return LaurentPoly.zero(dim)
    terms: list[tuple[tuple, CRational]] = []
    for sign, chunk in _split_top_level_terms(text):
        toks = [t for t in chunk.replace("*", " ").split() if t]
        if not toks:
            raise ValueError(f"empty term in {text!r}")
        coeff = CRational(1)
        exps = [0] * dim
        start = 0
        if _COEFF_RE.match(toks[0]):
            coeff = _parse_coeff(toks[0])
            start = 1
        for tok in toks[start:]:
            fm = _FACTOR_RE.match(tok)
            if not fm or fm.group("name") not in index:
                raise ValueError(f"unknown factor {tok!r} (variables: {', '.join(names)})")
            k = int(fm.group("exp")) if fm.group("exp") is not None else 1
            exps[index[fm.group("name")]] += k
        terms.append((tuple(exps), coeff * sign))
    return LaurentPoly(dim, terms)
