"""Scalar arithmetic layer.

Every geometric routine in this package is generic over a scalar type and an
arithmetic context.  Three scalar families are supported:

* binary64 floats, compared against a tolerance ``tol`` carried by the context;
* exact rationals (``fractions.Fraction``), compared exactly;
* exact elements of the quadratic field Q(sqrt 2), needed because the rotated
  square family has irrational map entries (``r * R_{pi/4}``).

Exact computations never leave their field: sums, products and quotients of
rationals stay rational, and the same holds in Q(sqrt 2).  A context converts
incoming values once (``Context.scalar``) and provides sign tests so that the
simplex solver and the geometric predicates can be written a single time.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import SpecFormatError

Rational = (int, Fraction)


def _frac_sign(x) -> int:
    if x > 0:
        return 1
    if x < 0:
        return -1
    return 0


class QSqrt2:
    """Exact element a + b*sqrt(2) of the field Q(sqrt 2), a and b rational.

    Supports field arithmetic with other QSqrt2 values and with int/Fraction,
    plus exact comparisons.  Comparisons reduce to the sign of a + b*sqrt(2),
    which is decided rationally via the conjugate product a^2 - 2 b^2.
    """

    __slots__ = ("a", "b")

    def __init__(self, a, b=0):
        self.a = Fraction(a)
        self.b = Fraction(b)

    @staticmethod
    def coerce(x) -> "QSqrt2":
        if isinstance(x, QSqrt2):
            return x
        return QSqrt2(Fraction(x))

    def sign(self) -> int:
        a, b = self.a, self.b
        if b == 0:
            return _frac_sign(a)
        if a == 0:
            return _frac_sign(b)
        sa, sb = _frac_sign(a), _frac_sign(b)
        if sa == sb:
            return sa
        # Opposite signs: |a| vs |b|*sqrt(2) decides; d = (a - b√2)(a + b√2).
        d = a * a - 2 * b * b
        if sa > 0:
            return _frac_sign(d)
        return -_frac_sign(d)

    # -- field operations --------------------------------------------------

    def __add__(self, other):
        o = QSqrt2.coerce(other)
        return QSqrt2(self.a + o.a, self.b + o.b)

    __radd__ = __add__

    def __sub__(self, other):
        o = QSqrt2.coerce(other)
        return QSqrt2(self.a - o.a, self.b - o.b)

    def __rsub__(self, other):
        o = QSqrt2.coerce(other)
        return QSqrt2(o.a - self.a, o.b - self.b)

    def __mul__(self, other):
        o = QSqrt2.coerce(other)
        return QSqrt2(self.a * o.a + 2 * self.b * o.b, self.a * o.b + self.b * o.a)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = QSqrt2.coerce(other)
        d = o.a * o.a - 2 * o.b * o.b
        if d == 0:
            raise ZeroDivisionError("division by zero in Q(sqrt2)")
        # 1/(a+b√2) = (a - b√2) / (a² - 2b²)
        return self * QSqrt2(o.a / d, -o.b / d)

    def __rtruediv__(self, other):
        return QSqrt2.coerce(other) / self

    def __neg__(self):
        return QSqrt2(-self.a, -self.b)

    def __abs__(self):
        return self if self.sign() >= 0 else -self

    def __pos__(self):
        return self

    # -- comparisons ---------------------------------------------------------

    def _cmp(self, other) -> int:
        return (self - QSqrt2.coerce(other)).sign()

    def __eq__(self, other):
        if isinstance(other, (QSqrt2, int, Fraction)):
            return self._cmp(other) == 0
        return NotImplemented

    def __lt__(self, other):
        return self._cmp(other) < 0

    def __le__(self, other):
        return self._cmp(other) <= 0

    def __gt__(self, other):
        return self._cmp(other) > 0

    def __ge__(self, other):
        return self._cmp(other) >= 0

    def __hash__(self):
        if self.b == 0:
            return hash(self.a)
        return hash((self.a, self.b))

    def __bool__(self):
        return self.a != 0 or self.b != 0

    def __float__(self):
        return float(self.a) + float(self.b) * math.sqrt(2.0)

    def __repr__(self):
        if self.b == 0:
            return f"QSqrt2({self.a})"
        return f"QSqrt2({self.a}, {self.b})"


def is_exact_scalar(x) -> bool:
    return isinstance(x, (int, Fraction, QSqrt2))


def to_float(x) -> float:
    if isinstance(x, QSqrt2):
        return float(x)
    return float(x)


def to_exact(x):
    """Lift a scalar into an exact field (floats map to their exact binary value)."""
    if isinstance(x, (Fraction, QSqrt2)):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, float):
        return Fraction(x)
    raise TypeError(f"unsupported scalar type {type(x).__name__}")


@dataclass(frozen=True)
class Context:
    """Arithmetic mode for one computation.

    ``exact`` selects exact field arithmetic with sign decisions made
    rationally; otherwise scalars are coerced to binary64 and compared with
    absolute tolerance ``tol``.  ``exact_fallback`` lets callers of the hull
    predicates escalate a marginal float result to exact arithmetic.
    """

    exact: bool
    tol: float = 0.0
    exact_fallback: bool = False

    def scalar(self, x):
        if self.exact:
            return to_exact(x)
        return to_float(x)

    def sign(self, x) -> int:
        if self.exact:
            if isinstance(x, QSqrt2):
                return x.sign()
            return _frac_sign(x)
        if x > self.tol:
            return 1
        if x < -self.tol:
            return -1
        return 0

    def is_zero(self, x) -> bool:
        return self.sign(x) == 0

    def point(self, p):
        return tuple(self.scalar(c) for c in p)


FLOAT = Context(exact=False, tol=1e-9)
EXACT = Context(exact=True)
FLOAT_WITH_FALLBACK = Context(exact=False, tol=1e-9, exact_fallback=True)


def float_context(tol: float = 1e-9, exact_fallback: bool = False) -> Context:
    return Context(exact=False, tol=tol, exact_fallback=exact_fallback)


# -- interchange formatting ----------------------------------------------------
#
# Scalars cross the CLI boundary as strings: "p/q" and decimal strings parse to
# exact rationals, hex-float strings to binary64 (used when the float bit
# pattern itself is the intended value), and "A+B*sqrt2" to Q(sqrt2).

def _parse_rational(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise SpecFormatError(f"bad rational literal {text!r}") from exc


def _split_affine(head: str):
    """Split 'A+B' / 'A-B' at the last top-level sign; returns (a_text, b_text)."""
    for i in range(len(head) - 1, 0, -1):
        if head[i] in "+-" and head[i - 1].isdigit():
            return head[:i], head[i:]
    return None, head


def parse_scalar(text):
    """Parse one scalar string from a spec file."""
    if not isinstance(text, str):
        raise SpecFormatError(f"scalar must be a string, got {type(text).__name__}")
    s = text.strip()
    if s.startswith(("0x", "-0x", "+0x")):
        try:
            return float.fromhex(s)
        except ValueError as exc:
            raise SpecFormatError(f"bad hex float {text!r}") from exc
    if s.endswith("sqrt2"):
        head = s[: -len("sqrt2")].strip()
        if head.endswith("*"):
            head = head[:-1].strip()
        a_text, b_text = _split_affine(head)
        a = _parse_rational(a_text) if a_text else Fraction(0)
        b = _parse_rational(b_text) if b_text not in ("", "+", "-") else Fraction(
            "-1" if b_text == "-" else "1"
        )
        return QSqrt2(a, b)
    return _parse_rational(s)


def format_scalar(x) -> str:
    """Format a scalar so that parse_scalar round-trips it exactly."""
    if isinstance(x, bool):
        raise SpecFormatError("bool is not a scalar")
    if isinstance(x, int):
        return str(x)
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, float):
        return x.hex()
    if isinstance(x, QSqrt2):
        if x.b == 0:
            return str(x.a)
        b = f"{abs(x.b)}*sqrt2"
        if x.a == 0:
            return b if x.b > 0 else f"-{b}"
        sgn = "+" if x.b > 0 else "-"
        return f"{x.a}{sgn}{b}"
    raise SpecFormatError(f"unsupported scalar type {type(x).__name__}")
