"""Exact money arithmetic in integer minor units.

All monetary magnitudes in the pipeline are stored as an integer count of
minor currency units (cents, rappen, ...) plus an ISO-4217 code. Loss
computations run in :class:`decimal.Decimal` and round half-up exactly once
per returned amount, so golden figures reproduce bit for bit.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from decimal import ROUND_HALF_UP, Decimal, localcontext

from .errors import InvalidCurrency, MixedCurrency, NonPositiveRate

_CURRENCY_RE = re.compile(r"^[A-Z]{3}$")

# Minor-unit exponents for codes that deviate from the usual 2.
_CURRENCY_EXPONENTS = {
    "BHD": 3, "IQD": 3, "JOD": 3, "KWD": 3, "LYD": 3, "OMR": 3, "TND": 3,
    "CLP": 0, "ISK": 0, "JPY": 0, "KRW": 0, "VND": 0, "XOF": 0, "XAF": 0,
}

#: Decimal precision for intermediate loss arithmetic. Generous enough that
#: division (hours -> days) never perturbs the final minor-unit rounding.
DECIMAL_PRECISION = 50


def currency_exponent(code: str) -> int:
    """Number of minor-unit digits for an ISO-4217 code (default 2)."""
    validate_currency(code)
    return _CURRENCY_EXPONENTS.get(code, 2)


def validate_currency(code: str) -> str:
    if not isinstance(code, str) or not _CURRENCY_RE.match(code):
        raise InvalidCurrency(f"not a valid ISO-4217 currency code: {code!r}")
    return code


def dec(value) -> Decimal:
    """Convert a number to Decimal through its shortest string form.

    Floats go through ``str()`` so 0.2 means the decimal 0.2, not its binary
    approximation; this keeps the whole pipeline reproducible.
    """
    if isinstance(value, Decimal):
        return value
    if isinstance(value, int):
        return Decimal(value)
    return Decimal(str(value))


def round_half_up(value: Decimal) -> int:
    """Round a Decimal to an integer, halves away from zero."""
    return int(value.quantize(Decimal("1"), rounding=ROUND_HALF_UP))


@dataclass(frozen=True, order=False)
class Money:
    """An exact amount of one currency, in minor units.

    Amounts may be negative (e.g. a security control with negative return);
    call sites that require non-negative values enforce that themselves.
    """

    amount_minor: int
    currency: str

    def __post_init__(self):
        if not isinstance(self.amount_minor, int) or isinstance(self.amount_minor, bool):
            raise InvalidCurrency(f"amount_minor must be an integer, got {self.amount_minor!r}")
        validate_currency(self.currency)

    @classmethod
    def from_major(cls, amount, currency: str) -> "Money":
        """Build from a major-unit amount ('1620.00', 1620, Decimal)."""
        exp = currency_exponent(currency)
        minor = dec(amount).scaleb(exp)
        if minor != minor.to_integral_value():
            raise InvalidCurrency(
                f"{amount!r} has more precision than {currency} minor units allow"
            )
        return cls(int(minor), currency)

    @property
    def major(self) -> Decimal:
        """Exact major-unit value (e.g. 162000 minor USD -> Decimal('1620.00'))."""
        exp = currency_exponent(self.currency)
        return Decimal(self.amount_minor).scaleb(-exp)

    def format(self) -> str:
        """Human string like '1620.00 USD'."""
        exp = currency_exponent(self.currency)
        quantum = Decimal(1).scaleb(-exp)
        return f"{self.major.quantize(quantum)} {self.currency}"

    def _check_same(self, other: "Money") -> None:
        if self.currency != other.currency:
            raise MixedCurrency(f"cannot combine {self.currency} with {other.currency}")

    def __add__(self, other: "Money") -> "Money":
        self._check_same(other)
        return Money(self.amount_minor + other.amount_minor, self.currency)

    def __sub__(self, other: "Money") -> "Money":
        self._check_same(other)
        return Money(self.amount_minor - other.amount_minor, self.currency)

    def __neg__(self) -> "Money":
        return Money(-self.amount_minor, self.currency)

    def scaled(self, factor) -> "Money":
        """Multiply by a scalar, rounding half-up to minor units."""
        with localcontext() as ctx:
            ctx.prec = DECIMAL_PRECISION
            return Money(round_half_up(dec(factor) * self.amount_minor), self.currency)

    def __lt__(self, other: "Money") -> bool:
        self._check_same(other)
        return self.amount_minor < other.amount_minor

    def __le__(self, other: "Money") -> bool:
        self._check_same(other)
        return self.amount_minor <= other.amount_minor

    def is_zero(self) -> bool:
        return self.amount_minor == 0


def zero(currency: str) -> Money:
    return Money(0, currency)


def convert_currency(m: Money, rate, target: str) -> Money:
    """Convert at ``rate`` target units per source unit, rounding half-up once.

    Exponent-aware: when source and target share the minor-unit exponent this
    is exactly round_half_up(amount_minor * rate).
    """
    rate = dec(rate)
    if rate <= 0:
        raise NonPositiveRate(f"conversion rate must be positive, got {rate}")
    validate_currency(target)
    src_exp = currency_exponent(m.currency)
    tgt_exp = currency_exponent(target)
    with localcontext() as ctx:
        ctx.prec = DECIMAL_PRECISION
        minor = dec(m.amount_minor) * rate * Decimal(1).scaleb(tgt_exp - src_exp)
        return Money(round_half_up(minor), target)
