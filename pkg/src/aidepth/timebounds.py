"""Named time-constructible families evaluated at an output length."""
from __future__ import annotations

from dataclasses import dataclass

_KINDS = ("lin", "poly", "exp", "const")


@dataclass(frozen=True)
class TimeFamily:
    """``lin:c`` is ``c*n``, ``poly:c`` is ``n**c``, ``exp:c`` is ``2**(c*n)``, ``const:c`` is ``c``.

    Values are clamped below at ``minimum`` (1 by default, so every family is
    a legal step budget; significance functions use 0).
    """

    kind: str
    c: int
    minimum: int = 1

    def __post_init__(self) -> None:
        if self.kind not in _KINDS:
            raise ValueError(f"unknown time family {self.kind!r}; expected one of {_KINDS}")
        if self.c < 0:
            raise ValueError("time family constant must be non-negative")

    @classmethod
    def parse(cls, text: str, minimum: int = 1) -> TimeFamily:
        kind, sep, c = text.partition(":")
        if not sep:
            raise ValueError(f"time family must look like 'lin:4', got {text!r}")
        return cls(kind, int(c), minimum)

    def __call__(self, n: int) -> int:
        if self.kind == "lin":
            v = self.c * n
        elif self.kind == "poly":
            v = n**self.c
        elif self.kind == "exp":
            v = 1 << (self.c * n)
        else:
            v = self.c
        return max(self.minimum, v)

    def __str__(self) -> str:
        return f"{self.kind}:{self.c}"
