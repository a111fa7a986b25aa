"""Integer power series truncated at a fixed degree (Hilbert/Poincare series)."""

from __future__ import annotations

from dataclasses import dataclass

from .errors import BoundError, InputError


@dataclass(frozen=True)
class TruncatedSeries:
    """c_0 + c_1 t + ... + c_D t^D with exact integer coefficients."""

    coeffs: tuple[int, ...]

    def __post_init__(self):
        if not self.coeffs:
            raise InputError("series needs at least the constant term")
        object.__setattr__(self, "coeffs", tuple(int(c) for c in self.coeffs))

    @property
    def bound(self) -> int:
        return len(self.coeffs) - 1

    def __getitem__(self, d: int) -> int:
        if d < 0:
            return 0
        if d > self.bound:
            raise BoundError(f"coefficient {d} beyond truncation degree {self.bound}")
        return self.coeffs[d]

    def truncate(self, D: int) -> "TruncatedSeries":
        if D > self.bound:
            raise BoundError(f"cannot extend truncation {self.bound} to {D}")
        return TruncatedSeries(self.coeffs[: D + 1])

    def __add__(self, other: "TruncatedSeries") -> "TruncatedSeries":
        D = min(self.bound, other.bound)
        return TruncatedSeries(tuple(self[d] + other[d] for d in range(D + 1)))

    def __sub__(self, other: "TruncatedSeries") -> "TruncatedSeries":
        D = min(self.bound, other.bound)
        return TruncatedSeries(tuple(self[d] - other[d] for d in range(D + 1)))

    def __mul__(self, other: "TruncatedSeries") -> "TruncatedSeries":
        D = min(self.bound, other.bound)
        out = [0] * (D + 1)
        for i, a in enumerate(self.coeffs[: D + 1]):
            if a == 0:
                continue
            for j in range(0, D + 1 - i):
                out[i + j] += a * other.coeffs[j]
        return TruncatedSeries(tuple(out))

    def __str__(self):
        return " + ".join(f"{c}*t^{d}" for d, c in enumerate(self.coeffs))


def series_one(D: int) -> TruncatedSeries:
    return TruncatedSeries((1,) + (0,) * D)


def series_inverse(s: TruncatedSeries) -> TruncatedSeries:
    """Multiplicative inverse through the truncation degree; needs c_0 = 1."""
    if s[0] != 1:
        raise InputError(f"series_inverse needs constant term 1, got {s[0]}")
    D = s.bound
    inv = [1] + [0] * D
    for d in range(1, D + 1):
        inv[d] = -sum(s[k] * inv[d - k] for k in range(1, d + 1))
    return TruncatedSeries(tuple(inv))


def binomial(n: int, k: int) -> int:
    if k < 0 or k > n:
        return 0
    out = 1
    for i in range(k):
        out = out * (n - i) // (i + 1)
    return out


def polynomial_ring_series(n: int, D: int) -> TruncatedSeries:
    """Hilbert series of k[x_1..x_n]: coefficients C(n+d-1, d)."""
    return TruncatedSeries(tuple(binomial(n + d - 1, d) for d in range(D + 1)))
