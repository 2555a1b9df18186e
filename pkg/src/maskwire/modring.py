"""Exact residue arithmetic over Z_q for arbitrary modulus q >= 1."""

from __future__ import annotations

from dataclasses import dataclass

# Keeps every intermediate sum/product of canonical residues inside a
# 64-bit integer, which the enumeration engine (numpy int64) relies on.
MAX_MODULUS = 2**31 - 1


@dataclass(frozen=True)
class Modulus:
    """A residue-ring size q. Immutable; shared by all elements of Z_q."""

    q: int

    def __post_init__(self) -> None:
        if not isinstance(self.q, int) or isinstance(self.q, bool):
            raise ValueError(f"modulus must be an integer, got {self.q!r}")
        if self.q < 1:
            raise ValueError(f"modulus must be >= 1, got {self.q}")
        if self.q > MAX_MODULUS:
            raise ValueError(f"modulus {self.q} exceeds supported bound {MAX_MODULUS}")

    def elem(self, n: int) -> "ZqElem":
        """Canonical representative of n in this ring (n may be negative)."""
        return reduce(n, self)


@dataclass(frozen=True)
class ZqElem:
    """A canonical residue: 0 <= val < q, tagged with its modulus."""

    val: int
    modulus: Modulus

    def __post_init__(self) -> None:
        if not isinstance(self.val, int) or isinstance(self.val, bool):
            raise ValueError(f"residue value must be an int, got {self.val!r}")
        if not 0 <= self.val < self.modulus.q:
            raise ValueError(
                f"value {self.val} not canonical for modulus {self.modulus.q}"
            )

    def _check_same_ring(self, other: "ZqElem") -> None:
        # Mixing rings is a bug in the caller, never recoverable data.
        if self.modulus != other.modulus:
            raise ValueError(
                f"modulus mismatch: {self.modulus.q} vs {other.modulus.q}"
            )

    def __add__(self, other: "ZqElem") -> "ZqElem":
        self._check_same_ring(other)
        return ZqElem((self.val + other.val) % self.modulus.q, self.modulus)

    def __sub__(self, other: "ZqElem") -> "ZqElem":
        self._check_same_ring(other)
        return ZqElem((self.val - other.val) % self.modulus.q, self.modulus)

    def __mul__(self, other: "ZqElem") -> "ZqElem":
        self._check_same_ring(other)
        return ZqElem((self.val * other.val) % self.modulus.q, self.modulus)

    def __int__(self) -> int:
        return self.val


def reduce(n: int, q: Modulus) -> ZqElem:
    """Unique canonical representative of n mod q; negative n lands in [0, q)."""
    return ZqElem(n % q.q, q)


def sub(a: ZqElem, b: ZqElem) -> ZqElem:
    """Canonical (a - b) mod q. Both operands must share a modulus."""
    return a - b


def branch_offset(q: Modulus, s: int) -> ZqElem:
    """The wrap-around correction 2^s mod q for an s-bit datapath.

    Uses modular exponentiation, so s = 48 (and far beyond) never builds
    the full 2^s intermediate.
    """
    if s < 0:
        raise ValueError(f"shift exponent must be >= 0, got {s}")
    return ZqElem(pow(2, s, q.q), q)
