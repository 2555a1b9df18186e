"""Concrete (secret, mask) -> wire-value maps over Z_q.

Two wire maps are modeled:

* the internal wire of a Barrett-style modular reduction stage, where an
  unsigned s-bit subtraction either proceeds directly (mask <= secret) or
  wraps around 2^s and picks up the offset r = 2^s mod q;
* the identity masking wire x - m, the output-register form whose map is
  a plain translation and therefore a bijection.

Both come wrapped in a uniform WireGadget record carrying the stage's
unmasked logical function and its claimed worst-case preimage size.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional, Union

import numpy as np

from .modring import Modulus, ZqElem, branch_offset

IntOrArray = Union[int, np.ndarray]


class ScopeConditionError(ValueError):
    """Raised when the hardware-faithful evaluator is used with q > 2^s."""


@dataclass(frozen=True)
class BarrettParams:
    """Modulus q and shift s of a reduction stage, with the cached offset r.

    The algebraic evaluator accepts any q >= 1 and s >= 0.  Only the
    hardware-faithful (unsigned s-bit datapath) evaluator needs q <= 2^s.
    """

    q: Modulus
    s: int
    r: ZqElem = field(init=False)

    def __post_init__(self) -> None:
        if self.s < 0:
            raise ValueError(f"shift exponent must be >= 0, got {self.s}")
        object.__setattr__(self, "r", branch_offset(self.q, self.s))

    @classmethod
    def create(cls, q: int, s: int) -> "BarrettParams":
        return cls(Modulus(q), s)

    def scope_ok(self) -> bool:
        """True when q <= 2^s, i.e. one s-bit word holds a full residue."""
        return self.q.q <= 2**self.s

    def require_scope(self) -> None:
        if not self.scope_ok():
            raise ScopeConditionError(
                f"hardware-faithful form needs q <= 2^s, got q={self.q.q}, s={self.s}"
            )


def barrett_algebraic_eval(p: BarrettParams, x: ZqElem, m: ZqElem) -> ZqElem:
    """Two-branch wire value: x - m if m.val <= x.val, else x - m + r."""
    if m.val <= x.val:
        return x - m
    return x - m + p.r


def barrett_nat_eval(p: BarrettParams, x: ZqElem, m: ZqElem) -> ZqElem:
    """Hardware-faithful wire value: ((x.val + 2^s - m.val) mod 2^s) mod q.

    The +2^s keeps the unsigned subtraction non-negative before the s-bit
    wrap.  Requires q <= 2^s so that residues fit the datapath.
    """
    p.require_scope()
    q = p.q.q
    w = 2**p.s
    return ZqElem((x.val + w - m.val) % w % q, p.q)


def identity_mask_eval(q: Modulus, x: ZqElem, m: ZqElem) -> ZqElem:
    """Output-register wire value x - m (a translation, hence bijective)."""
    return x - m


def barrett_algebraic_eval_vec(p: BarrettParams, x: IntOrArray, m: np.ndarray) -> np.ndarray:
    """Vectorized two-branch wire map on raw int64 residues."""
    q = p.q.q
    r = p.r.val
    x = np.asarray(x, dtype=np.int64)
    m = np.asarray(m, dtype=np.int64)
    return np.where(m <= x, (x - m) % q, (x - m + r) % q)


def barrett_nat_eval_vec(p: BarrettParams, x: IntOrArray, m: np.ndarray) -> np.ndarray:
    """Vectorized hardware-faithful wire map on raw int64 residues."""
    p.require_scope()
    q = p.q.q
    if p.s > 62:
        # x + 2^s would overflow int64; fall back to exact Python ints.
        w = 2**p.s
        xs = np.broadcast_to(np.asarray(x), np.shape(m)).ravel()
        ms = np.asarray(m).ravel()
        out = np.fromiter(
            ((int(a) + w - int(b)) % w % q for a, b in zip(xs, ms)),
            dtype=np.int64,
            count=len(ms),
        )
        return out.reshape(np.shape(m))
    w = np.int64(2**p.s)
    x = np.asarray(x, dtype=np.int64)
    m = np.asarray(m, dtype=np.int64)
    return (x + w - m) % w % q


def identity_mask_eval_vec(q: Modulus, x: IntOrArray, m: np.ndarray) -> np.ndarray:
    """Vectorized translation wire map on raw int64 residues."""
    x = np.asarray(x, dtype=np.int64)
    m = np.asarray(m, dtype=np.int64)
    return (x - m) % q.q


@dataclass(frozen=True)
class WireGadget:
    """A single masked stage: its wire map, its unmasked stage function,
    and the claimed worst-case preimage multiplicity k.

    eval is total on Z_q x Z_q and pure.  eval_vec is the same map on raw
    int64 residues for bulk enumeration; tests pin it to eval pointwise.
    barrett_params is set only for reduction gadgets and lets the analysis
    engine take the two-candidate counting shortcut.
    """

    name: str
    q: Modulus
    eval: Callable[[ZqElem, ZqElem], ZqElem]
    plain: Callable[[ZqElem], ZqElem]
    claimed_max_mult: int
    eval_vec: Optional[Callable[[IntOrArray, np.ndarray], np.ndarray]] = None
    barrett_params: Optional[BarrettParams] = None

    def __post_init__(self) -> None:
        if self.claimed_max_mult < 1:
            raise ValueError("claimed_max_mult must be >= 1")


def make_barrett_gadget(p: BarrettParams) -> WireGadget:
    """Reduction-stage gadget: two-branch wire map, claimed k = 2.

    The stage's logical function on already-canonical inputs is the
    identity: reducing a residue that is already in [0, q) is a no-op.
    """
    return WireGadget(
        name="barrett",
        q=p.q,
        eval=lambda x, m: barrett_algebraic_eval(p, x, m),
        plain=lambda x: x,
        claimed_max_mult=2,
        eval_vec=lambda x, m: barrett_algebraic_eval_vec(p, x, m),
        barrett_params=p,
    )


def make_identity_gadget(q: Modulus) -> WireGadget:
    """Masking-only gadget x - m: every output has exactly one preimage."""
    return WireGadget(
        name="identity",
        q=q,
        eval=lambda x, m: identity_mask_eval(q, x, m),
        plain=lambda x: x,
        claimed_max_mult=1,
        eval_vec=lambda x, m: identity_mask_eval_vec(q, x, m),
        barrett_params=None,
    )
