"""Preimage counting and distribution analysis for masked wire maps.

Two counting routes are kept deliberately separate:

* count_bruteforce enumerates every mask and tallies hits — the oracle;
* count_closedform tests only the two algebraic candidates x - v and
  x - v + r against their branch conditions — the O(1) production path.

Cross-checking the two routes is the core property this package exists
to exercise, so neither is ever expressed in terms of the other.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence, Tuple

import numpy as np

from .gadgets import (
    BarrettParams,
    WireGadget,
    barrett_algebraic_eval,
    barrett_algebraic_eval_vec,
    barrett_nat_eval_vec,
    make_barrett_gadget,
)
from .modring import ZqElem

# Full-modulus secret sweeps above this size switch to PRNG sampling.
EXHAUSTIVE_SECRET_LIMIT = 2**16
DEFAULT_SAMPLE_SECRETS = 16
DEFAULT_SEED = 0


@dataclass(frozen=True)
class MultiplicityProfile:
    """Per-secret histogram of preimage sizes over all q output values.

    zeros/ones/twos/overflow count output values by preimage size
    (overflow = size >= 3).  Because the wire map is total, the bucket
    counts always sum to q, and with overflow = 0 the mask mass gives
    ones + 2*twos = q — hence zeros = twos, the conservation law.
    """

    secret: ZqElem
    zeros: int
    ones: int
    twos: int
    overflow: int
    max_count: int
    support_size: int

    def __post_init__(self) -> None:
        q = self.secret.modulus.q
        if self.zeros + self.ones + self.twos + self.overflow != q:
            raise ValueError("preimage-size buckets must partition the q outputs")
        if self.support_size != self.ones + self.twos + self.overflow:
            raise ValueError("support_size inconsistent with buckets")
        if self.overflow == 0:
            if self.ones + 2 * self.twos != q:
                raise ValueError("mask mass not conserved (ones + 2*twos != q)")
            if self.zeros != self.twos:
                raise ValueError("conservation violated (zeros != twos)")

    @classmethod
    def from_counts(cls, secret: ZqElem, counts: np.ndarray) -> "MultiplicityProfile":
        """Build a profile from the per-value preimage counts array."""
        q = secret.modulus.q
        if counts.shape != (q,):
            raise ValueError(f"counts array must have length q={q}")
        zeros = int(np.count_nonzero(counts == 0))
        ones = int(np.count_nonzero(counts == 1))
        twos = int(np.count_nonzero(counts == 2))
        overflow = q - zeros - ones - twos
        return cls(
            secret=secret,
            zeros=zeros,
            ones=ones,
            twos=twos,
            overflow=overflow,
            max_count=int(counts.max()),
            support_size=q - zeros,
        )


@dataclass(frozen=True)
class WitnessReport:
    """A (secret, value) pair hit by two distinct masks, if one exists."""

    found: bool
    secret: Optional[ZqElem] = None
    value: Optional[ZqElem] = None
    count: Optional[int] = None
    mask_a: Optional[ZqElem] = None
    mask_b: Optional[ZqElem] = None


@dataclass(frozen=True)
class TrichotomyReport:
    passed: bool
    secrets_checked: int
    pairs_checked: int
    max_count_seen: int
    oracle: bool
    counterexample: Optional[Tuple[int, int, int]] = None  # (secret, value, count)


@dataclass(frozen=True)
class EquivalenceReport:
    passed: bool
    pairs_checked: int
    first_mismatch: Optional[Tuple[int, int, int, int]] = None  # (x, m, algebraic, hw)


def count_bruteforce(g: WireGadget, x: ZqElem, v: ZqElem) -> int:
    """|{m in Z_q : g.eval(x, m) = v}| by enumerating all q masks."""
    q = g.q.q
    if g.eval_vec is not None:
        vals = g.eval_vec(x.val, np.arange(q, dtype=np.int64))
        return int(np.count_nonzero(vals == v.val))
    return sum(1 for m in range(q) if g.eval(x, ZqElem(m, g.q)) == v)


def counts_bruteforce_all(g: WireGadget, x: int) -> np.ndarray:
    """Per-value preimage counts for secret x, by one pass over all masks."""
    q = g.q.q
    if g.eval_vec is not None:
        vals = g.eval_vec(x, np.arange(q, dtype=np.int64))
    else:
        xe = ZqElem(x, g.q)
        vals = np.fromiter(
            (g.eval(xe, ZqElem(m, g.q)).val for m in range(q)),
            dtype=np.int64,
            count=q,
        )
    return np.bincount(vals, minlength=q)


def count_closedform(p: BarrettParams, x: ZqElem, v: ZqElem) -> int:
    """Preimage size from the two-candidate characterization, in {0, 1, 2}.

    With r = 0 both candidates coincide and the map is the bijection
    m -> x - m, so every value has exactly one preimage.  Otherwise
    candidate x - v counts iff it takes the direct branch, and candidate
    x - v + r counts iff it takes the wrapping branch.
    """
    q = p.q.q
    r = p.r.val
    if r == 0:
        return 1
    a = (x.val - v.val) % q
    b = (a + r) % q
    return (1 if a <= x.val else 0) + (1 if b > x.val else 0)


def counts_closedform_all(p: BarrettParams, x: int) -> np.ndarray:
    """Per-value closed-form preimage counts for secret x, vectorized."""
    q = p.q.q
    r = p.r.val
    if r == 0:
        return np.ones(q, dtype=np.int64)
    a = (x - np.arange(q, dtype=np.int64)) % q
    b = (a + r) % q
    return (a <= x).astype(np.int64) + (b > x).astype(np.int64)


def multiplicity_profile(
    g: WireGadget, x: ZqElem, force_oracle: bool = False
) -> MultiplicityProfile:
    """Profile of preimage sizes for one secret.

    Barrett gadgets use the closed-form counts (O(q) per secret); other
    gadgets — or any gadget when force_oracle is set — are enumerated.
    """
    if g.barrett_params is not None and not force_oracle:
        counts = counts_closedform_all(g.barrett_params, x.val)
    else:
        counts = counts_bruteforce_all(g, x.val)
    return MultiplicityProfile.from_counts(x, counts)


def sample_secrets(q: int, n: int, seed: int = DEFAULT_SEED) -> list[int]:
    """n distinct secrets drawn by a seeded PRNG, returned ascending."""
    if n >= q:
        return list(range(q))
    rng = random.Random(seed)
    return sorted(rng.sample(range(q), n))


def default_secrets(q: int, seed: int = DEFAULT_SEED) -> Sequence[int]:
    """All secrets up to the exhaustive limit, a 16-secret sample beyond."""
    if q <= EXHAUSTIVE_SECRET_LIMIT:
        return range(q)
    return sample_secrets(q, DEFAULT_SAMPLE_SECRETS, seed)


def trichotomy_check(
    p: BarrettParams,
    secrets: Optional[Iterable[int]] = None,
    oracle: bool = False,
) -> TrichotomyReport:
    """Verify that no output value has three or more preimages.

    secrets = None sweeps every secret.  oracle = True counts by mask
    enumeration instead of the closed form.  A failure is data, not an
    error: the first offending (secret, value, count) is reported.
    """
    q = p.q.q
    scope = range(q) if secrets is None else secrets
    gadget = make_barrett_gadget(p) if oracle else None
    checked = 0
    max_seen = 0
    for x in scope:
        if oracle:
            counts = counts_bruteforce_all(gadget, x)
        else:
            counts = counts_closedform_all(p, x)
        checked += 1
        top = int(counts.max())
        if top > max_seen:
            max_seen = top
        if top > 2:
            v = int(np.nonzero(counts > 2)[0][0])
            return TrichotomyReport(
                passed=False,
                secrets_checked=checked,
                pairs_checked=checked * q,
                max_count_seen=max_seen,
                oracle=oracle,
                counterexample=(x, v, int(counts[v])),
            )
    return TrichotomyReport(
        passed=True,
        secrets_checked=checked,
        pairs_checked=checked * q,
        max_count_seen=max_seen,
        oracle=oracle,
    )


def support_gap_observed(profile: MultiplicityProfile) -> int:
    """Number of output values the wire can never take for this secret."""
    return profile.zeros


def support_gap_predicted_paper(p: BarrettParams, x: ZqElem) -> int:
    """Published three-term gap predictor min(x+1, q-r, q-1-x).

    Known to disagree with enumeration in some regimes (see the extended
    predictor); reported side by side so the data can speak.
    """
    q = p.q.q
    r = p.r.val
    return max(0, min(x.val + 1, q - r, q - 1 - x.val))


def support_gap_predicted_extended(p: BarrettParams, x: ZqElem) -> int:
    """Four-term gap predictor min(x+1, q-1-x, r, q-r).

    Candidate correction of the three-term formula; validated against
    brute-force enumeration by the test suite and the sweep command.
    """
    q = p.q.q
    r = p.r.val
    return max(0, min(x.val + 1, q - 1 - x.val, r, q - r))


def tightness_witness_search(p: BarrettParams) -> WitnessReport:
    """First (secret, value) pair, scanning ascending, with two preimages.

    No such pair exists when r = 0 (the map degenerates to a bijection).
    The two masks are re-evaluated through the wire map before reporting.
    """
    q = p.q.q
    r = p.r.val
    if r == 0:
        return WitnessReport(found=False)
    for x in range(q):
        counts = counts_closedform_all(p, x)
        hits = np.nonzero(counts == 2)[0]
        if len(hits) == 0:
            continue
        v = int(hits[0])
        xe = ZqElem(x, p.q)
        ve = ZqElem(v, p.q)
        mask_a = ZqElem((x - v) % q, p.q)
        mask_b = ZqElem((x - v + r) % q, p.q)
        if (
            barrett_algebraic_eval(p, xe, mask_a) != ve
            or barrett_algebraic_eval(p, xe, mask_b) != ve
            or mask_a == mask_b
        ):
            raise AssertionError(
                f"closed-form witness ({x}, {v}) failed re-evaluation"
            )
        return WitnessReport(
            found=True, secret=xe, value=ve, count=2, mask_a=mask_a, mask_b=mask_b
        )
    return WitnessReport(found=False)


def equivalence_check(
    p: BarrettParams,
    sample: Optional[int] = None,
    seed: int = DEFAULT_SEED,
) -> EquivalenceReport:
    """Compare the algebraic and hardware-faithful forms pointwise.

    sample = None checks all q^2 (x, m) pairs; otherwise `sample` pairs
    drawn by a seeded PRNG.  Raises ScopeConditionError when q > 2^s —
    a usage error, distinct from a mismatch.
    """
    p.require_scope()
    q = p.q.q
    if sample is None:
        masks = np.arange(q, dtype=np.int64)
        pairs = 0
        for x in range(q):
            alg = barrett_algebraic_eval_vec(p, x, masks)
            hw = barrett_nat_eval_vec(p, x, masks)
            bad = np.nonzero(alg != hw)[0]
            pairs += q
            if len(bad) > 0:
                m = int(bad[0])
                return EquivalenceReport(
                    passed=False,
                    pairs_checked=(x * q) + m + 1,
                    first_mismatch=(x, m, int(alg[m]), int(hw[m])),
                )
        return EquivalenceReport(passed=True, pairs_checked=pairs)
    rng = random.Random(seed)
    xs = np.fromiter((rng.randrange(q) for _ in range(sample)), dtype=np.int64)
    ms = np.fromiter((rng.randrange(q) for _ in range(sample)), dtype=np.int64)
    alg = barrett_algebraic_eval_vec(p, xs, ms)
    hw = barrett_nat_eval_vec(p, xs, ms)
    bad = np.nonzero(alg != hw)[0]
    if len(bad) > 0:
        i = int(bad[0])
        return EquivalenceReport(
            passed=False,
            pairs_checked=i + 1,
            first_mismatch=(int(xs[i]), int(ms[i]), int(alg[i]), int(hw[i])),
        )
    return EquivalenceReport(passed=True, pairs_checked=sample)
