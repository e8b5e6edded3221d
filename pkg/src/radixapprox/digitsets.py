"""Construction, membership, ranking and enumeration of the structured sets.

The central object is the set of positive integers whose base-b digits are
all 0 or 1 ("zero-one integers").  Writing the index i in binary and
reinterpreting the bits as base-b digits is an order-preserving bijection
from the positive integers onto that set, which gives O(log) rank/unrank
with no searching.  The other sets handled here:

* ``zero_one_trunc(r)``  - zero-one integers using digit positions 0..r,
  together with 0 (2**(r+1) elements);
* ``zero_one_ext``       - zero-one integers plus all differences of two
  powers b**d - b**c, d > c >= 0 (and ``zero_one_ext_trunc(r)`` with both
  exponents bounded by r);
* ``repunits(N)``        - 1, 1+b, 1+b+b^2, ... while still <= N;
* ``power_sums(t,e_max)``- sums of exactly t powers b**u with u <= e_max;
* ``digit_sum_bounded(k,t)`` - k-digit base-b values with digit sum in (0, t].

All enumerations are ascending, duplicate-free iterators guarded by a
global cardinality cap (default 2**25).
"""
from __future__ import annotations

import heapq
import itertools
import math
from dataclasses import dataclass
from typing import Iterator, Optional

from .errors import DomainError, InvariantViolation, ResourceLimit

#: Default cap on the number of elements any single enumeration may yield.
CAP_DEFAULT = 1 << 25


def check_base(b: int) -> int:
    if not isinstance(b, int) or b < 2:
        raise DomainError(f"base must be an integer >= 2, got {b!r}")
    return b


def ilog(b: int, n: int) -> int:
    """Largest e with b**e <= n (n >= 1), by exact integer arithmetic."""
    check_base(b)
    if n < 1:
        raise DomainError(f"ilog requires n >= 1, got {n}")
    e, p = 0, 1
    while p * b <= n:
        p *= b
        e += 1
    return e


def contains(b: int, n: int) -> bool:
    """True iff every base-b digit of n is 0 or 1 (n >= 1)."""
    check_base(b)
    if n < 1:
        raise DomainError(f"membership is defined for positive n, got {n}")
    while n:
        if n % b > 1:
            return False
        n //= b
    return True


def unrank(b: int, i: int) -> int:
    """The i-th smallest zero-one integer in base b (i >= 1).

    Writes i in binary and reads the bits as base-b digits; monotone
    because all digits involved are 0/1.
    """
    check_base(b)
    if i < 1:
        raise DomainError(f"rank index must be >= 1, got {i}")
    if b == 2:
        return i
    n, p = 0, 1
    while i:
        if i & 1:
            n += p
        p *= b
        i >>= 1
    return n


def rank(b: int, n: int) -> int:
    """Position of n in the ascending zero-one integers; inverse of unrank."""
    check_base(b)
    if n < 1 or not contains(b, n):
        raise DomainError(f"{n} has a base-{b} digit other than 0/1")
    i, bit = 0, 1
    while n:
        if n % b:
            i |= bit
        n //= b
        bit <<= 1
    return i


def count_upto(b: int, N: int) -> int:
    """Number of zero-one integers in [1, N]."""
    check_base(b)
    if N < 1:
        return 0
    if b == 2:
        return N
    lo, hi = 1, 1
    while unrank(b, hi) <= N:
        hi *= 2
    while lo < hi - 1:
        mid = (lo + hi) // 2
        if unrank(b, mid) <= N:
            lo = mid
        else:
            hi = mid
    return lo


def repunit_cap(b: int, N: int) -> int:
    """Largest t with 1 + b + ... + b**t <= N.

    Computed from the integer logarithm of N*(b-1)+1 and cross-checked
    against the geometric sum itself; any mismatch fails loudly.
    """
    check_base(b)
    if N < 1:
        raise DomainError(f"need N >= 1, got {N}")
    t = ilog(b, N * (b - 1) + 1) - 1
    s = (b ** (t + 1) - 1) // (b - 1)
    s_next = s * b + 1
    if not (t >= 0 and s <= N < s_next):
        raise InvariantViolation(
            f"repunit cap formula disagrees with the geometric sum at b={b}, N={N}"
        )
    return t


def repunits(b: int, N: int) -> list[int]:
    """All of 1, 1+b, ..., up to the largest repunit <= N (ascending)."""
    t = repunit_cap(b, N)
    out, s = [], 1
    for d in range(t + 1):
        out.append(s)
        s = s * b + 1
    return out


# ---------------------------------------------------------------------------
# set specifications
# ---------------------------------------------------------------------------

KINDS = (
    "zero_one",
    "zero_one_trunc",
    "zero_one_ext",
    "zero_one_ext_trunc",
    "repunits",
    "power_sums",
    "digit_sum_bounded",
)


@dataclass(frozen=True)
class SetSpec:
    """A structured integer set, identified by kind, base and parameters."""

    kind: str
    base: int
    r: Optional[int] = None
    n: Optional[int] = None
    t: Optional[int] = None
    e_max: Optional[int] = None
    k: Optional[int] = None

    def __post_init__(self):
        check_base(self.base)
        if self.kind not in KINDS:
            raise DomainError(f"unknown set kind {self.kind!r}")
        if self.kind in ("zero_one_trunc", "zero_one_ext_trunc"):
            if self.r is None or self.r < 0:
                raise DomainError("truncated sets need r >= 0")
        if self.kind == "repunits" and (self.n is None or self.n < 1):
            raise DomainError("repunit sets need N >= 1")
        if self.kind == "power_sums":
            if self.t is None or self.t < 1:
                raise DomainError("power sums need t >= 1")
            if self.e_max is None or self.e_max < 0:
                raise DomainError(
                    "power sums are infinite; an explicit exponent cap e_max >= 0 is required"
                )
        if self.kind == "digit_sum_bounded":
            if self.k is None or self.k < 1 or self.t is None or self.t < 1:
                raise DomainError("digit-sum-bounded sets need k >= 1 and t >= 1")

    # convenience constructors ------------------------------------------------

    @classmethod
    def zero_one(cls, b: int) -> "SetSpec":
        return cls("zero_one", b)

    @classmethod
    def zero_one_trunc(cls, b: int, r: int) -> "SetSpec":
        return cls("zero_one_trunc", b, r=r)

    @classmethod
    def zero_one_ext(cls, b: int) -> "SetSpec":
        return cls("zero_one_ext", b)

    @classmethod
    def zero_one_ext_trunc(cls, b: int, r: int) -> "SetSpec":
        return cls("zero_one_ext_trunc", b, r=r)

    @classmethod
    def repunit_set(cls, b: int, N: int) -> "SetSpec":
        return cls("repunits", b, n=N)

    @classmethod
    def power_sums(cls, b: int, t: int, e_max: int) -> "SetSpec":
        return cls("power_sums", b, t=t, e_max=e_max)

    @classmethod
    def digit_sum_bounded_set(cls, b: int, k: int, t: int) -> "SetSpec":
        return cls("digit_sum_bounded", b, k=k, t=t)

    def to_dict(self) -> dict:
        d = {"kind": self.kind, "base": self.base}
        for key in ("r", "n", "t", "e_max", "k"):
            v = getattr(self, key)
            if v is not None:
                d[key] = v
        return d


def _zero_one_stream(b: int) -> Iterator[int]:
    return (unrank(b, i) for i in itertools.count(1))


def _power_gap_stream(b: int) -> Iterator[int]:
    # b**c * (b**e - 1) ascending; the b-adic valuation pins c, so the
    # stream is duplicate-free by construction.
    heap = [(b - 1, 0, 1)]
    while True:
        v, c, e = heapq.heappop(heap)
        yield v
        heapq.heappush(heap, (b**c * (b ** (e + 1) - 1), c, e + 1))
        if e == 1:
            heapq.heappush(heap, (b ** (c + 1) * (b - 1), c + 1, 1))


def _dedup_ascending(it: Iterator[int]) -> Iterator[int]:
    last = None
    for v in it:
        if v != last:
            yield v
        last = v


def _capped(it: Iterator[int], cap: int, what: str) -> Iterator[int]:
    for produced, v in enumerate(it):
        if produced >= cap:
            raise ResourceLimit(f"enumeration of {what} exceeded the cap of {cap} elements")
        yield v


def iter_spec(spec: SetSpec, cap: int = CAP_DEFAULT) -> Iterator[int]:
    """Ascending, duplicate-free stream of the elements of spec.

    Truncated power-sum enumerations include every sum of exactly t powers
    b**u with 0 <= u <= e_max; zero_one_trunc includes 0 by definition.
    """
    b = spec.base
    if spec.kind == "zero_one":
        it = _zero_one_stream(b)
    elif spec.kind == "zero_one_trunc":
        it = (unrank(b, i) if i else 0 for i in range(1 << (spec.r + 1)))
    elif spec.kind == "zero_one_ext":
        it = _dedup_ascending(heapq.merge(_zero_one_stream(b), _power_gap_stream(b)))
    elif spec.kind == "zero_one_ext_trunc":
        r = spec.r
        vals = {unrank(b, i) if i else 0 for i in range(1 << (r + 1))}
        vals.update(b**d - b**c for d in range(1, r + 1) for c in range(d))
        it = iter(sorted(vals))
    elif spec.kind == "repunits":
        it = iter(repunits(b, spec.n))
    elif spec.kind == "power_sums":
        n_multisets = math.comb(spec.e_max + spec.t, spec.t)
        if n_multisets > cap:
            raise ResourceLimit(
                f"power-sum enumeration would visit {n_multisets} multisets (cap {cap})"
            )
        powers = [b**u for u in range(spec.e_max + 1)]
        sums = {
            sum(combo)
            for combo in itertools.combinations_with_replacement(powers, spec.t)
        }
        it = iter(sorted(sums))
    elif spec.kind == "digit_sum_bounded":
        values, _ = digit_sum_bounded(b, spec.k, spec.t, cap=cap)
        it = iter(sorted(values))
    else:  # pragma: no cover - rejected in __post_init__
        raise DomainError(f"unknown set kind {spec.kind!r}")
    return _capped(it, cap, spec.kind)


def iter_spec_upto(spec: SetSpec, N: int, cap: int = CAP_DEFAULT) -> Iterator[int]:
    """Elements of spec restricted to [1, N], ascending."""
    return itertools.takewhile(
        lambda v: v <= N, (v for v in iter_spec(spec, cap) if v >= 1)
    )


# ---------------------------------------------------------------------------
# digit-sum-bounded values and their maximum
# ---------------------------------------------------------------------------


def digit_sum_max_formula(b: int, k: int, t: int) -> int:
    """Closed form for max digit_sum_bounded(b, k, t): fill digits greedily
    from the top position with b-1 until the digit-sum budget t runs out."""
    check_base(b)
    if k < 1 or t < 1:
        raise DomainError("need k >= 1 and t >= 1")
    if t < b - 1:
        return t * b ** (k - 1)
    q = t // (b - 1)
    if q >= k:
        return b**k - 1
    head = sum((b - 1) * b ** (k - 1 - d) for d in range(q))
    return head + (t - (b - 1) * q) * b ** (k - 1 - q)


def digit_sum_bounded(b: int, k: int, t: int, cap: int = CAP_DEFAULT) -> tuple[set[int], int]:
    """All values sum(a_j * b**j, j < k) with digits a_j <= b-1 and digit
    sum in (0, t], plus their maximum.

    The maximum is computed both from the enumerated set and from the
    closed form; disagreement is an invariant failure.
    """
    check_base(b)
    if k < 1 or t < 1:
        raise DomainError("need k >= 1 and t >= 1")
    if math.comb(k + t, t) > cap:
        raise ResourceLimit(f"digit-sum-bounded enumeration infeasible for k={k}, t={t}")
    values: set[int] = set()

    def fill(pos: int, budget: int, acc: int):
        if pos == k:
            if budget < t:
                values.add(acc)
            return
        p = b**pos
        for digit in range(min(b - 1, budget) + 1):
            fill(pos + 1, budget - digit, acc + digit * p)

    fill(0, t, 0)
    h = max(values)
    h_formula = digit_sum_max_formula(b, k, t)
    if h != h_formula:
        raise InvariantViolation(
            f"digit-sum maximum mismatch at b={b}, k={k}, t={t}: "
            f"enumerated {h}, formula {h_formula}"
        )
    return values, h
