"""Closed-form trapping-set enumerator of the terminated rate-1 accumulator.

The accumulator is the memory-1 recursive encoder x_k = x_{k-1} + v_k over
GF(2), terminated to the zero state after N sections.  A trapping-set class
is a triple (a_i, a_o, b): the number of input variable nodes in the set, the
number of output variable nodes in the set, and the number of unsatisfied
checks.  Termination excludes the final output node from every set and forces
a_i + b to be even.

Counts decompose over paths of an extended trellis whose 8 edges carry labels
s_i/c/s_o with c = s_i XOR x_{k-1} XOR x_k.  Paths split into m detours that
leave and re-merge with the zero state (type-2 error events, the only source
of output weight) and n one-section self-loops 1/1/0 at the zero state
(type-1 error events).  For fixed (m, n) the number of paths is a product of
five binomial coefficients; summing that product over the feasible (m, n) box
gives the class count.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, List, Tuple, Union

from .combinatorics import (
    NEG_INF,
    BigCount,
    LogValue,
    binomial,
    log_binomial,
    log_sum_exp,
)

__all__ = [
    "RangeError",
    "ResourceLimitError",
    "AccTriple",
    "PathDecomposition",
    "TrellisEdge",
    "EXTENDED_TRELLIS_EDGES",
    "IotseTable",
    "acc_iotse",
    "acc_iowe",
    "acc_iotse_table",
    "decompositions",
    "EXACT_TABLE_N_MAX",
]

# Full-table construction in exact mode is O(N^4) terms; cap it at desk scale.
EXACT_TABLE_N_MAX = 512


class RangeError(ValueError):
    """A count or index lies outside its structural range."""


class ResourceLimitError(RuntimeError):
    """The request exceeds a configured size ceiling."""


@dataclass(frozen=True)
class AccTriple:
    """One trapping-set class of a length-N terminated accumulator."""

    N: int
    a_i: int
    a_o: int
    b: int

    def __post_init__(self) -> None:
        if self.N < 1:
            raise RangeError(f"block length must be >= 1, got {self.N}")
        for name in ("a_i", "a_o", "b"):
            v = getattr(self, name)
            if not 0 <= v <= self.N:
                raise RangeError(f"{name}={v} outside [0, {self.N}]")


@dataclass(frozen=True)
class PathDecomposition:
    """Error-event signature of one (m, n) term of a class count.

    m counts type-2 events, n type-1 events, w_t the input weight on the
    0->1 and 1->0 transitions, and w_11 the input weight on the 1->1
    transitions.
    """

    m: int
    n: int
    w_t: int
    w_11: int


@dataclass(frozen=True)
class TrellisEdge:
    """One edge of the extended trellis section, labelled s_i/c/s_o."""

    from_state: int
    s_i: int
    c: int
    s_o: int
    to_state: int


def _build_edges() -> Tuple[TrellisEdge, ...]:
    edges = []
    for from_state in (0, 1):
        for s_i in (0, 1):
            for s_o in (0, 1):
                c = s_i ^ from_state ^ s_o
                edges.append(TrellisEdge(from_state, s_i, c, s_o, s_o))
    return tuple(edges)


#: All 8 extended-trellis edges; c = 0 edges form the standard trellis.
EXTENDED_TRELLIS_EDGES: Tuple[TrellisEdge, ...] = _build_edges()


@dataclass
class IotseTable:
    """All nonzero trapping-set class counts of one block length.

    ``entries`` maps (a_i, a_o, b) to the count (exact int) or to its natural
    log (float) depending on ``mode``.  Absent keys mean count zero.  Treat
    instances as immutable once built.
    """

    N: int
    mode: str
    entries: Dict[Tuple[int, int, int], Union[BigCount, LogValue]]

    def get(self, a_i: int, a_o: int, b: int) -> Union[BigCount, LogValue]:
        zero = 0 if self.mode == "exact" else NEG_INF
        return self.entries.get((a_i, a_o, b), zero)


def _check_mode(mode: str) -> None:
    if mode not in ("exact", "log"):
        raise ValueError(f"mode must be 'exact' or 'log', got {mode!r}")


def _mn_box(N: int, a_i: int, a_o: int, b: int):
    """Yield the feasible (m, n, w_t, w_11) tuples of a class with a_o >= 1.

    All five binomials are nonzero inside these bounds, so each yielded tuple
    contributes a positive product term.
    """
    half_sum = (a_i + b) // 2
    m_lo = max(1, abs(a_i - b) // 2)
    m_hi = min(a_o, N - a_o)
    for m in range(m_lo, m_hi + 1):
        w_t = (a_i - b) // 2 + m
        if w_t < 0 or w_t > 2 * m:
            continue
        n_lo = max(0, half_sum - a_o)
        n_hi = min(N - a_o - m, half_sum - m)
        for n in range(n_lo, n_hi + 1):
            yield m, n, w_t, half_sum - n - m


@lru_cache(maxsize=200_000)
def _iotse_exact(N: int, a_i: int, a_o: int, b: int) -> int:
    if (a_i + b) % 2:
        return 0
    if a_o == 0:
        # Pure type-1-event paths: each of the a_i set positions is one
        # 1/1/0 self-loop contributing one unsatisfied check.
        return binomial(N, a_i) if a_i == b else 0
    total = 0
    for m, n, w_t, w_11 in _mn_box(N, a_i, a_o, b):
        total += (
            binomial(N - a_o, m)
            * binomial(a_o - 1, m - 1)
            * binomial(a_o - m, w_11)
            * binomial(N - a_o - m, n)
            * binomial(2 * m, w_t)
        )
    return total


def _iotse_log(N: int, a_i: int, a_o: int, b: int) -> LogValue:
    if (a_i + b) % 2:
        return NEG_INF
    if a_o == 0:
        return log_binomial(N, a_i) if a_i == b else NEG_INF
    terms = []
    for m, n, w_t, w_11 in _mn_box(N, a_i, a_o, b):
        terms.append(
            log_binomial(N - a_o, m)
            + log_binomial(a_o - 1, m - 1)
            + log_binomial(a_o - m, w_11)
            + log_binomial(N - a_o - m, n)
            + log_binomial(2 * m, w_t)
        )
    return log_sum_exp(terms)


def acc_iotse(triple: AccTriple, mode: str = "exact") -> Union[BigCount, LogValue]:
    """Count of (a_i, a_o, b) trapping sets of the terminated accumulator.

    Returns an exact integer in ``exact`` mode, or the natural log of the
    count (NEG_INF for zero) in ``log`` mode.
    """
    _check_mode(mode)
    if mode == "exact":
        return _iotse_exact(triple.N, triple.a_i, triple.a_o, triple.b)
    return _iotse_log(triple.N, triple.a_i, triple.a_o, triple.b)


def acc_iowe(N: int, w: int, d: int) -> BigCount:
    """Input-output weight enumerator of the terminated accumulator.

    Counts weight-d codewords produced by weight-w inputs; equals the b = 0
    slice of the trapping-set enumerator.  Odd input weight cannot terminate
    and counts zero.
    """
    if N < 1:
        raise RangeError(f"block length must be >= 1, got {N}")
    if not 0 <= w <= N or not 0 <= d <= N:
        raise RangeError(f"(w={w}, d={d}) outside [0, {N}]")
    if w == 0:
        return 1 if d == 0 else 0
    if w % 2:
        return 0
    return binomial(N - d, w // 2) * binomial(d - 1, w // 2 - 1)


def acc_iotse_table(N: int, mode: str = "exact") -> IotseTable:
    """Tabulate every nonzero class count of block length N."""
    _check_mode(mode)
    if N < 1:
        raise RangeError(f"block length must be >= 1, got {N}")
    if mode == "exact" and N > EXACT_TABLE_N_MAX:
        raise ResourceLimitError(
            f"exact table for N={N} exceeds ceiling {EXACT_TABLE_N_MAX}"
        )
    fn = _iotse_exact if mode == "exact" else _iotse_log
    zero = 0 if mode == "exact" else NEG_INF
    entries: Dict[Tuple[int, int, int], Union[BigCount, LogValue]] = {}
    for a_i in range(N + 1):
        for a_o in range(N):  # a_o = N never occurs under termination
            for b in range(a_i % 2, N + 1, 2):  # a_i + b must be even
                v = fn(N, a_i, a_o, b)
                if v != zero:
                    entries[(a_i, a_o, b)] = v
    return IotseTable(N=N, mode=mode, entries=entries)


def decompositions(triple: AccTriple) -> List[Tuple[PathDecomposition, BigCount]]:
    """Break a class count into its per-(m, n) error-event terms.

    The returned terms are positive and sum to ``acc_iotse(triple)``.
    """
    N, a_i, a_o, b = triple.N, triple.a_i, triple.a_o, triple.b
    if (a_i + b) % 2:
        return []
    if a_o == 0:
        if a_i != b:
            return []
        return [(PathDecomposition(m=0, n=a_i, w_t=0, w_11=0), binomial(N, a_i))]
    out = []
    for m, n, w_t, w_11 in _mn_box(N, a_i, a_o, b):
        count = (
            binomial(N - a_o, m)
            * binomial(a_o - 1, m - 1)
            * binomial(a_o - m, w_11)
            * binomial(N - a_o - m, n)
            * binomial(2 * m, w_t)
        )
        if count:
            out.append((PathDecomposition(m=m, n=n, w_t=w_t, w_11=w_11), count))
    return out
