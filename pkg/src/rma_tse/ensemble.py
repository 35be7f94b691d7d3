"""Uniform-interleaver composition of component enumerators.

A repeat-accumulate chain repeats K information bits q times and pushes the
resulting length-N block through L serially interleaved accumulators.  Under
the uniform interleaver, the joint count of a multi-level trapping
configuration factors into per-level accumulator counts divided by the
number of ways the interleaver can place each level's input set:

    value(profile) = C(K, w) * prod_l  A(a_i_l, a_o_l, b_l) / C(N, a_i_l)

with a_i_1 = q*w and a_i_l = a_o_{l-1}.  Summing profiles with
w + sum(a_o_l) = a and sum(b_l) = b gives the ensemble-average count of
(a, b) trapping sets.  Exact mode carries ``Fraction`` values end to end.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterator, List, Optional, Tuple, Union

from . import acc
from .acc import RangeError, ResourceLimitError, _iotse_exact, _iotse_log
from .combinatorics import NEG_INF, ExactRatio, LogValue, binomial, log_binomial, log_sum_exp

__all__ = [
    "EnsembleConfig",
    "TrappingSetClass",
    "ConditionalProfile",
    "TseResult",
    "conditional_tse",
    "ensemble_tse",
    "ensemble_table",
    "ensemble_iowe",
    "EXACT_CLASS_N_MAX",
    "EXACT_TABLE_N_MAX",
    "LOG_N_MAX",
]

# Size ceilings: a full exact table touches O(K * N^2L) profiles, a single
# class far fewer; log mode trades exactness for reach.
EXACT_TABLE_N_MAX = 64
EXACT_CLASS_N_MAX = 128
LOG_N_MAX = 512

Value = Union[ExactRatio, LogValue]


@dataclass(frozen=True)
class EnsembleConfig:
    """Parameters of a repeat-accumulate chain: repetition q, K info bits,
    L accumulators, inner block length N = q*K."""

    q: int
    K: int
    L: int
    N: int = field(init=False)

    def __post_init__(self) -> None:
        if self.q < 1 or self.K < 1 or self.L < 1:
            raise RangeError(f"q, K, L must all be >= 1, got {self.q}, {self.K}, {self.L}")
        object.__setattr__(self, "N", self.q * self.K)

    @property
    def a_max(self) -> int:
        # Termination excludes each accumulator's final output node.
        return self.K + self.L * (self.N - 1)

    @property
    def b_max(self) -> int:
        return self.L * self.N


@dataclass(frozen=True)
class TrappingSetClass:
    """Total erroneous variable nodes (all layers) and unsatisfied checks."""

    a: int
    b: int


@dataclass(frozen=True)
class ConditionalProfile:
    """One way of distributing a class over the layers: w participating
    information bits plus an (a_o_l, b_l) pair per accumulator level."""

    w: int
    levels: Tuple[Tuple[int, int], ...]


@dataclass
class TseResult:
    """Ensemble-average count with an optional per-profile breakdown."""

    value: Value
    breakdown: Optional[List[Tuple[ConditionalProfile, Value]]] = None


def _validate_class(config: EnsembleConfig, cls: TrappingSetClass) -> None:
    if not 0 <= cls.a <= config.a_max:
        raise RangeError(f"a={cls.a} outside [0, {config.a_max}]")
    if not 0 <= cls.b <= config.b_max:
        raise RangeError(f"b={cls.b} outside [0, {config.b_max}]")


def _check_ceiling(config: EnsembleConfig, mode: str, limit: int) -> None:
    if config.N > limit:
        raise ResourceLimitError(
            f"N={config.N} exceeds the {mode}-mode ceiling {limit}"
        )


def conditional_tse(
    config: EnsembleConfig, profile: ConditionalProfile, mode: str = "exact"
) -> Value:
    """Ensemble-average count of one conditional profile.

    Infeasible profiles (parity, empty component classes) are a zero value,
    not an error; structurally out-of-range fields raise ``RangeError``.
    """
    acc._check_mode(mode)
    N = config.N
    if len(profile.levels) != config.L:
        raise RangeError(
            f"profile has {len(profile.levels)} levels, config has L={config.L}"
        )
    if not 0 <= profile.w <= config.K:
        raise RangeError(f"w={profile.w} outside [0, {config.K}]")
    for a_o, b_l in profile.levels:
        if not 0 <= a_o <= N or not 0 <= b_l <= N:
            raise RangeError(f"level entry ({a_o}, {b_l}) outside [0, {N}]")

    if mode == "exact":
        value = Fraction(binomial(config.K, profile.w))
        a_i = config.q * profile.w
        for a_o, b_l in profile.levels:
            cnt = _iotse_exact(N, a_i, a_o, b_l)
            if cnt == 0:
                return Fraction(0)
            value *= Fraction(cnt, binomial(N, a_i))
            a_i = a_o
        return value

    value = log_binomial(config.K, profile.w)
    a_i = config.q * profile.w
    for a_o, b_l in profile.levels:
        lv = _iotse_log(N, a_i, a_o, b_l)
        if lv == NEG_INF:
            return NEG_INF
        value += lv - log_binomial(N, a_i)
        a_i = a_o
    return value


def _profiles(
    config: EnsembleConfig, cls: TrappingSetClass, mode: str
) -> Iterator[Tuple[ConditionalProfile, Value]]:
    """Yield (profile, value) pairs in lexicographic profile order.

    Levels whose component class is parity-infeasible or empty are pruned
    before recursing.
    """
    N, L, q = config.N, config.L, config.q
    exact = mode == "exact"
    iotse = _iotse_exact if exact else _iotse_log
    zero = 0 if exact else NEG_INF

    def recurse(level: int, a_i: int, a_rem: int, b_rem: int, prefix, value):
        if level == L:
            if a_rem == 0 and b_rem == 0:
                yield ConditionalProfile(w=prefix[0], levels=tuple(prefix[1:])), value
            return
        for a_o in range(0, min(a_rem, N - 1) + 1):
            if level == L - 1 and a_o != a_rem:
                continue
            for b_l in range(0, min(b_rem, N) + 1):
                if level == L - 1 and b_l != b_rem:
                    continue
                if (a_i + b_l) % 2:
                    continue
                cnt = iotse(N, a_i, a_o, b_l)
                if cnt == zero:
                    continue
                if exact:
                    nxt = value * Fraction(cnt, binomial(N, a_i))
                else:
                    nxt = value + cnt - log_binomial(N, a_i)
                yield from recurse(
                    level + 1,
                    a_o,
                    a_rem - a_o,
                    b_rem - b_l,
                    prefix + [(a_o, b_l)],
                    nxt,
                )

    for w in range(0, min(config.K, cls.a) + 1):
        base: Value = Fraction(binomial(config.K, w)) if exact else log_binomial(config.K, w)
        yield from recurse(0, q * w, cls.a - w, cls.b, [w], base)


def ensemble_tse(
    config: EnsembleConfig,
    cls: TrappingSetClass,
    mode: str = "exact",
    breakdown: bool = False,
) -> TseResult:
    """Ensemble-average count of (a, b) trapping sets of the full chain."""
    acc._check_mode(mode)
    _validate_class(config, cls)
    _check_ceiling(config, mode, EXACT_CLASS_N_MAX if mode == "exact" else LOG_N_MAX)

    pairs = list(_profiles(config, cls, mode)) if breakdown else None
    if mode == "exact":
        if pairs is not None:
            total: Value = sum((v for _, v in pairs), Fraction(0))
        else:
            total = sum((v for _, v in _profiles(config, cls, mode)), Fraction(0))
    else:
        source = pairs if pairs is not None else _profiles(config, cls, mode)
        total = log_sum_exp([v for _, v in source])
    return TseResult(value=total, breakdown=pairs)


def _component_index(N: int, mode: str) -> Dict[int, List[Tuple[int, int, Value]]]:
    """Nonzero component classes grouped by input count a_i."""
    table = acc.acc_iotse_table(N, mode)
    index: Dict[int, List[Tuple[int, int, Value]]] = {}
    for (a_i, a_o, b), cnt in sorted(table.entries.items()):
        index.setdefault(a_i, []).append((a_o, b, cnt))
    return index


def ensemble_table(
    config: EnsembleConfig, mode: str = "exact"
) -> Dict[Tuple[int, int], Value]:
    """All nonzero ensemble-average class counts, keyed by (a, b).

    Built by a forward pass over levels carrying (next input count,
    accumulated a, accumulated b); exact-mode results equal the per-class
    profile sums as rationals.
    """
    acc._check_mode(mode)
    exact = mode == "exact"
    _check_ceiling(config, mode, EXACT_TABLE_N_MAX if exact else LOG_N_MAX)
    N = config.N
    index = _component_index(N, mode)

    # state: (a_i_next, a_acc, b_acc) -> value (exact) or list of logs
    state: Dict[Tuple[int, int, int], object] = {}
    for w in range(config.K + 1):
        key = (config.q * w, w, 0)
        if exact:
            state[key] = state.get(key, Fraction(0)) + Fraction(binomial(config.K, w))
        else:
            state.setdefault(key, []).append(log_binomial(config.K, w))

    for _ in range(config.L):
        nxt: Dict[Tuple[int, int, int], object] = {}
        for (a_i, a_acc, b_acc), val in sorted(state.items()):
            if exact:
                denom = binomial(N, a_i)
            else:
                log_denom = log_binomial(N, a_i)
                val = log_sum_exp(val)  # collapse carried terms once per state
            for a_o, b_l, cnt in index.get(a_i, []):
                key = (a_o, a_acc + a_o, b_acc + b_l)
                if exact:
                    add = val * Fraction(cnt, denom)
                    nxt[key] = nxt.get(key, Fraction(0)) + add
                else:
                    nxt.setdefault(key, []).append(val + cnt - log_denom)
        state = nxt

    out: Dict[Tuple[int, int], Value] = {}
    if exact:
        for (_, a_acc, b_acc), val in sorted(state.items()):
            if val:
                k = (a_acc, b_acc)
                out[k] = out.get(k, Fraction(0)) + val
        return {k: v for k, v in sorted(out.items()) if v}
    logs: Dict[Tuple[int, int], List[float]] = {}
    for (_, a_acc, b_acc), val in sorted(state.items()):
        logs.setdefault((a_acc, b_acc), []).extend(val)
    return {k: log_sum_exp(v) for k, v in sorted(logs.items())}


def ensemble_iowe(config: EnsembleConfig, d: int, mode: str = "exact") -> Value:
    """Ensemble-average number of weight-d final codewords.

    This is the all-satisfied (b_l = 0 everywhere) chain with the last
    level's output weight pinned to d, intermediate weights free.
    """
    acc._check_mode(mode)
    if not 0 <= d <= config.N:
        raise RangeError(f"d={d} outside [0, {config.N}]")
    _check_ceiling(config, mode, EXACT_CLASS_N_MAX if mode == "exact" else LOG_N_MAX)
    exact = mode == "exact"
    N = config.N
    iotse = _iotse_exact if exact else _iotse_log
    zero = 0 if exact else NEG_INF

    dist: Dict[int, object] = {}
    for w in range(config.K + 1):
        key = config.q * w
        if exact:
            dist[key] = dist.get(key, Fraction(0)) + Fraction(binomial(config.K, w))
        else:
            dist.setdefault(key, []).append(log_binomial(config.K, w))

    for level in range(config.L):
        last = level == config.L - 1
        nxt: Dict[int, object] = {}
        for a_i, val in sorted(dist.items()):
            if not exact:
                val = log_sum_exp(val)
                log_denom = log_binomial(N, a_i)
            outs = (d,) if last else range(N)
            for a_o in outs:
                cnt = iotse(N, a_i, a_o, 0)
                if cnt == zero:
                    continue
                if exact:
                    add = val * Fraction(cnt, binomial(N, a_i))
                    nxt[a_o] = nxt.get(a_o, Fraction(0)) + add
                else:
                    nxt.setdefault(a_o, []).append(val + cnt - log_denom)
        dist = nxt

    if exact:
        return dist.get(d, Fraction(0))
    return log_sum_exp(dist.get(d, []))
