"""Exact evaluation of the Tsirelson norm ||.||_T and its 2-convexification ||.||_{T^2}.

Both norms are least fixed points of

    nu(x) = max( max_n |a_n|, c * sup_{k <= E_1 < ... < E_k} combine(nu(E_1 x), ..., nu(E_k x)) )

with c * combine = 2^{-1/2} (sum nu_j^2)^{1/2} for T^2 and 1/2 sum nu_j for T.

The supremum may be taken over successive intervals of the support: replacing each E_j by its interval hull keeps
the family successive and admissible and can only raise each nu(E_j x). Splitting a part never lowers the combined
value (triangle inequality for T, 2-convexity for T^2), so a family starting at support position s may use
min(index(s), remaining length) consecutive parts covering everything up to the right end.

For every interval [a, b] of support positions the engine keeps w(a, b), the weight of nu on that interval
(nu^2 for T^2, nu for T). For a fixed right end b the cover table

    H_b[p][t] = best sum of weights over partitions of positions t..b into at most p consecutive parts

is filled column by column from the right, and the split value of [a, b] is the best H_b[min(index(s), b-s+1)][s]
over starts s >= a.
"""

import math
from functools import lru_cache
from typing import Annotated, Literal

import numpy as np
from pydantic import Field

from . import config
from .config import BRUTE_FORCE_HARD_LIMIT, SWEEP_TOLERANCE, brute_force_support
from .logger import get_logger
from .schema import (AdmissiblePartition, CertificateNode, Explicit, FinVector, Interval, NormCertificate,
                     NormResult, Space, is_admissible)
from .schema.exceptions import CertificateError, PreconditionError, SizeError
from .vectors import restrict, square

log = get_logger()

Schedule = Literal["ordered", "jacobi"]

# Relative slack used when matching recomputed sums against stored optima.
_TIE_TOLERANCE = 1e-12


def _mode(mode: "Space | str") -> Space:
    try:
        space = Space.parse(mode)
    except ValueError as e:
        raise PreconditionError(message=str(e))
    if space not in (Space.T, Space.T2):
        log.error(f"The norm engine evaluates 't' or 't2', but got '{space.value}'")
        raise PreconditionError(message=f"The norm engine evaluates 't' or 't2', got '{space.value}'; "
                                        f"use symmetric.s_norm for 'st2'")
    return space


def _weight(value, mode: Space):
    return value * value if mode == Space.T2 else value


def _value(weight, mode: Space):
    return np.sqrt(weight) if mode == Space.T2 else weight


def _split_value(total: float, mode: Space) -> float:
    """c * combine for a family whose weights sum to ``total``."""
    if mode == Space.T2:
        return math.sqrt(max(total, 0.0) / 2.0)
    return total / 2.0


def _check_support(x: FinVector, cap: int, env: str) -> None:
    if x.support_size > cap:
        log.error(f"Support size {x.support_size} exceeds the cap {cap} ({env})")
        raise SizeError(message=f"Support size {x.support_size} exceeds the cap {cap}; raise {env} or pass a "
                                f"larger limit", cap=cap)


# Interval DP.

def _part_limits(idx: np.ndarray, b: int) -> np.ndarray:
    """Largest useful part count for a family starting at each position s <= b."""
    return np.minimum(idx[:b + 1], b + 1 - np.arange(b + 1))


def _row_depths(limits: np.ndarray) -> np.ndarray:
    """Rows of H_b that column t must hold: families starting at s <= t read at most limits[s] rows there."""
    return np.maximum.accumulate(limits)


def _new_cover_table(parts: int, b: int) -> np.ndarray:
    # Rows beyond a column's depth stay -inf and are never read.
    table = np.full((parts + 1, b + 2), -np.inf, dtype=np.float64)
    table[:, b + 1] = 0.0
    return table


def _fill_column(table: np.ndarray, w_row: np.ndarray, a: int, b: int, depth: int) -> None:
    """Fills rows 1..depth of column a of H_b from the columns right of it; ``w_row`` holds w(a, a..b)."""
    rows = min(depth, b - a + 1)
    candidates = w_row[None, :] + table[:rows, a + 1:b + 2]
    table[1:rows + 1, a] = candidates.max(axis=1)
    # More parts than elements never help.
    table[rows + 1:depth + 1, a] = table[rows, a]


def _leaf_table(absx: np.ndarray, mode: Space) -> np.ndarray:
    """w(a, b) initialised at the leaf value max_{a <= s <= b} |x_s|."""
    m = len(absx)
    w = np.zeros((m, m), dtype=np.float64)
    for a in range(m):
        w[a, a:] = np.maximum.accumulate(absx[a:])
    return _weight(w, mode)


def _sweep(absx: np.ndarray, idx: np.ndarray, mode: Space, w_in: np.ndarray, w_out: np.ndarray) -> None:
    """One pass over all intervals by increasing right end and decreasing left end.

    When ``w_in is w_out`` the pass runs in place and every interval reads the final values of its proper
    sub-intervals, which reaches the least fixed point in a single pass.
    """
    m = len(absx)
    in_place = w_in is w_out
    for b in range(m):
        limits = _part_limits(idx, b)
        depths = _row_depths(limits)
        table = _new_cover_table(int(depths[-1]), b)
        linf = 0.0
        best = -np.inf
        for a in range(b, -1, -1):
            linf = max(linf, absx[a])
            depth = int(depths[a])
            _fill_column(table, w_in[a, a:b + 1], a, b, depth)
            value = max(linf, _split_value(max(best, table[limits[a], a]), mode))
            w_out[a, b] = _weight(value, mode)
            if in_place:
                # The single part [a, b] now carries its final weight for the intervals left of a.
                np.maximum(table[1:depth + 1, a], w_out[a, b], out=table[1:depth + 1, a])
            best = max(best, table[limits[a], a])


def _prepare(x: FinVector) -> tuple[np.ndarray, np.ndarray]:
    return np.abs(x.values), x.indices


def _solve(x: FinVector, mode: Space, schedule: Schedule) -> tuple[np.ndarray, int, list[float]]:
    absx, idx = _prepare(x)
    m = len(absx)
    w = _leaf_table(absx, mode)
    trace = [float(_value(w[0, m - 1], mode))]
    if schedule == "ordered":
        _sweep(absx, idx, mode, w, w)
        trace.append(float(_value(w[0, m - 1], mode)))
        return w, 1, trace

    upper = np.triu_indices(m)
    sweeps = 0
    while True:
        sweeps += 1
        w_next = np.zeros_like(w)
        _sweep(absx, idx, mode, w, w_next)
        change = float(np.max(np.abs(_value(w_next[upper], mode) - _value(w[upper], mode))))
        w = w_next
        trace.append(float(_value(w[0, m - 1], mode)))
        log.debug(f"Sweep {sweeps}: largest change {change:.3e}, value {trace[-1]!r}")
        if change <= SWEEP_TOLERANCE:
            return w, sweeps, trace
        if sweeps > m + 1:
            log.warning(f"Fixed-point sweeps did not settle after {sweeps} passes (last change {change:.3e})")
            return w, sweeps, trace


class _CertificateBuilder:
    """Rebuilds the norming tree of an evaluated vector from its weight table."""

    def __init__(self, absx: np.ndarray, idx: np.ndarray, w: np.ndarray, mode: Space):
        self.absx = absx
        self.idx = idx
        self.w = w
        self.mode = mode
        self.cover_table = lru_cache(maxsize=16)(self._cover_table)

    def _cover_table(self, b: int) -> np.ndarray:
        depths = _row_depths(_part_limits(self.idx, b))
        table = _new_cover_table(int(depths[-1]), b)
        for a in range(b, -1, -1):
            _fill_column(table, self.w[a, a:b + 1], a, b, int(depths[a]))
        return table

    def node(self, a: int, b: int) -> CertificateNode:
        value = float(_value(self.w[a, b], self.mode))
        leaf = a + int(np.argmax(self.absx[a:b + 1]))
        if value <= self.absx[leaf] + _TIE_TOLERANCE * max(1.0, value):
            return CertificateNode(index=int(self.idx[leaf]), value=value)

        table = self.cover_table(b)
        limits = _part_limits(self.idx, b)
        target = max(float(table[limits[s], s]) for s in range(a, b + 1))
        slack = _TIE_TOLERANCE * max(1.0, target)

        # Fewest parts first, then the earliest start.
        choice: tuple[int, int] | None = None
        for s in range(a, b + 1):
            reaching = np.nonzero(table[1:limits[s] + 1, s] >= target - slack)[0]
            if len(reaching) and (choice is None or reaching[0] + 1 < choice[0]):
                choice = (int(reaching[0]) + 1, s)
        count, start = choice

        parts: list[Interval] = []
        children: list[CertificateNode] = []
        t = start
        while t <= b:
            row = self.w[t, t:b + 1] + table[count - 1, t + 1:b + 2]
            # Earliest breakpoint that keeps the remainder optimal.
            u = t + int(np.nonzero(row >= table[count, t] - slack)[0][0])
            parts.append(Interval(lo=int(self.idx[t]), hi=int(self.idx[u])))
            children.append(self.node(t, u))
            t = u + 1
            count -= 1
        return CertificateNode(parts=AdmissiblePartition(tuple(parts)), children=children, value=value)


def _zero_result(mode: Space) -> NormResult:
    root = CertificateNode(index=1, value=0.0)
    return NormResult(value=0.0, certificate=NormCertificate(mode=mode, root=root, value=0.0), iterations=0)


def _evaluate(x: FinVector, mode: Space, limit: int | None, schedule: Schedule) -> NormResult:
    if schedule not in ("ordered", "jacobi"):
        raise PreconditionError(message=f"Unknown schedule '{schedule}', use 'ordered' or 'jacobi'")
    cap = config.max_support() if limit is None else limit
    _check_support(x, cap, "TSL_MAX_SUPPORT")
    if x.is_zero():
        return _zero_result(mode)

    m = x.support_size
    if m >= 256:
        log.info(f"Evaluating a {mode.value} norm on support {m}")
    w, iterations, _ = _solve(x, mode, schedule)
    absx, idx = _prepare(x)
    root = _CertificateBuilder(absx, idx, w, mode).node(0, m - 1)
    log.debug(f"{mode.value} norm of a vector with support {m}: {root.value!r} after {iterations} sweep(s)")
    return NormResult(value=root.value, certificate=NormCertificate(mode=mode, root=root, value=root.value),
                      iterations=iterations)


def t2_norm(
        x: Annotated[FinVector, Field(description="Vector to evaluate.")],
        max_support: Annotated[int | None, Field(
            description="Support cap, optional. Defaults to TSL_MAX_SUPPORT (1024).")] = None,
        schedule: Annotated[Schedule, Field(
            description="'ordered' (single in-place pass) or 'jacobi' (synchronous sweeps).")] = "ordered",
) -> Annotated[NormResult, Field(description="||x|| in T^2 with a norming tree.")]:
    """Raises:
        SizeError: If the support exceeds the cap.
    """
    return _evaluate(x, Space.T2, max_support, schedule)


def t_norm(
        x: Annotated[FinVector, Field(description="Vector to evaluate.")],
        max_support: Annotated[int | None, Field(
            description="Support cap, optional. Defaults to TSL_MAX_SUPPORT (1024).")] = None,
        schedule: Annotated[Schedule, Field(
            description="'ordered' (single in-place pass) or 'jacobi' (synchronous sweeps).")] = "ordered",
) -> Annotated[NormResult, Field(description="||x|| in T with a norming tree.")]:
    """Raises:
        SizeError: If the support exceeds the cap.
    """
    return _evaluate(x, Space.T, max_support, schedule)


def norm(x: FinVector, mode: Space | str, max_support: int | None = None) -> NormResult:
    return _evaluate(x, _mode(mode), max_support, "ordered")


def norm_value(x: FinVector, mode: Space | str = Space.T2, max_support: int | None = None) -> float:
    """The norm without building a certificate."""
    space = _mode(mode)
    cap = config.max_support() if max_support is None else max_support
    _check_support(x, cap, "TSL_MAX_SUPPORT")
    if x.is_zero():
        return 0.0
    w, _, _ = _solve(x, space, "ordered")
    return float(_value(w[0, -1], space))


def fixed_point_trace(x: FinVector, mode: Space | str = Space.T2, max_support: int | None = None) -> list[float]:
    """Value of the whole support after each synchronous sweep, starting from the leaf initialisation."""
    space = _mode(mode)
    cap = config.max_support() if max_support is None else max_support
    _check_support(x, cap, "TSL_MAX_SUPPORT")
    if x.is_zero():
        return [0.0]
    _, _, trace = _solve(x, space, "jacobi")
    return trace


def convexification_check(x: FinVector, max_support: int | None = None) -> tuple[float, float]:
    """(||x||_{T^2}, ||x^2||_T^{1/2}); the two agree up to rounding or TSL_NORM_TOL, whichever is larger."""
    lhs = norm_value(x, Space.T2, max_support)
    rhs = math.sqrt(norm_value(square(x), Space.T, max_support))
    if abs(lhs - rhs) > max(config.norm_tolerance(), 1e-7 * max(1.0, lhs)):
        log.warning(f"Convexification identity off by {abs(lhs - rhs):.3e}: {lhs!r} vs {rhs!r}")
    return lhs, rhs


# Exhaustive oracle over arbitrary finite sets.

def _bits(mask: int) -> list[int]:
    return [i for i in range(mask.bit_length()) if mask >> i & 1]


def _submasks(mask: int):
    sub = mask
    while sub:
        yield sub
        sub = (sub - 1) & mask


def brute_force_norm(
        x: Annotated[FinVector, Field(description="Vector to evaluate, support at most the oracle cap.")],
        mode: Annotated[Space | str, Field(description="'t' or 't2'.")] = Space.T2,
        max_support: Annotated[int | None, Field(
            description="Oracle cap, optional. Defaults to TSL_BRUTE_FORCE_SUPPORT (6), never above 8.")] = None,
) -> Annotated[NormResult, Field(description="Exact supremum over all nested admissible set families.")]:
    """Enumerates every admissible family of arbitrary successive subsets at every node of the tree.

    Raises:
        SizeError: If the support exceeds the oracle cap.
    """
    space = _mode(mode)
    cap = brute_force_support() if max_support is None else min(max_support, BRUTE_FORCE_HARD_LIMIT)
    _check_support(x, cap, "TSL_BRUTE_FORCE_SUPPORT")
    if x.is_zero():
        return _zero_result(space)

    absx, idx = _prepare(x)
    nu_memo: dict[int, tuple[float, tuple[int, ...] | None]] = {}
    chain_memo: dict[tuple[int, int], tuple[float, tuple[int, ...]]] = {}

    def below_or_at(position: int) -> int:
        return (1 << (position + 1)) - 1

    def nu(mask: int) -> float:
        if mask not in nu_memo:
            positions = _bits(mask)
            leaf = max(positions, key=lambda p: (absx[p], -p))
            best, blocks = -math.inf, None
            # The family {mask} alone gives c * nu(mask) < nu(mask) and is skipped.
            for first in _submasks(mask):
                if first == mask:
                    continue
                lowest = _bits(first)[0]
                rest = mask & ~below_or_at(first.bit_length() - 1)
                tail, tail_blocks = chain(rest, int(idx[lowest]) - 1)
                total = _weight(nu(first), space) + tail
                if total > best:
                    best, blocks = total, (first, *tail_blocks)
            value = float(absx[leaf])
            if blocks is not None and _split_value(best, space) > value:
                nu_memo[mask] = (_split_value(best, space), blocks)
            else:
                nu_memo[mask] = (value, None)
        return nu_memo[mask][0]

    def chain(mask: int, remaining: int) -> tuple[float, tuple[int, ...]]:
        """Best weight sum of at most ``remaining`` successive nonempty subsets of ``mask``."""
        if remaining <= 0 or mask == 0:
            return 0.0, ()
        key = (mask, remaining)
        if key not in chain_memo:
            best, blocks = 0.0, ()
            for block in _submasks(mask):
                rest = mask & ~below_or_at(block.bit_length() - 1)
                tail, tail_blocks = chain(rest, remaining - 1)
                total = _weight(nu(block), space) + tail
                if total > best:
                    best, blocks = total, (block, *tail_blocks)
            chain_memo[key] = (best, blocks)
        return chain_memo[key]

    def node(mask: int) -> CertificateNode:
        value, blocks = nu_memo[mask]
        if blocks is None:
            positions = _bits(mask)
            leaf = max(positions, key=lambda p: (absx[p], -p))
            return CertificateNode(index=int(idx[leaf]), value=value)
        parts = AdmissiblePartition(tuple(Explicit(indices=tuple(int(idx[p]) for p in _bits(block)))
                                          for block in blocks))
        return CertificateNode(parts=parts, children=[node(block) for block in blocks], value=value)

    full = (1 << len(absx)) - 1
    value = nu(full)
    root = node(full)
    log.debug(f"Oracle {space.value} norm on support {len(absx)}: {value!r} ({len(nu_memo)} subsets)")
    return NormResult(value=value, certificate=NormCertificate(mode=space, root=root, value=value), iterations=1)


# Certificates.

def _replay(x: FinVector, node: CertificateNode, mode: Space, path: str) -> float:
    has_leaf = node.index is not None
    has_split = node.parts is not None or node.children is not None
    if has_leaf == has_split:
        raise CertificateError(message=f"Node {path} must be either a leaf (index) or a split (parts and children)")
    if has_leaf:
        return abs(x.get(node.index))

    parts, children = node.parts or [], node.children or []
    if not parts or len(parts) != len(children):
        raise CertificateError(message=f"Node {path} has {len(parts)} parts and {len(children)} children")
    if not is_admissible(parts):
        raise CertificateError(message=f"Node {path}: {len(parts)} parts are not admissible "
                                       f"(successive, starting at index >= {len(parts)})")
    total = 0.0
    for j, (part, child) in enumerate(zip(parts, children)):
        child_path = f"{path}.{j}"
        if child.index is not None and not part.contains(child.index):
            raise CertificateError(message=f"Leaf {child_path} index {child.index} lies outside its part")
        for inner in child.parts or ():
            if not inner.issubset(part):
                raise CertificateError(message=f"Node {child_path} uses a set outside its enclosing part")
        total += _weight(_replay(restrict(x, part), child, mode, child_path), mode)
    return _split_value(total, mode)


def verify_certificate(
        x: Annotated[FinVector, Field(description="Vector the certificate claims to norm.")],
        cert: Annotated[NormCertificate, Field(description="Norming tree to replay.")],
        mode: Annotated[Space | str | None, Field(
            description="'t' or 't2', optional. Defaults to the certificate's own mode.")] = None,
) -> Annotated[float, Field(description="Replayed value, a lower bound of the norm.")]:
    """Recomputes the tree bottom up with the norm's combination rule.

    Raises:
        CertificateError: If a node is malformed, a family is not admissible, or a set leaves its enclosing part.
    """
    space = cert.mode if mode is None else _mode(mode)
    if space != cert.mode:
        raise CertificateError(message=f"Certificate for '{cert.mode.value}' replayed as '{space.value}'")
    return _replay(x, cert.root, space, "root")


def is_admissible_tree(cert: NormCertificate) -> bool:
    return all(is_admissible(node.parts) for node, _ in cert.root.walk() if node.parts is not None)


def certificate_atoms(cert: NormCertificate) -> FinVector:
    """Leaf weights 2^{-depth}: the tree's T^2 value of x is (sum_i weight_i x_i^2)^{1/2}."""
    return FinVector.from_pairs((index, 2.0 ** -depth) for index, depth in cert.root.leaves())


def _maximal(atoms: set[tuple[float, ...]]) -> set[tuple[float, ...]]:
    """Drops atoms dominated coordinatewise by another atom."""
    ordered = sorted(atoms, key=sum, reverse=True)
    kept: list[tuple[float, ...]] = []
    for atom in ordered:
        if not any(all(p >= q for p, q in zip(other, atom)) for other in kept):
            kept.append(atom)
    return set(kept)


def enumerate_norming_atoms(x: FinVector, max_support: int | None = None) -> np.ndarray:
    """Leaf-weight vectors of all interval norming trees of the support, dominated ones removed.

    Rows are indexed like ``x.indices``. ||x||_{T^2}^2 is the largest sum_i row_i x_i^2.
    """
    cap = brute_force_support() if max_support is None else min(max_support, BRUTE_FORCE_HARD_LIMIT)
    _check_support(x, cap, "TSL_BRUTE_FORCE_SUPPORT")
    idx = x.indices
    m = len(idx)
    if m == 0:
        return np.zeros((0, 0))

    def unit(i: int) -> tuple[float, ...]:
        return tuple(1.0 if j == i else 0.0 for j in range(m))

    def plus(p: tuple[float, ...], q: tuple[float, ...]) -> tuple[float, ...]:
        return tuple(a + b for a, b in zip(p, q))

    zero = (0.0,) * m

    @lru_cache(maxsize=None)
    def atoms(a: int, b: int) -> frozenset:
        found = {unit(i) for i in range(a, b + 1)}
        for s in range(a, b + 1):
            limit = min(int(idx[s]), b - s + 1)
            for u in range(s, b + 1):
                if s == a and u == b:
                    continue
                tails = {zero} if u == b else (covers(u + 1, b, limit - 1) if limit > 1 else set())
                for head in atoms(s, u):
                    for tail in tails:
                        found.add(tuple(v / 2.0 for v in plus(head, tail)))
        return frozenset(_maximal(found))

    @lru_cache(maxsize=None)
    def covers(t: int, b: int, remaining: int) -> frozenset:
        found = set()
        for u in range(t, b + 1):
            if u < b and remaining == 1:
                continue
            tails = {zero} if u == b else covers(u + 1, b, remaining - 1)
            for head in atoms(t, u):
                for tail in tails:
                    found.add(plus(head, tail))
        return frozenset(_maximal(found))

    return np.array(sorted(atoms(0, m - 1), reverse=True), dtype=np.float64)
