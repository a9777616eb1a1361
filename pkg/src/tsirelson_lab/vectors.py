"""Finitely supported vectors, index sets, rearrangement and spread operators, and the counting formulas.

All functions are pure; vectors are immutable.
"""

import json
import math
from enum import Enum
from typing import Annotated, Iterable, Literal, Sequence

import numpy as np
from pydantic import Field, ValidationError

from .config import saturation_cap
from .logger import get_logger
from .schema import FinVector, IndexSet
from .schema.exceptions import DomainError, InputParseError, PreconditionError

log = get_logger()

Layout = Literal["consecutive", "interleaved"]


class Saturation(Enum):
    """Marker returned instead of integers beyond the saturation cap."""

    SATURATED = "saturated"

    def __repr__(self) -> str:
        return "Saturation.SATURATED"


# Restriction and rearrangement.

def restrict(x: FinVector, part: IndexSet) -> FinVector:
    """Ex = sum_{n in E} a_n t_n."""
    if x.is_zero():
        return x
    indices = x.indices
    keep = part.mask(indices)
    if keep.all():
        return x
    return FinVector.from_arrays(indices[keep], x.values[keep])


def restrict_range(x: FinVector, lo: int, hi: int) -> FinVector:
    """Restriction to the index interval [lo, hi]."""
    return FinVector.model_construct(coords=tuple((i, v) for i, v in x.coords if lo <= i <= hi))


def decreasing_rearrange(x: FinVector) -> FinVector:
    """Dx: the nonzero values ordered by non-increasing modulus onto indices 1, 2, ...

    Signs are kept; equal moduli keep their original index order.
    """
    if x.is_zero():
        return x
    values = x.values
    order = np.argsort(-np.abs(values), kind="stable")
    return FinVector.from_arrays(np.arange(1, len(values) + 1), values[order])


def compact(x: FinVector) -> FinVector:
    """Moves the support onto 1..m keeping the order of the coefficients."""
    return FinVector.from_arrays(np.arange(1, x.support_size + 1), x.values)


def place_values(values: Sequence[float], indices: Sequence[int]) -> FinVector:
    """sum_j values[j] t_{indices[j]}, indices strictly increasing."""
    return FinVector.from_arrays(np.asarray(indices, dtype=np.int64), np.asarray(values, dtype=np.float64))


def permute_values(x: FinVector, permutation: Sequence[int]) -> FinVector:
    """S_sigma on the support: the value at support position permutation[j] moves to support position j."""
    if sorted(permutation) != list(range(x.support_size)):
        raise PreconditionError(message=f"Not a permutation of {x.support_size} positions: {list(permutation)}")
    return FinVector.from_arrays(x.indices, x.values[np.asarray(permutation, dtype=np.int64)])


def spread(x: FinVector, k: int, j: int = 0) -> FinVector:
    """L_k^j: the coordinate at index n moves to index k*n + j."""
    if not isinstance(k, int) or k < 1:
        log.error(f"Spread factor must be a positive integer, but got '{k}'")
        raise PreconditionError(message=f"Spread factor must be a positive integer, got {k}")
    if not isinstance(j, int) or not 0 <= j < k:
        log.error(f"Spread offset must satisfy 0 <= j < k, but got j={j}, k={k}")
        raise PreconditionError(message=f"Spread offset must satisfy 0 <= j < {k}, got {j}")
    return FinVector.from_arrays(x.indices * k + j, x.values)


def map_indices(x: FinVector, phi) -> FinVector:
    """sum_j a_j t_{phi(j)} for a strictly increasing index map phi."""
    mapped = [int(phi(i)) for i, _ in x.coords]
    for a, b in zip(mapped, mapped[1:]):
        if b <= a:
            raise PreconditionError(message=f"Index map must be strictly increasing on the support, got {a} then {b}",
                                    witness=mapped)
    if mapped and mapped[0] < 1:
        raise PreconditionError(message=f"Index map must produce positive indices, got {mapped[0]}", witness=mapped)
    return FinVector.from_arrays(np.asarray(mapped, dtype=np.int64), x.values)


def disjoint_sum(blocks: Sequence[FinVector], layout: Layout = "consecutive") -> FinVector:
    """Places the blocks on disjoint index sets.

    consecutive: block i is shifted to start right after the last index used by block i-1, gaps kept.
    interleaved: the m-th coordinate of block i goes to index n*(m-1) + i, n the number of blocks.
    """
    if layout not in ("consecutive", "interleaved"):
        raise PreconditionError(message=f"Unknown layout '{layout}', use 'consecutive' or 'interleaved'")
    pairs: list[tuple[int, float]] = []
    if layout == "consecutive":
        offset = 0
        for block in blocks:
            if block.is_zero():
                continue
            first = block.coords[0][0]
            pairs.extend((offset + i - first + 1, v) for i, v in block.coords)
            offset = pairs[-1][0]
    else:
        n = len(blocks)
        for position, block in enumerate(blocks, start=1):
            pairs.extend((n * m + position, v) for m, (_, v) in enumerate(block.coords))
        pairs.sort()
    return FinVector.model_construct(coords=tuple(pairs))


def interleaved_targets(sizes: Sequence[int]) -> list[list[int]]:
    """Target indices of each block under the interleaved layout."""
    n = len(sizes)
    return [[n * m + position for m in range(size)] for position, size in enumerate(sizes, start=1)]


# Elementwise helpers.

def square(x: FinVector) -> FinVector:
    """Coordinatewise square, the x^2 of the 2-convexification."""
    return FinVector.from_arrays(x.indices, x.values ** 2)


def scale(x: FinVector, factor: float) -> FinVector:
    if factor == 0.0:
        return FinVector.zero()
    return FinVector.from_arrays(x.indices, x.values * factor)


def add(x: FinVector, y: FinVector) -> FinVector:
    return linear_combination([x, y], [1.0, 1.0])


def linear_combination(vectors: Sequence[FinVector], coefficients: Sequence[float]) -> FinVector:
    """sum_j c_j x_j, accumulated in a dense buffer over the union of supports."""
    supports = [v.indices for v in vectors if not v.is_zero()]
    if not supports:
        return FinVector.zero()
    union = np.unique(np.concatenate(supports))
    total = np.zeros(len(union), dtype=np.float64)
    for vector, c in zip(vectors, coefficients):
        if vector.is_zero() or c == 0.0:
            continue
        total[np.searchsorted(union, vector.indices)] += c * vector.values
    return FinVector.from_arrays(union, total)


def pairing(x: FinVector, y: FinVector) -> float:
    """<x, y> = sum_n x_n y_n."""
    common, ix, iy = np.intersect1d(x.indices, y.indices, assume_unique=True, return_indices=True)
    if len(common) == 0:
        return 0.0
    return float(np.dot(x.values[ix], y.values[iy]))


def l1_norm(x: FinVector) -> float:
    return float(np.abs(x.values).sum())


def l2_norm(x: FinVector) -> float:
    return float(np.sqrt(np.dot(x.values, x.values)))


def linf_norm(x: FinVector) -> float:
    return float(np.abs(x.values).max()) if x.coords else 0.0


def supports_disjoint(vectors: Iterable[FinVector]) -> bool:
    seen: set[int] = set()
    for vector in vectors:
        indices = {i for i, _ in vector.coords}
        if seen & indices:
            return False
        seen |= indices
    return True


# Fast-growing hierarchy, iterated exponentials and logarithms.

def hierarchy_g(
        i: Annotated[int, Field(description="Level of the hierarchy, i >= 0.")],
        n: Annotated[int, Field(description="Argument, n >= 1.")],
        cap: Annotated[int | None, Field(description="Saturation cap, defaults to TSL_SATURATION_CAP.")] = None,
) -> int | Saturation:
    """g_0(n) = n + 1 and g_{i+1}(n) = g_i^{(n)}(n), saturating above ``cap``."""
    if not isinstance(i, int) or i < 0:
        raise PreconditionError(message=f"Hierarchy level must be a nonnegative integer, got {i}")
    if not isinstance(n, int) or n < 1:
        raise PreconditionError(message=f"Hierarchy argument must be a positive integer, got {n}")
    cap = saturation_cap() if cap is None else cap
    value = _hierarchy(i, n, cap)
    return Saturation.SATURATED if value is None else value


def _hierarchy(i: int, n: int, cap: int) -> int | None:
    # Closed forms g_0(n) = n + 1, g_1(n) = 2n, g_2(n) = n 2^n keep the recursion shallow.
    if i == 0:
        value = n + 1
    elif i == 1:
        value = 2 * n
    elif i == 2:
        if n >= cap.bit_length():
            return None
        value = n << n
    else:
        value = n
        for _ in range(n):
            value = _hierarchy(i - 1, value, cap)
            if value is None:
                return None
    return None if value > cap else value


def iter_exp(i: int, n: float) -> float:
    """exp_0(n) = n and exp_i(n) = 2^{exp_{i-1}(n)}; inf once it overflows a double."""
    if not isinstance(i, int) or i < 0:
        raise PreconditionError(message=f"Iteration count must be a nonnegative integer, got {i}")
    value = float(n)
    for _ in range(i):
        try:
            value = math.ldexp(1.0, int(value)) if value.is_integer() else 2.0 ** value
        except OverflowError:
            return math.inf
    return value


def iter_log(i: int, n: float) -> float:
    """log_0(n) = n and log_i(n) = log_2(log_{i-1}(n)), defined while every intermediate value is positive."""
    if not isinstance(i, int) or i < 0:
        raise PreconditionError(message=f"Iteration count must be a nonnegative integer, got {i}")
    value = float(n)
    for level in range(1, i + 1):
        if value <= 0.0:
            log.error(f"log_{level}({n}) is undefined: log_{level - 1}({n}) = {value} is not positive")
            raise DomainError(message=f"log_{level}({n}) is undefined: log_{level - 1}({n}) = {value} <= 0")
        value = math.log2(value)
    return value


def kwapien_count(
        k: Annotated[int, Field(description="Dimension k >= 1.")],
        eps: Annotated[float, Field(description="Accuracy, 0 < eps < 1.")],
        cap: Annotated[int | None, Field(description="Saturation cap, defaults to TSL_SATURATION_CAP.")] = None,
) -> int | Saturation:
    """N(k, eps) = floor(2 k^2 / eps)^k."""
    if not isinstance(k, int) or k < 1:
        raise PreconditionError(message=f"k must be a positive integer, got {k}")
    if not 0.0 < eps < 1.0:
        raise PreconditionError(message=f"eps must lie in (0, 1), got {eps}")
    cap = saturation_cap() if cap is None else cap
    base = math.floor(2 * k * k / eps)
    # Cheap size test before forming the power.
    if k * math.log2(base) > cap.bit_length() + 1:
        return Saturation.SATURATED
    value = base ** k
    return Saturation.SATURATED if value > cap else value


# Vector literal format.

def vector_from_json(text: str, source: str = "<input>") -> FinVector:
    """Parses {"coords": [[index, value], ...]}; errors carry line and column where known."""
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        log.error(f"Malformed JSON in {source} at line {e.lineno}, column {e.colno}: {e.msg}")
        raise InputParseError(message=f"{source}: malformed JSON at line {e.lineno}, column {e.colno}: {e.msg}",
                              line=e.lineno, column=e.colno)
    if not isinstance(data, dict) or "coords" not in data:
        raise InputParseError(message=f"{source}: expected an object with a 'coords' array", line=1, column=1)
    try:
        return FinVector.model_validate(data)
    except ValidationError as e:
        first = e.errors()[0]
        location = ".".join(str(p) for p in first["loc"])
        log.error(f"Invalid vector literal in {source}: {location}: {first['msg']}")
        raise InputParseError(message=f"{source}: invalid vector literal at {location}: {first['msg']}")


def vector_to_json(x: FinVector) -> str:
    # json writes floats with repr, the shortest string that round-trips.
    return json.dumps(x.to_literal())
