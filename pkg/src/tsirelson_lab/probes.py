"""Monte Carlo and exact probes of the geometry of T^2 and S(T^2).

Gaussian draws come from a Philox stream keyed by the seed and are turned into normals by the Box-Muller
transform. All draws are generated up front and per-sample norms are reduced in sample order, so estimates do not
depend on the number of workers.
"""

import math
from typing import Annotated, Callable, Sequence

import numpy as np
from pydantic import Field

from . import config
from .logger import get_logger
from .norm_engine import norm_value, verify_certificate
from .schema import FinVector, GaussianConfig, ProbeReport, ProbeRow, Space, VectorFamily
from .schema.exceptions import GenerationError, PreconditionError, SizeError
from .symmetric import s_norm, s_norm_value
from .vectors import (disjoint_sum, l2_norm, linear_combination, map_indices, place_values, scale, spread,
                      supports_disjoint)

log = get_logger()

ALPHA_GRID: tuple[float, ...] = tuple(round(0.50 + 0.05 * i, 2) for i in range(11))
DEFAULT_CANDIDATES = 512
DEFAULT_REFINE_STEPS = 50
DEFAULT_REFINE_TOP = 8
# Rows whose relative standard error exceeds this also carry the square-function value.
NOISY_RELATIVE_STDERR = 0.02
_CHUNK = 64


def family_norm(x: FinVector, space: Space) -> float:
    if space == Space.ST2:
        return s_norm_value(x)
    return norm_value(x, space)


def _check_family(family: VectorFamily) -> None:
    cap = config.family_cap()
    if family.n > cap:
        log.error(f"Family of {family.n} vectors exceeds the cap {cap}")
        raise SizeError(message=f"Family of {family.n} vectors exceeds the cap {cap} (TSL_FAMILY_CAP)", cap=cap)
    support_cap = config.max_support()
    for j, member in enumerate(family.members):
        if member.support_size > support_cap:
            raise SizeError(message=f"Member {j} has support {member.support_size} above the cap {support_cap} "
                                    f"(TSL_MAX_SUPPORT)", cap=support_cap)


def basis_family(n: int, offset: int = 1, space: Space = Space.ST2) -> VectorFamily:
    """{t_offset, ..., t_{offset+n-1}}."""
    if n < 1 or offset < 1:
        raise PreconditionError(message=f"Basis family needs n >= 1 and offset >= 1, got n={n}, offset={offset}")
    return VectorFamily(members=tuple(FinVector.basis_sum([offset + j]) for j in range(n)), space=space)


# Gaussian stream.

def gaussian_draws(cfg: GaussianConfig, n: int) -> np.ndarray:
    """A (samples, n) array of standard normals fixed by (samples, seed)."""
    count = cfg.samples * n
    pairs = (count + 1) // 2
    uniforms = np.random.Generator(np.random.Philox(key=cfg.seed)).random((pairs, 2))
    radius = np.sqrt(-2.0 * np.log1p(-uniforms[:, 0]))
    angle = 2.0 * np.pi * uniforms[:, 1]
    normals = np.column_stack([radius * np.cos(angle), radius * np.sin(angle)]).ravel()
    return normals[:count].reshape(cfg.samples, n)


def _dense(family: VectorFamily) -> tuple[np.ndarray, np.ndarray]:
    """Union support and the members as rows over it."""
    union = np.unique(np.concatenate([m.indices for m in family.members if not m.is_zero()] or [np.zeros(0, int)]))
    rows = np.zeros((family.n, len(union)))
    for j, member in enumerate(family.members):
        if not member.is_zero():
            rows[j, np.searchsorted(union, member.indices)] = member.values
    return union, rows


def _norm_chunk(union: np.ndarray, combos: np.ndarray, space: Space) -> list[float]:
    return [family_norm(FinVector.from_arrays(union, row), space) for row in combos]


def _workers(requested: int) -> int:
    if requested > 0:
        return requested
    import psutil
    return psutil.cpu_count(logical=False) or 1


def sample_norms(family: VectorFamily, cfg: GaussianConfig) -> np.ndarray:
    """||sum_j g_j x_j|| for every draw of the stream, in sample order."""
    _check_family(family)
    union, rows = _dense(family)
    combos = gaussian_draws(cfg, family.n) @ rows
    workers = _workers(cfg.workers)
    chunks = [combos[i:i + _CHUNK] for i in range(0, len(combos), _CHUNK)]
    if workers == 1 or len(chunks) == 1:
        parts = [_norm_chunk(union, chunk, family.space) for chunk in chunks]
    else:
        import multiprocessing as mp
        with mp.Pool(processes=workers) as pool:
            parts = pool.starmap(_norm_chunk, [(union, chunk, family.space) for chunk in chunks])
    return np.array([value for part in parts for value in part], dtype=np.float64)


def gaussian_average(
        family: Annotated[VectorFamily, Field(description="The vectors x_j and their space.")],
        p: Annotated[float, Field(description="Moment p >= 1.")],
        cfg: Annotated[GaussianConfig, Field(description="Sample count, seed and workers.")],
) -> Annotated[tuple[float, float], Field(description="(E||sum g_j x_j||^p)^{1/p} and its standard error.")]:
    """The standard error comes from the delta method applied to the sample mean of ||.||^p."""
    if p < 1:
        log.error(f"Moment must satisfy p >= 1, but got {p}")
        raise PreconditionError(message=f"Moment must satisfy p >= 1, got {p}")
    powers = sample_norms(family, cfg) ** p
    moment = float(powers.mean())
    estimate = moment ** (1.0 / p)
    if cfg.samples < 2 or moment == 0.0:
        return estimate, 0.0
    moment_stderr = float(np.std(powers, ddof=1)) / math.sqrt(cfg.samples)
    return estimate, estimate / (p * moment) * moment_stderr


def square_function_norm(
        family: Annotated[VectorFamily, Field(description="The vectors x_j and their space.")],
) -> Annotated[float, Field(description="||(sum_j |x_j|^2)^{1/2}|| in the family's space.")]:
    _check_family(family)
    union, rows = _dense(family)
    return family_norm(FinVector.from_arrays(union, np.sqrt(np.sum(rows * rows, axis=0))), family.space)


def sample_band(family: VectorFamily, cfg: GaussianConfig) -> tuple[float, float]:
    """Bounds of the Gaussian 2-average from the same draws, without evaluating a norm.

    Every sample z satisfies ||z||_inf <= ||z|| <= ||z||_2 in T^2 and S(T^2). In S(T^2) the k singletons
    k..2k-1 of Dz are admissible as well, so ||z||^2 >= (1/2) sum_{k <= j < 2k} (Dz)_j^2 for every k.
    """
    _check_family(family)
    union, rows = _dense(family)
    squares = (gaussian_draws(cfg, family.n) @ rows) ** 2
    upper = math.sqrt(float(np.mean(squares.sum(axis=1))))
    lower_squares = squares.max(axis=1)
    if family.space == Space.ST2 and squares.shape[1] > 1:
        ordered = -np.sort(-squares, axis=1)
        sums = np.concatenate([np.zeros((len(ordered), 1)), np.cumsum(ordered, axis=1)], axis=1)
        k = np.arange(1, ordered.shape[1] + 1)
        windows = (sums[:, np.minimum(2 * k - 1, ordered.shape[1])] - sums[:, k - 1]) / 2.0
        lower_squares = np.maximum(lower_squares, windows.max(axis=1))
    return math.sqrt(float(np.mean(lower_squares))), upper


def _lq_sum(family: VectorFamily, q: float) -> float:
    norms = np.array([family_norm(m, family.space) for m in family.members])
    return float(np.sum(norms ** q) ** (1.0 / q))


def cotype_constant_estimate(
        family: Annotated[VectorFamily, Field(description="The vectors x_j and their space.")],
        q: Annotated[float, Field(description="Cotype exponent q >= 2.")],
        cfg: Annotated[GaussianConfig, Field(description="Sample count, seed and workers.")],
) -> Annotated[float, Field(description="(sum ||x_j||^q)^{1/q} over the Gaussian q-average.")]:
    if q < 2:
        raise PreconditionError(message=f"Cotype exponent must satisfy q >= 2, got {q}")
    average, _ = gaussian_average(family, q, cfg)
    return _lq_sum(family, q) / average


def type_constant_estimate(
        family: Annotated[VectorFamily, Field(description="The vectors x_j and their space.")],
        p: Annotated[float, Field(description="Type exponent 1 <= p <= 2.")],
        cfg: Annotated[GaussianConfig, Field(description="Sample count, seed and workers.")],
) -> Annotated[float, Field(description="Gaussian p-average over (sum ||x_j||^p)^{1/p}.")]:
    if not 1 <= p <= 2:
        raise PreconditionError(message=f"Type exponent must lie in [1, 2], got {p}")
    average, _ = gaussian_average(family, p, cfg)
    return average / _lq_sum(family, p)


# Property (P).

def _sign_vectors(n: int, cfg: GaussianConfig, limit: int = 1024) -> np.ndarray:
    if 2 ** n <= limit:
        grid = (np.arange(2 ** n)[:, None] >> np.arange(n)[None, :]) & 1
        return 1.0 - 2.0 * grid
    rng = np.random.Generator(np.random.Philox(key=cfg.seed).jumped(2))
    return rng.choice([-1.0, 1.0], size=(limit, n))


def check_coordinate_domination(family: VectorFamily, cfg: GaussianConfig) -> None:
    """Tests max_j |c_j| <= ||sum c_j x_j|| on coordinate vectors and on sign vectors.

    Raises:
        PreconditionError: With the offending coefficients as witness.
    """
    union, rows = _dense(family)
    tests = np.vstack([np.eye(family.n), _sign_vectors(family.n, cfg)])
    for coefficients in tests:
        value = family_norm(FinVector.from_arrays(union, coefficients @ rows), family.space)
        if value < np.max(np.abs(coefficients)) - config.norm_tolerance():
            log.error(f"Coordinate domination fails: ||sum c_j x_j|| = {value!r} for c = {coefficients.tolist()}")
            raise PreconditionError(message=f"Family does not dominate its coefficients: ||sum c_j x_j|| = "
                                            f"{value!r} < max|c_j| for c = {coefficients.tolist()}",
                                    witness=coefficients.tolist())


def property_p_ratio(
        family: Annotated[VectorFamily, Field(description="Coordinate dominating family.")],
        cfg: Annotated[GaussianConfig, Field(description="Sample count, seed and workers.")],
        verify_domination: Annotated[bool, Field(
            description="Check max_j |c_j| <= ||sum c_j x_j|| first, optional. Defaults to True.")] = True,
) -> Annotated[float, Field(description="sqrt(n) over the Gaussian 2-average.")]:
    """Raises:
        PreconditionError: If the family fails the coordinate domination check.
    """
    if verify_domination:
        check_coordinate_domination(family, cfg)
    average, _ = gaussian_average(family, 2.0, cfg)
    return math.sqrt(family.n) / average


def min_separation(members: Sequence[FinVector], space: Space) -> float:
    """min_{i < j} ||x_i - x_j||; infinite for a single member."""
    best = math.inf
    for i in range(len(members)):
        for j in range(i + 1, len(members)):
            best = min(best, family_norm(linear_combination([members[i], members[j]], [1.0, -1.0]), space))
    return best


def separated_family_probe(
        n: Annotated[int, Field(description="Family size, at most TSL_FAMILY_CAP.")],
        N: Annotated[int, Field(description="Members live in span(t_1, ..., t_N).")],
        cfg: Annotated[GaussianConfig, Field(description="Sample count, seed and workers.")],
        families: Annotated[int, Field(description="Number of random families, one row each.")] = 1,
        member_support: Annotated[int, Field(description="Largest support of a member, optional.")] = 8,
        space: Annotated[Space, Field(description="'st2' or 't2'.")] = Space.ST2,
        retries: Annotated[int, Field(description="Draws allowed per family before giving up.")] = 16,
) -> Annotated[ProbeReport, Field(description="Property (P) ratios of 1-separated families.")]:
    """Raises:
        SizeError: If n exceeds the family cap.
        GenerationError: If no separated family is found within the retry budget.
    """
    if n < 1 or N < 1 or families < 1:
        raise PreconditionError(message=f"n, N and families must be positive, got {n}, {N}, {families}")
    if n > config.family_cap():
        raise SizeError(message=f"Family size {n} exceeds the cap {config.family_cap()} (TSL_FAMILY_CAP)",
                        cap=config.family_cap())
    rng = np.random.Generator(np.random.Philox(key=cfg.seed).jumped(1))
    report = ProbeReport(probe="separated", space=space.value,
                         config={"n": n, "N": N, "families": families, "member_support": member_support,
                                 "seed": cfg.seed, "samples": cfg.samples})
    for f in range(families):
        members, separation = _separated_family(rng, n, N, member_support, space, retries)
        family = VectorFamily(members=tuple(members), space=space)
        average, stderr = gaussian_average(family, 2.0, cfg)
        band_lower, band_upper = sample_band(family, cfg)
        report.rows.append(ProbeRow(n=n, estimate=average, stderr=stderr, ratio=math.sqrt(n) / average,
                                    seed=cfg.seed, samples=cfg.samples,
                                    extras={"family": float(f), "min_separation": separation,
                                            "band_lower": band_lower, "band_upper": band_upper}))
    return report


def _separated_family(rng: np.random.Generator, n: int, N: int, member_support: int, space: Space,
                      retries: int) -> tuple[list[FinVector], float]:
    for attempt in range(retries):
        members = []
        for _ in range(n):
            size = int(rng.integers(1, min(N, member_support) + 1))
            indices = np.sort(rng.choice(np.arange(1, N + 1), size=size, replace=False))
            member = place_values(rng.standard_normal(size), indices)
            members.append(scale(member, 1.0 / family_norm(member, space)))
        separation = min_separation(members, space)
        if separation < 1e-6:
            log.info(f"Discarding a degenerate family (separation {separation:.3e}), attempt {attempt + 1}")
            continue
        factor = max(1.0, 1.0 / separation) if math.isfinite(separation) else 1.0
        members = [scale(m, factor) for m in members]
        checked = min_separation(members, space)
        if checked < 1.0 - config.norm_tolerance():
            log.info(f"Rescaled family separated by only {checked!r}, attempt {attempt + 1}")
            continue
        return members, checked
    log.error(f"No 1-separated family of {n} vectors in span(t_1..t_{N}) after {retries} attempts")
    raise GenerationError(message=f"No 1-separated family of {n} vectors found after {retries} attempts")


# Property (H).

def power_block(block_len: int, alpha: float) -> FinVector:
    """a_i = i^{-alpha} on t_1..t_block_len."""
    i = np.arange(1, block_len + 1, dtype=np.float64)
    return FinVector.from_arrays(i.astype(np.int64), i ** -alpha)


def upper_h_counterexample(
        block_len: Annotated[int, Field(description="Length of the decreasing block.")],
        n_copies: Annotated[int, Field(description="Number of disjoint copies summed.")],
        alphas: Annotated[Sequence[float], Field(description="Exponent grid of the block search.")] = ALPHA_GRID,
) -> Annotated[ProbeReport, Field(description="One row: ||sum x_i||_s, its ratio to sqrt(n), and M.")]:
    """Picks the exponent maximising M = ||a||_2 / ||a||_{T^2}, normalises the block in T^2, and evaluates the
    interleaved sum of n_copies copies in S(T^2) exactly, replaying the certificate of the result."""
    if block_len < 1 or n_copies < 1:
        raise PreconditionError(message=f"block_len and n_copies must be positive, got {block_len}, {n_copies}")
    if block_len * n_copies > config.max_support():
        raise SizeError(message=f"Sum support {block_len * n_copies} exceeds the cap {config.max_support()} "
                                f"(TSL_MAX_SUPPORT)", cap=config.max_support())
    best_alpha, best_m, best_norm = None, -math.inf, 1.0
    for alpha in alphas:
        block = power_block(block_len, alpha)
        value = norm_value(block, Space.T2)
        m = l2_norm(block) / value
        if m > best_m + config.norm_tolerance():
            best_alpha, best_m, best_norm = alpha, m, value
    block = scale(power_block(block_len, best_alpha), 1.0 / best_norm)
    total = disjoint_sum([block] * n_copies, layout="interleaved")
    result = s_norm(total)
    replayed = verify_certificate(result.rearranged, result.inner.certificate)
    if abs(replayed - result.value) > config.norm_tolerance():
        log.warning(f"Certificate replay {replayed!r} differs from {result.value!r}")
    ratio = result.value / math.sqrt(n_copies)
    log.info(f"upper-h: block {block_len}, copies {n_copies}, alpha {best_alpha}, M {best_m!r}, ratio {ratio!r}")
    row = ProbeRow(n=n_copies, estimate=result.value, ratio=ratio,
                   extras={"block_len": float(block_len), "M": best_m, "alpha": float(best_alpha),
                           "replayed": replayed})
    return ProbeReport(probe="upper-h", space=Space.ST2.value,
                       config={"block_len": block_len, "n_copies": n_copies, "alphas": list(alphas)},
                       rows=[row], series=[("block_len", "M"), ("block_len", "ratio")])


def upper_h_sweep(block_lens: Sequence[int], n_copies: int,
                  alphas: Sequence[float] = ALPHA_GRID) -> ProbeReport:
    report = ProbeReport(probe="upper-h", space=Space.ST2.value,
                         config={"block_lens": list(block_lens), "n_copies": n_copies, "alphas": list(alphas)},
                         series=[("block_len", "M"), ("block_len", "ratio")])
    for block_len in block_lens:
        report = report.merged(upper_h_counterexample(block_len, n_copies, alphas))
    return report


def h_growth(
        family: Annotated[VectorFamily, Field(description="Normalised vectors x_i.")],
) -> Annotated[float, Field(description="||sum x_i|| / sqrt(n).")]:
    """Raises:
        PreconditionError: If a member's norm is not 1 within 1e-6.
    """
    _check_family(family)
    for j, member in enumerate(family.members):
        value = family_norm(member, family.space)
        if abs(value - 1.0) > 1e-6:
            log.error(f"Member {j} has norm {value!r}, expected 1")
            raise PreconditionError(message=f"Member {j} has norm {value!r}, members must be normalised",
                                    witness=j)
    total = linear_combination(family.members, [1.0] * family.n)
    return family_norm(total, family.space) / math.sqrt(family.n)


def lower_h2_witness(ns: Sequence[int]) -> ProbeReport:
    """||sum_{i <= n} t_i||_s against sqrt(n) for the S(T^2) basis."""
    report = ProbeReport(probe="lower-h2", space=Space.ST2.value, config={"ns": list(ns)})
    for n in ns:
        value = s_norm_value(FinVector.basis_sum(range(1, n + 1)))
        report.rows.append(ProbeRow(n=n, estimate=value, ratio=value / math.sqrt(n)))
    return report


# Subsequences and spreads.

def subsequence_domination_check(
        x: Annotated[FinVector, Field(description="Vector sum_j a_j t_j.")],
        phi: Annotated[Callable[[int], int], Field(description="Strictly increasing map with phi(n) >= n.")],
) -> Annotated[tuple[float, float], Field(description="(||sum a_j t_phi(j)||, ||sum a_j t_j||) in T^2.")]:
    """Raises:
        PreconditionError: If phi is not strictly increasing or moves an index down.
    """
    for i, _ in x.coords:
        if phi(i) < i:
            log.error(f"Index map must satisfy phi(n) >= n, but phi({i}) = {phi(i)}")
            raise PreconditionError(message=f"Index map must satisfy phi(n) >= n, got phi({i}) = {phi(i)}",
                                    witness=i)
    lhs = norm_value(map_indices(x, phi), Space.T2)
    rhs = norm_value(x, Space.T2)
    if lhs < rhs - config.norm_tolerance():
        log.warning(f"Subsequence value {lhs!r} below the original {rhs!r}")
    return lhs, rhs


def spread_bound_check(
        x: Annotated[FinVector, Field(description="Nonzero vector sum_j a_j t_j.")],
        n: Annotated[int, Field(description="Spread factor, positive.")],
) -> Annotated[tuple[float, float], Field(description="(||sum a_j t_{nj}||, the same over ||x||) in T^2.")]:
    if x.is_zero():
        raise PreconditionError(message="Spread budget is undefined for the zero vector")
    lhs = norm_value(spread(x, n, 0), Space.T2)
    return lhs, lhs / norm_value(x, Space.T2)


def harmonic_block(length: int) -> FinVector:
    """a_i = 1 / i on t_1..t_length."""
    return power_block(length, 1.0)


def spread_report(x: FinVector, factors: Sequence[int]) -> ProbeReport:
    report = ProbeReport(probe="spread", space=Space.T2.value,
                         config={"support": x.support_size, "factors": list(factors)})
    for n in factors:
        lhs, budget = spread_bound_check(x, n)
        report.rows.append(ProbeRow(n=n, estimate=lhs, ratio=budget))
    return report


# Distance to Hilbert space.

def _unit(c: np.ndarray) -> np.ndarray:
    return c / np.linalg.norm(c)


def _refine(evaluate: Callable[[np.ndarray], float], c: np.ndarray, value: float, steps: int,
            sign: float) -> tuple[np.ndarray, float]:
    """Projected coordinate ascent (sign=1) or descent (sign=-1) on the unit sphere."""
    delta = 0.25
    for step in range(steps):
        j = step % len(c)
        improved = False
        for direction in (1.0, -1.0):
            trial = c.copy()
            trial[j] += direction * delta
            if not np.any(trial):
                continue
            trial = _unit(trial)
            trial_value = evaluate(trial)
            if sign * (trial_value - value) > 0:
                c, value, improved = trial, trial_value, True
                break
        if not improved and j == len(c) - 1:
            delta /= 2.0
    return c, value


def hilbert_distortion_estimate(
        family: Annotated[VectorFamily, Field(description="Disjointly supported vectors x_j.")],
        cfg: Annotated[GaussianConfig, Field(description="Seed of the candidate directions.")],
        candidates: Annotated[int, Field(description="Random unit coefficient vectors.")] = DEFAULT_CANDIDATES,
        refine_steps: Annotated[int, Field(description="Coordinate steps per refined candidate.")] =
        DEFAULT_REFINE_STEPS,
        refine_top: Annotated[int, Field(description="Candidates refined on each side.")] = DEFAULT_REFINE_TOP,
) -> Annotated[tuple[float, float, float], Field(description="(upper, lower, upper / lower).")]:
    """Extremes of ||sum c_j x_j|| over unit c in l_2^n; their ratio bounds the distance of the span to l_2^n
    from below.

    Raises:
        PreconditionError: If the members are not disjointly supported.
    """
    _check_family(family)
    if not supports_disjoint(family.members):
        log.error("Distortion estimate needs disjointly supported members")
        raise PreconditionError(message="Distortion estimate needs disjointly supported members")
    n = family.n
    union, rows = _dense(family)

    def evaluate(c: np.ndarray) -> float:
        return family_norm(FinVector.from_arrays(union, c @ rows), family.space)

    rng = np.random.Generator(np.random.Philox(key=cfg.seed))
    pool = [_unit(v) for v in rng.standard_normal((candidates, n)) if np.any(v)]
    pool += list(np.eye(n)) + [np.full(n, 1.0 / math.sqrt(n))]
    values = np.array([evaluate(c) for c in pool])

    order = np.argsort(values, kind="stable")
    upper = float(values.max())
    lower = float(values.min())
    for k in order[::-1][:refine_top]:
        upper = max(upper, _refine(evaluate, pool[k], float(values[k]), refine_steps, 1.0)[1])
    for k in order[:refine_top]:
        lower = min(lower, _refine(evaluate, pool[k], float(values[k]), refine_steps, -1.0)[1])
    return upper, lower, upper / lower


# Trend reports.

def _gaussian_row(family: VectorFamily, n: int, cfg: GaussianConfig, ratio: float, average: float,
                  stderr: float) -> ProbeRow:
    extras = {}
    if stderr > NOISY_RELATIVE_STDERR * average:
        extras["square_function"] = square_function_norm(family)
    return ProbeRow(n=n, estimate=average, stderr=stderr, ratio=ratio, seed=cfg.seed, samples=cfg.samples,
                    extras=extras)


def cotype_trend(ns: Sequence[int], cfg: GaussianConfig, space: Space = Space.ST2, q: float = 2.0,
                 offset: int = 1) -> ProbeReport:
    """Cotype-q estimates for the basis families {t_offset, ..., t_{offset+n-1}}."""
    report = ProbeReport(probe="cotype", space=space.value, config={"ns": list(ns), "q": q, "offset": offset})
    for n in ns:
        family = basis_family(n, offset, space)
        average, stderr = gaussian_average(family, q, cfg)
        report.rows.append(_gaussian_row(family, n, cfg, _lq_sum(family, q) / average, average, stderr))
    return report


def type_trend(ns: Sequence[int], cfg: GaussianConfig, space: Space = Space.ST2, p: float = 2.0,
               offset: int = 1) -> ProbeReport:
    report = ProbeReport(probe="type", space=space.value, config={"ns": list(ns), "p": p, "offset": offset})
    for n in ns:
        family = basis_family(n, offset, space)
        average, stderr = gaussian_average(family, p, cfg)
        report.rows.append(_gaussian_row(family, n, cfg, average / _lq_sum(family, p), average, stderr))
    return report


def property_p_trend(ns: Sequence[int], cfg: GaussianConfig, space: Space = Space.ST2,
                     offset: int = 1) -> ProbeReport:
    report = ProbeReport(probe="prop-p", space=space.value, config={"ns": list(ns), "offset": offset})
    for n in ns:
        family = basis_family(n, offset, space)
        check_coordinate_domination(family, cfg)
        average, stderr = gaussian_average(family, 2.0, cfg)
        report.rows.append(_gaussian_row(family, n, cfg, math.sqrt(n) / average, average, stderr))
    return report


def h_growth_trend(ns: Sequence[int], space: Space = Space.ST2, offset: int = 1) -> ProbeReport:
    report = ProbeReport(probe="h-growth", space=space.value, config={"ns": list(ns), "offset": offset})
    for n in ns:
        ratio = h_growth(basis_family(n, offset, space))
        report.rows.append(ProbeRow(n=n, estimate=ratio * math.sqrt(n), ratio=ratio))
    return report


def distortion_trend(ns: Sequence[int], cfg: GaussianConfig, space: Space = Space.ST2, offset: int = 1,
                     candidates: int = DEFAULT_CANDIDATES) -> ProbeReport:
    report = ProbeReport(probe="distortion", space=space.value,
                         config={"ns": list(ns), "offset": offset, "candidates": candidates, "seed": cfg.seed})
    for n in ns:
        upper, lower, distortion = hilbert_distortion_estimate(basis_family(n, offset, space), cfg, candidates)
        report.rows.append(ProbeRow(n=n, estimate=distortion, ratio=distortion, seed=cfg.seed,
                                    extras={"upper": upper, "lower": lower}))
    return report
