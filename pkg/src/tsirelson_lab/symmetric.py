"""The symmetric space S(T^2), its dual, and the permutation oracles.

A norming tree tau of T^2 acts on x through f_tau(x)^2 = sum_i w^tau_i x_i^2, where w^tau_i = 2^{-depth(i)} for
the leaves of tau. The unit ball of T^2 is the intersection of the ellipsoids {f_tau <= 1}, so for every mixture
mu of trees with W = sum_tau mu_tau w^tau

    ||y||_* <= g(mu)^{1/2},  g(mu) = sum_i y_i^2 / W_i,

and x = y / W, divided by ||x||_{T^2}, is a feasible point pairing with y to g / ||x||_{T^2}. The dual engine
minimises g over mixtures with a fully corrective conditional gradient loop whose linear oracle is the norm engine:
the norming tree of x = y / W is the atom with the steepest descent of g.
"""

import itertools
import math
from typing import Annotated, Iterable, Mapping

import numpy as np
from pydantic import Field

from . import config
from .logger import get_logger
from .norm_engine import certificate_atoms, enumerate_norming_atoms, norm_value, t2_norm
from .schema import BoundPair, FinVector, Space, SymNormResult
from .schema.exceptions import PreconditionError, SizeError
from .vectors import add, decreasing_rearrange, l1_norm, l2_norm, place_values, scale

log = get_logger()

# Barrier rounds stop once the barrier's suboptimality bound drops below this fraction of g.
_BARRIER_RELATIVE_GAP = 1e-13
_NEWTON_DECREMENT = 1e-12


def s_norm(
        x: Annotated[FinVector, Field(description="Vector to evaluate.")],
        max_support: Annotated[int | None, Field(
            description="Support cap, optional. Defaults to TSL_MAX_SUPPORT.")] = None,
) -> Annotated[SymNormResult, Field(description="||Dx||_{T^2}, the S(T^2) value of x.")]:
    rearranged = decreasing_rearrange(x)
    inner = t2_norm(rearranged, max_support=max_support)
    return SymNormResult(value=inner.value, rearranged=rearranged, inner=inner)


def s_norm_value(x: FinVector, max_support: int | None = None) -> float:
    return norm_value(decreasing_rearrange(x), Space.T2, max_support)


def _check_exhaustive(x: FinVector, max_support: int | None) -> None:
    cap = config.exhaustive_support() if max_support is None else min(max_support, config.EXHAUSTIVE_HARD_LIMIT)
    if x.support_size > cap:
        log.error(f"Support size {x.support_size} exceeds the permutation oracle cap {cap}")
        raise SizeError(message=f"Support size {x.support_size} exceeds the permutation oracle cap {cap} "
                                f"(TSL_EXHAUSTIVE_SUPPORT)", cap=cap)


def _orderings(values: np.ndarray) -> Iterable[tuple[int, ...]]:
    """Permutations of support positions giving pairwise distinct value sequences."""
    seen: set[tuple[float, ...]] = set()
    for permutation in itertools.permutations(range(len(values))):
        key = tuple(values[list(permutation)])
        if key not in seen:
            seen.add(key)
            yield permutation


def inf_perm_norm_exhaustive(
        x: Annotated[FinVector, Field(description="Vector, support at most TSL_EXHAUSTIVE_SUPPORT (8).")],
        max_support: Annotated[int | None, Field(description="Oracle cap override, optional.")] = None,
) -> Annotated[tuple[float, tuple[int, ...]], Field(
    description="Minimum of ||S_sigma x||_{T^2} over placements on 1..m and the minimising ordering.")]:
    """Places the m values of x on t_1..t_m in every order and keeps the smallest T^2 norm.

    The ordering lists, for each target index 1..m, the support position of x whose value lands there.

    Raises:
        SizeError: If the support exceeds the oracle cap.
    """
    _check_exhaustive(x, max_support)
    if x.is_zero():
        return 0.0, ()
    values = np.abs(x.values)
    targets = np.arange(1, len(values) + 1)
    best, argmin = math.inf, ()
    for permutation in _orderings(values):
        value = norm_value(FinVector.from_arrays(targets, values[list(permutation)]), Space.T2)
        if value < best - config.NORM_TOLERANCE * 1e-3:
            best, argmin = value, permutation
    return best, tuple(argmin)


def apply_permutation(x: FinVector, sigma: Mapping[int, int]) -> FinVector:
    """S_sigma x = sum_n a_{sigma(n)} t_n for a permutation sigma of a finite index set covering supp(x)."""
    if sorted(sigma.keys()) != sorted(sigma.values()):
        raise PreconditionError(message="sigma must map a finite index set onto itself")
    moved = set(sigma)
    outside = [i for i, _ in x.coords if i not in moved]
    pairs = [(n, x.get(m)) for n, m in sigma.items()] + [(i, x.get(i)) for i in outside]
    return FinVector.from_pairs((n, v) for n, v in pairs if v != 0.0)


def x_inf_norm(x: FinVector, permutations: Iterable[Mapping[int, int]]) -> float:
    """inf over the given sigma (and the identity) of ||S_sigma x||_{T^2}."""
    return min([norm_value(x, Space.T2)] + [norm_value(apply_permutation(x, s), Space.T2) for s in permutations])


def x_sup_norm(x: FinVector, permutations: Iterable[Mapping[int, int]]) -> float:
    """sup over the given sigma (and the identity) of ||S_sigma x||_{T^2}."""
    return max([norm_value(x, Space.T2)] + [norm_value(apply_permutation(x, s), Space.T2) for s in permutations])


# Dual norm.

class _MixtureObjective:
    """g(mu) = sum_i z_i^2 / (mu @ atoms)_i on the probability simplex over the rows of ``atoms``."""

    def __init__(self, z: np.ndarray, atoms: np.ndarray):
        self.z2 = z * z
        self.atoms = atoms

    def f(self, mu: np.ndarray) -> float:
        w = mu @ self.atoms
        if np.any(w <= 0.0):
            return math.inf
        return float(np.sum(self.z2 / w))

    def grad(self, mu: np.ndarray) -> np.ndarray:
        w = mu @ self.atoms
        return -(self.atoms @ (self.z2 / (w * w)))

    def hessian(self, mu: np.ndarray) -> np.ndarray:
        w = mu @ self.atoms
        return 2.0 * (self.atoms * (self.z2 / (w * w * w))) @ self.atoms.T


def _barrier_newton(objective: _MixtureObjective, mu: np.ndarray) -> np.ndarray:
    """Minimises g over the simplex along the central path of t g(mu) - sum log mu_k."""
    k = len(mu)
    ones = np.ones(k)
    t = 10.0 * k / objective.f(mu)

    def phi(point: np.ndarray) -> float:
        if np.any(point <= 0.0):
            return math.inf
        return t * objective.f(point) - float(np.sum(np.log(point)))

    while True:
        for _ in range(50):
            grad = t * objective.grad(mu) - 1.0 / mu
            hess = t * objective.hessian(mu) + np.diag(1.0 / (mu * mu))
            kkt = np.block([[hess, ones[:, None]], [ones[None, :], np.zeros((1, 1))]])
            rhs = np.concatenate([-grad, [0.0]])
            try:
                step = np.linalg.solve(kkt, rhs)[:k]
            except np.linalg.LinAlgError:
                step = np.linalg.lstsq(kkt, rhs, rcond=None)[0][:k]
            decrement = -float(grad @ step)
            if decrement / 2.0 <= _NEWTON_DECREMENT:
                break
            alpha = 1.0
            negative = step < 0
            if np.any(negative):
                alpha = min(1.0, 0.99 * float(np.min(-mu[negative] / step[negative])))
            current = phi(mu)
            for _ in range(60):
                if phi(mu + alpha * step) <= current - 0.25 * alpha * decrement:
                    break
                alpha *= 0.5
            else:
                break
            mu = mu + alpha * step
            mu = mu / mu.sum()
        if k / t < _BARRIER_RELATIVE_GAP * objective.f(mu):
            return mu
        t *= 10.0


def _positions(indices: np.ndarray, atom: FinVector) -> np.ndarray:
    row = np.zeros(len(indices))
    row[np.searchsorted(indices, atom.indices)] = atom.values
    return row


def _bounds_from_mixture(z: np.ndarray, indices: np.ndarray, atoms: np.ndarray, mu: np.ndarray,
                         ) -> tuple[float, float, np.ndarray, FinVector]:
    """(upper, lower, primal point x = z / W, its norming atom) for the mixture ``mu``."""
    w = mu @ atoms
    g = float(np.sum(z * z / w))
    point = z / w
    result = t2_norm(FinVector.from_arrays(indices, point))
    lower = g / result.value
    return math.sqrt(g), lower, point / result.value, certificate_atoms(result.certificate)


def _signed_witness(y: FinVector, magnitudes: np.ndarray) -> FinVector:
    return FinVector.from_arrays(y.indices, np.sign(y.values) * magnitudes)


def _l2_bound(y: FinVector) -> BoundPair:
    """The Euclidean ball sits inside the T^2 ball, so y / ||y||_2 is feasible."""
    norm2 = l2_norm(y)
    return BoundPair(lower=norm2, upper=l1_norm(y), witness=scale(y, 1.0 / norm2), iterations=0)


def dual_t2_norm(
        y: Annotated[FinVector, Field(description="Functional sum_n y_n t_n^* on T^2.")],
        gap_target: Annotated[float, Field(description="Stop once upper - lower is at most this.")] = 1e-6,
        max_iterations: Annotated[int, Field(description="Conditional gradient iterations, optional.")] = 200,
        max_support: Annotated[int | None, Field(description="Support cap of the norm engine, optional.")] = None,
) -> Annotated[BoundPair, Field(description="Certified enclosure of sup{<y, x> : ||x||_{T^2} <= 1}.")]:
    """Raises:
        SizeError: If the support exceeds the norm engine cap.
    """
    if gap_target <= 0:
        raise PreconditionError(message=f"gap_target must be positive, got {gap_target}")
    cap = config.max_support() if max_support is None else max_support
    if y.support_size > cap:
        log.error(f"Support size {y.support_size} exceeds the cap {cap} (TSL_MAX_SUPPORT)")
        raise SizeError(message=f"Support size {y.support_size} exceeds the cap {cap} (TSL_MAX_SUPPORT)", cap=cap)
    if y.is_zero():
        return BoundPair(lower=0.0, upper=0.0, witness=FinVector.zero(), iterations=0)

    total = l1_norm(y)
    z = np.abs(y.values) / total
    indices = y.indices
    m = len(z)

    # Coordinate trees alone give the l1 bound, with the mixture proportional to |y|.
    atoms = np.eye(m)
    mu = z.copy()
    best = _l2_bound(y)
    upper, lower, witness = best.upper / total, best.lower / total, np.abs(best.witness.values)
    iterations = 0
    known = {tuple(row) for row in atoms}
    while upper - lower > gap_target / total and iterations < max_iterations:
        iterations += 1
        mu = _barrier_newton(_MixtureObjective(z, atoms), mu)
        step_upper, step_lower, point, atom = _bounds_from_mixture(z, indices, atoms, mu)
        upper = min(upper, step_upper)
        if step_lower > lower:
            lower, witness = step_lower, point
        log.debug(f"Dual iteration {iterations}: [{lower * total!r}, {upper * total!r}] with {len(atoms)} trees")
        if upper - lower <= gap_target / total:
            break
        row = _positions(indices, atom)
        if tuple(row) in known:
            log.debug("Norming tree already active, the mixture cannot improve further")
            break
        known.add(tuple(row))
        atoms = np.vstack([atoms, row])
        mu = np.append(mu * (1.0 - 1.0 / len(atoms)), 1.0 / len(atoms))

    # Bounds were computed for y / ||y||_1.
    pair = BoundPair(lower=min(lower, upper), upper=upper, witness=_signed_witness(y, witness),
                     iterations=iterations).scaled(total)
    if pair.gap > gap_target:
        level = log.warning if m <= config.dual_exact_support() else log.info
        level(f"Dual enclosure for support {m} closed to {pair.gap:.3e}, target {gap_target:.1e}")
    return pair


def dual_t2_norm_oracle(y: FinVector, max_support: int | None = None) -> BoundPair:
    """Dual norm from the mixture over every norming tree of the support (small supports only)."""
    if y.is_zero():
        return BoundPair(lower=0.0, upper=0.0, witness=FinVector.zero(), iterations=0)
    atoms = enumerate_norming_atoms(y, max_support=max_support)
    total = l1_norm(y)
    z = np.abs(y.values) / total
    mu = _barrier_newton(_MixtureObjective(z, atoms), np.full(len(atoms), 1.0 / len(atoms)))
    upper, lower, point, _ = _bounds_from_mixture(z, y.indices, atoms, mu)
    pair = BoundPair(lower=min(lower, upper), upper=upper, witness=_signed_witness(y, point), iterations=1)
    return pair.scaled(total)


def s_dual_norm(
        y: Annotated[FinVector, Field(description="Functional on S(T^2).")],
        gap_target: Annotated[float, Field(description="Stop once upper - lower is at most this.")] = 1e-6,
        max_support: Annotated[int | None, Field(description="Support cap of the norm engine, optional.")] = None,
) -> Annotated[BoundPair, Field(description="Enclosure of ||Dy||_*; the witness pairs with Dy.")]:
    return dual_t2_norm(decreasing_rearrange(y), gap_target=gap_target, max_support=max_support)


def sup_perm_dual_exhaustive(
        y: Annotated[FinVector, Field(description="Functional, support at most TSL_EXHAUSTIVE_SUPPORT.")],
        max_support: Annotated[int | None, Field(description="Oracle cap override, optional.")] = None,
) -> Annotated[tuple[BoundPair, tuple[int, ...]], Field(
    description="Enclosure of the largest dual norm over placements on 1..m and the maximising ordering.")]:
    """Every ordering of |y| on t_1^*..t_m^* is enclosed with the tree oracle; the pair takes the largest bounds.

    Raises:
        SizeError: If the support exceeds the oracle cap.
    """
    _check_exhaustive(y, max_support)
    if y.is_zero():
        return BoundPair(lower=0.0, upper=0.0, witness=FinVector.zero(), iterations=0), ()
    values = np.abs(y.values)
    targets = np.arange(1, len(values) + 1)
    probe = FinVector.from_arrays(targets, values)
    atoms = enumerate_norming_atoms(probe, max_support=len(values))
    total = float(values.sum())
    upper, best, argmax, count = 0.0, None, (), 0
    for permutation in _orderings(values):
        count += 1
        z = values[list(permutation)] / total
        mu = _barrier_newton(_MixtureObjective(z, atoms), np.full(len(atoms), 1.0 / len(atoms)))
        step_upper, step_lower, point, _ = _bounds_from_mixture(z, targets, atoms, mu)
        upper = max(upper, step_upper)
        if best is None or step_lower > best[0]:
            best, argmax = (step_lower, point), permutation
    lower, point = best
    pair = BoundPair(lower=min(lower, upper), upper=upper, witness=place_values(point, targets),
                     iterations=count).scaled(total)
    return pair, tuple(argmax)


def quasi_norm_constant_probe(
        trials: Annotated[int, Field(description="Number of random pairs.")],
        support_cap: Annotated[int, Field(description="Largest support of each random vector.")],
        seed: Annotated[int, Field(description="Seed of the Philox stream.")] = 0,
) -> Annotated[float, Field(description="Largest observed ||D(x+y)|| / (||Dx|| + ||Dy||).")]:
    if trials < 1:
        raise PreconditionError(message=f"trials must be positive, got {trials}")
    if support_cap < 1:
        raise PreconditionError(message=f"support_cap must be positive, got {support_cap}")
    rng = np.random.Generator(np.random.Philox(seed))
    pool = 4 * support_cap
    worst = 0.0
    for _ in range(trials):
        x, y = (_random_vector(rng, support_cap, pool) for _ in range(2))
        denominator = s_norm_value(x) + s_norm_value(y)
        ratio = s_norm_value(add(x, y)) / denominator
        worst = max(worst, ratio)
    log.info(f"Quasi-norm probe: {trials} pairs, support <= {support_cap}, worst ratio {worst!r}")
    return worst


def _random_vector(rng: np.random.Generator, support_cap: int, pool: int) -> FinVector:
    size = int(rng.integers(1, support_cap + 1))
    indices = np.sort(rng.choice(np.arange(1, pool + 1), size=size, replace=False))
    values = rng.uniform(-1.0, 1.0, size=size)
    values[values == 0.0] = 1.0
    return FinVector.from_arrays(indices, values)
