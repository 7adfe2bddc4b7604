"""Geometric measure of entanglement for the complement state.

The measure of the normalized complement projector is fixed by the
smallest total squared overlap q* between a product state and the eleven
basis vectors: G = -log2((1 - q*) / 117) ebits.  Three routes bound q*:
steepest descent over the seven real qubit angles, multistart alternating
minimization over (optionally merged) blocks, and plain random sampling.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .linalg import tensor
from .merge_analysis import min_overlap_product
from .ppt import COMPLEMENT_RANK, DIM, N_VECTORS, builtin_upb
from .uom import ConcreteProductSet, Partition

N_ANGLES = 7


def product_state(x) -> np.ndarray:
    """Real product state with factor (sin t, cos t) per angle."""
    x = np.asarray(x, dtype=float)
    if x.shape != (N_ANGLES,):
        raise ValueError(f"expected {N_ANGLES} angles")
    return tensor([np.array([np.sin(t), np.cos(t)]) for t in x])


def objective(x, q: np.ndarray) -> float:
    """Total squared overlap <delta(x)| q |delta(x)> of the angle vector."""
    d = product_state(x)
    return float(np.real(d.conj() @ q @ d))


def gradient(x, q: np.ndarray) -> np.ndarray:
    """Exact gradient of :func:`objective` in the seven angles."""
    x = np.asarray(x, dtype=float)
    factors = [np.array([np.sin(t), np.cos(t)]) for t in x]
    qd = q @ tensor(factors)
    g = np.empty(N_ANGLES)
    for i, t in enumerate(x):
        partial = list(factors)
        partial[i] = np.array([np.cos(t), -np.sin(t)])
        g[i] = 2.0 * float(np.real(tensor(partial).conj() @ qd))
    return g


def to_ebits(q_star: float, dim: int = DIM, m: int = N_VECTORS) -> float:
    """Convert a minimal total squared overlap into ebits.

    G = -log2((1 - q_star) / (dim - m)); q_star = 1 leaves nothing in the
    complement and has no finite value.
    """
    if not 0.0 <= q_star <= 1.0:
        raise ValueError(f"q_star must lie in [0, 1], got {q_star}")
    if q_star == 1.0:
        raise ValueError("q_star = 1 is degenerate: the measure diverges")
    return float(-np.log2((1.0 - q_star) / (dim - m)))


@dataclass(frozen=True)
class OptimizerState:
    """One steepest-descent iterate."""

    iteration: int
    angles: tuple
    value: float
    grad_norm: float
    step: float


@dataclass(frozen=True)
class MeasureResult:
    """A bound on the geometric measure, with the route that produced it."""

    q_star: float
    ebits: float
    method: str
    angles: tuple | None = None
    iterations: int | None = None
    grad_norm: float | None = None
    converged: bool | None = None
    n_samples: int | None = None
    starts: int | None = None
    partition: str | None = None

    def as_record(self) -> dict:
        out = {"q_star": self.q_star, "G_ebits": self.ebits, "method": self.method}
        for key in (
            "angles", "iterations", "grad_norm", "converged",
            "n_samples", "starts", "partition",
        ):
            val = getattr(self, key)
            if val is not None:
                out[key] = list(val) if key == "angles" else val
        return out


@dataclass(frozen=True)
class DescentResult:
    trace: tuple
    result: MeasureResult


def steepest_descent(
    q: np.ndarray,
    x0=None,
    a0: float = 10.0,
    gtol: float = 1e-4,
    max_iter: int = 10_000,
) -> DescentResult:
    """Steepest descent on the angle objective with a curvature-model line search.

    The iterate moves along the bilinear-form derivative ``d`` with
    d_i = Re <d(delta)/d(v_i)|Q|delta>, which is half the objective
    gradient, so the nominal update is ``x - a*d`` with ``a`` starting at
    ``a0``.  A trial step is accepted when it satisfies the quadratic
    curvature bound f(x - a*d) < f(x) - a*|d|^2 + (a^3/2)*|d|^2; rejected
    steps halve ``a`` and accepted ones restore it toward ``a0`` by
    doubling.  For large ``a`` the curvature term dominates, so the bound
    tolerates transient increases of f and the trace need not be monotone.
    Convergence is declared when the objective gradient norm ``|2d|``
    falls below ``gtol``; when ``max_iter`` is exhausted first the trace
    is still returned with ``converged`` False.
    """
    x = np.zeros(N_ANGLES) if x0 is None else np.array(x0, dtype=float)
    f = objective(x, q)
    a = float(a0)
    trace = []
    converged = False
    it = 0
    gn = float("nan")
    while it < max_iter:
        g = gradient(x, q)
        gn = float(np.linalg.norm(g))
        trace.append(OptimizerState(it, tuple(x), f, gn, a))
        if gn <= gtol:
            converged = True
            break
        d = 0.5 * g
        dn2 = 0.25 * gn * gn
        while True:
            cand = x - a * d
            fc = objective(cand, q)
            if fc < f + a * dn2 * (0.5 * a * a - 1.0):
                break
            a *= 0.5
            if a < 1e-18:
                break
        if a < 1e-18:
            break
        x, f = cand, fc
        a = min(2.0 * a, float(a0))
        it += 1
    result = MeasureResult(
        q_star=f,
        ebits=to_ebits(f),
        method="descent",
        angles=tuple(float(t) for t in x),
        iterations=it,
        grad_norm=gn,
        converged=converged,
    )
    return DescentResult(tuple(trace), result)


@dataclass(frozen=True)
class SamplingResult:
    result: MeasureResult
    ebit_values: np.ndarray


def _product_states_batch(angles: np.ndarray) -> np.ndarray:
    out = np.ones((angles.shape[0], 1))
    for j in range(N_ANGLES):
        col = np.stack([np.sin(angles[:, j]), np.cos(angles[:, j])], axis=1)
        out = np.einsum("na,nb->nab", out, col).reshape(angles.shape[0], -1)
    return out


def random_sampling(
    q: np.ndarray,
    n: int,
    rng: np.random.Generator | None = None,
    chunk: int = 4096,
) -> SamplingResult:
    """Best measure bound over ``n`` uniform draws of the seven angles."""
    if n < 1:
        raise ValueError("need at least one sample")
    if rng is None:
        rng = np.random.default_rng()
    q = np.asarray(q)
    best_val = np.inf
    best_angles = None
    values = np.empty(n)
    done = 0
    while done < n:
        k = min(chunk, n - done)
        draws = rng.uniform(0.0, 2.0 * np.pi, size=(k, N_ANGLES))
        states = _product_states_batch(draws)
        vals = np.real(np.einsum("ni,ij,nj->n", states.conj(), q, states))
        values[done : done + k] = vals
        i = int(np.argmin(vals))
        if vals[i] < best_val:
            best_val = float(vals[i])
            best_angles = draws[i]
        done += k
    ebits = -np.log2((1.0 - values) / COMPLEMENT_RANK)
    result = MeasureResult(
        q_star=best_val,
        ebits=to_ebits(best_val),
        method="sampling",
        angles=tuple(float(t) for t in best_angles),
        n_samples=n,
    )
    return SamplingResult(result, ebits)


def merged_measure(
    p: Partition,
    starts: int = 200,
    rng: np.random.Generator | None = None,
    pset: ConcreteProductSet | None = None,
    complex_field: bool = False,
) -> MeasureResult:
    """Measure bound after merging systems into the blocks of ``p``.

    Runs the multistart alternating minimizer on the merged set; with the
    default real field the singleton partition reproduces the descent
    problem.  The normalization stays that of the seven-qubit state.
    """
    if pset is None:
        pset = builtin_upb()
    res = min_overlap_product(
        pset, p, starts=starts, rng=rng, complex_field=complex_field
    )
    return MeasureResult(
        q_star=res.value,
        ebits=to_ebits(res.value),
        method="alternating",
        starts=starts,
        partition=str(p),
    )
