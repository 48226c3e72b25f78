"""Shared random-instance generators for the test suite.

Everything takes an explicit ``numpy.random.Generator`` so tests are
reproducible; seeds are fixed per test.
"""

import numpy as np

from gibbscert.quantum import DensityOperator, PureState, SystemSpec


def random_hermitian(rng: np.random.Generator, d: int, scale: float = 1.0) -> np.ndarray:
    a = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    return scale * (a + a.conj().T) / 2


def random_unitary(rng: np.random.Generator, d: int) -> np.ndarray:
    a = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    q, r = np.linalg.qr(a)
    return q * (np.diag(r) / np.abs(np.diag(r)))


def random_density_matrix(rng: np.random.Generator, d: int, rank: int | None = None) -> np.ndarray:
    rank = rank or d
    a = rng.standard_normal((d, rank)) + 1j * rng.standard_normal((d, rank))
    m = a @ a.conj().T
    return m / np.trace(m).real


def random_pure_vector(rng: np.random.Generator, d: int) -> np.ndarray:
    v = rng.standard_normal(d) + 1j * rng.standard_normal(d)
    return v / np.linalg.norm(v)


def random_diagonal_system(
    rng: np.random.Generator,
    d: int,
    beta: float,
    label: str = "X",
    energy_scale: float = 1.0,
) -> SystemSpec:
    energies = np.sort(rng.uniform(0.0, energy_scale, size=d))
    return SystemSpec(label, d, np.diag(energies), beta)


def random_state(rng: np.random.Generator, system: SystemSpec) -> DensityOperator:
    return DensityOperator(random_density_matrix(rng, system.dim), system)


def random_pure_state(rng: np.random.Generator, system: SystemSpec) -> PureState:
    return PureState(random_pure_vector(rng, system.dim), system)


def random_kraus_list(
    rng: np.random.Generator, d_out: int, d_in: int, count: int
) -> list[np.ndarray]:
    """A random CPTP Kraus list via a Stinespring isometry (QR of a random
    tall matrix)."""
    a = rng.standard_normal((d_out * count, d_in)) + 1j * rng.standard_normal(
        (d_out * count, d_in)
    )
    q, _ = np.linalg.qr(a)
    return [q[k * d_out : (k + 1) * d_out, :] for k in range(count)]


def random_weight_ordered_tuple(
    rng: np.random.Generator,
    max_dim: int = 5,
    margin: float = 1e-4,
    max_tries: int = 500,
):
    """Random systems and indices with the strict Gibbs-weight ordering
    ``tau_{S,i} < tau_{S',i'} < tau_{S,j}``, kept away from the boundary by
    ``margin`` so induced superposition weights are well separated from 0/1.
    """
    from gibbscert.quantum import gibbs_weights

    for _ in range(max_tries):
        d_s = int(rng.integers(2, max_dim + 1))
        d_sp = int(rng.integers(2, max_dim + 1))
        beta = float(np.exp(rng.uniform(np.log(0.1), np.log(10.0))))
        s = random_diagonal_system(rng, d_s, beta, "S")
        sp = random_diagonal_system(rng, d_sp, beta, "S'")
        w = gibbs_weights(s)
        wp = gibbs_weights(sp)
        candidates = [
            (i, j, ip)
            for i in range(d_s)
            for j in range(d_s)
            if i != j
            for ip in range(d_sp)
            if w[i] + margin < wp[ip] < w[j] - margin
        ]
        if candidates:
            i, j, ip = candidates[int(rng.integers(len(candidates)))]
            return s, sp, i, j, ip
    raise RuntimeError("could not sample a weight-ordered tuple")
