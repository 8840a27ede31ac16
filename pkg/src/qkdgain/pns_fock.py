# ABOUTME: Exact check of the photon-number-splitting transformation in Fock space
# ABOUTME: Two Jaynes-Cummings stages on a conserved-excitation subspace of four modes and an atom
"""Photon-number-splitting verification for qkdgain

Eve's splitting device couples the two polarization modes a1, a2 of the signal to a
three-level atom (ground state g, excited states e1, e2), then hands the excitation
over to two fresh modes b1, b2:

    H1 = lambda (a1^+ s1 + a1 s1^+ + a2^+ s2 + a2 s2^+)
    H2 = lambda (b1^+ s1 + b1 s1^+ + b2^+ s2 + b2 s2^+)

with s_i = |g><e_i|. Both Hamiltonians conserve the total excitation number
n = n_a1 + n_a2 + n_b1 + n_b2 + [atom excited], so each n is an exact finite
block and no Fock truncation is involved. Time is measured in units of 1/lambda.

An n-photon signal of any polarization evolved under H1 for pi/(2 sqrt(n)) and then
under H2 for pi/2 should leave n - 1 photons in the signal, one photon of the same
polarization in the b modes and the atom back in g.
"""

import math
from dataclasses import dataclass
from functools import cached_property
from typing import TypeAlias

import numpy as np
from numpy.typing import NDArray
from scipy import linalg

from qkdgain.exceptions import NumericalError, ParameterDomainError
from qkdgain.logging_config import get_logger

__all__ = [
    "MAX_PHOTONS",
    "FIDELITY_TOLERANCE",
    "UNITARITY_TOLERANCE",
    "ATOM_LEVELS",
    "BasisState",
    "ExcitationSubspace",
    "FockOperator",
    "StateVector",
    "Polarization",
    "POLARIZATIONS",
    "PnsResult",
    "build_hamiltonians",
    "propagator",
    "evolve",
    "polarized_state",
    "random_polarization",
    "unitarity_defect",
    "pns_transform",
    "verify_pns",
]

logger = get_logger(__name__)

MAX_PHOTONS = 6
FIDELITY_TOLERANCE = 1e-9
UNITARITY_TOLERANCE = 1e-10
NORM_TOLERANCE = 1e-10

ATOM_LEVELS = ("g", "e1", "e2")
GROUND, EXCITED_1, EXCITED_2 = range(3)

# Positions of the four photon modes inside a BasisState
MODE_A1, MODE_A2, MODE_B1, MODE_B2 = range(4)
ATOM = 4

ComplexArray: TypeAlias = NDArray[np.complex128]

# (n_a1, n_a2, n_b1, n_b2, atom level index)
BasisState: TypeAlias = tuple[int, int, int, int, int]


def _compositions(total: int, parts: int) -> list[tuple[int, ...]]:
    """All tuples of `parts` nonnegative integers summing to `total`"""
    if parts == 1:
        return [(total,)]
    return [
        (first, *rest)
        for first in range(total, -1, -1)
        for rest in _compositions(total - first, parts - 1)
    ]


@dataclass(frozen=True)
class ExcitationSubspace:
    """States with exactly n excitations shared by the four modes and the atom

    Attributes:
        n: Total excitation number, 1 <= n <= MAX_PHOTONS
    """

    n: int

    def __post_init__(self) -> None:
        if not 1 <= self.n <= MAX_PHOTONS:
            raise ParameterDomainError("n", self.n, f"an integer in [1, {MAX_PHOTONS}]")

    @cached_property
    def basis(self) -> tuple[BasisState, ...]:
        states: list[BasisState] = []
        for atom in (GROUND, EXCITED_1, EXCITED_2):
            photons = self.n - (0 if atom == GROUND else 1)
            for a1, a2, b1, b2 in _compositions(photons, 4):
                states.append((a1, a2, b1, b2, atom))
        return tuple(states)

    @cached_property
    def index(self) -> dict[BasisState, int]:
        return {state: i for i, state in enumerate(self.basis)}

    @property
    def dimension(self) -> int:
        return len(self.basis)

    @staticmethod
    def expected_dimension(n: int) -> int:
        """Count of states: C(n+3, 3) with the atom in g, C(n+2, 3) for each excited level"""
        return math.comb(n + 3, 3) + 2 * math.comb(n + 2, 3)


@dataclass(frozen=True, eq=False)
class FockOperator:
    """Dense Hermitian operator on one excitation subspace"""

    subspace: ExcitationSubspace
    matrix: ComplexArray
    coupling: float = 1.0

    @property
    def hermiticity_defect(self) -> float:
        return float(np.max(np.abs(self.matrix - self.matrix.conj().T)))


@dataclass(frozen=True, eq=False)
class StateVector:
    """Complex amplitudes over the basis of an excitation subspace"""

    subspace: ExcitationSubspace
    amplitudes: ComplexArray

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def probabilities(self) -> NDArray[np.float64]:
        return np.abs(self.amplitudes) ** 2

    def overlap(self, other: "StateVector") -> complex:
        """Inner product <self|other>"""
        return complex(np.vdot(self.amplitudes, other.amplitudes))

    def fidelity(self, other: "StateVector") -> float:
        """Squared overlap |<self|other>|^2, blind to global phase"""
        return abs(self.overlap(other)) ** 2

    def ground_population(self) -> float:
        """Population of the atomic ground state"""
        probs = self.probabilities()
        return float(sum(p for p, s in zip(probs, self.subspace.basis) if s[ATOM] == GROUND))

    def photon_numbers(self) -> tuple[float, float]:
        """Expected photon numbers in the a modes and in the b modes"""
        probs = self.probabilities()
        basis = self.subspace.basis
        in_a = sum(p * (s[MODE_A1] + s[MODE_A2]) for p, s in zip(probs, basis))
        in_b = sum(p * (s[MODE_B1] + s[MODE_B2]) for p, s in zip(probs, basis))
        return float(in_a), float(in_b)


def _jc_hamiltonian(
    sub: ExcitationSubspace, modes: tuple[int, int], coupling: float
) -> FockOperator:
    """lambda sum_i (m_i^+ s_i + m_i s_i^+) for the mode pair coupled to e1, e2"""
    matrix = np.zeros((sub.dimension, sub.dimension), dtype=np.complex128)
    for source, state in enumerate(sub.basis):
        level = state[ATOM]
        if level == GROUND:
            continue
        # m^+ s: atom drops e_i -> g and mode i gains a photon
        mode = modes[level - 1]
        photons = list(state[:ATOM])
        photons[mode] += 1
        target: BasisState = (photons[0], photons[1], photons[2], photons[3], GROUND)
        row = sub.index[target]
        element = coupling * math.sqrt(state[mode] + 1)
        matrix[row, source] += element
        matrix[source, row] += element
    return FockOperator(subspace=sub, matrix=matrix, coupling=coupling)


def build_hamiltonians(
    sub: ExcitationSubspace, coupling: float = 1.0
) -> tuple[FockOperator, FockOperator]:
    """Jaynes-Cummings Hamiltonians of the two splitting stages

    Args:
        sub: Excitation subspace
        coupling: lambda; 1 measures time in units of 1/lambda

    Returns:
        (H1 coupling a1, a2 to the atom, H2 coupling b1, b2 to the atom)
    """
    h1 = _jc_hamiltonian(sub, (MODE_A1, MODE_A2), coupling)
    h2 = _jc_hamiltonian(sub, (MODE_B1, MODE_B2), coupling)
    logger.debug(f"Built Hamiltonians for n={sub.n} (dimension {sub.dimension})")
    return h1, h2


def propagator(operator: FockOperator, t: float) -> ComplexArray:
    """exp(-i H t) from the Hermitian eigendecomposition of H

    Raises:
        NumericalError: If the eigendecomposition fails
    """
    try:
        energies, vectors = linalg.eigh(operator.matrix)
    except (linalg.LinAlgError, ValueError) as e:
        logger.error(f"Eigendecomposition failed for n={operator.subspace.n}: {e}")
        raise NumericalError("Hermitian eigendecomposition", str(e)) from e
    phases = np.exp(-1j * energies * t)
    result: ComplexArray = (vectors * phases) @ vectors.conj().T
    return result


def evolve(state: StateVector, operator: FockOperator, t: float) -> StateVector:
    """Evolve a state under a Hamiltonian for time t

    Args:
        state: Normalized state
        operator: Hamiltonian on the same subspace
        t: Interaction time in units of 1/lambda

    Returns:
        exp(-i H t) |state>

    Raises:
        NumericalError: If the evolution fails or does not preserve the norm
    """
    if state.subspace.n != operator.subspace.n:
        raise ParameterDomainError("n", state.subspace.n, f"{operator.subspace.n} (operator block)")
    evolved = StateVector(state.subspace, propagator(operator, t) @ state.amplitudes)
    if abs(evolved.norm - state.norm) > NORM_TOLERANCE:
        logger.error(f"Norm drift {evolved.norm - state.norm:.3g} in n={state.subspace.n} block")
        raise NumericalError("time evolution", f"norm changed to {evolved.norm:.15g}")
    return evolved


@dataclass(frozen=True)
class Polarization:
    """Polarization mode alpha a1 + beta a2 with |alpha|^2 + |beta|^2 = 1"""

    alpha: complex
    beta: complex
    label: str = ""

    def __post_init__(self) -> None:
        total = abs(self.alpha) ** 2 + abs(self.beta) ** 2
        if abs(total - 1.0) > 1e-12:
            raise ParameterDomainError("polarization norm", total, "1")

    @classmethod
    def from_angles(cls, theta: float, phi: float) -> "Polarization":
        """cos(theta) a1 + exp(i phi) sin(theta) a2"""
        return cls(
            alpha=complex(math.cos(theta)),
            beta=complex(math.cos(phi), math.sin(phi)) * math.sin(theta),
            label=f"theta={theta:.4f},phi={phi:.4f}",
        )


_DIAGONAL = 1.0 / math.sqrt(2.0)

POLARIZATIONS: dict[str, Polarization] = {
    "a1": Polarization(1.0, 0.0, "a1"),
    "a2": Polarization(0.0, 1.0, "a2"),
    "a+": Polarization(_DIAGONAL, _DIAGONAL, "a+"),
    "a-": Polarization(_DIAGONAL, -_DIAGONAL, "a-"),
}


def random_polarization(rng: np.random.Generator) -> Polarization:
    """Polarization with theta uniform in [0, pi/2] and phi uniform in [0, 2 pi)"""
    theta = float(rng.uniform(0.0, math.pi / 2.0))
    phi = float(rng.uniform(0.0, 2.0 * math.pi))
    return Polarization.from_angles(theta, phi)


def _mode_amplitudes(pol: Polarization, count: int) -> list[tuple[int, complex]]:
    """(photons in mode 1, amplitude) of |count photons in pol>"""
    return [
        (k, math.sqrt(math.comb(count, k)) * pol.alpha**k * pol.beta ** (count - k))
        for k in range(count + 1)
    ]


def polarized_state(
    sub: ExcitationSubspace,
    signal: tuple[Polarization, int],
    split: tuple[Polarization, int] | None = None,
) -> StateVector:
    """Product state |k photons in pol>_a (x) |j photons in pol'>_b (x) |g>

    Args:
        sub: Subspace; photon counts must add up to sub.n
        signal: (polarization, photon count) of the a modes
        split: (polarization, photon count) of the b modes, vacuum when None

    Returns:
        Normalized StateVector
    """
    signal_pol, signal_count = signal
    split_pol, split_count = split if split is not None else (POLARIZATIONS["a1"], 0)
    if signal_count + split_count != sub.n:
        raise ParameterDomainError("photon count", signal_count + split_count, f"{sub.n}")

    amplitudes = np.zeros(sub.dimension, dtype=np.complex128)
    for ka, amp_a in _mode_amplitudes(signal_pol, signal_count):
        for kb, amp_b in _mode_amplitudes(split_pol, split_count):
            state = (ka, signal_count - ka, kb, split_count - kb, GROUND)
            amplitudes[sub.index[state]] += amp_a * amp_b
    return StateVector(sub, amplitudes)


def unitarity_defect(matrix: ComplexArray) -> float:
    """max |U^+ U - I| over all matrix elements"""
    identity = np.eye(matrix.shape[0], dtype=np.complex128)
    return float(np.max(np.abs(matrix.conj().T @ matrix - identity)))


@dataclass(frozen=True, eq=False)
class PnsResult:
    """Outcome of splitting one photon off an n-photon signal

    Attributes:
        n: Photon number of the signal
        polarization: Polarization label
        output: Final state
        fidelity: Squared overlap with |n-1, pol>_a |1, pol>_b |g>
        unitarity_defect: max |U^+ U - I| of the composed evolution
        ground_population: Final population of the atomic ground state
        photons_a: Expected photon number left in the signal modes
        photons_b: Expected photon number in Eve's modes
    """

    n: int
    polarization: str
    output: StateVector
    fidelity: float
    unitarity_defect: float
    ground_population: float
    photons_a: float
    photons_b: float

    @property
    def passed(self) -> bool:
        return (
            self.fidelity >= 1.0 - FIDELITY_TOLERANCE
            and self.unitarity_defect < UNITARITY_TOLERANCE
        )


def pns_transform(n: int, polarization: str | Polarization) -> PnsResult:
    """Split one photon off an n-photon signal of definite polarization

    Args:
        n: Photon number, 1 <= n <= MAX_PHOTONS
        polarization: One of "a1", "a2", "a+", "a-" or a Polarization

    Returns:
        PnsResult with the final state and its diagnostics

    Raises:
        ParameterDomainError: If n or the polarization name is invalid
        NumericalError: If the evolution fails
    """
    if isinstance(polarization, str):
        if polarization not in POLARIZATIONS:
            raise ParameterDomainError(
                "polarization", polarization, f"one of {', '.join(POLARIZATIONS)}"
            )
        polarization = POLARIZATIONS[polarization]

    sub = ExcitationSubspace(n)
    h1, h2 = build_hamiltonians(sub)
    t1, t2 = math.pi / (2.0 * math.sqrt(n)), math.pi / 2.0

    initial = polarized_state(sub, (polarization, n))
    output = evolve(evolve(initial, h1, t1), h2, t2)
    target = polarized_state(sub, (polarization, n - 1), (polarization, 1))

    composed = propagator(h2, t2) @ propagator(h1, t1)
    photons_a, photons_b = output.photon_numbers()
    return PnsResult(
        n=n,
        polarization=polarization.label,
        output=output,
        fidelity=target.fidelity(output),
        unitarity_defect=unitarity_defect(composed),
        ground_population=output.ground_population(),
        photons_a=photons_a,
        photons_b=photons_b,
    )


def verify_pns(n_max: int = 4, random_per_n: int = 0, seed: int = 0) -> list[PnsResult]:
    """Run the splitting check for every n up to n_max in both BB84 bases

    Args:
        n_max: Largest photon number, 1 <= n_max <= MAX_PHOTONS
        random_per_n: Extra random polarizations per n
        seed: Seed of the random polarizations

    Returns:
        Results ordered by n, then a1, a2, a+, a-, then the random polarizations
    """
    if not 1 <= n_max <= MAX_PHOTONS:
        raise ParameterDomainError("n_max", n_max, f"an integer in [1, {MAX_PHOTONS}]")
    if random_per_n < 0:
        raise ParameterDomainError("random_per_n", random_per_n, ">= 0")

    rng = np.random.default_rng(seed)
    results: list[PnsResult] = []
    for n in range(1, n_max + 1):
        pols = list(POLARIZATIONS.values())
        pols += [random_polarization(rng) for _ in range(random_per_n)]
        results.extend(pns_transform(n, pol) for pol in pols)

    failed = [r for r in results if not r.passed]
    if failed:
        logger.warning(f"{len(failed)} of {len(results)} splitting checks failed")
    else:
        logger.info(f"All {len(results)} splitting checks passed up to n={n_max}")
    return results
