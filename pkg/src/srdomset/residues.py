"""Residue classes, vertex states, and the state-string model.

A problem instance fixes two residue classes sigma and rho modulo a shared
m >= 2.  A selected vertex is happy when its selected-neighbor count lies in
sigma, an unselected one when the count lies in rho.  Since only the count
modulo m matters, a portal vertex is fully described by a *state*: its
selection status plus its count reduced mod m.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Iterable, Sequence


class Kind(enum.IntEnum):
    """Selection status of a state.  The integer value doubles as the
    sigma-vector bit."""

    RHO = 0
    SIGMA = 1


@dataclass(frozen=True, order=True)
class State:
    """A vertex state: selected (sigma_c) or unselected (rho_c) with c
    selected neighbors, c already reduced modulo m."""

    kind: Kind
    count: int

    @staticmethod
    def sigma(count: int) -> "State":
        return State(Kind.SIGMA, count)

    @staticmethod
    def rho(count: int) -> "State":
        return State(Kind.RHO, count)

    @property
    def selected(self) -> bool:
        return self.kind is Kind.SIGMA

    def __str__(self) -> str:
        return ("s" if self.selected else "r") + str(self.count)

    def __repr__(self) -> str:
        return f"State({self})"


def parse_state(token: str) -> State:
    """Inverse of str(State): 's1' -> sigma_1, 'r0' -> rho_0."""
    if len(token) < 2 or token[0] not in "sr":
        raise ValueError(f"bad state token {token!r}")
    return State(Kind.SIGMA if token[0] == "s" else Kind.RHO, int(token[1:]))


# A StateString is a plain tuple of States; the position order is carried by
# whoever owns the string (a Language's index, a portal list, ...).
StateString = tuple  # tuple[State, ...]


def decompose(x: Sequence[State]) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Split a state string into its sigma-vector (0/1 selection pattern)
    and its weight-vector (counts)."""
    return tuple(int(s.kind) for s in x), tuple(s.count for s in x)


def recompose(sigma_vector: Sequence[int], weight_vector: Sequence[int]) -> StateString:
    if len(sigma_vector) != len(weight_vector):
        raise ValueError("vector length mismatch")
    return tuple(State(Kind(b), c) for b, c in zip(sigma_vector, weight_vector))


@dataclass(frozen=True)
class ResidueClass:
    """The set {n : n == a (mod m)} stored canonically with 0 <= a < m."""

    a: int
    m: int

    def __post_init__(self):
        if self.m < 1:
            raise ValueError(f"modulus must be >= 1, got {self.m}")
        if not 0 <= self.a < self.m:
            raise ValueError(f"residue {self.a} not canonical for modulus {self.m}")

    def __contains__(self, n: int) -> bool:
        return n % self.m == self.a

    @property
    def min(self) -> int:
        return self.a

    def __str__(self) -> str:
        return f"{self.a}/{self.m}"


EVEN = ResidueClass(0, 2)
ODD = ResidueClass(1, 2)


def parse_residue_class(text: str) -> ResidueClass:
    """Parse the CLI form 'a/m'."""
    parts = text.split("/")
    if len(parts) != 2:
        raise ValueError(f"expected a/m, got {text!r}")
    try:
        a, m = int(parts[0]), int(parts[1])
    except ValueError:
        raise ValueError(f"expected integers in a/m, got {text!r}") from None
    return ResidueClass(a, m)


@dataclass(frozen=True)
class ProblemSpec:
    """A (sigma, rho) pair of residue classes sharing one modulus."""

    sigma: ResidueClass
    rho: ResidueClass

    def __post_init__(self):
        if self.sigma.m != self.rho.m:
            raise ValueError(
                f"mixed moduli not supported: sigma mod {self.sigma.m}, "
                f"rho mod {self.rho.m}"
            )

    @property
    def m(self) -> int:
        return self.sigma.m

    def __str__(self) -> str:
        return f"sigma={self.sigma} rho={self.rho}"

    def to_json(self) -> dict:
        return {
            "sigma": {"a": self.sigma.a, "m": self.sigma.m},
            "rho": {"a": self.rho.a, "m": self.rho.m},
        }


def spec(sigma_a: int, rho_a: int, m: int) -> ProblemSpec:
    return ProblemSpec(ResidueClass(sigma_a, m), ResidueClass(rho_a, m))


REFLEXIVE_ALLOFF = ProblemSpec(EVEN, ODD)  # pressing a switch toggles its own lamp
ALLOFF = ProblemSpec(ODD, ODD)  # switches do not toggle their own lamp


class Classification(enum.Enum):
    EASY = "easy"
    DIFFICULT = "difficult"


def classify(problem_spec: ProblemSpec) -> Classification:
    """Easy pairs are decidable in polynomial time: 0 in rho (empty set
    works), or the two parity pairs solvable by GF(2) elimination."""
    if problem_spec.m < 2:
        raise ValueError("classification requires modulus >= 2")
    s, r = problem_spec.sigma, problem_spec.rho
    if 0 in r:
        return Classification.EASY
    if s == EVEN and r == ODD:
        return Classification.EASY
    if s == ODD and r == ODD:
        return Classification.EASY
    return Classification.DIFFICULT


def cut_set(tau: ResidueClass) -> frozenset[int]:
    """The two smallest members of tau: {min, min + m}."""
    return frozenset({tau.min, tau.min + tau.m})


def inverse(n: int, tau: ResidueClass) -> int:
    """The count that tops n up to a member of tau: (min tau - n) mod m."""
    return (tau.min - n) % tau.m


# ---------------------------------------------------------------------------
# Packed encodings.
#
# A state is stored as one digit in [0, 2m): rho_c -> c, sigma_c -> m + c.
# A state string over an index of length n becomes one integer in base 2m,
# position 0 least significant.  All hot loops in the solver operate on
# arrays of these codes.
# ---------------------------------------------------------------------------


def state_to_digit(s: State, m: int) -> int:
    if not 0 <= s.count < m:
        raise ValueError(f"state count {s.count} not reduced mod {m}")
    return int(s.kind) * m + s.count


def digit_to_state(d: int, m: int) -> State:
    return State(Kind(d // m), d % m)


def pack_states(states: Iterable[State], m: int) -> int:
    code = 0
    base = 2 * m
    for j, s in enumerate(states):
        code += state_to_digit(s, m) * base**j
    return code


def unpack_code(code: int, n: int, m: int) -> StateString:
    base = 2 * m
    out = []
    for _ in range(n):
        out.append(digit_to_state(code % base, m))
        code //= base
    return tuple(out)
