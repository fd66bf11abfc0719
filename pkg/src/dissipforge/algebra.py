"""Dense complex linear algebra and Pauli-word algebra shared by every module.

Operators are plain complex numpy arrays. Qubit 1 is the leftmost (most
significant) tensor factor throughout, so the dense form of an n-qubit word
is kron(P_1, kron(P_2, ...)).
"""

from dataclasses import dataclass

import numpy as np
from scipy.linalg import expm as _expm

PAULI_I = np.eye(2, dtype=complex)
PAULI_X = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
PAULI_Y = np.array([[0.0, -1.0j], [1.0j, 0.0]], dtype=complex)
PAULI_Z = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex)
PAULIS = {"I": PAULI_I, "X": PAULI_X, "Y": PAULI_Y, "Z": PAULI_Z}

PHASES = (1 + 0j, 1j, -1 + 0j, -1j)

# single-qubit products a.b = phase * letter
_MUL = {
    ("I", "I"): (1, "I"), ("I", "X"): (1, "X"), ("I", "Y"): (1, "Y"), ("I", "Z"): (1, "Z"),
    ("X", "I"): (1, "X"), ("X", "X"): (1, "I"), ("X", "Y"): (1j, "Z"), ("X", "Z"): (-1j, "Y"),
    ("Y", "I"): (1, "Y"), ("Y", "X"): (-1j, "Z"), ("Y", "Y"): (1, "I"), ("Y", "Z"): (1j, "X"),
    ("Z", "I"): (1, "Z"), ("Z", "X"): (1j, "Y"), ("Z", "Y"): (-1j, "X"), ("Z", "Z"): (1, "I"),
}


def dag(A: np.ndarray) -> np.ndarray:
    """Conjugate transpose."""
    return np.asarray(A).conj().T


def kron(A: np.ndarray, B: np.ndarray) -> np.ndarray:
    """Kronecker product A (x) B; A is the more significant factor."""
    return np.kron(np.asarray(A, dtype=complex), np.asarray(B, dtype=complex))


def kron_all(ops) -> np.ndarray:
    """Kronecker product of a sequence of matrices, left to right."""
    out = np.array([[1.0 + 0j]])
    for op in ops:
        out = np.kron(out, np.asarray(op, dtype=complex))
    return out


def matexp(A: np.ndarray) -> np.ndarray:
    """Matrix exponential of a square complex matrix (scaling-and-squaring Pade)."""
    A = np.asarray(A, dtype=complex)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ValueError(f"matexp needs a square matrix, got shape {A.shape}")
    return _expm(A)


def null_space(A: np.ndarray, tol: float = 1e-9) -> list[np.ndarray]:
    """Orthonormal basis of the numerical null space of a square matrix.

    A right singular vector is accepted when its singular value is at most
    tol times the largest singular value, so the returned dimension equals
    the count of singular values below that relative threshold.
    """
    A = np.asarray(A, dtype=complex)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ValueError(f"null_space needs a square matrix, got shape {A.shape}")
    if tol <= 0:
        raise ValueError(f"tolerance must be positive, got {tol}")
    _, s, vh = np.linalg.svd(A)
    cutoff = tol * s[0]
    return [vh[i].conj() for i in range(len(s)) if s[i] <= cutoff]


@dataclass(frozen=True)
class PauliString:
    """An n-qubit Pauli word phase * P_1 (x) ... (x) P_n, phase in {1, i, -1, -i}."""

    letters: str
    phase: complex = 1 + 0j

    def __post_init__(self):
        if not self.letters or any(c not in PAULIS for c in self.letters):
            raise ValueError(f"letters must be a nonempty word over IXYZ, got {self.letters!r}")
        object.__setattr__(self, "phase", complex(self.phase))
        if self.phase not in PHASES:
            raise ValueError(f"phase must be one of 1, i, -1, -i, got {self.phase}")

    @property
    def n(self) -> int:
        return len(self.letters)

    @property
    def dim(self) -> int:
        return 1 << len(self.letters)

    @property
    def weight(self) -> int:
        return sum(1 for c in self.letters if c != "I")

    @property
    def support(self) -> tuple[int, ...]:
        """1-based indices of the non-identity qubits."""
        return tuple(q for q, c in enumerate(self.letters, start=1) if c != "I")

    @classmethod
    def identity(cls, n: int) -> "PauliString":
        return cls("I" * n)

    @classmethod
    def single(cls, n: int, qubit: int, letter: str) -> "PauliString":
        """One letter on a single qubit (1-based), identity elsewhere."""
        if not 1 <= qubit <= n:
            raise ValueError(f"qubit {qubit} outside 1..{n}")
        word = ["I"] * n
        word[qubit - 1] = letter
        return cls("".join(word))

    def letter(self, qubit: int) -> str:
        """Letter acting on the given qubit (1-based)."""
        return self.letters[qubit - 1]

    def dense(self) -> np.ndarray:
        out = np.array([[self.phase]], dtype=complex)
        for c in self.letters:
            out = np.kron(out, PAULIS[c])
        return out

    def adjoint(self) -> "PauliString":
        return PauliString(self.letters, self.phase.conjugate())

    def __mul__(self, other: "PauliString") -> "PauliString":
        return pauli_mul(self, other)

    def __str__(self):
        prefix = {1 + 0j: "+", 1j: "+i", -1 + 0j: "-", -1j: "-i"}[self.phase]
        return prefix + self.letters


def pauli_mul(P: PauliString, Q: PauliString) -> PauliString:
    """Exact product of two Pauli words, letterwise with phase tracking."""
    if P.n != Q.n:
        raise ValueError(f"qubit counts differ: {P.n} vs {Q.n}")
    phase = P.phase * Q.phase
    letters = []
    for a, b in zip(P.letters, Q.letters):
        ph, c = _MUL[a, b]
        phase *= ph
        letters.append(c)
    return PauliString("".join(letters), phase)


def anticommutes(P: PauliString, Q: PauliString) -> bool:
    """True when the words anticommute (odd number of clashing letters)."""
    if P.n != Q.n:
        raise ValueError(f"qubit counts differ: {P.n} vs {Q.n}")
    clashes = sum(
        1 for a, b in zip(P.letters, Q.letters) if a != "I" and b != "I" and a != b
    )
    return clashes % 2 == 1


@dataclass(frozen=True)
class PauliSum:
    """Complex combination of phase-free Pauli words in canonical merged form."""

    n: int
    terms: tuple  # of (complex coefficient, PauliString with phase +1)

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("need at least one qubit")
        seen = set()
        norm = []
        for coeff, word in self.terms:
            if word.n != self.n:
                raise ValueError(f"term {word} does not act on {self.n} qubits")
            if word.phase != 1:
                raise ValueError(f"term words must carry phase +1, got {word}")
            if word.letters in seen:
                raise ValueError(f"duplicate word {word.letters}")
            seen.add(word.letters)
            norm.append((complex(coeff), word))
        object.__setattr__(self, "terms", tuple(norm))

    @classmethod
    def from_terms(cls, n: int, terms, tol: float = 1e-14) -> "PauliSum":
        """Merge duplicate words, fold word phases into coefficients, drop zeros."""
        acc: dict[str, complex] = {}
        for coeff, word in terms:
            if isinstance(word, str):
                word = PauliString(word)
            acc[word.letters] = acc.get(word.letters, 0j) + complex(coeff) * word.phase
        merged = tuple(
            (c, PauliString(w)) for w, c in sorted(acc.items()) if abs(c) >= tol
        )
        return cls(n, merged)

    def dense(self) -> np.ndarray:
        out = np.zeros((1 << self.n, 1 << self.n), dtype=complex)
        for coeff, word in self.terms:
            out += coeff * word.dense()
        return out

    def __len__(self):
        return len(self.terms)


_PAULI_STACK = np.stack([PAULI_I, PAULI_X, PAULI_Y, PAULI_Z])
_LETTER_ORDER = "IXYZ"


def pauli_decompose(M: np.ndarray, n: int, tol: float = 1e-14) -> PauliSum:
    """Expand a 2^n x 2^n matrix in the Pauli-word basis.

    Coefficients are Tr(W M) / 2^n for each Hermitian word W; terms with
    magnitude below tol are dropped. The contraction runs one qubit at a
    time, so the cost is O(n 4^n) rather than O(16^n).
    """
    M = np.asarray(M, dtype=complex)
    if n < 1:
        raise ValueError("need at least one qubit")
    dim = 1 << n
    if M.shape != (dim, dim):
        raise ValueError(f"matrix shape {M.shape} is not ({dim}, {dim})")
    T = M.reshape((2,) * (2 * n))
    for k in range(n):
        # contract column bit (axis n) and row bit (axis k) of the next qubit
        T = np.tensordot(_PAULI_STACK, T, axes=([1, 2], [n, k]))
    coeffs = np.transpose(T, tuple(reversed(range(n)))) / dim
    terms = []
    for idx in np.ndindex(coeffs.shape):
        c = coeffs[idx]
        if abs(c) >= tol:
            word = "".join(_LETTER_ORDER[i] for i in idx)
            terms.append((complex(c), PauliString(word)))
    return PauliSum(n, tuple(terms))
