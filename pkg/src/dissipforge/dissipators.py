"""Synthesis of jump operators whose joint dark space is a chosen target.

Two constructions are provided. The subspace route emits one operator
|phi_j><j| per level outside the protected block, draining that level into
the block. The single-operator route couples the target to every other
frame vector at once, which pins the steady state to one pure state as long
as every coefficient is nonzero.
"""

from dataclasses import dataclass

import numpy as np

from .algebra import PauliSum, dag


@dataclass(frozen=True, eq=False)
class SynthesisSpec:
    """Frame and coefficients defining a dark-space synthesis problem.

    The columns of `basis` list the working frame |1>..|N>; the first k
    columns span the protected block. Row j-k-1 of `coeffs` holds the
    block components of |phi_j>, the vector level j decays into (it need
    not be normalized).
    """

    dim: int
    k: int
    coeffs: np.ndarray
    basis: np.ndarray | None = None

    def __post_init__(self):
        if not 1 <= self.k < self.dim:
            raise ValueError(f"need 1 <= k < N, got k={self.k}, N={self.dim}")
        basis = self.basis
        if basis is None:
            basis = np.eye(self.dim, dtype=complex)
        else:
            basis = np.asarray(basis, dtype=complex).copy()
            if basis.shape != (self.dim, self.dim):
                raise ValueError(f"basis shape {basis.shape} is not ({self.dim}, {self.dim})")
            if np.max(np.abs(dag(basis) @ basis - np.eye(self.dim))) > 1e-12:
                raise ValueError("basis columns are not orthonormal to 1e-12")
        coeffs = np.asarray(self.coeffs, dtype=complex).copy()
        if coeffs.ndim == 1:
            coeffs = coeffs[:, None]
        if coeffs.shape != (self.dim - self.k, self.k):
            raise ValueError(
                f"coeffs shape {coeffs.shape} is not ({self.dim - self.k}, {self.k})"
            )
        rows = np.linalg.norm(coeffs, axis=1)
        if np.any(rows == 0):
            dead = int(np.nonzero(rows == 0)[0][0]) + self.k + 1
            raise ValueError(f"coefficient row for level {dead} is all zero; it would never decay")
        basis.setflags(write=False)
        coeffs.setflags(write=False)
        object.__setattr__(self, "basis", basis)
        object.__setattr__(self, "coeffs", coeffs)


@dataclass(frozen=True, eq=False)
class DissipatorSet:
    """Ordered collection of (decay rate, jump operator) pairs."""

    items: tuple  # of (gamma, operator)

    def __post_init__(self):
        norm = []
        dim = None
        for gamma, op in self.items:
            gamma = float(gamma)
            if gamma <= 0:
                raise ValueError(f"decay rates must be positive, got {gamma}")
            op = np.asarray(op, dtype=complex).copy()
            if op.ndim != 2 or op.shape[0] != op.shape[1]:
                raise ValueError(f"jump operator must be square, got shape {op.shape}")
            if dim is None:
                dim = op.shape[0]
            elif op.shape[0] != dim:
                raise ValueError("jump operators act on different dimensions")
            op.setflags(write=False)
            norm.append((gamma, op))
        object.__setattr__(self, "items", tuple(norm))

    @property
    def dim(self) -> int | None:
        return self.items[0][1].shape[0] if self.items else None

    @property
    def rates(self) -> tuple[float, ...]:
        return tuple(g for g, _ in self.items)

    @property
    def operators(self) -> tuple[np.ndarray, ...]:
        return tuple(op for _, op in self.items)

    def scaled(self, factor: float) -> "DissipatorSet":
        """Same operators with every rate multiplied by factor."""
        return DissipatorSet(tuple((g * factor, op) for g, op in self.items))

    def to_json_obj(self) -> list:
        out = []
        for gamma, op in self.items:
            flat = [[float(z.real), float(z.imag)] for z in op.reshape(-1)]
            out.append({"gamma": gamma, "matrix": flat})
        return out

    @classmethod
    def from_json_obj(cls, obj) -> "DissipatorSet":
        items = []
        for entry in obj:
            flat = np.array([complex(re, im) for re, im in entry["matrix"]])
            d = int(round(np.sqrt(flat.size)))
            items.append((float(entry["gamma"]), flat.reshape(d, d)))
        return cls(tuple(items))

    def __iter__(self):
        return iter(self.items)

    def __len__(self):
        return len(self.items)


def synth_subspace(spec: SynthesisSpec) -> DissipatorSet:
    """One jump operator |phi_j><j| per level outside the protected block.

    Every operator annihilates the block, so any state supported there is
    stationary; populations and coherences involving the outside levels
    decay. All rates default to 1.
    """
    block = spec.basis[:, : spec.k]
    ops = []
    for row in range(spec.dim - spec.k):
        phi = block @ spec.coeffs[row]
        bra = spec.basis[:, spec.k + row].conj()
        ops.append((1.0, np.outer(phi, bra)))
    return DissipatorSet(tuple(ops))


def synth_single(spec: SynthesisSpec, frame: np.ndarray | None = None) -> DissipatorSet:
    """Single jump operator |phi_0>(sum_b a_b <phi_b|), conjugated into `frame`.

    Requires k = 1 with every coefficient nonzero. The operator annihilates
    frame^dag |phi_0| and drains every diagonal population into it, but on
    its own it also leaves the (N-2)-dimensional slice of the complement
    orthogonal to the coefficient vector dark, so the generator kernel has
    dimension (N-1)^2. Pair it with splitting_hamiltonian to lift that
    degeneracy; the unique steady state is then the pure frame^dag |phi_0>.
    """
    if spec.k != 1:
        raise ValueError(f"single-operator synthesis needs k = 1, got k = {spec.k}")
    if np.any(spec.coeffs == 0):
        raise ValueError("all coefficients must be nonzero or the steady state is not unique")
    phi0 = spec.basis[:, 0]
    bra = spec.basis[:, 1:].conj() @ spec.coeffs[:, 0]
    L = np.outer(phi0, bra)
    if frame is not None:
        frame = np.asarray(frame, dtype=complex)
        if frame.shape != (spec.dim, spec.dim):
            raise ValueError(f"frame shape {frame.shape} is not ({spec.dim}, {spec.dim})")
        if np.max(np.abs(dag(frame) @ frame - np.eye(spec.dim))) > 1e-12:
            raise ValueError("frame is not unitary to 1e-12")
        L = dag(frame) @ L @ frame
    return DissipatorSet(((1.0, L),))


def splitting_hamiltonian(
    spec: SynthesisSpec,
    frame: np.ndarray | None = None,
    energies=None,
) -> np.ndarray:
    """Hamiltonian with the frame vectors as nondegenerate eigenstates.

    Coherences among the extra dark directions of a single synthesized
    operator are stationary by themselves; distinct energies on the frame
    vectors make them rotate, leaving the target as the unique steady
    state. Energies default to 0, 1, ..., N-1; `frame` must match the one
    passed to synth_single.
    """
    if energies is None:
        energies = np.arange(spec.dim, dtype=float)
    energies = np.asarray(energies, dtype=float)
    if energies.shape != (spec.dim,):
        raise ValueError(f"need {spec.dim} energies, got shape {energies.shape}")
    if np.unique(energies).size != spec.dim:
        raise ValueError("energies must be pairwise distinct to split the frame")
    H = spec.basis @ np.diag(energies).astype(complex) @ dag(spec.basis)
    if frame is not None:
        frame = np.asarray(frame, dtype=complex)
        H = dag(frame) @ H @ frame
    return (H + dag(H)) / 2.0


def orthonormal_frame(target) -> np.ndarray:
    """Unitary whose first column is `target`, completed by Gram-Schmidt.

    The remaining columns come from computational basis seeds, skipping the
    seed that overlaps `target` most strongly (lowest index on ties).
    """
    v = np.asarray(
        target.amplitudes if hasattr(target, "amplitudes") else target, dtype=complex
    ).reshape(-1)
    v = v / np.linalg.norm(v)
    N = v.size
    drop = int(np.argmax(np.abs(v)))
    cols = [v]
    for i in range(N):
        if i == drop:
            continue
        w = np.zeros(N, dtype=complex)
        w[i] = 1.0
        for _ in range(2):  # second pass keeps the frame orthonormal to 1e-12
            for c in cols:
                w = w - np.vdot(c, w) * c
        nrm = np.linalg.norm(w)
        if nrm < 1e-12:
            raise ValueError("basis seed collapsed during orthogonalization")
        cols.append(w / nrm)
    return np.column_stack(cols)


def preset_lfor2() -> DissipatorSet:
    """Stock two-qubit jump operators with joint dark state (|00>+|11>)/sqrt(2).

    L1 = i(X1 Y2 + Y1 X2) - (Z1 + Z2)
    L2 = i(Z1 Y2 + Y1 Z2) + (X1 + X2)
    L3 = (Z1 X2 - X1 Z2) - i(Y1 - Y2)

    Each is rank one with left vector the Bell state, so together they drain
    the full orthogonal complement. All rates are 1; the operators are not
    normalized (their scale folds into the rate).
    """
    combos = (
        ((1j, "XY"), (1j, "YX"), (-1, "ZI"), (-1, "IZ")),
        ((1j, "ZY"), (1j, "YZ"), (1, "XI"), (1, "IX")),
        ((1, "ZX"), (-1, "XZ"), (-1j, "YI"), (1j, "IY")),
    )
    ops = tuple((1.0, PauliSum.from_terms(2, terms).dense()) for terms in combos)
    return DissipatorSet(ops)


def is_dark(ds: DissipatorSet, phi) -> bool:
    """True when every jump operator annihilates |phi> to within 1e-10."""
    v = np.asarray(
        phi.amplitudes if hasattr(phi, "amplitudes") else phi, dtype=complex
    ).reshape(-1)
    if ds.dim is not None and ds.dim != v.size:
        raise ValueError(f"dimension mismatch: operators on {ds.dim}, state on {v.size}")
    return all(np.linalg.norm(op @ v) <= 1e-10 for _, op in ds)
