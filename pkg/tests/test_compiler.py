import itertools

import numpy as np
import pytest

from dissipforge.algebra import PauliString, matexp
from dissipforge.compiler import (
    BathTestSpec,
    Conjugation,
    GateSequence,
    SeedCoupling,
    compile_coupling,
    conjugation_step,
    coupling_generator,
    ms_decompose,
    ms_system_action,
    realize_ms_sequence,
    trotter_step,
    verify_sequence,
)
from dissipforge.states import GraphSpec

THETAS = (0.3, 1.1, 2.7)


def _known_three_qubit_chain(theta=0.7):
    """The nested chain T_Z2 ( T_X2X3 ( T_Y2 ( T_Z1X2 (seed Y1) ))) -> X1X2X3."""
    return GateSequence(
        (
            SeedCoupling(1),
            Conjugation(PauliString("ZXI")),
            Conjugation(PauliString("IYI")),
            Conjugation(PauliString("IXX")),
            Conjugation(PauliString("IZI")),
        ),
        PauliString("XXX"),
        theta,
    )


# ---------------------------------------------------------------- conjugation step


def test_conjugation_step_examples():
    assert conjugation_step(PauliString("Z"), PauliString("Y")) == PauliString("X")
    assert conjugation_step(PauliString("ZX"), PauliString("YI")) == PauliString("XX")
    assert conjugation_step(PauliString("IY"), PauliString("XX")) == PauliString("XZ")


def test_conjugation_step_dense_identity():
    rng = np.random.default_rng(30)
    pairs = [("Z", "Y"), ("ZX", "YI"), ("IY", "XX"), ("XZ", "ZZ")]
    for a, g in pairs:
        A, G = PauliString(a), PauliString(g)
        out = conjugation_step(A, G)
        for _ in range(3):
            theta = rng.uniform(-np.pi, np.pi)
            U = matexp(0.25j * np.pi * A.dense())
            lhs = U @ matexp(1j * theta * G.dense()) @ U.conj().T
            rhs = matexp(1j * theta * out.dense())
            assert np.max(np.abs(lhs - rhs)) < 1e-12


def test_conjugation_step_rejects_commuting_pair():
    with pytest.raises(ValueError):
        conjugation_step(PauliString("X"), PauliString("X"))
    with pytest.raises(ValueError):
        conjugation_step(PauliString("XX"), PauliString("YY"))


def test_conjugation_step_rejects_heavy_axis():
    with pytest.raises(ValueError):
        conjugation_step(PauliString("XXX"), PauliString("ZII"))


def test_conjugation_step_output_phase_is_real():
    rng = np.random.default_rng(31)
    letters = list("IXYZ")
    count = 0
    while count < 30:
        a = "".join(rng.choice(letters) for _ in range(3))
        g = "".join(rng.choice(letters) for _ in range(3))
        try:
            A, G = PauliString(a), PauliString(g)
            if A.weight not in (1, 2):
                continue
            out = conjugation_step(A, G)
        except ValueError:
            continue
        assert out.phase in (1, -1)
        count += 1


# ---------------------------------------------------------------- compilation


def test_compile_single_qubit_seed_only():
    seq = compile_coupling(PauliString("Y"), 0.5)
    assert seq.conjugations == ()
    assert seq.seed == SeedCoupling(1)


def test_compile_two_qubit_is_single_gate():
    seq = compile_coupling(PauliString("XX"), 0.5, GraphSpec.path(2))
    assert len(seq.conjugations) == 1
    assert seq.conjugations[0].axis == PauliString("ZX")


def test_compile_three_qubit_chain_and_known_variant():
    bath = BathTestSpec.random(3, seed=40)
    ours = compile_coupling(PauliString("XXX"), 0.7, GraphSpec.path(3))
    assert verify_sequence(ours, bath, THETAS).passed
    assert verify_sequence(_known_three_qubit_chain(), bath, THETAS).passed


def test_compile_rejects_bad_targets():
    with pytest.raises(ValueError):
        compile_coupling(PauliString("XX", -1), 0.1)
    with pytest.raises(ValueError):  # disconnected support on a path
        compile_coupling(PauliString("XIX"), 0.1, GraphSpec.path(3))
    with pytest.raises(ValueError):  # graph size mismatch
        compile_coupling(PauliString("XX"), 0.1, GraphSpec.path(3))


def test_compile_exhaustive_two_qubit_words():
    bath = BathTestSpec.random(3, seed=41)
    for letters in itertools.product("XYZ", repeat=2):
        word = PauliString("".join(letters))
        seq = compile_coupling(word, 0.9, GraphSpec.path(2))
        report = verify_sequence(seq, bath, (0.9,))
        assert report.passed, f"{word} deviated by {report.max_deviation:.2e}"


def test_compile_sampled_three_qubit_words():
    rng = np.random.default_rng(42)
    bath = BathTestSpec.random(3, seed=43)
    words = ["".join(w) for w in itertools.product("XYZ", repeat=3)]
    for idx in rng.choice(len(words), size=8, replace=False):
        seq = compile_coupling(PauliString(words[idx]), 1.3, GraphSpec.path(3))
        assert verify_sequence(seq, bath, (1.3,)).passed


def test_compile_gate_count_affine_for_all_x():
    counts = []
    for n in range(2, 7):
        seq = compile_coupling(PauliString("X" * n), 0.3, GraphSpec.path(n))
        counts.append(len(seq.conjugations))
    diffs = {counts[i + 1] - counts[i] for i in range(len(counts) - 1)}
    assert len(diffs) == 1


def test_compile_respects_adjacency():
    # star graph: qubit 1 in the middle
    star = GraphSpec(3, ((1, 2), (1, 3)))
    seq = compile_coupling(PauliString("XXX"), 0.4, star)
    for g in seq.conjugations:
        if g.axis.weight == 2:
            a, b = g.axis.support
            assert (min(a, b), max(a, b)) in star.edges
    assert verify_sequence(seq, BathTestSpec.random(3, seed=44), (0.4,)).passed


# ---------------------------------------------------------------- verification


def test_verify_trivial_seed_sequence():
    seq = GateSequence((SeedCoupling(1),), PauliString("Y"), 0.3)
    report = verify_sequence(seq, BathTestSpec.random(3, seed=45), THETAS)
    assert report.passed and report.max_deviation < 1e-14


def test_verify_detects_corrupted_sequence():
    good = _known_three_qubit_chain()
    corrupted = GateSequence(good.gates[:-1], good.target, good.theta)
    report = verify_sequence(corrupted, BathTestSpec.random(3, seed=46), THETAS)
    assert not report.passed
    assert report.max_deviation > 0.1


def test_verify_is_bath_neutral():
    seq = compile_coupling(PauliString("XYZ"), 0.6, GraphSpec.path(3))
    baths = [BathTestSpec.random(3, seed=47), BathTestSpec.random(4, seed=48),
             BathTestSpec.lowering(4)]
    reports = [verify_sequence(seq, b, THETAS) for b in baths]
    assert all(r.passed for r in reports)
    assert max(r.max_deviation for r in reports) <= 1e-10


def test_verify_rejects_ms_sequences():
    with pytest.raises(ValueError):
        verify_sequence(ms_decompose(1, 2, 0.3), BathTestSpec.random(3), (0.3,))


def test_bath_test_spec_validation():
    with pytest.raises(ValueError):
        BathTestSpec(np.eye(1))
    low = BathTestSpec.lowering(3).operator
    assert np.array_equal(low, np.array([[0, 1, 0], [0, 0, np.sqrt(2)], [0, 0, 0]]))


# ---------------------------------------------------------------- MS lowering


def test_ms_identity_at_zero_angle():
    top, bottom = ms_system_action(ms_decompose(1, 2, 0.0))
    assert np.max(np.abs(top - np.eye(4))) < 1e-12
    assert np.max(np.abs(bottom)) < 1e-12


def test_ms_quarter_turn_entangles():
    top, _ = ms_system_action(ms_decompose(1, 2, np.pi / 4))
    psi = top @ np.array([1.0, 0, 0, 0], dtype=complex)
    expected = np.array([1.0, 0, 0, 1j]) / np.sqrt(2.0)
    assert np.max(np.abs(psi - expected)) < 1e-10


def test_ms_reproduces_xx_exponential():
    rng = np.random.default_rng(49)
    for _ in range(5):
        theta = rng.uniform(-np.pi, np.pi)
        top, bottom = ms_system_action(ms_decompose(1, 2, theta))
        target = matexp(1j * theta * PauliString("XX").dense())
        assert np.max(np.abs(top - target)) < 1e-10
        assert np.max(np.abs(bottom)) < 1e-10


def test_ms_sequence_is_unitary():
    U = realize_ms_sequence(ms_decompose(1, 2, 0.8))
    assert np.max(np.abs(U.conj().T @ U - np.eye(8))) < 1e-12


def test_ms_rejects_equal_qubits():
    with pytest.raises(ValueError):
        ms_decompose(2, 2, 0.1)


# ---------------------------------------------------------------- Trotter


def test_trotter_single_term_exact():
    bath = BathTestSpec.random(3, seed=50)
    terms = [PauliString("X")]
    U = trotter_step(terms, 0.2, bath)
    exact = matexp(-1j * 0.2 * coupling_generator(terms, bath))
    assert np.max(np.abs(U - exact)) < 1e-13


def test_trotter_commuting_terms_exact():
    bath = BathTestSpec.random(2, seed=51)
    terms = [PauliString("XI"), PauliString("IZ")]
    U = trotter_step(terms, 0.15, bath)
    exact = matexp(-1j * 0.15 * coupling_generator(terms, bath))
    assert np.max(np.abs(U - exact)) < 1e-12


def test_trotter_second_order_local_error():
    bath = BathTestSpec.random(3, seed=52)
    terms = [PauliString("X"), PauliString("Z")]
    H = coupling_generator(terms, bath)

    def err(dt):
        return np.linalg.norm(trotter_step(terms, dt, bath) - matexp(-1j * dt * H))

    ratio = err(0.02) / err(0.01)
    assert 3.5 <= ratio <= 4.5


def test_trotter_rejects_bad_dt():
    with pytest.raises(ValueError):
        trotter_step([PauliString("X")], 0.0, BathTestSpec.random(2))


# ---------------------------------------------------------------- serialization


def test_gate_sequence_json_roundtrip():
    seq = compile_coupling(PauliString("XYZ"), 0.6, GraphSpec.path(3))
    back = GateSequence.from_json_obj(seq.to_json_obj())
    assert back.gates == seq.gates
    assert back.target == seq.target and back.theta == seq.theta
    assert back.to_json_obj() == seq.to_json_obj()


def test_ms_sequence_json_roundtrip():
    seq = ms_decompose(2, 3, 0.25)
    back = GateSequence.from_json_obj(seq.to_json_obj())
    assert back.gates == seq.gates and back.qubits == seq.qubits


def test_render_text_one_gate_per_line():
    seq = compile_coupling(PauliString("XX"), 0.5, GraphSpec.path(2))
    lines = seq.render_text().strip().splitlines()
    assert len(lines) == 1 + len(seq.gates)  # header plus gates
    assert lines[1].startswith("seed")
    assert "conjugation" in lines[2]
