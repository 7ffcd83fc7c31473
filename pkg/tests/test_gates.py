import json
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from gatebind.errors import BadDim, BadFactor, BadSpec, NotUnitary
from gatebind.gates import (
    CNOT,
    I2,
    SWAP,
    SX,
    GateKind,
    GateMatrix,
    GateSpec,
    build_named,
    canonical_gate,
    dress,
    dump_gate,
    load_gate,
    parse_gate,
    random_local,
    random_su,
    save_gate,
    tensor_local,
)
from gatebind.invariants import makhlin_from_canonical, makhlin_from_gate

seeds = st.integers(min_value=0, max_value=2**32 - 1)
triples = st.tuples(*[st.floats(-2 * math.pi, 2 * math.pi)] * 3)

ALL_SPECS = [
    GateSpec(GateKind.IDENTITY),
    GateSpec(GateKind.SWAP),
    GateSpec(GateKind.CNOT),
    GateSpec(GateKind.DCNOT),
    GateSpec(GateKind.SQRT_SWAP),
    GateSpec(GateKind.INV_SQRT_SWAP),
    GateSpec(GateKind.B),
    GateSpec(GateKind.CONTROLLED_U, alpha=0.7),
    GateSpec(GateKind.SPE, alpha=0.4),
    GateSpec(GateKind.CANONICAL, c=(0.9, 0.4, 0.2)),
]


def basis(i):
    v = np.zeros(4)
    v[i] = 1
    return v


class TestCatalog:
    def test_cnot_permutation(self):
        U = build_named(GateSpec.parse("cnot")).matrix
        assert np.array_equal(U, np.eye(4)[[0, 1, 3, 2]])

    @pytest.mark.parametrize("a", [0, 1])
    @pytest.mark.parametrize("b", [0, 1])
    def test_dcnot_action(self, a, b):
        U = build_named(GateSpec(GateKind.DCNOT)).matrix
        out = U @ basis(2 * a + b)
        assert np.array_equal(out, basis(2 * b + (a ^ b)))

    def test_b_gate(self):
        B = build_named(GateSpec(GateKind.B))
        assert B == canonical_gate((math.pi / 2, math.pi / 4, 0))

    def test_sqrt_swap_squares_to_swap(self):
        for kind in (GateKind.SQRT_SWAP, GateKind.INV_SQRT_SWAP):
            R = build_named(GateSpec(kind)).matrix
            assert np.allclose(R @ R, SWAP)

    def test_sqrt_swap_inverse(self):
        R = build_named(GateSpec(GateKind.SQRT_SWAP)).matrix
        Ri = build_named(GateSpec(GateKind.INV_SQRT_SWAP)).matrix
        assert np.allclose(R @ Ri, np.eye(4))

    @pytest.mark.parametrize("spec", ALL_SPECS, ids=lambda s: s.kind.value)
    def test_unitary(self, spec):
        U = build_named(spec).matrix
        assert np.max(np.abs(U.conj().T @ U - np.eye(4))) <= 1e-9

    def test_parametric_families(self):
        a = 0.6
        assert build_named(GateSpec(GateKind.CONTROLLED_U, alpha=a)) == canonical_gate((a, 0, 0))
        assert build_named(GateSpec(GateKind.SPE, alpha=a)) == canonical_gate((math.pi / 2, a, 0))


class TestGateSpec:
    @pytest.mark.parametrize("kwargs", [
        dict(kind=GateKind.CNOT, alpha=0.3),
        dict(kind=GateKind.CONTROLLED_U),
        dict(kind=GateKind.SPE, alpha=float("nan")),
        dict(kind=GateKind.CANONICAL),
        dict(kind=GateKind.B, c=(1, 2, 3)),
        dict(kind=GateKind.FROM_FILE),
        dict(kind="cnot"),
    ])
    def test_malformed(self, kwargs):
        with pytest.raises(BadSpec):
            GateSpec(**kwargs)

    @pytest.mark.parametrize("text,kind,alpha", [
        ("cnot", GateKind.CNOT, None),
        ("CX", GateKind.CNOT, None),
        ("b", GateKind.B, None),
        ("cu:0.5", GateKind.CONTROLLED_U, 0.5),
        ("spe:1.25", GateKind.SPE, 1.25),
    ])
    def test_parse(self, text, kind, alpha):
        spec = GateSpec.parse(text)
        assert spec.kind is kind and spec.alpha == alpha

    @pytest.mark.parametrize("text", ["nope", "cu", "cu:x", "cnot:1", "canonical"])
    def test_parse_errors(self, text):
        with pytest.raises(BadSpec):
            GateSpec.parse(text)


class TestCanonicalGate:
    def test_origin(self):
        assert np.allclose(canonical_gate((0, 0, 0)).matrix, np.eye(4))

    def test_swap_point(self):
        A = canonical_gate((math.pi / 2,) * 3).matrix
        assert np.allclose(A, np.exp(1j * math.pi / 4) * SWAP, atol=1e-12)

    def test_cnot_point(self):
        g = makhlin_from_gate(canonical_gate((math.pi / 2, 0, 0)))
        assert np.allclose(tuple(g), (0, 0, 1), atol=1e-12)

    def test_cnot_catalog_equivalent(self):
        a = makhlin_from_gate(CNOT).as_array()
        b = makhlin_from_gate(canonical_gate((math.pi / 2, 0, 0))).as_array()
        assert np.max(np.abs(a - b)) <= 1e-8

    @given(triples, triples)
    def test_cartan_subgroup_abelian(self, c, d):
        A, B = canonical_gate(c).matrix, canonical_gate(d).matrix
        assert np.max(np.abs(A @ B - B @ A)) <= 1e-9

    @given(triples)
    def test_inverse_and_special(self, c):
        A = canonical_gate(c).matrix
        assert np.max(np.abs(A @ canonical_gate([-x for x in c]).matrix - np.eye(4))) <= 1e-9
        assert abs(np.linalg.det(A) - 1) <= 1e-8

    @given(triples)
    def test_makhlin_consistent(self, c):
        a = makhlin_from_gate(canonical_gate(c)).as_array()
        assert np.max(np.abs(a - makhlin_from_canonical(c).as_array())) <= 1e-9


class TestLocal:
    def test_identity(self):
        assert np.allclose(tensor_local([I2, I2]).matrix, np.eye(4))

    def test_ix_on_first_qubit(self):
        k = tensor_local([1j * SX, I2]).matrix
        for b in (0, 1):
            assert np.allclose(k @ basis(b), 1j * basis(2 + b))
            assert np.allclose(k @ basis(2 + b), 1j * basis(b))

    @pytest.mark.parametrize("factor", [SX, 2 * I2, np.eye(3)])
    def test_rejects_non_su2(self, factor):
        with pytest.raises(BadFactor):
            tensor_local([factor, I2])

    def test_random_local_det_and_reproducible(self):
        for seed in range(1000):
            k = random_local(2, seed)
            assert abs(np.linalg.det(k.matrix) - 1) <= 1e-8
        assert np.array_equal(random_local(2, 5).matrix, random_local(2, 5).matrix)

    def test_dress_dimension_mismatch(self):
        with pytest.raises(BadDim):
            dress(random_su(4, 0), random_local(3, 1), random_local(2, 2))


class TestRandomSU:
    @pytest.mark.parametrize("dim", [2, 4, 8])
    def test_unitary_special(self, dim):
        U = random_su(dim, 11).matrix
        assert np.max(np.abs(U.conj().T @ U - np.eye(dim))) <= 1e-10
        assert abs(np.linalg.det(U) - 1) <= 1e-8

    def test_deterministic(self):
        assert np.array_equal(random_su(4, 42).matrix, random_su(4, 42).matrix)
        assert not np.array_equal(random_su(4, 42).matrix, random_su(4, 43).matrix)

    def test_bad_dim(self):
        with pytest.raises(BadDim):
            random_su(6, 0)

    def test_haar_first_moment(self):
        # E|U_00|^2 = 1/dim under Haar measure
        rng = np.random.default_rng(3)
        vals = [abs(random_su(4, rng).matrix[0, 0]) ** 2 for _ in range(4000)]
        assert np.mean(vals) == pytest.approx(0.25, abs=0.01)


class TestGateMatrix:
    def test_phase_equality(self):
        U = random_su(4, 1)
        V = GateMatrix(2, np.exp(0.7j) * U.matrix)
        assert U == V
        assert U != random_su(4, 2)

    def test_rejects_non_unitary(self):
        with pytest.raises(NotUnitary):
            GateMatrix(2, np.ones((4, 4)))

    def test_rejects_shape(self):
        with pytest.raises(BadDim):
            GateMatrix(2, np.eye(2))

    def test_immutable(self):
        U = random_su(4, 1)
        with pytest.raises(ValueError):
            U.matrix[0, 0] = 0


class TestGateFile:
    def test_round_trip(self, tmp_path):
        U = random_su(4, 9)
        path = tmp_path / "g.json"
        save_gate(U, path)
        V = load_gate(path)
        assert np.max(np.abs(U.matrix - V.matrix)) <= 1e-15

    def test_format(self):
        obj = json.loads(dump_gate(build_named(GateSpec(GateKind.CNOT))))
        assert obj["n"] == 2
        assert np.array(obj["matrix"]).shape == (4, 4, 2)
        text = dump_gate(random_su(4, 2))
        mantissas = [t for t in text.replace("[", " ").replace("]", " ").replace(",", " ").split()
                     if "e" in t]
        assert all(len(m.split("e")[0].lstrip("-").replace(".", "")) >= 15 for m in mantissas)

    def test_three_qubit(self):
        U = random_su(8, 4)
        assert parse_gate(dump_gate(U)).n == 3

    @pytest.mark.parametrize("text", ["{", '{"n": 2}', '{"n": 2, "matrix": [[1, 0]]}'])
    def test_malformed(self, text):
        with pytest.raises(BadSpec):
            parse_gate(text)

    def test_from_file_spec(self, tmp_path):
        path = tmp_path / "c.json"
        save_gate(canonical_gate((1.1, 0.7, 0.3)), path)
        U = build_named(GateSpec(GateKind.FROM_FILE, path=path))
        assert U == canonical_gate((1.1, 0.7, 0.3))
