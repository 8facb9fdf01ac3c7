import json
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from qocsvm.featuremaps import FeatureMapCircuit, FeatureMapSpec, Gate, simulate
from qocsvm.kernels import (
    RDM_SCHEMA_VERSION,
    KernelMatrix,
    RdmSet,
    SchemaError,
    cross_gram,
    gram_matrix,
    load_rdms,
    qrbf_kernel,
    rbf_kernel,
    save_kernel_csv,
    save_rdms,
)
from qocsvm.quantum_state import PAULI_X, PAULI_Y, PAULI_Z, all_rdms

ZERO = np.diag([1.0, 0.0])
ONE = np.diag([0.0, 1.0])
PLUS = 0.5 * np.ones((2, 2))


def random_rdm_set(rng, n, q):
    rows = []
    for _ in range(n):
        v = rng.normal(size=(q, 2)) + 1j * rng.normal(size=(q, 2))
        v /= np.linalg.norm(v, axis=1, keepdims=True)
        rows.append(np.einsum("qi,qj->qij", v, v.conj()))
    return RdmSet(np.array(rows))


def loop_kernel(a, b, gamma, kind):
    if kind == "rbf":
        return math.exp(-gamma * sum((x - y) ** 2 for x, y in zip(a, b)))
    total = 0.0
    for ra, rb in zip(a, b):
        for i in range(2):
            for j in range(2):
                total += abs(ra[i][j] - rb[i][j]) ** 2
    return math.exp(-gamma * total)


def test_rbf_examples():
    a = np.array([0.3, -1.0, 2.0])
    assert rbf_kernel(a, a, 0.1) == 1.0
    b = a + np.array([1.0, 3.0, 0.0])  # squared distance 10
    assert math.isclose(rbf_kernel(a, b, 0.1), math.exp(-1.0), rel_tol=1e-15)
    assert math.isclose(math.exp(-1.0), 0.367879, abs_tol=1e-6)
    assert 0 < rbf_kernel(a, a + 30.0, 0.1) < 1e-100
    with pytest.raises(ValueError):
        rbf_kernel(a, b, 0.0)
    with pytest.raises(ValueError):
        rbf_kernel(a, b[:2], 0.1)


def test_qrbf_examples():
    assert qrbf_kernel([ZERO, PLUS], [ZERO, PLUS], 0.1) == 1.0
    assert math.isclose(qrbf_kernel([ZERO], [ONE], 0.1), math.exp(-0.2), rel_tol=1e-15)
    assert math.isclose(qrbf_kernel([ZERO], [ONE], 0.1), 0.818731, abs_tol=1e-6)
    assert math.isclose(qrbf_kernel([ZERO], [PLUS], 0.1), 0.904837, abs_tol=1e-6)
    with pytest.raises(ValueError):
        qrbf_kernel([ZERO], [ZERO, ZERO], 0.1)
    with pytest.raises(ValueError):
        qrbf_kernel([ZERO], [ZERO], -1)


def test_gram_examples():
    rng = np.random.default_rng(0)
    one = gram_matrix(random_rdm_set(rng, 1, 3), 0.1)
    assert np.array_equal(one.values, [[1.0]])
    s = random_rdm_set(rng, 6, 3)
    assert np.allclose(gram_matrix(s, 1e-12).values, 1.0, atol=1e-10)


@pytest.mark.parametrize("kind", ["rbf", "qrbf"])
def test_gram_and_cross_match_double_loop(kind):
    rng = np.random.default_rng(1)
    if kind == "rbf":
        train, test = rng.normal(size=(5, 4)), rng.normal(size=(3, 4))
        rows_tr, rows_te = train.tolist(), test.tolist()
    else:
        train, test = random_rdm_set(rng, 5, 3), random_rdm_set(rng, 3, 3)
        rows_tr, rows_te = train.rdms.tolist(), test.rdms.tolist()
    k = gram_matrix(train, 0.3, kind).values
    c = cross_gram(train, test, 0.3, kind)
    for i in range(5):
        for j in range(5):
            assert abs(k[i, j] - loop_kernel(rows_tr[i], rows_tr[j], 0.3, kind)) <= 1e-14
    for i in range(3):
        for j in range(5):
            assert abs(c[i, j] - loop_kernel(rows_te[i], rows_tr[j], 0.3, kind)) <= 1e-14


def test_cross_gram_examples():
    rng = np.random.default_rng(2)
    s = random_rdm_set(rng, 6, 2)
    assert np.allclose(cross_gram(s, s, 0.2), gram_matrix(s, 0.2).values, atol=1e-15)
    row = cross_gram(s, s.subset([4]), 0.2)
    assert row.shape == (1, 6) and row[0, 4] == 1.0
    with pytest.raises(ValueError):
        cross_gram(s, random_rdm_set(rng, 2, 3), 0.2)


@given(seed=st.integers(0, 2**32 - 1), n=st.integers(2, 12), q=st.integers(1, 5),
       gamma=st.floats(1e-4, 10), noisy=st.booleans())
def test_gram_invariants(seed, n, q, gamma, noisy):
    rng = np.random.default_rng(seed)
    s = random_rdm_set(rng, n, q)
    if noisy:  # estimated RDMs are not PSD but stay Euclidean
        s = RdmSet(s.rdms + 0.3 * (lambda m: m + np.conj(np.swapaxes(m, -1, -2)))(
            rng.normal(size=s.rdms.shape) + 1j * rng.normal(size=s.rdms.shape)))
    k = gram_matrix(s, gamma).values
    assert np.array_equal(k, k.T)
    assert np.all(np.diag(k) == 1.0)
    assert np.all((k > 0) | (k == 0)) and np.all(k <= 1.0)
    assert np.linalg.eigvalsh(k).min() >= -1e-8


@given(seed=st.integers(0, 2**32 - 1), g1=st.floats(1e-3, 5), g2=st.floats(1e-3, 5))
def test_monotone_in_gamma(seed, g1, g2):
    rng = np.random.default_rng(seed)
    a, b = random_rdm_set(rng, 2, 3).rdms
    if abs(g1 - g2) < 1e-6 or np.allclose(a, b):
        return
    lo, hi = sorted((g1, g2))
    assert qrbf_kernel(a, b, hi) < qrbf_kernel(a, b, lo)


def product_circuit(angles):
    n = len(angles) // 2
    gates = []
    for k in range(n):
        gates += [Gate("RX", (k,), (angles[2 * k],)), Gate("RZ", (k,), (angles[2 * k + 1],))]
    return FeatureMapCircuit(FeatureMapSpec("RXX", n), tuple(gates))


def test_product_map_matches_bloch_rbf():
    rng = np.random.default_rng(4)
    xs = rng.uniform(-math.pi, math.pi, size=(8, 6))
    rdms = RdmSet(np.array([all_rdms(simulate(product_circuit(x))) for x in xs]))
    bloch = []
    for x in xs:
        vec = []
        for k in range(3):
            th, ph = x[2 * k], x[2 * k + 1]
            # RZ(ph) RX(th)|0>: polar angle th, azimuth ph - pi/2
            r = (math.sin(th) * math.cos(ph - math.pi / 2), math.sin(th) * math.sin(ph - math.pi / 2), math.cos(th))
            vec += [c / math.sqrt(2) for c in r]  # ||rho_a - rho_b||_F^2 = |r_a - r_b|^2 / 2
        bloch.append(vec)
    for k in range(3):
        r = [np.real(np.trace(rdms.rdms[0, k] @ p)) for p in (PAULI_X, PAULI_Y, PAULI_Z)]
        assert np.allclose(np.array(r) / math.sqrt(2), bloch[0][3 * k : 3 * k + 3], atol=1e-12)
    assert np.allclose(gram_matrix(rdms, 0.4).values, gram_matrix(np.array(bloch), 0.4, "rbf").values, atol=1e-12)


@pytest.mark.parametrize("suffix", [".json", ".npz"])
def test_rdm_round_trip(tmp_path, suffix):
    rng = np.random.default_rng(5)
    s = RdmSet(random_rdm_set(rng, 500, 10).rdms, {"mode": "estimated", "shots": 200, "seed": 7})
    path = tmp_path / f"cache{suffix}"
    save_rdms(s, path)
    back = load_rdms(path)
    assert np.array_equal(back.rdms, s.rdms)
    assert back.provenance == s.provenance
    k_direct = gram_matrix(s, 0.37).values
    assert np.max(np.abs(gram_matrix(back, 0.37).values - k_direct)) <= 1e-14


def test_corrupted_header(tmp_path):
    s = random_rdm_set(np.random.default_rng(6), 3, 2)
    path = tmp_path / "c.json"
    save_rdms(s, path)
    doc = json.loads(path.read_text())
    doc["schema_version"] = 99
    path.write_text(json.dumps(doc))
    with pytest.raises(SchemaError, match=f"version {RDM_SCHEMA_VERSION}"):
        load_rdms(path)
    path.write_text("{not json")
    with pytest.raises(SchemaError):
        load_rdms(path)


def test_rdmset_shape_check():
    with pytest.raises(ValueError):
        RdmSet(np.zeros((3, 2, 3, 3)))


def test_kernel_csv(tmp_path):
    k = gram_matrix(np.eye(3), 0.5, "rbf")
    save_kernel_csv(k, tmp_path / "k.csv")
    back = np.loadtxt(tmp_path / "k.csv", delimiter=",")
    assert np.array_equal(back, k.values)
    assert isinstance(k, KernelMatrix) and k.subset([0, 2]).values.shape == (2, 2)
