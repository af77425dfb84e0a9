import math

import numpy as np
import pytest

from models.entities import HermitianMatrix, SpectrumInterval
from models.entropies import (
    GeneralizedPerspectiveMap,
    GeneralizedRelative,
    NegatedMap,
    PerspectiveMap,
    RelativeAlphaBeta,
    RelativeOperator,
    Tsallis,
    TsallisAlphaBeta,
)
from models.errors import DimensionMismatch, NotStrictlyPositive, ParameterOutOfRange, SpecParseError
from models.functions import DeformedLog, Log, Power, PowerLog
from services.entropy import (
    check_cli_beta,
    evaluate_entropy,
    generalized_relative_entropy,
    identity_holds,
    left_multiplication,
    normalize_density,
    parse_entropy_spec,
    parse_joint_map,
    quantum_relative_entropy,
    relative_alpha_beta_entropy,
    relative_operator_entropy,
    right_multiplication,
    superoperator_identity_residual,
    superoperator_identity_sides,
    tsallis_alpha_beta_entropy,
    tsallis_entropy,
    vectorize,
    von_neumann_entropy,
)
from services.matfun import apply_spectral, make_rng, random_spd, spectral_norm
from services.perspective import generalized_perspective, perspective


def _close(x: HermitianMatrix, y: HermitianMatrix, rel: float) -> bool:
    scale = max(1.0, spectral_norm(x), spectral_norm(y))
    return float(np.max(np.abs(x.entries - y.entries))) <= rel * scale


def _pairs(count: int, dim: int, seed: int = 0, lo: float = 0.1, hi: float = 10.0):
    rng = make_rng(seed)
    spectrum = SpectrumInterval(lo=lo, hi=hi)
    return [(random_spd(dim, spectrum, rng), random_spd(dim, spectrum, rng)) for _ in range(count)]


# --- RELATIVE OPERATOR ENTROPY ---

class TestRelativeOperatorEntropy:
    def test_vanishes_on_the_diagonal(self, spd_pair):
        a, _ = spd_pair()
        assert _close(relative_operator_entropy(a, a), HermitianMatrix.zeros(3), 1e-10)

    def test_scalar_case(self):
        a, b = 2.0, 5.0
        result = relative_operator_entropy(a * HermitianMatrix.identity(2), b * HermitianMatrix.identity(2))
        assert result.entries == pytest.approx(a * math.log(b / a) * np.eye(2), abs=1e-12)

    def test_commuting_diagonal_pair(self):
        result = relative_operator_entropy(HermitianMatrix.diagonal([1.0, 2.0]), HermitianMatrix.diagonal([2.0, 2.0]))
        assert result.entries == pytest.approx(np.diag([math.log(2), 0.0]), abs=1e-12)

    def test_equals_perspective_of_log(self, spd_pair):
        a, b = spd_pair()
        assert relative_operator_entropy(a, b) == perspective(Log(), a, b)

    def test_requires_positive_b(self, spd_pair):
        a, _ = spd_pair(dim=2)
        with pytest.raises(NotStrictlyPositive) as exc:
            relative_operator_entropy(a, HermitianMatrix.diagonal([1.0, -1.0]))
        assert exc.value.name == "B"

    def test_rejects_mismatched_dims(self):
        with pytest.raises(DimensionMismatch):
            relative_operator_entropy(HermitianMatrix.identity(2), HermitianMatrix.identity(3))


# --- GENERALIZED RELATIVE ENTROPIES ---

class TestGeneralizedRelativeEntropy:
    def test_q_zero_is_relative_operator_entropy(self, spd_pair):
        a, b = spd_pair()
        assert _close(generalized_relative_entropy(0, a, b), relative_operator_entropy(a, b), 1e-12)

    def test_vanishes_on_the_diagonal(self, spd_pair):
        a, _ = spd_pair()
        assert _close(generalized_relative_entropy(0.5, a, a), HermitianMatrix.zeros(3), 1e-10)

    def test_commuting_pair(self):
        q, a, b = 0.3, [1.0, 3.0], [2.0, 0.5]
        result = generalized_relative_entropy(q, HermitianMatrix.diagonal(a), HermitianMatrix.diagonal(b))
        expected = [ai * (bi / ai) ** q * math.log(bi / ai) for ai, bi in zip(a, b)]
        assert result.entries == pytest.approx(np.diag(expected), abs=1e-12)

    def test_alpha_beta_with_unit_beta_is_sq(self, spd_pair):
        a, b = spd_pair()
        assert _close(relative_alpha_beta_entropy(0.4, 1, a, b), generalized_relative_entropy(0.4, a, b), 1e-10)

    def test_alpha_beta_reduces_to_s(self, spd_pair):
        a, b = spd_pair()
        assert _close(relative_alpha_beta_entropy(0, 1, a, b), relative_operator_entropy(a, b), 1e-10)

    def test_alpha_beta_with_zero_beta_ignores_a(self, spd_pair):
        a, b = spd_pair()
        assert _close(relative_alpha_beta_entropy(0.5, 0, a, b), apply_spectral(PowerLog(q=0.5), b), 1e-10)

    def test_alpha_beta_is_a_generalized_perspective(self, spd_pair):
        a, b = spd_pair()
        assert relative_alpha_beta_entropy(0.5, 0.5, a, b) == \
            generalized_perspective(PowerLog(q=0.5), Power(p=0.5), a, b)


# --- TSALLIS FAMILY ---

class TestTsallisEntropy:
    @pytest.mark.parametrize("lam", [-1, -0.5, 0.5, 1, 1.5, 2])
    def test_vanishes_on_the_diagonal(self, spd_pair, lam):
        a, _ = spd_pair()
        assert _close(tsallis_entropy(lam, a, a), HermitianMatrix.zeros(3), 1e-10)

    def test_lambda_one_is_difference(self, spd_pair):
        a, b = spd_pair()
        assert _close(tsallis_entropy(1, a, b), b - a, 1e-10)

    def test_matches_power_perspective(self, spd_pair):
        a, b = spd_pair()
        lam = 0.5
        via_power = (1 / lam) * (perspective(Power(p=lam), a, b) - a)
        assert _close(tsallis_entropy(lam, a, b), via_power, 1e-9)

    def test_small_lambda_approaches_s(self):
        for a, b in _pairs(20, 3, seed=11, lo=0.5, hi=2.0):
            s = relative_operator_entropy(a, b)
            t = tsallis_entropy(1e-5, a, b)
            assert spectral_norm(t - s) <= 1e-4

    @pytest.mark.parametrize("lam", [0, 2.5, -1.5])
    def test_rejects_lambda_outside_range(self, lam):
        with pytest.raises(ParameterOutOfRange):
            Tsallis(lam=lam)

    def test_alpha_beta_with_unit_beta_is_tsallis(self, spd_pair):
        a, b = spd_pair()
        assert _close(tsallis_alpha_beta_entropy(1.5, 1, a, b), tsallis_entropy(1.5, a, b), 1e-10)

    def test_alpha_beta_scalar_case(self):
        alpha, beta, a = 1.5, 0.5, 4.0
        result = tsallis_alpha_beta_entropy(alpha, beta, a * HermitianMatrix.identity(2), a * HermitianMatrix.identity(2))
        expected = a ** beta * ((a ** (1 - beta)) ** alpha - 1) / alpha
        assert result.entries == pytest.approx(expected * np.eye(2), rel=1e-12)

    def test_alpha_one_beta_zero_is_b_minus_identity(self, spd_pair):
        a, b = spd_pair()
        assert _close(tsallis_alpha_beta_entropy(1, 0, a, b), b - HermitianMatrix.identity(3), 1e-10)

    def test_alpha_beta_rejects_zero_alpha(self, spd_pair):
        a, b = spd_pair()
        with pytest.raises(ParameterOutOfRange):
            tsallis_alpha_beta_entropy(0, 0.5, a, b)


# --- FAMILY-WIDE PROPERTIES ---

FAMILIES_VANISHING_AT_ONE = [
    RelativeOperator(),
    GeneralizedRelative(q=0.5),
    RelativeAlphaBeta(alpha=0.5, beta=1),
    Tsallis(lam=0.5),
    TsallisAlphaBeta(alpha=1.5, beta=1),
]


@pytest.mark.parametrize("spec", FAMILIES_VANISHING_AT_ONE, ids=lambda s: s.label())
def test_family_vanishes_at_b_equals_a(spd_pair, spec):
    a, _ = spd_pair()
    assert _close(evaluate_entropy(spec, a, a), HermitianMatrix.zeros(3), 1e-10)


@pytest.mark.parametrize("spec", FAMILIES_VANISHING_AT_ONE, ids=lambda s: s.label())
@pytest.mark.parametrize("c", [0.5, 2.0])
def test_unit_beta_families_are_homogeneous(spd_pair, spec, c):
    a, b = spd_pair()
    assert _close(evaluate_entropy(spec, c * a, c * b), c * evaluate_entropy(spec, a, b), 1e-9)


def test_reduction_chain_over_random_pairs():
    for a, b in _pairs(25, 3, seed=3):
        s = relative_operator_entropy(a, b)
        assert _close(relative_alpha_beta_entropy(0, 1, a, b), s, 1e-10)
        assert _close(relative_alpha_beta_entropy(0.5, 1, a, b), generalized_relative_entropy(0.5, a, b), 1e-10)
        assert _close(tsallis_alpha_beta_entropy(0.5, 1, a, b), tsallis_entropy(0.5, a, b), 1e-10)


@pytest.mark.parametrize("spec,scalar", [
    (RelativeOperator(), lambda x, y: x * math.log(y / x)),
    (Tsallis(lam=-0.5), lambda x, y: x * ((y / x) ** -0.5 - 1) / -0.5),
    (TsallisAlphaBeta(alpha=2, beta=0.5), lambda x, y: x ** 0.5 * ((y / x ** 0.5) ** 2 - 1) / 2),
    (RelativeAlphaBeta(alpha=0.5, beta=2), lambda x, y: x ** 2 * (y / x ** 2) ** 0.5 * math.log(y / x ** 2)),
], ids=lambda s: s.label() if hasattr(s, "label") else None)
def test_commuting_pairs_match_scalar_formulas(spec, scalar):
    a, b = [0.5, 1.5, 3.0], [2.0, 0.7, 3.0]
    result = evaluate_entropy(spec, HermitianMatrix.diagonal(a), HermitianMatrix.diagonal(b))
    expected = HermitianMatrix.diagonal([scalar(x, y) for x, y in zip(a, b)])
    assert _close(result, expected, 1e-10)


# --- TRACE FORMS ---

def test_von_neumann_maximally_mixed():
    assert von_neumann_entropy(0.5 * HermitianMatrix.identity(2)) == pytest.approx(math.log(2), abs=1e-12)


def test_von_neumann_pure_scalar():
    assert von_neumann_entropy(HermitianMatrix.diagonal([1.0])) == 0.0


def test_von_neumann_diagonal():
    assert von_neumann_entropy(HermitianMatrix.diagonal([0.9, 0.1])) == pytest.approx(0.325083, abs=1e-6)


def test_quantum_relative_entropy_of_equal_states(spd_pair):
    a, _ = spd_pair()
    assert quantum_relative_entropy(a, a) == pytest.approx(0.0, abs=1e-10)


def test_quantum_relative_entropy_commuting_kl():
    value = quantum_relative_entropy(HermitianMatrix.diagonal([0.5, 0.5]), HermitianMatrix.diagonal([0.9, 0.1]))
    assert value == pytest.approx(0.510826, abs=1e-6)


def test_quantum_relative_entropy_is_minus_trace_of_s_for_commuting_pairs():
    rng = make_rng(17)
    for _ in range(200):
        rho = HermitianMatrix.diagonal(rng.uniform(0.05, 2.0, size=3))
        sigma = HermitianMatrix.diagonal(rng.uniform(0.05, 2.0, size=3))
        h = quantum_relative_entropy(rho, sigma)
        assert abs(h + relative_operator_entropy(rho, sigma).trace()) <= 1e-10 * max(1.0, abs(h))


def test_normalize_density():
    assert normalize_density(HermitianMatrix.diagonal([1.0, 3.0])).trace() == pytest.approx(1.0)
    with pytest.raises(ParameterOutOfRange):
        normalize_density(HermitianMatrix.diagonal([-1.0, 0.5]))


# --- SUPEROPERATOR FORM ---

def test_vectorization_stacks_columns():
    assert vectorize(np.array([[1.0, 2.0], [3.0, 4.0]])).tolist() == [1.0, 3.0, 2.0, 4.0]


def test_multiplication_superoperators(spd_pair):
    rho, sigma = spd_pair(dim=2)
    x = np.array([[1.0, 2.0], [2.0, -1.0]])
    assert left_multiplication(rho).entries @ vectorize(x) == pytest.approx(vectorize(rho.entries @ x))
    assert right_multiplication(sigma).entries @ vectorize(x) == pytest.approx(vectorize(x @ sigma.entries))


def test_superoperator_identity_equal_states(spd_pair):
    rho, _ = spd_pair(dim=2)
    assert superoperator_identity_residual(rho, rho) <= 1e-10


def test_superoperator_identity_commuting_states():
    rho = HermitianMatrix.diagonal([0.2, 0.3, 0.5])
    sigma = HermitianMatrix.diagonal([0.6, 0.3, 0.1])
    lhs, rhs = superoperator_identity_sides(rho, sigma)
    kl = sum(r * math.log(r / s) for r, s in ((0.2, 0.6), (0.3, 0.3), (0.5, 0.1)))
    assert rhs == pytest.approx(kl, abs=1e-12)
    assert abs(lhs - rhs) <= 1e-10


@pytest.mark.parametrize("dim", [2, 3])
def test_superoperator_identity_random_pairs(dim):
    for rho, sigma in _pairs(15, dim, seed=dim):
        lhs, rhs = superoperator_identity_sides(rho, sigma)
        assert identity_holds(lhs, rhs)
        assert abs(lhs - rhs) <= 1e-9 * max(1.0, abs(rhs))


def test_superoperator_matches_eigenbasis_double_sum():
    rho, sigma = _pairs(1, 3, seed=23)[0]
    r, u = np.linalg.eigh(rho.entries)
    s, v = np.linalg.eigh(sigma.entries)
    overlap = (u.T @ v) ** 2
    oracle = float(np.sum(overlap * r[:, None] * (np.log(r)[:, None] - np.log(s)[None, :])))
    _, rhs = superoperator_identity_sides(rho, sigma)
    assert rhs == pytest.approx(oracle, rel=1e-10, abs=1e-12)


def test_superoperator_rejects_large_dims():
    big = HermitianMatrix.identity(9)
    with pytest.raises(ParameterOutOfRange):
        superoperator_identity_sides(big, big)


# --- TEXT ENCODING ---

@pytest.mark.parametrize("text,expected", [
    ("S", RelativeOperator()),
    ("Sq:0.5", GeneralizedRelative(q=0.5)),
    ("Sab:0.5,1", RelativeAlphaBeta(alpha=0.5, beta=1)),
    ("T:-1", Tsallis(lam=-1)),
    ("Tab:1.5,0.5", TsallisAlphaBeta(alpha=1.5, beta=0.5)),
])
def test_parse_entropy_spec(text, expected):
    spec = parse_entropy_spec(text)
    assert spec == expected
    assert spec.label() == text


@pytest.mark.parametrize("text", ["", "X", "S:1", "Sq:", "Tab:1", "T:0"])
def test_parse_entropy_spec_rejects(text):
    with pytest.raises((SpecParseError, ParameterOutOfRange)):
        parse_entropy_spec(text)


def test_parse_joint_map_forms():
    assert parse_joint_map("persp(pow:2)") == PerspectiveMap(f=Power(p=2))
    assert parse_joint_map("gpersp(dlog:1.5,pow:0.5)") == GeneralizedPerspectiveMap(f=DeformedLog(lam=1.5), h=Power(p=0.5))
    assert parse_joint_map("neg(S)") == NegatedMap(inner=RelativeOperator())
    assert parse_joint_map("neg(S)").sign == -1.0


def test_cli_beta_bound():
    check_cli_beta(TsallisAlphaBeta(alpha=1, beta=2))
    check_cli_beta(RelativeOperator())
    with pytest.raises(ParameterOutOfRange):
        check_cli_beta(TsallisAlphaBeta(alpha=1, beta=2.5))
    with pytest.raises(ParameterOutOfRange):
        check_cli_beta(RelativeAlphaBeta(alpha=0.5, beta=-3))
