"""Built-in model constructors and their certification."""

from __future__ import annotations

import math

import pytest

from cqg.errors import ModelSchemaError, PreconditionError
from cqg.models import (
    BUILTIN_NAMES,
    builtin_finite_group_dual,
    builtin_free_orthogonal_fund,
    builtin_su_q_2,
    resolve_builtin,
    rho_defining_property_oracle,
)
from cqg.rep_data import RhoSpectrum, normalize_rho, validate_model

from . import oracles
from .conftest import TIGHT


class TestDefiningPropertyOracle:
    def test_balanced_accepted(self):
        assert rho_defining_property_oracle(RhoSpectrum((2.0, 0.5)))
        assert rho_defining_property_oracle(RhoSpectrum((1.0, 1.0, 1.0)))

    def test_unbalanced_rejected(self):
        assert not rho_defining_property_oracle(RhoSpectrum((2.0, 1.0)))

    def test_normalize_restores(self):
        assert rho_defining_property_oracle(normalize_rho([3.0, 1.0]))


class TestSuQ2:
    def test_labels_and_dims(self, suq2_half):
        assert suq2_half.labels == tuple(str(n) for n in range(9))
        for n, label in enumerate(suq2_half.labels):
            assert suq2_half.dim(label) == n + 1
            assert suq2_half.conjugate(label) == label

    @pytest.mark.parametrize("q", [0.5, 0.8, 1.0, 2.0])
    def test_spectra_match_oracle(self, q):
        m = builtin_su_q_2(q, 5)
        for n in range(6):
            expected = sorted(oracles.suq2_spectrum(n, q), reverse=True)
            assert tuple(m.rho(str(n))) == pytest.approx(tuple(expected), rel=1e-12)

    def test_quantum_dims_are_q_integers(self, suq2_half):
        for n, label in enumerate(suq2_half.labels):
            assert suq2_half.rho(label).trace() == pytest.approx(
                oracles.q_int(n + 1, 0.5), rel=1e-12
            )

    def test_fusion_support_is_triangle(self, suq2_half):
        pairs = set(suq2_half.fusion.pairs())
        for left in range(9):
            for right in range(9):
                expected = left + right <= 8
                assert ((str(left), str(right)) in pairs) == expected

    def test_truncation_marked(self, suq2_half):
        assert suq2_half.is_truncated
        assert suq2_half.parameters["q"] == 0.5
        assert suq2_half.parameters["max_level"] == 8.0
        assert suq2_half.name == "su_q_2(q=0.5,max_level=8)"

    def test_classical_point_is_kac(self):
        m = builtin_su_q_2(1.0, 4)
        for label in m.labels:
            assert all(v == 1.0 for v in m.rho(label))

    def test_preconditions(self):
        with pytest.raises(PreconditionError):
            builtin_su_q_2(0.0, 4)
        with pytest.raises(PreconditionError):
            builtin_su_q_2(-1.0, 4)
        with pytest.raises(PreconditionError):
            builtin_su_q_2(0.5, -1)


class TestFiniteGroupDuals:
    def test_s3_shape(self, s3_dual):
        assert s3_dual.labels == ("triv", "sgn", "std")
        assert [s3_dual.dim(label) for label in s3_dual.labels] == [1, 1, 2]
        assert all(s3_dual.conjugate(label) == label for label in s3_dual.labels)
        assert not s3_dual.is_truncated

    def test_cyclic_conjugation(self, cyclic5_dual):
        assert len(cyclic5_dual.labels) == 5
        for k, label in enumerate(cyclic5_dual.labels):
            partner = cyclic5_dual.labels[(5 - k) % 5]
            assert cyclic5_dual.conjugate(label) == partner

    def test_cyclic_fusion_is_addition(self, cyclic5_dual):
        labels = cyclic5_dual.labels
        for a in range(5):
            for b in range(5):
                components = cyclic5_dual.fusion.components(labels[a], labels[b])
                assert components == {labels[(a + b) % 5]: 1}

    def test_name_variants(self):
        for spec in ("cyclic5", "cyclic 5", "cyclic:5", "cyclic_5"):
            m = builtin_finite_group_dual(spec)
            assert len(m.labels) == 5

    def test_unknown_group_rejected(self):
        with pytest.raises(PreconditionError):
            builtin_finite_group_dual("a5")


class TestFreeOrthogonal:
    def test_spectra(self, free_orth):
        assert free_orth.labels == ("triv", "f", "fbar")
        forward = tuple(free_orth.rho("f"))
        assert forward[0] == pytest.approx(math.sqrt(6.0), rel=1e-12)
        assert forward[1] == forward[2] == pytest.approx(math.sqrt(0.375), rel=1e-12)
        backward = tuple(free_orth.rho("fbar"))
        assert backward[0] == pytest.approx(math.sqrt(8.0 / 3.0), rel=1e-12)

    def test_conjugation_pairing(self, free_orth):
        assert free_orth.conjugate("f") == "fbar"
        assert free_orth.conjugate("fbar") == "f"

    def test_only_trivial_pairs_ingested(self, free_orth):
        pairs = set(free_orth.fusion.pairs())
        assert ("f", "fbar") not in pairs
        assert ("triv", "f") in pairs
        assert free_orth.is_truncated

    def test_parameter_validation(self):
        with pytest.raises(PreconditionError):
            builtin_free_orthogonal_fund([])
        with pytest.raises(PreconditionError):
            builtin_free_orthogonal_fund([1.0, -2.0])
        with pytest.raises(PreconditionError):
            builtin_free_orthogonal_fund([0.0, 0.0])


class TestResolveBuiltin:
    def test_known_names(self):
        assert resolve_builtin("su_q_2", q=0.6, max_level=3).parameters["q"] == 0.6
        assert resolve_builtin("s3").labels == ("triv", "sgn", "std")
        assert len(resolve_builtin("cyclic7").labels) == 7
        assert resolve_builtin("free_orthogonal").labels == ("triv", "f", "fbar")

    def test_unknown_name(self):
        with pytest.raises(PreconditionError):
            resolve_builtin("nonsense")

    def test_builtin_names_constant(self):
        assert "su_q_2" in BUILTIN_NAMES
        assert any("cyclic" in name for name in BUILTIN_NAMES)


def test_every_builtin_validates_cleanly(all_builtins):
    for m in all_builtins:
        report = validate_model(m)
        assert report.ok, (m.name, [issue.message for issue in report.issues])
