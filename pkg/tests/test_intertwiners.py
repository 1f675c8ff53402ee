"""Clebsch-Gordan isometries, the dual block algebra, and the Haar weight."""

from __future__ import annotations

import json
import math

import numpy as np
import pytest

from cqg.errors import CGUnavailableError, ModelConsistencyError, ModelSchemaError, TruncationError
from cqg.intertwiners import (
    C00Element,
    cg_intertwining_residual,
    cg_set,
    cg_supplement_document,
    delta_hat,
    haar_weight,
    verify_cg_unitarity,
    verify_coassociativity,
    verify_modular,
)
from cqg.models import resolve_builtin
from cqg.rep_data import load_model, model_to_document

from . import oracles
from .conftest import TIGHT


class TestCgSet:
    def test_targets_and_order(self, suq2_half):
        tensors = cg_set(suq2_half, "1", "2")
        assert [(t.alpha, t.copy_index) for t in tensors] == [("1", 1), ("3", 1)]
        for t in tensors:
            assert t.shape == (2, 3, suq2_half.dim(t.alpha))

    def test_s3_regular_pair(self, s3_dual):
        tensors = cg_set(s3_dual, "std", "std")
        assert [(t.alpha, t.copy_index) for t in tensors] == [
            ("triv", 1),
            ("sgn", 1),
            ("std", 1),
        ]

    def test_absent_pair_is_truncation(self, suq2_half):
        with pytest.raises(TruncationError):
            cg_set(suq2_half, "8", "2")

    def test_model_without_cg_data(self, suq2_half):
        stripped = load_model(model_to_document(suq2_half))
        with pytest.raises(CGUnavailableError):
            cg_set(stripped, "1", "1")


def test_unitarity_across_all_ingested_pairs(suq2_half, suq2_eight_tenths, s3_dual, cyclic5_dual):
    for m in (suq2_half, suq2_eight_tenths, s3_dual, cyclic5_dual):
        for beta, gamma in m.fusion.pairs():
            result = verify_cg_unitarity(cg_set(m, beta, gamma), TIGHT)
            assert result["pass"], (m.name, beta, gamma, result["max_residual"])


def test_invariant_vector_of_the_fundamental_pair(suq2_half):
    q = 0.5
    (inv,) = [t for t in cg_set(suq2_half, "1", "1") if t.alpha == "0"]
    norm = math.sqrt(1.0 + q * q)
    assert inv.coefficient(0, 0, 1) == pytest.approx(1.0 / norm)
    assert inv.coefficient(0, 1, 0) == pytest.approx(-q / norm)
    assert inv.coefficient(0, 0, 0) == 0.0
    assert inv.coefficient(0, 1, 1) == 0.0


def test_intertwining_residuals_vanish(suq2_half, s3_dual):
    for m, pair in ((suq2_half, ("2", "1")), (s3_dual, ("std", "sgn"))):
        for t in cg_set(m, *pair):
            assert cg_intertwining_residual(m, t) <= 1e-12


class TestC00Element:
    def test_matrix_unit_products(self, s3_dual):
        e01 = C00Element.matrix_unit(s3_dual, "std", 0, 1)
        e10 = C00Element.matrix_unit(s3_dual, "std", 1, 0)
        e00 = C00Element.matrix_unit(s3_dual, "std", 0, 0)
        assert (e01 @ e10 - e00).is_zero()
        assert (e01 @ e01).is_zero()

    def test_cross_label_product_is_zero(self, s3_dual):
        a = C00Element.matrix_unit(s3_dual, "triv", 0, 0)
        b = C00Element.matrix_unit(s3_dual, "std", 0, 0)
        assert (a @ b).is_zero()
        assert (a + b).support == ("std", "triv")

    def test_adjoint_and_scalars(self, s3_dual):
        e01 = C00Element.matrix_unit(s3_dual, "std", 0, 1)
        e10 = C00Element.matrix_unit(s3_dual, "std", 1, 0)
        assert (e01.adjoint() - e10).is_zero()
        assert ((2j * e01) - (e01 * 2j)).is_zero()
        assert (-e01 + e01).is_zero()
        assert e01.max_abs() == 1.0

    def test_out_of_range_unit(self, s3_dual):
        from cqg.errors import PreconditionError

        with pytest.raises(PreconditionError):
            C00Element.matrix_unit(s3_dual, "std", 0, 2)


class TestHaarWeight:
    def test_matches_closed_form(self, suq2_half):
        for label in ("0", "1", "2"):
            spectrum = tuple(suq2_half.rho(label))
            n = suq2_half.dim(label)
            for a in range(n):
                for a2 in range(n):
                    x = C00Element.matrix_unit(suq2_half, label, a, a2)
                    assert haar_weight(suq2_half, x) == pytest.approx(
                        oracles.haar_on_matrix_unit(spectrum, a, a2)
                    )

    def test_pinned_value(self, suq2_half):
        x = C00Element.matrix_unit(suq2_half, "1", 0, 0)
        assert haar_weight(suq2_half, x) == pytest.approx(5.0)

    def test_linearity(self, s3_dual):
        a = C00Element.matrix_unit(s3_dual, "std", 0, 0)
        b = C00Element.matrix_unit(s3_dual, "sgn", 0, 0)
        combined = haar_weight(s3_dual, 2.0 * a + 3.0j * b)
        assert combined == pytest.approx(2.0 * haar_weight(s3_dual, a) + 3.0j * haar_weight(s3_dual, b))


def test_delta_hat_against_quadruple_loop(suq2_half, s3_dual):
    cases = [
        (suq2_half, "1", ("1", "2"), (0, 0)),
        (suq2_half, "1", ("1", "2"), (0, 1)),
        (suq2_half, "2", ("1", "1"), (1, 1)),
        (s3_dual, "std", ("std", "std"), (0, 1)),
        (s3_dual, "triv", ("sgn", "sgn"), (0, 0)),
    ]
    for m, alpha, pair, (a, a2) in cases:
        block = delta_hat(m, alpha, a, a2, [pair])[pair]
        reference = oracles.delta_hat_reference(cg_set(m, *pair), alpha, a, a2)
        if not reference:
            assert np.max(np.abs(block)) == 0.0
        else:
            assert np.max(np.abs(block - reference[pair])) <= 1e-12


def test_delta_hat_index_validation(suq2_half):
    from cqg.errors import PreconditionError

    with pytest.raises(PreconditionError):
        delta_hat(suq2_half, "1", 0, 2, [("1", "1")])


class TestModularIdentities:
    def test_s3_full_support_exact(self, s3_dual):
        support = list(s3_dual.fusion.pairs())
        for alpha in s3_dual.labels:
            result = verify_modular(s3_dual, alpha, support, TIGHT)
            assert result["pass"], result
            assert not result["truncated"]
            for side in ("id_tensor_h", "h_tensor_id"):
                assert all(entry["complete"] for entry in result[side])

    def test_suq2_complete_blocks(self, suq2_half):
        support = list(suq2_half.fusion.pairs())
        for alpha in ("0", "1", "2"):
            result = verify_modular(suq2_half, alpha, support, TIGHT)
            assert result["truncated"]  # edge blocks cannot be certified
            complete = [
                entry
                for side in ("id_tensor_h", "h_tensor_id")
                for entry in result[side]
                if entry["complete"]
            ]
            assert complete, "no complete block found at level 8"
            assert all(entry["residual"] <= 1e-9 for entry in complete)

    def test_incomplete_blocks_carry_missing_labels(self, suq2_half):
        support = [("1", "1")]  # far from closed under the required sums
        result = verify_modular(suq2_half, "2", support, TIGHT)
        incomplete = [
            entry
            for side in ("id_tensor_h", "h_tensor_id")
            for entry in result[side]
            if not entry["complete"]
        ]
        assert incomplete
        assert result["truncated"]


class TestCoassociativity:
    def test_s3_all_triples(self, s3_dual):
        support = list(s3_dual.fusion.pairs())
        for alpha in s3_dual.labels:
            result = verify_coassociativity(s3_dual, alpha, support, TIGHT)
            assert result["pass"]
            assert result["skipped"] == []
            assert result["max_residual"] <= 1e-12

    def test_suq2_complete_triples(self, suq2_half):
        support = list(suq2_half.fusion.pairs())
        result = verify_coassociativity(suq2_half, "1", support, TIGHT)
        assert result["triples"], "no certifiable triple at level 8"
        assert result["max_residual"] <= 1e-9
        for skip in result["skipped"]:
            assert skip["reason"]


class TestSupplementRoundTrip:
    def _small_model(self):
        return resolve_builtin("su_q_2", q=0.5, max_level=3)

    def test_round_trip_preserves_cg(self):
        m = self._small_model()
        doc = model_to_document(m)
        doc["cg"] = cg_supplement_document(m, m.fusion.pairs())
        reloaded = load_model(json.loads(json.dumps(doc)))
        for beta, gamma in reloaded.fusion.pairs():
            result = verify_cg_unitarity(cg_set(reloaded, beta, gamma), TIGHT)
            assert result["pass"]

    def test_corrupted_coefficient_rejected(self):
        m = self._small_model()
        doc = model_to_document(m)
        doc["cg"] = cg_supplement_document(m, m.fusion.pairs())
        doc["cg"][0]["coeffs"][0][3] += 0.1
        reloaded = load_model(doc)
        beta, gamma = doc["cg"][0]["beta"], doc["cg"][0]["gamma"]
        with pytest.raises(ModelConsistencyError):
            cg_set(reloaded, beta, gamma)

    @pytest.mark.parametrize(
        "mutate",
        [
            lambda cg: cg[0].pop("i"),
            lambda cg: cg[0].update(coeffs="nope"),
            lambda cg: cg[0]["coeffs"].append([0, 0, 0]),
            lambda cg: cg.append("nonsense"),
        ],
    )
    def test_malformed_supplement_rejected(self, mutate):
        m = self._small_model()
        doc = model_to_document(m)
        doc["cg"] = cg_supplement_document(m, m.fusion.pairs())
        mutate(doc["cg"])
        with pytest.raises(ModelSchemaError):
            load_model(doc)

    def test_out_of_range_index_rejected(self):
        m = self._small_model()
        doc = model_to_document(m)
        doc["cg"] = cg_supplement_document(m, [("1", "1")])
        doc["cg"][0]["coeffs"][0][1] = 7
        reloaded = load_model(doc)
        with pytest.raises(ModelSchemaError):
            cg_set(reloaded, "1", "1")
