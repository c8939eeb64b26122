import numpy as np
import pytest
from sklearn.base import clone

import oracles
from netselect.config import parse_config
from netselect.exceptions import ConsistencyGateFailure, DimensionMismatch, MissingNetwork
from netselect.selector import (
    DIRECTIONS,
    CriteriaHierarchy,
    HistoryState,
    Mode,
    NetworkSelector,
    NetworkSnapshot,
    TrafficClass,
    build_decision_matrix,
    compose_weights,
    select,
    snapshots_from_array,
    update_history,
)
from netselect.simulator import DEFAULT_RANGES, sample_snapshot, trial_stream

UNIFORM3 = np.full((3, 3), 0.5)
UNIFORM4 = np.full((4, 4), 0.5)
QOS_HEAVY = [[0.5, 0.65, 0.65], [0.35, 0.5, 0.5], [0.35, 0.5, 0.5]]

SNAPSHOTS = [
    NetworkSnapshot("UMTS", 60, 70, 1.2, 30, 6, 45),
    NetworkSnapshot("WLAN", 10, 50, 8.0, 120, 14, 50),
    NetworkSnapshot("WIMAX", 40, 60, 25, 75, 5, 40),
]
NETWORKS = [s.network for s in SNAPSHOTS]
BENEFIT = [DIRECTIONS[c].value == "benefit" for c in Mode.TOPSIS2.criteria]


@pytest.fixture(scope="module")
def cfg():
    return parse_config()


class TestCompose:
    def test_uniform_topsis1(self):
        w = compose_weights(CriteriaHierarchy(UNIFORM3, UNIFORM4, Mode.TOPSIS1))
        assert list(w) == ["CB", "S", "AB", "D", "J", "L"]
        assert w["CB"] == pytest.approx(1 / 3) and w["S"] == pytest.approx(1 / 3)
        for sub in ("AB", "D", "J", "L"):
            assert w[sub] == pytest.approx(1 / 12)

    def test_uniform_topsis2(self):
        w = compose_weights(CriteriaHierarchy(UNIFORM4, UNIFORM4, Mode.TOPSIS2))
        assert list(w)[-1] == "H"
        np.testing.assert_allclose(list(w.values()), [0.25, 0.25] + [1 / 16] * 4 + [0.25])

    def test_sub_criteria_scale_with_qos(self):
        w = compose_weights(CriteriaHierarchy(QOS_HEAVY, UNIFORM4, Mode.TOPSIS1))
        np.testing.assert_allclose([w["CB"], w["S"]], [0.3, 0.3])
        np.testing.assert_allclose([w[s] for s in ("AB", "D", "J", "L")], [0.1] * 4)

    @pytest.mark.parametrize("tc", list(TrafficClass))
    @pytest.mark.parametrize("mode", list(Mode))
    def test_default_weights_sum_to_one(self, cfg, tc, mode):
        w = compose_weights(cfg.classes[tc].hierarchy(mode))
        assert sum(w.values()) == pytest.approx(1.0, abs=1e-12)
        assert all(v > 0 for v in w.values())

    def test_default_conversational_matches_oracle(self, cfg):
        hc = cfg.classes[TrafficClass.CONVERSATIONAL]
        w1 = oracles.row_sum_weights(hc.level1_matrix(Mode.TOPSIS2).tolist())
        w2 = oracles.row_sum_weights(np.asarray(hc.level2).tolist())
        expected = [w1[2], w1[1]] + [w1[0] * x for x in w2] + [w1[3]]
        got = compose_weights(hc.hierarchy(Mode.TOPSIS2))
        np.testing.assert_allclose(list(got.values()), expected, rtol=0, atol=1e-9)

    def test_history_weight_override(self):
        h = CriteriaHierarchy(UNIFORM4, UNIFORM4, Mode.TOPSIS2, history_weight=0.4)
        w = compose_weights(h)
        assert w["H"] == pytest.approx(0.4)
        assert w["CB"] == pytest.approx(0.2) and w["S"] == pytest.approx(0.2)

    def test_inconsistent_matrix_fails_gate(self):
        bad = [[0.5, 0.75, 0.65], [0.25, 0.5, 0.55], [0.35, 0.45, 0.5]]
        with pytest.raises(ConsistencyGateFailure, match="level1"):
            compose_weights(CriteriaHierarchy(bad, UNIFORM4, Mode.TOPSIS1))

    def test_wrong_level1_size(self):
        with pytest.raises(DimensionMismatch):
            CriteriaHierarchy(UNIFORM3, UNIFORM4, Mode.TOPSIS2)

    def test_history_weight_range(self):
        with pytest.raises(ValueError):
            CriteriaHierarchy(UNIFORM4, UNIFORM4, Mode.TOPSIS2, history_weight=1.5)


class TestDecisionMatrix:
    def test_topsis1_shape(self):
        d = build_decision_matrix(SNAPSHOTS, None, CriteriaHierarchy(UNIFORM3, UNIFORM4, Mode.TOPSIS1))
        assert d.entries.shape == (3, 6)
        np.testing.assert_array_equal(d.entries[1], SNAPSHOTS[1].values())

    def test_topsis2_initial_history(self):
        d = build_decision_matrix(SNAPSHOTS, None, CriteriaHierarchy(UNIFORM4, UNIFORM4))
        assert d.entries.shape == (3, 7)
        np.testing.assert_array_equal(d.entries[:, -1], [1.0, 1.0, 1.0])

    def test_history_column_copies_state(self):
        hist = HistoryState({"UMTS": 0.2, "WLAN": 0.7, "WIMAX": 0.4})
        d = build_decision_matrix(SNAPSHOTS, hist, CriteriaHierarchy(UNIFORM4, UNIFORM4))
        np.testing.assert_array_equal(d.entries[:, -1], [0.2, 0.7, 0.4])

    def test_history_must_match_networks(self):
        hist = HistoryState({"UMTS": 0.2, "WLAN": 0.7})
        with pytest.raises(MissingNetwork):
            build_decision_matrix(SNAPSHOTS, hist, CriteriaHierarchy(UNIFORM4, UNIFORM4))

    def test_needs_two_networks(self):
        with pytest.raises(ValueError, match="two"):
            build_decision_matrix(SNAPSHOTS[:1], None, CriteriaHierarchy(UNIFORM4, UNIFORM4))

    def test_duplicate_networks(self):
        with pytest.raises(ValueError, match="duplicate"):
            build_decision_matrix([SNAPSHOTS[0], SNAPSHOTS[0]], None, CriteriaHierarchy(UNIFORM3, UNIFORM4, "topsis1"))

    def test_negative_attribute(self):
        with pytest.raises(ValueError):
            NetworkSnapshot("X", -1, 0, 0, 0, 0, 0)


class TestSelect:
    def test_dominant_network_wins(self):
        snaps = [NetworkSnapshot("A", 10, 90, 50, 10, 1, 10), NetworkSnapshot("B", 50, 40, 5, 90, 9, 70)]
        decision = select(snaps, None, CriteriaHierarchy(UNIFORM4, UNIFORM4), current="B")
        assert decision.chosen == "A" and decision.handoff
        assert decision.scores["A"] == 1.0

    def test_identical_networks_keep_current(self):
        snaps = [NetworkSnapshot(n, 10, 50, 5, 100, 10, 50) for n in ("UMTS", "WLAN", "WIMAX")]
        decision = select(snaps, None, CriteriaHierarchy(UNIFORM4, UNIFORM4), current="WLAN")
        assert decision.chosen == "WLAN" and not decision.handoff

    def test_identical_networks_no_current_pick_first(self):
        snaps = [NetworkSnapshot(n, 10, 50, 5, 100, 10, 50) for n in ("UMTS", "WLAN")]
        assert select(snaps, None, CriteriaHierarchy(UNIFORM4, UNIFORM4)).chosen == "UMTS"

    def test_history_breaks_tie(self):
        snaps = [NetworkSnapshot(n, 10, 50, 5, 100, 10, 50) for n in ("UMTS", "WLAN")]
        hist = HistoryState({"UMTS": 0.3, "WLAN": 0.6})
        assert select(snaps, hist, CriteriaHierarchy(UNIFORM4, UNIFORM4), current="UMTS").chosen == "WLAN"

    def test_topsis1_ignores_history(self):
        h = CriteriaHierarchy(UNIFORM3, UNIFORM4, Mode.TOPSIS1)
        a = select(SNAPSHOTS, HistoryState({"UMTS": 0.0, "WLAN": 1.0, "WIMAX": 0.0}), h)
        b = select(SNAPSHOTS, HistoryState({"UMTS": 1.0, "WLAN": 0.0, "WIMAX": 1.0}), h)
        assert a.scores == b.scores and a.chosen == b.chosen

    def test_updated_history_is_scores(self):
        decision = select(SNAPSHOTS, None, CriteriaHierarchy(UNIFORM4, UNIFORM4))
        assert decision.updated_history.as_dict() == decision.scores

    def test_unknown_current(self):
        with pytest.raises(MissingNetwork, match="LTE"):
            select(SNAPSHOTS, None, CriteriaHierarchy(UNIFORM4, UNIFORM4), current="LTE")

    def test_history_weight_zero_matches_topsis1(self, cfg):
        hc = cfg.classes[TrafficClass.STREAMING]
        hist = HistoryState({"UMTS": 0.9, "WLAN": 0.1, "WIMAX": 0.5})
        a = select(SNAPSHOTS, hist, hc.hierarchy(Mode.TOPSIS2, history_weight=0.0))
        b = select(SNAPSHOTS, None, hc.hierarchy(Mode.TOPSIS1))
        for net in NETWORKS:
            assert a.scores[net] == pytest.approx(b.scores[net], abs=1e-12)
        assert a.chosen == b.chosen


class TestHistoryState:
    def test_initial(self):
        assert HistoryState.initial(NETWORKS).as_dict() == {n: 1.0 for n in NETWORKS}

    def test_update(self):
        scores = {"UMTS": 0.7, "WLAN": 0.2, "WIMAX": 0.5}
        hist = update_history(scores)
        assert hist.as_dict() == scores
        assert update_history(hist.as_dict()) == hist

    def test_read_only(self):
        hist = HistoryState.initial(NETWORKS)
        with pytest.raises(TypeError):
            hist.values["UMTS"] = 0.0

    def test_range(self):
        with pytest.raises(ValueError):
            HistoryState({"UMTS": 1.5})

    def test_equality_and_hash(self):
        a, b = HistoryState({"A": 0.5, "B": 1.0}), HistoryState({"B": 1.0, "A": 0.5})
        assert a == b and hash(a) == hash(b)


@pytest.mark.parametrize("tc", list(TrafficClass))
def test_pipeline_matches_oracle(cfg, tc):
    hc = cfg.classes[tc]
    level1 = {m: hc.level1_matrix(m).tolist() for m in Mode}
    level2 = np.asarray(hc.level2).tolist()
    h = {m: hc.hierarchy(m) for m in Mode}
    for trial in range(20):
        stream = trial_stream(7, trial)
        current = {m: None for m in Mode}
        hist = {m: HistoryState.initial(NETWORKS) for m in Mode}
        oracle_hist = [1.0, 1.0, 1.0]
        for _ in range(10):
            snaps = [sample_snapshot(stream, DEFAULT_RANGES, n) for n in DEFAULT_RANGES.names]
            rows = [s.values() for s in snaps]
            for mode in Mode:
                got = select(snaps, hist[mode], h[mode], current[mode])
                if mode is Mode.TOPSIS1:
                    idx, scores = oracles.select_network(level1[mode], level2, rows, BENEFIT[:6])
                else:
                    idx, scores = oracles.select_network(level1[mode], level2, rows, BENEFIT, oracle_hist)
                    oracle_hist = scores
                np.testing.assert_allclose([got.scores[n] for n in DEFAULT_RANGES.names], scores, atol=1e-9)
                assert got.chosen == DEFAULT_RANGES.names[idx]
                current[mode], hist[mode] = got.chosen, got.updated_history


class TestEstimator:
    def test_partial_fit_tracks_state(self, cfg):
        hc = cfg.classes[TrafficClass.CONVERSATIONAL]
        est = NetworkSelector(hc.level1_matrix(Mode.TOPSIS2), hc.level2, NETWORKS).fit()
        X = np.array([s.values() for s in SNAPSHOTS])
        first = est.predict(X)
        est.partial_fit(X)
        assert est.current_ == first and est.n_handoffs_ == 0
        assert est.history_.as_dict() == est.last_decision_.scores
        expected = select(SNAPSHOTS, est.history_, est.hierarchy_, est.current_).scores
        np.testing.assert_allclose(est.decision_function(X), [expected[n] for n in NETWORKS])

    def test_clone(self):
        est = NetworkSelector(UNIFORM3, UNIFORM4, NETWORKS, mode="topsis1")
        twin = clone(est)
        assert twin.get_params()["mode"] == "topsis1"
        assert not hasattr(twin, "weights_")

    def test_partial_fit_without_fit(self):
        est = NetworkSelector(UNIFORM3, UNIFORM4, NETWORKS, mode="topsis1")
        est.partial_fit(np.array([s.values() for s in SNAPSHOTS]))
        assert est.current_ in NETWORKS

    def test_bad_shape(self):
        with pytest.raises(DimensionMismatch):
            snapshots_from_array(np.ones((2, 6)), NETWORKS)
