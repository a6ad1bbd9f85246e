import math

import pytest
from hypothesis import given, settings, strategies as st

from zonec.arch import (
    AodMove,
    ConfigError,
    LayoutError,
    MachineConfig,
    MoveViolation,
    Policy,
    Trap,
    apply_move,
    build_layout,
    crossing_distance_um,
    dump_config,
    load_config,
    move_duration_us,
    validate_move,
)


class TestConfig:
    def test_defaults(self):
        cfg = MachineConfig()
        assert cfg.pulse_1q_us == 0.625
        assert cfg.pulse_2q_us == 0.380
        assert cfg.trap_transfer_time_us == 150.0
        assert cfg.max_logical == 120

    def test_derived_times(self):
        cfg = MachineConfig()
        assert cfg.min_ld_st_us == pytest.approx(20.0 / 0.55)
        assert cfg.shuttle_unit_us == pytest.approx(12.0 / 0.55)

    def test_validation(self):
        with pytest.raises(ConfigError):
            MachineConfig(pulse_1q_us=-1.0)
        with pytest.raises(ConfigError):
            MachineConfig(f_2q=1.5)

    def test_config_file_round_trip(self, tmp_path):
        cfg = MachineConfig(pulse_2q_us=0.5, policy=Policy.TYPE2, array_rows=21)
        path = tmp_path / "machine.cfg"
        path.write_text(dump_config(cfg))
        assert load_config(path) == cfg

    def test_config_file_partial_override(self, tmp_path):
        path = tmp_path / "machine.cfg"
        path.write_text("aod_speed_um_per_us = 1.1\npolicy: type3\n# comment\n")
        cfg = load_config(path)
        assert cfg.aod_speed_um_per_us == 1.1
        assert cfg.policy is Policy.TYPE3
        assert cfg.pulse_1q_us == 0.625

    def test_unknown_key_rejected(self, tmp_path):
        path = tmp_path / "machine.cfg"
        path.write_text("warp_speed = 9\n")
        with pytest.raises(ConfigError):
            load_config(path)


class TestLayout:
    def test_capacity_limit(self):
        cfg = MachineConfig()
        build_layout(cfg, 120)
        with pytest.raises(LayoutError):
            build_layout(cfg, 121)

    def test_deterministic_and_disjoint(self):
        cfg = MachineConfig()
        lay = build_layout(cfg, 50)
        assert lay.qubits == build_layout(cfg, 50).qubits
        anchors = {(s.row, s.col) for s in lay.qubits}
        assert len(anchors) == 50

    def test_all_start_in_storage_slm(self):
        lay = build_layout(MachineConfig(), 10)
        assert all(s.zone == "storage" and s.trap is Trap.SLM for s in lay.qubits)


class TestMoves:
    def _layout(self, n=4):
        lay = build_layout(MachineConfig(), n)
        for s in lay.qubits:
            s.trap = Trap.AOD
        return lay

    def test_requires_aod(self):
        lay = build_layout(MachineConfig(), 2)
        with pytest.raises(LayoutError):
            validate_move(lay, AodMove({0: (1, 0)}))

    def test_parallel_translation_ok(self):
        lay = self._layout()
        mv = AodMove({0: (1, 0), 1: (1, 0)})
        assert validate_move(lay, mv) is True

    def test_order_violation_detected(self):
        lay = self._layout()
        a, b = lay.site(0), lay.site(1)
        # Force columns to cross.
        delta = b.col - a.col
        mv = AodMove({0: (0, delta + 1), 1: (0, 0)})
        v = validate_move(lay, mv)
        assert isinstance(v, MoveViolation) and not v

    def test_occupied_destination_detected(self):
        lay = self._layout()
        b = lay.site(1)
        a = lay.site(0)
        mv = AodMove({0: (b.row - a.row, b.col - a.col)})
        v = validate_move(lay, mv)
        assert isinstance(v, MoveViolation)

    def test_duration_uses_slowest_member(self):
        lay = self._layout()
        cfg = lay.config
        mv = AodMove({0: (0, 1), 1: (0, 3)})
        expected = 3 * cfg.pitch_storage_um / cfg.aod_speed_um_per_us
        assert move_duration_us(lay, mv, cfg) == pytest.approx(expected)

    def test_apply_move_updates_positions(self):
        lay = self._layout()
        before = (lay.site(0).row, lay.site(0).col)
        apply_move(lay, AodMove({0: (2, 1)}))
        assert (lay.site(0).row, lay.site(0).col) == (before[0] + 2, before[1] + 1)

    @given(st.integers(0, 6), st.integers(0, 6))
    @settings(max_examples=30, deadline=None)
    def test_crossing_distance_at_least_gap(self, r, c):
        lay = build_layout(MachineConfig(), 4)
        d = crossing_distance_um(lay, 0, r, c, "entangling")
        assert d >= lay.config.zone_gap_um
