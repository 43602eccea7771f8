"""Exit codes, file outputs, and the snapshot/resume flow of the CLI."""

import json

import pytest

from splitvote.cli import main
from splitvote.modmath import params_from_text

ELECTION_CFG = """\
p = 23
q = 11
g = 2
voters = 20
servers = 3
candidates = alpha,beta
recast_fraction = 0.25
seed = 5
"""

ATTACK_CFG = """\
p = 23
q = 11
g = 2
servers = 3
colluders = 0,2
goal = targeted
trials = exhaustive
seed = 1
"""


@pytest.fixture
def election_cfg(tmp_path):
    path = tmp_path / "election.cfg"
    path.write_text(ELECTION_CFG, encoding="utf-8")
    return path


@pytest.fixture
def attack_cfg(tmp_path):
    path = tmp_path / "attack.cfg"
    path.write_text(ATTACK_CFG, encoding="utf-8")
    return path


class TestParams:
    def test_stdout(self, capsys):
        assert main(["params", "--bits", "16", "--seed", "2"]) == 0
        text = capsys.readouterr().out
        assert params_from_text(text).p.bit_length() == 16

    def test_file_output(self, tmp_path, capsys):
        out = tmp_path / "field.txt"
        assert main(["params", "--bits", "16", "--seed", "2", "--out", str(out)]) == 0
        assert "16 bits" in capsys.readouterr().out
        assert params_from_text(out.read_text(encoding="ascii")).p.bit_length() == 16

    def test_tiny_bits_rejected(self, capsys):
        assert main(["params", "--bits", "3"]) == 2
        assert "error:" in capsys.readouterr().err


class TestRun:
    def test_records_to_stdout(self, election_cfg, capsys):
        assert main(["run", "--config", str(election_cfg)]) == 0
        out = capsys.readouterr().out
        assert "[tally]" in out
        assert "agreement = 1" in out
        assert "wall time" not in out

    def test_table_format(self, election_cfg, capsys):
        assert main(["run", "--config", str(election_cfg), "--format", "table"]) == 0
        out = capsys.readouterr().out
        assert "wall time" in out
        assert "ledger agrees  yes" in out

    def test_outputs_are_byte_identical_across_invocations(self, election_cfg, tmp_path):
        first = tmp_path / "r1.txt"
        second = tmp_path / "r2.txt"
        events1 = tmp_path / "e1.log"
        events2 = tmp_path / "e2.log"
        assert main(["run", "--config", str(election_cfg), "--out", str(first), "--events", str(events1)]) == 0
        assert main(["run", "--config", str(election_cfg), "--out", str(second), "--events", str(events2)]) == 0
        assert first.read_bytes() == second.read_bytes()
        assert events1.read_bytes() == events2.read_bytes()

    def test_seed_override_changes_output(self, election_cfg, capsys):
        assert main(["run", "--config", str(election_cfg)]) == 0
        default = capsys.readouterr().out
        assert main(["run", "--config", str(election_cfg), "--seed", "99"]) == 0
        overridden = capsys.readouterr().out
        assert default != overridden

    def test_event_log_grammar(self, election_cfg, tmp_path):
        events = tmp_path / "events.log"
        assert main(["run", "--config", str(election_cfg), "--events", str(events)]) == 0
        lines = events.read_text(encoding="utf-8").splitlines()
        assert lines
        for seq, line in enumerate(lines, start=1):
            head, arrow, rest = line.split(" ", 2)
            assert int(head) == seq and len(head) == 6
            assert " -> " in line

    def test_bad_config_exits_2(self, tmp_path, capsys):
        path = tmp_path / "bad.cfg"
        path.write_text("voters = -1\n", encoding="utf-8")
        assert main(["run", "--config", str(path)]) == 2
        assert "error:" in capsys.readouterr().err

    def test_missing_config_exits_4(self, tmp_path, capsys):
        assert main(["run", "--config", str(tmp_path / "nope.cfg")]) == 4
        assert "error:" in capsys.readouterr().err


class TestSnapshotResume:
    def test_resume_matches_uninterrupted(self, election_cfg, tmp_path, capsys):
        direct = tmp_path / "direct.txt"
        direct_events = tmp_path / "direct.log"
        assert main([
            "run", "--config", str(election_cfg),
            "--out", str(direct), "--events", str(direct_events),
        ]) == 0
        snap = tmp_path / "state.json"
        assert main([
            "run", "--config", str(election_cfg),
            "--snapshot", str(snap), "--snapshot-at", "9",
        ]) == 0
        assert "snapshot after 9" in capsys.readouterr().out
        resumed = tmp_path / "resumed.txt"
        resumed_events = tmp_path / "resumed.log"
        assert main([
            "resume", "--snapshot", str(snap),
            "--out", str(resumed), "--events", str(resumed_events),
        ]) == 0
        assert resumed.read_bytes() == direct.read_bytes()
        assert resumed_events.read_bytes() == direct_events.read_bytes()

    def test_snapshot_at_needs_snapshot(self, election_cfg):
        with pytest.raises(SystemExit) as exc:
            main(["run", "--config", str(election_cfg), "--snapshot-at", "3"])
        assert exc.value.code == 2

    def test_corrupt_snapshot_exits_2(self, tmp_path, capsys):
        snap = tmp_path / "junk.json"
        snap.write_text("{not json", encoding="utf-8")
        assert main(["resume", "--snapshot", str(snap)]) == 2
        assert "JSON" in capsys.readouterr().err

    def test_foreign_snapshot_exits_2(self, tmp_path, capsys):
        snap = tmp_path / "foreign.json"
        snap.write_text(json.dumps({"kind": "other"}), encoding="utf-8")
        assert main(["resume", "--snapshot", str(snap)]) == 2
        assert "error:" in capsys.readouterr().err


class TestAttack:
    def test_exact_beside_asymptotic(self, attack_cfg, capsys):
        assert main(["attack", "--config", str(attack_cfg)]) == 0
        out = capsys.readouterr().out
        assert "exact=1/22" in out
        assert "asymptotic=1/23" in out

    def test_large_field_exhaustive_exits_3(self, tmp_path, capsys):
        path = tmp_path / "big.cfg"
        path.write_text(
            "field_bits = 24\nservers = 2\ncolluders = 0\ngoal = targeted\n",
            encoding="utf-8",
        )
        assert main(["attack", "--config", str(path)]) == 3
        assert "error:" in capsys.readouterr().err

    def test_bad_attack_config_exits_2(self, tmp_path, capsys):
        path = tmp_path / "bad.cfg"
        path.write_text("servers = 3\ncolluders = 0,1,2\n", encoding="utf-8")
        assert main(["attack", "--config", str(path)]) == 2
        assert "proper subset" in capsys.readouterr().err

    def test_monte_carlo_table(self, tmp_path, capsys):
        path = tmp_path / "mc.cfg"
        path.write_text(ATTACK_CFG.replace("exhaustive", "500"), encoding="utf-8")
        assert main(["attack", "--config", str(path), "--format", "table"]) == 0
        out = capsys.readouterr().out
        assert "targeted" in out
        assert "wall time" in out


class TestUsage:
    def test_no_command(self):
        with pytest.raises(SystemExit) as exc:
            main([])
        assert exc.value.code == 2

    def test_unknown_command(self):
        with pytest.raises(SystemExit) as exc:
            main(["dance"])
        assert exc.value.code == 2
