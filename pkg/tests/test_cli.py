import json

import pytest

from hyperdrift.cli import main
from hyperdrift.xorsat import parse_assignment, parse_instance, satisfies


def run(capsys, *argv) -> tuple[int, str]:
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, out


class TestGen:
    def test_complete_writes_instance_and_witness(self, tmp_path, capsys):
        out = tmp_path / "k5.xnf"
        code, _ = run(capsys, "gen", "--family", "complete", "-k", "5", "-n", "7",
                      "--seed", "1", "--out", str(out))
        assert code == 0
        inst = parse_instance(out.read_text())
        assert inst.m == 21
        z = parse_assignment(out.with_suffix(".assign").read_text(), inst.n)
        assert satisfies(inst, z)

    def test_triadic_cycle(self, tmp_path, capsys):
        out = tmp_path / "tc.xnf"
        code, _ = run(capsys, "gen", "--family", "triadic-cycle", "-m", "18",
                      "--seed", "2", "--out", str(out))
        assert code == 0
        inst = parse_instance(out.read_text())
        assert inst.m == 18 and inst.n == 36

    def test_ctd_k4(self, tmp_path, capsys):
        out = tmp_path / "ctd.xnf"
        code, _ = run(capsys, "gen", "--family", "ctd", "--graph", "k4",
                      "--seed", "3", "--out", str(out))
        assert code == 0
        inst = parse_instance(out.read_text())
        assert inst.m == 4 and inst.n == 6
        assert out.with_suffix(".start").exists()

    def test_bad_family_is_usage_error(self, tmp_path, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["gen", "--family", "nope", "--seed", "1", "--out", str(tmp_path / "x")])
        assert exc.value.code == 2


class TestSolve:
    def test_mean_zero_on_satisfied_start(self, tmp_path, capsys):
        inst_path = tmp_path / "k5.xnf"
        run(capsys, "gen", "--family", "complete", "-k", "5", "-n", "7",
            "--seed", "1", "--out", str(inst_path))
        code, out = run(capsys, "solve", str(inst_path),
                        "--policy", f"fixed:{inst_path.with_suffix('.assign')}",
                        "--trials", "5", "--seed", "9")
        assert code == 0
        summary = json.loads(out.splitlines()[-1])
        assert summary["mean"] == 0 and summary["censored"] == 0

    def test_deterministic_bytes(self, tmp_path, capsys):
        inst_path = tmp_path / "tc.xnf"
        run(capsys, "gen", "--family", "triadic-cycle", "-m", "6",
            "--seed", "4", "--out", str(inst_path))
        a = tmp_path / "a.csv"
        b = tmp_path / "b.csv"
        for out in (a, b):
            code, _ = run(capsys, "solve", str(inst_path), "--policy", "uniform",
                          "--trials", "8", "--seed", "11", "--out", str(out))
            assert code == 0
        assert a.read_bytes() == b.read_bytes()
        assert a.with_suffix(".png").exists()

    def test_missing_instance_is_io_error(self, tmp_path, capsys):
        code, _ = run(capsys, "solve", str(tmp_path / "absent.xnf"),
                      "--trials", "1", "--seed", "1")
        assert code == 3


class TestDrift:
    def test_dual_profile_of_triadic_cycle(self, tmp_path, capsys):
        inst_path = tmp_path / "tc.xnf"
        run(capsys, "gen", "--family", "triadic-cycle", "-m", "8",
            "--seed", "5", "--out", str(inst_path))
        out = tmp_path / "drift.csv"
        code, text = run(capsys, "drift", str(inst_path), "--dual", "--out", str(out))
        assert code == 0
        assert "min drift 0.2" in text
        header, *rows = out.read_text().strip().splitlines()
        assert header == "delta,size,min,mean,max,undefined_count"
        assert len(rows) == 8
        # figure rendered alongside the CSV
        png = out.with_suffix(".png")
        assert png.exists()
        assert png.read_bytes()[:8] == b"\x89PNG\r\n\x1a\n"

    def test_complete_family_closed_form(self, tmp_path, capsys):
        out = tmp_path / "k200.csv"
        code, _ = run(capsys, "drift", "--family", "complete", "-n", "200", "-k", "5",
                      "--out", str(out), "--no-plot")
        assert code == 0
        assert not out.with_suffix(".png").exists()
        rows = out.read_text().strip().splitlines()[1:]
        assert len(rows) == 200

    def test_reproducible_bytes(self, tmp_path, capsys):
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        for out in (a, b):
            run(capsys, "drift", "--family", "complete", "-n", "40", "-k", "5",
                "--out", str(out), "--no-plot")
        assert a.read_bytes() == b.read_bytes()


class TestTauClassify:
    def test_tau_on_dual(self, tmp_path, capsys):
        inst_path = tmp_path / "tc.xnf"
        run(capsys, "gen", "--family", "triadic-cycle", "-m", "6",
            "--seed", "6", "--out", str(inst_path))
        code, out = run(capsys, "tau", str(inst_path), "--dual")
        assert code == 0
        assert out.startswith("tau: 6")

    def test_classify_dual_case_i(self, tmp_path, capsys):
        inst_path = tmp_path / "tc.xnf"
        run(capsys, "gen", "--family", "triadic-cycle", "-m", "6",
            "--seed", "7", "--out", str(inst_path))
        code, out = run(capsys, "classify", str(inst_path), "--dual")
        assert code == 0
        data = json.loads(out)
        assert data["case"] == "positive-drift"
        assert data["delta_min"] == 0.2

    def test_classify_complete_negative_window(self, capsys):
        code, out = run(capsys, "classify", "--family", "complete", "-n", "40", "-k", "5")
        assert code == 0
        data = json.loads(out)
        assert data["case"] == "negative-window"
        assert data["eta1"] <= 0.1 <= 0.2 <= data["eta2"]


class TestCheck:
    def test_counterexamples_pass(self, capsys):
        code, out = run(capsys, "check", "counterexamples", "--seed", "1")
        assert code == 0
        assert "ok" in out

    def test_small_coupling_run(self, capsys):
        code, out = run(capsys, "check", "coupling", "--seed", "1", "--trials", "50")
        assert code == 0

    def test_unknown_check_is_usage_error(self, capsys):
        code, _ = run(capsys, "check", "no-such-check")
        assert code == 2


class TestBench:
    def test_triadic_bench(self, tmp_path, capsys):
        out = tmp_path / "bench.csv"
        code, text = run(capsys, "bench", "--family", "triadic-cycle",
                         "--sizes", "4,6,8", "--trials", "10", "--starts", "5",
                         "--seed", "8", "--max-steps", "100000", "--out", str(out))
        assert code == 0
        data = json.loads(text.splitlines()[-1])
        assert len(data["means"]) == 3
        assert out.exists() and out.with_suffix(".png").exists()


class TestTrajectoryOut:
    def test_writes_trajectory(self, tmp_path, capsys):
        inst_path = tmp_path / "k5.xnf"
        run(capsys, "gen", "--family", "complete", "-k", "5", "-n", "7",
            "--seed", "1", "--out", str(inst_path))
        traj = tmp_path / "traj.csv"
        code, _ = run(capsys, "solve", str(inst_path), "--policy", "uniform",
                      "--trials", "2", "--seed", "5", "--trajectory-out", str(traj))
        assert code == 0
        lines = traj.read_text().strip().splitlines()
        assert lines[0] == "t,unsat,u"
        assert len(lines) >= 2


class TestDualOut:
    def test_gen_writes_dual_hg(self, tmp_path, capsys):
        out = tmp_path / "tc.xnf"
        dual = tmp_path / "tc-dual.hg"
        code, _ = run(capsys, "gen", "--family", "triadic-cycle", "-m", "6",
                      "--seed", "9", "--out", str(out), "--dual-out", str(dual))
        assert code == 0
        code, text = run(capsys, "tau", str(dual))
        assert code == 0 and text.startswith("tau: 6")

    def test_classify_sampled_mode(self, tmp_path, capsys):
        out = tmp_path / "tc.xnf"
        run(capsys, "gen", "--family", "triadic-cycle", "-m", "8",
            "--seed", "10", "--out", str(out))
        code, text = run(capsys, "classify", str(out), "--dual",
                         "--samples", "60", "--seed", "3")
        assert code == 0
        data = json.loads(text)
        assert data["case"] in ("positive-drift", "unclassified")
