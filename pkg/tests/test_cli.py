import csv
import json
import subprocess
import sys
from pathlib import Path

import pytest

from supplygame.cli import main
from supplygame.service.net import TcpClient


def read_csv(path):
    with open(path, encoding="utf-8") as fh:
        lines = [l for l in fh if not l.startswith("#")]
    return list(csv.DictReader(lines))


class TestSimulate:
    def test_default_run_is_stationary_without_disruption(self, tmp_path, capsys):
        out = tmp_path / "traj.csv"
        code = main(["simulate", "--weeks", "39", "--disrupt", "none",
                     "--out", str(out)])
        assert code == 0
        rows = read_csv(out)
        ws1 = [r for r in rows if r["agent"] == "WS1"]
        assert len(ws1) == 39
        assert {r["shipments"] for r in ws1} == {"40"}
        assert {r["backlog"] for r in ws1} == {"0"}
        assert out.read_text().startswith("# supplygame")

    def test_disruption_dents_receipts_in_window(self, tmp_path):
        out = tmp_path / "mn1.csv"
        assert main(["simulate", "--weeks", "39", "--disrupt", "MN1",
                     "--out", str(out)]) == 0
        rows = [r for r in read_csv(out) if r["agent"] == "WS1"]
        window = [int(r["receipts"]) for r in rows if 30 <= int(r["week"]) <= 36]
        assert min(window) < 40

    def test_zero_demand_scenario_all_zero_flows(self, tmp_path):
        scenario = tmp_path / "zero.json"
        from supplygame.sim.scenario import default_scenario, scenario_to_dict
        doc = scenario_to_dict(default_scenario(demand=0, controlled=False,
                                                disruption_target=None))
        scenario.write_text(json.dumps(doc))
        out = tmp_path / "zero.csv"
        assert main(["simulate", "--scenario", str(scenario), "--weeks", "10",
                     "--out", str(out)]) == 0
        rows = read_csv(out)
        assert all(r["shipments"] == "0" and r["revenue"] == "0" for r in rows)

    def test_bad_scenario_path_is_input_error(self, tmp_path):
        assert main(["simulate", "--scenario", str(tmp_path / "nope.json"),
                     "--out", str(tmp_path / "x.csv")]) == 1


class TestCohortCommand:
    def test_cohort_writes_manifest_and_logs(self, tmp_path):
        out = tmp_path / "data"
        code = main(["cohort", "--study", "study2", "--mix", "follower=3",
                     "--out", str(out), "--seed", "11"])
        assert code == 0
        manifest = json.loads((out / "manifest.json").read_text())
        assert len(manifest["sessions"]) == 3
        logs = list((out / "sessions").glob("*.jsonl"))
        assert len(logs) == 3

    def test_bad_mix_is_input_error(self, tmp_path):
        assert main(["cohort", "--mix", "dragon=3", "--out", str(tmp_path / "d")]) == 1


class TestAnalyzeCommand:
    def test_study1_fixture_prints_published_statistics(self, tmp_path, capsys):
        code = main(["analyze", "--fixture", "study1", "--out", str(tmp_path / "o")])
        assert code == 0
        printed = capsys.readouterr().out
        assert "chi2=12.047" in printed
        assert "chi2=19.172" in printed
        summary = read_csv(tmp_path / "o" / "tests_summary.csv")
        by_table = {r["table"]: r for r in summary}
        assert by_table["disruption"]["df"] == "2"
        assert float(by_table["disruption"]["cramers_v"]) == pytest.approx(0.109, abs=1e-3)
        assert float(by_table["info"]["cramers_v"]) == pytest.approx(0.097, abs=1e-3)

    def test_study2_fixture_runs_fisher_for_follower(self, tmp_path, capsys):
        code = main(["analyze", "--fixture", "study2", "--out", str(tmp_path / "o")])
        assert code == 0
        summary = {r["table"]: r for r in read_csv(tmp_path / "o" / "tests_summary.csv")}
        assert float(summary["profile"]["chi2"]) == pytest.approx(18.132, abs=0.01)
        assert float(summary["info_hoarder"]["chi2"]) == pytest.approx(21.216, abs=0.01)
        assert float(summary["info_reactor"]["chi2"]) == pytest.approx(14.122, abs=0.01)
        follower = summary["info_follower"]
        assert float(follower["chi2"]) == pytest.approx(1.085, abs=0.01)
        assert follower["low_expected"] == "1"
        assert float(follower["fisher_p"]) == pytest.approx(0.65, abs=0.02)

    def test_empty_comments_file_no_data_exit(self, tmp_path, capsys):
        empty = tmp_path / "empty.csv"
        empty.write_text("player,week,text,rater,level,topic,description\n")
        code = main(["analyze", "--comments", str(empty),
                     "--players", str(empty), "--out", str(tmp_path / "o")])
        assert code == 1
        assert "no data" in capsys.readouterr().err

    def test_multirater_input_reports_kappa(self, tmp_path, capsys):
        data = Path(__file__).resolve().parent.parent / "src" / "supplygame" / "data"
        players = tmp_path / "players.csv"
        rows = ["player,study,disruption,info,profile"]
        rows += [f"IRR-{i + 1:02d},study2,MN1,none,hoarder" for i in range(24)]
        players.write_text("\n".join(rows) + "\n")
        code = main(["analyze", "--comments", str(data / "irr_sample_codes.csv"),
                     "--players", str(players), "--out", str(tmp_path / "o")])
        assert code == 0
        printed = capsys.readouterr().out
        assert "Fleiss kappa" in printed
        assert (tmp_path / "o" / "kappa.txt").exists()

    def test_profiling_from_cohort_data(self, tmp_path, capsys):
        data_dir = tmp_path / "data"
        main(["cohort", "--study", "study2",
              "--mix", "follower=2,hoarder=2,reactor=2,outlier=1",
              "--out", str(data_dir), "--seed", "7"])
        code = main(["analyze", "--fixture", "study2", "--data", str(data_dir),
                     "--out", str(tmp_path / "o")])
        assert code == 0
        profiles = read_csv(tmp_path / "o" / "profiles.csv")
        assert len(profiles) == 6
        exclusions = read_csv(tmp_path / "o" / "exclusions.csv")
        assert len(exclusions) == 1


class TestServeCommand:
    def test_serve_and_play_over_tcp(self, tmp_path):
        proc = subprocess.Popen(
            [sys.executable, "-m", "supplygame.cli", "serve",
             "--port", "0", "--data", str(tmp_path / "svc")],
            stdout=subprocess.PIPE, stderr=subprocess.STDOUT, text=True)
        try:
            line = proc.stdout.readline()
            assert "session service on" in line, line
            port = int(line.split(":")[1].split()[0])
            client = TcpClient("127.0.0.1", port)
            created = client.request({"type": "create", "study": "study1", "seed": 4})
            assert created["ok"]
            sid = created["session"]
            view = client.request({"type": "view", "session": sid})
            assert view["ok"] and view["view"]["week"] == 17
            reply = client.request({"type": "order", "session": sid,
                                    "quantity": view["view"]["suggestion"]})
            assert reply["ok"] and reply["week"] == 18
            bad = client.request({"type": "bubble", "session": sid, "text": "x"})
            assert not bad["ok"]
            client.close()
        finally:
            proc.terminate()
            proc.wait(timeout=10)
