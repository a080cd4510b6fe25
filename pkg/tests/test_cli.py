import csv
import json

import pytest

from emoscope.benchmarks import dtlz, reference_set, save_reference_csv
from emoscope.cli import main


@pytest.fixture()
def ws(tmp_path):
    save_reference_csv(reference_set(dtlz(2, 3), 12), tmp_path / "reference.csv")
    return tmp_path


def run_small(ws, algorithm, seed, gens=12):
    rc = main(
        [
            "run",
            "--problem",
            "dtlz2",
            "--algorithm",
            algorithm,
            "--pop",
            "8",
            "--gens",
            str(gens),
            "--seed",
            str(seed),
            "--out",
            str(ws / "runs"),
        ]
    )
    assert rc == 0


class TestRun:
    def test_same_seed_identical_files(self, ws, tmp_path):
        run_small(ws, "nsga2", 7)
        first = (ws / "runs" / "nsga2.jsonl").read_bytes()
        run_small(ws, "nsga2", 7)
        assert (ws / "runs" / "nsga2.jsonl").read_bytes() == first

    def test_unknown_problem_exit_2(self, ws, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["run", "--problem", "zdt1", "--algorithm", "nsga2", "--out", str(ws)])
        assert exc.value.code == 2

    def test_odd_population_runtime_error(self, ws):
        rc = main(
            ["run", "--problem", "dtlz2", "--algorithm", "nsga2", "--pop", "7", "--gens", "2", "--seed", "1", "--out", str(ws / "runs")]
        )
        assert rc == 1

    def test_log_is_valid_protocol(self, ws):
        run_small(ws, "sms-emoa", 3, gens=4)
        lines = (ws / "runs" / "sms-emoa.jsonl").read_text().splitlines()
        header = json.loads(lines[0])
        assert header["schema"] == "emo-run/1"
        assert header["m"] == 3 and header["d"] == 12
        assert len(lines) == 5


class TestPreprocessCli:
    def test_cold_warm_and_exit_codes(self, ws):
        run_small(ws, "nsga2", 1)
        run_small(ws, "sms-emoa", 2, gens=8)
        assert main(["preprocess", str(ws), "--sample", "6", "--pairs", "nsga2:sms-emoa"]) == 0
        files = {p: p.read_bytes() for p in ws.rglob("*.json")}
        assert main(["preprocess", str(ws), "--sample", "6", "--pairs", "nsga2:sms-emoa"]) == 0
        assert {p: p.read_bytes() for p in ws.rglob("*.json")} == files

    def test_missing_dir_exit_2(self, tmp_path):
        assert main(["preprocess", str(tmp_path / "nope")]) == 2

    def test_bad_pair_exit_2(self, ws):
        run_small(ws, "nsga2", 1)
        assert main(["preprocess", str(ws), "--pairs", "justone"]) == 2

    def test_bad_sample_exit_2(self, ws):
        run_small(ws, "nsga2", 1)
        assert main(["preprocess", str(ws), "--sample", "1"]) == 2

    def test_unknown_pair_id_exit_1(self, ws):
        run_small(ws, "nsga2", 1)
        assert main(["preprocess", str(ws), "--pairs", "nsga2:ghost"]) == 1

    def test_all_pairs_flag_warns_and_computes(self, ws, capsys):
        run_small(ws, "nsga2", 1)
        run_small(ws, "sms-emoa", 2, gens=8)
        assert main(["preprocess", str(ws), "--sample", "6", "--all"]) == 0
        out = capsys.readouterr().out
        assert "expensive" in out
        assert list((ws / "cache" / "sim").glob("gen_emd-*.json"))


class TestReportCli:
    def test_report_sorted_and_csv_round_trip(self, ws, capsys):
        run_small(ws, "nsga2", 1)
        run_small(ws, "sms-emoa", 2, gens=8)
        assert main(["preprocess", str(ws), "--sample", "6"]) == 0
        capsys.readouterr()
        assert main(["report", str(ws)]) == 0
        out = capsys.readouterr().out
        lines = [ln for ln in out.splitlines() if ln.strip()]
        assert lines[0].split()[0] == "algorithm"
        assert len(lines) == 3  # header + 2 rows

        with open(ws / "report.csv") as fh:
            rows = list(csv.DictReader(fh))
        assert len(rows) == 2
        vals = [float(r["best_igd"]) for r in rows]
        assert vals == sorted(vals)
        # CSV floats round-trip exactly against the measure cache
        cache = json.loads((ws / "cache" / "measures" / f"{rows[0]['algorithm']}.json").read_text())
        assert float(rows[0]["best_igd"]) == min(cache["igd"])

    def test_report_identical_bytes_on_rerun(self, ws, capsys):
        run_small(ws, "nsga2", 1)
        assert main(["preprocess", str(ws), "--sample", "6"]) == 0
        capsys.readouterr()
        assert main(["report", str(ws)]) == 0
        first_out = capsys.readouterr().out
        first_csv = (ws / "report.csv").read_bytes()
        first_mtime = (ws / "report.csv").stat().st_mtime_ns
        assert main(["report", str(ws)]) == 0
        assert capsys.readouterr().out == first_out
        assert (ws / "report.csv").read_bytes() == first_csv
        assert (ws / "report.csv").stat().st_mtime_ns == first_mtime  # untouched

    def test_report_without_caches_exit_1(self, ws):
        run_small(ws, "nsga2", 1)
        assert main(["report", str(ws)]) == 1

    def test_missing_dir_exit_2(self, tmp_path):
        assert main(["report", str(tmp_path / "nope")]) == 2


class TestServeCli:
    def test_missing_dir_exit_2(self, tmp_path):
        assert main(["serve", str(tmp_path / "nope")]) == 2
