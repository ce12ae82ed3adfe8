import json

import pytest

from mfsc import specfile
from mfsc.cli import main
from mfsc.sfe import unpack_bits
from mfsc.zoo import c_half


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def read_csv(path):
    lines = path.read_text().splitlines()
    assert lines[0].startswith("# schema: mfsc.")
    return [line.split(",") for line in lines[2:]], lines[1]


def test_simulate_identity_bits(tmp_path, capsys):
    code, _, _ = run(capsys, "simulate", "--machine", "zoo:identity", "--seq", "periodic:01",
                     "--n", "8", "--out", str(tmp_path))
    assert code == 0
    assert (tmp_path / "output.bits").read_text().strip() == "01010101"
    assert unpack_bits((tmp_path / "output.bin").read_bytes()) == "01010101"


def test_simulate_c_half_positions(tmp_path, capsys):
    path = tmp_path / "c_half.txt"
    specfile.dump(c_half(), path)
    assert run(capsys, "simulate", "--machine", str(path), "--seq", "periodic:01", "--n", "6",
               "--out", str(tmp_path))[0] == 0
    text = (tmp_path / "trace.csv").read_text().splitlines()
    assert text[1] == "n,positions,observation,state,bits"
    assert [line.split(",")[1] for line in text[2:]] == ["(0)", "(1)", "(1)", "(2)", "(2)", "(3)"]


def test_simulate_gambler_bets(tmp_path, capsys):
    assert run(capsys, "simulate", "--machine", "zoo:parity", "--seq", "periodic:1", "--n", "2",
               "--out", str(tmp_path))[0] == 0
    lines = (tmp_path / "trace.csv").read_text().splitlines()
    assert [line.rsplit(",", 1)[1] for line in lines[2:]] == ["1/3", "2/3"]


def test_simulate_is_byte_identical(tmp_path, capsys):
    for d in ("a", "b"):
        run(capsys, "simulate", "--machine", "zoo:alternation", "--via", "g2c", "--k", "4",
            "--seq", "iid:3", "--n", "200", "--out", str(tmp_path / d))
    for name in ("trace.csv", "output.bits", "output.bin"):
        assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()


def test_construct_summaries(tmp_path, capsys):
    code, out, _ = run(capsys, "construct", "--machine", "zoo:c_half", "--direction", "c2g", "--k", "2",
                       "--export", str(tmp_path / "g.txt"))
    assert code == 0 and out.startswith("n0=2 ℓ=4")
    assert specfile.load(tmp_path / "g.txt").kind == "gambler"
    code, out, _ = run(capsys, "construct", "--machine", "zoo:identity", "--direction", "c2g", "--k", "3")
    assert code == 0 and out.startswith("n0=0 ℓ=3")


def test_construct_vanishing_advises_eps(capsys):
    code, _, err = run(capsys, "construct", "--machine", "zoo:vanishing", "--direction", "g2c", "--k", "2")
    assert code == 2 and "--eps" in err
    code, _, _ = run(capsys, "construct", "--machine", "zoo:vanishing", "--direction", "g2c", "--k", "2",
                     "--eps", "1/2")
    assert code == 0


def test_ratio_identity_and_alternation(tmp_path, capsys):
    code, out, _ = run(capsys, "ratio", "--machine", "zoo:identity", "--seq", "champernowne:2",
                       "--n-grid", "10,100")
    assert code == 0 and out.split() == ["10,10,1.000000000000", "100,100,1.000000000000"]
    code, out, _ = run(capsys, "ratio", "--machine", "zoo:alternation", "--via", "g2c", "--k", "16",
                       "--seq", "periodic:01", "--n-grid", "16,4096", "--out", str(tmp_path))
    rows, header = read_csv(tmp_path / "ratio.csv")
    assert header == "n,output_bits,ratio"
    assert rows == [["16", "16", "1.000000000000"], ["4096", "2056", "0.501953125000"]]


def test_ratio_setup_region_ternary(capsys):
    # setup symbols cost ceil(log2 3) = 2 bits each
    code, out, _ = run(capsys, "ratio", "--machine", "zoo:parity", "--via", "g2c", "--k", "2",
                       "--seq", "periodic:1", "--n-grid", "2")
    assert code == 0 and out.strip() == "2,2,1.000000000000"


def test_verify_exit_codes(tmp_path, capsys):
    code, out, _ = run(capsys, "verify", "--suite", "gale-identity", "--instances", "5",
                       "--out", str(tmp_path))
    assert code == 0 and "PASS 5/5" in out
    lines = (tmp_path / "reports.jsonl").read_text().splitlines()
    assert len(lines) == 5 and json.loads(lines[0])["holds"] is True
    rows, header = read_csv(tmp_path / "summary.csv")
    assert header == "lemma,instances,passes,failures" and rows == [["gale-identity", "5", "5", "0"]]
    assert run(capsys, "verify", "--suite", "il", "--machine", "zoo:silent", "--L", "1")[0] == 1
    assert run(capsys, "verify", "--suite", "il", "--machine", "zoo:identity", "--L", "8")[0] == 0
    assert run(capsys, "verify", "--suite", "il", "--machine", "zoo:identity", "--L", "40")[0] == 3


def test_verify_lemma_suite(capsys):
    code, out, _ = run(capsys, "verify", "--suite", "gambler-bounds", "--instances", "3")
    assert code == 0 and "suffix-equality: PASS" in out


def test_dim_probe_labels_upper_bounds(tmp_path, capsys):
    code, out, _ = run(capsys, "dim-probe", "--machine", "zoo:alternation", "--seq", "periodic:01",
                       "--s-grid", "1/4,1/2,1", "--k-grid", "4,16", "--n-grid", "1024,4096",
                       "--out", str(tmp_path))
    assert code == 0
    assert "compression-ratio upper-bound witness: ratio=0.501953125000 k=16" in out
    assert "dimension upper-bound witness: s=1/2" in out
    assert (tmp_path / "dim_probe.csv").exists()


def test_dim_probe_uniform_overhead_shrinks_with_k(capsys):
    code, out, _ = run(capsys, "dim-probe", "--machine", "zoo:uniform", "--seq", "iid:42",
                       "--k-grid", "1,2,4,8", "--n-grid", "2048", "--eps", "1/4")
    assert code == 0
    assert "ratio=1.124" in out and "k=8" in out


def test_config_file_and_overrides(tmp_path, capsys):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"machine": "zoo:identity", "seq": "periodic:0", "n_grid": "4,8"}))
    code, out, _ = run(capsys, "ratio", "--config", str(cfg))
    assert code == 0 and out.split() == ["4,4,1.000000000000", "8,8,1.000000000000"]
    code, out, _ = run(capsys, "ratio", "--config", str(cfg), "--n-grid", "3")
    assert out.split() == ["3,3,1.000000000000"]
    cfg.write_text(json.dumps({"bogus": 1}))
    assert run(capsys, "ratio", "--config", str(cfg))[0] == 2


@pytest.mark.parametrize("argv", [
    ["nonsense"],
    ["ratio", "--machine", "zoo:nope", "--seq", "periodic:01", "--n-grid", "4"],
    ["ratio", "--machine", "zoo:identity", "--seq", "periodic:012", "--n-grid", "4"],
    ["ratio", "--machine", "zoo:identity", "--seq", "periodic:01", "--n-grid", "8,4"],
    ["ratio", "--machine", "zoo:identity", "--seq", "periodic:01"],
    ["construct", "--machine", "zoo:uniform", "--direction", "c2g", "--k", "2"],
    ["simulate", "--machine", "missing.txt", "--seq", "periodic:01", "--n", "3", "--out", "x"],
])
def test_usage_errors(argv, capsys):
    assert main(argv) == 2


def test_bad_machine_file_reports_line(tmp_path, capsys):
    path = tmp_path / "bad.txt"
    path.write_text("kind: compressor\nheads: x\n")
    code, _, err = run(capsys, "simulate", "--machine", str(path), "--seq", "periodic:01",
                       "--n", "3", "--out", str(tmp_path))
    assert code == 2 and "bad.txt:2" in err
