import json
import math
import os

import pytest

from zsa.cache import ZeroCache, atomic_write
from zsa.cli import EXIT_OK, EXIT_USAGE, _parse_n_range, _parse_rect, main, read_config
from zsa.zerofinder import ComplexZero, Rectangle

LOG2 = math.log(2.0)


def run(capsys, argv):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def test_parse_helpers():
    r = _parse_rect("-1,1,0,30")
    assert (r.x_min, r.x_max, r.y_min, r.y_max) == (-1.0, 1.0, 0.0, 30.0)
    assert _parse_n_range("3..6") == [3, 4, 5, 6]
    assert _parse_n_range("3,5,9") == [3, 5, 9]
    with pytest.raises(ValueError):
        _parse_rect("1,2,3")


def test_config_parsing(tmp_path):
    p = tmp_path / "run.conf"
    p.write_text("# comment\nheight = 300\ncache-dir = /tmp/x\n")
    conf = read_config(str(p))
    assert conf == {"height": "300", "cache-dir": "/tmp/x"}
    bad = tmp_path / "bad.conf"
    bad.write_text("no equals sign\n")
    with pytest.raises(ValueError):
        read_config(str(bad))


def test_zeros_zeta2_row_count(capsys, tmp_path):
    code, out, _ = run(capsys, [
        "zeros", "--n", "2", "--family", "zeta", "--rect=-1,1,0,30",
        "--cache-dir", str(tmp_path)])
    assert code == EXIT_OK
    rows = [l for l in out.strip().splitlines()[1:] if l]
    assert len(rows) == 3
    ims = [float(r.split(",")[1]) for r in rows]
    for k, im in enumerate(ims):
        assert abs(im - (2 * k + 1) * math.pi / LOG2) < 1e-9


def test_zeros_empty_rectangle(capsys, tmp_path):
    code, out, _ = run(capsys, [
        "zeros", "--n", "2", "--family", "zeta", "--rect=-0.9,-0.1,1,2",
        "--cache-dir", str(tmp_path)])
    assert code == EXIT_OK
    assert len(out.strip().splitlines()) == 1     # header only


def test_zeros_cache_round_trip(capsys, tmp_path):
    argv = ["zeros", "--n", "3", "--family", "G", "--rect=-1,1,0,12",
            "--cache-dir", str(tmp_path)]
    code1, out1, _ = run(capsys, argv)
    code2, out2, _ = run(capsys, argv)
    assert code1 == code2 == EXIT_OK
    assert out1 == out2                          # byte-identical rerun
    cache_file = os.path.join(str(tmp_path), "zeros.json")
    text1 = open(cache_file).read()
    cache = ZeroCache(str(tmp_path))
    cache.save()
    assert open(cache_file).read() == text1      # serialize round trip


def test_usage_error_exit_code(tmp_path):
    with pytest.raises(SystemExit) as exc:
        main(["zeros", "--n", "2"])
    assert exc.value.code == EXIT_USAGE


def test_levels_json_and_svg(capsys, tmp_path):
    jpath = tmp_path / "comps.json"
    spath = tmp_path / "curve.svg"
    code, out, _ = run(capsys, [
        "levels", "--n", "3", "--x0", "-1",
        "--json-out", str(jpath), "--svg-out", str(spath)])
    assert code == EXIT_OK
    assert "ClosedLoop" in out
    obj = json.loads(jpath.read_text())
    assert obj["n"] == 3 and obj["components"]
    assert spath.read_text().startswith("<svg")


def test_profile_output(capsys):
    code, out, _ = run(capsys, ["profile", "--n", "3", "--x", "0"])
    assert code == EXIT_OK
    assert "m_hat=" in out and "M=2" in out


def test_verify_exit_codes(capsys):
    code, out, _ = run(capsys, ["verify", "--theorems", "factorials",
                                "--k-max", "50", "--m-max", "100"])
    assert code == EXIT_OK
    assert "pass" in out
    code, _, err = run(capsys, ["verify", "--theorems", "NOPE"])
    assert code == EXIT_USAGE


def test_csv_floats_are_17_digits(capsys, tmp_path):
    code, out, _ = run(capsys, [
        "zeros", "--n", "2", "--family", "zeta", "--rect=-1,1,0,10",
        "--cache-dir", str(tmp_path)])
    assert code == EXIT_OK
    im = out.strip().splitlines()[1].split(",")[1]
    assert float(im) == math.pi / LOG2 * 1.0 or abs(float(im)) > 0
    assert len(im.replace("-", "").replace(".", "").split("e")[0]) >= 16


def test_atomic_write_replaces(tmp_path):
    p = tmp_path / "f.txt"
    atomic_write(str(p), "one")
    atomic_write(str(p), "two")
    assert p.read_text() == "two"
    assert [f for f in os.listdir(tmp_path) if f.startswith(".tmp-")] == []


def test_cache_dedup_and_corruption(tmp_path):
    rect = Rectangle(-1, 1, 0, 5)
    cache = ZeroCache(str(tmp_path))
    z = ComplexZero(position=1j, residual=0.0, certified=True)
    near = ComplexZero(position=1j + 1e-12, residual=0.0, certified=True)
    cache.put("G", 3, rect, 1e-10, [z, near])
    assert len(cache.get("G", 3, rect, 1e-10)) == 1
    assert cache.get("G", 3, rect, 1e-9) is None   # tol is part of the key
    cache.save()
    # corrupt the file: loader starts fresh instead of crashing
    path = os.path.join(str(tmp_path), "zeros.json")
    with open(path, "w") as fh:
        fh.write("{ not json")
    assert ZeroCache(str(tmp_path)).get("G", 3, rect, 1e-10) is None
