import json

import pytest

from renormray.cli import run


def invoke(capsys, *argv):
    code = run(list(argv))
    out = capsys.readouterr().out
    return code, out


def test_rotset(capsys):
    code, out = invoke(capsys, "rotset", "--nu", "1/2")
    assert code == 0
    data = json.loads(out)
    assert data["points"] == ["1/3", "2/3"] and data["rho"] == "1/2"


def test_rotset_usage_error(capsys):
    with pytest.raises(SystemExit) as exc:
        run(["rotset", "--nu", "3/2"])
    assert exc.value.code == 2


def test_unknown_flag_rejected():
    with pytest.raises(SystemExit) as exc:
        run(["rotset", "--nu", "1/2", "--bogus"])
    assert exc.value.code == 2


def test_tower(capsys):
    code, out = invoke(capsys, "tower", "--tower", "feigenbaum", "--depth", "3")
    assert code == 0
    levels = json.loads(out)
    assert [lv["period"] for lv in levels] == [2, 4, 8]


def test_named_tower_needs_depth():
    with pytest.raises(SystemExit) as exc:
        run(["tower", "--tower", "feigenbaum"])
    assert exc.value.code == 2


def test_validate_pass(capsys):
    code, out = invoke(capsys, "validate", "--tower", "rabbit", "--depth", "2")
    assert code == 0
    assert json.loads(out)["pass"]


def test_validate_failure_exit_code(capsys):
    bad = json.dumps([{"period": 2, "lo": "1/3", "hi": "2/3"}, {"period": 4, "lo": "1/5", "hi": "2/5"}])
    code, out = invoke(capsys, "validate", "--tower", bad)
    assert code == 1
    assert not json.loads(out)["pass"]


def test_window_and_sub(capsys):
    code, out = invoke(capsys, "window", "--tower", "feigenbaum", "--depth", "1", "--level", "1", "--j", "1")
    assert code == 0
    comps = json.loads(out)["components"]
    assert [c["start"] for c in comps] == ["1/3", "7/12"]
    code, out = invoke(capsys, "window", "--tower", "feigenbaum", "--depth", "1", "--level", "1", "--j", "2", "--sub")
    assert code == 0
    assert len(json.loads(out)["components"]) == 4


def test_theta(capsys):
    code, out = invoke(capsys, "theta", "--tower", "feigenbaum", "--depth", "1", "--level", "1", "--t", "4/5")
    assert code == 0
    assert json.loads(out)["value"] == "1/3"


def test_theta_domain_error(capsys):
    code, _ = invoke(capsys, "theta", "--tower", "feigenbaum", "--depth", "1", "--level", "1", "--t", "1/7")
    assert code == 1


def test_shadow(capsys):
    code, out = invoke(capsys, "shadow", "--tower", "feigenbaum", "--depth", "1", "--level", "1", "--j", "1", "--t", "2/5")
    assert code == 0
    assert json.loads(out)["in_shadow"] is True


def test_green(capsys):
    code, out = invoke(capsys, "green", "--c", "0", "--z", "2")
    assert code == 0
    assert abs(json.loads(out)["green"] - 0.6931471805599453) < 1e-12


def test_ray(capsys):
    code, out = invoke(capsys, "ray", "--c", "-2", "--t", "0", "--level-min", "1e-8")
    assert code == 0
    data = json.loads(out)
    assert abs(data["landing"][0] - 2.0) < 1e-6


def test_periodic(capsys):
    code, out = invoke(capsys, "periodic", "--c", "0", "--m", "2")
    assert code == 0
    assert len(json.loads(out)["points"]) == 4


def test_lamination_svg(tmp_path, capsys):
    out_file = tmp_path / "lam.svg"
    code, out = invoke(capsys, "lamination", "--tower", "feigenbaum", "--depth", "3", "--out", str(out_file))
    assert code == 0
    assert json.loads(out)["chords"] == 7
    assert out_file.read_text().startswith("<?xml")


def test_render(tmp_path, capsys):
    scene = tmp_path / "scene.json"
    scene.write_text(json.dumps({"c": [0, 0], "width": 16, "height": 16, "layers": [{"type": "julia", "max_iter": 20}]}))
    out_file = tmp_path / "img.ppm"
    code, out = invoke(capsys, "render", "--scene", str(scene), "--out", str(out_file))
    assert code == 0
    assert out_file.read_bytes().startswith(b"P6\n16 16\n255\n")


def test_out_file_instead_of_stdout(tmp_path, capsys):
    out_file = tmp_path / "rot.json"
    code, out = invoke(capsys, "rotset", "--nu", "1/3", "--out", str(out_file))
    assert code == 0
    assert out == ""
    assert json.loads(out_file.read_text())["points"] == ["1/7", "2/7", "4/7"]


def test_stdout_determinism(capsys):
    _, out1 = invoke(capsys, "window", "--tower", "rabbit", "--depth", "2", "--level", "2", "--j", "3")
    _, out2 = invoke(capsys, "window", "--tower", "rabbit", "--depth", "2", "--level", "2", "--j", "3")
    assert out1 == out2
