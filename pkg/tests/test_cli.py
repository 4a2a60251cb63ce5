from pathlib import Path
from xml.etree import ElementTree as ET

import numpy as np
import pytest

from minkenv.cli import EXIT_CHECK_FAILED, EXIT_INPUT, EXIT_OK, main
from minkenv.config import ConfigError, dumps, loads
from minkenv.dual import DomainError
from minkenv.envelope import EnvelopeCurve, envelope_verify, grid_derivative
from minkenv.fixtures import fixture
from minkenv.output import read_csv, to_csv, to_svg
from minkenv.pipeline import analyze, build_family

CONFIGS = Path(__file__).resolve().parents[1] / "configs"
SVG = "{http://www.w3.org/2000/svg}"


def _write(tmp_path, text, name="family.cfg"):
    p = tmp_path / name
    p.write_text(text)
    return p


def test_loads_basic():
    cfg = loads("# comment\nax = t\nay = t^2  # trailing\nr = 1\nsigma = -1\nt_min = 0.5\nt_max = 2\n")
    assert (cfg.ax, cfg.ay, cfg.r, cfg.sigma, cfg.t_min, cfg.t_max) == ("t", "t^2", "1", -1, 0.5, 2.0)
    assert cfg.n_samples == 601 and cfg.nux is None


@pytest.mark.parametrize("text, line", [
    ("ax = t\nay = t\nr = 1\nbogus = 3\n", 4),
    ("ax = t\nay = t\nr = 1\nsigma = 2\n", 4),
    ("ax = t\nay = (t\nr = 1\n", 2),
    ("ax = t\nay = t\nr = 1\nt_min = 1\nt_max = 1\n", 5),
    ("ax = t\nay = t\nr = 1\nn_samples = 8\n", 4),
    ("ax = t\nnot a pair\n", 2),
    ("ax = t\nax = t\n", 2),
])
def test_config_errors_carry_line(text, line):
    with pytest.raises(ConfigError) as err:
        loads(text, "f.cfg")
    assert err.value.line == line and f"f.cfg:{line}" in str(err.value)


def test_missing_keys():
    with pytest.raises(ConfigError, match="missing"):
        loads("ax = t\n")


def test_zero_radius_is_a_config_error(tmp_path):
    p = _write(tmp_path, "ax = cosh(t)\nay = sinh(t)\nr = 0\nt_min = -1\nt_max = 1\n")
    assert main(["run", str(p)]) == EXIT_INPUT
    cfg = loads(p.read_text(), str(p))
    with pytest.raises(ConfigError) as err:
        build_family(cfg)
    assert err.value.line == 3


def test_domain_error_names_the_expression(tmp_path):
    p = _write(tmp_path, "ax = t\nay = sqrt(t)\nr = 1\nt_min = -1\nt_max = 1\n")
    from minkenv import config
    with pytest.raises(DomainError, match=r":2: ay = sqrt\(t\)"):
        build_family(config.load(p))


def test_fixture_config_round_trip():
    for n in (1, 2, 3, 4, 5):
        cfg = fixture(n).config
        back = loads(dumps(cfg))
        assert dumps(back) == dumps(cfg)


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5])
def test_examples_exit_zero(n, capsys):
    assert main(["example", str(n), "--samples", "201"]) == EXIT_OK
    assert "result: PASS" in capsys.readouterr().out


def test_example_reports(capsys):
    main(["example", "3"])
    out = capsys.readouterr().out
    assert "summary: NotCreative; classification NoEnvelope; D slices all Empty" in out
    main(["example", "1"])
    out = capsys.readouterr().out
    assert "ExactlyTwo" in out and "pseudo-circle(center=(0, 1), r=1, sigma=+1) at t=0" in out
    main(["example", "2"])
    assert "classification Unique" in capsys.readouterr().out


def test_config_reproduces_example_report(capsys):
    main(["example", "2"])
    a = capsys.readouterr().out
    main(["run", str(CONFIGS / "example2.cfg")])
    b = capsys.readouterr().out
    body = lambda s: s.split("summary:", 1)[1]
    assert body(a).replace("\n  [PASS] classification.expected: got Unique, expected Unique", "") == body(b)


def test_failing_check_exits_one(capsys):
    # a tolerance scale far below rounding makes the frame check fail
    assert main(["example", "2", "--tol", "1e-12"]) == EXIT_CHECK_FAILED
    assert "first failing check: frame" in capsys.readouterr().out


def test_compare_exit_codes(capsys):
    assert main(["compare", str(CONFIGS / "example4.cfg")]) == EXIT_OK
    # neighbouring circles of this family never meet, so there is no E1 limit
    assert main(["compare", str(CONFIGS / "example2.cfg")]) == EXIT_CHECK_FAILED
    assert "e1.convergence" in capsys.readouterr().out


def test_csv_deterministic(tmp_path):
    for d in ("a", "b"):
        assert main(["example", "1", "--csv", "--out-dir", str(tmp_path / d)]) == EXIT_OK
    a = (tmp_path / "a" / "example1.csv").read_bytes()
    assert a == (tmp_path / "b" / "example1.csv").read_bytes()
    header, first = a.decode().splitlines()[:2]
    assert header == "object_type,branch_id,t,x,y"
    assert first.startswith("center,0,")


def test_csv_round_trip_verifies():
    res = analyze(fixture(2).config)
    rows = read_csv(to_csv(res))
    fam = res.family
    for bid, arr in rows["envelope"].items():
        env = EnvelopeCurve(arr[:, 0], arr[:, 1:], bid, fam)
        assert envelope_verify(env, fam, 1e-6).passed
    centre = rows["center"][0]
    assert np.array_equal(centre[:, 1:], fam.frame.a)


def test_csv_round_trip_grid_derivative():
    res = analyze(fixture(1).config)
    rows = read_csv(to_csv(res))
    plus = max(rows["envelope"].values(), key=lambda a: np.ptp(a[:, 2]))
    fp = grid_derivative(plus[:, 1:], res.family.frame.h)
    t = plus[:, 0]
    want = np.column_stack([6 * t**2, 6 * t**5 / np.sqrt(1 + t**6)])
    assert np.max(np.abs(fp - want)) < 1e-6


def test_csv_contains_singular_circle():
    rows = read_csv(to_csv(analyze(fixture(1).config)))
    sheets = rows["circle"]
    assert set(sheets) == {0, 1}
    xy = np.concatenate([s[:, 1:] for s in sheets.values()])
    d = xy - [0.0, 1.0]
    assert np.max(np.abs(-d[:, 0] ** 2 + d[:, 1] ** 2 - 1.0)) < 1e-9


def _svg(n):
    return ET.fromstring(to_svg(analyze(fixture(n).config)))


def test_svg_example1():
    root = _svg(1)
    assert root.get("width") == "800" and root.get("height") == "800"
    singular = root.find(f".//{SVG}g[@class='singular']")
    assert singular.get("stroke-dasharray") == "6 4" and len(singular) == 2
    assert len(root.findall(f".//*[@class='envelope']")) == 2
    assert len(root.find(f".//{SVG}g[@class='family']")) == 2 * 21


def test_svg_example3_only_family_and_centre():
    root = _svg(3)
    assert root.findall(f".//*[@class='envelope']") == []
    assert root.find(f".//{SVG}g[@class='discriminant']") is None
    assert len(root.find(f".//{SVG}g[@class='singular']")) == 0
    assert root.find(f".//{SVG}path[@class='center']") is not None


def test_render_writes_svg(tmp_path, capsys):
    assert main(["render", str(CONFIGS / "example3.cfg"), "--out-dir", str(tmp_path)]) == EXIT_OK
    assert (tmp_path / "example3.svg").exists()
    assert not (tmp_path / "example3.csv").exists()


def test_missing_config_file(tmp_path, capsys):
    assert main(["run", str(tmp_path / "nope.cfg")]) == EXIT_INPUT
    assert "cannot read config" in capsys.readouterr().err
