import json
import math

import pytest

from geodisc.cli import main


def run_cli(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, out


def test_classify_worked_example(capsys):
    code, out = run_cli(capsys, "classify", "--alpha", "3,0", "4,0", "5,0")
    assert code == 0
    assert json.loads(out) == {"class": "NonRetract"}


def test_classify_retract(capsys):
    code, out = run_cli(capsys, "classify", "--alpha", "1,0", "1,0", "3,0")
    assert code == 0
    assert json.loads(out) == {"class": "RetractGraph", "axis": 3}


def test_distance_worked_example(capsys):
    code, out = run_cli(
        capsys, "distance", "dab", "--a", "0.8", "--b", "0.8",
        "--z", "0,0", "0,0", "--w", "0.5,0", "0,0",
    )
    assert code == 0
    obj = json.loads(out)
    assert obj["c"] == pytest.approx(math.atanh(2.0 / 3.0), abs=1e-12)
    assert f"{obj['c']:.6f}" == "0.804719"


def test_distance_polydisc(capsys):
    code, out = run_cli(
        capsys, "distance", "polydisc", "--z", "0,0", "0,0", "0,0",
        "--w", "0.5,0", "-0.666666,0", "0,0",
    )
    assert code == 0
    assert json.loads(out)["c"] == pytest.approx(math.atanh(0.666666), abs=1e-9)


def test_verify_lempert_report(capsys):
    code, out = run_cli(
        capsys, "verify-lempert", "--a", "0.8", "--b", "0.8", "--samples", "100", "--seed", "7"
    )
    assert code == 0
    obj = json.loads(out)
    assert obj["failures"] == 0
    assert obj["samples"] == 100
    assert obj["worst_residual"] < 1e-9


def test_verify_lempert_deterministic(capsys):
    args = ("verify-lempert", "--a", "0.8", "--b", "0.8", "--samples", "50", "--seed", "3")
    _, out1 = run_cli(capsys, *args)
    _, out2 = run_cli(capsys, *args)
    assert out1 == out2
    _, out4 = run_cli(capsys, *args, "--workers", "4")
    assert out1 == out4


def test_geodesic_command(capsys):
    code, out = run_cli(capsys, "geodesic", "--a", "0.8", "--b", "0.8", "--z", "0.5,0", "0,0")
    assert code == 0
    obj = json.loads(out)
    assert obj["residual"] < 1e-9
    assert obj["caratheodory_value"] == pytest.approx(math.atanh(2.0 / 3.0), abs=1e-12)
    assert obj["permutation"] == [1, 2, 3]


def test_lens_command(capsys):
    code, out = run_cli(capsys, "lens", "--a", "0.8", "--b", "0.8", "--gamma=-0.625,0")
    assert code == 0
    obj = json.loads(out)
    sq = math.sqrt(0.609375)
    assert obj["corners"][0] == pytest.approx([-0.625, sq], abs=1e-12)
    assert obj["solutions"][0]["omega"] == pytest.approx([0.625, sq], abs=1e-12)


def test_convexity_command(capsys):
    code, out = run_cli(capsys, "convexity", "--a", "0.8", "--b", "0.8")
    assert code == 0
    obj = json.loads(out)
    assert obj["all_unimodular"] is True
    assert obj["moduli"] == pytest.approx([1.0, 1.0], abs=1e-12)


def test_universal_command(capsys):
    code, out = run_cli(
        capsys, "universal", "--a", "0.8", "--b", "0.8", "--z", "0,0", "0,0", "--w", "0.5,0", "0,0"
    )
    assert code == 0
    obj = json.loads(out)
    assert obj["c"] == pytest.approx(math.atanh(2.0 / 3.0), abs=1e-12)
    assert obj["members"] == ["z1", "z2", "f_ab"]
    code, out = run_cli(
        capsys, "universal", "--a", "0.8", "--b", "0.9", "--X", "1,0", "-1,0"
    )
    obj = json.loads(out)
    assert obj["gamma"] == pytest.approx(1.0, abs=1e-12)
    assert obj["kappa_formula"] == pytest.approx(1.0, abs=1e-15)


def test_ball_commands(capsys):
    code, out = run_cli(capsys, "ball", "cstar", "--w", "0,0", "0,0", "--z", "0.5,0", "0,0")
    assert code == 0
    assert json.loads(out)["cstar"] == pytest.approx(0.5, abs=1e-13)
    code, out = run_cli(capsys, "ball", "F", "--z", "0.3,0", "0,0")
    assert json.loads(out)["value"] == pytest.approx([0.3, 0.0], abs=1e-13)
    code, out = run_cli(capsys, "ball", "locus", "--z", "0,0", "1,0")
    assert json.loads(out)["on_locus"] is True
    code, out = run_cli(capsys, "ball", "extremal", "--base", "0.5,0", "0,0", "--direction", "0,0", "1,0")
    obj = json.loads(out)
    flat = [x for pair in obj["minimal_point"] for x in pair]
    assert flat == pytest.approx([0.5, 0.0, 0.0, 0.0], abs=1e-13)


def test_sweep_deterministic_and_degenerate(capsys):
    args = (
        "sweep", "--a-min", "0.7", "--a-max", "0.9", "--a-steps", "2",
        "--b-min", "0.7", "--b-max", "0.9", "--b-steps", "2",
        "--samples", "5", "--seed", "11",
    )
    code, out1 = run_cli(capsys, *args)
    assert code == 0
    _, out2 = run_cli(capsys, *args)
    assert out1 == out2
    lines = out1.strip().split("\n")
    assert lines[0].startswith("index,a,b,status")
    assert len(lines) == 5
    # degenerate cells flagged with --allow-degenerate
    code, out = run_cli(
        capsys, "sweep", "--a-min", "0.3", "--a-max", "0.8", "--a-steps", "2",
        "--b-min", "0.3", "--b-max", "0.8", "--b-steps", "2",
        "--samples", "5", "--seed", "11", "--allow-degenerate",
    )
    assert code == 0
    assert "retract-regime" in out


def test_sweep_rejects_degenerate_without_flag(capsys):
    code, out = run_cli(
        capsys, "sweep", "--a-min", "0.3", "--a-max", "0.4", "--a-steps", "2",
        "--b-min", "0.3", "--b-max", "0.4", "--b-steps", "2",
        "--samples", "5", "--seed", "11",
    )
    assert code == 1
    assert "error" in json.loads(out)


def test_plotdata_lens_contains_exact_corners(capsys):
    code, out = run_cli(capsys, "plotdata", "lens", "--a", "0.8", "--b", "0.8", "--n", "16")
    assert code == 0
    lines = out.strip().split("\n")
    assert lines[0] == "segment,re,im"
    corners = [l for l in lines if l.startswith("corner")]
    sq = math.sqrt(0.609375)
    assert corners[0].split(",")[1:] == [repr(-0.625), repr(sq)]
    assert corners[1].split(",")[1:] == [repr(-0.625), repr(-sq)]


def test_plotdata_arc_and_indicatrix(capsys):
    code, out = run_cli(capsys, "plotdata", "arc", "--a", "0.8", "--b", "0.8", "--gamma=-0.625,0")
    assert code == 0
    assert out.startswith("theta_lo,theta_hi")
    code, out = run_cli(capsys, "plotdata", "indicatrix", "--a", "0.8", "--b", "0.9", "--n", "8")
    lines = out.strip().split("\n")
    assert lines[0] == "theta,X1,X2,kappa,radius"
    assert len(lines) == 9


def test_plotdata_locus(capsys):
    code, out = run_cli(capsys, "plotdata", "locus", "--n", "4")
    lines = out.strip().split("\n")
    assert lines[0] == "z1_re,z1_im,z2_re,z2_im,im_value,on_locus"
    assert len(lines) == 1 + 4**3


def test_validation_error_exit_code(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["classify", "--alpha", "bogus"])
    assert exc.value.code == 2


def test_computational_error_exit_code(capsys):
    code, out = run_cli(capsys, "distance", "dab", "--a", "0.8", "--b", "0.8",
                        "--z", "0,0", "0,0", "--w", "0.99,0", "0.99,0")
    assert code == 1
    obj = json.loads(out)
    assert obj["error"]["type"] == "NotInDomain"


def test_json_numbers_round_trip(capsys):
    _, out = run_cli(capsys, "distance", "dab", "--a", "0.8", "--b", "0.8",
                     "--z", "0,0", "0,0", "--w", "0.5,0", "0,0")
    val = json.loads(out)["c"]
    assert json.loads(json.dumps({"c": val}))["c"] == val
