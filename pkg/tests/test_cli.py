import csv
import json

import numpy as np
import pytest

from conftest import circle_waypoints
from qcmaps.cli import main


@pytest.fixture()
def quarter_target(tmp_path):
    path = tmp_path / "quarter.json"
    path.write_text(
        json.dumps(
            {
                "waypoints": circle_waypoints().tolist(),
                "closed": False,
                "C": 2.5,
            }
        )
    )
    return path


def test_verify_bilipschitz_passes(tmp_path):
    out = tmp_path / "report.json"
    code = main(["verify", "bilipschitz", "--grid", "200", "--out", str(out)])
    assert code == 0
    report = json.loads(out.read_text())
    assert report["passed"]
    low = next(c for c in report["checks"] if c["name"] == "eigenvalue-lower")
    assert low["worst"] >= low["bound"]


def test_verify_spiral_auto_reports_alpha(tmp_path):
    out = tmp_path / "spiral.json"
    code = main(
        ["verify", "spiral", "--K", "2", "--grid", "17", "--samples", "100",
         "--out", str(out)]
    )
    assert code == 0
    report = json.loads(out.read_text())
    assert report["passed"]
    assert abs(report["alpha"]) > 0
    floor = next(c for c in report["checks"] if c["name"] == "jacobian-floor")
    assert floor["worst"] > 0.25


def test_verify_negative_control(tmp_path):
    code = main(["verify", "stretch", "--bound", "1.0", "--grid", "9",
                 "--out", str(tmp_path / "r.json")])
    assert code == 1


def test_verify_rejects_bad_dimension(capsys):
    code = main(["verify", "zorich", "--dim", "2"])
    assert code == 1
    assert "dimension" in capsys.readouterr().err


def test_verify_deterministic(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    main(["verify", "stretch", "--grid", "9", "--seed", "3", "--out", str(a)])
    main(["verify", "stretch", "--grid", "9", "--seed", "3", "--out", str(b)])
    assert a.read_bytes() == b.read_bytes()


def test_realize_quarter_circle(tmp_path, quarter_target):
    prefix = tmp_path / "run"
    code = main(
        ["realize", str(quarter_target), "--kmax", "5", "--samples", "60",
         "--out", str(prefix)]
    )
    assert code == 0
    summary = json.loads((tmp_path / "run.summary.json").read_text())
    assert summary["checkpoint_max_error"] <= 1e-6
    haus = [summary["hausdorff_by_k"][str(k)] for k in range(1, 6)]
    assert haus == sorted(haus, reverse=True) or all(
        b <= a + 1e-9 for a, b in zip(haus, haus[1:])
    )
    assert haus[-1] <= 0.4
    lo, hi = summary["orbit_annulus"]
    assert 0 < lo <= hi < np.inf

    with open(f"{prefix}.orbit.csv") as fh:
        rows = list(csv.reader(fh))
    assert rows[0] == ["t", "y_1", "y_2", "y_3", "piece_index", "rho"]
    data = np.array([[float(v) for v in r] for r in rows[1:]])
    assert np.all(np.isfinite(data))
    # 17-significant-digit round trip: re-parsing reproduces the values
    assert data.shape[0] == summary["samples"]


def test_realize_singleton_constant_orbit(tmp_path):
    target = tmp_path / "point.json"
    target.write_text(json.dumps({"waypoints": [[2.0, 0.0, 0.0]]}))
    prefix = tmp_path / "pt"
    assert main(["realize", str(target), "--kmax", "3", "--out", str(prefix)]) == 0
    with open(f"{prefix}.orbit.csv") as fh:
        rows = list(csv.reader(fh))[1:]
    gamma = np.array([[float(v) for v in r[1:4]] for r in rows])
    assert np.abs(gamma - gamma[0]).max() <= 1e-12


def test_realize_radial_segment(tmp_path):
    target = tmp_path / "seg.json"
    target.write_text(
        json.dumps({"waypoints": [[1.0, 0.0, 0.0], [2.0, 0.0, 0.0]]})
    )
    prefix = tmp_path / "seg"
    assert main(["realize", str(target), "--kmax", "4", "--samples", "80",
                 "--out", str(prefix)]) == 0
    with open(f"{prefix}.orbit.csv") as fh:
        rows = list(csv.reader(fh))[1:]
    gamma = np.array([[float(v) for v in r[1:4]] for r in rows])
    assert np.abs(gamma[:, 1:]).max() <= 1e-6  # direction stays e_1
    assert gamma[:, 0].min() >= 1 - 1e-6 and gamma[:, 0].max() <= 2 + 1e-6


def test_realize_antipodal_hop_reports_error(tmp_path, capsys):
    target = tmp_path / "anti.json"
    target.write_text(
        json.dumps({"waypoints": [[2.0, 0.0, 0.0], [-2.0, 0.0, 0.0]]})
    )
    code = main(["realize", str(target), "--out", str(tmp_path / "x")])
    assert code == 1
    assert "antipodal" in capsys.readouterr().err


def test_realize_bad_file(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert main(["realize", str(bad), "--out", str(tmp_path / "x")]) == 1
    assert "parse" in capsys.readouterr().err


def test_probe_stretch_t_independent(tmp_path):
    prefix = tmp_path / "ps"
    code = main(
        ["probe", "--map", "stretch", "--K", "8", "--t", "1,0.25,0.01",
         "--grid", "32", "--out", str(prefix)]
    )
    assert code == 0
    summary = json.loads((tmp_path / "ps.summary.json").read_text())
    assert summary["slice_variation"] <= 1e-9


def test_probe_rotation_slices_equal_rotation(tmp_path):
    prefix = tmp_path / "pr"
    assert main(
        ["probe", "--map", "rotation", "--theta", "0.6", "--t", "2,0.5",
         "--grid", "16", "--out", str(prefix)]
    ) == 0
    summary = json.loads((tmp_path / "pr.summary.json").read_text())
    assert summary["slice_variation"] <= 1e-9


def test_probe_realized_map_varies(tmp_path, quarter_target):
    prefix = tmp_path / "pv"
    assert main(
        ["probe", "--map", "realized", "--target", str(quarter_target),
         "--kmax", "3", "--t", "0.9,0.05,0.002", "--grid", "24",
         "--out", str(prefix)]
    ) == 0
    summary = json.loads((tmp_path / "pv.summary.json").read_text())
    assert summary["slice_variation"] > 0.1


def test_usage_error_exit_code():
    with pytest.raises(SystemExit) as exc:
        main(["verify", "nonsense-suite"])
    assert exc.value.code == 2
