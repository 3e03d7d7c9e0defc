"""CLI surface: subcommands, artifacts, exit codes, reproducibility."""

import json

from tfib import cli, zlat


def run(tmp_path, *argv, name="report.json"):
    out = tmp_path / name
    code = cli.main([*argv, "--out", str(out)])
    data = json.loads(out.read_text()) if out.exists() else None
    return code, data, out


def test_graph_k3(tmp_path):
    code, data, _ = run(tmp_path, "graph", "k3")
    assert code == 0
    assert data["vertices"] == 24
    assert data["euler"] == 24


def test_graph_quintic_counts(tmp_path):
    code, data, out = run(tmp_path, "graph", "quintic")
    assert code == 0
    assert data["positive"] == 50
    assert data["negative"] == 250
    assert data["euler"] == -200
    assert data["edges"] == 450
    assert data["components"] == 1
    assert out.with_suffix(".dot").exists()


def test_graph_quintic_dual_and_thicken(tmp_path):
    code, data, _ = run(tmp_path, "graph", "quintic", "--dual")
    assert code == 0 and data["euler"] == 200
    code, data, _ = run(tmp_path, "graph", "quintic", "--thicken", "1/10")
    assert code == 0 and data["thickened"] == 250 and data["euler"] == -200


def test_topo_euler_from_file(tmp_path):
    _, _, out = run(tmp_path, "graph", "k3", name="k3.json")
    code, data, _ = run(tmp_path, "topo", "euler", "--input", str(out))
    assert code == 0 and data["euler"] == 24 and data["dimension"] == 2


def test_topo_sign(tmp_path):
    triple = json.dumps([list(map(list, m)) for m in zlat.NEGATIVE_TRIPLE])
    code, data, _ = run(tmp_path, "topo", "sign", "--triple", triple)
    assert code == 0 and data["sign"] == "negative"


def test_topo_sign_degenerate_is_usage_error(tmp_path):
    ident = json.dumps([list(map(list, zlat.identity(3)))] * 3)
    code = cli.main(["topo", "sign", "--triple", ident])
    assert code == 2


def test_base_roundtrip(tmp_path):
    code, atlas, out = run(tmp_path, "base", "build", "--kind", "negative",
                           name="atlas.json")
    assert code == 0 and len(atlas["charts"]) == 3
    code, data, _ = run(tmp_path, "base", "holonomy", "--input", str(out),
                        "--loop", "g1")
    assert code == 0
    assert data["holonomy"] == [list(r) for r in zlat.NEGATIVE_TRIPLE[0]]
    code, data, _ = run(tmp_path, "base", "check-simple", "--input", str(out))
    assert code == 0 and data["simple"]


def test_fib_poisson_strict_failure(tmp_path):
    code, data, _ = run(tmp_path, "fib", "poisson", "--model", "control",
                        "--samples", "50", "--strict")
    assert code == 1
    assert data["max_bracket"] >= 1e-2


def test_fib_poisson_pass(tmp_path):
    code, data, _ = run(tmp_path, "fib", "poisson", "--model", "sm_ff",
                        "--samples", "100", "--strict")
    assert code == 0 and data["passed"]


def test_periods_monodromy_by_model(tmp_path):
    code, data, _ = run(tmp_path, "periods", "monodromy", "--model", "sm_ff",
                        "--loop", "circle:0.5")
    assert code == 0
    assert data["monodromy"] == [[1, 0], [1, 1]]


def test_unknown_command_usage_error():
    assert cli.main(["fib", "poisson", "--model", "does-not-exist"]) == 2
    assert cli.main(["nonsense"]) == 2


def test_reports_embed_config(tmp_path):
    code, data, _ = run(tmp_path, "fib", "reduce-check", "--t", "0.5",
                        "--samples", "20", "--seed", "3")
    assert code == 0
    assert data["config"]["seed"] == 3
    assert "tol" in data["config"]


def test_byte_identical_reports(tmp_path):
    argv = ["fib", "poisson", "--model", "generic", "--samples", "150",
            "--seed", "11"]
    _, _, out1 = run(tmp_path, *argv, name="a.json")
    _, _, out2 = run(tmp_path, *argv, name="b.json")
    assert out1.read_bytes() == out2.read_bytes()


def test_amoeba_artifacts(tmp_path):
    code, data, out = run(tmp_path, "fib", "amoeba", "--res", "60")
    assert code == 0 and data["oracle_agreement"]
    svg = out.with_suffix(".svg").read_text()
    assert svg.startswith("<svg") and "rect" in svg
    assert out.with_suffix(".csv").exists()


def test_germs_integral_cli(tmp_path):
    code, data, _ = run(tmp_path, "germs", "integral", "--case", "negative")
    assert code == 0 and data["passed"]


def test_topo_validate_cli(tmp_path):
    _, _, out = run(tmp_path, "graph", "quintic", name="q.json")
    code, data, _ = run(tmp_path, "topo", "validate", "--input", str(out),
                        "--strict")
    assert code == 0 and data["valid"]


def test_check_simple_strict_rejects_doctored_atlas(tmp_path):
    from tfib import affine
    from test_affine import doctored_node_model

    atlas = tmp_path / "doctored.json"
    atlas.write_text(json.dumps(affine.base_to_json(doctored_node_model())))
    code, data, _ = run(tmp_path, "base", "check-simple", "--input",
                        str(atlas), "--strict")
    assert code == 1
    assert not data["simple"]
