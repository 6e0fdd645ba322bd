import json

import pytest

from gnnharness.cli import main

from corpus_helpers import make_corpus_files, write_random_features


@pytest.fixture(scope="module")
def corpus_paths(tmp_path_factory):
    td = tmp_path_factory.mktemp("cli")
    return make_corpus_files(td, 20, seed=31, name="cli")


def bench_args(ds, feat, out, *extra):
    return [
        "bench", "--dataset", str(ds), "--features", str(feat),
        "--arch", "graphconv", "--hidden", "8", "--layers", "2",
        "--k-sort", "10", "--epochs", "1", "--folds", "2", "--seed", "3",
        "--out", str(out), *extra,
    ]


class TestBench:
    def test_writes_result_json(self, corpus_paths, tmp_path, capsys):
        ds, feat = corpus_paths
        out = tmp_path / "result.json"
        assert main(bench_args(ds, feat, out)) == 0
        payload = json.loads(out.read_text())
        assert payload["architecture"] == "graphconv"
        assert payload["scheme"] == "deg-onehot"
        assert payload["dataset"] == "cli"
        assert len(payload["fold_aucs"]) == 2
        assert payload["config"]["epochs"] == 1
        assert payload["config"]["optimizer"] == "adamw"
        line = capsys.readouterr().out
        assert "graphconv on cli [deg-onehot]" in line

    def test_missing_dataset_file_exits_3(self, corpus_paths, tmp_path, capsys):
        _, feat = corpus_paths
        code = main(bench_args(tmp_path / "nope.jsonl", feat, tmp_path / "r.json"))
        assert code == 3
        assert "error:" in capsys.readouterr().err

    def test_bad_arch_exits_2(self, corpus_paths, tmp_path):
        ds, feat = corpus_paths
        argv = bench_args(ds, feat, tmp_path / "r.json")
        argv[argv.index("graphconv")] = "mlp"
        with pytest.raises(SystemExit) as exc:
            main(argv)
        assert exc.value.code == 2

    def test_bad_folds_exits_2(self, corpus_paths, tmp_path, capsys):
        ds, feat = corpus_paths
        argv = bench_args(ds, feat, tmp_path / "r.json")
        argv[argv.index("--folds") + 1] = "1"
        assert main(argv) == 2
        assert "folds" in capsys.readouterr().err

    def test_shuffle_flag_recorded(self, corpus_paths, tmp_path):
        ds, feat = corpus_paths
        out = tmp_path / "r.json"
        assert main(bench_args(ds, feat, out, "--shuffle-labels")) == 0
        assert json.loads(out.read_text())["config"]["shuffle_labels"] is True


class TestCompare:
    def write_spec(self, tmp_path, ds, feat_a, feat_b, extra=""):
        spec = tmp_path / "experiments.toml"
        spec.write_text(
            f"""
[defaults]
dataset = "{ds}"
arch = "graphconv"
hidden = 8
layers = 2
k_sort = 10
epochs = 1
folds = 2
seed = 3
{extra}

[[run]]
features = "{feat_a}"
label = "deg"

[[run]]
features = "{feat_b}"
label = "alt"
""",
            encoding="utf-8",
        )
        return spec

    def test_end_to_end_table(self, corpus_paths, tmp_path, capsys):
        ds, feat = corpus_paths
        alt = tmp_path / "alt.jsonl"
        write_random_features(alt, ds, scheme="ac-rank", dim=4, seed=5)
        spec = self.write_spec(tmp_path, ds, feat, alt)
        results_dir = tmp_path / "results"  # created by the command
        out = tmp_path / "table.md"
        code = main(["compare", "--spec", str(spec), "--out", str(out),
                     "--results-dir", str(results_dir)])
        assert code == 0
        table = out.read_text()
        assert table.startswith("| dataset | architecture | deg | alt |")
        assert "**" in table  # one cell per row is bolded
        assert "| cli | graphconv |" in table
        saved = sorted(p.name for p in results_dir.iterdir())
        assert saved == ["run-01-graphconv-deg.json", "run-02-graphconv-alt.json"]
        assert "run 1/2" in capsys.readouterr().out

    def test_spec_missing_run_tables(self, tmp_path, capsys):
        spec = tmp_path / "s.toml"
        spec.write_text('[defaults]\narch = "gcn"\n')
        assert main(["compare", "--spec", str(spec), "--out", str(tmp_path / "t.md")]) == 2
        assert "[[run]]" in capsys.readouterr().err

    def test_spec_unknown_key(self, tmp_path, capsys):
        spec = tmp_path / "s.toml"
        spec.write_text('[[run]]\nfeatures = "f"\narch = "gcn"\ndataset = "d"\nbogus = 1\n')
        assert main(["compare", "--spec", str(spec), "--out", str(tmp_path / "t.md")]) == 2
        assert "bogus" in capsys.readouterr().err

    def test_spec_missing_required_field(self, tmp_path, capsys):
        spec = tmp_path / "s.toml"
        spec.write_text('[[run]]\nfeatures = "f"\narch = "gcn"\n')
        assert main(["compare", "--spec", str(spec), "--out", str(tmp_path / "t.md")]) == 2
        assert "dataset" in capsys.readouterr().err

    def test_spec_features_not_allowed_in_defaults(self, tmp_path, capsys):
        spec = tmp_path / "s.toml"
        spec.write_text('[defaults]\nfeatures = "f"\n\n[[run]]\narch = "gcn"\ndataset = "d"\n')
        assert main(["compare", "--spec", str(spec), "--out", str(tmp_path / "t.md")]) == 2
        assert "per run" in capsys.readouterr().err

    def test_invalid_toml_exits_3(self, tmp_path, capsys):
        spec = tmp_path / "s.toml"
        spec.write_text("not [ valid")
        assert main(["compare", "--spec", str(spec), "--out", str(tmp_path / "t.md")]) == 3
        assert "TOML" in capsys.readouterr().err

    def test_bad_field_type_exits_2(self, tmp_path, corpus_paths, capsys):
        ds, feat = corpus_paths
        spec = tmp_path / "s.toml"
        spec.write_text(
            f'[[run]]\nfeatures = "{feat}"\narch = "gcn"\ndataset = "{ds}"\nepochs = "ten"\n'
        )
        assert main(["compare", "--spec", str(spec), "--out", str(tmp_path / "t.md")]) == 2
