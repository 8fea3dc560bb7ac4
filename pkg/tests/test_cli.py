"""Command-line contract: exit codes, determinism, and operation coverage."""

import json

import pytest

import segal
from segal import cli
from segal.cli import COMMANDS, main

# Operations that must stay reachable from the command line.  One entry per
# public callable; a command lists what it exercises in its `uses` field.
REQUIRED_OPS = {
    "cobordism.validate_type",
    "cobordism.compose_types",
    "cobordism.disjoint_union",
    "cobordism.is_stable",
    "cobordism.octype_to_json",
    "cobordism.octype_from_json",
    "corpus.random_octype",
    "corpus.random_successor",
    "corpus.enumerate_small_types",
    "corpus.generate_quads",
    "beltrami.mu_of_linear",
    "beltrami.dilatation_K",
    "beltrami.abs_mu_from_K",
    "beltrami.transform_mu",
    "beltrami.pullback_mu",
    "beltrami.teichmuller_distance",
    "beltrami.acs_from_frame",
    "beltrami.mu_from_acs",
    "beltrami.acs_from_mu",
    "beltrami.field_distance",
    "beltrami.transform_field",
    "beltrami.pullback_field",
    "beltrami.sew_sections",
    "quasisym.qs_bound",
    "quasisym.sampled_identity",
    "quasisym.sampled_slope_break",
    "quasisym.sampled_exp",
    "quasisym.circle_identity",
    "quasisym.circle_rotation",
    "quasisym.half_angle_piecewise",
    "quasisym.half_angle_smooth",
    "quasisym.corner_transform",
    "quasisym.corner_dilatation",
    "quasisym.corner_map",
    "quasisym.smooth_twist",
    "modulus.module_sc",
    "modulus.normalize_quad",
    "modulus.cross_ratio",
    "modulus.rotated_position",
    "modulus.module_rect",
    "modulus.module_of_quad",
    "modulus.check_geometric_qc",
    "chains.generator",
    "chains.shuffle_product",
    "chains.boundary",
    "chains.swap_factors",
    "chains.check_chain_map",
    "chains.check_associativity",
    "chains.check_symmetry",
    "flattening.order_step",
    "flattening.order_sequence",
    "flattening.glue_identity",
    "flattening.glue_linear",
    "flattening.glue_sine",
    "flattening.tau_minus1",
    "flattening.base_structure_field",
    "flattening.next_structure_field",
    "flattening.flatten_step",
    "flattening.verify_orders",
    "acceptance.run_acceptance",
    "acceptance.load_corpus",
}

SPEC_SUBCOMMANDS = {
    ("types", "validate"),
    ("types", "compose"),
    ("types", "union"),
    ("types", "stability"),
    ("belt", "distance"),
    ("belt", "transform"),
    ("belt", "pullback"),
    ("belt", "sew"),
    ("qs", "bound"),
    ("qs", "corner"),
    ("qs", "twist"),
    ("module", "compute"),
    ("module", "check-qc"),
    ("chains", "product"),
    ("chains", "check"),
    ("appb", "orders"),
    ("appb", "flatten"),
    (None, "accept"),
}


class TestDispatchTable:
    def test_contracted_subcommands_exist(self):
        present = {(c.group, c.name) for c in COMMANDS}
        assert SPEC_SUBCOMMANDS <= present

    def test_every_operation_reachable(self):
        reachable = {u for c in COMMANDS for u in c.uses}
        missing = REQUIRED_OPS - reachable
        assert not missing, f"operations without a subcommand: {sorted(missing)}"

    def test_uses_resolve_to_callables(self):
        for c in COMMANDS:
            for u in c.uses:
                mod_name, fn_name = u.split(".")
                mod = getattr(segal, mod_name)
                assert callable(getattr(mod, fn_name)), u

    def test_uses_appear_in_cli_source(self):
        import inspect

        src = inspect.getsource(cli)
        # the chain-algebra module is imported under an alias
        for c in COMMANDS:
            for u in c.uses:
                text = u.replace("chains.", "chainalg.")
                assert text in src, f"{u} listed but never referenced"


class TestExitCodes:
    def test_malformed_json_is_input_error(self, tmp_path, capsys):
        p = tmp_path / "broken.json"
        p.write_text('{"components": \n', encoding="utf-8")
        assert main(["types", "validate", str(p)]) == 2
        err = capsys.readouterr().err
        assert f"{p}:2:1:" in err

    def test_missing_file_is_input_error(self, tmp_path, capsys):
        assert main(["types", "validate", str(tmp_path / "missing.json")]) == 2

    def test_missing_corpus_is_input_error(self, tmp_path, capsys):
        assert main(["accept", "--corpus", str(tmp_path / "nowhere")]) == 2
        assert "quads.json" in capsys.readouterr().err

    def test_broken_corpus_type_is_named_failure(self, tmp_path, capsys):
        from segal import corpus as corpus_mod

        tdir = tmp_path / "types"
        tdir.mkdir()
        quads = corpus_mod.load_bundled("quads.json")
        (tmp_path / "quads.json").write_text(json.dumps(quads), encoding="utf-8")
        d = corpus_mod.load_bundled("types/disc_out.json")
        d["out"]["C"] = 2
        (tdir / "broken_disc.json").write_text(json.dumps(d), encoding="utf-8")
        assert main(["accept", "--corpus", str(tmp_path), "--only", "9"]) == 1
        out = capsys.readouterr().out
        assert "FAIL" in out and "broken_disc" in out

    def test_unknown_profile_is_input_error(self, capsys):
        assert main(["qs", "corner", "--profile", "nope"]) == 2

    def test_failing_check_exits_one(self, tmp_path, capsys):
        # no incoming closed boundary and no cycles at all: unstable
        from segal import cobordism, corpus as corpus_mod

        t = corpus_mod.closed_surface(1)
        p = tmp_path / "torus.json"
        p.write_text(json.dumps(cobordism.octype_to_json(t)), encoding="utf-8")
        assert main(["types", "stability", str(p)]) == 1

    def test_bad_tolerance_scale_is_input_error(self, monkeypatch, capsys):
        monkeypatch.setenv("SEGAL_TOLERANCE_SCALE", "banana")
        assert main(["accept", "--only", "9"]) == 2


class TestDeterminism:
    def _capture(self, capsys, argv):
        code = main(argv)
        return code, capsys.readouterr().out

    def test_accept_json_byte_identical(self, capsys):
        code1, out1 = self._capture(capsys, ["accept", "--only", "9", "--format", "json"])
        code2, out2 = self._capture(capsys, ["accept", "--only", "9", "--format", "json"])
        assert code1 == code2 == 0
        assert out1 == out2

    def test_seeded_type_byte_identical(self, capsys):
        _, out1 = self._capture(capsys, ["types", "random", "--seed", "5", "--format", "json"])
        _, out2 = self._capture(capsys, ["types", "random", "--seed", "5", "--format", "json"])
        assert out1 == out2
        assert out1 != self._capture(capsys, ["types", "random", "--seed", "6", "--format", "json"])[1]

    def test_json_reports_carry_schema(self, capsys):
        _, out = self._capture(capsys, ["qs", "twist", "--profile", "rotation:0.5", "--format", "json"])
        d = json.loads(out)
        assert d["schema"] == "segal.report.twist/1"
        assert d["version"] == segal.__version__

    def test_tolerance_scale_env(self, monkeypatch, capsys):
        monkeypatch.setenv("SEGAL_TOLERANCE_SCALE", "100")
        code, out = self._capture(capsys, ["accept", "--only", "3", "--format", "json"])
        assert code == 0
        d = json.loads(out)
        by_name = {r["name"]: r for r in d["results"]}
        assert by_name["dilatation-round-trip"]["tolerance"] == pytest.approx(1e-10)


class TestTypesCommands:
    def test_random_validate_compose_round_trip(self, tmp_path, capsys):
        t1 = tmp_path / "t1.json"
        t2 = tmp_path / "t2.json"
        out = tmp_path / "c.json"
        assert main(["types", "random", "--seed", "3", "-o", str(t1)]) == 0
        assert main(["types", "random", "--seed", "4", "--successor", str(t1), "-o", str(t2)]) == 0
        capsys.readouterr()
        assert main(["types", "compose", str(t1), str(t2), "-o", str(out)]) == 0
        assert main(["types", "validate", str(out)]) == 0
        text = capsys.readouterr().out
        assert "ok: true" in text

    def test_union_adds_components(self, tmp_path, capsys):
        t1 = tmp_path / "t1.json"
        assert main(["types", "random", "--seed", "3", "-o", str(t1)]) == 0
        capsys.readouterr()
        assert main(["types", "union", str(t1), str(t1), "--format", "json"]) == 0
        d = json.loads(capsys.readouterr().out)
        with open(t1, encoding="utf-8") as fh:
            single = json.load(fh)
        assert len(d["components"]) == 2 * len(single["components"])

    def test_enumerate_count(self, capsys):
        assert main(["types", "enumerate"]) == 0
        assert "count: 152" in capsys.readouterr().out

    def test_mismatched_compose_fails_check(self, tmp_path, capsys):
        from segal import cobordism, corpus as corpus_mod

        a = tmp_path / "a.json"
        a.write_text(
            json.dumps(cobordism.octype_to_json(corpus_mod.disc_out())), encoding="utf-8"
        )
        assert main(["types", "compose", str(a), str(a)]) == 1
        assert "check failed" in capsys.readouterr().err


class TestBeltCommands:
    @pytest.fixture()
    def fields(self, tmp_path):
        from segal import beltrami

        f = beltrami.DilatationField.constant(0.2 + 0.1j, 0.0, 1.0, 0.0, 1.0, 4, 3)
        g = beltrami.DilatationField.constant(0.1 - 0.2j, 1.0, 2.0, 0.0, 1.0, 4, 3)
        pf, pg = tmp_path / "f.json", tmp_path / "g.json"
        pf.write_text(json.dumps(f.to_json()), encoding="utf-8")
        pg.write_text(json.dumps(g.to_json()), encoding="utf-8")
        return pf, pg

    def test_distance_modes(self, fields, capsys):
        pf, pg = fields
        assert main(["belt", "distance", str(pf), str(pf)]) == 0
        assert "distance: 0.0" in capsys.readouterr().out
        assert main(["belt", "distance", "--mu", "0.0", "0.0"]) == 0
        assert "distance: 0.0" in capsys.readouterr().out
        assert main(["belt", "distance"]) == 2

    def test_sew_and_output(self, fields, tmp_path, capsys):
        pf, pg = fields
        out = tmp_path / "sewn.json"
        assert main(["belt", "sew", str(pf), str(pg), "--seam", "x", "-o", str(out)]) == 0
        d = json.loads(out.read_text(encoding="utf-8"))
        assert d["schema"] == "segal.field/1"
        assert d["nx"] == 8

    def test_transform_and_pullback(self, fields, capsys):
        pf, _ = fields
        assert main(["belt", "transform", str(pf), "--mu-f", "0.1,0", "--fz", "1,0"]) == 0
        capsys.readouterr()
        assert (
            main(["belt", "pullback", "--value", "0.2,0", "--mu-g", "0.1,0", "--u", "1,0"])
            == 0
        )
        assert "value:" in capsys.readouterr().out

    def test_acs_modes(self, capsys):
        assert main(["belt", "acs", "--mu", "0.2+0.1j"]) == 0
        out = capsys.readouterr().out
        assert "matrix:" in out and "dilatation:" in out
        assert main(["belt", "acs", "--frame", "0.5", "0.0"]) == 0
        capsys.readouterr()
        assert main(["belt", "acs", "--K", "3.0"]) == 0
        assert "abs mu: 0.5" in capsys.readouterr().out
        assert main(["belt", "acs", "--linear", "1,0", "0.5,0"]) == 0
        capsys.readouterr()
        assert main(["belt", "acs"]) == 2


class TestQsCommands:
    def test_bound_builtin(self, capsys):
        assert main(["qs", "bound", "--fn", "slope:2", "--n", "64"]) == 0
        assert "bound: 2.0" in capsys.readouterr().out

    def test_bound_csv(self, tmp_path, capsys):
        p = tmp_path / "h.csv"
        rows = ["x,y"] + [f"{i/8},{(i/8)**1}" for i in range(-8, 9)]
        p.write_text("\n".join(rows), encoding="utf-8")
        assert main(["qs", "bound", "--file", str(p)]) == 0
        assert "bound: 1.0" in capsys.readouterr().out

    def test_bound_csv_malformed(self, tmp_path, capsys):
        p = tmp_path / "h.csv"
        p.write_text("0,0\n1,not-a-number\n", encoding="utf-8")
        assert main(["qs", "bound", "--file", str(p)]) == 2
        assert f"{p}:2:" in capsys.readouterr().err

    def test_corner(self, capsys):
        assert main(["qs", "corner", "--profile", "piecewise", "--points", "0.5,0.5"]) == 0
        out = capsys.readouterr().out
        assert "dilatation: 4.0" in out and "point 0:" in out

    def test_twist_rigid(self, capsys):
        assert main(["qs", "twist", "--profile", "rotation:0.9"]) == 0
        assert "rigid rotation: true" in capsys.readouterr().out


class TestModuleCommands:
    def test_compute_positions(self, capsys):
        assert main(["module", "compute", "2.0"]) == 0
        assert "product=1.0" in capsys.readouterr().out

    def test_compute_quad_and_rect(self, capsys):
        assert main(["module", "compute", "--quad", "-1", "0", "1", "3"]) == 0
        capsys.readouterr()
        assert main(["module", "compute", "--rect", "2", "1"]) == 0
        assert "module: 2.0" in capsys.readouterr().out
        assert main(["module", "compute"]) == 2

    def test_check_qc_generated(self, capsys):
        assert main(
            ["module", "check-qc", "--generate", "--seed", "0", "--count", "4", "--format", "json"]
        ) == 0
        d = json.loads(capsys.readouterr().out)
        assert d["within_bounds"] is True
        assert d["quad_count"] == 4


class TestChainsCommands:
    def test_product_term_count(self, capsys):
        assert main(["chains", "product", "2", "1"]) == 0
        assert "terms: 3" in capsys.readouterr().out

    def test_product_boundary_and_swap(self, capsys):
        assert main(["chains", "product", "1", "1", "--boundary"]) == 0
        capsys.readouterr()
        assert main(["chains", "product", "1", "1", "--swapped"]) == 0
        capsys.readouterr()

    def test_check_sweep(self, capsys):
        assert main(["chains", "check", "--degree", "3"]) == 0
        out = capsys.readouterr().out
        assert "associativity: true" in out


class TestAppbCommands:
    def test_orders_table(self, capsys):
        assert main(["appb", "orders", "5"]) == 0
        lines = capsys.readouterr().out.splitlines()
        assert lines[0] == "0: m=inf n=0"
        assert lines[1] == "1: m=1 n=2"
        assert lines[-1] == "5: m=5 n=6"

    def test_flatten_csv(self, capsys):
        assert main(["appb", "flatten", "--glue", "sine:0.1", "--k", "0"]) == 0
        lines = capsys.readouterr().out.splitlines()
        assert lines[0] == "k,fitted_m,fitted_n,predicted_m,predicted_n,ok"
        assert lines[1].startswith("0,")
        assert lines[1].endswith(",true")

    def test_flatten_chart(self, capsys):
        assert main(["appb", "flatten", "--glue", "identity", "--k", "0", "--chart"]) == 0
        out = capsys.readouterr().out
        assert "certified x:" in out
        assert "boundary max dev: 0.0" in out

    def test_flatten_json(self, capsys):
        assert main(
            ["appb", "flatten", "--glue", "linear:2.0", "--k", "0", "--format", "json"]
        ) == 0
        d = json.loads(capsys.readouterr().out)
        assert d["schema"] == "segal.report.orderfits/1"
        assert d["all_ok"] is True


class TestAcceptCommand:
    def test_subset_passes(self, capsys):
        assert main(["accept", "--only", "9,12"]) == 0
        out = capsys.readouterr().out.splitlines()
        assert len(out) == 3
        assert all(line.startswith("PASS") for line in out)

    def test_bad_indices(self, capsys):
        assert main(["accept", "--only", "0,99"]) == 2
        assert main(["accept", "--only", "two"]) == 2
