# this_file: tests/test_cli.py
"""Integration tests for the CLI."""

import json

import pytest

from pdangles import cli
from pdangles.cli import (
    EXIT_INVALID,
    EXIT_INVARIANT,
    EXIT_OK,
    Command,
    OutputFormat,
    RunConfig,
    angles,
    mesh_hodge,
    run,
    version,
)
from pdangles.mesh import GeneratorSpec, MeshSource
from pdangles.serialization import PROVENANCE_SUFFIX, read_cochain_csv, read_csv
from pdangles.verify import Check, Suite, VerifyReport


class TestBasicCommands:
    """Test basic CLI commands."""

    def test_version_command(self, capsys):
        """Test the version command."""
        version()
        captured = capsys.readouterr()
        assert "pdangles" in captured.out
        assert "version" in captured.out


class TestRunConfig:
    """Test configuration handling."""

    def test_format_inferred_from_suffix(self, tmp_path):
        """Test a .json output selects JSON and anything else CSV."""
        assert RunConfig(Command.ANGLES, output=tmp_path / "a.json").resolved_format is OutputFormat.JSON
        assert RunConfig(Command.ANGLES, output=tmp_path / "a.txt").resolved_format is OutputFormat.CSV
        assert RunConfig("angles", format="JSON").resolved_format is OutputFormat.JSON

    def test_mesh_command_needs_mesh(self):
        """Test mesh commands without a source are invalid."""
        assert RunConfig(Command.MESH_HODGE).validate()

    def test_mesh_options_rejected_elsewhere(self):
        """Test non-mesh commands refuse a mesh."""
        config = RunConfig(Command.ANGLES, mesh=MeshSource(generator=GeneratorSpec("disk")))
        assert config.validate()


class TestAnglesCommand:
    """Test the angles command."""

    def test_csv_report(self, tmp_path):
        """Test one CSV row plus a provenance sidecar."""
        output = tmp_path / "angles.csv"
        assert run(RunConfig(Command.ANGLES, family="grassmann", n=2, k=1, output=output)) == EXIT_OK
        rows = read_csv(output)
        assert len(rows) == 1
        assert float(rows[0]["cos_theta_closed"]) == pytest.approx(1 / 3, abs=1e-15)
        assert float(rows[0]["abs_diff"]) < 1e-8
        sidecar = json.loads((tmp_path / ("angles.csv" + PROVENANCE_SUFFIX)).read_text())
        assert sidecar["command"] == "angles"
        assert sidecar["parameters"]["family"] == "grassmann"

    def test_json_report(self, tmp_path):
        """Test the JSON report carries both routes and the constants."""
        output = tmp_path / "angles.json"
        assert run(RunConfig(Command.ANGLES, family="cpn", n=3, k=1, r=0.5, output=output)) == EXIT_OK
        report = json.loads(output.read_text())
        assert report["closed_form"]["method"] == "closed_form"
        assert report["numeric"]["method"] == "ode_quadrature"
        assert "C_N" in report["normalization"]

    def test_reruns_are_byte_identical(self, tmp_path):
        """Test identical configurations write identical reports."""
        first, second = tmp_path / "a.csv", tmp_path / "b.csv"
        for output in (first, second):
            assert run(RunConfig(Command.ANGLES, family="lens", n=3, k=2, m=2, output=output)) == EXIT_OK
        assert first.read_bytes() == second.read_bytes()

    def test_invalid_parameters(self, capsys):
        """Test bad parameters exit with 2 and one ERROR line on stderr."""
        assert run(RunConfig(Command.ANGLES, n=3, k=3)) == EXIT_INVALID
        err = capsys.readouterr().err
        assert err.startswith("ERROR cohom1:")

    def test_fire_entry_point_exits(self):
        """Test the fire function raises SystemExit with the exit code."""
        with pytest.raises(SystemExit) as excinfo:
            angles(family="sphere")
        assert excinfo.value.code == EXIT_INVALID


class TestSweepAndAsymptotics:
    """Test grid commands."""

    def test_sweep_rows(self, tmp_path):
        """Test one row per grid point in order."""
        output = tmp_path / "sweep.csv"
        config = RunConfig(Command.SWEEP, families=("grassmann",), ns=(2, 3), rs=(0.4,), workers=1, output=output)
        assert run(config) == EXIT_OK
        rows = read_csv(output)
        assert [(row["n"], row["k"]) for row in rows] == [("2", "1"), ("3", "1"), ("3", "2")]

    def test_asymptotics_rows(self, tmp_path):
        """Test exponent rows carry the expected slope."""
        output = tmp_path / "exponents.csv"
        assert run(RunConfig(Command.ASYMPTOTICS, families=("cpn",), ns=(2,), output=output)) == EXIT_OK
        rows = read_csv(output)
        assert len(rows) == 1
        assert float(rows[0]["expected"]) == 4.0
        assert float(rows[0]["rel_err"]) < 0.02

    def test_asymptotics_bad_range(self):
        """Test r_min above r_max is invalid input."""
        assert run(RunConfig(Command.ASYMPTOTICS, r_min=0.2, r_max=0.1)) == EXIT_INVALID


class TestMeshCommands:
    """Test mesh-hodge and mesh-dtn."""

    def test_mesh_hodge_with_cochains(self, tmp_path):
        """Test the report and one cochain file per harmonic field."""
        output = tmp_path / "hodge.json"
        config = RunConfig(
            Command.MESH_HODGE,
            mesh=MeshSource(generator=GeneratorSpec("annulus", {"n_radial": 2, "n_angular": 12})),
            degree=1,
            cochains=tmp_path / "fields",
            output=output,
        )
        assert run(config) == EXIT_OK
        report = json.loads(output.read_text())
        assert report["mesh"]["betti"] == [1, 1, 0]
        assert report["degrees"][0]["dimensions"]["cEH_N"] == 1
        field = read_cochain_csv(tmp_path / "fields" / "h_n_1_0.csv")
        assert field.degree == 1
        assert (tmp_path / "fields" / "h_d_1_0.csv").exists()

    def test_mesh_dtn_rows(self, tmp_path):
        """Test T^2 rows on the punctured torus."""
        output = tmp_path / "dtn.csv"
        config = RunConfig(
            Command.MESH_DTN,
            mesh=MeshSource(generator=GeneratorSpec("punctured-torus", {"divisions": 8, "hole": 2})),
            degree=1,
            output=output,
        )
        assert run(config) == EXIT_OK
        rows = read_csv(output)
        assert len(rows) == 2
        for row in rows:
            assert float(row["discrepancy"]) < float(row["cosine_squared"])
            assert float(row["abs_eigenvalue"]) > 0

    def test_closed_mesh_dtn_invalid(self):
        """Test mesh-dtn on a closed mesh is invalid input."""
        config = RunConfig(Command.MESH_DTN, mesh=MeshSource(generator=GeneratorSpec("flat-torus")))
        assert run(config) == EXIT_INVALID

    def test_degree_out_of_range(self):
        """Test a degree above the dimension is invalid input."""
        config = RunConfig(Command.MESH_HODGE, mesh=MeshSource(generator=GeneratorSpec("disk")), degree=5)
        assert run(config) == EXIT_INVALID

    def test_missing_file(self, tmp_path):
        """Test a missing OFF file exits with 2."""
        config = RunConfig(Command.MESH_HODGE, mesh=MeshSource(path=tmp_path / "missing.off"))
        assert run(config) == EXIT_INVALID

    def test_fire_generator_options(self):
        """Test unknown generator options fail before any work."""
        with pytest.raises(SystemExit) as excinfo:
            mesh_hodge(generator="disk", divisions=4)
        assert excinfo.value.code == EXIT_INVALID


class TestVerifyCommand:
    """Test the verify command's exit codes."""

    def test_failed_invariant_exits_3(self, monkeypatch, capsys):
        """Test a failing check maps to exit code 3."""
        failing = VerifyReport(Suite.MESH, [Check("mesh", "broken", 1.0, 1e-9)])
        monkeypatch.setattr(cli, "run_verification", lambda *args, **kwargs: failing)
        assert run(RunConfig(Command.VERIFY, suite="mesh")) == EXIT_INVARIANT
        assert "ERROR" in capsys.readouterr().err

    def test_passing_checks_exit_0(self, monkeypatch, tmp_path):
        """Test passing checks exit cleanly and are written."""
        passing = VerifyReport(Suite.MESH, [Check("mesh", "fine", 0.0, 1e-9)])
        monkeypatch.setattr(cli, "run_verification", lambda *args, **kwargs: passing)
        output = tmp_path / "verify.csv"
        assert run(RunConfig(Command.VERIFY, suite="mesh", output=output)) == EXIT_OK
        assert read_csv(output)[0]["passed"] == "true"

    def test_unknown_suite(self):
        """Test an unknown suite is invalid input."""
        assert run(RunConfig(Command.VERIFY, suite="everything")) == EXIT_INVALID
