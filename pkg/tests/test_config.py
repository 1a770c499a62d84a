import numpy as np
import pytest

from qbgk.config import BoundarySpec, SolverConfig, parse_config
from qbgk.errors import ConfigError
from qbgk.phase_grid import build_grid
from qbgk.quantum_stats import Statistics
from qbgk.transport import GriddedBoundary, SlabExampleBoundary

MINIMAL = """
statistics = "boson"
tau = 100.0

[boundary]
kind = "slab_example"
"""


class TestParsing:
    def test_minimal_defaults(self):
        cfg = parse_config(MINIMAL)
        assert cfg.statistics is Statistics.BOSON
        assert cfg.tau == 100.0
        assert cfg.nx == 64
        assert cfg.p_max == 8.0
        assert cfg.tolerance == 1e-8
        assert cfg.max_iters == 200
        assert cfg.lambda_policy == "abort"
        assert cfg.seed == 42
        assert cfg.boundary == BoundarySpec(kind="slab_example")

    def test_full_round_trip(self):
        text = """
        statistics = "fermion"
        tau = 50.0
        tolerance = 1e-6
        max_iters = 30
        lambda_policy = "warn"
        seed = 7
        probe_count = 3
        output_dir = "out"

        [grid]
        nx = 16
        p_max = 6.0
        p1_levels = 4
        p1_order = 6
        p23_nodes = 24

        [boundary]
        kind = "slab_example"
        C_L = 2.0
        C_R = 0.5
        r1 = 3.0
        r2 = 4.0
        """
        cfg = parse_config(text)
        assert cfg.statistics is Statistics.FERMION
        assert cfg.max_iters == 30
        assert cfg.lambda_policy == "warn"
        assert cfg.boundary.C_L == 2.0 and cfg.boundary.r2 == 4.0
        assert cfg.output_dir == "out"

    def test_invalid_toml_reports_position(self):
        with pytest.raises(ConfigError, match="parse error"):
            parse_config("statistics = \n")

    def test_negative_tau_names_field(self):
        bad = MINIMAL.replace("tau = 100.0", "tau = -1")
        with pytest.raises(ConfigError, match="tau") as exc:
            parse_config(bad)
        assert exc.value.field == "tau"

    def test_unknown_key_rejected(self):
        with pytest.raises(ConfigError, match="mystery"):
            parse_config(MINIMAL + "\nmystery = 1\n")

    def test_unknown_grid_key_rejected(self):
        with pytest.raises(ConfigError, match="dx"):
            parse_config(MINIMAL + "\n[grid]\ndx = 0.1\n")

    def test_missing_statistics(self):
        with pytest.raises(ConfigError, match="statistics"):
            parse_config("tau = 1.0\n[boundary]\nkind = 'slab_example'\n")

    def test_bad_statistics_value(self):
        with pytest.raises(ConfigError, match="boson"):
            parse_config(MINIMAL.replace('"boson"', '"anyon"'))

    def test_missing_boundary_section(self):
        with pytest.raises(ConfigError, match="boundary"):
            parse_config('statistics = "boson"\ntau = 1.0\n')

    def test_bad_boundary_kind(self):
        with pytest.raises(ConfigError, match="kind"):
            parse_config(MINIMAL.replace("slab_example", "plane_wave"))

    def test_reversed_support_rejected(self):
        bad = MINIMAL.replace(
            'kind = "slab_example"', 'kind = "slab_example"\nr1 = 5.0\nr2 = 4.0'
        )
        with pytest.raises(ConfigError, match="r1 < r2"):
            parse_config(bad)

    def test_gridded_requires_existing_path(self, tmp_path):
        text = MINIMAL.replace('kind = "slab_example"', 'kind = "gridded"')
        with pytest.raises(ConfigError, match="path"):
            parse_config(text)
        text += f'path = "{tmp_path}/missing.npz"\n'
        with pytest.raises(ConfigError, match="not found"):
            parse_config(text)

    def test_bad_lambda_policy(self):
        with pytest.raises(ConfigError, match="lambda_policy"):
            parse_config(MINIMAL + '\nlambda_policy = "ignore"\n')

    def test_non_integer_nx(self):
        with pytest.raises(ConfigError, match="nx"):
            parse_config(MINIMAL + "\n[grid]\nnx = 2.5\n")

    def test_boolean_rejected_as_number(self):
        with pytest.raises(ConfigError, match="tau"):
            parse_config(MINIMAL.replace("tau = 100.0", "tau = true"))


class TestGridSpecDerivation:
    def test_example_boundary_extends_p1_and_adds_breakpoints(self):
        cfg = parse_config(MINIMAL)
        spec = cfg.grid_spec()
        edges = [p[0][0] for p in spec.p1_panels] + [spec.p1_panels[-1][0][1]]
        # coverage past the support, with panel edges at r1, r2 and p_max
        assert edges[-1] == 12.0
        for needed in (8.0, 10.0, 11.0):
            assert needed in edges
        assert spec.p_max == 8.0

    def test_explicit_p1_max_wins(self):
        cfg = parse_config(MINIMAL + "\n[grid]\np1_max = 14.0\n")
        spec = cfg.grid_spec()
        assert spec.p1_panels[-1][0][1] == 14.0

    def test_gridded_kind_uses_p_max(self, tmp_path):
        base = parse_config(MINIMAL)
        grid = build_grid(base.grid_spec())
        path = tmp_path / "b.npz"
        np.savez(path, values=np.zeros(grid.npts))
        text = MINIMAL.replace(
            'kind = "slab_example"', f'kind = "gridded"\npath = "{path}"'
        )
        cfg = parse_config(text)
        assert cfg.grid_spec().p1_panels[-1][0][1] == 8.0


class TestBuildBoundary:
    def test_example_kind(self):
        cfg = parse_config(MINIMAL)
        b = cfg.build_boundary(None)
        assert isinstance(b, SlabExampleBoundary)
        assert (b.C_L, b.C_R, b.r1, b.r2) == (1.0, 1.0, 10.0, 11.0)

    def test_gridded_kind_loads_npz(self, small_grid, tmp_path):
        path = tmp_path / "b.npz"
        vals = np.exp(-small_grid.psq)
        np.savez(path, values=vals)
        cfg = SolverConfig(
            statistics=Statistics.BOSON, tau=10.0,
            boundary=BoundarySpec(kind="gridded", path=str(path)),
        )
        b = cfg.build_boundary(small_grid)
        assert isinstance(b, GriddedBoundary)
        assert np.array_equal(b.values, vals)

    def test_gridded_kind_requires_values_array(self, small_grid, tmp_path):
        path = tmp_path / "b.npz"
        np.savez(path, data=np.zeros(small_grid.npts))
        cfg = SolverConfig(
            statistics=Statistics.BOSON, tau=10.0,
            boundary=BoundarySpec(kind="gridded", path=str(path)),
        )
        with pytest.raises(ConfigError, match="values"):
            cfg.build_boundary(small_grid)
