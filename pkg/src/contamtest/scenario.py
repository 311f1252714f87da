"""Scenario configuration, the end-to-end pipeline, and result export.

A scenario file describes either a simulation (two pure models plus the
ground-truth proportions) or an observer setting (two tabulated
contaminated densities), together with priors, costs, side constraints and
search parameters.  Running it computes the contaminated mixture
proportions, builds the feasible polygon, performs the minimax threshold
search and exports the risk curves and a summary.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

from .errors import ScenarioError
from .minimax import MinimaxResult, minimax_search
from .mixprop import nu_star
from .models import (
    ContaminatedPair,
    ContaminationParams,
    DensityModel,
    Exponential,
    Gaussian,
    Tabulated,
    contaminate,
)
from .region import FeasibleRegion, HalfPlane, add_constraints, base_region
from .risk import (
    BayesConfig,
    ErrorPair,
    ThresholdRule,
    contaminated_error_rates,
    threshold_rule_rates,
)

CSV_HEADER = "lambda,risk_max,risk_true,risk_zero"


@dataclass(frozen=True)
class SearchParams:
    grid_points: int = 2000
    tolerance: float = 1e-8


@dataclass(frozen=True)
class RawConstraint:
    """User constraint a0*pi0 + a1*pi1 (<=|>=) b."""

    a0: float
    a1: float
    b: float
    sense: str

    def to_half_plane(self) -> HalfPlane:
        label = f"{self.a0:g}*pi0 + {self.a1:g}*pi1 {self.sense} {self.b:g}"
        if self.sense == ">=":
            return HalfPlane(-self.a0, -self.a1, -self.b, label)
        return HalfPlane(self.a0, self.a1, self.b, label)


@dataclass(frozen=True)
class ScenarioConfig:
    name: str
    bayes: BayesConfig
    constraints: tuple[RawConstraint, ...]
    search: SearchParams
    model0: Optional[DensityModel] = None
    model1: Optional[DensityModel] = None
    pi_true: Optional[tuple[float, float]] = None
    observed: Optional[tuple[Tabulated, Tabulated]] = None
    nu_pure_upper_bounds: Optional[tuple[float, float]] = None

    @property
    def mode(self) -> str:
        return "simulation" if self.pi_true is not None else "observer"


def _require(data: dict, field: str, context: str):
    if field not in data:
        raise ScenarioError(f"{context}: missing required field '{field}'")
    return data[field]


def _number(value, field: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ScenarioError(f"{field}: expected a number, got {value!r}")
    return float(value)


def _parse_model(data, field: str) -> DensityModel:
    if not isinstance(data, dict):
        raise ScenarioError(f"{field}: expected an object")
    family = _require(data, "family", field)
    try:
        if family == "gaussian":
            return Gaussian(
                mean=_number(_require(data, "mean", field), f"{field}.mean"),
                stddev=_number(_require(data, "stddev", field), f"{field}.stddev"),
            )
        if family == "exponential":
            return Exponential(rate=_number(_require(data, "rate", field), f"{field}.rate"))
        if family == "tabulated":
            return Tabulated(
                grid=_require(data, "grid", field),
                density_values=_require(data, "density_values", field),
            )
    except ScenarioError:
        raise
    except ValueError as exc:
        raise ScenarioError(f"{field}: {exc}") from exc
    raise ScenarioError(f"{field}.family: unknown family {family!r}")


def _parse_pair(value, field: str) -> tuple[float, float]:
    if not isinstance(value, (list, tuple)) or len(value) != 2:
        raise ScenarioError(f"{field}: expected a pair of numbers")
    return (_number(value[0], f"{field}[0]"), _number(value[1], f"{field}[1]"))


def parse_scenario(data: dict, name: str = "scenario") -> ScenarioConfig:
    """Validate a configuration tree, reporting the offending field."""
    if not isinstance(data, dict):
        raise ScenarioError("scenario: expected a JSON object at top level")
    name = data.get("name", name)

    bayes_data = _require(data, "bayes", "scenario")
    if not isinstance(bayes_data, dict):
        raise ScenarioError("bayes: expected an object")
    try:
        bayes = BayesConfig(
            q0=_number(_require(bayes_data, "q0", "bayes"), "bayes.q0"),
            c01=_number(bayes_data.get("c01", 1.0), "bayes.c01"),
            c10=_number(bayes_data.get("c10", 1.0), "bayes.c10"),
        )
    except ScenarioError:
        raise
    except ValueError as exc:
        raise ScenarioError(f"bayes: {exc}") from exc

    has_pi = "pi_true" in data
    has_obs = "observed_contaminated" in data
    if has_pi == has_obs:
        raise ScenarioError(
            "scenario: exactly one of 'pi_true' (simulation mode) or "
            "'observed_contaminated' (observer mode) must be present"
        )

    model0 = model1 = None
    pi_true = None
    observed = None
    if has_pi:
        model0 = _parse_model(_require(data, "model0", "scenario"), "model0")
        model1 = _parse_model(_require(data, "model1", "scenario"), "model1")
        pi_true = _parse_pair(data["pi_true"], "pi_true")
        try:
            ContaminationParams(*pi_true)
        except ValueError as exc:
            raise ScenarioError(f"pi_true: {exc}") from exc
    else:
        for field in ("model0", "model1"):
            if field in data:
                raise ScenarioError(f"{field}: not allowed in observer mode")
        obs = data["observed_contaminated"]
        if not isinstance(obs, dict):
            raise ScenarioError("observed_contaminated: expected an object")
        p0t = _parse_model(
            _require(obs, "p0_tilde", "observed_contaminated"), "observed_contaminated.p0_tilde"
        )
        p1t = _parse_model(
            _require(obs, "p1_tilde", "observed_contaminated"), "observed_contaminated.p1_tilde"
        )
        if not isinstance(p0t, Tabulated) or not isinstance(p1t, Tabulated):
            raise ScenarioError("observed_contaminated: densities must be tabulated")
        observed = (p0t, p1t)

    constraints = []
    for i, raw in enumerate(data.get("constraints", [])):
        field = f"constraints[{i}]"
        if not isinstance(raw, dict):
            raise ScenarioError(f"{field}: expected an object")
        sense = raw.get("sense", "<=")
        if sense not in ("<=", ">="):
            raise ScenarioError(f"{field}.sense: must be '<=' or '>=', got {sense!r}")
        constraints.append(
            RawConstraint(
                a0=_number(_require(raw, "a0", field), f"{field}.a0"),
                a1=_number(_require(raw, "a1", field), f"{field}.a1"),
                b=_number(_require(raw, "b", field), f"{field}.b"),
                sense=sense,
            )
        )

    nu_bounds = None
    if "nu_pure_upper_bounds" in data:
        nu_bounds = _parse_pair(data["nu_pure_upper_bounds"], "nu_pure_upper_bounds")
        for i, u in enumerate(nu_bounds):
            if not 0.0 <= u < 1.0:
                raise ScenarioError(
                    f"nu_pure_upper_bounds[{i}]: must lie in [0, 1), got {u}"
                )

    search_data = data.get("search", {})
    if not isinstance(search_data, dict):
        raise ScenarioError("search: expected an object")
    grid_points = search_data.get("grid_points", 2000)
    if not isinstance(grid_points, int) or grid_points < 2:
        raise ScenarioError(f"search.grid_points: expected an integer >= 2, got {grid_points!r}")
    search = SearchParams(
        grid_points=grid_points,
        tolerance=_number(search_data.get("tolerance", 1e-8), "search.tolerance"),
    )

    return ScenarioConfig(
        name=name,
        bayes=bayes,
        constraints=tuple(constraints),
        search=search,
        model0=model0,
        model1=model1,
        pi_true=pi_true,
        observed=observed,
        nu_pure_upper_bounds=nu_bounds,
    )


def load_scenario(path) -> ScenarioConfig:
    path = Path(path)
    try:
        data = json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise ScenarioError(f"{path}: invalid JSON ({exc})") from exc
    return parse_scenario(data, name=path.stem)


@dataclass
class SimulationRates:
    """Closed-form rule rates for a known contaminated pair."""

    pair: ContaminatedPair
    ratio_range: tuple[float, float]
    pi_true: Optional[tuple[float, float]]

    def rates(self, lam: float) -> ErrorPair:
        return contaminated_error_rates(
            self.pair, ThresholdRule(lam), ratio_range=self.ratio_range
        )

    def lambda_range(self) -> tuple[float, float]:
        return self.ratio_range


@dataclass
class ObserverRates:
    """Numeric rule rates computed from tabulated contaminated densities."""

    p0_tilde: Tabulated
    p1_tilde: Tabulated
    ratio_range: tuple[float, float]
    pi_true: Optional[tuple[float, float]] = None

    def rates(self, lam: float) -> ErrorPair:
        return threshold_rule_rates(self.p0_tilde, self.p1_tilde, lam)

    def lambda_range(self) -> tuple[float, float]:
        return self.ratio_range


@dataclass(frozen=True)
class PreparedScenario:
    """Pipeline state before the threshold search: proportions and region."""

    config: ScenarioConfig
    nu_tilde_01: float
    nu_tilde_10: float
    region: FeasibleRegion
    model: object


@dataclass(frozen=True)
class RunResult:
    """Everything a report or export needs from one pipeline run."""

    config: ScenarioConfig
    nu_tilde_01: float
    nu_tilde_10: float
    region: FeasibleRegion
    result: MinimaxResult


def _nu_bound_half_planes(
    nu_tilde_01: float, nu_tilde_10: float, bounds: tuple[float, float]
) -> list[HalfPlane]:
    # An upper bound u on a pure mixture proportion translates into a lower
    # bound on the matching boundary-line combination: the line's right-hand
    # side decreases as the pure proportion grows.
    u01, u10 = bounds
    planes = []
    rhs0 = (nu_tilde_01 - u01) / (1.0 - u01)
    planes.append(
        HalfPlane(-1.0, -nu_tilde_01, -rhs0, f"pi0 + {nu_tilde_01:g}*pi1 >= {rhs0:g}")
    )
    rhs1 = (nu_tilde_10 - u10) / (1.0 - u10)
    planes.append(
        HalfPlane(-nu_tilde_10, -1.0, -rhs1, f"{nu_tilde_10:g}*pi0 + pi1 >= {rhs1:g}")
    )
    return planes


def prepare_scenario(config: ScenarioConfig) -> PreparedScenario:
    """Build the contaminated pair, mixture proportions and feasible region."""
    if config.mode == "simulation":
        pair = contaminate(config.model0, config.model1, ContaminationParams(*config.pi_true))
        p0t, p1t = pair.p0_tilde, pair.p1_tilde
    else:
        pair = None
        p0t, p1t = config.observed

    nu01 = nu_star(p0t, p1t).value
    nu10 = nu_star(p1t, p0t).value
    ratio_range = (nu10, math.inf if nu01 == 0.0 else 1.0 / nu01)

    region = base_region(nu01, nu10)
    extra = [c.to_half_plane() for c in config.constraints]
    if config.nu_pure_upper_bounds is not None:
        extra.extend(_nu_bound_half_planes(nu01, nu10, config.nu_pure_upper_bounds))
    if extra:
        region = add_constraints(region, extra)

    if pair is not None:
        model = SimulationRates(pair, ratio_range, config.pi_true)
    else:
        model = ObserverRates(p0t, p1t, ratio_range)
    return PreparedScenario(
        config=config,
        nu_tilde_01=nu01,
        nu_tilde_10=nu10,
        region=region,
        model=model,
    )


def run_scenario(config: ScenarioConfig, grid_points: Optional[int] = None) -> RunResult:
    """Execute the full pipeline for a parsed scenario."""
    prepared = prepare_scenario(config)
    result = minimax_search(
        prepared.model,
        prepared.region,
        config.bayes,
        grid_points=grid_points or config.search.grid_points,
        rel_tol=config.search.tolerance,
    )
    return RunResult(
        config=config,
        nu_tilde_01=prepared.nu_tilde_01,
        nu_tilde_10=prepared.nu_tilde_10,
        region=prepared.region,
        result=result,
    )


def summary_dict(run: RunResult) -> dict:
    result = run.result
    return {
        "scenario": run.config.name,
        "mode": run.config.mode,
        "nu_tilde_01": run.nu_tilde_01,
        "nu_tilde_10": run.nu_tilde_10,
        "vertex_count": len(run.region.vertices),
        "candidate_vertices": sum(1 for v in run.region.vertices if v.candidate),
        "worst_vertex": [result.worst_vertex[0], result.worst_vertex[1]],
        "lambda_star": result.lambda_star,
        "minimax_risk": result.minimax_risk,
        "min_risk_true": result.min_risk_true,
        "min_risk_zero": result.min_risk_zero,
    }


def curves_csv(result: MinimaxResult) -> str:
    lines = [CSV_HEADER]
    rows = zip(result.risk_curve_max, result.risk_curve_true, result.risk_curve_zero)
    for (lam, rmax), (_, rtrue), (_, rzero) in rows:
        lines.append(f"{lam:.6g},{rmax:.6g},{rtrue:.6g},{rzero:.6g}")
    return "\n".join(lines) + "\n"


def emit_curves(run: RunResult, out_dir) -> tuple[Path, Path]:
    """Write curves.csv and summary.json under out_dir; returns both paths."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    csv_path = out / "curves.csv"
    json_path = out / "summary.json"
    csv_path.write_text(curves_csv(run.result))
    json_path.write_text(json.dumps(summary_dict(run), indent=2, sort_keys=True) + "\n")
    return csv_path, json_path


def render_report(run: RunResult) -> str:
    """Human-readable summary at four decimals."""
    result = run.result
    lines = [
        f"scenario: {run.config.name} ({run.config.mode} mode)",
        f"nu_tilde_01 = {run.nu_tilde_01:.4f}   nu_tilde_10 = {run.nu_tilde_10:.4f}",
        f"region: {len(run.region.vertices)} vertices, "
        f"{sum(1 for v in run.region.vertices if v.candidate)} candidates",
        f"lambda* = {result.lambda_star:.4f}   minimax risk = {result.minimax_risk:.4f}",
        f"worst vertex at lambda* = ({result.worst_vertex[0]:.4f}, {result.worst_vertex[1]:.4f})",
    ]
    if result.min_risk_true is not None:
        lines.append(f"min risk at true proportions = {result.min_risk_true:.4f}")
    lines.append(f"min risk assuming no contamination = {result.min_risk_zero:.4f}")
    return "\n".join(lines)
