"""Command-line interface.

One executable, ``egr``, with a subcommand per task.  Results go to standard
output as JSON (default) or plot-ready CSV (``--format csv``); library
errors become a JSON envelope ``{"error": {"code", "message"}}`` with exit
code 2 for input problems and 3 when an iteration or quadrature gives up.
Identical argv (and ``--seed``) produce byte-identical output: floats are
emitted with 17 significant digits and nothing time- or host-dependent is
printed.
"""

from __future__ import annotations

import functools
import json
import math
import sys

import click
import numpy as np

from . import backtest, dirichlet, optimize
from .egr import egr_log
from .errors import ExcessGrowthError, NoConvergence, QuadratureFailure
from .simplex import weights

# ---------------------------------------------------------------------------
# serialization


def _fmt(x: float) -> str:
    if math.isnan(x):
        return '"nan"'
    if math.isinf(x):
        return '"inf"' if x > 0 else '"-inf"'
    return format(x, ".17g")


def _json(obj) -> str:
    if obj is None:
        return "null"
    if isinstance(obj, bool):
        return "true" if obj else "false"
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return _fmt(float(obj))
    if isinstance(obj, np.ndarray):
        return _json(obj.tolist())
    if isinstance(obj, (list, tuple)):
        return "[" + ",".join(_json(v) for v in obj) + "]"
    if isinstance(obj, dict):
        return "{" + ",".join(f"{json.dumps(str(k))}:{_json(v)}" for k, v in obj.items()) + "}"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def _csv_cell(x) -> str:
    if isinstance(x, (float, np.floating)):
        f = float(x)
        return format(f, ".17g") if math.isfinite(f) else str(f)
    return str(x)


def _csv(header, rows) -> str:
    lines = [",".join(header)]
    lines.extend(",".join(_csv_cell(c) for c in row) for row in rows)
    return "\n".join(lines)


def _emit(fmt: str, payload: dict, header, rows) -> None:
    if fmt == "csv":
        click.echo(_csv(header, rows))
    else:
        click.echo(_json(payload))


# ---------------------------------------------------------------------------
# parameter types and error mapping


class VectorType(click.ParamType):
    name = "vector"

    def convert(self, value, param, ctx):
        if isinstance(value, tuple):
            return value
        try:
            parts = [p for p in str(value).split(",") if p.strip()]
            if not parts:
                raise ValueError
            return tuple(float(p) for p in parts)
        except ValueError:
            self.fail(f"{value!r} is not a comma-separated list of numbers", param, ctx)


VECTOR = VectorType()
FORMAT = click.option(
    "--format", "fmt", type=click.Choice(["json", "csv"]), default="json", show_default=True
)


def _guarded(fn):
    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except (NoConvergence, QuadratureFailure) as exc:
            click.echo(_json({"error": {"code": exc.code, "message": str(exc)}}))
            sys.exit(3)
        except ExcessGrowthError as exc:
            click.echo(_json({"error": {"code": exc.code, "message": str(exc)}}))
            sys.exit(2)
        except ValueError as exc:
            click.echo(_json({"error": {"code": "ValueError", "message": str(exc)}}))
            sys.exit(2)
        except OSError as exc:
            click.echo(_json({"error": {"code": "IOError", "message": str(exc)}}))
            sys.exit(2)

    return wrapper


def _one_returns_mode(returns, log_returns):
    """Enforce exactly one inline input mode; give back log returns."""
    if (returns is None) == (log_returns is None):
        raise click.UsageError("exactly one of --returns or --log-returns is required")
    if returns is not None:
        arr = np.asarray(returns, dtype=float)
        if np.any(arr <= 0):
            raise click.UsageError("--returns entries must be positive; use --log-returns otherwise")
        return np.log(arr)
    return np.asarray(log_returns, dtype=float)


# ---------------------------------------------------------------------------
# commands


@click.group()
@click.version_option(package_name="artifact", prog_name="egr")
def main():
    """Excess growth rate toolkit: identities, optimization, panels, checks."""


@main.command()
@click.option("--pi", type=VECTOR, required=True, help="Weights, comma-separated.")
@click.option("--returns", type=VECTOR, default=None, help="Gross returns.")
@click.option("--log-returns", type=VECTOR, default=None, help="Log returns.")
@FORMAT
@_guarded
def compute(pi, returns, log_returns, fmt):
    """Excess growth rate of fixed weights against one return vector."""
    w = weights(pi)
    value = egr_log(w, _one_returns_mode(returns, log_returns))
    _emit(fmt, {"egr": value}, ["egr"], [[value]])


@main.command()
@click.option("--pi", type=VECTOR, required=True, help="Weights, comma-separated.")
@click.option("--file", "path", required=True, type=click.Path(), help="Panel CSV.")
@click.option("--log-returns", is_flag=True, help="Panel cells are log returns.")
@FORMAT
@_guarded
def decompose(pi, path, log_returns, fmt):
    """Split a rebalanced portfolio's log wealth over a panel."""
    panel = backtest.load_panel(path, log_returns=log_returns)
    rep = backtest.rebalanced_decomposition(weights(pi), panel)
    payload = {
        "total_log_return": rep.total_log_return,
        "weighted_avg_log_return": rep.weighted_avg_log_return,
        "cumulative_egr": rep.cumulative_egr,
        "per_period_egr": rep.per_period_egr,
    }
    rows = list(zip(panel.period_labels, rep.per_period_egr))
    _emit(fmt, payload, ["period", "egr"], rows)


@main.command()
@click.option("--file", "path", required=True, type=click.Path(), help="Panel CSV.")
@click.option("--window", type=int, required=True, help="Window length in periods.")
@click.option(
    "--pi",
    "pi_spec",
    default=None,
    help="Comma vector for fixed weights, or top:K for equal weight on the top K assets.",
)
@click.option("--log-returns", is_flag=True, help="Panel cells are log returns.")
@FORMAT
@_guarded
def rolling(path, window, pi_spec, log_returns, fmt):
    """Excess growth rate over non-overlapping windows of a panel."""
    panel = backtest.load_panel(path, log_returns=log_returns)
    if pi_spec is None:
        weighting = backtest.EqualOnTopK(panel.n)
    elif pi_spec.startswith("top:"):
        try:
            k = int(pi_spec[4:])
        except ValueError:
            raise click.UsageError(f"--pi {pi_spec!r}: expected top:K with integer K") from None
        weighting = backtest.EqualOnTopK(k)
    else:
        weighting = backtest.Fixed(weights(VECTOR.convert(pi_spec, None, None)))
    per_window, cumulative = backtest.rolling_egr(panel, window, weighting)
    starts = [panel.period_labels[i * window] for i in range(per_window.size)]
    ends = [panel.period_labels[(i + 1) * window - 1] for i in range(per_window.size)]
    payload = {
        "windows": [
            {"window_start": s, "window_end": e, "egr": g, "cumulative_egr": c}
            for s, e, g, c in zip(starts, ends, per_window, cumulative)
        ]
    }
    rows = list(zip(starts, ends, per_window, cumulative))
    _emit(fmt, payload, ["window_start", "window_end", "egr", "cumulative_egr"], rows)


@main.command("optimize-max")
@click.option("--returns", type=VECTOR, default=None, help="Gross returns.")
@click.option("--log-returns", type=VECTOR, default=None, help="Log returns.")
@FORMAT
@_guarded
def optimize_max(returns, log_returns, fmt):
    """Weights maximizing the excess growth rate for one return vector."""
    res = optimize.max_egr(_one_returns_mode(returns, log_returns))
    payload = {
        "value": res.value,
        "pi_star": res.pi_star.w,
        "support_pair": list(res.support_pair) if res.support_pair else None,
        "degenerate": res.degenerate,
        "ties": {"max": list(res.ties[0]), "min": list(res.ties[1])},
    }
    rows = list(enumerate(res.pi_star.w))
    _emit(fmt, payload, ["index", "pi_star"], rows)


def _dual_payload(res: optimize.DualSolveResult) -> dict:
    return {
        "lambda_star": res.lambda_star,
        "value": res.value,
        "pi_star": res.pi_star.w,
        "q_star": res.q_star.w,
        "kkt_residual": res.kkt_residual,
        "iterations": res.iterations,
    }


@main.command("optimize-eta")
@click.option("--returns", type=VECTOR, default=None, help="Gross returns.")
@click.option("--log-returns", type=VECTOR, default=None, help="Log returns.")
@click.option("--eta", type=float, default=None, help="Entropy-ball radius.")
@click.option("--lambda", "lam", type=float, default=None, help="Entropy penalty weight.")
@click.option("--pi", type=VECTOR, default=None, help="Fix the weights (with --eta).")
@FORMAT
@_guarded
def optimize_eta(returns, log_returns, eta, lam, pi, fmt):
    """Entropy-penalized or entropy-constrained maximization.

    --lambda solves the penalized joint problem; --eta with --pi maximizes
    over the entropy ball at fixed weights; --eta alone frees the weights.
    """
    r = _one_returns_mode(returns, log_returns)
    if (lam is None) == (eta is None):
        raise click.UsageError("exactly one of --eta or --lambda is required")
    if lam is not None:
        if pi is not None:
            raise click.UsageError("--pi only applies to --eta")
        res = optimize.penalized_joint(r, lam)
    elif pi is not None:
        res = optimize.phi_eta(weights(pi), r, eta)
    else:
        res = optimize.constrained_joint(r, eta)
    payload = _dual_payload(res)
    rows = list(zip(range(len(res.pi_star)), res.pi_star.w, res.q_star.w))
    _emit(fmt, payload, ["index", "pi_star", "q_star"], rows)


@main.command("optimize-expected")
@click.option("--scenarios", "path", required=True, type=click.Path(), help="Scenario CSV.")
@click.option("--tol", type=float, default=1e-6, show_default=True, help="Certificate tolerance.")
@click.option(
    "--probs-last",
    is_flag=True,
    help="Read the last CSV column as scenario probabilities.",
)
@FORMAT
@_guarded
def optimize_expected(path, tol, probs_last, fmt):
    """Maximize the expected excess growth rate over a scenario file."""
    s = optimize.load_scenarios(path, probs="last" if probs_last else "none")
    res = optimize.maximize_expected_egr(s, tol=tol)
    payload = {
        "value": res.value,
        "pi_star": res.pi_star.w,
        "certificate": res.certificate,
        "iterations": res.iterations,
        "converged": res.converged,
    }
    rows = list(zip(range(len(res.pi_star)), res.pi_star.w, res.certificate))
    _emit(fmt, payload, ["index", "pi_star", "certificate"], rows)


@main.command("dirichlet-sample")
@click.option("--alpha", type=VECTOR, required=True, help="Gamma shapes.")
@click.option("--beta", type=VECTOR, default=None, help="Gamma rates (default all 1).")
@click.option("--count", type=int, default=10, show_default=True, help="Number of draws.")
@click.option("--seed", type=int, default=0, show_default=True)
@FORMAT
@_guarded
def dirichlet_sample(alpha, beta, count, seed, fmt):
    """Draw scaled Dirichlet samples (closure of independent Gammas)."""
    if beta is None:
        beta = tuple(1.0 for _ in alpha)
    params = dirichlet.ScaledDirichletParams(np.asarray(alpha), np.asarray(beta))
    draws = dirichlet.sample(params, seed, count)
    mat = [d.w for d in draws]
    header = [f"y{j + 1}" for j in range(params.n)]
    _emit(fmt, {"samples": [list(w) for w in mat]}, header, mat)


@main.command("ldp-check")
@click.option("--pi", type=VECTOR, required=True, help="Reference weights (interior).")
@click.option("--x", "x_", type=VECTOR, default=None, help="Center (default: pi).")
@click.option("--y", "y_", type=VECTOR, default=None, help="Evaluation point (default: x).")
@click.option(
    "--sigma",
    type=VECTOR,
    default=(0.1, 0.01, 0.001),
    show_default=True,
    help="Noise levels, comma-separated.",
)
@FORMAT
@_guarded
def ldp_check(pi, x_, y_, sigma, fmt):
    """Gap between -sigma log density and the divergence, per noise level."""
    w = weights(pi)
    x = weights(x_) if x_ is not None else w
    y = weights(y_) if y_ is not None else x
    gaps = [dirichlet.ldp_gap(dirichlet.LocationParams(w, x, s), y) for s in sigma]
    payload = {"sigma": list(sigma), "gap": gaps}
    _emit(fmt, payload, ["sigma", "gap"], list(zip(sigma, gaps)))


@main.command("renyi-check")
@click.option("--pi", type=VECTOR, required=True, help="Reference weights (interior).")
@click.option("--x", "x_", type=VECTOR, required=True, help="First center.")
@click.option("--y", "y_", type=VECTOR, required=True, help="Second center.")
@click.option("--sigma", type=float, required=True, help="Noise level / divergence order - 1.")
@click.option("--tol", type=float, default=1e-8, show_default=True, help="Quadrature tolerance.")
@click.option("--samples", type=int, default=10**6, show_default=True, help="Monte Carlo size.")
@click.option("--seed", type=int, default=0, show_default=True)
@FORMAT
@_guarded
def renyi_check(pi, x_, y_, sigma, tol, samples, seed, fmt):
    """Residual of the order-(1+sigma) divergence identity (n=2 or n=3)."""
    chk = dirichlet.renyi_identity_check(
        weights(pi), weights(x_), weights(y_), sigma, tol=tol, samples=samples, seed=seed
    )
    payload = {
        "residual": chk.residual,
        "estimate": chk.estimate,
        "target": chk.target,
        "stderr": chk.stderr,
        "n_samples": chk.n_samples,
    }
    rows = [[k, v if v is not None else ""] for k, v in payload.items()]
    _emit(fmt, payload, ["field", "value"], rows)


@main.command()
def selftest():
    """Run every acceptance criterion and print one pass/fail line each."""
    from .acceptance import CRITERIA

    failed = 0
    for number, slug, fn in CRITERIA:
        try:
            fn()
        except AssertionError as exc:
            failed += 1
            detail = str(exc).splitlines()[0] if str(exc) else "assertion failed"
            click.echo(f"FAIL {number:2d} {slug}: {detail}")
        else:
            click.echo(f"PASS {number:2d} {slug}")
    click.echo(f"passed {len(CRITERIA) - failed}/{len(CRITERIA)}")
    if failed:
        sys.exit(1)


if __name__ == "__main__":
    main()
