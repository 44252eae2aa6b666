"""Command-line interface.

Exit status: 0 success, 1 verification failure, 2 bad input/config,
3 precondition violation.
"""

from __future__ import annotations

import functools
import io
import json
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path
from typing import Any, Callable

import click
import numpy as np

from . import azero, bzero, lattice, sampling, spectral, verify
from .coin import STRICT_TOL, UNITARY_TOL, CoinCase, UnitaryCoin, classify, load_coin
from .errors import InputError, PreconditionError
from .lattice import Measure, StateGenerator

EXIT_OK, EXIT_FAIL, EXIT_CONFIG, EXIT_PRECONDITION = 0, 1, 2, 3


def _fmt(v: float) -> str:
    return format(float(v), ".17g")


def _cjson(z: complex) -> list[float]:
    return [float(z.real), float(z.imag)]


def parse_complex(text: str) -> complex:
    """Parse ``re,im`` (or a bare real) into a complex number."""
    parts = text.split(",")
    try:
        if len(parts) == 1:
            return complex(float(parts[0]))
        if len(parts) == 2:
            return complex(float(parts[0]), float(parts[1]))
    except ValueError:
        pass
    raise InputError(f"expected 're,im', got {text!r}")


def parse_window(text: str) -> tuple[int, int]:
    try:
        lo_s, hi_s = text.split(":")
        lo, hi = int(lo_s), int(hi_s)
    except ValueError:
        raise InputError(f"window must be 'lo:hi', got {text!r}") from None
    if hi < lo:
        raise InputError(f"window {text!r} is empty")
    return lo, hi


def parse_vector(text: str) -> np.ndarray:
    """``re,im;re,im;...`` -> complex vector."""
    return np.array([parse_complex(p) for p in text.split(";")], dtype=np.complex128)


def parse_grid(text: str) -> list[float]:
    """``linspace:start:stop:num`` or a comma-separated list of reals."""
    if text.startswith("linspace:"):
        try:
            _, a, b, n = text.split(":")
            return [float(v) for v in np.linspace(float(a), float(b), int(n))]
        except ValueError:
            raise InputError(f"bad linspace grid {text!r}") from None
    try:
        return [float(v) for v in text.split(",")]
    except ValueError:
        raise InputError(f"bad grid {text!r}") from None


def resolve_seed(seed: int) -> int:
    env = os.environ.get("QW_SEED")
    if env:
        try:
            return int(env)
        except ValueError:
            raise InputError(f"QW_SEED must be an integer, got {env!r}") from None
    return seed


def _guard(fn: Callable[..., int | None]) -> Callable[..., None]:
    @functools.wraps(fn)
    def wrapper(*args: Any, **kwargs: Any) -> None:
        try:
            code = fn(*args, **kwargs) or EXIT_OK
        except InputError as exc:
            click.echo(f"error: {exc}", err=True)
            code = EXIT_CONFIG
        except PreconditionError as exc:
            click.echo(f"precondition violated: {exc}", err=True)
            code = EXIT_PRECONDITION
        sys.exit(code)

    return wrapper


def _emit(text: str, out: str | None) -> None:
    if out is None:
        click.echo(text, nl=False)
    else:
        Path(out).write_text(text)


def _json_text(obj: Any) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def coin_options(fn: Callable) -> Callable:
    fn = click.option("--repair", is_flag=True, help="Project the coin onto the nearest unitary first.")(fn)
    fn = click.option("--strict", is_flag=True, help=f"Validate unitarity at {STRICT_TOL:g} instead of {UNITARY_TOL:g}.")(fn)
    fn = click.option(
        "--coin",
        "coin_src",
        default="hadamard",
        show_default=True,
        help="Preset (hadamard, identity, u-theta:T, h-sigma:S, azero:ETA:XI, bzero:ETA:XI) or coin JSON path.",
    )(fn)
    return fn


def family_options(fn: Callable) -> Callable:
    opts = [
        click.option("--family", type=click.Choice(["full", "azero", "uniform", "delta"]), default="full", show_default=True),
        click.option("--k", "k", type=click.IntRange(1, 4), default=1, show_default=True, help="Eigenvalue index."),
        click.option("--A", "A", default="1,0", show_default=True, help="Free parameter A as re,im."),
        click.option("--B", "B", default="0,0", show_default=True, help="Free parameter B as re,im."),
        click.option("--rescale", is_flag=True, help="Rescale A, B so that mu(0) = 1."),
        click.option("--spec", "spec_path", type=click.Path(), default=None, help="a = 0 family spec JSON."),
        click.option("--phi", default="1,0;0,0", show_default=True, help="Chirality vector for uniform/delta states."),
        click.option("--window", default="-16:16", show_default=True, help="Output window lo:hi."),
    ]
    for o in reversed(opts):
        fn = o(fn)
    return fn


def _load_coin(coin_src: str, strict: bool, repair: bool) -> UnitaryCoin:
    return load_coin(coin_src, tol=STRICT_TOL if strict else UNITARY_TOL, repair=repair)


def _load_json(path: str) -> Any:
    try:
        return json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot read {path!r}: {exc}") from None


class Family:
    """A resolved initial state plus what is needed to verify it."""

    def __init__(self, coin: UnitaryCoin, gen: StateGenerator, lam: complex | None, info: dict[str, Any]):
        self.coin, self.gen, self.lam, self.info = coin, gen, lam, info


def build_family(
    family: str, coin: UnitaryCoin, k: int, A: str, B: str, rescale: bool, spec_path: str | None, phi: str
) -> Family:
    if family == "full":
        if classify(coin) is not CoinCase.FULL_SUPPORT:
            raise PreconditionError("family 'full' needs a coin with abcd != 0")
        a_, b_ = parse_complex(A), parse_complex(B)
        lam = spectral.lambda_k(coin, k)
        if rescale:
            a_, b_ = spectral.rescale_to_unit_origin(coin, lam, a_, b_)
        gen = spectral.build_stationary_full(coin, lam, a_, b_)
        sol = spectral.eigen_solution(coin, lam, a_, b_)
        info = {"family": "full", "k": k, "lambda": _cjson(lam), "gamma": _cjson(sol.gamma), "A": _cjson(a_), "B": _cjson(b_)}
        return Family(coin, gen, lam, info)
    if family == "azero":
        if spec_path is None:
            raise InputError("family 'azero' needs --spec")
        spec = azero.AZeroSpec.from_json(_load_json(spec_path))
        warn = azero.precision_warning(spec)
        if warn:
            click.echo(f"warning: {warn}", err=True)
        lam = azero.azero_lambda(spec)
        return Family(spec.coin, azero.build_stationary_azero(spec), lam, {"family": "azero", "lambda": _cjson(lam)})
    vec = parse_vector(phi)
    if vec.shape[0] != 2:
        raise InputError("--phi needs exactly two components for a two-state walk")
    if family == "uniform":
        if not np.any(vec):
            raise PreconditionError("uniform state needs a nonzero phi")
        return Family(coin, lattice.uniform_generator(vec), None, {"family": "uniform", "phi": [_cjson(z) for z in vec]})
    return Family(coin, lattice.delta_generator(vec), None, {"family": "delta", "phi": [_cjson(z) for z in vec]})


def verify_family(fam: Family, lo: int, hi: int, n_max: int, tol: float) -> dict[str, Any]:
    """Residuals, identities, membership level and decay class for one state."""
    field = lattice.sample_window(fam.gen, lo - 1, hi + 1)
    if fam.lam is not None:
        report = verify.eigen_residual(fam.coin, fam.lam, field)
        scale = max(1.0, float(np.abs(field.values).max()))
        report.thresholds["eigen"] = verify.EIGEN_TOL * scale
    else:
        report = verify.ResidualReport()
    if fam.info["family"] == "full":
        alg = verify.algebraic_checks(fam.coin)
        report.identities.update(alg.identities)
        report.thresholds.update(alg.thresholds)
    mu0 = lattice.to_measure(field.restrict(lo, hi))
    tol_eff = tol * max(1.0, float(mu0.values.max()))
    level = verify.membership_check(fam.coin, fam.gen, n_max, lo, hi, tol_eff)
    r = min(-lo, hi)
    decay = None
    if r >= 4:
        try:
            decay = verify.decay_classify(mu0.restrict(-r, r))
        except PreconditionError:
            decay = None
    out = verify.report_json(report, level, decay)
    out["membership_tol"] = tol_eff
    out["membership_n_max"] = n_max
    out["state"] = fam.info
    out["passed"] = bool(report.passed and level == n_max)
    return out


@click.group()
@click.version_option(package_name="qwstat")
def main() -> None:
    """Stationary measures of one-dimensional two-state quantum walks."""


@main.command()
@coin_options
@family_options
@click.option("--n", "steps", default="0,1,2", show_default=True, help="Comma-separated times to emit.")
@click.option("--format", "fmt", type=click.Choice(["csv", "json"]), default="csv", show_default=True)
@click.option("--out", default=None, help="Output file; with several times, one file per time with suffix _n<t>.")
@_guard
def evolve(coin_src, strict, repair, family, k, A, B, rescale, spec_path, phi, window, steps, fmt, out):
    """Evolve an initial state and emit the measure at each requested time."""
    coin = _load_coin(coin_src, strict, repair)
    lo, hi = parse_window(window)
    try:
        times = sorted({int(t) for t in steps.split(",")})
    except ValueError:
        raise InputError(f"--n must be a comma-separated list of integers, got {steps!r}") from None
    if times[0] < 0:
        raise PreconditionError("times must be nonnegative")
    fam = build_family(family, coin, k, A, B, rescale, spec_path, phi)
    series = lattice.evolve_measures(fam.coin, fam.gen, times[-1], lo, hi)
    measures = {t: series[t] for t in times}
    if fmt == "json":
        obj = {str(t): {"x": m.sites.tolist(), "mu": m.values.tolist()} for t, m in measures.items()}
        _emit(_json_text(obj), out)
        return EXIT_OK
    if out is not None and len(times) > 1:
        p = Path(out)
        for t, m in measures.items():
            p.with_name(f"{p.stem}_n{t}{p.suffix or '.csv'}").write_text(lattice.measure_csv_text(m))
        return EXIT_OK
    text = "".join(
        (f"# n={t}\n" if len(times) > 1 else "") + lattice.measure_csv_text(m) for t, m in measures.items()
    )
    _emit(text, out)
    return EXIT_OK


@main.command()
@coin_options
@family_options
@click.option("--n-max", default=100, show_default=True, help="Largest time for the membership check.")
@click.option("--tol", default=verify.MEMBERSHIP_TOL, show_default=True, help="Membership tolerance (relative to max mu).")
@click.option("--out-dir", type=click.Path(file_okay=False), default=None, help="Write amplitudes.csv, measure.csv, report.json here.")
@_guard
def stationary(coin_src, strict, repair, family, k, A, B, rescale, spec_path, phi, window, n_max, tol, out_dir):
    """Build a stationary family and emit its amplitudes, measure and report."""
    coin = _load_coin(coin_src, strict, repair)
    lo, hi = parse_window(window)
    if family == "delta":
        raise InputError("family 'delta' is not stationary; use 'evolve'")
    fam = build_family(family, coin, k, A, B, rescale, spec_path, phi)
    field = lattice.sample_window(fam.gen, lo, hi)
    mu = lattice.to_measure(field)
    report = verify_family(fam, lo, hi, n_max, tol)
    if out_dir is None:
        click.echo(lattice.measure_csv_text(mu), nl=False)
    else:
        d = Path(out_dir)
        d.mkdir(parents=True, exist_ok=True)
        buf = io.StringIO()
        lattice.write_field_csv(field, buf)
        (d / "amplitudes.csv").write_text(buf.getvalue())
        (d / "measure.csv").write_text(lattice.measure_csv_text(mu))
        (d / "report.json").write_text(_json_text(report))
    return EXIT_OK if report["passed"] else EXIT_FAIL


@main.command(name="verify")
@coin_options
@family_options
@click.option("--n-max", default=100, show_default=True)
@click.option("--tol", default=verify.MEMBERSHIP_TOL, show_default=True, help="Membership tolerance (relative to max mu).")
@click.option("--out", default=None)
@_guard
def verify_cmd(coin_src, strict, repair, family, k, A, B, rescale, spec_path, phi, window, n_max, tol, out):
    """Emit the residual report for a stationary family (exit 1 on failure)."""
    coin = _load_coin(coin_src, strict, repair)
    lo, hi = parse_window(window)
    if family == "delta":
        raise InputError("family 'delta' is not stationary")
    fam = build_family(family, coin, k, A, B, rescale, spec_path, phi)
    report = verify_family(fam, lo, hi, n_max, tol)
    _emit(_json_text(report), out)
    return EXIT_OK if report["passed"] else EXIT_FAIL


@main.command()
@click.option("--state", "state_path", type=click.Path(), default=None, help="Diagonal-walk state JSON.")
@click.option(
    "--which",
    type=click.Choice(["unbounded", "bounded", "random-uniform", "random-level1"]),
    default=None,
    help="Built-in state instead of --state.",
)
@click.option("--window", default="-10:10", show_default=True)
@click.option("--max-n", default=2, show_default=True)
@click.option("--tol", default=bzero.CHAIN_TOL, show_default=True)
@click.option("--seed", default=0, show_default=True, help="Seed for random states (QW_SEED overrides).")
@click.option("--out", default=None)
@_guard
def certificate(state_path, which, window, max_n, tol, seed, out):
    """Run the b = 0 uniformity certificate on a diagonal-walk state."""
    if (state_path is None) == (which is None):
        raise InputError("give exactly one of --state or --which")
    if state_path is not None:
        state = bzero.DiagonalWalkState.from_json(_load_json(state_path))
    else:
        lo, hi = parse_window(window)
        rng = np.random.default_rng(resolve_seed(seed))
        state = {
            "unbounded": lambda: bzero.counterexample_unbounded(lo, hi),
            "bounded": lambda: bzero.counterexample_bounded(lo, hi),
            "random-uniform": lambda: sampling.random_uniform_diagonal_state(rng, lo, hi),
            "random-level1": lambda: sampling.random_level1_diagonal_state(rng, lo, hi),
        }[which]()
    cert = bzero.uniformity_certificate(state, max_n, tol)
    _emit(_json_text(cert.to_json()), out)
    return EXIT_OK


@main.command()
@click.option("--which", type=click.Choice(["unbounded", "bounded"]), required=True)
@click.option("--window", default="-10:10", show_default=True)
@click.option("--format", "fmt", type=click.Choice(["csv", "json"]), default="csv", show_default=True)
@click.option("--out", default=None)
@_guard
def counterexample(which, window, fmt, out):
    """Tabulate a diagonal-walk state with mu_0 = mu_1 != mu_2."""
    lo, hi = parse_window(window)
    state = bzero.counterexample_unbounded(lo, hi) if which == "unbounded" else bzero.counterexample_bounded(lo, hi)
    mus = [state.mu0()] + [bzero.diag_evolve_measure(state, n) for n in (1, 2)]

    def cell(m: Measure, x: int) -> float | None:
        return m.at(x) if m.lo <= x <= m.hi else None

    rows = [
        (int(x), float(a), float(b), *(cell(m, int(x)) for m in mus))
        for x, a, b in zip(state.sites, state.a, state.b)
    ]
    if fmt == "json":
        cols = ["x", "a", "b", "mu0", "mu1", "mu2"]
        _emit(_json_text({"which": which, "rows": [dict(zip(cols, r)) for r in rows]}), out)
        return EXIT_OK
    lines = ["x,a,b,mu0,mu1,mu2"]
    for r in rows:
        lines.append(",".join([str(r[0])] + ["" if v is None else _fmt(v) for v in r[1:]]))
    _emit("\n".join(lines) + "\n", out)
    return EXIT_OK


def _sweep_point(args: tuple) -> dict[str, Any]:
    idx, coin_label, coin, k, a_txt, b_txt, lo, hi, n_max, tol = args
    row: dict[str, Any] = {"index": idx, "coin": coin_label, "k": k, "A": a_txt, "B": b_txt}
    try:
        fam = build_family("full", coin, k, a_txt, b_txt, False, None, "1,0;0,0")
        rep = verify_family(fam, lo, hi, n_max, tol)
        row.update(
            max_eigen_residual=rep["max_eigen_residual"],
            max_identity_residual=max(rep["identities"].values()),
            membership_level=rep["membership_level"],
            decay=rep["decay"] or "",
            passed=rep["passed"],
            error="",
        )
    except (InputError, PreconditionError) as exc:
        row.update(max_eigen_residual=math.nan, max_identity_residual=math.nan, membership_level=-1,
                   decay="", passed=False, error=str(exc))
    return row


@main.command()
@click.option("--theta", default=None, help="U(theta) grid: 'linspace:a:b:n' or comma list (radians).")
@click.option("--coins", default=None, help="Semicolon-separated coin presets or JSON paths.")
@click.option("--random-coins", default=0, show_default=True, help="Add this many seeded random full-support coins.")
@click.option("--k", "ks", default="1,2,3,4", show_default=True)
@click.option("--A", "As", default="1,0", show_default=True, help="Semicolon-separated list of A values (re,im).")
@click.option("--B", "Bs", default="0,0;1,0", show_default=True, help="Semicolon-separated list of B values (re,im).")
@click.option("--window", default="-8:8", show_default=True)
@click.option("--n-max", default=20, show_default=True)
@click.option("--tol", default=verify.MEMBERSHIP_TOL, show_default=True)
@click.option("--seed", default=0, show_default=True, help="QW_SEED overrides.")
@click.option("--jobs", default=1, show_default=True, help="Worker threads; output order is fixed by grid index.")
@click.option("--format", "fmt", type=click.Choice(["csv", "json"]), default="csv", show_default=True)
@click.option("--out", default=None)
@_guard
def sweep(theta, coins, random_coins, ks, As, Bs, window, n_max, tol, seed, jobs, fmt, out):
    """Run 'verify' over a grid of coins, eigenvalues and parameters."""
    lo, hi = parse_window(window)
    coin_list: list[tuple[str, UnitaryCoin]] = []
    if theta is None and coins is None and random_coins == 0:
        theta = "linspace:0.1:1.4707963267948966:8"
    if theta is not None:
        from .coin import u_theta

        coin_list += [(f"u-theta:{float(t)!r}", u_theta(t)) for t in parse_grid(theta)]
    if coins is not None:
        coin_list += [(c, load_coin(c)) for c in coins.split(";")]
    if random_coins:
        rng = np.random.default_rng(resolve_seed(seed))
        for i in range(random_coins):
            coin_list.append((f"random:{i}", sampling.random_full_support_coin(rng)))
    try:
        k_list = [int(v) for v in ks.split(",")]
    except ValueError:
        raise InputError(f"bad --k list {ks!r}") from None
    A_list, B_list = As.split(";"), Bs.split(";")
    for v in A_list + B_list:
        parse_complex(v)
    grid = []
    for label, coin in coin_list:
        for kk in k_list:
            for a_txt in A_list:
                for b_txt in B_list:
                    grid.append((len(grid), label, coin, kk, a_txt, b_txt, lo, hi, n_max, tol))
    with ThreadPoolExecutor(max_workers=max(1, jobs)) as pool:
        rows = list(pool.map(_sweep_point, grid))
    failed = [r for r in rows if not r["passed"]]
    first = failed[0] if failed else None
    summary = {"points": len(rows), "failed": len(failed), "first_failure": first}
    if fmt == "json":
        _emit(_json_text({"rows": rows, "summary": summary}), out)
    else:
        cols = ["index", "coin", "k", "A", "B", "max_eigen_residual", "max_identity_residual",
                "membership_level", "decay", "passed", "error"]
        lines = [",".join(cols)]
        for r in rows:
            cells = []
            for c in cols:
                v = r[c]
                if isinstance(v, float):
                    v = _fmt(v)
                s = str(v)
                cells.append(f'"{s}"' if "," in s else s)
            lines.append(",".join(cells))
        note = (
            f"# summary: {len(rows)} points, {len(failed)} failed"
            + (f", first failing point index={first['index']} coin={first['coin']} k={first['k']} "
               f"A={first['A']} B={first['B']}" if first else "")
        )
        lines.append(note)
        _emit("\n".join(lines) + "\n", out)
    if first:
        click.echo(f"sweep failed at point {first['index']} ({first['coin']}, k={first['k']})", err=True)
        return EXIT_FAIL
    return EXIT_OK


if __name__ == "__main__":
    main()
