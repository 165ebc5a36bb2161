"""Command-line front end.

Usage:
    qbiuni eval-bounds --family M --lambda 0 --q 0.9 --k 0 --beta 0 --tau 1
    qbiuni probe --family F --mu 1 --q 0.6 --k 1 --alpha 0.5 --grid-step 0.05
    qbiuni check-membership --family M --lambda 0 --q 0.9 --beta 0 --coeff 0.9
    qbiuni limit-scan --family F --mu 1 --beta 0.25

Exit codes: 0 success, 2 bad configuration, 3 dominance violation,
4 membership requested for a target without a region oracle.
"""

from __future__ import annotations

import csv
import io
import itertools
import json
import sys
from pathlib import Path

import click
import yaml

from .bounds import bound_report, fs_two_term_F, fs_two_term_M
from .classes import DEFAULT_POINTS_PER_RING, DEFAULT_RINGS, ClassSpec, NoRegionOracle, membership
from .oracle import classical_limit_scan, probe_bounds
from .qcalc import QParams
from .series import Series, normalized
from .targets import BadNormalization, custom_target, starlike_order, strongly_starlike

__all__ = ["cli", "COLUMNS"]

COLUMNS = [
    "family", "lambda_mu", "q", "k", "target_kind", "target_param", "quantity",
    "tau_re", "tau_im", "bound", "observed_max", "dominated", "degenerate",
    "reference", "note",
]

EXIT_CONFIG, EXIT_DOMINANCE, EXIT_NO_ORACLE = 2, 3, 4
DEFAULT_TAUS = ("0", "0.5", "1", "2", "-1")
SEED_ENV = "QBIUNI_SEED"


def parse_complex(text: str) -> complex:
    """``"re"`` or ``"re,im"`` -> complex."""
    parts = [p.strip() for p in str(text).split(",")]
    if not 1 <= len(parts) <= 2:
        raise ValueError(f"expected 're' or 're,im', got {text!r}")
    re_ = float(parts[0])
    im = float(parts[1]) if len(parts) == 2 else 0.0
    return complex(re_, im)


def _complex_list(values, what: str) -> list[complex]:
    try:
        return [parse_complex(v) for v in values]
    except ValueError as exc:
        raise click.BadParameter(str(exc), param_hint=what)


def read_series_file(path: str) -> Series:
    """JSON list (numbers or ``[re, im]`` pairs) or one ``re[,im]`` per line."""
    text = Path(path).read_text()
    try:
        data = json.loads(text)
    except json.JSONDecodeError:
        data = [ln for ln in text.split() if ln.strip()]
        return Series([parse_complex(v) for v in data])
    return Series([complex(*v) if isinstance(v, list) else complex(v) for v in data])


def _targets(alpha, beta, series_file, order):
    out = []
    try:
        out += [strongly_starlike(a, order) for a in alpha]
        out += [starlike_order(b, order) for b in beta]
        if series_file:
            out.append(custom_target(read_series_file(series_file)))
    except (ValueError, BadNormalization, OSError) as exc:
        raise click.BadParameter(str(exc), param_hint="target")
    return out or [starlike_order(0.0, order)]


def _specs(family, params, qs, ks, targets, step):
    specs = []
    try:
        for p, q, k, t in itertools.product(params or (0.0,), qs, ks, targets):
            specs.append(ClassSpec(family, p, QParams(q, k), t, step))
    except ValueError as exc:
        raise click.BadParameter(str(exc))
    return specs


def _base(spec: ClassSpec) -> dict:
    t = spec.target
    return {
        "family": spec.family,
        "lambda_mu": spec.param,
        "q": spec.qp.q,
        "k": spec.qp.k,
        "target_kind": t.kind,
        "target_param": t.param,
    }


def _row(spec, quantity, tau=None, **fields) -> dict:
    row = dict.fromkeys(COLUMNS)
    row.update(_base(spec))
    row["quantity"] = quantity
    if tau is not None:
        row["tau_re"], row["tau_im"] = tau.real, tau.imag
    row.update(fields)
    return row


def _fmt_point(pt) -> str:
    return "(" + ", ".join(f"{complex(v).real:.6g}{complex(v).imag:+.6g}j" for v in pt) + ")"


def _csv_cell(v):
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return repr(v)
    return str(v)


def emit(rows: list[dict], fmt: str, output: str | None) -> None:
    if fmt == "json":
        text = json.dumps(rows, indent=2) + "\n"
    else:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(COLUMNS)
        for r in rows:
            w.writerow([_csv_cell(r.get(c)) for c in COLUMNS])
        text = buf.getvalue()
    if output and output != "-":
        Path(output).write_text(text)
    else:
        click.echo(text, nl=False)


def _load_config(ctx, param, value):
    if value is None:
        return None
    try:
        data = yaml.safe_load(Path(value).read_text()) or {}
    except (OSError, yaml.YAMLError) as exc:
        raise click.BadParameter(str(exc), param_hint="--config")
    if not isinstance(data, dict):
        raise click.BadParameter("config must be a mapping", param_hint="--config")
    data = {str(k).replace("-", "_"): v for k, v in data.items()}
    # same keys for every subcommand; flags given on the command line win
    ctx.default_map = {name: data for name in ctx.command.commands}
    return value


@click.group(context_settings={"help_option_names": ["-h", "--help"]})
@click.option("--config", type=click.Path(dir_okay=False), callback=_load_config,
              is_eager=True, expose_value=False, help="YAML/JSON file with option defaults.")
def cli():
    """Coefficient bounds for bi-univalent classes built on the q-Salagean operator."""


def spec_options(f):
    opts = [
        click.option("--family", type=click.Choice(["M", "F"]), default="M", show_default=True),
        click.option("--lambda", "--mu", "lambda_mu", type=float, multiple=True,
                     help="Class parameter (lambda for M, mu for F); repeatable."),
        click.option("--q", "q", type=float, multiple=True, default=(0.5,), show_default=True),
        click.option("--k", "k", type=int, multiple=True, default=(0,), show_default=True),
        click.option("--alpha", type=float, multiple=True, help="Strongly starlike target; repeatable."),
        click.option("--beta", type=float, multiple=True, help="Starlike-of-order target; repeatable."),
        click.option("--series-file", type=click.Path(dir_okay=False), default=None,
                     help="Custom target coefficients c0..cN."),
        click.option("--truncation", type=click.IntRange(3, 64), default=16, show_default=True),
        click.option("--operator-step", type=click.Choice(["classical", "jackson"]),
                     default="classical", show_default=True,
                     help="Reading of the extra operator steps in the M class."),
        click.option("--format", "fmt", type=click.Choice(["csv", "json"]), default="csv",
                     show_default=True),
        click.option("--output", "-o", default=None, help="Output path (default stdout)."),
    ]
    for o in reversed(opts):
        f = o(f)
    return f


def _collect_specs(family, lambda_mu, q, k, alpha, beta, series_file, truncation, operator_step):
    targets = _targets(alpha, beta, series_file, truncation)
    return _specs(family, lambda_mu, q, k, targets, operator_step)


@cli.command("eval-bounds")
@spec_options
@click.option("--tau", multiple=True, help="Fekete-Szego weight 're' or 're,im'; repeatable.")
def eval_bounds(family, lambda_mu, q, k, alpha, beta, series_file, truncation, operator_step,
                fmt, output, tau):
    """Evaluate the closed-form bounds."""
    taus = _complex_list(tau, "--tau")
    specs = _collect_specs(family, lambda_mu, q, k, alpha, beta, series_file, truncation,
                           operator_step)
    rows = []
    for spec in specs:
        rep = bound_report(spec, taus)
        a2 = rep.a2_bound
        rows.append(_row(spec, "a2", bound=a2 if a2 is not None else "degenerate",
                         degenerate=a2 is None))
        rows.append(_row(spec, "a3", bound=rep.a3_bound, degenerate=False))
        for t in taus:
            b = rep.fs_bounds[t]
            rows.append(_row(spec, "fs", t, bound=b if b is not None else "degenerate",
                             degenerate=b is None))
    emit(rows, fmt, output)


@cli.command("probe")
@spec_options
@click.option("--tau", multiple=True, default=DEFAULT_TAUS, show_default=True)
@click.option("--grid-step", type=float, default=0.05, show_default=True)
@click.option("--phases", type=click.IntRange(0, 64), default=0,
              help="Also sweep this many complex phases per parameter.")
@click.option("--consistency-samples", type=click.IntRange(0), default=100, show_default=True)
@click.option("--seed", type=int, default=0, envvar=SEED_ENV, show_default=True)
@click.option("--bracket-exponent", type=click.Choice(["2k", "k"]), default="2k", hidden=True)
def probe(family, lambda_mu, q, k, alpha, beta, series_file, truncation, operator_step,
          fmt, output, tau, grid_step, phases, consistency_samples, seed, bracket_exponent):
    """Grid-search the coefficients and check the bounds dominate."""
    taus = _complex_list(tau, "--tau")
    if not (0 < grid_step <= 2):
        raise click.BadParameter("must lie in (0, 2]", param_hint="--grid-step")
    specs = _collect_specs(family, lambda_mu, q, k, alpha, beta, series_file, truncation,
                           operator_step)
    rows, ok = [], True
    for spec in specs:
        r = probe_bounds(spec, taus, grid_step, phases, bracket_exponent,
                         consistency_samples, seed)
        if r.degenerate:
            rows.append(_row(spec, "a2", bound="degenerate", degenerate=True,
                             note="degenerate bracket; excluded from dominance"))
            continue
        flags = r.dominated
        ok &= all(flags.values())
        note_grid = f"grid_step={grid_step!r} points={r.points}"
        rows.append(_row(spec, "a2", bound=r.bound_a2, observed_max=r.max_a2,
                         dominated=flags["a2"], degenerate=False,
                         note=f"{note_grid} argmax={_fmt_point(r.argmax_a2)}"))
        rows.append(_row(spec, "a3", bound=r.bound_a3, observed_max=r.max_a3,
                         dominated=flags["a3"], degenerate=False,
                         note=f"{note_grid} argmax={_fmt_point(r.argmax_a3)}"))
        two_term = fs_two_term_M if spec.family == "M" else fs_two_term_F
        for t in taus:
            val, arg = r.max_fs[t]
            note = f"{note_grid} argmax={_fmt_point(arg)}"
            if t.imag != 0:
                # the piecewise bound is only implied for real tau
                note += f" two_term={two_term(t, spec.param, spec.qp, spec.B1, spec.B2)!r}"
            rows.append(_row(spec, "fs", t, bound=r.bound_fs[t], observed_max=val,
                             dominated=flags[("fs", t)], degenerate=False, note=note))
        if r.residual is not None:
            rows.append(_row(spec, "relation_residual", bound=r.residual_tol,
                             observed_max=r.residual, dominated=flags["residual"],
                             degenerate=False,
                             note=f"seed={seed} samples={consistency_samples}"))
    emit(rows, fmt, output)
    if not ok:
        sys.exit(EXIT_DOMINANCE)


@cli.command("check-membership")
@spec_options
@click.option("--coeff", multiple=True, help="a2, a3, ... in order, each 're' or 're,im'.")
@click.option("--rings", default=",".join(map(str, DEFAULT_RINGS)), show_default=True)
@click.option("--points-per-ring", type=click.IntRange(1), default=DEFAULT_POINTS_PER_RING,
              show_default=True)
def check_membership(family, lambda_mu, q, k, alpha, beta, series_file, truncation,
                     operator_step, fmt, output, coeff, rings, points_per_ring):
    """Sampled subordination test of f = z + a2 z^2 + ... on both branches."""
    tail = _complex_list(coeff, "--coeff")
    try:
        radii = [float(r) for r in rings.split(",")]
        f = normalized(tail, truncation)
    except ValueError as exc:
        raise click.BadParameter(str(exc))
    if any(not (0 < r < 1) for r in radii):
        raise click.BadParameter("radii must lie in (0, 1)", param_hint="--rings")
    specs = _collect_specs(family, lambda_mu, q, k, alpha, beta, series_file, truncation,
                           operator_step)
    rows = []
    for spec in specs:
        try:
            v = membership(f, spec, radii, points_per_ring)
        except NoRegionOracle as exc:
            click.echo(f"error: {exc}", err=True)
            sys.exit(EXIT_NO_ORACLE)
        for side, sv in (("f", v.f_verdict), ("g", v.g_verdict)):
            w = sv.witness
            rows.append(_row(spec, f"membership_{side}", bound=0.0, observed_max=sv.worst_margin,
                             dominated=sv.passed, degenerate=False,
                             note=f"{'pass (sampled)' if sv.passed else 'fail'} "
                                  f"witness={w.real!r},{w.imag!r} samples={sv.samples} "
                                  f"order={v.order}"))
    emit(rows, fmt, output)


@cli.command("limit-scan")
@spec_options
@click.option("--q-ladder", type=float, multiple=True,
              default=(0.5, 0.9, 0.99, 0.999, 1 - 1e-8), show_default=True)
def limit_scan(family, lambda_mu, q, k, alpha, beta, series_file, truncation, operator_step,
               fmt, output, q_ladder):
    """Bounds along q -> 1-, next to the classical values (column 'reference')."""
    targets = _targets(alpha, beta, series_file, truncation)
    rows = []
    try:
        for p, kk, t in itertools.product(lambda_mu or (0.0,), k, targets):
            for row in classical_limit_scan(family, p, t, q_ladder, kk):
                spec = ClassSpec(family, p, QParams(row.q, kk), t)
                a2 = row.a2_bound
                rows.append(_row(spec, "a2", bound=a2 if a2 is not None else "degenerate",
                                 degenerate=a2 is None, reference=row.a2_classical,
                                 note=f"[2]_q={row.bracket2!r} gap={row.a2_gap!r}"))
                rows.append(_row(spec, "a3", bound=row.a3_bound, degenerate=False,
                                 reference=row.a3_classical,
                                 note=f"[3]_q={row.bracket3!r} gap={row.a3_gap!r}"))
    except ValueError as exc:
        raise click.BadParameter(str(exc))
    emit(rows, fmt, output)


def main():  # pragma: no cover
    cli()


if __name__ == "__main__":  # pragma: no cover
    main()
