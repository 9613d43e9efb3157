"""End-to-end experiment harness and the `reconstruct` command-line tool.

For each requested half-bandwidth m the harness builds the frequency set,
synthesizes samples, runs the filtered frame reconstruction and the hybrid
assembly on a midpoint grid, and writes CSV tables plus simple SVG line
plots.  Outputs are byte-reproducible for a fixed config and seed: every
file carries a '#'-commented config echo, and wall times are reported only
in the in-memory run report.

Exit codes: 0 success, 2 configuration error, 3 numerical failure,
4 I/O failure.
"""

from __future__ import annotations

import argparse
import hashlib
import sys
import time
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np

from .filters import FilterConfig
from .frame import FilterReconstruction, assemble_omega, choose_n
from .hybrid import HybridConfig, hybrid_reconstruct
from .oracles import ground_truth_error
from .piecewise import (
    PiecewiseFunction,
    builtin_function,
    evaluate,
    jump_set,
    piecewise_from_expressions,
)
from .sampling import (
    fourier_samples,
    jittered_frequencies,
    log_frequencies,
    uniform_frequencies,
)

__all__ = [
    "ExperimentConfig",
    "RunRecord",
    "RunReport",
    "run_experiment",
    "convergence_table",
    "main",
]

_SCHEME_ABBREV = {"jittered": "jit", "log": "log", "uniform": "uni"}
_FUNCTION_PREFIX = {"f1": "single_jump", "f2": "multiple_jumps"}


@dataclass(frozen=True)
class ExperimentConfig:
    function: str = "f1"
    pieces: tuple[tuple[float, float, str], ...] = ()
    scheme: str = "jittered"
    m_list: tuple[int, ...] = (128, 256, 512)
    seed: int = 42
    delta: float = 0.025
    alpha: float = 1.0
    kappa: float = 1.0 / 15.0
    n_override: int | None = None
    grid_size: int = 1024
    svd_tol: float = 1e-12
    output_dir: str = "out"
    formats: tuple[str, ...] = ("csv", "svg")

    def validate(self) -> None:
        if self.scheme not in _SCHEME_ABBREV:
            raise ValueError(f"unknown scheme {self.scheme!r}")
        if not self.m_list:
            raise ValueError("m_list must be non-empty")
        if list(self.m_list) != sorted(self.m_list):
            raise ValueError("m_list must be ascending")
        if self.grid_size < 64:
            raise ValueError("grid_size must be at least 64")
        unknown = set(self.formats) - {"csv", "svg"}
        if unknown:
            raise ValueError(f"unknown output formats {sorted(unknown)}")
        f = self.resolve_function()
        widths = np.diff(jump_set(f, include_endpoints=True))
        if self.delta <= 0 or np.any(widths <= 2 * self.delta):
            k = int(np.argmin(widths))
            breaks = jump_set(f, include_endpoints=True)
            raise ValueError(
                f"delta = {self.delta} must lie in (0, half the narrowest "
                f"subinterval); [{breaks[k]}, {breaks[k + 1]}] is too narrow"
            )

    def resolve_function(self) -> PiecewiseFunction:
        if self.function == "custom":
            if not self.pieces:
                raise ValueError("custom function requires piece definitions")
            return piecewise_from_expressions(self.pieces)
        return builtin_function(self.function)

    def echo_lines(self) -> list[str]:
        lines = [
            f"# function={self.function}",
            f"# scheme={self.scheme}",
            f"# m_list={','.join(str(m) for m in self.m_list)}",
            f"# seed={self.seed}",
            f"# delta={self.delta!r}",
            f"# alpha={self.alpha!r}",
            f"# kappa={self.kappa!r}",
            f"# n_override={self.n_override}",
            f"# grid_size={self.grid_size}",
            f"# svd_tol={self.svd_tol!r}",
        ]
        for a, b, expr in self.pieces:
            lines.append(f"# piece={a!r}:{b!r}:{expr}")
        return lines


@dataclass(frozen=True)
class RunRecord:
    m: int
    n: int
    degree: int
    fit_samples: int
    sup_err_filter_interior: float
    sup_err_filter_global: float
    sup_err_hybrid_global: float
    sup_err_hybrid_buffers: float
    wall_time: float
    freq_hash: str


@dataclass(frozen=True)
class RunReport:
    config: ExperimentConfig
    records: tuple[RunRecord, ...]
    files: tuple[str, ...] = ()


def _frequency_set(cfg: ExperimentConfig, m: int):
    if cfg.scheme == "jittered":
        return jittered_frequencies(m, cfg.seed)
    if cfg.scheme == "log":
        return log_frequencies(m)
    return uniform_frequencies(m)


def _base_name(cfg: ExperimentConfig, m: int) -> str:
    prefix = _FUNCTION_PREFIX.get(cfg.function, cfg.function)
    return f"{prefix}_{_SCHEME_ABBREV[cfg.scheme]}_m{m}"


def midpoint_grid(size: int) -> np.ndarray:
    """Cell midpoints (i + 0.5)/size, so no point coincides with a jump."""
    return (np.arange(size) + 0.5) / size


def run_experiment(cfg: ExperimentConfig) -> RunReport:
    cfg.validate()
    f = cfg.resolve_function()
    jumps = jump_set(f, include_endpoints=True)
    grid = midpoint_grid(cfg.grid_size)
    truth = evaluate(f, grid)
    filter_cfg = FilterConfig(alpha=cfg.alpha, kappa=cfg.kappa)
    out_dir = Path(cfg.output_dir)
    out_dir.mkdir(parents=True, exist_ok=True)

    records = []
    files = []
    for m in cfg.m_list:
        started = time.perf_counter()
        freqs = _frequency_set(cfg, m)
        freq_hash = hashlib.sha256(freqs.frequencies.tobytes()).hexdigest()[:16]
        samples = fourier_samples(f, freqs)
        n = cfg.n_override if cfg.n_override is not None else choose_n(cfg.scheme, m)
        operator = assemble_omega(freqs, n, cfg.svd_tol)
        recon = FilterReconstruction(
            operator=operator, samples=samples, filter_cfg=filter_cfg, jumps=jumps
        )
        hybrid_cfg = HybridConfig(
            delta=cfg.delta, filter_cfg=filter_cfg, n=n, svd_tol=cfg.svd_tol
        )
        hyb = hybrid_reconstruct(samples, jumps, hybrid_cfg, grid, filter_recon=recon)

        err_filter = ground_truth_error(grid, hyb.filter_values, f, jumps, cfg.delta)
        err_hybrid = ground_truth_error(grid, hyb.values, f, jumps, cfg.delta)
        buffers = hyb.extrapolated
        sup_hyb_buf = (
            float(np.max(err_hybrid.pointwise[buffers])) if np.any(buffers) else 0.0
        )
        record = RunRecord(
            m=m,
            n=n,
            degree=hyb.degree,
            fit_samples=hyb.fit_sample_count,
            sup_err_filter_interior=err_filter.sup_interior,
            sup_err_filter_global=err_filter.sup,
            sup_err_hybrid_global=err_hybrid.sup,
            sup_err_hybrid_buffers=sup_hyb_buf,
            wall_time=time.perf_counter() - started,
            freq_hash=freq_hash,
        )
        records.append(record)

        base = _base_name(cfg, m)
        if "csv" in cfg.formats:
            path = out_dir / f"{base}.csv"
            _write_grid_csv(
                path, cfg, record, grid, truth, hyb.filter_values, hyb.values,
                err_filter.pointwise, err_hybrid.pointwise, hyb.method_tags,
            )
            files.append(str(path))
        if "svg" in cfg.formats:
            fun_path = out_dir / f"{base}_fun.svg"
            write_line_svg(
                fun_path, grid,
                [("f_true", truth), ("f_filter", hyb.filter_values), ("f_hybrid", hyb.values)],
                title=f"{base}: reconstruction",
            )
            err_path = out_dir / f"{base}_error.svg"
            write_line_svg(
                err_path, grid,
                [("err_filter", err_filter.pointwise), ("err_hybrid", err_hybrid.pointwise)],
                title=f"{base}: pointwise error",
                ylog=True,
            )
            files.extend([str(fun_path), str(err_path)])

    report = RunReport(config=cfg, records=tuple(records), files=tuple(files))
    if "csv" in cfg.formats:
        summary = out_dir / "summary.csv"
        _write_summary_csv(summary, cfg, report.records)
        convergence = out_dir / "convergence.csv"
        _write_convergence_csv(convergence, cfg, report)
        report = replace(report, files=report.files + (str(summary), str(convergence)))
    return report


def convergence_table(report: RunReport, field_name: str = "sup_err_hybrid_global"):
    """Rows (m, sup_err, ratio_to_previous); first ratio is empty."""
    rows = []
    prev = None
    for rec in report.records:
        err = getattr(rec, field_name)
        ratio = "" if prev is None or prev == 0 else err / prev
        rows.append((rec.m, err, ratio))
        prev = err
    return rows


def _fmt(x: float) -> str:
    return f"{x:.17e}"


def _write_grid_csv(path, cfg, record, grid, truth, filt, hyb, err_f, err_h, tags):
    with Path(path).open("w", newline="") as fh:
        for line in cfg.echo_lines():
            fh.write(line + "\n")
        fh.write(f"# m={record.m} n={record.n} M={record.degree} "
                 f"N={record.fit_samples - 1} freq_hash={record.freq_hash}\n")
        fh.write("x,f_true,f_filter,f_hybrid,err_filter,err_hybrid,tag\n")
        for i in range(len(grid)):
            fh.write(
                ",".join([
                    _fmt(grid[i]), _fmt(truth[i]), _fmt(filt[i]), _fmt(hyb[i]),
                    _fmt(err_f[i]), _fmt(err_h[i]), str(tags[i]),
                ]) + "\n"
            )


def _write_summary_csv(path, cfg, records):
    with Path(path).open("w", newline="") as fh:
        for line in cfg.echo_lines():
            fh.write(line + "\n")
        fh.write(
            "m,n,M,N,sup_err_filter_interior,sup_err_filter_global,"
            "sup_err_hybrid_global,sup_err_hybrid_buffers,freq_hash\n"
        )
        for r in records:
            fh.write(
                ",".join([
                    str(r.m), str(r.n), str(r.degree), str(r.fit_samples - 1),
                    _fmt(r.sup_err_filter_interior), _fmt(r.sup_err_filter_global),
                    _fmt(r.sup_err_hybrid_global), _fmt(r.sup_err_hybrid_buffers),
                    r.freq_hash,
                ]) + "\n"
            )


def _write_convergence_csv(path, cfg, report):
    with Path(path).open("w", newline="") as fh:
        for line in cfg.echo_lines():
            fh.write(line + "\n")
        fh.write("m,sup_err,ratio_to_previous\n")
        for m, err, ratio in convergence_table(report):
            fh.write(f"{m},{_fmt(err)},{'' if ratio == '' else _fmt(ratio)}\n")


# ---------------------------------------------------------------------------
# Minimal dependency-free SVG line plots: one polyline per series.

_SVG_COLORS = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e"]
_SVG_W, _SVG_H = 800, 500
_MARGIN = 60


def write_line_svg(path, x, series, title="", ylog=False, floor=1e-18):
    """Write a line plot; log-scale transforms the data before writing."""
    x = np.asarray(x, dtype=float)
    prepared = []
    for name, y in series:
        y = np.asarray(y, dtype=float)
        if ylog:
            y = np.log10(np.maximum(np.abs(y), floor))
        prepared.append((name, y))
    ymin = min(float(np.min(y)) for _, y in prepared)
    ymax = max(float(np.max(y)) for _, y in prepared)
    if ymax == ymin:
        ymax = ymin + 1.0
    xmin, xmax = float(np.min(x)), float(np.max(x))

    def sx(v):
        return _MARGIN + (v - xmin) / (xmax - xmin) * (_SVG_W - 2 * _MARGIN)

    def sy(v):
        return _SVG_H - _MARGIN - (v - ymin) / (ymax - ymin) * (_SVG_H - 2 * _MARGIN)

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_SVG_W}" '
        f'height="{_SVG_H}" viewBox="0 0 {_SVG_W} {_SVG_H}">',
        f'<rect x="{_MARGIN}" y="{_MARGIN}" width="{_SVG_W - 2 * _MARGIN}" '
        f'height="{_SVG_H - 2 * _MARGIN}" fill="none" stroke="#333"/>',
        f'<text x="{_SVG_W // 2}" y="30" text-anchor="middle" '
        f'font-family="sans-serif" font-size="16">{title}</text>',
    ]
    ylabel = "log10|y|" if ylog else "y"
    parts.append(
        f'<text x="{_MARGIN}" y="{_SVG_H - _MARGIN + 35}" '
        f'font-family="sans-serif" font-size="12">x: [{xmin:g}, {xmax:g}]   '
        f'{ylabel}: [{ymin:.3g}, {ymax:.3g}]</text>'
    )
    for k, (name, y) in enumerate(prepared):
        color = _SVG_COLORS[k % len(_SVG_COLORS)]
        pts = " ".join(f"{sx(xv):.2f},{sy(yv):.2f}" for xv, yv in zip(x, y))
        parts.append(
            f'<polyline fill="none" stroke="{color}" stroke-width="1" points="{pts}"/>'
        )
        parts.append(
            f'<text x="{_SVG_W - _MARGIN + 5}" y="{_MARGIN + 18 * (k + 1)}" '
            f'font-family="sans-serif" font-size="12" fill="{color}">{name}</text>'
        )
    parts.append("</svg>")
    Path(path).write_text("\n".join(parts) + "\n", encoding="utf-8")


# ---------------------------------------------------------------------------
# CLI

def _parse_m_list(text: str) -> tuple[int, ...]:
    return tuple(int(part) for part in text.split(",") if part.strip())


def _parse_formats(text: str) -> tuple[str, ...]:
    return tuple(part.strip() for part in text.split(",") if part.strip())


def _parse_pieces(text: str) -> tuple[tuple[float, float, str], ...]:
    pieces = []
    for chunk in text.split(";"):
        chunk = chunk.strip()
        if not chunk:
            continue
        a, b, expr = chunk.split(":", 2)
        pieces.append((float(a), float(b), expr.strip()))
    return tuple(pieces)


def _read_config_file(path: str) -> dict[str, str]:
    values = {}
    for raw in Path(path).read_text().splitlines():
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ValueError(f"config line without '=': {raw!r}")
        key, value = line.split("=", 1)
        values[key.strip().replace("-", "_")] = value.strip()
    return values


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="reconstruct",
        description="Reconstruct a piecewise-smooth function from "
        "non-uniform Fourier samples and write CSV/SVG reports.",
    )
    parser.add_argument("--config", help="key=value config file; flags override it")
    parser.add_argument("--function", help="f1, f2, or custom (with --pieces)")
    parser.add_argument(
        "--pieces",
        help="custom pieces as 'a:b:expr; a:b:expr' using sin/cos/exp, x, pi",
    )
    parser.add_argument("--scheme", choices=["jittered", "log", "uniform"])
    parser.add_argument("--m", dest="m_list", help="comma-separated m values")
    parser.add_argument("--seed", type=int)
    parser.add_argument("--delta", type=float)
    parser.add_argument("--alpha", type=float)
    parser.add_argument("--kappa", type=float)
    parser.add_argument("--n-override", type=int)
    parser.add_argument("--grid", dest="grid_size", type=int)
    parser.add_argument("--svd-tol", dest="svd_tol", type=float)
    parser.add_argument("--out", dest="output_dir")
    parser.add_argument("--formats", help="subset of csv,svg (comma-separated)")
    return parser


_CONFIG_PARSERS = {
    "function": str,
    "pieces": _parse_pieces,
    "scheme": str,
    "m_list": _parse_m_list,
    "m": _parse_m_list,
    "seed": int,
    "delta": float,
    "alpha": float,
    "kappa": float,
    "n_override": int,
    "grid": int,
    "grid_size": int,
    "svd_tol": float,
    "out": str,
    "output_dir": str,
    "formats": _parse_formats,
}

_CONFIG_ALIASES = {"m": "m_list", "grid": "grid_size", "out": "output_dir"}


def config_from_args(args: argparse.Namespace) -> ExperimentConfig:
    settings: dict = {}
    if args.config:
        for key, raw in _read_config_file(args.config).items():
            if key not in _CONFIG_PARSERS:
                raise ValueError(f"unknown config key {key!r}")
            settings[_CONFIG_ALIASES.get(key, key)] = _CONFIG_PARSERS[key](raw)
    for key in (
        "function", "scheme", "seed", "delta", "alpha", "kappa",
        "n_override", "grid_size", "svd_tol", "output_dir",
    ):
        value = getattr(args, key)
        if value is not None:
            settings[key] = value
    if args.m_list is not None:
        settings["m_list"] = _parse_m_list(args.m_list)
    if args.formats is not None:
        settings["formats"] = _parse_formats(args.formats)
    if args.pieces is not None:
        settings["pieces"] = _parse_pieces(args.pieces)
    return ExperimentConfig(**settings)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = config_from_args(args)
        cfg.validate()
    except ValueError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 2
    try:
        report = run_experiment(cfg)
    except ValueError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 2
    except (RuntimeError, np.linalg.LinAlgError, ArithmeticError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 3
    except OSError as exc:
        print(f"I/O failure: {exc}", file=sys.stderr)
        return 4
    for rec in report.records:
        print(
            f"m={rec.m} n={rec.n} M={rec.degree} "
            f"sup_err_filter={rec.sup_err_filter_global:.3e} "
            f"sup_err_hybrid={rec.sup_err_hybrid_global:.3e} "
            f"({rec.wall_time:.2f}s)"
        )
    return 0


if __name__ == "__main__":
    sys.exit(main())
