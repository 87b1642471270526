"""Command line: verify identities, compute xi, estimate exponents, run sweeps."""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import List, Optional, Tuple

from . import __version__
from .exponents import (DEFAULT_GRID, LAMBDA_X_DEFAULT, OMEGA_X_DEFAULT, SWEEP_COLUMNS,
                        SweepRow, candidate_slopes, density_sweep, jarnik_residual,
                        lambda_records, limit_point, omega_records, uniform_slope)
from .families import (INV_GOLDEN_SQ, CorollaryParams, FamilyParams, corollary_params,
                       example1_seed, exponent_interval)
from .linalg import Mat2
from .report import Report
from .sequence import FibSequence, verify_cor4, verify_growth, verify_prop3
from .symmetrizer import is_admissible
from .xi import MAX_DEPTH, DegenerateSequence, PrecisionError, xi_approx

EXIT_OK, EXIT_CHECK, EXIT_CONFIG, EXIT_PRECISION = 0, 1, 2, 3


class ConfigError(ValueError):
    pass


class CheckFailed(RuntimeError):
    pass


@dataclass
class RunConfig:
    command: str
    family: Optional[str] = None
    t: Optional[float] = None
    eps: Optional[float] = None
    k: Optional[int] = None
    l: Optional[int] = None
    seed: Optional[List[int]] = None
    imax: Optional[int] = None
    digits: Optional[int] = None
    max_depth: Optional[int] = None
    xmax_omega: Optional[int] = None
    xmax_lambda: Optional[int] = None
    tol: Optional[float] = None
    grid: Optional[List[Tuple[int, int]]] = None
    format: str = "text"
    out: Optional[str] = None
    # not echoed: results do not depend on it
    threads: int = field(default=1, repr=False)

    def echo(self) -> dict:
        d = asdict(self)
        d.pop("threads")
        d.pop("out")
        d["version"] = __version__
        return d


# --- config resolution ---------------------------------------------------

def _parse_family(text):
    try:
        return FamilyParams.parse(text)
    except ValueError as e:
        raise ConfigError(f"--family: {e}") from None


def _parse_seed(items: List[str]) -> List[int]:
    if len(items) == 1 and not items[0].lstrip("-").isdigit():
        path = Path(items[0])
        if not path.is_file():
            raise ConfigError(f"--seed: no such file {path}")
        items = path.read_text().split()
    try:
        vals = [int(v) for v in items]
    except ValueError:
        raise ConfigError("--seed: expected integers") from None
    if len(vals) != 8:
        raise ConfigError(f"--seed: expected 8 integers (w0 then w1, row by row), got {len(vals)}")
    return vals


def _parse_grid(text: str):
    if text == "default":
        return [tuple(g) for g in DEFAULT_GRID]
    if not text.strip():
        return []
    try:
        return [tuple(int(v) for v in part.split(",")) for part in text.split(";") if part.strip()]
    except ValueError:
        raise ConfigError(f"--grid: cannot parse {text!r}; use 'default' or 'k,l;k,l;...'") from None


def resolve(args) -> RunConfig:
    cfg = RunConfig(args.command, format=args.format, out=args.out, threads=args.threads)
    for name in ("imax", "digits", "max_depth", "xmax_omega", "xmax_lambda", "tol"):
        if hasattr(args, name):
            setattr(cfg, name, getattr(args, name))
    if args.command == "sweep":
        cfg.grid = _parse_grid(args.grid)
        for k, l in cfg.grid:
            if not 0 < l < k:
                raise ConfigError(f"--grid: need 0 < l < k, got ({k},{l})")
        return cfg
    sources = [args.family is not None, args.seed is not None, args.t is not None or args.eps is not None]
    if sum(sources) != 1:
        raise ConfigError("give exactly one of --family, --seed, --t/--eps")
    if args.family is not None:
        cfg.family = str(_parse_family(args.family))
    elif args.seed is not None:
        cfg.seed = _parse_seed(args.seed)
    else:
        if args.t is None or args.eps is None:
            raise ConfigError("--t and --eps go together")
        try:
            p = corollary_params(args.t, args.eps)
        except (ValueError, RuntimeError) as e:
            raise ConfigError(str(e)) from None
        cfg.t, cfg.eps, cfg.k, cfg.l = args.t, args.eps, p.k, p.l
        cfg.family = str(p.family)
    for name, lo in (("imax", 0), ("digits", 1), ("max_depth", 2), ("xmax_omega", 0), ("xmax_lambda", 0)):
        v = getattr(cfg, name)
        if v is not None and v < lo:
            raise ConfigError(f"--{name.replace('_', '-')} must be >= {lo}")
    if cfg.xmax_lambda is not None and cfg.xmax_lambda > LAMBDA_X_DEFAULT:
        raise ConfigError(f"--xmax-lambda is capped at {LAMBDA_X_DEFAULT}")
    return cfg


def _sequence(cfg: RunConfig) -> FibSequence:
    if cfg.family is not None:
        return FibSequence(example1_seed(FamilyParams.parse(cfg.family)))
    v = cfg.seed
    pair = is_admissible(Mat2(*v[:4]), Mat2(*v[4:]))
    if not pair.admissible:
        raise CheckFailed(f"seed pair not admissible: {pair.reason}")
    return FibSequence(pair)


# --- output --------------------------------------------------------------

def _emit(cfg: RunConfig, text: str):
    if cfg.out:
        Path(cfg.out).write_text(text)
    else:
        sys.stdout.write(text)


def _csv(cfg: RunConfig, columns, rows) -> str:
    buf = io.StringIO()
    buf.write("# config: " + json.dumps(cfg.echo(), sort_keys=True) + "\n")
    wr = csv.DictWriter(buf, fieldnames=columns, lineterminator="\n", extrasaction="ignore")
    wr.writeheader()
    for r in rows:
        wr.writerow({k: ("" if r.get(k) is None else r[k]) for k in columns})
    return buf.getvalue()


def _json(cfg: RunConfig, **payload) -> str:
    return json.dumps({"config": cfg.echo(), **payload}, indent=2, sort_keys=True) + "\n"


# --- commands ------------------------------------------------------------

def cmd_verify(cfg: RunConfig) -> int:
    seq = _sequence(cfg)
    imax = cfg.imax
    rep = Report()
    rep.extend(verify_prop3(seq, imax))
    rep.extend(verify_cor4(seq, imax))
    alpha = beta = None
    if cfg.family is not None:
        fam = FamilyParams.parse(cfg.family)
        alpha, beta = fam.alpha(), fam.beta()
    rep.extend(verify_growth(seq, imax, alpha, beta))
    if cfg.format == "json":
        _emit(cfg, _json(cfg, checks=rep.to_records(), ok=rep.ok))
    elif cfg.format == "csv":
        _emit(cfg, "# config: " + json.dumps(cfg.echo(), sort_keys=True) + "\n" + rep.to_csv())
    else:
        n_pass = sum(c.status == "pass" for c in rep.checks)
        lines = [f"{n_pass} checks passed, {len(rep.failures)} failed"]
        lines += [f"FAIL {c.check}[{c.index}] {c.witness}".rstrip() for c in rep.failures]
        _emit(cfg, "\n".join(lines) + "\n")
    if not rep.ok:
        first = rep.failures[0]
        raise CheckFailed(f"{first.check} failed at index {first.index}: {first.witness}".rstrip(": "))
    return EXIT_OK


def cmd_xi(cfg: RunConfig) -> int:
    seq = _sequence(cfg)
    x = xi_approx(seq, cfg.digits, cfg.max_depth)
    num, den = seq.ys[x.depth][1], seq.ys[x.depth][0]
    exact = max(num.bit_length(), den.bit_length()) < 12000
    rec = {"xi": x.decimal(cfg.digits), "err": x.err_str(), "depth": x.depth,
           "numerator": str(num) if exact else None, "denominator": str(den) if exact else None}
    if cfg.format == "json":
        _emit(cfg, _json(cfg, **rec))
    elif cfg.format == "csv":
        _emit(cfg, _csv(cfg, ["xi", "err", "depth"], [rec]))
    else:
        _emit(cfg, f"{rec['xi']} ± {rec['err']} (depth {x.depth})\n")
    return EXIT_OK


def _estimate_row(cfg: RunConfig) -> dict:
    seq = _sequence(cfg)
    y = limit_point(seq, cfg.imax)
    row = {k: None for k in SWEEP_COLUMNS}
    row.update(k=cfg.k, l=cfg.l, depth=cfg.imax)
    hypothesis = True
    if cfg.family is not None:
        fam = FamilyParams.parse(cfg.family)
        row.update(a=fam.a, b=fam.b, c=fam.c)
        if cfg.k is not None:
            p = CorollaryParams(cfg.k, cfg.l)
            lo, hi = exponent_interval(p.alpha, p.beta)
            hypothesis = p.within_hypothesis
        else:
            lo, hi = exponent_interval(float(fam.alpha()), float(fam.beta()))
            hypothesis = float(fam.beta()) < INV_GOLDEN_SQ
        row.update(target_lo=lo, target_hi=hi)
        target = (lo, hi)
    else:
        target = None
    om, _ = candidate_slopes(seq, y, cfg.imax, target=target)
    row["omega_candidate"] = om.estimate
    if cfg.xmax_omega:
        row["omega_brute"] = uniform_slope(omega_records(y, cfg.xmax_omega, cfg.threads)).estimate
    if cfg.xmax_lambda:
        lam = uniform_slope(lambda_records(y, cfg.xmax_lambda, cfg.threads), kind="lambda-hat").estimate
        row["lambda_brute"] = lam
        row["jarnik_residual"] = jarnik_residual(lam, om.estimate)
    row["_samples"] = om.slope_samples
    row["_hypothesis"] = hypothesis
    return row


def cmd_exponents(cfg: RunConfig) -> int:
    row = _estimate_row(cfg)
    samples = row.pop("_samples")
    hypothesis = row.pop("_hypothesis")
    if cfg.format == "json":
        _emit(cfg, _json(cfg, row=row, omega_samples=samples, within_hypothesis=hypothesis))
    else:
        _emit(cfg, _csv(cfg, SWEEP_COLUMNS, [row]))
    lo, hi = row["target_lo"], row["target_hi"]
    if hypothesis and lo is not None and not lo - cfg.tol <= row["omega_candidate"] <= hi + cfg.tol:
        raise CheckFailed(f"omega candidate {row['omega_candidate']:.4f} outside [{lo:.4f}, {hi:.4f}] "
                          f"+- {cfg.tol}; try a larger --imax")
    return EXIT_OK


def cmd_sweep(cfg: RunConfig) -> int:
    rows: List[SweepRow] = density_sweep(cfg.grid, cfg.imax, cfg.xmax_omega, cfg.xmax_lambda, cfg.threads)
    recs = [r.as_dict() for r in rows]
    if cfg.format == "json":
        _emit(cfg, _json(cfg, rows=recs))
    else:
        _emit(cfg, _csv(cfg, SWEEP_COLUMNS + ["within_hypothesis"], recs))
    return EXIT_OK


COMMANDS = {"verify": cmd_verify, "xi": cmd_xi, "exponents": cmd_exponents, "sweep": cmd_sweep}


# --- parser --------------------------------------------------------------

def _source_args(p):
    g = p.add_argument_group("input (exactly one)")
    g.add_argument("--family", metavar="A,B,C", help="seed family with parameters a,b,c")
    g.add_argument("--seed", nargs="+", metavar="N",
                   help="8 integers (w0 then w1, row by row) or a file holding them")
    g.add_argument("--t", type=float, help="target exponent parameter, with --eps")
    g.add_argument("--eps", type=float)


def _output_args(p, formats, default):
    p.add_argument("--format", choices=formats, default=default)
    p.add_argument("--out", metavar="PATH", help="write here instead of stdout")
    p.add_argument("--threads", type=int, default=os.cpu_count() or 1)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="fibtype", description=__doc__)
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify", help="exact identity and growth checks")
    _source_args(p)
    p.add_argument("--imax", type=int, default=12)
    _output_args(p, ["text", "csv", "json"], "text")

    p = sub.add_parser("xi", help="the limit xi to a number of digits")
    _source_args(p)
    p.add_argument("--digits", type=int, default=50)
    p.add_argument("--max-depth", type=int, default=MAX_DEPTH)
    _output_args(p, ["text", "csv", "json"], "text")

    p = sub.add_parser("exponents", help="candidate and brute-force exponent estimates")
    _source_args(p)
    p.add_argument("--imax", type=int, default=14)
    p.add_argument("--xmax-omega", type=int, default=OMEGA_X_DEFAULT)
    p.add_argument("--xmax-lambda", type=int, default=10 ** 6)
    p.add_argument("--tol", type=float, default=0.05)
    _output_args(p, ["csv", "json"], "csv")

    p = sub.add_parser("sweep", help="exponent estimates over a (k,l) grid")
    p.add_argument("--grid", default="default", help="'default' or 'k,l;k,l;...'")
    p.add_argument("--imax", type=int, default=14)
    p.add_argument("--xmax-omega", type=int, default=OMEGA_X_DEFAULT)
    p.add_argument("--xmax-lambda", type=int, default=10 ** 6)
    _output_args(p, ["csv", "json"], "csv")
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = resolve(args)
        return COMMANDS[cfg.command](cfg)
    except ConfigError as e:
        print(f"config error: {e}", file=sys.stderr)
        return EXIT_CONFIG
    except (CheckFailed, DegenerateSequence) as e:
        print(f"check failed: {e}", file=sys.stderr)
        return EXIT_CHECK
    except PrecisionError as e:
        msg = f"precision failure: {e}"
        if e.best is not None:
            msg += f" (best: {e.best.err_str()} at depth {e.best.depth})"
        print(msg, file=sys.stderr)
        return EXIT_PRECISION


if __name__ == "__main__":
    sys.exit(main())
