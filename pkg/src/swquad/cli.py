"""Command-line front end.

``swquad <mode> --config job.json`` runs one pipeline and writes a table
(CSV or JSON). Modes:

- ``quasi``: quantized quasi-energies of every branch up to ``p_max``;
- ``relativistic``: roots of the implicit relativistic equations;
- ``closure-check``: matrix checks of the algebra relations per level;
- ``dirac-check``: quasi-Hamiltonian versus Dirac algebra coefficients;
- ``verify``: algebraic levels against the finite-difference oracle.

In ``quasi``, ``closure-check`` and ``verify`` the parameters are read as
quasi-Hamiltonian (tilded) parameters with ``m~ = m``. The exit status is 0
iff no row or check failed.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import asdict, dataclass, fields
from typing import Sequence

import numpy as np

from .algebra import build_matrix_rep, verify_closure
from .errors import ConfigError, DomainError, NonUnitaryError
from .relativistic import FORMS, solve_relativistic, verify_dirac_equivalence
from .systems import (
    CASES,
    SIGN_SLOTS,
    PhysicalParams,
    TildeParams,
    case_spec,
    enumerate_levels,
    level_status,
    quasi_spectrum,
    realize_level,
    sign_choices,
    structure_constants,
    tilde_params,
    u_value,
)
from .verification import oracle_comparison

MODES = ("quasi", "relativistic", "closure-check", "dirac-check", "verify")
COLUMNS = ("case", "p", "eps1", "eps2", "u", "E_tilde", "E_rel", "residual", "positivity", "notes")
REQUIRED = {1: ("omega",), 2: ("omega",), 3: ("k",), 4: ("k",)}
DEFAULT_TOL = {"quasi": 1e-9, "relativistic": 1e-12, "closure-check": 1e-9,
               "dirac-check": 1e-10, "verify": None}
TWO_PATH_TOL = 1e-8


@dataclass(frozen=True)
class JobConfig:
    """A validated job. ``signs`` is ``"all"`` or a tuple of sign tuples."""

    case: int
    mode: str
    m: float = 1.0
    c: float = 1.0
    hbar: float = 1.0
    omega: float = 1.0
    k: float = 1.0
    mu: float = 0.0
    mu1: float = 0.0
    mu2: float = 0.0
    p_max: int = 2
    signs: object = "all"
    tol: float | None = None
    form: str = "composed"
    E_samples: tuple | None = None
    grid_points: int = 300
    n_levels: int = 4
    format: str = "csv"

    def physical(self) -> PhysicalParams:
        return PhysicalParams(m=self.m, c=self.c, hbar=self.hbar, omega=self.omega, k=self.k,
                              mu=self.mu, mu1=self.mu1, mu2=self.mu2)

    def quasi(self) -> TildeParams:
        return TildeParams(m=self.m, hbar=self.hbar, omega=self.omega, k=self.k,
                           mu=self.mu, mu1=self.mu1, mu2=self.mu2)

    def sign_list(self) -> list[tuple[int, ...]]:
        return sign_choices(self.case) if self.signs == "all" else [tuple(s) for s in self.signs]

    def effective_tol(self) -> float | None:
        return DEFAULT_TOL[self.mode] if self.tol is None else self.tol

    def to_dict(self) -> dict:
        d = asdict(self)
        if d["signs"] != "all":
            d["signs"] = [list(s) for s in d["signs"]]
        if d["E_samples"] is not None:
            d["E_samples"] = list(d["E_samples"])
        return d

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)


_FIELDS = {f.name for f in fields(JobConfig)}
_FLOATS = ("m", "c", "hbar", "omega", "k", "mu", "mu1", "mu2")


def _number(key, value, integer=False):
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"field {key!r}: expected a number, got {value!r}")
    if integer:
        if isinstance(value, float) and not value.is_integer():
            raise ConfigError(f"field {key!r}: expected an integer, got {value!r}")
        return int(value)
    if not math.isfinite(value):
        raise ConfigError(f"field {key!r}: must be finite")
    return float(value)


def parse_config(text: bytes | str, mode: str | None = None) -> JobConfig:
    """Parse and validate a JSON job description.

    ``mode`` (from the subcommand) fills or must agree with the document's
    ``mode`` key. Defaults: ``m = c = hbar = 1``, all signs, per-mode
    tolerance.
    """
    if isinstance(text, bytes):
        try:
            text = text.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise ConfigError(f"config is not UTF-8: {exc}") from exc
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc
    if not isinstance(raw, dict):
        raise ConfigError("config must be a JSON object")
    unknown = sorted(set(raw) - _FIELDS)
    if unknown:
        raise ConfigError(f"unknown key {unknown[0]!r}")
    if mode is not None:
        if "mode" in raw and raw["mode"] != mode:
            raise ConfigError(f"field 'mode': config says {raw['mode']!r} but the command is {mode!r}")
        raw = {**raw, "mode": mode}
    if "mode" not in raw:
        raise ConfigError("missing field 'mode'")
    if raw["mode"] not in MODES:
        raise ConfigError(f"field 'mode': must be one of {MODES}, got {raw['mode']!r}")
    if "case" not in raw:
        raise ConfigError("missing field 'case'")
    case = raw["case"]
    if isinstance(case, bool) or case not in CASES:
        raise ConfigError(f"field 'case': must be one of {CASES}, got {case!r}")
    for key in REQUIRED[case]:
        if key not in raw:
            raise ConfigError(f"case {case} requires field {key!r} (missing {key})")
    vals = {"case": int(case), "mode": raw["mode"]}
    for key in _FLOATS:
        if key in raw:
            vals[key] = _number(key, raw[key])
    for key in ("p_max", "grid_points", "n_levels"):
        if key in raw:
            vals[key] = _number(key, raw[key], integer=True)
    if vals.get("p_max", 0) < 0:
        raise ConfigError("field 'p_max': must be non-negative")
    if not 32 <= vals.get("grid_points", 300) <= 500:
        raise ConfigError("field 'grid_points': must lie in [32, 500]")
    if vals.get("n_levels", 4) < 1:
        raise ConfigError("field 'n_levels': must be positive")
    for key in ("m", "c", "hbar"):
        if key in vals and not vals[key] > 0:
            raise ConfigError(f"field {key!r}: must be positive")
    if raw.get("tol") is not None:
        vals["tol"] = _number("tol", raw["tol"])
        if not vals["tol"] > 0:
            raise ConfigError("field 'tol': must be positive")
    if "form" in raw:
        if raw["form"] not in FORMS:
            raise ConfigError(f"field 'form': must be one of {FORMS}")
        vals["form"] = raw["form"]
    if "format" in raw:
        if raw["format"] not in ("csv", "json"):
            raise ConfigError("field 'format': must be 'csv' or 'json'")
        vals["format"] = raw["format"]
    if raw.get("E_samples") is not None:
        if not isinstance(raw["E_samples"], list) or not raw["E_samples"]:
            raise ConfigError("field 'E_samples': expected a non-empty list of numbers")
        vals["E_samples"] = tuple(_number("E_samples", v) for v in raw["E_samples"])
    if "signs" in raw and raw["signs"] != "all":
        s = raw["signs"]
        n = SIGN_SLOTS[case]
        ok = isinstance(s, list) and s and all(
            isinstance(t, list) and len(t) == n and all(e in (1, -1) and not isinstance(e, bool) for e in t)
            for t in s)
        if not ok:
            raise ConfigError(f"field 'signs': 'all' or a list of {n}-element lists of +1/-1")
        vals["signs"] = tuple(tuple(int(e) for e in t) for t in s)
    cfg = JobConfig(**vals)
    _check_domain(cfg)
    return cfg


def _check_domain(cfg: JobConfig) -> None:
    """Surface sw-systems domain errors at the parameters the job will use."""
    try:
        if cfg.mode in ("relativistic", "dirac-check"):
            tp = tilde_params(cfg.physical(), cfg.m * cfg.c**2, cfg.case)
        else:
            tp = cfg.quasi()
        case_spec(cfg.case, tp)
    except DomainError as exc:
        raise ConfigError(f"case {cfg.case}: {exc}") from exc


# --- rows -------------------------------------------------------------------------

def _row(case, p=None, signs=(), u=None, E_tilde=None, E_rel=None, residual=None,
         positivity=None, notes="") -> dict:
    signs = tuple(signs)
    return {"case": case, "p": p,
            "eps1": signs[0] if len(signs) > 0 else None,
            "eps2": signs[1] if len(signs) > 1 else None,
            "u": u, "E_tilde": E_tilde, "E_rel": E_rel, "residual": residual,
            "positivity": positivity, "notes": notes}


def _finite(x):
    return None if x is None or not np.isfinite(x) else float(x)


def _positivity(pos, deg):
    return "degenerate" if deg else ("positive" if pos else "non-positive")


def run_quasi(cfg: JobConfig):
    tol = cfg.effective_tol()
    rows, failed = [], 0
    for lv in enumerate_levels(cfg.case, cfg.quasi(), cfg.p_max, cfg.sign_list()):
        bad = np.isfinite(lv.E_tilde) and not abs(lv.residual) <= tol
        failed += bool(bad)
        note = "; ".join(x for x in (lv.notes, "residual above tol" if bad else "") if x)
        rows.append(_row(cfg.case, lv.p, lv.signs, _finite(lv.u), _finite(lv.E_tilde), None,
                         _finite(lv.residual),
                         _positivity(lv.positive, lv.degenerate) if np.isfinite(lv.E_tilde) else None,
                         note))
    return rows, failed, None


def run_relativistic(cfg: JobConfig):
    tol = cfg.effective_tol()
    params = cfg.physical()
    tp0 = cfg.quasi()
    rows, failed = [], 0
    for p in range(cfg.p_max + 1):
        for sg in cfg.sign_list():
            try:
                nonrel = quasi_spectrum(cfg.case, tp0, p, sg)
            except DomainError:
                nonrel = []
            nr_note = "E_tilde_nonrel=" + ",".join(f"{v:.17g}" for v in nonrel) if nonrel else ""
            res = solve_relativistic(cfg.case, params, p, sg, tol=tol, form=cfg.form)
            if not res.levels:
                rows.append(_row(cfg.case, p, sg, notes="; ".join(x for x in (res.diagnostic, nr_note) if x)))
                continue
            for lv in res.levels:
                u = pos = None
                try:
                    tp = tilde_params(params, lv.E, cfg.case)
                    u, _, _, ok, deg = level_status(cfg.case, tp, p, sg, lv.E_tilde)
                    pos = _positivity(ok, deg)
                except (DomainError, ValueError):
                    pass
                notes = [nr_note]
                bad = not lv.converged
                if lv.two_path_discrepancy is not None:
                    notes.append(f"two_path={lv.two_path_discrepancy:.3g}")
                    bad |= lv.two_path_discrepancy > TWO_PATH_TOL
                if bad:
                    notes.append("FAIL")
                failed += bool(bad)
                rows.append(_row(cfg.case, p, sg, _finite(u), lv.E_tilde, lv.E, lv.residual, pos,
                                 "; ".join(x for x in notes if x)))
    return rows, failed, None


def run_closure(cfg: JobConfig):
    tol = cfg.effective_tol()
    tp = cfg.quasi()
    rows, reports, failed = [], [], 0
    for p in range(cfg.p_max + 1):
        for sg in cfg.sign_list():
            try:
                energies = quasi_spectrum(cfg.case, tp, p, sg)
            except DomainError as exc:
                rows.append(_row(cfg.case, p, sg, notes=f"skipped: {exc}"))
                continue
            for E in energies:
                try:
                    tpe = TildeParams(**{**tp.__dict__, "E_tilde": E})
                    sc = structure_constants(cfg.case, tpe)
                    real = realize_level(cfg.case, tpe, sg)
                    u = real.u
                    rep = build_matrix_rep(real, p)
                except (NonUnitaryError, DomainError) as exc:
                    rows.append(_row(cfg.case, p, sg, E_tilde=E, positivity="non-positive",
                                     notes=f"skipped: {exc}"))
                    continue
                rep_ok = verify_closure(rep, sc, E, tol)
                failed += not rep_ok.passed
                rows.append(_row(cfg.case, p, sg, u, E, None, rep_ok.max_deviation, "positive",
                                 "pass" if rep_ok.passed else "FAIL"))
                reports.append({"case": cfg.case, "p": p, "signs": list(sg), "E_tilde": E,
                                "deviations": dict(rep_ok.deviations), "passed": rep_ok.passed})
    return rows, failed, {"mode": "closure-check", "tol": tol, "levels": reports,
                          "passed": failed == 0}


def default_E_samples(cfg: JobConfig) -> tuple:
    mc2 = cfg.m * cfg.c**2
    return tuple(mc2 * f for f in (-0.5, 0.0, 0.5, 1.0, 2.0))


def run_dirac(cfg: JobConfig):
    tol = cfg.effective_tol()
    samples = cfg.E_samples or default_E_samples(cfg)
    try:
        rep = verify_dirac_equivalence(cfg.case, cfg.physical(), samples, tol)
    except DomainError as exc:
        raise ConfigError(f"field 'E_samples': {exc}") from exc
    rows, failed = [], 0
    for name, dev in rep.deviations.items():
        bad = dev > tol
        failed += bad
        rows.append(_row(cfg.case, residual=dev, notes=f"{name} {'FAIL' if bad else 'pass'}"))
    return rows, failed, {"mode": "dirac-check", "case": cfg.case, "tol": tol,
                          "E_samples": list(samples), "deviations": dict(rep.deviations),
                          "max_deviation": rep.max_deviation, "passed": rep.passed}


def run_verify(cfg: JobConfig):
    cmp = oracle_comparison(cfg.case, cfg.quasi(), cfg.n_levels, cfg.grid_points, cfg.tol)
    rows = []
    for a, lv, (num, err) in zip(cmp.algebraic, cmp.levels, _pairs(cmp)):
        note = f"numeric={num:.12g}" if num is not None else "unmatched"
        rows.append(_row(cfg.case, lv.p, lv.signs, _finite(lv.u), a, None, err,
                         _positivity(lv.positive, lv.degenerate), note))
    failed = 0 if cmp.passed else max(1, len(cmp.match.unmatched_algebraic))
    return rows, failed, {"mode": "verify", "case": cfg.case, "tol": cmp.tol,
                          "algebraic": cmp.algebraic, "numeric": cmp.numeric,
                          "pairs": cmp.match.pairs, "rel_errors": cmp.match.rel_errors,
                          "unmatched_algebraic": cmp.match.unmatched_algebraic,
                          "max_error": cmp.match.max_error, "passed": cmp.passed}


def _pairs(cmp):
    """Numeric partner and error of each algebraic level, in order."""
    pairs = iter(zip(cmp.match.pairs, cmp.match.rel_errors))
    unmatched = list(cmp.match.unmatched_algebraic)
    out = []
    for a in cmp.algebraic:
        if unmatched and a == unmatched[0]:
            unmatched.pop(0)
            out.append((None, None))
        else:
            (_, num), err = next(pairs)
            out.append((num, err))
    return out


RUNNERS = {"quasi": run_quasi, "relativistic": run_relativistic, "closure-check": run_closure,
           "dirac-check": run_dirac, "verify": run_verify}


def run(cfg: JobConfig):
    """Run the job; returns ``(rows, failed_count, report_or_None)``."""
    return RUNNERS[cfg.mode](cfg)


# --- output -----------------------------------------------------------------------

def _cell(v):
    if v is None:
        return ""
    if isinstance(v, float):
        return format(v, ".17g")
    return str(v)


def render(rows, report, fmt: str) -> str:
    """CSV table, or JSON (array of rows; object with ``rows`` for report modes)."""
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(COLUMNS)
        for r in rows:
            w.writerow([_cell(r[c]) for c in COLUMNS])
        return buf.getvalue()
    doc = rows if report is None else {**report, "rows": rows}
    return json.dumps(doc, indent=2, default=_json_default) + "\n"


def _json_default(o):
    if isinstance(o, (np.floating, np.integer)):
        return o.item()
    if isinstance(o, tuple):
        return list(o)
    raise TypeError(f"not serializable: {type(o).__name__}")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="swquad", description=__doc__.split("\n\n")[0])
    sub = ap.add_subparsers(dest="mode", required=True)
    for mode in MODES:
        sp = sub.add_parser(mode)
        sp.add_argument("--config", required=True, help="JSON job file ('-' for stdin)")
        sp.add_argument("--out", help="output file (default stdout)")
        sp.add_argument("--format", choices=("csv", "json"), help="output format (default from config, csv)")
        sp.add_argument("--tol", type=float, help="override the mode tolerance")
        sp.add_argument("--quiet", action="store_true", help="no summary on stderr")
    return ap


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.config == "-":
            text = sys.stdin.buffer.read()
        else:
            with open(args.config, "rb") as fh:
                text = fh.read()
        cfg = parse_config(text, args.mode)
        if args.tol is not None:
            if not args.tol > 0:
                raise ConfigError("--tol must be positive")
            cfg = JobConfig(**{**cfg.__dict__, "tol": args.tol})
        fmt = args.format or cfg.format
        rows, failed, report = run(cfg)
    except OSError as exc:
        print(f"swquad: cannot read config: {exc}", file=sys.stderr)
        return 2
    except ConfigError as exc:
        print(f"swquad: config error: {exc}", file=sys.stderr)
        return 2
    except (DomainError, ValueError) as exc:
        print(f"swquad: {args.mode} failed: {exc}", file=sys.stderr)
        return 3
    text = render(rows, report, fmt)
    if args.out:
        try:
            with open(args.out, "w", encoding="utf-8", newline="") as fh:
                fh.write(text)
        except OSError as exc:
            print(f"swquad: cannot write output: {exc}", file=sys.stderr)
            return 2
    else:
        sys.stdout.write(text)
    if not args.quiet:
        print(f"swquad {args.mode}: {len(rows)} rows, {failed} failed", file=sys.stderr)
    return 0 if failed == 0 else 1


if __name__ == "__main__":
    sys.exit(main())
