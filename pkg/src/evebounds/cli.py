"""Command-line scan of the eavesdropper-entropy estimators.

Evaluates the selected estimators on a transmittance grid for one or more
channel noise values and writes CSV with the fixed header
``tau,nbar,alpha,method,variant,entropy,log_base,status``.  Rows are sorted
by (nbar, tau, method) and floats printed with 12 significant digits, so a
given configuration always produces byte-identical output.
"""

import argparse
import sys
from dataclasses import dataclass, field

import numpy as np

from . import checks
from .bounds import GRAM_VARIANTS, bm_get_entropy, bm_gme_entropy, eb_qpsk_entropy
from .cloner import ChannelParams, qpsk
from .fock import FockConvergenceError, eve_exact_entropy

__all__ = ["ScanConfig", "run_scan", "main"]

CSV_HEADER = "tau,nbar,alpha,method,variant,entropy,log_base,status"
METHODS = ("eb", "bm-get", "bm-gme", "oracle")


@dataclass
class ScanConfig:
    tau_min: float = 0.02
    tau_max: float = 0.98
    tau_steps: int = 50
    nbars: list = field(default_factory=lambda: [0.01, 0.02])
    alpha: float = 1.0
    constellation: str = "qpsk"
    order: int = 4
    methods: list = field(default_factory=lambda: ["eb", "bm-get", "bm-gme"])
    gram_variant: str = "pure-exact"
    log_base: str = "bits"
    cutoff: int = 18
    out: str = "-"
    check: bool = False

    def __post_init__(self):
        if not 0 < self.tau_min <= 1 or not 0 < self.tau_max <= 1:
            raise ValueError(f"--tau-min/--tau-max must lie in (0, 1], got {self.tau_min}, {self.tau_max}")
        if self.tau_max < self.tau_min:
            raise ValueError("--tau-max must be >= --tau-min")
        if self.tau_steps < 1:
            raise ValueError(f"--tau-steps must be >= 1, got {self.tau_steps}")
        if not self.nbars:
            raise ValueError("at least one --nbar value is required")
        if any(nb < 0 for nb in self.nbars):
            raise ValueError(f"--nbar values must be >= 0, got {self.nbars}")
        if self.alpha <= 0:
            raise ValueError(f"--alpha must be positive, got {self.alpha}")
        if self.constellation != "qpsk":
            raise ValueError(f"only the qpsk constellation is wired up, got {self.constellation!r}")
        if self.order != 4:
            raise ValueError(f"qpsk has order 4, got --order {self.order}")
        bad = [m for m in self.methods if m not in METHODS]
        if bad or not self.methods:
            raise ValueError(f"--methods must be a nonempty subset of {METHODS}, got {self.methods}")
        if self.gram_variant not in GRAM_VARIANTS:
            raise ValueError(f"--gram-variant must be one of {GRAM_VARIANTS}, got {self.gram_variant!r}")
        if self.log_base not in ("bits", "nats"):
            raise ValueError(f"--log-base must be bits or nats, got {self.log_base!r}")
        if self.cutoff < 7:
            raise ValueError(f"--cutoff must be >= 7, got {self.cutoff}")

    def tau_grid(self):
        return np.linspace(self.tau_min, self.tau_max, self.tau_steps)


def _fmt(value):
    return f"{value:.12g}"


def _evaluate(method, cfg, tau, nbar):
    """(variant, entropy string, status) for one grid cell."""
    params = ChannelParams(tau=float(tau), nbar=float(nbar))
    constellation = qpsk(cfg.alpha)
    if method == "eb":
        return "-", _fmt(eb_qpsk_entropy(cfg.alpha, params, base=cfg.log_base)), "ok"
    if method == "bm-get":
        return "-", _fmt(bm_get_entropy(constellation, params, base=cfg.log_base)), "ok"
    if method == "bm-gme":
        value = bm_gme_entropy(constellation, params, variant=cfg.gram_variant, base=cfg.log_base)
        return cfg.gram_variant, _fmt(value), "ok"
    if method == "oracle":
        try:
            result = eve_exact_entropy(constellation, params, cutoff=cfg.cutoff, base=cfg.log_base)
        except FockConvergenceError:
            return "-", "", "not-converged"
        return "-", _fmt(result.value), "ok"
    raise ValueError(f"unknown method {method!r}")


def run_scan(cfg):
    """All CSV rows (header excluded) for a configuration, sorted."""
    rows = []
    for nbar in sorted(cfg.nbars):
        for tau in cfg.tau_grid():
            for method in sorted(cfg.methods):
                variant, entropy, status = _evaluate(method, cfg, tau, nbar)
                rows.append(
                    f"{_fmt(tau)},{_fmt(nbar)},{_fmt(cfg.alpha)},{method},"
                    f"{variant},{entropy},{cfg.log_base},{status}"
                )
    return rows


def write_csv(rows, out):
    text = "\n".join([CSV_HEADER] + rows) + "\n"
    if out == "-":
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8", newline="\n") as handle:
            handle.write(text)


def _parse_config_file(path):
    """Flat key=value file, '#' comments; keys use flag names."""
    values = {}
    with open(path, encoding="utf-8") as handle:
        for lineno, raw in enumerate(handle, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"{path}:{lineno}: expected key=value, got {raw.strip()!r}")
            key, value = (part.strip() for part in line.split("=", 1))
            values[key.replace("-", "_")] = value
    return values


def _config_from_file(values, path):
    kwargs = {}
    try:
        for key, value in values.items():
            if key in ("tau_min", "tau_max", "alpha"):
                kwargs[key] = float(value)
            elif key in ("tau_steps", "order", "cutoff"):
                kwargs[key] = int(value)
            elif key == "nbar":
                kwargs["nbars"] = [float(v) for v in value.split(",") if v.strip()]
            elif key == "methods":
                kwargs["methods"] = [m.strip() for m in value.split(",") if m.strip()]
            elif key in ("constellation", "gram_variant", "log_base", "out"):
                kwargs[key] = value
            elif key == "check":
                kwargs["check"] = value.lower() in ("1", "true", "yes")
            else:
                raise ValueError(f"unknown key {key!r}")
    except ValueError as exc:
        raise ValueError(f"config file {path}: {exc}") from exc
    return kwargs


def build_parser():
    parser = argparse.ArgumentParser(
        prog="evebounds",
        description="Scan eavesdropper-entropy estimators over a thermal-loss channel grid.",
    )
    parser.add_argument("--config", help="key=value config file; flags override it")
    parser.add_argument("--tau-min", type=float, dest="tau_min")
    parser.add_argument("--tau-max", type=float, dest="tau_max")
    parser.add_argument("--tau-steps", type=int, dest="tau_steps")
    parser.add_argument("--nbar", type=float, action="append", dest="nbars",
                        help="channel thermal photon number; repeatable")
    parser.add_argument("--alpha", type=float)
    parser.add_argument("--constellation", choices=["qpsk"])
    parser.add_argument("--order", type=int)
    parser.add_argument("--methods", help="comma list from: " + ",".join(METHODS))
    parser.add_argument("--gram-variant", choices=list(GRAM_VARIANTS), dest="gram_variant")
    parser.add_argument("--log-base", choices=["bits", "nats"], dest="log_base")
    parser.add_argument("--cutoff", type=int, help="oracle Fock cutoff")
    parser.add_argument("--out", help="output CSV path, '-' for stdout")
    parser.add_argument("--check", action="store_true", default=None,
                        help="run the invariant check suites first; nonzero exit on failure")
    return parser


def parse_config(argv):
    args = build_parser().parse_args(argv)
    kwargs = {}
    if args.config:
        kwargs.update(_config_from_file(_parse_config_file(args.config), args.config))
    for key in ("tau_min", "tau_max", "tau_steps", "nbars", "alpha", "constellation",
                "order", "gram_variant", "log_base", "cutoff", "out", "check"):
        value = getattr(args, key)
        if value is not None:
            kwargs[key] = value
    if args.methods is not None:
        kwargs["methods"] = [m.strip() for m in args.methods.split(",") if m.strip()]
    return ScanConfig(**kwargs)


def main(argv=None):
    try:
        cfg = parse_config(argv)
    except ValueError as exc:
        print(f"evebounds: {exc}", file=sys.stderr)
        return 2
    if cfg.check:
        results = checks.run_checks()
        for line in checks.format_report(results):
            print(line, file=sys.stderr)
        if not all(r.passed for r in results):
            return 1
    write_csv(run_scan(cfg), cfg.out)
    return 0


if __name__ == "__main__":
    sys.exit(main())
