"""Command-line interface: ``spectradim <command> [options]``.

Exit codes: 0 success, 1 verification failure, 2 usage error, 3 budget
exceeded.  Results are cached on disk keyed by command, parameters and
package version; a warm rerun replays the stored bytes.
"""

from __future__ import annotations

import hashlib
import json
import logging
import math
import os
import sys
import tempfile
import time
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Callable, Optional

import click

from . import __version__
from .errors import BudgetExceededError, SpectraError

log = logging.getLogger("spectradim")

CACHE_ENV = "SPECTRADIM_CACHE"
EXIT_OK, EXIT_VERIFY, EXIT_USAGE, EXIT_BUDGET = 0, 1, 2, 3

DEFAULTS = {"n": 12, "m": 12, "tol": 1e-4, "step": "0.0024"}
FIDELITY = {"n": 16, "m": 16, "step": "0.00005"}


# ---------------------------------------------------------------------------
# cache


def default_cache_dir() -> Path:
    env = os.environ.get(CACHE_ENV)
    if env:
        return Path(env)
    base = os.environ.get("XDG_CACHE_HOME") or os.path.join(os.path.expanduser("~"), ".cache")
    return Path(base) / "spectradim"


def cache_key(command: str, params: dict) -> str:
    blob = json.dumps({"command": command, "params": params, "version": __version__},
                      sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(blob.encode()).hexdigest()


@dataclass
class CacheEntry:
    key: str
    output: dict          # file name (or "-" for stdout) -> text
    exit_code: int
    timestamp: float

    def to_json(self) -> str:
        return json.dumps({"key": self.key, "output": self.output, "exit_code": self.exit_code,
                           "timestamp": self.timestamp}, sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "CacheEntry":
        doc = json.loads(text)
        return cls(doc["key"], dict(doc["output"]), int(doc["exit_code"]), float(doc["timestamp"]))


class Cache:
    """One JSON file per entry; writes go through a temp file and an atomic rename."""

    def __init__(self, root: Optional[Path]):
        self.root = root

    def get(self, key: str) -> Optional[CacheEntry]:
        if self.root is None:
            return None
        path = self.root / f"{key}.json"
        if not path.exists():
            return None
        try:
            entry = CacheEntry.from_json(path.read_text())
            if entry.key != key:
                raise ValueError("key mismatch")
            return entry
        except (ValueError, KeyError, TypeError) as exc:
            log.warning("ignoring corrupt cache entry %s: %s", path, exc)
            return None

    def put(self, entry: CacheEntry) -> None:
        if self.root is None:
            return
        try:
            self.root.mkdir(parents=True, exist_ok=True)
            fd, tmp = tempfile.mkstemp(dir=self.root, suffix=".tmp")
            with os.fdopen(fd, "w") as fh:
                fh.write(entry.to_json())
            os.replace(tmp, self.root / f"{entry.key}.json")
        except OSError as exc:
            log.warning("could not write cache entry: %s", exc)


# ---------------------------------------------------------------------------
# plumbing


@dataclass
class RunConfig:
    cache: Cache
    out: Optional[Path]
    workers: int


Producer = Callable[[], tuple[dict, int]]


def _emit(output: dict, out: Optional[Path]) -> None:
    for name, text in output.items():
        if name == "-":
            if out is None:
                click.echo(text, nl=False)
            else:
                out.parent.mkdir(parents=True, exist_ok=True)
                out.write_text(text)
        else:
            # "@path" names a literal path; other names live under --out
            target = Path(name[1:]) if name.startswith("@") else (out or Path(".")) / name
            target.parent.mkdir(parents=True, exist_ok=True)
            target.write_text(text)
            click.echo(f"wrote {target}")


def _run(cfg: RunConfig, command: str, params: dict, produce: Producer) -> None:
    key = cache_key(command, params)
    entry = cfg.cache.get(key)
    if entry is None:
        try:
            output, code = produce()
        except BudgetExceededError as exc:
            click.echo(f"budget exceeded: {exc} (partial: {exc.partial})", err=True)
            sys.exit(EXIT_BUDGET)
        except SpectraError as exc:
            click.echo(f"error: {exc}", err=True)
            sys.exit(EXIT_USAGE)
        entry = CacheEntry(key, output, code, time.time())
        cfg.cache.put(entry)
    _emit(entry.output, cfg.out)
    sys.exit(entry.exit_code)


def _report_text(rep) -> str:
    lines = rep.lines()
    lines.append(f"{rep.passed}/{rep.total} passed")
    return "\n".join(lines) + "\n"


def _floor6(x: float) -> str:
    return f"{math.floor(x * 1e6) / 1e6:.6f}"


def _ceil6(x: float) -> str:
    return f"{math.ceil(x * 1e6) / 1e6:.6f}"


# ---------------------------------------------------------------------------
# commands


def common(f):
    """Let --out/--cache/--no-cache/--workers also follow the command name."""
    f = click.option("--workers", "c_workers", type=click.IntRange(min=1), default=None)(f)
    f = click.option("--out", "c_out", type=click.Path(path_type=Path), default=None)(f)
    f = click.option("--no-cache", "c_no_cache", is_flag=True, default=False)(f)
    f = click.option("--cache", "c_cache", type=click.Path(file_okay=False, path_type=Path),
                     default=None)(f)
    return f


def _merge(cfg: RunConfig, c_cache=None, c_no_cache=False, c_out=None, c_workers=None) -> RunConfig:
    cache = cfg.cache
    if c_no_cache:
        cache = Cache(None)
    elif c_cache is not None:
        cache = Cache(c_cache)
    return RunConfig(cache, c_out if c_out is not None else cfg.out,
                     c_workers if c_workers is not None else cfg.workers)


@click.group(context_settings={"help_option_names": ["-h", "--help"]})
@click.option("--cache", "cache_dir", type=click.Path(file_okay=False, path_type=Path),
              default=None, help=f"Cache directory (default ${CACHE_ENV} or ~/.cache/spectradim).")
@click.option("--no-cache", is_flag=True, help="Neither read nor write the cache.")
@click.option("--out", type=click.Path(path_type=Path), default=None,
              help="Output file (or directory for CSV files).")
@click.option("--workers", type=click.IntRange(min=1), default=1, show_default=True)
@click.option("-v", "--verbose", count=True)
@click.version_option(__version__)
@click.pass_context
def main(ctx, cache_dir, no_cache, out, workers, verbose):
    """Certified bounds for the dimension function of the Markov spectrum."""
    logging.basicConfig(level=logging.WARNING - 10 * min(verbose, 2),
                        format="%(levelname)s %(name)s: %(message)s")
    root = None if no_cache else (cache_dir or default_cache_dir())
    ctx.obj = RunConfig(Cache(root), out, workers)


@main.command("forbid")
@click.option("--s", "s", required=True, help="Threshold, as a decimal string.")
@click.option("--n", "n", type=click.IntRange(min=1), default=DEFAULTS["n"], show_default=True)
@common
@click.pass_obj
def cmd_forbid(cfg: RunConfig, s, n, **common_kw):
    """Forbidden windows for threshold s (JSON)."""
    cfg = _merge(cfg, **common_kw)
    def produce():
        from .forbid import forbidden_words
        return {"-": forbidden_words(s, n).to_json() + "\n"}, EXIT_OK
    _run(cfg, "forbid", {"s": s, "n": n}, produce)


def _read_forbidden(path: Path) -> list[str]:
    words = []
    for line in path.read_text().splitlines():
        line = line.split("#", 1)[0].strip()
        words.extend(w for w in line.replace(",", " ").split() if w)
    return words


@main.command("dim")
@click.option("--fw", "fw", type=click.IntRange(2, 13), default=None, help="Plateau index K.")
@click.option("--forbidden-file", type=click.Path(exists=True, dir_okay=False, path_type=Path),
              default=None, help="File with forbidden words (whitespace or comma separated).")
@click.option("--m", "m", type=click.IntRange(min=1), default=DEFAULTS["m"], show_default=True)
@click.option("--tol", type=click.FloatRange(min=0, min_open=True), default=DEFAULTS["tol"],
              show_default=True)
@click.option("--dump-graph", type=click.Path(dir_okay=False, path_type=Path), default=None,
              help="Also write the transition graph as JSON.")
@common
@click.pass_obj
def cmd_dim(cfg: RunConfig, fw, forbidden_file, m, tol, dump_graph, **common_kw):
    """Dimension enclosure of a Gauss-Cantor set (JSON)."""
    cfg = _merge(cfg, **common_kw)
    if (fw is None) == (forbidden_file is None):
        raise click.UsageError("give exactly one of --fw and --forbidden-file")
    if fw is not None:
        from .plateau import FW
        words = list(FW[fw])
    else:
        words = _read_forbidden(forbidden_file)

    def produce():
        from .dimension import build_graph, graph_enclosure
        g = build_graph(words, m)
        out = {"-": graph_enclosure(g, tol).to_json() + "\n"}
        if dump_graph is not None:
            out["@" + str(dump_graph)] = g.to_json() + "\n"
        return out, EXIT_OK
    params = {"forbidden": sorted(words), "m": m, "tol": tol,
              "dump": str(dump_graph) if dump_graph else None}
    _run(cfg, "dim", params, produce)


@main.command("sweep")
@click.option("--gap", nargs=2, type=int, default=None, metavar="I J",
              help="Gap interval between adjacent plateaux P_I and P_J.")
@click.option("--interval", nargs=2, type=str, default=None, metavar="A B")
@click.option("--all-gaps", is_flag=True, help="Every gap interval that needs an estimate.")
@click.option("--step", default=None, help=f"Grid step (default {DEFAULTS['step']}).")
@click.option("--n", "n", type=click.IntRange(min=1), default=None)
@click.option("--m", "m", type=click.IntRange(min=1), default=None)
@click.option("--tol", type=click.FloatRange(min=0, min_open=True), default=DEFAULTS["tol"],
              show_default=True)
@click.option("--align", type=click.Choice(["start", "center"]), default="start", show_default=True)
@click.option("--appendix-fidelity", is_flag=True,
              help="n=16, m=16, step=0.00005 (hours of compute).")
@common
@click.pass_obj
def cmd_sweep(cfg: RunConfig, gap, interval, all_gaps, step, n, m, tol, align,
              appendix_fidelity, **common_kw):
    """Monotone lower/upper staircases of d on a grid (CSV: s,d_lower,d_upper)."""
    cfg = _merge(cfg, **common_kw)
    from .dimfun import all_gaps as gaps_list, gap_interval, sweep

    base = FIDELITY if appendix_fidelity else DEFAULTS
    n = n or base["n"]
    m = m or base["m"]
    step = step or base["step"]
    chosen = sum(x is not None and x is not False for x in (gap, interval, all_gaps or None))
    if chosen != 1:
        raise click.UsageError("give exactly one of --gap, --interval, --all-gaps")

    targets = []
    if gap is not None:
        try:
            g = gap_interval(*gap)
        except SpectraError as exc:
            raise click.UsageError(str(exc))
        if not g.needs_estimate:
            click.echo(f"No estimate needed: width {float(g.width):.4f} < 0.005", err=True)
            sys.exit(EXIT_USAGE)
        targets.append((g.name + ".csv", g.lo, g.hi))
    elif interval is not None:
        a, b = interval
        targets.append((f"sweep_{a}_{b}.csv", Fraction(a), Fraction(b)))
    else:
        for g in gaps_list():
            if g.needs_estimate:
                targets.append((g.name + ".csv", g.lo, g.hi))

    def produce():
        output = {}
        for name, a, b in targets:
            res = sweep(a, b, Fraction(step), n, m, tol, cfg.workers, align)
            output[name if cfg.out is not None or len(targets) > 1 else "-"] = res.to_csv()
        return output, EXIT_OK
    params = {"targets": [[t[0], str(t[1]), str(t[2])] for t in targets], "step": str(step),
              "n": n, "m": m, "tol": tol, "align": align, "dir": cfg.out is not None}
    _run(cfg, "sweep", params, produce)


@main.command("verify")
@click.argument("what", type=click.Choice(["endpoints", "inequalities", "plateaux", "order"]))
@click.option("--m", "m", type=click.IntRange(min=1), default=DEFAULTS["m"], show_default=True)
@click.option("--tol", type=click.FloatRange(min=0, min_open=True), default=DEFAULTS["tol"],
              show_default=True)
@click.option("--extra", is_flag=True, help="endpoints: also check the additional identities.")
@common
@click.pass_obj
def cmd_verify(cfg: RunConfig, what, m, tol, extra, **common_kw):
    """Exact checks of the plateau catalog; exit 1 if any check fails."""
    cfg = _merge(cfg, **common_kw)
    def produce():
        from . import plateau as pl
        if what == "endpoints":
            rep = pl.verify_endpoint_identities(include_extra=extra)
        elif what == "inequalities":
            rep = pl.verify_inequalities()
        elif what == "order":
            rep = pl.verify_order()
        else:
            rep = pl.verify_plateau_dimensions(m, tol)
        return {"-": _report_text(rep)}, EXIT_OK if rep.ok else EXIT_VERIFY
    params = {"what": what, "extra": extra}
    if what == "plateaux":
        params.update(m=m, tol=tol)
    _run(cfg, "verify", params, produce)


@main.command("checkpoints")
@click.option("--gap", nargs=2, type=int, default=None, metavar="I J")
@click.option("--n", "n", type=click.IntRange(min=1), default=None)
@click.option("--m", "m", type=click.IntRange(min=1), default=None)
@click.option("--tol", type=click.FloatRange(min=0, min_open=True), default=DEFAULTS["tol"],
              show_default=True)
@click.option("--appendix-fidelity", is_flag=True, help="n=16, m=16.")
@common
@click.pass_obj
def cmd_checkpoints(cfg: RunConfig, gap, n, m, tol, appendix_fidelity, **common_kw):
    """Certified windows at the published checkpoints (CSV, 6 decimals, outward)."""
    cfg = _merge(cfg, **common_kw)
    from .dimfun import APPENDIX_CHECKPOINTS, gap_interval

    base = FIDELITY if appendix_fidelity else DEFAULTS
    n = n or base["n"]
    m = m or base["m"]
    if gap is not None and tuple(gap) not in APPENDIX_CHECKPOINTS:
        raise click.UsageError(f"no published checkpoints for gap {gap[0]} {gap[1]}")
    keys = [tuple(gap)] if gap else list(APPENDIX_CHECKPOINTS)

    def produce():
        from .dimfun import checkpoint_window
        jobs = [(k, s) for k in keys for s, _, _ in APPENDIX_CHECKPOINTS[k]]
        if cfg.workers > 1:
            from concurrent.futures import ProcessPoolExecutor
            with ProcessPoolExecutor(max_workers=cfg.workers) as pool:
                wins = list(pool.map(_window_job, [(s, n, m, tol) for _, s in jobs]))
        else:
            wins = [checkpoint_window(s, n, m, tol) for _, s in jobs]
        lines = ["interval,s,d_lower,d_upper,published_lower,published_upper"]
        rows = {(k, s): (lo, hi) for k in keys for s, lo, hi in APPENDIX_CHECKPOINTS[k]}
        for (k, s), w in zip(jobs, wins):
            g = gap_interval(*k)
            lo, hi = rows[(k, s)]
            lines.append(f"{g.name},{s},{_floor6(w.d_lower)},{_ceil6(w.d_upper)},{lo},{hi}")
        return {"-": "\n".join(lines) + "\n"}, EXIT_OK
    _run(cfg, "checkpoints", {"keys": [list(k) for k in keys], "n": n, "m": m, "tol": tol},
         produce)


def _window_job(args):
    from .dimfun import checkpoint_window
    return checkpoint_window(*args)


@main.command("asymptotic")
@click.option("--eps", type=float, required=True)
@common
@click.pass_obj
def cmd_asymptotic(cfg: RunConfig, eps, **common_kw):
    """Evaluate 2 W(c |log eps|) / |log eps|."""
    cfg = _merge(cfg, **common_kw)
    def produce():
        from .dimfun import lambert_asymptotic
        return {"-": f"{lambert_asymptotic(eps)!r}\n"}, EXIT_OK
    _run(cfg, "asymptotic", {"eps": repr(eps)}, produce)


if __name__ == "__main__":
    main()
