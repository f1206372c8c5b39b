"""Command-line interface: ``nimtree <subcommand> ...``.

Exit codes: 0 success, 1 computation or verification failure, 2 usage error.
Failures print one JSON object ``{"error": ..., "message": ...}`` on stderr.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from pathlib import Path
from typing import Any, Mapping, Optional, Sequence

from . import __version__
from .classify import (
    ORACLE_LIMIT,
    classify_k_nim,
    count_k_nim_oracle,
    skeleton_signature,
    three_nim_count,
    two_nim_closed_form,
)
from .errors import NimTreeError
from .multiplicity import BRUTE_FORCE_LIMIT, multiplicity_profile
from .nim_ogf import (
    assemble_nim_ogf,
    caterpillar_count,
    check_recurrence,
    growth_constant,
    ordered_nim_ogf,
    ordered_denominator_at,
)
from .spectral import WITNESS_LIMIT, witness_matrix
from .tree import Tree, parse_edge_list

OGF_LIMIT = 2000
SERIES_NAMES = ("A", "N_star", "N_star_s", "N_star_s_ee", "N_star_s_eo", "N_star_s_oe",
                "N_s", "N_a", "N")


class UsageError(Exception):
    """Arguments parse but violate a limit; reported with exit code 2."""


# ---------------------------------------------------------------------------
# output


def _normalize(x: Any) -> Any:
    if isinstance(x, bool) or x is None or isinstance(x, (int, str)):
        return x
    if isinstance(x, float):
        if not math.isfinite(x):
            return None
        return float(f"{x:.9g}")
    if isinstance(x, Mapping):
        return {str(k): _normalize(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_normalize(v) for v in x]
    if hasattr(x, "to_json"):
        return _normalize(x.to_json())
    raise TypeError(f"cannot emit {type(x).__name__}")


def emit(report: Any, fmt: str = "json") -> str:
    """Render a report deterministically.

    ``json`` sorts keys; ``csv`` expects a list of flat rows sharing keys and
    writes the header once; ``plain`` writes ``key: value`` lines.  Floats are
    rounded to 9 significant digits in every format.
    """
    data = _normalize(report)
    if fmt == "json":
        return json.dumps(data, sort_keys=True) + "\n"
    if fmt == "csv":
        if not isinstance(data, list):
            raise TypeError("csv output needs a list of rows")
        buf = io.StringIO()
        if data:
            writer = csv.DictWriter(buf, fieldnames=list(data[0]), lineterminator="\n")
            writer.writeheader()
            writer.writerows(data)
        return buf.getvalue()
    if fmt == "plain":
        if isinstance(data, list):
            return "".join(" ".join(str(v) for v in row.values()) + "\n" for row in data)
        return "".join(f"{k}: {json.dumps(v, sort_keys=True)}\n" for k, v in sorted(data.items()))
    raise ValueError(f"unknown format {fmt!r}")


def _fail(exc: BaseException, code: int) -> int:
    err = {"error": type(exc).__name__, "message": str(exc)}
    sys.stderr.write(json.dumps(err, sort_keys=True) + "\n")
    return code


# ---------------------------------------------------------------------------
# subcommands


def _read_tree(path: str) -> Tree:
    text = sys.stdin.read() if path == "-" else Path(path).read_text()
    return parse_edge_list(text)


def _ogf_counts(k: int, n: int) -> list[int]:
    if k == 1:
        return assemble_nim_ogf(max(n, 4)).counts()[:n]
    if k == 2:
        return [two_nim_closed_form(m) for m in range(1, n + 1)]
    if k == 3:
        return [three_nim_count(m) for m in range(1, n + 1)]
    return [0] * n


def cmd_count(args: argparse.Namespace) -> tuple[Any, int]:
    k, n, method = args.k, args.n, args.method
    if k < 1:
        raise UsageError(f"--k must be at least 1, got {k}")
    if n < 1:
        raise UsageError(f"--n must be positive, got {n}")
    if method in ("oracle", "both") and n > ORACLE_LIMIT:
        raise UsageError(f"oracle counting is limited to n <= {ORACLE_LIMIT}")
    if method == "ogf" and n > OGF_LIMIT:
        raise UsageError(f"--n is limited to {OGF_LIMIT}")
    if args.literal_threshold and method != "oracle":
        raise UsageError("--literal-threshold only applies to --method oracle")
    rows = []
    status = 0
    ogf = _ogf_counts(k, n) if method in ("ogf", "both") else None
    for m in range(1, n + 1):
        if method == "ogf":
            rows.append({"n": m, "count": ogf[m - 1]})
            continue
        oracle = count_k_nim_oracle(m, k, literal_threshold=args.literal_threshold)
        if method == "oracle":
            rows.append({"n": m, "count": oracle})
        else:
            agree = oracle == ogf[m - 1]
            status = status or (0 if agree else 1)
            rows.append({"n": m, "count": ogf[m - 1], "oracle": oracle, "agree": agree})
    if args.dump_intermediate:
        if k != 1:
            raise UsageError("--dump-intermediate applies to --k 1 only")
        out_dir = Path(args.dump_intermediate)
        out_dir.mkdir(parents=True, exist_ok=True)
        for name, series in assemble_nim_ogf(max(n, 4)).named_series().items():
            (out_dir / f"{name}.json").write_text(json.dumps(series.dump()) + "\n")
    if method == "both" and status:
        bad = next(r for r in rows if not r["agree"])
        sys.stderr.write(json.dumps({"error": "OracleMismatch",
                                     "message": f"oracle and OGF differ at n={bad['n']}"}) + "\n")
    return rows, status


def cmd_classify(args: argparse.Namespace) -> tuple[Any, int]:
    if args.k < 1:
        raise UsageError(f"--k must be at least 1, got {args.k}")
    t = _read_tree(args.input)
    return classify_k_nim(t, args.k, literal_threshold=args.literal_threshold), 0


def cmd_profile(args: argparse.Namespace) -> tuple[Any, int]:
    t = _read_tree(args.input)
    return multiplicity_profile(t, brute_force=t.n <= BRUTE_FORCE_LIMIT), 0


def cmd_skeleton(args: argparse.Namespace) -> tuple[Any, int]:
    return skeleton_signature(_read_tree(args.input)), 0


def cmd_asymptotics(args: argparse.Namespace) -> tuple[Any, int]:
    rho, c = growth_constant()
    ordered = ordered_nim_ogf(50)
    return {
        "rho": rho,
        "c": c,
        "residual": abs(ordered_denominator_at(rho)),
        "ordered_over_caterpillars_50": ordered[50] / caterpillar_count(50),
    }, 0


def cmd_recurrence(args: argparse.Namespace) -> tuple[Any, int]:
    if not 16 <= args.max <= OGF_LIMIT:
        raise UsageError(f"--max must lie in 16..{OGF_LIMIT}")
    report = check_recurrence(args.max)
    return report, 0 if report.holds else 1


def cmd_spectral(args: argparse.Namespace) -> tuple[Any, int]:
    t = _read_tree(args.input)
    if t.n > WITNESS_LIMIT:
        raise UsageError(f"spectral witness is limited to n <= {WITNESS_LIMIT}")
    return witness_matrix(t), 0


def cmd_series(args: argparse.Namespace) -> tuple[Any, int]:
    if not 4 <= args.trunc <= OGF_LIMIT:
        raise UsageError(f"--trunc must lie in 4..{OGF_LIMIT}")
    series = assemble_nim_ogf(args.trunc).named_series()[args.dump]
    return series.dump(), 0


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="nimtree", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"nimtree {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name: str, func, help_text: str, fmt: str = "json") -> argparse.ArgumentParser:
        sp = sub.add_parser(name, help=help_text)
        sp.add_argument("--format", choices=("json", "csv", "plain"), default=fmt)
        sp.set_defaults(func=func)
        return sp

    sp = add("count", cmd_count, "count k-NIM trees for n = 1..N", fmt="csv")
    sp.add_argument("--k", type=int, default=1)
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--method", choices=("ogf", "oracle", "both"), default="ogf")
    sp.add_argument("--literal-threshold", action="store_true",
                    help="oracle only: use the delta >= k+1 threshold")
    sp.add_argument("--dump-intermediate", metavar="DIR",
                    help="write every pipeline series to DIR/<name>.json")

    for name, func, text in (("classify", cmd_classify, "classify one tree"),
                             ("profile", cmd_profile, "path cover, Delta, M and an RPM set"),
                             ("skeleton", cmd_skeleton, "skeleton signature of a NIM tree"),
                             ("spectral", cmd_spectral, "matrix realizing M(T)")):
        sp = add(name, func, text)
        sp.add_argument("--input", required=True, help="edge-list file, or - for stdin")
        if name == "classify":
            sp.add_argument("--k", type=int, default=1)
            sp.add_argument("--literal-threshold", action="store_true")

    add("asymptotics", cmd_asymptotics, "growth rate of the counts")
    sp = add("recurrence", cmd_recurrence, "check the 15-term recurrence")
    sp.add_argument("--max", type=int, default=300)
    sp = add("series", cmd_series, "dump a pipeline series")
    sp.add_argument("--dump", choices=SERIES_NAMES, required=True)
    sp.add_argument("--trunc", type=int, default=64)
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse reports usage problems itself
        return int(exc.code or 0)
    try:
        report, status = args.func(args)
        sys.stdout.write(emit(report, args.format))
        return status
    except UsageError as exc:
        return _fail(exc, 2)
    except (NimTreeError, OSError, TypeError) as exc:
        return _fail(exc, 1)


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
