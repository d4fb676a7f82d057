"""Command-line front end.

Every subcommand writes one document (CSV table or JSON object) to stdout or
``--out``. Diagnostics go to stderr. Exit status: 0 success, 1 conjecture
violations found, 2 bad arguments, 3 resource limit, 4 numerical failure.
"""

import argparse
import concurrent.futures
import csv
import io
import json
import math
import os
import sys
import tempfile

import numpy as np

from . import analysis, enumeration, sectors, spectral
from .errors import InvalidArgumentError, NumericalFailureError, ResourceLimitError

SCHEMA_VERSION = 1

COLUMNS = {
    "dims": ["N", "L", "M", "individual_dim", "average_dim"],
    "chi1": ["L", "M", "kappa", "chi1_exact", "chi1_asymptotic", "gap"],
    "sector": ["N", "L", "M", "kappa", "dim_individual", "dim_average", "S_individual", "S_average", "chi"],
    "sectors-sweep": ["N", "kappa", "chi_N", "N_chi_1"],
    "holevo": ["kappa", "nbar", "N_max", "per_use", "linear_bound"],
    "baselines": ["nbar", "erasure", "holevo_binary", "leading_order", "d_erasure", "d_holevo_binary"],
    "splitting": ["kappa", "model", "S_individual", "S_average", "chi2"],
    "szego": ["kappa", "quadrature", "closed_form", "difference"],
    "conjecture": ["N", "kappa", "chi_N", "N_chi_1", "margin"],
}

_NUMBER = {"anyOf": [{"type": "number"}, {"enum": ["inf", "-inf"]}, {"type": "null"}]}

TABLE_SCHEMA = {
    "type": "object",
    "required": ["schema_version", "command", "columns", "rows"],
    "properties": {
        "schema_version": {"const": SCHEMA_VERSION},
        "command": {"type": "string"},
        "columns": {"type": "array", "items": {"type": "string"}},
        "rows": {
            "type": "array",
            "items": {"type": "object", "additionalProperties": {"type": ["number", "integer", "string", "null"]}},
        },
    },
}

SECTOR_SCHEMA = {
    "type": "object",
    "required": ["schema_version"] + COLUMNS["sector"],
    "properties": {
        "schema_version": {"const": SCHEMA_VERSION},
        "N": {"type": "integer", "minimum": 0},
        "L": {"type": "integer", "minimum": 1},
        "M": {"type": "integer", "minimum": 1},
        "kappa": _NUMBER,
        "dim_individual": {"type": "integer", "minimum": 1},
        "dim_average": {"type": "integer", "minimum": 1},
        "S_individual": {"type": "number"},
        "S_average": {"type": "number"},
        "chi": {"type": "number"},
    },
    "additionalProperties": False,
}

CONJECTURE_SCHEMA = {
    "type": "object",
    "required": ["schema_version", "command", "L", "M", "N_max", "kappas", "checked", "violations", "ok"],
    "properties": {
        "schema_version": {"const": SCHEMA_VERSION},
        "command": {"const": "conjecture"},
        "L": {"type": "integer"},
        "M": {"type": "integer"},
        "N_max": {"type": "integer"},
        "kappas": {"type": "array", "items": _NUMBER},
        "checked": {"type": "integer", "minimum": 0},
        "violations": {
            "type": "array",
            "items": {
                "type": "object",
                "required": COLUMNS["conjecture"],
                "properties": {c: _NUMBER for c in COLUMNS["conjecture"]},
            },
        },
        "ok": {"type": "boolean"},
    },
}


def _csv_cell(value):
    if value is None:
        return ""
    if isinstance(value, (bool, str)):
        return str(value)
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    value = float(value)
    if math.isinf(value):
        return "inf" if value > 0 else "-inf"
    return format(value, ".12g")


def _json_value(value):
    # JSON has no infinity literal; kappa = inf and divergent values become "inf".
    if value is None or isinstance(value, (bool, str)):
        return value
    if isinstance(value, (int, np.integer)):
        return int(value)
    value = float(value)
    if math.isinf(value):
        return "inf" if value > 0 else "-inf"
    if math.isnan(value):
        return None
    return float(format(value, ".12g"))


def render_csv(columns, rows):
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([_csv_cell(row[c]) for c in columns])
    return buf.getvalue()


def render_table_json(command, columns, rows):
    doc = {
        "schema_version": SCHEMA_VERSION,
        "command": command,
        "columns": columns,
        "rows": [{c: _json_value(row[c]) for c in columns} for row in rows],
    }
    return json.dumps(doc, indent=2) + "\n"


def write_output(text, path=None, stream=None):
    """Write to ``stream`` (stdout) or atomically replace ``path``."""
    if path is None:
        (stream or sys.stdout).write(text)
        return
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", suffix=os.path.basename(path))
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


# Argument parsing


def _float(token):
    token = token.strip().lower()
    if token in ("inf", "infinity", "+inf"):
        return math.inf
    try:
        return float(token)
    except ValueError:
        raise InvalidArgumentError(f"not a number: {token!r}") from None


def _log_range(item):
    parts = item.split(":")
    if len(parts) != 4:
        raise InvalidArgumentError(f"log range must be log:START:STOP:COUNT, got {item!r}")
    start, stop, count = _float(parts[1]), _float(parts[2]), int(parts[3])
    if start <= 0 or stop <= 0 or count < 1:
        raise InvalidArgumentError(f"log range needs positive bounds and count, got {item!r}")
    return [float(x) for x in np.logspace(math.log10(start), math.log10(stop), count)]


def parse_kappas(spec):
    """Parse a kappa spec: ``1``, ``0,0.1,1,inf``, ``log:0.01:10:25`` or ``grid``.

    ``0`` and ``inf`` parse to the exact sentinels ``0.0`` and ``math.inf``.
    """
    out = []
    for item in spec.split(","):
        item = item.strip().lower()
        if not item:
            continue
        if item == "grid":
            out.extend(analysis.default_kappa_grid())
        elif item.startswith("log:"):
            out.extend(_log_range(item))
        else:
            out.append(_float(item))
    if not out:
        raise InvalidArgumentError(f"empty kappa specification {spec!r}")
    for k in out:
        if math.isnan(k) or k < 0:
            raise InvalidArgumentError(f"kappa must be >= 0 or inf, got {k}")
    return out


def parse_nbars(spec):
    """Parse ``0.1``, ``0.01,0.1``, ``START:STOP:STEP`` (inclusive) or ``log:START:STOP:COUNT``."""
    out = []
    for item in spec.split(","):
        item = item.strip().lower()
        if not item:
            continue
        if item.startswith("log:"):
            out.extend(_log_range(item))
        elif ":" in item:
            parts = item.split(":")
            if len(parts) != 3:
                raise InvalidArgumentError(f"range must be START:STOP:STEP, got {item!r}")
            start, stop, step = (_float(p) for p in parts)
            if step <= 0 or stop < start:
                raise InvalidArgumentError(f"range {item!r} is empty")
            count = int(math.floor((stop - start) / step + 1e-9)) + 1
            out.extend(float(start + i * step) for i in range(count))
        else:
            out.append(_float(item))
    if not out:
        raise InvalidArgumentError(f"empty n_bar specification {spec!r}")
    for nb in out:
        if not 0 <= nb < math.inf:
            raise InvalidArgumentError(f"n_bar must be finite and >= 0, got {nb}")
    return out


def parse_ints(spec):
    out = []
    for item in spec.split(","):
        item = item.strip()
        if not item:
            continue
        if ":" in item:
            lo, hi = item.split(":", 1)
            out.extend(range(int(lo), int(hi) + 1))
        else:
            out.append(int(item))
    if not out:
        raise InvalidArgumentError(f"empty integer specification {spec!r}")
    return out


def _threads():
    env = os.environ.get("HOLEVO_THREADS", "1").strip() or "1"
    try:
        n = int(env)
    except ValueError:
        raise InvalidArgumentError(f"HOLEVO_THREADS must be an integer, got {env!r}") from None
    if n < 0:
        raise InvalidArgumentError(f"HOLEVO_THREADS must be >= 0, got {n}")
    return n or (os.cpu_count() or 1)


def _map(func, items):
    """Map over grid points, possibly in threads; results keep grid order."""
    items = list(items)
    workers = min(_threads(), max(len(items), 1))
    if workers <= 1:
        return [func(x) for x in items]
    with concurrent.futures.ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(func, items))


# Subcommands: each returns (rows, exit_status) or a ready JSON document.


def cmd_dims(args):
    rows = []
    for N in parse_ints(args.N):
        for L in parse_ints(args.L):
            for M in parse_ints(args.M):
                rows.append({
                    "N": N, "L": L, "M": M,
                    "individual_dim": enumeration.individual_dim(N, L),
                    "average_dim": enumeration.average_dim(N, L, M),
                })
    return rows


def cmd_chi1(args):
    points = [(L, M, k) for L in parse_ints(args.L) for M in parse_ints(args.M) for k in parse_kappas(args.kappa)]

    def row(point):
        L, M, k = point
        exact = sectors.chi1_exact(L, M, k)
        asym = None if k == 0 else sectors.chi1_asymptotic(M, k)
        return {
            "L": L, "M": M, "kappa": k, "chi1_exact": exact,
            "chi1_asymptotic": math.inf if asym is None else asym,
            "gap": math.inf if asym is None else asym - exact,
        }

    return _map(row, points)


def cmd_sector(args):
    k = parse_kappas(args.kappa)
    if len(k) != 1:
        raise InvalidArgumentError("sector takes a single kappa")
    c = sectors.sector_chi(args.N, args.L, args.M, k[0], dim_cap=args.dim_cap)
    return [{
        "N": c.N, "L": c.L, "M": c.M, "kappa": c.kappa,
        "dim_individual": c.dim_individual, "dim_average": c.dim_average,
        "S_individual": c.entropy_individual, "S_average": c.entropy_average, "chi": c.chi,
    }]


def cmd_sectors_sweep(args):
    kappas = parse_kappas(args.kappa)

    def rows_for(k):
        chi1 = sectors.sector_chi(1, args.L, args.M, k, dim_cap=args.dim_cap).chi
        return [
            {"N": N, "kappa": k, "chi_N": sectors.sector_chi(N, args.L, args.M, k, dim_cap=args.dim_cap).chi,
             "N_chi_1": N * chi1}
            for N in range(1, args.N_max + 1)
        ]

    return [r for block in _map(rows_for, kappas) for r in block]


def cmd_holevo(args):
    kappas = parse_kappas(args.kappa)
    nbars = parse_nbars(args.nbar)

    def rows_for(k):
        reports = analysis.holevo_curve(args.L, args.M, k, nbars, n_max=args.N_max, dim_cap=args.dim_cap)
        return [
            {"kappa": k, "nbar": r.params.n_bar, "N_max": r.N_max, "per_use": r.per_use,
             "linear_bound": r.linear_bound}
            for r in reports
        ]

    return [r for block in _map(rows_for, kappas) for r in block]


def cmd_baselines(args):
    rows = []
    for nb in parse_nbars(args.nbar):
        b = analysis.baselines(nb)
        d_er, d_hb = analysis.baseline_slopes(nb)
        rows.append({
            "nbar": nb, "erasure": b.erasure, "holevo_binary": b.holevo_binary,
            "leading_order": b.leading_order, "d_erasure": d_er, "d_holevo_binary": d_hb,
        })
    return rows


def cmd_splitting(args):
    def rows_for(k):
        c = analysis.splitting_comparison(args.L, args.M, k, dim_cap=args.dim_cap)
        return [
            {"kappa": k, "model": name, "S_individual": t.S_individual, "S_average": t.S_average, "chi2": t.chi2}
            for name, t in (("independent", c.independent), ("collective", c.collective))
        ]

    return [r for block in _map(rows_for, parse_kappas(args.kappa)) for r in block]


def cmd_szego(args):
    def row(k):
        s = spectral.szego_entropy_integral(k, tolerance=args.tolerance)
        return {"kappa": k, "quadrature": s.quadrature, "closed_form": s.closed_form, "difference": s.difference}

    return _map(row, parse_kappas(args.kappa))


def cmd_conjecture(args):
    kappas = parse_kappas(args.kappa)
    blocks = _map(lambda k: analysis.conjecture_records(args.L, args.M, [k], args.N_max, dim_cap=args.dim_cap), kappas)
    records = [r for block in blocks for r in block]
    rows = [
        {"N": r.N, "kappa": r.kappa, "chi_N": r.chi_N, "N_chi_1": r.N_chi_1, "margin": r.margin}
        for r in records if r.violated
    ]
    summary = {
        "schema_version": SCHEMA_VERSION,
        "command": "conjecture",
        "L": args.L, "M": args.M, "N_max": args.N_max,
        "kappas": [_json_value(k) for k in kappas],
        "checked": len(records),
        "violations": [{c: _json_value(r[c]) for c in COLUMNS["conjecture"]} for r in rows],
        "ok": not rows,
    }
    return rows, summary


def build_parser():
    parser = argparse.ArgumentParser(
        prog="ppm-holevo",
        description="Holevo bounds for coherent-pulse PPM with phase diffusion between symbols.",
    )
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("csv", "json"), default=None, help="output format (default per command)")
    common.add_argument("--out", default=None, help="write to PATH atomically instead of stdout")
    common.add_argument("--dim-cap", type=int, default=None, help="sector dimension cap (default $HOLEVO_DIM_CAP or 5000)")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("dims", parents=[common], help="sector basis dimensions")
    p.add_argument("--N", required=True, help="photon numbers, e.g. 7 or 1:8")
    p.add_argument("--L", required=True)
    p.add_argument("--M", default="2")

    p = sub.add_parser("chi1", parents=[common], help="one-photon term, exact and asymptotic")
    p.add_argument("--L", default="10,100")
    p.add_argument("--M", default="2,4,10")
    p.add_argument("--kappa", default="grid")

    p = sub.add_parser("sector", parents=[common], help="Holevo term of one photon sector")
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--L", type=int, required=True)
    p.add_argument("--M", type=int, default=2)
    p.add_argument("--kappa", required=True)

    p = sub.add_parser("sectors-sweep", parents=[common], help="chi_N against N*chi_1 over a kappa grid")
    p.add_argument("--L", type=int, required=True)
    p.add_argument("--M", type=int, default=2)
    p.add_argument("--N-max", dest="N_max", type=int, required=True)
    p.add_argument("--kappa", default="0,0.1,1,inf")

    p = sub.add_parser("holevo", parents=[common], help="Poisson-weighted total per channel use")
    p.add_argument("--L", type=int, required=True)
    p.add_argument("--M", type=int, default=2)
    p.add_argument("--kappa", default="0,0.1,1,inf")
    p.add_argument("--nbar", required=True, help="e.g. 0.1, 0.01:0.2:0.01 or log:1e-3:0.5:20")
    p.add_argument("--N-max", dest="N_max", type=int, default=None,
                   help="photon-number truncation; n_bar values needing more are refused")

    p = sub.add_parser("baselines", parents=[common], help="erasure vs binary Holevo baselines")
    p.add_argument("--nbar", default="log:1e-4:10:41")

    p = sub.add_parser("splitting", parents=[common], help="collective vs independent two-photon dephasing")
    p.add_argument("--L", type=int, default=2)
    p.add_argument("--M", type=int, default=2)
    p.add_argument("--kappa", default="grid")

    p = sub.add_parser("szego", parents=[common], help="quadrature of the entropy integral vs its closed form")
    p.add_argument("--kappa", default="0.1,0.5,1,3")
    p.add_argument("--tolerance", type=float, default=spectral.QUAD_TOLERANCE)

    p = sub.add_parser("conjecture", parents=[common], help="check chi_N <= N*chi_1")
    p.add_argument("--L", type=int, required=True)
    p.add_argument("--M", type=int, default=2)
    p.add_argument("--N-max", dest="N_max", type=int, required=True)
    p.add_argument("--kappa", default="0,0.1,1,inf")
    return parser


_COMMANDS = {
    "dims": cmd_dims,
    "chi1": cmd_chi1,
    "sector": cmd_sector,
    "sectors-sweep": cmd_sectors_sweep,
    "holevo": cmd_holevo,
    "baselines": cmd_baselines,
    "splitting": cmd_splitting,
    "szego": cmd_szego,
    "conjecture": cmd_conjecture,
}

_JSON_DEFAULT = {"sector", "conjecture"}


def run(args, stdout=None):
    """Execute parsed arguments; returns the exit status."""
    command = args.command
    fmt = args.format or ("json" if command in _JSON_DEFAULT else "csv")
    columns = COLUMNS[command]
    status = 0
    if command == "conjecture":
        rows, summary = cmd_conjecture(args)
        status = 0 if summary["ok"] else 1
        text = json.dumps(summary, indent=2) + "\n" if fmt == "json" else render_csv(columns, rows)
    elif command == "sector":
        row = cmd_sector(args)
        if fmt == "json":
            doc = {"schema_version": SCHEMA_VERSION}
            doc.update({c: _json_value(row[0][c]) for c in columns})
            text = json.dumps(doc, indent=2) + "\n"
        else:
            text = render_csv(columns, row)
    else:
        rows = _COMMANDS[command](args)
        text = render_table_json(command, columns, rows) if fmt == "json" else render_csv(columns, rows)
    write_output(text, args.out, stream=stdout)
    return status


def main(argv=None, stdout=None, stderr=None):
    stderr = stderr or sys.stderr
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return run(args, stdout=stdout)
    except ResourceLimitError as exc:
        print(f"ppm-holevo: resource limit: {exc}", file=stderr)
        return 3
    except NumericalFailureError as exc:
        print(f"ppm-holevo: numerical failure: {exc}", file=stderr)
        return 4
    except (InvalidArgumentError, ValueError, OverflowError) as exc:
        print(f"ppm-holevo: invalid argument: {exc}", file=stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
