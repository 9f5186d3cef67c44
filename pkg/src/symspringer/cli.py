"""Command line driver.

Every command writes the resolved configuration as ``# key=value`` header
lines before its output, so a result file records how it was produced.
Exit codes: 0 success, 1 failed verification, 2 invalid input, 3 precision
failure, 4 resource guard.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import random
import sys
import time

from .errors import InvalidInput, SymSpringerError
from .fiber import (
    count_fiber_points,
    enumerate_u_fiber,
    stratum_counts,
    superdiagonal_classes,
    window_fiber_search,
    z1_size,
)
from .gf import make_field, parse_field
from .grassmann import count_points, enumerate_lattices, torus_points
from .linalg import MatrixF, det, val_det
from .series import parse_series_list, require_precision_for, working_precision
from .symspace import (
    TorusElement,
    closed_form_det,
    conjecture_dim,
    dim_formula,
    make_gamma,
    phi_matrix,
)

DEFAULTS = {
    "field": "3",
    "n": None,
    "x": None,
    "t": None,
    "window": 1,
    "depth": None,
    "tower": 3,
    "seed": 0,
    "points": 3,
    "precision": 32,
    "fields": None,
    "d": "0,1,2",
    "out": None,
}

INT_KEYS = {"n", "window", "depth", "tower", "seed", "points", "precision"}


def read_config(path: str) -> dict:
    """Flat ``key = value`` file; blank lines and # comments are skipped."""
    out = {}
    with open(path) as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise InvalidInput(f"{path}:{lineno}: expected key = value")
            key, value = (s.strip() for s in line.split("=", 1))
            key = key.replace("-", "_")
            if key not in DEFAULTS:
                raise InvalidInput(f"{path}:{lineno}: unknown key {key!r}")
            out[key] = value
    return out


def resolve(args: argparse.Namespace) -> dict:
    cfg = dict(DEFAULTS)
    if args.config:
        cfg.update(read_config(args.config))
    for key in DEFAULTS:
        value = getattr(args, key, None)
        if value is not None:
            cfg[key] = value
    for key in INT_KEYS:
        if cfg[key] is not None:
            try:
                cfg[key] = int(cfg[key])
            except (TypeError, ValueError):
                raise InvalidInput(f"{key} must be an integer, got {cfg[key]!r}") from None
    if cfg["tower"] < 1:
        raise InvalidInput("tower must be at least 1")
    if cfg["window"] < 0:
        raise InvalidInput("window must be non-negative")
    return cfg


SWEEP_ONLY = {"fields", "d"}


def header(cfg: dict, command: str) -> str:
    lines = [f"# command={command}"]
    for key in sorted(cfg):
        if command != "sweep" and key in SWEEP_ONLY:
            continue
        if cfg[key] is not None:
            lines.append(f"# {key}={cfg[key]}")
    return "\n".join(lines) + "\n"


# -- input parsing ---------------------------------------------------------------

def parse_x(cfg: dict, field):
    if not cfg["x"]:
        raise InvalidInput("--x is required")
    x = parse_series_list(cfg["x"], field)
    if cfg["n"] is not None and cfg["n"] != len(x):
        raise InvalidInput(f"n = {cfg['n']} but x has {len(x)} entries")
    return x


def parse_t(text: str, field, n: int) -> TorusElement:
    parts = text.split(";")
    if len(parts) != 2:
        raise InvalidInput("--t must look like 'r1,...,rn; s1,...,sn'")
    r = parse_series_list(parts[0], field)
    s = parse_series_list(parts[1], field)
    if len(r) != n or len(s) != n:
        raise InvalidInput(f"--t needs {n} entries on each side")
    return TorusElement(r, s)


def random_torus_points(x, field, count: int, seed: int) -> list[TorusElement]:
    """Distinct monomial points (c t^u, d t^w) of X(T, gamma), reproducible from seed."""
    rng = random.Random(seed)
    n = len(x)
    caps = [min(xi.valuation(allow_zero=True), 3) for xi in x]
    out = [TorusElement.identity(n, field)]
    seen = {((0,) * n, (0,) * n, (1,) * n, (1,) * n)}
    attempts = 0
    while len(out) < count and attempts < 1000:
        attempts += 1
        u = tuple(rng.randint(-1, 1) for _ in range(n))
        w = tuple(ui + rng.randint(0, int(c)) for ui, c in zip(u, caps))
        c = tuple(rng.randrange(1, field.p) for _ in range(n))
        d = tuple(rng.randrange(1, field.p) for _ in range(n))
        key = (u, w, c, d)
        if key in seen:
            continue
        seen.add(key)
        out.append(TorusElement.from_valuations(u, w, field, (c, d)))
    return out


def torus_points_for(cfg, x, field) -> list[TorusElement]:
    if cfg["t"]:
        return [parse_t(cfg["t"], field, len(x))]
    return random_torus_points(x, field, cfg["points"], cfg["seed"])


def describe_t(t: TorusElement) -> str:
    return ",".join(map(str, t.r)) + ";" + ",".join(map(str, t.s))


def check_precision(cfg: dict, x, ts=()) -> None:
    """Refuse inputs whose valuations exceed a quarter of the working precision."""
    vals = [abs(xi.valuation()) for xi in x if not xi.is_zero]
    vals.extend(abs((a - b).valuation()) for i, a in enumerate(x) for b in x[i + 1:] if not (a - b).is_zero)
    for t in ts:
        u, w = t.valuations()
        vals.extend(abs(v) for v in u + w)
    if cfg["depth"] is not None:
        vals.append(cfg["depth"])
    require_precision_for(max(vals, default=0))


# -- commands --------------------------------------------------------------------

def cmd_dim(cfg: dict, args) -> tuple[str, int]:
    field = parse_field(cfg["field"])
    x = parse_x(cfg, field)
    t = parse_t(cfg["t"], field, len(x)) if cfg["t"] else TorusElement.identity(len(x), field)
    check_precision(cfg, x, [t])
    d = dim_formula(x)
    lines = [f"dim_formula {d}"]
    ok = True
    if len(x) > 1:
        phi = phi_matrix(t, x)
        vd = val_det(phi)
        dp = det(phi)
        cf = closed_form_det(x)
        lines += [f"val_det_phi {vd}", f"det_phi {dp}", f"closed_form {cf}"]
        ok = vd == d and dp == cf
    if args.conjecture:
        c = conjecture_dim(make_gamma(x))
        lines.append(f"conjecture_dim {c}")
        ok = ok and c == d
    lines.append(f"agree {'yes' if ok else 'no'}")
    return "\n".join(lines) + "\n", 0 if ok else 1


def cmd_phi(cfg: dict, args) -> tuple[str, int]:
    field = parse_field(cfg["field"])
    x = parse_x(cfg, field)
    t = parse_t(cfg["t"], field, len(x)) if cfg["t"] else TorusElement.identity(len(x), field)
    check_precision(cfg, x, [t])
    phi = phi_matrix(t, x)
    body = {"phi": [[str(e) for e in row] for row in phi.tolist()], "det": str(det(phi)), "val_det": val_det(phi)}
    return json.dumps(body, indent=1) + "\n", 0


def cmd_enumerate(cfg: dict, args) -> tuple[str, int]:
    field = parse_field(cfg["field"])
    n = cfg["n"] if cfg["n"] is not None else (len(parse_series_list(cfg["x"], field)) if cfg["x"] else 2)
    m = cfg["window"]
    table = count_points(lambda f: len(enumerate_lattices(n, m, f)), field, cfg["tower"])
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["q", "s", "n", "window", "count"])
    for s, c in table.counts:
        w.writerow([field.q, s, n, m, c])
    buf.write(f"# fitted_degree={fmt_degree(table.fitted_degree)}\n")
    return buf.getvalue(), 0


def cmd_fiber(cfg: dict, args) -> tuple[str, int]:
    field = parse_field(cfg["field"])
    x = parse_x(cfg, field)
    check_precision(cfg, x)
    m = cfg["window"]
    if args.json:
        pts = window_fiber_search(x, m, field)
        return json.dumps([p.to_dict() for p in pts], indent=1, sort_keys=True) + "\n", 0
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["q", "s", "stratum", "count"])
    for s in range(1, cfg["tower"] + 1):
        ext = make_field(field.p, field.d * s)
        for stratum, count in stratum_counts(window_fiber_search(x, m, ext)).items():
            w.writerow([field.q, s, stratum, count])
    return buf.getvalue(), 0


def fmt_degree(d) -> str:
    return "undetermined" if d is None else str(d)


def verify_u_fiber(cfg, x, field, ts, corrupt: bool) -> list[tuple[bool, str]]:
    results = []
    dim = dim_formula(x)
    depth = cfg["depth"] if cfg["depth"] is not None else dim + 1
    for k, t in enumerate(ts):
        label = f"t{k} [{describe_t(t)}]"
        if len(x) > 1:
            phi = phi_matrix(t, x)
            if corrupt:
                rows = phi.tolist()
                rows[0][0] = -rows[0][0]
                phi = MatrixF(rows, field)
            dp, cf = det(phi), closed_form_det(x)
            results.append((dp == cf, f"det_identity {label}: det={dp} closed_form={cf}"))
            vd = val_det(phi)
            results.append((vd == dim, f"val_det {label}: {vd} vs dim_formula {dim}"))
        table = count_fiber_points(t, x, depth, cfg["tower"], field)
        deeper = count_fiber_points(t, x, depth + 1, cfg["tower"], field)
        counts = ";".join(str(c) for c in table.values())
        results.append((table.fitted_degree == dim, f"growth_degree {label}: {fmt_degree(table.fitted_degree)} vs {dim} (counts {counts})"))
        results.append((table.counts == deeper.counts, f"depth_stable {label}: depth {depth} and {depth + 1}"))
        pts = enumerate_u_fiber(t, x, depth, field)
        sizes = superdiagonal_classes(t, x, pts)
        z1 = z1_size(t, x, depth, field)
        ok = len(set(sizes.values())) <= 1 and len(sizes) == z1
        results.append((ok, f"superdiagonal {label}: {len(sizes)} classes of sizes {sorted(set(sizes.values()))}, |Z_1| = {z1}"))
    return results


def verify_torus(cfg, x, field) -> list[tuple[bool, str]]:
    window = max(cfg["window"], 1)

    def count(f):
        return len(torus_points([xi.map_field(f) for xi in x], window, modulo_shift=True))

    table = count_points(count, field, cfg["tower"])
    pts = torus_points(x, window)
    ok_pts = all(p.satisfies(x) for p in pts)
    counts = ";".join(str(c) for c in table.values())
    return [
        (ok_pts, f"torus_constraints: {len(pts)} points in window {window}"),
        (table.fitted_degree == 0, f"growth_degree torus: {fmt_degree(table.fitted_degree)} vs 0 (counts {counts})"),
    ]


def cmd_verify(cfg: dict, args) -> tuple[str, int]:
    field = parse_field(cfg["field"])
    x = parse_x(cfg, field)
    if args.torus_only:
        check_precision(cfg, x)
        results = verify_torus(cfg, x, field)
    else:
        ts = torus_points_for(cfg, x, field)
        check_precision(cfg, x, ts)
        results = verify_u_fiber(cfg, x, field, ts, args.corrupt_phi_sign)
    lines = [f"{'PASS' if ok else 'FAIL'} {msg}" for ok, msg in results]
    passed = all(ok for ok, _ in results)
    lines.append(f"{'PASS' if passed else 'FAIL'} verify")
    return "\n".join(lines) + "\n", 0 if passed else 1


def _int_list(text) -> list[int]:
    if text is None:
        return []
    try:
        return [int(v) for v in str(text).replace(" ", "").split(",") if v]
    except ValueError:
        raise InvalidInput(f"expected a comma separated integer list, got {text!r}") from None


def cmd_sweep(cfg: dict, args) -> tuple[str, int]:
    fields = [f.strip() for f in (cfg["fields"] or cfg["field"]).split(",") if f.strip()]
    ds = _int_list(cfg["d"])
    template = cfg["x"] or "1, 1+t^{d}"
    rows = []
    for fs in fields:
        field = parse_field(fs)
        for d in ds:
            x = parse_series_list(template.format(d=d), field)
            ts = torus_points_for(cfg, x, field)
            check_precision(cfg, x, ts)
            dim = dim_formula(x)
            depth = cfg["depth"] if cfg["depth"] is not None else dim + 1
            for t in ts:
                start = time.perf_counter()
                table = count_fiber_points(t, x, depth, cfg["tower"], field)
                elapsed = time.perf_counter() - start
                key = (field.q, d, describe_t(t))
                row = [field.q, d, ",".join(map(str, x)), describe_t(t), dim, fmt_degree(table.fitted_degree),
                       ";".join(str(c) for c in table.values())]
                if args.timing:
                    row.append(f"{elapsed:.3f}")
                rows.append((key, row))
    rows.sort(key=lambda kv: kv[0])
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    cols = ["q", "d", "x", "t", "formula_dim", "degree", "counts"]
    if args.timing:
        cols.append("seconds")
    w.writerow(cols)
    for _, row in rows:
        w.writerow(row)
    return buf.getvalue(), 0


COMMANDS = {
    "dim": cmd_dim,
    "phi": cmd_phi,
    "enumerate": cmd_enumerate,
    "fiber": cmd_fiber,
    "verify": cmd_verify,
    "sweep": cmd_sweep,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="flat key=value file; flags override it")
    common.add_argument("--field", help="field size p or p^d, e.g. 3 or 3^2")
    common.add_argument("--n", type=int, help="rank")
    common.add_argument("--x", help="beta entries as comma separated series")
    common.add_argument("--t", help="torus point 'r1,...,rn; s1,...,sn'")
    common.add_argument("--window", type=int, help="lattice window m")
    common.add_argument("--depth", type=int, help="pole depth for U-fiber cosets (default dim + 1)")
    common.add_argument("--tower", type=int, help="count over F_{q^s} for s = 1..tower")
    common.add_argument("--seed", type=int, help="seed for random torus points")
    common.add_argument("--points", type=int, help="number of torus points when --t is absent")
    common.add_argument("--precision", type=int, help="working precision for series inverses")
    common.add_argument("--out", help="write output here instead of stdout")

    parser = argparse.ArgumentParser(prog="symspringer", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    p = sub.add_parser("dim", parents=[common], help="closed formula and determinant checks")
    p.add_argument("--conjecture", action="store_true", help="also evaluate the discriminant form")
    sub.add_parser("phi", parents=[common], help="print the phi matrix as JSON")
    sub.add_parser("enumerate", parents=[common], help="count Grassmannian lattices in a window")
    p = sub.add_parser("fiber", parents=[common], help="window search of X(G_0, gamma) by stratum")
    p.add_argument("--json", action="store_true", help="dump all fiber points at the base field")
    p = sub.add_parser("verify", parents=[common], help="compare enumerations with the formula")
    p.add_argument("--torus-only", action="store_true", help="verify X(T, gamma) only")
    p.add_argument("--corrupt-phi-sign", action="store_true", help=argparse.SUPPRESS)
    p = sub.add_parser("sweep", parents=[common], help="CSV of formula vs enumerated degree")
    p.add_argument("--fields", help="comma separated field sizes")
    p.add_argument("--d", help="comma separated values substituted for {d} in --x")
    p.add_argument("--timing", action="store_true", help="add a wall time column")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = resolve(args)
        with working_precision(cfg["precision"]):
            text, code = COMMANDS[args.command](cfg, args)
    except SymSpringerError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    out = header(cfg, args.command) + text
    if cfg["out"]:
        with open(cfg["out"], "w") as fh:
            fh.write(out)
    else:
        sys.stdout.write(out)
    return code


if __name__ == "__main__":
    sys.exit(main())
