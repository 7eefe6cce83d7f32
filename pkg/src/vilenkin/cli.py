"""Command-line harness: ``vilenkin verify | table | divergence``.

Exit codes: 0 when every check passes, 1 when a check fails, 2 on usage or config errors.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from pathlib import Path

import numpy as np

from .checks import SUITES, run_verify
from .grid import GridFunction, lp_norm, weak_lp_norm
from .group import MAX_ORDER, RadixSequence, VilenkinError, _check_resolution, variation
from .hardy import (MartingaleFamilySpec, _clean, build_martingale, example22, hp_norm, make_atom,
                    search_alpha_sequence)
from .kernels import fejer_table, lebesgue_constants, lukomskii_bounds, norlund_kernel
from .summability import MeanSpec, WeightSequence, log_sum, mean, means_batch
from .transform import forward

TABLE_KINDS = ("lebesgue", "kernel_norms", "means", "hardy_sums")
EXAMPLES = ("ex22", "ex251", "ex261")
TARGETS = ("fejer", "partial", "riesz_log", "norlund_log")


class UsageError(VilenkinError):
    pass


def _parse_k_range(text: str) -> tuple[int, int]:
    try:
        a, b = text.split("..")
        a, b = int(a), int(b)
    except ValueError as exc:
        raise UsageError(f"--k-range must look like a..b, got {text!r}") from exc
    if a > b:
        raise UsageError("--k-range needs a <= b")
    return a, b


def _parse_tolerances(items) -> dict:
    out = {}
    for item in items or ():
        name, sep, value = item.partition("=")
        if not sep:
            raise UsageError(f"--tol expects name=value, got {item!r}")
        try:
            val = float(value)
        except ValueError as exc:
            raise UsageError(f"bad tolerance {item!r}") from exc
        if not val > 0:
            raise UsageError("tolerances must be positive")
        out[name.strip()] = val
    return out


def _parse_p_list(text: str | None, default) -> list[float]:
    if text is None:
        return list(default)
    out = []
    for tok in text.split(","):
        tok = tok.strip()
        try:
            if "/" in tok:
                num, den = tok.split("/")
                val = float(num) / float(den)
            else:
                val = float(tok)
        except (ValueError, ZeroDivisionError) as exc:
            raise UsageError(f"bad p value {tok!r}") from exc
        if not val > 0:
            raise UsageError("p values must be positive")
        out.append(val)
    return out


def _parse_family(text: str | None) -> WeightSequence | None:
    if text is None:
        return None
    if text.startswith("custom:"):
        path = Path(text[len("custom:"):])
        try:
            raw = path.read_text()
        except OSError as exc:
            raise UsageError(f"cannot read weights file {path}") from exc
        try:
            values = json.loads(raw)
        except json.JSONDecodeError:
            values = raw.replace(",", " ").split()
        try:
            return WeightSequence("custom", tuple(float(v) for v in values))
        except (TypeError, ValueError) as exc:
            raise UsageError(f"bad weights in {path}") from exc
    return WeightSequence.parse(text)


# ---------------------------------------------------------------------------
# Output


def _fmt(v):
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    return "" if v is None else str(v)


def _json_value(v):
    if isinstance(v, (float, np.floating)):
        v = float(v)
        return None if math.isnan(v) else v
    if isinstance(v, np.integer):
        return int(v)
    return v


def render(rows: list[dict], fmt: str) -> str:
    if fmt == "json":
        clean = [{k: _json_value(v) for k, v in row.items()} for row in rows]
        return json.dumps(clean, indent=1) + "\n"
    buf = io.StringIO()
    if rows:
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(list(rows[0].keys()))
        for row in rows:
            writer.writerow([_fmt(v) for v in row.values()])
    return buf.getvalue()


# ---------------------------------------------------------------------------
# Tables


def _row_limit(args, M: int, default: int) -> int:
    return min(args.max_n if args.max_n is not None else default, M)


def table_lebesgue(radix, N, args) -> list[dict]:
    M = radix.M[N]
    if M > 4096:
        raise UsageError("lebesgue tables need M_N <= 4096")
    L = lebesgue_constants(radix, N)
    rows = []
    for n in range(1, _row_limit(args, M - 1, M - 1) + 1):
        v, vs = variation(n, radix, args.variation_start)
        lower, upper = lukomskii_bounds(n, radix, args.variation_start)
        rows.append({"n": n, "L_n": float(L[n - 1]), "v": v, "v_star": vs, "lower": lower, "upper": upper})
    return rows


def table_kernel_norms(radix, N, args, w: WeightSequence | None) -> list[dict]:
    M = radix.M[N]
    if M > 4096:
        raise UsageError("kernel tables need M_N <= 4096")
    K = fejer_table(radix, N)
    rows = []
    for n in range(1, _row_limit(args, M, M) + 1):
        row = {"n": n, "fejer": float(np.mean(np.abs(K[n])) / n)}
        if w is not None and w.family != "fejer":
            try:
                row[w.label] = lp_norm(norlund_kernel(n, w, radix, N), 1)
            except VilenkinError:
                row[w.label] = math.nan
        rows.append(row)
    return rows


def table_means(radix, N, args, w: WeightSequence | None) -> list[dict]:
    M = radix.M[N]
    f = GridFunction.random(radix, N, np.random.default_rng(args.seed))
    ps = _parse_p_list(args.p, (1.0, 2.0))
    rows = []
    for n in range(1, _row_limit(args, M, M) + 1):
        try:
            spec = MeanSpec("norlund", n, w if w is not None else WeightSequence("fejer"))
            g = mean(f, spec)
        except VilenkinError:
            continue
        row = {"n": n}
        for p in ps:
            row[f"err_p{p:g}"] = lp_norm(g - f, p)
        rows.append(row)
    return rows


def table_hardy_sums(radix, N, args) -> list[dict]:
    p = _parse_p_list(args.p, (0.5,))[0]
    if not 0 < p <= 1:
        raise UsageError("hardy_sums needs 0 < p <= 1")
    if args.martingale:
        spec = MartingaleFamilySpec.from_json(Path(args.martingale).read_text())
        if spec.radix != radix or spec.resolution != N:
            raise UsageError("martingale file radix/resolution differ from the command line")
        f = build_martingale(spec)
    else:
        f = make_atom(N - 1, p, radix, N)
    M = f.size
    n = _row_limit(args, M - 1, M - 1)
    c = _clean(forward(f).coefficients)
    k = np.arange(1, n + 1, dtype=np.float64)
    hardy = np.cumsum(c[1:n + 1] ** p / k ** (2 - p))
    paley_terms = np.zeros(n + 1)
    for level in range(1, N):
        for j in range(1, radix.m[level]):
            idx = j * radix.M[level]
            if idx <= n:
                paley_terms[idx] = radix.M[level] ** (2 - 2 / p) * c[idx] ** 2
    paley = np.sqrt(np.cumsum(paley_terms)[1:])
    S = means_batch(f, "partial", list(range(1, n + 1)))
    strong_partial = np.cumsum(np.mean(_clean(S, axis=1) ** p, axis=1) / k ** (2 - p))
    H = hp_norm(f, p)
    rows = []
    for i in range(n):
        rows.append({"k": i + 1, "hardy": float(hardy[i]), "paley": float(paley[i]),
                     "strong_partial": float(strong_partial[i]), "hp_norm": H})
    return rows


# ---------------------------------------------------------------------------
# Divergence experiments


def _target_spec(target: str, index: int) -> MeanSpec:
    if target == "fejer":
        return MeanSpec("norlund", index, WeightSequence("fejer"))
    if target == "partial":
        return MeanSpec("partial", index)
    if target == "riesz_log":
        return MeanSpec("riesz_log", index)
    return MeanSpec("norlund", index, WeightSequence("norlund_log"))


def monitored_index(target: str, M: int) -> int:
    """Index where the block starting at M first shows up: M+1, or M+2 for the log means
    (R_{M+1} f and L_{M+1} f still vanish)."""
    return M + 1 if target in ("fejer", "partial") else M + 2


def ex22_oracle(target: str, M: int, p: float) -> float:
    """Closed form of weak_p(t f) / ||f||_{H_p} for f = D_{M_{2k+1}} - D_{M_{2k}} under m = 2."""
    base = M ** (1 / p - 1)
    if target == "fejer":
        return base / (M + 1)
    if target == "partial":
        return base
    l = log_sum(M + 2)
    if target == "riesz_log":
        return base / ((M + 1) * l)
    return base / l


def run_divergence(radix, N, example: str, target: str, ps, k_range) -> list[dict]:
    a, b = k_range
    rows = []
    dyadic = all(v == 2 for v in radix.m[:N])
    for p in ps:
        if not 0 < p <= 1:
            raise UsageError("divergence experiments need 0 < p <= 1")
        if example == "ex22":
            if 2 * b + 1 > N:
                raise UsageError(f"ex22 with k up to {b} needs resolution >= {2 * b + 1}")
            cases = [(k, example22(k, radix, N), 2 * k) for k in range(a, b + 1)]
        else:
            if example == "ex251":
                alphas = search_alpha_sequence(p, p, radix, b + 1, N)
                family = "inv_sqrt_alpha"
            else:
                alphas = list(range(0, b + 1))
                family = "inv_Mk_pow"
            cases = []
            for k in range(a, b + 1):
                spec = MartingaleFamilySpec(radix, N, p, family, tuple(alphas[:k + 1]))
                cases.append((k, build_martingale(spec), spec.levels()[-1]))
        prev = None
        for k, f, level in cases:
            M = radix.M[level]
            idx = monitored_index(target, M)
            if idx > f.size:
                raise UsageError(f"monitored index {idx} exceeds M_N")
            value = weak_lp_norm(mean(f, _target_spec(target, idx)), p) / hp_norm(f, p)
            oracle = ex22_oracle(target, M, p) if example == "ex22" and dyadic else math.nan
            growth = value / prev if prev else math.nan
            rows.append({"p": p, "k": k, "level": level, "index": idx, "ratio": value,
                         "oracle": oracle, "growth": growth})
            prev = value
    return sorted(rows, key=lambda r: (r["p"], r["k"]))


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--radix", required=True, help="e.g. 2^10 or 2,3,4,3,2")
    common.add_argument("--resolution", type=int, required=True, help="N, the number of digits")
    common.add_argument("--p", help="comma-separated p values (fractions like 1/3 allowed)")
    common.add_argument("--family", help="fejer|cesaro:<a>|riesz:<a>|nlog|kappa:<a>:<b>|custom:<file>")
    common.add_argument("--max-n", type=int, dest="max_n")
    common.add_argument("--k-range", dest="k_range")
    common.add_argument("--tol", action="append", default=[], help="name=value, repeatable")
    common.add_argument("--format", choices=("csv", "json"), default="csv")
    common.add_argument("--out", help="write output here instead of stdout")
    common.add_argument("--seed", type=int, default=0)

    parser = argparse.ArgumentParser(prog="vilenkin", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    v = sub.add_parser("verify", parents=[common], help="run the invariant suites")
    v.add_argument("--suite", action="append", choices=SUITES, help="restrict to these suites")
    t = sub.add_parser("table", parents=[common], help="emit a per-index table")
    t.add_argument("kind", choices=TABLE_KINDS)
    t.add_argument("--variation-start", type=int, choices=(0, 1), default=0, dest="variation_start")
    t.add_argument("--martingale", help="martingale spec JSON for hardy_sums")
    d = sub.add_parser("divergence", parents=[common], help="run a counterexample experiment")
    d.add_argument("example", choices=EXAMPLES)
    d.add_argument("--target", choices=TARGETS, default="fejer")
    return parser


def _emit(text: str, out: str | None):
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        radix = RadixSequence.parse(args.radix)
        N = args.resolution
        _check_resolution(radix, N)
        if radix.M[N] > MAX_ORDER:
            raise UsageError("M_N too large")
        if args.max_n is not None and args.max_n < 1:
            raise UsageError("--max-n must be positive")
        tolerances = _parse_tolerances(args.tol)
        family = _parse_family(args.family)
        if args.command == "verify":
            results = run_verify(radix, N, tolerances, tuple(args.suite or SUITES), args.seed)
            rows = [r.as_dict() for r in results]
            _emit(render(rows, args.format), args.out)
            return 0 if all(r.passed for r in results) else 1
        if args.command == "table":
            if args.kind == "lebesgue":
                rows = table_lebesgue(radix, N, args)
            elif args.kind == "kernel_norms":
                rows = table_kernel_norms(radix, N, args, family)
            elif args.kind == "means":
                rows = table_means(radix, N, args, family)
            else:
                rows = table_hardy_sums(radix, N, args)
            _emit(render(rows, args.format), args.out)
            return 0
        default_k = {"ex22": "1..3", "ex251": "0..1", "ex261": "0..2"}[args.example]
        k_range = _parse_k_range(args.k_range or default_k)
        ps = _parse_p_list(args.p, (1 / 3,))
        rows = run_divergence(radix, N, args.example, args.target, ps, k_range)
        _emit(render(rows, args.format), args.out)
        return 0
    except (VilenkinError, OSError) as exc:
        print(f"vilenkin: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
