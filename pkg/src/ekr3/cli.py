"""``ekr3`` command line: one subcommand per toolkit area.

Exit status: 0 on success, 1 when a verification fails or a table is
incomplete, 2 on usage errors.
"""
from __future__ import annotations

import argparse
import logging
import sys
from fractions import Fraction
from pathlib import Path
from typing import Any, Optional, Sequence

from . import asymptotics, constructions, counting, measure, search
from .constructions import ConstructionId
from .setcore import Family, FamilyError, IntersectionSpec
from .tables import SearchCache, SearchKey, approx, csv_text, dumps, emit_table

log = logging.getLogger("ekr3")

FAMILIES = ("A", "B", "Bi", "C", "Bmeasure")


class UsageError(Exception):
    pass


def _fraction(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"expected a rational like 3/5, got {text!r}")


def _int_list(text: str) -> list[int]:
    try:
        return [int(tok) for tok in text.replace(",", " ").split()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected integers, got {text!r}")


def _grid(text: str) -> list[tuple[int, int]]:
    out = []
    for item in text.replace(";", " ").replace(",", " ").split():
        try:
            n, k = item.split(":")
            out.append((int(n), int(k)))
        except ValueError:
            raise argparse.ArgumentTypeError(f"grid points look like n:k, got {item!r}")
    return out


class Runner:
    def __init__(self, args: argparse.Namespace, argv: Sequence[str]):
        self.args = args
        self.argv = list(argv)
        self.out = sys.stdout

    def emit(self, record: Any) -> None:
        self.out.write(dumps(record))

    def table(
        self, name: str, rows: list[dict[str, Any]], columns: Sequence[str], params: dict[str, Any]
    ) -> None:
        if self.args.out:
            for path in emit_table(Path(self.args.out), name, rows, columns, self.argv, params):
                log.info("wrote %s", path)
        if self.args.format == "csv":
            self.out.write(csv_text(rows, columns))
        else:
            self.out.write(dumps({"columns": list(columns), "rows": rows}))


# -- search with cache -------------------------------------------------------------


def _valid_cached(rec: Any, witnesses: int) -> bool:
    if not isinstance(rec, dict):
        return False
    if rec.get("status") not in (search.EXACT, search.LOWER_BOUND):
        return False
    if not str(rec.get("value", "")).isdigit():
        return False
    ws = rec.get("witnesses")
    if not isinstance(ws, list):
        return False
    if rec["value"] != "0" and len(ws) < min(witnesses, 1):
        return False
    if witnesses > 1 and len(ws) < witnesses:
        return False
    try:
        for w in ws:
            Family.from_text(w)
    except (FamilyError, ValueError):
        return False
    return True


def cached_search(
    key: SearchKey,
    budget: search.SearchBudget,
    witnesses: int = 1,
    cache: Optional[SearchCache] = None,
) -> dict[str, Any]:
    if cache is not None:
        hit = cache.get(key)
        if hit is not None:
            if _valid_cached(hit, witnesses):
                hit = dict(hit)
                hit["witnesses"] = hit["witnesses"][: max(witnesses, 0)]
                return hit
            log.warning("ignoring malformed cache entry for %s", key.text())
    spec = IntersectionSpec(key.r, key.t)
    if key.shifted:
        res = search.shifted_lower_bound(key.n, key.k, spec, budget, nontrivial=key.nontrivial)
    else:
        res = search.max_family(key.n, key.k, spec, key.nontrivial, budget, witnesses)
    out = res.to_dict()
    if cache is not None and res.status != search.INCOMPLETE:
        cache.put(key, out)
    return out


# -- subcommands -------------------------------------------------------------------


def _cid(args: argparse.Namespace) -> ConstructionId:
    if args.family == "Bi" and args.i is None:
        raise UsageError("--family Bi needs --i")
    k = 0 if args.family == "Bmeasure" else args.k
    if args.family != "Bmeasure" and k is None:
        raise UsageError(f"--family {args.family} needs --k")
    return ConstructionId(args.family, args.n, k, args.i)


def cmd_construct(r: Runner) -> int:
    fam = constructions.build(_cid(r.args))
    text = fam.to_text()
    if r.args.output:
        Path(r.args.output).write_text(text)
    else:
        r.out.write(text)
    return 0


def cmd_count(r: Runner) -> int:
    a = r.args
    if a.density:
        rows = []
        for row in counting.density_trend(a.density, a.p, a.n_list):
            limit = a.p**2 if a.density == "A" else measure.f_measure(a.p)
            rows.append(
                {
                    "n": row["n"],
                    "k": row["k"],
                    "density": float(row["density"]),
                    "limit": float(limit),
                    "gap": float(abs(row["density"] - limit)),
                }
            )
        r.table(
            f"density_{a.density}", rows, ["n", "k", "density", "limit", "gap"],
            {"family": a.density, "p": str(a.p), "n_list": a.n_list},
        )
        return 0
    if a.family is None or a.n is None:
        raise UsageError("count needs --family and --n (or --density)")
    cid = _cid(a)
    if cid.tag == "Bmeasure":
        raise UsageError("Bmeasure has no cardinality formula; use construct")
    r.emit({"family": str(cid), "n": cid.n, "k": cid.k, "value": str(counting.card(cid))})
    return 0


def cmd_classify(r: Runner) -> int:
    r.emit(counting.classify_m3(r.args.n, r.args.k))
    return 0


def cmd_search(r: Runner) -> int:
    a = r.args
    key = SearchKey(a.n, a.k, a.r, a.t, a.nontrivial, a.shifted)
    budget = search.SearchBudget(
        max_candidates=a.max_candidates, time_limit=a.time_limit, node_limit=a.node_limit
    )
    cache = None if a.no_cache else SearchCache()
    out = cached_search(key, budget, a.witnesses, cache)
    r.emit(out)
    return 1 if out["status"] == search.INCOMPLETE else 0


def cmd_measure(r: Runner) -> int:
    fam = Family.from_text(Path(r.args.family).read_text())
    value = measure.mu_p(fam, r.args.p)
    r.emit({"p": r.args.p, "members": len(fam), "value": value, "approx": approx(value)})
    return 0


def cmd_w3(r: Runner) -> int:
    p = measure.as_probability(r.args.p)
    rec: dict[str, Any] = {
        "p": p,
        "branch": measure.w3_branch(p),
        "value": measure.w3_limit(p),
        "approx": approx(measure.w3_limit(p)),
    }
    st = measure.STABILITY
    if st.p_low <= p <= st.p_high:
        rec["stability"] = {
            "gap_absolute": st.gap_absolute,
            "gap_relative": st.gap_relative,
            "bound_chain_holds": st.bound_chain_holds(p),
        }
    r.emit(rec)
    return 0


def cmd_asymptotics(r: Runner) -> int:
    a = r.args
    if a.mode == "theta":
        if a.n is None or a.p is None:
            raise UsageError("asymptotics theta needs --n and --p")
        n = a.n
        k = asymptotics.nearest_k(n, a.p)
        w = asymptotics.theta_window(n, Fraction(k, n), a.c)
        rows = []
        for j in w.members:
            if not 0 <= j <= k:
                continue
            v = asymptotics.theta_value(n, k, j)
            rows.append(
                {"n": n, "j": j, "exact": float(v.exact), "approx": v.approx, "residual": v.residual}
            )
        r.table(
            "theta", rows, ["n", "j", "exact", "approx", "residual"],
            {"n": n, "k": k, "p": str(a.p), "c": str(a.c)},
        )
        return 0
    if a.mode == "residuals":
        if a.p is None:
            raise UsageError("asymptotics residuals needs --p")
        rep = asymptotics.residual_report(a.p, a.c, a.n_list or asymptotics.RESIDUAL_N_LIST)
        rows = [vars(row) for row in rep.rows]
        r.table(
            "residuals", rows, ["n", "k", "window_size", "max_residual", "argmax_j"],
            {"p": str(a.p), "c": str(a.c), "nonmonotone_steps": rep.nonmonotone_steps},
        )
        return 0 if rep.decreasing else 1
    if a.mode == "erf-limit":
        if a.p is None:
            raise UsageError("asymptotics erf-limit needs --p")
        rep = asymptotics.erf_limit_report(a.p, a.c, a.n_list or asymptotics.ERF_LIMIT_N_LIST)
        if a.out:
            emit_table(
                Path(a.out), "erf_limit", rep.rows, ["n", "sum", "step"], r.argv,
                {"p": str(a.p), "c": str(a.c)},
            )
        r.emit(rep)
        return 0
    if a.mode == "c-bound":
        if a.n is None or a.k is None:
            raise UsageError("asymptotics c-bound needs --n and --k")
        try:
            rep = asymptotics.verify_C_lower_bound(a.n, a.k, a.delta, a.c)
        except ValueError as exc:
            raise UsageError(str(exc))
        r.emit(rep)
        return 0 if rep.ok else 1
    raise UsageError(f"unknown asymptotics mode {a.mode}")


def cmd_verify_lemmas(r: Runner) -> int:
    a = r.args
    lt = counting.verify_A_lt_B(range(4, a.k_max + 1))
    gt = counting.verify_A_gt_B(range(9, a.k_max + 1))
    rows = []
    for rep in (lt, gt):
        rows.append(
            {"lemma": rep.lemma, "passed": rep.passed, "checked": rep.checked,
             "violations": len(rep.violations), "notes": len(rep.notes)}
        )
        for v in rep.violations:
            log.error("lemma %s failed at %s", rep.lemma, v)
    r.table("lemmas", rows, ["lemma", "passed", "checked", "violations", "notes"],
            {"k_max": a.k_max})
    return 0 if lt.passed and gt.passed else 1


def cmd_verify_claims(r: Runner) -> int:
    a = r.args
    grid = a.grid if a.grid is not None else list(search.DEFAULT_GRID)
    budget = search.SearchBudget(max_candidates=a.max_candidates, time_limit=a.time_limit)
    cache = None if a.no_cache else SearchCache()
    rows = []
    for n, k in grid:
        res = cached_search(SearchKey(n, k, 3, 1, True), budget, 1, cache)
        rec = counting.classify_m3(n, k)
        if res["status"] != search.EXACT:
            agree: Optional[bool] = False
        elif rec.value is None:
            agree = None
        else:
            agree = res["value"] == str(rec.value)
        rows.append(
            {"n": n, "k": k, "status": res["status"], "search_value": res["value"],
             "regime": rec.regime,
             "classify_value": None if rec.value is None else str(rec.value),
             "agree": agree}
        )
        if agree is False:
            log.error("claim mismatch at n=%d k=%d: search %s vs %s", n, k, res["value"], rec.value)
    cols = ["n", "k", "status", "search_value", "regime", "classify_value", "agree"]
    r.table("claims", rows, cols, {"grid": [f"{n}:{k}" for n, k in grid]})
    return 1 if any(row["agree"] is False for row in rows) else 0


# -- parser ------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ekr3", description=__doc__.splitlines()[0])
    parser.add_argument("--format", choices=("json", "csv"), default="json")
    parser.add_argument("--out", help="directory for CSV/JSON tables and manifests")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("construct", help="write an extremal family in the text format")
    p.add_argument("--family", choices=FAMILIES, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int)
    p.add_argument("--i", type=int)
    p.add_argument("--output", help="file to write instead of stdout")
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser("count", help="exact cardinality or density trend")
    p.add_argument("--family", choices=FAMILIES)
    p.add_argument("--n", type=int)
    p.add_argument("--k", type=int)
    p.add_argument("--i", type=int)
    p.add_argument("--density", choices=("A", "B"))
    p.add_argument("--p", type=_fraction, default=Fraction(2, 5))
    p.add_argument("--n-list", type=_int_list, default=[25, 50, 100, 200, 400])
    p.set_defaults(func=cmd_count)

    p = sub.add_parser("classify", help="known value or bounds of M_3(n, k)")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("search", help="exact maximum family by branch and bound")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--r", type=int, default=3)
    p.add_argument("--t", type=int, default=1)
    p.add_argument("--nontrivial", action="store_true")
    p.add_argument("--shifted", action="store_true")
    p.add_argument("--time-limit", type=float, default=600.0)
    p.add_argument("--node-limit", type=int, default=50_000_000)
    p.add_argument("--max-candidates", type=int, default=70)
    p.add_argument("--witnesses", type=int, default=1)
    p.add_argument("--no-cache", action="store_true")
    p.set_defaults(func=cmd_search)

    p = sub.add_parser("measure", help="exact p-measure of a family file")
    p.add_argument("--family", required=True, help="family text file")
    p.add_argument("--p", type=_fraction, required=True)
    p.set_defaults(func=cmd_measure)

    p = sub.add_parser("w3", help="limiting maximum p-measure")
    p.add_argument("--p", type=_fraction, required=True)
    p.set_defaults(func=cmd_w3)

    p = sub.add_parser("asymptotics", help="hypergeometric window checks")
    p.add_argument("mode", choices=("theta", "residuals", "erf-limit", "c-bound"))
    p.add_argument("--p", type=_fraction)
    p.add_argument("--c", type=_fraction, default=Fraction(1))
    p.add_argument("--n", type=int)
    p.add_argument("--k", type=int)
    p.add_argument("--delta", type=_fraction, default=Fraction(1, 10))
    p.add_argument("--n-list", type=_int_list)
    p.set_defaults(func=cmd_asymptotics)

    p = sub.add_parser("verify-lemmas", help="exact A<B and A>B checks")
    p.add_argument("--k-max", type=int, default=40)
    p.set_defaults(func=cmd_verify_lemmas)

    p = sub.add_parser("verify-claims", help="search M_3 on a grid and compare")
    p.add_argument("--grid", type=_grid, help="points as 'n:k n:k ...'")
    p.add_argument("--time-limit", type=float, default=600.0)
    p.add_argument("--max-candidates", type=int, default=70)
    p.add_argument("--no-cache", action="store_true")
    p.set_defaults(func=cmd_verify_claims)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
    )
    runner = Runner(args, argv)
    try:
        return args.func(runner)
    except (UsageError, FamilyError, ValueError) as exc:
        print(f"ekr3 {args.command}: error: {exc}", file=sys.stderr)
        return 2
