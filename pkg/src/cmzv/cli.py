"""Command-line front end.

Reports are JSON documents with exact coefficients rendered as rational
strings over the zeta_N power basis and numeric values as decimal strings
with their error bound.  Output is deterministic: fixed orderings, no
timestamps.  With --out DIR the report is also written to report.json, the
per-case table to results.csv, and a residual chart to residuals.png.

Exit codes: 0 success / all verifications pass; 1 verification failure;
2 usage or parse error; 3 requested precision unreachable.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys

from mpmath import mp, mpf

from . import cache as cache_mod
from . import numerics
from .cyclotomic import Index, is_admissible
from .numerics import (
    EvalConfig,
    NonAdmissibleIndex,
    PrecisionUnreachable,
    eval_cmzv,
    eval_symbolic,
    pi_i,
)
from .regularization import (
    SymbolicValue,
    shuffle_reg_const,
    stuffle_reg_const,
)
from .relations import RelationProblem, find_relation, spanning_test
from .symmetric_values import Alpha, csmzv_sh_expand, csmzv_st_expand
from .verify import SUITES


class IndexSyntaxError(ValueError):
    def __init__(self, message: str, text: str, pos: int):
        super().__init__(message)
        self.text = text
        self.pos = pos

    def caret(self) -> str:
        return f"{self.text}\n{' ' * self.pos}^ {self.args[0]}"


class _Cursor:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def skip_ws(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def expect(self, ch: str):
        self.skip_ws()
        if self.pos >= len(self.text) or self.text[self.pos] != ch:
            raise IndexSyntaxError(f"expected '{ch}'", self.text, self.pos)
        self.pos += 1

    def peek(self) -> str:
        self.skip_ws()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def uint(self) -> tuple[int, int]:
        self.skip_ws()
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        if self.pos == start:
            raise IndexSyntaxError("expected an unsigned integer", self.text, start)
        return int(self.text[start:self.pos]), start

    def intlist(self) -> list[tuple[int, int]]:
        out = []
        if self.peek() == "}":
            return out
        out.append(self.uint())
        while self.peek() == ",":
            self.expect(",")
            out.append(self.uint())
        return out

    def end(self):
        self.skip_ws()
        if self.pos != len(self.text):
            raise IndexSyntaxError("unexpected trailing input", self.text, self.pos)


def parse_index(text: str) -> Index:
    """Parse '({k1,...};{e1,...})@N' into an Index (whitespace-insensitive)."""
    cur = _Cursor(text)
    cur.expect("(")
    cur.expect("{")
    ks = cur.intlist()
    cur.expect("}")
    cur.expect(";")
    cur.expect("{")
    es = cur.intlist()
    cur.expect("}")
    cur.expect(")")
    cur.expect("@")
    n, npos = cur.uint()
    cur.end()
    if n == 0:
        raise IndexSyntaxError("modulus N must be positive", text, npos)
    if len(ks) != len(es):
        raise IndexSyntaxError(
            f"k-list has {len(ks)} entries but exponent list has {len(es)}", text, 0)
    for val, pos in ks:
        if val == 0:
            raise IndexSyntaxError("k entries must be >= 1", text, pos)
    return Index.build(tuple(v for v, _ in ks), tuple(v % n for v, _ in es), n)


def render_index(idx: Index) -> str:
    return idx.render()


# ---------------------------------------------------------------------------
# configuration: flags > environment > config file > defaults
# ---------------------------------------------------------------------------

_DEFAULTS = {"precision": 40, "cutoff": 10000, "accel_order": 6,
             "coeff_bound": 10 ** 6, "cache": ""}


def _load_config(path: str | None) -> dict:
    cfg = dict(_DEFAULTS)
    file_path = path or os.environ.get("CMZV_CONFIG", "")
    if file_path and os.path.exists(file_path):
        with open(file_path, "r", encoding="utf-8") as fh:
            for k, v in json.load(fh).items():
                if k in cfg:
                    cfg[k] = v
    env_map = {"precision": "CMZV_PRECISION", "cutoff": "CMZV_CUTOFF",
               "accel_order": "CMZV_ACCEL_ORDER", "coeff_bound": "CMZV_COEFF_BOUND",
               "cache": "CMZV_CACHE"}
    for key, env in env_map.items():
        if env in os.environ:
            raw = os.environ[env]
            cfg[key] = raw if key == "cache" else int(raw)
    return cfg


def _eval_config(args, conf) -> EvalConfig:
    return EvalConfig(
        precision=args.prec if args.prec else conf["precision"],
        cutoff=args.cutoff if args.cutoff else conf["cutoff"],
        accel_order=args.accel if args.accel is not None else conf["accel_order"],
    )


def _value_dict(v) -> dict:
    with mp.workdps(mp.dps):
        return {"re": mp.nstr(v.re, mp.dps), "im": mp.nstr(v.im, mp.dps),
                "err": mp.nstr(v.err, 5)}


def _emit(report: dict, args) -> None:
    text = json.dumps(report, sort_keys=True, indent=2)
    print(text)
    out_dir = getattr(args, "out", None)
    if not out_dir:
        return
    os.makedirs(out_dir, exist_ok=True)
    with open(os.path.join(out_dir, "report.json"), "w", encoding="utf-8") as fh:
        fh.write(text + "\n")
    rows = report.get("results", [])
    with open(os.path.join(out_dir, "results.csv"), "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["case", "status", "residual"])
        for r in rows:
            writer.writerow([r.get("case", r.get("atom", "")), r.get("status", ""),
                             r.get("residual", "")])
    _render_figure(report, rows, os.path.join(out_dir, "residuals.png"))


def _render_figure(report: dict, rows: list, path: str) -> None:
    if not rows:
        return
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    labels = [r.get("case", r.get("atom", "?")) for r in rows]
    vals = []
    for r in rows:
        try:
            x = float(mpf(r.get("residual", "0")))
        except (ValueError, TypeError):
            x = float("nan")
        vals.append(max(x, 1e-300))
    colors = ["tab:blue" if r.get("status") == "ok" else "tab:red" for r in rows]
    fig, ax = plt.subplots(figsize=(max(6, 0.35 * len(rows)), 4))
    ax.bar(range(len(vals)), vals, color=colors)
    ax.set_yscale("log")
    ax.set_ylabel("residual")
    ax.set_title(report.get("command", "report"))
    ax.set_xticks(range(len(labels)))
    ax.set_xticklabels(labels, rotation=90, fontsize=6)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def _symbolic_dict(v: SymbolicValue) -> list[dict]:
    out = []
    for (s, atoms), c in v.items():
        out.append({"pi_power": s, "atoms": [a.render() for a in atoms],
                    "coefficient": str(c)})
    return out


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------


def _cmd_eval(args, conf) -> int:
    cfg = _eval_config(args, conf)
    idx = parse_index(args.expr)
    if not is_admissible(idx):
        print(f"error: index {idx.render()} is not admissible "
              f"(use 'regularize' for divergent indices)", file=sys.stderr)
        return 2
    with mp.workdps(cfg.precision + 10):
        v = eval_cmzv(idx, cfg)
        report = {"command": "eval", "config": _config_dict(cfg),
                  "results": [{"case": idx.render(), "status": "ok",
                               "value": _value_dict(v)}]}
    _emit(report, args)
    return 0


def _cmd_regularize(args, conf) -> int:
    cfg = _eval_config(args, conf)
    idx = parse_index(args.expr)
    sh = shuffle_reg_const(idx)
    st = stuffle_reg_const(idx)
    report = {"command": "regularize", "config": _config_dict(cfg),
              "results": [{"case": idx.render(), "status": "ok",
                           "shuffle_regularized": _symbolic_dict(sh),
                           "stuffle_regularized": _symbolic_dict(st)}]}
    _emit(report, args)
    return 0


def _cmd_csmzv(args, conf) -> int:
    cfg = _eval_config(args, conf)
    idx = parse_index(args.expr)
    alpha = Alpha(args.alpha, idx.modulus)
    sv = csmzv_st_expand(idx, alpha) if args.star else csmzv_sh_expand(idx, alpha)
    row = {"case": idx.render(), "status": "ok", "alpha": alpha.value,
           "variant": "star" if args.star else "shuffle",
           "expansion": _symbolic_dict(sv)}
    if args.eval:
        with mp.workdps(cfg.precision + 10):
            row["value"] = _value_dict(eval_symbolic(sv, cfg))
    report = {"command": "csmzv", "config": _config_dict(cfg), "results": [row]}
    _emit(report, args)
    return 0


def _cmd_verify(args, conf) -> int:
    cfg = _eval_config(args, conf)
    suite = SUITES[args.suite]
    results = suite(args.N, args.max_weight, cfg,
                    max_depth=args.max_depth, coeff_bound=conf["coeff_bound"])
    rows = [r.to_dict() for r in results]
    failures = sum(1 for r in rows if r["status"] != "ok")
    report = {"command": f"verify {args.suite}", "config": _config_dict(cfg),
              "N": args.N, "max_weight": args.max_weight,
              "results": rows, "checked": len(rows), "failures": failures}
    _emit(report, args)
    return 0 if failures == 0 else 1


def _cmd_span(args, conf) -> int:
    cfg = _eval_config(args, conf)
    alpha = Alpha(args.alpha, args.N)
    rep = spanning_test(args.N, alpha, args.weight, cfg,
                        coeff_bound=conf["coeff_bound"])
    d = rep.to_dict()
    d["command"] = "span"
    d["config"] = _config_dict(cfg)
    d["results"] = d.pop("rows")
    _emit(d, args)
    return 0 if rep.failures == 0 else 1


def _cmd_relations(args, conf) -> int:
    cfg = _eval_config(args, conf)
    with open(args.file, "r", encoding="utf-8") as fh:
        spec = json.load(fh)
    n = int(spec.get("N", 1))
    symbolics: list[SymbolicValue] = []
    labels: list[str] = []
    for entry in spec["values"]:
        if "index" in entry:
            idx = parse_index(entry["index"])
            sv = SymbolicValue.from_atom(idx, pi_power=int(entry.get("pi_power", 0)))
            labels.append(entry["index"])
        else:
            sv = SymbolicValue.pi_power(n, int(entry["pi_power"]))
            labels.append(f"(pi*i)^{entry['pi_power']}")
        symbolics.append(sv)
    bound = args.bound or conf["coeff_bound"]
    with mp.workdps(cfg.precision + 10):
        values = [eval_symbolic(s, cfg) for s in symbolics]
        problem = RelationProblem(values=values, labels=labels, modulus=n,
                                  coeff_bound=bound, symbolics=symbolics)
        result = find_relation(problem, precision=cfg.precision,
                               cutoff=cfg.cutoff, accel_order=cfg.accel_order)
    if result is None:
        rows = [{"case": " , ".join(labels), "status": "none",
                 "residual": "-",
                 "note": "no relation within bounds at this precision (heuristic)"}]
    else:
        rows = [{"case": " , ".join(labels), "status": "ok",
                 "coefficients": [str(c) for c in result.coeffs],
                 "residual": mp.nstr(result.residual, 5),
                 "verified_dps": result.verified_dps}]
    report = {"command": "relations", "config": _config_dict(cfg),
              "results": rows}
    _emit(report, args)
    return 0


def _cmd_cache(args, conf) -> int:
    path = conf["cache"] or os.path.join(os.path.expanduser("~"), ".cmzv-cache.jsonl")
    vc = cache_mod.ValueCache(path)
    if args.action == "stats":
        report = {"command": "cache stats", "results": [vc.stats()]}
    else:
        removed = vc.clear()
        report = {"command": "cache clear", "results": [{"removed": removed}]}
    _emit(report, args)
    return 0


def _config_dict(cfg: EvalConfig) -> dict:
    return {"precision": cfg.precision, "cutoff": cfg.cutoff,
            "accel_order": cfg.accel_order}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="path to a JSON config file")
    common.add_argument("--cache", help="path to the JSON-lines value cache")
    common.add_argument("--prec", type=int, help="target precision (digits)")
    common.add_argument("--cutoff", type=int, help="outer summation cutoff M")
    common.add_argument("--accel", type=int, help="tail acceleration depth J")
    common.add_argument("--out", help="directory for report.json, results.csv, residuals.png")

    p = argparse.ArgumentParser(
        prog="cmzv",
        description="cyclotomic multiple zeta values: evaluation, "
                    "regularization, symmetric values, verification, spanning")
    sub = p.add_subparsers(dest="cmd", required=True)

    q = sub.add_parser("eval", parents=[common], help="evaluate an admissible CMZV")
    q.add_argument("expr")
    q.set_defaults(func=_cmd_eval)

    q = sub.add_parser("regularize", parents=[common],
                       help="shuffle/harmonic regularized forms")
    q.add_argument("expr")
    q.set_defaults(func=_cmd_regularize)

    q = sub.add_parser("csmzv", parents=[common], help="symmetric value expansion")
    q.add_argument("expr")
    q.add_argument("--alpha", type=int, required=True)
    q.add_argument("--star", action="store_true", help="harmonic-regularized variant")
    q.add_argument("--eval", action="store_true", help="also evaluate numerically")
    q.set_defaults(func=_cmd_csmzv)

    q = sub.add_parser("verify", parents=[common],
                       help="run an identity verification suite")
    q.add_argument("suite", choices=sorted(SUITES))
    q.add_argument("--N", type=int, required=True)
    q.add_argument("--max-weight", type=int, required=True)
    q.add_argument("--max-depth", type=int, default=3)
    q.set_defaults(func=_cmd_verify)

    q = sub.add_parser("span", parents=[common], help="spanning test at one weight")
    q.add_argument("--N", type=int, required=True)
    q.add_argument("--alpha", type=int, required=True)
    q.add_argument("--weight", type=int, required=True)
    q.set_defaults(func=_cmd_span)

    q = sub.add_parser("relations", parents=[common],
                       help="integer-relation search from a file")
    q.add_argument("--file", required=True)
    q.add_argument("--bound", type=int)
    q.set_defaults(func=_cmd_relations)

    q = sub.add_parser("cache", parents=[common], help="value cache maintenance")
    q.add_argument("action", choices=["clear", "stats"])
    q.set_defaults(func=_cmd_cache)
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    conf = _load_config(args.config)
    if args.cache:
        conf["cache"] = args.cache
    if conf["cache"] and args.cmd != "cache":
        numerics.set_external_cache(cache_mod.ValueCache(conf["cache"]))
    try:
        return args.func(args, conf)
    except IndexSyntaxError as exc:
        print(f"parse error:\n{exc.caret()}", file=sys.stderr)
        return 2
    except PrecisionUnreachable as exc:
        print(f"precision unreachable: {exc}", file=sys.stderr)
        return 3
    except NonAdmissibleIndex as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (ValueError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
