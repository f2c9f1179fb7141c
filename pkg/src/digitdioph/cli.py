"""Command-line front end.

Exit codes: 0 success, 1 hypothesis or domain error, 2 resource error,
3 verification failure.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
import time
from fractions import Fraction

from . import budgets
from .arith import LogRatio
from .cantor import MissingDigitSet, grid_count
from .dimension import dim_report, measure_verdict
from .errors import CapabilityError, DomainError, HypothesisError, ResourceError
from .gamma import gamma_bruteforce, gamma_endpoint, gamma_residue_dp, proof_sets
from .params import MultClass, build_digit_profile, build_param_profile, classify
from .psi import (
    FloatOnly,
    eventually_below_threshold,
    parse_psi,
    psi_json,
)
from . import verify as V


def _canon(obj):
    """Round floats to 12 significant digits and turn rationals into num/den pairs."""
    if isinstance(obj, float):
        return float(f"{obj:.12g}")
    if isinstance(obj, Fraction):
        return {"num": obj.numerator, "den": obj.denominator}
    if isinstance(obj, dict):
        return {str(k): _canon(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_canon(v) for v in obj]
    return obj


def dumps(obj) -> str:
    return json.dumps(_canon(obj), sort_keys=True, indent=2)


def _digits(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip() != ""]
    except ValueError:
        raise DomainError(f"cannot parse digit list {text!r}") from None


def _s_value(text: str, b: int, D):
    if text == "gamma":
        return LogRatio(1, len(set(D)), b)
    if "log" in text:
        return LogRatio.parse(text)
    try:
        return Fraction(text)
    except ValueError:
        raise DomainError(f"cannot parse s {text!r}") from None


def _threshold_echo(prof, psi) -> dict:
    if isinstance(psi, FloatOnly) or prof.mult_class is MultClass.INDEPENDENT_DIFFERENT_PRIMES:
        return {}
    try:
        ok, n0 = eventually_below_threshold(psi, prof.b, prof.alpha2)
    except CapabilityError:
        return {}
    return {"below_threshold": ok, "N0": n0}


def do_profile(a) -> dict:
    start = time.perf_counter()
    prof = build_param_profile(a.b, a.t)
    out = {"inputs": {"b": a.b, "t": a.t}, "profile": prof.to_json()}
    D = _digits(a.D) if a.D else None
    dprof = build_digit_profile(prof, D if D else [0, a.b - 1])
    if D:
        out["inputs"]["D"] = D
        out["digits"] = dprof.to_json()
    else:
        out["D1"] = None if dprof.D1 is None else list(dprof.D1)
        out["D2"] = None if dprof.D2 is None else list(dprof.D2)
        out["Dstar"] = None if dprof.Dstar is None else list(dprof.Dstar)
    out["_elapsed_ms"] = (time.perf_counter() - start) * 1000
    return out


def do_gamma(a) -> dict:
    D = _digits(a.D)
    psi = parse_psi(a.psi)
    S = MissingDigitSet(a.b, tuple(D))
    ns = [a.n] if a.n is not None else list(range(1, a.n_max + 1))
    inputs = {"b": a.b, "t": a.t, "D": D, "psi": psi_json(psi), "method": a.method}
    rows = []
    prof = dprof = None
    if a.method != "brute" or classify(a.b, a.t) is not MultClass.INDEPENDENT_DIFFERENT_PRIMES:
        prof = build_param_profile(a.b, a.t)
        dprof = build_digit_profile(prof, D)
        inputs.update(_threshold_echo(prof, psi))
    for n in ns:
        if a.method == "brute":
            res = gamma_bruteforce(S, a.t, psi, n, workers=a.threads)
        elif a.method == "endpoint":
            res = gamma_endpoint(S, a.t, psi, n, prof, dprof)
        else:
            res = gamma_residue_dp(S, a.t, psi, n, prof, members=a.members)
        row = res.to_json(with_members=a.members or a.method != "dp")
        if prof is not None:
            ps_ = proof_sets(prof, n)
            row["m0"], row["M"] = ps_.m0, ps_.M
            head = prof.alpha1 * n
            if head.denominator == 1:
                row["ratio_to_b_alpha1_gamma_n"] = Fraction(res.count, len(set(D)) ** int(head))
        rows.append(row)
    return {"inputs": inputs, "results": rows}


def _hypotheses(prof, dprof, inputs) -> list[dict]:
    flags = [
        ("same_prime_support", prof.mult_class is not MultClass.INDEPENDENT_DIFFERENT_PRIMES),
        ("multiplicatively_dependent", prof.mult_class is MultClass.DEPENDENT),
        ("D_subset_Dstar", bool(dprof.d_subset_dstar)),
        ("D_has_extreme_digit", dprof.has_extreme_digit),
        ("psi_eventually_below_threshold", inputs.get("below_threshold")),
    ]
    return [{"name": k, "holds": v} for k, v in flags]


def do_verdict(a) -> dict:
    D = _digits(a.D)
    psi = parse_psi(a.psi)
    prof = build_param_profile(a.b, a.t)
    dprof = build_digit_profile(prof, D)
    s = _s_value(a.s, a.b, D)
    inputs = {"b": a.b, "t": a.t, "D": D, "psi": psi_json(psi), "s": a.s}
    inputs.update(_threshold_echo(prof, psi))
    return {"inputs": inputs, "hypotheses": _hypotheses(prof, dprof, inputs),
            "verdict": measure_verdict(prof, dprof, psi, s).to_json()}


def do_dim(a) -> dict:
    D = _digits(a.D)
    psi = parse_psi(a.psi)
    prof = build_param_profile(a.b, a.t)
    dprof = build_digit_profile(prof, D)
    inputs = {"b": a.b, "t": a.t, "D": D, "psi": psi_json(psi)}
    inputs.update(_threshold_echo(prof, psi))
    return {"inputs": inputs, "hypotheses": _hypotheses(prof, dprof, inputs),
            "report": dim_report(prof, dprof, psi).to_json()}


def do_boxcount(a) -> dict:
    D = _digits(a.D)
    S = MissingDigitSet(a.b, tuple(D))
    rows = [{"n": n, "grid_count": grid_count(S, Fraction(1, a.t**n))}
            for n in range(0, a.n_max + 1)]
    return {"inputs": {"b": a.b, "t": a.t, "D": D, "n_max": a.n_max}, "results": rows}


def do_verify(a) -> dict:
    c = a.check
    if c == "divisibility":
        rep = V.check_divisibility(a.b, a.t, a.n_max)
    elif c == "forced-digits":
        rep = V.check_forced_digits(a.b, a.t, a.n_max)
    elif c == "random-divisibility":
        rep = V.CheckReport("random_divisibility")
        for b, t in V.random_same_prime_pairs(a.pairs, seed=a.seed):
            sub = V.check_divisibility(b, t, a.n_max)
            rep.instances_tested += sub.instances_tested
            rep.failures += [dict(f, b=b, t=t) for f in sub.failures]
    else:
        D = _digits(a.D)
        psi = parse_psi(a.psi)
        fn = {"gamma-chain": V.check_gamma_chain, "covering-bound": V.check_covering_bound,
              "wb-identity": V.check_wb_alpha1_identity,
              "emptiness": V.check_emptiness}[c]
        rep = fn(a.b, a.t, D, psi, a.n_max)
    inputs = {k: v for k, v in vars(a).items()
              if v is not None and k not in ("func", "format", "output", "command")
              and not k.startswith("budget_")}
    if "D" in inputs:
        inputs["D"] = _digits(inputs["D"])
    out = {"inputs": inputs,
           "report": rep.to_json()}
    out["_failed"] = not rep.passed
    return out


DISPATCH = {"profile": do_profile, "gamma": do_gamma, "verdict": do_verdict,
            "dim": do_dim, "boxcount": do_boxcount, "verify": do_verify}


def do_sweep(a) -> tuple[str, bool]:
    """Run each entry of a JSON spec file and emit one CSV row per run."""
    with open(a.spec) as fh:
        spec = json.load(fh)
    runs = spec["runs"] if isinstance(spec, dict) else spec
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["run", "subcommand", "status", "result"])
    failed = False
    for i, run in enumerate(runs):
        argv = [str(run["subcommand"])] + [str(x) for x in run.get("args", [])]
        for key, val in sorted(run.get("options", {}).items()):
            flag = "--" + key.replace("_", "-")
            if val is True:
                argv.append(flag)
            else:
                argv += [flag, str(val)]
        try:
            ns = build_parser().parse_args(argv)
            res = DISPATCH[ns.command](ns)
            res.pop("_elapsed_ms", None)
            status = "failed" if res.pop("_failed", False) else "ok"
            failed |= status == "failed"
        except (DomainError, HypothesisError, ResourceError, CapabilityError) as exc:
            res, status = {"error": str(exc)}, type(exc).__name__
        w.writerow([i, run["subcommand"], status,
                    json.dumps(_canon(res), sort_keys=True, separators=(",", ":"))])
    return buf.getvalue(), failed


def _cell(v) -> str:
    """One flat cell: rationals as num/den, containers as compact JSON."""
    if isinstance(v, Fraction):
        return str(v)
    if isinstance(v, (list, dict)):
        return json.dumps(_canon(v), sort_keys=True, separators=(",", ":"))
    if v is None:
        return ""
    return str(_canon(v))


def _columns(rows, flat_only=False) -> list[str]:
    keys = sorted({k for r in rows for k in r
                   if not (flat_only and isinstance(r[k], (list, dict)))})
    return sorted(keys, key=lambda k: (k != "n", k))


def _table(result: dict) -> str:
    rows = result.get("results")
    if not rows:
        return dumps(result) + "\n"
    keys = _columns(rows, flat_only=True)
    lines = ["\t".join(keys)]
    for r in rows:
        lines.append("\t".join(_cell(r.get(k)) for k in keys))
    return "\n".join(lines) + "\n"


def _csv(result: dict) -> str:
    rows = result.get("results") or [result.get("report") or result]
    buf = io.StringIO()
    keys = _columns(rows)
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(keys)
    for r in rows:
        w.writerow([_cell(r.get(k)) for k in keys])
    return buf.getvalue()


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="digitdioph", description=__doc__.splitlines()[0])
    p.add_argument("--budget-enum", type=int)
    p.add_argument("--budget-residue", type=int)
    p.add_argument("--budget-bits", type=int)
    p.add_argument("--format", choices=["json", "csv", "table"], default="json")
    p.add_argument("--output", help="write to this path instead of stdout")
    sub = p.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("profile", help="valuation ratios, b*, D1, D2, D*")
    sp.add_argument("b", type=int)
    sp.add_argument("t", type=int)
    sp.add_argument("D", nargs="?")

    def base_args(sp, digits=True):
        sp.add_argument("b", type=int)
        sp.add_argument("t", type=int)
        if digits:
            sp.add_argument("D")

    sp = sub.add_parser("gamma", help="hit set Gamma_n")
    base_args(sp)
    sp.add_argument("--psi", required=True)
    g = sp.add_mutually_exclusive_group(required=True)
    g.add_argument("--n", type=int)
    g.add_argument("--n-max", type=int)
    sp.add_argument("--method", choices=["brute", "endpoint", "dp"], default="brute")
    sp.add_argument("--members", action="store_true", help="reconstruct members (dp)")
    sp.add_argument("--threads", type=int, default=1)

    sp = sub.add_parser("verdict", help="measure verdict for H^s")
    base_args(sp)
    sp.add_argument("--psi", required=True)
    sp.add_argument("--s", required=True, help="rational, log<a>/log<d>, or 'gamma'")

    sp = sub.add_parser("dim", help="dimension report")
    base_args(sp)
    sp.add_argument("--psi", required=True)

    sp = sub.add_parser("boxcount", help="grid counts of C(b,D) at cell t^-n")
    base_args(sp)
    sp.add_argument("--n-max", type=int, required=True)

    sp = sub.add_parser("verify", help="lemma checks")
    vs = sp.add_subparsers(dest="check", required=True)
    for name in ("divisibility", "forced-digits"):
        c = vs.add_parser(name)
        base_args(c, digits=False)
        c.add_argument("--n-max", type=int, required=True)
    for name in ("gamma-chain", "covering-bound", "wb-identity", "emptiness"):
        c = vs.add_parser(name)
        base_args(c)
        c.add_argument("--psi", required=True)
        c.add_argument("--n-max", type=int, required=True)
    c = vs.add_parser("random-divisibility")
    c.add_argument("--pairs", type=int, default=50)
    c.add_argument("--n-max", type=int, default=30)
    c.add_argument("--seed", type=int, default=0)

    sp = sub.add_parser("sweep", help="batch runs from a JSON spec, CSV output")
    sp.add_argument("--spec", required=True)
    return p


def run(argv=None) -> int:
    parser = build_parser()
    try:
        a = parser.parse_args(argv)
    except SystemExit as exc:
        return 1 if exc.code else 0
    cur = budgets.DEFAULT
    budgets.configure(budgets.Budgets(
        enum=a.budget_enum or cur.enum,
        residue=a.budget_residue or cur.residue,
        bits=a.budget_bits or cur.bits,
    ))
    try:
        if a.command == "sweep":
            text, failed = do_sweep(a)
        else:
            result = DISPATCH[a.command](a)
            result.pop("_elapsed_ms", None)
            failed = result.pop("_failed", False)
            if a.format == "csv":
                text = _csv(result)
            elif a.format == "table":
                text = _table(result)
            else:
                text = dumps(result) + "\n"
    except (DomainError, HypothesisError, CapabilityError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except ResourceError as exc:
        print(f"resource limit: {exc}", file=sys.stderr)
        return 2
    finally:
        budgets.configure(cur)
    if a.output:
        with open(a.output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 3 if failed else 0


def main() -> None:
    sys.exit(run())
