"""Command-line surface.

Subcommands:
  selfsim    reproduce the induction cycle, return words, matrix and the
             self-similarity certificate for the bundled example (or --spec)
  wandering  run the blow-up pipeline and emit the certificate and gap dump
  search     enumerate induction cycles and screen their matrices
  induct     emit an induction trace for a spec
  orbit      iterate a point and report the orbit
  eval       apply the exchange (or its inverse) to one point
  spectral   exact spectral report of an integer matrix

Exit codes: 0 success, 1 mismatch or failed certificate, 2 usage error,
3 construction error.  Reports embed the settings that produced them and are
deterministic byte for byte for a fixed configuration.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from fractions import Fraction

from . import quintic
from .errors import FlipIetError
from .denjoy import (aiet_from_gaps, ergodic_probe, gap_system_build,
                     log_slope_select, verify_wandering)
from .io import (fraction_to_str, gaps_csv, induction_trace_csv, load_iet,
                 return_words_csv)
from .rauzy import cycle_matrix, rauzy_cycle_detect, rauzy_run
from .selfsim import associated_matrix, self_similarity_check, substitution_from
from .spectral import bhm_screen, perron_data
from .search import cycle_search, rauzy_graph_build


def _emit(obj, args, name):
    text = json.dumps(obj, indent=2, sort_keys=True, default=str)
    if args.out:
        os.makedirs(args.out, exist_ok=True)
        with open(os.path.join(args.out, name), "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def _write(text, args, name):
    if args.out:
        os.makedirs(args.out, exist_ok=True)
        with open(os.path.join(args.out, name), "w", encoding="utf-8") as fh:
            fh.write(text)


def _load_spec(args):
    if getattr(args, "spec", None):
        return load_iet(args.spec), False
    return quintic.bundled_iet(), True


def _config_of(args):
    keys = ("spec", "out", "n", "max_len", "gaps", "digits", "jobs", "steps",
            "x", "inverse", "no_flips")
    return {k: getattr(args, k) for k in keys if getattr(args, k, None) is not None}


def cmd_selfsim(args):
    E, bundled = _load_spec(args)
    steps = rauzy_run(E, 14) if bundled else None
    report = {"config": _config_of(args)}
    mismatches = []
    if bundled:
        trace = induction_trace_csv(steps)
        _write(trace, args, "induction_trace.csv")
        got = [(tuple(st.before), st.type_bit) for st in steps]
        got.append((tuple(steps[-1].after), None))
        for k, (sp, t) in enumerate(quintic.REFERENCE_STEPS):
            if got[k] != (sp, t):
                mismatches.append(f"trace row {k}")
        prod = cycle_matrix(steps)
        if prod != quintic.MATRIX:
            mismatches.append("matrix product")
        report["matrix"] = [list(r) for r in prod]
    cyc = rauzy_cycle_detect(E, args.max_len or 20)
    if cyc is None:
        report["cycle"] = None
        mismatches.append("no induction cycle within bound")
    else:
        report["cycle"] = {"length": len(cyc.steps),
                           "scale": cyc.scale.decimal(args.digits)
                           if hasattr(cyc.scale, "decimal") else float(cyc.scale)}
        total = E.total_length
        J = (E.origin, E.origin + total / cyc.scale)
        m, its = associated_matrix(E, J)
        _write(return_words_csv(its), args, "return_words.csv")
        if bundled:
            ref = {i: (n, w) for (i, n, w) in quintic.REFERENCE_ITINERARIES}
            for i in ref:
                if (its.exponents[i - 1], its.words[i - 1]) != ref[i]:
                    mismatches.append(f"return word {i}")
            if m != quintic.MATRIX:
                mismatches.append("associated matrix")
        ss = self_similarity_check(E, J)
        report["self_similar"] = bool(ss.ok)
        if not ss.ok:
            mismatches.append(f"self-similarity: {ss.reason}")
    report["mismatches"] = mismatches
    _emit(report, args, "selfsim_report.json")
    return 1 if mismatches else 0


def cmd_wandering(args):
    E, _bundled = _load_spec(args)
    N = args.gaps
    cyc = rauzy_cycle_detect(E, args.max_len or 20)
    if cyc is None:
        raise FlipIetError("input exchange is not self-similar within the bound")
    total = E.total_length
    J = (E.origin, E.origin + total / cyc.scale)
    m, its = associated_matrix(E, J)
    sigma = substitution_from(its)
    verdict = bhm_screen(m)
    sd = perron_data(m)
    spectral_report = {
        "char_poly": list(sd.char_poly.coeffs),
        "factors": [{"coeffs": list(f.coeffs), "multiplicity": mult}
                    for f, mult in sd.factors],
        "roots": [r.decimal(args.digits) for r, _ in sd.real_roots],
        "perron_vector": [v.decimal(args.digits) for v in sd.perron[1]],
        "verdict": verdict.reason,
    }
    if not verdict.qualifies:
        report = {"config": _config_of(args), "spectral": spectral_report,
                  "qualifies": False}
        _emit(report, args, "wandering_certificate.json")
        return 1
    lsv = log_slope_select(m, verdict.theta2, sd.perron[1], sigma)
    gs = gap_system_build(E, sigma, lsv, N)
    T = aiet_from_gaps(gs)
    kappa_target = math.log(float(verdict.theta2)) / math.log(float(verdict.theta1))
    cert = verify_wandering(gs, T, E, kappa_target=kappa_target)
    probe = ergodic_probe(E, 5, max(args.probe_steps, 10 ** 4),
                          reference=[float(v) for v in E.lengths],
                          gap_system=gs)
    _write(gaps_csv(gs), args, "gaps.csv")
    report = {
        "config": _config_of(args),
        "spectral": spectral_report,
        "qualifies": True,
        "blowup_address": list(lsv.address),
        "sign_choice": lsv.sign_choice,
        "log_slopes": [float(v) for v in lsv.signed_float],
        "tail_estimate": gs.tail_estimate,
        "certificate": {
            "disjoint": cert.disjoint,
            "max_overlap": cert.max_overlap,
            "orbit_points_distinct": cert.orbit_points_distinct,
            "affine_defect": cert.affine_defect,
            "affine_ok": cert.affine_ok,
            "semiconjugacy_defect": cert.semiconjugacy_defect,
            "semiconjugacy_ok": cert.semiconjugacy_ok,
            "density": cert.density,
            "density_ok": cert.density_ok,
            "forward_density": cert.forward_density,
            "backward_density": cert.backward_density,
            "two_sided_density": cert.two_sided_density,
            "birkhoff_kappa": list(cert.birkhoff_kappa),
            "kappa_ok": cert.kappa_ok,
            "kappa_target": kappa_target,
            "tolerances": cert.tolerances,
            "ok": cert.ok,
        },
        "ergodic_probe": {
            "steps": probe.steps,
            "max_deviation_from_lengths": probe.max_deviation,
            "cross_seed_spread": probe.spread,
            "retries": probe.retries,
            "largest_gap_time_fraction": probe.gap_time_fraction,
            "largest_gap_mass": probe.gap_mass,
        },
    }
    if N < 100:
        report["certificate"]["note"] = ("window too small for the density "
                                         "checks to be conclusive")
    _emit(report, args, "wandering_certificate.json")
    return 0 if cert.ok and cert.kappa_ok else 1


def cmd_search(args):
    graph = rauzy_graph_build(args.n, not args.no_flips)
    result = cycle_search(graph, args.max_len, jobs=args.jobs)
    report = {
        "config": _config_of(args),
        "n": result.n,
        "require_flips": result.require_flips,
        "max_len": result.max_len,
        "nodes": result.node_count,
        "cycles_checked": result.cycles_checked,
        "qualifying": [
            {"nodes": [list(nd) for nd in c.nodes],
             "types": list(c.types),
             "product": [list(r) for r in c.product],
             "theta1": c.theta1, "theta2": c.theta2,
             "validated": c.validated,
             "validation": c.validation_reason}
            for c in result.qualifying
        ],
        "runtime_seconds": round(result.runtime, 3),
    }
    _emit(report, args, "search_report.json")
    return 0


def cmd_induct(args):
    E, _ = _load_spec(args)
    steps = rauzy_run(E, args.steps)
    _write(induction_trace_csv(steps), args, "induction_trace.csv")
    if not args.out:
        print(induction_trace_csv(steps), end="")
    return 0


def cmd_orbit(args):
    E, _ = _load_spec(args)
    Ef = E.as_float()
    seg = Ef.orbit(args.x, args.steps)
    report = {"config": _config_of(args),
              "points": [float(p) for p in seg.points],
              "word": list(seg.word),
              "terminated_at_discontinuity": seg.terminated_at_discontinuity}
    _emit(report, args, "orbit.json")
    return 0


def cmd_eval(args):
    E, _ = _load_spec(args)
    x = Fraction(args.x) if "/" in args.x else float(args.x)
    if isinstance(x, float) or E.float_mode:
        val = E.as_float().eval(float(x), inverse=args.inverse)
        print(repr(val))
    else:
        val = E.eval(x, inverse=args.inverse)
        print(val.decimal(args.digits) if hasattr(val, "decimal")
              else fraction_to_str(val))
    return 0


def cmd_spectral(args):
    if args.matrix:
        with open(args.matrix, "r", encoding="utf-8") as fh:
            m = tuple(tuple(int(v) for v in row) for row in json.load(fh))
    else:
        m = quintic.MATRIX
    sd = perron_data(m)
    verdict = bhm_screen(m)
    report = {
        "config": _config_of(args),
        "char_poly": list(sd.char_poly.coeffs),
        "factors": [{"coeffs": list(f.coeffs), "multiplicity": mult}
                    for f, mult in sd.factors],
        "roots": [r.decimal(args.digits) for r, _ in sd.real_roots][::-1],
        "perron_vector_decimal": [v.decimal(args.digits) for v in sd.perron[1]],
        "perron_vector_exact": [[fraction_to_str(c) for c in v.coords]
                                for v in sd.perron[1]],
        "verdict": verdict.reason,
    }
    _emit(report, args, "spectral_report.json")
    return 0


def build_parser():
    ap = argparse.ArgumentParser(prog="flipiet",
                                 description="interval exchanges with flips: "
                                             "exact induction, spectra, blow-ups")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, spec=True):
        if spec:
            p.add_argument("--spec", help="JSON exchange spec (default: bundled)")
        p.add_argument("--out", help="directory for report files")
        p.add_argument("--digits", type=int, default=12)
        p.add_argument("--jobs", type=int, default=1)

    p = sub.add_parser("selfsim", help="reproduce the induction cycle and certificate")
    common(p)
    p.add_argument("--max-len", type=int, default=20)
    p.set_defaults(fn=cmd_selfsim)

    p = sub.add_parser("wandering", help="blow-up pipeline and certificate")
    common(p)
    p.add_argument("--gaps", type=int, default=5000)
    p.add_argument("--max-len", type=int, default=20)
    p.add_argument("--probe-steps", type=int, default=10 ** 6)
    p.set_defaults(fn=cmd_wandering)

    p = sub.add_parser("search", help="cycle census and eigenvalue screen")
    common(p, spec=False)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--max-len", type=int, default=14)
    p.add_argument("--no-flips", action="store_true")
    p.set_defaults(fn=cmd_search)

    p = sub.add_parser("induct", help="induction trace")
    common(p)
    p.add_argument("--steps", type=int, default=14)
    p.set_defaults(fn=cmd_induct)

    p = sub.add_parser("orbit", help="orbit of a point (float arithmetic)")
    common(p)
    p.add_argument("--x", type=float, required=True)
    p.add_argument("--steps", type=int, default=100)
    p.set_defaults(fn=cmd_orbit)

    p = sub.add_parser("eval", help="apply the exchange to a point")
    common(p)
    p.add_argument("--x", required=True, help="float or exact p/q")
    p.add_argument("--inverse", action="store_true")
    p.set_defaults(fn=cmd_eval)

    p = sub.add_parser("spectral", help="exact spectral report of a matrix")
    common(p, spec=False)
    p.add_argument("--matrix", help="JSON file with an integer matrix")
    p.set_defaults(fn=cmd_spectral)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    for key in ("n", "max_len", "gaps", "digits", "jobs", "steps", "probe_steps"):
        val = getattr(args, key, None)
        if val is not None and val <= 0:
            ap.error(f"--{key.replace('_', '-')} must be positive")
    try:
        return args.fn(args)
    except FlipIetError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
