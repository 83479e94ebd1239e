"""Batch front end: instance files in, reports out.

An instance file is JSON: variable names, ambient generators (empty list
means projective space), cutting polynomials with declared degrees, the
base point as exact rationals, and flags.  The machine-readable report is
deterministic for a fixed file, seed and flags: exact rationals are
rendered as strings, and wall-clock timing goes to the log, never into the
report.  Exit codes: 0 success, 2 hypothesis failure, 3 input error,
4 internal inconsistency (certificate/classification mismatch, dumped in
full as a counterexample candidate).
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
import time
from fractions import Fraction

from .constants import (
    CompleteIntersectionInput,
    HypothesisError,
    InconsistencyError,
    classify_ci,
    lower_bound,
    seshadri_curve,
    sharpness_example,
)
from .geometry import (
    PointError,
    StabilizationError,
    cut_out_degree,
    line_scheme,
    normalize_point,
    slice_ring,
)
from .groebner import Ideal, saturate
from .oracle import (
    DEFAULT_PRIMES,
    BadReductionError,
    count_lines_mod_q,
    find_conic_mod_q,
    modular_instance,
)
from .polynomials import ParseError, PolynomialRing

logger = logging.getLogger("seshadri")

EXIT_OK = 0
EXIT_HYPOTHESIS = 2
EXIT_INPUT = 3
EXIT_INTERNAL = 4


class InputError(ValueError):
    pass


def _as_fraction_string(value):
    if isinstance(value, Fraction):
        if value.denominator == 1:
            return str(value.numerator)
        return f"{value.numerator}/{value.denominator}"
    if value == float("inf"):
        return "infinite"
    return value


def _render_value(value):
    if isinstance(value, Fraction) or value == float("inf"):
        return _as_fraction_string(value)
    if isinstance(value, (list, tuple)):
        return [_render_value(v) for v in value]
    if isinstance(value, dict):
        return {k: _render_value(v) for k, v in value.items()}
    return value


class Instance:
    """Parsed instance file: ring, ambient generators, cuts, point, flags."""

    def __init__(self, raw, path="<memory>"):
        self.raw = raw
        self.path = path
        try:
            names = list(raw["variables"])
            point = [Fraction(str(x)) for x in raw["point"]]
        except (KeyError, ValueError) as exc:
            raise InputError(f"{path}: {exc}") from exc
        if len(point) != len(names):
            raise InputError(f"{path}: point length does not match variable count")
        self.ring = PolynomialRing(tuple(names))
        self.point = tuple(point)
        try:
            self.ambient_generators = tuple(
                self.ring.parse(expr) for expr in raw.get("ambient", [])
            )
            cutting = []
            for entry in raw.get("cutting", []):
                poly = self.ring.parse(entry["expression"])
                declared = int(entry["degree"])
                if poly.total_degree() != declared:
                    raise InputError(
                        f"{path}: declared degree {declared} does not match "
                        f"{entry['expression']!r} of degree {poly.total_degree()}"
                    )
                cutting.append(poly)
        except ParseError as exc:
            raise InputError(f"{path}: {exc}") from exc
        degrees = [f.total_degree() for f in cutting]
        if degrees != sorted(degrees):
            raise InputError(f"{path}: cutting degrees must be ascending")
        self.cutting = tuple(cutting)
        self.ambient_homogeneous = bool(raw.get("ambient_homogeneous", False))
        self.primes = tuple(int(q) for q in raw.get("primes", DEFAULT_PRIMES))
        self.seed = int(raw.get("seed", 0))
        self.max_m = int(raw.get("max_m", 24))
        self.component = tuple(raw.get("component", []))

    def variety(self):
        gens = list(self.ambient_generators) + list(self.cutting)
        try:
            return normalize_point(Ideal(self.ring, gens), self.point)
        except PointError as exc:
            raise InputError(f"{self.path}: {exc}") from exc

    def ambient_variety(self):
        try:
            return normalize_point(Ideal(self.ring, self.ambient_generators), self.point)
        except PointError as exc:
            raise InputError(f"{self.path}: {exc}") from exc

    def ci_input(self, validate=False):
        if not self.cutting:
            raise InputError(f"{self.path}: this command needs cutting polynomials")
        try:
            return CompleteIntersectionInput(
                ambient=self.ambient_variety(),
                cutting=self.cutting,
                ambient_homogeneous=self.ambient_homogeneous,
                validate_smoothness=validate,
            )
        except ValueError as exc:
            raise InputError(f"{self.path}: {exc}") from exc

    def component_ideal(self, ambient):
        if not self.component:
            return None
        ring = slice_ring(ambient.ring)
        try:
            gens = [ring.parse(expr) for expr in self.component]
        except ParseError as exc:
            raise InputError(f"{self.path}: component: {exc}") from exc
        return Ideal(ring, gens)


def load_instance(path):
    try:
        with open(path, "r", encoding="utf-8") as handle:
            raw = json.load(handle)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: invalid JSON: {exc}") from exc
    return Instance(raw, path)


def _report_from_seshadri(report):
    return {
        "status": report.status,
        "epsilon": _as_fraction_string(report.epsilon) if report.epsilon is not None else None,
        "lower_bound": _as_fraction_string(report.lower_bound),
        "cut_out_degree": report.cut_out_degree,
        "line_scheme_dimension": report.line_scheme_dimension,
        "assumptions": list(report.assumptions),
    }


def _report_from_certificate(cert):
    return {
        "degree": cert.degree,
        "multiplicity": cert.multiplicity,
        "ratio": _as_fraction_string(cert.ratio),
        "generators": [str(g) for g in cert.ideal.generators],
        "trace": _render_value(cert.trace),
    }


def _hilbert_dict(data):
    return {
        "dimension": data.dimension,
        "degree": data.degree,
        "hilbert_polynomial": [_as_fraction_string(c) for c in data.hilbert_polynomial],
    }


def _cmd_bound(instance, args):
    X = instance.variety()
    _maybe_validate(X, args)
    return {"seshadri": _report_from_seshadri(lower_bound(X))}


def _cmd_fano(instance, args):
    X = instance.variety()
    _maybe_validate(X, args)
    scheme = line_scheme(X)
    return {
        "line_scheme": {
            "generators": [str(g) for g in scheme.ideal.generators],
            **_hilbert_dict(scheme.hilbert),
        }
    }


def _cmd_dp(instance, args):
    X = instance.variety()
    d = cut_out_degree(X, validate=args.validate)
    return {
        "cut_out_degree": d,
        "variety": _hilbert_dict(X.hilbert),
    }


def _cmd_classify(instance, args):
    ci = instance.ci_input(validate=args.validate)
    report = classify_ci(ci)
    out = {"seshadri": _report_from_seshadri(report)}
    ambient = ci.ambient
    out["ambient"] = {
        "cut_out_degree": cut_out_degree(ambient),
        "line_scheme_dimension": line_scheme(ambient).dimension,
    }
    if report.status == "LOWER_BOUND_ONLY" and ci.degrees[-1] == 1:
        # corroborating conic search; a modular witness never upgrades the
        # status, and NOT_FOUND is inconclusive
        X = instance.variety()
        primes = tuple(args.primes) if args.primes else instance.primes
        annotations = {}
        for q in primes:
            try:
                inst = modular_instance(X, q)
            except BadReductionError:
                continue
            conic = find_conic_mod_q(inst, seed=args.seed)
            annotations[str(q)] = {
                "conic_found": conic.found,
                "inconclusive": conic.inconclusive,
            }
        out["oracle"] = {
            "note": "modular conic witnesses corroborate the value 2 but do not prove it",
            "search": annotations,
        }
    return out


def _cmd_curve(instance, args):
    ci = instance.ci_input(validate=args.validate)
    component = instance.component_ideal(ci.ambient)
    cert = seshadri_curve(
        ci, component=component, seed=args.seed, retries=args.retries,
        max_m=args.max_m,
    )
    return {"certificate": _report_from_certificate(cert)}


def _cmd_sharpness(args):
    max_m = args.max_m if args.max_m is not None else 24
    X, cert = sharpness_example(
        args.n, args.d, seed=args.seed, retries=args.retries, max_m=max_m
    )
    return {
        "variety": {
            "generators": [str(g) for g in X.ideal.generators],
            **_hilbert_dict(X.hilbert),
        },
        "certificate": _report_from_certificate(cert),
    }


def _cmd_oracle(instance, args):
    X = instance.variety()
    primes = tuple(args.primes) if args.primes else instance.primes
    results = {}
    good = 0
    for q in primes:
        try:
            inst = modular_instance(X, q)
        except BadReductionError as exc:
            results[str(q)] = {"error": f"bad reduction: {exc}"}
            continue
        good += 1
        lines = count_lines_mod_q(inst)
        entry = {
            "line_count": lines.count,
            "directions": [list(v) for v in lines.directions],
        }
        if args.conics:
            conic = find_conic_mod_q(inst, budget=args.budget, seed=args.seed)
            entry["conic"] = {
                "found": conic.found,
                "witness": [list(v) for v in conic.witness] if conic.witness else None,
                "attempts": conic.attempts,
                "inconclusive": conic.inconclusive,
            }
        results[str(q)] = entry
    if not good:
        raise InputError("all primes had bad reduction")
    return {"oracle": results}


def _maybe_validate(X, args):
    if not args.validate:
        return
    irrelevant = Ideal(X.ring, X.ring.variables())
    if not saturate(X.normalized_ideal, irrelevant).equals(X.normalized_ideal):
        raise InputError("ideal is not saturated")


def _flatten(prefix, value, lines):
    if isinstance(value, dict):
        for key in sorted(value):
            _flatten(f"{prefix}{key}." if prefix else f"{key}.", value[key], lines)
    elif isinstance(value, list):
        lines.append((prefix.rstrip("."), json.dumps(value)))
    else:
        lines.append((prefix.rstrip("."), value))


def render_human(report):
    lines = []
    _flatten("", report["result"], lines)
    out = [f"command: {report['command']}"]
    for key, value in lines:
        out.append(f"{key}: {value}")
    return "\n".join(out)


def build_parser():
    parser = argparse.ArgumentParser(
        prog="seshadri",
        description="Exact Seshadri-constant bounds, certificates and oracles",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, needs_file=True):
        if needs_file:
            p.add_argument("file", help="instance file (JSON)")
        p.add_argument("--seed", type=int, default=None, help="random seed")
        p.add_argument("--primes", type=lambda s: [int(q) for q in s.split(",")],
                       default=None, help="comma-separated primes for the oracle")
        p.add_argument("--max-m", dest="max_m", type=int, default=None,
                       help="truncation cap for local invariants")
        p.add_argument("--json", dest="json_path", default=None,
                       help="write the machine-readable report here")
        p.add_argument("--validate", action="store_true",
                       help="extra saturation/smoothness checks")
        p.add_argument("--retries", type=int, default=4,
                       help="retry budget for random draws")

    for name in ("bound", "fano", "dp", "classify", "curve"):
        common(sub.add_parser(name))
    oracle = sub.add_parser("oracle")
    common(oracle)
    oracle.add_argument("--conics", action="store_true", help="also search for conics")
    oracle.add_argument("--budget", type=int, default=200, help="conic search draws")
    sharp = sub.add_parser("sharpness")
    sharp.add_argument("n", type=int, help="dimension")
    sharp.add_argument("d", type=int, help="degree (at least n + 1)")
    common(sharp, needs_file=False)
    return parser


def run(argv=None):
    """Run one command; returns (report dict, exit code, parsed args)."""
    level = os.environ.get("SESHADRI_LOG", "warning").upper()
    logging.basicConfig(level=getattr(logging, level, logging.WARNING))
    parser = build_parser()
    args = parser.parse_args(argv)
    started = time.monotonic()
    report = {"command": args.command, "flags": {}, "result": {}}
    try:
        if args.command == "sharpness":
            if args.seed is None:
                args.seed = 0
            report["flags"] = {"seed": args.seed, "retries": args.retries,
                               "n": args.n, "d": args.d}
            report["result"] = _cmd_sharpness(args)
        else:
            instance = load_instance(args.file)
            if args.seed is None:
                args.seed = instance.seed
            if args.max_m is None:
                args.max_m = instance.max_m
            report["instance"] = instance.raw
            report["flags"] = {
                "seed": args.seed,
                "primes": list(args.primes) if args.primes else list(instance.primes),
                "max_m": args.max_m,
                "validate": bool(args.validate),
                "retries": args.retries,
            }
            handler = {
                "bound": _cmd_bound,
                "fano": _cmd_fano,
                "dp": _cmd_dp,
                "classify": _cmd_classify,
                "curve": _cmd_curve,
                "oracle": _cmd_oracle,
            }[args.command]
            report["result"] = handler(instance, args)
        code = EXIT_OK
    except (InputError, ParseError, PointError, StabilizationError, ValueError) as exc:
        if isinstance(exc, HypothesisError):
            report["error"] = {"kind": "hypothesis", "message": str(exc),
                               "condition": exc.condition}
            code = EXIT_HYPOTHESIS
        else:
            report["error"] = {"kind": "input", "message": str(exc)}
            code = EXIT_INPUT
    except InconsistencyError as exc:
        payload = {"kind": "inconsistency", "message": str(exc)}
        if exc.certificate is not None:
            payload["certificate"] = _report_from_certificate(exc.certificate)
        report["error"] = payload
        code = EXIT_INTERNAL
    except RuntimeError as exc:
        report["error"] = {"kind": "internal", "message": str(exc)}
        code = EXIT_INTERNAL
    logger.info("%s finished in %.2fs", args.command, time.monotonic() - started)
    return report, code, args


def main(argv=None):
    report, code, args = run(argv)
    payload = json.dumps(report, sort_keys=True, indent=2) + "\n"
    if getattr(args, "json_path", None):
        with open(args.json_path, "w", encoding="utf-8") as handle:
            handle.write(payload)
    if "error" in report:
        print(f"error ({report['error']['kind']}): {report['error']['message']}",
              file=sys.stderr)
        if "certificate" in report.get("error", {}):
            print(payload, file=sys.stderr)
    else:
        print(render_human(report))
    return code


if __name__ == "__main__":
    sys.exit(main())
