"""Command-line front end.

Exit codes: 0 everything passed, 1 a check failed or an input was rejected
by verification, 2 the input could not be parsed.
"""

from __future__ import annotations

import argparse
import json
import logging
import math
import os
import sys
from datetime import datetime, timezone

from . import __version__
from .algebra import build_tkk, element_from_json
from .functor import TripleMap, transport_report
from .jordan import make_space
from .numeric import Tolerance
from .order import PosetError, build_poset, is_strict
from .report import Check, Report
from .suites import SUITES, run_suites

log = logging.getLogger("tkk")

EXIT_OK, EXIT_FAIL, EXIT_PARSE = 0, 1, 2

_LOG_LEVELS = {"quiet": logging.WARNING, "info": logging.INFO, "debug": logging.DEBUG}


class ParseError(Exception):
    pass


def configure_logging() -> None:
    level = os.environ.get("TKK_LOG", "quiet").lower()
    if level not in _LOG_LEVELS:
        raise ParseError(f"TKK_LOG must be one of {', '.join(_LOG_LEVELS)}, got {level!r}")
    logging.basicConfig(stream=sys.stderr, level=_LOG_LEVELS[level], format="%(levelname)s %(name)s: %(message)s", force=True)


def _load_json(path: str):
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: malformed JSON ({exc.msg} at line {exc.lineno})") from None


def _parse(what: str, build, data):
    try:
        return build(data)
    except (ValueError, TypeError, KeyError, IndexError) as exc:
        raise ParseError(f"invalid {what}: {exc}") from None


def _tolerance(tol: float | None) -> Tolerance:
    if tol is None:
        return Tolerance()
    if not (0 < tol < 1):
        raise ParseError(f"--tol must lie in (0, 1), got {tol}")
    return Tolerance(algebraic=tol, normative=max(tol, Tolerance().normative))


def _finite(obj):
    # strict JSON has no infinities
    if isinstance(obj, float) and not math.isfinite(obj):
        return str(obj)
    if isinstance(obj, dict):
        return {k: _finite(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_finite(v) for v in obj]
    return obj


def render_report(report: Report, config: dict) -> str:
    doc = report.to_json()
    doc["config"] = config
    doc["timestamp"] = datetime.now(timezone.utc).isoformat(timespec="seconds")
    doc["version"] = __version__
    return json.dumps(_finite(doc), sort_keys=True, indent=2) + "\n"


def _write(path: str | None, text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
        return
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)


# ---------------------------------------------------------------------------


def cmd_verify(args) -> int:
    data = _load_json(args.space)
    # a bare space config, or a run config carrying "space" plus defaults
    run = data if isinstance(data, dict) and "space" in data else {"space": data}
    space = _parse("space config", make_space, run["space"])
    suites = args.suites if args.suites is not None else run.get("suites", ",".join(SUITES))
    if isinstance(suites, str):
        suites = [s.strip() for s in suites.split(",") if s.strip()]
    unknown = [s for s in suites if s not in SUITES]
    if not suites or unknown:
        raise ParseError(f"--suites must be a non-empty subset of {','.join(SUITES)}")
    samples = int(args.samples if args.samples is not None else run.get("samples", 100))
    seed = int(args.seed if args.seed is not None else run.get("seed", 0))
    if samples < 1 or seed < 0:
        raise ParseError("--samples must be at least 1 and --seed nonnegative")
    tol = _tolerance(args.tol if args.tol is not None else run.get("tol"))
    phi = None
    if args.phi:
        phi = _parse("morphism", TripleMap.from_json, _load_json(args.phi))

    report = run_suites(space, suites, samples, seed, tol)
    if phi is not None and "functor" in suites:
        log.info("checking supplied morphism %s", args.phi)
        for c in transport_report(phi, min(samples, 50), seed, tol).checks:
            c.name = f"functor.supplied.{c.name}"
            report.add(c)
    config = {
        "command": "verify",
        "space": space.config(),
        "suites": suites,
        "samples": samples,
        "seed": seed,
        "tol": {"algebraic": tol.algebraic, "normative": tol.normative},
    }
    _write(args.report, render_report(report, config))
    for c in report.checks:
        if not c.passed:
            log.warning("%s", c)
    return EXIT_OK if report.passed else EXIT_FAIL


def cmd_poset(args) -> int:
    space = _parse("space config", make_space, _load_json(args.space))
    raw = _load_json(args.tripotents)
    if not isinstance(raw, list):
        raise ParseError("tripotent file must be a JSON array")
    alg = build_tkk(space)
    elements = [_parse(f"tripotent {i}", lambda d: element_from_json(alg, d), d) for i, d in enumerate(raw)]
    tol = _tolerance(args.tol)
    for i, z in enumerate(elements):
        cert = is_strict(alg, z, tol)
        if not cert.is_strict:
            residuals = {k: float(v) for k, v in cert.residuals.items()}
            print(json.dumps({"error": "not a strict tripotent", "witness": i, "residuals": residuals}, sort_keys=True), file=sys.stderr)
            return EXIT_FAIL
    try:
        H = build_poset(alg, elements, tol)
    except PosetError as exc:
        print(json.dumps({"error": str(exc)}), file=sys.stderr)
        return EXIT_FAIL
    _write(args.out, H.to_dot())
    log.info("%d nodes, %d covering edges", len(H.nodes), len(H.edges))
    return EXIT_OK


def cmd_transport(args) -> int:
    phi = _parse("morphism", TripleMap.from_json, _load_json(args.phi))
    samples = args.samples if args.samples is not None else 50
    seed = args.seed if args.seed is not None else 0
    if samples < 1 or seed < 0:
        raise ParseError("--samples must be at least 1 and --seed nonnegative")
    tol = _tolerance(args.tol)
    report = transport_report(phi, samples, seed, tol)
    config = {
        "command": "transport",
        "domain": phi.domain.config(),
        "codomain": phi.codomain.config(),
        "kind": phi.kind,
        "samples": samples,
        "seed": seed,
        "tol": {"algebraic": tol.algebraic, "normative": tol.normative},
    }
    _write(args.report, render_report(report, config))
    return EXIT_OK if report.passed else EXIT_FAIL


# ---------------------------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on usage errors; keep that but route through main
    def error(self, message):
        raise ParseError(message)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="tkk", description="Verify Jordan triple and TKK algebra constructions numerically.")
    p.add_argument("--version", action="version", version=f"tkk {__version__}")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    v = sub.add_parser("verify", help="run verification suites on a space")
    v.add_argument("--space", required=True, help="space config or run config JSON")
    v.add_argument("--suites", help=f"comma-separated subset of {','.join(SUITES)}")
    v.add_argument("--samples", type=int)
    v.add_argument("--seed", type=int)
    v.add_argument("--tol", type=float, help="algebraic tolerance")
    v.add_argument("--phi", help="morphism JSON checked by the functor suite")
    v.add_argument("--report", help="report path (default stdout)")
    v.set_defaults(run=cmd_verify)

    q = sub.add_parser("poset", help="Hasse diagram of a list of tripotents")
    q.add_argument("--space", required=True)
    q.add_argument("--tripotents", required=True, help="JSON array of TKK elements")
    q.add_argument("--out", help="DOT output path (default stdout)")
    q.add_argument("--tol", type=float)
    q.set_defaults(run=cmd_poset)

    t = sub.add_parser("transport", help="check the graded map induced by a triple map")
    t.add_argument("--phi", required=True, help="morphism JSON")
    t.add_argument("--samples", type=int)
    t.add_argument("--seed", type=int)
    t.add_argument("--tol", type=float)
    t.add_argument("--report", help="report path (default stdout)")
    t.set_defaults(run=cmd_transport)
    return p


def main(argv=None) -> int:
    try:
        configure_logging()
        args = build_parser().parse_args(argv)
        return args.run(args)
    except ParseError as exc:
        print(f"tkk: error: {exc}", file=sys.stderr)
        return EXIT_PARSE


if __name__ == "__main__":
    sys.exit(main())
