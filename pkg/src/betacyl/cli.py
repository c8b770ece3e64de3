"""Command-line front end.

Every subcommand writes a deterministic report to stdout (or ``--output``).
Exit status: 0 on success, 1 when a check ran but found problems, 2 on
invalid input, 3 when a decision could not be certified below the
precision cap (``BETACYL_PMAX``, default 4096 bits).
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import sys
from fractions import Fraction
from typing import Sequence

from . import cylinders, density, expansion, irregular, words
from .errors import BetacylError, ParseError, PrecisionExhausted
from .expansion import EventuallyPeriodicSequence
from .numerics import BetaSpec, default_pmax, format_word, iv_bounds, parse_word

EXIT_OK, EXIT_CHECK_FAILED, EXIT_USAGE, EXIT_PRECISION = 0, 1, 2, 3


def _dumps(obj) -> str:
    return json.dumps(obj, ensure_ascii=True)


def _csv(header: Sequence[str], rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue().rstrip("\n")


def _beta(text: str) -> BetaSpec:
    return BetaSpec.parse(text)


def _rational(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise ParseError(f"malformed rational: {text!r}") from exc


def _precision(text: str | None, auto: int) -> int:
    if text is None or text == "auto":
        return auto
    try:
        p = int(text)
    except ValueError as exc:
        raise ParseError(f"precision must be an integer or 'auto', got {text!r}") from exc
    if p < 1:
        raise ParseError("precision must be >= 1")
    return p


def _interval(x) -> list[float]:
    lo, hi = iv_bounds(x)
    return [density.float_down(lo), density.float_up(hi)]


# ---------------------------------------------------------------------------
# subcommands; each returns (exit status, report text)


def cmd_expand(a) -> tuple[int, str]:
    spec = _beta(a.beta)
    if a.infinite:
        seq = expansion.infinite_expansion_of_one(spec, a.n, a.p_max)
        return EXIT_OK, _dumps(seq.to_json())
    if a.x is not None:
        exp = expansion.expand_x(spec, _rational(a.x), a.n, a.p_max)
    else:
        exp = expansion.expand_one(spec, a.n, a.p_max)
    return EXIT_OK, _dumps(exp.to_json())


def cmd_selfadm(a):
    w = parse_word(a.word)
    return EXIT_OK, _dumps({"word": format_word(w), "self_admissible": words.is_self_admissible(w)})


def cmd_tau(a):
    w = parse_word(a.word)
    return EXIT_OK, _dumps({"word": format_word(w), **words.recurrence_time(w).to_json()})


def cmd_successor(a):
    w = parse_word(a.word)
    nxt = words.successor(w)
    if a.format == "json":
        return EXIT_OK, _dumps({"word": format_word(w), "successor": format_word(nxt)})
    return EXIT_OK, format_word(nxt)


def cmd_enumerate(a):
    if (a.max_first is None) == (a.beta_hi is None):
        raise ParseError("give exactly one of --max-first, --beta-hi")
    if a.beta_hi is not None:
        stream = words.enumerate_self_admissible(a.n, beta_hi=_beta(a.beta_hi))
    else:
        stream = words.enumerate_self_admissible(a.n, max_first_digit=a.max_first)
    names = [format_word(w) for w in stream]
    if a.format == "csv":
        return EXIT_OK, _csv(["index", "word"], enumerate(names))
    return EXIT_OK, _dumps({"n": a.n, "count": len(names), "words": names})


def cmd_count(a):
    if a.period is not None:
        pre = parse_word(a.preperiod) if a.preperiod else ()
        seq = EventuallyPeriodicSequence(pre, parse_word(a.period))
    elif a.beta is not None:
        seq = expansion.infinite_expansion_of_one(_beta(a.beta), max(a.n, 1), a.p_max)
    else:
        raise ParseError("give --period or --beta")
    count = words.count_admissible(a.n, seq, shift_from=a.shift_from)
    return EXIT_OK, _dumps({"n": a.n, "shift_from": a.shift_from, "count": count})


def cmd_cylinder(a):
    if a.word is not None:
        w = parse_word(a.word)
        p = _precision(a.p, 64 + 4 * len(w))
        cyl = cylinders.cylinder_endpoints(w, p)
    elif a.beta is not None and a.n is not None:
        spec = _beta(a.beta)
        p = _precision(a.p, density.auto_precision(spec, a.n))
        cyl = cylinders.cylinder_of_beta(spec, a.n, p, a.p_max)
    else:
        raise ParseError("give --word, or --beta with --n")
    return EXIT_OK, _dumps(cyl.to_json())


def cmd_partition_check(a):
    lo, hi = _beta(a.beta_lo), _beta(a.beta_hi)
    report = cylinders.verify_partition(a.n, lo, hi, a.p)
    return (EXIT_OK if report.ok else EXIT_CHECK_FAILED), _dumps(report.to_json())


def cmd_density(a):
    spec = _beta(a.beta)
    p = _precision(a.p, density.auto_precision(spec, a.n_max))
    window = tuple(float(x) for x in a.window.split(","))
    prof = density.density_profile(spec, a.n_max, p, window, a.p_max)
    if a.format == "csv":
        return EXIT_OK, _csv(density.CSV_COLUMNS, prof.rows())
    report = prof.to_json()
    report["tau_beta_estimate"] = str(density.tau_beta_estimate(spec, a.n_max, window, a.p_max))
    report["full_recurrence_indices"] = density.full_recurrence_indices(spec, a.n_max, a.p_max)
    return EXIT_OK, _dumps(report)


def _cantor_config(a) -> irregular.CantorConfig:
    return irregular.CantorConfig(
        _rational(a.delta), _rational(a.zeta), a.N, a.generations, a.seed, a.growth, a.n1
    )


def _digest(word) -> str:
    return hashlib.sha256(format_word(word).encode()).hexdigest()


def cmd_cantor(a):
    cfg = _cantor_config(a)
    prec = _precision(a.p, 160)
    report: dict = {"config": cfg.to_json()}
    report["generations"] = [cfg.params(k).to_json() for k in range(1, cfg.K + 1)]
    word = irregular.sample_word(cfg, cfg.K)
    info = words.recurrence_time(word)
    report["word"] = {"length": len(word), "sha256": _digest(word), **info.to_json()}
    ld = irregular.local_dimension_sequence(cfg, cfg.K, prec)
    per_gen = []
    for k in range(1, cfg.K + 1):
        lo_n, hi_n = cfg.m(k - 1), cfg.m(k)
        rs = [r for n, r in zip(ld.n, ld.ratio) if lo_n <= n <= hi_n]
        per_gen.append(
            {
                "k": k,
                "min_ratio_lo": min(_interval(r)[0] for r in rs),
                "max_ratio_hi": max(_interval(r)[1] for r in rs),
            }
        )
    report["local_dimension"] = {"bound": _interval(ld.bound), "per_generation": per_gen}
    if a.series:
        report["local_dimension"]["series"] = {
            "n": ld.n,
            "ratio": [_interval(r) for r in ld.ratio],
        }
    report["box_estimate"] = _interval(irregular.box_dimension_estimate(cfg, cfg.K))
    return EXIT_OK, _dumps(report)


def cmd_dim_estimate(a):
    cfg = _cantor_config(a)
    est = irregular.box_dimension_estimate(cfg, cfg.K)
    return EXIT_OK, _dumps({"box_estimate": _interval(est)})


def cmd_ball_check(a):
    cfg = _cantor_config(a)
    gens = tuple(int(x) for x in a.sample_generations.split(","))
    report = irregular.ball_mass_bound_check(cfg, a.samples, gens)
    if not a.details:
        report = {"samples": report["samples"], "violations": report["violations"]}
    status = EXIT_OK if report["violations"] == 0 else EXIT_CHECK_FAILED
    return status, _dumps(report)


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="betacyl", description=__doc__.splitlines()[0])
    parser.add_argument("--output", "-o", help="write the report to this file")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, help_text):
        sp = sub.add_parser(name, help=help_text)
        sp.set_defaults(func=func)
        return sp

    def p_max(sp):
        sp.add_argument("--p-max", type=int, default=None, help="precision cap in bits")

    sp = add("expand", cmd_expand, "digits of 1 or of x in base beta")
    sp.add_argument("--beta", required=True)
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--x", help="rational in [0, 1); default expands 1")
    sp.add_argument("--infinite", action="store_true", help="periodic form of the expansion of 1")
    p_max(sp)

    for name, func, text in (
        ("selfadm", cmd_selfadm, "self-admissibility test"),
        ("tau", cmd_tau, "recurrence time and residue"),
        ("successor", cmd_successor, "next self-admissible word"),
    ):
        sp = add(name, func, text)
        sp.add_argument("--word", required=True)
        if name == "successor":
            sp.add_argument("--format", choices=("text", "json"), default="text")

    sp = add("enumerate", cmd_enumerate, "self-admissible words in order")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--max-first", type=int)
    sp.add_argument("--beta-hi")
    sp.add_argument("--format", choices=("json", "csv"), default="json")

    sp = add("count", cmd_count, "number of admissible words")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--period", help="period of the infinite expansion of 1")
    sp.add_argument("--preperiod")
    sp.add_argument("--beta")
    sp.add_argument("--shift-from", type=int, choices=(0, 1), default=0)
    p_max(sp)

    sp = add("cylinder", cmd_cylinder, "parameter cylinder of a word or of beta")
    sp.add_argument("--word")
    sp.add_argument("--beta")
    sp.add_argument("--n", type=int)
    sp.add_argument("--p", default="auto")
    p_max(sp)

    sp = add("partition-check", cmd_partition_check, "adjacency of consecutive cylinders")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--beta-lo", required=True)
    sp.add_argument("--beta-hi", required=True)
    sp.add_argument("--p", type=int, default=80)

    sp = add("density", cmd_density, "per-n shrink rates and tail estimates")
    sp.add_argument("--beta", required=True)
    sp.add_argument("--n-max", type=int, required=True)
    sp.add_argument("--p", default="auto")
    sp.add_argument("--window", default="0.5,1.0")
    sp.add_argument("--format", choices=("json", "csv"), default="json")
    p_max(sp)

    for name, func, text in (
        ("cantor", cmd_cantor, "Cantor construction report"),
        ("dim-estimate", cmd_dim_estimate, "box-dimension interval only"),
        ("ball-check", cmd_ball_check, "sibling counts in small balls"),
    ):
        sp = add(name, func, text)
        sp.add_argument("--delta", required=True)
        sp.add_argument("--zeta", required=True)
        sp.add_argument("--N", type=int, required=True)
        sp.add_argument("--generations", type=int, default=1)
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--growth", type=int, default=4)
        sp.add_argument("--n1", type=int)
        sp.add_argument("--p", default="auto")
        if name == "cantor":
            sp.add_argument("--series", action="store_true", help="include every ratio")
        if name == "ball-check":
            sp.add_argument("--samples", type=int, default=50)
            sp.add_argument("--sample-generations", default="1")
            sp.add_argument("--details", action="store_true")
    return parser


def run(argv: Sequence[str] | None = None) -> tuple[int, str]:
    """Parse ``argv`` and execute; returns ``(exit status, report)``."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0), ""
    try:
        default_pmax()
        status, text = args.func(args)
    except PrecisionExhausted as exc:
        return EXIT_PRECISION, f"error: {exc}"
    except (BetacylError, ValueError) as exc:
        return EXIT_USAGE, f"error: {exc}"
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
        return status, ""
    return status, text


def main(argv: Sequence[str] | None = None) -> int:
    status, text = run(argv)
    if text:
        stream = sys.stderr if text.startswith("error:") else sys.stdout
        print(text, file=stream)
    return status


if __name__ == "__main__":
    sys.exit(main())
