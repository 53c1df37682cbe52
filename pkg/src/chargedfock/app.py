import argparse
import csv
import io
import json
import math
import os
import sys
from fractions import Fraction
from typing import Callable, Dict, List
from scipy import special
from chargedfock import desitter
from chargedfock.diagnostics import binomial_norm_sq, loglog_slope, partial_sum_differences, quadratic_lambda_fit
from chargedfock.fockstate import SectorState, TensorState, norm_sq
from chargedfock.heisenbergcheck import HeisenbergCheck, TensorCurrentCheck
from chargedfock.relationabstractcheck import IDENTITY, CheckFailure
from chargedfock.relationcompositecheck import RelationCompositeCheck
from chargedfock.runconfig import RunConfig, RunConfigBuilder
from chargedfock.scalar import EXACT_RATIONAL, FLOAT, ScalarContext, to_float
from chargedfock.timezero import TimeZeroMode, apply_time_zero, export_convergence_study, partial_sum_norm_series
from chargedfock.timezerocheck import TimeZeroCheck
from chargedfock.truncation import Truncation
from chargedfock.utils import outputmanager
from chargedfock.utils.messagehandler import RecordAggregateHandler
from chargedfock.utils.test import generate_interior_pairs
from chargedfock.vertex import apply_Y_mode, conformal_dimension, vacuum_mode_norm_sq_series
from chargedfock.vertexcheck import (CurrentCovarianceCheck, EnergyBoundCheck, OracleEquivalenceCheck,
                                     PrimaryCovarianceCheck, VacuumNormCheck, YAdjointCheck)
from chargedfock.virasoro import SUGAWARA_NORMALIZATION
from chargedfock.virasorocheck import LorentzCheck, SugawaraCurrentCheck, VirasoroCheck


EXIT_PASS = 0
EXIT_USAGE = 1
EXIT_IDENTITY = 2
EXIT_BUDGET = 3

FAULT_OFFSET = Fraction(1, 1000)


class UsageError(Exception):
    pass


class HarnessArgumentParser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def write_output(output: str, content: str):
    if output is None:
        sys.stdout.write(content)
        return
    directory = os.path.dirname(output)
    if directory:
        os.makedirs(directory, exist_ok=True)
    with open(output, "w", newline="") as f:
        f.write(content)


def exit_code_of(verdicts: List[str]) -> int:
    if desitter.FAIL in verdicts:
        return EXIT_IDENTITY
    if desitter.BUDGET_EXCEEDED in verdicts:
        return EXIT_BUDGET
    return EXIT_PASS


def sugawara_normalization(config: RunConfig, ctx: ScalarContext):
    if config.inject_fault == "sugawara":
        outputmanager.warning("fault injection: Sugawara normalization 1/2 +", FAULT_OFFSET)
        return ctx.convert(SUGAWARA_NORMALIZATION + FAULT_OFFSET)
    return ctx.convert(SUGAWARA_NORMALIZATION)


def build_algebra_check(config: RunConfig, ctx: ScalarContext) -> RelationCompositeCheck:
    alpha = config.alpha(ctx)
    normalization = sugawara_normalization(config, ctx)
    checks = [
        HeisenbergCheck(ctx),
        TensorCurrentCheck(ctx),
        VirasoroCheck(ctx, normalization=normalization),
        SugawaraCurrentCheck(ctx, normalization=normalization),
        LorentzCheck(ctx, normalization=normalization),
        CurrentCovarianceCheck(ctx, alpha, m_max=3),
        PrimaryCovarianceCheck(ctx, alpha, normalization=normalization),
        OracleEquivalenceCheck(ctx, alpha),
        VacuumNormCheck(ctx, alpha),
        YAdjointCheck(ctx, alpha),
        EnergyBoundCheck(ctx, alpha),
        TimeZeroCheck(ctx, alpha),
    ]
    return RelationCompositeCheck(checks, ctx)


def failure_record(failure: CheckFailure, ctx: ScalarContext) -> Dict:
    return {
        "check": failure.check,
        "detail": failure.detail,
        "residual": ctx.to_string(failure.residual),
        "kind": failure.kind,
        "verdict": desitter.FAIL if failure.kind == IDENTITY else desitter.BUDGET_EXCEEDED,
    }


def run_verify_algebra(config: RunConfig, handler: RecordAggregateHandler) -> int:
    ctx = config.context()
    trunc = config.truncation(ctx)
    outputmanager.info("===== verify-algebra =====", trunc, ctx)
    composite = build_algebra_check(config, ctx)
    failures = composite.get_failures(trunc, callback=handler.callback)
    for failure in failures:
        handler.add_record(failure_record(failure, ctx))
    for warning in composite.warnings:
        handler.warn(warning)
    if failures:
        first = failures[0]
        outputmanager.error("first failure:", first.check, first.detail, "residual", first.residual)
    return exit_code_of([r["verdict"] for r in handler.failures()])


def run_verify_decay(config: RunConfig, handler: RecordAggregateHandler, slope_tolerance: float = 0.05) -> int:
    ctx = config.context()
    trunc = config.truncation(ctx)
    alpha = config.alpha(ctx)
    d = conformal_dimension(alpha)
    j = config.beta_multiplier
    if not trunc.contains_sector(j):
        raise UsageError(f"beta_multiplier {j} lies outside the charge window {trunc.charge_window}")
    outputmanager.info("===== verify-decay =====", "alpha", alpha, "d", d)
    exact_reach = min(trunc.level_cutoff, 30)
    closed = vacuum_mode_norm_sq_series(alpha, max(config.n_max, exact_reach))
    code = EXIT_PASS
    omega = SectorState.vacuum(j)
    target_trunc = trunc if trunc.contains_sector(j + trunc.charge_steps(alpha)) else None
    if target_trunc is None:
        handler.warn(f"sector {j} + alpha leaves the charge window; table uses closed forms only")
    for n in range(exact_reach + 1):
        record = {"n": n, "closed_form": ctx.to_string(closed[n]),
                  "binomial": repr(binomial_norm_sq(float(2 * d), n)),
                  "binomial_agrees": math.isclose(binomial_norm_sq(float(2 * d), n), to_float(closed[n]), rel_tol=1e-9)}
        if target_trunc is not None:
            computed = norm_sq(apply_Y_mode(alpha, n, omega, target_trunc))
            record["computed"] = ctx.to_string(computed)
            record["verdict"] = desitter.PASS if ctx.equal(computed, closed[n]) else desitter.FAIL
            if record["verdict"] != desitter.PASS:
                code = EXIT_IDENTITY
        handler.add_record(record)
    window = (max(1, config.n_max // 8), config.n_max)
    if window[1] - window[0] < 2:
        handler.warn(f"n_max={config.n_max} is too small for a slope fit")
        return code
    series = [(n, to_float(closed[n])) for n in range(1, config.n_max + 1)]
    slope = loglog_slope(series, window)
    expected = float(2 * d - 1)
    verdict = desitter.PASS if abs(slope - expected) <= slope_tolerance else desitter.BUDGET_EXCEEDED
    handler.add_record({"fit": "loglog_slope", "window": list(window), "slope": slope,
                        "expected": expected, "verdict": verdict})
    ratios = [math.log2(to_float(closed[2 * n]) / to_float(closed[n]))
              for n in range(window[0], config.n_max // 2 + 1)]
    if ratios:
        handler.add_record({"fit": "doubling_log2_ratio", "last": ratios[-1], "expected": expected})
    outputmanager.info("decay slope", slope, "expected", expected)
    if verdict != desitter.PASS and code == EXIT_PASS:
        code = EXIT_BUDGET
    return code


def series_report_output(output: str) -> str:
    """Series commands keep stdout for CSV; their JSON report goes next to --output."""
    if output is None:
        return None
    stem, _ = os.path.splitext(output)
    return f"{stem}_report.json"


def _series_output(output: str, m: int, many: bool) -> str:
    if output is None or not many:
        return output
    stem, ext = os.path.splitext(output)
    return f"{stem}_m{m}{ext or '.csv'}"


def run_converge(config: RunConfig, handler: RecordAggregateHandler, exponent_tolerance: float = 0.1) -> int:
    """
    One CSV per mode. The increments S_2N - S_N over N in [32, n_max/2] must
    scale like N^(4d-1); a fitted exponent off by more than the tolerance exits 3.
    """
    ctx = config.context()
    trunc = config.truncation(ctx)
    alpha = config.alpha(ctx)
    m_values = config.m_values()
    expected = float(4 * conformal_dimension(alpha) - 1)
    outputmanager.info("===== converge =====", "alpha", alpha, "m", m_values)
    verdicts = []
    for m in m_values:
        buffer = io.StringIO()
        export_convergence_study(alpha, m, config.n_max, buffer)
        write_output(_series_output(config.output, m, len(m_values) > 1), buffer.getvalue())
        sums = partial_sum_norm_series(alpha, m, config.n_max)
        increments = [(n, v) for n, v in partial_sum_differences(sums, range(32, config.n_max // 2 + 1)) if v > 0]
        if len(increments) >= 3:
            exponent = loglog_slope(increments)
            verdict = desitter.PASS if abs(exponent - expected) <= exponent_tolerance else desitter.BUDGET_EXCEEDED
            handler.add_record({"fit": "increment_exponent", "m": m,
                                "window": [increments[0][0], increments[-1][0]],
                                "exponent": exponent, "expected": expected, "verdict": verdict})
            verdicts.append(verdict)
            outputmanager.info("m =", m, "S_2N - S_N exponent", exponent, "expected", expected, verdict)
        else:
            handler.warn(f"m={m}: n_max={config.n_max} leaves fewer than 3 increments from N=32; exponent not fitted")
        if trunc.contains_sector(trunc.charge_steps(alpha)):
            _, report = apply_time_zero(TimeZeroMode(alpha, m), TensorState.vacuum(0), trunc)
            outputmanager.info("m =", m, "band study at L =", trunc.level_cutoff, "depth", report.depth,
                               "last band", report.last_band_norm_sq)
    return exit_code_of(verdicts)


def run_diverge_demo(config: RunConfig, handler: RecordAggregateHandler) -> int:
    ctx = ScalarContext(FLOAT, config.tolerance or 1e-12)
    alpha = ctx.parse("1/sqrt(2)")
    two_d = 2 * conformal_dimension(alpha)
    outputmanager.info("===== diverge-demo =====", "alpha", alpha, "(float mode forced)")
    sums = partial_sum_norm_series(alpha, 0, config.n_max)
    expected = math.log(2) / special.gamma(two_d) ** 2
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(["N", "partial_sum", "increment", "expected_increment"])
    n = 8
    while 2 * n <= config.n_max:
        writer.writerow([n, repr(float(sums[n])), repr(float(sums[2 * n] - sums[n])), repr(float(expected))])
        n *= 2
    write_output(config.output, out.getvalue())
    return EXIT_PASS


def _check_lorentz_alpha(alpha) -> None:
    if to_float(alpha) ** 2 >= 0.5:
        raise UsageError(f"|alpha| = {to_float(alpha)} is not below 1/sqrt(2); no convergence to verify against")


def _check_arena(config: RunConfig, trunc: Truncation, alpha, level_shift: int) -> None:
    """Test pairs live in sector 0; the fields reach sectors +-alpha and the generators shift levels."""
    if config.interior_buffer < level_shift:
        raise UsageError(f"interior_buffer={config.interior_buffer} is below the generator level shift {level_shift}")
    if config.interior_buffer > trunc.level_cutoff:
        raise UsageError(f"interior_buffer={config.interior_buffer} exceeds level_cutoff={trunc.level_cutoff}")
    steps = trunc.charge_steps(alpha)
    if not (trunc.contains_sector(steps) and trunc.contains_sector(-steps)):
        raise UsageError(f"charge window {trunc.charge_window} must hold sectors +-{steps}")


def escalating_cutoffs(level_cutoff: int, interior_buffer: int, step: int = 4) -> List[int]:
    """L - step and L, with the smaller one raised to keep at least one excited level inside."""
    if level_cutoff < interior_buffer:
        return []
    if level_cutoff - interior_buffer < 1:
        return [level_cutoff]
    return sorted({max(level_cutoff - step, interior_buffer + 1), level_cutoff})


def run_verify_commutativity(config: RunConfig, handler: RecordAggregateHandler) -> int:
    ctx = config.context()
    trunc = config.truncation(ctx)
    alpha = config.alpha(ctx)
    _check_lorentz_alpha(alpha)
    steps = trunc.charge_steps(alpha)
    if not (trunc.contains_sector(steps) and trunc.contains_sector(-steps)):
        raise UsageError(f"charge window {trunc.charge_window} must hold sectors +-{steps}")
    outputmanager.info("===== verify-commutativity =====", trunc, "alpha", alpha)
    code = EXIT_PASS
    check = TimeZeroCheck(ctx, alpha)
    failures = check.get_failures(trunc, callback=handler.callback)
    for failure in failures:
        handler.add_record(failure_record(failure, ctx))
        code = EXIT_IDENTITY
    for warning in check.warnings:
        handler.warn(warning)
    truncs = [trunc.with_level_cutoff(level) for level in escalating_cutoffs(trunc.level_cutoff, config.interior_buffer)]
    if not truncs:
        handler.warn(f"vacuous interior: L={trunc.level_cutoff} < interior_buffer={config.interior_buffer}")
        return code
    if truncs[0].level_cutoff - config.interior_buffer < 1 and config.samples > 0:
        handler.warn(f"vacuous excited interior: L={truncs[0].level_cutoff} leaves no level above the vacuum "
                     f"with interior_buffer={config.interior_buffer}")
    if len(truncs) == 1:
        handler.warn(f"single cutoff L={truncs[0].level_cutoff}: excited residuals cannot be compared across cutoffs")
    pairs = generate_interior_pairs(truncs[0], config.interior_buffer, config.samples, config.seed, ctx)
    result = desitter.verify_commutativity(alpha, config.m_range, truncs, config.interior_buffer, ctx,
                                           lambda t: pairs)
    for record in result["records"]:
        handler.add_record(record)
    handler.add_record({"summary": "commutativity",
                        "vacuum_exact_zero": result["vacuum_exact_zero"],
                        "excited_peaks": result["excited_peaks"],
                        "excited_decreasing": result["excited_decreasing"]})
    if code == EXIT_PASS:
        code = exit_code_of([r["verdict"] for r in result["records"]])
    return code


def _lambda_fit_record(family: str, m: int, n: int, config: RunConfig, ctx: ScalarContext, trunc, pair) -> Dict:
    alpha = config.alpha(ctx)
    values = []
    for lam in (ctx.convert(Fraction(1, 2)), ctx.one()):
        a = desitter.PerturbedGenerator(family, m, lam, alpha, ctx)
        b = desitter.PerturbedGenerator(family, n, lam, alpha, ctx)
        values.append(desitter.relation_residual(a, b, pair[0], pair[1], trunc, config.interior_buffer).value)
    linear, quadratic = quadratic_lambda_fit(*values)
    return {"fit": "lambda", "family": family, "m": m, "n": n,
            "linear": ctx.to_string(linear), "quadratic": ctx.to_string(quadratic),
            "verdict": desitter.PASS if ctx.is_zero(linear) else desitter.FAIL}


def run_verify_lorentz(config: RunConfig, handler: RecordAggregateHandler) -> int:
    ctx = config.context()
    trunc = config.truncation(ctx)
    alpha = config.alpha(ctx)
    lam = config.lambda_value(ctx)
    _check_lorentz_alpha(alpha)
    _check_arena(config, trunc, alpha, 1)
    outputmanager.info("===== verify-lorentz =====", trunc, "alpha", alpha, "lambda", lam)
    pairs = generate_interior_pairs(trunc, config.interior_buffer, config.samples, config.seed, ctx)
    records = desitter.verify_lorentz(lam, alpha, trunc, config.interior_buffer, ctx, pairs)
    fit = _lambda_fit_record(desitter.LORENTZ, 1, -1, config, ctx, trunc, pairs[0])
    records.append(fit)
    for record in records:
        handler.add_record(record)
    return exit_code_of([r["verdict"] for r in records])


def run_verify_virasoro_c0(config: RunConfig, handler: RecordAggregateHandler) -> int:
    ctx = config.context()
    trunc = config.truncation(ctx)
    alpha = config.alpha(ctx)
    lam = config.lambda_value(ctx)
    _check_lorentz_alpha(alpha)
    if lam != 0 and ctx.mode == EXACT_RATIONAL:
        raise UsageError("verify-virasoro-c0 with lambda != 0 needs --arithmetic exact-gaussian or float")
    _check_arena(config, trunc, alpha, config.m_range)
    outputmanager.info("===== verify-virasoro-c0 =====", trunc, "alpha", alpha, "lambda", lam)
    pairs = generate_interior_pairs(trunc, config.interior_buffer, config.samples, config.seed, ctx)
    records = desitter.verify_virasoro_c0(lam, alpha, config.m_range, trunc, config.interior_buffer, ctx, pairs)
    for record in records:
        handler.add_record(record)
    return exit_code_of([r["verdict"] for r in records])


def run_explore_d_half(config: RunConfig, handler: RecordAggregateHandler) -> int:
    ctx = config.context()
    trunc = config.truncation(ctx)
    alpha = config.alpha(ctx)
    lam = config.lambda_value(ctx)
    _check_arena(config, trunc, alpha, 2)
    outputmanager.info("===== explore-d-half =====", trunc, "alpha", alpha, "d", conformal_dimension(alpha))
    pairs = generate_interior_pairs(trunc, config.interior_buffer, config.samples, config.seed, ctx)
    report = desitter.explore_d_half(lam, alpha, trunc, config.interior_buffer, ctx, pairs,
                                     band_window=max(16, min(config.n_max, 256)))
    for record in report.pop("records"):
        record["diagnostic"] = True
        handler.add_record(record)
    handler.add_record(report)
    return EXIT_PASS


COMMANDS: Dict[str, Callable[[RunConfig, RecordAggregateHandler], int]] = {
    "verify-algebra": run_verify_algebra,
    "verify-decay": run_verify_decay,
    "converge": run_converge,
    "diverge-demo": run_diverge_demo,
    "verify-commutativity": run_verify_commutativity,
    "verify-lorentz": run_verify_lorentz,
    "verify-virasoro-c0": run_verify_virasoro_c0,
    "explore-d-half": run_explore_d_half,
}

# commands whose primary output is a CSV series, not the JSON report
SERIES_COMMANDS = ("converge", "diverge-demo")


def add_config_arguments(parser: argparse.ArgumentParser):
    parser.add_argument("--config", type=str, help="key=value config file", default=None)
    parser.add_argument("--loglevel", type=str, help="log level", default="INFO",
                        choices=["DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"])
    parser.add_argument("--logfile", type=str, help="also log to this file", default=None)
    parser.add_argument("--alpha0", type=str, help="charge lattice spacing, e.g. 1/2", default=None)
    parser.add_argument("--alpha_multiplier", type=int, help="alpha = multiplier * alpha0", default=None)
    parser.add_argument("--beta_multiplier", type=int, help="source sector j for decay tables", default=None)
    parser.add_argument("--level_cutoff", type=int, help="level cutoff L", default=None)
    parser.add_argument("--j_min", type=int, help="lowest charge sector", default=None)
    parser.add_argument("--j_max", type=int, help="highest charge sector", default=None)
    parser.add_argument("--lambda", dest="lam", type=str, help="perturbation strength", default=None)
    parser.add_argument("--arithmetic", type=str, help="scalar mode", default=None,
                        choices=["exact-rational", "exact-gaussian", "float"])
    parser.add_argument("--tolerance", type=float, help="absolute tolerance (float mode)", default=None)
    parser.add_argument("--seed", type=int, help="seed for sampled test pairs", default=None)
    parser.add_argument("--output", type=str, help="report path (stdout if omitted)", default=None)
    parser.add_argument("--n_max", type=int, help="largest band / series index", default=None)
    parser.add_argument("--m_list", type=str, help="Fourier modes, e.g. 0,1,-1", default=None)
    parser.add_argument("--m_range", type=int, help="largest |m|, |n|", default=None)
    parser.add_argument("--interior_buffer", type=int, help="levels kept free below L", default=None)
    parser.add_argument("--samples", type=int, help="sampled excited pairs", default=None)
    parser.add_argument("--inject_fault", type=str, help="harness self-test", default=None, choices=["none", "sugawara"])


CONFIG_KEYS = ("alpha0", "alpha_multiplier", "beta_multiplier", "level_cutoff", "j_min", "j_max", "lam",
               "arithmetic", "tolerance", "seed", "output", "n_max", "m_list", "m_range", "interior_buffer",
               "samples", "inject_fault")


def initialize_output(log_level: str, log_file: str = None):
    kwargs = {"log_level": log_level}
    if log_file:
        kwargs["output_dir"] = os.path.dirname(log_file) or "."
        kwargs["log_file_name"] = os.path.basename(log_file)
    outputmanager.basicConfig(**kwargs)


def main(argv: List[str] = None) -> int:
    description = "Charged Fock space identity verification harness"
    parser = HarnessArgumentParser(description=description)
    subparsers = parser.add_subparsers(dest="command")
    for name in COMMANDS:
        add_config_arguments(subparsers.add_parser(name))

    try:
        args = parser.parse_args(argv)
        if args.command is None:
            raise UsageError("a subcommand is required: " + ", ".join(COMMANDS))
        initialize_output(args.loglevel, args.logfile)
        overrides = {key: getattr(args, key) for key in CONFIG_KEYS}
        config = RunConfigBuilder().build(args.config, overrides)
    except (UsageError, ValueError, OSError) as e:
        outputmanager.error("usage:", e)
        return EXIT_USAGE

    outputmanager.debug("config:", json.dumps(config.to_dict(), sort_keys=True))
    handler = RecordAggregateHandler(args.command, to_string=config.context().to_string)
    handler.set_context(**config.to_dict())
    try:
        code = COMMANDS[args.command](config, handler)
        if args.command in SERIES_COMMANDS:
            report = series_report_output(config.output)
            if report is None:
                outputmanager.debug("report:", handler.get_message())
            else:
                write_output(report, handler.get_message())
        else:
            write_output(config.output, handler.get_message())
    except (UsageError, OSError) as e:
        outputmanager.error("usage:", e)
        return EXIT_USAGE
    outputmanager.info(args.command, "exit code", code)
    return code


if __name__ == "__main__":
    sys.exit(main())
