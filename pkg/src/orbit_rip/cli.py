"""Command-line entry point: ``orbit-rip {verify,phase,scaling,constant,matrix}``.

Exit status is 0 when every check or cell completes, 2 when a verification
check fails, and 1 for configuration or runtime errors.
"""
import argparse
import sys

from ._rng import derive_seed
from .analysis import omega_two, orbit_constant_exact, to_record
from .errors import OrbitRipError
from .experiments import (
    load_config,
    monotonicity_violations,
    prepare,
    run_delta_scaling,
    run_phase_transition,
    run_verification_suite,
    trial_matrix,
)
from .groups import random_sampling_set
from .sensing import write_matrix


def _emit(text, out):
    if out is None or out == "-":
        sys.stdout.write(text)
    else:
        with open(out, "w") as fh:
            fh.write(text)


def _config(args):
    if args.config is None:
        raise OrbitRipError(f"'{args.command}' needs --config PATH")
    config = load_config(args.config)
    return config.with_seed(args.seed) if args.seed is not None else config


def cmd_verify(args):
    seed = args.seed
    if seed is None:
        seed = load_config(args.config).master_seed if args.config else 0
    report = run_verification_suite(seed=seed)
    _emit(report.to_text(), args.out)
    return 0 if report.passed else 2


def cmd_phase(args):
    table = run_phase_transition(_config(args), workers=args.workers)
    _emit(table.to_csv(), args.out)
    return 0


def cmd_scaling(args):
    table = run_delta_scaling(_config(args), workers=args.workers)
    _emit(table.to_csv(), args.out)
    for s, slope in sorted(table.slopes.items()):
        print(f"slope[s={s}] = {slope:.17g}", file=sys.stderr)
    for s, m1, m2 in monotonicity_violations(table):
        print(f"warning: success rate drops from m={m1} to m={m2} at s={s}", file=sys.stderr)
    return 0


def cmd_constant(args):
    config = _config(args)
    setup = prepare(config)
    pairs = [("group", setup.group.label), ("representation", setup.rep.label)]
    for m in config.m_list:
        omega = random_sampling_set(setup.group, m, setup.allowed,
                                    seed=derive_seed(config.master_seed, "constant", m))
        report = orbit_constant_exact(setup.rep, omega)
        pairs += [(f"m={m}.omega", omega.elements), (f"m={m}.orbit_constant", report.value),
                  (f"m={m}.argmax_index", report.argmax_index)]
        if setup.group.kind == "affine":
            pairs.append((f"m={m}.omega_two_size", len(omega_two(omega))))
    _emit(to_record(pairs), args.out)
    return 0


def cmd_matrix(args):
    config = _config(args)
    setup = prepare(config)
    m = args.m if args.m is not None else config.m_list[0]
    if not 1 <= m <= (setup.group.order if setup.allowed is None else len(setup.allowed)):
        raise OrbitRipError(f"m = {m} is infeasible for {setup.group.label}")
    phi = trial_matrix(setup, m, config.sparsity_list[0], args.trial)
    if args.out is None or args.out == "-":
        write_matrix(sys.stdout, phi.entries)
    else:
        write_matrix(args.out, phi.entries)
    print(f"rep = {phi.rep_label}\nomega = {' '.join(map(str, phi.omega.elements))}\n"
          f"distribution = {phi.generator.distribution}\nxi_seed = {phi.generator.seed}",
          file=sys.stderr)
    return 0


def build_parser():
    parser = argparse.ArgumentParser(prog="orbit-rip", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    commands = {
        "verify": (cmd_verify, "run the orbit-constant and representation checks"),
        "phase": (cmd_phase, "phase-transition sweep, CSV output"),
        "scaling": (cmd_scaling, "sweep with exact delta_s and log-log slope"),
        "constant": (cmd_constant, "exact orbit constants for seeded sampling sets"),
        "matrix": (cmd_matrix, "export one measurement matrix"),
    }
    for name, (func, help_text) in commands.items():
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--config", metavar="PATH")
        p.add_argument("--seed", type=int, metavar="U64", help="overrides master_seed")
        p.add_argument("--out", metavar="PATH", help="output file (default stdout)")
        if name in ("phase", "scaling"):
            p.add_argument("--workers", type=int, help="worker threads (default $ORBIT_RIP_THREADS)")
        if name == "matrix":
            p.add_argument("--m", type=int, help="number of rows (default first of m_list)")
            p.add_argument("--trial", type=int, default=0)
        p.set_defaults(func=func)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (OrbitRipError, OSError) as exc:
        print(f"orbit-rip: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
