"""decntt command line: multiply, benchmark, list primes, self-test."""
import argparse
import sys

from .modword import AdjustStrategy, set_default_strategy

STRATEGIES = ("cselect", "bitwise")


def _read_operand(path):
    with open(path, encoding="ascii") as f:
        text = f.read()
    if text.endswith("\n"):
        text = text[:-1]
    return text


def cmd_mul(args):
    from .decmul import DecimalNumber, OperandTooLarge, multiply

    if args.file:
        a, b = _read_operand(args.file[0]), _read_operand(args.file[1])
    else:
        if len(args.operands) != 2:
            print("mul: need two operands (or --file FA FB)", file=sys.stderr)
            return 2
        a, b = args.operands
    try:
        x, y = DecimalNumber(a), DecimalNumber(b)
    except ValueError as e:
        print(f"mul: {e}", file=sys.stderr)
        return 2
    try:
        product = multiply(x, y, args.adjust_strategy)
    except OperandTooLarge as e:
        print(f"mul: {e}", file=sys.stderr)
        return 3
    sys.stdout.write(product.text + "\n")
    return 0


def cmd_bench_modmul(args):
    from .bench import bench_modmul

    report = bench_modmul(args.variant, args.n, args.adjust_strategy)
    print(report.kv_line())
    print(report.summary())
    return 0


def cmd_bench_mul(args):
    from .bench import bench_mul, sweep_sizes

    sizes = sweep_sizes(args.digits, args.sweep) if args.sweep else [args.digits]
    prev = None
    for d in sizes:
        t = bench_mul(d, args.iters, args.adjust_strategy, budget=args.budget)
        line = t.kv_line()
        if prev is not None:
            line += f" ratio_vs_prev={t.best / prev.best:.3f}"
        print(line)
        prev = t
    return 0


def cmd_primes(args):
    from .primegen import N_MIN, PrimeSearchError, PrimeSpec, describe, find_primes

    n_min = N_MIN if args.nmin is None else args.nmin
    try:
        primes = find_primes(64, n_min, args.ell)
    except PrimeSearchError as e:
        print(f"primes: {e}", file=sys.stderr)
        return 1
    for p in primes:
        print(describe(PrimeSpec.decompose(p)))
    return 0


def cmd_selftest(args):
    from .selftest import run_selftest

    failures = run_selftest(args.adjust_strategy, inject_fault=args.inject_fault)
    print("selftest: " + ("passed" if not failures else f"{failures} check(s) failed"))
    return 1 if failures else 0


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--adjust-strategy", choices=STRATEGIES, default=argparse.SUPPRESS,
                        help="how modular results are brought back into [0, p)")

    parser = argparse.ArgumentParser(prog="decntt", parents=[common],
                                     description="Exact decimal multiplication via NTT")
    parser.set_defaults(adjust_strategy="cselect")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("mul", parents=[common], help="multiply two decimal integers")
    p.add_argument("operands", nargs="*", metavar="N")
    p.add_argument("--file", nargs=2, metavar=("FA", "FB"), help="read operands from files")
    p.set_defaults(func=cmd_mul)

    bench = sub.add_parser("bench", parents=[common], help="benchmarks")
    bsub = bench.add_subparsers(dest="bench_command", required=True)
    b = bsub.add_parser("modmul", parents=[common], help="chained modular multiplications")
    b.add_argument("--variant", choices=("naive", "montgomery", "solinas"), required=True)
    b.add_argument("--n", type=_positive, default=10 ** 7, help="iterations of 10 multiplications")
    b.set_defaults(func=cmd_bench_modmul)
    b = bsub.add_parser("mul", parents=[common], help="decimal multiplication timing")
    b.add_argument("--digits", type=_positive, required=True)
    b.add_argument("--iters", type=_positive, default=None,
                   help="multiplications per size (default 8e7 // digits)")
    b.add_argument("--sweep", type=_positive, metavar="MAX_DIGITS",
                   help="double the size up to MAX_DIGITS")
    b.add_argument("--budget", type=float, default=None, help="seconds per size, at most")
    b.set_defaults(func=cmd_bench_mul)

    p = sub.add_parser("primes", parents=[common], help="list the NTT prime moduli")
    p.add_argument("--nmin", type=_positive, default=None)
    p.add_argument("--ell", type=_positive, default=2, help=argparse.SUPPRESS)
    p.set_defaults(func=cmd_primes)

    p = sub.add_parser("selftest", parents=[common], help="run quick consistency checks")
    p.add_argument("--inject-fault", action="store_true", help=argparse.SUPPRESS)
    p.set_defaults(func=cmd_selftest)
    return parser


def _positive(text):
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("must be positive")
    return v


def main(argv=None):
    args = build_parser().parse_args(argv)
    args.adjust_strategy = AdjustStrategy.parse(args.adjust_strategy)
    set_default_strategy(args.adjust_strategy)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
