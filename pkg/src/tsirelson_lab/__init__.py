def _build_parser():
    import argparse

    parser = argparse.ArgumentParser(
        prog="tsirelson-lab",
        description="Exact norms, dual enclosures and Monte Carlo probes for T, T^2 and S(T^2)"
    )
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--space", type=str, default=None,
                        help="Space: 't', 't2' or 'st2'. Defaults to 't2' ('st2' for snorm).")
    common.add_argument("--input", type=str, action="append", default=[],
                        help="Input vector literal (JSON) or report (CSV) path.")
    common.add_argument("--out", type=str, default=None, help="Output path, stdout when omitted.")
    common.add_argument("--seed", type=int, default=0, help="Seed of the Gaussian stream.")
    common.add_argument("--samples", type=int, default=2000, help="Monte Carlo sample count.")
    common.add_argument("--workers", type=int, default=1, help="Worker processes, 0 = one per physical core.")
    common.add_argument("--tol", type=float, default=1e-9, help="Absolute tolerance of norm comparisons.")
    common.add_argument("--gap-target", type=float, default=1e-6, help="Target gap of dual enclosures.")
    common.add_argument("--max-support", type=int, default=None,
                        help="Support cap. Use environment variable 'TSL_MAX_SUPPORT' if not provided.")
    common.add_argument("--certificate", type=str, default=None, help="Where to write the norming tree (JSON).")

    commands = parser.add_subparsers(dest="command", required=True)
    for name, text in (("norm", "||x|| in T or T^2 with a norming tree"),
                       ("snorm", "||x|| in S(T^2)"),
                       ("dualnorm", "Certified enclosure of a dual norm"),
                       ("rearrange", "Decreasing rearrangement Dx"),
                       ("plot-data", "Two-column CSV per series of a saved report")):
        commands.add_parser(name, parents=[common], help=text)

    spread = commands.add_parser("spread", parents=[common], help="Spread operator L_k^j")
    spread.add_argument("--k", type=int, default=1, help="Spread factor k >= 1.")
    spread.add_argument("--j", type=int, default=0, help="Offset 0 <= j < k.")

    hierarchy = commands.add_parser("hierarchy", parents=[common], help="g_i(n), exp_i(n), log_i(n), N(k, eps)")
    hierarchy.add_argument("kind", choices=["g", "exp", "log", "kwapien"])
    hierarchy.add_argument("--i", type=int, default=0, help="Level or iteration count.")
    hierarchy.add_argument("--n", type=float, default=1, help="Argument.")
    hierarchy.add_argument("--k", type=int, default=1, help="Dimension of N(k, eps).")
    hierarchy.add_argument("--eps", type=float, default=0.5, help="Accuracy of N(k, eps).")

    probe = commands.add_parser("probe", parents=[common], help="Run a probe and write its CSV report")
    probe.add_argument("probe", type=str,
                       help="cotype, type, prop-p, separated, h-growth, upper-h, spread, distortion or lower-h2.")
    probe.add_argument("--n", type=int, nargs="+", default=None, help="Family sizes (spread factors for 'spread').")
    probe.add_argument("--offset", type=int, default=None, help="First basis index of the families.")
    probe.add_argument("--block-len", type=int, nargs="+", default=None, help="Block lengths.")
    probe.add_argument("--copies", type=int, default=None, help="Disjoint copies summed by 'upper-h'.")
    probe.add_argument("--N", type=int, default=None, help="Ambient support of 'separated'.")
    probe.add_argument("--families", type=int, default=None, help="Random families per size for 'separated'.")
    probe.add_argument("--p", type=float, default=None, help="Type exponent.")
    probe.add_argument("--q", type=float, default=None, help="Cotype exponent.")
    probe.add_argument("--candidates", type=int, default=None, help="Random directions of 'distortion'.")
    return parser


def _params(args) -> dict:
    if args.command == "spread":
        return {"k": args.k, "j": args.j}
    if args.command == "hierarchy":
        params = {"kind": args.kind}
        if args.kind == "kwapien":
            params.update(k=args.k, eps=args.eps)
        else:
            params.update(i=args.i, n=int(args.n) if args.kind == "g" else args.n)
        return params
    if args.command != "probe":
        return {}
    params = {"ns": args.n, "offset": args.offset, "copies": args.copies, "N": args.N, "families": args.families,
              "p": args.p, "q": args.q, "candidates": args.candidates}
    if args.block_len:
        if args.probe == "spread":
            params["block_len"] = args.block_len[0]
        else:
            params["block_lens"] = args.block_len
    return {k: v for k, v in params.items() if v is not None}


def main(argv: list[str] | None = None) -> int:
    import sys

    from pydantic import ValidationError

    from .logger import get_logger
    from .schema import RunConfig, Space

    log = get_logger()
    try:
        args = _build_parser().parse_args(argv)
    except SystemExit as e:
        # argparse has already printed usage; any malformed flag is an argument error.
        return 0 if e.code in (0, None) else 1
    space = args.space or (Space.ST2.value if args.command == "snorm" else Space.T2.value)
    try:
        config = RunConfig(command=args.command, space=Space.parse(space), inputs=args.input, output=args.out,
                           certificate=args.certificate, seed=args.seed, samples=args.samples,
                           workers=args.workers, tol=args.tol, gap_target=args.gap_target,
                           max_support=args.max_support, probe=getattr(args, "probe", None),
                           params=_params(args))
    except (ValidationError, ValueError) as e:
        log.debug(f"Rejected arguments: {e}")
        print(f"tsirelson-lab {args.command}: invalid arguments: {e}", file=sys.stderr)
        return 1

    from .cli import run
    return run(config)
