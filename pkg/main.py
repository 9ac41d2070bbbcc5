import argparse
import json
import sys
from typing import List, Optional

from certificates import CertificateError, dump_text, read, write
from engine import EngineConfig, prove_format, write_summary
from errors import MMRankError, ResourceLimitError
from logger import logger, set_progress
from oracle import exhaustive_rank_leq
from orbits import (
    RestrictionSet,
    STRUCTURES,
    dump_catalog,
    enumerate_orbits,
    load_catalog,
    orbit_count_lower_bound,
    structured_restrictions,
)
from orbits.restriction import format_functional
from tensors import build_restricted_tensor
from verifier import VerificationError, verify

EXIT_OK = 0
EXIT_ENVIRONMENT = 1
EXIT_REJECTED = 2


def _emit(args, payload: dict, text: str):
    if args.json:
        print(json.dumps(payload))
    else:
        print(text)


def _config(args) -> EngineConfig:
    return EngineConfig.load(
        getattr(args, "config", None),
        step_limit=getattr(args, "step_limit", None),
        fp_bit_cap=getattr(args, "fp_bits", None),
        thread_count=getattr(args, "threads", None),
    )


def cmd_orbits(args) -> int:
    config = _config(args)
    catalog = enumerate_orbits(
        args.l,
        args.m,
        args.square,
        config.shard_count,
        config.memory_budget,
        use_invariants=args.invariants,
    )
    counts = catalog.counts_by_dimension()
    estimate = orbit_count_lower_bound(args.l, args.m, args.square)
    if args.out:
        with open(args.out, "wb") as f:
            dump_catalog(catalog, f)
        logger.info("catalog written", extra={"path": args.out, "orbits": len(catalog)})
    lines = [f"d={d}: {count}" for d, count in enumerate(counts)]
    lines.append(f"total: {len(catalog)} (counting estimate {float(estimate):.2f})")
    payload = {
        "l": args.l,
        "m": args.m,
        "square": args.square,
        "counts": counts,
        "total": len(catalog),
        "lower_bound": str(estimate),
    }
    _emit(args, payload, "\n".join(lines))
    return EXIT_OK


def cmd_prove(args) -> int:
    config = _config(args)
    catalog = None
    if args.catalog:
        with open(args.catalog, "rb") as f:
            catalog = load_catalog(f, config.shard_count, config.memory_budget)
    result = prove_format(args.l, args.m, args.n, config, args.target, catalog)
    with open(args.cert, "wb") as f:
        size = write(result.certificate, f)
    if args.summary:
        with open(args.summary, "w") as f:
            write_summary(result, f)
    lines = [
        f"orbit {e.orbit_id}: bound {e.bound} ({e.kind.label})" for e in result.entries
    ]
    lines.append(f"lower bound: {result.final_bound}")
    payload = {
        "format": result.certificate.header.format,
        "final_bound": result.final_bound,
        "certificate": args.cert,
        "certificate_bytes": size,
        "orbits": [
            {"orbit": e.orbit_id, "bound": e.bound, "technique": e.kind.label, "steps": e.steps}
            for e in result.entries
        ],
    }
    _emit(args, payload, "\n".join(lines))
    return EXIT_OK


def cmd_verify(args) -> int:
    config = _config(args)
    with open(args.cert, "rb") as f:
        cert = read(f)
    verified = verify(cert, config)
    _emit(args, verified.summary(), f"verified lower bound: {verified.final_bound}")
    return EXIT_OK


def cmd_dump(args) -> int:
    with open(args.cert, "rb") as f:
        cert = read(f)
    header = cert.header
    payload = {
        "format": header.format,
        "final_bound": header.final_bound,
        "orbits": [
            {
                "orbit": i,
                "dimension": r.dimension,
                "restrictions": [format_functional(w, header.l, header.m) for w in r.basis],
                "bound": r.bound,
                "technique": r.technique.kind.label,
            }
            for i, r in enumerate(cert.orbits)
        ],
    }
    _emit(args, payload, dump_text(cert).rstrip("\n"))
    return EXIT_OK


def _restriction_from_args(args, l: int, m: int) -> RestrictionSet:
    if args.structure:
        return structured_restrictions(args.structure, l, m)
    return RestrictionSet.parse(l, m, args.restrict or [])


def cmd_lookup(args) -> int:
    config = _config(args)
    with open(args.cert, "rb") as f:
        cert = read(f)
    header = cert.header
    verified = verify(cert, config)
    restriction = _restriction_from_args(args, header.l, header.m)
    catalog = enumerate_orbits(
        header.l, header.m, header.square, config.shard_count, config.memory_budget
    )
    orbit_id, _ = catalog.canonicalize(restriction)
    bound = verified.table[orbit_id]
    payload = {
        "format": header.format,
        "restrictions": restriction.describe(),
        "orbit": orbit_id,
        "bound": bound,
    }
    _emit(args, payload, f"{restriction.describe()} is orbit {orbit_id}: rank >= {bound}")
    return EXIT_OK


def cmd_dev(args) -> int:
    restriction = RestrictionSet.parse(args.l, args.m, args.restrict or [])
    T = build_restricted_tensor(args.l, args.m, args.n, restriction)
    answer = exhaustive_rank_leq(T, args.r)
    payload = {"restrictions": restriction.describe(), "r": args.r, "rank_leq": answer}
    _emit(args, payload, f"rank <= {args.r}: {answer}")
    return EXIT_OK


def _count(text: str) -> int:
    # accepts 10000000 and 1e7
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a count: {text!r}")
    if value != int(value):
        raise argparse.ArgumentTypeError(f"not a whole number: {text!r}")
    return int(value)


def build_parser() -> argparse.ArgumentParser:
    arg_parser = argparse.ArgumentParser(
        description="Tensor-rank lower bounds for small matrix multiplication over F2. "
        "Restrictions always apply to the first factor; pass any cyclic rotation of "
        "the format to restrict a different one."
    )
    sub = arg_parser.add_subparsers(dest="command", required=True)

    def common(p, engine: bool = True, threads: bool = True):
        p.add_argument("--json", action="store_true", help="Print machine-readable JSON")
        if engine:
            p.add_argument("--config", default=None, help="Engine config JSON file")
        if engine and threads:
            p.add_argument("--threads", type=int, default=None, help="Worker threads")

    p = sub.add_parser("orbits", help="Enumerate restriction-subspace orbits")
    p.add_argument("l", type=int)
    p.add_argument("m", type=int)
    p.add_argument("--square", action="store_true", help="Include the transpose symmetry")
    p.add_argument("--out", default=None, help="Write the catalog to this file")
    p.add_argument(
        "--invariants", action="store_true", help="Use orbit invariants to skip lookups"
    )
    # catalog enumeration runs in one thread
    common(p, threads=False)
    p.set_defaults(func=cmd_orbits)

    p = sub.add_parser("prove", help="Prove a lower bound and write its certificate")
    p.add_argument("l", type=int)
    p.add_argument("m", type=int)
    p.add_argument("n", type=int)
    p.add_argument("--target", type=int, default=None, help="Stop once the format reaches it")
    p.add_argument("--step-limit", type=_count, default=None, help="Nodes per substitution attempt")
    p.add_argument("--fp-bits", type=int, default=None, help="Skip forced product at s(t-s) >= this")
    p.add_argument("--cert", required=True, help="Certificate output path")
    p.add_argument("--catalog", default=None, help="Reuse a catalog written by `orbits --out`")
    p.add_argument("--summary", default=None, help="Write a JSON-lines run summary here")
    common(p)
    p.set_defaults(func=cmd_prove)

    p = sub.add_parser("verify", help="Verify a certificate")
    p.add_argument("--cert", required=True)
    common(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("dump", help="Print a certificate as text")
    p.add_argument("--cert", required=True)
    common(p, engine=False)
    p.set_defaults(func=cmd_dump)

    p = sub.add_parser("lookup", help="Verified bound for a structured or restricted product")
    p.add_argument("--cert", required=True)
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--structure", choices=sorted(STRUCTURES))
    group.add_argument("--restrict", nargs="+", help="Functionals such as a_{0,1}+a_{1,0}")
    common(p)
    p.set_defaults(func=cmd_lookup)

    p = sub.add_parser("dev", help="Exhaustive rank oracle for tiny restricted tensors")
    p.add_argument("l", type=int)
    p.add_argument("m", type=int)
    p.add_argument("n", type=int)
    p.add_argument("r", type=int)
    p.add_argument("--restrict", nargs="*", help="Functionals set to zero")
    common(p, engine=False)
    p.set_defaults(func=cmd_dev)
    return arg_parser


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    set_progress(not args.json and sys.stderr.isatty())
    try:
        return args.func(args)
    except VerificationError as e:
        logger.error(f"Verification failed: {e}", extra=e.as_dict())
        if args.json:
            print(json.dumps({"status": "rejected", **e.as_dict()}))
        return EXIT_REJECTED
    except CertificateError as e:
        logger.error(f"Certificate rejected: {e}", extra={"code": e.code})
        if args.json:
            print(json.dumps({"status": "rejected", "code": e.code, "detail": str(e)}))
        return EXIT_REJECTED
    except (OSError, ResourceLimitError) as e:
        logger.error(f"Environment error: {e}")
        return EXIT_ENVIRONMENT
    except MMRankError as e:
        logger.error(f"Invalid request: {e}")
        return EXIT_ENVIRONMENT


if __name__ == "__main__":
    sys.exit(main())
