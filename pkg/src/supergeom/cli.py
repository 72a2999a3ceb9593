"""Command-line driver: ``gsa <command> FILE [options]``.

Exit codes: 0 success, 1 usage or I/O error, 2 validation failure, 3 parse
error, 4 internal invariant violation.
"""
from __future__ import annotations

import argparse
import os
import sys

from . import perms
from .bundle import ValidationError, permute_atlas, validate_atlas
from .dsl import DslError, emit_atlas, loads
from .laws import SUITES, run_suite
from .parity import reverse_parity
from .polar import desuperize, diagonalize, polarize
from .superalg import GsaError, InternalInvariantError
from .symmetry import ActionTable, nice_coordinates, validate_action
from .tangent import iterated_tangent, tangent_of_atlas

EXIT_OK, EXIT_USAGE, EXIT_INVALID, EXIT_PARSE, EXIT_INTERNAL = 0, 1, 2, 3, 4


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on usage errors, which is reserved for validation failures
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _default_seed() -> int:
    raw = os.environ.get("GSA_SEED", "0")
    try:
        return int(raw)
    except ValueError:
        return 0


def _read(path: str):
    text = sys.stdin.read() if path == "-" else open(path, encoding="utf-8").read()
    return loads(text)


def _require_valid(a, what="input atlas"):
    rep = validate_atlas(a)
    if not rep.ok:
        raise ValidationError(rep, f"{what} is invalid:\n{rep}")


def _write(args, atlas, action=None) -> int:
    out = emit_atlas(atlas, args.format, action)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(out)
    else:
        sys.stdout.write(out)
    return EXIT_OK


def cmd_validate(args) -> int:
    doc = _read(args.file)
    rep = validate_atlas(doc.atlas)
    if doc.action is not None:
        rep.extend(validate_action(doc.atlas, doc.action), prefix="action ")
    text = str(rep) if args.verbose else "\n".join(str(c) for c in rep.failures)
    if text:
        print(text)
    print("valid" if rep.ok else f"invalid: {len(rep.failures)} failed checks")
    return EXIT_OK if rep.ok else EXIT_INVALID


def cmd_tangent(args) -> int:
    doc = _read(args.file)
    _require_valid(doc.atlas)
    if args.times == 1:
        return _write(args, tangent_of_atlas(doc.atlas))
    it = iterated_tangent(doc.atlas, args.times)
    action = it.action() if doc.atlas.kind.vector_slots == 0 else None
    return _write(args, it.atlas, action)


def cmd_polarize(args) -> int:
    doc = _read(args.file)
    p = polarize(doc.atlas, args.degree)
    return _write(args, p.atlas, p.action)


def _slots(raw: str, n: int) -> list[int]:
    if raw == "all":
        return list(range(n, 0, -1))
    try:
        return [int(x) for x in raw.replace(",", " ").split()]
    except ValueError:
        raise ValueError(f"--slots expects a list of slot numbers or 'all', got {raw!r}") from None


def cmd_reverse_parity(args) -> int:
    doc = _read(args.file)
    _require_valid(doc.atlas)
    a = doc.atlas
    for s in _slots(args.slots, a.kind.vector_slots):
        a = reverse_parity(a, s)
    return _write(args, a)


def _perm(raw: str, n: int) -> tuple[int, ...]:
    try:
        sigma = perms.parse(raw)
    except ValueError:
        raise ValueError(f"--perm expects a one-line permutation such as '2 1 3', got {raw!r}") from None
    if len(sigma) != n:
        raise ValueError(f"--perm has size {len(sigma)}, the bundle has {n} vector slots")
    return sigma


def cmd_flip(args) -> int:
    doc = _read(args.file)
    _require_valid(doc.atlas)
    if args.tangent:
        it = iterated_tangent(doc.atlas, args.tangent)
        sigma = _perm(args.perm, args.tangent)
        full = it.full_sigma(sigma)
        target = permute_atlas(it.atlas, full)
        entry = {u: it.flip_map(sigma) for u in it.atlas.chart_names}
        return _write(args, target, ActionTable(target, {full: entry}))
    sigma = _perm(args.perm, doc.atlas.kind.vector_slots)
    return _write(args, permute_atlas(doc.atlas, sigma))


def _need_action(doc, command: str):
    if doc.action is None:
        raise ValueError(f"{command} needs a document with an action table")
    return doc.action


def cmd_nice_coords(args) -> int:
    doc = _read(args.file)
    _require_valid(doc.atlas)
    res = nice_coordinates(doc.atlas, _need_action(doc, "nice-coords"))
    return _write(args, res.atlas, res.action)


def cmd_desuperize(args) -> int:
    doc = _read(args.file)
    ds = desuperize(doc.atlas, args.degree)
    return _write(args, ds.atlas, ds.action)


def cmd_diagonalize(args) -> int:
    doc = _read(args.file)
    _require_valid(doc.atlas)
    if doc.atlas.kind.is_weighted:
        d = diagonalize(polarize(doc.atlas))
    else:
        d = diagonalize((doc.atlas, _need_action(doc, "diagonalize")))
    return _write(args, d.atlas)


def cmd_check_laws(args) -> int:
    names = list(SUITES) if args.suite == "all" else [args.suite]
    failed = 0
    for name in names:
        n_max = args.n_max if args.n_max is not None else (4 if name == "koszul" else 3)
        for row in run_suite(name, args.seed, n_max, args.count):
            print(row.line())
            failed += not row.ok
    print(f"{'all laws hold' if not failed else f'{failed} laws failed'} (seed {args.seed})")
    return EXIT_OK if not failed else EXIT_INVALID


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="gsa", description="Graded supermanifold atlases: validation, functors and law checks.")
    parser.add_argument("--format", choices=["dsl", "json"], default="dsl", help="output format (default: dsl)")
    parser.add_argument("--output", "-o", help="write the result here instead of stdout")
    sub = parser.add_subparsers(dest="command", metavar="COMMAND", parser_class=_Parser)
    sub.required = True

    def command(name, fn, help_text, needs_file=True):
        p = sub.add_parser(name, help=help_text, description=help_text)
        # also accepted after the command name; SUPPRESS keeps the top-level value otherwise
        p.add_argument("--format", choices=["dsl", "json"], default=argparse.SUPPRESS)
        p.add_argument("--output", "-o", default=argparse.SUPPRESS)
        if needs_file:
            p.add_argument("file", help="input .gsa or .json document ('-' for stdin)")
        p.set_defaults(func=fn)
        return p

    p = command("validate", cmd_validate, "check an atlas (and its action table, if any)")
    p.add_argument("--verbose", "-v", action="store_true", help="list passing checks too")
    p = command("tangent", cmd_tangent, "apply the tangent functor")
    p.add_argument("--times", type=int, default=1, help="number of applications (default 1)")
    p = command("polarize", cmd_polarize, "polarize an N-weighted atlas")
    p.add_argument("--degree", type=int, default=None, help="polarization degree (default: the atlas degree)")
    p = command("reverse-parity", cmd_reverse_parity, "reverse parity in the given vector slots")
    p.add_argument("--slots", required=True, help="slots applied left to right, e.g. '2 1', or 'all'")
    p = command("flip", cmd_flip, "permute the vector-bundle structures")
    p.add_argument("--perm", required=True, help="1-based one-line permutation, e.g. '2 1 3'")
    p.add_argument("--tangent", type=int, default=0, help="first take the k-fold tangent and emit the flip I^sigma")
    command("nice-coords", cmd_nice_coords, "rewrite a symmetric action in nice coordinates")
    p = command("desuperize", cmd_desuperize, "polarize then totally reverse parity")
    p.add_argument("--degree", type=int, default=None)
    command("diagonalize", cmd_diagonalize, "diagonal of a symmetric atlas (N-weighted input is polarized first)")
    p = command("check-laws", cmd_check_laws, "run seeded invariant suites and print a pass/fail matrix", needs_file=False)
    p.add_argument("--suite", default="all", choices=["all", *SUITES])
    p.add_argument("--seed", type=int, default=_default_seed(), help="default: $GSA_SEED or 0")
    p.add_argument("--n-max", type=int, default=None, help="largest symmetric group size")
    p.add_argument("--count", type=int, default=None, help="random cases per suite")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except DslError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except ValidationError as exc:
        print(f"validation failure: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except InternalInvariantError as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    except (GsaError, ValueError, OSError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


run_command = main


if __name__ == "__main__":
    sys.exit(main())
