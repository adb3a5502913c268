"""Command-line harness: ``symdis {approx-layer,hard-dist,learn,verify}``.

Reports go to stdout as JSON (default) or CSV; ``--out`` writes the run's
artifact (layer polynomial, weight profile, hypothesis).  Exit codes: 0 ok,
1 invalid input, 2 a property check failed.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from fractions import Fraction

from symdis import __version__, cube, learner, lpcore, polyapprox, verify
from symdis._rational import as_fraction, decimal_str, to_str
from symdis.cube import Disjunction, WeightProfile

EXIT_OK, EXIT_INVALID, EXIT_CHECK = 0, 1, 2
HARD_DIST_CAP = 60


class InvalidInput(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise InvalidInput(message)


def _index_list(text: str) -> frozenset:
    if text is None or text.strip() == "":
        return frozenset()
    try:
        return frozenset(int(tok) for tok in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated indices, got {text!r}") from None


def _rational(text: str) -> Fraction:
    try:
        return as_fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational: {text!r}") from None


def _degree_range(text: str) -> list:
    for sep in ("..", ":"):
        if sep in text:
            lo, hi = text.split(sep)
            return list(range(int(lo), int(hi) + 1))
    return [int(text)]


def _epsilon(eps: Fraction) -> Fraction:
    if not 0 < eps < 1:
        raise InvalidInput(f"--epsilon must lie in (0, 1), got {eps}")
    return eps


def _clause(args, n: int) -> Disjunction:
    pos, neg = args.pos, args.neg
    if not pos and not neg and args.k is not None:
        pos = frozenset(range(1, args.k + 1))
    try:
        return Disjunction(n, pos, neg)
    except ValueError as exc:
        raise InvalidInput(str(exc)) from None


def _exact(q) -> dict:
    return {"exact": to_str(q), "decimal": decimal_str(q)}


def _provenance() -> dict:
    mods = ("cube", "polyapprox", "lpcore", "learner", "parity", "cli")
    return {"package": "symdis", "version": __version__, "modules": {m: __version__ for m in mods}}


def _config(args) -> dict:
    out = {}
    for key, value in sorted(vars(args).items()):
        if key == "func":
            continue
        if isinstance(value, frozenset):
            value = sorted(value)
        elif isinstance(value, Fraction):
            value = to_str(value)
        elif isinstance(value, list):
            value = list(value)
        out[key] = value
    return out


def _emit(args, results: dict, rows: list, columns: list) -> str:
    """Render the report; rows are dicts whose rational cells are Fractions."""
    if args.format == "csv":
        buf = io.StringIO()
        buf.write(f"# command={args.command}\n")
        for key, value in _config(args).items():
            buf.write(f"# config.{key}={json.dumps(value)}\n")
        for key, value in _provenance().items():
            buf.write(f"# provenance.{key}={json.dumps(value, sort_keys=True)}\n")
        header = []
        for col in columns:
            if any(isinstance(r.get(col), Fraction) for r in rows):
                header += [col, f"{col}_exact"]
            else:
                header.append(col)
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(header)
        for r in rows:
            line = []
            for col in columns:
                v = r.get(col)
                if isinstance(v, Fraction):
                    line += [decimal_str(v), to_str(v)]
                elif col in header and f"{col}_exact" in header:
                    line += ["", ""]
                else:
                    line.append("" if v is None else (json.dumps(v) if isinstance(v, (list, dict, bool)) else v))
            writer.writerow(line)
        return buf.getvalue()

    def jsonable(v):
        if isinstance(v, Fraction):
            return _exact(v)
        if isinstance(v, dict):
            return {k: jsonable(x) for k, x in v.items()}
        if isinstance(v, (list, tuple)):
            return [jsonable(x) for x in v]
        return v

    report = {
        "command": args.command,
        "config": _config(args),
        "provenance": _provenance(),
        "results": jsonable(results),
        "rows": jsonable(rows),
    }
    return json.dumps(report, indent=2) + "\n"


def _write_json(path, obj) -> None:
    with open(path, "w") as fh:
        json.dump(obj, fh, indent=2)
        fh.write("\n")


def cmd_approx_layer(args) -> tuple:
    eps = _epsilon(args.epsilon)
    profile = None
    if args.r is None:
        if not args.input:
            raise InvalidInput("approx-layer needs --r or a profile via --in")
        profile = _load_dist(args.input)
        if not isinstance(profile, WeightProfile):
            raise InvalidInput("approx-layer --in must be a symmetric profile")
        n = profile.n
    else:
        if args.n is None:
            raise InvalidInput("approx-layer needs --n")
        n = args.n
        if not 0 <= args.r <= n:
            raise InvalidInput(f"--r must lie in 0..{n}")
    c = _clause(args, n)
    layers = [args.r] if profile is None else [r for r, m in enumerate(profile.rho) if m]
    can_enumerate = n <= cube.enum_cap()
    rows, polys = [], []
    ok = True
    for r in layers:
        p = polyapprox.approximate_disjunction_on_layer(c, r, eps)
        l1, l2sq = polyapprox.layer_poly_error(p, c)
        oracle = None
        if can_enumerate:
            oracle = cube.exact_l1_error(c, p, WeightProfile.layer(n, r)) == l1
            ok &= oracle
        ok &= l1 <= eps
        polys.append(p)
        rows.append({
            "r": r,
            "strategy": "+".join(pl.strategy for pl in p.plans),
            "t": [pl.t for pl in p.plans],
            "degree": p.degree,
            "l1": l1,
            "l2sq": l2sq,
            "bound_ok": l1 <= eps,
            "oracle_match": oracle,
        })
    results = {
        "clause": c.to_json(),
        "plans": [[pl.to_json() for pl in p.plans] for p in polys],
    }
    if profile is None:
        results["polynomial"] = polys[0].to_json()
        if args.out:
            _write_json(args.out, polys[0].to_json())
    else:
        pieces = list(zip(layers, polys))
        total = polyapprox.symmetric_approximation_error(pieces, c, profile)
        results["total_l1"] = total
        ok &= total <= eps
        if args.out:
            _write_json(args.out, {"type": "layered_approximation", "pieces": [p.to_json() for p in polys]})
    cols = ["r", "strategy", "t", "degree", "l1", "l2sq", "bound_ok", "oracle_match"]
    return results, rows, cols, ok


def cmd_hard_dist(args) -> tuple:
    if args.n is None or args.degree is None:
        raise InvalidInput("hard-dist needs --n and --degree")
    n = args.n
    if not 1 <= n <= HARD_DIST_CAP:
        raise InvalidInput(f"--n must lie in 1..{HARD_DIST_CAP}")
    degrees = args.degree
    if any(not 0 <= r <= n for r in degrees):
        raise InvalidInput(f"--degree must lie in 0..{n}")
    if args.out and len(degrees) != 1:
        raise InvalidInput("--out needs a single --degree")
    d = lpcore.or_predicate(n)
    rows = []
    ok = True
    prev = None
    last = None
    for r in degrees:
        res = lpcore.best_uniform_approx(d, r)
        check = verify.duality_check(n, r, res)
        ok &= check.passed
        if prev is not None and res.eps_star > prev:
            ok = False
        prev = res.eps_star
        profile = lpcore.hard_distribution_from_dual(res) if res.eps_star > 0 else None
        rows.append({
            "r": r,
            "eps_star": res.eps_star,
            "duality_ok": check.passed,
            "dual_mass": sum(abs(b) for b in res.dual),
            "support": [m for m, b in enumerate(res.dual) if b],
        })
        last = (res, profile)
    results = {"nonincreasing": all(
        rows[i]["eps_star"] >= rows[i + 1]["eps_star"] for i in range(len(rows) - 1)
    )}
    if len(degrees) == 1:
        res, profile = last
        results["uniform_approx"] = res.to_json()
        results["profile"] = cube.dist_to_json(profile) if profile else None
        if args.out:
            if profile is None:
                raise InvalidInput("eps* = 0 at this degree; no hard distribution exists")
            cube.save_dist(profile, args.out)
    cols = ["r", "eps_star", "duality_ok", "dual_mass", "support"]
    return results, rows, cols, ok


def _load_dist(path):
    try:
        return cube.load_dist(path)
    except (OSError, ValueError, KeyError, TypeError, ZeroDivisionError) as exc:
        raise InvalidInput(f"malformed distribution file {path}: {exc}") from None


def _looks_like_json(path) -> bool:
    try:
        with open(path) as fh:
            return fh.read(64).lstrip().startswith("{")
    except OSError as exc:
        raise InvalidInput(str(exc)) from None


def cmd_learn(args) -> tuple:
    eps = _epsilon(args.epsilon)
    eta = args.eta
    if not 0 <= eta < Fraction(1, 2):
        raise InvalidInput("--eta must lie in [0, 1/2)")
    if not args.input:
        raise InvalidInput("learn needs --in (distribution JSON or sample file)")
    if _looks_like_json(args.input):
        D = _load_dist(args.input)
        c = _clause(args, D.n)
        basis = learner.learner_basis(D.kind, D.n, eps, args.degree)
        count = args.samples or learner.default_sample_size(len(basis), eps)
        train = learner.disjunction_sample_table(D, c, eta, count, args.seed)
        held_out = None
    else:
        try:
            records = learner.read_samples(args.input)
        except ValueError as exc:
            raise InvalidInput(str(exc)) from None
        if not records:
            raise InvalidInput("sample file is empty")
        D = c = None
        n = len(records[0].x)
        if any(len(s.x) != n for s in records):
            raise InvalidInput("samples have inconsistent lengths")
        basis = learner.learner_basis(args.kind, n, eps, args.degree)
        train = learner.tabulate(r for i, r in enumerate(records) if i % 5 != 4)
        held_out = learner.tabulate(r for i, r in enumerate(records) if i % 5 == 4)
        count = sum(a + b for a, b in train.values())
    h = learner.fit_lae(train, basis)
    h = learner.round_threshold(h, train)
    row = {
        "basis": basis.kind,
        "t": basis.t,
        "features": len(basis),
        "samples": count,
        "train_l1": h.train_deviation / count,
        "train_disagreement": Fraction(learner.disagreement(h, train), count),
        "theta": h.theta,
    }
    if D is not None:
        row["heldout_l1"] = learner.population_error(h, D, c, eta)
        row["heldout_disagreement"] = learner.population_error(h, D, c, eta, boolean=True)
        row["bound"] = eta + eps
    elif held_out:
        m = sum(a + b for a, b in held_out.values())
        row["heldout_l1"] = learner.training_deviation(h, held_out, clip=True) / m
        row["heldout_disagreement"] = Fraction(learner.disagreement(h, held_out), m)
    if args.out:
        _write_json(args.out, h.to_json())
    results = {"clause": c.to_json() if c else None, "distribution": cube.dist_to_json(D) if D else None}
    cols = list(row)
    return results, [row], cols, True


def cmd_verify(args) -> tuple:
    suite = args.suite
    if suite not in verify.SUITES:
        raise InvalidInput(f"unknown suite {suite!r}; choose from {sorted(verify.SUITES)}")
    checks = sorted(verify.run_suite(suite), key=lambda ch: ch.name)
    rows = [{"check": ch.name, "passed": ch.passed, "detail": ch.detail} for ch in checks]
    results = {"suite": suite, "passed": sum(ch.passed for ch in checks), "total": len(checks)}
    return results, rows, ["check", "passed", "detail"], all(ch.passed for ch in checks)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="symdis", description="Approximating and learning disjunctions on symmetric distributions.")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    def common(p):
        p.add_argument("--format", choices=("json", "csv"), default="json")
        p.add_argument("--out", default=None, help="write the run's artifact here")

    def clause_flags(p):
        p.add_argument("--k", type=int, default=None, help="clause x_1 v ... v x_k when --pos/--neg are absent")
        p.add_argument("--pos", type=_index_list, default=frozenset())
        p.add_argument("--neg", type=_index_list, default=frozenset())

    p = sub.add_parser("approx-layer", help="approximate a clause on a slice (or on every slice of a profile)")
    p.add_argument("--n", type=int)
    p.add_argument("--r", type=int)
    p.add_argument("--epsilon", type=_rational, default=Fraction(1, 10))
    p.add_argument("--in", dest="input", default=None, help="symmetric profile JSON (all layers)")
    clause_flags(p)
    common(p)
    p.set_defaults(func=cmd_approx_layer)

    p = sub.add_parser("hard-dist", help="minimax LP, dual certificate and hard symmetric distribution")
    p.add_argument("--n", type=int)
    p.add_argument("--degree", type=_degree_range, help="degree r, or a sweep a..b")
    common(p)
    p.set_defaults(func=cmd_hard_dist)

    p = sub.add_parser("learn", help="l1-regression agnostic learner")
    p.add_argument("--in", dest="input", default=None, help="distribution JSON or 'bits,label' sample file")
    p.add_argument("--epsilon", type=_rational, default=Fraction(1, 10))
    p.add_argument("--eta", type=_rational, default=Fraction(0))
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--samples", type=int, default=None)
    p.add_argument("--degree", type=int, default=None, help="override the basis degree")
    p.add_argument("--kind", choices=("symmetric", "product"), default="symmetric",
                   help="basis family when learning from a sample file")
    clause_flags(p)
    common(p)
    p.set_defaults(func=cmd_learn)

    p = sub.add_parser("verify", help="run an exact self-check suite")
    p.add_argument("suite", nargs="?", default=None)
    p.add_argument("--suite", dest="suite_flag", default=None)
    common(p)
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command is None:
            raise InvalidInput("missing subcommand")
        if args.command == "verify":
            args.suite = args.suite_flag or args.suite
            del args.suite_flag
            if args.suite is None:
                raise InvalidInput("verify needs a suite name")
        results, rows, cols, ok = args.func(args)
    except InvalidInput as exc:
        print(f"symdis: error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except ValueError as exc:
        print(f"symdis: error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    sys.stdout.write(_emit(args, results, rows, cols))
    return EXIT_OK if ok else EXIT_CHECK


if __name__ == "__main__":
    sys.exit(main())
