"""Command-line entry point.

One binary, subcommand style.  Numeric limits (degree caps, enumeration
budgets) are flags with documented defaults; `SEMILOCAL_<FLAG>` environment
variables supply defaults but never override an explicit flag.  Every
randomized command carries a seed (auto-generated seeds are printed), and
repeating a seeded command reproduces its artifacts byte for byte.

Exit codes: 0 success, 2 usage or malformed input, 3 precondition failure,
4 budget exhaustion, 5 internal identity violation, 6 attack not
applicable, 7 ciphertext rejected.
"""

from __future__ import annotations

import argparse
import io
import json
import os
import secrets
import sys
import time
from concurrent.futures import ThreadPoolExecutor

from . import textio
from .attack import AttackFailure, AttackNotApplicable, attack_square_1local
from .closure import ClosureCapacityError, compute_closure, last_fall_degree
from .cryptosystem import (
    DecryptionError,
    SchemeError,
    ciphertext_from_dict,
    ciphertext_to_dict,
    decrypt,
    encrypt,
    key_from_dict,
    key_to_dict,
    keygen,
)
from .field import FieldError
from .solver import (
    BudgetError,
    DEFAULT_BUDGET,
    PreconditionError,
    SolverError,
    brute_zero_set,
    ext_spec,
    instance_from_dict,
    instance_to_dict,
    solve_closed,
    solve_rational,
)
from .weil import DescentError, weil_basis, weil_descent

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_PRECONDITION = 3
EXIT_BUDGET = 4
EXIT_INTERNAL = 5
EXIT_NOT_APPLICABLE = 6
EXIT_REJECTED = 7


def _env_default(name, fallback=None, cast=str):
    raw = os.environ.get("SEMILOCAL_" + name.upper().replace("-", "_"))
    if raw is None:
        return fallback
    return cast(raw)


def _emit(out, **kv):
    out.write(" ".join(f"{k}={_fmt(v)}" for k, v in kv.items()) + "\n")


def _fmt(v):
    if isinstance(v, bool):
        return str(v).lower()
    if isinstance(v, float):
        return f"{v:.3f}"
    return str(v)


def _read_system(path):
    with open(path) as fh:
        return textio.parse_system(fh.read())


def _write_json(path, data):
    with open(path, "w") as fh:
        fh.write(json.dumps(data, sort_keys=True, separators=(",", ":")) + "\n")


def _points_lines(out, report, fmt):
    if fmt == "text":
        for pt in report.points:
            out.write(textio.format_vector(pt) + "\n")


def build_parser():
    ap = argparse.ArgumentParser(
        prog="semilocal",
        description="semi-local polynomial systems: closure, solvers, "
        "Weil descent, encryption schemes, and the Jacobian attack",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    def add_common(p):
        p.add_argument(
            "--format",
            choices=("text", "machine"),
            default=_env_default("format", "text"),
            help="text prints artifacts plus summary lines; machine prints "
            "key=value lines only",
        )
        p.add_argument(
            "--budget",
            type=int,
            default=_env_default("budget", DEFAULT_BUDGET, int),
            help=f"enumeration budget (default {DEFAULT_BUDGET})",
        )

    p = sub.add_parser("closure", help="basis of the degree-bounded closure V_{F,d}")
    p.add_argument("--system", required=True)
    p.add_argument("--degree", type=int, required=True)
    p.add_argument("--out")
    add_common(p)

    p = sub.add_parser("lastfall", help="fall degrees and the certified d_F")
    p.add_argument("--system", required=True)
    p.add_argument("--cap", type=int, default=_env_default("cap", None, int))
    add_common(p)

    p = sub.add_parser("brute", help="exhaustive zero set over GF(q^N)")
    p.add_argument("--system", required=True)
    p.add_argument("--ext", type=int, default=1)
    add_common(p)

    p = sub.add_parser("solve-closed", help="closed points of a semi-local instance")
    p.add_argument("--instance", required=True)
    p.add_argument("--cprime", type=int, default=None)
    p.add_argument("--check-bound", action="store_true")
    add_common(p)

    p = sub.add_parser("solve-rational", help="rational points of a semi-local instance")
    p.add_argument("--instance", required=True)
    p.add_argument("--cap", type=int, default=_env_default("cap", None, int))
    add_common(p)

    p = sub.add_parser("descend", help="Weil descent of a system over GF(q^n)")
    p.add_argument("--poly", required=True, help="system file over the extension")
    p.add_argument("--base", required=True, help="base field, e.g. GF(2)")
    p.add_argument("--ext-degree", type=int, required=True)
    p.add_argument("--basis", help="JSON file with n extension elements")
    p.add_argument("--out")
    add_common(p)

    p = sub.add_parser("keygen", help="generate an encryption keypair")
    p.add_argument("--scheme", choices=("square1", "nonsquare2"), required=True)
    p.add_argument("--field", required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--seed", type=int, default=_env_default("seed", None, int))
    p.add_argument("--exponent", type=int, default=3)
    p.add_argument("--out", required=True, help="output directory")
    add_common(p)

    p = sub.add_parser("encrypt")
    p.add_argument("--pub", required=True, help="public system file")
    p.add_argument("--msg", required=True, help="comma-separated plaintext")
    p.add_argument("--out")
    add_common(p)

    p = sub.add_parser("decrypt")
    p.add_argument("--key", required=True, help="key JSON file")
    p.add_argument("--ct", required=True, help="ciphertext JSON file")
    add_common(p)

    p = sub.add_parser("attack", help="determinant-of-Jacobian key recovery")
    p.add_argument("--pub", required=True)
    p.add_argument("--family", choices=("cube", "power"), default="cube")
    p.add_argument("--exponent", type=int, default=3)
    p.add_argument("--out")
    add_common(p)

    p = sub.add_parser("batch", help="run a manifest of commands, aggregate results")
    p.add_argument("--manifest", required=True)
    p.add_argument("--jobs", type=int, default=_env_default("jobs", 1, int))
    add_common(p)

    return ap


# -- handlers ---------------------------------------------------------------------


def _cmd_closure(args, out):
    system = _read_system(args.system)
    basis = compute_closure(system, args.degree)
    body = "\n".join(textio.format_poly(f) for f in basis.rows)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(body + ("\n" if body else ""))
    elif args.format == "text" and body:
        out.write(body + "\n")
    _emit(out, rank=len(basis), degree=args.degree,
          falls=",".join(map(str, basis.falls_observed)) or "-")
    return EXIT_OK


def _cmd_lastfall(args, out):
    system = _read_system(args.system)
    cap = args.cap if args.cap is not None else max(system.degree * 2, 4)
    rep = last_fall_degree(system, cap)
    if args.format == "text":
        _emit(out, falls=",".join(map(str, rep.fall_degrees)) or "-", cap=rep.cap)
    out.write(rep.summary() + "\n")
    return EXIT_OK


def _cmd_brute(args, out):
    system = _read_system(args.system)
    rep = brute_zero_set(system, args.ext, args.budget)
    _points_lines(out, rep, args.format)
    _emit(out, points=rep.s, ext=args.ext)
    return EXIT_OK


def _load_instance(path):
    with open(path) as fh:
        return instance_from_dict(json.load(fh))


def _cmd_solve_closed(args, out):
    inst = _load_instance(args.instance)
    rep = solve_closed(
        inst, c_prime=args.cprime, budget=args.budget, check_bound=args.check_bound
    )
    _points_lines(out, rep, args.format)
    kv = {
        "points": rep.s,
        "eliminated": rep.eliminated,
        "ext_degree": rep.caps.get("ext_degree", 1),
        "c_prime": rep.caps.get("c_prime", 0),
    }
    if rep.bound_check:
        kv["d_G"] = rep.bound_check["d_G"]
        kv["bound"] = rep.bound_check["bound"]
        kv["bound_holds"] = rep.bound_check["holds"]
    _emit(out, **kv)
    return EXIT_OK


def _cmd_solve_rational(args, out):
    inst = _load_instance(args.instance)
    rep = solve_rational(inst, cap=args.cap, budget=args.budget)
    _points_lines(out, rep, args.format)
    _emit(
        out,
        points=rep.s,
        eliminated=rep.eliminated,
        cap=rep.caps.get("cap"),
        delta=rep.caps.get("delta", "-"),
        flags=",".join(rep.flags) or "-",
    )
    return EXIT_OK


def _cmd_descend(args, out):
    system = _read_system(args.poly)
    base = textio.parse_field(args.base)
    theta = None
    if args.basis:
        ext = ext_spec(base, args.ext_degree)
        with open(args.basis) as fh:
            theta = [textio.parse_element(s, ext) for s in json.load(fh)]
    wb = weil_basis(base, args.ext_degree, theta)
    if system.field is not wb.ext:
        raise textio.ParseError(
            f"system field {textio.format_field(system.field)} is not "
            f"{textio.format_field(wb.ext)}"
        )
    res = weil_descent(system, wb)
    body = textio.format_system(res.hat)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(body)
    elif args.format == "text":
        out.write(body)
        out.write("mu_tilde:\n")
        for row in res.mu_tilde.matrix:
            out.write("  " + " ".join(textio.format_element(c) for c in row) + "\n")
        out.write("lambda:\n")
        for row in res.lam.matrix:
            out.write("  " + " ".join(textio.format_element(c) for c in row) + "\n")
    _emit(out, verified=True, components=len(res.hat), vars=res.hat.nvars)
    return EXIT_OK


def _cmd_keygen(args, out):
    field = textio.parse_field(args.field)
    seed = args.seed
    if seed is None:
        seed = secrets.randbelow(2**31)
    kp = keygen(args.scheme, field, args.n, seed, args.exponent)
    os.makedirs(args.out, exist_ok=True)
    key_path = os.path.join(args.out, "key.json")
    pub_path = os.path.join(args.out, "public.sys")
    _write_json(key_path, key_to_dict(kp))
    with open(pub_path, "w") as fh:
        fh.write(textio.format_system(kp.public))
    _emit(out, seed=seed, fingerprint=kp.fingerprint(), key=key_path, pub=pub_path)
    return EXIT_OK


def _cmd_encrypt(args, out):
    public = _read_system(args.pub)
    x = textio.parse_vector(args.msg, public.field)
    ct = encrypt(public, x)
    data = ciphertext_to_dict(ct, public.field)
    if args.out:
        _write_json(args.out, data)
    _emit(out, ciphertext=textio.format_vector(ct.values),
          fingerprint=ct.fingerprint)
    return EXIT_OK


def _cmd_decrypt(args, out):
    with open(args.key) as fh:
        kp = key_from_dict(json.load(fh))
    with open(args.ct) as fh:
        ct = ciphertext_from_dict(json.load(fh))
    plain = decrypt(kp, ct)
    _emit(out, plaintext=textio.format_vector(plain))
    return EXIT_OK


def _cmd_attack(args, out):
    public = _read_system(args.pub)
    rec = attack_square_1local(public, exponent=args.exponent, budget=args.budget)
    if args.out:
        _write_json(
            args.out,
            {
                "field": textio.format_field(public.field),
                "lam": [
                    [textio.format_element(c) for c in row]
                    for row in rec.lam_candidate.matrix
                ],
                "mu": [
                    [textio.format_element(c) for c in row]
                    for row in rec.mu_candidate.matrix
                ],
                "equivalent": rec.certificate,
            },
        )
    _emit(out, equivalent=rec.certificate)
    return EXIT_OK if rec.certificate else EXIT_INTERNAL


def _cmd_batch(args, out):
    with open(args.manifest) as fh:
        rows = json.load(fh)
    results = [None] * len(rows)

    def run(i, row):
        buf = io.StringIO()
        t0 = time.perf_counter()
        try:
            code = dispatch(list(map(str, row["cmd"])), buf)
        except SystemExit as e:  # argparse usage error inside a row
            code = int(e.code or EXIT_USAGE)
        except Exception:
            code = EXIT_INTERNAL
        ms = int(1000 * (time.perf_counter() - t0))
        return (row.get("name", f"row{i}"), code, ms, buf.getvalue())

    if args.jobs > 1 and len(rows) > 1:
        with ThreadPoolExecutor(max_workers=args.jobs) as pool:
            futs = [pool.submit(run, i, row) for i, row in enumerate(rows)]
            results = [f.result() for f in futs]
    else:
        results = [run(i, row) for i, row in enumerate(rows)]
    ok = 0
    for name, code, ms, _body in results:
        status = "ok" if code == EXIT_OK else "error"
        if code == EXIT_OK:
            ok += 1
        _emit(out, row=name, status=status, exit=code, time_ms=ms)
    rate = (100.0 * ok / len(results)) if results else 100.0
    _emit(out, rows=len(results), ok=ok, pass_rate=f"{rate:.1f}%")
    return EXIT_OK


_HANDLERS = {
    "closure": _cmd_closure,
    "lastfall": _cmd_lastfall,
    "brute": _cmd_brute,
    "solve-closed": _cmd_solve_closed,
    "solve-rational": _cmd_solve_rational,
    "descend": _cmd_descend,
    "keygen": _cmd_keygen,
    "encrypt": _cmd_encrypt,
    "decrypt": _cmd_decrypt,
    "attack": _cmd_attack,
    "batch": _cmd_batch,
}


def dispatch(argv, out=None) -> int:
    out = out if out is not None else sys.stdout
    ap = build_parser()
    args = ap.parse_args(argv)
    handler = _HANDLERS[args.command]
    try:
        return handler(args, out)
    except (PreconditionError, SchemeError, AttackFailure) as e:
        _emit(out, error="precondition", detail=str(e))
        return EXIT_PRECONDITION
    except (BudgetError, ClosureCapacityError) as e:
        _emit(out, error="budget", detail=str(e))
        return EXIT_BUDGET
    except AttackNotApplicable as e:
        _emit(out, applicable=False, detail=str(e))
        return EXIT_NOT_APPLICABLE
    except DecryptionError:
        _emit(out, rejected=True)
        return EXIT_REJECTED
    except (SolverError, DescentError, AssertionError) as e:
        _emit(out, error="internal", detail=str(e))
        return EXIT_INTERNAL
    except (textio.ParseError, FieldError, ValueError, OSError, KeyError) as e:
        _emit(out, error="usage", detail=str(e))
        return EXIT_USAGE


def main():
    sys.exit(dispatch(sys.argv[1:]))


if __name__ == "__main__":
    main()
