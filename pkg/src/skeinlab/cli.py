"""Command-line surface.

Subcommands run the library's verifications and computations from small
config files (see the bundled fixtures for the formats) and print
deterministic reports.  `--output records` switches to line-oriented
tab-separated `key=value` records for golden-file testing.  The exit
status is 0 exactly when every requested verification passed; failures
end with a `fail` record naming the reason.
"""

from __future__ import annotations

import argparse
import random
import sys
from pathlib import Path

from .braid import (
    BraidSyntaxError,
    BraidWord,
    TuraevError,
    compare_with_oracle,
    jones_oracle,
    make_turaev,
    normalized_invariant,
    parse_braid,
)
from .identities import (
    DslError,
    check_d2d1,
    elaborate,
    infiltrate,
    parse_identity_file,
    to_text,
)
from .linmap import LinearMap, ShapeMismatchError
from .planar import PlanarityError
from .rmatrix import (
    RMatrixError,
    solve_deformed_coefficients,
    tl_first_failure,
    tl_generators,
    ybe_residual,
)
from .scalars import (
    GAUSS,
    LAURENT,
    RATFUN,
    ScalarError,
    format_scalar,
    parse_scalar,
    promote,
    ring_by_name,
)
from .switchback import (
    SwitchbackError,
    SwitchbackPair,
    c2_to_coords,
    cohomology_dims,
    deform,
    deformation_obstruction,
    delta0,
    parse_cocycle_config,
    parse_pair_config,
    solve_2cocycles,
    switchback_residuals,
)

_FIXTURES = Path(__file__).parent / "fixtures"


class CliError(ValueError):
    pass


class Out:
    """text mode prints prose; records mode prints kind TAB k=v TAB ..."""

    def __init__(self, mode: str):
        self.records = mode == "records"

    def emit(self, kind: str, fields, text: str):
        if self.records:
            print("\t".join([kind] + [f"{k}={v}" for k, v in fields]))
        else:
            print(text)

    def fail(self, reason: str):
        self.emit("fail", [("reason", reason)], f"FAIL: {reason}")


def _resolve(name: str, suffix: str) -> Path:
    p = Path(name)
    if p.is_file():
        return p
    for cand in (_FIXTURES / name, _FIXTURES / (name + suffix)):
        if cand.is_file():
            return cand
    raise CliError(f"no such file or bundled fixture: {name}")


def _parse_specialize(text: str):
    key, _, value = text.partition("=")
    if key.strip() != "A" or not value.strip():
        raise CliError(f"expected --specialize A=<rational>, got {text!r}")
    return parse_scalar(value.strip(), GAUSS)


def _load_pair(args) -> SwitchbackPair:
    path = _resolve(args.pair, ".pair")
    pair = parse_pair_config(path.read_text(), str(path))
    if args.ring:
        pair = pair.promote(ring_by_name(args.ring))
    if args.specialize:
        pair = pair.specialize(_parse_specialize(args.specialize))
    return pair


def _field_pair(pair: SwitchbackPair) -> SwitchbackPair:
    # cohomology / invariants divide by the loop value, so the Laurent
    # ring is silently widened to its fraction field
    return pair.promote(RATFUN) if pair.ring is LAURENT else pair


def _load_cocycle(args, pair: SwitchbackPair):
    try:
        path = _resolve(args.cocycle, ".cfg")
    except CliError:
        path = _resolve(f"cocycle_{args.cocycle}", ".cfg")
    return parse_cocycle_config(path.read_text(), pair, str(path))


# ---------------------------------------------------------------------------
# models for check-d2d1
# ---------------------------------------------------------------------------


def _model_assignment(name: str):
    if name == "bracket":
        pair = parse_pair_config((_FIXTURES / "bracket.pair").read_text())
        return {"beta": pair.pairing, "gamma": pair.copairing}, 2, pair.ring
    if name == "dualnumbers":
        # multiplication table of Q(i)[x]/(x^2) on basis (1, x)
        rows = [[1, 0, 0, 0], [0, 1, 1, 0]]
        mu = LinearMap.from_rows(
            2, 2, 1, GAUSS, [[GAUSS.from_int(e) for e in r] for r in rows]
        )
        return {"mu": mu}, 2, GAUSS
    raise CliError(f"unknown model {name!r} (want bracket or dualnumbers)")


def _random_f(d: int, ring, rng: random.Random) -> LinearMap:
    rows = [[ring.from_int(rng.randint(-9, 9)) for _ in range(d)] for _ in range(d)]
    return LinearMap.from_rows(d, 1, 1, ring, rows)


def _run_d2d1(idents, model: str, trials: int, seed: int, out: Out) -> int:
    assignment, d, ring = _model_assignment(model)
    rng = random.Random(seed)
    code = 0
    for ident in idents:
        ok = all(
            check_d2d1(ident, assignment, _random_f(d, ring, rng))
            for _ in range(trials)
        )
        out.emit(
            "check-d2d1",
            [("identity", ident.label), ("ok", str(ok).lower())],
            f"check-d2d1 {ident.label}: {'OK' if ok else 'FAIL'} ({trials} random f)",
        )
        if not ok:
            code = 1
    if code:
        out.fail("d2d1 residual nonzero")
    return code


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------


def cmd_infiltrate(args, out: Out) -> int:
    path = _resolve(args.file, ".idl")
    idf = parse_identity_file(path.read_text())
    idents = idf.identities if not args.identity else (idf.identity(args.identity),)
    for ident in idents:
        plan = elaborate(ident)
        diff = infiltrate(plan).differential.canonical()
        if out.records:
            out.emit(
                "plan",
                [
                    ("identity", ident.label),
                    ("lhs", to_text(plan.lhs)),
                    ("rhs", to_text(plan.rhs)),
                ],
                "",
            )
            out.emit(
                "differential",
                [("identity", ident.label), ("sum", diff.to_text())],
                "",
            )
        else:
            print(f"identity {ident.label}: {to_text(ident.lhs)} = {to_text(ident.rhs)}")
            print(f"  plan lhs: {to_text(plan.lhs)}")
            print(f"  plan rhs: {to_text(plan.rhs)}")
            print("  differential:")
            if not diff.terms:
                print("    0")
            for coeff, term in diff.terms:
                mag = "" if abs(coeff) == 1 else f"{abs(coeff)}*"
                print(f"    {'+' if coeff > 0 else '-'} {mag}{to_text(term)}")
    if args.check_d2d1:
        if not args.model:
            raise CliError("--check-d2d1 needs --model")
        return _run_d2d1(idents, args.model, trials=3, seed=0, out=out)
    return 0


def cmd_check_d2d1(args, out: Out) -> int:
    path = _resolve(args.file, ".idl")
    idf = parse_identity_file(path.read_text())
    idents = idf.identities if not args.identity else (idf.identity(args.identity),)
    return _run_d2d1(idents, args.model, args.trials, args.seed, out)


def cmd_verify_switchback(args, out: Out) -> int:
    pair = _load_pair(args)
    r1, r2 = switchback_residuals(pair)
    conds = [("(beta x 1)(1 x gamma) = 1", r1), ("(1 x beta)(gamma x 1) = 1", r2)]
    code = 0
    for k, (label, r) in enumerate(conds, 1):
        ok = r.is_zero()
        out.emit(
            "switchback",
            [("condition", str(k)), ("ok", str(ok).lower())],
            f"switchback {label}: {'OK' if ok else 'FAIL'}",
        )
        if not ok:
            code = 1
    if code:
        out.fail("switchback conditions violated")
    return code


def cmd_cohomology(args, out: Out) -> int:
    pair = _field_pair(_load_pair(args))
    dims = cohomology_dims(pair)
    fields = [
        ("z1", dims.z1), ("b2", dims.b2), ("z2", dims.z2), ("b3", dims.b3),
        ("z3", dims.z3), ("b4", dims.b4), ("h1", dims.h1), ("h2", dims.h2),
        ("h3", dims.h3),
    ]
    if out.records:
        out.emit("cohomology", fields, "")
    else:
        for name, value in fields:
            print(f"{name} = {value}")
    return 0


def cmd_solve_cocycles(args, out: Out) -> int:
    pair = _field_pair(_load_pair(args))
    for k, (phi1, phi2) in enumerate(solve_2cocycles(pair), 1):
        coords = ", ".join(format_scalar(c) for c in c2_to_coords(phi1, phi2))
        out.emit(
            "cocycle",
            [("index", k), ("coords", coords)],
            f"cocycle {k}: [{coords}]",
        )
    return 0


def cmd_deform(args, out: Out) -> int:
    pair = _load_pair(args)
    phi1, phi2 = _load_cocycle(args, pair)
    pt = deform(pair, phi1, phi2)
    beta_t = ", ".join(format_scalar(e) for e in pt.pairing.rows[0])
    gamma_t = "; ".join(format_scalar(r[0]) for r in pt.copairing.rows)
    out.emit("deformed", [("beta", beta_t)], f"beta_t = {beta_t}")
    out.emit("deformed", [("gamma", gamma_t)], f"gamma_t = {gamma_t}")
    r1, r2 = switchback_residuals(pt)
    ok = r1.is_zero() and r2.is_zero()
    out.emit(
        "switchback",
        [("deformed", "true"), ("ok", str(ok).lower())],
        f"deformed switchback: {'OK' if ok else 'FAIL'}",
    )
    if ok:
        return 0
    xi1, xi2 = deformation_obstruction(pair, phi1, phi2)
    ob1 = ", ".join(format_scalar(e) for e in xi1.rows[0])
    ob2 = "; ".join(format_scalar(r[0]) for r in xi2.rows)
    out.emit("obstruction", [("xi1", ob1)], f"obstruction xi1 = {ob1}")
    out.emit("obstruction", [("xi2", ob2)], f"obstruction xi2 = {ob2}")
    out.fail("deformation does not satisfy the switchback conditions")
    return 1


def _turaev_data(args, base: SwitchbackPair):
    """Build Turaev data for the undeformed pair or, with --cocycle, for
    the first-order deformation with solved dual coefficients."""
    if args.deformed and not args.cocycle:
        raise CliError("--deformed needs --cocycle")
    a0 = parse_scalar(args.a, base.ring) if args.a else None
    b0 = parse_scalar(args.b, base.ring) if args.b else None
    if args.cocycle:
        phi1, phi2 = _load_cocycle(args, base)
        work = deform(base, phi1, phi2)
        a, b = solve_deformed_coefficients(work, a0, b0)
    else:
        work = base
        a = a0 if a0 is not None else parse_scalar("A", base.ring)
        b = b0 if b0 is not None else parse_scalar("A^-1", base.ring)
    return make_turaev(work, a, b)


def cmd_verify_ybe(args, out: Out) -> int:
    base = _field_pair(_load_pair(args))
    td = _turaev_data(args, base)
    if args.cocycle:
        out.emit("coefficient", [("a", format_scalar(td.rmx.a))],
                 f"a = {format_scalar(td.rmx.a)}")
        out.emit("coefficient", [("b", format_scalar(td.rmx.b))],
                 f"b = {format_scalar(td.rmx.b)}")
    res = ybe_residual(td.rmx.R)
    ok = res.is_zero()
    out.emit("ybe", [("ok", str(ok).lower())], f"ybe residual zero: {str(ok).lower()}")
    if ok:
        return 0
    for i, row in enumerate(res.rows):
        line = ", ".join(format_scalar(e) for e in row)
        out.emit("residual", [("row", i), ("entries", line)], f"row {i}: {line}")
    out.fail("Yang-Baxter residual nonzero")
    return 1


def cmd_tl_check(args, out: Out) -> int:
    base = _load_pair(args)
    if args.cocycle:
        phi1, phi2 = _load_cocycle(args, base)
        work = deform(base, phi1, phi2)
    else:
        work = base
    delta = delta0(work)
    out.emit("delta0", [("value", format_scalar(delta))],
             f"delta0 = {format_scalar(delta)}")
    code = 0
    for n in range(2, args.strands + 1):
        failure = tl_first_failure(tl_generators(work, n), delta)
        ok = failure is None
        out.emit(
            "tl",
            [("strands", n), ("ok", str(ok).lower())],
            f"tl n={n}: {'OK' if ok else failure}",
        )
        if not ok:
            code = 1
    if code:
        out.fail("Temperley-Lieb relations violated")
    return code


def _invariant_line(out: Out, word: str, value):
    # the report line format is the same in both modes: word TAB scalar
    if out.records:
        out.emit("invariant", [("word", word), ("value", value)], "")
    else:
        print(f"{word}\t{value}")


def cmd_invariant(args, out: Out) -> int:
    base = _field_pair(_load_pair(args))
    td = _turaev_data(args, base)
    code = 0
    for text in args.braid:
        w = parse_braid(text)
        value = normalized_invariant(td, w)
        _invariant_line(out, str(w), format_scalar(value))
        if args.compare_oracle:
            oracle = promote(jones_oracle(w), base.ring)
            body = value.body if hasattr(value, "body") else value
            ok = body == oracle
            out.emit(
                "oracle",
                [("word", str(w)), ("match", str(ok).lower())],
                f"oracle {w}: {'match' if ok else 'MISMATCH'}",
            )
            if not ok:
                code = 1
    if code:
        out.fail("invariant disagrees with the oracle at t=0")
    return code


def cmd_jones_oracle(args, out: Out) -> int:
    for text in args.braid:
        w = parse_braid(text)
        _invariant_line(out, str(w), format_scalar(jones_oracle(w)))
    return 0


_CORPUS = ("", "s1 s1 s1", "s1 s2^-1 s1 s2^-1", "s1 s1 s1 s1 s1")


def cmd_compare(args, out: Out) -> int:
    base = _field_pair(_load_pair(args))
    td = _turaev_data(args, base)
    if args.braid:
        corpus = [parse_braid(t) for t in args.braid]
    else:
        corpus = [BraidWord(1, ()), BraidWord(2, ())]
        corpus += [parse_braid(t) for t in _CORPUS if t]
    rep = compare_with_oracle(td, corpus)
    for e in rep.entries:
        out.emit(
            "compare",
            [("word", e.word), ("value", format_scalar(e.value)),
             ("match", str(e.matches).lower())],
            f"{e.word}\t{format_scalar(e.value)}\toracle {'match' if e.matches else 'MISMATCH'}",
        )
    out.emit(
        "constants",
        [("ell2_eq_c4", str(rep.ell_squared_is_c4).lower()),
         ("loop_eq_minus_c_plus_cinv", str(rep.loop_is_minus_c_plus_cinv).lower())],
        f"ell^2 = c^4: {str(rep.ell_squared_is_c4).lower()}; "
        f"delta0 = -(c + c^-1): {str(rep.loop_is_minus_c_plus_cinv).lower()}",
    )
    for word, ok in rep.skein_ok:
        out.emit(
            "skein",
            [("word", word), ("ok", str(ok).lower())],
            f"skein at first letter of {word}: {'OK' if ok else 'FAIL'}",
        )
    out.emit("summary", [("ok", str(rep.all_ok).lower())],
             f"all checks: {'OK' if rep.all_ok else 'FAIL'}")
    if not rep.all_ok:
        out.fail("oracle comparison failed")
        return 1
    return 0


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------


def _parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--ring", choices=["gauss", "laurent", "ratfun"],
                        help="promote loaded data into this ring")
    common.add_argument("--specialize", metavar="A=<rational>",
                        help="substitute a rational value for A")
    common.add_argument("--output", choices=["text", "records"], default="text",
                        help="report style (records = tab-separated key=value)")

    p = argparse.ArgumentParser(
        prog="skeinlab",
        description="exact-arithmetic workbench: cocycle conditions, "
        "switchback cohomology, deformed R-matrices, knot invariants",
    )
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, fn, **kw):
        sp = sub.add_parser(name, parents=[common], **kw)
        sp.set_defaults(fn=fn)
        return sp

    sp = add("infiltrate", cmd_infiltrate,
             help="print elaborate plans and 2-differentials of a DSL file")
    sp.add_argument("file", help="identity DSL file or bundled name")
    sp.add_argument("--identity", help="restrict to one identity label")
    sp.add_argument("--check-d2d1", action="store_true", dest="check_d2d1",
                    help="also run the d2d1 vanishing check (needs --model)")
    sp.add_argument("--model", help="assignment model: bracket | dualnumbers")

    sp = add("check-d2d1", cmd_check_d2d1,
             help="verify the 2-differential kills 1-differentials on a model")
    sp.add_argument("file", help="identity DSL file or bundled name")
    sp.add_argument("--identity", help="restrict to one identity label")
    sp.add_argument("--model", required=True, help="bracket | dualnumbers")
    sp.add_argument("--trials", type=int, default=5, help="random f count")
    sp.add_argument("--seed", type=int, default=0)

    def pair_opt(sp):
        sp.add_argument("--pair", default="bracket",
                        help="pair config path or bundled name (default bracket)")

    sp = add("verify-switchback", cmd_verify_switchback,
             help="check both zig-zag conditions of a pair")
    pair_opt(sp)

    sp = add("cohomology", cmd_cohomology,
             help="kernel/image/cohomology dimensions of the pair's complex")
    pair_opt(sp)

    sp = add("solve-cocycles", cmd_solve_cocycles,
             help="print a basis of the 2-cocycle space")
    pair_opt(sp)

    sp = add("deform", cmd_deform,
             help="deform a pair by a cochain and verify the result")
    pair_opt(sp)
    sp.add_argument("--cocycle", required=True,
                    help="cocycle config path or bundled name")

    def turaev_opts(sp, need_cocycle=False):
        pair_opt(sp)
        sp.add_argument("--cocycle", required=need_cocycle,
                        help="deform by this cocycle config first")
        sp.add_argument("--deformed", action="store_true",
                        help="explicit marker that --cocycle deforms the pair")
        sp.add_argument("--a", help="R-matrix coefficient a (default A)")
        sp.add_argument("--b", help="R-matrix coefficient b (default A^-1)")

    sp = add("verify-ybe", cmd_verify_ybe,
             help="check the Yang-Baxter equation for the pair's R-matrix")
    turaev_opts(sp)

    sp = add("tl-check", cmd_tl_check,
             help="check the Temperley-Lieb relations of the cup-cap maps")
    pair_opt(sp)
    sp.add_argument("--cocycle", help="deform by this cocycle config first")
    sp.add_argument("--strands", type=int, default=5,
                    help="largest strand count to check (default 5)")

    sp = add("invariant", cmd_invariant,
             help="closed-braid invariant values (normalized to unknot = 1)")
    turaev_opts(sp)
    sp.add_argument("--braid", action="append", required=True,
                    help="braid word, e.g. \"s1 s2^-1 s1\"; repeatable")
    sp.add_argument("--compare-oracle", action="store_true", dest="compare_oracle",
                    help="also check the t=0 value against the planar oracle")

    sp = add("jones-oracle", cmd_jones_oracle,
             help="combinatorial state-sum value of a braid closure")
    sp.add_argument("--braid", action="append", required=True)

    sp = add("compare", cmd_compare,
             help="full invariant-versus-oracle report with skein checks")
    turaev_opts(sp)
    sp.add_argument("--braid", action="append",
                    help="braid words (default: a small standard corpus)")

    return p


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    out = Out(args.output)
    try:
        return args.fn(args, out)
    except (
        ScalarError,
        ShapeMismatchError,
        DslError,
        SwitchbackError,
        RMatrixError,
        BraidSyntaxError,
        TuraevError,
        PlanarityError,
        CliError,
        KeyError,
        OSError,
    ) as e:
        reason = str(e) if not isinstance(e, KeyError) else e.args[0]
        out.fail(reason)
        return 2


if __name__ == "__main__":
    sys.exit(main())
