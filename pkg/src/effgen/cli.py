"""Command-line entry point: ``effgen <subcommand> ...``.

Exit codes: 0 ok, 1 invariant violation, 2 parse error, 3 budget exhausted.
Human-readable text goes to stdout unless ``--json`` is given; certificates
are written with ``--output`` as sorted JSON so identical runs give identical
bytes.  The default rank comes from ``EFFGEN_RANK`` (8 when unset).
"""
from __future__ import annotations

import argparse
import json
import os
import random
import sys
from fractions import Fraction

from . import abelianized as ab
from . import constants as cs
from . import connect as cn
from . import nonneg as nn
from . import samples
from . import symplectic as sp
from .endomorphisms import WordLengthExceeded, alphabet, verify_relations

EXIT_OK, EXIT_VIOLATION, EXIT_PARSE, EXIT_BUDGET = 0, 1, 2, 3


class Violation(Exception):
    pass


def _default_rank() -> int:
    try:
        return int(os.environ.get("EFFGEN_RANK", "8"))
    except ValueError:
        return 8


def _read_json(path: str):
    with open(path) as fh:
        return json.load(fh)


def _emit(args, payload: dict, text: str) -> None:
    blob = json.dumps(payload, sort_keys=True, indent=1)
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(blob + "\n")
    print(blob if args.json else text)


def _check(cond: bool, msg: str) -> None:
    if not cond:
        raise Violation(msg)


# ------------------------------------------------------------ subcommands

def cmd_verify_relations(args) -> None:
    rep = verify_relations(args.rank)
    _emit(args, rep, f"n={rep['n']}: clause (a) {rep['pairs']['a']} pairs, "
                     f"clause (b) {rep['pairs']['b']} pairs, failures {len(rep['failures'])}")
    _check(rep["ok"], "a commutation relation failed")


def _character(args) -> ab.Character:
    if args.chi:
        return ab.Character.from_json(_read_json(args.chi))
    return ab.random_character(args.rank, random.Random(args.seed), args.bound)


def cmd_regularize(args) -> None:
    if args.verify:
        cert = _read_json(args.verify)
        chi = ab.Character.from_json(cert["character"])
        g = ab.GLnElement.from_json(cert["g"])
        rebuilt = ab.GLnElement.from_factors(chi.n, g.factors)
        _check(rebuilt.matrix == g.matrix, "factors do not rebuild the matrix")
        final = ab.act_character(g, chi)
        M = ab.M_of(chi)
        ok = all(abs(final.c(i, i, j)) >= M / 3 for i, j in ab.REG_PAIRS)
        ok = ok and g.permutation_count() <= 2 and g.transvection_count() <= 9
        _emit(args, {"verified": ok}, f"certificate {'verified' if ok else 'REJECTED'}")
        _check(ok, "regularization certificate rejected")
        return
    chi = _character(args)
    reg = ab.regularize(chi)
    final = ab.act_character(reg.g, chi)
    payload = reg.to_json()
    payload["character"] = chi.to_json()
    payload["values"] = {f"c_{i}{i}{j}": str(final.c(i, i, j)) for i, j in ab.REG_PAIRS}
    lines = [f"M(chi) = {reg.M}",
             f"g: {reg.g.permutation_count()} permutation + {reg.g.transvection_count()} transvection factors"]
    lines += [f"  |{k}(g chi)| = {abs(Fraction(v))}" for k, v in payload["values"].items()]
    _emit(args, payload, "\n".join(lines))


def cmd_sp_regularize(args) -> None:
    if args.verify:
        cert = _read_json(args.verify)
        chi = sp.Wedge3Vector.from_json(cert["character"])
        g = sp.SymplecticMatrix.from_json(cert["g"])
        rebuilt = sp.SymplecticMatrix.from_factors(chi.n, g.factors)
        _check(rebuilt == g and g.is_symplectic(), "factors do not rebuild a symplectic g")
        gchi = sp.act_sp_character(g, chi)
        M = sp.M_sp(chi)
        Z = [sp.parse_wedge(z) for z in cert["Z"]]
        c = g.counts()
        ok = all(abs(gchi[z]) >= M for z in Z) and c["tau_ij"] <= 15 and c["f_ij"] <= 3
        _emit(args, {"verified": ok}, f"certificate {'verified' if ok else 'REJECTED'}")
        _check(ok, "sp certificate rejected")
        return
    if args.chi:
        chi = sp.Wedge3Vector.from_json(_read_json(args.chi))
    else:
        chi = sp.random_sp_character(args.rank, random.Random(args.seed), args.bound)
    res = sp.sp_regularize(chi)
    payload = res.to_json()
    payload["character"] = chi.to_json()
    c = res.g.counts()
    lines = [f"M(chi) = {res.M}", f"g: {c['tau_ij']} tau_ij, {c['f_ij']} f_ij, {c['w_i']} w_i"]
    lines += [f"  {sp.wedge_name(z)}: {v}" for z, v in zip(res.Z, res.values())]
    _check(c["tau_ij"] <= 15 and c["f_ij"] <= 3, "factor budget exceeded")
    _emit(args, payload, "\n".join(lines))


def cmd_nonneg_form(args) -> None:
    n = args.rank
    S = alphabet(n)
    rng = random.Random(args.seed)
    if args.chi:
        chi = ab.Character.from_json(_read_json(args.chi))
    else:
        chi = (samples.toy_regular_character if args.bounded else samples.regular_character)(n, rng)
    word = S.parse(args.word) if args.word else samples.random_sword(n, rng, 5)
    if chi.on_word(word) < 0:
        if args.word:
            raise ValueError("chi(word) < 0; pass the inverse word")
        word = tuple(-a for a in reversed(word))
    if args.bounded:
        res = nn.bounded_nonneg_form(word, chi, cs.ConstantsProfile.named(args.profile))
        out, extra = res.word, {"bound": str(res.bound), "prefix_l1_max": res.prefix_l1_max,
                                "C_eff": str(res.C_eff)}
    else:
        out, sel = nn.nonneg_form_cc(word, chi, nn.default_Z(n))
        extra = {"z": [S.name(z) for z in sel.z], "exponents": sel.exponents}
    prefixes = nn.prefix_values(out, chi)
    same = nn.same_automorphism(word, out, n)
    payload = {"input": S.format(word), "form": S.format(out), "character": chi.to_json(),
               "min_prefix": str(min(prefixes)), "equal": same, **extra}
    _emit(args, payload, f"{S.format(out)}\n  min prefix {min(prefixes)}, equal to input: {same}")
    _check(min(prefixes) >= 0 and same, "non-negative form check failed")


def _oracle(args):
    if args.oracle == "heisenberg":
        return cn.HeisenbergOracle()
    return cn.IAOracle(args.rank, cs.ConstantsProfile.named(args.profile))


def _parse_word(oracle, text: str) -> tuple[int, ...]:
    if isinstance(oracle, cn.HeisenbergOracle):
        table = {"x": 1, "y": 2, "x^-1": -1, "y^-1": -2, "X": -1, "Y": -2}
        try:
            return tuple(table[t] for t in text.split())
        except KeyError as e:
            raise ValueError(f"cannot parse Heisenberg letter {e}") from None
    return alphabet(oracle.n).parse(text)


def _radius(args) -> int:
    if args.radius is not None:
        return args.radius
    return cs.radius_R(cs.ConstantsProfile.named(args.profile))


def cmd_push_path(args) -> None:
    oracle = _oracle(args)
    R = _radius(args)
    rng = random.Random(args.seed)
    if args.path:
        path = cn.CayleyPath.from_json(_read_json(args.path))
    elif args.oracle == "heisenberg":
        path = samples.heisenberg_excursion(R, rng, args.height)
    else:
        path = samples.ia_excursion(args.rank, R, rng, args.height)
    if args.verify:
        cert = _read_json(args.verify)
        out = cn.replay_push(path, R, oracle, cert["transcript"])
        ok = list(out.steps) == cert["result"]["steps"]
        _emit(args, {"verified": ok}, f"transcript {'verified' if ok else 'REJECTED'}")
        _check(ok, "push transcript rejected")
        return
    tr: list = []
    out = cn.push_path(path, R, oracle, max_steps=args.max_steps, transcript=tr)
    st = cn.path_stats(oracle, out)
    same = cn._locally_equal(oracle, list(path.steps), list(out.steps))
    payload = {"R": R, "oracle": args.oracle, "input": path.to_json(), "result": out.to_json(),
               "transcript": tr, "max_linf": max(st.linf), "equal": same}
    _emit(args, payload, f"{len(tr)} modifications, path length {len(path)} -> {len(out)}, "
                         f"max linf {max(st.linf)} <= R = {R}, endpoints equal: {same}")
    _check(max(st.linf) <= R and same, "pushed path check failed")


def cmd_refine_support(args) -> None:
    oracle = _oracle(args)
    R = _radius(args)
    n = args.rank
    bound = args.support_bound if args.support_bound is not None else 8 * n * n
    if args.path:
        path = cn.CayleyPath.from_json(_read_json(args.path))
    else:
        path = samples.commuting_path(n, random.Random(args.seed))
    tr: list = []
    out = cn.support_refine(path, R, bound, oracle, max_steps=args.max_steps, transcript=tr)
    st = cn.path_stats(oracle, out)
    same = cn._locally_equal(oracle, list(path.steps), list(out.steps))
    payload = {"R": R, "support_bound": bound, "input": path.to_json(), "result": out.to_json(),
               "transcript": tr, "max_support": max(st.supp), "equal": same}
    _emit(args, payload, f"{len(tr)} insertions, max support {max(st.supp)} <= {bound}, "
                         f"equal: {same}")
    _check(max(st.supp) <= bound and same, "support refinement check failed")


def cmd_enumerate_generators(args) -> None:
    oracle = _oracle(args)
    split = cn.oracle_split(oracle)
    F = cn.BoxSchreierSet(oracle.dim, args.radius if args.radius is not None else 0,
                          args.support_bound)
    count = cn.count_K_generators(F, split)
    if args.count_only:
        _emit(args, {"count": count, "N": oracle.N}, str(count))
        return
    gens = []
    for k, g in enumerate(cn.enumerate_K_generators(F, split)):
        if k >= args.limit:
            break
        _check(not any(oracle.theta(g.word(split))), "generator with nonzero theta")
        gens.append(cn.format_generator(g, 1, oracle, split))
    _emit(args, {"count": count, "listed": gens}, "\n".join(gens + [f"total {count}"]))


def cmd_rewrite(args) -> None:
    oracle = _oracle(args)
    with open(args.input) as fh:
        word = _parse_word(oracle, fh.read())
    split = cn.oracle_split(oracle)
    radius = args.radius
    if radius is None:
        st = cn.path_stats(oracle, cn.CayleyPath(tuple(word)))
        radius = max(st.linf)
    F = cn.BoxSchreierSet(oracle.dim, radius, args.support_bound)
    gens = cn.rewrite_in_SK(word, F, oracle, split)
    product = cn.generators_word(gens, split)
    try:
        same = oracle.same(product, word)
    except WordLengthExceeded:
        same = None
    names = [cn.format_generator(g, e, oracle, split) for g, e in gens]
    _emit(args, {"radius": radius, "generators": names, "equal": same},
          "\n".join(names + [f"{len(names)} generators, product equal to input: {same}"]))
    _check(same is not False, "rewritten product differs from the input")


def cmd_constants_report(args) -> None:
    p = cs.ConstantsProfile.named(args.profile)
    rep = cs.constants_report(p)
    lines = [f"profile {p.label}: A={p.A}, B={p.B}, C={p.C}",
             f"R = {rep['R']}", f"r = {rep['r']}",
             f"final inequality = {rep['final_inequality']} "
             f"({'negative' if rep['final_inequality_negative'] else 'NOT negative'})"]
    if p.label == "paper":
        rep["R_below_5e12"] = rep["R"] < 5 * 10 ** 12
        lines.append(f"R = 16*451^2*(8100*153+1): {rep['R'] == 16 * 451 ** 2 * (8100 * 153 + 1)}, "
                     f"R < 5*10^12: {rep['R_below_5e12']}")
        _check(rep["R_below_5e12"], "R is not below 5*10^12")
    _emit(args, rep, "\n".join(lines))
    _check(rep["final_inequality_negative"], "final inequality is not negative")


def cmd_verify_lifts(args) -> None:
    rep = sp.verify_lifts(args.rank)
    s = rep["summary"]
    text = "\n".join(f"{k}: {v}" for k, v in s.items())
    _emit(args, rep, text)
    _check(s["i"] and s["ii_corrected"] and s["iii"] and s["chains"], "lift verification failed")


def cmd_certify_witness(args) -> None:
    n = args.rank
    if args.witness:
        w = cs.AWitness.from_json(_read_json(args.witness))
        try:
            bound = cs.certify_A(w)
        except cs.WitnessError as e:
            _emit(args, {"certified": False, "letter": e.letter, "reason": e.reason}, f"FAILED: {e}")
            raise Violation(str(e)) from None
        _emit(args, {"certified": True, "bound": bound}, f"certified A <= {bound}")
        return
    base = cs.load_base_witnesses()
    res = cs.certify_nielsen_witnesses(base, n)
    bounds = res["bounds"]
    _check(all(b is not None for b in bounds.values()), "some Nielsen witness failed")
    A_nielsen = max(bounds.values())
    hist: dict[int, int] = {}
    for b in bounds.values():
        hist[b] = hist.get(b, 0) + 1
    glob = cs.certified_global_A(bounds, n)
    _check(glob["prefix_B_dominated"], "a prefix of the worst-case g has larger B")
    p = cs.ConstantsProfile(glob["A_global"], glob["B"], Fraction(3), "certified")
    rep = {"bounds_histogram": {str(k): v for k, v in sorted(hist.items())},
           "A_nielsen_max": A_nielsen, **glob, "profile": cs.constants_report(p)}
    _emit(args, rep, "\n".join([
        f"Nielsen witnesses certified: {sum(hist.values())} (bounds {rep['bounds_histogram']})",
        f"max certified A over the R lifts: {glob['A_R_max']}",
        f"global A = {glob['A_R_max']} * 9 * {glob['B']} = {glob['A_global']} "
        f"(exact chain for the worst-case g: {glob['A_worst_case_exact_chain']})",
        f"recomputed R with (A, B, C) = ({p.A}, {p.B}, 3): {rep['profile']['R']}",
        f"final inequality negative: {rep['profile']['final_inequality_negative']}"]))


# ------------------------------------------------------------------ parser

def build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(prog="effgen", description=__doc__.splitlines()[0])
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("-n", "--rank", type=int, default=_default_rank())
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--json", action="store_true", help="machine-readable output")
    common.add_argument("--output", help="write the JSON certificate here")
    common.add_argument("--profile", choices=("toy", "paper"), default="toy")
    sub = top.add_subparsers(dest="command", required=True)

    def add(name, func, **kw):
        p = sub.add_parser(name, parents=[common], **kw)
        p.set_defaults(func=func)
        return p

    add("verify-relations", cmd_verify_relations)
    p = add("regularize", cmd_regularize)
    p.add_argument("--chi", help="character JSON; random when omitted")
    p.add_argument("--bound", type=int, default=10)
    p.add_argument("--verify", help="re-check a certificate")
    p = add("sp-regularize", cmd_sp_regularize)
    p.add_argument("--chi")
    p.add_argument("--bound", type=int, default=5)
    p.add_argument("--verify")
    p = add("nonneg-form", cmd_nonneg_form)
    p.add_argument("--word", help='e.g. "K[1,3,4] K[5,6]^-1"')
    p.add_argument("--chi")
    p.add_argument("--bounded", action="store_true", help="bounded form under --profile")
    for name, func in (("push-path", cmd_push_path), ("refine-support", cmd_refine_support)):
        p = add(name, func)
        p.add_argument("--oracle", choices=("ia", "heisenberg"), default="ia")
        p.add_argument("--path", help="CayleyPath JSON")
        p.add_argument("--radius", type=int)
        p.add_argument("--max-steps", type=int, default=100000)
        if name == "push-path":
            p.add_argument("--height", type=int, default=3)
            p.add_argument("--verify", help="replay a push certificate")
        else:
            p.add_argument("--support-bound", type=int)
    p = add("enumerate-generators", cmd_enumerate_generators)
    p.add_argument("--oracle", choices=("ia", "heisenberg"), default="ia")
    p.add_argument("--radius", type=int)
    p.add_argument("--support-bound", type=int)
    p.add_argument("--count-only", action="store_true")
    p.add_argument("--limit", type=int, default=50)
    p = add("rewrite", cmd_rewrite)
    p.add_argument("--oracle", choices=("ia", "heisenberg"), default="heisenberg")
    p.add_argument("--input", required=True, help="file holding the word of k")
    p.add_argument("--radius", type=int)
    p.add_argument("--support-bound", type=int)
    add("constants-report", cmd_constants_report)
    add("verify-lifts", cmd_verify_lifts)
    p = add("certify-witness", cmd_certify_witness)
    p.add_argument("--witness", help="AWitness JSON; the shipped Nielsen witnesses when omitted")
    return top


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        args.func(args)
    except (cn.BudgetExhausted, WordLengthExceeded) as e:
        print(f"budget exhausted: {e}", file=sys.stderr)
        return EXIT_BUDGET
    except (Violation, AssertionError, cn.NoAdmissibleLetter, sp.SpRegularizationError) as e:
        print(f"invariant violation: {e}", file=sys.stderr)
        return EXIT_VIOLATION
    except (ValueError, KeyError, json.JSONDecodeError, OSError) as e:
        print(f"input error: {e}", file=sys.stderr)
        return EXIT_PARSE
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
