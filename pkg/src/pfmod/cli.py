"""Command-line interface: pfmod <command> ..."""
import argparse
import json
import sys

from .adic import adic_truncation, crt_decompose, hensel_invert, localized_fingerprint
from .bs import rigidity_scan
from .finite import DEFAULT_CEILING, ResourceLimitError
from .fileio import (
    FingerprintCache, ModuleFileError, dumps, emit_element, emit_ideal, fingerprint_data,
    finite_module_data, load_module, module_hash, parse_element, parse_ideal, cached_fingerprint,
)
from .genus import genus_candidates
from .ideals import NotMaximalError, UnsupportedIdealError
from .invariants import (
    ZERO, UNIT, NotProjective, ProjectiveOfRank, fitting_ideal,
    invariant_report, truncated_profinite_annihilator,
)
from .modules import SteinitzModule
from .quotients import Distinguished, STRATEGIES, compare_fingerprints
from .rings import parse_ring_tag

EXIT_OK, EXIT_DISTINGUISHED, EXIT_ERROR, EXIT_EXTRA_SURVIVORS = 0, 1, 2, 3


def _emit(args, data, text_lines):
    if args.format == "json":
        print(dumps(data))
    else:
        print("\n".join(text_lines))


def _cache(args):
    if args.cache is None:
        return None
    return FingerprintCache(args.cache or None)


def _fingerprint(args, mf):
    return cached_fingerprint(mf.module, args.bound, _cache(args),
                              strategy=args.strategy, ceiling=args.ceiling)


def cmd_fingerprint(args):
    mf = load_module(args.module)
    fp = _fingerprint(args, mf)
    data = fingerprint_data(fp, module_hash(mf))
    _emit(args, data, [f"{len(fp.classes)} classes of order <= {fp.bound}"] + list(fp.classes))
    return EXIT_OK


def cmd_compare(args):
    a, b = load_module(args.first), load_module(args.second)
    if a.module.ring != b.module.ring:
        raise ValueError(f"modules live over different rings ({a.module.ring} and {b.module.ring})")
    verdict = compare_fingerprints(_fingerprint(args, a), _fingerprint(args, b))
    if isinstance(verdict, Distinguished):
        data = {"verdict": "Distinguished", "witness": verdict.witness, "present_in": verdict.present_in,
                "bound": args.bound}
        code = EXIT_DISTINGUISHED
    else:
        data = {"verdict": "IndistinguishableUpTo", "bound": verdict.bound}
        code = EXIT_OK
    _emit(args, data, [str(verdict)])
    return code


def _ideal_out(ideal):
    if ideal in (ZERO, UNIT) or isinstance(ideal, str):
        return ideal
    return {"label": ideal.label, "ideal": emit_ideal(ideal)}


def _verdict_out(v):
    if isinstance(v, ProjectiveOfRank):
        return {"verdict": "ProjectiveOfRank", "rank": v.rank, "certified_up_to_norm": v.certified_up_to_norm}
    if isinstance(v, NotProjective):
        w = v.witness
        return {"verdict": "NotProjective", "reason": v.reason,
                "witness": getattr(w, "label", None) if w is not None and not isinstance(w, int) else w}
    return {"verdict": "Unknown"}


def cmd_invariants(args):
    mf = load_module(args.module)
    m = mf.module
    rep = invariant_report(m, args.norm_bound)
    data = {
        "annihilator": _ideal_out(rep.annihilator),
        "mu_table": rep.mu_table,
        "projectivity": _verdict_out(rep.projectivity),
    }
    if not isinstance(m, SteinitzModule):
        data["fitting"] = {str(k): str(fitting_ideal(m, k)) for k in range(m.gens + 1)}
    if args.probe_bound:
        found = truncated_profinite_annihilator(m, args.probe_bound, args.probe_degree,
                                                args.probe_height, args.ceiling)
        data["probe_survivors"] = [emit_element(m.ring, z) if not isinstance(z, int) else z for z in found]
    lines = [f"annihilator: {rep.annihilator}",
             f"projectivity: {rep.projectivity}"]
    lines += [f"mu {k}: {v}" for k, v in rep.mu_table.items()]
    _emit(args, data, lines)
    return EXIT_OK


def cmd_genus(args):
    mf = load_module(args.module)
    if not isinstance(mf.module, SteinitzModule):
        raise ValueError("genus needs a module file with Steinitz data")
    table = genus_candidates(mf.module, args.bound, ceiling=args.ceiling)
    entries = []
    for e in table.entries:
        c = e.candidate
        entries.append({
            "class": e.class_index,
            "form": list(e.form) if e.form else None,
            "ideal": emit_ideal(c.ideal) if c.rank >= 1 else None,
            "rank": c.rank,
            "torsion": [{"ideal": emit_ideal(P), "exp": k} for P, k in c.torsion],
        })
    checks = [{"pair": [i, j], "verdict": str(v)} for i, j, v in table.cross_check]
    data = {"class_number": table.class_number, "bound": table.fingerprint_bound,
            "entries": entries, "cross_check": checks,
            "all_indistinguishable": table.all_indistinguishable}
    lines = [f"class number {table.class_number}, {len(entries)} candidates"]
    lines += [f"class {e['class']} form {e['form']}: ideal {e['ideal']}" for e in entries]
    lines += [f"{c['pair']}: {c['verdict']}" for c in checks]
    _emit(args, data, lines)
    return EXIT_OK


def cmd_bs_scan(args):
    res = rigidity_scan(args.n, args.height, args.prime_bound)
    data = {"n": res.n, "height": res.height, "prime_bound": res.prime_bound,
            "survivors": [list(s) for s in res.survivors],
            "predicted": [list(s) for s in res.predicted],
            "matches_prediction": res.matches_prediction}
    _emit(args, data, [f"survivors: {list(res.survivors)}", f"predicted: {list(res.predicted)}"])
    return EXIT_OK if res.matches_prediction else EXIT_EXTRA_SURVIVORS


def _ring_ideal(args, ring):
    return parse_ideal(ring, json.loads(args.ideal), "$ideal")


def cmd_adic(args):
    if args.action in ("truncate", "localize"):
        if not args.module:
            raise ValueError(f"adic {args.action} needs a module file")
        m = load_module(args.module).module
        ideal = _ring_ideal(args, m.ring)
        if args.action == "truncate":
            t = adic_truncation(m, ideal, args.level, args.ceiling)
            data = {"ideal": t.ideal.label, "level": t.level, "quotient": finite_module_data(t.quotient),
                    "annihilated": t.is_annihilated()}
            lines = [f"M/I^{t.level}M at {t.ideal.label}: factors {list(t.quotient.factors)}",
                     f"action {data['quotient']['action']}"]
        else:
            fp = localized_fingerprint(m, ideal, args.bound, args.ceiling)
            data = fingerprint_data(fp)
            lines = list(fp.classes)
        _emit(args, data, lines)
        return EXIT_OK
    ring = parse_ring_tag(args.ring)
    if args.action == "crt":
        target = parse_ideal(ring, json.loads(args.ideal), "$ideal") if args.ideal else args.modulus
        if target is None:
            raise ValueError("adic crt needs --modulus or --ideal")
        factors = crt_decompose(ring, target, args.ceiling)
        data = {"factors": [{"ideal": f.ideal.label, "exponent": f.exponent, "order": f.order}
                            for f in factors]}
        _emit(args, data, [f"{f.label}: order {f.order}" for f in factors])
        return EXIT_OK
    ideal = _ring_ideal(args, ring)
    elem = parse_element(ring, json.loads(args.elem), "$elem")
    inv = hensel_invert(ring, ideal, args.level, elem)
    data = {"ideal": ideal.label, "level": args.level, "inverse": emit_element(ring, inv)}
    _emit(args, data, [f"inverse: {inv}"])
    return EXIT_OK


def build_parser():
    p = argparse.ArgumentParser(prog="pfmod", description="Finite-quotient fingerprints of modules.")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, bound=True):
        sp.add_argument("--format", choices=("json", "text"), default="json")
        sp.add_argument("--ceiling", type=int, default=DEFAULT_CEILING)
        if bound:
            sp.add_argument("--bound", type=int, required=True)

    def caching(sp):
        sp.add_argument("--strategy", choices=STRATEGIES, default="auto")
        sp.add_argument("--cache", nargs="?", const="", default=None, metavar="PATH",
                        help="use the fingerprint cache (path from PATH or $PFMOD_CACHE)")

    sp = sub.add_parser("fingerprint", help="list finite quotient classes up to a bound")
    sp.add_argument("module")
    common(sp)
    caching(sp)
    sp.set_defaults(func=cmd_fingerprint)

    sp = sub.add_parser("compare", help="compare two modules by their finite quotients")
    sp.add_argument("first")
    sp.add_argument("second")
    common(sp)
    caching(sp)
    sp.set_defaults(func=cmd_compare)

    sp = sub.add_parser("invariants", help="annihilator, local generator counts, projectivity")
    sp.add_argument("module")
    common(sp, bound=False)
    sp.add_argument("--norm-bound", type=int, default=25)
    sp.add_argument("--probe-bound", type=int, default=0,
                    help="also list probe elements killing all quotients of order <= this bound")
    sp.add_argument("--probe-degree", type=int, default=1)
    sp.add_argument("--probe-height", type=int, default=5)
    sp.set_defaults(func=cmd_invariants)

    sp = sub.add_parser("genus", help="Steinitz genus table over a quadratic order")
    sp.add_argument("module")
    common(sp)
    sp.set_defaults(func=cmd_genus)

    sp = sub.add_parser("bs-scan", help="order-profile survivor scan for BS(1,n)")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--height", type=int, required=True)
    sp.add_argument("--prime-bound", type=int, required=True)
    common(sp, bound=False)
    sp.set_defaults(func=cmd_bs_scan)

    sp = sub.add_parser("adic", help="adic truncations, CRT splitting, Hensel inverses")
    sp.add_argument("action", choices=("truncate", "localize", "crt", "hensel"))
    sp.add_argument("module", nargs="?")
    sp.add_argument("--ring", default="ZZ", help="ring tag for crt and hensel")
    sp.add_argument("--ideal", help="ideal as JSON, e.g. '{\"p\": 5, \"f\": [3, 1]}'")
    sp.add_argument("--level", type=int, default=1)
    sp.add_argument("--modulus", type=int)
    sp.add_argument("--elem", default="1", help="ring element as JSON")
    sp.add_argument("--bound", type=int, default=16)
    common(sp, bound=False)
    sp.set_defaults(func=cmd_adic)
    return p


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ModuleFileError, ResourceLimitError, NotMaximalError, UnsupportedIdealError,
            ValueError, TypeError, OSError) as exc:
        print(f"pfmod: error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
