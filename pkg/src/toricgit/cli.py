"""Command-line front end.

Exit codes: 0 success (or property true, checks passed), 1 property
false or check failed, 2 malformed or unsupported input.  All verbs
accept --json for machine output; the text reports are a rendering of
the same data.
"""

from __future__ import annotations

import argparse
import json
import sys

from .checks import (
    check_bundle_unstable_locus,
    check_moving_vs_nef_example,
    check_neighborly_codim_equivalence,
    check_product_unstable_locus,
    check_quotient_properties,
    check_rank_one_unstable_origin,
    check_small_unstable_locus,
    check_two_neighborly_equivalence,
    check_unstable_inclusion_forces_nef,
    run_all,
)
from .cox import degree_map, irrelevant_ideal, zero_locus_codim
from .fans import (
    blowup_pn_along_linear,
    count_sections,
    divisor_from_json,
    fan_from_json,
    fan_to_json,
    is_m_neighborly,
    product_fan,
    projective_bundle_fan,
    projective_space_fan,
    validate,
)
from .vgit import (
    ample_character,
    enumerate_chambers,
    is_boundary_character,
    nef_cone,
    unstable_supports,
)


def _load_json(path):
    with open(path, "r", encoding="utf-8") as fh:
        return json.load(fh)


def _load_fan(path):
    return fan_from_json(_load_json(path))


def _parse_character(text, dm):
    try:
        chi = tuple(int(part) for part in text.split(","))
    except ValueError:
        raise ValueError(f"--char expects comma-separated integers, got {text!r}")
    if len(chi) != dm.cl_free_rank:
        raise ValueError(
            f"--char has {len(chi)} coordinates, class group free rank is "
            f"{dm.cl_free_rank}"
        )
    return chi


def _fmt(value):
    if isinstance(value, bool):
        return "true" if value else "false"
    if value is None:
        return "none"
    if isinstance(value, (list, tuple)):
        return json.dumps(value)
    return str(value)


def _print_report(data, indent=0):
    pad = "  " * indent
    for key, value in data.items():
        if isinstance(value, dict):
            print(f"{pad}{key}:")
            _print_report(value, indent + 1)
        else:
            print(f"{pad}{key}: {_fmt(value)}")


def _emit(data, as_json):
    if as_json:
        print(json.dumps(data, sort_keys=True, separators=(",", ":")))
    elif isinstance(data, dict):
        _print_report(data)
    else:
        print(json.dumps(data, indent=2))


def _cmd_validate(args):
    report = validate(_load_fan(args.fan))
    _emit(
        {
            "simplicial": report.simplicial,
            "smooth": report.smooth,
            "complete": report.complete,
            "projective": report.projective,
        },
        args.json,
    )
    return 0


def _max_neighborly(fan):
    m = 1
    while m < fan.n_rays and is_m_neighborly(fan, m + 1):
        m += 1
    return m


def _cmd_analyze(args):
    fan = _load_fan(args.fan)
    report = validate(fan)
    ideal = irrelevant_ideal(fan)
    codim = zero_locus_codim(ideal)
    out = {
        "validation": {
            "simplicial": report.simplicial,
            "smooth": report.smooth,
            "complete": report.complete,
            "projective": report.projective,
        },
        "dim": fan.dim,
        "n_rays": fan.n_rays,
        "irrelevant_ideal_generators": [list(s) for s in ideal.generator_supports],
        "unstable_codim": codim,
        "max_neighborly_m": _max_neighborly(fan),
        "small_unstable_locus": codim >= 3,
        "class_group": None,
    }
    if report.complete:
        dm = degree_map(fan)
        out["class_group"] = {
            "free_rank": dm.cl_free_rank,
            "torsion": list(dm.torsion),
            "ray_degrees": [list(d) for d in dm.degrees_free],
        }
        if report.projective:
            out["ample_character"] = list(ample_character(fan, dm))
    _emit(out, args.json)
    return 0


def _cmd_neighborly(args):
    fan = _load_fan(args.fan)
    answer = is_m_neighborly(fan, args.m)
    if args.json:
        _emit({"m": args.m, "neighborly": answer}, True)
    else:
        print("true" if answer else "false")
    return 0 if answer else 1


def _cmd_chambers(args):
    fan = _load_fan(args.fan)
    dm = degree_map(fan)
    if args.char is not None:
        chi = _parse_character(args.char, dm)
        sig = unstable_supports(dm, chi)
        _emit(
            {
                "character": list(chi),
                "facets": [list(f) for f in sig.facets],
                "codim": dm.n_rays - sig.max_facet_size(),
                "outside_effective": sig.outside_effective,
                "on_boundary": is_boundary_character(dm, chi),
            },
            args.json,
        )
        return 0
    chambers = enumerate_chambers(dm)
    out = [
        {
            "interior_point": list(chi),
            "facets": [list(f) for f in sig.facets],
            "codim": dm.n_rays - sig.max_facet_size(),
        }
        for chi, sig in chambers
    ]
    _emit(out, args.json)
    return 0


def _cmd_nef(args):
    fan = _load_fan(args.fan)
    dm = degree_map(fan)
    try:
        nef = nef_cone(fan, dm)
    except ValueError as exc:
        if args.json:
            _emit({"projective": False, "error": str(exc)}, True)
        else:
            print(str(exc))
        return 1
    if args.char is not None:
        chi = _parse_character(args.char, dm)
        inside = nef.contains(chi)
        if args.json:
            _emit({"character": list(chi), "nef": inside}, True)
        else:
            print("true" if inside else "false")
        return 0 if inside else 1
    _emit(
        {
            "generators": [list(g) for g in nef.generators],
            "ample_character": list(ample_character(fan, dm)),
        },
        args.json,
    )
    return 0


def _cmd_sections(args):
    fan = _load_fan(args.fan)
    div = divisor_from_json(_load_json(args.divisor), fan)
    count = count_sections(fan, div)
    if args.json:
        _emit({"sections": count}, True)
    else:
        print(count)
    return 0


def _as_int(text):
    try:
        return int(text)
    except ValueError:
        raise ValueError(f"expected an integer argument, got {text!r}")


def _cmd_construct(args):
    kind, params = args.kind, args.params
    if kind == "pn":
        if len(params) != 1:
            raise ValueError("construct pn takes one argument: the dimension")
        fan = projective_space_fan(_as_int(params[0]))
    elif kind == "product":
        if len(params) != 2:
            raise ValueError("construct product takes two fan files")
        fan = product_fan(_load_fan(params[0]), _load_fan(params[1]))
    elif kind == "blowup-linear":
        if len(params) != 2:
            raise ValueError(
                "construct blowup-linear takes the ambient dimension and the center dimension"
            )
        fan = blowup_pn_along_linear(_as_int(params[0]), _as_int(params[1]))
    elif kind == "bundle":
        if len(params) < 3:
            raise ValueError(
                "construct bundle takes a base fan file and at least two divisor files"
            )
        base = _load_fan(params[0])
        divisors = [divisor_from_json(_load_json(p), base) for p in params[1:]]
        fan = projective_bundle_fan(base, divisors)
    else:
        raise ValueError(f"unknown construction kind {kind!r}")
    print(json.dumps(fan_to_json(fan), sort_keys=True))
    return 0


def _run_named_check(args):
    name = args.name
    files = args.args
    if name == "all":
        return run_all()
    if name == "small-unstable-locus":
        return [check_small_unstable_locus(_load_fan(files[0]))]
    if name == "two-neighborly":
        return [check_two_neighborly_equivalence(_load_fan(files[0]))]
    if name == "neighborly-codim":
        if args.m is None:
            raise ValueError("check neighborly-codim requires --m")
        return [check_neighborly_codim_equivalence(_load_fan(files[0]), args.m)]
    if name == "rank-one":
        return [check_rank_one_unstable_origin(_load_fan(files[0]))]
    if name == "product":
        if len(files) != 2:
            raise ValueError("check product takes two fan files")
        return [check_product_unstable_locus(_load_fan(files[0]), _load_fan(files[1]))]
    if name == "bundle":
        if len(files) < 4:
            raise ValueError(
                "check bundle takes a base fan file and at least three divisor files"
            )
        base = _load_fan(files[0])
        divisors = [divisor_from_json(_load_json(p), base) for p in files[1:]]
        return [check_bundle_unstable_locus(base, divisors, m_max=args.m_max)]
    if name == "moving-vs-nef":
        return [check_moving_vs_nef_example()]
    if name == "quotient-properties":
        return [check_quotient_properties(_load_fan(files[0]))]
    if name == "forces-nef":
        return [check_unstable_inclusion_forces_nef(_load_fan(files[0]))]
    raise ValueError(f"unknown check {name!r}")


def _cmd_check(args):
    if args.name not in {"all", "moving-vs-nef"} and not args.args:
        raise ValueError(f"check {args.name} needs input files")
    results = _run_named_check(args)
    if args.json:
        _emit([r.as_json() for r in results], True)
    else:
        for r in results:
            status = "PASS" if r.passed else "FAIL"
            if len(results) == 1 or not r.passed:
                print(f"{status} {r.name} {json.dumps(r.as_json()['witness'], sort_keys=True)}")
            else:
                print(f"{status} {r.name}")
        if len(results) > 1:
            n_pass = sum(1 for r in results if r.passed)
            print(f"{n_pass}/{len(results)} checks passed")
    return 0 if all(r.passed for r in results) else 1


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="toricgit",
        description="Exact GIT and chamber computations for simplicial toric fans.",
    )
    sub = parser.add_subparsers(dest="verb", required=True)

    def fan_verb(name, helptext, handler):
        p = sub.add_parser(name, help=helptext)
        p.add_argument("fan", help="fan JSON file")
        p.add_argument("--json", action="store_true", help="machine-readable output")
        p.set_defaults(handler=handler)
        return p

    fan_verb("validate", "report simplicial/smooth/complete/projective flags", _cmd_validate)
    fan_verb("analyze", "full combinatorial report for one fan", _cmd_analyze)

    p = fan_verb("neighborly", "test whether any m rays span a cone", _cmd_neighborly)
    p.add_argument("--m", type=int, required=True)

    p = fan_verb("chambers", "enumerate GIT chambers or classify one character", _cmd_chambers)
    p.add_argument("--char", help="comma-separated character coordinates")

    p = fan_verb("nef", "nef cone generators, or membership with --char", _cmd_nef)
    p.add_argument("--char", help="comma-separated character coordinates")

    p = sub.add_parser("sections", help="count global sections of a divisor")
    p.add_argument("fan", help="fan JSON file")
    p.add_argument("divisor", help="divisor JSON file with 'coefficients'")
    p.add_argument("--json", action="store_true")
    p.set_defaults(handler=_cmd_sections)

    p = sub.add_parser("construct", help="emit a fan built by a named constructor")
    p.add_argument("kind", choices=["pn", "product", "blowup-linear", "bundle"])
    p.add_argument("params", nargs="*")
    p.set_defaults(handler=_cmd_construct)

    p = sub.add_parser("check", help="run a named verification or the whole suite")
    p.add_argument(
        "name",
        choices=[
            "all",
            "small-unstable-locus",
            "two-neighborly",
            "neighborly-codim",
            "rank-one",
            "product",
            "bundle",
            "moving-vs-nef",
            "quotient-properties",
            "forces-nef",
        ],
    )
    p.add_argument("args", nargs="*", help="input files for the chosen check")
    p.add_argument("--m", type=int, help="neighborliness degree")
    p.add_argument("--m-max", type=int, default=8, help="largest scaling to try")
    p.add_argument("--json", action="store_true")
    p.set_defaults(handler=_cmd_check)

    return parser


def main(argv=None):
    args = _build_parser().parse_args(argv)
    try:
        return args.handler(args)
    except json.JSONDecodeError as exc:
        print(
            f"error: malformed JSON at line {exc.lineno} column {exc.colno}: {exc.msg}",
            file=sys.stderr,
        )
        return 2
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
