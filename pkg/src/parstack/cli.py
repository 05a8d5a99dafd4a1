"""Command-line interface: scenario commands and the verification entry point.

Subcommands: convert, push, pull, degree, verify, replay.
Exit codes: 0 success, 1 verification failure, 2 input error.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
from fractions import Fraction

from . import __version__
from . import scenario as sio
from .errors import ParstackError, ParseError, ValidationError
from .functors import (pullback_parabolic, pullback_graded,
                       pushforward_graded, pushforward_parabolic)
from .harness import SUITES, TrialConfig
from .parabolic import ParabolicBundle, parabolic_degree
from .rootstack import from_parabolic, to_parabolic

PASS, FAIL, USAGE = 0, 1, 2


def _read_scenario(path):
    try:
        with open(path) as fh:
            text = fh.read()
    except OSError as exc:
        raise ParseError("cannot read %s: %s" % (path, exc))
    return sio.loads(text)


def _write_out(obj, out_path):
    text = sio.dumps(obj)
    if out_path:
        with open(out_path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _decode_objects(field, raw):
    """Objects are per-point: (kind, at-label, decoded point or module, rank,
    underlying_degree)."""
    out = []
    for idx, obj in enumerate(raw.get("objects", [])):
        kind = obj.get("kind")
        at = obj.get("at")
        rank = obj.get("rank")
        where = " (object %d)" % idx
        if kind in ("parabolic_point", "parabolic_bundle"):
            if kind == "parabolic_bundle":
                bundle = sio.decode_bundle(obj, field)
                out.append(("parabolic_bundle", None, bundle, bundle.rank,
                            bundle.underlying_degree))
                continue
            if not isinstance(rank, int) or rank < 1:
                raise ParseError("object%s needs an integer rank" % where)
            pt = sio.decode_point(obj, field, rank, where)
            out.append(("parabolic_point", at, pt, rank,
                        obj.get("underlying_degree", 0)))
        elif kind == "graded_module":
            if not isinstance(rank, int) or rank < 1:
                raise ParseError("object%s needs an integer rank" % where)
            mod = sio.decode_module(obj, field, rank, where)
            out.append(("graded_module", at, mod, rank,
                        obj.get("underlying_degree", 0)))
        else:
            raise ParseError("object%s has unknown kind %r" % (where, kind))
    return out


def _weight_table(point, rank, heading):
    lines = ["%s  (rank %d, order %d)" % (heading, rank, point.order),
             "  weight      multiplicity"]
    for w, m in point.weights():
        lines.append("  %-10s  %d" % (w, m))
    return "\n".join(lines)


# -- convert ---------------------------------------------------------------


def cmd_convert(args):
    field, raw = _read_scenario(args.scenario)
    direction = args.direction
    objects = _decode_objects(field, raw)
    converted = []
    touched = 0
    for kind, at, obj, rank, deg in objects:
        if kind == "parabolic_bundle":
            if direction == "to-graded":
                for label in obj.labels():
                    enc = sio.encode_module(from_parabolic(obj.points[label]), field)
                    enc.update(kind="graded_module", at=label, rank=obj.rank,
                               underlying_degree=obj.underlying_degree)
                    converted.append(enc)
                    touched += 1
            else:
                converted.append(sio.encode_bundle(obj, field))
        elif kind == "parabolic_point":
            if direction == "to-graded":
                enc = sio.encode_module(from_parabolic(obj), field)
                enc.update(kind="graded_module", at=at, rank=rank,
                           underlying_degree=deg)
                converted.append(enc)
                touched += 1
            else:
                enc = sio.encode_point(obj, field)
                enc.update(kind="parabolic_point", at=at, rank=rank,
                           underlying_degree=deg)
                converted.append(enc)
        else:
            if direction == "to-parabolic":
                enc = sio.encode_point(to_parabolic(obj), field)
                enc.update(kind="parabolic_point", at=at, rank=rank,
                           underlying_degree=deg)
                converted.append(enc)
                touched += 1
            else:
                enc = sio.encode_module(obj, field)
                enc.update(kind="graded_module", at=at, rank=rank,
                           underlying_degree=deg)
                converted.append(enc)
    if not touched:
        raise ValidationError("no objects in the source representation "
                              "for direction %r" % direction)
    out = dict(raw)
    out["objects"] = converted
    _write_out(out, args.out)
    return PASS


# -- push / pull -----------------------------------------------------------


def _cover_of(field, raw):
    cover = raw.get("cover")
    if cover is None:
        raise ParseError("scenario needs a 'cover' block")
    if isinstance(cover, list):
        if len(cover) != 1:
            raise ParseError("functor commands take exactly one cover entry")
        cover = cover[0]
    return sio.decode_cover(cover, field)


def cmd_push(args):
    field, raw = _read_scenario(args.scenario)
    target, profile = _cover_of(field, raw)
    objects = _decode_objects(field, raw)
    by_label = {at: (kind, obj, rank) for kind, at, obj, rank, _ in objects
                if at is not None}
    kinds = set()
    per_branch = []
    for br in profile.branches:
        if br.label not in by_label:
            raise ValidationError("no object at branch %r" % br.label)
        kind, obj, rank = by_label[br.label]
        kinds.add(kind)
        per_branch.append(obj)
    if len(kinds) != 1:
        raise ValidationError("all branch objects must be on the same side")
    side = kinds.pop()
    if side == "graded_module":
        pushed_mod = pushforward_graded(profile, per_branch)
        pushed = to_parabolic(pushed_mod)
        enc = sio.encode_module(pushed_mod, field)
        enc.update(kind="graded_module", at=target, rank=pushed_mod.n)
    else:
        pushed = pushforward_parabolic(profile, per_branch)
        enc = sio.encode_point(pushed, field)
        enc.update(kind="parabolic_point", at=target, rank=pushed.n)
    out = dict(raw)
    out["objects"] = [enc]
    _write_out(out, args.out)
    print(_weight_table(pushed, pushed.n, "direct image at %r" % target),
          file=sys.stderr)
    return PASS


def cmd_pull(args):
    field, raw = _read_scenario(args.scenario)
    target, profile = _cover_of(field, raw)
    objects = _decode_objects(field, raw)
    sources = [(kind, obj, rank, deg) for kind, at, obj, rank, deg in objects
               if at == target or kind == "parabolic_bundle"]
    if len(sources) != 1:
        raise ValidationError("pull needs exactly one object at the target")
    kind, obj, rank, deg = sources[0]
    if kind == "parabolic_bundle":
        if target not in obj.points:
            raise ValidationError("bundle is not marked at target %r" % target)
        point, deg = obj.points[target], obj.underlying_degree
        kind = "parabolic_point"
    else:
        point = obj
    deg_f = raw.get("deg_f", sum(br.e for br in profile.branches))
    results = []
    tables = []
    pulled_degree_total = Fraction(deg_f) * deg
    for br in profile.branches:
        if kind == "graded_module":
            pulled_mod = pullback_graded(profile, point, br.label)
            pulled = to_parabolic(pulled_mod)
            enc = sio.encode_module(pulled_mod, field)
            enc.update(kind="graded_module", at=br.label, rank=pulled_mod.n)
        else:
            pulled = pullback_parabolic(profile, point, br.label)
            enc = sio.encode_point(pulled, field)
            enc.update(kind="parabolic_point", at=br.label, rank=pulled.n)
        results.append(enc)
        tables.append(_weight_table(pulled, pulled.n, "pullback at %r" % br.label))
        src_pt = point if kind != "graded_module" else to_parabolic(point)
        for w, m in src_pt.weights():
            scaled = w * br.e
            pulled_degree_total += m * (scaled.numerator // scaled.denominator
                                        + scaled - int(scaled))
    out = dict(raw)
    out["objects"] = results
    _write_out(out, args.out)
    for tbl in tables:
        print(tbl, file=sys.stderr)
    if "deg_f" in raw or "underlying_degree" in json.dumps(raw.get("objects", [])):
        print("pulled parabolic degree: %s  (= deg f %s x source degree data)"
              % (pulled_degree_total, deg_f), file=sys.stderr)
    return PASS


# -- degree ----------------------------------------------------------------


def cmd_degree(args):
    field, raw = _read_scenario(args.scenario)
    objects = _decode_objects(field, raw)
    rows = []
    for kind, at, obj, rank, deg in objects:
        if kind == "parabolic_bundle":
            rows.append(("bundle", rank, parabolic_degree(obj)))
        elif kind == "parabolic_point":
            bundle = ParabolicBundle(rank, deg, {at or "y": obj})
            rows.append(("point %r" % (at or "y"), rank, parabolic_degree(bundle)))
        else:
            pt = to_parabolic(obj)
            bundle = ParabolicBundle(rank, deg, {at or "y": pt})
            rows.append(("module %r" % (at or "y"), rank, parabolic_degree(bundle)))
    print("object        rank  parabolic degree")
    for name, rank, pd in rows:
        print("%-12s  %-4d  %s" % (name, rank, pd))
    return PASS


# -- verify / replay -------------------------------------------------------


def _config_hash(cfg):
    blob = json.dumps(cfg.to_dict(), sort_keys=True).encode()
    return hashlib.sha256(blob).hexdigest()[:16]


def _run_verify(suites, cfg):
    reports = []
    all_pass = True
    for name in suites:
        rep = SUITES[name](cfg)
        reports.append(rep)
        all_pass = all_pass and rep.passed
    return reports, all_pass


def cmd_verify(args):
    if args.replay:
        return cmd_replay(args)
    suites = list(SUITES) if args.suite == "all" else [args.suite]
    cfg = TrialConfig(seed=args.seed, trials=args.trials,
                      field_name=args.field)
    reports, all_pass = _run_verify(suites, cfg)
    doc = {
        "tool_version": __version__,
        "seed": cfg.seed,
        "config": cfg.to_dict(),
        "config_hash": _config_hash(cfg),
        "passed": all_pass,
        "reports": [rep.to_dict(with_timing=False) for rep in reports],
        "timing": {rep.suite: rep.elapsed for rep in reports},
    }
    text = json.dumps(doc, indent=2, sort_keys=True) + "\n"
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    for rep in reports:
        print("suite %-12s %s (%d trials)" %
              (rep.suite, "pass" if rep.passed else "FAIL", len(rep.verdicts)),
              file=sys.stderr)
    return PASS if all_pass else FAIL


def cmd_replay(args):
    path = args.replay if args.replay else args.counterexample
    try:
        with open(path) as fh:
            record = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ParseError("cannot read counterexample: %s" % exc)
    try:
        suite = record["suite"]
        index = record["trial_index"]
        cfg = TrialConfig(seed=record["config"]["seed"],
                          trials=index + 1,
                          max_rank=record["config"]["max_rank"],
                          max_order=record["config"]["max_order"],
                          max_branches=record["config"]["max_branches"],
                          field_name=record["config"]["field"])
    except (KeyError, TypeError) as exc:
        raise ParseError("malformed counterexample: missing %s" % exc)
    if suite not in SUITES:
        raise ParseError("unknown suite %r" % suite)
    rep = SUITES[suite](cfg, mutation=record.get("mutation"))
    i, ok, note = rep.verdicts[index]
    reproduced = (not ok) and note == record.get("note")
    print("replay %s trial %d: %s (%r)" %
          (suite, index, "fail" if not ok else "pass", note), file=sys.stderr)
    print("verdict %s" % ("reproduced" if reproduced else "NOT reproduced"),
          file=sys.stderr)
    return PASS if reproduced else FAIL


# -- entry point -----------------------------------------------------------


def build_parser():
    p = argparse.ArgumentParser(prog="parstack",
                                description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("convert", help="convert between the two representations")
    c.add_argument("scenario")
    c.add_argument("--direction", choices=["to-graded", "to-parabolic"],
                   required=True)
    c.add_argument("--out")
    c.set_defaults(fn=cmd_convert)

    c = sub.add_parser("push", help="direct image over the cover")
    c.add_argument("scenario")
    c.add_argument("--out")
    c.set_defaults(fn=cmd_push)

    c = sub.add_parser("pull", help="pullback along each branch")
    c.add_argument("scenario")
    c.add_argument("--out")
    c.set_defaults(fn=cmd_pull)

    c = sub.add_parser("degree", help="parabolic degree table")
    c.add_argument("scenario")
    c.set_defaults(fn=cmd_degree)

    c = sub.add_parser("verify", help="run the randomized differential checks")
    c.add_argument("--suite", choices=list(SUITES) + ["all"], default="all")
    c.add_argument("--trials", type=int, default=200)
    c.add_argument("--seed", type=int, default=0)
    c.add_argument("--field", default="rational")
    c.add_argument("--out")
    c.add_argument("--replay", help="replay a captured counterexample file")
    c.set_defaults(fn=cmd_verify)

    c = sub.add_parser("replay", help="replay a captured counterexample")
    c.add_argument("counterexample")
    c.set_defaults(fn=cmd_replay, replay=None)

    return p


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except (ParseError, ValidationError) as exc:
        print("input error: %s" % exc, file=sys.stderr)
        return USAGE
    except ParstackError as exc:
        print("input error: %s: %s" % (type(exc).__name__, exc), file=sys.stderr)
        return USAGE


if __name__ == "__main__":
    sys.exit(main())
