"""Command-line interface.

Every verb prints one JSON report on stdout. Exit codes: 0 the property holds
(or the command succeeded), 1 it fails and the report carries a witness,
2 inconclusive, 3 input error with a one-line message on stderr.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
import tempfile
import time
from pathlib import Path
from typing import Any, Sequence

from . import __version__
from .core import DimensionSet, JointChoiceDataset, dataset_document, validate_dataset
from .errors import (
    FamilyNotSelective,
    InputError,
    LabellingSearchExceeded,
    NotSeparable,
    NotSingleValued,
    PreconditionError,
)
from .generators import generate, parse_menus_document, parse_model_spec
from .preferences import (
    is_acyclic,
    is_rationalizable,
    is_S_rich,
    rationalizability_via_selective_family,
    revealed_preference,
)
from .selective import is_selective, minimal_selective_family, parse_family, sel_size
from .separability import (
    check_menus_betweenness,
    check_S_betweenness,
    is_S_separable,
    is_separable,
    separability_via_selective_family,
    separable_subsets,
)

EXIT_HOLDS = 0
EXIT_FAILS = 1
EXIT_INCONCLUSIVE = 2
EXIT_INPUT = 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # argparse would exit with 2
        raise UsageError(message)


class _Inputs:
    """Reads every input file up front and remembers its digest."""

    def __init__(self) -> None:
        self.digests: dict[str, dict[str, str]] = {}

    def json(self, role: str, path: str) -> Any:
        try:
            raw = Path(path).read_bytes()
        except OSError as exc:
            raise UsageError(f"cannot read {path}: {exc.strerror or exc}") from None
        self.digests[role] = {"path": path, "sha256": hashlib.sha256(raw).hexdigest()}
        try:
            return json.loads(raw.decode("utf-8"))
        except (UnicodeDecodeError, json.JSONDecodeError) as exc:
            raise UsageError(f"{path} is not valid JSON: {exc}") from None


def _write_atomic(path: Path, text: str) -> None:
    try:
        with tempfile.NamedTemporaryFile("w", encoding="utf-8", dir=path.parent or ".", delete=False) as fh:
            fh.write(text)
        os.replace(fh.name, path)
    except OSError as exc:
        raise UsageError(f"cannot write {path}: {exc.strerror or exc}") from None


def _subset(D: JointChoiceDataset, text: str):
    labels = [s.strip() for s in text.split(",") if s.strip()]
    return D.dims.subset(labels)


def _report(verb: str, inputs: _Inputs) -> dict[str, Any]:
    return {"verb": verb, "inputs": inputs.digests}


# --- verbs ---------------------------------------------------------------------


def _cmd_validate(args, inputs):
    D = validate_dataset(inputs.json("dataset", args.dataset))
    rep = _report("validate", inputs)
    rep["verdict"] = "valid"
    rep["summary"] = {
        "dimensions": list(D.dims.labels),
        "alternatives": D.space.size(),
        "menus": len(D),
        "single_valued": D.single_valued,
        "complete": D.is_complete,
    }
    return rep, EXIT_HOLDS


def _cmd_separability(args, inputs):
    D = validate_dataset(inputs.json("dataset", args.dataset))
    family = parse_family(inputs.json("family", args.family), D.dims) if args.family else None
    rep = _report("separability", inputs)
    if args.set:
        r = is_S_separable(D, _subset(D, args.set))
        rep["mode"] = "subset"
        rep["verdict"] = "separable" if r.holds else "not_separable"
        rep["basis"] = "projection classes agree on the chosen S-parts"
        rep["result"] = r.to_json(D.space)
        return rep, EXIT_HOLDS if r.holds else EXIT_FAILS
    if args.brute:
        good = {S.mask for S in separable_subsets(D)}
        rep["mode"] = "brute"
        holds = len(good) == (1 << len(D.dims)) - 1
        rep["verdict"] = "separable" if holds else "not_separable"
        rep["basis"] = "S-separability checked for every nonempty S"
        rep["subsets"] = [
            {"subset": list(S.labels), "holds": S.mask in good} for S in D.dims.all_subsets()
        ]
        if not holds:
            first = next(S for S in D.dims.all_subsets() if S.mask not in good)
            rep["witness"] = is_S_separable(D, first).witness.to_json(D.space)
        return rep, EXIT_HOLDS if holds else EXIT_FAILS
    if family is not None:
        v = separability_via_selective_family(D, family)
        rep["mode"] = "family"
        rep["verdict"] = v.status
        rep["basis"] = "sufficient condition: members separable and chained betweenness holds"
        rep["reason"] = v.reason
        rep["family"] = family.to_json()
        rep["members"] = [r.to_json(D.space) for r in v.member_reports]
        if v.betweenness is not None:
            rep["betweenness"] = v.betweenness.to_json(D.space, family)
        return rep, EXIT_HOLDS if v.separable else EXIT_INCONCLUSIVE
    v = is_separable(D)
    rep["mode"] = "singletons"
    rep["method"] = v.method
    rep["verdict"] = "separable" if v.holds else "not_separable"
    if v.method == "singletons":
        rep["basis"] = "separable iff {q}-separable for every dimension q (chosen sets are products)"
    else:
        rep["basis"] = "S-separability checked for every nonempty S (some chosen sets are not products)"
    rep["reports"] = [r.to_json(D.space) for r in v.reports]
    if not v.holds:
        rep["witness"] = v.witness.to_json(D.space)
    return rep, EXIT_HOLDS if v.holds else EXIT_FAILS


def _cmd_induced(args, inputs):
    D = validate_dataset(inputs.json("dataset", args.dataset))
    r = is_S_separable(D, _subset(D, args.set))
    rep = _report("induced", inputs)
    rep["subset"] = list(r.subset.labels)
    if r.holds:
        rep["verdict"] = "separable"
        rep["induced"] = r.induced.to_json(D.space)
        return rep, EXIT_HOLDS
    rep["verdict"] = "not_separable"
    rep["witness"] = r.witness.to_json(D.space)
    return rep, EXIT_FAILS


def _cmd_betweenness(args, inputs):
    D = validate_dataset(inputs.json("dataset", args.dataset))
    rep = _report("betweenness", inputs)
    if args.family:
        family = parse_family(inputs.json("family", args.family), D.dims)
        rep["mode"] = "family"
        rep["family"] = family.to_json()
        try:
            r = check_S_betweenness(D, family)
        except LabellingSearchExceeded as exc:
            rep["verdict"] = "inconclusive"
            rep["reason"] = str(exc)
            return rep, EXIT_INCONCLUSIVE
        rep["verdict"] = "holds" if r.holds else "fails"
        rep["result"] = r.to_json(D.space, family)
        return rep, EXIT_HOLDS if r.holds else EXIT_FAILS
    if not (args.s and args.t):
        raise UsageError("betweenness needs --s and --t, or --family")
    r = check_menus_betweenness(D, _subset(D, args.s), _subset(D, args.t))
    rep["mode"] = "pair"
    rep["verdict"] = "holds" if r.holds else "fails"
    rep["result"] = r.to_json(D.space)
    return rep, EXIT_HOLDS if r.holds else EXIT_FAILS


def _cmd_richness(args, inputs):
    D = validate_dataset(inputs.json("dataset", args.dataset))
    S = _subset(D, args.set)
    r = is_S_rich(D, S)
    rep = _report("richness", inputs)
    rep["subset"] = list(S.labels)
    rep["verdict"] = "rich" if r.holds else "not_rich"
    if not r.holds:
        rep["witness"] = r.witness.to_json(D.space)
        rep["missing_count"] = len(r.missing)
    return rep, EXIT_HOLDS if r.holds else EXIT_FAILS


def _cmd_selective(args, inputs):
    if args.dims < 1:
        raise UsageError("--dims must be a positive integer")
    dims = DimensionSet(tuple(str(q + 1) for q in range(args.dims)))
    rep = _report("selective", inputs)
    rep["dimensions"] = args.dims
    rep["sel"] = sel_size(args.dims)
    if args.verify:
        raw = inputs.json("family", args.verify)
        try:
            parse_family(raw, dims)
        except FamilyNotSelective as exc:
            rep["verdict"] = "not_selective"
            rep["witness"] = {
                "kind": exc.witness.kind.value,
                "dimension": dims.labels[exc.witness["dimension"]],
                "intersection": None
                if exc.witness["intersection"] is None
                else list(exc.witness["intersection"].labels),
            }
            return rep, EXIT_FAILS
        members = [dims.subset(g) for g in raw["members"]]
        result = is_selective(members, dims)
        rep["verdict"] = "selective"
        rep["family"] = result.family.to_json()
        rep["minimal"] = len(members) == rep["sel"]
        return rep, EXIT_HOLDS
    F = minimal_selective_family(dims)
    rep["verdict"] = "constructed"
    rep["family"] = F.to_json()
    return rep, EXIT_HOLDS


def _cmd_reveal(args, inputs):
    D = validate_dataset(inputs.json("dataset", args.dataset))
    R = revealed_preference(D)
    lab = D.space.alt_labels
    strict, indifferent = [], []
    for x, y in R.pairs():
        if R.strictly_prefers(x, y):
            strict.append([lab(x), lab(y)])
        elif D.space.flat_index(x) < D.space.flat_index(y):
            indifferent.append([lab(x), lab(y)])
    rep = _report("reveal", inputs)
    acyclic = is_acyclic(R)
    rep["verdict"] = "acyclic" if acyclic.holds else "cyclic"
    rep["strict"] = strict
    rep["indifferent"] = indifferent
    if not acyclic.holds:
        rep["witness"] = acyclic.witness.to_json(D.space)
    return rep, EXIT_HOLDS


def _cmd_rationalizable(args, inputs):
    D = validate_dataset(inputs.json("dataset", args.dataset))
    rep = _report("rationalizable", inputs)
    if args.family:
        family = parse_family(inputs.json("family", args.family), D.dims)
        rep["mode"] = "family"
        rep["family"] = family.to_json()
        try:
            v = rationalizability_via_selective_family(D, family)
        except (NotSingleValued, NotSeparable) as exc:
            rep["verdict"] = "inconclusive"
            rep["reason"] = str(exc)
            return rep, EXIT_INCONCLUSIVE
        rep["basis"] = v.basis
        rep["verdict"] = v.status
        rep["members"] = [
            {"subset": list(S.labels), "rationalizable": r.holds} for S, r in v.members
        ]
        rep["cross_checked"] = v.direct is not None
        if v.mismatch:
            rep["verdict"] = "inconclusive"
            rep["reason"] = "family route and direct test disagree"
            return rep, EXIT_INCONCLUSIVE
        return rep, EXIT_HOLDS if v.rationalizable else EXIT_FAILS
    r = is_rationalizable(D)
    rep["mode"] = "direct"
    rep["basis"] = "each choice equals the maximal set of the revealed preference"
    rep["verdict"] = "rationalizable" if r.holds else "not_rationalizable"
    if not r.holds:
        rep["witness"] = r.witness.to_json(D.space)
    return rep, EXIT_HOLDS if r.holds else EXIT_FAILS


def _cmd_generate(args, inputs):
    model = inputs.json("model", args.model)
    menus = inputs.json("menus", args.menus)
    spec = parse_model_spec(model, seed=args.seed)
    D = generate(spec, parse_menus_document(menus))
    doc = dataset_document(D)
    rep = _report("generate", inputs)
    rep["verdict"] = "generated"
    rep["dataset"] = doc
    if args.output:
        _write_atomic(Path(args.output), json.dumps(doc, indent=2) + "\n")
        rep["output"] = args.output
    return rep, EXIT_HOLDS


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="jointchoice", description="Separability and rationalizability of joint choices.")
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="verb", required=True, parser_class=_Parser)

    v = sub.add_parser("validate", help="check a dataset file")
    v.add_argument("dataset")

    s = sub.add_parser("separability", help="test separability")
    s.add_argument("dataset")
    mode = s.add_mutually_exclusive_group()
    mode.add_argument("--set", help="comma-separated dimension labels")
    mode.add_argument("--all-singletons", action="store_true", help="test every {q} (default)")
    mode.add_argument("--brute", action="store_true", help="test every nonempty subset")
    mode.add_argument("--family", help="selective family JSON")

    i = sub.add_parser("induced", help="induced joint choice on a subset")
    i.add_argument("dataset")
    i.add_argument("--set", required=True)

    b = sub.add_parser("betweenness", help="menus betweenness")
    b.add_argument("dataset")
    b.add_argument("--s")
    b.add_argument("--t")
    b.add_argument("--family")

    r = sub.add_parser("richness", help="S-richness of the menu family")
    r.add_argument("dataset")
    r.add_argument("--set", required=True)

    f = sub.add_parser("selective", help="build or verify a selective family")
    f.add_argument("--dims", type=int, required=True)
    f.add_argument("--verify")

    rv = sub.add_parser("reveal", help="revealed joint preference")
    rv.add_argument("dataset")

    ra = sub.add_parser("rationalizable", help="test rationalizability")
    ra.add_argument("dataset")
    ra.add_argument("--family")

    g = sub.add_parser("generate", help="generate a dataset from a behavioral model")
    g.add_argument("--model", required=True)
    g.add_argument("--menus", required=True)
    g.add_argument("--seed", type=int)
    g.add_argument("--output")
    return p


_VERBS = {
    "validate": _cmd_validate,
    "separability": _cmd_separability,
    "induced": _cmd_induced,
    "betweenness": _cmd_betweenness,
    "richness": _cmd_richness,
    "selective": _cmd_selective,
    "reveal": _cmd_reveal,
    "rationalizable": _cmd_rationalizable,
    "generate": _cmd_generate,
}


def run(argv: Sequence[str] | None = None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    start = time.perf_counter()
    try:
        args = build_parser().parse_args(argv)
        rep, code = _VERBS[args.verb](args, _Inputs())
    except (UsageError, InputError, PreconditionError) as exc:
        msg = " ".join(str(exc).split())
        stderr.write(f"jointchoice: error: {msg}\n")
        return EXIT_INPUT
    rep["timing"] = {"seconds": round(time.perf_counter() - start, 6)}
    stdout.write(json.dumps(rep, indent=2, ensure_ascii=False) + "\n")
    return code


def main() -> None:
    sys.exit(run())
