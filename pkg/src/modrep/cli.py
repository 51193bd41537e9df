"""Command-line front end.

Every task reads a manifest (shipped ones are addressed as ``builtin:NAME``),
computes, prints a human-readable summary, and can write a machine-readable
JSON report.  The same manifest and seed produce a byte-identical report;
timings are therefore only embedded when --timings is passed.

Exit codes: 0 success, 1 computational failure (caps, iteration limits,
splitting-field refusals), 2 input error.
"""

from __future__ import annotations

import argparse
import json
import re
import sys
import time
from importlib import resources

from . import __version__
from .blocks import block_of, cartan_matrix, central_idempotents, pims
from .chop import chop, fingerprint, spin, verify_certificate
from .errors import (CapExceeded, ComputationFailure, DataError, InputError,
                     ModrepError, SplittingFieldError)
from .ffield import GF, Mat
from .fixtures import label_hprime_module, hprime_reference_simples
from .green import green_correspondent, higman_test, trivial_source_test, vertex
from .io_formats import (Manifest, parse_manifest, parse_matrix_file, parse_perm_file,
                         parse_word_file, write_matrix_file)
from .perm import GroupHandle, Subgroup, evaluate_word, right_transversal
from .prng import Prng
from .rep import (Rep, direct_sum, dual, hom_space, induce, perm_module,
                  regular_module, restrict, subsets_action, tensor, trivial_rep)
from .structure import (end_algebra, algebra_radical, indec_decompose,
                        radical_series_layers, socle_series_layers)
from . import pipelines

import numpy as np
import os


def _builtin_path(name: str):
    ref = resources.files("modrep.data").joinpath(name)
    if not ref.is_file():
        raise InputError(f"no shipped data file {name!r}")
    return ref


def _resolve(source: str, manifest: Manifest):
    if source.startswith("builtin:"):
        return str(_builtin_path(source.split(":", 1)[1]))
    return os.path.join(manifest.base_dir, source)


class Context:
    """Loaded manifest: the group, validated subgroups, and lazy modules."""

    def __init__(self, manifest: Manifest, seed: int | None = None,
                 field=None):
        self.manifest = manifest
        self.field = field or manifest.field
        self.seed = manifest.seed if seed is None else seed
        self.group = self._load_group()
        self.subgroups = {}
        for name, (kind, src) in manifest.subgroups.items():
            path = _resolve(src, manifest)
            if kind == "words":
                words = parse_word_file(path)
                sub = Subgroup(self.group, words=words, name=name)
            else:
                perms = parse_perm_file(path)
                sub = Subgroup(self.group, gens=perms, name=name)
            self.subgroups[name] = sub
        self._modules = {}

    def _load_group(self) -> GroupHandle:
        src = self.manifest.group_source
        path = _resolve(src, self.manifest)
        perms = parse_perm_file(path)
        return GroupHandle(perms)

    def subgroup(self, name) -> Subgroup:
        if name not in self.subgroups:
            raise InputError(f"manifest declares no subgroup {name!r}")
        return self.subgroups[name]

    def module(self, name) -> Rep:
        if name in self._modules:
            return self._modules[name]
        if name not in self.manifest.modules:
            raise InputError(f"manifest declares no module {name!r}")
        rep = self._eval(self.manifest.modules[name]).relabel(name)
        self._modules[name] = rep
        return rep

    # -- tiny expression language -------------------------------------------

    def _eval(self, expr: str) -> Rep:
        expr = expr.strip()
        m = re.fullmatch(r"(\w+)\s*\((.*)\)", expr, re.S)
        if not m:
            if expr in self.manifest.modules:
                return self.module(expr)
            raise InputError(f"cannot parse module expression {expr!r}")
        head, argstr = m.group(1), m.group(2).strip()
        args = _split_args(argstr)
        if head == "trivial":
            return trivial_rep(self.group, self.field)
        if head == "regular":
            return regular_module(self.group, self.field)
        if head == "perm_module":
            if args == ["natural"] or args == []:
                return perm_module(self.group, list(self.group.generators), self.field)
            if len(args) == 2 and args[0] == "subsets":
                return perm_module(self.group, subsets_action(self.group, int(args[1])),
                                   self.field)
            raise InputError("perm_module takes 'natural' or 'subsets, k'")
        if head == "load":
            mats = [parse_matrix_file(_resolve(a, self.manifest), self.field)
                    for a in args]
            return Rep(self.group, self.field, mats)
        if head == "tensor":
            return tensor(self._eval(args[0]), self._eval(args[1]))
        if head == "direct_sum":
            return direct_sum(self._eval(args[0]), self._eval(args[1]))
        if head == "dual":
            return dual(self._eval(args[0]))
        if head == "restrict":
            return restrict(self._eval(args[0]), self.subgroup(args[1]))
        if head == "induce_trivial":
            sub = self.subgroup(args[0])
            return induce(trivial_rep(sub.group, self.field), self.group, sub)
        if head == "factor":
            base = self._eval(args[0])
            want = int(args[1])
            res = chop(base, Prng(self.seed))
            hits = [f.rep for f in res.factors if f.rep.dim == want]
            if len(hits) != 1:
                raise InputError(
                    f"factor(..., {want}) is not unique: dims {sorted(res.dims_multiset())}")
            return hits[0]
        if head == "reference":
            refs = hprime_reference_simples(self.field)
            if args[0] not in refs:
                raise InputError(f"no reference simple {args[0]!r}")
            return Rep(self.group, self.field, refs[args[0]].gen_mats, label=args[0],
                       validate=False)
        raise InputError(f"unknown module constructor {head!r}")


def _split_args(argstr: str):
    if not argstr:
        return []
    out, depth, cur = [], 0, []
    for ch in argstr:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if ch == "," and depth == 0:
            out.append("".join(cur).strip())
            cur = []
        else:
            cur.append(ch)
    out.append("".join(cur).strip())
    return out


# ---------------------------------------------------------------------------
# reports
# ---------------------------------------------------------------------------

def _layers_json(layers):
    return [list(layer) for layer in layers]


def _module_descriptor(ctx: Context, rep: Rep):
    desc = {"dim": rep.dim, "label": rep.label}
    if ctx.manifest.options.get("labels") == "hprime" and rep.dim in (1, 2):
        lab = label_hprime_module(rep, ctx.field)
        if lab:
            desc["iso_label"] = lab
    return desc


class Report:
    def __init__(self, task, ctx: Context, args):
        self.doc = {
            "tool": "modrep",
            "version": __version__,
            "schema": 1,
            "task": task,
            "manifest": args.manifest,
            "field": f"{ctx.field.p}^{ctx.field.e}" if ctx.field.e > 1 else str(ctx.field.p),
            "seed": ctx.seed,
            "inputs": {},
            "results": {},
            "certificates": {},
        }
        self._t0 = time.time()
        self._timings = {}
        self._want_timings = getattr(args, "timings", False)

    def mark(self, label):
        self._timings[label] = round(time.time() - self._t0, 3)

    def finish(self, args):
        if self._want_timings:
            self.doc["timings"] = self._timings
        text = json.dumps(self.doc, sort_keys=True, indent=1) + "\n"
        if args.out:
            with open(args.out, "w") as fh:
                fh.write(text)
        elif args.json:
            sys.stdout.write(text)


# ---------------------------------------------------------------------------
# subcommand handlers
# ---------------------------------------------------------------------------

def _ctx(args) -> Context:
    src = args.manifest
    if src.startswith("builtin:"):
        path = str(_builtin_path(src.split(":", 1)[1]))
    else:
        path = src
    manifest = parse_manifest(path)
    field = GF(*_parse_field(args.field)) if args.field else None
    return Context(manifest, seed=args.seed, field=field)


def _parse_field(text):
    m = re.fullmatch(r"(\d+)(?:\^(\d+))?", text)
    if not m:
        raise InputError("--field must look like 3 or 3^2")
    return int(m.group(1)), int(m.group(2) or 1)


def cmd_order(args):
    ctx = _ctx(args)
    rep = Report("order", ctx, args)
    rep.doc["results"]["group_order"] = ctx.group.order()
    rep.doc["results"]["subgroup_orders"] = {
        name: sub.order() for name, sub in sorted(ctx.subgroups.items())}
    print(f"group order {ctx.group.order()}")
    for name, sub in sorted(ctx.subgroups.items()):
        print(f"subgroup {name}: order {sub.order()}")
    rep.finish(args)
    return 0


def cmd_chop(args):
    ctx = _ctx(args)
    rep = Report("chop", ctx, args)
    module = ctx.module(args.module)
    result = chop(module, Prng(ctx.seed))
    facs = []
    for fac in result.factors:
        entry = _module_descriptor(ctx, fac.rep)
        entry.update({"multiplicity": fac.multiplicity, "is_splitting": fac.is_splitting})
        if fac.certificate is not None:
            entry["certificate_ok"] = verify_certificate(fac.rep, fac.certificate)
        facs.append(entry)
    rep.doc["inputs"]["module"] = args.module
    rep.doc["results"]["factors"] = facs
    print(f"chop({args.module}): dim {module.dim}")
    for e in facs:
        lab = e.get("iso_label") or e.get("label") or f"dim{e['dim']}"
        print(f"  {lab}: dim {e['dim']} x{e['multiplicity']}"
              + ("" if e["is_splitting"] else "  [not absolutely irreducible]"))
    rep.finish(args)
    return 0


def cmd_spin(args):
    ctx = _ctx(args)
    rep = Report("spin", ctx, args)
    module = ctx.module(args.module)
    if args.vector == "ones":
        seed = np.ones(module.dim, dtype=ctx.field.dtype)
    else:
        vals = [int(t) for t in args.vector.split(",")]
        if len(vals) != module.dim:
            raise InputError(f"seed vector needs {module.dim} entries")
        seed = np.array(vals, dtype=ctx.field.dtype)
    basis = spin(module, [seed])
    rep.doc["inputs"] = {"module": args.module, "vector": args.vector}
    rep.doc["results"]["submodule_dim"] = basis.nrows
    print(f"spin({args.module}, {args.vector}): submodule of dim {basis.nrows}")
    rep.finish(args)
    return 0


def _simples_for(ctx):
    if ctx.manifest.options.get("labels") != "hprime":
        raise InputError("this task needs 'labels = hprime' in the manifest")
    refs = hprime_reference_simples(ctx.field)
    out = []
    for lab in ("1a", "1b", "1c", "1d", "2"):
        r = refs[lab]
        out.append(Rep(ctx.group, ctx.field, r.gen_mats, label=lab, validate=False))
    return out


def cmd_socle(args, radical=False):
    ctx = _ctx(args)
    rep = Report("radical" if radical else "socle", ctx, args)
    module = ctx.module(args.module)
    simples = _simples_for(ctx)
    if radical:
        layers = radical_series_layers(module, simples)
    else:
        layers = socle_series_layers(module, simples)
    rep.doc["inputs"]["module"] = args.module
    rep.doc["results"]["layers"] = _layers_json(layers)
    kind = "radical (top down)" if radical else "socle (bottom up)"
    print(f"{kind} layers of {args.module}:")
    for layer in layers:
        print("   " + " ".join(layer))
    rep.finish(args)
    return 0


def cmd_decompose(args):
    ctx = _ctx(args)
    rep = Report("decompose", ctx, args)
    module = ctx.module(args.module)
    dec = indec_decompose(module, Prng(ctx.seed))
    entries = []
    for s in dec.summands:
        e = _module_descriptor(ctx, s.rep)
        e.update({"multiplicity": s.multiplicity,
                  "end_dim": s.certificate.end_dim,
                  "rad_end_dim": s.certificate.rad_dim})
        entries.append(e)
    rep.doc["inputs"]["module"] = args.module
    rep.doc["results"]["summands"] = entries
    print(f"decompose({args.module}): dim {module.dim}")
    for e in entries:
        lab = e.get("iso_label") or f"dim{e['dim']}"
        print(f"  {lab}: dim {e['dim']} x{e['multiplicity']} (local End: "
              f"{e['end_dim']}/{e['rad_end_dim']})")
    rep.finish(args)
    return 0


def cmd_hom(args):
    ctx = _ctx(args)
    rep = Report("hom", ctx, args)
    a = ctx.module(args.source)
    b = ctx.module(args.target)
    hb = hom_space(a, b)
    rep.doc["inputs"] = {"source": args.source, "target": args.target}
    rep.doc["results"]["dim"] = hb.dim
    print(f"dim Hom({args.source}, {args.target}) = {hb.dim}")
    rep.finish(args)
    return 0


def cmd_end(args):
    ctx = _ctx(args)
    rep = Report("end", ctx, args)
    module = ctx.module(args.module)
    alg = end_algebra(module)
    rad = algebra_radical(alg)
    rep.doc["inputs"]["module"] = args.module
    rep.doc["results"].update({"end_dim": alg.dim, "radical_dim": len(rad),
                               "local": alg.dim - len(rad) == 1})
    print(f"End({args.module}): dim {alg.dim}, radical dim {len(rad)}"
          + (" (local)" if alg.dim - len(rad) == 1 else ""))
    rep.finish(args)
    return 0


def _functor_cmd(args, name):
    ctx = _ctx(args)
    rep = Report(name, ctx, args)
    if name == "tensor":
        out = tensor(ctx.module(args.source), ctx.module(args.target))
        rep.doc["inputs"] = {"source": args.source, "target": args.target}
    elif name == "dual":
        out = dual(ctx.module(args.module))
        rep.doc["inputs"] = {"module": args.module}
    elif name == "restrict":
        out = restrict(ctx.module(args.module), ctx.subgroup(args.subgroup))
        rep.doc["inputs"] = {"module": args.module, "subgroup": args.subgroup}
    else:  # induce
        sub = ctx.subgroup(args.subgroup)
        out = induce(trivial_rep(sub.group, ctx.field), ctx.group, sub)
        rep.doc["inputs"] = {"subgroup": args.subgroup}
    rep.doc["results"]["dim"] = out.dim
    if args.write_prefix:
        paths = []
        for i, m in enumerate(out.gen_mats):
            path = f"{args.write_prefix}.g{i + 1}.mx"
            write_matrix_file(path, m, fmt="A")
            paths.append(path)
        rep.doc["results"]["files"] = paths
    print(f"{name}: result dim {out.dim}")
    rep.finish(args)
    return 0


def cmd_vertex(args):
    ctx = _ctx(args)
    rep = Report("vertex", ctx, args)
    module = ctx.module(args.module)
    sylow = ctx.subgroup(args.sylow)
    vr = vertex(module, sylow, g=ctx.group)
    rep.doc["inputs"] = {"module": args.module, "sylow": args.sylow}
    rep.doc["results"]["verdicts"] = [
        {"order": v.order, "projective": v.projective} for v in vr.verdicts]
    rep.doc["results"]["vertex_order"] = vr.vertex_order
    print(f"vertex({args.module}) relative to subgroups of {args.sylow}:")
    for v in vr.verdicts:
        print(f"  order {v.order}: {'projective' if v.projective else 'not projective'}")
    print(f"vertex order: {vr.vertex_order}")
    rep.finish(args)
    return 0


def cmd_green(args):
    ctx = _ctx(args)
    rep = Report("green", ctx, args)
    module = ctx.module(args.module)
    p_sub = ctx.subgroup(args.vertex_subgroup)
    n_sub = ctx.subgroup(args.normalizer_subgroup)
    gr = green_correspondent(module, p_sub, n_sub, g=ctx.group, prng=Prng(ctx.seed))
    corr = gr.correspondent
    lab = label_hprime_module(corr, ctx.field) if corr.dim <= 2 else None
    layers = None
    if lab is None:
        simples = _simples_for(ctx)
        layers = _layers_json(radical_series_layers(corr, simples))
    rep.doc["inputs"] = {"module": args.module, "vertex_subgroup": args.vertex_subgroup,
                         "normalizer_subgroup": args.normalizer_subgroup}
    rep.doc["results"]["correspondent"] = {
        "dim": corr.dim, "iso_label": lab, "radical_layers": layers}
    rep.doc["results"]["summands"] = [
        {"dim": s.rep.dim, "multiplicity": s.multiplicity, "vertex_order": s.vertex_order}
        for s in gr.summands]
    shown = lab or (f"layers {layers}" if layers else f"dim {corr.dim}")
    print(f"green correspondent of {args.module}: {shown}")
    rep.finish(args)
    return 0


def cmd_trivsrc(args):
    ctx = _ctx(args)
    rep = Report("trivsrc", ctx, args)
    module = ctx.module(args.module)
    q = ctx.subgroup(args.vertex_subgroup)
    verdict = trivial_source_test(module, q, g=ctx.group)
    rep.doc["inputs"] = {"module": args.module, "vertex_subgroup": args.vertex_subgroup}
    rep.doc["results"]["trivial_source"] = verdict
    print(f"{args.module} is{'' if verdict else ' not'} a trivial source module")
    rep.finish(args)
    return 0


def cmd_blocks(args):
    ctx = _ctx(args)
    rep = Report("blocks", ctx, args)
    bd = central_idempotents(ctx.group, ctx.field)
    rep.doc["results"]["n_blocks"] = bd.nblocks
    rep.doc["results"]["principal_index"] = bd.principal_index
    rep.doc["results"]["idempotents"] = [
        [int(x) for x in e] for e in bd.idempotents]
    rep.doc["results"]["class_sizes"] = list(bd.class_sizes)
    print(f"blocks: {bd.nblocks} (principal: index {bd.principal_index})")
    rep.finish(args)
    return 0


def cmd_cartan(args):
    ctx = _ctx(args)
    rep = Report("cartan", ctx, args)
    simples = _simples_for(ctx)
    bd = central_idempotents(ctx.group, ctx.field)
    reg = regular_module(ctx.group, ctx.field)
    pim_list = pims(bd, bd.principal_index, reg, simples, Prng(ctx.seed),
                    source_is_projective=True)
    C = cartan_matrix(pim_list, simples)
    rep.doc["results"]["order"] = [s.label for s in simples]
    rep.doc["results"]["cartan"] = C
    print("Cartan matrix (rows and columns ordered " +
          ", ".join(s.label for s in simples) + "):")
    for row in C:
        print("  " + " ".join(f"{x:2d}" for x in row))
    rep.finish(args)
    return 0


def cmd_selftest(args):
    from .acceptance import run_all
    results = run_all(include_stretch=True, verbose=True)
    ok = all(r.passed or r.skipped for r in results)
    return 0 if ok else 1


def main(argv=None):
    parser = argparse.ArgumentParser(
        prog="modrep",
        description="modular representation theory engine over small finite fields")
    parser.add_argument("--version", action="version", version=f"modrep {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, manifest=True):
        if manifest:
            p.add_argument("--manifest", required=True,
                           help="manifest path or builtin:NAME")
        p.add_argument("--seed", type=int, default=None, help="PRNG seed (default 0)")
        p.add_argument("--field", default=None, help="override field, e.g. 3^2")
        p.add_argument("--cap", type=int, default=None, help="override caps")
        p.add_argument("--out", default=None, help="write the JSON report here")
        p.add_argument("--json", action="store_true", help="print the JSON report")
        p.add_argument("--timings", action="store_true",
                       help="embed timings (report is then not byte-stable)")
        p.add_argument("--verbose", action="store_true")

    p = sub.add_parser("order", help="orders of the group and subgroups")
    common(p)
    p.set_defaults(func=cmd_order)

    p = sub.add_parser("chop", help="composition factors")
    common(p)
    p.add_argument("--module", required=True)
    p.set_defaults(func=cmd_chop)

    p = sub.add_parser("spin", help="submodule generated by a seed vector")
    common(p)
    p.add_argument("--module", required=True)
    p.add_argument("--vector", default="ones", help="'ones' or comma-separated entries")
    p.set_defaults(func=cmd_spin)

    p = sub.add_parser("socle", help="socle series layers")
    common(p)
    p.add_argument("--module", required=True)
    p.set_defaults(func=lambda a: cmd_socle(a, radical=False))

    p = sub.add_parser("radical", help="radical series layers")
    common(p)
    p.add_argument("--module", required=True)
    p.set_defaults(func=lambda a: cmd_socle(a, radical=True))

    p = sub.add_parser("decompose", help="indecomposable direct sum decomposition")
    common(p)
    p.add_argument("--module", required=True)
    p.set_defaults(func=cmd_decompose)

    p = sub.add_parser("hom", help="dimension of the homomorphism space")
    common(p)
    p.add_argument("--source", required=True)
    p.add_argument("--target", required=True)
    p.set_defaults(func=cmd_hom)

    p = sub.add_parser("end", help="endomorphism ring and its radical")
    common(p)
    p.add_argument("--module", required=True)
    p.set_defaults(func=cmd_end)

    for name in ("tensor", "dual", "restrict", "induce"):
        p = sub.add_parser(name, help=f"{name} construction")
        common(p)
        if name == "tensor":
            p.add_argument("--source", required=True)
            p.add_argument("--target", required=True)
        elif name == "dual":
            p.add_argument("--module", required=True)
        elif name == "restrict":
            p.add_argument("--module", required=True)
            p.add_argument("--subgroup", required=True)
        else:
            p.add_argument("--subgroup", required=True)
        p.add_argument("--write-prefix", default=None,
                       help="write generator matrices to PREFIX.gN.mx")
        p.set_defaults(func=lambda a, _n=name: _functor_cmd(a, _n))

    p = sub.add_parser("vertex", help="vertex via Higman's criterion")
    common(p)
    p.add_argument("--module", required=True)
    p.add_argument("--sylow", required=True, help="subgroup name of a Sylow p-subgroup")
    p.set_defaults(func=cmd_vertex)

    p = sub.add_parser("green", help="Green correspondent")
    common(p)
    p.add_argument("--module", required=True)
    p.add_argument("--vertex-subgroup", required=True)
    p.add_argument("--normalizer-subgroup", required=True)
    p.set_defaults(func=cmd_green)

    p = sub.add_parser("trivsrc", help="trivial source test")
    common(p)
    p.add_argument("--module", required=True)
    p.add_argument("--vertex-subgroup", required=True)
    p.set_defaults(func=cmd_trivsrc)

    p = sub.add_parser("blocks", help="central primitive idempotents")
    common(p)
    p.set_defaults(func=cmd_blocks)

    p = sub.add_parser("cartan", help="Cartan matrix of the principal block")
    common(p)
    p.set_defaults(func=cmd_cartan)

    p = sub.add_parser("selftest", help="run the acceptance suite on shipped fixtures")
    common(p, manifest=False)
    p.set_defaults(func=cmd_selftest)

    args = parser.parse_args(argv)
    if args.cap is not None:
        from .config import CONFIG
        CONFIG.enumeration_cap = args.cap
        CONFIG.transversal_cap = args.cap
        CONFIG.normalizer_cap = args.cap
    try:
        return args.func(args)
    except (InputError, DataError) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return 2
    except (CapExceeded, ComputationFailure, SplittingFieldError) as exc:
        print(f"computational failure: {exc}", file=sys.stderr)
        return 1
    except ModrepError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
