"""exanlab command line: JSON documents in, deterministic JSON reports out.

Exit codes: 0 success or true verdict, 1 well-formed negative verdict,
2 input error, 3 size guard.
"""

from __future__ import annotations

import argparse
import sys
from typing import Callable

import numpy as np

from . import serialize as ser
from .algebra import (
    AlgebraError,
    InvalidStructureError,
    bimodule_violations,
    center,
    derivations,
    module_violations,
    validate_algebra,
)
from .exactla import ExactLAError, SizeGuardError
from .extensions import (
    ExtensionError,
    NotACocycleError,
    build_extension,
    canonical_section,
    caction,
    choose_section,
    equiv,
    exan_basis,
    extract_cocycle,
    is_cocycle,
    quotient_extension,
    rebuild_isomorphism,
    validate_extension,
)
from .hochschild import DegreeError, cohomology
from .jets import connection_exists, jet_action, kaehler, product_formula_failures
from .kodaira import bracket_closure, ks_map, twist_module_check


class InputError(ValueError):
    pass


# ---------------------------------------------------------------------------
# loading helpers


class Context:
    def __init__(self, paths):
        self.doc = ser.read_documents(paths)
        self.field = self.doc.field
        self._algebra = None
        self._bimodule = None

    def section(self, name):
        value = getattr(self.doc, name)
        if value is None:
            raise InputError(f"missing section {name!r}")
        return value

    @property
    def algebra(self):
        if self._algebra is None:
            self._algebra = ser.load_algebra(self.field, self.section("algebra"))
            report = validate_algebra(self._algebra)
            if not report.ok:
                raise InputError(f"algebra is invalid: {report.violations[0]}")
        return self._algebra

    @property
    def bimodule(self):
        if self._bimodule is None:
            doc = self.doc.bimodule if self.doc.bimodule is not None else "regular"
            self._bimodule = ser.load_bimodule(self.algebra, doc)
        return self._bimodule

    def module(self):
        return ser.load_module(self.algebra, self.section("module"))

    def cochains(self, count: int | None = None, degree: int | None = None):
        docs = self.doc.cochains
        if count is not None and len(docs) != count:
            raise InputError(f"expected {count} cochain section(s), got {len(docs)}")
        out = [ser.load_cochain(self.algebra, self.bimodule, d) for d in docs]
        if degree is not None and any(c.degree != degree for c in out):
            raise InputError(f"expected cochains of degree {degree}")
        return out

    def base(self, command: str) -> dict:
        return {"command": command, "field": self.field.descriptor()}


def _vectors(F, basis) -> list:
    """Columns of a basis matrix as lists of scalar strings."""
    return [ser.format_array(F, basis[:, j]) for j in range(basis.shape[1])]


def _cochains(F, basis, rows) -> list:
    return [ser.format_array(F, basis[:, j].reshape(rows, -1)) for j in range(basis.shape[1])]


def _violations(vs) -> list:
    return [v.as_dict() for v in vs]


def _parse_element(F, text: str, n: int):
    parts = [p for p in text.split(",")]
    if len(parts) != n:
        raise InputError(f"--element needs {n} comma-separated scalars")
    try:
        return F.array([F.parse(p) for p in parts])
    except ValueError as exc:
        raise InputError(str(exc)) from None


# ---------------------------------------------------------------------------
# subcommands


def cmd_validate(args) -> tuple[dict, int]:
    ctx = Context(args.files)
    out = ctx.base("validate")
    F = ctx.field
    if ctx.doc.extension is not None:
        try:
            ext = ser.load_extension(F, ctx.doc.extension)
        except ExtensionError as exc:
            out.update(verdict=False, violations=[{"kind": "extension", "index": [], "detail": str(exc)}])
            return out, 1
        report = validate_extension(ext)
        out["dims"] = {"algebra": ext.dim, "ideal": ext.ideal_dim, "base": ext.base.dim}
        out.update(verdict=report.ok, violations=_violations(report.violations))
        return out, 0 if report.ok else 1
    a = ser.load_algebra(F, ctx.section("algebra"))
    vs = list(validate_algebra(a).violations)
    if vs:
        out.update(verdict=False, violations=_violations(vs))
        return out, 1
    if ctx.doc.bimodule is not None:
        vs += bimodule_violations(a, *ser.load_bimodule_raw(a, ctx.doc.bimodule))
    if ctx.doc.module is not None:
        vs += module_violations(a, ser.load_module_raw(a, ctx.doc.module))
    out["dims"] = {"algebra": a.dim}
    out.update(verdict=not vs, violations=_violations(vs))
    return out, 0 if not vs else 1


def cmd_center(args) -> tuple[dict, int]:
    ctx = Context(args.files)
    Z = center(ctx.algebra)
    out = ctx.base("center")
    out.update(dims={"center": Z.shape[1]}, basis=_vectors(ctx.field, Z))
    return out, 0


def cmd_derivations(args) -> tuple[dict, int]:
    ctx = Context(args.files)
    D = derivations(ctx.algebra, ctx.bimodule)
    out = ctx.base("derivations")
    out.update(dims={"Der": len(D)}, basis=[ser.format_array(ctx.field, d) for d in D])
    return out, 0


def cmd_hh(args) -> tuple[dict, int]:
    ctx = Context(args.files)
    h = cohomology(ctx.algebra, ctx.bimodule, args.degree)
    out = ctx.base("hh")
    out.update(
        degree=args.degree,
        dim_HH=h.dim,
        dims={"HH": h.dim, "cocycles": h.cocycles.shape[1], "coboundaries": h.coboundaries.shape[1]},
        basis=_cochains(ctx.field, h.representatives, ctx.bimodule.dim),
    )
    return out, 0


def cmd_exan(args) -> tuple[dict, int]:
    ctx = Context(args.files)
    e = exan_basis(ctx.algebra, ctx.bimodule)
    F, m = ctx.field, ctx.bimodule.dim
    out = ctx.base("exan")
    out.update(
        dims={"exan": e.dim_exan, "inner": e.dim_inner, "HH2": e.dim_hh2},
        basis={
            "exan": _cochains(F, e.cocycles, m),
            "inner": _cochains(F, e.inner, m),
            "representatives": _cochains(F, e.representatives, m),
        },
    )
    return out, 0


def cmd_extend(args) -> tuple[dict, int]:
    files = list(args.files) + ([args.cocycle] if args.cocycle else [])
    ctx = Context(files)
    (c,) = ctx.cochains(1, degree=2)
    out = ctx.base("extend")
    try:
        ext = build_extension(ctx.algebra, ctx.bimodule, c)
    except NotACocycleError as exc:
        out.update(verdict=False, witness={"triple": list(exc.triple), "defect": ser.format_array(ctx.field, exc.defect)})
        return out, 1
    doc = {"field": ctx.field.descriptor(), "extension": ser.dump_extension(ext)}
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(ser.dumps(doc))
        out["output"] = args.output
    else:
        out["extension"] = doc["extension"]
    out.update(verdict=True, dims={"algebra": ext.dim, "ideal": ext.ideal_dim, "base": ext.base.dim})
    return out, 0


def cmd_section_extract(args) -> tuple[dict, int]:
    ctx = Context(args.files)
    F = ctx.field
    ext = ser.load_extension(F, ctx.section("extension"))
    s = canonical_section(ext) if args.section == "canonical" else choose_section(ext)
    c, bim = extract_cocycle(ext, s)
    phi = rebuild_isomorphism(ext, s)
    out = ctx.base("section-extract")
    out.update(
        verdict=bool(is_cocycle(c)),
        section=ser.format_array(F, s.matrix),
        cochain=ser.dump_cochain(c),
        bimodule=ser.dump_bimodule(bim),
        witness={"isomorphism": ser.format_array(F, phi.matrix)},
    )
    if ext.cocycle is not None:
        out["matches_provenance"] = bool(
            ext.cocycle.matrix.shape == c.matrix.shape and not np.any(ext.cocycle.matrix != c.matrix)
        )
    return out, 0


def cmd_equiv(args) -> tuple[dict, int]:
    ctx = Context(args.files)
    c1, c2 = ctx.cochains(2)
    r = equiv(c1, c2, args.mode)
    out = ctx.base("equiv")
    out.update(mode=args.mode, verdict=r.verdict)
    if r.witness is not None:
        out["witness"] = ser.dump_cochain(r.witness)
    return out, 0 if r.verdict else 1


def cmd_caction(args) -> tuple[dict, int]:
    ctx = Context(args.files)
    (c,) = ctx.cochains(1, degree=2)
    z = _parse_element(ctx.field, args.element, ctx.algebra.dim)
    if not is_cocycle(c):
        raise InputError("caction requires a cocycle")
    try:
        res = caction(z, c, args.side)
    except ExtensionError as exc:
        raise InputError(str(exc)) from None
    out = ctx.base("caction")
    out.update(side=args.side, verdict=bool(is_cocycle(res)), cochain=ser.dump_cochain(res))
    return out, 0


def cmd_quotient(args) -> tuple[dict, int]:
    ctx = Context(args.files)
    if ctx.doc.extension is not None:
        ext = ser.load_extension(ctx.field, ctx.doc.extension)
    else:
        (c,) = ctx.cochains(1, degree=2)
        ext = build_extension(ctx.algebra, ctx.bimodule, c)
    q = quotient_extension(ext)
    F = ctx.field
    out = ctx.base("quotient")
    out.update(
        verdict=True,
        dims={"I": ext.ideal_dim, "J": q.dim_j, "I_C": q.extension.ideal_dim, "D_C": q.extension.dim},
        basis={"J": _vectors(F, q.ideal)},
        extension=ser.dump_extension(q.extension),
    )
    return out, 0


def cmd_jet(args) -> tuple[dict, int]:
    ctx = Context(args.files)
    a, i = ctx.algebra, ctx.bimodule
    (c,) = ctx.cochains(1, degree=2)
    d = ser.load_derivation(a, i, ctx.doc.derivation) if ctx.doc.derivation is not None else None
    try:
        j = jet_action(a, i, ctx.module(), c, d)
    except ExtensionError as exc:
        raise InputError(str(exc)) from None
    out = ctx.base("jet")
    out.update(
        verdict=j.is_module,
        module_ok=j.is_module,
        associative=j.associative,
        unital=j.unital,
        criterion_ok=j.criterion,
        dims={"tensor": j.tensor.dim, "jet": j.dim},
        derivation=ser.format_array(ctx.field, j.derivation),
    )
    if j.first_failure is not None:
        out["witness"] = {"pair": list(j.first_failure)}
    return out, 0 if j.is_module else 1


def cmd_kahler(args) -> tuple[dict, int]:
    ctx = Context(args.files)
    k = kaehler(ctx.algebra)
    F = ctx.field
    out = ctx.base("kahler")
    out.update(
        verdict=True,
        dims={"Omega1": k.dim_omega, "Pr1": k.jets.dim, "I_Delta": k.diagonal.shape[1]},
        d=ser.format_array(F, k.d),
        splitting=ser.format_array(F, k.splitting),
        literal_formula_failures=len(product_formula_failures(k, literal=True)),
    )
    return out, 0


def cmd_connection(args) -> tuple[dict, int]:
    ctx = Context(args.files)
    a = ctx.algebra
    e = ctx.module()
    F = ctx.field
    if ctx.doc.bimodule is not None and ctx.doc.derivation is not None:
        f = ctx.bimodule
        d = ser.load_derivation(a, f, ctx.doc.derivation)
        target = "bimodule"
    else:
        k = kaehler(a)
        f, d = k.omega_bimodule, k.d
        target = "kahler"
    try:
        r = connection_exists(a, e, f, d)
    except ExtensionError as exc:
        raise InputError(str(exc)) from None
    out = ctx.base("connection")
    out.update(target=target, verdict=r.exists, dims={"F": f.dim, "tensor": r.tensor.dim, "E": e.dim})
    if r.exists:
        out["connection"] = ser.format_array(F, r.matrix)
    return out, 0 if r.exists else 1


def cmd_ks(args) -> tuple[dict, int]:
    ctx = Context(args.files)
    a, m = ctx.algebra, ctx.module()
    r = ks_map(a, m)
    out = ctx.base("ks")
    out.update(r.as_dict())
    out["g"] = ser.format_array(ctx.field, r.g)
    if a.is_commutative():
        b = bracket_closure(a, m, r)
        t = twist_module_check(a, m, r)
        out.update(bracket_closed=bool(b), splitting_exists=t.splitting_exists)
        verdict = bool(b) and t.splitting_exists
    else:
        out.update(bracket_closed=None, splitting_exists=None)
        verdict = True
    out["verdict"] = verdict
    out["witness"] = {"connections": [ser.format_array(ctx.field, w) for w in r.witnesses]}
    return out, 0 if verdict else 1


def cmd_twist_check(args) -> tuple[dict, int]:
    ctx = Context(args.files)
    a, m = ctx.algebra, ctx.module()
    if not a.is_commutative():
        raise InputError("twist-check requires a commutative algebra")
    r = ks_map(a, m)
    t = twist_module_check(a, m, r)
    out = ctx.base("twist-check")
    out.update(
        verdict=bool(t),
        a_linear=t.a_linear,
        cocycle_law=t.cocycle_law,
        twisted_module=t.twisted_module,
        splitting_exists=t.splitting_exists,
        a_linear_splitting_exists=t.a_linear_splitting_exists,
        dims={"VM": r.dim_vm},
    )
    if t.a_linear_splitting is not None:
        out["witness"] = {"connection": [ser.format_array(ctx.field, w) for w in t.a_linear_splitting]}
    return out, 0 if t else 1


# ---------------------------------------------------------------------------


COMMANDS: dict[str, tuple[Callable, str]] = {
    "validate": (cmd_validate, "check algebra, bimodule, module or extension axioms"),
    "center": (cmd_center, "basis of the center"),
    "derivations": (cmd_derivations, "basis of Der_k(A, I) (I defaults to A)"),
    "hh": (cmd_hh, "Hochschild cohomology HH^p(A, I)"),
    "exan": (cmd_exan, "cocycles, inner cocycles and HH^2"),
    "extend": (cmd_extend, "build the extension algebra of a cocycle"),
    "section-extract": (cmd_section_extract, "cocycle and bimodule from a section of an extension"),
    "equiv": (cmd_equiv, "compare two 2-cochains"),
    "caction": (cmd_caction, "act on a cocycle by a central element"),
    "quotient": (cmd_quotient, "quotient extension by the ideal generated by Im(C)"),
    "jet": (cmd_jet, "first-order jet module and its module criterion"),
    "kahler": (cmd_kahler, "Kaehler differentials and first-order jets"),
    "connection": (cmd_connection, "decide whether a module has a connection"),
    "ks": (cmd_ks, "Kodaira-Spencer map and its kernel"),
    "twist-check": (cmd_twist_check, "twisted linear Lie-Rinehart module checks"),
}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise InputError(message)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="exanlab", description="Square-zero extensions and Hochschild cohomology, exactly.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for name, (_, help_text) in COMMANDS.items():
        sp = sub.add_parser(name, help=help_text)
        sp.add_argument("files", nargs="+", help="JSON input documents (merged)")
        if name == "hh":
            sp.add_argument("--degree", type=int, choices=(0, 1, 2), required=True)
        elif name == "extend":
            sp.add_argument("--cocycle", help="cocycle document (alternative to a positional file)")
            sp.add_argument("-o", "--output", help="write the extension document here")
        elif name == "section-extract":
            sp.add_argument("--section", choices=("canonical", "echelon"), default="canonical")
        elif name == "equiv":
            sp.add_argument("--mode", choices=("strict", "inner"), default="inner")
        elif name == "caction":
            sp.add_argument("--element", required=True, help="central element, comma-separated scalars")
            sp.add_argument("--side", choices=("left", "right"), default="left")
    return p


def run(argv) -> tuple[dict, int]:
    command = argv[0] if argv else None
    try:
        args = build_parser().parse_args(argv)
        return COMMANDS[args.command][0](args)
    except SizeGuardError as exc:
        return {"command": command, "error": {"kind": "size_guard", "message": str(exc)}}, 3
    except (InputError, ser.SchemaError, InvalidStructureError, ExtensionError, DegreeError) as exc:
        return {"command": command, "error": {"kind": "input", "message": str(exc)}}, 2
    except (AlgebraError, ExactLAError, ValueError, TypeError) as exc:
        return {"command": command, "error": {"kind": "input", "message": str(exc)}}, 2


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    if argv and argv[0] in ("-h", "--help"):
        build_parser().print_help()
        return 0
    report, code = run(argv)
    sys.stdout.write(ser.dumps(report))
    return code


if __name__ == "__main__":
    sys.exit(main())
