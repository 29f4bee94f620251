"""Command-line interface.

Exit status is 0 on success, 2 on invalid input and 3 on numerical failure.
"""

import argparse
import sys

import numpy as np

from . import __version__
from .catalog import find_entry, match_signature
from .clips import clips_pair, enumerate_structures
from .covariants import EPS_SYM, geometric_structure
from .documents import (
    TensorDocument,
    dump_report,
    parse_tensor,
    report_to_csv,
    tensor_payload,
    to_csv,
    to_jsonable,
)
from .errors import ExotelaError, NumericalError, ValidationError
from .exotic import classify_material, sample_random, young_surface
from .harmonic import decompose
from .labels import parse_label
from .normal_forms import normal_form
from .projection import nearest_in_structure
from .tensor import invert, is_positive_definite, spectrum

EXIT_OK, EXIT_INVALID, EXIT_NUMERICAL = 0, 2, 3

_OTHER_ROLE = {"stiffness": "compliance", "compliance": "stiffness"}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise ValidationError(message)


def _read(path):
    if path == "-":
        return sys.stdin.read()
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise ValidationError(f"cannot read {path}: {exc.strerror}") from exc


def _load(path):
    return parse_tensor(_read(path))


def _as_role(doc, role):
    """The tensor of ``doc`` expressed in ``role``."""
    return doc.tensor if doc.role == role else invert(doc.tensor)


def _stiffness(doc):
    return _as_role(doc, "stiffness")


def _parse_grid(text):
    try:
        t, p = (int(x) for x in text.split(","))
    except ValueError as exc:
        raise ValidationError(f"grid must be two integers 'T,P', got {text!r}") from exc
    return t, p


# Each command returns (report, csv_header, csv_rows); rows may be None.

def cmd_decompose(args):
    doc = _load(args.file)
    t = decompose(doc.tensor, args.scheme)
    return {"role": doc.role, "decomposition": t}, None, None


def cmd_classify(args):
    doc = _load(args.file)
    r = classify_material(_stiffness(doc), args.tol)
    report = {"label": r.label, "material": r.material, "class": r.overall,
              "analysis": r.analysis, "note": r.note,
              "matches": {k: (v.label if v else None) for k, v in r.matches.items()},
              "structures": r.structures, "residuals": r.residuals,
              "vanishing": r.vanishing, "ambiguous": r.ambiguous,
              "eigenvalues": r.eigenvalues, "positive_definite": r.positive_definite}
    return report, None, None


def cmd_structure(args):
    doc = _load(args.file)
    st = geometric_structure(doc.tensor, args.scheme, args.tol)
    entry = match_signature(st.signature)
    report = {"role": doc.role, "scheme": st.triplet.scheme, "structure": st,
              "match": entry.label if entry else None}
    names = ("h_a", "h_b", "H", "ab", "aH", "bH", "overall")
    return report, ("entry", "class"), list(zip(names, (str(x) for x in st.labels)))


def cmd_clips(args):
    a, b = parse_label(args.a), parse_label(args.b)
    result = clips_pair(a, b)
    report = {"a": a, "b": b, "clips": str(result), "classes": list(result)}
    return report, ("class",), [(str(x),) for x in result]


def cmd_enumerate(args):
    g = parse_label(args.cls)
    rows = []
    for k, sig in enumerate(enumerate_structures(g)):
        entry = find_entry(f"{g}^g" if k == 0 else f"{g}^e_{k}")
        rows.append({"label": entry.label, "material": entry.material,
                     "signature": [str(x) for x in sig.as_tuple()]})
    header = ("label", "h_a", "h_b", "H", "ab", "aH", "bH", "overall")
    return ({"class": g, "structures": rows}, header,
            [(r["label"], *r["signature"]) for r in rows])


def cmd_normal_form(args):
    tensor = normal_form(args.kind, *args.params)
    role = "compliance" if args.kind.upper() == "IYTI" else "stiffness"
    doc = TensorDocument(tensor, role, f"{args.kind} normal form")
    return tensor_payload(doc), None, None


def cmd_project(args):
    doc = _load(args.file)
    entry = find_entry(args.target)
    role = entry.role or "stiffness"
    result = nearest_in_structure(_as_role(doc, role), entry, args.scheme,
                                  starts=args.starts, seed=args.seed)
    nearest = result.tensor if role == doc.role else invert(result.tensor)
    report = {"target": entry.label, "material": entry.material, "scheme": result.scheme,
              "projected_role": role, "distance": result.distance,
              "relative_distance": result.relative_distance,
              "rotation": result.rotation, "quaternion": result.quaternion,
              "positive_definite": result.positive_definite,
              "converged": result.converged,
              "tensor": tensor_payload(TensorDocument(nearest, doc.role,
                                                      f"nearest {entry.label}"))}
    return report, None, None


def cmd_young(args):
    n_theta, n_phi = _parse_grid(args.grid)
    doc = _load(args.file)
    surf = young_surface(_as_role(doc, "compliance"), n_theta, n_phi)
    report = {"theta": surf.theta, "phi": surf.phi, "E": surf.E}
    return report, ("theta", "phi", "E"), list(surf.rows())


def cmd_invert(args):
    doc = _load(args.file)
    out = TensorDocument(invert(doc.tensor), _OTHER_ROLE[doc.role],
                         f"inverse of {doc.description}" if doc.description else "")
    return tensor_payload(out), None, None


def cmd_eig(args):
    doc = _load(args.file)
    w = spectrum(doc.tensor)
    report = {"role": doc.role, "eigenvalues": w,
              "positive_definite": is_positive_definite(doc.tensor)}
    return report, ("index", "eigenvalue"), [(i + 1, float(x)) for i, x in enumerate(w)]


def cmd_sample(args):
    entry = find_entry(args.label)
    c = sample_random(entry, args.seed)
    return tensor_payload(TensorDocument(c, "stiffness", f"random {entry.label}")), None, None


def _add_global_flags(p, tol, seed, out, fmt):
    p.add_argument("--tol", type=float, default=tol,
                   help="relative tolerance of symmetry tests (default 1e-7)")
    p.add_argument("--seed", type=int, default=seed, help="seed of random choices")
    p.add_argument("--out", default=out, help="write the result to this file, not stdout")
    p.add_argument("--format", choices=("json", "csv"), default=fmt)


def build_parser():
    p = _Parser(prog="exotela",
                description="Harmonic analysis and exotic structures of elasticity tensors.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    _add_global_flags(p, EPS_SYM, 0, None, "json")
    # the global flags are also accepted after the subcommand
    common = argparse.ArgumentParser(add_help=False)
    _add_global_flags(common, *(4 * [argparse.SUPPRESS]))
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)
    add = lambda name, **kw: sub.add_parser(name, parents=[common], **kw)  # noqa: E731

    def tensor_cmd(name, fn, help_text):
        s = add(name, help=help_text)
        s.add_argument("file", help="tensor document ('-' for stdin)")
        s.set_defaults(func=fn)
        return s

    s = tensor_cmd("decompose", cmd_decompose, "harmonic decomposition")
    s.add_argument("--scheme", type=str.upper, choices=("CGHD", "SWHD"), default="CGHD")
    tensor_cmd("classify", cmd_classify, "catalog entry and named material")
    s = tensor_cmd("structure", cmd_structure, "geometric structure")
    s.add_argument("--scheme", type=str.upper, choices=("CGHD", "SWHD"), default="CGHD")

    s = add("clips", help="clips product of two classes")
    s.add_argument("a")
    s.add_argument("b")
    s.set_defaults(func=cmd_clips)

    s = add("enumerate", help="geometric structures of a class")
    s.add_argument("cls", metavar="CLASS")
    s.set_defaults(func=cmd_enumerate)

    s = add("normal-form", help="normal form tensor")
    s.add_argument("kind", help="TI, UTI, IDTI, IYTI, cubic or isotropic")
    s.add_argument("params", nargs="+", type=float)
    s.set_defaults(func=cmd_normal_form)

    s = tensor_cmd("project", cmd_project, "nearest tensor with a given structure")
    s.add_argument("--target", required=True, help="catalog label or material name")
    s.add_argument("--scheme", type=str.upper, choices=("CGHD", "SWHD"), default=None)
    s.add_argument("--starts", type=int, default=16)

    s = tensor_cmd("young", cmd_young, "directional Young's modulus on a grid")
    s.add_argument("--grid", default="19,36", help="'T,P' polar and azimuthal counts")

    tensor_cmd("invert", cmd_invert, "inverse tensor (stiffness <-> compliance)")
    tensor_cmd("eig", cmd_eig, "Kelvin eigenvalues")

    s = add("sample", help="random stiffness tensor with a given structure")
    s.add_argument("label")
    s.set_defaults(func=cmd_sample)
    return p


def _render(report, header, rows, fmt):
    if fmt == "json":
        return dump_report(report) + "\n"
    if header is not None:
        return to_csv(header, rows)
    return report_to_csv(report)


def main(argv=None):
    """Run the command line; returns the exit status."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if not np.isfinite(args.tol) or args.tol <= 0:
            raise ValidationError("--tol must be a positive number")
        report, header, rows = args.func(args)
        text = _render(to_jsonable(report), header, rows, args.format)
        if args.out:
            with open(args.out, "w", encoding="utf-8", newline="") as fh:
                fh.write(text)
        else:
            sys.stdout.write(text)
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except NumericalError as exc:
        print(f"numerical error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except ExotelaError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
