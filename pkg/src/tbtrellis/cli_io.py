"""Code and trellis file formats, DOT export and the ``tbtrellis`` command line."""

from __future__ import annotations

import argparse
import random
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np

from .field_linalg import LinalgError, Subspace
from .spans import Span, SpanError, parse_span
from .trellis_core import Trellis, TrellisError, elementary, product_all, realize_from_labelcode, to_raw

__all__ = [
    "ParseError",
    "CodeFile",
    "TrellisFile",
    "format_word",
    "parse_word",
    "format_factor",
    "read_code",
    "write_code",
    "read_trellis",
    "write_product",
    "write_labelcode",
    "dot_export",
    "main",
]

DEFAULT_MAX_VERTICES = 64


class ParseError(TrellisError):
    def __init__(self, msg: str, line: int | None = None, source: str = "<input>"):
        where = f"{source}:{line}: " if line is not None else f"{source}: "
        super().__init__(where + msg)
        self.line = line


# words ----------------------------------------------------------------------------

def format_word(w: Sequence[int], p: int = 2, comma: bool | None = None) -> str:
    if comma is None:
        comma = p > 10
    return ",".join(str(int(x)) for x in w) if comma else "".join(str(int(x)) for x in w)


def parse_word(text: str, p: int, comma: bool) -> list[int]:
    text = text.strip()
    if text in ("", "-"):
        return []
    parts = text.split(",") if comma else list(text)
    out = []
    for c in parts:
        if not c.strip().isdigit():
            raise ValueError(f"bad digit {c!r}")
        x = int(c)
        if x >= p:
            raise ValueError(f"digit {x} outside GF({p})")
        out.append(x)
    return out


def format_factor(w: Sequence[int], s: Span, p: int = 2) -> str:
    return f"{format_word(w, p)}|{s}"


# headers ----------------------------------------------------------------------------

def _lines(text: str):
    for no, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield no, line


@dataclass
class _Header:
    p: int = 2
    n: int | None = None
    comma: bool = False
    form: str | None = None
    vdims: list[int] | None = None


def _parse_headers(text: str, source: str, allow_form: bool):
    h = _Header()
    body = []
    for no, line in _lines(text):
        key, _, rest = line.partition(" ")
        rest = rest.strip()
        try:
            if key == "field":
                h.p = int(rest)
            elif key == "length":
                h.n = int(rest)
            elif key == "sep":
                if rest != "comma":
                    raise ValueError(f"unknown separator {rest!r}")
                h.comma = True
            elif key == "form" and allow_form:
                if rest not in ("product", "labelcode"):
                    raise ValueError(f"unknown form {rest!r}")
                h.form = rest
            elif key == "vdims" and allow_form:
                h.vdims = [int(x) for x in rest.split()]
            else:
                body.append((no, line))
        except ValueError as exc:
            raise ParseError(str(exc), no, source) from None
    if h.n is None:
        raise ParseError("missing 'length' header", None, source)
    from .field_linalg import is_prime

    if not is_prime(h.p):
        raise ParseError(f"field size {h.p} is not prime", None, source)
    if h.p > 10 and not h.comma:
        raise ParseError("fields above 10 need 'sep comma'", None, source)
    return h, body


# code files -----------------------------------------------------------------------------

@dataclass(frozen=True)
class CodeFile:
    p: int
    n: int
    rows: tuple[tuple[int, ...], ...]

    @property
    def code(self) -> Subspace:
        if not self.rows:
            return Subspace.zero(self.n, self.p)
        return Subspace.span(np.asarray(self.rows, np.int64), self.n, self.p)


def read_code(text: str, source: str = "<code>") -> CodeFile:
    h, body = _parse_headers(text, source, allow_form=False)
    rows = []
    for no, line in body:
        try:
            w = parse_word(line, h.p, h.comma)
        except ValueError as exc:
            raise ParseError(str(exc), no, source) from None
        if len(w) != h.n:
            raise ParseError(f"row has length {len(w)}, expected {h.n}", no, source)
        rows.append(tuple(w))
    return CodeFile(h.p, h.n, tuple(rows))


def write_code(C: Subspace) -> str:
    out = [f"field {C.p}", f"length {C.ambient}"]
    if C.p > 10:
        out.append("sep comma")
    out += [format_word(r, C.p) for r in C.basis]
    return "\n".join(out) + "\n"


# trellis files ----------------------------------------------------------------------------

@dataclass(frozen=True)
class TrellisFile:
    p: int
    n: int
    form: str
    factors: tuple[tuple[tuple[int, ...], Span], ...] = ()
    vdims: tuple[int, ...] = ()
    cycles: tuple[tuple[int, ...], ...] = ()

    @property
    def trellis(self) -> Trellis:
        if self.form == "product":
            return product_all((elementary(w, s, self.p) for w, s in self.factors), n=self.n, p=self.p)
        return realize_from_labelcode(self.cycles, self.vdims, self.p)


def _parse_factor(line: str, h: _Header):
    word, sep, span = line.partition("|")
    if not sep:
        raise ValueError("expected '<codeword>|(a,l)'")
    w = parse_word(word, h.p, h.comma)
    if len(w) != h.n:
        raise ValueError(f"codeword has length {len(w)}, expected {h.n}")
    try:
        s = parse_span(span, h.n)
    except SpanError as exc:
        raise ValueError(str(exc)) from None
    return tuple(w), s


def _parse_cycle(line: str, h: _Header) -> tuple[int, ...]:
    toks = line.split()
    n = h.n
    if len(toks) != 2 * n:
        raise ValueError(f"expected {2 * n} tokens 'v_0 a_0 ... v_{n-1} a_{n-1}', got {len(toks)}")
    out: list[int] = []
    for i in range(n):
        v = parse_word(toks[2 * i], h.p, h.comma)
        if len(v) != h.vdims[i]:
            raise ValueError(f"vertex {i} has {len(v)} digits, expected {h.vdims[i]}")
        a = parse_word(toks[2 * i + 1], h.p, h.comma)
        if len(a) != 1:
            raise ValueError(f"label {i} must be a single field element")
        out += v + a
    return tuple(out)


def read_trellis(text: str, source: str = "<trellis>") -> TrellisFile:
    h, body = _parse_headers(text, source, allow_form=True)
    if h.form is None:
        raise ParseError("missing 'form' header", None, source)
    if h.form == "product":
        factors = []
        zero_spans = set()
        for no, line in body:
            try:
                w, s = _parse_factor(line, h)
                elementary(w, s, h.p)
            except (ValueError, SpanError) as exc:
                raise ParseError(str(exc), no, source) from None
            if s.l == 0:
                if s.a in zero_spans:
                    raise ParseError(f"second factor with span ({s.a},0)", no, source)
                zero_spans.add(s.a)
            factors.append((w, s))
        return TrellisFile(h.p, h.n, "product", factors=tuple(factors))
    if h.vdims is None or len(h.vdims) != h.n:
        raise ParseError("labelcode form needs 'vdims' with one entry per index", None, source)
    cycles = []
    for no, line in body:
        try:
            cycles.append(_parse_cycle(line, h))
        except ValueError as exc:
            raise ParseError(str(exc), no, source) from None
    tf = TrellisFile(h.p, h.n, "labelcode", vdims=tuple(h.vdims), cycles=tuple(cycles))
    return tf


def _header(n: int, p: int, form: str) -> list[str]:
    out = [f"field {p}", f"length {n}"]
    if p > 10:
        out.append("sep comma")
    out.append(f"form {form}")
    return out


def write_product(factors: Sequence[tuple[Sequence[int], Span]], n: int, p: int = 2) -> str:
    out = _header(n, p, "product")
    rows = sorted(((tuple(w), s) for w, s in factors), key=lambda f: (f[1].l, f[1].a, f[0]))
    out += [format_factor(w, s, p) for w, s in rows]
    return "\n".join(out) + "\n"


def write_labelcode(T: Trellis) -> str:
    from .label_code import label_code

    lc = label_code(T)
    out = _header(T.n, T.p, "labelcode")
    out.append("vdims " + " ".join(map(str, T.vdims)))
    comma = T.p > 10
    for row in lc.space.basis:
        verts, labels = lc.split(row)
        toks = []
        for v, a in zip(verts, labels):
            toks += [format_word(v, T.p, comma) or "-", str(a)]
        out.append(" ".join(toks))
    return "\n".join(out) + "\n"


# DOT ----------------------------------------------------------------------------------------

def _node(i: int, v: Sequence[int], p: int) -> str:
    return f"t{i}_" + ("_".join(map(str, v)) if p > 10 else "".join(map(str, v)))


def dot_export(T: Trellis, max_vertices: int = DEFAULT_MAX_VERTICES) -> str:
    """Columns 0..n (column n repeats V_0); zero labels are dashed."""
    for i, r in enumerate(T.vdims):
        if T.p**r > max_vertices:
            raise TrellisError(f"|V_{i}| = {T.p ** r} exceeds the render cap; raise --max-vertices")
    R = to_raw(T, bound=max_vertices)
    n = T.n
    out = ["digraph trellis {", "  rankdir=LR;", "  node [shape=circle, label=\"\", width=0.15];"]
    for i in range(n + 1):
        names = [_node(i, v, T.p) for v in sorted(R.vertices[i % n])]
        out.append("  { rank=same; " + " ".join(f"{x};" for x in names) + " }")
    for (i, v, a, w) in sorted(R.edges):
        attrs = [f'label="{a}"']
        if a == 0:
            attrs.append("style=dashed")
        out.append(f"  {_node(i, v, T.p)} -> {_node(i + 1, w, T.p)} [{', '.join(attrs)}];")
    out.append("}")
    return "\n".join(out) + "\n"


# command line ------------------------------------------------------------------------------

EXIT_OK, EXIT_NO, EXIT_ERROR = 0, 1, 2


def _load_trellis(path: str) -> Trellis:
    return read_trellis(Path(path).read_text(), source=path).trellis


def _load_code(path: str) -> Subspace:
    return read_code(Path(path).read_text(), source=path).code


def _yn(b: bool) -> str:
    return "yes" if b else "no"


def _emit(out, key: str, *vals) -> None:
    out.write("\t".join([key, *map(str, vals)]) + "\n")


def cmd_spans(args, out) -> int:
    from .factorization import span_distribution, span_distribution_graphical

    T = _load_trellis(args.file)
    alg = span_distribution(T)
    gra = span_distribution_graphical(T)
    _emit(out, "algebraic", alg)
    _emit(out, "graphical", gra)
    _emit(out, "agree", _yn(alg == gra))
    if alg != gra:
        raise AssertionError("the two span distribution routes disagree")
    return EXIT_OK


def cmd_factor(args, out) -> int:
    from .analysis import is_reduced
    from .factorization import canonical_factorization, count_factorizations, enumerate_factorizations, isomorphic, multiply_out

    T = _load_trellis(args.file)
    if args.count:
        _emit(out, "count", count_factorizations(T))
        return EXIT_OK
    facs = enumerate_factorizations(T, cap=args.cap) if args.all else [canonical_factorization(T)]
    for k, f in enumerate(facs):
        _emit(out, "factorization", k)
        for line in f.lines():
            out.write(line + "\n")
        if args.strict:
            back = multiply_out(f.factors, T.n, T.p)
            if not (is_reduced(back) and isomorphic(T, back)):
                raise AssertionError(f"factorization {k} does not multiply back to the trellis")
    if args.all:
        _emit(out, "count", len(facs))
    return EXIT_OK


def cmd_iso(args, out) -> int:
    from .analysis import oracle_isomorphic
    from .factorization import isomorphic, structurally_isomorphic

    T1, T2 = _load_trellis(args.file1), _load_trellis(args.file2)
    if args.oracle:
        from .trellis_core import unlabel

        a, b = (unlabel(T1), unlabel(T2)) if args.structural else (T1, T2)
        ok, _ = oracle_isomorphic(to_raw(a), to_raw(b), structural=args.structural)
        _emit(out, "oracle", _yn(ok))
    elif args.structural:
        ok = structurally_isomorphic(T1, T2)
        _emit(out, "structurally_isomorphic", _yn(ok))
    else:
        res = isomorphic(T1, T2, strict=args.strict)
        ok = res.isomorphic
        _emit(out, "isomorphic", _yn(ok))
        if not ok:
            _emit(out, "witness", res.witness, res.reason)
    return EXIT_OK if ok else EXIT_NO


def cmd_props(args, out) -> int:
    from . import analysis as an
    from .factorization import HypothesisError, quasicyclic_period

    T = _load_trellis(args.file)
    _emit(out, "length", T.n)
    _emit(out, "vdims", " ".join(map(str, T.vdims)))
    _emit(out, "connected", _yn(an.is_connected(T)))
    reduced = an.is_reduced(T)
    _emit(out, "reduced", _yn(reduced))
    _emit(out, "almost_reduced", _yn(an.is_almost_reduced(T)))
    _emit(out, "one_to_one", _yn(an.is_one_to_one(T)))
    _emit(out, "biproper", _yn(an.is_biproper(T)))
    _emit(out, "fragment_one_to_one", _yn(an.is_fragment_one_to_one(T)))
    m = an.is_mergeable(T, want_witness=True)
    _emit(out, "mergeable", _yn(m.mergeable), m.method)
    if args.strict and m.method == "connected+fragment":
        if bool(an.merge_sweep(T, first_only=True)) != m.mergeable:
            raise AssertionError("mergeability criterion disagrees with the merge sweep")
    try:
        period = quasicyclic_period(T) if reduced else "n/a"
    except HypothesisError as exc:
        period = f"n/a ({exc})"
    _emit(out, "quasicyclic_period", period)
    return EXIT_OK


def cmd_multicycle(args, out) -> int:
    from .factorization import multicycle_code, pseudocodewords

    T = _load_trellis(args.file)
    C = multicycle_code(T, args.i)
    _emit(out, "dim", C.dim)
    for r in C.basis:
        out.write(format_word(r, T.p) + "\n")
    if args.pseudo:
        for pc in sorted(pseudocodewords(T, args.i)):
            _emit(out, "pseudocodeword", "".join(map(str, pc)) if max(pc, default=0) < 10 else ",".join(map(str, pc)))
    return EXIT_OK


def cmd_dual(args, out) -> int:
    from .trellis_core import dual_f2

    out.write(write_labelcode(dual_f2(_load_trellis(args.file))))
    return EXIT_OK


def cmd_cover(args, out) -> int:
    from .trellis_core import cover

    out.write(write_labelcode(cover(_load_trellis(args.file), args.i)))
    return EXIT_OK


def cmd_product(args, out) -> int:
    files = [read_trellis(Path(f).read_text(), source=f) for f in args.files]
    if all(f.form == "product" for f in files):
        n, p = files[0].n, files[0].p
        if any(f.n != n or f.p != p for f in files):
            raise TrellisError("all factors must share length and field")
        out.write(write_product([x for f in files for x in f.factors], n, p))
    else:
        out.write(write_labelcode(product_all(f.trellis for f in files)))
    return EXIT_OK


def cmd_dot(args, out) -> int:
    text = dot_export(_load_trellis(args.file), max_vertices=args.max_vertices)
    if args.output:
        Path(args.output).write_text(text)
        _emit(out, "wrote", args.output)
    else:
        out.write(text)
    return EXIT_OK


def cmd_report(args, out) -> int:
    from .report import trellis_report

    for path in trellis_report(_load_trellis(args.file), Path(args.outdir), stem=Path(args.file).stem):
        _emit(out, "wrote", path)
    return EXIT_OK


def cmd_charmatrix(args, out) -> int:
    from .minimality import characteristic_matrix

    for line in characteristic_matrix(_load_code(args.file)).lines():
        out.write(line + "\n")
    return EXIT_OK


def _census_check(C: Subspace, shapes, seed: int) -> None:
    """A second, randomized characteristic matrix must give the same census."""
    from .factorization import isomorphic
    from .minimality import characteristic_matrix, enumerate_minimal_linear

    other = enumerate_minimal_linear(C, chi=characteristic_matrix(C, rng=random.Random(seed)))
    a = {s.spans: s.trellises for s in shapes}
    b = {s.spans: s.trellises for s in other}
    if set(a) != set(b):
        raise AssertionError("census shapes depend on the characteristic matrix")
    for key in a:
        if len(a[key]) != len(b[key]):
            raise AssertionError(f"census counts differ for shape {key}")
        for kv in a[key]:
            if not any(isomorphic(kv.trellis, o.trellis) for o in b[key]):
                raise AssertionError(f"census member {kv.lines()} missing from the second run")


def cmd_minimal(args, out) -> int:
    from .minimality import count_minimal_with_shape, enumerate_minimal_linear

    C = _load_code(args.file)
    shapes = enumerate_minimal_linear(C, census=args.census)
    total = 0
    for sh in shapes:
        _emit(out, "shape", sh.label(), "profile", " ".join(map(str, sh.profile)))
        if args.census:
            _emit(out, "count", len(sh.trellises), "formula", count_minimal_with_shape(C, sh.spans))
        for kv in sh.trellises:
            out.write("  " + " x ".join(kv.lines()) + "\n")
        total += len(sh.trellises)
    _emit(out, "total", total)
    if args.strict and args.census:
        _census_check(C, shapes, args.seed)
    if args.report:
        from .report import census_report

        for path in census_report(shapes, Path(args.report), stem=Path(args.file).stem):
            _emit(out, "wrote", path)
    return EXIT_OK


def cmd_minconv(args, out) -> int:
    from .minimality import atomic_basis

    C = _load_code(args.file)
    ab = atomic_basis(C)
    out.write(write_product(ab.rows, C.ambient, C.p))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="tbtrellis", description="Linear tail-biting trellis toolkit.")
    ap.add_argument("--strict", action="store_true", help="cross-check shortcuts against definitions")
    ap.add_argument("--seed", type=int, default=0, help="seed for randomized cross-checks")
    top = ap.add_subparsers(dest="group", required=True)

    tr = top.add_parser("trellis", help="operations on trellis files").add_subparsers(dest="cmd", required=True)
    p = tr.add_parser("spans", help="span distribution by both routes")
    p.add_argument("file")
    p.set_defaults(func=cmd_spans)
    p = tr.add_parser("factor", help="elementary factorizations")
    p.add_argument("file")
    g = p.add_mutually_exclusive_group()
    g.add_argument("--all", action="store_true")
    g.add_argument("--count", action="store_true")
    p.add_argument("--cap", type=int, default=10_000)
    p.set_defaults(func=cmd_factor)
    p = tr.add_parser("iso", help="isomorphism test")
    p.add_argument("file1")
    p.add_argument("file2")
    p.add_argument("--structural", action="store_true")
    p.add_argument("--oracle", action="store_true", help="exhaustive graph matching instead")
    p.set_defaults(func=cmd_iso)
    p = tr.add_parser("props", help="structural properties")
    p.add_argument("file")
    p.set_defaults(func=cmd_props)
    p = tr.add_parser("multicycle", help="code of i-cycles")
    p.add_argument("file")
    p.add_argument("-i", type=int, required=True)
    p.add_argument("--pseudo", action="store_true")
    p.set_defaults(func=cmd_multicycle)
    p = tr.add_parser("dual", help="trimmed dual trellis (GF(2))")
    p.add_argument("file")
    p.set_defaults(func=cmd_dual)
    p = tr.add_parser("cover", help="i-fold cover")
    p.add_argument("file")
    p.add_argument("-i", type=int, required=True)
    p.set_defaults(func=cmd_cover)
    p = tr.add_parser("product", help="product of trellis files")
    p.add_argument("files", nargs="+")
    p.set_defaults(func=cmd_product)
    p = tr.add_parser("dot", help="Graphviz export")
    p.add_argument("file")
    p.add_argument("-o", "--output")
    p.add_argument("--max-vertices", type=int, default=DEFAULT_MAX_VERTICES)
    p.set_defaults(func=cmd_dot)
    p = tr.add_parser("report", help="profile and span figures plus a TSV summary")
    p.add_argument("file")
    p.add_argument("-o", "--outdir", default=".")
    p.set_defaults(func=cmd_report)

    co = top.add_parser("code", help="operations on code files").add_subparsers(dest="cmd", required=True)
    p = co.add_parser("charmatrix", help="characteristic matrix")
    p.add_argument("file")
    p.set_defaults(func=cmd_charmatrix)
    p = co.add_parser("minimal", help="minimal linear trellises")
    p.add_argument("file")
    p.add_argument("--census", action="store_true", help="all isomorphism classes per shape")
    p.add_argument("--report", metavar="DIR", help="also write figures and TSV to DIR")
    p.set_defaults(func=cmd_minimal)
    p = co.add_parser("minconv", help="minimal conventional trellis")
    p.add_argument("file")
    p.set_defaults(func=cmd_minconv)
    return ap


def main(argv: Sequence[str] | None = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    args = build_parser().parse_args(argv)
    try:
        return args.func(args, out)
    except (TrellisError, SpanError, LinalgError, OSError) as exc:
        err.write(f"error: {exc}\n")
        return EXIT_ERROR
    except AssertionError as exc:
        err.write(f"strict check failed: {exc}\n")
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
