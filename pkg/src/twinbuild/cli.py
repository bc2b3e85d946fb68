"""Command line surface: generators, validators, sweeps, and twin builds.

Exit codes: 0 = pass, 1 = violation found, 2 = inconclusive, 3 = input
error.  All output orderings are deterministic so that repeated runs on
identical inputs produce byte-identical files.
"""

from __future__ import annotations

import argparse
import os
import sys
from typing import Optional, Sequence

from .catalog import (
    gen_digon,
    gen_pg2,
    gen_pg3,
    gen_sp4,
    gen_thin,
    matrix_A1,
    matrix_A2,
    matrix_A3,
    matrix_B2,
    matrix_I2,
)
from .chambersys import Building, ChamberSystem, validate_building
from .codistance import Codistance, from_opposite_chamber, validate_codistance
from .coxeter import CoxeterMatrix, enumerate_weyl
from .errors import CapExceeded, FormatError, TwinbuildError, UnsupportedQ
from .homotopy import check_lco, check_lsco, connected, simply_2_connected
from .twinner import CodistanceAtlas, assemble_twin, atlas_component

EXIT_PASS = 0
EXIT_VIOLATION = 1
EXIT_INCONCLUSIVE = 2
EXIT_INPUT = 3

THIN_TYPES = {
    "a1": matrix_A1,
    "a2": matrix_A2,
    "b2": matrix_B2,
    "g2": lambda: matrix_I2(6),
    "a3": matrix_A3,
}


# -- serialization ------------------------------------------------------------


def serialize_building(b: Building) -> str:
    matrix = b.weyl.matrix
    lines = ["%building 1", f"name {b.name}", f"rank {matrix.rank}",
             "gens " + " ".join(matrix.gens), "matrix"]
    for row in matrix.m:
        lines.append(" ".join(str(0 if e == 0 else e) for e in row))
    lines.append(f"chambers {b.n}")
    for s, gname in enumerate(matrix.gens):
        lines.append(f"panels {gname}")
        for panel in sorted(tuple(sorted(p)) for p in b.system.panels[s]):
            lines.append(" ".join(str(c) for c in panel))
    lines.append("end")
    return "\n".join(lines) + "\n"


class _Cursor:
    def __init__(self, text: str) -> None:
        self.lines = text.splitlines()
        self.pos = 0

    def next(self) -> str:
        if self.pos >= len(self.lines):
            raise FormatError("unexpected end of file")
        line = self.lines[self.pos]
        self.pos += 1
        return line

    def expect_prefix(self, prefix: str) -> str:
        line = self.next()
        if not line.startswith(prefix + " ") and line != prefix:
            raise FormatError(f"expected {prefix!r}, got {line!r}")
        return line[len(prefix):].strip()


def parse_building(text: str) -> Building:
    cur = _Cursor(text)
    header = cur.next()
    if header != "%building 1":
        raise FormatError(f"unsupported building format: {header!r}")
    name = cur.expect_prefix("name")
    try:
        rank = int(cur.expect_prefix("rank"))
    except ValueError as e:
        raise FormatError(str(e))
    gens = tuple(cur.expect_prefix("gens").split())
    if len(gens) != rank:
        raise FormatError("generator count does not match rank")
    if cur.next() != "matrix":
        raise FormatError("expected matrix block")
    rows = []
    for _ in range(rank):
        try:
            rows.append(tuple(int(e) for e in cur.next().split()))
        except ValueError as e:
            raise FormatError(str(e))
    try:
        n = int(cur.expect_prefix("chambers"))
    except ValueError as e:
        raise FormatError(str(e))
    try:
        matrix = CoxeterMatrix(gens, tuple(rows))
    except TwinbuildError as e:
        raise FormatError(str(e))
    panels: list[list[tuple[int, ...]]] = []
    for gname in gens:
        tag = cur.expect_prefix("panels")
        if tag != gname:
            raise FormatError(f"expected panels for {gname!r}, got {tag!r}")
        fam: list[tuple[int, ...]] = []
        while cur.pos < len(cur.lines):
            line = cur.lines[cur.pos]
            if line.startswith("panels ") or line == "end":
                break
            cur.pos += 1
            try:
                ids = tuple(int(x) for x in line.split())
            except ValueError as e:
                raise FormatError(str(e))
            if list(ids) != sorted(set(ids)):
                raise FormatError(f"panel ids not strictly ascending: {line!r}")
            fam.append(ids)
        panels.append(fam)
    if cur.next() != "end":
        raise FormatError("missing end marker")
    try:
        table = enumerate_weyl(matrix)
        system = ChamberSystem(table, n, panels)
    except (TwinbuildError, ValueError) as e:
        raise FormatError(str(e))
    return Building(system, name=name)


def serialize_codistance(f: Codistance) -> str:
    table = f.building.weyl
    lines = ["%codistance 1", f"building {f.building.name}", "values"]
    for c, v in enumerate(f.values):
        lines.append(f"{c} {table.word_str(v)}")
    lines.append("end")
    return "\n".join(lines) + "\n"


def parse_codistance(text: str, b: Building, err=None) -> Codistance:
    if err is None:
        err = sys.stderr
    cur = _Cursor(text)
    header = cur.next()
    if header != "%codistance 1":
        raise FormatError(f"unsupported codistance format: {header!r}")
    bname = cur.expect_prefix("building")
    if bname != b.name:
        raise FormatError(f"codistance is for building {bname!r}, not {b.name!r}")
    if cur.next() != "values":
        raise FormatError("expected values block")
    table = b.weyl
    values = [0] * b.n
    seen = [False] * b.n
    for _ in range(b.n):
        parts = cur.next().split()
        if len(parts) != 2:
            raise FormatError(f"bad value line: {' '.join(parts)!r}")
        try:
            c = int(parts[0])
        except ValueError as e:
            raise FormatError(str(e))
        if not 0 <= c < b.n or seen[c]:
            raise FormatError(f"bad or repeated chamber id {parts[0]}")
        try:
            w = table.parse_word(parts[1])
        except ValueError as e:
            raise FormatError(str(e))
        canon = table.word_str(w)
        if canon != parts[1]:
            print(
                f"warning: word {parts[1]!r} canonicalized to {canon!r}",
                file=err,
            )
        seen[c] = True
        values[c] = w
    if cur.next() != "end":
        raise FormatError("missing end marker")
    return Codistance(b, values)


def _read(path: str) -> str:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return fh.read()
    except OSError as e:
        raise FormatError(str(e))


def _write(path: str, text: str) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


# -- subcommands --------------------------------------------------------------


def _cmd_gen(args) -> int:
    try:
        if args.family == "pg2":
            b = gen_pg2(args.q)
        elif args.family == "pg3":
            b = gen_pg3(args.q)
        elif args.family == "sp4":
            b = gen_sp4(args.q)
        elif args.family == "digon":
            b = gen_digon(args.a, args.b)
        elif args.family == "thin":
            b = gen_thin(THIN_TYPES[args.type]())
        else:
            raise FormatError(f"unknown family {args.family!r}")
    except UnsupportedQ as e:
        raise FormatError(str(e))
    _write(args.output, serialize_building(b))
    print(f"wrote {b.name}: {b.n} chambers, rank {b.system.rank}")
    return EXIT_PASS


def _cmd_validate_building(args) -> int:
    b = parse_building(_read(args.file))
    report = validate_building(b)
    if serialize_building(b) != _read(args.file):
        print("note: input was not in canonical form", file=sys.stderr)
    if report.ok:
        print(f"{b.name}: {b.n} chambers, thick={b.system.is_thick()}")
        print("RESULT=pass")
        return EXIT_PASS
    for v in report.violations:
        print(f"violation {v.axiom}: {v.witness} ({v.detail})")
    print("RESULT=fail")
    return EXIT_VIOLATION


def _cmd_validate_codistance(args) -> int:
    b = parse_building(_read(args.building))
    f = parse_codistance(_read(args.file), b)
    report = validate_codistance(f)
    if report.ok:
        print(f"codistance on {b.name}: ok, FOP_SIZE={len(f.fop())}")
        print("RESULT=pass")
        return EXIT_PASS
    v = report.violation
    print(f"panel violation: type {v.generator} panel {v.panel}: {v.detail}")
    print("RESULT=fail")
    return EXIT_VIOLATION


def _cmd_from_opposite(args) -> int:
    b = parse_building(_read(args.building))
    if not 0 <= args.chamber < b.n:
        raise FormatError(f"chamber {args.chamber} out of range")
    f = from_opposite_chamber(b, args.chamber)
    _write(args.output, serialize_codistance(f))
    print(f"wrote codistance opposite chamber {args.chamber}, FOP_SIZE={len(f.fop())}")
    return EXIT_PASS


def _cmd_check(args) -> int:
    b = parse_building(_read(args.building))
    if args.condition == "lco":
        report = check_lco(b)
        key = "LCO"
    else:
        report = check_lsco(b)
        key = "LSCO"
    if report.ok:
        print(f"{key}=pass")
        return EXIT_PASS
    inconclusive = False
    for e in report.entries:
        print(
            f"residue type {e.J} at {e.residue_base}, chamber {e.chamber}: "
            f"{e.verdict.status}"
        )
        if e.verdict.status == "Inconclusive":
            inconclusive = True
    print(f"{key}=fail")
    return EXIT_INCONCLUSIVE if inconclusive else EXIT_VIOLATION


def _cmd_fop(args) -> int:
    b = parse_building(_read(args.building))
    f = parse_codistance(_read(args.codistance), b)
    fop = f.fop()
    print("fop " + " ".join(str(c) for c in fop))
    print(f"FOP_SIZE={len(fop)}")
    conn = connected(fop, range(b.system.rank), b)
    print(f"connected={'yes' if conn else 'no'}")
    if not conn:
        print("RESULT=fail")
        return EXIT_VIOLATION
    verdict = simply_2_connected(fop, b)
    print(f"simply_2_connected={verdict.status}")
    if verdict.status == "ProvenTrivial":
        print("RESULT=pass")
        return EXIT_PASS
    if verdict.status == "Inconclusive":
        print("RESULT=inconclusive")
        return EXIT_INCONCLUSIVE
    print("RESULT=fail")
    return EXIT_VIOLATION


def _twin_report(
    b: Building, atlas: CodistanceAtlas, report, lco_ok: bool, lsco_ok: bool,
    seed_fop: int,
) -> str:
    lines = [
        f"twin building over {b.name} with {b.n} chambers",
        f"atlas members: {len(atlas.members)}",
        "",
        f"RESULT={'pass' if report.ok else 'fail'}",
        f"ATLAS_SIZE={len(atlas.members)}",
        f"FOP_SIZE={seed_fop}",
        f"LCO={'pass' if lco_ok else 'fail'}",
        f"LSCO={'pass' if lsco_ok else 'fail'}",
        f"TW_AXIOMS={'pass' if report.tw_axioms_ok else 'fail'}",
        f"SEED_MATCH={'pass' if report.seed_ok else 'fail'}",
    ]
    return "\n".join(lines) + "\n"


def _cmd_twin_build(args) -> int:
    b = parse_building(_read(args.building))
    f = parse_codistance(_read(args.codistance), b)
    lco_ok = check_lco(b).ok
    lsco_ok = check_lsco(b).ok
    if not (lco_ok and lsco_ok):
        print("building fails lco/lsco; twin construction not attempted")
        print("RESULT=fail")
        return EXIT_VIOLATION
    try:
        atlas = atlas_component(f)
    except CapExceeded as e:
        print(f"RESULT=inconclusive ({e})")
        return EXIT_INCONCLUSIVE
    assembly = assemble_twin(atlas, b, seed=f)
    os.makedirs(args.output, exist_ok=True)
    _write(os.path.join(args.output, "minus.bld"), serialize_building(b))
    _write(
        os.path.join(args.output, "plus.bld"),
        serialize_building(assembly.plus),
    )
    for i, g in enumerate(atlas.members):
        _write(
            os.path.join(args.output, f"codistance_{i:04d}.cod"),
            serialize_codistance(g),
        )
    table = b.weyl
    costar_lines = []
    for c in range(b.n):
        for i in range(len(atlas.members)):
            costar_lines.append(f"{c}\t{i}\t{table.word_str(atlas.members[i](c))}")
    _write(os.path.join(args.output, "costar.tsv"), "\n".join(costar_lines) + "\n")
    report_text = _twin_report(b, atlas, assembly.report, lco_ok, lsco_ok, len(f.fop()))
    _write(os.path.join(args.output, "report.txt"), report_text)
    sys.stdout.write(report_text)
    return EXIT_PASS if assembly.report.ok else EXIT_VIOLATION


def _cmd_twin_verify(args) -> int:
    d = args.directory
    b = parse_building(_read(os.path.join(d, "minus.bld")))
    plus = parse_building(_read(os.path.join(d, "plus.bld")))
    members = []
    for i in range(plus.n):
        path = os.path.join(d, f"codistance_{i:04d}.cod")
        members.append(parse_codistance(_read(path), b))
    atlas = CodistanceAtlas(
        building=b,
        members=members,
        panels=[list(fam) for fam in plus.system.panels],
        origin=0,
    )
    table = b.weyl
    for line in _read(os.path.join(d, "costar.tsv")).splitlines():
        parts = line.split("\t")
        if len(parts) != 3:
            raise FormatError(f"bad costar line: {line!r}")
        c, i, word = int(parts[0]), int(parts[1]), parts[2]
        if members[i](c) != table.parse_word(word):
            print(f"costar table mismatch at chamber {c}, member {i}")
            print("RESULT=fail")
            return EXIT_VIOLATION
    lco_ok = check_lco(b).ok
    lsco_ok = check_lsco(b).ok
    assembly = assemble_twin(atlas, b, seed=members[0])
    report_text = _twin_report(
        b, atlas, assembly.report, lco_ok, lsco_ok, len(members[0].fop())
    )
    sys.stdout.write(report_text)
    return EXIT_PASS if assembly.report.ok else EXIT_VIOLATION


def _cmd_weyl(args) -> int:
    b = parse_building(_read(args.building))
    table = b.weyl
    print(f"order {table.size}")
    hist: dict[int, int] = {}
    for w in range(table.size):
        hist[table.length[w]] = hist.get(table.length[w], 0) + 1
    for l in sorted(hist):
        print(f"length {l}: {hist[l]}")
    return EXIT_PASS


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="twinbuild")
    sub = parser.add_subparsers(dest="command", required=True)

    p_gen = sub.add_parser("gen", help="generate a catalog building")
    p_gen.add_argument("family", choices=["pg2", "pg3", "sp4", "digon", "thin"])
    p_gen.add_argument("--q", type=int, default=2)
    p_gen.add_argument("--a", type=int, default=3)
    p_gen.add_argument("--b", type=int, default=3)
    p_gen.add_argument("--type", choices=sorted(THIN_TYPES), default="a2")
    p_gen.add_argument("-o", "--output", required=True)
    p_gen.set_defaults(func=_cmd_gen)

    p_val = sub.add_parser("validate", help="validate a file")
    val_sub = p_val.add_subparsers(dest="what", required=True)
    v_b = val_sub.add_parser("building")
    v_b.add_argument("file")
    v_b.set_defaults(func=_cmd_validate_building)
    v_c = val_sub.add_parser("codistance")
    v_c.add_argument("file")
    v_c.add_argument("--building", required=True)
    v_c.set_defaults(func=_cmd_validate_codistance)

    p_cod = sub.add_parser("codist", help="codistance constructions")
    cod_sub = p_cod.add_subparsers(dest="what", required=True)
    c_opp = cod_sub.add_parser("from-opposite")
    c_opp.add_argument("--building", required=True)
    c_opp.add_argument("--chamber", type=int, required=True)
    c_opp.add_argument("-o", "--output", required=True)
    c_opp.set_defaults(func=_cmd_from_opposite)

    p_chk = sub.add_parser("check", help="local conditions")
    p_chk.add_argument("condition", choices=["lco", "lsco"])
    p_chk.add_argument("--building", required=True)
    p_chk.set_defaults(func=_cmd_check)

    p_fop = sub.add_parser("fop", help="opposition set of a codistance")
    p_fop.add_argument("--codistance", required=True)
    p_fop.add_argument("--building", required=True)
    p_fop.set_defaults(func=_cmd_fop)

    p_twin = sub.add_parser("twin", help="twin building construction")
    twin_sub = p_twin.add_subparsers(dest="what", required=True)
    t_b = twin_sub.add_parser("build")
    t_b.add_argument("--building", required=True)
    t_b.add_argument("--codistance", required=True)
    t_b.add_argument("-o", "--output", required=True)
    t_b.set_defaults(func=_cmd_twin_build)
    t_v = twin_sub.add_parser("verify")
    t_v.add_argument("directory")
    t_v.set_defaults(func=_cmd_twin_verify)

    p_weyl = sub.add_parser("weyl", help="Weyl group info")
    weyl_sub = p_weyl.add_subparsers(dest="what", required=True)
    w_e = weyl_sub.add_parser("enumerate")
    w_e.add_argument("--building", required=True)
    w_e.set_defaults(func=_cmd_weyl)

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except FormatError as e:
        print(f"input error: {e}", file=sys.stderr)
        return EXIT_INPUT
    except TwinbuildError as e:
        print(f"violation: {e}", file=sys.stderr)
        return EXIT_VIOLATION


if __name__ == "__main__":
    sys.exit(main())
