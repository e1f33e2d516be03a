"""Rebuild the CLI fixture inputs and golden outputs.

Run from anywhere:  python tests/fixtures/regenerate.py
Golden files are only rewritten by this script; the test-suite compares
against them byte for byte.
"""

from __future__ import annotations

import contextlib
import io
import json
import os
from pathlib import Path


from exanlab import catalog, cli
from exanlab import serialize as ser
from exanlab.algebra import LeftModule, direct_sum_module, regular_bimodule
from exanlab.exactla import GF, QQ
from exanlab.extensions import inner_cocycle, is_cocycle
from exanlab.hochschild import Cochain

HERE = Path(__file__).resolve().parent
INPUTS = HERE / "inputs"
GOLDEN = HERE / "golden"


def write(name: str, doc: dict) -> None:
    (INPUTS / name).write_text(ser.dumps(doc), encoding="utf-8")


def algebra_doc(a) -> dict:
    return {"field": a.field.descriptor(), "algebra": ser.dump_algebra(a)}


def module_doc(m) -> dict:
    return {"field": m.field.descriptor(), "module": ser.dump_module(m)}


def cochain_doc(F, matrix, degree=2) -> dict:
    return {"field": F.descriptor(), "cochain": {"degree": degree, "matrix": ser.format_array(F, matrix)}}


def build_inputs() -> None:
    INPUTS.mkdir(exist_ok=True)
    for F, tag in ((QQ, "q"), (GF(2), "f2")):
        dual = catalog.dual_numbers(F)
        write(f"dual_{tag}.json", algebra_doc(dual))
        write(f"regular_bimodule_{tag}.json", {"field": F.descriptor(), "bimodule": "regular"})
        write(f"regular_module_{tag}.json", {"field": F.descriptor(), "module": "regular"})
        write(f"residue_module_dual_{tag}.json", module_doc(catalog.cyclic_quotient(dual, [0, 1])))
        write(f"zero_cocycle_dual_{tag}.json", cochain_doc(F, F.zeros((2, 4))))

    F = QQ
    dual = catalog.dual_numbers(F)
    # C(eps, eps) = 1: the class spanning HH^2
    C = F.zeros((2, 4))
    C[0, 3] = F.coerce(1)
    write("dual_hh2_cocycle_q.json", cochain_doc(F, C))
    c = Cochain(dual, regular_bimodule(dual), 2, C)
    assert is_cocycle(c)
    # C + C^phi for phi(1) = 0, phi(eps) = 1 + 2 eps
    phi = F.array([[0, 1], [0, 2]])
    shifted = F.reduce(C + inner_cocycle(dual, c.bimodule, phi).matrix)
    write("dual_hh2_shifted_q.json", cochain_doc(F, shifted))
    # C(1, eps) = 1 alone is not a cocycle
    bad = F.zeros((2, 4))
    bad[0, 1] = F.coerce(1)
    assert not is_cocycle(Cochain(dual, c.bimodule, 2, bad))
    write("not_a_cocycle_dual_q.json", cochain_doc(F, bad))

    G = GF(2)
    dual2 = catalog.dual_numbers(G)
    C2 = G.zeros((2, 4))
    C2[1, 3] = G.coerce(1)  # C(eps, eps) = eps
    assert is_cocycle(Cochain(dual2, regular_bimodule(dual2), 2, C2))
    write("dual_eps_cocycle_f2.json", cochain_doc(G, C2))

    x3 = catalog.truncated_polynomial(F, 3)
    write("x3_q.json", algebra_doc(x3))
    write("x3_mod_x2_q.json", module_doc(catalog.cyclic_quotient(x3, [0, 0, 1])))
    write("m2_q.json", algebra_doc(catalog.matrix_algebra(F, 2)))
    t2 = catalog.upper_triangular(F)
    write("t2_q.json", algebra_doc(t2))
    s1 = LeftModule(t2, F.array([[[1]], [[0]], [[0]]]))
    s2 = LeftModule(t2, F.array([[[1]], [[0]], [[1]]]))
    write("t2_semisimple_module_q.json", module_doc(direct_sum_module(s1, s2)))
    write("k16_q.json", algebra_doc(catalog.product_of_fields(F, 16)))

    # a unit that is not a unit, and a non-associative table
    bad_unit = algebra_doc(dual)
    bad_unit["algebra"]["mul"][0][1] = ["0", "0"]
    write("bad_unit_q.json", bad_unit)
    bad_assoc = algebra_doc(x3)
    bad_assoc["algebra"]["mul"][1][2] = ["0", "1", "0"]
    write("bad_assoc_q.json", bad_assoc)
    (INPUTS / "malformed.json").write_text('{"field": "Q", "algebra": {"dim": 1,\n', encoding="utf-8")

    # extension document produced by `extend`
    run(["extend", "dual_q.json", "regular_bimodule_q.json", "--cocycle", "dual_hh2_cocycle_q.json",
         "-o", "ext_dual_hh2_q.json"])
    run(["extend", "dual_q.json", "regular_bimodule_q.json", "zero_cocycle_dual_q.json",
         "-o", "ext_dual_trivial_q.json"])


CASES = [
    ("validate_dual", ["validate", "dual_q.json"]),
    ("validate_module", ["validate", "dual_q.json", "residue_module_dual_q.json", "regular_bimodule_q.json"]),
    ("validate_bad_unit", ["validate", "bad_unit_q.json"]),
    ("validate_bad_assoc", ["validate", "bad_assoc_q.json"]),
    ("validate_extension", ["validate", "ext_dual_hh2_q.json"]),
    ("center_m2", ["center", "m2_q.json"]),
    ("center_dual", ["center", "dual_q.json"]),
    ("derivations_x3", ["derivations", "x3_q.json"]),
    ("hh0_dual", ["hh", "--degree", "0", "dual_q.json", "regular_bimodule_q.json"]),
    ("hh1_dual", ["hh", "--degree", "1", "dual_q.json", "regular_bimodule_q.json"]),
    ("hh2_dual", ["hh", "--degree", "2", "dual_q.json", "regular_bimodule_q.json"]),
    ("hh2_m2", ["hh", "--degree", "2", "m2_q.json", "regular_bimodule_q.json"]),
    ("exan_dual", ["exan", "dual_q.json", "regular_bimodule_q.json"]),
    ("extend_dual_hh2", ["extend", "dual_q.json", "regular_bimodule_q.json", "dual_hh2_cocycle_q.json"]),
    ("extend_not_cocycle", ["extend", "dual_q.json", "regular_bimodule_q.json", "not_a_cocycle_dual_q.json"]),
    ("section_extract_hh2", ["section-extract", "ext_dual_hh2_q.json"]),
    ("section_extract_echelon", ["section-extract", "--section", "echelon", "ext_dual_hh2_q.json"]),
    ("equiv_inner_shifted", ["equiv", "--mode", "inner", "dual_q.json", "regular_bimodule_q.json",
                             "dual_hh2_shifted_q.json", "dual_hh2_cocycle_q.json"]),
    ("equiv_strict_shifted", ["equiv", "--mode", "strict", "dual_q.json", "regular_bimodule_q.json",
                              "dual_hh2_shifted_q.json", "dual_hh2_cocycle_q.json"]),
    ("equiv_inner_vs_zero", ["equiv", "--mode", "inner", "dual_q.json", "regular_bimodule_q.json",
                             "dual_hh2_cocycle_q.json", "zero_cocycle_dual_q.json"]),
    ("caction_eps", ["caction", "--element", "0,1", "dual_q.json", "regular_bimodule_q.json",
                     "dual_hh2_cocycle_q.json"]),
    ("caction_right_unit", ["caction", "--element", "1,0", "--side", "right", "dual_q.json",
                            "regular_bimodule_q.json", "dual_hh2_cocycle_q.json"]),
    ("quotient_hh2", ["quotient", "dual_q.json", "regular_bimodule_q.json", "dual_hh2_cocycle_q.json"]),
    ("quotient_trivial", ["quotient", "ext_dual_trivial_q.json"]),
    ("jet_f2_module", ["jet", "dual_f2.json", "regular_bimodule_f2.json", "dual_eps_cocycle_f2.json",
                       "residue_module_dual_f2.json"]),
    ("jet_q_not_module", ["jet", "dual_q.json", "regular_bimodule_q.json", "dual_hh2_cocycle_q.json",
                          "regular_module_q.json"]),
    ("kahler_dual", ["kahler", "dual_q.json"]),
    ("kahler_x3", ["kahler", "x3_q.json"]),
    ("kahler_noncommutative", ["kahler", "m2_q.json"]),
    ("connection_residue", ["connection", "dual_q.json", "residue_module_dual_q.json"]),
    ("connection_free", ["connection", "dual_q.json", "regular_module_q.json"]),
    ("ks_dual_residue", ["ks", "dual_q.json", "residue_module_dual_q.json"]),
    ("ks_x3_mod_x2", ["ks", "x3_q.json", "x3_mod_x2_q.json"]),
    ("ks_t2", ["ks", "t2_q.json", "t2_semisimple_module_q.json"]),
    ("twist_check_residue", ["twist-check", "dual_q.json", "residue_module_dual_q.json"]),
    ("twist_check_x3", ["twist-check", "x3_q.json", "x3_mod_x2_q.json"]),
    ("size_guard", ["hh", "--degree", "2", "k16_q.json", "regular_bimodule_q.json"]),
    ("malformed_json", ["validate", "malformed.json"]),
    ("field_mismatch", ["hh", "--degree", "1", "dual_q.json", "regular_bimodule_f2.json"]),
]


def run(argv: list[str]) -> tuple[str, int]:
    cwd = os.getcwd()
    os.chdir(INPUTS)
    try:
        buf = io.StringIO()
        with contextlib.redirect_stdout(buf):
            code = cli.main(argv)
    finally:
        os.chdir(cwd)
    return buf.getvalue(), code


def build_golden() -> None:
    GOLDEN.mkdir(exist_ok=True)
    manifest = []
    for name, argv in CASES:
        text, code = run(argv)
        (GOLDEN / f"{name}.json").write_text(text, encoding="utf-8")
        manifest.append({"name": name, "argv": argv, "exit": code})
    (HERE / "cases.json").write_text(json.dumps(manifest, indent=2) + "\n", encoding="utf-8")


if __name__ == "__main__":
    build_inputs()
    build_golden()
    for case in json.loads((HERE / "cases.json").read_text()):
        print(f"{case['exit']}  {case['name']}")
