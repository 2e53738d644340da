"""Regenerate the bundled corpus from construction expressions."""

from __future__ import annotations

import sys
from pathlib import Path

from engel_forge.corpus import construct, parse_cycles
from engel_forge.group import PermGroup

ENTRIES = [
    ("s3", "sym(3)", {"a3": ["(1,2,3)"]}, []),
    ("s4", "sym(4)", {"v4": ["(1,2)(3,4)", "(1,3)(2,4)"], "a4": ["(1,2,3)", "(2,3,4)"],
                      "c2_in_v4": ["(1,2)(3,4)"]}, []),
    ("s5", "sym(5)", {"a5": ["(1,2,3)", "(1,2,4)", "(1,2,5)"]}, []),
    ("a4", "alt(4)", {"v4": ["(1,2)(3,4)", "(1,3)(2,4)"]}, []),
    ("a5", "alt(5)", {}, ["simple"]),
    ("d8", "dihedral(4)", {"c4": ["(1,2,3,4)"], "center": ["(1,3)(2,4)"]}, []),
    ("sl2_3", "sl2(3)", {}, []),
    ("sl2_5", "sl2(5)", {}, ["quasisimple"]),
    ("a5xa5", "direct(alt(5), alt(5))", {}, []),
    ("a5wrc2", "wreath_cyclic(alt(5), 2)", {}, []),
    ("a5wrc3", "wreath_cyclic(alt(5), 3)", {}, []),
    ("c7sdc3", "semidirect(7, alpha_order=3)", {}, []),
    ("c5sdc4", "semidirect(5, multiplier=2)", {}, []),
    ("c3wrc3", "wreath_cyclic(cyclic(3), 3)", {}, []),
    ("s3wrc2", "wreath_cyclic(sym(3), 2)", {}, []),
    ("a5wra5", "wreath(alt(5), alt(5))", {}, ["no-enumeration"]),
    ("s4xa5", "direct(sym(4), alt(5))", {"v4": ["(1,2)(3,4)", "(1,3)(2,4)"]}, []),
    ("c3sq_sdc4", "affine(3, [[0, 2], [1, 0]])", {}, []),
    ("a5xc6", "direct(alt(5), cyclic(6))", {}, []),
    ("c15_inv", "semidirect(15, multiplier=14)", {}, []),
    ("c3sq_inv1", "affine(3, [[2, 0], [0, 1]])", {}, []),
]


def main(out: Path) -> None:
    from engel_forge.subgroups import is_soluble

    out.mkdir(parents=True, exist_ok=True)
    for name, expr, extra, tags in ENTRIES:
        c = construct(expr)
        G = c.group()
        gf = c.to_file(name, provenance=f"construct {expr}")
        for key, gens in extra.items():
            gf.named_subgroups[key] = [parse_cycles(g, gf.degree).cycle_string() for g in gens]
            H = PermGroup(gf.degree, [parse_cycles(g, gf.degree) for g in gens])
            assert H.is_subgroup_of(G), (name, key)
        auto = ["soluble" if is_soluble(G) else "nonsoluble"]
        gf.tags = sorted(set(auto + tags + c.tags))
        gf.save(out / f"{name}.json")
        print(f"{name}: degree {gf.degree}, order {G.order}")


if __name__ == "__main__":
    main(Path(sys.argv[1]) if len(sys.argv) > 1 else Path(__file__).resolve().parents[1] / "src/engel_forge/data/corpus")
