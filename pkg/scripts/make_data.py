"""Write the sample input files under data/."""

import json
from pathlib import Path

from semihomotopy.finite_space import E1, SIERPINSKI
from semihomotopy.formats import family_to_json
from semihomotopy.homotopy import inverse_cancel_family
from semihomotopy.paths import StepPath

OUT = Path(__file__).resolve().parent.parent / "data"


def dump(name, obj):
    (OUT / name).write_text(json.dumps(obj, indent=2, ensure_ascii=False) + "\n")


def pieces(path):
    return path.to_json()["pieces"]


def main():
    OUT.mkdir(exist_ok=True)
    dump("e1.json", E1.to_json())
    dump("sierpinski.json", SIERPINSKI.to_json())
    dump("id_e1.json", {"domain": "e1.json", "codomain": "e1.json",
                        "images": {p: p for p in E1.points}})
    swap = {"points": ["a", "b", "c", "d"], "opens": [[], ["b"], ["a", "b"], ["a", "b", "c", "d"]]}
    dump("e1_swapped.json", swap)
    dump("swap_ab.json", {"domain": "e1.json", "codomain": "e1_swapped.json",
                          "images": {"a": "b", "b": "a", "c": "c", "d": "d"}})
    dump("s2_into_e1.json", {"domain": "sierpinski.json", "codomain": "e1.json",
                             "images": {"a": "a", "b": "b"}})

    g = StepPath.parse(SIERPINSKI, [("[0,1/2)", "a"), ("[1/2,3/4)", "b"), ("[3/4,1]", "a")])
    h = StepPath.parse(SIERPINSKI, [("[0,1/3)", "a"), ("[1/3,2/3)", "b"), ("[2/3,1]", "a")])
    k = StepPath.parse(SIERPINSKI, [("[0,1/2)", "a"), ("[1/2,3/4]", "b"), ("(3/4,1]", "a")])
    up = StepPath.parse(SIERPINSKI, [("[0,1/3)", "a"), ("[1/3,1]", "b")])
    for name, p in [("loop_g.json", g), ("loop_h.json", h), ("loop_k.json", k), ("path_ab.json", up)]:
        dump(name, {"space": "sierpinski.json", "pieces": pieces(p)})
    dump("path_e1_bd.json", {"space": "e1.json", "pieces": [
        {"interval": "[0,1/2)", "value": "b"}, {"interval": "[1/2,1]", "value": "d"}]})

    dump("table_s2.json", {"space": "sierpinski.json", "basepoint": "a", "mode": 2,
                           "generators": {"g": "loop_g.json", "h": "loop_h.json"}})
    dump("table_s2_mode3.json", {"space": "sierpinski.json", "basepoint": "a", "mode": 3,
                                 "generators": {"k": "loop_k.json"}})

    dump("cert_bundle.json", {
        "space": "sierpinski.json", "mode": 1, "rel": True,
        "paths": {"a": "path_ab.json", "ab": pieces(up),
                  "b": [{"interval": "[0,1]", "value": "b"}],
                  "g": "loop_g.json"},
        "maps": {"rho1": [["0", "0"], ["1/2", "1/4"], ["1", "1"]]},
    })
    (OUT / "cert_assoc.txt").write_text("(assoc a b b)\n")
    (OUT / "cert_chain.txt").write_text(
        "(trans (assoc a b b) (paste (refl (compose a b)) (reparam b rho1)))\n")
    (OUT / "cert_cancel.txt").write_text("(inv-cancel-left g)\n")
    (OUT / "cert_bad_trans.txt").write_text("(trans (refl a) (refl g))\n")
    dump("family_cancel_g.json", family_to_json(inverse_cancel_family(g)))


if __name__ == "__main__":
    main()
