"""Show where the mode-3 group law breaks down.

The reparameterizations behind associativity and the unit laws are checked
for each continuity class, then an Assoc certificate on the Sierpinski
space is run in every mode.
"""

from semihomotopy.finite_space import SIERPINSKI
from semihomotopy.homotopy import Assoc, Certificate, CertificateError, check_certificate
from semihomotopy.paths import RHO_ASSOC, RHO_UNIT_LEFT, RHO_UNIT_RIGHT, StepPath, inverse_path, \
    pl_continuity_class


def main():
    for name, rho in (("rho-assoc", RHO_ASSOC), ("rho-unit-left", RHO_UNIT_LEFT),
                      ("rho-unit-right", RHO_UNIT_RIGHT)):
        for i in (1, 2, 3):
            v = pl_continuity_class(rho, i)
            line = f"{name:<15} so{i}: {v.status}"
            if v.witness is not None:
                line += f" (semi-open {v.witness} pulls back to {v.preimage})"
            print(line)

    a = StepPath.parse(SIERPINSKI, [("[0,1/3)", "a"), ("[1/3,1]", "b")])
    node = Assoc(a, inverse_path(a), a)
    print(f"\nassoc on alpha = {a}")
    for mode in (1, 2, 3):
        try:
            j = check_certificate(Certificate(node, mode))
            print(f"  mode {mode}: accepted, {j.lhs} ~ {j.rhs}")
        except CertificateError as exc:
            print(f"  mode {mode}: rejected on {exc.hypothesis}: {exc.detail}")


if __name__ == "__main__":
    main()
