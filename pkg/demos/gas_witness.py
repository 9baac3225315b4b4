"""GAS limits with an explicit density-zero modification, then the full classification."""

from summakit import Modification, apply_modification, classify, parse_modification, parse_sequence
from summakit.errors import DensityNotZero

x = parse_sequence("overlay(parity(1,0); squares -> const(5))")
m = Modification(*parse_modification("squares -> parity(1,0)"))
print("modified terms:", apply_modification(x, m).terms(1, 11).tolist())
print(classify(x, m).summary())

try:
    Modification(*parse_modification("evens -> const(0)"))
except DensityNotZero as exc:
    print("rejected:", exc)
