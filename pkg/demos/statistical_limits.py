"""Statistical limits: a convergent block sequence and a refuted alternation."""

from summakit import density_one_subsequence, parse_sequence, stat_limit

zero_one = parse_sequence("blocks(i=1..: const(0)*100^i, const(1)*10^i)")
v = stat_limit(zero_one, 101021210)
print("zero-one blocks:", v, "threshold", v.diagnostics["threshold"])

alternating = parse_sequence("periodic(1,0)")
w = stat_limit(alternating)
print("1, 0, 1, 0, ...:", w, "lower bound", w.diagnostics["lower_bound"])

lam = parse_sequence("overlay(const(0); squares -> index)")
print("index on squares:", stat_limit(lam), "along", density_one_subsequence(lam, 0))
