"""Almost convergence through uniform window means."""

from summakit import lorentz_test, parse_sequence, window_mean

x = parse_sequence("periodic(1,2,6)")
print("mean of x over [5, 5+9):", window_mean(x, 5, 9))
v = lorentz_test(x)
print("periodic(1,2,6):", v)
for w in v.diagnostics["windows"]:
    print("  k=%(k)d  inf=%(inf_mean).4f  sup=%(sup_mean).4f" % w)

blocks = parse_sequence("blocks(i=1..: const(0)*100^i, const(1)*10^i)")
print("zero-one blocks:", lorentz_test(blocks))
