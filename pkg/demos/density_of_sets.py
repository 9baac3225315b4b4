"""Natural density of a few index sets, exact and along a prefix grid."""

from summakit import empirical_density, exact_density, parse_set, prefix_count

for text in ("squares", "ap(3,7)", "!squares & evens",
             "blockset(blocks(i=1..: alt(1,0)*100^i, const(1)*10^i), 2, mask(2; 0))"):
    s = parse_set(text)
    est = empirical_density(s, 10 ** 6)
    print("%-40s exact=%-6s |S∩[1,1e6]|=%-7d last=%.6f" % (
        text[:40], exact_density(s), prefix_count(s, 10 ** 6), est.last))
