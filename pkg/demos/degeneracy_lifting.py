"""How many conserved charges does it take to tell neighbors apart?

At the critical field the energy spectrum is massively degenerate, so
sorting by energy alone leaves long runs of tied adjacent states. Each
additional charge in the sort key splits more ties. This script prints
the tied-pair ratio r as a function of the number of keys for several
chain lengths, plus the average excited-mode-number difference between
adjacent states once all ties are gone.
"""

from fgdist.ising import (
    degeneracy_ratio,
    enumerate_spectrum,
    mode_number_difference,
    sort_spectrum,
)

for L in (7, 8, 11, 12):
    table = sort_spectrum(enumerate_spectrum(1.0, L))
    pairs = len(table) - 1
    print(f"L = {L}: {len(table)} states, {pairs} adjacent pairs at h = 1")
    for m in range(L):
        r = degeneracy_ratio(table, m)
        tied = round(r * pairs)
        bar = "#" * int(round(40 * r))
        print(f"  keys 0..{m}: r = {r:.4f}  ({tied:5d} tied) {bar}")
        if r == 0.0:
            print(f"  all ties resolved with {m + 1} keys")
            break
    print()

print("even chains need almost every charge, odd chains only the second one;")
print("the parity-paired structure of the odd-L spectrum is the reason.\n")

print("adjacent mode-number differences after the full hierarchical sort:")
for L in (8, 10, 12):
    table = sort_spectrum(enumerate_spectrum(1.0, L))
    print(f"  L = {L}: <dN> = {mode_number_difference(table):.4f}")
print("values stay far below 2, so neighbors differ by about one mode flip.")
