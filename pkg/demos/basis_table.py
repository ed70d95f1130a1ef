"""Print the (d, n) grid for each r, marking where the r x r minors fail to be a tropical basis."""
from tropbasis.witness import basis_table

table = basis_table()
for r in range(1, 11):
    sizes = [(d, n) for (d, n, rr) in table if rr == r]
    if not sizes:
        continue
    print(f"r = {r}")
    print("      " + " ".join(f"{n:>2}" for n in range(r, 11)))
    for d in range(r, 11):
        row = " ".join(f"{'.' if table[(d, n, r)] else 'X':>2}" for n in range(r, 11))
        print(f"  {d:>2}  {row}")
failures = sum(1 for v in table.values() if not v)
print(f"{failures} of {len(table)} triples are not tropical bases (X)")
