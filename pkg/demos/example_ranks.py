"""Tropical ranks of the two bundled examples and of bordered/padded variants."""
from tropbasis.rank import rank_with_witness, tropical_rank
from tropbasis.witness import border, example_matrix, pad

for name in ("A6", "C7"):
    M = example_matrix(name)
    res = rank_with_witness(M)
    print(f"{name}: tropical rank {res.rank}, nonsingular rows {res.rows}, cols {res.cols}")

A6 = example_matrix("A6")
B = border(A6, 4)
print(f"border(A6): shape {B.shape}, tropical rank {tropical_rank(B)}")
P = pad(example_matrix("C7"), 8, 9)
print(f"pad(C7, 8, 9): tropical rank {tropical_rank(P)}")
