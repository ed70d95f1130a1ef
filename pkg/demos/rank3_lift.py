"""Build and verify a rank-3 Puiseux lift of a 6x3 matrix with large column supports."""
from tropbasis.core import TropMatrix, format_matrix, pattern
from tropbasis.lift import classify_pattern_case, construct_lift_case_iii
from tropbasis.puiseux import format_k_matrix, rank_over_K

W = TropMatrix([[0, 0, 0], [2, 0, 0], [0, 1, 0], [0, 0, 0], [1, 0, 0], [0, 2, 2]])
print("matrix:")
print(format_matrix(W))
print("column supports:", [sorted(s) for s in pattern(W).supports()])
print("shape:", classify_pattern_case(W)[0])

lift = construct_lift_case_iii(W)
print("lift:")
print(format_k_matrix(lift.F))
print("degrees match:", lift.F.degrees() == W)
print("rank over K:", rank_over_K(lift.F))
