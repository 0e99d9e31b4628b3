"""Two classical tools made concrete: the sawtooth approximation and the
four-term decomposition of the von Mangoldt function.

The degree-J trigonometric polynomial approximates psi(x) = x - [x] - 1/2
with a nonnegative error majorant whose mean is 1/(2J+2); the decomposition
splits Lambda(n) into head, smooth, and bilinear parts that sum back exactly.
"""

import numpy as np

from diophlab import VaalerPolynomial, VaughanParams, build_arith_table
from diophlab.fourier import sawtooth_array
from diophlab.vaughan import vaughan_decompose

print("sawtooth approximation quality by degree:")
xs = (np.arange(20000) + 0.5) / 20000
for degree in (1, 5, 10, 50):
    poly = VaalerPolynomial.build(degree)
    err = np.abs(poly.psi_star(xs) - sawtooth_array(xs))
    tau = poly.tau(xs)
    print(f"  J={degree:<3} max|psi*-psi|={err.max():.5f}  max tau={tau.max():.5f}"
          f"  mean tau={tau.mean():.5f}  (1/(2J+2)={1/(2*degree+2):.5f})")
print("the error is pointwise dominated by the majorant, never just on average\n")

table = build_arith_table(10**4)
params = VaughanParams(u=10.0, v=10.0, x=10**4)
print("four-term decomposition (terms sum to Lambda(n)):")
for n in (9973, 9972, 8192, 660):
    a1, a2, a3, a4 = vaughan_decompose(table, n, params)
    lam = table.von_mangoldt(n)
    print(f"  n={n:<6} a1={a1:9.5f} a2={a2:9.5f} a3={a3:9.5f} a4={a4:9.5f}"
          f"  sum={a1+a2+a3+a4:9.5f}  Lambda={lam:9.5f}")
print("\nFor n prime above both split points only the smooth log term")
print("survives; composite n cancel to zero through the bilinear tail.")
