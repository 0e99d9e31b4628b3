"""Rational approximation with guaranteed denominators.

For any real x and bound X there is a reduced fraction a/q with q <= X and
|x - a/q| <= 1/(qX).  When the slope vector is Diophantine-certified, the
denominators arising for the lattice frequencies j.c cannot be too small;
this is the lever that controls the exponential-sum estimates.
"""

from diophlab import (
    CVector,
    constant,
    dioph_certify,
    dirichlet_approx,
    inner_product,
)

print("Dirichlet approximations of sqrt(2):")
for big_x in (10, 100, 10**4, 10**6):
    a, q = dirichlet_approx(constant("sqrt2"), big_x)
    err = abs(constant("sqrt2").to_float() - a / q)
    print(f"  X={big_x:<8} a/q = {a}/{q:<8} |x-a/q| = {err:.3e} "
          f"<= 1/(qX) = {1.0/(q*big_x):.3e}")

print("\nfinite-range Diophantine certificates:")
for text, k, bound in (("phi", 1.0, 1000), ("sqrt2,sqrt3", 2.0, 60)):
    c = CVector.parse(text, k)
    cert = dioph_certify(c, bound)
    print(f"  c=({text}), k={k}: min dist(v.c)*|v|^k over |v|<={bound} "
          f"is {cert.c_est:.6f} at v={list(cert.v_min)}")

print("\ndenominator floor in action (c = (sqrt2, sqrt3), k = 2):")
c = CVector.parse("sqrt2,sqrt3", 2.0)
cert = dioph_certify(c, 50)
for j in ((1, 1), (3, -2), (10, 7)):
    x = inner_product(j, c)
    for big_x in (100, 10**4):
        a, q = dirichlet_approx(x, big_x)
        floor = (cert.c_est * big_x) ** 0.5 / max(abs(t) for t in j)
        print(f"  j={j} X={big_x:<6}: q = {q:<6} "
              f"(certified floor ~ {floor:.2f})")
