"""Arbitrary-precision reference values frozen into the C++ tests.

Run with: python3 tests/oracles/reference_values.py
"""
from mpmath import mp, mpf, sqrt, sin, cos, acos, pi, cbrt

mp.dps = 50

# Hertz indentation of a rigid sphere, physical form
F, phi, R, E, nu = mpf("0.1"), mpf(0), mpf("3.5e-4"), mpf("3e9"), mpf("0.4")
h = (3 * (1 - nu**2) * F * cos(phi) / (4 * E * sqrt(R))) ** (mpf(2) / 3)
a = sqrt(R * h)
print("indentation h      =", mp.nstr(h, 20))
print("contact radius a   =", mp.nstr(a, 20))
print("contact area A_c   =", mp.nstr(pi * a**2, 20))
h_lit = (3 * E * F * cos(phi) / (4 * (1 - nu**2) * sqrt(R))) ** (mpf(2) / 3)
print("literal-form h     =", mp.nstr(h_lit, 20))

# Stable line width at the worked operating point
theta = mpf(40) * pi / 180
Q = mpf("0.0656") * mpf("1e-9")  # m^3/s
V = mpf("40") * mpf("1e-3")      # m/s
L = 2 * sin(theta) / sqrt(theta - sin(theta) * cos(theta)) * sqrt(Q / V)
print("line width L [m]   =", mp.nstr(L, 20))
print("deviation vs 126um =", mp.nstr((L - mpf("126e-6")) / mpf("126e-6"), 10))

# Young contact angle for cos(theta) = 0.478 / 0.624
th = acos(mpf("0.478") / mpf("0.624"))
print("young angle [rad]  =", mp.nstr(th, 20))
print("young angle [deg]  =", mp.nstr(th * 180 / pi, 20))

# Cross-section area at the worked point, mm^2
print("A [mm^2]           =", mp.nstr(mpf("0.0656") / 40, 20))

# Sliding ratio at the slip boundary for the indentation case, mu = 0.4
mu = mpf("0.4")
s = (4 - 3 * nu) / (4 * (1 - nu)) * mu * a / R
print("|s| at tan=mu      =", mp.nstr(s, 20))
