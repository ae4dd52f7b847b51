"""Standalone oracle for the initial weighted energy of the reference data.

Recomputes, independently of the package's stencils and quadrature, the
value frozen in test_diagnostics.TestEnergyInstant.test_oracle_value:

    e_inst(0) = S_2(v_t) + S_2(v_x) + S_2(u_x) + S_0(v) + S_0(u)

for the logarithmic law (K1 = 1, sigma = 1, A = -1), damping mu = 3, and
data (rho, u) = (1 + eps*b, eps*b) with b the unit bump and eps = 0.05.
All derivatives are exact (symbolic); integrals use a dense trapezoid on
the support.  Run:  python tests/oracle_energy.py
"""

import numpy as np
import sympy as sp

FROZEN = 178.3084350812718


def compute():
    x = sp.symbols("x", real=True)
    eps = sp.Rational(1, 20)
    b = sp.exp(1 - 1 / (1 - x**2))
    rho = 1 + eps * b
    u = eps * b
    v = 2 * (1 - 1 / sp.sqrt(rho))
    vx = sp.diff(v, x)
    ux = sp.diff(u, x)
    vt = -ux - u * vx + sp.Rational(1, 2) * v * ux

    xs = np.linspace(-1 + 1e-9, 1 - 1e-9, 2_000_001)

    def integral_sq(expr):
        f = sp.lambdify(x, expr, "numpy")
        with np.errstate(all="ignore"):
            vals = f(xs)
        vals = np.nan_to_num(np.asarray(vals, dtype=np.float64))
        return float(np.trapezoid(vals**2, xs))

    total = integral_sq(v) + integral_sq(u)
    for expr in (vt, vx, ux):
        for k in range(3):
            total += integral_sq(sp.diff(expr, x, k) if k else expr)
    return total


if __name__ == "__main__":
    value = compute()
    print(f"oracle  : {value!r}")
    print(f"frozen  : {FROZEN!r}")
    print(f"rel diff: {abs(value - FROZEN) / FROZEN:.3e}")
