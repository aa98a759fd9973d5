"""Explicit rates: how many steps guarantee d(x_n, T x_n) < eps.

Every bound is computed twice, exactly with rationals and in floating point,
and the larger value is reported.  The certificate records which quantifier
it carries: some n below the bound, or every n from the bound on.

Run:  python3 demos/03_rates.py
"""

from ucwiter.iterate import ZeroModulus
from ucwiter.modulus import cat0_modulus, lp_modulus
from ucwiter.rates import RateInputs, h_certificate, phi_cat0, phi_factored, phi_main, theta_const

theta = theta_const(0.5)  # lambda = 1/2 gives theta(n) = 4n

c = h_certificate(1, 0, cat0_modulus(), 1, theta)
print(f"h:           bound {c.bound:>6}  ({c.guarantee}, branch {c.branch})")
inp = RateInputs(1, 1, cat0_modulus(), theta, ZeroModulus())
print(f"phi_main:    bound {phi_main(inp).bound:>6}  ({phi_main(inp).guarantee})")
print(f"factored:    bound {phi_factored(inp).bound:>6}  (uses eta = eps * eta_tilde)")
print(f"CAT(0) form: bound {phi_cat0(0.1, 1, 0.5, 1, 0, ZeroModulus()).bound:>6}  at eps = 0.1")

print("\nphi_main as eps shrinks, CAT(0) against the l4 modulus:")
for eps in (1.0, 0.3, 0.1, 0.03):
    a = phi_main(RateInputs(eps, 1, cat0_modulus(), theta, ZeroModulus())).bound
    b = phi_main(RateInputs(eps, 1, lp_modulus(4), theta, ZeroModulus())).bound
    print(f"  eps={eps:<5} cat0 {a:>12}   l4 {b:>14}")
