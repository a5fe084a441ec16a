"""Reference values frozen into the Rust tests (mpmath, 30 digits)."""
from mpmath import mp, besselj, besseljzero, quad, pi, sqrt, gamma, mpf, cos, acos, sin

mp.dps = 30

ORDERS = [mpf(-1) / 2, 0, mpf(1) / 2, 1, mpf(3) / 2, 2]
XS = [mpf("0.001"), mpf("0.5"), mpf("1"), mpf("2.5"), mpf("3.8317059702"), mpf("7.3"),
      mpf("11.5"), mpf("12.5"), mpf("20"), mpf("37.7"), mpf("99")]

print("// bessel_j(nu, x)")
for nu in ORDERS:
    for x in XS:
        print(f"({float(2*nu):.0f}, {float(x)!r}, {mp.nstr(besselj(nu, x), 20)}),")

print("// first zeros")
print(-0.5, mp.nstr(pi / 2, 25))
for nu in ORDERS[1:]:
    print(float(nu), mp.nstr(besseljzero(nu, 1), 25))

def radial(d):
    nu = mpf(d) / 2 - 1
    j = besseljzero(mpf(d) / 2, 1)
    R = j / (2 * pi)
    lam = lambda z: besselj(nu, z) / z**nu if z != 0 else 1 / (2**nu * gamma(nu + 1))
    c = lam(j)
    phi = lambda r: 1 - lam(2 * pi * r) / c
    area = 2 * pi ** (mpf(d) / 2) / gamma(mpf(d) / 2)
    int_phi = area * quad(lambda r: phi(r) * r ** (d - 1), [0, R])
    int_phi2 = area * quad(lambda r: phi(r) ** 2 * r ** (d - 1), [0, R])
    lam1 = lambda z: besselj(nu + 1, z) / z ** (nu + 1) if z != 0 else 1 / (2 ** (nu + 1) * gamma(nu + 2))
    dphi = lambda r: 2 * pi * (2 * pi * r) * lam1(2 * pi * r) / c
    int_grad2 = area * quad(lambda r: dphi(r) ** 2 * r ** (d - 1), [0, R])
    return R, phi(0), int_phi, int_phi2, int_grad2, phi

for d in (1, 2, 3):
    R, p0, i1, i2, g2, phi = radial(d)
    print(f"d={d} R={mp.nstr(R,20)} phi0={mp.nstr(p0,20)} int_phi={mp.nstr(i1,20)} "
          f"int_phi2={mp.nstr(i2,20)} int_grad2={mp.nstr(g2,20)}")

# autocorrelation in d=2 at a few radii (polar double integral)
mp.dps = 20
R, p0, i1, i2, g2, phi = radial(2)
def h2(r):
    def outer(rho):
        if rho == 0:
            return 0
        c = (r * r + rho * rho - R * R) / (2 * r * rho)
        if c >= 1:
            return 0
        th = pi if c <= -1 else acos(c)
        inner = quad(lambda t: phi(sqrt(r * r + rho * rho - 2 * r * rho * cos(t))), [0, th])
        return 2 * rho * phi(rho) * inner
    pts = sorted(set([0, R] + ([abs(R - r)] if abs(R - r) < R else [])))
    return quad(outer, pts)
for r in (mpf("0.1"), mpf("0.4"), mpf("0.9")):
    print(f"h2({r}) = {mp.nstr(h2(r), 16)}")
