"""Independent high-precision reference values for the C++ test suite.

Evaluates the closed forms with mpmath at 50 digits, without sharing any code
with the library. Run: python3 freeze_values.py
"""
import mpmath as mp

mp.mp.dps = 50


def xi(delta, zeta):
    return mp.exp(-zeta / (1j * delta + 1))


def matrix(delta, zeta, eta):
    x = xi(delta, zeta)
    loss = (eta / zeta) * (1 - x)
    return [[1 - loss, -loss], [-(1 - x), x]]


def theta_plus(m):
    th = mp.arg(m[1][0] / m[1][1]) + mp.arg(m[0][1] / m[0][0])
    th = mp.atan2(mp.sin(th), mp.cos(th))
    return th


def g2_coherent_magnon(t2, r2, tau2, rho2, theta, a2, p1, g2m):
    # Exact product-state moments of a coherent probe against
    # sqrt(p0)|0> + sqrt(p1)|1> + sqrt(p2)|2>.
    p2 = g2m * p1**2 / 2
    nb = p1 + 2 * p2
    self_a = t2 * r2 * a2**2
    self_b = tau2 * rho2 * 2 * p2
    classical = (t2 * tau2 + r2 * rho2) * a2 * nb
    quantum = 2 * mp.cos(theta) * mp.sqrt(t2 * r2 * tau2 * rho2) * a2 * nb
    return 1 + quantum / (self_a + self_b + classical)


def g2_approx_form(t2, r2, tau2, rho2, theta, a2, p1, g2m):
    p2 = g2m * p1**2 / 2
    p0 = 1 - p1 - p2
    A = t2 * r2 * p0 / p1
    B = tau2 * rho2 * g2m * p1
    C = t2 * tau2 + r2 * rho2
    return 1 + 2 * mp.cos(theta) * mp.sqrt(t2 * r2 * tau2 * rho2) / (A * a2 + B / a2 + C)


def show(name, v):
    if isinstance(v, mp.mpc):
        print(f"{name} = ({mp.nstr(v.real, 20)}, {mp.nstr(v.imag, 20)})")
    else:
        print(f"{name} = {mp.nstr(v, 20)}")


show("xi(-50/3, 2)", xi(mp.mpf(-50) / 3, 2))
show("xi(0, 1)", xi(0, 1))
m = matrix(mp.mpf(-10) / 3, mp.mpf(17), 30)
show("theta_plus(-10/3, 17, 30)", theta_plus(m))
on = (0.025, 0.030, 0.025, 0.035, 0)
off = (0.108, 0.489, 0.017, 0.045, mp.pi)
show("g2 exact on @0.05", g2_coherent_magnon(*map(mp.mpf, on[:4]), on[4], mp.mpf("0.05"), mp.mpf("0.167"), mp.mpf("0.118")))
show("g2 approx on @0.05", g2_approx_form(*map(mp.mpf, on[:4]), on[4], mp.mpf("0.05"), mp.mpf("0.167"), mp.mpf("0.118")))
show("g2 exact off @0.5", g2_coherent_magnon(*map(mp.mpf, off[:4]), off[4], mp.mpf("0.5"), mp.mpf("0.172"), mp.mpf("0.170")))
show("g2 approx off @0.5", g2_approx_form(*map(mp.mpf, off[:4]), off[4], mp.mpf("0.5"), mp.mpf("0.172"), mp.mpf("0.170")))
f = lambda a2: g2_approx_form(*map(mp.mpf, on[:4]), on[4], a2, mp.mpf("0.167"), mp.mpf("0.118")) - mp.mpf("1.5")
show("on crossing low", mp.findroot(f, (0.005, 0.03), solver="anderson"))
show("on crossing high", mp.findroot(f, (0.2, 0.6), solver="anderson"))
A = mp.mpf(0.108) * mp.mpf(0.489) * (1 - mp.mpf(0.172) - mp.mpf(0.170) * mp.mpf(0.172) ** 2 / 2) / mp.mpf(0.172)
B = mp.mpf(0.017) * mp.mpf(0.045) * mp.mpf(0.170) * mp.mpf(0.172)
show("off stationary alpha2", mp.sqrt(B / A))
show("off minimum g2", g2_approx_form(*map(mp.mpf, off[:4]), off[4], mp.sqrt(B / A), mp.mpf("0.172"), mp.mpf("0.170")))
