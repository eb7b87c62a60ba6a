"""Reference values for the unit tests, computed independently of the C++ code.

Run with `python3 oracles.py`; the printed numbers are frozen into
tests/unit/oracle_values.hpp. Needs sympy and mpmath.
"""

import mpmath as mp
import sympy as sp

mp.mp.dps = 40
G = mp.mpf("9.80665")


def header(name):
    print(f"\n// {name}")


def emit(name, value):
    print(f"inline constexpr double {name} = {mp.nstr(mp.mpf(value), 17, strip_zeros=False)};")


# Equations of motion at a generic state.
def eom():
    rho, lam, gE, aE, gP, aP, u, v = sp.symbols("rho lambda gamma_E a_E gamma_P a_P u v")
    VP, VE, tP, tE = 2500, 2500, sp.Rational(1, 5), sp.Rational(1, 5)
    aPmax = 45 * sp.Rational("9.80665")
    aEmax = 20 * sp.Rational("9.80665")
    dP = gP - lam
    dE = gE + lam
    Vr = -(VP * sp.cos(dP) + VE * sp.cos(dE))
    Vl = -VP * sp.sin(dP) + VE * sp.sin(dE)
    rates = [Vr, Vl / rho, aE / VE, (aEmax * v - aE) / tE, aP / VP, (aPmax * u - aP) / tP]
    point = {rho: 12000, lam: sp.Rational(16, 10), gE: sp.Rational(-15, 10), aE: -150,
             gP: sp.Rational(155, 100), aP: 100, u: sp.Rational(3, 10), v: -1}
    header("derivatives at rho 12000, lambda 1.6, gamma_E -1.5, a_E -150, gamma_P 1.55, a_P 100, u 0.3, v -1")
    for name, r in zip(["rho", "lambda", "gamma_E", "a_E", "gamma_P", "a_P"], rates):
        emit(f"kRate_{name}", sp.N(r.subs(point), 30))
    # Oblique time to go from the same state.
    emit("kTgoOblique", sp.N(-point[rho] / Vr.subs(point), 30))


def psi(t):
    return mp.e ** (-t) + t - 1


def a_func(t, a1, a2, b1, b2, w, eps):
    t = mp.mpf(t)
    d1 = a1 + b1 * t ** w
    d2 = a2 + b2 * t ** w
    g1 = b1 * w * t ** (w - 1) if b1 != 0 else mp.mpf(0)
    g2 = b2 * w * t ** (w - 1) if b2 != 0 else mp.mpf(0)
    return (d1 + t * (1 + g1) + eps * mp.e ** (-(t + d2) / eps) * (1 + g2)
            - eps * mp.e ** (-d2 / eps) * g2 + mp.e ** ((d1 - d2) / eps) * (t * (g2 - g1) - eps))


def r_func(t, mu, *args):
    return mu * psi(mp.mpf(t)) - a_func(t, *args)


def first_root(f, hi=20, n=20000):
    prev = f(mp.mpf(hi) / n)
    for j in range(2, n + 1):
        t = mp.mpf(hi) * j / n
        cur = f(t)
        if mp.sign(cur) != mp.sign(prev):
            return mp.findroot(f, (mp.mpf(hi) * (j - 1) / n, t), solver="anderson")
        prev = cur
    return None


def sign_changes(f, hi=20, n=20000):
    out = []
    prev = f(mp.mpf(hi) / n)
    for j in range(2, n + 1):
        t = mp.mpf(hi) * j / n
        cur = f(t)
        if mp.sign(cur) != mp.sign(prev):
            out.append(mp.findroot(f, (mp.mpf(hi) * (j - 1) / n, t), solver="anderson"))
        prev = cur
    return out


def game():
    header("scenario-like delays a = 0.05, b1 = 0.15, b2 = 0.3, omega = 1/3, mu = 2.25, eps = 1")
    args = (mp.mpf("0.05"), mp.mpf("0.05"), mp.mpf("0.15"), mp.mpf("0.3"), mp.mpf(1) / 3, mp.mpf(1))
    mu = mp.mpf("2.25")
    for t in ["0.5", "1", "3", "10"]:
        emit(f"kA_{t.replace('.', 'p')}", a_func(mp.mpf(t), *args))
    f = lambda t: r_func(t, mu, *args)
    ts = first_root(f, hi=20, n=4000)
    emit("kTauS", ts)
    emit("kGuaranteedMiss", mp.quad(lambda t: -f(t), [0, ts]))
    emit("kBoundaryAt3", mp.quad(f, [ts, 3]))

    header("zero delays, mu = 1.5, eps = 0.5 (mu eps < 1, so the DGL1 singular onset is positive)")
    z = lambda t: mp.mpf("1.5") * psi(t) - mp.mpf("0.5") * psi(t / mp.mpf("0.5"))
    emit("kTauSDgl1", first_root(z, hi=20, n=4000))

    header("DGLC constant delay 0.3 s (1.5 normalized), Delta_1 = 0, mu = 2.25, eps = 1")
    c = lambda t: r_func(t, mu, mp.mpf(0), mp.mpf("1.5"), mp.mpf(0), mp.mpf(0), mp.mpf(1), mp.mpf(1))
    emit("kTauSDglc", first_root(c, hi=20, n=4000))

    header("two sign changes, a = 0.03, b1 = 0.2625, b2 = 0.3, omega = 2/3, eps = 2, mu = 1.1")
    roots = sign_changes(lambda t: r_func(t, mp.mpf("1.1"), mp.mpf("0.03"), mp.mpf("0.03"),
                                          mp.mpf("0.2625"), mp.mpf("0.3"), mp.mpf(2) / 3,
                                          mp.mpf(2)), hi=20, n=2000)
    for i, r in enumerate(roots):
        emit(f"kMultiRoot{i}", r)


def delays():
    header("detection-delay model")
    b = mp.cbrt(6 * mp.mpf("0.2") * 2 * 5000 * mp.mpf("5e-4") / (40 * G))
    emit("kAnalyticB", b)
    emit("kAnalyticTheta3", mp.mpf("0.01") + b * mp.cbrt(3))
    emit("kPropagatedHalf", mp.mpf("0.01") + mp.mpf("0.25") * mp.cbrt(mp.mpf("0.5")))


if __name__ == "__main__":
    print("#pragma once\n\n// Generated by tests/oracles/oracles.py.\n\nnamespace oracle {")
    eom()
    game()
    delays()
    print("\n}  // namespace oracle")
