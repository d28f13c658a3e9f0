"""Independent numpy/scipy reference values for the unit tests.

Everything here is re-derived from the linearised quadrature model with dense
numpy tools (scipy Lyapunov solver, numpy polynomial roots, explicit matrix
inverses). The printed numbers are frozen into tests/*.cpp.

    python3 tests/oracle/optomech_oracle.py
"""
import numpy as np
import scipy.linalg as sl

HBAR = 1.054571817e-34
C = 299792458.0
WM = 2 * np.pi * 10e6


def scenario(J=0.0, PR=0.0, delta=1.0, da=0.0, kc=0.1, ka=0.1, gm=1e-5, nbar=1e3, PL=30e-3):
    wc, L, m, lam = 2.817e7 * WM, 0.5e-3, 250e-12, 1064e-9
    w_drive = 2 * np.pi * C / lam
    g0 = (wc / L) * np.sqrt(HBAR / (m * WM)) / WM
    ol = np.sqrt(2 * PL * kc * WM / (HBAR * w_drive)) / WM
    orr = np.sqrt(2 * PR * ka * WM / (HBAR * w_drive)) / WM
    return dict(J=J, delta=delta, da=da, kc=kc, ka=ka, gm=gm, nbar=nbar, g0=g0, ol=ol, orr=orr)


def amplitudes(p, delta):
    m = np.array([[p['kc'] + 1j * delta, 1j * p['J']], [1j * p['J'], p['ka'] + 1j * p['da']]])
    return np.linalg.solve(m, np.array([-1j * p['ol'], -1j * p['orr']]))


def drift(p, delta=None):
    delta = p['delta'] if delta is None else delta
    ac, _ = amplitudes(p, delta)
    s = np.sqrt(2) * p['g0'] * abs(ac)
    kc, ka, da, J, gm = p['kc'], p['ka'], p['da'], p['J'], p['gm']
    a = np.array([[-kc, delta, 0, J, 0, 0], [-delta, -kc, -J, 0, s, 0], [0, J, -ka, da, 0, 0],
                  [-J, 0, -da, -ka, 0, 0], [0, 0, 0, 0, 0, 1], [s, 0, 0, 0, -1, -gm]])
    q = np.diag([kc, kc, ka, ka, 0, gm * (2 * p['nbar'] + 1)])
    return a, q, s / np.sqrt(2)


def covariance(p):
    a, q, _ = drift(p)
    return sl.solve_continuous_lyapunov(a, -q)


def log_neg(v, i, j):
    idx = [2 * i, 2 * i + 1, 2 * j, 2 * j + 1]
    w = v[np.ix_(idx, idx)]
    # symplectic eigenvalues of the partial transpose from |eig(i Omega V_PT)|
    flip = np.diag([1, 1, 1, -1])
    om = np.kron(np.eye(2), np.array([[0, 1], [-1, 0]]))
    nu = np.min(np.abs(np.linalg.eigvals(1j * om @ flip @ w @ flip)))
    return max(0.0, -np.log(2 * nu))


def gamma_eff(p, w):
    a, _, _ = drift(p)
    t = np.linalg.inv(-1j * w * np.eye(6) - a)
    return -np.imag(1 / t[4, 5]) / w


def root_count(PL, J, PR, dc=1.0, da=-1.0):
    p = scenario(J=J, PR=PR, PL=PL, da=da)
    ys = np.linspace(-5, 5, 200001)
    # f(y) = y - g0^2 |alpha_c(Delta_c - y)|^2 sampled densely; sign changes are roots
    f = np.array([y - p['g0'] ** 2 * abs(amplitudes(p, dc - y)[0]) ** 2 for y in ys])
    return int(np.sum(np.sign(f[1:]) != np.sign(f[:-1])))


def main():
    p = scenario()
    print('g0 %.15e  Omega_L %.15e' % (p['g0'], p['ol']))
    configs = {
        'unassisted': scenario(),
        'assisted': scenario(J=0.15, PR=50e-3),
        'detuned': scenario(J=0.3, PR=20e-3, da=-0.4, ka=0.07),
    }
    for name, c in configs.items():
        v = covariance(c)
        _, _, g = drift(c)
        print('%-10s |G| %.15e  n_f %.15e  Vqq %.15e  Vpp %.15e' % (name, g, 0.5 * (v[4, 4] + v[5, 5] - 1), v[4, 4], v[5, 5]))
        print('%-10s Gamma_eff(1) %.15e  Gamma_eff(0.7) %.15e' % (name, gamma_eff(c, 1.0), gamma_eff(c, 0.7)))
    for name, c in [('unassisted', scenario(nbar=0, ka=0.05)), ('assisted', scenario(nbar=0, ka=0.05, J=0.15, PR=50e-3))]:
        v = covariance(c)
        print('%-10s nbar=0 ka=0.5kc  E_cb %.15e  E_ab %.15e  E_ac %.15e' % (name, log_neg(v, 0, 2), log_neg(v, 1, 2), log_neg(v, 0, 1)))
    for PL in (20e-3, 50e-3):
        print('J=0.15 P_R=0 Delta_c=1 Delta_a=-1 P_L=%g: %d roots' % (PL, root_count(PL, 0.15, 0.0)))


if __name__ == '__main__':
    main()
