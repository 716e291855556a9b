"""Independent reference values for the unit and acceptance tests.

Run with python3; prints C++ literals that are pasted into the tests.
SDP values use cvxpy/Clarabel, special functions use mpmath at 50 digits.
"""
import numpy as np
import cvxpy as cp
import mpmath as mp

mp.mp.dps = 50
rng = np.random.default_rng(20240611)


def rand_state(d, rank=None):
    k = rank or d
    g = rng.normal(size=(d, k)) + 1j * rng.normal(size=(d, k))
    r = g @ g.conj().T
    r = r / np.trace(r).real
    return np.round(r, 12)


def fix(r):
    r = (r + r.conj().T) / 2
    return r / np.trace(r).real


def cpp(name, m):
    rows = []
    for i in range(m.shape[0]):
        rows.append(", ".join(f"{{{m[i, j].real:.12g}, {m[i, j].imag:.12g}}}" for j in range(m.shape[1])))
    print(f"const Matrix {name} = mat({m.shape[0]}, {{" + ",\n    ".join(rows) + "});")


def ptrace_a(x, da, db):
    return np.einsum("ajak->jk", x.reshape(da, db, da, db))


def hmin(rho, da, db):
    s = cp.Variable((db, db), hermitian=True)
    prob = cp.Problem(cp.Minimize(cp.real(cp.trace(s))), [cp.kron(np.eye(da), s) - rho >> 0])
    prob.solve(solver=cp.CLARABEL, tol_gap_abs=1e-12, tol_gap_rel=1e-12, tol_feas=1e-12)
    return -np.log2(prob.value)


def hmax(rho, da, db):
    d = da * db
    s = cp.Variable((db, db), hermitian=True)
    x = cp.Variable((d, d), complex=True)
    blk = cp.bmat([[rho, x], [x.H, cp.kron(np.eye(da), s)]])
    prob = cp.Problem(cp.Maximize(cp.real(cp.trace(x))),
                      [(blk + blk.H) / 2 >> 0, cp.real(cp.trace(s)) == 1])
    prob.solve(solver=cp.CLARABEL, tol_gap_abs=1e-12, tol_gap_rel=1e-12, tol_feas=1e-12)
    return 2 * np.log2(prob.value)


def hmin_smooth(rho, da, db, eps):
    d = da * db
    s = cp.Variable((db, db), hermitian=True)
    rt = cp.Variable((d, d), hermitian=True)
    x = cp.Variable((d, d), complex=True)
    blk = cp.bmat([[rt, x], [x.H, rho]])
    prob = cp.Problem(cp.Minimize(cp.real(cp.trace(s))),
                      [cp.kron(np.eye(da), s) - rt >> 0, rt >> 0, (blk + blk.H) / 2 >> 0,
                       cp.real(cp.trace(x)) >= np.sqrt(1 - eps ** 2),
                       cp.real(cp.trace(rt)) <= 1])
    prob.solve(solver=cp.CLARABEL, tol_gap_abs=1e-12, tol_gap_rel=1e-12, tol_feas=1e-12)
    return -np.log2(prob.value)


def dmax_smooth(rho, omega, eps):
    d = rho.shape[0]
    t = cp.Variable()
    rt = cp.Variable((d, d), hermitian=True)
    x = cp.Variable((d, d), complex=True)
    blk = cp.bmat([[rt, x], [x.H, rho]])
    prob = cp.Problem(cp.Minimize(t),
                      [t * omega - rt >> 0, rt >> 0, (blk + blk.H) / 2 >> 0,
                       cp.real(cp.trace(x)) >= np.sqrt(1 - eps ** 2),
                       cp.real(cp.trace(rt)) <= 1])
    prob.solve(solver=cp.CLARABEL, tol_gap_abs=1e-12, tol_gap_rel=1e-12, tol_feas=1e-12)
    return np.log2(prob.value)


def logm2(r):
    w, v = np.linalg.eigh(r)
    lw = np.array([np.log2(x) if x > 1e-15 else 0.0 for x in w])
    return (v * lw) @ v.conj().T


def rel_ent_var(rho, sigma):
    l = logm2(rho) - logm2(sigma)
    dd = np.trace(rho @ l).real
    return dd, np.trace(rho @ l @ l).real - dd ** 2


def h2(p):
    return float(-p * mp.log(p, 2) - (1 - p) * mp.log(1 - p, 2))


print("// states")
R1 = fix(rand_state(4))
cpp("kR1", R1)
R2 = fix(rand_state(4))
cpp("kR2", R2)
print(f"constexpr double kHminR1 = {hmin(R1, 2, 2):.15g};")
print(f"constexpr double kHmaxR1 = {hmax(R1, 2, 2):.15g};")
print(f"constexpr double kHminSmoothR1 = {hmin_smooth(R1, 2, 2, 0.3):.15g};  // eps 0.3")
R6 = fix(rand_state(6))
cpp("kR6", R6)
print(f"constexpr double kHminR6 = {hmin(R6, 2, 3):.15g};")
print(f"constexpr double kHmaxR6 = {hmax(R6, 2, 3):.15g};")

print("// D_max pair")
P = fix(rand_state(3))
W = fix(rand_state(3))
cpp("kDmaxRho", P)
cpp("kDmaxOmega", W)
w = np.linalg.eigvalsh(W)
ws = np.linalg.inv(np.linalg.cholesky(W))
print(f"constexpr double kDmaxPlain = {np.log2(np.max(np.linalg.eigvalsh(ws @ P @ ws.conj().T))):.15g};")
print(f"constexpr double kDmaxSmooth005 = {dmax_smooth(P, W, 0.05):.15g};")

print("// qubit pair for the second-order rhs")
A = fix(rand_state(2))
B = fix(rand_state(2))
cpp("kPairRho", A)
cpp("kPairSigma", B)
dd, vv = rel_ent_var(A, B)
q = mp.sqrt(2) * mp.erfinv(2 * mp.mpf("0.09") - 1)
print(f"constexpr double kPairD = {dd:.17g};")
print(f"constexpr double kPairV = {vv:.17g};")
print(f"constexpr double kPairRhs = {float(100 * dd - mp.sqrt(100 * vv) * q):.17g};  // n 100, eps 0.3")

print("// inverse normal cdf")
for p in ["1e-9", "1e-6", "0.0001", "0.0025", "0.01", "0.09", "0.25", "0.5", "0.7", "0.975", "0.999999"]:
    val = mp.sqrt(2) * mp.erfinv(2 * mp.mpf(p) - 1)
    print(f"    {{{p}, {mp.nstr(val, 20)}}},")

print("// dephasing(0.2), sigma = I/2")
p = 0.2
print(f"constexpr double kDephIc = {1 - h2(mp.mpf('0.2')):.17g};")
# omega on A_R B: canonical purification of I/2 is the Bell state
bell = np.zeros(4); bell[0] = bell[3] = 1 / np.sqrt(2)
phi = np.outer(bell, bell)
Z = np.diag([1.0, -1.0])
IZ = np.kron(np.eye(2), Z)
om = (1 - p) * phi + p * IZ @ phi @ IZ
omb = ptrace_a(om, 2, 2)
dd, vv = rel_ent_var(om, np.kron(np.eye(2), omb))
print(f"constexpr double kDephV = {vv:.17g};")
qq = mp.sqrt(2) * mp.erfinv(2 * mp.mpf("0.0025") - 1)
print(f"constexpr double kDephSecond64 = {float((1 - h2(mp.mpf('0.2'))) - mp.sqrt(vv / 64) * qq):.17g};  // eps 0.5")

print("// holevo of {|0>, |+>}")
print(f"constexpr double kHolevoZeroPlus = {h2((1 + 1 / mp.sqrt(2)) / 2):.17g};")

print("// classical relative entropy")
pp = np.array([0.5, 0.3, 0.2]); qv = np.array([0.25, 0.25, 0.5])
dcl = float(sum(mp.mpf(a) * mp.log(mp.mpf(a) / mp.mpf(b), 2) for a, b in zip(pp, qv)))
vcl = float(sum(mp.mpf(a) * mp.log(mp.mpf(a) / mp.mpf(b), 2) ** 2 for a, b in zip(pp, qv))) - dcl ** 2
print(f"constexpr double kClassicalD = {dcl:.17g};")
print(f"constexpr double kClassicalV = {vcl:.17g};")

print("// identification")
g = mp.mpf("0.8")
print(f"constexpr double kSimId100 = {float(1 + (mp.log(2304 / g ** 2, 2) + mp.log(mp.log(120 / g, 2), 2)) / 100):.17g};")
print(f"constexpr double kNet8 = {float(16 * mp.log(50, 2)):.17g};")
