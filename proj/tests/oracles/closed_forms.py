"""Reference values for rate, noise, path-loss and penalty formulas (mpmath, 40 digits)."""
from mpmath import mp, mpf, log, sqrt

mp.dps = 40


def log2(x):
    return log(x, 2)


def pair_rate(hm, hn, pm, pn, wm, wn):
    return wm * log2(1 + hm * pm / (hm * pn + 1)) + wn * log2(1 + hn * pn)


print("pair_rate(1,3,2,1,1,1) =", pair_rate(1, 3, 2, 1, 1, 1))
print("pair_rate(1,3,2,1,0.5,1) =", pair_rate(1, 3, 2, 1, mpf("0.5"), 1))
print("oma_rate(1,3,1) =", log2(4))
print("eta(45 dBm, -128 dBm) =", 10 * log2(1 + mpf(10) ** mpf("17.3")))
print("gradG at origin =", -1 / log(2))
print("pathloss(10 m) =", mpf(10) ** mpf("-6.6"))
print("pathloss doubling ratio =", mpf(2) ** mpf("-3.6"))
print("noise(-128 dBm) =", mpf(10) ** mpf("-15.8"))
print("projection z=(2,2) lambda =", 1 / sqrt(2))
print("projection z=(2,2) b =", sqrt(2) - 1)
