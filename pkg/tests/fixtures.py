"""Frozen regression values.

EPS_STAR[n][r] is the exact minimax error of the degree-r approximation of the
OR predicate on {0..n}, for r = 0..min(n, 12).  Produced by the exact solver;
test_lpcore re-derives the n=16 row with a floating-point LP.
"""

from fractions import Fraction as F

EPS_STAR = {
    10: [F(1, 2), F(9, 20), F(1, 3), F(3, 14), F(4, 33), F(9, 130), F(1, 33), F(7, 590), F(1, 252), F(1, 1024), F(0)],
    16: [
        F(1, 2), F(15, 32), F(7, 18), F(7, 24), F(65, 322), F(325, 2552), F(49, 582),
        F(243, 4816), F(35, 1342), F(429, 30808), F(35, 5746), F(135, 56252), F(1, 1066),
    ],
    25: [
        F(1, 2), F(12, 25), F(72, 169), F(432, 1225), F(512, 1869), F(1024, 5015), F(152064, 1045603),
        F(13167, 128750), F(898909, 12776448), F(9639, 205250), F(40964, 1476553), F(2584, 150075),
        F(7997616, 808888697),
    ],
    30: [
        F(1, 2), F(29, 60), F(7, 16), F(203, 544), F(55, 182), F(88711, 377600), F(63, 356),
        F(21505, 173312), F(84, 899), F(229075, 3492228), F(2093, 46864), F(1384416, 50500723),
        F(3468465, 195068326),
    ],
    36: [
        F(1, 2), F(35, 72), F(17, 38), F(119, 304), F(325, 992), F(23345, 88576), F(308, 1501),
        F(1414189, 9040518), F(184382, 1598875), F(1678495, 19140608), F(86230375, 1366065097),
        F(7920625, 178348989), F(889940480, 31397306509),
    ],
}

# Largest r with eps*(n, r) >= 1/3.
THIRD_THRESHOLD = {16: 2, 25: 3, 36: 3}
