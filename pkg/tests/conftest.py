import math

import numpy as np
from scipy.optimize import brentq


def brute_roots(b, a, c, mu, span=60.0, n=24001):
    """Roots of b*sqrt(mu^2+s^2) - a*s - c by sign scan and brentq.

    Independent of the quadratic route used by the library.  Tangent
    double roots are caught by checking local minima of |g|.
    """

    def g(s):
        return b * math.hypot(mu, s) - a * s - c

    s = np.linspace(-span, span, n)
    vals = np.array([g(x) for x in s])
    roots = []
    for i in range(n - 1):
        if vals[i] == 0:
            roots.append(s[i])
        elif vals[i] * vals[i + 1] < 0:
            roots.append(brentq(g, s[i], s[i + 1], xtol=1e-14, rtol=1e-14))
    for i in range(1, n - 1):
        if abs(vals[i]) < 1e-6 and abs(vals[i]) <= abs(vals[i - 1]) and abs(vals[i]) <= abs(vals[i + 1]):
            if not any(abs(r - s[i]) < 1e-2 for r in roots):
                roots.append(s[i])
    return sorted(roots)


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(mod.RESULTS):
        terminalreporter.write_line(mod.RESULTS[num])
