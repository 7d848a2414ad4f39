import sympy
from hypothesis import HealthCheck, settings, strategies as st

from detideals.exact_poly import Poly, VarId

settings.register_profile(
    "default", max_examples=40, deadline=None, suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("default")

EPS = sympy.Symbol("eps")


def sym(v: VarId) -> sympy.Symbol:
    return sympy.Symbol(str(v).replace("[", "_").replace("]", "").replace(",", "_"))


def to_sympy(p: Poly) -> sympy.Expr:
    out = sympy.Integer(0)
    for (mono, e), c in p.items():
        term = sympy.Rational(c) * EPS ** e
        for v, k in mono:
            term *= sym(v) ** k
        out += term
    return sympy.expand(out)


def xmat(n, m=None):
    m = n if m is None else m
    return [[Poly.var(VarId("x", (i, j))) for j in range(1, m + 1)] for i in range(1, n + 1)]


@st.composite
def polys(draw, n=3, m=3, max_degree=4, max_terms=5, family="x", coef=st.integers(-5, 5)):
    """Random polynomial in family[i,j], i <= n, j <= m."""
    terms = draw(st.integers(1, max_terms))
    out = Poly.zero()
    for _ in range(terms):
        c = draw(coef)
        deg = draw(st.integers(0, max_degree))
        mono = Poly.const(c)
        for _ in range(deg):
            i = draw(st.integers(1, n))
            j = draw(st.integers(1, m))
            mono = mono * Poly.var(VarId(family, (i, j)))
        out = out + mono
    return out


_acceptance_lines = []


def record_acceptance(line: str) -> None:
    _acceptance_lines.append(line)


def pytest_terminal_summary(terminalreporter):
    if _acceptance_lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(_acceptance_lines, key=lambda s: int(s.split()[1])):
            terminalreporter.write_line(line)
