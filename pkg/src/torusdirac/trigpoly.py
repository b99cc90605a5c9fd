"""Arithmetic on finite complex Fourier series over the circle of period 2*pi.

A trigonometric polynomial of degree D is f(x) = sum_{|k| <= D} c_k e^{ikx}.
Every coefficient function in this package (metric entries, perturbation
matrices, operator symbols) is either such a polynomial or is recovered as
one from uniform grid samples by trapezoidal quadrature, which is exact for
band-limited input.

Degrees in this artifact are tiny (<= ~8), so coefficients are stored as a
dense array over k = -D..D and products are computed by direct convolution.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

#: Absolute coefficient tolerance used by equality / realness predicates.
COEFF_TOL = 1e-12


def grid_points(n: int) -> np.ndarray:
    """Uniform grid x_j = 2*pi*j/n, j = 0..n-1."""
    return 2.0 * np.pi * np.arange(n) / n


@dataclass(frozen=True)
class TrigPoly:
    """Immutable finite Fourier series sum_{|k| <= degree} c_k e^{ikx}.

    ``coeffs[k + degree]`` holds c_k. Instances are safe to share across
    threads; all operations return new objects.
    """

    coeffs: np.ndarray = field(default_factory=lambda: np.zeros(1, dtype=complex))

    def __post_init__(self):
        c = np.asarray(self.coeffs, dtype=complex)
        if c.ndim != 1 or c.size % 2 == 0:
            raise ValueError("coefficient array must be 1-d with odd length 2*D+1")
        c = c.copy()
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)

    # ------------------------------------------------------------------
    # constructors
    # ------------------------------------------------------------------

    @classmethod
    def zero(cls) -> "TrigPoly":
        return cls(np.zeros(1, dtype=complex))

    @classmethod
    def constant(cls, value: complex) -> "TrigPoly":
        return cls(np.array([value], dtype=complex))

    @classmethod
    def mode(cls, k: int, amplitude: complex = 1.0) -> "TrigPoly":
        """The single harmonic amplitude * e^{ikx}."""
        d = abs(k)
        c = np.zeros(2 * d + 1, dtype=complex)
        c[k + d] = amplitude
        return cls(c)

    @classmethod
    def cosine(cls, k: int, amplitude: float = 1.0) -> "TrigPoly":
        """amplitude * cos(kx)."""
        if k == 0:
            return cls.constant(amplitude)
        c = np.zeros(2 * k + 1, dtype=complex)
        c[0] = c[-1] = amplitude / 2.0
        return cls(c)

    @classmethod
    def sine(cls, k: int, amplitude: float = 1.0) -> "TrigPoly":
        """amplitude * sin(kx)."""
        if k == 0:
            return cls.zero()
        c = np.zeros(2 * k + 1, dtype=complex)
        c[-1] = amplitude / (2.0j)
        c[0] = -amplitude / (2.0j)
        return cls(c)

    @classmethod
    def from_samples(cls, values: np.ndarray, degree: int) -> "TrigPoly":
        """Degree-``degree`` series whose coefficients are the trapezoidal
        quadrature of (1/2pi) int e^{-ikx} f(x) dx on the sample grid.

        Exact whenever the sampled function is a trigonometric polynomial of
        degree <= ``degree`` and ``len(values) >= 2*degree + 2``.
        """
        values = np.asarray(values, dtype=complex)
        n = values.size
        if n < 2 * degree + 2:
            raise ValueError(
                f"{n} samples cannot resolve degree {degree}; need at least {2 * degree + 2}"
            )
        x = grid_points(n)
        k = np.arange(-degree, degree + 1)
        coeffs = np.exp(-1j * np.outer(k, x)) @ values / n
        return cls(coeffs)

    # ------------------------------------------------------------------
    # basic queries
    # ------------------------------------------------------------------

    @property
    def degree(self) -> int:
        return (self.coeffs.size - 1) // 2

    def fourier(self, m: int) -> complex:
        """Fourier coefficient c_m, zero when |m| exceeds the degree."""
        d = self.degree
        if abs(m) > d:
            return 0.0 + 0.0j
        return complex(self.coeffs[m + d])

    def mean(self) -> complex:
        """c_0, the average value over the circle."""
        return self.fourier(0)

    def evaluate(self, x) -> np.ndarray:
        """Evaluate at the points ``x`` (scalar or array)."""
        x = np.asarray(x, dtype=float)
        k = np.arange(-self.degree, self.degree + 1)
        return np.exp(1j * np.multiply.outer(x, k)) @ self.coeffs

    def is_real(self, tol: float = COEFF_TOL) -> bool:
        """True when c_{-k} = conj(c_k) for all k, so values are real."""
        return bool(np.all(np.abs(self.coeffs - np.conj(self.coeffs[::-1])) <= tol))

    def is_zero(self, tol: float = COEFF_TOL) -> bool:
        return bool(np.all(np.abs(self.coeffs) <= tol))

    def isclose(self, other: "TrigPoly", tol: float = COEFF_TOL) -> bool:
        """Coefficient-wise comparison at absolute tolerance ``tol``."""
        d = max(self.degree, other.degree)
        a = self._padded(d)
        b = other._padded(d)
        return bool(np.all(np.abs(a - b) <= tol))

    # ------------------------------------------------------------------
    # algebra
    # ------------------------------------------------------------------

    def _padded(self, degree: int) -> np.ndarray:
        pad = degree - self.degree
        if pad == 0:
            return self.coeffs
        return np.pad(self.coeffs, (pad, pad))

    def __add__(self, other):
        if isinstance(other, TrigPoly):
            d = max(self.degree, other.degree)
            return TrigPoly(self._padded(d) + other._padded(d))
        return self + TrigPoly.constant(other)

    __radd__ = __add__

    def __neg__(self):
        return TrigPoly(-self.coeffs)

    def __sub__(self, other):
        if isinstance(other, TrigPoly):
            return self + (-other)
        return self + TrigPoly.constant(-other)

    def __rsub__(self, other):
        return (-self) + TrigPoly.constant(other)

    def __mul__(self, other):
        if isinstance(other, TrigPoly):
            # discrete convolution of coefficients; degree adds
            return TrigPoly(np.convolve(self.coeffs, other.coeffs))
        return TrigPoly(self.coeffs * complex(other))

    __rmul__ = __mul__

    def derivative(self) -> "TrigPoly":
        """d/dx, i.e. c_k -> i k c_k."""
        k = np.arange(-self.degree, self.degree + 1)
        return TrigPoly(1j * k * self.coeffs)

    def conjugate(self) -> "TrigPoly":
        """Complex conjugate as a function: coefficients conj(c_{-k})."""
        return TrigPoly(np.conj(self.coeffs[::-1]))

    def truncated(self, degree: int) -> "TrigPoly":
        """Drop (or zero-pad to) coefficients outside |k| <= degree."""
        if degree >= self.degree:
            return TrigPoly(self._padded(degree))
        d = self.degree
        return TrigPoly(self.coeffs[d - degree : d + degree + 1])

    # ------------------------------------------------------------------
    # serialization: list of (k, re, im) triples, zeros omitted
    # ------------------------------------------------------------------

    def triples(self, tol: float = 0.0) -> list[tuple[int, float, float]]:
        out = []
        d = self.degree
        for k in range(-d, d + 1):
            c = self.coeffs[k + d]
            if abs(c) > tol or (tol == 0.0 and c != 0):
                out.append((k, float(c.real), float(c.imag)))
        return out

    @classmethod
    def from_triples(cls, triples) -> "TrigPoly":
        triples = list(triples)
        if not triples:
            return cls.zero()
        d = max(abs(int(k)) for k, _, _ in triples)
        c = np.zeros(2 * d + 1, dtype=complex)
        for k, re, im in triples:
            c[int(k) + d] += re + 1j * im
        return cls(c)

    def __repr__(self):
        terms = ", ".join(f"{k}: {re:g}{im:+g}j" for k, re, im in self.triples())
        return f"TrigPoly({{{terms or '0'}}})"


def parseval_product(p: TrigPoly, q: TrigPoly) -> complex:
    """(1/2pi) int p(x) conj(q(x)) dx as a finite coefficient sum."""
    d = max(p.degree, q.degree)
    return complex(np.sum(p._padded(d) * np.conj(q._padded(d))))


class Matrix3Field:
    """3x3 matrix whose entries are TrigPoly functions of x^1.

    Used for coframe perturbations, the metric, and the metric perturbation
    matrices. Immutable.
    """

    __slots__ = ("_entries",)

    def __init__(self, entries):
        rows = []
        for a in range(3):
            row = []
            for b in range(3):
                e = entries[a][b]
                if not isinstance(e, TrigPoly):
                    e = TrigPoly.constant(e)
                row.append(e)
            rows.append(tuple(row))
        self._entries = tuple(rows)

    @classmethod
    def zero(cls) -> "Matrix3Field":
        z = TrigPoly.zero()
        return cls([[z, z, z]] * 3)

    @classmethod
    def identity(cls) -> "Matrix3Field":
        z = TrigPoly.zero()
        one = TrigPoly.constant(1.0)
        return cls([[one if a == b else z for b in range(3)] for a in range(3)])

    def __getitem__(self, idx) -> TrigPoly:
        a, b = idx
        return self._entries[a][b]

    def entries(self):
        return self._entries

    @property
    def degree(self) -> int:
        return max(e.degree for row in self._entries for e in row)

    def __add__(self, other: "Matrix3Field") -> "Matrix3Field":
        return Matrix3Field(
            [[self[a, b] + other[a, b] for b in range(3)] for a in range(3)]
        )

    def __sub__(self, other: "Matrix3Field") -> "Matrix3Field":
        return Matrix3Field(
            [[self[a, b] - other[a, b] for b in range(3)] for a in range(3)]
        )

    def __mul__(self, scalar) -> "Matrix3Field":
        return Matrix3Field([[self[a, b] * scalar for b in range(3)] for a in range(3)])

    __rmul__ = __mul__

    def __matmul__(self, other: "Matrix3Field") -> "Matrix3Field":
        out = []
        for a in range(3):
            row = []
            for b in range(3):
                acc = TrigPoly.zero()
                for c in range(3):
                    acc = acc + self[a, c] * other[c, b]
                row.append(acc)
            out.append(row)
        return Matrix3Field(out)

    def transpose(self) -> "Matrix3Field":
        return Matrix3Field([[self[b, a] for b in range(3)] for a in range(3)])

    def derivative(self) -> "Matrix3Field":
        return Matrix3Field(
            [[self[a, b].derivative() for b in range(3)] for a in range(3)]
        )

    def det(self) -> TrigPoly:
        """Determinant, exact in coefficient arithmetic."""
        e = self._entries
        return (
            e[0][0] * (e[1][1] * e[2][2] - e[1][2] * e[2][1])
            - e[0][1] * (e[1][0] * e[2][2] - e[1][2] * e[2][0])
            + e[0][2] * (e[1][0] * e[2][1] - e[1][1] * e[2][0])
        )

    def fourier(self, m: int) -> np.ndarray:
        """3x3 array of entry coefficients at harmonic m."""
        return np.array([[self[a, b].fourier(m) for b in range(3)] for a in range(3)])

    def sample(self, x) -> np.ndarray:
        """Evaluate all entries on the points ``x``; shape (3, 3, len(x))."""
        x = np.asarray(x, dtype=float)
        return np.array(
            [[self[a, b].evaluate(x) for b in range(3)] for a in range(3)]
        )

    def is_symmetric(self, tol: float = COEFF_TOL) -> bool:
        return all(
            self[a, b].isclose(self[b, a], tol) for a in range(3) for b in range(a, 3)
        )

    def is_real(self, tol: float = COEFF_TOL) -> bool:
        return all(self[a, b].is_real(tol) for a in range(3) for b in range(3))

    def isclose(self, other: "Matrix3Field", tol: float = COEFF_TOL) -> bool:
        return all(
            self[a, b].isclose(other[a, b], tol) for a in range(3) for b in range(3)
        )

    def __repr__(self):
        return "Matrix3Field(" + repr([list(r) for r in self._entries]) + ")"
