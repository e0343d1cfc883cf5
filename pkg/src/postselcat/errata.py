"""Append-only log of closed-form values that disagree with the numerical oracle.

File format (UTF-8, ``\\n`` line endings, tab separated)::

    # postselcat errata v1
    alpha_abs	delta	omega	theta	phi	gamma	quantity	paper_value	oracle_value	rel_error
    1	0	0	1.5707963267948966	2.4434609527920612	2	a4	8.7305178881487...-2.1878497048257...j	8.0000000000000...+0j	0.0913...

Reals are written with 17 significant digits (``%.17g``); complex values
as ``<re><sign><im>j`` with both parts at 17 digits.  ``rel_error`` is
``|closed - oracle| / max(1, |oracle|)``.  The two header lines are written
once, when the file is created or empty.
"""

from __future__ import annotations

import math
import os
import threading
from dataclasses import dataclass, field

HEADER = "# postselcat errata v1\n"
COLUMNS = ("alpha_abs", "delta", "omega", "theta", "phi", "gamma",
           "quantity", "paper_value", "oracle_value", "rel_error")


def format_number(value: complex | float) -> str:
    value = complex(value)
    if value.imag == 0 and not isinstance(value, bool):
        return f"{value.real:.17g}"
    return f"{value.real:.17g}{value.imag:+.17g}j"


def parse_number(text: str) -> complex | float:
    if text.endswith("j"):
        return complex(text)
    return float(text)


def scaled_error(closed: complex, oracle: complex) -> float:
    return abs(complex(closed) - complex(oracle)) / max(1.0, abs(complex(oracle)))


@dataclass(frozen=True)
class Erratum:
    alpha_abs: float
    delta: float
    omega: float
    theta: float
    phi: float
    gamma: float
    quantity: str
    paper_value: complex
    oracle_value: complex

    @property
    def rel_error(self) -> float:
        return scaled_error(self.paper_value, self.oracle_value)

    def to_line(self) -> str:
        cells = [format_number(v) for v in (self.alpha_abs, self.delta, self.omega,
                                             self.theta, self.phi, self.gamma)]
        cells += [self.quantity, format_number(self.paper_value),
                  format_number(self.oracle_value), format_number(self.rel_error)]
        return "\t".join(cells) + "\n"


@dataclass
class ErrataRegistry:
    """Collects errata in memory and, if ``path`` is set, appends them to disk.

    Writes are serialized with a lock so concurrent scans can share one
    registry.
    """

    path: str | os.PathLike | None = None
    entries: list[Erratum] = field(default_factory=list)
    _lock: threading.Lock = field(default_factory=threading.Lock, repr=False, compare=False)

    def record(self, erratum: Erratum) -> None:
        with self._lock:
            self.entries.append(erratum)
            if self.path is None:
                return
            fresh = not os.path.exists(self.path) or os.path.getsize(self.path) == 0
            with open(self.path, "a", encoding="utf-8", newline="\n") as fh:
                if fresh:
                    fh.write(HEADER)
                    fh.write("\t".join(COLUMNS) + "\n")
                fh.write(erratum.to_line())

    def check(self, cat, meas, quantity: str, closed: complex, oracle: complex, tol: float) -> bool:
        """File an erratum if ``closed`` and ``oracle`` disagree; return True on a match."""
        err = scaled_error(closed, oracle)
        if err <= tol and math.isfinite(err):
            return True
        self.record(Erratum(cat.alpha_abs, cat.delta, cat.omega, meas.theta, meas.phi, meas.gamma,
                            quantity, complex(closed), complex(oracle)))
        return False

    def __len__(self) -> int:
        return len(self.entries)


def read_errata(path: str | os.PathLike) -> list[Erratum]:
    out = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            if line.startswith("#") or line.startswith(COLUMNS[0]) or not line.strip():
                continue
            c = line.rstrip("\n").split("\t")
            nums = [float(v) for v in c[:6]]
            out.append(Erratum(*nums, c[6], complex(parse_number(c[7])), complex(parse_number(c[8]))))
    return out
