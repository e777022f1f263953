"""Closed-form main-term constants a1..a4 and c_P."""
import logging
from dataclasses import dataclass

from mpmath import mp

from src.afe.lvalues import c_constant
from src.specialfn.gamma import digamma, psi_quarter_closed
from src.specialfn.quadrature import policy_or_default
from src.specialfn.zeta import zeta, zeta_prime
from src.types import CConstantForm

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class MainTermConstants:
    a1: float
    a2: float
    a3: float
    a4: float
    c_P: float


def c_p(prec=None, closed=True):
    """ζ(3/2)(-¾ log π + γ + ψ(1/4)/4) + ½ζ'(3/2); ψ(1/4) from its closed form or from digamma"""
    prec = policy_or_default(prec)
    with mp.workprec(prec.total_bits):
        psi = psi_quarter_closed() if closed else digamma(mp.mpf(1) / 4, prec)
        z, dz = zeta(1.5, prec), zeta_prime(1.5, prec)
        return z * (-mp.mpf(3) / 4 * mp.log(mp.pi) + mp.euler + psi / 4) + dz / 2


def _bracket_a2(prec):
    with mp.workprec(prec.total_bits):
        z, dz = zeta(1.5, prec), zeta_prime(1.5, prec)
        inner = 3 * mp.euler / 4 - 3 * mp.log(mp.pi) / 4 - 3 * mp.log(2) / 4 - mp.pi / 8
        return 4 / mp.pi * (z * inner + dz / 2)


def _bracket_a4(prec):
    with mp.workprec(prec.total_bits):
        z, dz = zeta(1.5, prec), zeta_prime(1.5, prec)
        return z * (mp.pi / 2 - 3 * mp.log(2 * mp.pi) + 3 * mp.euler + 2 * dz / z + 2 * mp.log(2))


def constants(prec=None):
    """a1 = (2/π)ζ(3/2), a3 = 2ζ(3/2); a2 and a4 as the theorem brackets"""
    prec = policy_or_default(prec)
    with mp.workprec(prec.total_bits):
        z = zeta(1.5, prec)
        return MainTermConstants(
            a1=float(2 / mp.pi * z),
            a2=float(_bracket_a2(prec)),
            a3=float(2 * z),
            a4=float(_bracket_a4(prec)),
            c_P=float(c_p(prec)),
        )


def a4_rederived(c_form=CConstantForm.derived, prec=None):
    """2(ζ(3/2)(2 log 2 + C) + ζ'(3/2)), the y = 0 residue of the holomorphic diagonal per k"""
    prec = policy_or_default(prec)
    with mp.workprec(prec.total_bits):
        z, dz = zeta(1.5, prec), zeta_prime(1.5, prec)
        return float(2 * (z * (2 * mp.log(2) + c_constant(c_form)) + dz))
