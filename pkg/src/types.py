from enum import IntEnum


class QuadratureScheme(IntEnum):
    adaptiveGauss = 1
    doubleExponential = 2


class WeightVariant(IntEnum):
    exactGammaRatio = 1
    stirlingSimplified = 2


class Sym2Variant(IntEnum):
    exactContour = 1
    asymptotic = 2


class Sign(IntEnum):
    plus = 1
    minus = -1


class WhichG(IntEnum):
    g1 = 1
    g2 = 2


class KernelShape(IntEnum):
    gaussian = 1
    phaseModulated = 2
    hPlus = 3
    hMinus = 4
    hHolo = 5


class PhaseFunction(IntEnum):
    cosh = 1
    sinh = 2
    cos = 3
    sin = 4


class WeightKind(IntEnum):
    W = 1
    V = 2


class Regime(IntEnum):
    negligible = 0
    plus = 1
    minus = 2


class OutputFormat(IntEnum):
    json = 1
    csv = 2


class CConstantForm(IntEnum):
    printed = 1
    derived = 2


class OmegaConvention(IntEnum):
    zeta1 = 1
    unit = 2


class SieveTrial(IntEnum):
    gaussian = 1
    sparse = 2
    aligned = 3
