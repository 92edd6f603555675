# This Source Code Form is subject to the terms of the Mozilla Public
# License, v. 2.0. If a copy of the MPL was not distributed with this
# file, You can obtain one at http://mozilla.org/MPL/2.0/.
from __future__ import annotations

from typing import Any, Optional

__version__ = '0.1.0'
__all__ = ()


class SpbwError(Exception):
    pass


class WitnessError(SpbwError):
    def __init__(self, msg: str, witness: Any = None) -> None:
        super().__init__(msg)
        self.witness = witness


class MalformedPreset(SpbwError):
    pass


class NonIrreducibleModulus(MalformedPreset):
    pass


class CardinalityOverCap(SpbwError):
    def __init__(self, msg: str, cardinality: int, cap: int) -> None:
        super().__init__(msg)
        self.cardinality = cardinality
        self.cap = cap


class MixedRings(SpbwError):
    pass


class SymbolicRingUnsupported(SpbwError):
    pass


class NotAHomomorphism(WitnessError):
    pass


class NotADerivation(WitnessError):
    pass


class GeneratorImageMissing(SpbwError):
    pass


class SymbolicNeedsSampledMode(SpbwError):
    pass


class NotAnIdeal(WitnessError):
    pass


class LawViolation(WitnessError):
    pass


class NonTerminatingRewrite(SpbwError):
    def __init__(self, msg: str, steps: int) -> None:
        super().__init__(msg)
        self.steps = steps


class MixedExtensions(SpbwError):
    pass


class HypothesisNotCertified(SpbwError):
    pass


class OracleBudgetExceeded(SpbwError):
    def __init__(self, msg: str, budget: int) -> None:
        super().__init__(msg)
        self.budget = budget


class EmptyTarget(SpbwError):
    pass


class EnumerationOverCap(SpbwError):
    pass


class HypothesisFailedRingSide(WitnessError):
    pass


class PreconditionNilpotent(SpbwError):
    pass


class DescentStuck(WitnessError):
    pass


class NotNI(WitnessError):
    pass


class ReportError(SpbwError):
    pass


class PresentationError(SpbwError):
    def __init__(
        self, msg: str, line: Optional[int] = None, col: Optional[int] = None
    ) -> None:
        if line is not None:
            msg = f'{msg} (line {line}, column {col})'
        super().__init__(msg)
        self.line = line
        self.col = col


class PresentationSyntaxError(PresentationError):
    pass


class UnresolvedName(PresentationError):
    pass


class DuplicateDeclaration(PresentationError):
    pass


class RelationNotLowerTriangular(PresentationError):
    pass
