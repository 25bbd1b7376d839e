#!/usr/bin/env python3
#
# MIT License
#
# Copyright (c) 2024 The socbound authors
#
# Permission is hereby granted, free of charge, to any person obtaining a copy
# of this software and associated documentation files (the "Software"), to deal
# in the Software without restriction, including without limitation the rights
# to use, copy, modify, merge, publish, distribute, sublicense, and/or sell
# copies of the Software, and to permit persons to whom the Software is
# furnished to do so, subject to the following conditions:
#
# The above copyright notice and this permission notice shall be included in all
# copies or substantial portions of the Software.
#
# THE SOFTWARE IS PROVIDED "AS IS", WITHOUT WARRANTY OF ANY KIND, EXPRESS OR
# IMPLIED, INCLUDING BUT NOT LIMITED TO THE WARRANTIES OF MERCHANTABILITY,
# FITNESS FOR A PARTICULAR PURPOSE AND NONINFRINGEMENT. IN NO EVENT SHALL THE
# AUTHORS OR COPYRIGHT HOLDERS BE LIABLE FOR ANY CLAIM, DAMAGES OR OTHER
# LIABILITY, WHETHER IN AN ACTION OF CONTRACT, TORT OR OTHERWISE, ARISING FROM,
# OUT OF OR IN CONNECTION WITH THE SOFTWARE OR THE USE OR OTHER DEALINGS IN THE
# SOFTWARE.
#

import math
from fractions import Fraction
from typing import Any, Union

__all__ = ["Duration", "ZERO", "PS_PER_NS"]

PS_PER_NS = 1000


class Duration:
    """
    Non-negative time interval in integer picoseconds

    Addition and scalar multiplication are exact, rational values
    are materialized with from_fraction (rounding up).
    """

    __slots__ = ("picoseconds",)

    def __init__(self, picoseconds: int = 0):
        if isinstance(picoseconds, bool) or not isinstance(picoseconds, int):
            raise TypeError(f"picoseconds must be an integer, not {type(picoseconds).__name__}")
        if picoseconds < 0:
            raise ValueError(f"negative duration: {picoseconds} ps")
        self.picoseconds = picoseconds

    @classmethod
    def from_ps(cls, picoseconds: int) -> "Duration":
        return Duration(picoseconds)

    @classmethod
    def from_ns(cls, nanoseconds: Union[int, Fraction]) -> "Duration":
        return Duration.from_fraction(Fraction(nanoseconds) * PS_PER_NS)

    @classmethod
    def from_cycles(cls, cycles: int, period: "Duration") -> "Duration":
        return Duration(cycles * period.picoseconds)

    @classmethod
    def from_fraction(cls, picoseconds: Fraction) -> "Duration":
        "Round a rational amount of picoseconds up to the next integer"
        return Duration(math.ceil(picoseconds))

    def to_ps(self) -> int:
        return self.picoseconds

    def to_ns(self) -> Fraction:
        return Fraction(self.picoseconds, PS_PER_NS)

    def cycles(self, period: "Duration") -> Fraction:
        "Length in cycles of the given clock period"
        return Fraction(self.picoseconds, period.picoseconds)

    def __add__(self, other: "Duration") -> "Duration":
        if not isinstance(other, Duration):
            return NotImplemented
        return Duration(self.picoseconds + other.picoseconds)

    def __sub__(self, other: "Duration") -> "Duration":
        if not isinstance(other, Duration):
            return NotImplemented
        return Duration(self.picoseconds - other.picoseconds)

    def __mul__(self, factor: int) -> "Duration":
        if isinstance(factor, bool) or not isinstance(factor, int):
            return NotImplemented
        return Duration(self.picoseconds * factor)

    __rmul__ = __mul__

    def __eq__(self, other: Any) -> bool:
        return other is not None and isinstance(other, self.__class__) and self.picoseconds == other.picoseconds

    def __ne__(self, other: Any) -> bool:
        return not self.__eq__(other)

    def __lt__(self, other: "Duration") -> bool:
        return self.picoseconds < other.picoseconds

    def __le__(self, other: "Duration") -> bool:
        return self.picoseconds <= other.picoseconds

    def __gt__(self, other: "Duration") -> bool:
        return self.picoseconds > other.picoseconds

    def __ge__(self, other: "Duration") -> bool:
        return self.picoseconds >= other.picoseconds

    def __hash__(self) -> int:
        return hash(self.picoseconds)

    def __bool__(self) -> bool:
        return self.picoseconds != 0

    def __repr__(self) -> str:
        return f"Duration({self.picoseconds})"

    def __str__(self) -> str:
        if self.picoseconds % PS_PER_NS == 0:
            return f"{self.picoseconds // PS_PER_NS} ns"
        return f"{self.picoseconds} ps"


ZERO = Duration(0)
